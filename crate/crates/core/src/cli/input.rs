//! Input descriptors (JSON, with a TOML mirror) and loading into backends.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Scalar};
use crate::extri::{
    AbelianBackend, Backend, Caps, Cone, ExtriStructure, ModuleCategory, ShiftData, StableBackend, SubBackend, TableBackend,
};
use crate::fpmod::FpModule;
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject, Quiver};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rationals: Option<bool>,
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<Field> {
        match (self.prime, self.rationals) {
            (Some(p), None | Some(false)) => Field::prime(p),
            (None, Some(true)) => Ok(Field::Rationals),
            _ => Err(Error::Schema("field must be {\"prime\": p} or {\"rationals\": true}".into())),
        }
    }

    /// `101`, `p=101` or `Q`.
    pub fn parse(s: &str) -> Result<FieldSpec> {
        let t = s.trim().trim_start_matches("p=");
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rationals") {
            return Ok(FieldSpec { prime: None, rationals: Some(true) });
        }
        let p = t.parse::<u32>().map_err(|_| Error::Schema(format!("bad field `{s}`")))?;
        Ok(FieldSpec { prime: Some(p), rationals: None })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendTag {
    /// A bare category without extriangulated structure.
    Category,
    Abelian,
    Subcategory,
    Stable,
    Table,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    #[serde(rename = "U")]
    pub u: Vec<String>,
    #[serde(rename = "V")]
    pub v: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumerate: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Total dimension bound for module enumeration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
}

impl CapsSpec {
    /// `mult=2,enum=10000,samples=100,dim=4`.
    pub fn parse(s: &str) -> Result<CapsSpec> {
        let mut c = CapsSpec::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Schema(format!("bad caps entry `{part}`")))?;
            let v: usize = v.trim().parse().map_err(|_| Error::Schema(format!("bad caps value `{part}`")))?;
            match k.trim() {
                "mult" => c.mult = Some(v),
                "enum" | "enumerate" => c.enumerate = Some(v),
                "samples" => c.samples = Some(v),
                "dim" | "max_dim" => c.max_dim = Some(v),
                other => return Err(Error::Schema(format!("unknown cap `{other}`"))),
            }
        }
        Ok(c)
    }

    pub fn merged(&self, over: &CapsSpec) -> CapsSpec {
        CapsSpec {
            mult: over.mult.or(self.mult),
            enumerate: over.enumerate.or(self.enumerate),
            samples: over.samples.or(self.samples),
            max_dim: over.max_dim.or(self.max_dim),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDescriptor {
    pub field: FieldSpec,
    pub backend: BackendTag,
    pub payload: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapsSpec>,
}

impl InputDescriptor {
    pub fn from_json(text: &str) -> Result<InputDescriptor> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_toml(text: &str) -> Result<InputDescriptor> {
        toml::from_str(text).map_err(|e| Error::Schema(format!("toml: {e}")))
    }

    /// Parse by extension (`.toml` or JSON otherwise).
    pub fn from_text(text: &str, name: &str) -> Result<InputDescriptor> {
        if name.ends_with(".toml") {
            InputDescriptor::from_toml(text)
        } else {
            InputDescriptor::from_json(text)
        }
    }
}

/// Resolves parent references of subcategory payloads to descriptor text.
pub trait Resolver {
    fn resolve(&self, name: &str) -> Result<(String, String)>;
}

/// Resolves names relative to a directory.
pub struct DirResolver(pub PathBuf);

impl Resolver for DirResolver {
    fn resolve(&self, name: &str) -> Result<(String, String)> {
        let p = self.0.join(name);
        let text = std::fs::read_to_string(&p).map_err(|e| Error::Schema(format!("cannot read parent `{}`: {e}", p.display())))?;
        Ok((text, name.to_string()))
    }
}

// ----- payload schemas -----

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BasisSpec {
    name: String,
    src: String,
    tgt: String,
}

/// A category by structure constants. `composition` entries are
/// `[f, g, coords of g∘f]` with `f`, `g` basis names or indices.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantsSpec {
    objects: Vec<String>,
    basis: Vec<BasisSpec>,
    identity: BTreeMap<String, Vec<Value>>,
    #[serde(default)]
    composition: Vec<(Value, Value, Vec<Value>)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraSpec {
    #[serde(default)]
    quiver: Option<Quiver>,
    #[serde(default)]
    constants: Option<ConstantsSpec>,
}

/// A module: dimension per object, and matrices `F(a): F(tgt a) → F(src a)`
/// either per quiver arrow or per basis morphism.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleSpec {
    label: String,
    dims: BTreeMap<String, usize>,
    #[serde(default)]
    arrows: BTreeMap<String, Vec<Vec<Value>>>,
    #[serde(default)]
    action: BTreeMap<String, Vec<Vec<Value>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModulesPayload {
    algebra: AlgebraSpec,
    objects: Vec<ModuleSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubPayload {
    parent: Value,
    objects: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShiftSpec {
    objects: BTreeMap<String, String>,
    morphisms: BTreeMap<String, Vec<Value>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeSpec {
    object: Vec<String>,
    g: Vec<Vec<Vec<Value>>>,
    h: Vec<Vec<Vec<Value>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TablePayload {
    category: ConstantsSpec,
    shift: ShiftSpec,
    cones: BTreeMap<String, ConeSpec>,
}

// ----- scalars -----

pub fn parse_scalar(f: Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => n.as_i64().map(|i| f.from_i64(i)).ok_or_else(|| Error::Schema(format!("not an integer: {n}"))),
        Value::String(s) => {
            let s = s.trim();
            match s.split_once('/') {
                Some((a, b)) => {
                    let a: i64 = a.trim().parse().map_err(|_| Error::Schema(format!("bad scalar `{s}`")))?;
                    let b: i64 = b.trim().parse().map_err(|_| Error::Schema(format!("bad scalar `{s}`")))?;
                    f.from_frac(a, b)
                }
                None => s.parse::<i64>().map(|i| f.from_i64(i)).map_err(|_| Error::Schema(format!("bad scalar `{s}`"))),
            }
        }
        other => Err(Error::Schema(format!("bad scalar {other}"))),
    }
}

fn parse_vec(f: Field, v: &[Value]) -> Result<Vec<Scalar>> {
    v.iter().map(|x| parse_scalar(f, x)).collect()
}

fn parse_mat(f: Field, rows: usize, cols: usize, v: &[Vec<Value>], what: &str) -> Result<Mat> {
    if rows == 0 || cols == 0 {
        if v.iter().all(|r| r.is_empty()) {
            return Ok(Mat::zeros(f, rows, cols));
        }
    }
    if v.len() != rows || v.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!("{what}: expected a {rows}x{cols} matrix")));
    }
    let data = v.iter().flatten().map(|x| parse_scalar(f, x)).collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_vec(f, rows, cols, data))
}

// ----- building -----

fn index_of(labels: &[String], l: &str) -> Result<usize> {
    labels.iter().position(|x| x == l).ok_or_else(|| Error::UnknownLabel(l.to_string()))
}

fn basis_ref(names: &[String], v: &Value) -> Result<usize> {
    match v {
        Value::Number(n) => {
            let i = n.as_u64().ok_or_else(|| Error::Schema(format!("bad basis index {n}")))? as usize;
            if i < names.len() {
                Ok(i)
            } else {
                Err(Error::Schema(format!("basis index {i} out of range")))
            }
        }
        Value::String(s) => index_of(names, s),
        other => Err(Error::Schema(format!("bad basis reference {other}"))),
    }
}

fn build_constants(f: Field, spec: &ConstantsSpec) -> Result<FiniteLinearCategory> {
    let mut b = FiniteLinearCategory::builder(f, spec.objects.clone());
    let names: Vec<String> = spec.basis.iter().map(|e| e.name.clone()).collect();
    for e in &spec.basis {
        b.add_basis(index_of(&spec.objects, &e.src)?, index_of(&spec.objects, &e.tgt)?, e.name.clone());
    }
    for (l, v) in &spec.identity {
        b.set_identity(index_of(&spec.objects, l)?, parse_vec(f, v)?);
    }
    for (fv, gv, c) in &spec.composition {
        let fi = basis_ref(&names, fv)?;
        let gi = basis_ref(&names, gv)?;
        b.set_composition(gi, fi, parse_vec(f, c)?);
    }
    b.build()
}

fn build_algebra(f: Field, spec: &AlgebraSpec) -> Result<FiniteLinearCategory> {
    match (&spec.quiver, &spec.constants) {
        (Some(q), None) => q.to_category(f),
        (None, Some(c)) => build_constants(f, c),
        _ => Err(Error::Schema("algebra needs exactly one of `quiver` or `constants`".into())),
    }
}

fn build_module(alg: &Arc<FiniteLinearCategory>, spec: &ModuleSpec) -> Result<FpModule> {
    let f = alg.field();
    let mut dims = vec![0; alg.n_objects()];
    for (l, &d) in &spec.dims {
        dims[alg.index_of(l)?] = d;
    }
    let ctx = |what: &str| format!("module `{}`, {what}", spec.label);
    if !spec.arrows.is_empty() || (spec.action.is_empty() && !alg.arrows().is_empty()) {
        for k in spec.arrows.keys() {
            if !alg.arrows().contains(k) {
                return Err(Error::UnknownLabel(k.clone()));
            }
        }
        let mats = alg
            .arrows()
            .iter()
            .map(|a| {
                let id = alg.basis_index(a).ok_or_else(|| Error::UnknownLabel(a.clone()))?;
                let b = alg.basis_elem(id);
                match spec.arrows.get(a) {
                    Some(m) => parse_mat(f, dims[b.src], dims[b.tgt], m, &ctx(a)),
                    None => Ok(Mat::zeros(f, dims[b.src], dims[b.tgt])),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        return FpModule::from_arrows(alg.clone(), dims, &mats).map_err(|e| Error::Schema(ctx(&e.to_string())));
    }
    let mut action = Vec::with_capacity(alg.n_basis());
    for k in spec.action.keys() {
        if alg.basis_index(k).is_none() {
            return Err(Error::UnknownLabel(k.clone()));
        }
    }
    for id in 0..alg.n_basis() {
        let b = alg.basis_elem(id);
        action.push(match spec.action.get(&b.name) {
            Some(m) => parse_mat(f, dims[b.src], dims[b.tgt], m, &ctx(&b.name))?,
            None if b.src == b.tgt && alg.identity(b.src)[alg.position(id)] == f.one() && alg.hom_dim(b.src, b.src) == 1 => {
                Mat::identity(f, dims[b.src])
            }
            None => return Err(Error::Schema(ctx(&format!("missing action of `{}`", b.name)))),
        });
    }
    let m = FpModule::new(alg.clone(), dims, action)?;
    if let Some(w) = m.functoriality_violation() {
        return Err(Error::Schema(ctx(&format!("not a functor: {w}"))));
    }
    Ok(m)
}

fn build_modules(f: Field, payload: &Value) -> Result<ModuleCategory> {
    let p: ModulesPayload = serde_json::from_value(payload.clone()).map_err(|e| Error::Schema(format!("payload: {e}")))?;
    let alg = Arc::new(build_algebra(f, &p.algebra)?);
    let labels = p.objects.iter().map(|o| o.label.clone()).collect();
    let mods = p.objects.iter().map(|o| build_module(&alg, o)).collect::<Result<Vec<_>>>()?;
    Ok(ModuleCategory::new(alg, labels, mods, false)?)
}

fn parse_blocks(c: &FiniteLinearCategory, src: &FormalObject, tgt: &FormalObject, v: &[Vec<Vec<Value>>], what: &str) -> Result<BlockMorphism> {
    let f = c.field();
    let mut m = BlockMorphism::zero(c, src, tgt);
    if v.len() != tgt.len() || v.iter().any(|r| r.len() != src.len()) {
        return Err(Error::DimensionMismatch(format!("{what}: expected {}x{} blocks", tgt.len(), src.len())));
    }
    for (i, &y) in tgt.summands().iter().enumerate() {
        for (j, &x) in src.summands().iter().enumerate() {
            let b = parse_vec(f, &v[i][j])?;
            if b.len() != c.hom_dim(x, y) {
                return Err(Error::DimensionMismatch(format!("{what}: block ({i}, {j}) has the wrong length")));
            }
            m.set_block(i, j, b);
        }
    }
    Ok(m)
}

fn build_table(f: Field, payload: &Value) -> Result<TableBackend> {
    let p: TablePayload = serde_json::from_value(payload.clone()).map_err(|e| Error::Schema(format!("payload: {e}")))?;
    let cat = Arc::new(build_constants(f, &p.category)?);
    let n = cat.n_objects();
    let mut sigma = vec![usize::MAX; n];
    for (a, b) in &p.shift.objects {
        sigma[cat.index_of(a)?] = cat.index_of(b)?;
    }
    if let Some(x) = sigma.iter().position(|&s| s == usize::MAX) {
        return Err(Error::Schema(format!("shift of `{}` missing", cat.label(x))));
    }
    let mut cols: Vec<Option<Vec<Scalar>>> = vec![None; cat.n_basis()];
    for (name, v) in &p.shift.morphisms {
        let id = cat.basis_index(name).ok_or_else(|| Error::UnknownLabel(name.clone()))?;
        cols[id] = Some(parse_vec(f, v)?);
    }
    let mut fwd = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut m = Mat::zeros(f, cat.hom_dim(sigma[a], sigma[b]), cat.hom_dim(a, b));
            for (k, &id) in cat.hom(a, b).iter().enumerate() {
                let v = cols[id].as_ref().ok_or_else(|| Error::Schema(format!("shift of `{}` missing", cat.basis_elem(id).name)))?;
                if v.len() != m.rows() {
                    return Err(Error::DimensionMismatch(format!("shift of `{}`", cat.basis_elem(id).name)));
                }
                for (r, s) in v.iter().enumerate() {
                    m[(r, k)] = *s;
                }
            }
            fwd.push(m);
        }
    }
    let shift = ShiftData::new(&cat, sigma, fwd)?;
    for k in p.cones.keys() {
        if cat.basis_index(k).is_none() {
            return Err(Error::UnknownLabel(k.clone()));
        }
    }
    let mut cones = Vec::with_capacity(cat.n_basis());
    for id in 0..cat.n_basis() {
        let e = cat.basis_elem(id);
        let spec = p.cones.get(&e.name).ok_or_else(|| Error::MissingCone(format!("basis morphism `{}`", e.name)))?;
        let obj = FormalObject(spec.object.iter().map(|l| cat.index_of(l)).collect::<Result<_>>()?);
        let g = parse_blocks(&cat, &FormalObject::single(e.tgt), &obj, &spec.g, &format!("cone of `{}`, g", e.name))?;
        let h = parse_blocks(&cat, &obj, &FormalObject::single(shift.obj(e.src)), &spec.h, &format!("cone of `{}`, h", e.name))?;
        cones.push(Some(Cone { obj, g, h }));
    }
    TableBackend::new(cat, shift, cones)
}

/// A loaded input: the category, its extriangulated structure (absent for
/// bare categories), the selected pair, caps, and the input digest.
#[derive(Clone)]
pub struct Loaded {
    pub descriptor: InputDescriptor,
    pub name: String,
    pub field: Field,
    pub category: Arc<FiniteLinearCategory>,
    pub extri: Option<ExtriStructure>,
    pub pair: Option<(Vec<usize>, Vec<usize>)>,
    pub caps: Caps,
    pub max_dim: usize,
    pub digest: String,
}

impl Loaded {
    pub fn extri(&self) -> Result<&ExtriStructure> {
        self.extri.as_ref().ok_or_else(|| Error::Unsupported("command needs an extriangulated backend".into()))
    }
}

fn build_backend(d: &InputDescriptor, f: Field, resolver: &dyn Resolver) -> Result<(Arc<FiniteLinearCategory>, Option<Arc<dyn Backend>>)> {
    Ok(match d.backend {
        BackendTag::Category => {
            let spec: AlgebraSpec = serde_json::from_value(d.payload.clone()).map_err(|e| Error::Schema(format!("payload: {e}")))?;
            (Arc::new(build_algebra(f, &spec)?), None)
        }
        BackendTag::Abelian => {
            let b = AbelianBackend::new(build_modules(f, &d.payload)?);
            (b.cat().clone(), Some(Arc::new(b)))
        }
        BackendTag::Stable => {
            let mc = build_modules(f, &d.payload)?;
            let mc = ModuleCategory::new(mc.algebra().clone(), mc.cat().labels().to_vec(), mc.objects().to_vec(), true)?;
            let b = StableBackend::new(mc)?;
            (b.cat().clone(), Some(Arc::new(b)))
        }
        BackendTag::Table => {
            let b = build_table(f, &d.payload)?;
            (b.cat().clone(), Some(Arc::new(b)))
        }
        BackendTag::Subcategory => {
            let p: SubPayload = serde_json::from_value(d.payload.clone()).map_err(|e| Error::Schema(format!("payload: {e}")))?;
            let parent_desc = match &p.parent {
                Value::String(name) => {
                    let (text, name) = resolver.resolve(name)?;
                    InputDescriptor::from_text(&text, &name)?
                }
                v => serde_json::from_value(v.clone()).map_err(|e| Error::Schema(format!("parent: {e}")))?,
            };
            let (pc, pb) = build_backend(&parent_desc, f, resolver)?;
            let pb = pb.ok_or_else(|| Error::Schema("subcategory parent must be extriangulated".into()))?;
            let objs = pc.indices_of(&p.objects)?;
            let b = SubBackend::new(pb, objs)?;
            (b.cat().clone(), Some(Arc::new(b)))
        }
    })
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Build everything from a descriptor. `field` and `caps` override the file.
pub fn load_descriptor(
    d: InputDescriptor,
    name: &str,
    text: &str,
    resolver: &dyn Resolver,
    field: Option<&FieldSpec>,
    caps: Option<&CapsSpec>,
    seed: u64,
) -> Result<Loaded> {
    let mut d = d;
    if let Some(fs) = field {
        d.field = fs.clone();
    }
    let f = d.field.to_field()?;
    let (category, backend) = build_backend(&d, f, resolver)?;
    let cs = d.caps.clone().unwrap_or_default().merged(&caps.cloned().unwrap_or_default());
    let def = Caps::default();
    let caps = Caps {
        mult: cs.mult.unwrap_or(def.mult),
        enumerate: cs.enumerate.unwrap_or(def.enumerate),
        samples: cs.samples.unwrap_or(def.samples),
        seed,
    };
    let pair = match &d.pair {
        Some(p) => Some((category.indices_of(&p.u)?, category.indices_of(&p.v)?)),
        None => None,
    };
    Ok(Loaded {
        name: name.to_string(),
        field: f,
        category,
        extri: backend.map(ExtriStructure::new),
        pair,
        caps,
        max_dim: cs.max_dim.unwrap_or(4),
        digest: digest(text),
        descriptor: d,
    })
}

pub fn load_path(path: &Path, field: Option<&FieldSpec>, caps: Option<&CapsSpec>, seed: u64) -> Result<Loaded> {
    let text = std::fs::read_to_string(path)?;
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let d = InputDescriptor::from_text(&text, &name)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    load_descriptor(d, &name, &text, &DirResolver(dir), field, caps, seed)
}
