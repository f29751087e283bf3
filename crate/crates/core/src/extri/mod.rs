//! Extriangulated structures on finite categories.
//!
//! `E(X, Z)` for formal sums is `⊕_{i,j} E(X_i, Z_j)` in block order with
//! `i` (the summands of `X`) outer.

mod backends;
mod modcat;
mod tri;

pub use backends::{AbelianBackend, StableBackend, SubBackend, TableBackend};
pub use modcat::{Matched, ModuleCategory};
pub use tri::{Cone, ShiftData, Triangulated};

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactlin::{rref_count, rref_matrices, Field, Mat, Scalar};
use crate::fpmod::{exact_at, yoneda, yoneda_element, yoneda_morphism, FpModule, ModuleMap};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};
use crate::report::{Check, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Abelian,
    Subcategory,
    Stable,
    Table,
}

/// What a backend supplies. `E` data is only asked for on indecomposables
/// and basis coordinates; everything else is assembled by [`ExtriStructure`].
pub trait Backend: Send + Sync {
    fn kind(&self) -> BackendKind;
    fn cat(&self) -> &Arc<FiniteLinearCategory>;
    fn e_dim(&self, x: usize, z: usize) -> usize;
    /// `f^*: E(x, z) → E(x', z)` for `f: x' → x`.
    fn e_pull(&self, xp: usize, x: usize, z: usize, f: &[Scalar]) -> Mat;
    /// `g_*: E(x, z) → E(x, z')` for `g: z → z'`.
    fn e_push(&self, x: usize, z: usize, zp: usize, g: &[Scalar]) -> Mat;
    /// A conflation `Z → Y → X` realizing a nonzero `δ`.
    fn realize_nonzero(&self, x: &FormalObject, z: &FormalObject, delta: &[Scalar]) -> Result<(FormalObject, BlockMorphism, BlockMorphism)>;
    /// `Some(Z)` iff `f: Y → X` is a deflation with cocone `Z`.
    fn deflation_cocone(&self, f: &BlockMorphism) -> Result<Option<FormalObject>>;
    /// `Some(X)` iff `g: Z → Y` is an inflation with cone `X`.
    fn inflation_cone(&self, g: &BlockMorphism) -> Result<Option<FormalObject>>;
    fn triangulated(&self) -> Option<&dyn Triangulated> {
        None
    }
    fn modules(&self) -> Option<&ModuleCategory> {
        None
    }
    fn as_sub(&self) -> Option<&SubBackend> {
        None
    }
}

/// `Z --g--> Y --f--> X` realizing `δ ∈ E(X, Z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ETriangle {
    pub z: FormalObject,
    pub y: FormalObject,
    pub x: FormalObject,
    pub g: BlockMorphism,
    pub f: BlockMorphism,
    pub delta: Vec<Scalar>,
}

impl ETriangle {
    pub fn to_json(&self, c: &FiniteLinearCategory) -> serde_json::Value {
        let fl = c.field();
        json!({
            "Z": self.z.describe(c),
            "Y": self.y.describe(c),
            "X": self.x.describe(c),
            "g": self.g.to_json(c),
            "f": self.f.to_json(c),
            "delta": self.delta.iter().map(|s| fl.signed(*s).to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Bounds for enumerations. `mult` caps each multiplicity in `Z`; `enumerate`
/// caps the number of orbit representatives tried exhaustively before
/// falling back to `samples` random points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub mult: usize,
    pub enumerate: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps { mult: 2, enumerate: 10_000, samples: 100, seed: 0 }
    }
}

/// Triangles from an enumeration, with whether the enumeration was complete
/// (up to automorphisms of the first term).
#[derive(Clone, Debug)]
pub struct Conflations {
    pub triangles: Vec<ETriangle>,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureFlags {
    pub inflations_mono: bool,
    pub deflations_epi: bool,
    pub all_morphisms_both: bool,
    pub exhaustive: bool,
    pub witnesses: Vec<serde_json::Value>,
}

/// The result of a pullback or pushout: the new triangle, the comparison
/// morphism of middle terms, and the auxiliary triangle through both.
#[derive(Clone, Debug)]
pub struct Square {
    pub triangle: ETriangle,
    pub comparison: BlockMorphism,
    pub auxiliary: ETriangle,
    pub auxiliary_report: Report,
}

#[derive(Clone)]
pub struct ExtriStructure {
    backend: Arc<dyn Backend>,
    // per basis morphism b: a → b', the matrices b^* on E(b', z) and b_* on E(x, a)
    pulls: Arc<Vec<Vec<Mat>>>,
    pushes: Arc<Vec<Vec<Mat>>>,
}

impl ExtriStructure {
    pub fn new(backend: Arc<dyn Backend>) -> ExtriStructure {
        let c = backend.cat().clone();
        let n = c.n_objects();
        let mut pulls = Vec::with_capacity(c.n_basis());
        let mut pushes = Vec::with_capacity(c.n_basis());
        for id in 0..c.n_basis() {
            let b = c.basis_elem(id);
            let coords = c.basis_coords(id);
            pulls.push((0..n).map(|z| backend.e_pull(b.src, b.tgt, z, &coords)).collect());
            pushes.push((0..n).map(|x| backend.e_push(x, b.src, b.tgt, &coords)).collect());
        }
        ExtriStructure { backend, pulls: Arc::new(pulls), pushes: Arc::new(pushes) }
    }

    pub fn backend(&self) -> &Arc<dyn Backend> {
        &self.backend
    }

    pub fn cat(&self) -> &Arc<FiniteLinearCategory> {
        self.backend.cat()
    }

    pub fn field(&self) -> Field {
        self.cat().field()
    }

    pub fn kind(&self) -> BackendKind {
        self.backend.kind()
    }

    pub fn triangulated(&self) -> Option<&dyn Triangulated> {
        self.backend.triangulated()
    }

    pub fn e_dim_ind(&self, x: usize, z: usize) -> usize {
        self.backend.e_dim(x, z)
    }

    pub fn e_dim(&self, x: &FormalObject, z: &FormalObject) -> usize {
        x.summands().iter().map(|&a| z.summands().iter().map(|&b| self.backend.e_dim(a, b)).sum::<usize>()).sum()
    }

    /// A basis of `E(X, Z)` as coordinate vectors.
    pub fn e_space(&self, x: &FormalObject, z: &FormalObject) -> Vec<Vec<Scalar>> {
        let d = self.e_dim(x, z);
        (0..d)
            .map(|k| {
                let mut v = vec![Scalar::ZERO; d];
                v[k] = Scalar::ONE;
                v
            })
            .collect()
    }

    fn pull_ind(&self, xp: usize, x: usize, z: usize, f: &[Scalar]) -> Mat {
        let c = self.cat();
        let mut m = Mat::zeros(self.field(), self.backend.e_dim(xp, z), self.backend.e_dim(x, z));
        for (&id, &s) in c.hom(xp, x).iter().zip(f) {
            if !s.is_zero() {
                m.add_scaled(&self.pulls[id][z], s);
            }
        }
        m
    }

    fn push_ind(&self, x: usize, z: usize, zp: usize, g: &[Scalar]) -> Mat {
        let c = self.cat();
        let mut m = Mat::zeros(self.field(), self.backend.e_dim(x, zp), self.backend.e_dim(x, z));
        for (&id, &s) in c.hom(z, zp).iter().zip(g) {
            if !s.is_zero() {
                m.add_scaled(&self.pushes[id][x], s);
            }
        }
        m
    }

    fn offsets(&self, x: &FormalObject, z: &FormalObject) -> Vec<Vec<usize>> {
        let mut k = 0;
        x.summands()
            .iter()
            .map(|&a| {
                z.summands()
                    .iter()
                    .map(|&b| {
                        let o = k;
                        k += self.backend.e_dim(a, b);
                        o
                    })
                    .collect()
            })
            .collect()
    }

    /// `f^*: E(X, Z) → E(X', Z)` for `f: X' → X`.
    pub fn e_pull(&self, f: &BlockMorphism, z: &FormalObject) -> Mat {
        let (xp, x) = (&f.src, &f.tgt);
        let mut m = Mat::zeros(self.field(), self.e_dim(xp, z), self.e_dim(x, z));
        let (ro, co) = (self.offsets(xp, z), self.offsets(x, z));
        for (ip, &a) in xp.summands().iter().enumerate() {
            for (i, &b) in x.summands().iter().enumerate() {
                let blk = f.block(i, ip);
                if blk.iter().all(|s| s.is_zero()) {
                    continue;
                }
                for (j, &zj) in z.summands().iter().enumerate() {
                    let p = self.pull_ind(a, b, zj, blk);
                    let mut cur = m.block(ro[ip][j], co[i][j], p.rows(), p.cols());
                    cur = cur.add(&p);
                    m.set_block(ro[ip][j], co[i][j], &cur);
                }
            }
        }
        m
    }

    /// `g_*: E(X, Z) → E(X, Z')` for `g: Z → Z'`.
    pub fn e_push(&self, g: &BlockMorphism, x: &FormalObject) -> Mat {
        let (z, zp) = (&g.src, &g.tgt);
        let mut m = Mat::zeros(self.field(), self.e_dim(x, zp), self.e_dim(x, z));
        let (ro, co) = (self.offsets(x, zp), self.offsets(x, z));
        for (i, &a) in x.summands().iter().enumerate() {
            for (jp, &b2) in zp.summands().iter().enumerate() {
                for (j, &b) in z.summands().iter().enumerate() {
                    let blk = g.block(jp, j);
                    if blk.iter().all(|s| s.is_zero()) {
                        continue;
                    }
                    let p = self.push_ind(a, b, b2, blk);
                    let mut cur = m.block(ro[i][jp], co[i][j], p.rows(), p.cols());
                    cur = cur.add(&p);
                    m.set_block(ro[i][jp], co[i][j], &cur);
                }
            }
        }
        m
    }

    pub fn split(&self, x: &FormalObject, z: &FormalObject) -> ETriangle {
        let c = self.cat();
        let y = z.direct_sum(x);
        let g = BlockMorphism::vstack(c, z, &[&BlockMorphism::identity(c, z), &BlockMorphism::zero(c, z, x)]);
        let f = BlockMorphism::hstack(c, x, &[&BlockMorphism::zero(c, z, x), &BlockMorphism::identity(c, x)]);
        ETriangle { z: z.clone(), y, x: x.clone(), g, f, delta: vec![Scalar::ZERO; self.e_dim(x, z)] }
    }

    pub fn realize(&self, x: &FormalObject, z: &FormalObject, delta: &[Scalar]) -> Result<ETriangle> {
        if delta.len() != self.e_dim(x, z) {
            return Err(Error::DimensionMismatch(format!("delta has {} coordinates, E has dimension {}", delta.len(), self.e_dim(x, z))));
        }
        if delta.iter().all(|s| s.is_zero()) {
            return Ok(self.split(x, z));
        }
        let (y, g, f) = self.backend.realize_nonzero(x, z, delta)?;
        Ok(ETriangle { z: z.clone(), y, x: x.clone(), g, f, delta: delta.to_vec() })
    }

    /// `E(-, Z)` as a module over the category.
    pub fn e_module(&self, z: &FormalObject) -> FpModule {
        let c = self.cat();
        let n = c.n_objects();
        let dims = (0..n).map(|w| self.e_dim(&FormalObject::single(w), z)).collect();
        let action = (0..c.n_basis())
            .map(|id| {
                let b = BlockMorphism::from_basis(c, id);
                self.e_pull(&b, z)
            })
            .collect();
        FpModule::new(c.clone(), dims, action).expect("E(-, Z) shapes")
    }

    /// `E(-, g): E(-, Z) → E(-, Z')`.
    pub fn e_module_map(&self, g: &BlockMorphism) -> ModuleMap {
        let n = self.cat().n_objects();
        ModuleMap { comps: (0..n).map(|w| self.e_push(g, &FormalObject::single(w))).collect() }
    }

    /// `δ_♯: Hom(-, X) → E(-, Z)`.
    pub fn delta_sharp(&self, x: &FormalObject, z: &FormalObject, delta: &[Scalar]) -> ModuleMap {
        let c = self.cat();
        let fl = self.field();
        let comps = (0..c.n_objects())
            .map(|w| {
                let d = BlockMorphism::hom_dim(c, &FormalObject::single(w), x);
                let rows = self.e_dim(&FormalObject::single(w), z);
                let mut m = Mat::zeros(fl, rows, d);
                for k in 0..d {
                    let mut v = vec![Scalar::ZERO; d];
                    v[k] = Scalar::ONE;
                    let h = yoneda_element(c, x, w, &v);
                    let col = self.e_pull(&h, z).mul_vec(delta);
                    for (r, s) in col.into_iter().enumerate() {
                        m[(r, k)] = s;
                    }
                }
                m
            })
            .collect();
        ModuleMap { comps }
    }

    /// Exactness of `(-,Z) → (-,Y) → (-,X) → E(-,Z) → E(-,Y) → E(-,X)` at
    /// the four middle terms.
    pub fn verify_long_exact(&self, t: &ETriangle) -> Report {
        let c = self.cat();
        let mut rep = Report::new();
        let shapes = t.g.src == t.z && t.g.tgt == t.y && t.f.src == t.y && t.f.tgt == t.x && t.delta.len() == self.e_dim(&t.x, &t.z);
        if !shapes {
            rep.push(Check::fail("long_exact.shapes", json!({"kind": "shape", "triangle": t.to_json(c)})));
            return rep;
        }
        let hg = yoneda_morphism(c, &t.g);
        let hf = yoneda_morphism(c, &t.f);
        let ds = self.delta_sharp(&t.x, &t.z, &t.delta);
        let eg = self.e_module_map(&t.g);
        let ef = self.e_module_map(&t.f);
        let positions = [("(-,Y)", &hg, &hf), ("(-,X)", &hf, &ds), ("E(-,Z)", &ds, &eg), ("E(-,Y)", &eg, &ef)];
        let mut failed = Vec::new();
        for (name, a, b) in positions {
            if !exact_at(a, b) {
                let at: Vec<usize> =
                    (0..c.n_objects()).filter(|&w| !exact_at(&ModuleMap { comps: vec![a.comps[w].clone()] }, &ModuleMap { comps: vec![b.comps[w].clone()] })).collect();
                failed.push(json!({"position": name, "objects": at.iter().map(|&w| c.label(w)).collect::<Vec<_>>()}));
            }
        }
        if failed.is_empty() {
            rep.push(Check::pass("long_exact").with_detail(json!({"delta_sharp_zero": ds.is_zero()})));
        } else {
            rep.push(Check::fail("long_exact", json!({"kind": "long_exact", "failures": failed, "triangle": t.to_json(c)})));
        }
        rep
    }

    /// Some `y` with `y∘a = b` and `c∘y = d` (either constraint optional).
    fn solve_comparison(
        &self,
        src: &FormalObject,
        tgt: &FormalObject,
        pre: Option<(&BlockMorphism, &BlockMorphism)>,
        post: Option<(&BlockMorphism, &BlockMorphism)>,
    ) -> Result<BlockMorphism> {
        let c = self.cat();
        let fl = self.field();
        let basis = BlockMorphism::hom_basis(c, src, tgt);
        let mut rhs = Vec::new();
        if let Some((_, b)) = pre {
            rhs.extend(b.flatten());
        }
        if let Some((_, d)) = post {
            rhs.extend(d.flatten());
        }
        let mut m = Mat::zeros(fl, rhs.len(), basis.len());
        for (k, y) in basis.iter().enumerate() {
            let mut col = Vec::new();
            if let Some((a, _)) = pre {
                col.extend(BlockMorphism::compose(c, y, a)?.flatten());
            }
            if let Some((cc, _)) = post {
                col.extend(BlockMorphism::compose(c, cc, y)?.flatten());
            }
            for (r, s) in col.into_iter().enumerate() {
                m[(r, k)] = s;
            }
        }
        let sol = m.solve_vec(&rhs).ok_or_else(|| Error::SearchExhausted("comparison morphism".into()))?;
        Ok(BlockMorphism::from_flat(c, src, tgt, &sol))
    }

    /// Realization of `x^*δ` with the square over `x: X' → X` and the
    /// triangle `E → X'⊕Y → X`.
    pub fn pullback_triangle(&self, t: &ETriangle, x: &BlockMorphism) -> Result<Square> {
        let c = self.cat();
        if x.tgt != t.x {
            return Err(Error::DimensionMismatch("pullback morphism must end at X".into()));
        }
        let d2 = self.e_pull(x, &t.z).mul_vec(&t.delta);
        let nt = self.realize(&x.src, &t.z, &d2)?;
        // y: E → Y with y∘g' = g and f∘y = x∘f'
        let xf = BlockMorphism::compose(c, x, &nt.f)?;
        let y = self.solve_comparison(&nt.y, &t.y, Some((&nt.g, &t.g)), Some((&t.f, &xf)))?;
        let mid = x.src.direct_sum(&t.y);
        let a = BlockMorphism::vstack(c, &nt.y, &[&nt.f, &y]);
        let b = BlockMorphism::hstack(c, &t.x, &[x, &t.f.neg(c)]);
        let aux_delta = self.e_push(&nt.g, &t.x).mul_vec(&t.delta);
        let aux = ETriangle { z: nt.y.clone(), y: mid, x: t.x.clone(), g: a, f: b, delta: aux_delta };
        let report = self.verify_long_exact(&aux);
        Ok(Square { triangle: nt, comparison: y, auxiliary: aux, auxiliary_report: report })
    }

    /// Realization of `z_*δ` with the square under `z: Z → Z'` and the
    /// triangle `Z → Y⊕Z' → E'`.
    pub fn pushout_triangle(&self, t: &ETriangle, z: &BlockMorphism) -> Result<Square> {
        let c = self.cat();
        if z.src != t.z {
            return Err(Error::DimensionMismatch("pushout morphism must start at Z".into()));
        }
        let d2 = self.e_push(z, &t.x).mul_vec(&t.delta);
        let nt = self.realize(&t.x, &z.tgt, &d2)?;
        // y': Y → E' with y'∘g = g'∘z and f'∘y' = f
        let gz = BlockMorphism::compose(c, &nt.g, z)?;
        let y = self.solve_comparison(&t.y, &nt.y, Some((&t.g, &gz)), Some((&nt.f, &t.f)))?;
        let mid = t.y.direct_sum(&z.tgt);
        let a = BlockMorphism::vstack(c, &t.z, &[&t.g, z]);
        let b = BlockMorphism::hstack(c, &nt.y, &[&y, &nt.g.neg(c)]);
        let aux_delta = self.e_pull(&nt.f, &t.z).mul_vec(&t.delta);
        let aux = ETriangle { z: t.z.clone(), y: mid, x: nt.y.clone(), g: a, f: b, delta: aux_delta };
        let report = self.verify_long_exact(&aux);
        Ok(Square { triangle: nt, comparison: y, auxiliary: aux, auxiliary_report: report })
    }

    /// All `Z` with multiplicities within the cap.
    pub fn z_candidates(&self, caps: &Caps) -> Vec<FormalObject> {
        let n = self.cat().n_objects();
        let mut out = Vec::new();
        let mut m = vec![0usize; n];
        loop {
            out.push(FormalObject::from_multiplicities(&m));
            let mut k = 0;
            loop {
                if k == n {
                    return out;
                }
                m[k] += 1;
                if m[k] <= caps.mult {
                    break;
                }
                m[k] = 0;
                k += 1;
            }
        }
    }

    /// Representatives of `E(X, Z)` under `Aut(Z)` acting through the
    /// scalar `GL(m)` blocks of equal summands (`Z` sorted by object).
    pub fn delta_orbits(&self, x: &FormalObject, z: &FormalObject, caps: &Caps) -> (Vec<Vec<Scalar>>, bool) {
        let fl = self.field();
        let d = self.e_dim(x, z);
        if d == 0 {
            return (vec![Vec::new()], true);
        }
        let n = self.cat().n_objects();
        let mult = z.multiplicities(n);
        let kinds: Vec<usize> = (0..n).filter(|&k| mult[k] > 0).collect();
        let widths: Vec<usize> = kinds.iter().map(|&k| x.summands().iter().map(|&a| self.backend.e_dim(a, k)).sum()).collect();
        let count = kinds.iter().zip(&widths).try_fold(1u64, |acc, (&k, &w)| {
            rref_count(fl, mult[k], w, false).and_then(|c| acc.checked_mul(c))
        });
        let offs = self.offsets(x, z);
        // position of each copy of kind k inside z
        let copies: Vec<Vec<usize>> = kinds.iter().map(|&k| (0..z.len()).filter(|&j| z.summands()[j] == k).collect()).collect();
        let assemble = |rows: &[Mat]| -> Vec<Scalar> {
            let mut v = vec![Scalar::ZERO; d];
            for (ki, &k) in kinds.iter().enumerate() {
                for (r, &j) in copies[ki].iter().enumerate() {
                    let mut col = 0;
                    for (i, &a) in x.summands().iter().enumerate() {
                        let e = self.backend.e_dim(a, k);
                        for t in 0..e {
                            v[offs[i][j] + t] = rows[ki][(r, col + t)];
                        }
                        col += e;
                    }
                }
            }
            v
        };
        match count {
            Some(cnt) if cnt as usize <= caps.enumerate && fl.is_finite() => {
                let choices: Vec<Vec<Mat>> = kinds.iter().zip(&widths).map(|(&k, &w)| rref_matrices(fl, mult[k], w, false)).collect();
                let mut out = Vec::new();
                let mut idx = vec![0usize; choices.len()];
                loop {
                    let rows: Vec<Mat> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
                    out.push(assemble(&rows));
                    let mut k = 0;
                    loop {
                        if k == idx.len() {
                            return (out, true);
                        }
                        idx[k] += 1;
                        if idx[k] < choices[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                }
            }
            _ => {
                let mut out = self.e_space(x, z);
                out.insert(0, vec![Scalar::ZERO; d]);
                let mut rng = ChaCha8Rng::seed_from_u64(caps.seed);
                for _ in 0..caps.samples {
                    out.push((0..d).map(|_| fl.random(&mut rng)).collect());
                }
                (out, false)
            }
        }
    }

    /// Conflations `Z → Y → X` for every `Z` within caps and every `δ` up to
    /// `Aut(Z)`.
    pub fn deflations_onto(&self, x: &FormalObject, caps: &Caps) -> Result<Conflations> {
        let mut triangles = Vec::new();
        let mut exhaustive = true;
        for z in self.z_candidates(caps) {
            let (deltas, ex) = self.delta_orbits(x, &z, caps);
            exhaustive &= ex;
            for d in deltas {
                triangles.push(self.realize(x, &z, &d)?);
            }
        }
        Ok(Conflations { triangles, exhaustive })
    }

    /// Whether `f: Y → X` is an epimorphism: `Hom(f, W)` injective for all `W`.
    pub fn is_epi(&self, f: &BlockMorphism) -> bool {
        let c = self.cat();
        (0..c.n_objects()).all(|w| {
            let wo = FormalObject::single(w);
            let basis = BlockMorphism::hom_basis(c, &f.tgt, &wo);
            let rows = BlockMorphism::hom_dim(c, &f.src, &wo);
            let mut m = Mat::zeros(c.field(), rows, basis.len());
            for (k, h) in basis.iter().enumerate() {
                for (r, s) in BlockMorphism::compose(c, h, f).expect("composable").flatten().into_iter().enumerate() {
                    m[(r, k)] = s;
                }
            }
            m.rank() == basis.len()
        })
    }

    pub fn is_mono(&self, g: &BlockMorphism) -> bool {
        yoneda_morphism(self.cat(), g).is_injective()
    }

    /// Structural flags: inflations mono, deflations epi (over enumerated
    /// conflations onto indecomposables), and whether every basis morphism
    /// and every zero map `0 → X`, `X → 0` is both an inflation and a deflation.
    pub fn classify_structure(&self, caps: &Caps) -> Result<StructureFlags> {
        let c = self.cat();
        let mut flags = StructureFlags { inflations_mono: true, deflations_epi: true, all_morphisms_both: true, exhaustive: true, witnesses: Vec::new() };
        for x in 0..c.n_objects() {
            let confl = self.deflations_onto(&FormalObject::single(x), caps)?;
            flags.exhaustive &= confl.exhaustive;
            for t in &confl.triangles {
                if flags.inflations_mono && !self.is_mono(&t.g) {
                    flags.inflations_mono = false;
                    flags.witnesses.push(json!({"kind": "inflation_not_mono", "triangle": t.to_json(c)}));
                }
                if flags.deflations_epi && !self.is_epi(&t.f) {
                    flags.deflations_epi = false;
                    flags.witnesses.push(json!({"kind": "deflation_not_epi", "triangle": t.to_json(c)}));
                }
            }
        }
        let zero = FormalObject::zero();
        let mut candidates: Vec<(String, BlockMorphism)> =
            (0..c.n_basis()).map(|id| (c.basis_elem(id).name.clone(), BlockMorphism::from_basis(c, id))).collect();
        for x in 0..c.n_objects() {
            let xo = FormalObject::single(x);
            candidates.push((format!("0->{}", c.label(x)), BlockMorphism::zero(c, &zero, &xo)));
            candidates.push((format!("{}->0", c.label(x)), BlockMorphism::zero(c, &xo, &zero)));
        }
        for (name, m) in candidates {
            let defl = self.backend.deflation_cocone(&m)?.is_some();
            let infl = self.backend.inflation_cone(&m)?.is_some();
            if !(defl && infl) {
                flags.all_morphisms_both = false;
                flags.witnesses.push(json!({"kind": "not_inflation_and_deflation", "morphism": name, "deflation": defl, "inflation": infl}));
                break;
            }
        }
        Ok(flags)
    }

    /// Spot checks of biadditivity and additivity of the realization.
    pub fn check_additivity(&self, caps: &Caps) -> Result<Report> {
        let c = self.cat();
        let n = c.n_objects();
        let mut rep = Report::new();
        let mut bad = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for z in 0..n {
                    let xs = FormalObject(vec![a, b]);
                    let zo = FormalObject::single(z);
                    if self.e_dim(&xs, &zo) != self.e_dim_ind(a, z) + self.e_dim_ind(b, z) {
                        bad.push(json!([c.label(a), c.label(b), c.label(z)]));
                    }
                }
            }
        }
        rep.push(if bad.is_empty() { Check::pass("biadditivity") } else { Check::fail("biadditivity", json!({"kind": "biadditivity", "triples": bad})) });
        // realize(δ ⊕ δ') against realize(δ) ⊕ realize(δ')
        let mut rng = ChaCha8Rng::seed_from_u64(caps.seed);
        let fl = self.field();
        let mut failures = Vec::new();
        for x in 0..n {
            for z in 0..n {
                let d = self.e_dim_ind(x, z);
                if d == 0 {
                    continue;
                }
                for x2 in 0..n {
                    for z2 in 0..n {
                        let d2 = self.e_dim_ind(x2, z2);
                        let v1: Vec<Scalar> = (0..d).map(|_| fl.random(&mut rng)).collect();
                        let v2: Vec<Scalar> = (0..d2).map(|_| fl.random(&mut rng)).collect();
                        let t1 = self.realize(&FormalObject::single(x), &FormalObject::single(z), &v1)?;
                        let t2 = self.realize(&FormalObject::single(x2), &FormalObject::single(z2), &v2)?;
                        let xs = FormalObject(vec![x, x2]);
                        let zs = FormalObject(vec![z, z2]);
                        let mut sum = vec![Scalar::ZERO; self.e_dim(&xs, &zs)];
                        let offs = self.offsets(&xs, &zs);
                        sum[offs[0][0]..offs[0][0] + d].copy_from_slice(&v1);
                        sum[offs[1][1]..offs[1][1] + d2].copy_from_slice(&v2);
                        let t = self.realize(&xs, &zs, &sum)?;
                        if t.y.sorted() != t1.y.direct_sum(&t2.y).sorted() {
                            failures.push(json!({"x": [c.label(x), c.label(x2)], "z": [c.label(z), c.label(z2)], "middle": t.y.describe(c)}));
                        }
                    }
                }
            }
        }
        rep.push(if failures.is_empty() {
            Check::pass("realization_additive")
        } else {
            Check::fail("realization_additive", json!({"kind": "additivity", "cases": failures}))
        });
        Ok(rep)
    }

    /// Hom(-, X) for convenience.
    pub fn representable(&self, x: &FormalObject) -> FpModule {
        yoneda(self.cat(), x)
    }
}
