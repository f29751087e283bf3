//! The four backends: module categories with Ext¹, stable categories of
//! self-injective algebras, explicit triangulated tables, and full
//! extension-closed subcategories.

use std::sync::Arc;

use super::modcat::ModuleCategory;
use super::tri::{self, Cone, ConeTable, ShiftData, Triangulated};
use super::{Backend, BackendKind};
use crate::error::{Error, Result};
use crate::exactlin::{Mat, Scalar};
use crate::fpmod::{
    cokernel, direct_sum_with_maps, hom_module, kernel, yoneda, yoneda_offset, Ext1, FpModule, ModuleMap, ProjectiveCover,
};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};

fn unit(n: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::ZERO; n];
    v[k] = Scalar::ONE;
    v
}

fn columns(field: crate::exactlin::Field, rows: usize, cols: Vec<Vec<Scalar>>) -> Mat {
    let mut m = Mat::zeros(field, rows, cols.len());
    for (j, v) in cols.iter().enumerate() {
        for (i, s) in v.iter().enumerate() {
            m[(i, j)] = *s;
        }
    }
    m
}

/// `mod A` restricted to a listed set of indecomposables, with `E = Ext¹`.
pub struct AbelianBackend {
    mc: ModuleCategory,
    ext: Vec<Ext1>,
}

impl AbelianBackend {
    pub fn new(mc: ModuleCategory) -> AbelianBackend {
        let objs = mc.objects();
        let ext = objs.iter().flat_map(|a| objs.iter().map(move |b| Ext1::compute(a, b))).collect();
        AbelianBackend { mc, ext }
    }

    pub fn modules(&self) -> &ModuleCategory {
        &self.mc
    }

    fn ext(&self, x: usize, z: usize) -> &Ext1 {
        &self.ext[x * self.mc.objects().len() + z]
    }
}

impl Backend for AbelianBackend {
    fn kind(&self) -> BackendKind {
        BackendKind::Abelian
    }

    fn cat(&self) -> &Arc<FiniteLinearCategory> {
        self.mc.cat()
    }

    fn e_dim(&self, x: usize, z: usize) -> usize {
        self.ext(x, z).dim()
    }

    fn e_pull(&self, xp: usize, x: usize, z: usize, f: &[Scalar]) -> Mat {
        let xi = self.mc.map_of(xp, x, f);
        let (e, e2) = (self.ext(x, z), self.ext(xp, z));
        let cols = (0..e.dim()).map(|k| e.pullback_class(e2, &xi, &unit(e.dim(), k))).collect();
        columns(self.cat().field(), e2.dim(), cols)
    }

    fn e_push(&self, x: usize, z: usize, zp: usize, g: &[Scalar]) -> Mat {
        let zeta = self.mc.map_of(z, zp, g);
        let (e, e2) = (self.ext(x, z), self.ext(x, zp));
        let cols = (0..e.dim()).map(|k| e.pushforward_class(e2, &zeta, &unit(e.dim(), k))).collect();
        columns(self.cat().field(), e2.dim(), cols)
    }

    fn realize_nonzero(&self, x: &FormalObject, z: &FormalObject, delta: &[Scalar]) -> Result<(FormalObject, BlockMorphism, BlockMorphism)> {
        let alg = self.mc.algebra();
        let (fm, fi, _) = self.mc.formal_module(x);
        let (gm, gi, _) = self.mc.formal_module(z);
        // a projective cover of ⊕ M_{X_i} assembled from the summands' covers
        let covers: Vec<&ProjectiveCover> = x.summands().iter().map(|&a| &self.ext(a, z.summands().first().copied().unwrap_or(0)).cover).collect();
        let mut obj = FormalObject::zero();
        let mut gens = Vec::new();
        for (i, c) in covers.iter().enumerate() {
            for (&v, g) in c.obj.summands().iter().zip(&c.gens) {
                gens.push(fi[i].comps[v].mul_vec(g));
            }
            obj = obj.direct_sum(&c.obj);
        }
        let module = yoneda(alg, &obj);
        let map = crate::fpmod::yoneda_map(&obj, &fm, &gens);
        let big = Ext1::with_cover(&fm, &gm, ProjectiveCover { obj: obj.clone(), module, gens, map });
        // the cocycle Ω → ⊕ M_{Z_j} from the blocks of delta
        let mut eta = ModuleMap::zero(&big.syzygy, &gm);
        let mut k = 0;
        let mut first = 0;
        for (i, &xi) in x.summands().iter().enumerate() {
            let width = covers[i].obj.len();
            let positions: Vec<usize> = (first..first + width).collect();
            first += width;
            for (j, &zj) in z.summands().iter().enumerate() {
                let e = self.ext(xi, zj);
                let d = &delta[k..k + e.dim()];
                k += e.dim();
                if d.iter().all(|s| s.is_zero()) {
                    continue;
                }
                let r = restrict_syzygy(alg, &obj, &positions, &big, e);
                eta = eta.add(&gi[j].after(&e.cocycle(d).after(&r)));
            }
        }
        let class = big.class_of(&eta);
        let ses = big.realize(&class);
        let m = self.mc.match_module(&ses.middle)?;
        let g = self.mc.map_to_block(z, &m.obj, &m.to.after(&ses.incl))?;
        let f = self.mc.map_to_block(&m.obj, x, &ses.proj.after(&m.from))?;
        Ok((m.obj, g, f))
    }

    fn deflation_cocone(&self, f: &BlockMorphism) -> Result<Option<FormalObject>> {
        let phi = self.mc.block_to_map(f);
        if !phi.is_surjective() {
            return Ok(None);
        }
        let (src, _, _) = self.mc.formal_module(&f.src);
        Ok(Some(self.mc.match_module(&kernel(&phi, &src).0)?.obj))
    }

    fn inflation_cone(&self, g: &BlockMorphism) -> Result<Option<FormalObject>> {
        let phi = self.mc.block_to_map(g);
        if !phi.is_injective() {
            return Ok(None);
        }
        let (tgt, _, _) = self.mc.formal_module(&g.tgt);
        Ok(Some(self.mc.match_module(&cokernel(&phi, &tgt).0)?.obj))
    }

    fn modules(&self) -> Option<&ModuleCategory> {
        Some(&self.mc)
    }
}

/// The map `Ω_big → Ω_e` restricting the syzygy of a summed cover to the
/// summand occupying cover positions `positions`.
fn restrict_syzygy(alg: &Arc<FiniteLinearCategory>, obj: &FormalObject, positions: &[usize], big: &Ext1, e: &Ext1) -> ModuleMap {
    let fl = alg.field();
    let comps = (0..alg.n_objects())
        .map(|w| {
            let total: usize = obj.summands().iter().map(|&v| alg.hom_dim(w, v)).sum();
            let mut rows = Vec::new();
            for &p in positions {
                let off = yoneda_offset(alg, obj, w, p);
                rows.extend(off..off + alg.hom_dim(w, obj.summands()[p]));
            }
            let sel = Mat::identity(fl, total).select_rows(&rows);
            let r = sel.mul(&big.incl.comps[w]);
            Mat::solve_factorization(&r, &e.incl.comps[w]).unwrap().expect("summand syzygy")
        })
        .collect();
    ModuleMap { comps }
}

/// Injective envelope data for one indecomposable: `ι: X → I` into a sum of
/// projective-injectives, the cokernel `C = X[1] ⊕ (projectives)`, and the
/// identification of `C` with the listed object `X[1]`.
struct Envelope {
    inj: FpModule,
    iota: ModuleMap,
    coker: FpModule,
    q: ModuleMap,
    sec: Vec<Mat>,
    to: ModuleMap,
    from: ModuleMap,
}

/// The stable category of a self-injective algebra with `[1] = Ω⁻¹`.
pub struct StableBackend {
    mc: ModuleCategory,
    env: Vec<Envelope>,
    shift: ShiftData,
}

impl StableBackend {
    pub fn new(mc: ModuleCategory) -> Result<StableBackend> {
        let alg = mc.algebra().clone();
        let n = mc.objects().len();
        let pis: Vec<FpModule> = (0..alg.n_objects()).map(|v| yoneda(&alg, &FormalObject::single(v))).collect();
        let mut env = Vec::with_capacity(n);
        let mut sigma = Vec::with_capacity(n);
        for (x, m) in mc.objects().iter().enumerate() {
            let mut parts: Vec<&FpModule> = Vec::new();
            let mut maps: Vec<ModuleMap> = Vec::new();
            for p in &pis {
                for h in hom_module(m, p) {
                    parts.push(p);
                    maps.push(h);
                }
            }
            let (inj, incl, _) = direct_sum_with_maps(&alg, &parts);
            let mut iota = ModuleMap::zero(m, &inj);
            for (i, h) in incl.iter().zip(&maps) {
                iota = iota.add(&i.after(h));
            }
            if !iota.is_injective() {
                return Err(Error::Unsupported(format!(
                    "object `{}` does not embed into projectives; the algebra is not self-injective",
                    mc.cat().label(x)
                )));
            }
            let subs: Vec<Mat> = iota.comps.iter().map(|c| c.column_basis()).collect();
            let (coker, q, sec) = inj.quotient(&subs);
            let matched = mc.match_module(&coker)?;
            if matched.obj.len() != 1 {
                return Err(Error::InvalidCategory(format!("cosyzygy of `{}` is not a listed indecomposable", mc.cat().label(x))));
            }
            sigma.push(matched.obj.summands()[0]);
            env.push(Envelope { inj, iota, coker, q, sec, to: matched.to, from: matched.from });
        }
        let cat = mc.cat().clone();
        let mut fwd = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let cols = (0..cat.hom_dim(a, b))
                    .map(|k| {
                        let f = mc.map_of(a, b, &unit(cat.hom_dim(a, b), k));
                        let f1 = shift_map(&env[a], &env[b], &f)?;
                        mc.coords_of(sigma[a], sigma[b], &env[b].to.after(&f1.after(&env[a].from)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                fwd.push(columns(cat.field(), cat.hom_dim(sigma[a], sigma[b]), cols));
            }
        }
        let shift = ShiftData::new(&cat, sigma, fwd)?;
        Ok(StableBackend { mc, env, shift })
    }

    pub fn modules(&self) -> &ModuleCategory {
        &self.mc
    }

    /// Envelope of a formal sum, as the sum of the summands' envelopes.
    fn formal_envelope(&self, x: &FormalObject) -> (FpModule, ModuleMap, ModuleMap, FpModule) {
        let alg = self.mc.algebra();
        let (xm, _, xp) = self.mc.formal_module(x);
        let injs: Vec<&FpModule> = x.summands().iter().map(|&a| &self.env[a].inj).collect();
        let (inj, ii, ip) = direct_sum_with_maps(alg, &injs);
        let (sx, si, _) = self.mc.formal_module(&self.shift.formal(x));
        let mut iota = ModuleMap::zero(&xm, &inj);
        // I → X[1]: project to the summand, pass to its cokernel, identify
        let mut to_shift = ModuleMap::zero(&inj, &sx);
        for (k, &a) in x.summands().iter().enumerate() {
            let e = &self.env[a];
            iota = iota.add(&ii[k].after(&e.iota.after(&xp[k])));
            to_shift = to_shift.add(&si[k].after(&e.to.after(&e.q.after(&ip[k]))));
        }
        (inj, iota, to_shift, sx)
    }
}

/// `f[1]` on cokernels, from a lift `I(a) → I(b)` of `ι_b ∘ f` along `ι_a`.
fn shift_map(ea: &Envelope, eb: &Envelope, f: &ModuleMap) -> Result<ModuleMap> {
    let fl = ea.inj.field();
    let basis = hom_module(&ea.inj, &eb.inj);
    let target = eb.iota.after(f).flatten();
    let cols: Vec<Vec<Scalar>> = basis.iter().map(|b| b.after(&ea.iota).flatten()).collect();
    let sys = columns(fl, target.len(), cols);
    let c = sys.solve_vec(&target).ok_or_else(|| Error::Unsupported("map does not extend to injective envelopes".into()))?;
    let phi = crate::fpmod::combine(&ea.inj, &eb.inj, &basis, &c);
    Ok(ModuleMap {
        comps: (0..phi.comps.len()).map(|x| eb.q.comps[x].mul(&phi.comps[x]).mul(&ea.sec[x])).collect(),
    })
    .map(|m| {
        debug_assert!(m.naturality_violation(&ea.coker, &eb.coker).is_none());
        m
    })
}

impl Triangulated for StableBackend {
    fn shift(&self) -> &ShiftData {
        &self.shift
    }

    /// Pushout of `ι: X → I(X)` along `f`, reduced modulo projectives.
    fn cone(&self, f: &BlockMorphism) -> Result<Cone> {
        let phi = self.mc.block_to_map(f);
        let (ym, _, _) = self.mc.formal_module(&f.tgt);
        let (inj, iota, to_shift, sx) = self.formal_envelope(&f.src);
        let sum = ym.direct_sum(&inj);
        let rel = ModuleMap::vstack(&phi, &iota.neg());
        let subs: Vec<Mat> = rel.comps.iter().map(|m| m.column_basis()).collect();
        let (c, q, secs) = sum.quotient(&subs);
        let fl = self.mc.algebra().field();
        let n = self.mc.algebra().n_objects();
        let g_mod = ModuleMap {
            comps: (0..n)
                .map(|w| {
                    let emb = Mat::vstack(fl, ym.dim(w), &[&Mat::identity(fl, ym.dim(w)), &Mat::zeros(fl, inj.dim(w), ym.dim(w))]);
                    q.comps[w].mul(&emb)
                })
                .collect(),
        };
        let h_mod = ModuleMap {
            comps: (0..n)
                .map(|w| {
                    let pr = Mat::hstack(fl, sx.dim(w), &[&Mat::zeros(fl, sx.dim(w), ym.dim(w)), &to_shift.comps[w]]);
                    pr.mul(&secs[w])
                })
                .collect(),
        };
        let m = self.mc.match_module(&c)?;
        let g = self.mc.map_to_block(&f.tgt, &m.obj, &m.to.after(&g_mod))?;
        let h = self.mc.map_to_block(&m.obj, &self.shift.formal(&f.src), &h_mod.after(&m.from))?;
        Ok(Cone { obj: m.obj, g, h })
    }
}

impl Backend for StableBackend {
    fn kind(&self) -> BackendKind {
        BackendKind::Stable
    }

    fn cat(&self) -> &Arc<FiniteLinearCategory> {
        self.mc.cat()
    }

    fn e_dim(&self, x: usize, z: usize) -> usize {
        tri::e_dim(self.cat(), &self.shift, x, z)
    }

    fn e_pull(&self, xp: usize, x: usize, z: usize, f: &[Scalar]) -> Mat {
        tri::e_pull(self.cat(), &self.shift, xp, x, z, f)
    }

    fn e_push(&self, x: usize, z: usize, zp: usize, g: &[Scalar]) -> Mat {
        tri::e_push(self.cat(), &self.shift, x, z, zp, g)
    }

    fn realize_nonzero(&self, x: &FormalObject, z: &FormalObject, delta: &[Scalar]) -> Result<(FormalObject, BlockMorphism, BlockMorphism)> {
        tri::realize(self, self.cat(), x, z, delta)
    }

    fn deflation_cocone(&self, f: &BlockMorphism) -> Result<Option<FormalObject>> {
        Ok(Some(self.shift.formal_inv(&self.cone(f)?.obj)))
    }

    fn inflation_cone(&self, g: &BlockMorphism) -> Result<Option<FormalObject>> {
        Ok(Some(self.cone(g)?.obj))
    }

    fn triangulated(&self) -> Option<&dyn Triangulated> {
        Some(self)
    }

    fn modules(&self) -> Option<&ModuleCategory> {
        Some(&self.mc)
    }
}

/// A triangulated category given by explicit tables.
pub struct TableBackend {
    cat: Arc<FiniteLinearCategory>,
    shift: ShiftData,
    cones: ConeTable,
}

impl TableBackend {
    /// `cones[b]` is the cone of basis morphism `b`; every entry is required.
    pub fn new(cat: Arc<FiniteLinearCategory>, shift: ShiftData, cones: Vec<Option<Cone>>) -> Result<TableBackend> {
        if cones.len() != cat.n_basis() {
            return Err(Error::Schema("one cone entry per basis morphism".into()));
        }
        for (b, c) in cones.iter().enumerate() {
            let e = cat.basis_elem(b);
            let c = c.as_ref().ok_or_else(|| Error::MissingCone(format!("basis morphism `{}`", e.name)))?;
            if c.g.src != FormalObject::single(e.tgt)
                || c.g.tgt != c.obj
                || c.h.src != c.obj
                || c.h.tgt != FormalObject::single(shift.obj(e.src))
            {
                return Err(Error::MissingCone(format!("cone of `{}` has mismatched shapes", e.name)));
            }
        }
        if let Some((g, f)) = shift.functoriality_violation(&cat) {
            return Err(Error::InvalidCategory(format!(
                "shift is not a functor on `{}` after `{}`",
                cat.basis_elem(g).name,
                cat.basis_elem(f).name
            )));
        }
        Ok(TableBackend { cat, shift, cones: ConeTable { entries: cones } })
    }
}

impl Triangulated for TableBackend {
    fn shift(&self) -> &ShiftData {
        &self.shift
    }

    fn cone(&self, f: &BlockMorphism) -> Result<Cone> {
        self.cones.cone(&self.cat, &self.shift, f)
    }
}

impl Backend for TableBackend {
    fn kind(&self) -> BackendKind {
        BackendKind::Table
    }

    fn cat(&self) -> &Arc<FiniteLinearCategory> {
        &self.cat
    }

    fn e_dim(&self, x: usize, z: usize) -> usize {
        tri::e_dim(&self.cat, &self.shift, x, z)
    }

    fn e_pull(&self, xp: usize, x: usize, z: usize, f: &[Scalar]) -> Mat {
        tri::e_pull(&self.cat, &self.shift, xp, x, z, f)
    }

    fn e_push(&self, x: usize, z: usize, zp: usize, g: &[Scalar]) -> Mat {
        tri::e_push(&self.cat, &self.shift, x, z, zp, g)
    }

    fn realize_nonzero(&self, x: &FormalObject, z: &FormalObject, delta: &[Scalar]) -> Result<(FormalObject, BlockMorphism, BlockMorphism)> {
        tri::realize(self, &self.cat, x, z, delta)
    }

    fn deflation_cocone(&self, f: &BlockMorphism) -> Result<Option<FormalObject>> {
        Ok(Some(self.shift.formal_inv(&self.cone(f)?.obj)))
    }

    fn inflation_cone(&self, g: &BlockMorphism) -> Result<Option<FormalObject>> {
        Ok(Some(self.cone(g)?.obj))
    }

    fn triangulated(&self) -> Option<&dyn Triangulated> {
        Some(self)
    }
}

/// A full subcategory closed under extensions, with the restricted `E`.
pub struct SubBackend {
    parent: Arc<dyn Backend>,
    objs: Vec<usize>,
    pos: Vec<Option<usize>>,
    cat: Arc<FiniteLinearCategory>,
}

impl SubBackend {
    pub fn new(parent: Arc<dyn Backend>, objs: Vec<usize>) -> Result<SubBackend> {
        let pc = parent.cat();
        let mut pos = vec![None; pc.n_objects()];
        for (i, &o) in objs.iter().enumerate() {
            if o >= pc.n_objects() || pos[o].is_some() {
                return Err(Error::Schema("subcategory objects must be distinct parent objects".into()));
            }
            pos[o] = Some(i);
        }
        let cat = Arc::new(pc.full_subcategory(&objs)?);
        Ok(SubBackend { parent, objs, pos, cat })
    }

    pub fn parent(&self) -> &Arc<dyn Backend> {
        &self.parent
    }

    pub fn objects(&self) -> &[usize] {
        &self.objs
    }

    pub fn lift_obj(&self, x: &FormalObject) -> FormalObject {
        FormalObject(x.summands().iter().map(|&a| self.objs[a]).collect())
    }

    /// The parent object as a subcategory object, if all summands lie inside.
    pub fn lower_obj(&self, x: &FormalObject) -> Option<FormalObject> {
        x.summands().iter().map(|&a| self.pos[a]).collect::<Option<Vec<_>>>().map(FormalObject)
    }

    pub fn lift_mor(&self, f: &BlockMorphism) -> BlockMorphism {
        relabel(self.parent.cat(), f, &self.lift_obj(&f.src), &self.lift_obj(&f.tgt))
    }

    fn lower_mor(&self, f: &BlockMorphism) -> Result<BlockMorphism> {
        let src = self.lower_obj(&f.src).ok_or_else(|| Error::NotInCategory(f.src.describe(self.parent.cat())))?;
        let tgt = self.lower_obj(&f.tgt).ok_or_else(|| Error::NotInCategory(f.tgt.describe(self.parent.cat())))?;
        Ok(relabel(&self.cat, f, &src, &tgt))
    }

    fn cocone_in(&self, z: Option<FormalObject>) -> Option<FormalObject> {
        z.and_then(|z| self.lower_obj(&z))
    }
}

/// The same block coordinates over relabeled objects.
fn relabel(c: &FiniteLinearCategory, f: &BlockMorphism, src: &FormalObject, tgt: &FormalObject) -> BlockMorphism {
    let mut out = BlockMorphism::zero(c, src, tgt);
    for i in 0..tgt.len() {
        for j in 0..src.len() {
            out.set_block(i, j, f.block(i, j).to_vec());
        }
    }
    out
}

impl Backend for SubBackend {
    fn kind(&self) -> BackendKind {
        BackendKind::Subcategory
    }

    fn cat(&self) -> &Arc<FiniteLinearCategory> {
        &self.cat
    }

    fn e_dim(&self, x: usize, z: usize) -> usize {
        self.parent.e_dim(self.objs[x], self.objs[z])
    }

    fn e_pull(&self, xp: usize, x: usize, z: usize, f: &[Scalar]) -> Mat {
        self.parent.e_pull(self.objs[xp], self.objs[x], self.objs[z], f)
    }

    fn e_push(&self, x: usize, z: usize, zp: usize, g: &[Scalar]) -> Mat {
        self.parent.e_push(self.objs[x], self.objs[z], self.objs[zp], g)
    }

    fn realize_nonzero(&self, x: &FormalObject, z: &FormalObject, delta: &[Scalar]) -> Result<(FormalObject, BlockMorphism, BlockMorphism)> {
        let (y, g, f) = self.parent.realize_nonzero(&self.lift_obj(x), &self.lift_obj(z), delta)?;
        let y = self.lower_obj(&y).ok_or_else(|| {
            Error::NotInCategory(format!("middle term {} leaves the subcategory", y.describe(self.parent.cat())))
        })?;
        let g = relabel(&self.cat, &g, z, &y);
        let f = relabel(&self.cat, &f, &y, x);
        Ok((y, g, f))
    }

    fn deflation_cocone(&self, f: &BlockMorphism) -> Result<Option<FormalObject>> {
        Ok(self.cocone_in(self.parent.deflation_cocone(&self.lift_mor(f))?))
    }

    fn inflation_cone(&self, g: &BlockMorphism) -> Result<Option<FormalObject>> {
        Ok(self.cocone_in(self.parent.inflation_cone(&self.lift_mor(g))?))
    }

    fn as_sub(&self) -> Option<&SubBackend> {
        Some(self)
    }
}

impl SubBackend {
    /// Parent morphism restricted back, for callers holding parent data.
    pub fn restrict_mor(&self, f: &BlockMorphism) -> Result<BlockMorphism> {
        self.lower_mor(f)
    }
}
