//! A finite list of modules viewed as a category: homs are module maps,
//! optionally taken modulo maps that factor through a projective.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{Mat, Scalar};
use crate::fpmod::{
    combine, coords_in, decompose, direct_sum_with_maps, hom_module, is_projective, iso_indecomposable, projective_cover,
    FpModule, ModuleMap,
};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};

pub struct ModuleCategory {
    alg: Arc<FiniteLinearCategory>,
    objects: Vec<FpModule>,
    cat: Arc<FiniteLinearCategory>,
    stable: bool,
    // per pair (a * n + b): representatives of the category basis, the full
    // module hom basis, and the reduction from full coordinates
    reps: Vec<Vec<ModuleMap>>,
    full: Vec<Vec<ModuleMap>>,
    reduce: Vec<Mat>,
}

/// A module identified with a formal sum of the listed objects. For stable
/// categories `to` and `from` are mutually inverse only modulo projectives.
#[derive(Clone, Debug)]
pub struct Matched {
    pub obj: FormalObject,
    pub to: ModuleMap,
    pub from: ModuleMap,
}

impl ModuleCategory {
    pub fn new(alg: Arc<FiniteLinearCategory>, labels: Vec<String>, objects: Vec<FpModule>, stable: bool) -> Result<ModuleCategory> {
        let n = objects.len();
        if labels.len() != n {
            return Err(Error::Schema("one label per object module".into()));
        }
        let fl = alg.field();
        for (l, m) in labels.iter().zip(&objects) {
            if m.is_zero() {
                return Err(Error::InvalidCategory(format!("object `{l}` is the zero module")));
            }
            if stable && is_projective(m) {
                return Err(Error::InvalidCategory(format!("object `{l}` is projective, hence zero in the stable category")));
            }
        }
        let mut reps = Vec::with_capacity(n * n);
        let mut full = Vec::with_capacity(n * n);
        let mut reduce = Vec::with_capacity(n * n);
        for a in &objects {
            for b in &objects {
                let hb = hom_module(a, b);
                if stable {
                    let cov = projective_cover(b);
                    let through: Vec<Vec<Scalar>> = hom_module(a, &cov.module)
                        .iter()
                        .map(|m| coords_in(&hb, &cov.map.after(m)).expect("composite is a module map"))
                        .collect();
                    let mut pm = Mat::zeros(fl, hb.len(), through.len());
                    for (j, v) in through.iter().enumerate() {
                        for (i, s) in v.iter().enumerate() {
                            pm[(i, j)] = *s;
                        }
                    }
                    let (proj, section) = pm.column_basis().quotient_map();
                    let r = (0..section.cols()).map(|j| combine(a, b, &hb, &section.col(j))).collect();
                    reps.push(r);
                    reduce.push(proj);
                } else {
                    reduce.push(Mat::identity(fl, hb.len()));
                    reps.push(hb.clone());
                }
                full.push(hb);
            }
        }
        let coords = |a: usize, b: usize, m: &ModuleMap| reduce_coords(&full[a * n + b], &reduce[a * n + b], m, a, b);
        let mut b = FiniteLinearCategory::builder(fl, labels.clone());
        let mut ids = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let v: Vec<usize> = (0..reps[x * n + y].len())
                    .map(|k| b.add_basis(x, y, format!("{}>{}#{}", labels[x], labels[y], k)))
                    .collect();
                ids.push(v);
            }
        }
        for x in 0..n {
            b.set_identity(x, coords(x, x, &ModuleMap::identity(&objects[x]))?);
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for (kf, &f) in ids[x * n + y].iter().enumerate() {
                        for (kg, &g) in ids[y * n + z].iter().enumerate() {
                            let comp = reps[y * n + z][kg].after(&reps[x * n + y][kf]);
                            b.set_composition(g, f, coords(x, z, &comp)?);
                        }
                    }
                }
            }
        }
        let cat = Arc::new(b.build()?);
        Ok(ModuleCategory { alg, objects, cat, stable, reps, full, reduce })
    }

    pub fn algebra(&self) -> &Arc<FiniteLinearCategory> {
        &self.alg
    }

    pub fn cat(&self) -> &Arc<FiniteLinearCategory> {
        &self.cat
    }

    pub fn objects(&self) -> &[FpModule] {
        &self.objects
    }

    pub fn is_stable(&self) -> bool {
        self.stable
    }

    fn n(&self) -> usize {
        self.objects.len()
    }

    /// Category coordinates of a module map `M_a → M_b`.
    pub fn coords_of(&self, a: usize, b: usize, m: &ModuleMap) -> Result<Vec<Scalar>> {
        let k = a * self.n() + b;
        reduce_coords(&self.full[k], &self.reduce[k], m, a, b)
    }

    /// A module map representing category coordinates.
    pub fn map_of(&self, a: usize, b: usize, coords: &[Scalar]) -> ModuleMap {
        combine(&self.objects[a], &self.objects[b], &self.reps[a * self.n() + b], coords)
    }

    /// `⊕ M_{X_i}` with inclusions and projections.
    pub fn formal_module(&self, x: &FormalObject) -> (FpModule, Vec<ModuleMap>, Vec<ModuleMap>) {
        let parts: Vec<&FpModule> = x.summands().iter().map(|&i| &self.objects[i]).collect();
        direct_sum_with_maps(&self.alg, &parts)
    }

    pub fn block_to_map(&self, f: &BlockMorphism) -> ModuleMap {
        let (sm, _, sp) = self.formal_module(&f.src);
        let (tm, ti, _) = self.formal_module(&f.tgt);
        let mut out = ModuleMap::zero(&sm, &tm);
        for (i, &y) in f.tgt.summands().iter().enumerate() {
            for (j, &x) in f.src.summands().iter().enumerate() {
                let b = f.block(i, j);
                if b.iter().all(|s| s.is_zero()) {
                    continue;
                }
                out = out.add(&ti[i].after(&self.map_of(x, y, b).after(&sp[j])));
            }
        }
        out
    }

    pub fn map_to_block(&self, src: &FormalObject, tgt: &FormalObject, m: &ModuleMap) -> Result<BlockMorphism> {
        let (_, si, _) = self.formal_module(src);
        let (_, _, tp) = self.formal_module(tgt);
        let mut out = BlockMorphism::zero(&self.cat, src, tgt);
        for (i, &y) in tgt.summands().iter().enumerate() {
            for (j, &x) in src.summands().iter().enumerate() {
                out.set_block(i, j, self.coords_of(x, y, &tp[i].after(&m.after(&si[j])))?);
            }
        }
        Ok(out)
    }

    /// Decompose `m` and identify each summand with a listed object. In the
    /// stable case projective summands are dropped.
    pub fn match_module(&self, m: &FpModule) -> Result<Matched> {
        let mut obj = Vec::new();
        let mut found = Vec::new();
        for s in decompose(m)? {
            if self.stable && is_projective(&s.module) {
                continue;
            }
            let hit = self.objects.iter().enumerate().find_map(|(k, o)| iso_indecomposable(&s.module, o).map(|phi| (k, phi)));
            let (k, phi) = hit.ok_or_else(|| {
                Error::NotInCategory(format!("indecomposable summand with dimension vector {:?}", s.module.dims()))
            })?;
            obj.push(k);
            found.push((s, phi));
        }
        let obj = FormalObject(obj);
        let (sum, incl, proj) = self.formal_module(&obj);
        let mut to = ModuleMap::zero(m, &sum);
        let mut from = ModuleMap::zero(&sum, m);
        for (k, (s, phi)) in found.iter().enumerate() {
            let inv = ModuleMap { comps: phi.comps.iter().map(|c| c.inverse().expect("isomorphism")).collect() };
            to = to.add(&incl[k].after(&phi.after(&s.proj)));
            from = from.add(&s.incl.after(&inv.after(&proj[k])));
        }
        Ok(Matched { obj, to, from })
    }
}

fn reduce_coords(full: &[ModuleMap], reduce: &Mat, m: &ModuleMap, a: usize, b: usize) -> Result<Vec<Scalar>> {
    let c = coords_in(full, m).ok_or_else(|| Error::DimensionMismatch(format!("not a module map between objects {a} and {b}")))?;
    Ok(reduce.mul_vec(&c))
}
