use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Scalar};
use crate::kcat::FiniteLinearCategory;

/// A contravariant functor `C → vect`, stored by its values and the action
/// `F(b): F(Y) → F(X)` of every basis morphism `b: X → Y`.
#[derive(Clone, Debug)]
pub struct FpModule {
    cat: Arc<FiniteLinearCategory>,
    dims: Vec<usize>,
    action: Vec<Mat>,
}

/// Natural transformation, one matrix `F(X) → G(X)` per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub comps: Vec<Mat>,
}

impl FpModule {
    pub fn new(cat: Arc<FiniteLinearCategory>, dims: Vec<usize>, action: Vec<Mat>) -> Result<FpModule> {
        if dims.len() != cat.n_objects() || action.len() != cat.n_basis() {
            return Err(Error::DimensionMismatch("module data does not match the category".into()));
        }
        for (id, m) in action.iter().enumerate() {
            let b = cat.basis_elem(id);
            if m.rows() != dims[b.src] || m.cols() != dims[b.tgt] {
                return Err(Error::DimensionMismatch(format!(
                    "action of `{}` is {}x{}, expected {}x{}",
                    b.name,
                    m.rows(),
                    m.cols(),
                    dims[b.src],
                    dims[b.tgt]
                )));
            }
        }
        Ok(FpModule { cat, dims, action })
    }

    /// Construct from one matrix per arrow of a quiver-presented category.
    /// `arrow_mats[a]` is `F(a): F(tgt a) → F(src a)`.
    pub fn from_arrows(cat: Arc<FiniteLinearCategory>, dims: Vec<usize>, arrow_mats: &[Mat]) -> Result<FpModule> {
        let f = cat.field();
        let mut action = Vec::with_capacity(cat.n_basis());
        for id in 0..cat.n_basis() {
            let b = cat.basis_elem(id);
            let word = b
                .word
                .as_ref()
                .ok_or_else(|| Error::Schema("arrow matrices need a quiver-presented category".into()))?;
            // path a1 ... ak acts as F(a1) F(a2) ... F(ak)
            let mut m = Mat::identity(f, dims[b.src]);
            for &a in word {
                let am = arrow_mats.get(a).ok_or_else(|| Error::Schema(format!("missing matrix for arrow {a}")))?;
                m = m.try_mul(am)?;
            }
            if m.rows() != dims[b.src] || m.cols() != dims[b.tgt] {
                return Err(Error::DimensionMismatch(format!("arrow matrices do not fit at `{}`", b.name)));
            }
            action.push(m);
        }
        let out = FpModule::new(cat, dims, action)?;
        if let Some(w) = out.functoriality_violation() {
            return Err(Error::Schema(format!("arrow matrices violate the relations: {w}")));
        }
        Ok(out)
    }

    pub fn zero(cat: Arc<FiniteLinearCategory>) -> FpModule {
        let dims = vec![0; cat.n_objects()];
        let f = cat.field();
        let action = (0..cat.n_basis()).map(|_| Mat::zeros(f, 0, 0)).collect();
        FpModule { cat, dims, action }
    }

    pub fn cat(&self) -> &Arc<FiniteLinearCategory> {
        &self.cat
    }

    pub fn field(&self) -> Field {
        self.cat.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn action(&self, id: usize) -> &Mat {
        &self.action[id]
    }

    /// `F(f)` for `f ∈ Hom(x, y)` given in coordinates.
    pub fn act(&self, x: usize, y: usize, coords: &[Scalar]) -> Mat {
        let mut m = Mat::zeros(self.field(), self.dims[x], self.dims[y]);
        for (&id, &c) in self.cat.hom(x, y).iter().zip(coords) {
            if !c.is_zero() {
                m.add_scaled(&self.action[id], c);
            }
        }
        m
    }

    /// First violation of `F(g∘f) = F(f)F(g)` or `F(id) = id`, if any.
    pub fn functoriality_violation(&self) -> Option<String> {
        let c = &self.cat;
        for x in 0..c.n_objects() {
            if !self.act(x, x, c.identity(x)).is_identity() {
                return Some(format!("F(id_{}) is not the identity", c.label(x)));
            }
        }
        for g in 0..c.n_basis() {
            for f in 0..c.n_basis() {
                let Some(gf) = c.compose_basis(g, f) else { continue };
                let (x, z) = (c.basis_elem(f).src, c.basis_elem(g).tgt);
                let lhs = self.act(x, z, gf);
                let rhs = self.action[f].mul(&self.action[g]);
                if lhs != rhs {
                    return Some(format!("F({} ∘ {})", c.basis_elem(g).name, c.basis_elem(f).name));
                }
            }
        }
        None
    }

    pub fn direct_sum(&self, other: &FpModule) -> FpModule {
        let f = self.field();
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let action = self.action.iter().zip(&other.action).map(|(a, b)| Mat::block_diag(f, &[a, b])).collect();
        FpModule { cat: self.cat.clone(), dims, action }
    }

    pub fn direct_sum_all(cat: &Arc<FiniteLinearCategory>, parts: &[&FpModule]) -> FpModule {
        parts.iter().fold(FpModule::zero(cat.clone()), |acc, p| acc.direct_sum(p))
    }

    /// Submodule spanned by `subs[x]` (columns, assumed independent and
    /// closed under the action), with its inclusion.
    pub fn submodule(&self, subs: &[Mat]) -> Result<(FpModule, ModuleMap)> {
        let c = &self.cat;
        let dims: Vec<usize> = subs.iter().map(|m| m.cols()).collect();
        let mut action = Vec::with_capacity(c.n_basis());
        for id in 0..c.n_basis() {
            let b = c.basis_elem(id);
            let img = self.action[id].mul(&subs[b.tgt]);
            let m = Mat::solve_factorization(&img, &subs[b.src])?
                .ok_or_else(|| Error::DimensionMismatch("subspace family is not a submodule".into()))?;
            action.push(m);
        }
        let sub = FpModule { cat: c.clone(), dims, action };
        Ok((sub, ModuleMap { comps: subs.to_vec() }))
    }

    /// Quotient by the submodule spanned by `subs[x]` (independent columns),
    /// with the projection and a pointwise linear section.
    pub fn quotient(&self, subs: &[Mat]) -> (FpModule, ModuleMap, Vec<Mat>) {
        let c = &self.cat;
        let mut projs = Vec::new();
        let mut secs = Vec::new();
        for s in subs {
            let (p, sec) = s.quotient_map();
            projs.push(p);
            secs.push(sec);
        }
        let dims = projs.iter().map(|p| p.rows()).collect();
        let action = (0..c.n_basis())
            .map(|id| {
                let b = c.basis_elem(id);
                projs[b.src].mul(&self.action[id]).mul(&secs[b.tgt])
            })
            .collect();
        (FpModule { cat: c.clone(), dims, action }, ModuleMap { comps: projs }, secs)
    }

    /// Smallest submodule containing the given vectors (`gens[x]` columns in `F(x)`).
    pub fn generated_by(&self, gens: &[Mat]) -> Vec<Mat> {
        let c = &self.cat;
        let f = self.field();
        let mut out = Vec::new();
        for x in 0..c.n_objects() {
            let mut cols: Vec<&Mat> = Vec::new();
            let mut imgs = Vec::new();
            for y in 0..c.n_objects() {
                if gens[y].cols() == 0 {
                    continue;
                }
                for &id in c.hom(x, y) {
                    imgs.push(self.action[id].mul(&gens[y]));
                }
            }
            for m in &imgs {
                cols.push(m);
            }
            let all = Mat::hstack(f, self.dims[x], &cols);
            out.push(all.column_basis());
        }
        out
    }

    /// Restriction to a full subcategory `sub` on objects `objs` of this category.
    pub fn restrict(&self, sub: &Arc<FiniteLinearCategory>, objs: &[usize]) -> FpModule {
        let dims = objs.iter().map(|&o| self.dims[o]).collect();
        let mut action = vec![Mat::zeros(self.field(), 0, 0); sub.n_basis()];
        for (i, &x) in objs.iter().enumerate() {
            for (j, &y) in objs.iter().enumerate() {
                for (&nid, &id) in sub.hom(i, j).iter().zip(self.cat.hom(x, y)) {
                    action[nid] = self.action[id].clone();
                }
            }
        }
        FpModule { cat: sub.clone(), dims, action }
    }

    pub fn dims_json(&self) -> serde_json::Value {
        let c = &self.cat;
        json!((0..c.n_objects()).map(|x| (c.label(x).to_string(), self.dims[x])).collect::<std::collections::BTreeMap<_, _>>())
    }

    /// Everything as JSON (dims plus action matrices), for witnesses.
    pub fn to_json(&self) -> serde_json::Value {
        let f = self.field();
        let acts: Vec<serde_json::Value> = (0..self.cat.n_basis())
            .map(|id| {
                let m = &self.action[id];
                json!({
                    "morphism": self.cat.basis_elem(id).name,
                    "matrix": (0..m.rows()).map(|r| m.row(r).iter().map(|s| f.signed(*s).to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "dims": self.dims, "action": acts })
    }
}

impl ModuleMap {
    pub fn zero(src: &FpModule, tgt: &FpModule) -> ModuleMap {
        let f = src.field();
        ModuleMap { comps: src.dims.iter().zip(&tgt.dims).map(|(&a, &b)| Mat::zeros(f, b, a)).collect() }
    }

    pub fn identity(m: &FpModule) -> ModuleMap {
        let f = m.field();
        ModuleMap { comps: m.dims.iter().map(|&d| Mat::identity(f, d)).collect() }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ModuleMap) -> ModuleMap {
        ModuleMap { comps: self.comps.iter().zip(&first.comps).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, s: Scalar) -> ModuleMap {
        ModuleMap { comps: self.comps.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap { comps: self.comps.iter().map(|a| a.neg()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|m| m.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.comps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(|m| m.is_invertible())
    }

    pub fn flatten(&self) -> Vec<Scalar> {
        self.comps.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    pub fn from_flat(src: &FpModule, tgt: &FpModule, v: &[Scalar]) -> ModuleMap {
        let f = src.field();
        let mut k = 0;
        let mut comps = Vec::new();
        for (&a, &b) in src.dims.iter().zip(&tgt.dims) {
            comps.push(Mat::from_vec(f, b, a, v[k..k + a * b].to_vec()));
            k += a * b;
        }
        ModuleMap { comps }
    }

    /// First basis morphism whose naturality square fails.
    pub fn naturality_violation(&self, src: &FpModule, tgt: &FpModule) -> Option<usize> {
        let c = src.cat();
        (0..c.n_basis()).find(|&id| {
            let b = c.basis_elem(id);
            self.comps[b.src].mul(src.action(id)) != tgt.action(id).mul(&self.comps[b.tgt])
        })
    }

    /// Block column `[a; b]: F → G ⊕ H`.
    pub fn vstack(a: &ModuleMap, b: &ModuleMap) -> ModuleMap {
        let comps = a
            .comps
            .iter()
            .zip(&b.comps)
            .map(|(x, y)| Mat::vstack(x.field(), x.cols(), &[x, y]))
            .collect();
        ModuleMap { comps }
    }

    /// Block row `[a b]: F ⊕ G → H`.
    pub fn hstack(a: &ModuleMap, b: &ModuleMap) -> ModuleMap {
        let comps = a
            .comps
            .iter()
            .zip(&b.comps)
            .map(|(x, y)| Mat::hstack(x.field(), x.rows(), &[x, y]))
            .collect();
        ModuleMap { comps }
    }

    pub fn direct_sum(a: &ModuleMap, b: &ModuleMap) -> ModuleMap {
        let comps = a.comps.iter().zip(&b.comps).map(|(x, y)| Mat::block_diag(x.field(), &[x, y])).collect();
        ModuleMap { comps }
    }

    pub fn restrict(&self, objs: &[usize]) -> ModuleMap {
        ModuleMap { comps: objs.iter().map(|&o| self.comps[o].clone()).collect() }
    }
}

/// Pointwise kernel with its inclusion.
pub fn kernel(alpha: &ModuleMap, src: &FpModule) -> (FpModule, ModuleMap) {
    let subs: Vec<Mat> = alpha.comps.iter().map(|m| m.kernel_basis()).collect();
    src.submodule(&subs).expect("kernel is a submodule")
}

/// Pointwise image as a submodule of the target, with the inclusion and the
/// corestriction `src → image`.
pub fn image(alpha: &ModuleMap, tgt: &FpModule) -> (FpModule, ModuleMap, ModuleMap) {
    let subs: Vec<Mat> = alpha.comps.iter().map(|m| m.column_basis()).collect();
    let (im, incl) = tgt.submodule(&subs).expect("image is a submodule");
    let coim = ModuleMap {
        comps: alpha
            .comps
            .iter()
            .zip(&subs)
            .map(|(a, s)| Mat::solve_factorization(a, s).unwrap().expect("in image"))
            .collect(),
    };
    (im, incl, coim)
}

/// Pointwise cokernel with the projection.
pub fn cokernel(alpha: &ModuleMap, tgt: &FpModule) -> (FpModule, ModuleMap) {
    let subs: Vec<Mat> = alpha.comps.iter().map(|m| m.column_basis()).collect();
    let (q, p, _) = tgt.quotient(&subs);
    (q, p)
}

/// Exactness of `A --a--> B --b--> C` at `B`, pointwise.
pub fn exact_at(a: &ModuleMap, b: &ModuleMap) -> bool {
    a.comps.iter().zip(&b.comps).all(|(x, y)| {
        let n = y.cols();
        y.mul(x).is_zero() && x.rank() == n - y.rank()
    })
}
