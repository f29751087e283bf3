//! Defects, effaceable functors, the Serre subcategory `def C`, left exact
//! functors and the quotient `mod C / def C ≅ mod eAe`.

mod quotient;
mod serre;

pub use quotient::{QuotientPresentation, RightAdjoint, TheoremA};
pub use serre::ModuleUniverse;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use serde_json::{json, Value};

use crate::exactlin::{Field, Mat, Scalar};
use crate::extri::{Caps, Conflations, ETriangle, ExtriStructure};
use crate::fpmod::{cokernel, composition_factors, ext1_dim, hom_module, simple, yoneda, yoneda_morphism, FpModule};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};
use crate::Result;

/// Above this many lines in `F(X)` the element search samples instead.
pub const LINE_LIMIT: u64 = 10_000;

/// `F(f): F(Y) → F(X)` for a block morphism `f: X → Y`, with `F` on formal
/// sums taken summand-wise.
pub fn act_block(m: &FpModule, f: &BlockMorphism) -> Mat {
    let fl = m.field();
    let rows: usize = f.src.summands().iter().map(|&x| m.dim(x)).sum();
    let cols: usize = f.tgt.summands().iter().map(|&y| m.dim(y)).sum();
    let mut out = Mat::zeros(fl, rows, cols);
    let mut r0 = 0;
    for (j, &x) in f.src.summands().iter().enumerate() {
        let mut c0 = 0;
        for (i, &y) in f.tgt.summands().iter().enumerate() {
            out.set_block(r0, c0, &m.act(x, y, f.block(i, j)));
            c0 += m.dim(y);
        }
        r0 += m.dim(x);
    }
    out
}

/// The defect of a conflation: `coker((-,Y) → (-,X))`.
pub fn defect(c: &Arc<FiniteLinearCategory>, t: &ETriangle) -> FpModule {
    cokernel(&yoneda_morphism(c, &t.f), &yoneda(c, &t.x)).0
}

/// Whether all composition factors of `m` lie in `sigma`.
pub fn in_def(sigma: &[usize], m: &FpModule) -> bool {
    composition_factors(m).iter().enumerate().all(|(x, &k)| k == 0 || sigma.contains(&x))
}

#[derive(Clone, Debug, Serialize)]
pub struct Effaceability {
    pub effaceable: bool,
    pub exhaustive: bool,
    /// Per object: how every element of `F(X)` is killed.
    pub witnesses: Vec<Value>,
    /// An element surviving every enumerated deflation.
    pub obstruction: Option<Value>,
}

/// Representatives of the lines of `k^d` (first nonzero coordinate 1).
fn lines(f: Field, d: usize) -> Vec<Vec<Scalar>> {
    let els = f.elements();
    let mut out = Vec::new();
    for lead in 0..d {
        let free = d - lead - 1;
        let mut idx = vec![0usize; free];
        loop {
            let mut v = vec![Scalar::ZERO; d];
            v[lead] = f.one();
            for (k, &i) in idx.iter().enumerate() {
                v[lead + 1 + k] = els[i];
            }
            out.push(v);
            let mut k = 0;
            loop {
                if k == free {
                    break;
                }
                idx[k] += 1;
                if idx[k] < els.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == free {
                break;
            }
        }
    }
    out
}

fn line_count(f: Field, d: usize) -> Option<u64> {
    let q = f.order()?;
    let mut total = 0u64;
    let mut p = 1u64;
    for _ in 0..d {
        total = total.checked_add(p)?;
        p = p.checked_mul(q)?;
    }
    Some(total)
}

fn in_span(k: &Mat, v: &[Scalar]) -> bool {
    let f = k.field();
    let col = Mat::column(f, v);
    Mat::hstack(f, k.rows(), &[k, &col]).rank() == k.rank()
}

/// Defect and effaceability computations over one extriangulated structure.
/// Enumerated conflations are cached.
pub struct Defloc {
    ex: ExtriStructure,
    caps: Caps,
    onto: Mutex<HashMap<Vec<usize>, Arc<Conflations>>>,
}

impl Defloc {
    pub fn new(ex: &ExtriStructure, caps: Caps) -> Defloc {
        Defloc { ex: ex.clone(), caps, onto: Mutex::new(HashMap::new()) }
    }

    pub fn extri(&self) -> &ExtriStructure {
        &self.ex
    }

    pub fn cat(&self) -> &Arc<FiniteLinearCategory> {
        self.ex.cat()
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    /// Conflations ending in `x`, enumerated within caps.
    pub fn deflations(&self, x: &FormalObject) -> Result<Arc<Conflations>> {
        let key = x.sorted().0;
        if let Some(c) = self.onto.lock().expect("cache lock").get(&key) {
            return Ok(c.clone());
        }
        let c = Arc::new(self.ex.deflations_onto(&FormalObject(key.clone()), &self.caps)?);
        self.onto.lock().expect("cache lock").insert(key, c.clone());
        Ok(c)
    }

    /// Conflations ending in an indecomposable or a sum of two.
    pub fn conflations(&self) -> Result<Conflations> {
        let n = self.cat().n_objects();
        let mut triangles = Vec::new();
        let mut exhaustive = true;
        for a in 0..n {
            let c = self.deflations(&FormalObject::single(a))?;
            exhaustive &= c.exhaustive;
            triangles.extend(c.triangles.iter().cloned());
            for b in a..n {
                let c = self.deflations(&FormalObject(vec![a, b]))?;
                exhaustive &= c.exhaustive;
                triangles.extend(c.triangles.iter().cloned());
            }
        }
        Ok(Conflations { triangles, exhaustive })
    }

    /// `Σ`: objects `X` with `E(X, Z) ≠ 0` for some indecomposable `Z`.
    pub fn def_simples(&self) -> Vec<usize> {
        let n = self.cat().n_objects();
        (0..n).filter(|&x| (0..n).any(|z| self.ex.e_dim_ind(x, z) > 0)).collect()
    }

    /// Every element `x ∈ F(X)`, `X` indecomposable, is killed by some
    /// enumerated deflation onto `X`. Elements are searched up to scalars.
    pub fn is_effaceable(&self, m: &FpModule) -> Result<Effaceability> {
        let c = self.cat().clone();
        let fl = c.field();
        let mut out = Effaceability { effaceable: true, exhaustive: true, witnesses: Vec::new(), obstruction: None };
        for x in 0..c.n_objects() {
            let d = m.dim(x);
            if d == 0 {
                continue;
            }
            let confl = self.deflations(&FormalObject::single(x))?;
            out.exhaustive &= confl.exhaustive;
            let mut kernels: Vec<(usize, Mat)> = Vec::new();
            let mut uniform = None;
            for (k, t) in confl.triangles.iter().enumerate() {
                let ker = act_block(m, &t.f).kernel_basis();
                if ker.cols() == d {
                    uniform = Some(k);
                    break;
                }
                if ker.cols() > 0 && !kernels.iter().any(|(_, o)| o.rank() == ker.rank() && Mat::hstack(fl, d, &[o, &ker]).rank() == ker.rank()) {
                    kernels.push((k, ker));
                }
            }
            if let Some(k) = uniform {
                out.witnesses.push(json!({"object": c.label(x), "uniform": confl.triangles[k].to_json(&c)}));
                continue;
            }
            let candidates: Vec<Vec<Scalar>> = match line_count(fl, d) {
                Some(cnt) if cnt <= LINE_LIMIT => lines(fl, d),
                _ => {
                    out.exhaustive = false;
                    let mut v: Vec<Vec<Scalar>> = (0..d).map(|i| (0..d).map(|j| if i == j { fl.one() } else { fl.zero() }).collect()).collect();
                    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(self.caps.seed);
                    for _ in 0..self.caps.samples {
                        v.push((0..d).map(|_| fl.random(&mut rng)).collect());
                    }
                    v
                }
            };
            let mut used = Vec::new();
            for v in &candidates {
                if v.iter().all(|s| s.is_zero()) {
                    continue;
                }
                match kernels.iter().find(|(_, k)| in_span(k, v)) {
                    Some((k, _)) => {
                        if !used.contains(k) {
                            used.push(*k);
                        }
                    }
                    None => {
                        out.effaceable = false;
                        out.obstruction = Some(json!({
                            "object": c.label(x),
                            "element": v.iter().map(|s| fl.signed(*s).to_string()).collect::<Vec<_>>(),
                            "deflations_tried": confl.triangles.len(),
                        }));
                        return Ok(out);
                    }
                }
            }
            used.sort_unstable();
            out.witnesses.push(json!({
                "object": c.label(x),
                "per_element": used.iter().map(|&k| confl.triangles[k].to_json(&c)).collect::<Vec<_>>(),
            }));
        }
        Ok(out)
    }

    /// `0 → F(X) → F(Y) → F(Z)` exact on every enumerated conflation.
    pub fn is_left_exact(&self, m: &FpModule) -> Result<(bool, bool, Option<Value>)> {
        let c = self.cat();
        let confl = self.conflations()?;
        for t in &confl.triangles {
            let ff = act_block(m, &t.f);
            let fg = act_block(m, &t.g);
            let mono = ff.rank() == ff.cols();
            let exact = fg.mul(&ff).is_zero() && ff.rank() + fg.rank() == fg.cols();
            if !(mono && exact) {
                return Ok((false, confl.exhaustive, Some(json!({"mono": mono, "exact_middle": exact, "triangle": t.to_json(c)}))));
            }
        }
        Ok((true, confl.exhaustive, None))
    }

    /// `Hom(S_X, F) = 0` and `Ext¹(S_X, F) = 0` for every `X ∈ Σ`.
    pub fn perp_test(&self, sigma: &[usize], m: &FpModule) -> Result<(bool, Option<Value>)> {
        let c = self.cat();
        for &x in sigma {
            let s = simple(c, x)?;
            let h = hom_module(&s, m).len();
            let e = ext1_dim(&s, m);
            if h != 0 || e != 0 {
                return Ok((false, Some(json!({"simple": c.label(x), "hom": h, "ext1": e}))));
            }
        }
        Ok((true, None))
    }

    pub fn serre_quotient(&self, sigma: &[usize]) -> Result<QuotientPresentation> {
        QuotientPresentation::new(self.cat(), sigma)
    }

    /// Objects with `E(X, -) = 0`.
    pub fn projectives(&self) -> Vec<usize> {
        let n = self.cat().n_objects();
        (0..n).filter(|&x| (0..n).all(|z| self.ex.e_dim_ind(x, z) == 0)).collect()
    }
}
