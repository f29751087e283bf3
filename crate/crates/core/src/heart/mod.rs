//! Cotorsion pairs in triangulated backends, their hearts, reflection and
//! coreflection triangles, the cohomological functor `𝕳`, and the comparison
//! of the heart with left exact functors on `U[-1]`.

mod lexapprox;
mod presentation;
mod reflect;
mod theorem_b;

pub use lexapprox::{lemma_checks, LexApproximation, LexContext};
pub use presentation::{HeartPresentation, StableHom};
pub use reflect::{Cohomology, Heart, ReflectionData};
pub use theorem_b::{CohomologyComparison, TheoremB};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactlin::{rref_count, rref_matrices, Field, Mat, Scalar};
use crate::extri::{Caps, Cone, ExtriStructure, ShiftData, Triangulated};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};

/// Largest number of indecomposables for `enumerate_cotorsion_pairs`.
pub const PAIR_GUARD: usize = 12;

/// A pair of sets of indecomposables, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CotorsionPair {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

impl CotorsionPair {
    pub fn new(mut u: Vec<usize>, mut v: Vec<usize>) -> CotorsionPair {
        u.sort_unstable();
        u.dedup();
        v.sort_unstable();
        v.dedup();
        CotorsionPair { u, v }
    }

    pub fn from_labels(cat: &FiniteLinearCategory, u: &[String], v: &[String]) -> Result<CotorsionPair> {
        Ok(CotorsionPair::new(cat.indices_of(u)?, cat.indices_of(v)?))
    }

    /// `W = U ∩ V`.
    pub fn w(&self) -> Vec<usize> {
        self.u.iter().copied().filter(|x| self.v.contains(x)).collect()
    }

    pub fn to_json(&self, cat: &FiniteLinearCategory) -> Value {
        json!({"U": labels(cat, &self.u), "V": labels(cat, &self.v)})
    }
}

pub(crate) fn labels(cat: &FiniteLinearCategory, objs: &[usize]) -> Vec<String> {
    objs.iter().map(|&x| cat.label(x).to_string()).collect()
}

/// Which side of a hom space carries the `GL` action on repeated summands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

/// A triangle `U' → X → V'[1] → U'[1]` with `U' ∈ add U`, `V' ∈ add V`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub x: FormalObject,
    pub u: FormalObject,
    pub v: FormalObject,
    /// `U' → X`, up to sign.
    pub to_x: BlockMorphism,
    /// `X → V'[1]`.
    pub from_x: BlockMorphism,
}

impl Decomposition {
    pub fn to_json(&self, c: &FiniteLinearCategory) -> Value {
        json!({
            "object": self.x.describe(c),
            "U": self.u.describe(c),
            "V": self.v.describe(c),
            "map": self.from_x.to_json(c),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub holds: bool,
    pub exhaustive: bool,
    pub hom_witness: Option<Value>,
    pub decompositions: Vec<Value>,
    pub failure: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StarResult {
    pub objects: Vec<usize>,
    pub exhaustive: bool,
}

/// Multiplicity vectors under the bounds, ordered by total then lexicographically.
pub(crate) fn mult_vectors(bounds: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out.into_iter().flat_map(|v| (0..=b).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

pub(crate) fn cols_mat(f: Field, rows: usize, cols: &[Vec<Scalar>]) -> Mat {
    let ms: Vec<Mat> = cols.iter().map(|c| Mat::column(f, c)).collect();
    let refs: Vec<&Mat> = ms.iter().collect();
    Mat::hstack(f, rows, &refs)
}

fn from_mults(kinds: &[usize], mult: &[usize]) -> FormalObject {
    FormalObject(kinds.iter().zip(mult).flat_map(|(&k, &m)| std::iter::repeat(k).take(m)).collect())
}

/// A triangulated extriangulated structure with the search caps used for
/// cotorsion pairs and hearts.
#[derive(Clone)]
pub struct Ambient {
    ex: ExtriStructure,
    caps: Caps,
}

impl Ambient {
    pub fn new(ex: &ExtriStructure, caps: Caps) -> Result<Ambient> {
        if ex.triangulated().is_none() {
            return Err(Error::Unsupported("cotorsion pairs need a triangulated backend".into()));
        }
        Ok(Ambient { ex: ex.clone(), caps })
    }

    pub fn extri(&self) -> &ExtriStructure {
        &self.ex
    }

    pub fn cat(&self) -> &std::sync::Arc<FiniteLinearCategory> {
        self.ex.cat()
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    fn tri(&self) -> &dyn Triangulated {
        self.ex.triangulated().expect("checked in new")
    }

    pub fn shift(&self) -> &ShiftData {
        self.tri().shift()
    }

    pub fn cone(&self, f: &BlockMorphism) -> Result<Cone> {
        self.tri().cone(f)
    }

    /// Objects shifted `k` times.
    pub fn shifted(&self, objs: &[usize], k: i32) -> Vec<usize> {
        let s = self.shift();
        let mut out: Vec<usize> = objs
            .iter()
            .map(|&x| {
                let mut y = x;
                for _ in 0..k.unsigned_abs() {
                    y = if k > 0 { s.obj(y) } else { s.obj_inv(y) };
                }
                y
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// `X[-1] → Y[-1]` from `X → Y`.
    pub fn unshift_mor(&self, f: &BlockMorphism) -> BlockMorphism {
        self.shift().mor_inv(self.cat(), f)
    }

    pub fn in_add(x: &FormalObject, objs: &[usize]) -> bool {
        x.summands().iter().all(|a| objs.contains(a))
    }

    /// Flat coordinates of all composites `src → t → tgt`, `t ∈ through`, as columns.
    pub fn ideal_span(&self, src: &FormalObject, tgt: &FormalObject, through: &[usize]) -> Mat {
        let c = self.cat();
        let d = BlockMorphism::hom_dim(c, src, tgt);
        let mut cols = Vec::new();
        for &t in through {
            let to = FormalObject::single(t);
            let a = BlockMorphism::hom_basis(c, src, &to);
            let b = BlockMorphism::hom_basis(c, &to, tgt);
            for bb in &b {
                for aa in &a {
                    cols.push(BlockMorphism::compose(c, bb, aa).expect("composable").flatten());
                }
            }
        }
        cols_mat(c.field(), d, &cols)
    }

    pub fn factors_through(&self, f: &BlockMorphism, through: &[usize]) -> bool {
        let span = self.ideal_span(&f.src, &f.tgt, through);
        let v = f.flatten();
        if v.iter().all(|s| s.is_zero()) {
            return true;
        }
        let col = Mat::column(self.cat().field(), &v);
        Mat::hstack(self.cat().field(), v.len(), &[&span, &col]).rank() == span.rank()
    }

    /// Representatives of `Hom(src, tgt)` up to the scalar `GL(m)` acting on
    /// repeated summands of one side. With `full_rank`, only morphisms whose
    /// copies of each summand are linearly independent.
    pub fn morphism_reps(&self, src: &FormalObject, tgt: &FormalObject, side: Side, full_rank: bool) -> (Vec<BlockMorphism>, bool) {
        let c = self.cat();
        let fl = c.field();
        let (acted, other) = match side {
            Side::Target => (tgt, src),
            Side::Source => (src, tgt),
        };
        let hd = |k: usize, o: usize| match side {
            Side::Target => c.hom_dim(o, k),
            Side::Source => c.hom_dim(k, o),
        };
        let mut kinds: Vec<usize> = acted.summands().to_vec();
        kinds.sort_unstable();
        kinds.dedup();
        let copies: Vec<Vec<usize>> = kinds.iter().map(|&k| (0..acted.len()).filter(|&p| acted.summands()[p] == k).collect()).collect();
        let widths: Vec<usize> = kinds.iter().map(|&k| other.summands().iter().map(|&o| hd(k, o)).sum()).collect();
        let assemble = |rows: &[Mat]| -> BlockMorphism {
            let mut out = BlockMorphism::zero(c, src, tgt);
            for (ki, &k) in kinds.iter().enumerate() {
                for (r, &p) in copies[ki].iter().enumerate() {
                    let mut col = 0;
                    for (q, &o) in other.summands().iter().enumerate() {
                        let w = hd(k, o);
                        let v: Vec<Scalar> = (0..w).map(|t| rows[ki][(r, col + t)]).collect();
                        match side {
                            Side::Target => out.set_block(p, q, v),
                            Side::Source => out.set_block(q, p, v),
                        }
                        col += w;
                    }
                }
            }
            out
        };
        let count = kinds.iter().zip(&copies).zip(&widths).try_fold(1u64, |acc, ((_, cp), &w)| {
            rref_count(fl, cp.len(), w, full_rank).and_then(|n| acc.checked_mul(n))
        });
        match count {
            Some(cnt) if cnt as usize <= self.caps.enumerate => {
                let choices: Vec<Vec<Mat>> =
                    copies.iter().zip(&widths).map(|(cp, &w)| rref_matrices(fl, cp.len(), w, full_rank)).collect();
                let mut out = Vec::new();
                if choices.iter().any(|ch| ch.is_empty()) {
                    return (out, true);
                }
                let mut idx = vec![0usize; choices.len()];
                loop {
                    let rows: Vec<Mat> = idx.iter().zip(&choices).map(|(&i, ch)| ch[i].clone()).collect();
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
                let d = BlockMorphism::hom_dim(c, src, tgt);
                let mut out = vec![BlockMorphism::zero(c, src, tgt)];
                out.extend(BlockMorphism::hom_basis(c, src, tgt));
                let mut rng = ChaCha8Rng::seed_from_u64(self.caps.seed);
                for _ in 0..self.caps.samples {
                    let v: Vec<Scalar> = (0..d).map(|_| fl.random(&mut rng)).collect();
                    out.push(BlockMorphism::from_flat(c, src, tgt, &v));
                }
                (out, false)
            }
        }
    }

    /// Search a triangle `U' → X → V'[1] → U'[1]` through morphisms
    /// `X → V'[1]` with multiplicities bounded by `dim Hom(X, V_i[1])`.
    pub fn decompose_object(&self, x: &FormalObject, pair: &CotorsionPair) -> Result<(Option<Decomposition>, bool)> {
        let c = self.cat();
        let s = self.shift();
        let v1: Vec<usize> = pair.v.iter().map(|&v| s.obj(v)).collect();
        let bounds: Vec<usize> = v1.iter().map(|&t| BlockMorphism::hom_dim(c, x, &FormalObject::single(t))).collect();
        let mut exhaustive = true;
        for mult in mult_vectors(&bounds) {
            let tgt = from_mults(&v1, &mult);
            let (reps, ex) = self.morphism_reps(x, &tgt, Side::Target, true);
            exhaustive &= ex;
            for f in reps {
                let cone = self.cone(&f)?;
                let u = s.formal_inv(&cone.obj);
                if Ambient::in_add(&u, &pair.u) {
                    let to_x = self.unshift_mor(&cone.h);
                    return Ok((Some(Decomposition { x: x.clone(), u, v: s.formal_inv(&tgt), to_x, from_x: f }), exhaustive));
                }
            }
        }
        Ok((None, exhaustive))
    }

    /// `Hom(U, V[1]) = 0` and a decomposition triangle for every indecomposable.
    pub fn is_cotorsion_pair(&self, pair: &CotorsionPair) -> Result<PairCheck> {
        let c = self.cat();
        let s = self.shift();
        let mut out = PairCheck { holds: true, exhaustive: true, hom_witness: None, decompositions: Vec::new(), failure: None };
        for &u in &pair.u {
            for &v in &pair.v {
                let d = c.hom_dim(u, s.obj(v));
                if d != 0 {
                    out.holds = false;
                    out.hom_witness = Some(json!({"u": c.label(u), "v": c.label(v), "dim_hom_u_v1": d}));
                    return Ok(out);
                }
            }
        }
        for x in 0..c.n_objects() {
            let (d, ex) = self.decompose_object(&FormalObject::single(x), pair)?;
            out.exhaustive &= ex;
            match d {
                Some(d) => out.decompositions.push(d.to_json(c)),
                None => {
                    out.holds = false;
                    out.failure = Some(json!({"object": c.label(x), "note": if ex { "no decomposition triangle" } else { "no decomposition triangle within caps" }}));
                    return Ok(out);
                }
            }
        }
        Ok(out)
    }

    /// Every `U` with `V = {X : Hom(U, X[1]) = 0}`, kept when it is a cotorsion pair.
    pub fn enumerate_cotorsion_pairs(&self, guard: usize) -> Result<(Vec<CotorsionPair>, bool)> {
        let c = self.cat();
        let n = c.n_objects();
        if n > guard {
            return Err(Error::SizeGuard(format!("{n} indecomposables, guard is {guard}")));
        }
        let s = self.shift();
        let mut out: Vec<CotorsionPair> = Vec::new();
        let mut exhaustive = true;
        for mask in 0u32..(1u32 << n) {
            let u: Vec<usize> = (0..n).filter(|&x| mask & (1 << x) != 0).collect();
            let v: Vec<usize> = (0..n).filter(|&x| u.iter().all(|&a| c.hom_dim(a, s.obj(x)) == 0)).collect();
            let p = CotorsionPair::new(u, v);
            let chk = self.is_cotorsion_pair(&p)?;
            exhaustive &= chk.exhaustive;
            if chk.holds && !out.contains(&p) {
                out.push(p);
            }
        }
        out.sort();
        Ok((out, exhaustive))
    }

    /// Indecomposable summands of middle terms of triangles `A' → X → B' → A'[1]`,
    /// computed as cones of connecting morphisms `B'[-1] → A'`.
    pub fn star(&self, a: &[usize], b: &[usize]) -> Result<StarResult> {
        let s = self.shift();
        let mut found: Vec<usize> = Vec::new();
        let mut exhaustive = true;
        let cap = vec![self.caps.mult; a.len()];
        let capb = vec![self.caps.mult; b.len()];
        let bm: Vec<usize> = b.iter().map(|&x| s.obj_inv(x)).collect();
        for ma in mult_vectors(&cap) {
            let ao = from_mults(a, &ma);
            for mb in mult_vectors(&capb) {
                let bo = from_mults(&bm, &mb);
                let (reps, ex) = self.morphism_reps(&bo, &ao, Side::Target, false);
                exhaustive &= ex;
                for h in reps {
                    for &x in self.cone(&h)?.obj.summands() {
                        if !found.contains(&x) {
                            found.push(x);
                        }
                    }
                }
            }
        }
        found.sort_unstable();
        Ok(StarResult { objects: found, exhaustive })
    }
}
