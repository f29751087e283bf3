use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use super::{mult_vectors, Ambient, CotorsionPair, HeartPresentation, Side};
use crate::error::{Error, Result};
use crate::exactlin::Mat;
use crate::extri::{Caps, ExtriStructure};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};
use crate::report::Check;

/// A reflection triangle `U'[-1] → X → X⁺ → U'` (with `alpha: X → X⁺`) or a
/// coreflection triangle `V' → X⁻ → X → V'[1]` (with `alpha: X⁻ → X`).
#[derive(Clone, Debug)]
pub struct ReflectionData {
    pub x: FormalObject,
    pub target: FormalObject,
    pub alpha: BlockMorphism,
    /// `U'` for a reflection, `V'[1]` for a coreflection.
    pub third: FormalObject,
    /// `U'[-1] → X`, respectively `X → V'[1]`; factors through `add U`,
    /// respectively `add V`.
    pub connecting: BlockMorphism,
    pub exhaustive: bool,
    /// Composition with `alpha` is bijective on `[W]`-stable homs.
    pub adjunction: Check,
}

impl ReflectionData {
    pub fn to_json(&self, c: &FiniteLinearCategory) -> Value {
        json!({
            "object": self.x.describe(c),
            "target": self.target.describe(c),
            "alpha": self.alpha.to_json(c),
            "third": self.third.describe(c),
            "connecting": self.connecting.to_json(c),
            "exhaustive": self.exhaustive,
            "adjunction": self.adjunction,
        })
    }
}

/// `𝕳(X) = (X⁺)⁻` with `alpha_plus: X → X⁺` and `alpha_minus: X^± → X⁺`.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub x: FormalObject,
    pub plus: FormalObject,
    pub alpha_plus: BlockMorphism,
    pub pm: FormalObject,
    pub alpha_minus: BlockMorphism,
    /// Summands of `X^±` that survive in the heart, as indices into its objects.
    pub object: Vec<usize>,
    /// Whether every summand of `X^±` lies in `H`.
    pub in_heart: bool,
}

/// A cotorsion pair with its heart, and cached (co)reflections of
/// indecomposables.
pub struct Heart {
    amb: Ambient,
    pres: HeartPresentation,
    refl: Mutex<HashMap<usize, Arc<ReflectionData>>>,
    corefl: Mutex<HashMap<usize, Arc<ReflectionData>>>,
}

impl Heart {
    pub fn new(ex: &ExtriStructure, pair: &CotorsionPair, caps: Caps) -> Result<Heart> {
        let amb = Ambient::new(ex, caps)?;
        let chk = amb.is_cotorsion_pair(pair)?;
        if !chk.holds {
            let w = chk.hom_witness.or(chk.failure).unwrap_or(Value::Null);
            return Err(Error::InvalidCategory(format!("not a cotorsion pair: {w}")));
        }
        let pres = amb.heart_presentation(pair)?;
        Ok(Heart::from_parts(amb, pres))
    }

    /// A heart over a presentation supplied by the caller, unchecked.
    pub fn from_parts(amb: Ambient, pres: HeartPresentation) -> Heart {
        Heart { amb, pres, refl: Mutex::new(HashMap::new()), corefl: Mutex::new(HashMap::new()) }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.amb
    }

    pub fn presentation(&self) -> &HeartPresentation {
        &self.pres
    }

    pub fn pair(&self) -> &CotorsionPair {
        &self.pres.pair
    }

    pub fn cat(&self) -> &Arc<FiniteLinearCategory> {
        self.amb.cat()
    }

    fn first<F>(&self, candidates: &[usize], bound: F, mut accept: impl FnMut(&FormalObject) -> Result<Option<(BlockMorphism, FormalObject, BlockMorphism)>>, what: &str, x: usize) -> Result<(FormalObject, BlockMorphism, FormalObject, BlockMorphism)>
    where
        F: Fn(usize) -> usize,
    {
        let bounds: Vec<usize> = candidates.iter().map(|&h| bound(h)).collect();
        for mult in mult_vectors(&bounds) {
            let t = FormalObject(candidates.iter().zip(&mult).flat_map(|(&h, &m)| std::iter::repeat(h).take(m)).collect());
            if let Some((alpha, third, conn)) = accept(&t)? {
                return Ok((t, alpha, third, conn));
            }
        }
        Err(Error::SearchExhausted(format!("{what} of {}", self.cat().label(x))))
    }

    /// `X → X⁺` with `X⁺ ∈ T⁺` and cone in `add U` whose connecting map
    /// `U'[-1] → X` factors through `add U`.
    pub fn reflection(&self, x: usize) -> Result<Arc<ReflectionData>> {
        if let Some(r) = self.refl.lock().expect("cache lock").get(&x) {
            return Ok(r.clone());
        }
        let c = self.cat().clone();
        let u = &self.pres.pair.u;
        let xo = FormalObject::single(x);
        let mut exhaustive = true;
        let found = if self.pres.t_plus.contains(&x) {
            (xo.clone(), BlockMorphism::identity(&c, &xo), FormalObject::zero(), BlockMorphism::zero(&c, &FormalObject::zero(), &xo))
        } else {
            self.first(
                &self.pres.t_plus,
                |h| c.hom_dim(x, h),
                |t| {
                    let (reps, ex) = self.amb.morphism_reps(&xo, t, Side::Target, true);
                    exhaustive &= ex;
                    for alpha in reps {
                        let cone = self.amb.cone(&alpha)?;
                        if !Ambient::in_add(&cone.obj, u) {
                            continue;
                        }
                        let conn = self.amb.unshift_mor(&cone.h);
                        if self.amb.factors_through(&conn, u) {
                            return Ok(Some((alpha, cone.obj, conn)));
                        }
                    }
                    Ok(None)
                },
                "reflection",
                x,
            )?
        };
        let (target, alpha, third, connecting) = found;
        let adjunction = self.adjunction_plus(&alpha);
        let r = Arc::new(ReflectionData { x: xo, target, alpha, third, connecting, exhaustive, adjunction });
        self.refl.lock().expect("cache lock").insert(x, r.clone());
        Ok(r)
    }

    /// `X⁻ → X` with `X⁻ ∈ T⁻` and cone in `add V[1]` such that `X → V'[1]`
    /// factors through `add V`.
    pub fn coreflection(&self, x: usize) -> Result<Arc<ReflectionData>> {
        if let Some(r) = self.corefl.lock().expect("cache lock").get(&x) {
            return Ok(r.clone());
        }
        let c = self.cat().clone();
        let v = &self.pres.pair.v;
        let v1 = &self.pres.v_shift;
        let xo = FormalObject::single(x);
        let mut exhaustive = true;
        let found = if self.pres.t_minus.contains(&x) {
            (xo.clone(), BlockMorphism::identity(&c, &xo), FormalObject::zero(), BlockMorphism::zero(&c, &xo, &FormalObject::zero()))
        } else {
            self.first(
                &self.pres.t_minus,
                |h| c.hom_dim(h, x),
                |t| {
                    let (reps, ex) = self.amb.morphism_reps(t, &xo, Side::Source, true);
                    exhaustive &= ex;
                    for alpha in reps {
                        let cone = self.amb.cone(&alpha)?;
                        if !Ambient::in_add(&cone.obj, v1) {
                            continue;
                        }
                        if self.amb.factors_through(&cone.g, v) {
                            return Ok(Some((alpha, cone.obj, cone.g)));
                        }
                    }
                    Ok(None)
                },
                "coreflection",
                x,
            )?
        };
        let (target, alpha, third, connecting) = found;
        let adjunction = self.adjunction_minus(&alpha);
        let r = Arc::new(ReflectionData { x: xo, target, alpha, third, connecting, exhaustive, adjunction });
        self.corefl.lock().expect("cache lock").insert(x, r.clone());
        Ok(r)
    }

    fn bijection(&self, name: &str, h: usize, src: &super::StableHom, tgt: &super::StableHom, image: impl Fn(&BlockMorphism) -> BlockMorphism) -> Option<Value> {
        let c = self.cat();
        let cols: Vec<Vec<_>> = src.reps.iter().map(|r| tgt.coords(&image(r))).collect();
        let m = super::cols_mat(c.field(), tgt.dim(), &cols);
        if src.dim() == tgt.dim() && m.rank() == tgt.dim() {
            None
        } else {
            Some(json!({"kind": name, "test_object": c.label(h), "source_dim": src.dim(), "target_dim": tgt.dim(), "rank": m.rank()}))
        }
    }

    fn adjunction_plus(&self, alpha: &BlockMorphism) -> Check {
        let c = self.cat();
        let w = &self.pres.w;
        for &h in &self.pres.t_plus {
            let ho = FormalObject::single(h);
            let src = self.amb.stable_hom(&alpha.tgt, &ho, w);
            let tgt = self.amb.stable_hom(&alpha.src, &ho, w);
            if let Some(wit) = self.bijection("reflection_adjunction", h, &src, &tgt, |r| BlockMorphism::compose(c, r, alpha).expect("composable")) {
                return Check::fail("reflection.adjunction", wit);
            }
        }
        Check::pass("reflection.adjunction")
    }

    fn adjunction_minus(&self, alpha: &BlockMorphism) -> Check {
        let c = self.cat();
        let w = &self.pres.w;
        for &h in &self.pres.t_minus {
            let ho = FormalObject::single(h);
            let src = self.amb.stable_hom(&ho, &alpha.src, w);
            let tgt = self.amb.stable_hom(&ho, &alpha.tgt, w);
            if let Some(wit) = self.bijection("coreflection_adjunction", h, &src, &tgt, |r| BlockMorphism::compose(c, alpha, r).expect("composable")) {
                return Check::fail("coreflection.adjunction", wit);
            }
        }
        Check::pass("coreflection.adjunction")
    }

    /// Summand-wise reflection of a formal sum: `(X⁺, X → X⁺)`.
    pub fn plus(&self, x: &FormalObject) -> Result<(FormalObject, BlockMorphism)> {
        let c = self.cat();
        let mut alpha = BlockMorphism::zero(c, &FormalObject::zero(), &FormalObject::zero());
        for &s in x.summands() {
            alpha = BlockMorphism::direct_sum(c, &alpha, &self.reflection(s)?.alpha);
        }
        Ok((alpha.tgt.clone(), alpha))
    }

    /// Summand-wise coreflection of a formal sum: `(X⁻, X⁻ → X)`.
    pub fn minus(&self, x: &FormalObject) -> Result<(FormalObject, BlockMorphism)> {
        let c = self.cat();
        let mut alpha = BlockMorphism::zero(c, &FormalObject::zero(), &FormalObject::zero());
        for &s in x.summands() {
            alpha = BlockMorphism::direct_sum(c, &alpha, &self.coreflection(s)?.alpha);
        }
        Ok((alpha.src.clone(), alpha))
    }

    /// `𝕳(X) = τ⁻τ⁺(X)`.
    pub fn cohomology(&self, x: &FormalObject) -> Result<Cohomology> {
        let (plus, alpha_plus) = self.plus(x)?;
        let (pm, alpha_minus) = self.minus(&plus)?;
        let in_heart = pm.summands().iter().all(|s| self.pres.h.contains(s));
        let mut object: Vec<usize> = pm.summands().iter().filter_map(|&s| self.pres.index(s)).collect();
        object.sort_unstable();
        Ok(Cohomology { x: x.clone(), plus, alpha_plus, pm, alpha_minus, object, in_heart })
    }

    /// `y` in `Hom(src, tgt)` with `image(y) ≡ rhs` modulo `[W]`.
    fn solve_mod_w(&self, src: &FormalObject, tgt: &FormalObject, image: impl Fn(&BlockMorphism) -> BlockMorphism, rhs: &BlockMorphism) -> Option<BlockMorphism> {
        let c = self.cat();
        let fl = c.field();
        let basis = BlockMorphism::hom_basis(c, src, tgt);
        let rows = BlockMorphism::hom_dim(c, &rhs.src, &rhs.tgt);
        let cols: Vec<Vec<_>> = basis.iter().map(|b| image(b).flatten()).collect();
        let a = super::cols_mat(fl, rows, &cols);
        let span = self.amb.ideal_span(&rhs.src, &rhs.tgt, &self.pres.w);
        let m = Mat::hstack(fl, rows, &[&a, &span]);
        let z = m.solve_vec(&rhs.flatten())?;
        Some(BlockMorphism::from_flat(c, src, tgt, &z[..basis.len()]))
    }

    /// `𝕳(f): X₁^± → X₂^±` through the universal properties of the
    /// reflections and coreflections, defined modulo `[W]`.
    pub fn cohomology_mor(&self, f: &BlockMorphism, h1: &Cohomology, h2: &Cohomology) -> Result<BlockMorphism> {
        let c = self.cat().clone();
        let rhs = BlockMorphism::compose(&c, &h2.alpha_plus, f)?;
        let fp = self
            .solve_mod_w(&h1.plus, &h2.plus, |y| BlockMorphism::compose(&c, y, &h1.alpha_plus).expect("composable"), &rhs)
            .ok_or_else(|| Error::InvalidCategory("morphism does not extend along the reflection".into()))?;
        let rhs = BlockMorphism::compose(&c, &fp, &h1.alpha_minus)?;
        self.solve_mod_w(&h1.pm, &h2.pm, |y| BlockMorphism::compose(&c, &h2.alpha_minus, y).expect("composable"), &rhs)
            .ok_or_else(|| Error::InvalidCategory("morphism does not lift along the coreflection".into()))
    }
}
