use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{Ambient, Heart};
use crate::defloc::{in_def, Defloc};
use crate::error::{Error, Result};
use crate::exactlin::{Mat, Scalar};
use crate::extri::{Caps, ExtriStructure, SubBackend};
use crate::fpmod::{cokernel, exact_at, image, kernel, projective_cover, yoneda, yoneda_element, yoneda_morphism, yoneda_offset, FpModule, ModuleMap};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};
use crate::report::{Check, Report};

/// Where the approximated functors live: `mod U` for the first half of a
/// cotorsion pair, or `mod C` for an abelian backend `C`.
pub struct LexContext<'a> {
    heart: Option<&'a Heart>,
    ambient: ExtriStructure,
    objs: Vec<usize>,
    defloc: Defloc,
}

/// `S --φ--> F --ψ--> G` with `S ∈ def U` and `G ∈ (def U)^⊥`.
#[derive(Clone, Debug)]
pub struct LexApproximation {
    /// `f: U₁ → U₀` presenting `F`, in the ambient category.
    pub presentation: BlockMorphism,
    pub f: FpModule,
    pub s: FpModule,
    pub phi: ModuleMap,
    pub g: FpModule,
    pub psi: ModuleMap,
    /// The object `C` with `g: C → U₀` and the object `D` with `G = (-, D)|_U`.
    pub middle: FormalObject,
    pub represent: FormalObject,
    pub report: Report,
}

fn lift(c: &FiniteLinearCategory, objs: &[usize], f: &BlockMorphism) -> BlockMorphism {
    let up = |x: &FormalObject| FormalObject(x.summands().iter().map(|&a| objs[a]).collect());
    let mut out = BlockMorphism::zero(c, &up(&f.src), &up(&f.tgt));
    for i in 0..f.tgt.len() {
        for j in 0..f.src.len() {
            out.set_block(i, j, f.block(i, j).to_vec());
        }
    }
    out
}

/// A right inverse of a surjective matrix.
fn section(q: &Mat) -> Mat {
    Mat::solve_factorization(&Mat::identity(q.field(), q.rows()), q).expect("shapes").expect("surjective")
}

impl<'a> LexContext<'a> {
    pub fn cotorsion(heart: &'a Heart) -> Result<LexContext<'a>> {
        let ambient = heart.ambient().extri().clone();
        let objs = heart.pair().u.clone();
        let sub = SubBackend::new(ambient.backend().clone(), objs.clone())?;
        let ex = ExtriStructure::new(Arc::new(sub));
        let defloc = Defloc::new(&ex, *heart.ambient().caps());
        Ok(LexContext { heart: Some(heart), ambient, objs, defloc })
    }

    pub fn abelian(ex: &ExtriStructure, caps: Caps) -> Result<LexContext<'a>> {
        if ex.backend().modules().map_or(true, |m| m.is_stable()) {
            return Err(Error::Unsupported("the abelian route needs an abelian module backend".into()));
        }
        let objs = (0..ex.cat().n_objects()).collect();
        Ok(LexContext { heart: None, ambient: ex.clone(), objs, defloc: Defloc::new(ex, caps) })
    }

    /// The category `U` whose modules are approximated.
    pub fn cat(&self) -> &Arc<FiniteLinearCategory> {
        self.defloc.cat()
    }

    pub fn defloc(&self) -> &Defloc {
        &self.defloc
    }

    fn restricted(&self, x: &FormalObject) -> FpModule {
        yoneda(self.ambient.cat(), x).restrict(self.cat(), &self.objs)
    }

    fn restricted_map(&self, f: &BlockMorphism) -> ModuleMap {
        yoneda_morphism(self.ambient.cat(), f).restrict(&self.objs)
    }

    /// A projective presentation `(-, U₁) → (-, U₀) → F → 0` as a morphism
    /// `U₁ → U₀` of `U`, with the cover `(-, U₀) → F`.
    fn presentation(&self, m: &FpModule) -> (BlockMorphism, ModuleMap) {
        let uc = self.cat();
        let p0 = projective_cover(m);
        let (k0, incl) = kernel(&p0.map, &p0.module);
        let p1 = projective_cover(&k0);
        let pmap = incl.after(&p1.map);
        let mut parts = Vec::new();
        for (i, &u) in p1.obj.summands().iter().enumerate() {
            let mut v = vec![Scalar::ZERO; p1.module.dim(u)];
            let off = yoneda_offset(uc, &p1.obj, u, i);
            for (t, s) in uc.identity(u).iter().enumerate() {
                v[off + t] = *s;
            }
            parts.push(yoneda_element(uc, &p0.obj, u, &pmap.comps[u].mul_vec(&v)));
        }
        let refs: Vec<&BlockMorphism> = parts.iter().collect();
        let f = if refs.is_empty() { BlockMorphism::zero(uc, &FormalObject::zero(), &p0.obj) } else { BlockMorphism::hstack(uc, &p0.obj, &refs) };
        (f, p0.map)
    }

    pub fn approximate(&self, m: &FpModule) -> Result<LexApproximation> {
        let ac = self.ambient.cat().clone();
        let (fu, q_f) = self.presentation(m);
        let f = lift(&ac, &self.objs, &fu);
        let mut rep = Report::new();
        let (c, gu, g, d, g2) = match self.heart {
            Some(h) => self.triangulated_route(h, &f, &mut rep)?,
            None => self.abelian_route(&f)?,
        };

        let yf = self.restricted_map(&f);
        rep.push(Check::from_witness(
            "lex_approx.presentation",
            (!exact_at(&yf, &q_f) || !q_f.is_surjective()).then(|| json!({"kind": "presentation_not_exact"})),
        ));

        let yc = self.restricted(&c);
        let ygu = self.restricted_map(&gu);
        let (s, q_s) = cokernel(&ygu, &yc);
        let to_f = q_f.after(&self.restricted_map(&g));
        rep.push(Check::from_witness("lex_approx.phi_well_defined", (!to_f.after(&ygu).is_zero()).then(|| json!({"kind": "g_does_not_kill_U1"}))));
        let phi = ModuleMap { comps: to_f.comps.iter().zip(&q_s.comps).map(|(a, q)| a.mul(&section(q))).collect() };

        let gm = self.restricted(&d);
        let yg2 = self.restricted_map(&g2);
        rep.push(Check::from_witness("lex_approx.psi_well_defined", (!yg2.after(&yf).is_zero()).then(|| json!({"kind": "U0_to_D_does_not_kill_U1"}))));
        let psi = ModuleMap { comps: yg2.comps.iter().zip(&q_f.comps).map(|(a, q)| a.mul(&section(q))).collect() };

        let nat = phi.naturality_violation(&s, m).map(|b| ("phi", b)).or_else(|| psi.naturality_violation(m, &gm).map(|b| ("psi", b)));
        rep.push(Check::from_witness("lex_approx.natural", nat.map(|(w, b)| json!({"kind": "not_natural", "map": w, "basis": b}))));

        let sigma = self.defloc.def_simples();
        let eff = self.defloc.is_effaceable(&s)?;
        rep.push(
            Check::from_witness(
                "lex_approx.s_in_def",
                (!(in_def(&sigma, &s) && eff.effaceable)).then(|| json!({"kind": "s_not_in_def", "s": s.to_json(), "obstruction": eff.obstruction})),
            )
            .with_exhaustive(eff.exhaustive),
        );
        let (perp, pw) = self.defloc.perp_test(&sigma, &gm)?;
        rep.push(Check::from_witness("lex_approx.g_perp", (!perp).then(|| json!({"kind": "g_not_perp", "g": gm.to_json(), "witness": pw}))));
        rep.push(Check::from_witness("lex_approx.exact", (!exact_at(&phi, &psi)).then(|| json!({"kind": "image_ne_kernel"}))));

        Ok(LexApproximation { presentation: f, f: m.clone(), s, phi, g: gm, psi, middle: c, represent: d, report: rep })
    }

    /// Triangle `K → U₁ → U₀`, decomposition `U₂ → K → V₂[1]`, triangle
    /// `U₂ → U₁ → C`, and `g: C → U₀` through `U₁ → C` whose cone is in `add V[2]`.
    #[allow(clippy::type_complexity)]
    fn triangulated_route(
        &self,
        h: &Heart,
        f: &BlockMorphism,
        rep: &mut Report,
    ) -> Result<(FormalObject, BlockMorphism, BlockMorphism, FormalObject, BlockMorphism)> {
        let amb = h.ambient();
        let c = amb.cat().clone();
        let fl = c.field();
        let cone0 = amb.cone(f)?;
        let k_obj = amb.shift().formal_inv(&cone0.obj);
        let k = amb.unshift_mor(&cone0.h);
        let (dec, _) = amb.decompose_object(&k_obj, h.pair())?;
        let dec = dec.ok_or_else(|| Error::SearchExhausted(format!("cotorsion decomposition of {}", k_obj.describe(&c))))?;
        let u = BlockMorphism::compose(&c, &k, &dec.to_x)?;
        let cu = amb.cone(&u)?;
        let (cobj, gu) = (cu.obj.clone(), cu.g.clone());

        let basis = BlockMorphism::hom_basis(&c, &cobj, &f.tgt);
        let rows = BlockMorphism::hom_dim(&c, &f.src, &f.tgt);
        let cols: Vec<Vec<Scalar>> = basis.iter().map(|b| BlockMorphism::compose(&c, b, &gu).expect("composable").flatten()).collect();
        let a = super::cols_mat(fl, rows, &cols);
        let part = a.solve_vec(&f.flatten()).ok_or_else(|| Error::InvalidCategory("U₀ ← U₁ does not factor through C".into()))?;
        let ker = a.kernel_basis();
        let v2 = amb.shifted(&h.pair().v, 2);
        let mut candidates = vec![part.clone()];
        let all = fl.order().and_then(|q| q.checked_pow(ker.cols() as u32)).filter(|&n| n as usize <= amb.caps().enumerate);
        let mut exhaustive = true;
        match all {
            Some(n) => {
                let els = fl.elements();
                for idx in 1..n {
                    let mut v = part.clone();
                    let mut r = idx;
                    for j in 0..ker.cols() {
                        let s = els[(r % els.len() as u64) as usize];
                        r /= els.len() as u64;
                        for (t, kv) in ker.col(j).iter().enumerate() {
                            v[t] = fl.add(v[t], fl.mul(s, *kv));
                        }
                    }
                    candidates.push(v);
                }
            }
            None => {
                exhaustive = false;
                let mut rng = ChaCha8Rng::seed_from_u64(amb.caps().seed);
                for _ in 0..amb.caps().samples {
                    let mut v = part.clone();
                    for j in 0..ker.cols() {
                        let s = fl.random(&mut rng);
                        for (t, kv) in ker.col(j).iter().enumerate() {
                            v[t] = fl.add(v[t], fl.mul(s, *kv));
                        }
                    }
                    candidates.push(v);
                }
            }
        }
        for z in candidates {
            let mut g = BlockMorphism::zero(&c, &cobj, &f.tgt);
            for (b, s) in basis.iter().zip(&z) {
                g = g.add(&c, &b.scale(&c, *s));
            }
            let cg = amb.cone(&g)?;
            if Ambient::in_add(&cg.obj, &v2) {
                rep.push(
                    Check::pass("lex_approx.g_in_v2")
                        .with_detail(json!({
                            "K": k_obj.describe(&c),
                            "U2": dec.u.describe(&c),
                            "V2": dec.v.describe(&c),
                            "C": cobj.describe(&c),
                            "D": cg.obj.describe(&c),
                        }))
                        .with_exhaustive(exhaustive),
                );
                return Ok((cobj, gu, g, cg.obj, cg.g));
            }
        }
        Err(Error::SearchExhausted("C → U₀ with cone in add V[2]".into()))
    }

    /// `C = Im f`, `D = Coker f`.
    #[allow(clippy::type_complexity)]
    fn abelian_route(&self, f: &BlockMorphism) -> Result<(FormalObject, BlockMorphism, BlockMorphism, FormalObject, BlockMorphism)> {
        let mc = self.ambient.backend().modules().expect("checked in abelian");
        let (u0, _, _) = mc.formal_module(&f.tgt);
        let mf = mc.block_to_map(f);
        let (im, incl, coim) = image(&mf, &u0);
        let mi = mc.match_module(&im)?;
        let iota = mc.map_to_block(&mi.obj, &f.tgt, &incl.after(&mi.from))?;
        let gu = mc.map_to_block(&f.src, &mi.obj, &mi.to.after(&coim))?;
        let (cok, p) = cokernel(&mf, &u0);
        let mk = mc.match_module(&cok)?;
        let c = mc.map_to_block(&f.tgt, &mk.obj, &mk.to.after(&p))?;
        Ok((mi.obj, gu, iota, mk.obj, c))
    }
}

/// `(-, V[2])|_U ∈ (def U)^⊥` and `(-, U[1])|_U ∈ def U` for every
/// indecomposable of `V` and `U`.
pub fn lemma_checks(ctx: &LexContext) -> Result<Report> {
    let mut rep = Report::new();
    let h = ctx.heart.ok_or_else(|| Error::Unsupported("needs a cotorsion pair".into()))?;
    let amb = h.ambient();
    let c = amb.cat();
    let sigma = ctx.defloc.def_simples();
    let mut bad = None;
    for &v in &h.pair().v {
        let x = amb.shifted(&[v], 2);
        let m = ctx.restricted(&FormalObject(x));
        let (ok, w) = ctx.defloc.perp_test(&sigma, &m)?;
        if !ok {
            bad = Some(json!({"V": c.label(v), "witness": w}));
            break;
        }
    }
    rep.push(Check::from_witness("lemma.v2_perp", bad));
    let mut bad = None;
    let mut exhaustive = true;
    for &u in &h.pair().u {
        let x = amb.shifted(&[u], 1);
        let m = ctx.restricted(&FormalObject(x));
        let e = ctx.defloc.is_effaceable(&m)?;
        exhaustive &= e.exhaustive;
        if !(in_def(&sigma, &m) && e.effaceable) {
            bad = Some(json!({"U": c.label(u), "module": m.to_json()}));
            break;
        }
    }
    rep.push(Check::from_witness("lemma.u1_def", bad).with_exhaustive(exhaustive));
    Ok(rep)
}
