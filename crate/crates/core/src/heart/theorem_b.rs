use std::sync::Arc;

use serde_json::{json, Value};

use super::{labels, Cohomology, Heart};
use crate::defloc::{Defloc, QuotientPresentation};
use crate::error::Result;
use crate::extri::{ETriangle, ExtriStructure, SubBackend};
use crate::fpmod::{
    coords_in, decompose, enumerate_indecomposables, exact_at, find_iso_in, hom_dim, hom_module, is_indecomposable, is_isomorphic, yoneda,
    yoneda_morphism, FpModule, ModuleMap,
};
use crate::kcat::{BlockMorphism, FormalObject};
use crate::report::{Check, Report};

/// The certificate `H/[W] ≅ lex U[-1]`.
#[derive(Clone, Debug)]
pub struct TheoremB {
    pub report: Report,
    /// One row per heart indecomposable: its image under `Ψ` and the
    /// enumerated `eAe`-module it matches.
    pub table: Vec<Value>,
    pub heart_indecomposables: usize,
    pub lex_indecomposables: usize,
    pub bound: usize,
}

/// `𝕳` against `Ψ⁻¹ ∘ Q ∘ 𝕐` on objects, morphisms and triangles.
#[derive(Clone, Debug)]
pub struct CohomologyComparison {
    pub report: Report,
    pub objects: Vec<Value>,
    pub triangles: usize,
}

/// `lex U[-1]` computed inside `U[-1]` as an extriangulated subcategory.
pub struct LexSide {
    pub objs: Vec<usize>,
    pub defloc: Defloc,
    pub sigma: Vec<usize>,
    pub quotient: QuotientPresentation,
}

impl Heart {
    pub fn lex_side(&self) -> Result<LexSide> {
        let amb = self.ambient();
        let objs = amb.shifted(&self.pair().u, -1);
        let sub = SubBackend::new(amb.extri().backend().clone(), objs.clone())?;
        let ex = ExtriStructure::new(Arc::new(sub));
        let defloc = Defloc::new(&ex, *amb.caps());
        let sigma = defloc.def_simples();
        let quotient = defloc.serre_quotient(&sigma)?;
        Ok(LexSide { objs, defloc, sigma, quotient })
    }

    /// `(-, X)|_{U[-1]}`.
    pub fn restricted_yoneda(&self, side: &LexSide, x: &FormalObject) -> FpModule {
        yoneda(self.cat(), x).restrict(side.defloc.cat(), &side.objs)
    }

    /// `Q((-, X)|_{U[-1]})` as an `eAe`-module.
    pub fn psi(&self, side: &LexSide, x: &FormalObject) -> FpModule {
        side.quotient.module(&self.restricted_yoneda(side, x))
    }

    pub fn psi_mor(&self, side: &LexSide, f: &BlockMorphism) -> ModuleMap {
        side.quotient.map(&yoneda_morphism(self.cat(), f).restrict(&side.objs))
    }

    pub fn verify_theorem_b(&self) -> Result<TheoremB> {
        let c = self.cat().clone();
        let pres = self.presentation();
        let side = self.lex_side()?;
        let n = pres.n();
        let mut rep = Report::new();
        let hobj = |a: usize| FormalObject::single(pres.objects[a]);

        // (i) left exactness of (-, H)|_{U[-1]}
        let mut bad = None;
        let mut exhaustive = true;
        for a in 0..n {
            let m = self.restricted_yoneda(&side, &hobj(a));
            let (lex, ex, lw) = side.defloc.is_left_exact(&m)?;
            exhaustive &= ex;
            let (perp, pw) = side.defloc.perp_test(&side.sigma, &m)?;
            if !(lex && perp) {
                bad = Some(json!({"object": c.label(pres.objects[a]), "left_exact": lex, "perp": perp, "lex_witness": lw, "perp_witness": pw}));
                break;
            }
        }
        rep.push(Check::from_witness("theorem_b.left_exact", bad).with_exhaustive(exhaustive));

        // (ii) full and faithful on the stable hom spaces; [W] is killed
        let psis: Vec<FpModule> = (0..n).map(|a| self.psi(&side, &hobj(a))).collect();
        let mut bad = None;
        let mut dims = Vec::new();
        'pairs: for a in 0..n {
            let mut row = Vec::new();
            for b in 0..n {
                let sh = pres.hom(a, b);
                let basis = hom_module(&psis[a], &psis[b]);
                row.push(json!([sh.dim(), basis.len()]));
                if sh.dim() != basis.len() {
                    bad = Some(json!({"kind": "hom_dim", "pair": [c.label(pres.objects[a]), c.label(pres.objects[b])], "heart": sh.dim(), "lex": basis.len()}));
                    break 'pairs;
                }
                let cols: Vec<Vec<_>> = sh
                    .reps
                    .iter()
                    .map(|r| coords_in(&basis, &self.psi_mor(&side, r)).expect("restriction of a natural map"))
                    .collect();
                let m = super::cols_mat(c.field(), basis.len(), &cols);
                if m.rank() != basis.len() {
                    bad = Some(json!({"kind": "not_bijective", "pair": [c.label(pres.objects[a]), c.label(pres.objects[b])], "rank": m.rank(), "dim": basis.len()}));
                    break 'pairs;
                }
                let span = self.ambient().ideal_span(&hobj(a), &hobj(b), &pres.w);
                for j in 0..span.cols() {
                    let f = BlockMorphism::from_flat(&c, &hobj(a), &hobj(b), &span.col(j));
                    if !self.psi_mor(&side, &f).is_zero() {
                        bad = Some(json!({"kind": "w_not_killed", "pair": [c.label(pres.objects[a]), c.label(pres.objects[b])]}));
                        break 'pairs;
                    }
                }
            }
            dims.push(row);
        }
        rep.push(Check::from_witness("theorem_b.fully_faithful", bad).with_detail(json!({"hom_dims": dims})));

        // (iii) density over indecomposable eAe-modules
        let qc = side.quotient.sub().clone();
        let bound = psis.iter().map(|m| m.total_dim()).max().unwrap_or(0) + 2;
        let en = enumerate_indecomposables(&qc, bound, 1_000_000)?;
        let mut table = Vec::new();
        let mut bad = None;
        for (a, m) in psis.iter().enumerate() {
            let hit = find_iso_in(&en.indecomposables, m);
            table.push(json!({"heart": c.label(pres.objects[a]), "psi": m.dims_json(), "indecomposable": is_indecomposable(m), "lex_index": hit}));
            if hit.is_none() && bad.is_none() {
                bad = Some(json!({"kind": "image_not_indecomposable", "heart": c.label(pres.objects[a]), "psi": m.to_json()}));
            }
        }
        for (i, m) in en.indecomposables.iter().enumerate() {
            if find_iso_in(&psis, m).is_none() && bad.is_none() {
                bad = Some(json!({"kind": "not_dense", "lex_index": i, "module": m.to_json()}));
            }
        }
        rep.push(Check::from_witness("theorem_b.dense", bad).with_detail(json!({"bound": bound, "lex_indecomposables": en.indecomposables.len()})));

        Ok(TheoremB { report: rep, table, heart_indecomposables: n, lex_indecomposables: en.indecomposables.len(), bound })
    }

    /// `H/[W] ≃ mod P` when `U` has enough projectives `P`, through
    /// `H ↦ (-, H[1])|_P`.
    pub fn heart_vs_mod_p(&self) -> Result<Report> {
        let c = self.cat().clone();
        let amb = self.ambient();
        let pres = self.presentation();
        let mut rep = Report::new();
        let u = self.pair().u.clone();
        let sub = SubBackend::new(amb.extri().backend().clone(), u.clone())?;
        let ex = ExtriStructure::new(Arc::new(sub));
        let dl = Defloc::new(&ex, *amb.caps());
        let p: Vec<usize> = dl.projectives().iter().map(|&i| u[i]).collect();
        if p.is_empty() && pres.n() == 0 {
            rep.push(Check::pass("heart_vs_mod_p").with_detail(json!({"note": "heart and mod P are both zero"})));
            return Ok(rep);
        }
        if let Err(w) = dl.enough_projectives()? {
            rep.push(Check::skipped("heart_vs_mod_p", "U does not have enough projectives").with_detail(w));
            return Ok(rep);
        }
        let pc = Arc::new(c.full_subcategory(&p)?);
        let s = amb.shift();
        let mods: Vec<FpModule> =
            pres.objects.iter().map(|&h| yoneda(&c, &FormalObject::single(s.obj(h))).restrict(&pc, &p)).collect();
        let bound = mods.iter().map(|m| m.total_dim()).max().unwrap_or(0) + 2;
        let en = enumerate_indecomposables(&pc, bound, 1_000_000)?;
        let mut bad = None;
        for a in 0..mods.len() {
            for b in 0..mods.len() {
                let (hd, md) = (pres.hom(a, b).dim(), hom_dim(&mods[a], &mods[b]));
                if hd != md && bad.is_none() {
                    bad = Some(json!({"kind": "hom_dim", "pair": [c.label(pres.objects[a]), c.label(pres.objects[b])], "heart": hd, "mod_p": md}));
                }
            }
        }
        for (a, m) in mods.iter().enumerate() {
            if find_iso_in(&en.indecomposables, m).is_none() && bad.is_none() {
                bad = Some(json!({"kind": "not_indecomposable_in_mod_p", "heart": c.label(pres.objects[a]), "module": m.to_json()}));
            }
        }
        if en.indecomposables.len() != mods.len() && bad.is_none() {
            bad = Some(json!({"kind": "count", "heart": mods.len(), "mod_p": en.indecomposables.len()}));
        }
        rep.push(Check::from_witness("heart_vs_mod_p", bad).with_detail(json!({
            "projectives": labels(&c, &p),
            "heart_indecomposables": mods.len(),
            "mod_p_indecomposables": en.indecomposables.len(),
            "bound": bound,
        })));
        Ok(rep)
    }

    /// `θ_X = Q𝕐(α⁻)⁻¹ ∘ Q𝕐(α⁺): Q𝕐(X) → Q𝕐(X^±) = Ψ𝕳(X)`, if both are invertible.
    fn theta(&self, side: &LexSide, h: &Cohomology) -> Option<ModuleMap> {
        let a = self.psi_mor(side, &h.alpha_plus);
        let b = self.psi_mor(side, &h.alpha_minus);
        if !a.is_iso() || !b.is_iso() {
            return None;
        }
        let binv = ModuleMap { comps: b.comps.iter().map(|m| m.inverse().expect("iso")).collect() };
        Some(binv.after(&a))
    }

    /// Compare `𝕳` with `Ψ⁻¹ ∘ Q ∘ 𝕐` on every indecomposable and every
    /// basis morphism between them, and check that `𝕳` turns the given
    /// triangles `Z → Y → X → Z[1]` into exact sequences.
    pub fn compare_cohomology(&self, triangles: &[ETriangle]) -> Result<CohomologyComparison> {
        let c = self.cat().clone();
        let side = self.lex_side()?;
        let pres = self.presentation();
        let nh = pres.n();
        let psis: Vec<FpModule> = (0..nh).map(|a| self.psi(&side, &FormalObject::single(pres.objects[a]))).collect();
        let mut rep = Report::new();
        let mut rows = Vec::new();
        let mut coh = Vec::new();
        let mut thetas = Vec::new();
        let mut bad = None;
        for x in 0..c.n_objects() {
            let xo = FormalObject::single(x);
            let h = self.cohomology(&xo)?;
            let qy = self.psi(&side, &xo);
            // Ψ⁻¹(Q𝕐X) by decomposing and matching against the heart's images
            let mut via_lex = Vec::new();
            let mut matched = true;
            for s in decompose(&qy)? {
                match find_iso_in(&psis, &s.module) {
                    Some(i) => via_lex.push(i),
                    None => matched = false,
                }
            }
            via_lex.sort_unstable();
            let theta = self.theta(&side, &h);
            rows.push(json!({
                "object": c.label(x),
                "plus": h.plus.describe(&c),
                "cohomology": h.pm.describe(&c),
                "heart": h.object.iter().map(|&i| c.label(pres.objects[i])).collect::<Vec<_>>(),
                "psi_inverse_q_y": via_lex.iter().map(|&i| c.label(pres.objects[i])).collect::<Vec<_>>(),
            }));
            if bad.is_none() {
                if !h.in_heart {
                    bad = Some(json!({"kind": "outside_heart", "object": c.label(x), "cohomology": h.pm.describe(&c)}));
                } else if !matched || via_lex != h.object {
                    bad = Some(json!({"kind": "object_mismatch", "object": c.label(x)}));
                } else if theta.is_none() {
                    bad = Some(json!({"kind": "alpha_not_inverted", "object": c.label(x)}));
                } else if !is_isomorphic(&qy, &self.psi(&side, &h.pm))? {
                    bad = Some(json!({"kind": "not_isomorphic", "object": c.label(x)}));
                }
            }
            coh.push(h);
            thetas.push(theta);
        }
        rep.push(Check::from_witness("cohomology.objects", bad).with_detail(json!({"objects": rows.clone()})));

        let mut bad = None;
        let mut count = 0;
        for id in 0..c.n_basis() {
            let be = c.basis_elem(id);
            let f = BlockMorphism::from_basis(&c, id);
            let (h1, h2) = (&coh[be.src], &coh[be.tgt]);
            let (Some(t1), Some(t2)) = (&thetas[be.src], &thetas[be.tgt]) else { continue };
            let fpm = self.cohomology_mor(&f, h1, h2)?;
            let lhs = t2.after(&self.psi_mor(&side, &f));
            let rhs = self.psi_mor(&side, &fpm).after(t1);
            count += 1;
            if lhs != rhs && bad.is_none() {
                bad = Some(json!({"kind": "not_natural", "morphism": be.name}));
            }
        }
        rep.push(Check::from_witness("cohomology.morphisms", bad).with_detail(json!({"basis_morphisms": count})));

        let mut bad = None;
        for t in triangles {
            let hz = self.cohomology(&t.z)?;
            let hy = self.cohomology(&t.y)?;
            let hx = self.cohomology(&t.x)?;
            let g = self.psi_mor(&side, &self.cohomology_mor(&t.g, &hz, &hy)?);
            let f = self.psi_mor(&side, &self.cohomology_mor(&t.f, &hy, &hx)?);
            if !exact_at(&g, &f) {
                bad = Some(json!({"kind": "not_exact", "triangle": t.to_json(&c)}));
                break;
            }
        }
        rep.push(Check::from_witness("cohomology.triangles", bad).with_detail(json!({"triangles": triangles.len()})));
        Ok(CohomologyComparison { report: rep, objects: rows, triangles: triangles.len() })
    }
}
