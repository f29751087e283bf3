use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::{in_def, Defloc, ModuleUniverse};
use crate::exactlin::{Mat, Scalar};
use crate::fpmod::{
    coords_in, decompose, enumerate_indecomposables, find_iso_in, hom_module, iso_indecomposable, random_module, yoneda,
    yoneda_map, yoneda_morphism, FpModule, ModuleMap,
};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};
use crate::report::{Check, Report};
use crate::Result;

/// `mod C / ⟨Σ⟩ ≅ mod eAe` where `e` is the sum of the identities outside
/// `Σ`. The quotient functor is restriction to those objects.
#[derive(Clone)]
pub struct QuotientPresentation {
    pub sigma: Vec<usize>,
    pub keep: Vec<usize>,
    cat: Arc<FiniteLinearCategory>,
    sub: Arc<FiniteLinearCategory>,
}

impl QuotientPresentation {
    pub fn new(cat: &Arc<FiniteLinearCategory>, sigma: &[usize]) -> Result<QuotientPresentation> {
        let keep: Vec<usize> = (0..cat.n_objects()).filter(|x| !sigma.contains(x)).collect();
        let sub = Arc::new(cat.full_subcategory(&keep)?);
        Ok(QuotientPresentation { sigma: sigma.to_vec(), keep, cat: cat.clone(), sub })
    }

    /// The category whose category algebra is `eAe`.
    pub fn sub(&self) -> &Arc<FiniteLinearCategory> {
        &self.sub
    }

    pub fn eae_dim(&self) -> usize {
        self.sub.total_dim()
    }

    /// `e` in the basis of the category algebra.
    pub fn idempotent(&self) -> Vec<Scalar> {
        let a = self.cat.category_algebra();
        let f = self.cat.field();
        let mut e = vec![Scalar::ZERO; a.dim()];
        for &x in &self.keep {
            for (i, s) in a.idempotent(x).into_iter().enumerate() {
                e[i] = f.add(e[i], s);
            }
        }
        e
    }

    pub fn module(&self, m: &FpModule) -> FpModule {
        m.restrict(&self.sub, &self.keep)
    }

    pub fn map(&self, m: &ModuleMap) -> ModuleMap {
        m.restrict(&self.keep)
    }

    /// `E_C(X) = Q(Hom(-, X))`.
    pub fn e_functor(&self, x: &FormalObject) -> FpModule {
        self.module(&yoneda(&self.cat, x))
    }

    pub fn e_morphism(&self, f: &BlockMorphism) -> ModuleMap {
        self.map(&yoneda_morphism(&self.cat, f))
    }

    pub fn to_json(&self) -> Value {
        let c = &self.cat;
        json!({
            "sigma": self.sigma.iter().map(|&x| c.label(x)).collect::<Vec<_>>(),
            "e": self.keep.iter().map(|&x| c.label(x)).collect::<Vec<_>>(),
            "eAe_dim": self.eae_dim(),
            "e_functor": (0..c.n_objects()).map(|x| json!({"object": c.label(x), "dims": self.e_functor(&FormalObject::single(x)).dims_json()})).collect::<Vec<_>>(),
        })
    }
}

/// `R(N) = Hom_eAe(Q Hom(-, ?), N)`, the right adjoint of the quotient,
/// with the hom bases used for its coordinates.
pub struct RightAdjoint {
    pub module: FpModule,
    bases: Vec<Vec<ModuleMap>>,
}

impl QuotientPresentation {
    pub fn right_adjoint(&self, n: &FpModule) -> Result<RightAdjoint> {
        let c = &self.cat;
        let f = c.field();
        let reps: Vec<FpModule> = (0..c.n_objects()).map(|x| self.e_functor(&FormalObject::single(x))).collect();
        let bases: Vec<Vec<ModuleMap>> = reps.iter().map(|r| hom_module(r, n)).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let mut action = Vec::with_capacity(c.n_basis());
        for id in 0..c.n_basis() {
            let e = c.basis_elem(id);
            let qy = self.e_morphism(&BlockMorphism::from_basis(c, id));
            let mut m = Mat::zeros(f, dims[e.src], dims[e.tgt]);
            for (k, phi) in bases[e.tgt].iter().enumerate() {
                let v = coords_in(&bases[e.src], &phi.after(&qy)).expect("precomposition stays natural");
                for (r, s) in v.into_iter().enumerate() {
                    m[(r, k)] = s;
                }
            }
            action.push(m);
        }
        Ok(RightAdjoint { module: FpModule::new(c.clone(), dims, action)?, bases })
    }

    /// Unit `F → RQ(F)`, with `RQ(F)` built by `right_adjoint(Q F)`.
    pub fn unit(&self, m: &FpModule, rq: &RightAdjoint) -> ModuleMap {
        let c = &self.cat;
        let f = c.field();
        let comps = (0..c.n_objects())
            .map(|x| {
                let xo = FormalObject::single(x);
                let mut out = Mat::zeros(f, rq.bases[x].len(), m.dim(x));
                for k in 0..m.dim(x) {
                    let mut v = vec![Scalar::ZERO; m.dim(x)];
                    v[k] = Scalar::ONE;
                    let hat = self.map(&yoneda_map(&xo, m, &[v]));
                    let coords = coords_in(&rq.bases[x], &hat).expect("restricted map is natural");
                    for (r, s) in coords.into_iter().enumerate() {
                        out[(r, k)] = s;
                    }
                }
                out
            })
            .collect();
        ModuleMap { comps }
    }

    /// Counit `QR(N) → N`: evaluation at identities.
    pub fn counit(&self, n: &FpModule, r: &RightAdjoint) -> ModuleMap {
        let c = &self.cat;
        let f = c.field();
        let comps = self
            .keep
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let id = c.identity(p).to_vec();
                let mut out = Mat::zeros(f, n.dim(i), r.bases[p].len());
                for (k, phi) in r.bases[p].iter().enumerate() {
                    for (row, s) in phi.comps[i].mul_vec(&id).into_iter().enumerate() {
                        out[(row, k)] = s;
                    }
                }
                out
            })
            .collect();
        ModuleMap { comps }
    }

    /// `R(μ)` for `μ: N → N'`.
    pub fn right_adjoint_map(&self, mu: &ModuleMap, src: &RightAdjoint, tgt: &RightAdjoint) -> ModuleMap {
        let f = self.cat.field();
        let comps = (0..self.cat.n_objects())
            .map(|x| {
                let mut out = Mat::zeros(f, tgt.bases[x].len(), src.bases[x].len());
                for (k, phi) in src.bases[x].iter().enumerate() {
                    let v = coords_in(&tgt.bases[x], &mu.after(phi)).expect("postcomposition stays natural");
                    for (r, s) in v.into_iter().enumerate() {
                        out[(r, k)] = s;
                    }
                }
                out
            })
            .collect();
        ModuleMap { comps }
    }

    /// Triangle identities on `F` and `N`, and invertibility of the counit.
    pub fn check_adjunction(&self, m: &FpModule, n: &FpModule) -> Result<Option<Value>> {
        let qm = self.module(m);
        let rqm = self.right_adjoint(&qm)?;
        let eta = self.unit(m, &rqm);
        if let Some(w) = eta.naturality_violation(m, &rqm.module) {
            return Ok(Some(json!({"kind": "unit_not_natural", "at": w})));
        }
        let eps_q = self.counit(&qm, &rqm);
        if !eps_q.after(&self.map(&eta)).comps.iter().all(Mat::is_identity) {
            return Ok(Some(json!({"kind": "triangle_identity_q", "module": m.to_json()})));
        }
        let rn = self.right_adjoint(n)?;
        let eps = self.counit(n, &rn);
        if !eps.is_iso() {
            return Ok(Some(json!({"kind": "counit_not_iso", "module": n.to_json()})));
        }
        let qrn = self.module(&rn.module);
        let rqrn = self.right_adjoint(&qrn)?;
        let eta_r = self.unit(&rn.module, &rqrn);
        let r_eps = self.right_adjoint_map(&eps, &rqrn, &rn);
        if !r_eps.after(&eta_r).comps.iter().all(Mat::is_identity) {
            return Ok(Some(json!({"kind": "triangle_identity_r", "module": n.to_json()})));
        }
        Ok(None)
    }
}

/// Outcome of the exact/abelian classifier.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremA {
    pub is_exact_embedding: bool,
    pub is_abelian_equivalence: bool,
    pub exhaustive: bool,
    /// Indecomposable eAe-modules in the density search, and how many are hit.
    pub eae_indecomposables: usize,
    pub hit: usize,
    pub report: Report,
}

impl Defloc {
    pub fn theorem_a(&self, universe: &ModuleUniverse) -> Result<TheoremA> {
        let c = self.cat().clone();
        let n = c.n_objects();
        let sigma = self.def_simples();
        let q = self.serre_quotient(&sigma)?;
        let mut rep = Report::new();
        let confl = self.conflations()?;

        // (a) exactness of E_C on conflations
        let mut witness = None;
        for t in &confl.triangles {
            let eg = q.e_morphism(&t.g);
            let ef = q.e_morphism(&t.f);
            let ok = eg.is_injective() && ef.is_surjective() && crate::fpmod::exact_at(&eg, &ef);
            if !ok {
                witness = Some(json!({"kind": "not_short_exact", "triangle": t.to_json(&c)}));
                break;
            }
        }
        let exact = witness.is_none();
        rep.push(match witness {
            None => Check::pass("theorem_a.exact").with_detail(json!({"conflations": confl.triangles.len()})),
            Some(w) => Check::fail("theorem_a.exact", w),
        }.with_exhaustive(confl.exhaustive));

        // (b) fully faithful on indecomposables
        let mut witness = None;
        for x in 0..n {
            for y in 0..n {
                let ex = q.e_functor(&FormalObject::single(x));
                let ey = q.e_functor(&FormalObject::single(y));
                let target = hom_module(&ex, &ey);
                let src = BlockMorphism::hom_basis(&c, &FormalObject::single(x), &FormalObject::single(y));
                let mut m = Mat::zeros(c.field(), target.len(), src.len());
                for (k, b) in src.iter().enumerate() {
                    let v = coords_in(&target, &q.e_morphism(b)).expect("E_C of a morphism is natural");
                    for (r, s) in v.into_iter().enumerate() {
                        m[(r, k)] = s;
                    }
                }
                let inj = m.rank() == src.len();
                if !inj || target.len() != src.len() {
                    witness = Some(json!({"kind": "not_fully_faithful", "x": c.label(x), "y": c.label(y), "hom_c": src.len(), "hom_eae": target.len(), "rank": m.rank()}));
                    break;
                }
            }
            if witness.is_some() {
                break;
            }
        }
        let faithful = witness.is_none();
        rep.push(match witness {
            None => Check::pass("theorem_a.fully_faithful"),
            Some(w) => Check::fail("theorem_a.fully_faithful", w),
        });

        // (c) density: every indecomposable eAe-module is some E_C(X)
        let images: Vec<FpModule> = (0..n)
            .map(|x| q.e_functor(&FormalObject::single(x)))
            .collect::<Vec<_>>();
        let mut image_summands: Vec<FpModule> = Vec::new();
        for m in &images {
            for s in decompose(m)? {
                if find_iso_in(&image_summands, &s.module).is_none() {
                    image_summands.push(s.module);
                }
            }
        }
        let bound = images.iter().map(|m| m.total_dim()).max().unwrap_or(0) + 2;
        let (eae_ind, dense_exhaustive) = if q.keep.is_empty() {
            (Vec::new(), true)
        } else {
            (enumerate_indecomposables(q.sub(), bound, 1_000_000)?.indecomposables, true)
        };
        let missed: Vec<&FpModule> = eae_ind.iter().filter(|m| image_summands.iter().all(|s| iso_indecomposable(m, s).is_none())).collect();
        let hit = eae_ind.len() - missed.len();
        let dense = missed.is_empty();
        rep.push(if dense {
            Check::pass("theorem_a.dense").with_detail(json!({"bound": bound, "indecomposables": eae_ind.len(), "hit": hit}))
        } else {
            Check::fail("theorem_a.dense", json!({"kind": "not_dense", "bound": bound, "missed": missed.iter().map(|m| m.to_json()).collect::<Vec<_>>()}))
        }.with_exhaustive(dense_exhaustive));

        let is_exact_embedding = exact && faithful;
        let is_abelian_equivalence = is_exact_embedding && dense;

        // cross-checks: exactness flags, and lex C against representables
        let flags = self.extri().classify_structure(self.caps())?;
        let flag_exact = flags.inflations_mono && flags.deflations_epi;
        rep.push(if flag_exact == is_exact_embedding {
            Check::pass("theorem_a.structure_flags").with_detail(json!({"inflations_mono": flags.inflations_mono, "deflations_epi": flags.deflations_epi}))
        } else {
            Check::fail("theorem_a.structure_flags", json!({"kind": "flag_disagreement", "flags": flags, "exact_embedding": is_exact_embedding}))
        }.with_exhaustive(flags.exhaustive));
        let (_, lex) = self.lex_equals_perp(universe)?;
        let reps: Vec<FpModule> = (0..n).map(|x| yoneda(&c, &FormalObject::single(x))).collect();
        let lex_representable = lex.iter().all(|&i| find_iso_in(&reps, &universe.indecomposables()[i]).is_some());
        let expect = is_exact_embedding && lex_representable;
        rep.push(if expect == is_abelian_equivalence {
            Check::pass("theorem_a.lex_representable").with_detail(json!({"lex_indecomposables": lex.len(), "all_representable": lex_representable}))
        } else {
            Check::fail("theorem_a.lex_representable", json!({"kind": "lex_disagreement", "all_representable": lex_representable, "abelian_equivalence": is_abelian_equivalence}))
        }.with_exhaustive(false));

        Ok(TheoremA {
            is_exact_embedding,
            is_abelian_equivalence,
            exhaustive: rep.exhaustive(),
            eae_indecomposables: eae_ind.len(),
            hit,
            report: rep,
        })
    }

    /// Whether every indecomposable is the end of a conflation with middle
    /// term in `add P`. Returns the witnesses, or the first failure.
    pub fn enough_projectives(&self) -> Result<std::result::Result<Vec<Value>, Value>> {
        let c = self.cat().clone();
        let p = self.projectives();
        if p.is_empty() {
            return Ok(Err(json!({"kind": "no_projectives"})));
        }
        let mut out = Vec::new();
        for x in 0..c.n_objects() {
            let confl = self.deflations(&FormalObject::single(x))?;
            match confl.triangles.iter().find(|t| t.y.summands().iter().all(|y| p.contains(y))) {
                Some(t) => out.push(t.to_json(&c)),
                None => return Ok(Err(json!({"kind": "no_projective_deflation", "object": c.label(x)}))),
            }
        }
        Ok(Ok(out))
    }

    /// The enough-projectives pipeline: quotient = mod P, `def C` = modules
    /// vanishing on P, and the recollement adjoint on samples.
    pub fn res_p_check(&self, universe: &ModuleUniverse, samples: usize) -> Result<Report> {
        let c = self.cat().clone();
        let mut rep = Report::new();
        let p = self.projectives();
        let names = |v: &[usize]| v.iter().map(|&x| c.label(x).to_string()).collect::<Vec<_>>();
        match self.enough_projectives()? {
            Ok(w) => rep.push(Check::pass("res_p.enough_projectives").with_detail(json!({"projectives": names(&p), "conflations": w}))),
            Err(w) => {
                rep.push(Check::fail("res_p.enough_projectives", w));
                for name in ["res_p.quotient_is_mod_p", "res_p.def_vanishes_on_p", "res_p.adjoint", "res_p.image_in_perp"] {
                    rep.push(Check::skipped(name, "no enough projectives"));
                }
                return Ok(rep);
            }
        }
        let sigma = self.def_simples();
        let q = self.serre_quotient(&sigma)?;

        // (i) e is the sum of identities of P, and E_C(X) = Hom(-, X)|_P
        let mut bad = None;
        if q.keep != p {
            bad = Some(json!({"kind": "keep_differs", "outside_sigma": names(&q.keep), "projectives": names(&p)}));
        }
        for x in 0..c.n_objects() {
            let e = q.e_functor(&FormalObject::single(x));
            let expect: Vec<usize> = p.iter().map(|&w| c.hom_dim(w, x)).collect();
            if bad.is_none() && e.dims() != expect.as_slice() {
                bad = Some(json!({"kind": "restricted_yoneda", "object": c.label(x)}));
            }
        }
        rep.push(match bad {
            None => Check::pass("res_p.quotient_is_mod_p").with_detail(json!({"eAe_dim": q.eae_dim()})),
            Some(w) => Check::fail("res_p.quotient_is_mod_p", w),
        });

        // (ii) def C = modules vanishing on P
        let bad = universe.modules.iter().find(|m| in_def(&sigma, m) != p.iter().all(|&x| m.dim(x) == 0));
        rep.push(match bad {
            None => Check::pass("res_p.def_vanishes_on_p").with_detail(json!({"modules": universe.modules.len()})),
            Some(m) => Check::fail("res_p.def_vanishes_on_p", json!({"kind": "def_vs_vanishing", "module": m.to_json()})),
        });

        // (iii) adjunction and Im R ⊆ (def C)^⊥
        let mut rng = ChaCha8Rng::seed_from_u64(self.caps().seed);
        let mut adj = None;
        let mut perp = None;
        for k in 0..samples {
            let m = random_module(&c, &mut rng, 2);
            let nmod = random_module(q.sub(), &mut rng, 2);
            if adj.is_none() {
                if let Some(w) = q.check_adjunction(&m, &nmod)? {
                    adj = Some(json!({"sample": k, "failure": w}));
                }
            }
            let r = q.right_adjoint(&nmod)?;
            let (ok, w) = self.perp_test(&sigma, &r.module)?;
            if !ok && perp.is_none() {
                perp = Some(json!({"sample": k, "module": nmod.to_json(), "image": r.module.to_json(), "witness": w}));
            }
        }
        rep.push(match adj {
            None => Check::pass("res_p.adjoint").with_detail(json!({"samples": samples})),
            Some(w) => Check::fail("res_p.adjoint", w),
        }.with_exhaustive(false));
        rep.push(match perp {
            None => Check::pass("res_p.image_in_perp").with_detail(json!({"samples": samples})),
            Some(w) => Check::fail("res_p.image_in_perp", w),
        }.with_exhaustive(false));
        Ok(rep)
    }
}
