use exlex::defloc::{Defloc, ModuleUniverse};
use exlex::extri::{Caps, ExtriStructure};
use exlex::fixtures;
use exlex::heart::{lemma_checks, Ambient, CotorsionPair, Heart, LexContext, PAIR_GUARD};
use exlex::kcat::FormalObject;

// FIX-T objects: S1 = 0, S2 = 1, S3 = 2, with S1[1] = S3, S2[1] = S1, S3[1] = S2.
const S1: usize = 0;
const S2: usize = 1;
const S3: usize = 2;

fn ex(name: &str) -> ExtriStructure {
    fixtures::load(name).unwrap().extri.unwrap()
}

fn amb(name: &str) -> Ambient {
    Ambient::new(&ex(name), Caps::default()).unwrap()
}

fn fix_u() -> CotorsionPair {
    CotorsionPair::new(vec![S1], vec![S1, S3])
}

fn all() -> Vec<usize> {
    vec![S1, S2, S3]
}

#[test]
fn fixture_pair_is_fix_u() {
    let l = fixtures::load("fix_t").unwrap();
    let (u, v) = l.pair.unwrap();
    assert_eq!(CotorsionPair::new(u, v), fix_u());
}

#[test]
fn cotorsion_pair_examples() {
    for name in ["fix_t", "fix_t_table"] {
        let a = amb(name);
        assert!(a.is_cotorsion_pair(&CotorsionPair::new(all(), vec![])).unwrap().holds);
        assert!(a.is_cotorsion_pair(&CotorsionPair::new(vec![], all())).unwrap().holds);
        let chk = a.is_cotorsion_pair(&fix_u()).unwrap();
        assert!(chk.holds && chk.exhaustive);
        assert_eq!(chk.decompositions.len(), 3);
        let bad = a.is_cotorsion_pair(&CotorsionPair::new(vec![S1], vec![S2])).unwrap();
        assert!(!bad.holds);
        assert!(bad.hom_witness.is_some());
        let full = a.is_cotorsion_pair(&CotorsionPair::new(all(), all())).unwrap();
        assert!(!full.holds);
    }
}

#[test]
fn enumeration_on_fix_t() {
    let a = amb("fix_t");
    let (pairs, exhaustive) = a.enumerate_cotorsion_pairs(PAIR_GUARD).unwrap();
    assert!(exhaustive);
    let rot = |k: i32| CotorsionPair::new(a.shifted(&fix_u().u, k), a.shifted(&fix_u().v, k));
    for p in [CotorsionPair::new(all(), vec![]), CotorsionPair::new(vec![], all()), rot(0), rot(1), rot(2)] {
        assert!(pairs.contains(&p), "{p:?}");
    }
    // Every triangle of FIX-T splits, so each U with V = U^⊥ works: 2^3 pairs.
    assert_eq!(pairs.len(), 8);
    for p in &pairs {
        for &u in &p.u {
            for &v in &p.v {
                assert_eq!(a.cat().hom_dim(u, a.shift().obj(v)), 0);
            }
        }
    }
}

#[test]
fn point_table_has_only_trivial_pairs() {
    let a = amb("point_table");
    let (pairs, _) = a.enumerate_cotorsion_pairs(PAIR_GUARD).unwrap();
    assert_eq!(pairs, vec![CotorsionPair::new(vec![], vec![0]), CotorsionPair::new(vec![0], vec![])]);
}

#[test]
fn size_guard() {
    assert!(amb("fix_t").enumerate_cotorsion_pairs(2).is_err());
}

#[test]
fn star_examples() {
    let a = amb("fix_t");
    assert_eq!(a.star(&[S2], &[S1]).unwrap().objects, vec![S1, S2]);
    assert_eq!(a.star(&[S2, S3], &[]).unwrap().objects, vec![S2, S3]);
    assert_eq!(a.star(&[], &[S1]).unwrap().objects, vec![S1]);
    assert!(a.star(&[], &[]).unwrap().objects.is_empty());
}

#[test]
fn fix_u_heart() {
    for name in ["fix_t", "fix_t_table"] {
        let h = Heart::new(&ex(name), &fix_u(), Caps::default()).unwrap();
        let p = h.presentation();
        assert_eq!(p.w, vec![S1]);
        assert_eq!(p.t_plus, all());
        assert_eq!(p.t_minus, vec![S1, S2]);
        assert_eq!(p.h, vec![S1, S2]);
        assert_eq!(p.objects, vec![S2]);
        assert_eq!(p.hom_dims(), vec![vec![1]]);
        assert_eq!(p.cat.n_objects(), 1);
    }
}

#[test]
fn trivial_hearts_are_zero() {
    for pair in [CotorsionPair::new(all(), vec![]), CotorsionPair::new(vec![], all())] {
        let h = Heart::new(&ex("fix_t"), &pair, Caps::default()).unwrap();
        assert_eq!(h.presentation().n(), 0);
        assert!(h.verify_theorem_b().unwrap().report.all_passed());
        assert!(!h.heart_vs_mod_p().unwrap().any_failed());
    }
}

#[test]
fn non_pair_is_rejected() {
    assert!(Heart::new(&ex("fix_t"), &CotorsionPair::new(vec![S1], vec![S2]), Caps::default()).is_err());
}

#[test]
fn reflections_on_fix_u() {
    let h = Heart::new(&ex("fix_t"), &fix_u(), Caps::default()).unwrap();
    for x in all() {
        let r = h.reflection(x).unwrap();
        assert!(r.adjunction.passed(), "{:?}", r.adjunction);
        assert!(r.target.summands().iter().all(|t| h.presentation().t_plus.contains(t)));
        let c = h.coreflection(x).unwrap();
        assert!(c.adjunction.passed(), "{:?}", c.adjunction);
        assert!(c.target.summands().iter().all(|t| h.presentation().t_minus.contains(t)));
    }
    // S2 ∈ T⁺ ∩ T⁻: both are identities
    assert_eq!(h.reflection(S2).unwrap().target, FormalObject::single(S2));
    assert_eq!(h.coreflection(S2).unwrap().target, FormalObject::single(S2));
}

#[test]
fn cohomology_on_fix_u() {
    let h = Heart::new(&ex("fix_t"), &fix_u(), Caps::default()).unwrap();
    let s2 = h.presentation().index(S2).unwrap();
    // S2 ∈ H is fixed; S1 ∈ W dies
    assert_eq!(h.cohomology(&FormalObject::single(S2)).unwrap().object, vec![s2]);
    assert!(h.cohomology(&FormalObject::single(S1)).unwrap().object.is_empty());
    for x in all() {
        assert!(h.cohomology(&FormalObject::single(x)).unwrap().in_heart);
    }
}

#[test]
fn theorem_b_on_fix_u() {
    for name in ["fix_t", "fix_t_table"] {
        let h = Heart::new(&ex(name), &fix_u(), Caps::default()).unwrap();
        let tb = h.verify_theorem_b().unwrap();
        assert!(tb.report.all_passed(), "{:?}", tb.report);
        assert_eq!(tb.heart_indecomposables, 1);
        assert_eq!(tb.lex_indecomposables, 1);
        assert!(h.heart_vs_mod_p().unwrap().all_passed());
    }
}

#[test]
fn theorem_b_on_rotations() {
    let a = amb("fix_t");
    for k in 1..3 {
        let pair = CotorsionPair::new(a.shifted(&fix_u().u, k), a.shifted(&fix_u().v, k));
        let h = Heart::new(&ex("fix_t"), &pair, Caps::default()).unwrap();
        assert_eq!(h.presentation().n(), 1);
        assert!(h.verify_theorem_b().unwrap().report.all_passed());
    }
}

#[test]
fn corrupted_heart_hom_table_fails() {
    let h = Heart::new(&ex("fix_t"), &fix_u(), Caps::default()).unwrap();
    let mut pres = h.presentation().clone();
    let extra = pres.hom[0].reps[0].clone();
    pres.hom[0].reps.push(extra);
    let bad = Heart::from_parts(h.ambient().clone(), pres);
    let tb = bad.verify_theorem_b().unwrap();
    let c = tb.report.get("theorem_b.fully_faithful").unwrap();
    assert!(c.failed());
    assert_eq!(c.witness.as_ref().unwrap()["kind"], "hom_dim");
}

#[test]
fn cohomology_matches_lex_side() {
    let e = ex("fix_t");
    let h = Heart::new(&e, &fix_u(), Caps::default()).unwrap();
    let dl = Defloc::new(&e, Caps::default());
    let tri = dl.conflations().unwrap();
    let cmp = h.compare_cohomology(&tri.triangles).unwrap();
    assert!(cmp.report.all_passed(), "{:?}", cmp.report);
    assert!(cmp.triangles > 0);
}

#[test]
fn lex_approximation_on_fix_u() {
    let h = Heart::new(&ex("fix_t"), &fix_u(), Caps::default()).unwrap();
    let ctx = LexContext::cotorsion(&h).unwrap();
    assert!(lemma_checks(&ctx).unwrap().all_passed());
    let uni = ModuleUniverse::new(ctx.cat(), 4).unwrap();
    assert!(!uni.indecomposables().is_empty());
    for m in uni.indecomposables() {
        let la = ctx.approximate(m).unwrap();
        assert!(la.report.all_passed(), "{:?}", la.report);
    }
}

#[test]
fn lex_approximation_on_mod_a2() {
    let e = ex("fix_a2");
    let ctx = LexContext::abelian(&e, Caps::default()).unwrap();
    let uni = ModuleUniverse::new(ctx.cat(), 4).unwrap();
    let sigma = ctx.defloc().def_simples();
    let mut defect_killed = 0;
    for m in uni.indecomposables() {
        let la = ctx.approximate(m).unwrap();
        assert!(la.report.all_passed(), "{:?}", la.report);
        if exlex::defloc::in_def(&sigma, m) {
            assert!(la.g.is_zero() || la.psi.is_zero());
            defect_killed += 1;
        }
    }
    assert!(defect_killed > 0);
}

#[test]
fn lex_approximation_needs_an_abelian_backend() {
    assert!(LexContext::abelian(&ex("fix_t"), Caps::default()).is_err());
}
