use exlex::cli::input::FieldSpec;
use exlex::defloc::{defect, Defloc, ModuleUniverse};
use exlex::fixtures;
use exlex::fpmod::{is_isomorphic, simple, yoneda};
use exlex::kcat::FormalObject;

fn dl(name: &str) -> Defloc {
    let l = fixtures::load(name).unwrap();
    Defloc::new(l.extri.as_ref().unwrap(), l.caps)
}

fn dl_f5(name: &str) -> Defloc {
    let l = fixtures::load_with(name, Some(&FieldSpec::parse("5").unwrap()), None, 0).unwrap();
    Defloc::new(l.extri.as_ref().unwrap(), l.caps)
}

#[test]
fn defects_on_fix_a() {
    let d = dl("fix_a");
    let e = d.extri();
    let c = d.cat().clone();
    let f = c.field();
    let t = e.realize(&FormalObject::single(0), &FormalObject::single(0), &[f.one()]).unwrap();
    let df = defect(&c, &t);
    assert!(is_isomorphic(&df, &simple(&c, 0).unwrap()).unwrap());
    let s = e.split(&FormalObject::single(0), &FormalObject::single(1));
    assert!(defect(&c, &s).is_zero());
}

#[test]
fn def_simples_per_fixture() {
    assert_eq!(dl("fix_a").def_simples(), vec![0]);
    assert_eq!(dl("fix_p").def_simples(), Vec::<usize>::new());
    assert_eq!(dl("fix_t").def_simples(), vec![0, 1, 2]);
    assert_eq!(dl("fix_a2").def_simples(), vec![1]);
}

#[test]
fn effaceability_examples() {
    let d = dl("fix_a");
    let c = d.cat().clone();
    assert!(d.is_effaceable(&simple(&c, 0).unwrap()).unwrap().effaceable);
    let p = d.is_effaceable(&yoneda(&c, &FormalObject::single(1))).unwrap();
    assert!(!p.effaceable);
    assert!(p.obstruction.is_some());
}

#[test]
fn sigma_oracle_all_fixtures() {
    for name in ["fix_a", "fix_a2", "fix_p", "fix_t", "fix_t_table"] {
        let c = dl(name).sigma_oracle().unwrap();
        assert!(c.passed(), "{name}: {:?}", c.witness);
        assert!(c.exhaustive, "{name}");
    }
}

#[test]
fn eff_equals_def_small() {
    for name in ["fix_a", "fix_p"] {
        let d = dl_f5(name);
        let u = ModuleUniverse::new(d.cat(), 4).unwrap();
        let c = d.eff_equals_def(&u).unwrap();
        assert!(c.passed(), "{name}: {:?}", c.witness);
    }
}

#[test]
fn serre_and_negative_control() {
    for name in ["fix_a", "fix_p", "fix_t", "fix_a2"] {
        let d = dl(name);
        let u = ModuleUniverse::new(d.cat(), 4).unwrap();
        let rep = d.verify_serre(&d.def_simples(), &u, 50).unwrap();
        assert!(rep.all_passed(), "{name}: {:?}", rep.failures().collect::<Vec<_>>());
    }
    let d = dl("fix_a");
    let u = ModuleUniverse::new(d.cat(), 4).unwrap();
    let rep = d.verify_serre(&[1], &u, 10).unwrap();
    assert!(rep.get("serre.extensions").unwrap().failed());
}

#[test]
fn lex_and_perp() {
    for name in ["fix_a", "fix_a2", "fix_p", "fix_t"] {
        let d = dl(name);
        let u = ModuleUniverse::new(d.cat(), 4).unwrap();
        let (c, lex) = d.lex_equals_perp(&u).unwrap();
        assert!(c.passed(), "{name}: {:?}", c.witness);
        if name == "fix_t" {
            assert!(lex.is_empty());
        }
    }
    let d = dl("fix_a");
    for x in 0..2 {
        assert!(d.is_left_exact(&yoneda(d.cat(), &FormalObject::single(x))).unwrap().0);
    }
}

#[test]
fn quotients() {
    let d = dl("fix_a");
    let q = d.serre_quotient(&d.def_simples()).unwrap();
    assert_eq!(q.eae_dim(), 2);
    assert_eq!(q.e_functor(&FormalObject::single(0)).total_dim(), 1);
    assert_eq!(q.e_functor(&FormalObject::single(1)).total_dim(), 2);
    let d = dl("fix_t");
    let q = d.serre_quotient(&d.def_simples()).unwrap();
    assert_eq!(q.eae_dim(), 0);
    let d = dl("fix_p");
    let q = d.serre_quotient(&d.def_simples()).unwrap();
    assert_eq!(q.keep, vec![0, 1]);
}

#[test]
fn theorem_a_classifier() {
    let expect = [("fix_a", true, true), ("fix_p", true, false), ("fix_t", false, false)];
    for (name, ex, ab) in expect {
        let d = dl(name);
        let u = ModuleUniverse::new(d.cat(), 4).unwrap();
        let t = d.theorem_a(&u).unwrap();
        assert_eq!((t.is_exact_embedding, t.is_abelian_equivalence), (ex, ab), "{name}: {:?}", t.report.failures().collect::<Vec<_>>());
        for k in ["theorem_a.structure_flags", "theorem_a.lex_representable"] {
            assert!(t.report.get(k).unwrap().passed(), "{name} {k}");
        }
        if name == "fix_a" {
            assert_eq!(t.hit, 2);
        }
    }
}

#[test]
fn res_p() {
    for name in ["fix_a", "fix_p"] {
        let d = dl(name);
        let u = ModuleUniverse::new(d.cat(), 4).unwrap();
        let rep = d.res_p_check(&u, 20).unwrap();
        assert!(rep.all_passed(), "{name}: {:?}", rep.failures().collect::<Vec<_>>());
    }
    let d = dl("fix_t");
    assert!(d.projectives().is_empty());
    let u = ModuleUniverse::new(d.cat(), 2).unwrap();
    let rep = d.res_p_check(&u, 2).unwrap();
    assert!(rep.get("res_p.enough_projectives").unwrap().failed());
    assert_eq!(rep.get("res_p.adjoint").unwrap().status, exlex::report::Status::Skipped);
}
