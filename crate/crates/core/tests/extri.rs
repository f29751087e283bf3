use exlex::exactlin::Scalar;
use exlex::extri::{Caps, ExtriStructure};
use exlex::fixtures;
use exlex::kcat::{BlockMorphism, FormalObject};

fn ex(name: &str) -> ExtriStructure {
    fixtures::load(name).unwrap().extri.unwrap()
}

fn one(x: usize) -> FormalObject {
    FormalObject::single(x)
}

#[test]
fn fix_a_ext_dims() {
    let e = ex("fix_a");
    // S = 0, P = 1
    assert_eq!(e.e_dim_ind(0, 0), 1);
    assert_eq!(e.e_dim_ind(0, 1), 0);
    assert_eq!(e.e_dim_ind(1, 0), 0);
    assert_eq!(e.e_dim_ind(1, 1), 0);
    assert_eq!(e.e_dim(&FormalObject(vec![0, 0]), &FormalObject(vec![0, 1, 0])), 4);
}

#[test]
fn realize_nonsplit_on_fix_a() {
    let e = ex("fix_a");
    let f = e.field();
    let t = e.realize(&one(0), &one(0), &[f.one()]).unwrap();
    assert_eq!(t.y, one(1));
    assert!(e.is_mono(&t.g));
    assert!(e.is_epi(&t.f));
    assert!(e.verify_long_exact(&t).all_passed());
}

#[test]
fn zero_class_realizes_split() {
    for name in ["fix_a", "fix_a2", "fix_t", "fix_t_table"] {
        let e = ex(name);
        let n = e.cat().n_objects();
        for x in 0..n {
            for z in 0..n {
                let d = e.e_dim_ind(x, z);
                let t = e.realize(&one(x), &one(z), &vec![Scalar::ZERO; d]).unwrap();
                assert_eq!(t.y.sorted(), FormalObject(vec![x, z]).sorted(), "{name}");
                assert!(e.verify_long_exact(&t).all_passed(), "{name}");
            }
        }
    }
}

#[test]
fn corrupted_delta_breaks_exactness_at_x() {
    let e = ex("fix_a");
    let f = e.field();
    let mut t = e.realize(&one(0), &one(0), &[f.one()]).unwrap();
    t.delta = vec![Scalar::ZERO];
    let rep = e.verify_long_exact(&t);
    let c = rep.get("long_exact").unwrap();
    assert!(c.failed());
    let w = c.witness.as_ref().unwrap().to_string();
    assert!(w.contains("(-,X)"), "{w}");
}

#[test]
fn pullback_along_scalars() {
    let e = ex("fix_a");
    let f = e.field();
    let c = e.cat().clone();
    let t = e.realize(&one(0), &one(0), &[f.one()]).unwrap();
    for k in [0i64, 1, 3, 100] {
        let s = f.from_i64(k);
        let m = BlockMorphism::identity(&c, &one(0)).scale(&c, s);
        assert_eq!(e.e_pull(&m, &one(0)).mul_vec(&t.delta), vec![s]);
        let sq = e.pullback_triangle(&t, &m).unwrap();
        assert!(sq.auxiliary_report.all_passed(), "c = {k}");
        assert_eq!(sq.triangle.delta, vec![s]);
        if k == 0 {
            assert_eq!(sq.triangle.y.sorted(), FormalObject(vec![0, 0]));
        } else {
            assert_eq!(sq.triangle.y, one(1));
        }
        let sq = e.pushout_triangle(&t, &m).unwrap();
        assert!(sq.auxiliary_report.all_passed(), "c = {k}");
    }
}

#[test]
fn deflations_and_zero_maps() {
    let caps = Caps::default();
    let e = ex("fix_a");
    let confl = e.deflations_onto(&one(0), &caps).unwrap();
    assert!(confl.exhaustive);
    assert!(confl.triangles.iter().any(|t| t.y == one(1) && t.z == one(0)));

    let e = ex("fix_t");
    let c = e.cat().clone();
    for x in 0..3 {
        let z = BlockMorphism::zero(&c, &FormalObject::zero(), &one(x));
        assert!(e.backend().deflation_cocone(&z).unwrap().is_some());
    }
}

#[test]
fn structure_flags() {
    let caps = Caps::default();
    for name in ["fix_a", "fix_p"] {
        let s = ex(name).classify_structure(&caps).unwrap();
        assert!(s.exhaustive);
        assert_eq!((s.inflations_mono, s.deflations_epi, s.all_morphisms_both), (true, true, false), "{name}");
    }
    for name in ["fix_t", "fix_t_table"] {
        let s = ex(name).classify_structure(&caps).unwrap();
        assert!(!s.inflations_mono && !s.deflations_epi, "{name}");
        assert!(s.all_morphisms_both, "{name}");
    }
}

#[test]
fn fix_t_shift_orientation() {
    for name in ["fix_t", "fix_t_table"] {
        let e = ex(name);
        let sh = e.triangulated().unwrap().shift();
        let c = e.cat();
        let img: Vec<&str> = (0..3).map(|x| c.label(sh.obj(x))).collect();
        assert_eq!(img, ["S3", "S1", "S2"], "{name}");
        for x in 0..3 {
            assert_eq!(sh.obj_inv(sh.obj(x)), x);
        }
    }
}

#[test]
fn stable_and_table_agree() {
    let a = ex("fix_t");
    let b = ex("fix_t_table");
    let caps = Caps::default();
    assert_eq!(a.cat().labels(), b.cat().labels());
    for x in 0..3 {
        for z in 0..3 {
            assert_eq!(a.e_dim_ind(x, z), b.e_dim_ind(x, z));
            for d in a.e_space(&one(x), &one(z)) {
                let ta = a.realize(&one(x), &one(z), &d).unwrap();
                let tb = b.realize(&one(x), &one(z), &d).unwrap();
                assert_eq!(ta.y.sorted(), tb.y.sorted());
            }
        }
        let da = a.deflations_onto(&one(x), &caps).unwrap();
        let db = b.deflations_onto(&one(x), &caps).unwrap();
        let mut ya: Vec<_> = da.triangles.iter().map(|t| (t.z.sorted(), t.y.sorted())).collect();
        let mut yb: Vec<_> = db.triangles.iter().map(|t| (t.z.sorted(), t.y.sorted())).collect();
        ya.sort();
        yb.sort();
        assert_eq!(ya, yb);
    }
}

#[test]
fn enumerated_triangles_are_long_exact() {
    let caps = Caps::default();
    let mut total = 0;
    for name in ["fix_a", "fix_a2", "fix_p", "fix_t", "fix_t_table", "point_table"] {
        let e = ex(name);
        for x in 0..e.cat().n_objects() {
            for t in e.deflations_onto(&one(x), &caps).unwrap().triangles {
                let rep = e.verify_long_exact(&t);
                assert!(rep.all_passed(), "{name}: {:?}", rep.failures().collect::<Vec<_>>());
                total += 1;
            }
        }
    }
    assert!(total >= 50, "{total}");
}

#[test]
fn additivity() {
    for name in ["fix_a", "fix_a2", "fix_t", "fix_t_table"] {
        let rep = ex(name).check_additivity(&Caps::default()).unwrap();
        assert!(rep.all_passed(), "{name}: {:?}", rep.failures().collect::<Vec<_>>());
    }
}
