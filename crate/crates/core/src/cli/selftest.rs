//! A fast invariant sweep over the bundled fixtures, including the
//! negative controls that must fail.

use serde_json::{json, Value};

use crate::defloc::{Defloc, ModuleUniverse};
use crate::error::Result;
use crate::fixtures;
use crate::heart::{CotorsionPair, Heart};
use crate::kcat::validate_category;
use crate::report::{Check, Report};

const EXTRI: &[&str] = &["fix_a", "fix_a2", "fix_p", "fix_t", "fix_t_table"];

fn prefixed(rep: &mut Report, prefix: &str, other: Report) {
    for c in other.checks {
        rep.push(Check { name: format!("{prefix}.{}", c.name), ..c });
    }
}

pub fn selftest() -> Result<(Report, Value)> {
    let mut rep = Report::new();
    let mut summary = Vec::new();

    for name in EXTRI {
        let l = fixtures::load(name)?;
        let ex = l.extri()?;
        prefixed(&mut rep, name, validate_category(&l.category));
        let dl = Defloc::new(ex, l.caps);
        let sigma = dl.def_simples();
        let oracle = dl.sigma_oracle()?;
        rep.push(Check { name: format!("{name}.{}", oracle.name), ..oracle });

        let confl = dl.conflations()?;
        let bad = confl.triangles.iter().find_map(|t| ex.verify_long_exact(t).failures().next().map(|c| json!({"triangle": t.to_json(&l.category), "check": c.name})));
        rep.push(Check::from_witness(format!("{name}.long_exact"), bad).with_exhaustive(confl.exhaustive));

        let uni = ModuleUniverse::new(&l.category, 3)?;
        let (lex, _) = dl.lex_equals_perp(&uni)?;
        rep.push(Check { name: format!("{name}.{}", lex.name), ..lex });
        summary.push(json!({"input": name, "sigma": sigma.iter().map(|&x| l.category.label(x)).collect::<Vec<_>>(), "conflations": confl.triangles.len()}));
    }

    let t = fixtures::load("fix_t")?;
    let (u, v) = t.pair.clone().expect("fix_t selects a pair");
    let h = Heart::new(t.extri()?, &CotorsionPair::new(u, v), t.caps)?;
    prefixed(&mut rep, "fix_t", h.verify_theorem_b()?.report);

    // negative control: the corrupted category must be rejected
    let bad = fixtures::load("corrupt_assoc")?;
    let v = validate_category(&bad.category);
    let caught = v.any_failed();
    rep.push(Check::from_witness(
        "corrupt_assoc.rejected",
        (!caught).then(|| json!({"kind": "negative_control_passed", "input": "corrupt_assoc"})),
    ));

    Ok((rep, json!({"inputs": summary})))
}
