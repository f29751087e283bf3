use serde_json::json;

use super::local::LocalOutcome;
use super::FiniteLinearCategory;
use crate::exactlin::Scalar;
use crate::report::{Check, Report};

fn coords_json(c: &FiniteLinearCategory, v: &[Scalar]) -> serde_json::Value {
    json!(v.iter().map(|s| c.field().signed(*s).to_string()).collect::<Vec<_>>())
}

/// Associativity on all basis triples, unit laws, locality of every `End(X)`
/// and pairwise non-isomorphism of the listed objects.
pub fn validate_category(c: &FiniteLinearCategory) -> Report {
    let mut report = Report::new();
    let nb = c.n_basis();
    let n = c.n_objects();

    let mut assoc = Vec::new();
    for h in 0..nb {
        for g in 0..nb {
            if c.basis_elem(g).tgt != c.basis_elem(h).src {
                continue;
            }
            let hg = c.compose_basis(h, g).unwrap();
            for f in 0..nb {
                if c.basis_elem(f).tgt != c.basis_elem(g).src {
                    continue;
                }
                let (x, y, z, w) = (c.basis_elem(f).src, c.basis_elem(f).tgt, c.basis_elem(g).tgt, c.basis_elem(h).tgt);
                let gf = c.compose_basis(g, f).unwrap();
                let lhs = c.compose(x, y, w, hg, &c.basis_coords(f));
                let rhs = c.compose(x, z, w, &c.basis_coords(h), gf);
                if lhs != rhs {
                    assoc.push(json!({
                        "triple": [c.basis_elem(h).name, c.basis_elem(g).name, c.basis_elem(f).name],
                        "left": coords_json(c, &lhs),
                        "right": coords_json(c, &rhs),
                    }));
                }
            }
        }
    }
    let count = assoc.len();
    report.push(
        Check::from_witness("associativity", (!assoc.is_empty()).then(|| json!({ "kind": "associativity", "violations": assoc })))
            .with_detail(json!({ "violations": count })),
    );

    let mut units = Vec::new();
    for f in 0..nb {
        let b = c.basis_elem(f);
        let e = c.basis_coords(f);
        let left = c.compose(b.src, b.tgt, b.tgt, c.identity(b.tgt), &e);
        let right = c.compose(b.src, b.src, b.tgt, &e, c.identity(b.src));
        if left != e || right != e {
            units.push(json!({ "kind": "unit", "morphism": b.name }));
        }
    }
    report.push(Check::from_witness("unit_laws", (!units.is_empty()).then(|| json!({ "kind": "unit", "violations": units }))));

    let mut nonlocal = Vec::new();
    for x in 0..n {
        let w = match c.locality(x) {
            LocalOutcome::Local { .. } => continue,
            LocalOutcome::Splits { element, eigenvalue } => json!({
                "object": c.label(x),
                "reason": "element minus eigenvalue is singular but not nilpotent",
                "element": coords_json(c, element),
                "eigenvalue": c.field().signed(*eigenvalue).to_string(),
            }),
            LocalOutcome::NonSplitResidue { element } => json!({
                "object": c.label(x),
                "reason": "non-split residue field",
                "element": coords_json(c, element),
            }),
            LocalOutcome::Unknown => json!({ "object": c.label(x), "reason": "locality undecided" }),
        };
        nonlocal.push(w);
    }
    report.push(Check::from_witness(
        "local_endomorphisms",
        (!nonlocal.is_empty()).then(|| json!({ "kind": "nonlocal", "objects": nonlocal })),
    ));

    let mut isos = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            'pairs: for &f in c.hom(x, y) {
                for &g in c.hom(y, x) {
                    let gf = c.compose_basis(g, f).unwrap();
                    if !c.in_radical_coords(x, x, gf) {
                        isos.push(json!({
                            "objects": [c.label(x), c.label(y)],
                            "f": c.basis_elem(f).name,
                            "g": c.basis_elem(g).name,
                        }));
                        break 'pairs;
                    }
                }
            }
        }
    }
    report.push(Check::from_witness(
        "pairwise_non_isomorphic",
        (!isos.is_empty()).then(|| json!({ "kind": "isomorphic_objects", "pairs": isos })),
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::super::testcats::*;
    use super::super::CategoryBuilder;
    use super::*;
    use crate::exactlin::Field;

    #[test]
    fn fix_a_passes() {
        let r = validate_category(&fix_a(Field::Prime(101)));
        assert!(r.all_passed(), "{r:?}");
        assert!(validate_category(&point(Field::Rationals)).all_passed());
    }

    #[test]
    fn corrupted_associativity_fails_with_triple() {
        // dual numbers k[x]/(x^2) first, then a corrupted copy
        let f = Field::Prime(5);
        let mut b = CategoryBuilder::new(f, vec!["X".into()]);
        let one = b.add_basis(0, 0, "1");
        let x = b.add_basis(0, 0, "x");
        let o = Scalar::ONE;
        let z = Scalar::ZERO;
        b.set_identity(0, vec![o, z]);
        b.set_composition(one, one, vec![o, z]);
        b.set_composition(one, x, vec![z, o]);
        b.set_composition(x, one, vec![z, o]);
        b.set_composition(x, x, vec![z, z]);
        let good = b.build().unwrap();
        assert!(validate_category(&good).all_passed());

        let mut b = CategoryBuilder::new(f, vec!["X".into()]);
        let one = b.add_basis(0, 0, "1");
        let x = b.add_basis(0, 0, "x");
        b.set_identity(0, vec![o, z]);
        b.set_composition(one, one, vec![o, z]);
        // 1∘x = x, but x∘1 = 0: unit law and associativity break
        b.set_composition(one, x, vec![z, o]);
        b.set_composition(x, one, vec![z, z]);
        b.set_composition(x, x, vec![z, o]);
        let bad = b.build().unwrap();
        let r = validate_category(&bad);
        assert!(r.get("associativity").unwrap().failed());
        let w = r.get("associativity").unwrap().witness.as_ref().unwrap();
        assert!(w["violations"][0]["triple"].is_array());
    }

    #[test]
    fn isomorphic_objects_detected() {
        let f = Field::Prime(3);
        let mut b = CategoryBuilder::new(f, vec!["A".into(), "B".into()]);
        let ia = b.add_basis(0, 0, "idA");
        let ib = b.add_basis(1, 1, "idB");
        let u = b.add_basis(0, 1, "u");
        let v = b.add_basis(1, 0, "v");
        let o = vec![Scalar::ONE];
        b.set_identity(0, o.clone());
        b.set_identity(1, o.clone());
        for (g, h) in [(ia, ia), (ib, ib), (ib, u), (u, ia), (ia, v), (v, ib), (v, u), (u, v)] {
            b.set_composition(g, h, o.clone());
        }
        let c = b.build().unwrap();
        let r = validate_category(&c);
        assert!(r.get("associativity").unwrap().passed());
        assert!(r.get("pairwise_non_isomorphic").unwrap().failed());
    }
}
