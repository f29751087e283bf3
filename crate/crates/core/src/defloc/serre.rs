use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{defect, in_def, Defloc};
use crate::exactlin::Mat;
use crate::fpmod::{cokernel, radical_subspaces, enumerate_indecomposables, kernel, random_map, simple, Enumeration, Ext1, FpModule};
use crate::kcat::FiniteLinearCategory;
use crate::report::{Check, Report};
use crate::Result;

/// Every module of total dimension up to a bound, one per iso class.
pub struct ModuleUniverse {
    pub enumeration: Enumeration,
    pub modules: Vec<FpModule>,
    pub bound: usize,
}

impl ModuleUniverse {
    pub fn new(cat: &Arc<FiniteLinearCategory>, bound: usize) -> Result<ModuleUniverse> {
        let enumeration = enumerate_indecomposables(cat, bound, 1_000_000)?;
        let modules = enumeration.module_classes(bound).iter().map(|m| enumeration.build(cat, m)).collect();
        Ok(ModuleUniverse { enumeration, modules, bound })
    }

    pub fn indecomposables(&self) -> &[FpModule] {
        &self.enumeration.indecomposables
    }
}

fn dims(m: &FpModule) -> Value {
    m.dims_json()
}

impl Defloc {
    /// For every simple: membership in `def_simples` against the effaceability oracle.
    pub fn sigma_oracle(&self) -> Result<Check> {
        let c = self.cat().clone();
        let sigma = self.def_simples();
        let mut rows = Vec::new();
        let mut bad = Vec::new();
        let mut exhaustive = true;
        for x in 0..c.n_objects() {
            let e = self.is_effaceable(&simple(&c, x)?)?;
            exhaustive &= e.exhaustive;
            let member = sigma.contains(&x);
            rows.push(json!({"simple": c.label(x), "in_sigma": member, "effaceable": e.effaceable}));
            if member != e.effaceable {
                bad.push(json!({"simple": c.label(x), "in_sigma": member, "effaceable": e.effaceable, "obstruction": e.obstruction}));
            }
        }
        let check = if bad.is_empty() { Check::pass("sigma_oracle") } else { Check::fail("sigma_oracle", json!({"kind": "sigma_mismatch", "simples": bad})) };
        Ok(check.with_detail(json!({"simples": rows})).with_exhaustive(exhaustive))
    }

    /// `is_effaceable(F) ⟺ factors(F) ⊆ Σ` for every module in the universe.
    pub fn eff_equals_def(&self, universe: &ModuleUniverse) -> Result<Check> {
        let sigma = self.def_simples();
        let mut exhaustive = true;
        let mut count = 0;
        for m in &universe.modules {
            let e = self.is_effaceable(m)?;
            exhaustive &= e.exhaustive;
            count += 1;
            if e.effaceable != in_def(&sigma, m) {
                return Ok(Check::fail(
                    "eff_equals_def",
                    json!({"kind": "eff_def_mismatch", "module": m.to_json(), "effaceable": e.effaceable, "obstruction": e.obstruction}),
                )
                .with_exhaustive(exhaustive));
            }
        }
        Ok(Check::pass("eff_equals_def").with_detail(json!({"modules": count, "bound": universe.bound})).with_exhaustive(exhaustive))
    }

    /// Closure properties of the class cut out by `sigma`, judged by the
    /// effaceability oracle: members are effaceable, and so are their
    /// submodules, quotients and extensions; defects lie in the class and
    /// kernels and cokernels of random maps between defects stay there.
    pub fn verify_serre(&self, sigma: &[usize], universe: &ModuleUniverse, defect_maps: usize) -> Result<Report> {
        let c = self.cat().clone();
        let fl = c.field();
        let mut rep = Report::new();
        let mut rng = ChaCha8Rng::seed_from_u64(self.caps().seed);

        // simples
        let mut bad = Vec::new();
        for x in 0..c.n_objects() {
            let e = self.is_effaceable(&simple(&c, x)?)?;
            if e.effaceable != sigma.contains(&x) {
                bad.push(json!({"simple": c.label(x), "in_sigma": sigma.contains(&x), "effaceable": e.effaceable}));
            }
        }
        rep.push(if bad.is_empty() { Check::pass("serre.simples") } else { Check::fail("serre.simples", json!({"kind": "simples", "mismatches": bad})) });

        // submodules and quotients of members: by single generators and radical layers
        let members: Vec<&FpModule> = universe.modules.iter().filter(|m| !m.is_zero() && in_def(sigma, m)).collect();
        let mut witness = None;
        let mut exhaustive = true;
        let mut tried = 0;
        'outer: for m in &members {
            let mut subs: Vec<Vec<Mat>> = vec![radical_subspaces(m)];
            for x in 0..c.n_objects() {
                for k in 0..m.dim(x) {
                    let mut gens: Vec<Mat> = (0..c.n_objects()).map(|y| Mat::zeros(fl, m.dim(y), 0)).collect();
                    let mut v = vec![fl.zero(); m.dim(x)];
                    v[k] = fl.one();
                    gens[x] = Mat::column(fl, &v);
                    subs.push(m.generated_by(&gens));
                }
            }
            for s in subs {
                let (sub, _) = m.submodule(&s)?;
                let (quo, _, _) = m.quotient(&s);
                for (what, part) in [("submodule", &sub), ("quotient", &quo)] {
                    tried += 1;
                    let e = self.is_effaceable(part)?;
                    exhaustive &= e.exhaustive;
                    if !e.effaceable {
                        witness = Some(json!({"kind": what, "module": dims(m), "part": part.to_json(), "obstruction": e.obstruction}));
                        break 'outer;
                    }
                }
            }
        }
        rep.push(match witness {
            None => Check::pass("serre.subquotients").with_detail(json!({"members": members.len(), "tried": tried})),
            Some(w) => Check::fail("serre.subquotients", w),
        }.with_exhaustive(exhaustive));

        // extensions between indecomposable members: zero, basis and random classes
        let ind: Vec<&FpModule> = universe.indecomposables().iter().filter(|m| in_def(sigma, m)).collect();
        let mut witness = None;
        let mut exhaustive = true;
        let mut tried = 0;
        'ext: for a in &ind {
            for cc in &ind {
                let ext = Ext1::compute(cc, a);
                let d = ext.dim();
                let mut classes = vec![vec![fl.zero(); d]];
                for i in 0..d {
                    let mut v = vec![fl.zero(); d];
                    v[i] = fl.one();
                    classes.push(v);
                }
                if d > 1 {
                    classes.push((0..d).map(|_| fl.random(&mut rng)).collect());
                }
                for v in classes {
                    let ses = ext.realize(&v);
                    tried += 1;
                    let e = self.is_effaceable(&ses.middle)?;
                    exhaustive &= e.exhaustive;
                    if !e.effaceable {
                        witness = Some(json!({"kind": "extension", "left": dims(a), "right": dims(cc), "middle": ses.middle.to_json(), "obstruction": e.obstruction}));
                        break 'ext;
                    }
                }
            }
        }
        rep.push(match witness {
            None => Check::pass("serre.extensions").with_detail(json!({"extensions": tried})),
            Some(w) => Check::fail("serre.extensions", w),
        }.with_exhaustive(exhaustive));

        // defects
        let confl = self.conflations()?;
        let defects: Vec<FpModule> = confl.triangles.iter().map(|t| defect(&c, t)).collect();
        let outside = confl.triangles.iter().zip(&defects).find(|(_, d)| !in_def(sigma, d));
        rep.push(match outside {
            None => Check::pass("serre.defects").with_detail(json!({"conflations": defects.len()})),
            Some((t, d)) => Check::fail("serre.defects", json!({"kind": "defect_outside", "triangle": t.to_json(&c), "defect": d.to_json()})),
        }.with_exhaustive(confl.exhaustive));

        let nonzero: Vec<&FpModule> = defects.iter().filter(|d| !d.is_zero()).collect();
        let mut witness = None;
        let mut done = 0;
        if !nonzero.is_empty() {
            for _ in 0..defect_maps {
                let a = nonzero[rng.gen_range(0..nonzero.len())];
                let b = nonzero[rng.gen_range(0..nonzero.len())];
                let phi = random_map(&mut rng, a, b);
                let (k, _) = kernel(&phi, a);
                let (q, _) = cokernel(&phi, b);
                done += 1;
                for (what, part) in [("kernel", &k), ("cokernel", &q)] {
                    if !in_def(sigma, part) || !self.is_effaceable(part)?.effaceable {
                        witness = Some(json!({"kind": what, "source": a.to_json(), "target": b.to_json(), "part": part.to_json()}));
                    }
                }
                if witness.is_some() {
                    break;
                }
            }
        }
        rep.push(match witness {
            None if nonzero.is_empty() => Check::pass("serre.defect_maps").with_detail(json!({"maps": 0, "note": "all defects vanish"})),
            None => Check::pass("serre.defect_maps").with_detail(json!({"maps": done})).with_exhaustive(false),
            Some(w) => Check::fail("serre.defect_maps", w),
        });
        Ok(rep)
    }

    /// `is_left_exact ⟺ perp_test` on every indecomposable of the universe.
    pub fn lex_equals_perp(&self, universe: &ModuleUniverse) -> Result<(Check, Vec<usize>)> {
        let sigma = self.def_simples();
        let mut lex = Vec::new();
        let mut exhaustive = true;
        for (i, m) in universe.indecomposables().iter().enumerate() {
            let (l, ex, lw) = self.is_left_exact(m)?;
            exhaustive &= ex;
            let (p, pw) = self.perp_test(&sigma, m)?;
            if l != p {
                return Ok((
                    Check::fail("lex_equals_perp", json!({"kind": "lex_perp_mismatch", "module": m.to_json(), "left_exact": l, "perp": p, "lex_witness": lw, "perp_witness": pw}))
                        .with_exhaustive(exhaustive),
                    lex,
                ));
            }
            if l {
                lex.push(i);
            }
        }
        let detail = json!({
            "indecomposables": universe.indecomposables().len(),
            "left_exact": lex.iter().map(|&i| dims(&universe.indecomposables()[i])).collect::<Vec<_>>(),
        });
        Ok((Check::pass("lex_equals_perp").with_detail(detail).with_exhaustive(exhaustive), lex))
    }
}
