//! Command dispatch for the `exlex` binary: load an input, run one
//! verifier, and emit a certificate.

pub mod certificate;
pub mod input;
mod selftest;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use certificate::{Certificate, InputInfo, Options};
pub use selftest::selftest;

use crate::defloc::{in_def, Defloc, ModuleUniverse};
use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::fixtures;
use crate::fpmod::simple;
use crate::heart::{Ambient, CotorsionPair, Heart, PAIR_GUARD};
use crate::kcat::validate_category;
use crate::report::{Check, Report, Status};
use input::{load_path, CapsSpec, FieldSpec, Loaded, PairSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "exlex", version, about = "Defects, effaceable functors and hearts over finite k-linear categories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// e.g. `mult=2,enum=10000,samples=100,dim=4`
    #[arg(long, global = true)]
    pub caps: Option<String>,
    /// `101`, `p=101` or `Q`
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// `U=S1 V=S1,S3`
    #[arg(long, global = true, num_args = 1..=2, value_delimiter = ';')]
    pub pair: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Category axioms and backend construction.
    Validate { input: PathBuf },
    /// Defects of enumerated conflations and the simples of `def C`.
    Defects { input: PathBuf },
    /// `Σ` with the effaceability oracle per simple.
    DefSimples { input: PathBuf },
    /// `mod C / def C ≅ mod eAe`.
    Quotient { input: PathBuf },
    /// Exact embedding / abelian equivalence classification.
    TheoremA { input: PathBuf },
    /// Left exact indecomposables, checked against the perpendicular test.
    Lex { input: PathBuf },
    /// All cotorsion pairs of a triangulated backend.
    CotorsionEnumerate { input: PathBuf },
    /// Heart presentation, reflections and coreflections.
    Heart { input: PathBuf },
    /// Heart against left exact functors on `U[-1]`.
    VerifyTheoremB { input: PathBuf },
    /// Heart against `mod P` for enough projectives `P`.
    HeartVsModP { input: PathBuf },
    /// The invariant suite on the bundled fixtures.
    Selftest,
    /// Re-run a certificate and check that its results reproduce.
    Replay { certificate: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Defects { .. } => "defects",
            Command::DefSimples { .. } => "def-simples",
            Command::Quotient { .. } => "quotient",
            Command::TheoremA { .. } => "theorem-a",
            Command::Lex { .. } => "lex",
            Command::CotorsionEnumerate { .. } => "cotorsion-enumerate",
            Command::Heart { .. } => "heart",
            Command::VerifyTheoremB { .. } => "verify-theorem-b",
            Command::HeartVsModP { .. } => "heart-vs-mod-p",
            Command::Selftest => "selftest",
            Command::Replay { .. } => "replay",
        }
    }

    fn input(&self) -> Option<&Path> {
        match self {
            Command::Validate { input }
            | Command::Defects { input }
            | Command::DefSimples { input }
            | Command::Quotient { input }
            | Command::TheoremA { input }
            | Command::Lex { input }
            | Command::CotorsionEnumerate { input }
            | Command::Heart { input }
            | Command::VerifyTheoremB { input }
            | Command::HeartVsModP { input } => Some(input),
            Command::Selftest | Command::Replay { .. } => None,
        }
    }
}

/// `U=S1 V=S1,S3` (also accepts `;` between the halves).
pub fn parse_pair(parts: &[String]) -> Result<PairSpec> {
    let mut p = PairSpec::default();
    let mut seen = (false, false);
    for part in parts.iter().flat_map(|s| s.split([' ', ';'])).filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Schema(format!("bad pair entry `{part}`")))?;
        let labels: Vec<String> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
        match k.trim() {
            "U" => (p.u, seen.0) = (labels, true),
            "V" => (p.v, seen.1) = (labels, true),
            other => return Err(Error::Schema(format!("pair key `{other}` is not U or V"))),
        }
    }
    if !(seen.0 && seen.1) {
        return Err(Error::Schema("pair needs both U=… and V=…".into()));
    }
    Ok(p)
}

pub fn field_name(f: Field) -> String {
    match f {
        Field::Prime(p) => format!("p={p}"),
        Field::Rationals => "Q".into(),
    }
}

/// A file path, or the name of a bundled fixture when no such file exists.
pub fn load_input(path: &Path, field: Option<&FieldSpec>, caps: Option<&CapsSpec>, seed: u64) -> Result<Loaded> {
    if path.exists() {
        return load_path(path, field, caps, seed);
    }
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    if fixtures::text(&name).is_ok() {
        return fixtures::load_with(&name, field, caps, seed);
    }
    Err(Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, format!("{}: no such file", path.display()))))
}

fn labels(l: &Loaded, objs: &[usize]) -> Vec<String> {
    objs.iter().map(|&x| l.category.label(x).to_string()).collect()
}

fn selected_pair(l: &Loaded) -> Result<CotorsionPair> {
    let (u, v) = l.pair.clone().ok_or_else(|| Error::Schema("command needs a cotorsion pair (--pair U=… V=…)".into()))?;
    Ok(CotorsionPair::new(u, v))
}

/// The heart of the selected pair, or a FAIL check naming why the pair is
/// not a cotorsion pair.
fn selected_heart(l: &Loaded, rep: &mut Report) -> Result<Option<Heart>> {
    let ex = l.extri()?;
    let pair = selected_pair(l)?;
    let chk = Ambient::new(ex, l.caps)?.is_cotorsion_pair(&pair)?;
    if !chk.holds {
        let c = &l.category;
        let w = json!({
            "kind": "not_a_cotorsion_pair",
            "pair": pair.to_json(c),
            "hom": chk.hom_witness,
            "decomposition": chk.failure,
        });
        rep.push(Check::fail("cotorsion_pair", w).with_exhaustive(chk.exhaustive));
        return Ok(None);
    }
    rep.push(Check::pass("cotorsion_pair").with_exhaustive(chk.exhaustive));
    Ok(Some(Heart::new(ex, &pair, l.caps)?))
}

/// Like [`run_command`], but search caps and size guards become a SKIPPED
/// check in the certificate instead of an error.
pub fn run_capped(name: &str, l: &Loaded) -> Result<(Report, Value)> {
    match run_command(name, l) {
        Err(e @ (Error::SearchExhausted(_) | Error::SizeGuard(_))) => {
            let mut rep = Report::new();
            let mut c = Check::skipped(format!("{name}.caps"), &e.to_string());
            c.exhaustive = false;
            rep.push(c);
            Ok((rep, Value::Null))
        }
        r => r,
    }
}

/// Run one command on a loaded input: the checks and the result payload.
pub fn run_command(name: &str, l: &Loaded) -> Result<(Report, Value)> {
    let c = l.category.clone();
    let mut rep = Report::new();
    let universe = || ModuleUniverse::new(&c, l.max_dim);
    let result = match name {
        "validate" => {
            rep.extend(validate_category(&c));
            let mut out = json!({
                "objects": c.labels(),
                "hom_dims": (0..c.n_objects()).map(|x| (0..c.n_objects()).map(|y| c.hom_dim(x, y)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            if let Some(ex) = &l.extri {
                rep.extend(ex.check_additivity(&l.caps)?);
                out["backend"] = json!(ex.kind());
                out["structure"] = json!(ex.classify_structure(&l.caps)?);
            }
            out
        }
        "defects" | "def-simples" => {
            let dl = Defloc::new(l.extri()?, l.caps);
            let sigma = dl.def_simples();
            rep.push(dl.sigma_oracle()?);
            let mut out = json!({"sigma": labels(l, &sigma)});
            if name == "defects" {
                let confl = dl.conflations()?;
                let mut seen: Vec<Vec<usize>> = Vec::new();
                let mut nonzero = Vec::new();
                for t in &confl.triangles {
                    let d = crate::defloc::defect(&c, t);
                    if !d.is_zero() && !seen.iter().any(|s| s.as_slice() == d.dims()) {
                        seen.push(d.dims().to_vec());
                        nonzero.push(json!({"triangle": t.to_json(&c), "defect": d.dims_json()}));
                    }
                }
                let outside = confl.triangles.iter().find(|t| !in_def(&sigma, &crate::defloc::defect(&c, t)));
                rep.push(
                    Check::from_witness("defects.in_def", outside.map(|t| json!({"kind": "defect_outside", "triangle": t.to_json(&c)})))
                        .with_exhaustive(confl.exhaustive),
                );
                out["conflations"] = json!(confl.triangles.len());
                out["nonzero_defects"] = json!(nonzero);
            }
            out
        }
        "quotient" => {
            let dl = Defloc::new(l.extri()?, l.caps);
            let sigma = dl.def_simples();
            let q = dl.serre_quotient(&sigma)?;
            let mut bad = None;
            for x in 0..c.n_objects() {
                let killed = q.module(&simple(&c, x)?).is_zero();
                if killed != sigma.contains(&x) {
                    bad = Some(json!({"kind": "quotient_on_simple", "simple": c.label(x), "killed": killed}));
                    break;
                }
            }
            rep.push(Check::from_witness("quotient.kills_sigma", bad));
            q.to_json()
        }
        "theorem-a" => {
            let dl = Defloc::new(l.extri()?, l.caps);
            let ta = dl.theorem_a(&universe()?)?;
            rep.extend(ta.report.clone());
            json!({
                "is_exact_embedding": ta.is_exact_embedding,
                "is_abelian_equivalence": ta.is_abelian_equivalence,
                "eae_indecomposables": ta.eae_indecomposables,
                "hit": ta.hit,
            })
        }
        "lex" => {
            let dl = Defloc::new(l.extri()?, l.caps);
            let u = universe()?;
            let (chk, lex) = dl.lex_equals_perp(&u)?;
            rep.push(chk);
            json!({"left_exact": lex.iter().map(|&i| u.indecomposables()[i].dims_json()).collect::<Vec<_>>()})
        }
        "cotorsion-enumerate" => {
            let a = Ambient::new(l.extri()?, l.caps)?;
            let (pairs, exhaustive) = a.enumerate_cotorsion_pairs(PAIR_GUARD)?;
            let s = a.shift();
            let bad = pairs.iter().find_map(|p| {
                p.u.iter().find_map(|&u| {
                    p.v.iter().find(|&&v| c.hom_dim(u, s.obj(v)) != 0).map(|&v| json!({"kind": "hom_nonzero", "u": c.label(u), "v": c.label(v)}))
                })
            });
            rep.push(Check::from_witness("cotorsion.hom_vanishing", bad).with_exhaustive(exhaustive));
            json!({"pairs": pairs.iter().map(|p| p.to_json(&c)).collect::<Vec<_>>(), "count": pairs.len()})
        }
        "heart" => {
            let Some(h) = selected_heart(l, &mut rep)? else { return Ok((rep, Value::Null)) };
            let mut refl = Vec::new();
            for x in 0..c.n_objects() {
                let r = h.reflection(x)?;
                let cr = h.coreflection(x)?;
                rep.push(Check { name: format!("reflection.{}", c.label(x)), ..r.adjunction.clone() });
                rep.push(Check { name: format!("coreflection.{}", c.label(x)), ..cr.adjunction.clone() });
                refl.push(json!({"object": c.label(x), "reflection": r.to_json(&c), "coreflection": cr.to_json(&c)}));
            }
            json!({"heart": h.presentation().to_json(&c), "reflections": refl})
        }
        "verify-theorem-b" => {
            let Some(h) = selected_heart(l, &mut rep)? else { return Ok((rep, Value::Null)) };
            let tb = h.verify_theorem_b()?;
            rep.extend(tb.report);
            json!({
                "heart": h.presentation().to_json(&c),
                "equivalence": tb.table,
                "heart_indecomposables": tb.heart_indecomposables,
                "lex_indecomposables": tb.lex_indecomposables,
                "density_bound": tb.bound,
            })
        }
        "heart-vs-mod-p" => {
            let Some(h) = selected_heart(l, &mut rep)? else { return Ok((rep, Value::Null)) };
            rep.extend(h.heart_vs_mod_p()?);
            json!({"heart": h.presentation().to_json(&c)})
        }
        other => return Err(Error::Unsupported(format!("unknown command `{other}`"))),
    };
    Ok((rep, result))
}

fn options_of(l: &Loaded, seed: u64) -> Options {
    let pair = l.pair.as_ref().map(|(u, v)| PairSpec { u: labels(l, u), v: labels(l, v) });
    Options {
        seed,
        field: field_name(l.field),
        mult: l.caps.mult,
        enumerate: l.caps.enumerate,
        samples: l.caps.samples,
        max_dim: l.max_dim,
        pair,
    }
}

/// Load and run; `pair` overrides the pair selected in the file.
pub fn certify(command: &str, path: &Path, field: Option<&FieldSpec>, caps: Option<&CapsSpec>, pair: Option<&PairSpec>, seed: u64) -> Result<Certificate> {
    let mut l = load_input(path, field, caps, seed)?;
    if let Some(p) = pair {
        l.pair = Some((l.category.indices_of(&p.u)?, l.category.indices_of(&p.v)?));
    }
    let (rep, result) = run_capped(command, &l)?;
    let input = InputInfo { path: path.display().to_string(), digest: l.digest.clone() };
    Ok(Certificate::new(command, input, options_of(&l, seed), rep, result))
}

/// Re-run the command of a certificate with its recorded options and
/// compare digests and every check outcome, witnesses included.
pub fn replay(path: &Path) -> Result<Certificate> {
    let text = std::fs::read_to_string(path)?;
    let old: Certificate = serde_json::from_str(&text)?;
    let o = &old.options;
    let mut rep = Report::new();
    let result = if old.command == "selftest" {
        let (r, _) = selftest()?;
        compare(&mut rep, &old.checks, &r.checks);
        json!({"replayed": "selftest"})
    } else {
        let caps = CapsSpec { mult: Some(o.mult), enumerate: Some(o.enumerate), samples: Some(o.samples), max_dim: Some(o.max_dim) };
        let field = FieldSpec::parse(&o.field)?;
        let new = certify(&old.command, Path::new(&old.input.path), Some(&field), Some(&caps), o.pair.as_ref(), o.seed)?;
        rep.push(Check::from_witness(
            "replay.digest",
            (new.input.digest != old.input.digest).then(|| json!({"kind": "input_changed", "recorded": old.input.digest, "now": new.input.digest})),
        ));
        compare(&mut rep, &old.checks, &new.checks);
        json!({"replayed": old.command, "input": old.input.path, "failures_reproduced": old.checks.iter().filter(|c| c.failed()).count()})
    };
    let input = InputInfo { path: path.display().to_string(), digest: input::digest(&text) };
    Ok(Certificate::new("replay", input, old.options.clone(), rep, result))
}

fn compare(rep: &mut Report, old: &[Check], new: &[Check]) {
    for c in old {
        let w = match new.iter().find(|n| n.name == c.name) {
            None => Some(json!({"kind": "check_missing", "check": c.name})),
            Some(n) if n.status != c.status || n.witness != c.witness => {
                Some(json!({"kind": "outcome_changed", "check": c.name, "recorded": c.status, "now": n.status, "witness_now": n.witness}))
            }
            Some(_) => None,
        };
        rep.push(Check::from_witness(format!("replay.{}", c.name), w));
    }
}

/// Parse arguments, run, and render. Returns the exit code and the text
/// written to stdout; errors go to the returned text with exit code 2.
pub fn execute<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    match dispatch(&cli) {
        Ok(cert) => {
            let out = match cli.format {
                Format::Json => cert.to_json(),
                Format::Text => cert.to_text(),
            };
            (if cert.status == Status::Fail { 1 } else { 0 }, out)
        }
        Err(e) => (2, format!("error: {e}\n")),
    }
}

fn dispatch(cli: &Cli) -> Result<Certificate> {
    let field = cli.field.as_deref().map(FieldSpec::parse).transpose()?;
    let caps = cli.caps.as_deref().map(CapsSpec::parse).transpose()?;
    let pair = if cli.pair.is_empty() { None } else { Some(parse_pair(&cli.pair)?) };
    match &cli.command {
        Command::Selftest => {
            let (rep, result) = selftest()?;
            let caps = crate::extri::Caps::default();
            let options = Options {
                seed: caps.seed,
                field: "fixture".into(),
                mult: caps.mult,
                enumerate: caps.enumerate,
                samples: caps.samples,
                max_dim: 4,
                pair: None,
            };
            Ok(Certificate::new("selftest", InputInfo { path: "builtin".into(), digest: selftest_digest() }, options, rep, result))
        }
        Command::Replay { certificate } => replay(certificate),
        cmd => certify(cmd.name(), cmd.input().expect("input command"), field.as_ref(), caps.as_ref(), pair.as_ref(), cli.seed),
    }
}

fn selftest_digest() -> String {
    let all: String = fixtures::FILES.iter().map(|(_, t)| *t).collect();
    input::digest(&all)
}
