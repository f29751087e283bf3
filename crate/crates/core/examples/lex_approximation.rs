//! The left exact approximation 0 -> S -> F -> G -> ... of every
//! indecomposable, on mod U for FIX-U and on mod A2.

use exlex::defloc::ModuleUniverse;
use exlex::extri::Caps;
use exlex::fixtures;
use exlex::heart::{CotorsionPair, Heart, LexContext};

fn show(label: &str, ctx: &LexContext) {
    let uni = ModuleUniverse::new(ctx.cat(), 4).unwrap();
    for m in uni.indecomposables() {
        let la = ctx.approximate(m).unwrap();
        println!("{label}: F {:?}  S {:?}  G {:?}  all checks {}", m.dims(), la.s.dims(), la.g.dims(), la.report.all_passed());
    }
}

fn main() {
    let l = fixtures::load("fix_t").unwrap();
    let (u, v) = l.pair.clone().unwrap();
    let h = Heart::new(l.extri().unwrap(), &CotorsionPair::new(u, v), Caps::default()).unwrap();
    show("FIX-U", &LexContext::cotorsion(&h).unwrap());
    let a2 = fixtures::load("fix_a2").unwrap();
    show("A2", &LexContext::abelian(a2.extri().unwrap(), Caps::default()).unwrap());
}
