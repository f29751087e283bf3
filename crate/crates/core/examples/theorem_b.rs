//! Compare the heart with left exact functors on U[-1] for FIX-U and its
//! rotations, and with mod U.

use exlex::extri::Caps;
use exlex::fixtures;
use exlex::heart::{Ambient, CotorsionPair, Heart};

fn main() {
    let l = fixtures::load("fix_t").unwrap();
    let e = l.extri().unwrap();
    let a = Ambient::new(e, Caps::default()).unwrap();
    let (u, v) = l.pair.clone().unwrap();
    for k in 0..3 {
        let pair = CotorsionPair::new(a.shifted(&u, k), a.shifted(&v, k));
        let h = Heart::new(e, &pair, Caps::default()).unwrap();
        let tb = h.verify_theorem_b().unwrap();
        println!("pair {}: heart {} / lex {} indecomposables", pair.to_json(a.cat()), tb.heart_indecomposables, tb.lex_indecomposables);
        for c in tb.report.checks.iter().chain(&h.heart_vs_mod_p().unwrap().checks) {
            println!("  {:?} {}", c.status, c.name);
        }
    }
}
