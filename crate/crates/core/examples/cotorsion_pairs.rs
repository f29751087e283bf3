//! Enumerate the cotorsion pairs of FIX-T and compute a few star products.

use exlex::extri::Caps;
use exlex::fixtures;
use exlex::heart::{Ambient, PAIR_GUARD};

fn main() {
    let l = fixtures::load("fix_t").unwrap();
    let a = Ambient::new(l.extri().unwrap(), Caps::default()).unwrap();
    let (pairs, exhaustive) = a.enumerate_cotorsion_pairs(PAIR_GUARD).unwrap();
    println!("{} pairs (exhaustive: {exhaustive})", pairs.len());
    for p in &pairs {
        println!("  {}", p.to_json(a.cat()));
    }
    let star = a.star(&[1], &[0]).unwrap();
    println!("S2 * S1 = {:?}", star.objects.iter().map(|&x| a.cat().label(x)).collect::<Vec<_>>());
}
