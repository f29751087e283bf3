//! Defects of the enumerated conflations of FIX-A, and the simples they
//! generate.

use exlex::defloc::{defect, Defloc};
use exlex::fixtures;

fn main() {
    let l = fixtures::load("fix_a").unwrap();
    let c = &l.category;
    let d = Defloc::new(l.extri().unwrap(), l.caps);
    let confl = d.conflations().unwrap();
    println!("{} conflations (exhaustive: {})", confl.triangles.len(), confl.exhaustive);
    for t in confl.triangles.iter().take(8) {
        let df = defect(c, t);
        println!("{} -> {} -> {}   defect dims {:?}", t.z.describe(c), t.y.describe(c), t.x.describe(c), df.dims());
    }
    let sigma: Vec<&str> = d.def_simples().iter().map(|&x| c.label(x)).collect();
    println!("Σ = {sigma:?}");
}
