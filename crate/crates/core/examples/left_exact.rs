//! Left exact functors among the indecomposables of mod C, cross-checked
//! against the perpendicular category of def C.

use exlex::defloc::{Defloc, ModuleUniverse};
use exlex::fixtures;

fn main() {
    for name in ["fix_a", "fix_a2", "fix_p", "fix_t"] {
        let l = fixtures::load(name).unwrap();
        let d = Defloc::new(l.extri().unwrap(), l.caps);
        let u = ModuleUniverse::new(d.cat(), 4).unwrap();
        let (chk, lex) = d.lex_equals_perp(&u).unwrap();
        let dims: Vec<&[usize]> = lex.iter().map(|&i| u.indecomposables()[i].dims()).collect();
        println!("{name}: {:?}, left exact indecomposables {dims:?}", chk.status);
    }
}
