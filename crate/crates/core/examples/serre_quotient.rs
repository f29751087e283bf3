//! The quotient mod C / def C as modules over eAe, and the exact/abelian
//! classification of the embedding into it.

use exlex::defloc::{Defloc, ModuleUniverse};
use exlex::fixtures;

fn main() {
    for name in ["fix_a", "fix_p", "fix_t"] {
        let l = fixtures::load(name).unwrap();
        let d = Defloc::new(l.extri().unwrap(), l.caps);
        let q = d.serre_quotient(&d.def_simples()).unwrap();
        println!("{name}: dim eAe = {}, kept objects {:?}", q.eae_dim(), q.keep);
        let t = d.theorem_a(&ModuleUniverse::new(d.cat(), 4).unwrap()).unwrap();
        println!(
            "  exact embedding {}  abelian equivalence {}  (hit {}/{} indecomposables)",
            t.is_exact_embedding, t.is_abelian_equivalence, t.hit, t.eae_indecomposables
        );
    }
}
