//! Effaceability of every simple, checked against the deflation criterion,
//! and on a few random modules.

use exlex::defloc::{in_def, Defloc};
use exlex::fixtures;
use exlex::fpmod::{random_module, simple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    for name in ["fix_a", "fix_a2", "fix_p", "fix_t"] {
        let l = fixtures::load(name).unwrap();
        let c = &l.category;
        let d = Defloc::new(l.extri().unwrap(), l.caps);
        let flags: Vec<String> = (0..c.n_objects())
            .map(|x| format!("{}:{}", c.label(x), d.is_effaceable(&simple(c, x).unwrap()).unwrap().effaceable))
            .collect();
        println!("{name}: simples {}  oracle {:?}", flags.join(" "), d.sigma_oracle().unwrap().status);
    }
    let l = fixtures::load("fix_a").unwrap();
    let d = Defloc::new(l.extri().unwrap(), l.caps);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let m = random_module(&l.category, &mut rng, 2);
        let e = d.is_effaceable(&m).unwrap();
        println!("module {:?}: effaceable {} in def {}", m.dims(), e.effaceable, in_def(&d.def_simples(), &m));
    }
}
