//! Realize every class of E(X, Z) on FIX-A and check the long exact
//! Hom/E sequences of each triangle.

use exlex::fixtures;
use exlex::kcat::FormalObject;

fn main() {
    let l = fixtures::load("fix_a").unwrap();
    let e = l.extri().unwrap();
    let c = e.cat();
    let f = e.field();
    for x in 0..c.n_objects() {
        for z in 0..c.n_objects() {
            let (xo, zo) = (FormalObject::single(x), FormalObject::single(z));
            let d = e.e_dim(&xo, &zo);
            for i in 0..d {
                let mut delta = vec![f.zero(); d];
                delta[i] = f.one();
                let t = e.realize(&xo, &zo, &delta).unwrap();
                let ok = e.verify_long_exact(&t).all_passed();
                println!("E({}, {}) basis {i}: middle {}  long exact {ok}", c.label(x), c.label(z), t.y.describe(c));
            }
        }
    }
}
