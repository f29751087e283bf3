//! The heart of the pair (add S1, add(S1 ⊕ S3)) on FIX-T: its objects,
//! reflections, coreflections and cohomology.

use exlex::extri::Caps;
use exlex::fixtures;
use exlex::heart::{CotorsionPair, Heart};
use exlex::kcat::FormalObject;

fn main() {
    let l = fixtures::load("fix_t").unwrap();
    let c = l.category.clone();
    let (u, v) = l.pair.clone().unwrap();
    let h = Heart::new(l.extri().unwrap(), &CotorsionPair::new(u, v), Caps::default()).unwrap();
    let p = h.presentation();
    println!("{}", serde_json::to_string_pretty(&p.to_json(&c)).unwrap());
    for x in 0..c.n_objects() {
        let r = h.reflection(x).unwrap();
        let cr = h.coreflection(x).unwrap();
        let coh = h.cohomology(&FormalObject::single(x)).unwrap();
        println!(
            "{}: X+ = {}  X- = {}  H(X) = {:?}  adjunctions {:?}/{:?}",
            c.label(x),
            r.target.describe(&c),
            cr.target.describe(&c),
            coh.object.iter().map(|&i| c.label(p.objects[i])).collect::<Vec<_>>(),
            r.adjunction.status,
            cr.adjunction.status
        );
    }
}
