//! Build a path category from a bound quiver and validate its axioms.

use exlex::exactlin::Field;
use exlex::kcat::{validate_category, Quiver, QuiverArrow, Relation};

fn main() {
    // the radical-square-zero loop algebra k[x]/x^2 on one vertex, plus A2
    let arrow = |n: &str, s: &str, t: &str| QuiverArrow { name: n.into(), src: s.into(), tgt: t.into() };
    let q = Quiver {
        vertices: vec!["o".into(), "1".into()],
        arrows: vec![arrow("x", "o", "o"), arrow("a", "o", "1")],
        relations: vec![Relation(vec![(1, vec!["x".into(), "x".into()])])],
        max_length: Some(2),
    };
    let c = q.to_category(Field::prime(5).unwrap()).unwrap();
    for x in 0..c.n_objects() {
        let row: Vec<usize> = (0..c.n_objects()).map(|y| c.hom_dim(x, y)).collect();
        println!("Hom({}, -) dims {row:?}", c.label(x));
    }
    for chk in validate_category(&c).checks {
        println!("{:?} {}", chk.status, chk.name);
    }
}
