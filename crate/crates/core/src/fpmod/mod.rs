//! Finitely presented functors on a finite category, as modules over its
//! category algebra.

mod decompose;
mod enumerate;
mod ext;
mod hom;
mod module;

pub use decompose::{decompose, end_algebra, find_iso_in, is_indecomposable, is_isomorphic, iso_indecomposable, Summand};
pub use enumerate::{direct_sum_with_maps, enumerate_indecomposables, multisets_of_weight, Enumeration};
pub use ext::{
    composition_factors, ext1_dim, is_projective, lift_to_covers, projective_cover, radical, radical_subspaces, simple,
    top, Ext1, ProjectiveCover, ShortExact,
};
pub use hom::{combine, coords_in, hom_dim, hom_module, yoneda, yoneda_element, yoneda_map, yoneda_morphism, yoneda_offset};
pub use module::{cokernel, exact_at, image, kernel, FpModule, ModuleMap};

use rand::Rng;
use std::sync::Arc;

use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};

/// A random quotient of a representable: the cokernel of a random map
/// `Hom(-, A) → Hom(-, B)` between small sums of indecomposables.
pub fn random_module<R: Rng + ?Sized>(cat: &Arc<FiniteLinearCategory>, rng: &mut R, max_summands: usize) -> FpModule {
    let n = cat.n_objects();
    let pick = |rng: &mut R| -> FormalObject {
        let k = rng.gen_range(0..=max_summands);
        FormalObject((0..k).map(|_| rng.gen_range(0..n)).collect())
    };
    let a = pick(rng);
    let b = {
        let mut b = pick(rng);
        if b.is_zero() {
            b = FormalObject::single(rng.gen_range(0..n));
        }
        b
    };
    let d = BlockMorphism::hom_dim(cat, &a, &b);
    let v: Vec<_> = (0..d).map(|_| cat.field().random(rng)).collect();
    let f = BlockMorphism::from_flat(cat, &a, &b, &v);
    let alpha = yoneda_morphism(cat, &f);
    cokernel(&alpha, &yoneda(cat, &b)).0
}

/// A random module map, drawn uniformly from `Hom(F, G)` via its basis.
pub fn random_map<R: Rng + ?Sized>(rng: &mut R, f: &FpModule, g: &FpModule) -> ModuleMap {
    let basis = hom_module(f, g);
    let coords: Vec<_> = basis.iter().map(|_| f.field().random(rng)).collect();
    combine(f, g, &basis, &coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{Field, Mat, Scalar};
    use crate::kcat::testcats::{fix_a, point};

    fn ca(p: u32) -> Arc<FiniteLinearCategory> {
        Arc::new(fix_a(Field::Prime(p)))
    }

    #[test]
    fn yoneda_dims() {
        let c = ca(101);
        assert!(yoneda(&c, &FormalObject::zero()).is_zero());
        assert_eq!(yoneda(&c, &FormalObject::single(1)).dims(), &[1, 2]);
        assert_eq!(yoneda(&c, &FormalObject::single(0)).dims(), &[1, 1]);
        for x in 0..2 {
            assert!(yoneda(&c, &FormalObject::single(x)).functoriality_violation().is_none());
        }
    }

    #[test]
    fn yoneda_lemma_and_hom_zero() {
        let c = ca(101);
        let z = FpModule::zero(c.clone());
        let s = simple(&c, 0).unwrap();
        assert!(hom_module(&s, &z).is_empty());
        let mods = [s.clone(), simple(&c, 1).unwrap(), yoneda(&c, &FormalObject(vec![0, 1]))];
        for x in 0..2 {
            let y = yoneda(&c, &FormalObject::single(x));
            for g in &mods {
                assert_eq!(hom_module(&y, g).len(), g.dim(x));
            }
        }
        assert_eq!(hom_module(&s, &s).len(), 1);
    }

    #[test]
    fn cokernel_of_x() {
        let c = ca(101);
        let x = BlockMorphism::from_basis(&c, c.basis_index("x").unwrap());
        let alpha = yoneda_morphism(&c, &x);
        let yp = yoneda(&c, &FormalObject::single(1));
        assert!(alpha.naturality_violation(&yp, &yp).is_none());
        let (q, _) = cokernel(&alpha, &yp);
        assert_eq!(q.dims(), &[1, 1]);
        assert!(kernel(&ModuleMap::identity(&yp), &yp).0.is_zero());
        let z = ModuleMap::zero(&yp, &yp);
        assert_eq!(cokernel(&z, &yp).0.dims(), yp.dims());
    }

    #[test]
    fn simples_and_composition_factors() {
        let c = ca(101);
        assert_eq!(simple(&c, 1).unwrap().dims(), &[0, 1]);
        let yp = yoneda(&c, &FormalObject::single(1));
        let cf = composition_factors(&yp);
        assert_eq!(cf.iter().sum::<usize>(), 3);
        assert_eq!(cf, yp.dims());
        assert!(composition_factors(&FpModule::zero(c.clone())).iter().all(|&m| m == 0));
    }

    /// dim Ext¹(S_X, S_Y) = dim rad(Y, X) / rad²(Y, X), computed from the
    /// structure constants alone.
    fn ext_simple_oracle(c: &FiniteLinearCategory, x: usize, y: usize) -> usize {
        let f = c.field();
        let rad_basis = |a: usize, b: usize| -> Vec<Vec<Scalar>> {
            if a != b {
                return c.hom(a, b).iter().map(|&id| c.basis_coords(id)).collect();
            }
            let r = c.radical(a).unwrap();
            (0..r.cols()).map(|j| r.col(j)).collect()
        };
        let rad = rad_basis(y, x);
        let mut sq: Vec<Vec<Scalar>> = Vec::new();
        for z in 0..c.n_objects() {
            for g in rad_basis(z, x) {
                for h in rad_basis(y, z) {
                    sq.push(c.compose(y, z, x, &g, &h));
                }
            }
        }
        let d = c.hom_dim(y, x);
        let to_mat = |vs: &[Vec<Scalar>]| {
            let mut m = Mat::zeros(f, d, vs.len());
            for (j, v) in vs.iter().enumerate() {
                for (i, s) in v.iter().enumerate() {
                    m[(i, j)] = *s;
                }
            }
            m
        };
        to_mat(&rad).rank() - to_mat(&sq).rank()
    }

    #[test]
    fn ext_between_simples_matches_radical_layers() {
        let c = ca(101);
        for x in 0..2 {
            for y in 0..2 {
                let e = ext1_dim(&simple(&c, x).unwrap(), &simple(&c, y).unwrap());
                assert_eq!(e, ext_simple_oracle(&c, x, y), "Ext(S_{x}, S_{y})");
            }
        }
        assert_eq!(ext1_dim(&simple(&c, 0).unwrap(), &simple(&c, 0).unwrap()), 0);
        assert_eq!(ext1_dim(&simple(&c, 1).unwrap(), &simple(&c, 0).unwrap()), 1);
    }

    #[test]
    fn ext_of_projective_vanishes() {
        let c = ca(101);
        let p = yoneda(&c, &FormalObject(vec![0, 1]));
        for g in [simple(&c, 0).unwrap(), simple(&c, 1).unwrap(), p.clone()] {
            assert_eq!(ext1_dim(&p, &g), 0);
        }
        assert!(is_projective(&p));
        assert!(!is_projective(&simple(&c, 0).unwrap()));
    }

    #[test]
    fn dual_numbers_self_extension() {
        // one object with End = k[x]/(x^2): Ext¹(k, k) = k, realized by k[x]/(x^2)
        let f = Field::Prime(5);
        let q = crate::kcat::Quiver {
            vertices: vec!["o".into()],
            arrows: vec![crate::kcat::QuiverArrow { name: "x".into(), src: "o".into(), tgt: "o".into() }],
            relations: vec![crate::kcat::Relation(vec![(1, vec!["x".into(), "x".into()])])],
            max_length: Some(1),
        };
        let c = Arc::new(q.to_category(f).unwrap());
        let s = simple(&c, 0).unwrap();
        let e = Ext1::compute(&s, &s);
        assert_eq!(e.dim(), 1);
        let ses = e.realize(&[Scalar::ONE]);
        assert!(ses.is_exact());
        assert_eq!(ses.middle.dims(), &[2]);
        assert!(is_indecomposable(&ses.middle));
        let split = e.realize(&[Scalar::ZERO]);
        assert_eq!(decompose(&split.middle).unwrap().len(), 2);
        // class of the realized cocycle is recovered
        assert_eq!(e.class_of(&e.cocycle(&[f.from_i64(3)])), vec![f.from_i64(3)]);
    }

    #[test]
    fn decompositions() {
        let c = ca(101);
        let s = simple(&c, 0).unwrap();
        assert_eq!(decompose(&s).unwrap().len(), 1);
        let yy = yoneda(&c, &FormalObject(vec![1, 1]));
        let parts = decompose(&yy).unwrap();
        assert_eq!(parts.len(), 2);
        let yp = yoneda(&c, &FormalObject::single(1));
        for p in &parts {
            assert!(iso_indecomposable(&p.module, &yp).is_some());
            assert!(p.proj.after(&p.incl).is_iso());
        }
        let mixed = yoneda(&c, &FormalObject::single(0)).direct_sum(&s);
        assert_eq!(decompose(&mixed).unwrap().len(), 2);
        assert!(is_isomorphic(&mixed, &s.direct_sum(&yoneda(&c, &FormalObject::single(0)))).unwrap());
    }

    #[test]
    fn enumerate_over_point_and_fix_a() {
        let c = Arc::new(point(Field::Prime(5)));
        let e = enumerate_indecomposables(&c, 4, 10_000).unwrap();
        assert_eq!(e.indecomposables.len(), 1);
        // mod of the Auslander algebra of k[x]/(x^2) is representation-finite
        let c = ca(5);
        let e = enumerate_indecomposables(&c, 6, 100_000).unwrap();
        for m in &e.indecomposables {
            assert!(m.functoriality_violation().is_none());
        }
        // both projectives appear
        for x in 0..2 {
            let y = yoneda(&c, &FormalObject::single(x));
            assert!(find_iso_in(&e.indecomposables, &y).is_some());
        }
    }
}
