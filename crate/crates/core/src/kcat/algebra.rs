use super::FiniteLinearCategory;
use crate::exactlin::Scalar;

/// The algebra `⊕ Hom(X, Y)` with product `a·b = a ∘ b` (zero when not
/// composable). Right modules over it are contravariant functors to vector
/// spaces. Coordinates are indexed by global basis ids.
pub struct CategoryAlgebra<'a> {
    cat: &'a FiniteLinearCategory,
}

impl<'a> CategoryAlgebra<'a> {
    pub fn new(cat: &'a FiniteLinearCategory) -> CategoryAlgebra<'a> {
        CategoryAlgebra { cat }
    }

    pub fn dim(&self) -> usize {
        self.cat.n_basis()
    }

    pub fn unit(&self) -> Vec<Scalar> {
        let mut u = vec![Scalar::ZERO; self.dim()];
        for x in 0..self.cat.n_objects() {
            for (k, &id) in self.cat.hom(x, x).iter().enumerate() {
                u[id] = self.cat.identity(x)[k];
            }
        }
        u
    }

    /// Primitive idempotent `e_X = id_X`.
    pub fn idempotent(&self, x: usize) -> Vec<Scalar> {
        let mut u = vec![Scalar::ZERO; self.dim()];
        for (k, &id) in self.cat.hom(x, x).iter().enumerate() {
            u[id] = self.cat.identity(x)[k];
        }
        u
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = self.cat.field();
        let mut out = vec![Scalar::ZERO; self.dim()];
        for (g, &ac) in a.iter().enumerate() {
            if ac.is_zero() {
                continue;
            }
            for (h, &bc) in b.iter().enumerate() {
                if bc.is_zero() {
                    continue;
                }
                let Some(v) = self.cat.compose_basis(g, h) else {
                    continue;
                };
                let (x, z) = (self.cat.basis_elem(h).src, self.cat.basis_elem(g).tgt);
                let c = f.mul(ac, bc);
                for (&id, &vv) in self.cat.hom(x, z).iter().zip(v) {
                    out[id] = f.add(out[id], f.mul(c, vv));
                }
            }
        }
        out
    }

    pub fn n_idempotents(&self) -> usize {
        self.cat.n_objects()
    }
}

#[cfg(test)]
mod tests {
    use super::super::testcats::{fix_a, point};
    use crate::exactlin::{Field, Scalar};

    #[test]
    fn fix_a_algebra_is_five_dimensional() {
        let c = fix_a(Field::Prime(101));
        let a = c.category_algebra();
        assert_eq!(a.dim(), 5);
        assert_eq!(a.n_idempotents(), 2);
        let u = a.unit();
        for i in 0..5 {
            let mut e = vec![Scalar::ZERO; 5];
            e[i] = Scalar::ONE;
            assert_eq!(a.mul(&u, &e), e);
            assert_eq!(a.mul(&e, &u), e);
        }
        let e0 = a.idempotent(0);
        assert_eq!(a.mul(&e0, &e0), e0);
        assert!(a.mul(&e0, &a.idempotent(1)).iter().all(|s| s.is_zero()));
    }

    #[test]
    fn point_algebra_is_field() {
        let c = point(Field::Rationals);
        assert_eq!(c.category_algebra().dim(), 1);
    }
}
