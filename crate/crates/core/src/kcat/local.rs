//! Local-algebra test for finite-dimensional algebras given by a faithful
//! matrix representation.
//!
//! The test succeeds exactly when the algebra is `k + J` with `J` a nilpotent
//! ideal. Every basis element is written as `lambda + n` with `n` nilpotent.
//! The span of the `n` is then closed under products, and nilpotency of that
//! span is checked through its powers. A failure always comes with a concrete
//! element.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{Field, Mat, Scalar};

#[derive(Clone, Debug)]
pub enum LocalOutcome {
    /// Columns are coordinate vectors spanning the radical.
    Local { radical: Mat },
    /// `element - eigenvalue` is singular but not nilpotent, so Fitting's lemma
    /// gives a nontrivial idempotent.
    Splits { element: Vec<Scalar>, eigenvalue: Scalar },
    /// An element without eigenvalue in the ground field.
    NonSplitResidue { element: Vec<Scalar> },
    /// Search ran out without a verdict. Should not happen on small inputs.
    Unknown,
}

impl LocalOutcome {
    pub fn is_local(&self) -> bool {
        matches!(self, LocalOutcome::Local { .. })
    }
}

/// Algebra spanned by `basis` (square matrices of a common size) with unit
/// given in coordinates.
pub struct MatAlgebra {
    field: Field,
    n: usize,
    basis: Vec<Mat>,
    unit: Vec<Scalar>,
    flat: Mat,
}

impl MatAlgebra {
    pub fn new(field: Field, n: usize, basis: Vec<Mat>, unit: Vec<Scalar>) -> MatAlgebra {
        let d = basis.len();
        let mut flat = Mat::zeros(field, n * n, d);
        for (j, b) in basis.iter().enumerate() {
            for (i, v) in b.data().iter().enumerate() {
                flat[(i, j)] = *v;
            }
        }
        MatAlgebra { field, n, basis, unit, flat }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn element(&self, c: &[Scalar]) -> Mat {
        let mut m = Mat::zeros(self.field, self.n, self.n);
        for (b, &s) in self.basis.iter().zip(c) {
            if !s.is_zero() {
                m.add_scaled(b, s);
            }
        }
        m
    }

    pub fn coords(&self, m: &Mat) -> Option<Vec<Scalar>> {
        self.flat.solve_vec(m.data())
    }

    fn minus_scalar(&self, c: &[Scalar], lambda: Scalar) -> Vec<Scalar> {
        let f = self.field;
        c.iter().zip(&self.unit).map(|(&a, &u)| f.sub(a, f.mul(lambda, u))).collect()
    }

    /// Classifies one element: `Ok(nilpotent part)` when it is `lambda + n`.
    fn split_element(&self, c: &[Scalar]) -> Result<Vec<Scalar>, LocalOutcome> {
        let m = self.element(c);
        let eig = eigenvalues(&m);
        if eig.is_empty() {
            return Err(LocalOutcome::NonSplitResidue { element: c.to_vec() });
        }
        let lambda = eig[0];
        let shifted = self.minus_scalar(c, lambda);
        if eig.len() > 1 || !self.element(&shifted).is_nilpotent() {
            return Err(LocalOutcome::Splits { element: c.to_vec(), eigenvalue: lambda });
        }
        Ok(shifted)
    }

    pub fn analyze(&self) -> LocalOutcome {
        let f = self.field;
        let d = self.dim();
        if d == 0 {
            return LocalOutcome::Unknown;
        }
        let mut nil: Vec<Vec<Scalar>> = Vec::new();
        for i in 0..d {
            let mut e = vec![Scalar::ZERO; d];
            e[i] = Scalar::ONE;
            match self.split_element(&e) {
                Ok(n) => nil.push(n),
                Err(o) => return o,
            }
        }
        // close the span of nilpotent parts under products
        let mut span = independent(f, d, &nil);
        loop {
            let mut grew = false;
            let cur = span.clone();
            for a in &cur {
                for b in &cur {
                    let p = self.element(a).mul(&self.element(b));
                    let pc = self.coords(&p).expect("algebra closed under products");
                    if in_span(f, d, &span, &pc) {
                        continue;
                    }
                    if let Err(o) = self.split_element(&pc) {
                        return o;
                    }
                    span.push(pc);
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        // J^k must reach zero
        let j_mats: Vec<Mat> = span.iter().map(|c| self.element(c)).collect();
        let mut power = j_mats.clone();
        for _ in 0..=self.n {
            if power.iter().all(|m| m.is_zero()) {
                let mut rad = Mat::zeros(f, d, span.len());
                for (j, c) in span.iter().enumerate() {
                    for (i, v) in c.iter().enumerate() {
                        rad[(i, j)] = *v;
                    }
                }
                return LocalOutcome::Local { radical: rad };
            }
            let mut next = Vec::new();
            for a in &power {
                for b in &j_mats {
                    let p = a.mul(b);
                    if !p.is_zero() {
                        next.push(p);
                    }
                }
            }
            let coords: Vec<Vec<Scalar>> = next.iter().filter_map(|m| self.coords(m)).collect();
            power = independent(f, d, &coords).iter().map(|c| self.element(c)).collect();
        }
        // J is not nilpotent: look for a non-nilpotent element in it
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..500 {
            let mut c = vec![Scalar::ZERO; d];
            for s in &span {
                let t = f.random(&mut rng);
                for (ci, &si) in c.iter_mut().zip(s) {
                    *ci = f.add(*ci, f.mul(t, si));
                }
            }
            if let Err(o) = self.split_element(&c) {
                return o;
            }
        }
        LocalOutcome::Unknown
    }
}

fn independent(f: Field, d: usize, vs: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    for v in vs {
        if !in_span(f, d, &out, v) {
            out.push(v.clone());
        }
    }
    out
}

fn in_span(f: Field, d: usize, span: &[Vec<Scalar>], v: &[Scalar]) -> bool {
    if v.iter().all(|s| s.is_zero()) {
        return true;
    }
    if span.is_empty() {
        return false;
    }
    let mut m = Mat::zeros(f, d, span.len());
    for (j, s) in span.iter().enumerate() {
        for (i, x) in s.iter().enumerate() {
            m[(i, j)] = *x;
        }
    }
    m.solve_vec(v).is_some()
}

/// Characteristic polynomial, coefficients from degree 0 upward (monic).
/// Uses reduction to Hessenberg form, valid over any field.
pub fn charpoly(m: &Mat) -> Vec<Scalar> {
    assert!(m.is_square());
    let f = m.field();
    let n = m.rows();
    let mut h = m.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| !h[(i, j)].is_zero()) else {
            continue;
        };
        if i != j + 1 {
            for c in 0..n {
                let t = h[(i, c)];
                h[(i, c)] = h[(j + 1, c)];
                h[(j + 1, c)] = t;
            }
            for r in 0..n {
                let t = h[(r, i)];
                h[(r, i)] = h[(r, j + 1)];
                h[(r, j + 1)] = t;
            }
        }
        let piv = f.inv(h[(j + 1, j)]).unwrap();
        for k in j + 2..n {
            let u = f.mul(h[(k, j)], piv);
            if u.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = f.mul(u, h[(j + 1, c)]);
                h[(k, c)] = f.sub(h[(k, c)], v);
            }
            for r in 0..n {
                let v = f.mul(u, h[(r, k)]);
                h[(r, j + 1)] = f.add(h[(r, j + 1)], v);
            }
        }
    }
    // p[m] = charpoly of leading m x m block
    let mut p: Vec<Vec<Scalar>> = vec![vec![Scalar::ONE]];
    for mm in 1..=n {
        let k = mm - 1;
        // (x - h_kk) p[mm-1]
        let prev = &p[mm - 1];
        let mut cur = vec![Scalar::ZERO; mm + 1];
        for (d, &c) in prev.iter().enumerate() {
            cur[d + 1] = f.add(cur[d + 1], c);
            cur[d] = f.sub(cur[d], f.mul(h[(k, k)], c));
        }
        let mut t = Scalar::ONE;
        for i in (0..k).rev() {
            t = f.mul(t, h[(i + 1, i)]);
            let coef = f.mul(t, h[(i, k)]);
            if coef.is_zero() {
                continue;
            }
            for (d, &c) in p[i].iter().enumerate() {
                cur[d] = f.sub(cur[d], f.mul(coef, c));
            }
        }
        p.push(cur);
    }
    p.pop().unwrap()
}

pub fn eval_poly(f: Field, p: &[Scalar], x: Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Distinct eigenvalues lying in the ground field, ascending.
pub fn eigenvalues(m: &Mat) -> Vec<Scalar> {
    let f = m.field();
    let p = charpoly(m);
    let mut roots = match f {
        Field::Prime(_) => f.elements().into_iter().filter(|&x| eval_poly(f, &p, x).is_zero()).collect(),
        Field::Rationals => rational_roots(&p),
    };
    roots.sort();
    roots.dedup();
    roots
}

fn rational_roots(p: &[Scalar]) -> Vec<Scalar> {
    let q = Field::Rationals;
    let lcm = p.iter().fold(1i128, |acc, c| {
        let d = c.denom() as i128;
        acc / gcd(acc, d) * d
    });
    let ints: Vec<i128> = p.iter().map(|c| c.numer() as i128 * (lcm / c.denom() as i128)).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|&c| c != 0).unwrap_or(0);
    if low > 0 {
        roots.push(Scalar::ZERO);
    }
    let a0 = ints[low].abs();
    let an = ints.last().copied().unwrap_or(1).abs();
    if a0 > 1_000_000_000_000 || an > 1_000_000_000_000 {
        return roots;
    }
    for d in divisors(a0) {
        for e in divisors(an) {
            for sign in [1i64, -1] {
                let x = q.from_frac(sign * d as i64, e as i64).unwrap();
                if eval_poly(q, p, x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn divisors(n: i128) -> Vec<i128> {
    let mut out = Vec::new();
    let mut d = 1i128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_numbers(f: Field) -> MatAlgebra {
        // k[x]/(x^2) acting on itself
        let one = Mat::identity(f, 2);
        let x = Mat::from_rows(f, &[vec![0, 0], vec![1, 0]]);
        MatAlgebra::new(f, 2, vec![one, x], vec![Scalar::ONE, Scalar::ZERO])
    }

    #[test]
    fn dual_numbers_local() {
        for f in [Field::Prime(5), Field::Rationals] {
            match dual_numbers(f).analyze() {
                LocalOutcome::Local { radical } => {
                    assert_eq!(radical.cols(), 1);
                    assert_eq!(radical.col(0), vec![Scalar::ZERO, Scalar::ONE]);
                }
                o => panic!("{o:?}"),
            }
        }
    }

    #[test]
    fn product_algebra_splits() {
        let f = Field::Prime(7);
        let e1 = Mat::from_rows(f, &[vec![1, 0], vec![0, 0]]);
        let e2 = Mat::from_rows(f, &[vec![0, 0], vec![0, 1]]);
        let a = MatAlgebra::new(f, 2, vec![e1, e2], vec![Scalar::ONE, Scalar::ONE]);
        assert!(matches!(a.analyze(), LocalOutcome::Splits { .. }));
    }

    #[test]
    fn complex_numbers_over_q_nonsplit() {
        let q = Field::Rationals;
        let one = Mat::identity(q, 2);
        let i = Mat::from_rows(q, &[vec![0, -1], vec![1, 0]]);
        let a = MatAlgebra::new(q, 2, vec![one, i], vec![Scalar::ONE, Scalar::ZERO]);
        assert!(matches!(a.analyze(), LocalOutcome::NonSplitResidue { .. }));
    }

    #[test]
    fn charpoly_small() {
        let q = Field::Rationals;
        let m = Mat::from_rows(q, &[vec![2, 1, 0], vec![0, 3, 4], vec![1, 0, 5]]);
        // det(xI - m) = x^3 - 10x^2 + 31x - 34
        let p = charpoly(&m);
        let want: Vec<Scalar> = [-34, 31, -10, 1].iter().map(|&v| q.from_i64(v)).collect();
        assert_eq!(p, want);
        let d = Mat::from_rows(q, &[vec![1, 0], vec![0, 2]]);
        assert_eq!(eigenvalues(&d), vec![q.from_i64(1), q.from_i64(2)]);
    }
}
