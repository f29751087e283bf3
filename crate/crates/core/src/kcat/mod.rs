//! Finite k-linear Krull-Schmidt categories given by structure constants.

mod algebra;
mod formal;
pub mod local;
mod quiver;
mod validate;

use std::collections::HashMap;

pub use algebra::CategoryAlgebra;
pub use formal::{BlockMorphism, FormalObject};
pub use quiver::{Quiver, QuiverArrow, Relation};
pub use validate::validate_category;

use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Scalar};
use local::{LocalOutcome, MatAlgebra};

/// One element of the chosen basis of some `Hom(src, tgt)`.
#[derive(Clone, Debug)]
pub struct BasisElem {
    pub src: usize,
    pub tgt: usize,
    pub name: String,
    /// Arrow indices in traversal order when the category comes from a quiver.
    pub word: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct FiniteLinearCategory {
    field: Field,
    labels: Vec<String>,
    basis: Vec<BasisElem>,
    homs: Vec<Vec<Vec<usize>>>,
    pos: Vec<usize>,
    /// `comp[g * nb + f]`, present when `tgt(f) == src(g)`.
    comp: Vec<Option<Vec<Scalar>>>,
    identity: Vec<Vec<Scalar>>,
    locality: Vec<LocalOutcome>,
    /// Arrow names when built from a quiver.
    arrows: Vec<String>,
}

pub struct CategoryBuilder {
    field: Field,
    labels: Vec<String>,
    basis: Vec<BasisElem>,
    identity: Vec<Option<Vec<Scalar>>>,
    comp: HashMap<(usize, usize), Vec<Scalar>>,
    arrows: Vec<String>,
}

impl CategoryBuilder {
    pub fn new(field: Field, labels: Vec<String>) -> CategoryBuilder {
        let n = labels.len();
        CategoryBuilder { field, labels, basis: Vec::new(), identity: vec![None; n], comp: HashMap::new(), arrows: Vec::new() }
    }

    pub fn add_basis(&mut self, src: usize, tgt: usize, name: impl Into<String>) -> usize {
        self.basis.push(BasisElem { src, tgt, name: name.into(), word: None });
        self.basis.len() - 1
    }

    pub fn add_basis_word(&mut self, src: usize, tgt: usize, name: impl Into<String>, word: Vec<usize>) -> usize {
        self.basis.push(BasisElem { src, tgt, name: name.into(), word: Some(word) });
        self.basis.len() - 1
    }

    pub fn set_arrows(&mut self, names: Vec<String>) {
        self.arrows = names;
    }

    /// Identity of object `x`, in coordinates of `Hom(x, x)` (basis order of insertion).
    pub fn set_identity(&mut self, x: usize, coords: Vec<Scalar>) {
        self.identity[x] = Some(coords);
    }

    /// `g ∘ f` in coordinates of `Hom(src f, tgt g)`.
    pub fn set_composition(&mut self, g: usize, f: usize, coords: Vec<Scalar>) {
        self.comp.insert((g, f), coords);
    }

    pub fn build(self) -> Result<FiniteLinearCategory> {
        let n = self.labels.len();
        let nb = self.basis.len();
        let mut seen = std::collections::HashSet::new();
        for l in &self.labels {
            if !seen.insert(l) {
                return Err(Error::Schema(format!("duplicate object label `{l}`")));
            }
        }
        let mut homs = vec![vec![Vec::new(); n]; n];
        let mut pos = vec![0; nb];
        for (i, b) in self.basis.iter().enumerate() {
            if b.src >= n || b.tgt >= n {
                return Err(Error::Schema(format!("basis element `{}` has an out-of-range object", b.name)));
            }
            pos[i] = homs[b.src][b.tgt].len();
            homs[b.src][b.tgt].push(i);
        }
        let mut identity = Vec::with_capacity(n);
        for (x, id) in self.identity.into_iter().enumerate() {
            let d = homs[x][x].len();
            let id = id.ok_or_else(|| Error::Schema(format!("missing identity for `{}`", self.labels[x])))?;
            if id.len() != d {
                return Err(Error::Schema(format!(
                    "identity of `{}` has {} coordinates, End has dimension {d}",
                    self.labels[x],
                    id.len()
                )));
            }
            identity.push(id);
        }
        let mut comp = vec![None; nb * nb];
        for g in 0..nb {
            for f in 0..nb {
                let (bf, bg) = (&self.basis[f], &self.basis[g]);
                if bf.tgt != bg.src {
                    continue;
                }
                let d = homs[bf.src][bg.tgt].len();
                let v = match self.comp.get(&(g, f)) {
                    Some(v) => {
                        if v.len() != d {
                            return Err(Error::Schema(format!(
                                "composition {} ∘ {} has {} coordinates, expected {d}",
                                bg.name,
                                bf.name,
                                v.len()
                            )));
                        }
                        v.clone()
                    }
                    None => vec![Scalar::ZERO; d],
                };
                comp[g * nb + f] = Some(v);
            }
        }
        for &(g, f) in self.comp.keys() {
            if g >= nb || f >= nb || self.basis[f].tgt != self.basis[g].src {
                return Err(Error::Schema(format!("composition entry ({g}, {f}) is not composable")));
            }
        }
        let mut cat = FiniteLinearCategory {
            field: self.field,
            labels: self.labels,
            basis: self.basis,
            homs,
            pos,
            comp,
            identity,
            locality: Vec::new(),
            arrows: self.arrows,
        };
        cat.locality = (0..n).map(|x| cat.end_algebra(x).analyze()).collect();
        Ok(cat)
    }
}

impl FiniteLinearCategory {
    pub fn builder(field: Field, labels: Vec<String>) -> CategoryBuilder {
        CategoryBuilder::new(field, labels)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n_objects(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn n_basis(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_elem(&self, id: usize) -> &BasisElem {
        &self.basis[id]
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn arrows(&self) -> &[String] {
        &self.arrows
    }

    /// Global ids of the basis of `Hom(x, y)`.
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x][y]
    }

    pub fn hom_dim(&self, x: usize, y: usize) -> usize {
        self.homs[x][y].len()
    }

    /// Position of a basis element inside its own hom space.
    pub fn position(&self, id: usize) -> usize {
        self.pos[id]
    }

    pub fn identity(&self, x: usize) -> &[Scalar] {
        &self.identity[x]
    }

    /// `g ∘ f` for basis elements; `None` when not composable.
    pub fn compose_basis(&self, g: usize, f: usize) -> Option<&[Scalar]> {
        self.comp[g * self.basis.len() + f].as_deref()
    }

    /// Composition of coordinate vectors `g ∈ Hom(y, z)`, `f ∈ Hom(x, y)`.
    pub fn compose(&self, x: usize, y: usize, z: usize, g: &[Scalar], f: &[Scalar]) -> Vec<Scalar> {
        let fl = self.field;
        let mut out = vec![Scalar::ZERO; self.hom_dim(x, z)];
        for (gi, &gc) in self.homs[y][z].iter().zip(g) {
            if gc.is_zero() {
                continue;
            }
            for (fi, &fc) in self.homs[x][y].iter().zip(f) {
                if fc.is_zero() {
                    continue;
                }
                let c = fl.mul(gc, fc);
                let v = self.comp[gi * self.basis.len() + fi].as_ref().expect("composable");
                for (o, &vv) in out.iter_mut().zip(v) {
                    *o = fl.add(*o, fl.mul(c, vv));
                }
            }
        }
        out
    }

    /// Unit vector of a basis element inside its hom space.
    pub fn basis_coords(&self, id: usize) -> Vec<Scalar> {
        let b = &self.basis[id];
        let mut v = vec![Scalar::ZERO; self.hom_dim(b.src, b.tgt)];
        v[self.pos[id]] = Scalar::ONE;
        v
    }

    /// Left multiplication matrix of `g ∈ Hom(y, z)` as a map `Hom(x, y) → Hom(x, z)`.
    pub fn postcompose_matrix(&self, x: usize, y: usize, z: usize, g: &[Scalar]) -> Mat {
        let dxy = self.hom_dim(x, y);
        let mut m = Mat::zeros(self.field, self.hom_dim(x, z), dxy);
        for j in 0..dxy {
            let mut e = vec![Scalar::ZERO; dxy];
            e[j] = Scalar::ONE;
            for (i, v) in self.compose(x, y, z, g, &e).into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Right multiplication matrix of `f ∈ Hom(x, y)` as a map `Hom(y, z) → Hom(x, z)`.
    pub fn precompose_matrix(&self, x: usize, y: usize, z: usize, f: &[Scalar]) -> Mat {
        let dyz = self.hom_dim(y, z);
        let mut m = Mat::zeros(self.field, self.hom_dim(x, z), dyz);
        for j in 0..dyz {
            let mut e = vec![Scalar::ZERO; dyz];
            e[j] = Scalar::ONE;
            for (i, v) in self.compose(x, y, z, &e, f).into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// `End(x)` through its left regular representation.
    pub fn end_algebra(&self, x: usize) -> MatAlgebra {
        let d = self.hom_dim(x, x);
        let basis = (0..d)
            .map(|i| {
                let mut e = vec![Scalar::ZERO; d];
                e[i] = Scalar::ONE;
                self.postcompose_matrix(x, x, x, &e)
            })
            .collect();
        MatAlgebra::new(self.field, d, basis, self.identity[x].clone())
    }

    pub fn locality(&self, x: usize) -> &LocalOutcome {
        &self.locality[x]
    }

    /// Radical of `End(x)`: columns are coordinate vectors. `None` if `End(x)`
    /// failed the local test.
    pub fn radical(&self, x: usize) -> Option<&Mat> {
        match &self.locality[x] {
            LocalOutcome::Local { radical } => Some(radical),
            _ => None,
        }
    }

    /// Whether `f ∈ Hom(x, y)` lies in the radical. Between distinct objects
    /// everything is radical, since objects are pairwise non-isomorphic.
    pub fn in_radical_coords(&self, x: usize, y: usize, f: &[Scalar]) -> bool {
        if x != y {
            return true;
        }
        match self.radical(x) {
            Some(r) => {
                if f.iter().all(|s| s.is_zero()) {
                    return true;
                }
                r.solve_vec(f).is_some()
            }
            None => !self.postcompose_matrix(x, x, x, f).is_invertible(),
        }
    }

    /// The scalar `λ` with `f - λ·id ∈ rad End(x)`. `None` if `End(x)` is not
    /// local with residue field k.
    pub fn residue(&self, x: usize, f: &[Scalar]) -> Option<Scalar> {
        let rad = self.radical(x)?;
        let id = Mat::column(self.field, &self.identity[x]);
        let m = Mat::hstack(self.field, self.hom_dim(x, x), &[&id, rad]);
        m.solve_vec(f).map(|v| v[0])
    }

    /// Whether a basis element is radical.
    pub fn basis_in_radical(&self, id: usize) -> bool {
        let b = &self.basis[id];
        self.in_radical_coords(b.src, b.tgt, &self.basis_coords(id))
    }

    /// Full subcategory on `objs` (in the given order), keeping basis names.
    pub fn full_subcategory(&self, objs: &[usize]) -> Result<FiniteLinearCategory> {
        let labels = objs.iter().map(|&o| self.labels[o].clone()).collect();
        let mut b = CategoryBuilder::new(self.field, labels);
        b.set_arrows(self.arrows.clone());
        let mut map = HashMap::new();
        for (i, &x) in objs.iter().enumerate() {
            for (j, &y) in objs.iter().enumerate() {
                for &id in self.hom(x, y) {
                    let e = &self.basis[id];
                    let nid = match &e.word {
                        Some(w) => b.add_basis_word(i, j, e.name.clone(), w.clone()),
                        None => b.add_basis(i, j, e.name.clone()),
                    };
                    map.insert(id, nid);
                }
            }
        }
        for (i, &x) in objs.iter().enumerate() {
            b.set_identity(i, self.identity[x].clone());
        }
        for (&g, &ng) in &map {
            for (&f, &nf) in &map {
                if let Some(v) = self.compose_basis(g, f) {
                    b.set_composition(ng, nf, v.to_vec());
                }
            }
        }
        b.build()
    }

    /// Sum of all hom dimensions.
    pub fn total_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn category_algebra(&self) -> CategoryAlgebra<'_> {
        CategoryAlgebra::new(self)
    }

    /// Objects by label, error on unknown names.
    pub fn indices_of(&self, labels: &[String]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.index_of(l)).collect()
    }
}

#[cfg(test)]
pub(crate) mod testcats {
    use super::*;

    /// mod k[x]/(x^2): objects S, P with the hand-computed hom tables.
    /// Basis: id_S, i: S→P, p: P→S, id_P, x: P→P where x = i∘p.
    pub fn fix_a(f: Field) -> FiniteLinearCategory {
        let mut b = CategoryBuilder::new(f, vec!["S".into(), "P".into()]);
        let id_s = b.add_basis(0, 0, "id_S");
        let i = b.add_basis(0, 1, "i");
        let p = b.add_basis(1, 0, "p");
        let id_p = b.add_basis(1, 1, "id_P");
        let x = b.add_basis(1, 1, "x");
        let one = Scalar::ONE;
        let z = Scalar::ZERO;
        b.set_identity(0, vec![one]);
        b.set_identity(1, vec![one, z]);
        for (g, f2, v) in [
            (id_s, id_s, vec![one]),
            (i, id_s, vec![one]),
            (id_p, i, vec![one]),
            (x, i, vec![z]),
            (p, id_p, vec![one]),
            (id_s, p, vec![one]),
            (p, x, vec![z]),
            (p, i, vec![z]),
            (i, p, vec![z, one]),
            (id_p, id_p, vec![one, z]),
            (id_p, x, vec![z, one]),
            (x, id_p, vec![z, one]),
            (x, x, vec![z, z]),
        ] {
            b.set_composition(g, f2, v);
        }
        b.build().unwrap()
    }

    pub fn point(f: Field) -> FiniteLinearCategory {
        let mut b = CategoryBuilder::new(f, vec!["X".into()]);
        let id = b.add_basis(0, 0, "id");
        b.set_identity(0, vec![Scalar::ONE]);
        b.set_composition(id, id, vec![Scalar::ONE]);
        b.build().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testcats::*;
    use super::*;

    #[test]
    fn fix_a_radical() {
        let c = fix_a(Field::Prime(101));
        assert_eq!(c.hom_dim(0, 0), 1);
        assert_eq!(c.hom_dim(0, 1), 1);
        assert_eq!(c.hom_dim(1, 0), 1);
        assert_eq!(c.hom_dim(1, 1), 2);
        let x = c.basis_index("x").unwrap();
        assert!(c.basis_in_radical(x));
        assert!(!c.in_radical_coords(1, 1, c.identity(1)));
        assert!(c.basis_in_radical(c.basis_index("i").unwrap()));
        assert_eq!(c.radical(1).unwrap().cols(), 1);
        assert_eq!(c.radical(0).unwrap().cols(), 0);
    }

    #[test]
    fn subcategory_keeps_structure() {
        let c = fix_a(Field::Prime(5));
        let s = c.full_subcategory(&[1]).unwrap();
        assert_eq!(s.n_objects(), 1);
        assert_eq!(s.hom_dim(0, 0), 2);
        assert!(validate_category(&s).all_passed());
    }
}
