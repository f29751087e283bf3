//! Triangulated backends: shift data, cones, and the induced `E = Hom(-, -[1])`.

use crate::error::{Error, Result};
use crate::exactlin::{Mat, Scalar};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};

/// An automorphism `[1]` of a finite category: a permutation of objects and,
/// per ordered pair, the matrix `Hom(a, b) → Hom(a[1], b[1])`.
#[derive(Clone, Debug)]
pub struct ShiftData {
    sigma: Vec<usize>,
    inv: Vec<usize>,
    fwd: Vec<Mat>,
    bwd: Vec<Mat>,
}

impl ShiftData {
    pub fn new(cat: &FiniteLinearCategory, sigma: Vec<usize>, fwd: Vec<Mat>) -> Result<ShiftData> {
        let n = cat.n_objects();
        if sigma.len() != n || fwd.len() != n * n {
            return Err(Error::Schema("shift needs one image per object and one matrix per pair".into()));
        }
        let mut inv = vec![usize::MAX; n];
        for (x, &s) in sigma.iter().enumerate() {
            if s >= n || inv[s] != usize::MAX {
                return Err(Error::InvalidCategory("shift is not a permutation of the objects".into()));
            }
            inv[s] = x;
        }
        let mut bwd = vec![Mat::zeros(cat.field(), 0, 0); n * n];
        for a in 0..n {
            for b in 0..n {
                let m = &fwd[a * n + b];
                if m.rows() != cat.hom_dim(sigma[a], sigma[b]) || m.cols() != cat.hom_dim(a, b) {
                    return Err(Error::DimensionMismatch(format!("shift matrix on Hom({}, {})", cat.label(a), cat.label(b))));
                }
                bwd[sigma[a] * n + sigma[b]] = m
                    .inverse()
                    .ok_or_else(|| Error::InvalidCategory(format!("shift is not bijective on Hom({}, {})", cat.label(a), cat.label(b))))?;
            }
        }
        Ok(ShiftData { sigma, inv, fwd, bwd })
    }

    pub fn obj(&self, x: usize) -> usize {
        self.sigma[x]
    }

    pub fn obj_inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn formal(&self, x: &FormalObject) -> FormalObject {
        FormalObject(x.summands().iter().map(|&a| self.sigma[a]).collect())
    }

    pub fn formal_inv(&self, x: &FormalObject) -> FormalObject {
        FormalObject(x.summands().iter().map(|&a| self.inv[a]).collect())
    }

    /// Matrix of `[1]` on `Hom(a, b)`.
    pub fn matrix(&self, a: usize, b: usize) -> &Mat {
        &self.fwd[a * self.sigma.len() + b]
    }

    fn apply(&self, cat: &FiniteLinearCategory, f: &BlockMorphism, inverse: bool) -> BlockMorphism {
        let n = self.sigma.len();
        let (objs, mats) = if inverse { (&self.inv, &self.bwd) } else { (&self.sigma, &self.fwd) };
        let src = FormalObject(f.src.summands().iter().map(|&a| objs[a]).collect());
        let tgt = FormalObject(f.tgt.summands().iter().map(|&a| objs[a]).collect());
        let mut out = BlockMorphism::zero(cat, &src, &tgt);
        for (i, &y) in f.tgt.summands().iter().enumerate() {
            for (j, &x) in f.src.summands().iter().enumerate() {
                out.set_block(i, j, mats[x * n + y].mul_vec(f.block(i, j)));
            }
        }
        out
    }

    pub fn mor(&self, cat: &FiniteLinearCategory, f: &BlockMorphism) -> BlockMorphism {
        self.apply(cat, f, false)
    }

    pub fn mor_inv(&self, cat: &FiniteLinearCategory, f: &BlockMorphism) -> BlockMorphism {
        self.apply(cat, f, true)
    }

    /// First basis pair on which `[1]` fails to be a functor.
    pub fn functoriality_violation(&self, cat: &FiniteLinearCategory) -> Option<(usize, usize)> {
        for x in 0..cat.n_objects() {
            let id = BlockMorphism::from_coords(cat, x, x, cat.identity(x).to_vec());
            if self.mor(cat, &id) != BlockMorphism::identity(cat, &FormalObject::single(self.sigma[x])) {
                let b = cat.hom(x, x).first().copied().unwrap_or(0);
                return Some((b, b));
            }
        }
        for g in 0..cat.n_basis() {
            for f in 0..cat.n_basis() {
                let (bf, bg) = (cat.basis_elem(f), cat.basis_elem(g));
                if bf.tgt != bg.src {
                    continue;
                }
                let fm = BlockMorphism::from_basis(cat, f);
                let gm = BlockMorphism::from_basis(cat, g);
                let gf = BlockMorphism::compose(cat, &gm, &fm).expect("composable");
                let lhs = self.mor(cat, &gf);
                let rhs = BlockMorphism::compose(cat, &self.mor(cat, &gm), &self.mor(cat, &fm)).expect("composable");
                if lhs != rhs {
                    return Some((g, f));
                }
            }
        }
        None
    }
}

/// `X --f--> Y --g--> C --h--> X[1]`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub obj: FormalObject,
    pub g: BlockMorphism,
    pub h: BlockMorphism,
}

pub trait Triangulated: Send + Sync {
    fn shift(&self) -> &ShiftData;
    /// A distinguished triangle on `f`.
    fn cone(&self, f: &BlockMorphism) -> Result<Cone>;
}

pub(crate) fn e_dim(cat: &FiniteLinearCategory, s: &ShiftData, x: usize, z: usize) -> usize {
    cat.hom_dim(x, s.obj(z))
}

pub(crate) fn e_pull(cat: &FiniteLinearCategory, s: &ShiftData, xp: usize, x: usize, z: usize, f: &[Scalar]) -> Mat {
    cat.precompose_matrix(xp, x, s.obj(z), f)
}

pub(crate) fn e_push(cat: &FiniteLinearCategory, s: &ShiftData, x: usize, z: usize, zp: usize, g: &[Scalar]) -> Mat {
    let gs = s.matrix(z, zp).mul_vec(g);
    cat.postcompose_matrix(x, s.obj(z), s.obj(zp), &gs)
}

/// `δ ∈ E(X, Z)` in block coordinates (blocks `(i, j)` for `X_i`, `Z_j`,
/// `i` outer) as a morphism `X → Z[1]`.
pub(crate) fn delta_morphism(cat: &FiniteLinearCategory, s: &ShiftData, x: &FormalObject, z: &FormalObject, delta: &[Scalar]) -> BlockMorphism {
    let zs = s.formal(z);
    let mut d = BlockMorphism::zero(cat, x, &zs);
    let mut k = 0;
    for (i, &xi) in x.summands().iter().enumerate() {
        for (j, &zj) in zs.summands().iter().enumerate() {
            let l = cat.hom_dim(xi, zj);
            d.set_block(j, i, delta[k..k + l].to_vec());
            k += l;
        }
    }
    d
}

/// Realization of `δ: X → Z[1]` by rotating its cone twice backwards:
/// from `X → Z[1] → C → X[1]` to `Z → C[-1] → X → Z[1]`.
pub(crate) fn realize(
    t: &dyn Triangulated,
    cat: &FiniteLinearCategory,
    x: &FormalObject,
    z: &FormalObject,
    delta: &[Scalar],
) -> Result<(FormalObject, BlockMorphism, BlockMorphism)> {
    let s = t.shift();
    let d = delta_morphism(cat, s, x, z, delta);
    let c = t.cone(&d)?;
    let y = s.formal_inv(&c.obj);
    let g = s.mor_inv(cat, &c.g).neg(cat);
    let f = s.mor_inv(cat, &c.h).neg(cat);
    debug_assert_eq!(g.src, *z);
    debug_assert_eq!(f.tgt, *x);
    Ok((y, g, f))
}

/// Cone data for basis morphisms, extended to morphisms that become monomial
/// (at most one nonzero block per row and column, each a scalar multiple of
/// a basis element) after elementary operations between equal summands.
pub struct ConeTable {
    pub entries: Vec<Option<Cone>>,
}

enum Entry {
    Zero,
    Basis(usize, Scalar),
    Other,
}

fn classify_block(cat: &FiniteLinearCategory, x: usize, y: usize, v: &[Scalar]) -> Entry {
    let nz: Vec<usize> = (0..v.len()).filter(|&k| !v[k].is_zero()).collect();
    match nz.as_slice() {
        [] => Entry::Zero,
        [k] => Entry::Basis(cat.hom(x, y)[*k], v[*k]),
        _ => Entry::Other,
    }
}

impl ConeTable {
    pub fn cone(&self, cat: &FiniteLinearCategory, s: &ShiftData, f: &BlockMorphism) -> Result<Cone> {
        let fl = cat.field();
        let (rows, cols) = (f.tgt.len(), f.src.len());
        // reduce to monomial form: f' = beta f alpha
        let mut cur = f.clone();
        let mut alpha = BlockMorphism::identity(cat, &f.src);
        let mut beta = BlockMorphism::identity(cat, &f.tgt);
        let mut row_done = vec![false; rows];
        let mut col_done = vec![false; cols];
        let mut pivots: Vec<(usize, usize, usize, Scalar)> = Vec::new();
        loop {
            let mut pick = None;
            'search: for i in (0..rows).filter(|&i| !row_done[i]) {
                for j in (0..cols).filter(|&j| !col_done[j]) {
                    match classify_block(cat, f.src.summands()[j], f.tgt.summands()[i], cur.block(i, j)) {
                        Entry::Zero => {}
                        Entry::Basis(b, c) => {
                            pick = Some((i, j, b, c));
                            break 'search;
                        }
                        Entry::Other => {
                            return Err(Error::MissingCone(format!("block ({i}, {j}) is not a multiple of a basis morphism")))
                        }
                    }
                }
            }
            let Some((i, j, b, c)) = pick else { break };
            let cinv = fl.inv(c).expect("nonzero");
            // clear column j below/above via row operations among copies of tgt[i]
            for i2 in (0..rows).filter(|&i2| i2 != i && !row_done[i2]) {
                match classify_block(cat, f.src.summands()[j], f.tgt.summands()[i2], cur.block(i2, j)) {
                    Entry::Zero => {}
                    Entry::Basis(b2, c2) if b2 == b && f.tgt.summands()[i2] == f.tgt.summands()[i] => {
                        let t = fl.mul(c2, cinv);
                        let op = elementary(cat, &f.tgt, i2, i, fl.neg(t));
                        cur = BlockMorphism::compose(cat, &op, &cur)?;
                        beta = BlockMorphism::compose(cat, &op, &beta)?;
                    }
                    _ => return Err(Error::MissingCone(format!("cannot clear block ({i2}, {j})"))),
                }
            }
            for j2 in (0..cols).filter(|&j2| j2 != j && !col_done[j2]) {
                match classify_block(cat, f.src.summands()[j2], f.tgt.summands()[i], cur.block(i, j2)) {
                    Entry::Zero => {}
                    Entry::Basis(b2, c2) if b2 == b && f.src.summands()[j2] == f.src.summands()[j] => {
                        let t = fl.mul(c2, cinv);
                        let op = elementary(cat, &f.src, j, j2, fl.neg(t));
                        cur = BlockMorphism::compose(cat, &cur, &op)?;
                        alpha = BlockMorphism::compose(cat, &alpha, &op)?;
                    }
                    _ => return Err(Error::MissingCone(format!("cannot clear block ({i}, {j2})"))),
                }
            }
            row_done[i] = true;
            col_done[j] = true;
            pivots.push((i, j, b, c));
        }
        for i in 0..rows {
            for j in 0..cols {
                if !(row_done[i] && col_done[j]) && !cur.block(i, j).iter().all(|v| v.is_zero()) {
                    return Err(Error::MissingCone(format!("block ({i}, {j}) survives reduction")));
                }
            }
        }
        // assemble the cone of the monomial morphism: one cone per pivot,
        // untouched targets pass through, untouched sources contribute X_j[1]
        let xs = s.formal(&f.src);
        let mut pivot_of_row = vec![None; rows];
        for &(i, j, b, c) in &pivots {
            pivot_of_row[i] = Some((j, b, c));
        }
        let mut gparts = Vec::new();
        let mut hparts = Vec::new();
        let mut obj = FormalObject::zero();
        for i in 0..rows {
            if let Some((j, b, c)) = pivot_of_row[i] {
                let e = self.entries[b]
                    .as_ref()
                    .ok_or_else(|| Error::MissingCone(format!("no cone for basis morphism `{}`", cat.basis_elem(b).name)))?;
                let ci = fl.inv(c).expect("nonzero");
                gparts.push((obj.len(), i, e.g.clone()));
                hparts.push((obj.len(), j, e.h.scale(cat, ci)));
                obj = obj.direct_sum(&e.obj);
            } else {
                let y = FormalObject::single(f.tgt.summands()[i]);
                gparts.push((obj.len(), i, BlockMorphism::identity(cat, &y)));
                obj = obj.direct_sum(&y);
            }
        }
        for j in (0..cols).filter(|&j| !col_done[j]) {
            let xj = FormalObject::single(xs.summands()[j]);
            hparts.push((obj.len(), j, BlockMorphism::identity(cat, &xj)));
            obj = obj.direct_sum(&xj);
        }
        let mut g = BlockMorphism::zero(cat, &f.tgt, &obj);
        for (off, i, m) in gparts {
            for r in 0..m.tgt.len() {
                g.set_block(off + r, i, m.block(r, 0).to_vec());
            }
        }
        let mut h = BlockMorphism::zero(cat, &obj, &xs);
        for (off, j, m) in hparts {
            for c in 0..m.src.len() {
                h.set_block(j, off + c, m.block(0, c).to_vec());
            }
        }
        // transport along (alpha, beta^-1, id): g = g' beta, h = alpha[1] h'
        let g = BlockMorphism::compose(cat, &g, &beta)?;
        let h = BlockMorphism::compose(cat, &s.mor(cat, &alpha), &h)?;
        Ok(Cone { obj, g, h })
    }
}

/// The automorphism `1 + t·e_{ij}` of a formal sum whose summands `i` and
/// `j` coincide.
fn elementary(cat: &FiniteLinearCategory, a: &FormalObject, i: usize, j: usize, t: Scalar) -> BlockMorphism {
    let mut m = BlockMorphism::identity(cat, a);
    let x = a.summands()[i];
    let v: Vec<Scalar> = cat.identity(x).iter().map(|&s| cat.field().mul(s, t)).collect();
    m.set_block(i, j, v);
    m
}
