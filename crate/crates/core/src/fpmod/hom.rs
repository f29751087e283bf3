use std::sync::Arc;

use super::module::{FpModule, ModuleMap};
use crate::exactlin::{Mat, Scalar};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};

/// The representable functor `Hom(-, X)` for a formal sum `X`. At `W` the
/// value is `⊕_i Hom(W, X_i)` in summand order.
pub fn yoneda(cat: &Arc<FiniteLinearCategory>, x: &FormalObject) -> FpModule {
    let f = cat.field();
    let n = cat.n_objects();
    let dims: Vec<usize> = (0..n).map(|w| x.summands().iter().map(|&xi| cat.hom_dim(w, xi)).sum()).collect();
    let action = (0..cat.n_basis())
        .map(|id| {
            let b = cat.basis_elem(id);
            let coords = cat.basis_coords(id);
            let blocks: Vec<Mat> =
                x.summands().iter().map(|&xi| cat.precompose_matrix(b.src, b.tgt, xi, &coords)).collect();
            let refs: Vec<&Mat> = blocks.iter().collect();
            Mat::block_diag(f, &refs)
        })
        .collect();
    FpModule::new(cat.clone(), dims, action).expect("yoneda shapes")
}

/// Offset of summand `i` inside `yoneda(x)(w)`.
pub fn yoneda_offset(cat: &FiniteLinearCategory, x: &FormalObject, w: usize, i: usize) -> usize {
    x.summands()[..i].iter().map(|&xi| cat.hom_dim(w, xi)).sum()
}

/// The map `Hom(-, X) → G` sending `id` on summand `i` to `elems[i] ∈ G(X_i)`.
pub fn yoneda_map(x: &FormalObject, g: &FpModule, elems: &[Vec<Scalar>]) -> ModuleMap {
    let cat = g.cat();
    let f = g.field();
    let comps = (0..cat.n_objects())
        .map(|w| {
            let mut cols: Vec<Mat> = Vec::new();
            for (i, &xi) in x.summands().iter().enumerate() {
                let v = Mat::column(f, &elems[i]);
                for &id in cat.hom(w, xi) {
                    cols.push(g.action(id).mul(&v));
                }
            }
            let refs: Vec<&Mat> = cols.iter().collect();
            Mat::hstack(f, g.dim(w), &refs)
        })
        .collect();
    ModuleMap { comps }
}

/// `Hom(-, f)` for a block morphism `f: X → Y`.
pub fn yoneda_morphism(cat: &Arc<FiniteLinearCategory>, f: &BlockMorphism) -> ModuleMap {
    let fl = cat.field();
    let comps = (0..cat.n_objects())
        .map(|w| {
            let rows: usize = f.tgt.summands().iter().map(|&y| cat.hom_dim(w, y)).sum();
            let cols: usize = f.src.summands().iter().map(|&x| cat.hom_dim(w, x)).sum();
            let mut m = Mat::zeros(fl, rows, cols);
            let mut r0 = 0;
            for (i, &y) in f.tgt.summands().iter().enumerate() {
                let mut c0 = 0;
                for (j, &x) in f.src.summands().iter().enumerate() {
                    let blk = cat.postcompose_matrix(w, x, y, f.block(i, j));
                    m.set_block(r0, c0, &blk);
                    c0 += cat.hom_dim(w, x);
                }
                r0 += cat.hom_dim(w, y);
            }
            m
        })
        .collect();
    ModuleMap { comps }
}

/// The element of `Hom(w, X)` (as a block morphism `w → X`) at position `v`
/// of `yoneda(X)(w)`.
pub fn yoneda_element(cat: &FiniteLinearCategory, x: &FormalObject, w: usize, v: &[Scalar]) -> BlockMorphism {
    let src = FormalObject::single(w);
    BlockMorphism::from_flat(cat, &src, x, v)
}

fn naturality_system(f: &FpModule, g: &FpModule) -> (Mat, Vec<usize>) {
    let cat = f.cat();
    let n = cat.n_objects();
    let mut off = vec![0; n + 1];
    for x in 0..n {
        off[x + 1] = off[x] + g.dim(x) * f.dim(x);
    }
    let unknowns = off[n];
    let fl = f.field();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for id in 0..cat.n_basis() {
        let b = cat.basis_elem(id);
        let (x, y) = (b.src, b.tgt);
        let (fb, gb) = (f.action(id), g.action(id));
        if x == y && fb.is_identity() && gb.is_identity() {
            continue;
        }
        // alpha_X F(b) - G(b) alpha_Y = 0, entries (i, j) of a dimG(X) x dimF(Y) matrix
        for i in 0..g.dim(x) {
            for j in 0..f.dim(y) {
                let mut row = vec![Scalar::ZERO; unknowns];
                for k in 0..f.dim(x) {
                    let c = fb[(k, j)];
                    if !c.is_zero() {
                        let u = off[x] + i * f.dim(x) + k;
                        row[u] = fl.add(row[u], c);
                    }
                }
                for k in 0..g.dim(y) {
                    let c = gb[(i, k)];
                    if !c.is_zero() {
                        let u = off[y] + k * f.dim(y) + j;
                        row[u] = fl.sub(row[u], c);
                    }
                }
                if row.iter().any(|s| !s.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let mut m = Mat::zeros(fl, rows.len(), unknowns);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    (m, off)
}

/// Basis of `Hom(F, G)`, from the naturality linear system.
pub fn hom_module(f: &FpModule, g: &FpModule) -> Vec<ModuleMap> {
    let (sys, _) = naturality_system(f, g);
    let k = sys.kernel_basis();
    (0..k.cols()).map(|j| ModuleMap::from_flat(f, g, &k.col(j))).collect()
}

pub fn hom_dim(f: &FpModule, g: &FpModule) -> usize {
    let (sys, off) = naturality_system(f, g);
    off[off.len() - 1] - sys.rank()
}

/// Coordinates of `alpha` in the basis `basis` (flattened), if it lies in the span.
pub fn coords_in(basis: &[ModuleMap], alpha: &ModuleMap) -> Option<Vec<Scalar>> {
    let v = alpha.flatten();
    if basis.is_empty() {
        return v.iter().all(|s| s.is_zero()).then(Vec::new);
    }
    let f = alpha.comps.first().map(|m| m.field())?;
    let cols: Vec<Mat> = basis.iter().map(|b| Mat::column(f, &b.flatten())).collect();
    let refs: Vec<&Mat> = cols.iter().collect();
    Mat::hstack(f, v.len(), &refs).solve_vec(&v)
}

pub fn combine(src: &FpModule, tgt: &FpModule, basis: &[ModuleMap], coords: &[Scalar]) -> ModuleMap {
    let mut out = ModuleMap::zero(src, tgt);
    for (b, &c) in basis.iter().zip(coords) {
        if !c.is_zero() {
            for (o, m) in out.comps.iter_mut().zip(&b.comps) {
                o.add_scaled(m, c);
            }
        }
    }
    out
}
