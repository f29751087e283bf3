//! Iso classes of indecomposable modules up to a total dimension.
//!
//! An indecomposable `E` of dimension `d > 1` sits in `0 → M' → E → S → 0`
//! with `S` simple. Writing `M' = ⊕ N_j^{m_j}`, the class in
//! `⊕ Ext¹(S, N_j)^{m_j}` has linearly independent rows per `j` (otherwise a
//! copy of `N_j` splits off), so up to `GL(m_j)` it is a full-rank reduced
//! row echelon matrix. Enumerating those for every `M'` and `S` is complete.

use std::sync::Arc;

use super::decompose::{find_iso_in, is_indecomposable};
use super::ext::{projective_cover, simple, Ext1};
use super::module::{FpModule, ModuleMap};
use crate::error::{Error, Result};
use crate::exactlin::{rref_matrices, Mat, Scalar};
use crate::kcat::FiniteLinearCategory;

/// Direct sum with the canonical inclusions and projections.
pub fn direct_sum_with_maps(cat: &Arc<FiniteLinearCategory>, parts: &[&FpModule]) -> (FpModule, Vec<ModuleMap>, Vec<ModuleMap>) {
    let f = cat.field();
    let sum = FpModule::direct_sum_all(cat, parts);
    let mut incls = Vec::new();
    let mut projs = Vec::new();
    let n = cat.n_objects();
    let mut off = vec![0; n];
    for p in parts {
        let mut ic = Vec::new();
        let mut pc = Vec::new();
        for x in 0..n {
            let mut i = Mat::zeros(f, sum.dim(x), p.dim(x));
            let mut q = Mat::zeros(f, p.dim(x), sum.dim(x));
            for k in 0..p.dim(x) {
                i[(off[x] + k, k)] = Scalar::ONE;
                q[(k, off[x] + k)] = Scalar::ONE;
            }
            off[x] += p.dim(x);
            ic.push(i);
            pc.push(q);
        }
        incls.push(ModuleMap { comps: ic });
        projs.push(ModuleMap { comps: pc });
    }
    (sum, incls, projs)
}

/// Multisets over `0..weights.len()` with total weight exactly `total`, as
/// multiplicity vectors.
pub fn multisets_of_weight(weights: &[usize], total: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, left: usize, weights: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            let mut v = cur.clone();
            v.resize(weights.len(), 0);
            out.push(v);
            return;
        }
        if i == weights.len() {
            return;
        }
        let w = weights[i];
        let mut m = 0;
        while m * w <= left {
            cur.push(m);
            rec(i + 1, left - m * w, weights, cur, out);
            cur.pop();
            if w == 0 {
                break;
            }
            m += 1;
        }
    }
    let mut out = Vec::new();
    rec(0, total, weights, &mut Vec::new(), &mut out);
    out
}

pub struct Enumeration {
    pub indecomposables: Vec<FpModule>,
    pub max_dim: usize,
}

impl Enumeration {
    /// All modules up to `max` total dimension as multiplicity vectors over
    /// `indecomposables`.
    pub fn module_classes(&self, max: usize) -> Vec<Vec<usize>> {
        let w: Vec<usize> = self.indecomposables.iter().map(|m| m.total_dim()).collect();
        (0..=max.min(self.max_dim)).flat_map(|d| multisets_of_weight(&w, d)).collect()
    }

    pub fn build(&self, cat: &Arc<FiniteLinearCategory>, mult: &[usize]) -> FpModule {
        let parts: Vec<&FpModule> = mult
            .iter()
            .enumerate()
            .flat_map(|(i, &m)| std::iter::repeat(&self.indecomposables[i]).take(m))
            .collect();
        FpModule::direct_sum_all(cat, &parts)
    }
}

/// Every indecomposable of total dimension `≤ max_dim`, sorted by dimension.
/// `limit` bounds the number of candidate extensions tried.
pub fn enumerate_indecomposables(cat: &Arc<FiniteLinearCategory>, max_dim: usize, limit: usize) -> Result<Enumeration> {
    let field = cat.field();
    if !field.is_finite() {
        return Err(Error::Unsupported("module enumeration needs a finite field".into()));
    }
    let simples: Vec<FpModule> = (0..cat.n_objects()).map(|x| simple(cat, x)).collect::<Result<_>>()?;
    let covers: Vec<_> = simples.iter().map(projective_cover).collect();
    let mut found: Vec<FpModule> = if max_dim >= 1 { simples.clone() } else { Vec::new() };
    let mut tried = 0usize;
    for d in 2..=max_dim {
        let prev: Vec<FpModule> = found.clone();
        let weights: Vec<usize> = prev.iter().map(|m| m.total_dim()).collect();
        let mut level: Vec<FpModule> = Vec::new();
        for mult in multisets_of_weight(&weights, d - 1) {
            let kinds: Vec<usize> = (0..prev.len()).filter(|&i| mult[i] > 0).collect();
            let parts: Vec<&FpModule> =
                kinds.iter().flat_map(|&i| std::iter::repeat(&prev[i]).take(mult[i])).collect();
            let (sum, incls, _) = direct_sum_with_maps(cat, &parts);
            for (x, s) in simples.iter().enumerate() {
                let big = Ext1::with_cover(s, &sum, covers[x].clone());
                if big.dim() == 0 {
                    continue;
                }
                let per: Vec<Ext1> = kinds.iter().map(|&i| Ext1::with_cover(s, &prev[i], covers[x].clone())).collect();
                if kinds.iter().zip(&per).any(|(&i, e)| mult[i] > e.dim()) {
                    continue;
                }
                let choices: Vec<Vec<Mat>> = kinds
                    .iter()
                    .zip(&per)
                    .map(|(&i, e)| rref_matrices(field, mult[i], e.dim(), true))
                    .collect();
                let total: usize = choices.iter().map(|c| c.len()).product();
                tried += total;
                if tried > limit {
                    return Err(Error::SizeGuard(format!("more than {limit} candidate extensions at dimension {d}")));
                }
                let mut idx = vec![0usize; choices.len()];
                loop {
                    // assemble the cocycle Ω → ⊕ N_j from the chosen rows
                    let mut eta = ModuleMap::zero(&big.syzygy, &sum);
                    let mut copy = 0;
                    for (k, e) in per.iter().enumerate() {
                        let m = &choices[k][idx[k]];
                        for r in 0..m.rows() {
                            let c = e.cocycle(m.row(r));
                            let emb = incls[copy].after(&c);
                            eta = eta.add(&emb);
                            copy += 1;
                        }
                    }
                    let class = big.class_of(&eta);
                    let ses = big.realize(&class);
                    let e = ses.middle;
                    if is_indecomposable(&e) && find_iso_in(&level, &e).is_none() {
                        level.push(e);
                    }
                    if !advance(&mut idx, &choices) {
                        break;
                    }
                }
            }
        }
        found.extend(level);
    }
    Ok(Enumeration { indecomposables: found, max_dim })
}

fn advance(idx: &mut [usize], choices: &[Vec<Mat>]) -> bool {
    for (i, c) in idx.iter_mut().zip(choices) {
        *i += 1;
        if *i < c.len() {
            return true;
        }
        *i = 0;
    }
    false
}
