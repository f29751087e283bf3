use serde::{Deserialize, Serialize};

use super::FiniteLinearCategory;
use crate::error::{Error, Result};
use crate::exactlin::Scalar;

/// A finite direct sum of indecomposables, as an ordered list of summands.
/// The order fixes block positions of morphisms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormalObject(pub Vec<usize>);

impl FormalObject {
    pub fn zero() -> FormalObject {
        FormalObject(Vec::new())
    }

    pub fn single(x: usize) -> FormalObject {
        FormalObject(vec![x])
    }

    /// Summands listed by ascending object index.
    pub fn from_multiplicities(mult: &[usize]) -> FormalObject {
        let mut v = Vec::new();
        for (x, &m) in mult.iter().enumerate() {
            v.extend(std::iter::repeat(x).take(m));
        }
        FormalObject(v)
    }

    pub fn multiplicities(&self, n: usize) -> Vec<usize> {
        let mut m = vec![0; n];
        for &x in &self.0 {
            m[x] += 1;
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn summands(&self) -> &[usize] {
        &self.0
    }

    pub fn direct_sum(&self, other: &FormalObject) -> FormalObject {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FormalObject(v)
    }

    pub fn sorted(&self) -> FormalObject {
        let mut v = self.0.clone();
        v.sort();
        FormalObject(v)
    }

    pub fn describe(&self, c: &FiniteLinearCategory) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0.iter().map(|&x| c.label(x)).collect::<Vec<_>>().join("+")
    }
}

/// Morphism between formal sums; block `(i, j)` lies in `Hom(src[j], tgt[i])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMorphism {
    pub src: FormalObject,
    pub tgt: FormalObject,
    blocks: Vec<Vec<Scalar>>,
}

impl BlockMorphism {
    pub fn zero(c: &FiniteLinearCategory, src: &FormalObject, tgt: &FormalObject) -> BlockMorphism {
        let mut blocks = Vec::with_capacity(src.len() * tgt.len());
        for &y in &tgt.0 {
            for &x in &src.0 {
                blocks.push(vec![Scalar::ZERO; c.hom_dim(x, y)]);
            }
        }
        BlockMorphism { src: src.clone(), tgt: tgt.clone(), blocks }
    }

    pub fn identity(c: &FiniteLinearCategory, a: &FormalObject) -> BlockMorphism {
        let mut m = BlockMorphism::zero(c, a, a);
        for (i, &x) in a.0.iter().enumerate() {
            m.set_block(i, i, c.identity(x).to_vec());
        }
        m
    }

    /// A single hom element between indecomposables.
    pub fn from_coords(c: &FiniteLinearCategory, x: usize, y: usize, coords: Vec<Scalar>) -> BlockMorphism {
        assert_eq!(coords.len(), c.hom_dim(x, y));
        BlockMorphism { src: FormalObject::single(x), tgt: FormalObject::single(y), blocks: vec![coords] }
    }

    pub fn from_basis(c: &FiniteLinearCategory, id: usize) -> BlockMorphism {
        let b = c.basis_elem(id);
        BlockMorphism::from_coords(c, b.src, b.tgt, c.basis_coords(id))
    }

    pub fn block(&self, i: usize, j: usize) -> &[Scalar] {
        &self.blocks[i * self.src.len() + j]
    }

    pub fn set_block(&mut self, i: usize, j: usize, v: Vec<Scalar>) {
        let k = i * self.src.len() + j;
        assert_eq!(self.blocks[k].len(), v.len(), "block shape");
        self.blocks[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|s| s.is_zero()))
    }

    pub fn compose(c: &FiniteLinearCategory, g: &BlockMorphism, f: &BlockMorphism) -> Result<BlockMorphism> {
        if f.tgt != g.src {
            return Err(Error::DimensionMismatch(format!(
                "compose: target {:?} of f differs from source {:?} of g",
                f.tgt.0, g.src.0
            )));
        }
        let fl = c.field();
        let mut out = BlockMorphism::zero(c, &f.src, &g.tgt);
        for (i, &z) in g.tgt.0.iter().enumerate() {
            for (j, &x) in f.src.0.iter().enumerate() {
                let mut acc = vec![Scalar::ZERO; c.hom_dim(x, z)];
                for (k, &y) in f.tgt.0.iter().enumerate() {
                    let gb = g.block(i, k);
                    let fb = f.block(k, j);
                    if gb.iter().all(|s| s.is_zero()) || fb.iter().all(|s| s.is_zero()) {
                        continue;
                    }
                    let v = c.compose(x, y, z, gb, fb);
                    for (a, b) in acc.iter_mut().zip(v) {
                        *a = fl.add(*a, b);
                    }
                }
                out.set_block(i, j, acc);
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &BlockMorphism, op: impl Fn(Scalar, Scalar) -> Scalar) -> BlockMorphism {
        assert!(self.src == other.src && self.tgt == other.tgt, "shape mismatch");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect())
            .collect();
        BlockMorphism { src: self.src.clone(), tgt: self.tgt.clone(), blocks }
    }

    pub fn add(&self, c: &FiniteLinearCategory, other: &BlockMorphism) -> BlockMorphism {
        let f = c.field();
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, c: &FiniteLinearCategory, other: &BlockMorphism) -> BlockMorphism {
        let f = c.field();
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, c: &FiniteLinearCategory, s: Scalar) -> BlockMorphism {
        let f = c.field();
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&x| f.mul(s, x)).collect()).collect();
        BlockMorphism { src: self.src.clone(), tgt: self.tgt.clone(), blocks }
    }

    pub fn neg(&self, c: &FiniteLinearCategory) -> BlockMorphism {
        self.scale(c, c.field().neg(Scalar::ONE))
    }

    /// `[f_1 f_2 ...]` out of the direct sum of the sources.
    pub fn hstack(c: &FiniteLinearCategory, tgt: &FormalObject, parts: &[&BlockMorphism]) -> BlockMorphism {
        let src = parts.iter().fold(FormalObject::zero(), |a, p| a.direct_sum(&p.src));
        let mut out = BlockMorphism::zero(c, &src, tgt);
        let mut off = 0;
        for p in parts {
            assert_eq!(&p.tgt, tgt);
            for i in 0..tgt.len() {
                for j in 0..p.src.len() {
                    out.set_block(i, off + j, p.block(i, j).to_vec());
                }
            }
            off += p.src.len();
        }
        out
    }

    /// Column `[f_1; f_2; ...]` into the direct sum of the targets.
    pub fn vstack(c: &FiniteLinearCategory, src: &FormalObject, parts: &[&BlockMorphism]) -> BlockMorphism {
        let tgt = parts.iter().fold(FormalObject::zero(), |a, p| a.direct_sum(&p.tgt));
        let mut out = BlockMorphism::zero(c, src, &tgt);
        let mut off = 0;
        for p in parts {
            assert_eq!(&p.src, src);
            for i in 0..p.tgt.len() {
                for j in 0..src.len() {
                    out.set_block(off + i, j, p.block(i, j).to_vec());
                }
            }
            off += p.tgt.len();
        }
        out
    }

    pub fn direct_sum(c: &FiniteLinearCategory, f: &BlockMorphism, g: &BlockMorphism) -> BlockMorphism {
        let src = f.src.direct_sum(&g.src);
        let tgt = f.tgt.direct_sum(&g.tgt);
        let mut out = BlockMorphism::zero(c, &src, &tgt);
        for i in 0..f.tgt.len() {
            for j in 0..f.src.len() {
                out.set_block(i, j, f.block(i, j).to_vec());
            }
        }
        for i in 0..g.tgt.len() {
            for j in 0..g.src.len() {
                out.set_block(f.tgt.len() + i, f.src.len() + j, g.block(i, j).to_vec());
            }
        }
        out
    }

    /// All coordinates in block order.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn from_flat(c: &FiniteLinearCategory, src: &FormalObject, tgt: &FormalObject, v: &[Scalar]) -> BlockMorphism {
        let mut out = BlockMorphism::zero(c, src, tgt);
        let mut k = 0;
        for b in out.blocks.iter_mut() {
            let l = b.len();
            b.copy_from_slice(&v[k..k + l]);
            k += l;
        }
        assert_eq!(k, v.len(), "flat length");
        out
    }

    pub fn hom_dim(c: &FiniteLinearCategory, src: &FormalObject, tgt: &FormalObject) -> usize {
        tgt.0.iter().map(|&y| src.0.iter().map(|&x| c.hom_dim(x, y)).sum::<usize>()).sum()
    }

    /// Basis of `Hom(src, tgt)` matching `flatten` coordinates.
    pub fn hom_basis(c: &FiniteLinearCategory, src: &FormalObject, tgt: &FormalObject) -> Vec<BlockMorphism> {
        let d = BlockMorphism::hom_dim(c, src, tgt);
        (0..d)
            .map(|k| {
                let mut v = vec![Scalar::ZERO; d];
                v[k] = Scalar::ONE;
                BlockMorphism::from_flat(c, src, tgt, &v)
            })
            .collect()
    }

    /// True iff every component between indecomposables is a non-isomorphism.
    pub fn in_radical(&self, c: &FiniteLinearCategory) -> bool {
        for (i, &y) in self.tgt.0.iter().enumerate() {
            for (j, &x) in self.src.0.iter().enumerate() {
                if !c.in_radical_coords(x, y, self.block(i, j)) {
                    return false;
                }
            }
        }
        true
    }

    /// Restriction to summand positions.
    pub fn submatrix(&self, c: &FiniteLinearCategory, rows: &[usize], cols: &[usize]) -> BlockMorphism {
        let src = FormalObject(cols.iter().map(|&j| self.src.0[j]).collect());
        let tgt = FormalObject(rows.iter().map(|&i| self.tgt.0[i]).collect());
        let mut out = BlockMorphism::zero(c, &src, &tgt);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set_block(a, b, self.block(i, j).to_vec());
            }
        }
        out
    }

    pub fn to_json(&self, c: &FiniteLinearCategory) -> serde_json::Value {
        let f = c.field();
        let blocks: Vec<Vec<Vec<String>>> = (0..self.tgt.len())
            .map(|i| {
                (0..self.src.len())
                    .map(|j| self.block(i, j).iter().map(|s| f.signed(*s).to_string()).collect())
                    .collect()
            })
            .collect();
        serde_json::json!({
            "src": self.src.0.iter().map(|&x| c.label(x)).collect::<Vec<_>>(),
            "tgt": self.tgt.0.iter().map(|&x| c.label(x)).collect::<Vec<_>>(),
            "blocks": blocks,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::testcats::fix_a;
    use super::*;
    use crate::exactlin::Field;

    #[test]
    fn fix_a_inclusion_after_projection_is_x() {
        let c = fix_a(Field::Prime(101));
        let i = BlockMorphism::from_basis(&c, c.basis_index("i").unwrap());
        let p = BlockMorphism::from_basis(&c, c.basis_index("p").unwrap());
        let x = BlockMorphism::from_basis(&c, c.basis_index("x").unwrap());
        assert_eq!(BlockMorphism::compose(&c, &i, &p).unwrap(), x);
        assert!(BlockMorphism::compose(&c, &p, &i).unwrap().is_zero());
        assert!(BlockMorphism::compose(&c, &i, &i).is_err());
    }

    #[test]
    fn identity_and_zero_laws() {
        let c = fix_a(Field::Prime(7));
        let a = FormalObject(vec![0, 1, 1]);
        let b = FormalObject(vec![1, 0]);
        let basis = BlockMorphism::hom_basis(&c, &a, &b);
        assert_eq!(basis.len(), BlockMorphism::hom_dim(&c, &a, &b));
        for f in &basis {
            let l = BlockMorphism::compose(&c, &BlockMorphism::identity(&c, &b), f).unwrap();
            assert_eq!(&l, f);
            let z = BlockMorphism::zero(&c, &b, &a);
            assert!(BlockMorphism::compose(&c, &z, f).unwrap().is_zero());
        }
        assert!(!BlockMorphism::identity(&c, &a).in_radical(&c));
        assert!(BlockMorphism::identity(&c, &FormalObject::zero()).in_radical(&c));
    }
}
