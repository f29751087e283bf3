//! Path categories of bound quivers.
//!
//! A path is a list of arrows in traversal order. The morphism of a path
//! `a1 a2 ... ak` from `src(a1)` to `tgt(ak)` is `ak ∘ ... ∘ a1`. Paths longer
//! than the declared bound are set to zero.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{CategoryBuilder, FiniteLinearCategory};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Mat, Scalar};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuiverArrow {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

/// A linear combination of parallel paths, each term `(coefficient, arrows)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Relation(pub Vec<(i64, Vec<String>)>);

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<QuiverArrow>,
    #[serde(default)]
    pub relations: Vec<Relation>,
    /// Longest path that may be nonzero. Required when the quiver has a cycle.
    #[serde(default)]
    pub max_length: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Path {
    src: usize,
    tgt: usize,
    arrows: Vec<usize>,
}

impl Quiver {
    fn vertex(&self, name: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    fn arrow(&self, name: &str) -> Result<usize> {
        self.arrows.iter().position(|a| a.name == name).ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    fn has_cycle(&self, ends: &[(usize, usize)]) -> bool {
        let n = self.vertices.len();
        // Kahn's algorithm
        let mut indeg = vec![0; n];
        for &(_, t) in ends {
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(s, t) in ends {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        seen < n
    }

    pub fn to_category(&self, field: Field) -> Result<FiniteLinearCategory> {
        let n = self.vertices.len();
        let mut ends = Vec::new();
        for a in &self.arrows {
            ends.push((self.vertex(&a.src)?, self.vertex(&a.tgt)?));
        }
        let bound = match self.max_length {
            Some(b) => b,
            None if self.has_cycle(&ends) => {
                return Err(Error::Schema("quiver has a cycle; `max_length` is required".into()));
            }
            None => n.saturating_sub(1),
        };
        let top = bound + 1;

        // all paths of length <= bound + 1
        let mut paths: Vec<Path> = (0..n).map(|v| Path { src: v, tgt: v, arrows: Vec::new() }).collect();
        let mut frontier = paths.clone();
        for _ in 0..top {
            let mut next = Vec::new();
            for p in &frontier {
                for (ai, &(s, t)) in ends.iter().enumerate() {
                    if s == p.tgt {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        next.push(Path { src: p.src, tgt: t, arrows });
                    }
                }
            }
            paths.extend(next.iter().cloned());
            frontier = next;
        }
        let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

        // ideal generators as sparse combinations of paths
        let mut gens: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for p in &paths {
            if p.arrows.len() == top {
                gens.push(vec![(index[p], Scalar::ONE)]);
            }
        }
        for r in &self.relations {
            let mut terms = Vec::new();
            let mut ends_r = None;
            for (coef, word) in &r.0 {
                if word.is_empty() {
                    return Err(Error::Schema("relation terms must be nonempty paths".into()));
                }
                let arrows = word.iter().map(|w| self.arrow(w)).collect::<Result<Vec<_>>>()?;
                for w in arrows.windows(2) {
                    if ends[w[0]].1 != ends[w[1]].0 {
                        return Err(Error::Schema(format!("relation term {word:?} is not a path")));
                    }
                }
                let e = (ends[arrows[0]].0, ends[*arrows.last().unwrap()].1);
                if *ends_r.get_or_insert(e) != e {
                    return Err(Error::Schema("relation terms are not parallel".into()));
                }
                terms.push((field.from_i64(*coef), arrows));
            }
            let Some((rs, rt)) = ends_r else { continue };
            for u in paths.iter().filter(|u| u.tgt == rs) {
                for v in paths.iter().filter(|v| v.src == rt) {
                    let mut g = Vec::new();
                    for (c, w) in &terms {
                        let len = u.arrows.len() + w.len() + v.arrows.len();
                        if len > top {
                            continue;
                        }
                        let mut arrows = u.arrows.clone();
                        arrows.extend(w);
                        arrows.extend(&v.arrows);
                        g.push((index[&Path { src: u.src, tgt: v.tgt, arrows }], *c));
                    }
                    if !g.is_empty() {
                        gens.push(g);
                    }
                }
            }
        }

        // per (a, b): columns = paths ordered longest first; non-pivots are basis reps
        struct Block {
            cols: Vec<usize>,
            reps: Vec<usize>,
            ech: Mat,
            pivots: Vec<usize>,
        }
        let mut blocks: HashMap<(usize, usize), Block> = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                let mut cols: Vec<usize> = (0..paths.len()).filter(|&i| paths[i].src == a && paths[i].tgt == b).collect();
                cols.sort_by(|&i, &j| paths[j].arrows.len().cmp(&paths[i].arrows.len()).then(paths[i].arrows.cmp(&paths[j].arrows)));
                let pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &i)| (i, k)).collect();
                let rows: Vec<&Vec<(usize, Scalar)>> =
                    gens.iter().filter(|g| g.iter().any(|(i, _)| pos.contains_key(i))).collect();
                let mut m = Mat::zeros(field, rows.len(), cols.len());
                for (r, g) in rows.iter().enumerate() {
                    for &(i, c) in g.iter() {
                        let k = pos[&i];
                        m[(r, k)] = field.add(m[(r, k)], c);
                    }
                }
                let e = m.echelon();
                let reps = (0..cols.len()).filter(|k| !e.pivots.contains(k)).map(|k| cols[k]).collect();
                blocks.insert((a, b), Block { cols, reps, ech: e.mat, pivots: e.pivots });
            }
        }
        // normal form of a single path in coordinates of the reps
        let normal = |p: &Path| -> Vec<Scalar> {
            let blk = &blocks[&(p.src, p.tgt)];
            let mut out = vec![Scalar::ZERO; blk.reps.len()];
            if p.arrows.len() > top {
                return out;
            }
            let i = index[p];
            let k = blk.cols.iter().position(|&c| c == i).unwrap();
            if let Some(row) = blk.pivots.iter().position(|&pc| pc == k) {
                // path ≡ -Σ row[q] q over non-pivot q
                for (ri, &rep) in blk.reps.iter().enumerate() {
                    let q = blk.cols.iter().position(|&c| c == rep).unwrap();
                    out[ri] = field.neg(blk.ech[(row, q)]);
                }
            } else {
                out[blk.reps.iter().position(|&r| r == i).unwrap()] = Scalar::ONE;
            }
            out
        };

        let mut builder = CategoryBuilder::new(field, self.vertices.clone());
        builder.set_arrows(self.arrows.iter().map(|a| a.name.clone()).collect());
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut rep_of: Vec<usize> = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for &r in &blocks[&(a, b)].reps {
                    let p = &paths[r];
                    let name = if p.arrows.is_empty() {
                        format!("id_{}", self.vertices[a])
                    } else {
                        p.arrows.iter().map(|&x| self.arrows[x].name.as_str()).collect::<Vec<_>>().join(".")
                    };
                    let id = builder.add_basis_word(a, b, name, p.arrows.clone());
                    ids.insert(r, id);
                    rep_of.push(r);
                }
            }
        }
        for a in 0..n {
            let e = Path { src: a, tgt: a, arrows: Vec::new() };
            let v = normal(&e);
            if v.iter().all(|s| s.is_zero()) {
                return Err(Error::InvalidCategory(format!("relations kill the vertex `{}`", self.vertices[a])));
            }
            builder.set_identity(a, v);
        }
        for &fr in &rep_of {
            for &gr in &rep_of {
                let (pf, pg) = (&paths[fr], &paths[gr]);
                if pf.tgt != pg.src {
                    continue;
                }
                let mut arrows = pf.arrows.clone();
                arrows.extend(&pg.arrows);
                let v = if arrows.len() > top {
                    vec![Scalar::ZERO; blocks[&(pf.src, pg.tgt)].reps.len()]
                } else {
                    normal(&Path { src: pf.src, tgt: pg.tgt, arrows })
                };
                builder.set_composition(ids[&gr], ids[&fr], v);
            }
        }
        builder.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kcat::validate_category;

    fn arrow(n: &str, s: &str, t: &str) -> QuiverArrow {
        QuiverArrow { name: n.into(), src: s.into(), tgt: t.into() }
    }

    #[test]
    fn a2_path_category() {
        let q = Quiver {
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![arrow("a", "1", "2")],
            relations: vec![],
            max_length: None,
        };
        let c = q.to_category(Field::Prime(101)).unwrap();
        assert_eq!(c.n_basis(), 3);
        assert_eq!(c.hom_dim(0, 1), 1);
        assert_eq!(c.hom_dim(1, 0), 0);
        assert!(validate_category(&c).all_passed());
    }

    #[test]
    fn loop_with_square_zero() {
        let q = Quiver {
            vertices: vec!["o".into()],
            arrows: vec![arrow("x", "o", "o")],
            relations: vec![Relation(vec![(1, vec!["x".into(), "x".into()])])],
            max_length: Some(1),
        };
        let c = q.to_category(Field::Prime(5)).unwrap();
        assert_eq!(c.hom_dim(0, 0), 2);
        assert!(validate_category(&c).all_passed());
    }

    #[test]
    fn commutative_square() {
        let q = Quiver {
            vertices: vec!["1".into(), "2".into(), "3".into(), "4".into()],
            arrows: vec![arrow("a", "1", "2"), arrow("b", "2", "4"), arrow("c", "1", "3"), arrow("d", "3", "4")],
            relations: vec![Relation(vec![(1, vec!["a".into(), "b".into()]), (-1, vec!["c".into(), "d".into()])])],
            max_length: None,
        };
        let c = q.to_category(Field::Rationals).unwrap();
        assert_eq!(c.hom_dim(0, 3), 1);
        assert!(validate_category(&c).all_passed());
    }

    #[test]
    fn cycle_needs_bound() {
        let q = Quiver {
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![arrow("a", "1", "2"), arrow("b", "2", "1")],
            relations: vec![],
            max_length: None,
        };
        assert!(q.to_category(Field::Prime(3)).is_err());
        let q = Quiver { max_length: Some(1), ..q };
        let c = q.to_category(Field::Prime(3)).unwrap();
        assert_eq!(c.hom_dim(0, 0), 1);
        assert_eq!(c.hom_dim(0, 1), 1);
    }

    #[test]
    fn unknown_arrow_named() {
        let q = Quiver {
            vertices: vec!["1".into()],
            arrows: vec![arrow("a", "1", "9")],
            relations: vec![],
            max_length: None,
        };
        match q.to_category(Field::Prime(3)) {
            Err(Error::UnknownLabel(l)) => assert_eq!(l, "9"),
            other => panic!("{other:?}"),
        }
    }
}
