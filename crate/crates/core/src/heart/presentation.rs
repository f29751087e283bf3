use std::sync::Arc;

use serde_json::{json, Value};

use super::{labels, Ambient, CotorsionPair};
use crate::exactlin::{Mat, Scalar};
use crate::kcat::{BlockMorphism, FiniteLinearCategory, FormalObject};
use crate::Result;

/// `Hom(X, Y) / [W](X, Y)`.
#[derive(Clone, Debug)]
pub struct StableHom {
    pub src: FormalObject,
    pub tgt: FormalObject,
    /// Ambient morphisms whose classes form a basis of the quotient.
    pub reps: Vec<BlockMorphism>,
    /// Quotient coordinates from flat ambient coordinates.
    pub proj: Mat,
}

impl StableHom {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn coords(&self, f: &BlockMorphism) -> Vec<Scalar> {
        self.proj.mul_vec(&f.flatten())
    }
}

impl Ambient {
    pub fn stable_hom(&self, src: &FormalObject, tgt: &FormalObject, w: &[usize]) -> StableHom {
        let c = self.cat();
        let span = self.ideal_span(src, tgt, w).column_basis();
        let (proj, sec) = span.quotient_map();
        let reps = (0..sec.cols()).map(|j| BlockMorphism::from_flat(c, src, tgt, &sec.col(j))).collect();
        StableHom { src: src.clone(), tgt: tgt.clone(), reps, proj }
    }

    /// `W`, `T⁺ = W ∗ V[1]`, `T⁻ = U[-1] ∗ W`, `H = T⁺ ∩ T⁻` and the
    /// category `H/[W]` on the objects of `H` that survive the quotient.
    pub fn heart_presentation(&self, pair: &CotorsionPair) -> Result<HeartPresentation> {
        let c = self.cat();
        let w = pair.w();
        let v_shift = self.shifted(&pair.v, 1);
        let u_unshift = self.shifted(&pair.u, -1);
        let tp = self.star(&w, &v_shift)?;
        let tm = self.star(&u_unshift, &w)?;
        let h: Vec<usize> = tp.objects.iter().copied().filter(|x| tm.objects.contains(x)).collect();
        let end_dim = |x: usize| self.stable_hom(&FormalObject::single(x), &FormalObject::single(x), &w).dim();
        let objects: Vec<usize> = h.iter().copied().filter(|&x| end_dim(x) > 0).collect();
        let n = objects.len();
        let mut hom = Vec::with_capacity(n * n);
        for &a in &objects {
            for &b in &objects {
                hom.push(self.stable_hom(&FormalObject::single(a), &FormalObject::single(b), &w));
            }
        }
        let cat = Arc::new(heart_category(c, &objects, &hom)?);
        Ok(HeartPresentation {
            pair: pair.clone(),
            w,
            v_shift,
            u_unshift,
            t_plus: tp.objects,
            t_minus: tm.objects,
            h,
            objects,
            hom,
            cat,
            exhaustive: tp.exhaustive && tm.exhaustive,
        })
    }
}

fn heart_category(c: &FiniteLinearCategory, objects: &[usize], hom: &[StableHom]) -> Result<FiniteLinearCategory> {
    let n = objects.len();
    let mut b = FiniteLinearCategory::builder(c.field(), labels(c, objects));
    let mut ids = vec![Vec::new(); n * n];
    for x in 0..n {
        for y in 0..n {
            for k in 0..hom[x * n + y].dim() {
                ids[x * n + y].push(b.add_basis(x, y, format!("{}->{}#{k}", c.label(objects[x]), c.label(objects[y]))));
            }
        }
    }
    for x in 0..n {
        let id = BlockMorphism::identity(c, &FormalObject::single(objects[x]));
        b.set_identity(x, hom[x * n + x].coords(&id));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (f, g) = (&hom[x * n + y], &hom[y * n + z]);
                for (i, fr) in f.reps.iter().enumerate() {
                    for (j, gr) in g.reps.iter().enumerate() {
                        let gf = BlockMorphism::compose(c, gr, fr)?;
                        b.set_composition(ids[y * n + z][j], ids[x * n + y][i], hom[x * n + z].coords(&gf));
                    }
                }
            }
        }
    }
    b.build()
}

/// The heart `H/[W]` of a cotorsion pair.
#[derive(Clone, Debug)]
pub struct HeartPresentation {
    pub pair: CotorsionPair,
    pub w: Vec<usize>,
    pub v_shift: Vec<usize>,
    pub u_unshift: Vec<usize>,
    pub t_plus: Vec<usize>,
    pub t_minus: Vec<usize>,
    pub h: Vec<usize>,
    /// Ambient objects of `H` that are nonzero in `H/[W]`; they index `cat`.
    pub objects: Vec<usize>,
    /// Per pair `(a, b)` of `objects`, at `a * n + b`.
    pub hom: Vec<StableHom>,
    pub cat: Arc<FiniteLinearCategory>,
    pub exhaustive: bool,
}

impl HeartPresentation {
    pub fn n(&self) -> usize {
        self.objects.len()
    }

    pub fn hom(&self, a: usize, b: usize) -> &StableHom {
        &self.hom[a * self.n() + b]
    }

    pub fn hom_dims(&self) -> Vec<Vec<usize>> {
        (0..self.n()).map(|a| (0..self.n()).map(|b| self.hom(a, b).dim()).collect()).collect()
    }

    /// Index in `objects` of an ambient object.
    pub fn index(&self, x: usize) -> Option<usize> {
        self.objects.iter().position(|&o| o == x)
    }

    pub fn to_json(&self, c: &FiniteLinearCategory) -> Value {
        json!({
            "pair": self.pair.to_json(c),
            "W": labels(c, &self.w),
            "T_plus": labels(c, &self.t_plus),
            "T_minus": labels(c, &self.t_minus),
            "H": labels(c, &self.h),
            "indecomposables": labels(c, &self.objects),
            "hom_dims": self.hom_dims(),
            "exhaustive": self.exhaustive,
        })
    }
}
