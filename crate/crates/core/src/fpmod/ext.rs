use std::sync::Arc;

use super::hom::{coords_in, hom_module, yoneda, yoneda_map};
use super::module::{kernel, FpModule, ModuleMap};
use crate::error::{Error, Result};
use crate::exactlin::{Mat, Scalar};
use crate::kcat::{FiniteLinearCategory, FormalObject};

/// `0 → left → middle → right → 0`.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub left: FpModule,
    pub middle: FpModule,
    pub right: FpModule,
    pub incl: ModuleMap,
    pub proj: ModuleMap,
}

impl ShortExact {
    pub fn is_exact(&self) -> bool {
        self.incl.is_injective()
            && self.proj.is_surjective()
            && self.incl.comps.iter().zip(&self.proj.comps).all(|(i, p)| {
                p.mul(i).is_zero() && i.rank() + p.rank() == p.cols()
            })
    }
}

/// Simple functor at `x`: one-dimensional at `x`, endomorphisms acting through
/// the residue field.
pub fn simple(cat: &Arc<FiniteLinearCategory>, x: usize) -> Result<FpModule> {
    let f = cat.field();
    let mut dims = vec![0; cat.n_objects()];
    dims[x] = 1;
    let mut action = Vec::with_capacity(cat.n_basis());
    for id in 0..cat.n_basis() {
        let b = cat.basis_elem(id);
        if b.src == x && b.tgt == x {
            let lam = cat
                .residue(x, &cat.basis_coords(id))
                .ok_or_else(|| Error::NonSplitResidue(cat.label(x).to_string()))?;
            action.push(Mat::from_vec(f, 1, 1, vec![lam]));
        } else {
            action.push(Mat::zeros(f, dims[b.src], dims[b.tgt]));
        }
    }
    FpModule::new(cat.clone(), dims, action)
}

/// `rad F(X)`: the sum of the images of `F(r)` over radical morphisms `r` out of `X`.
pub fn radical_subspaces(m: &FpModule) -> Vec<Mat> {
    let cat = m.cat();
    let f = m.field();
    (0..cat.n_objects())
        .map(|x| {
            let mut parts: Vec<Mat> = Vec::new();
            for y in 0..cat.n_objects() {
                if m.dim(y) == 0 {
                    continue;
                }
                if x == y {
                    if let Some(rad) = cat.radical(x) {
                        for j in 0..rad.cols() {
                            parts.push(m.act(x, x, &rad.col(j)));
                        }
                    }
                } else {
                    for &id in cat.hom(x, y) {
                        parts.push(m.action(id).clone());
                    }
                }
            }
            let refs: Vec<&Mat> = parts.iter().collect();
            Mat::hstack(f, m.dim(x), &refs).column_basis()
        })
        .collect()
}

pub fn radical(m: &FpModule) -> (FpModule, ModuleMap) {
    m.submodule(&radical_subspaces(m)).expect("radical is a submodule")
}

pub fn top(m: &FpModule) -> (FpModule, ModuleMap) {
    let (q, p, _) = m.quotient(&radical_subspaces(m));
    (q, p)
}

/// Multiplicity of each simple as a composition factor, by stripping tops.
pub fn composition_factors(m: &FpModule) -> Vec<usize> {
    let mut counts = vec![0; m.cat().n_objects()];
    let mut cur = m.clone();
    while !cur.is_zero() {
        let rad = radical_subspaces(&cur);
        for (x, r) in rad.iter().enumerate() {
            counts[x] += cur.dim(x) - r.cols();
        }
        let (next, _) = cur.submodule(&rad).expect("radical is a submodule");
        if next.total_dim() == cur.total_dim() {
            // only possible when some End(X) is not local
            break;
        }
        cur = next;
    }
    counts
}

/// Projective cover `Hom(-, P) → F`, with generators lifting a basis of the top.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub obj: FormalObject,
    pub module: FpModule,
    pub gens: Vec<Vec<Scalar>>,
    pub map: ModuleMap,
}

pub fn projective_cover(m: &FpModule) -> ProjectiveCover {
    let cat = m.cat();
    let rad = radical_subspaces(m);
    let mut summands = Vec::new();
    let mut gens = Vec::new();
    for x in 0..cat.n_objects() {
        let comp = rad[x].complement_basis();
        for j in 0..comp.cols() {
            summands.push(x);
            gens.push(comp.col(j));
        }
    }
    let obj = FormalObject(summands);
    let module = yoneda(cat, &obj);
    let map = yoneda_map(&obj, m, &gens);
    ProjectiveCover { obj, module, gens, map }
}

/// A map of projective covers `P0' → P0` over `xi: F' → F`.
pub fn lift_to_covers(src: &ProjectiveCover, tgt: &ProjectiveCover, xi: &ModuleMap) -> ModuleMap {
    let f = src.module.field();
    let elems: Vec<Vec<Scalar>> = src
        .obj
        .summands()
        .iter()
        .zip(&src.gens)
        .map(|(&x, g)| {
            let want = xi.comps[x].mul(&Mat::column(f, g));
            Mat::solve_factorization(&want, &tgt.map.comps[x])
                .unwrap()
                .expect("projective cover is surjective")
                .col(0)
        })
        .collect();
    yoneda_map(&src.obj, &tgt.module, &elems)
}

/// `Ext¹(F, G)` as `coker(Hom(P0, G) → Hom(ΩF, G))` for the projective cover
/// `P0 → F`. Classes are represented by cocycles `ΩF → G`.
#[derive(Clone, Debug)]
pub struct Ext1 {
    pub cover: ProjectiveCover,
    pub syzygy: FpModule,
    pub incl: ModuleMap,
    pub source: FpModule,
    pub target: FpModule,
    hom_basis: Vec<ModuleMap>,
    proj: Mat,
    section: Mat,
}

impl Ext1 {
    pub fn compute(src: &FpModule, tgt: &FpModule) -> Ext1 {
        let cover = projective_cover(src);
        Ext1::with_cover(src, tgt, cover)
    }

    pub fn with_cover(src: &FpModule, tgt: &FpModule, cover: ProjectiveCover) -> Ext1 {
        let fl = src.field();
        let (syzygy, incl) = kernel(&cover.map, &cover.module);
        let hom_basis = hom_module(&syzygy, tgt);
        let d = hom_basis.len();
        // coboundaries: restrictions of maps P0 → G, one per element of G(P_i)
        let mut cob: Vec<Vec<Scalar>> = Vec::new();
        for (i, &x) in cover.obj.summands().iter().enumerate() {
            for k in 0..tgt.dim(x) {
                let mut elems: Vec<Vec<Scalar>> =
                    cover.obj.summands().iter().map(|&y| vec![Scalar::ZERO; tgt.dim(y)]).collect();
                elems[i][k] = Scalar::ONE;
                let phi = yoneda_map(&cover.obj, tgt, &elems);
                let r = phi.after(&incl);
                cob.push(coords_in(&hom_basis, &r).expect("restriction lies in Hom(Ω, G)"));
            }
        }
        let mut cm = Mat::zeros(fl, d, cob.len());
        for (j, v) in cob.iter().enumerate() {
            for (i, s) in v.iter().enumerate() {
                cm[(i, j)] = *s;
            }
        }
        let b = cm.column_basis();
        let (proj, section) = b.quotient_map();
        Ext1 { cover, syzygy, incl, source: src.clone(), target: tgt.clone(), hom_basis, proj, section }
    }

    pub fn dim(&self) -> usize {
        self.proj.rows()
    }

    pub fn cocycle(&self, coords: &[Scalar]) -> ModuleMap {
        let h = self.section.mul_vec(coords);
        super::hom::combine(&self.syzygy, &self.target, &self.hom_basis, &h)
    }

    /// Class of a map `ΩF → G`.
    pub fn class_of(&self, cocycle: &ModuleMap) -> Vec<Scalar> {
        let h = coords_in(&self.hom_basis, cocycle).expect("cocycle is natural");
        self.proj.mul_vec(&h)
    }

    /// The pushout of `0 → ΩF → P0 → F → 0` along the cocycle.
    pub fn realize(&self, coords: &[Scalar]) -> ShortExact {
        let eta = self.cocycle(coords);
        let g = &self.target;
        let p0 = &self.cover.module;
        let sum = g.direct_sum(p0);
        let rel = ModuleMap::vstack(&eta, &self.incl.neg());
        let subs: Vec<Mat> = rel.comps.iter().map(|m| m.column_basis()).collect();
        let (e, q, secs) = sum.quotient(&subs);
        let fl = g.field();
        let n = g.cat().n_objects();
        let incl = ModuleMap {
            comps: (0..n)
                .map(|x| {
                    let emb = Mat::vstack(fl, g.dim(x), &[&Mat::identity(fl, g.dim(x)), &Mat::zeros(fl, p0.dim(x), g.dim(x))]);
                    q.comps[x].mul(&emb)
                })
                .collect(),
        };
        let proj = ModuleMap {
            comps: (0..n)
                .map(|x| {
                    let zp = Mat::hstack(fl, self.source.dim(x), &[&Mat::zeros(fl, self.source.dim(x), g.dim(x)), &self.cover.map.comps[x]]);
                    zp.mul(&secs[x])
                })
                .collect(),
        };
        ShortExact { left: g.clone(), middle: e, right: self.source.clone(), incl, proj }
    }

    /// Class in `self` of the pullback along `xi: F' → F`, where `other` is
    /// `Ext¹(F', G)`.
    pub fn pullback_class(&self, other: &Ext1, xi: &ModuleMap, coords: &[Scalar]) -> Vec<Scalar> {
        let lift = lift_to_covers(&other.cover, &self.cover, xi);
        let restricted = lift.after(&other.incl);
        let m = ModuleMap {
            comps: restricted
                .comps
                .iter()
                .zip(&self.incl.comps)
                .map(|(r, i)| Mat::solve_factorization(r, i).unwrap().expect("lift preserves syzygies"))
                .collect(),
        };
        other.class_of(&self.cocycle(coords).after(&m))
    }

    /// Class in `other = Ext¹(F, G')` of the pushout along `zeta: G → G'`.
    pub fn pushforward_class(&self, other: &Ext1, zeta: &ModuleMap, coords: &[Scalar]) -> Vec<Scalar> {
        other.class_of(&zeta.after(&self.cocycle(coords)))
    }
}

pub fn ext1_dim(src: &FpModule, tgt: &FpModule) -> usize {
    Ext1::compute(src, tgt).dim()
}

/// Whether `m` is projective: its projective cover is an isomorphism.
pub fn is_projective(m: &FpModule) -> bool {
    let c = projective_cover(m);
    c.module.total_dim() == m.total_dim()
}
