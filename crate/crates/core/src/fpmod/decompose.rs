use super::hom::{coords_in, hom_module};
use super::module::{FpModule, ModuleMap};
use crate::error::{Error, Result};
use crate::exactlin::Mat;
use crate::kcat::local::{LocalOutcome, MatAlgebra};

/// A direct summand with its split inclusion and projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: FpModule,
    pub incl: ModuleMap,
    pub proj: ModuleMap,
}

/// The block-diagonal matrix of an endomorphism on `⊕ F(X)`.
fn total_matrix(m: &FpModule, a: &ModuleMap) -> Mat {
    let refs: Vec<&Mat> = a.comps.iter().collect();
    Mat::block_diag(m.field(), &refs)
}

/// `End(F)` with a basis, as a matrix algebra.
pub fn end_algebra(m: &FpModule) -> (Vec<ModuleMap>, MatAlgebra) {
    let basis = hom_module(m, m);
    let unit = coords_in(&basis, &ModuleMap::identity(m)).expect("identity is an endomorphism");
    let mats = basis.iter().map(|b| total_matrix(m, b)).collect();
    let alg = MatAlgebra::new(m.field(), m.total_dim(), mats, unit);
    (basis, alg)
}

pub fn is_indecomposable(m: &FpModule) -> bool {
    !m.is_zero() && end_algebra(m).1.analyze().is_local()
}

/// Krull-Schmidt decomposition. Each summand has local endomorphism ring.
pub fn decompose(m: &FpModule) -> Result<Vec<Summand>> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let (basis, alg) = end_algebra(m);
    match alg.analyze() {
        LocalOutcome::Local { .. } => Ok(vec![Summand {
            module: m.clone(),
            incl: ModuleMap::identity(m),
            proj: ModuleMap::identity(m),
        }]),
        LocalOutcome::Splits { element, eigenvalue } => {
            let f = m.field();
            let mut phi = super::hom::combine(m, m, &basis, &element);
            let id = ModuleMap::identity(m);
            phi = phi.sub(&id.scale(eigenvalue));
            let mut pw = ModuleMap::identity(m);
            for _ in 0..m.total_dim() {
                pw = phi.after(&pw);
            }
            let kers: Vec<Mat> = pw.comps.iter().map(|c| c.kernel_basis()).collect();
            let ims: Vec<Mat> = pw.comps.iter().map(|c| c.column_basis()).collect();
            let (kmod, kincl) = m.submodule(&kers)?;
            let (imod, iincl) = m.submodule(&ims)?;
            if kmod.is_zero() || imod.is_zero() {
                return Err(Error::Splitting("Fitting decomposition is trivial".into()));
            }
            let mut kproj = Vec::new();
            let mut iproj = Vec::new();
            for x in 0..m.cat().n_objects() {
                let full = Mat::hstack(f, m.dim(x), &[&kers[x], &ims[x]]);
                let inv = full.inverse().ok_or_else(|| Error::Splitting("kernel and image do not span".into()))?;
                let kc = kers[x].cols();
                kproj.push(inv.block(0, 0, kc, m.dim(x)));
                iproj.push(inv.block(kc, 0, ims[x].cols(), m.dim(x)));
            }
            let kproj = ModuleMap { comps: kproj };
            let iproj = ModuleMap { comps: iproj };
            let mut out = Vec::new();
            for (part, incl, proj) in [(kmod, kincl, kproj), (imod, iincl, iproj)] {
                for s in decompose(&part)? {
                    out.push(Summand { module: s.module, incl: incl.after(&s.incl), proj: s.proj.after(&proj) });
                }
            }
            Ok(out)
        }
        LocalOutcome::NonSplitResidue { .. } => Err(Error::NonSplitResidue("endomorphism ring of a module".into())),
        LocalOutcome::Unknown => Err(Error::Splitting("no splitting element found".into())),
    }
}

/// An isomorphism `a → b` between indecomposables, if one exists. Since
/// `End(a)` is local, `a ≅ b` iff some basis composite `g ∘ f` is invertible.
pub fn iso_indecomposable(a: &FpModule, b: &FpModule) -> Option<ModuleMap> {
    if a.dims() != b.dims() {
        return None;
    }
    let hab = hom_module(a, b);
    let hba = hom_module(b, a);
    for f in &hab {
        if f.is_iso() {
            return Some(f.clone());
        }
    }
    for f in &hab {
        for g in &hba {
            if g.after(f).is_iso() {
                return Some(f.clone());
            }
        }
    }
    None
}

/// Isomorphism test for arbitrary modules via their decompositions.
pub fn is_isomorphic(a: &FpModule, b: &FpModule) -> Result<bool> {
    if a.dims() != b.dims() {
        return Ok(false);
    }
    let da = decompose(a)?;
    let mut db: Vec<Option<Summand>> = decompose(b)?.into_iter().map(Some).collect();
    if da.len() != db.len() {
        return Ok(false);
    }
    'outer: for s in &da {
        for slot in db.iter_mut() {
            if let Some(t) = slot {
                if iso_indecomposable(&s.module, &t.module).is_some() {
                    *slot = None;
                    continue 'outer;
                }
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Index of the module in `list` isomorphic to the indecomposable `m`.
pub fn find_iso_in(list: &[FpModule], m: &FpModule) -> Option<usize> {
    list.iter().position(|n| iso_indecomposable(n, m).is_some())
}
