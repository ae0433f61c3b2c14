//! Inductive construction of the indecomposable pure sheaves `ℒ^σ`.

use std::sync::Arc;

use crate::fan_core::{FaceId, Fan};
use crate::graded_linalg::poly::{FreeShape, PolyMat};
use crate::graded_linalg::with_cutoff;
use crate::sheaf_quiver::LfSheaf;
use crate::Result;

/// `ℒ^σ`, normalized so that its stalk at `σ` is `𝒜_σ{c(σ)}`.
#[derive(Clone, Debug)]
pub struct IcSheaf {
    pub sigma: FaceId,
    pub sheaf: LfSheaf,
}

pub fn ic_sheaf(fan: &Arc<Fan>, sigma: FaceId, cutoff: i64) -> Result<IcSheaf> {
    with_cutoff(cutoff, |d| ic_sheaf_at(fan, sigma, d))
}

/// One attempt at a fixed cutoff; fails with `CutoffTooSmall` if a generator shows up in
/// the top band of the stored range.
pub fn ic_sheaf_at(fan: &Arc<Fan>, sigma: FaceId, cutoff: i64) -> Result<IcSheaf> {
    let nf = fan.num_faces();
    let mut gens = vec![Vec::new(); nf];
    gens[sigma] = vec![-(fan.codim(sigma) as i64)];
    let mut sheaf = LfSheaf::from_gens(fan, gens);
    for tau in 0..nf {
        if tau == sigma || !fan.leq(sigma, tau) {
            continue;
        }
        let delta: Vec<FaceId> = fan.boundary(tau).into_iter().filter(|&x| fan.leq(sigma, x)).collect();
        let (lo, hi) = sheaf.working_range(cutoff);
        let q = sheaf.to_quiver(lo, hi);
        let sec = q.sections(&delta, Some(tau))?;
        let (shape, lifts) = sec.module.minimal_generators()?;
        sheaf.gens[tau] = shape.gens.clone();
        for &xi in fan.facets(tau) {
            let mut cols = Vec::with_capacity(shape.rank());
            let k = delta.iter().position(|&x| x == xi);
            for (j, &gj) in shape.gens.iter().enumerate() {
                let amb = sec.embed_at(gj).mul_vec(&lifts[j]);
                let col = match k {
                    Some(k) => {
                        let start: usize = delta[..k].iter().map(|&f| q.stalks[f].dim(gj)).sum();
                        amb[start..start + q.stalks[xi].dim(gj)].to_vec()
                    }
                    None => Vec::new(),
                };
                cols.push(col);
            }
            let dst = sheaf.gens[xi].clone();
            let pm = if k.is_some() {
                PolyMat::from_columns(fan.dim(xi), dst, shape.gens.clone(), 0, &cols)
            } else {
                PolyMat::zero(fan.dim(xi), dst, shape.gens.clone(), 0)
            };
            sheaf.res.insert((tau, xi), pm);
        }
        for &up in fan.cofacets(tau) {
            let old = &sheaf.res[&(up, tau)];
            let pm = PolyMat::zero(fan.dim(tau), shape.gens.clone(), old.src.clone(), 0);
            sheaf.res.insert((up, tau), pm);
        }
    }
    Ok(IcSheaf { sigma, sheaf })
}

impl IcSheaf {
    /// Generator grades of the stalk at `tau`.
    pub fn stalk_shape(&self, tau: FaceId) -> FreeShape {
        self.sheaf.shape(tau)
    }
}
