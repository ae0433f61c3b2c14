//! Splitting a pure sheaf into shifted copies of the `ℒ^σ`.

use crate::fan_core::FaceId;
use crate::graded_linalg::poly::PolyMat;
use crate::graded_linalg::{Mat, Q};
use crate::sheaf_quiver::{LfMap, LfSheaf};
use crate::{Error, Result};

use super::PureCtx;

/// An isomorphism `⊕ ℒ^{σ_k}{n_k} → M`.
#[derive(Clone, Debug)]
pub struct PureDecomposition {
    pub labels: Vec<(FaceId, i64)>,
    pub sheaf: LfSheaf,
    pub sum: LfSheaf,
    pub iso: LfMap,
    pub inverse: LfMap,
}

/// Elements of the relative sections `M(σ, ∂σ)` in grade `g`, as columns in free coordinates.
fn relative_kernel(m: &LfSheaf, sigma: FaceId, g: i64) -> Mat {
    let n = m.shape(sigma).dim(g);
    let mut c = Mat::zeros(0, n);
    for &a in m.fan.facets(sigma) {
        c = c.vstack(&m.res_at_grade(sigma, a, g));
    }
    if c.rows() == 0 {
        Mat::identity(n)
    } else {
        c.kernel()
    }
}

/// Builds a morphism `ℒ^σ{n} → M` sending the generator at `σ` to `k`, by lifting
/// through the boundary of each larger face.
fn extend(m: &LfSheaf, l: &LfSheaf, sigma: FaceId, k: &[Q]) -> Result<LfMap> {
    let fan = &m.fan;
    let mut map = LfMap::zero(l, m, 0);
    map.comps[sigma] = PolyMat::from_columns(fan.dim(sigma), m.gens[sigma].clone(), l.gens[sigma].clone(), 0, &[k.to_vec()]);
    for tau in 0..fan.num_faces() {
        if tau == sigma || !fan.leq(sigma, tau) {
            continue;
        }
        let mut cols = Vec::new();
        for (j, &h) in l.gens[tau].iter().enumerate() {
            let mut lhs = Mat::zeros(0, m.shape(tau).dim(h));
            let mut rhs: Vec<Q> = Vec::new();
            for &xi in fan.facets(tau) {
                lhs = lhs.vstack(&m.res_at_grade(tau, xi, h));
                if fan.leq(sigma, xi) {
                    let v = l.res[&(tau, xi)].column(j);
                    rhs.extend(map.comps[xi].at_grade(h).mul_vec(&v));
                } else {
                    rhs.extend(std::iter::repeat_n(Q::from_integer(0.into()), m.shape(xi).dim(h)));
                }
            }
            let x = lhs
                .solve(&Mat::from_cols(rhs.len(), &[rhs]))
                .ok_or_else(|| Error::NotPure(format!("boundary section at {} does not extend", fan.label(tau))))?;
            cols.push(x.col(0));
        }
        map.comps[tau] = PolyMat::from_columns(fan.dim(tau), m.gens[tau].clone(), l.gens[tau].clone(), 0, &cols);
    }
    Ok(map)
}

pub fn decompose(ctx: &PureCtx, m: &LfSheaf) -> Result<PureDecomposition> {
    let fan = &m.fan;
    let mut labels = Vec::new();
    let mut pieces: Vec<(LfSheaf, LfMap)> = Vec::new();
    for sigma in 0..fan.num_faces() {
        let mut grades = m.gens[sigma].clone();
        grades.sort();
        grades.dedup();
        for g in grades {
            let kern = relative_kernel(m, sigma, g);
            let shape = m.shape(sigma);
            let off = shape.offsets(g);
            let gens_here: Vec<usize> = (0..shape.rank()).filter(|&i| shape.gens[i] == g).collect();
            let proj = Mat::identity(shape.dim(g)).select_rows(&gens_here.iter().map(|&i| off[i]).collect::<Vec<_>>());
            let image = proj.mul(&kern);
            let chosen = if image.rows() == 0 { Vec::new() } else { image.independent_cols() };
            let n = -(fan.codim(sigma) as i64) - g;
            let l = ctx.ic(sigma)?.shift(n);
            for c in chosen {
                let iota = extend(m, &l, sigma, &kern.col(c))?;
                labels.push((sigma, n));
                pieces.push((l.clone(), iota));
            }
        }
    }
    let sum = if pieces.is_empty() {
        LfSheaf::zero(fan)
    } else {
        LfSheaf::direct_sum(&pieces.iter().map(|(l, _)| l.clone()).collect::<Vec<_>>())
    };
    let mut iso = LfMap::zero(&sum, m, 0);
    for f in 0..fan.num_faces() {
        let mut cols = Vec::new();
        for (_, iota) in &pieces {
            for j in 0..iota.comps[f].cols() {
                cols.push(iota.comps[f].column(j));
            }
        }
        iso.comps[f] = PolyMat::from_columns(fan.dim(f), m.gens[f].clone(), sum.gens[f].clone(), 0, &cols);
    }
    if !iso.is_morphism(&sum, m) {
        return Err(Error::NotPure("assembled inclusions do not commute with restrictions".into()));
    }
    let mut inverse = LfMap::zero(m, &sum, 0);
    for f in 0..fan.num_faces() {
        inverse.comps[f] =
            iso.comps[f].inverse().ok_or_else(|| Error::NotPure(format!("summands do not fill the stalk at {}", fan.label(f))))?;
    }
    Ok(PureDecomposition { labels, sheaf: m.clone(), sum, iso, inverse })
}

impl PureDecomposition {
    /// Multiset of labels in a canonical order.
    pub fn sorted_labels(&self) -> Vec<(FaceId, i64)> {
        let mut l = self.labels.clone();
        l.sort();
        l
    }
}
