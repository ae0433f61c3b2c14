//! The combinatorial Koszul functor. Co-modules are built from the standard injectives
//! `J_τ = 𝒜*_{[τ]}`, written as labels `(τ, a)` for `J_τ{a}` and handled through [`CoCat`],
//! where `Hom(J_τ{a}, J_ξ{b}) = (𝒜_ξ)_{b-a}` for `ξ ≤ τ`.

mod orbit;

#[cfg(test)]
mod tests;

pub use orbit::{
    check_perversity, check_purity, cohomology_table, costalk_complex, grade_window, realized_cohomology, respects_cellular_grading,
    stalk_complex, CellCohomology, Extraction, OrbitStalkComplex, PerversityReport, PerversityRow, PurityReport, PurityRow,
};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fan_core::{FaceId, Fan};
use crate::graded_linalg::{q, Q};
use crate::homotopy_cat::{homotopy_hom, realize, Additive, BlockMat, ChainMap, CoCat, Complex, Label, LfComplex};
use crate::pure_ic::PureCtx;
use crate::{Error, Result};

/// A diagram of co-modules over the face poset: sums of standard injectives on each face and a
/// map to every facet.
#[derive(Clone, Debug)]
pub struct CoDiagram {
    pub fan: Arc<Fan>,
    pub labels: Vec<Vec<Label>>,
    /// `maps[(τ, ξ)]: labels[τ] → labels[ξ]` for `ξ` a facet of `τ`.
    pub maps: BTreeMap<(FaceId, FaceId), BlockMat>,
}

impl CoDiagram {
    fn empty(fan: &Arc<Fan>, labels: Vec<Vec<Label>>) -> Result<CoDiagram> {
        let cat = CoCat::new(fan);
        let mut maps = BTreeMap::new();
        for t in 0..fan.num_faces() {
            for &x in fan.facets(t) {
                maps.insert((t, x), BlockMat::zero(&cat, &labels[x], &labels[t])?);
            }
        }
        Ok(CoDiagram { fan: fan.clone(), labels, maps })
    }

    /// The two paths around every interval of length two compose to the same map.
    pub fn is_functorial(&self) -> Result<bool> {
        let cat = CoCat::new(&self.fan);
        let fan = &self.fan;
        for t in 0..fan.num_faces() {
            for r in fan.boundary(t) {
                if fan.dim(t) != fan.dim(r) + 2 {
                    continue;
                }
                let mut paths = Vec::new();
                for &m in fan.facets(t) {
                    if fan.facets(m).contains(&r) {
                        paths.push(self.maps[&(m, r)].compose(&cat, &self.maps[&(t, m)])?);
                    }
                }
                if paths.windows(2).any(|w| w[0] != w[1]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The diagram `𝒦`: `J_τ` on every face, with the projections `J_τ → J_ξ`.
pub fn kernel_diagram(fan: &Arc<Fan>) -> Result<CoDiagram> {
    let labels = (0..fan.num_faces()).map(|t| vec![Label::new(t, 0)]).collect();
    let mut d = CoDiagram::empty(fan, labels)?;
    for m in d.maps.values_mut() {
        m.set(0, 0, vec![q(1)]);
    }
    Ok(d)
}

/// The constant diagram `ℚ = J_o` on the faces `ξ ≤ ρ ≤ η`, with identity maps.
pub fn constant_diagram(fan: &Arc<Fan>, xi: FaceId, eta: FaceId) -> Result<CoDiagram> {
    let o = fan.zero_cone();
    let inside = fan.interval(xi, eta);
    let labels = (0..fan.num_faces()).map(|t| if inside.contains(&t) { vec![Label::new(o, 0)] } else { Vec::new() }).collect();
    let mut d = CoDiagram::empty(fan, labels)?;
    for (&(t, x), m) in d.maps.iter_mut() {
        if inside.contains(&t) && inside.contains(&x) {
            m.set(0, 0, vec![q(1)]);
        }
    }
    Ok(d)
}

/// Term and offset of each face inside the cellular complex.
fn cellular_layout(d: &CoDiagram) -> (BTreeMap<i64, Vec<Label>>, Vec<(i64, usize)>) {
    let mut terms: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    let mut at = Vec::with_capacity(d.fan.num_faces());
    for t in 0..d.fan.num_faces() {
        let term = terms.entry(-(d.fan.dim(t) as i64)).or_default();
        at.push((-(d.fan.dim(t) as i64), term.len()));
        term.extend(d.labels[t].iter().copied());
    }
    (terms, at)
}

/// `C^•`: the diagram at `ρ` sits in degree `-dim ρ`, with differential `Σ ε(τ, ξ) · map`.
pub fn cellular_complex(d: &CoDiagram) -> Result<Complex> {
    let cat = CoCat::new(&d.fan);
    let (terms, at) = cellular_layout(d);
    let mut x = Complex { terms, diffs: BTreeMap::new() };
    for (&(t, xi), m) in &d.maps {
        let i = at[t].0;
        if m.is_zero() {
            continue;
        }
        let mut dd = match x.diffs.remove(&i) {
            Some(dd) => dd,
            None => BlockMat::zero(&cat, x.term(i + 1), x.term(i))?,
        };
        let s = q(d.fan.sign(t, xi) as i64);
        let rows: Vec<usize> = (at[xi].1..at[xi].1 + d.labels[xi].len()).collect();
        let cols: Vec<usize> = (at[t].1..at[t].1 + d.labels[t].len()).collect();
        add_block(&mut dd, &rows, &cols, &m.scale(&s));
        x.diffs.insert(i, dd);
    }
    let x = x.normalize();
    audit(&cat, &x)?;
    Ok(x)
}

fn add_block(dst: &mut BlockMat, rows: &[usize], cols: &[usize], b: &BlockMat) {
    for (a, &r) in rows.iter().enumerate() {
        for (c, &k) in cols.iter().enumerate() {
            let v: Vec<Q> = dst.get(r, k).iter().zip(b.get(a, c)).map(|(x, y)| x + y).collect();
            dst.set(r, k, v);
        }
    }
}

fn audit(cat: &dyn Additive, x: &Complex) -> Result<()> {
    if !x.is_complex(cat)? {
        return Err(Error::SignAuditFailure("d² ≠ 0 in a cellular complex".into()));
    }
    Ok(())
}

/// The diagram `𝒦 ⊗ M` of a locally free sheaf: a generator of grade `g` at `τ` gives `J_τ{-g}`.
pub fn tensor_diagram(m: &crate::sheaf_quiver::LfSheaf) -> Result<CoDiagram> {
    let fan = &m.fan;
    let labels = (0..fan.num_faces()).map(|t| m.gens[t].iter().map(|&g| Label::new(t, -g)).collect()).collect();
    let mut d = CoDiagram::empty(fan, labels)?;
    for (&(t, x), b) in d.maps.iter_mut() {
        let r = &m.res[&(t, x)];
        for i in 0..r.rows() {
            for j in 0..r.cols() {
                b.set(i, j, r.get(i, j).to_vec());
            }
        }
    }
    Ok(d)
}

/// `κ(X) = C^•(𝒦 ⊗ X)`, totalized with `d_cell ⊗ 1 + (-1)^{cellular degree} 1 ⊗ d_X`.
pub fn kappa(x: &LfComplex) -> Result<Complex> {
    let fan = &x.fan;
    let cat = CoCat::new(fan);
    let mut terms: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
    // (i, τ) ↦ (total degree, offset)
    let mut at: BTreeMap<(i64, FaceId), (i64, usize)> = BTreeMap::new();
    let mut diagrams = BTreeMap::new();
    for (&i, t) in &x.terms {
        let d = tensor_diagram(t)?;
        for f in 0..fan.num_faces() {
            let n = i - fan.dim(f) as i64;
            let term = terms.entry(n).or_default();
            at.insert((i, f), (n, term.len()));
            term.extend(d.labels[f].iter().copied());
        }
        diagrams.insert(i, d);
    }
    let mut out = Complex { terms, diffs: BTreeMap::new() };
    let mut pieces: Vec<(i64, Vec<usize>, Vec<usize>, BlockMat)> = Vec::new();
    let span = |d: &CoDiagram, key: (i64, FaceId), at: &BTreeMap<(i64, FaceId), (i64, usize)>| {
        let o = at[&key].1;
        (o..o + d.labels[key.1].len()).collect::<Vec<usize>>()
    };
    for (&i, d) in &diagrams {
        for (&(t, xi), m) in &d.maps {
            let s = q(fan.sign(t, xi) as i64);
            pieces.push((at[&(i, t)].0, span(d, (i, xi), &at), span(d, (i, t), &at), m.scale(&s)));
        }
        let Some(dx) = x.diffs.get(&i) else { continue };
        let Some(next) = diagrams.get(&(i + 1)) else { continue };
        for t in 0..fan.num_faces() {
            let c = &dx.comps[t];
            if c.rows() == 0 || c.cols() == 0 {
                continue;
            }
            let mut b = BlockMat::zero(&cat, &next.labels[t], &d.labels[t])?;
            for r in 0..c.rows() {
                for k in 0..c.cols() {
                    b.set(r, k, c.get(r, k).to_vec());
                }
            }
            let s = if fan.dim(t).is_multiple_of(2) { q(1) } else { q(-1) };
            pieces.push((at[&(i, t)].0, span(next, (i + 1, t), &at), span(d, (i, t), &at), b.scale(&s)));
        }
    }
    for (n, rows, cols, b) in pieces {
        if b.is_zero() {
            continue;
        }
        let mut dd = match out.diffs.remove(&n) {
            Some(dd) => dd,
            None => BlockMat::zero(&cat, out.term(n + 1), out.term(n))?,
        };
        add_block(&mut dd, &rows, &cols, &b);
        out.diffs.insert(n, dd);
    }
    let out = out.normalize();
    audit(&cat, &out)?;
    Ok(out)
}

/// `K = {-n} ∘ κ` with `n` the rank of the lattice.
pub fn koszul_k(x: &LfComplex) -> Result<Complex> {
    Ok(kappa(x)?.twist(-(x.fan.ambient_rank as i64)))
}

/// `κ` of a label complex of pure sheaves, through its realization.
pub fn kappa_pure(ctx: &PureCtx, x: &Complex) -> Result<Complex> {
    kappa(&realize(ctx, x)?)
}

pub fn koszul_k_pure(ctx: &PureCtx, x: &Complex) -> Result<Complex> {
    koszul_k(&realize(ctx, x)?)
}

/// `I_α = K(ℒ^σ)` for `α = σ^⊥`.
pub fn injective(ctx: &PureCtx, sigma: FaceId) -> Result<Complex> {
    koszul_k_pure(ctx, &crate::homotopy_cat::simple(sigma, 0))
}

/// `dim Hom(Y1, Y2{n})` up to homotopy.
pub fn co_hom(fan: &Arc<Fan>, y1: &Complex, y2: &Complex, n: i64) -> Result<usize> {
    Ok(homotopy_hom(&CoCat::new(fan), y1, &y2.twist(n))?.dim)
}

/// The isomorphism `κ(X[1]) → κ(X)[1]`: the cellular sign flips with the shift, absorbed by
/// `(-1)^{dim τ}` on the block of `J_τ`.
pub fn shift_comparison(fan: &Arc<Fan>, shifted: &Complex) -> Result<ChainMap> {
    let cat = CoCat::new(fan);
    let mut f = ChainMap::default();
    for (&i, t) in &shifted.terms {
        let mut b = BlockMat::zero(&cat, t, t)?;
        for (k, l) in t.iter().enumerate() {
            b.set(k, k, vec![if fan.dim(l.face).is_multiple_of(2) { q(1) } else { q(-1) }]);
        }
        f.comps.insert(i, b);
    }
    Ok(f)
}
