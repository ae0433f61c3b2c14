//! Graded Hom spaces between locally free sheaves, by solving the commuting-square system.

use num_traits::{One, Zero};

use crate::graded_linalg::poly::{grade_to_deg, mul_matrix, subst_cached};
use crate::graded_linalg::{Mat, Q};
use crate::sheaf_quiver::{LfMap, LfSheaf};

/// A basis of `Hom(M, N{shift})`, with a coordinate solver.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub shift: i64,
    pub template: LfMap,
    pub basis: Vec<LfMap>,
    pivots: Vec<usize>,
    pivot_inv: Mat,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn from_basis(shift: i64, template: LfMap, basis: Vec<LfMap>) -> HomSpace {
        let n = template.coefficients().len();
        let cols: Vec<Vec<Q>> = basis.iter().map(|b| b.coefficients()).collect();
        let bm = Mat::from_cols(n, &cols);
        let pivots = if basis.is_empty() { Vec::new() } else { bm.transpose().independent_cols() };
        let pivot_inv = if basis.is_empty() { Mat::zeros(0, 0) } else { bm.select_rows(&pivots).inverse().expect("basis is independent") };
        HomSpace { shift, template, basis, pivots, pivot_inv }
    }

    /// Coordinates of `f` in the basis, if `f` lies in the span.
    pub fn coords(&self, f: &LfMap) -> Option<Vec<Q>> {
        let v = f.coefficients();
        if self.basis.is_empty() {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        let sel: Vec<Q> = self.pivots.iter().map(|&i| v[i].clone()).collect();
        let x = self.pivot_inv.mul_vec(&sel);
        (self.combine(&x).coefficients() == v).then_some(x)
    }

    pub fn combine(&self, x: &[Q]) -> LfMap {
        let mut out = self.template.clone();
        for (c, b) in x.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c));
            }
        }
        out
    }
}

/// Solves for all morphisms `M → N{shift}`.
pub fn hom_lf(m: &LfSheaf, n: &LfSheaf, shift: i64) -> HomSpace {
    let fan = &m.fan;
    let template = LfMap::zero(m, n, shift);
    // offsets of unknowns: per face, per entry
    let mut offs: Vec<Vec<usize>> = Vec::new();
    let mut total = 0;
    for c in &template.comps {
        let mut o = Vec::with_capacity(c.rows() * c.cols());
        for i in 0..c.rows() {
            for j in 0..c.cols() {
                o.push(total);
                total += c.get(i, j).len();
            }
        }
        offs.push(o);
    }
    if total == 0 {
        return HomSpace::from_basis(shift, template, Vec::new());
    }
    let mut blocks: Vec<Mat> = Vec::new();
    for (&(b, a), phi_m) in &m.res {
        let phi_n = &n.res[&(b, a)];
        let na = &n.gens[a];
        let nb = &n.gens[b];
        let mb = &m.gens[b];
        let ma = &m.gens[a];
        let ka = fan.dim(a);
        let sub = fan.restriction_matrix(b, a);
        // constraint entry (i, j), i over N_a gens, j over M_b gens
        let mut row_off = Vec::new();
        let mut rows = 0;
        for &gi in na {
            for &gj in mb {
                row_off.push(rows);
                rows += crate::graded_linalg::poly::grade_dim(ka, gj + shift - gi);
            }
        }
        if rows == 0 {
            continue;
        }
        let mut c = Mat::zeros(rows, total);
        for (i, &gi) in na.iter().enumerate() {
            for (j, &gj) in mb.iter().enumerate() {
                let r0 = row_off[i * mb.len() + j];
                if grade_to_deg(gj + shift - gi).is_none() {
                    continue;
                }
                // Φ^N(i,k) · F_b(k,j)|a
                for (k, &gk) in nb.iter().enumerate() {
                    let (Some(dp), Some(df)) = (grade_to_deg(gk - gi), grade_to_deg(gj + shift - gk)) else {
                        continue;
                    };
                    let p = phi_n.get(i, k);
                    if p.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let s = subst_cached(sub, df);
                    let blk = mul_matrix(ka, dp, p, df).mul(&s);
                    let c0 = offs[b][k * mb.len() + j];
                    c.add_block(r0, c0, &blk);
                }
                // - F_a(i,k) · Φ^M(k,j)
                for (k, &gk) in ma.iter().enumerate() {
                    let (Some(df), Some(dp)) = (grade_to_deg(gk + shift - gi), grade_to_deg(gj - gk)) else {
                        continue;
                    };
                    let p = phi_m.get(k, j);
                    if p.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let blk = mul_matrix(ka, dp, p, df).neg();
                    let c0 = offs[a][i * ma.len() + k];
                    c.add_block(r0, c0, &blk);
                }
            }
        }
        blocks.push(c);
    }
    let mut sys = Mat::zeros(0, total);
    for b in blocks {
        sys = sys.vstack(&b);
    }
    let ker = if sys.rows() == 0 { Mat::identity(total) } else { sys.kernel() };
    let mut basis: Vec<LfMap> = (0..ker.cols()).map(|c| LfMap::from_coefficients(&template, &ker.col(c))).collect();
    for b in basis.iter_mut() {
        normalize(b);
    }
    HomSpace::from_basis(shift, template, basis)
}

/// Scales so the first nonzero coefficient is one.
fn normalize(f: &mut LfMap) {
    let v = f.coefficients();
    if let Some(x) = v.iter().find(|x| !x.is_zero()) {
        if !x.is_one() {
            *f = f.scale(&x.recip());
        }
    }
}
