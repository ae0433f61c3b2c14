//! Complexes of locally free sheaves, handled stalkwise and degreewise.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fan_core::{FaceId, Fan};
use crate::graded_linalg::Mat;
use crate::sheaf_quiver::{LfMap, LfSheaf};

#[derive(Clone, Debug)]
pub struct LfComplex {
    pub fan: Arc<Fan>,
    pub terms: BTreeMap<i64, LfSheaf>,
    /// `diffs[i]: X^i → X^{i+1}`, all of shift zero.
    pub diffs: BTreeMap<i64, LfMap>,
}

/// A degreewise map of complexes, `comps[i]: X^i → Y^i`.
#[derive(Clone, Debug)]
pub struct LfChainMap {
    pub comps: BTreeMap<i64, LfMap>,
}

impl LfComplex {
    pub fn single(m: &LfSheaf, degree: i64) -> LfComplex {
        let mut terms = BTreeMap::new();
        terms.insert(degree, m.clone());
        LfComplex { fan: m.fan.clone(), terms, diffs: BTreeMap::new() }
    }

    pub fn term(&self, i: i64) -> LfSheaf {
        self.terms.get(&i).cloned().unwrap_or_else(|| LfSheaf::zero(&self.fan))
    }

    pub fn d(&self, i: i64) -> LfMap {
        match self.diffs.get(&i) {
            Some(m) => m.clone(),
            None => LfMap::zero(&self.term(i), &self.term(i + 1), 0),
        }
    }

    pub fn range(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.iter().filter(|(_, t)| !t.is_zero()).map(|(&i, _)| i);
        let lo = it.next()?;
        Some((lo, it.next_back().unwrap_or(lo)))
    }

    pub fn min_grade(&self) -> Option<i64> {
        self.terms.values().filter_map(|t| t.min_grade()).min()
    }

    pub fn max_grade(&self) -> Option<i64> {
        self.terms.values().filter_map(|t| t.max_grade()).max()
    }

    pub fn is_complex(&self) -> bool {
        self.diffs.iter().all(|(&i, d)| {
            self.diffs.get(&(i + 1)).is_none_or(|n| n.compose(d).is_zero()) && d.is_morphism(&self.term(i), &self.term(i + 1))
        })
    }

    /// Dimensions of `H^i` of the stalk complex at `tau` in grade `g`, for every `i` in range.
    pub fn stalk_cohomology(&self, tau: FaceId, g: i64) -> BTreeMap<i64, usize> {
        let Some((lo, hi)) = self.range() else { return BTreeMap::new() };
        let mut out = BTreeMap::new();
        for i in lo..=hi {
            let dim = self.term(i).shape(tau).dim(g);
            let r_out = self.d(i).at_grade(tau, g).rank();
            let r_in = self.d(i - 1).at_grade(tau, g).rank();
            let h = dim - r_out - r_in;
            if h > 0 {
                out.insert(i, h);
            }
        }
        out
    }

    /// Whether every stalk is exact in grades `lo..=hi`.
    pub fn is_acyclic(&self, lo: i64, hi: i64) -> bool {
        (0..self.fan.num_faces()).all(|t| (lo..=hi).all(|g| self.stalk_cohomology(t, g).is_empty()))
    }

    /// Mapping cone of `f: self → y`.
    pub fn cone(&self, f: &LfChainMap, y: &LfComplex) -> LfComplex {
        let degrees: std::collections::BTreeSet<i64> = self.terms.keys().map(|i| i - 1).chain(y.terms.keys().copied()).collect();
        let mut terms = BTreeMap::new();
        for &i in &degrees {
            terms.insert(i, LfSheaf::direct_sum(&[self.term(i + 1), y.term(i)]));
        }
        let mut diffs = BTreeMap::new();
        let zero_sheaf = LfSheaf::zero(&self.fan);
        for &i in &degrees {
            let src = &terms[&i];
            let dst = terms.get(&(i + 1)).unwrap_or(&zero_sheaf);
            let (x1, x2, y0) = (self.term(i + 1), self.term(i + 2), y.term(i));
            let mut m = LfMap::zero(src, dst, 0);
            let fi = f.comp(self, y, i + 1);
            for t in 0..self.fan.num_faces() {
                let (nx1, nx2) = (x1.gens[t].len(), x2.gens[t].len());
                let ny0 = y0.gens[t].len();
                let ny1 = y.term(i + 1).gens[t].len();
                let r_x2: Vec<usize> = (0..nx2).collect();
                let r_y1: Vec<usize> = (nx2..nx2 + ny1).collect();
                let c_x1: Vec<usize> = (0..nx1).collect();
                let c_y0: Vec<usize> = (nx1..nx1 + ny0).collect();
                if dst.gens[t].is_empty() {
                    continue;
                }
                m.comps[t].place(&r_x2, &c_x1, &self.d(i + 1).comps[t].scale(&crate::graded_linalg::q(-1)));
                m.comps[t].place(&r_y1, &c_y0, &y.d(i).comps[t]);
                m.comps[t].place(&r_y1, &c_x1, &fi.comps[t]);
            }
            diffs.insert(i, m);
        }
        LfComplex { fan: self.fan.clone(), terms, diffs }
    }

    /// Grade window wide enough to catch all cohomology of a complex whose generators sit in
    /// `[min, max]`, given the sections cutoff.
    pub fn window(&self, cutoff: i64) -> (i64, i64) {
        let lo = self.min_grade().unwrap_or(0);
        let hi = self.max_grade().unwrap_or(0) + 2 * self.fan.ambient_rank as i64 + 4;
        (lo, hi.max(lo + cutoff))
    }

    /// Relabels internal grades by `{k}`.
    pub fn twist(&self, k: i64) -> LfComplex {
        LfComplex {
            fan: self.fan.clone(),
            terms: self.terms.iter().map(|(&i, t)| (i, t.shift(k))).collect(),
            diffs: self.diffs.iter().map(|(&i, d)| (i, d.shift_grades(k))).collect(),
        }
    }
}

impl LfChainMap {
    pub fn comp(&self, x: &LfComplex, y: &LfComplex, i: i64) -> LfMap {
        match self.comps.get(&i) {
            Some(m) => m.clone(),
            None => LfMap::zero(&x.term(i), &y.term(i), 0),
        }
    }

    pub fn is_chain_map(&self, x: &LfComplex, y: &LfComplex) -> bool {
        let degrees: std::collections::BTreeSet<i64> = x.terms.keys().chain(y.terms.keys()).copied().collect();
        degrees.iter().all(|&i| {
            let c = self.comp(x, y, i);
            c.is_morphism(&x.term(i), &y.term(i)) && y.d(i).compose(&c) == self.comp(x, y, i + 1).compose(&x.d(i))
        })
    }

    /// Quasi-isomorphism test by exactness of the cone in the given grade window.
    pub fn is_quasi_iso(&self, x: &LfComplex, y: &LfComplex, lo: i64, hi: i64) -> bool {
        x.cone(self, y).is_acyclic(lo, hi)
    }
}

/// Stalkwise split-injectivity: the constant part of every component has full column rank.
pub fn is_strong_injection(f: &LfMap) -> bool {
    f.comps.iter().all(|c| c.cols() == 0 || c.constant_part().rank() == c.cols())
}

/// Stalkwise surjectivity modulo the maximal ideal.
pub fn is_strong_surjection(f: &LfMap) -> bool {
    f.comps.iter().all(|c| c.rows() == 0 || c.constant_part().rank() == c.rows())
}

pub(crate) fn unit(n: usize, k: usize) -> Vec<crate::graded_linalg::Q> {
    let mut v = vec![crate::graded_linalg::q(0); n];
    v[k] = crate::graded_linalg::q(1);
    v
}

pub(crate) fn solve_vec(a: &Mat, b: &[crate::graded_linalg::Q]) -> Option<Vec<crate::graded_linalg::Q>> {
    if a.cols() == 0 {
        return b.iter().all(num_traits::Zero::is_zero).then(Vec::new);
    }
    a.solve(&Mat::from_cols(b.len(), &[b.to_vec()])).map(|x| x.col(0))
}
