//! Locally free sheaves stored by generator grades and polynomial restriction matrices.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fan_core::{FaceId, Fan};
use crate::graded_linalg::poly::{FreeShape, PolyMat};
use crate::graded_linalg::{DegreewiseModule, GradedMap, Mat, Q};

use super::QuiverSheaf;

/// A sheaf of free modules: stalk `τ` is free on generators of the given grades and
/// `res[(β, α)]` expresses the restriction of the generators of `β` to a facet `α`.
#[derive(Clone, Debug)]
pub struct LfSheaf {
    pub fan: Arc<Fan>,
    pub gens: Vec<Vec<i64>>,
    pub res: BTreeMap<(FaceId, FaceId), PolyMat>,
}

impl PartialEq for LfSheaf {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.res == other.res
    }
}

impl LfSheaf {
    pub fn zero(fan: &Arc<Fan>) -> LfSheaf {
        LfSheaf::from_gens(fan, vec![Vec::new(); fan.num_faces()])
    }

    /// A sheaf with the given stalk shapes and all restrictions zero.
    pub fn from_gens(fan: &Arc<Fan>, gens: Vec<Vec<i64>>) -> LfSheaf {
        let mut res = BTreeMap::new();
        for b in 0..fan.num_faces() {
            for &a in fan.facets(b) {
                res.insert((b, a), PolyMat::zero(fan.dim(a), gens[a].clone(), gens[b].clone(), 0));
            }
        }
        LfSheaf { fan: fan.clone(), gens, res }
    }

    /// The structure sheaf: polynomial functions on each span.
    pub fn structure_sheaf(fan: &Arc<Fan>) -> LfSheaf {
        let mut s = LfSheaf::from_gens(fan, vec![vec![0]; fan.num_faces()]);
        for ((_, a), m) in s.res.iter_mut() {
            *m = PolyMat::identity(fan.dim(*a), vec![0]);
        }
        s
    }

    /// The same sheaf in new stalk bases: `g[τ]` is an automorphism of the stalk at `τ` and the
    /// restrictions become `g_ξ ∘ res ∘ g_τ^{-1}`. Returns the new sheaf and the isomorphism
    /// `g` onto it, or `None` if some `g[τ]` is not invertible.
    pub fn change_basis(&self, g: &[PolyMat]) -> Option<(LfSheaf, LfMap)> {
        let inv: Vec<PolyMat> = g.iter().map(PolyMat::inverse).collect::<Option<_>>()?;
        let mut out = self.clone();
        for (&(b, a), m) in out.res.iter_mut() {
            if m.rows() == 0 || m.cols() == 0 {
                continue;
            }
            let back = inv[b].substitute(self.fan.restriction_matrix(b, a));
            *m = g[a].compose(&self.res[&(b, a)]).compose(&back);
        }
        let iso = LfMap { shift: 0, comps: g.to_vec() };
        Some((out, iso))
    }

    /// Extension by zero from a locally closed set of faces.
    pub fn extension_by_zero(&self, keep: &[FaceId]) -> LfSheaf {
        let gens = (0..self.fan.num_faces()).map(|f| if keep.contains(&f) { self.gens[f].clone() } else { Vec::new() }).collect();
        let mut out = LfSheaf::from_gens(&self.fan, gens);
        for (&(b, a), m) in &self.res {
            if keep.contains(&a) && keep.contains(&b) {
                out.res.insert((b, a), m.clone());
            }
        }
        out
    }

    /// `𝒜_{[τ]}`: the structure sheaf on the closed star of faces below `tau`.
    pub fn closed_face(fan: &Arc<Fan>, tau: FaceId) -> LfSheaf {
        LfSheaf::structure_sheaf(fan).extension_by_zero(&fan.closure(tau))
    }

    /// `𝒜_{{τ}}`: the skyscraper `𝒜_τ` at one face.
    pub fn point_face(fan: &Arc<Fan>, tau: FaceId) -> LfSheaf {
        LfSheaf::structure_sheaf(fan).extension_by_zero(&[tau])
    }

    /// Grading shift `{k}`, with `M{k}_g = M_{k+g}`.
    pub fn shift(&self, k: i64) -> LfSheaf {
        let gens = self.gens.iter().map(|g| g.iter().map(|x| x - k).collect()).collect();
        let res = self
            .res
            .iter()
            .map(|(&key, m)| {
                let mut m = m.clone();
                m.dst.iter_mut().for_each(|x| *x -= k);
                m.src.iter_mut().for_each(|x| *x -= k);
                (key, m)
            })
            .collect();
        LfSheaf { fan: self.fan.clone(), gens, res }
    }

    pub fn direct_sum(parts: &[LfSheaf]) -> LfSheaf {
        let fan = parts[0].fan.clone();
        let nf = fan.num_faces();
        let gens = (0..nf).map(|f| parts.iter().flat_map(|p| p.gens[f].clone()).collect()).collect();
        let mut res = BTreeMap::new();
        for b in 0..nf {
            for &a in fan.facets(b) {
                let mut m = parts[0].res[&(b, a)].clone();
                for p in &parts[1..] {
                    m = m.direct_sum(&p.res[&(b, a)]);
                }
                res.insert((b, a), m);
            }
        }
        LfSheaf { fan, gens, res }
    }

    pub fn shape(&self, f: FaceId) -> FreeShape {
        FreeShape::new(self.fan.dim(f), self.gens[f].clone())
    }

    pub fn rank(&self, f: FaceId) -> usize {
        self.gens[f].len()
    }

    pub fn support(&self) -> Vec<FaceId> {
        (0..self.fan.num_faces()).filter(|&f| !self.gens[f].is_empty()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(|g| g.is_empty())
    }

    pub fn min_grade(&self) -> Option<i64> {
        self.gens.iter().flatten().copied().min()
    }

    pub fn max_grade(&self) -> Option<i64> {
        self.gens.iter().flatten().copied().max()
    }

    /// Restriction from `b` to any face `a ≤ b`, composed along a chain of facets.
    pub fn res_poly(&self, b: FaceId, a: FaceId) -> PolyMat {
        assert!(self.fan.leq(a, b));
        if a == b {
            return PolyMat::identity(self.fan.dim(a), self.gens[a].clone());
        }
        let mid = *self.fan.facets(b).iter().find(|&&m| self.fan.leq(a, m)).unwrap();
        let first = &self.res[&(b, mid)];
        let rest = self.res_poly(mid, a);
        rest.compose(&first.substitute(self.fan.restriction_matrix(mid, a)))
    }

    /// Matrix of the restriction `M(b)_g → M(a)_g` in monomial coordinates.
    pub fn res_at_grade(&self, b: FaceId, a: FaceId, g: i64) -> Mat {
        let phi = if self.fan.facets(b).contains(&a) { self.res[&(b, a)].clone() } else { self.res_poly(b, a) };
        restriction_matrix_at(&self.fan, &phi, b, a, g)
    }

    /// Whether restrictions along the two paths of every interval of length two agree.
    pub fn is_functorial(&self) -> bool {
        let fan = &self.fan;
        for t in 0..fan.num_faces() {
            for r in fan.boundary(t) {
                if fan.dim(t) != fan.dim(r) + 2 {
                    continue;
                }
                let mut composites = Vec::new();
                for &m in fan.facets(t) {
                    if fan.facets(m).contains(&r) {
                        let c = self.res[&(m, r)].compose(&self.res[&(t, m)].substitute(fan.restriction_matrix(m, r)));
                        composites.push(c);
                    }
                }
                if composites.windows(2).any(|w| w[0] != w[1]) {
                    return false;
                }
            }
        }
        true
    }

    /// Degreewise model on grades `lo..=hi`.
    pub fn to_quiver(&self, lo: i64, hi: i64) -> QuiverSheaf {
        let stalks = (0..self.fan.num_faces()).map(|f| DegreewiseModule::free(&self.shape(f), lo, hi)).collect();
        let mut res = BTreeMap::new();
        for &(b, a) in self.res.keys() {
            let mats = (lo..=hi).map(|g| self.res_at_grade(b, a, g)).collect();
            res.insert((b, a), GradedMap { lo, hi, mats });
        }
        QuiverSheaf { fan: self.fan.clone(), lo, hi, stalks, res }
    }

    /// A grade range large enough to see every generator of boundary sections.
    pub fn working_range(&self, cutoff: i64) -> (i64, i64) {
        let lo = self.min_grade().unwrap_or(0);
        let hi = self.max_grade().unwrap_or(0) + 2 * self.fan.ambient_rank as i64 + 4;
        (lo, hi.max(cutoff))
    }
}

/// Degreewise matrix of an `𝒜_b`-module map given by `phi` (over `𝒜_a`) after restricting
/// coefficients from `b` to `a`.
pub fn restriction_matrix_at(fan: &Fan, phi: &PolyMat, b: FaceId, a: FaceId, g: i64) -> Mat {
    let src = FreeShape::new(fan.dim(b), phi.src.clone());
    let mid = FreeShape::new(fan.dim(a), phi.src.clone());
    let sub = fan.restriction_matrix(b, a);
    let mut s = Mat::zeros(mid.dim(g), src.dim(g));
    let so = src.offsets(g);
    let mo = mid.offsets(g);
    for j in 0..phi.src.len() {
        if let Some(d) = src.gen_deg(j, g) {
            let m = crate::graded_linalg::poly::subst_cached(sub, d);
            s.add_block(mo[j], so[j], &m);
        }
    }
    phi.at_grade(g).mul(&s)
}

/// A degree-`shift` morphism between locally free sheaves, one polynomial matrix per face.
#[derive(Clone, Debug, PartialEq)]
pub struct LfMap {
    pub shift: i64,
    pub comps: Vec<PolyMat>,
}

impl LfMap {
    pub fn zero(src: &LfSheaf, dst: &LfSheaf, shift: i64) -> LfMap {
        let comps =
            (0..src.fan.num_faces()).map(|f| PolyMat::zero(src.fan.dim(f), dst.gens[f].clone(), src.gens[f].clone(), shift)).collect();
        LfMap { shift, comps }
    }

    pub fn identity(m: &LfSheaf) -> LfMap {
        let comps = (0..m.fan.num_faces()).map(|f| PolyMat::identity(m.fan.dim(f), m.gens[f].clone())).collect();
        LfMap { shift: 0, comps }
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &LfMap) -> LfMap {
        let comps = self.comps.iter().zip(&rhs.comps).map(|(a, b)| a.compose(b)).collect();
        LfMap { shift: self.shift + rhs.shift, comps }
    }

    pub fn add(&self, other: &LfMap) -> LfMap {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect();
        LfMap { shift: self.shift, comps }
    }

    pub fn scale(&self, s: &Q) -> LfMap {
        LfMap { shift: self.shift, comps: self.comps.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// Whether the components commute with all restrictions.
    pub fn is_morphism(&self, src: &LfSheaf, dst: &LfSheaf) -> bool {
        let fan = &src.fan;
        for (&(b, a), phi) in &src.res {
            let lhs = dst.res[&(b, a)].compose(&self.comps[b].substitute(fan.restriction_matrix(b, a)));
            let rhs = self.comps[a].compose(phi);
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Coefficient vector of all components, in face order.
    pub fn coefficients(&self) -> Vec<Q> {
        self.comps.iter().flat_map(|c| c.coefficients()).collect()
    }

    pub fn from_coefficients(template: &LfMap, coeffs: &[Q]) -> LfMap {
        let mut k = 0;
        let comps = template
            .comps
            .iter()
            .map(|c| {
                let n = c.num_coefficients();
                let m = PolyMat::from_coefficients(c, &coeffs[k..k + n]);
                k += n;
                m
            })
            .collect();
        LfMap { shift: template.shift, comps }
    }

    /// Block-diagonal sum of maps between direct sums.
    pub fn direct_sum(parts: &[LfMap]) -> LfMap {
        let n = parts[0].comps.len();
        let comps = (0..n)
            .map(|f| {
                let mut m = parts[0].comps[f].clone();
                for p in &parts[1..] {
                    m = m.direct_sum(&p.comps[f]);
                }
                m
            })
            .collect();
        LfMap { shift: parts[0].shift, comps }
    }

    /// Relabels source and target generator grades after shifting both sheaves by `{k}`.
    pub fn shift_grades(&self, k: i64) -> LfMap {
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.dst.iter_mut().for_each(|x| *x -= k);
                c.src.iter_mut().for_each(|x| *x -= k);
                c
            })
            .collect();
        LfMap { shift: self.shift, comps }
    }

    /// Degreewise matrices on face `f`, from grade `g` to `g + shift`.
    pub fn at_grade(&self, f: FaceId, g: i64) -> Mat {
        self.comps[f].at_grade(g)
    }
}
