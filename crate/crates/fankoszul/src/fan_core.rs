//! Rational fans: face lattices, spans, dual cones, the face bijection with
//! the dual fan, and oriented facet incidences.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::graded_linalg::matrix::{q, sign, Mat, Q};
use crate::{Error, Result};

pub type FaceId = usize;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FanDocument {
    pub ambient_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    pub ray_indices: Vec<usize>,
    pub dim: usize,
    pub codim: usize,
    /// Rays of the face chosen greedily (in index order) as a basis of its span.
    pub basis_rays: Vec<usize>,
    pub span_basis: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct Fan {
    pub ambient_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub maximal_cones: Vec<Vec<usize>>,
    faces: Vec<Face>,
    by_rays: BTreeMap<Vec<usize>, FaceId>,
    leq: Vec<Vec<bool>>,
    facets: Vec<Vec<FaceId>>,
    cofacets: Vec<Vec<FaceId>>,
    incidence: FacetIncidence,
    restriction: BTreeMap<(FaceId, FaceId), Mat>,
}

/// Signs `ε(τ, ξ)` for every facet `ξ` of every face `τ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FacetIncidence {
    pub signs: BTreeMap<(FaceId, FaceId), i32>,
}

fn rank_of(rays: &[Vec<i64>], idx: &[usize]) -> usize {
    if idx.is_empty() {
        return 0;
    }
    Mat::from_rows(idx.iter().map(|&i| rays[i].iter().map(|&x| q(x)).collect()).collect()).rank()
}

fn greedy_basis(rays: &[Vec<i64>], idx: &[usize]) -> Vec<usize> {
    if idx.is_empty() {
        return Vec::new();
    }
    let n = rays[idx[0]].len();
    let cols: Vec<Vec<Q>> = idx.iter().map(|&i| rays[i].iter().map(|&x| q(x)).collect()).collect();
    let m = Mat::from_cols(n, &cols);
    m.independent_cols().into_iter().map(|c| idx[c]).collect()
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn primitive(v: &[Q]) -> Vec<i64> {
    let mut l = BigInt::from(1);
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return vec![0; v.len()];
    }
    ints.iter().map(|x| (x / &g).to_i64().expect("ray entry overflow")).collect()
}

/// One supporting hyperplane per facet of the cone on `idx`: the facet's ray set and an
/// inward normal lying in the span of the cone.
fn cone_facets(rays: &[Vec<i64>], idx: &[usize]) -> Vec<(Vec<usize>, Vec<Q>)> {
    let basis = greedy_basis(rays, idx);
    let d = basis.len();
    if d == 0 {
        return Vec::new();
    }
    let n = rays[idx[0]].len();
    let brows: Vec<Vec<Q>> = basis.iter().map(|&i| rays[i].iter().map(|&x| q(x)).collect()).collect();
    let b = Mat::from_rows(brows);
    let bt = b.transpose();
    let mut found: BTreeMap<Vec<usize>, Vec<Q>> = BTreeMap::new();
    for sub in combinations(idx, d - 1) {
        if rank_of(rays, &sub) != d - 1 {
            continue;
        }
        let rs = if sub.is_empty() {
            Mat::zeros(0, n)
        } else {
            Mat::from_rows(sub.iter().map(|&i| rays[i].iter().map(|&x| q(x)).collect()).collect())
        };
        let m = if sub.is_empty() { Mat::zeros(0, d) } else { rs.mul(&bt) };
        let k = m.kernel();
        if k.cols() != 1 {
            continue;
        }
        let normal = bt.mul_vec(&k.col(0));
        let vals: Vec<Q> = idx.iter().map(|&i| rays[i].iter().zip(&normal).map(|(&a, c)| q(a) * c).sum()).collect();
        let pos = vals.iter().all(|x| !x.is_negative());
        let neg = vals.iter().all(|x| !x.is_positive());
        if !pos && !neg {
            continue;
        }
        let normal = if pos { normal } else { normal.iter().map(|x| -x).collect() };
        let facet: Vec<usize> = idx.iter().zip(&vals).filter(|(_, v)| v.is_zero()).map(|(&i, _)| i).collect();
        found.entry(facet).or_insert(normal);
    }
    found.into_iter().collect()
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

fn all_faces(rays: &[Vec<i64>], idx: &[usize], out: &mut BTreeSet<Vec<usize>>) {
    if !out.insert(idx.to_vec()) {
        return;
    }
    for (f, _) in cone_facets(rays, idx) {
        all_faces(rays, &f, out);
    }
}

fn label_of(rays: &[usize]) -> String {
    let parts: Vec<String> = rays.iter().map(|r| r.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub fn load_fan(document: &str) -> Result<Fan> {
    let doc: FanDocument = serde_json::from_str(document).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    Fan::from_document(&doc)
}

impl Fan {
    pub fn from_document(doc: &FanDocument) -> Result<Fan> {
        let n = doc.ambient_rank;
        if n == 0 {
            return Err(Error::MalformedDocument("ambient_rank must be at least 1".into()));
        }
        for (i, r) in doc.rays.iter().enumerate() {
            if r.len() != n {
                return Err(Error::MalformedDocument(format!("ray {i} has length {} instead of {n}", r.len())));
            }
            let g = r.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g != 1 {
                return Err(Error::NonPrimitiveRay(format!("{i} {:?}", r)));
            }
        }
        let distinct: BTreeSet<&Vec<i64>> = doc.rays.iter().collect();
        if distinct.len() != doc.rays.len() {
            return Err(Error::MalformedDocument("duplicate rays".into()));
        }
        let mut cones: Vec<Vec<usize>> = Vec::new();
        for c in &doc.maximal_cones {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if let Some(&bad) = c.iter().find(|&&i| i >= doc.rays.len()) {
                return Err(Error::MalformedDocument(format!("cone references missing ray {bad}")));
            }
            cones.push(c);
        }
        let mut faceset = BTreeSet::new();
        for c in &cones {
            let d = rank_of(&doc.rays, c);
            let facets = cone_facets(&doc.rays, c);
            if d > 0 {
                let common = facets.iter().fold(c.iter().copied().collect::<BTreeSet<_>>(), |acc, (f, _)| {
                    acc.intersection(&f.iter().copied().collect()).copied().collect()
                });
                if facets.is_empty() || !common.is_empty() {
                    return Err(Error::NonPointedCone(label_of(c)));
                }
            }
            let mut local = BTreeSet::new();
            all_faces(&doc.rays, c, &mut local);
            for &r in c {
                if !local.contains(&vec![r]) {
                    return Err(Error::MalformedDocument(format!("ray {r} is not extremal in cone {}", label_of(c))));
                }
            }
            faceset.extend(local);
        }
        faceset.insert(Vec::new());
        for (a, ca) in cones.iter().enumerate() {
            for cb in cones.iter().skip(a + 1) {
                let common: Vec<usize> = ca.iter().copied().filter(|r| cb.contains(r)).collect();
                if !faceset.contains(&common) {
                    return Err(Error::MalformedDocument(format!(
                        "cones {} and {} do not meet in a common face",
                        label_of(ca),
                        label_of(cb)
                    )));
                }
            }
        }
        let mut list: Vec<(usize, Vec<usize>)> = faceset.into_iter().map(|f| (rank_of(&doc.rays, &f), f)).collect();
        list.sort();
        let faces: Vec<Face> = list
            .into_iter()
            .enumerate()
            .map(|(id, (dim, rays))| {
                let basis_rays = greedy_basis(&doc.rays, &rays);
                let span_basis = basis_rays.iter().map(|&i| doc.rays[i].clone()).collect();
                Face { id, ray_indices: rays, dim, codim: n - dim, basis_rays, span_basis }
            })
            .collect();
        let by_rays = faces.iter().map(|f| (f.ray_indices.clone(), f.id)).collect();
        let nf = faces.len();
        let mut leq = vec![vec![false; nf]; nf];
        for a in &faces {
            for b in &faces {
                leq[a.id][b.id] = a.ray_indices.iter().all(|r| b.ray_indices.contains(r));
            }
        }
        let mut facets = vec![Vec::new(); nf];
        let mut cofacets = vec![Vec::new(); nf];
        for a in &faces {
            for b in &faces {
                if leq[b.id][a.id] && b.dim + 1 == a.dim {
                    facets[a.id].push(b.id);
                    cofacets[b.id].push(a.id);
                }
            }
        }
        let maximal_cones = {
            let mut m: Vec<Vec<usize>> =
                cones.iter().filter(|c| !cones.iter().any(|d| d.len() > c.len() && c.iter().all(|r| d.contains(r)))).cloned().collect();
            m.sort();
            m.dedup();
            m
        };
        let mut fan = Fan {
            ambient_rank: n,
            rays: doc.rays.clone(),
            maximal_cones,
            faces,
            by_rays,
            leq,
            facets,
            cofacets,
            incidence: FacetIncidence::default(),
            restriction: BTreeMap::new(),
        };
        for t in 0..nf {
            for x in 0..nf {
                if fan.leq[x][t] {
                    let a = fan.compute_restriction(t, x);
                    fan.restriction.insert((t, x), a);
                }
            }
        }
        fan.incidence = incidence_signs(&fan);
        Ok(fan)
    }

    pub fn document(&self) -> FanDocument {
        FanDocument { ambient_rank: self.ambient_rank, rays: self.rays.clone(), maximal_cones: self.maximal_cones.clone() }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn dim(&self, id: FaceId) -> usize {
        self.faces[id].dim
    }

    pub fn codim(&self, id: FaceId) -> usize {
        self.faces[id].codim
    }

    pub fn zero_cone(&self) -> FaceId {
        0
    }

    /// The unique maximal face, when the fan is the face fan of one cone.
    pub fn top(&self) -> Option<FaceId> {
        let maxes: Vec<FaceId> = (0..self.faces.len()).filter(|&f| self.cofacets[f].is_empty()).collect();
        (maxes.len() == 1).then(|| maxes[0])
    }

    pub fn find(&self, rays: &[usize]) -> Option<FaceId> {
        let mut r = rays.to_vec();
        r.sort_unstable();
        self.by_rays.get(&r).copied()
    }

    /// Face id from a label such as `[0,1]` or `[]`.
    pub fn parse_face(&self, s: &str) -> Result<FaceId> {
        let t = s.trim();
        let inner = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).unwrap_or(t);
        let rays: std::result::Result<Vec<usize>, _> =
            inner.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|x| x.parse::<usize>()).collect();
        let rays = rays.map_err(|_| Error::FaceNotInFan(s.to_string()))?;
        self.find(&rays).ok_or_else(|| Error::FaceNotInFan(s.to_string()))
    }

    pub fn label(&self, id: FaceId) -> String {
        label_of(&self.faces[id].ray_indices)
    }

    pub fn leq(&self, a: FaceId, b: FaceId) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: FaceId, b: FaceId) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn facets(&self, id: FaceId) -> &[FaceId] {
        &self.facets[id]
    }

    pub fn cofacets(&self, id: FaceId) -> &[FaceId] {
        &self.cofacets[id]
    }

    /// Proper faces of `id`.
    pub fn boundary(&self, id: FaceId) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&f| self.lt(f, id)).collect()
    }

    /// Faces containing `id` (its open star).
    pub fn star(&self, id: FaceId) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&f| self.leq(id, f)).collect()
    }

    /// Faces of `id`, including itself.
    pub fn closure(&self, id: FaceId) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&f| self.leq(f, id)).collect()
    }

    /// Faces `γ` with `a ≤ γ ≤ b`.
    pub fn interval(&self, a: FaceId, b: FaceId) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&f| self.leq(a, f) && self.leq(f, b)).collect()
    }

    /// Pairs `(β, α)` with `α` a facet of `β`, both in `set`.
    pub fn cover_pairs_in(&self, set: &[FaceId]) -> Vec<(FaceId, FaceId)> {
        let mut out = Vec::new();
        for &b in set {
            for &a in &self.facets[b] {
                if set.contains(&a) {
                    out.push((b, a));
                }
            }
        }
        out
    }

    /// Whether `set` is locally closed in the face poset.
    pub fn is_quasifan(&self, set: &[FaceId]) -> bool {
        for &a in set {
            for &b in set {
                if self.leq(a, b) {
                    for g in self.interval(a, b) {
                        if !set.contains(&g) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Coordinates of a vector of `Span(face)` in the face's span basis.
    pub fn coords(&self, face: FaceId, v: &[Q]) -> Option<Vec<Q>> {
        let f = &self.faces[face];
        if f.dim == 0 {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        let cols: Vec<Vec<Q>> = f.span_basis.iter().map(|b| b.iter().map(|&x| q(x)).collect()).collect();
        let b = Mat::from_cols(self.ambient_rank, &cols);
        let rhs = Mat::from_cols(self.ambient_rank, &[v.to_vec()]);
        b.solve(&rhs).map(|x| x.col(0))
    }

    pub fn ray_coords(&self, face: FaceId, ray: usize) -> Vec<Q> {
        let v: Vec<Q> = self.rays[ray].iter().map(|&x| q(x)).collect();
        self.coords(face, &v).expect("ray outside the span of the face")
    }

    /// Matrix `A` with `t = A s` expressing a point of `Span(xi)` in `tau` coordinates,
    /// for `xi ≤ tau`. Its columns are the `tau` coordinates of the span basis of `xi`.
    pub fn restriction_matrix(&self, tau: FaceId, xi: FaceId) -> &Mat {
        &self.restriction[&(tau, xi)]
    }

    fn compute_restriction(&self, tau: FaceId, xi: FaceId) -> Mat {
        let cols: Vec<Vec<Q>> = self.faces[xi].basis_rays.iter().map(|&r| self.ray_coords(tau, r)).collect();
        Mat::from_cols(self.faces[tau].dim, &cols)
    }

    pub fn incidence(&self) -> &FacetIncidence {
        &self.incidence
    }

    /// `ε(tau, xi)` for a facet `xi` of `tau`, zero otherwise.
    pub fn sign(&self, tau: FaceId, xi: FaceId) -> i32 {
        self.incidence.signs.get(&(tau, xi)).copied().unwrap_or(0)
    }

    /// Digest of the face data for reports.
    pub fn summary(&self) -> serde_json::Value {
        let faces: Vec<serde_json::Value> = self
            .faces
            .iter()
            .map(|f| {
                serde_json::json!({
                    "id": self.label(f.id),
                    "dim": f.dim,
                    "codim": f.codim,
                    "span_basis": f.span_basis,
                })
            })
            .collect();
        serde_json::json!({ "ambient_rank": self.ambient_rank, "rays": self.rays, "faces": faces })
    }
}

/// Orientation signs: orient each face by its greedy span basis; for a facet
/// `xi` of `tau` the sign compares `(r, basis of xi)` with the basis of `tau`,
/// where `r` is any ray of `tau` off `xi`.
pub fn incidence_signs(fan: &Fan) -> FacetIncidence {
    let mut signs = BTreeMap::new();
    for tau in fan.faces() {
        for &xi in fan.facets(tau.id) {
            let x = fan.face(xi);
            let r = *tau.ray_indices.iter().find(|r| !x.ray_indices.contains(r)).unwrap();
            let mut cols = vec![fan.ray_coords(tau.id, r)];
            for &b in &x.basis_rays {
                cols.push(fan.ray_coords(tau.id, b));
            }
            let m = Mat::from_cols(tau.dim, &cols);
            signs.insert((tau.id, xi), sign(&m.det()));
        }
    }
    FacetIncidence { signs }
}

/// Verifies that every length-two chain cancels, so cellular differentials square to zero.
pub fn audit_signs(fan: &Fan, inc: &FacetIncidence) -> Result<()> {
    for tau in fan.faces() {
        for rho in fan.faces() {
            if tau.dim != rho.dim + 2 || !fan.leq(rho.id, tau.id) {
                continue;
            }
            let mut total = 0;
            for &xi in fan.facets(tau.id) {
                if fan.facets(xi).contains(&rho.id) {
                    total += inc.signs[&(tau.id, xi)] * inc.signs[&(xi, rho.id)];
                }
            }
            if total != 0 {
                return Err(Error::SignAuditFailure(format!("chains from {} to {} sum to {total}", fan.label(tau.id), fan.label(rho.id))));
            }
        }
    }
    Ok(())
}

/// The fan `[σ]` together with `[σ̌]` and the face bijection `α ↦ α^⊥`.
#[derive(Clone, Debug)]
pub struct DualFanMap {
    pub source: Fan,
    pub target: Fan,
    forward: Vec<FaceId>,
    backward: Vec<FaceId>,
}

/// The face fan of the dual cone, with rays the primitive inward facet normals
/// sorted in decreasing lexicographic order.
pub fn dual_cone(fan: &Fan) -> Result<Fan> {
    if fan.maximal_cones.len() != 1 {
        return Err(Error::MalformedDocument("dual cone needs exactly one maximal cone".into()));
    }
    let cone = &fan.maximal_cones[0];
    if rank_of(&fan.rays, cone) != fan.ambient_rank {
        return Err(Error::NotFullDimensional);
    }
    let mut normals: Vec<Vec<i64>> = cone_facets(&fan.rays, cone).into_iter().map(|(_, n)| primitive(&n)).collect();
    normals.sort();
    normals.reverse();
    let doc = FanDocument { ambient_rank: fan.ambient_rank, maximal_cones: vec![(0..normals.len()).collect()], rays: normals };
    Fan::from_document(&doc).map_err(|e| match e {
        Error::NonPointedCone(_) => Error::NotPointed,
        other => other,
    })
}

impl DualFanMap {
    pub fn new(source: &Fan) -> Result<DualFanMap> {
        let target = dual_cone(source)?;
        let mut forward = Vec::with_capacity(source.num_faces());
        for a in source.faces() {
            let rays: Vec<usize> =
                (0..target.rays.len()).filter(|&u| a.ray_indices.iter().all(|&r| dot(&target.rays[u], &source.rays[r]) == 0)).collect();
            let f = target.find(&rays).ok_or_else(|| Error::FaceNotInFan(label_of(&rays)))?;
            forward.push(f);
        }
        let mut backward = vec![usize::MAX; target.num_faces()];
        for (a, &b) in forward.iter().enumerate() {
            backward[b] = a;
        }
        Ok(DualFanMap { source: source.clone(), target, forward, backward })
    }

    pub fn perp(&self, face: FaceId) -> Result<FaceId> {
        self.forward.get(face).copied().ok_or_else(|| Error::FaceNotInFan(face.to_string()))
    }

    /// Inverse bijection from faces of the dual fan.
    pub fn perp_inverse(&self, dual_face: FaceId) -> Result<FaceId> {
        self.backward.get(dual_face).copied().ok_or_else(|| Error::FaceNotInFan(dual_face.to_string()))
    }
}

pub fn perp_map(pair: &DualFanMap, face: FaceId) -> Result<FaceId> {
    pair.perp(face)
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn face_counts() {
        assert_eq!(fixtures::fx1().num_faces(), 4);
        assert_eq!(fixtures::fx3().num_faces(), 2);
        let fx2 = fixtures::fx2();
        assert_eq!(fx2.num_faces(), 10);
        let dims: Vec<usize> = fx2.faces().iter().map(|f| f.dim).collect();
        assert_eq!(dims, vec![0, 1, 1, 1, 1, 2, 2, 2, 2, 3]);
        assert_eq!(fx2.incidence().signs.len(), 16);
    }

    #[test]
    fn rejects_bad_documents() {
        let np = r#"{"ambient_rank":1,"rays":[[1],[-1]],"maximal_cones":[[0,1]]}"#;
        assert!(matches!(load_fan(np), Err(Error::NonPointedCone(_))));
        let half = r#"{"ambient_rank":2,"rays":[[1,0],[-1,0],[0,1]],"maximal_cones":[[0,1,2]]}"#;
        assert!(matches!(load_fan(half), Err(Error::NonPointedCone(_))));
        let prim = r#"{"ambient_rank":2,"rays":[[2,0],[0,1]],"maximal_cones":[[0,1]]}"#;
        assert!(matches!(load_fan(prim), Err(Error::NonPrimitiveRay(_))));
        let len = r#"{"ambient_rank":2,"rays":[[1]],"maximal_cones":[[0]]}"#;
        assert!(matches!(load_fan(len), Err(Error::MalformedDocument(_))));
        let inner = r#"{"ambient_rank":2,"rays":[[1,0],[1,1],[0,1]],"maximal_cones":[[0,1,2]]}"#;
        assert!(matches!(load_fan(inner), Err(Error::MalformedDocument(_))));
    }

    #[test]
    fn fx3_sign_is_positive() {
        let f = fixtures::fx3();
        assert_eq!(f.sign(1, 0), 1);
    }

    #[test]
    fn fx1_signs_cancel() {
        let f = fixtures::fx1();
        audit_signs(&f, f.incidence()).unwrap();
        let s = f.find(&[0, 1]).unwrap();
        let r1 = f.find(&[0]).unwrap();
        let r2 = f.find(&[1]).unwrap();
        assert_eq!(f.sign(s, r1) * f.sign(r1, 0), -f.sign(s, r2) * f.sign(r2, 0));
    }

    #[test]
    fn dual_fans() {
        assert_eq!(dual_cone(&fixtures::fx1()).unwrap().rays, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(dual_cone(&fixtures::fx3()).unwrap().rays, vec![vec![1]]);
        let d2 = dual_cone(&fixtures::fx2()).unwrap();
        assert_eq!(d2.rays.len(), 4);
        assert_eq!(d2.num_faces(), 10);
    }

    #[test]
    fn perp_on_fx1() {
        let f = fixtures::fx1();
        let m = DualFanMap::new(&f).unwrap();
        let r1 = f.find(&[0]).unwrap();
        let img = m.perp(r1).unwrap();
        let rays = &m.target.face(img).ray_indices;
        assert_eq!(rays.len(), 1);
        assert_eq!(m.target.rays[rays[0]], vec![0, 1]);
        assert_eq!(m.perp(0).unwrap(), m.target.top().unwrap());
        assert!(m.perp(99).is_err());
    }
}
