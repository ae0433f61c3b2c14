//! Sheaves stored degreewise, with general (not necessarily free) stalks.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fan_core::{FaceId, Fan};
use crate::graded_linalg::poly::{FreeShape, PolyMat};
use crate::graded_linalg::{DegreewiseModule, GradedMap, Mat};
use crate::{Error, Result};

use super::LfSheaf;

#[derive(Clone, Debug)]
pub struct QuiverSheaf {
    pub fan: Arc<Fan>,
    pub lo: i64,
    pub hi: i64,
    pub stalks: Vec<DegreewiseModule>,
    /// Restrictions `M(β) → M(α)` for `α` a facet of `β`.
    pub res: BTreeMap<(FaceId, FaceId), GradedMap>,
}

/// Sections over a set of faces, as a module over `𝒜_τ` (or over `𝒜_o` when `over` is `None`).
#[derive(Clone, Debug)]
pub struct SectionModule {
    pub faces: Vec<FaceId>,
    pub over: Option<FaceId>,
    pub module: DegreewiseModule,
    /// Per grade, the sections as columns in the concatenated stalk coordinates of `faces`.
    pub embed: Vec<Mat>,
}

impl SectionModule {
    pub fn embed_at(&self, g: i64) -> &Mat {
        &self.embed[(g - self.module.lo) as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Predicates {
    pub is_flabby: bool,
    pub is_locally_free: bool,
    pub is_pure: bool,
}

impl QuiverSheaf {
    pub fn zero(fan: &Arc<Fan>, lo: i64, hi: i64) -> QuiverSheaf {
        LfSheaf::zero(fan).to_quiver(lo, hi)
    }

    /// Restriction `M(b)_g → M(a)_g` for any `a ≤ b`.
    pub fn res_at(&self, b: FaceId, a: FaceId, g: i64) -> Mat {
        if a == b {
            return Mat::identity(self.stalks[b].dim(g));
        }
        let mid = *self.fan.facets(b).iter().find(|&&m| self.fan.leq(a, m)).unwrap();
        self.res_at(mid, a, g).mul(self.res[&(b, mid)].at(g))
    }

    /// Action of variable `v` of `𝒜_tau` on the stalk at `rho ≤ tau`, from grade `g`.
    pub fn action_from(&self, tau: FaceId, rho: FaceId, v: usize, g: i64) -> Mat {
        let a = self.fan.restriction_matrix(tau, rho);
        let st = &self.stalks[rho];
        let mut m = Mat::zeros(st.dim(g + 2), st.dim(g));
        for j in 0..a.cols() {
            let c = &a[(v, j)];
            if !num_traits::Zero::is_zero(c) {
                m.add_assign(&st.action(j, g).scale(c));
            }
        }
        m
    }

    /// Equalizer of the restriction maps over `faces`, as a module over `𝒜_over`.
    pub fn sections(&self, faces: &[FaceId], over: Option<FaceId>) -> Result<SectionModule> {
        if let Some(t) = over {
            if let Some(&bad) = faces.iter().find(|&&f| !self.fan.leq(f, t)) {
                return Err(Error::FaceNotInFan(format!("{} is not a face of {}", self.fan.label(bad), self.fan.label(t))));
            }
        }
        let nvars = over.map_or(0, |t| self.fan.dim(t));
        let pairs = self.fan.cover_pairs_in(faces);
        let offsets = |g: i64| {
            let mut out = Vec::new();
            let mut acc = 0;
            for &f in faces {
                out.push(acc);
                acc += self.stalks[f].dim(g);
            }
            (out, acc)
        };
        let mut embed = Vec::new();
        for g in self.lo..=self.hi {
            let (off, n) = offsets(g);
            let rows: usize = pairs.iter().map(|&(_, a)| self.stalks[a].dim(g)).sum();
            let mut c = Mat::zeros(rows, n);
            let mut r = 0;
            for &(b, a) in &pairs {
                let ib = faces.iter().position(|&x| x == b).unwrap();
                let ia = faces.iter().position(|&x| x == a).unwrap();
                c.add_block(r, off[ib], self.res[&(b, a)].at(g));
                c.add_block(r, off[ia], &Mat::identity(self.stalks[a].dim(g)).neg());
                r += self.stalks[a].dim(g);
            }
            embed.push(if rows == 0 { Mat::identity(n) } else { c.kernel() });
        }
        let ambient = DegreewiseModule::from_fn(
            nvars,
            self.lo,
            self.hi,
            |g| offsets(g).1,
            |v, g| {
                let (src_off, src_n) = offsets(g);
                let (dst_off, dst_n) = offsets(g + 2);
                let mut m = Mat::zeros(dst_n, src_n);
                if let Some(t) = over {
                    for (k, &f) in faces.iter().enumerate() {
                        m.add_block(dst_off[k], src_off[k], &self.action_from(t, f, v, g));
                    }
                }
                m
            },
        );
        let module = ambient.submodule(&embed)?;
        Ok(SectionModule { faces: faces.to_vec(), over, module, embed })
    }

    /// Relative sections `M(τ, ∂τ)`: elements of the stalk restricting to zero on every facet.
    pub fn relative_sections(&self, tau: FaceId) -> Result<SectionModule> {
        let facets = self.fan.facets(tau);
        let mut embed = Vec::new();
        for g in self.lo..=self.hi {
            let n = self.stalks[tau].dim(g);
            let mut c = Mat::zeros(0, n);
            for &a in facets {
                c = c.vstack(self.res[&(tau, a)].at(g));
            }
            embed.push(if c.rows() == 0 { Mat::identity(n) } else { c.kernel() });
        }
        let module = self.stalks[tau].submodule(&embed)?;
        Ok(SectionModule { faces: vec![tau], over: Some(tau), module, embed })
    }

    /// Whether `M(τ) → M(∂τ)` is onto in every stored grade.
    pub fn is_flabby_at(&self, tau: FaceId) -> Result<bool> {
        let bd = self.fan.boundary(tau);
        if bd.is_empty() {
            return Ok(true);
        }
        let s = self.sections(&bd, Some(tau))?;
        for g in self.lo..=self.hi {
            let target = s.embed_at(g);
            if target.cols() == 0 {
                continue;
            }
            let mut img = Mat::zeros(0, self.stalks[tau].dim(g));
            for &f in &bd {
                img = img.vstack(&self.res_at(tau, f, g));
            }
            if img.cols() == 0 || img.rank() < target.cols() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn predicates(&self) -> Result<Predicates> {
        let mut lf = true;
        for st in &self.stalks {
            if st.certify_free()?.is_none() {
                lf = false;
                break;
            }
        }
        let mut fl = true;
        for t in 0..self.fan.num_faces() {
            if !self.is_flabby_at(t)? {
                fl = false;
                break;
            }
        }
        Ok(Predicates { is_flabby: fl, is_locally_free: lf, is_pure: fl && lf })
    }

    /// Rewrites a sheaf whose stalks certify as free in terms of generators and polynomial
    /// restriction matrices. Returns the sheaf and, per face, the evaluation isomorphism
    /// from the free model to the stored stalk.
    pub fn to_lf(&self) -> Result<Option<(LfSheaf, Vec<GradedMap>)>> {
        let mut shapes: Vec<FreeShape> = Vec::new();
        let mut lifts = Vec::new();
        let mut evals = Vec::new();
        for st in &self.stalks {
            match st.certify_free()? {
                Some((shape, l)) => {
                    evals.push(st.evaluation(&shape, &l)?);
                    shapes.push(shape);
                    lifts.push(l);
                }
                None => return Ok(None),
            }
        }
        let gens: Vec<Vec<i64>> = shapes.iter().map(|s| s.gens.clone()).collect();
        let mut out = LfSheaf::from_gens(&self.fan, gens.clone());
        for (&(b, a), map) in &self.res {
            let mut cols = Vec::new();
            for (j, &gj) in gens[b].iter().enumerate() {
                let img = map.at(gj).mul_vec(&lifts[b][j]);
                let ev = evals[a].at(gj);
                let x = if ev.cols() == 0 {
                    Vec::new()
                } else {
                    ev.solve(&Mat::from_cols(img.len(), &[img])).expect("evaluation is an isomorphism").col(0)
                };
                cols.push(x);
            }
            let pm = PolyMat::from_columns(self.fan.dim(a), gens[a].clone(), gens[b].clone(), 0, &cols);
            out.res.insert((b, a), pm);
        }
        Ok(Some((out, evals)))
    }

    /// Cokernel of a map of sheaves given degreewise per face.
    pub fn cokernel(&self, image: &[Vec<Mat>]) -> (QuiverSheaf, Vec<GradedMap>) {
        let mut stalks = Vec::new();
        let mut projs = Vec::new();
        for (f, st) in self.stalks.iter().enumerate() {
            let (qm, p) = st.quotient(&image[f]);
            stalks.push(qm);
            projs.push(p);
        }
        let mut res = BTreeMap::new();
        for (&(b, a), map) in &self.res {
            let mats = (self.lo..=self.hi)
                .map(|g| {
                    let k = (g - self.lo) as usize;
                    let lift = section_of(&projs[b].mats[k]);
                    projs[a].mats[k].mul(map.at(g)).mul(&lift)
                })
                .collect();
            res.insert((b, a), GradedMap { lo: self.lo, hi: self.hi, mats });
        }
        (QuiverSheaf { fan: self.fan.clone(), lo: self.lo, hi: self.hi, stalks, res }, projs)
    }

    /// Whether every restriction is compatible with the module structures.
    pub fn is_linear(&self) -> bool {
        for (&(b, a), map) in &self.res {
            for g in self.lo..self.hi - 1 {
                for v in 0..self.fan.dim(b) {
                    let lhs = map.at(g + 2).mul(self.stalks[b].action(v, g));
                    let rhs = self.action_from(b, a, v, g).mul(map.at(g));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Debug digest: Hilbert functions per face and a checksum of each restriction.
    pub fn dump(&self) -> serde_json::Value {
        let stalks: Vec<serde_json::Value> = (0..self.fan.num_faces())
            .map(|f| {
                serde_json::json!({
                    "face": self.fan.label(f),
                    "hilbert": self.stalks[f].hilbert().iter().map(|(g, d)| vec![*g, *d as i64]).collect::<Vec<_>>(),
                })
            })
            .collect();
        let res: Vec<serde_json::Value> = self
            .res
            .iter()
            .map(|(&(b, a), m)| {
                let mut sum = num_rational::BigRational::from_integer(0.into());
                for (k, mat) in m.mats.iter().enumerate() {
                    for (i, x) in mat.entries().iter().enumerate() {
                        sum += x * num_rational::BigRational::from_integer(((k * 31 + i) as i64 + 1).into());
                    }
                }
                serde_json::json!({
                    "from": self.fan.label(b),
                    "to": self.fan.label(a),
                    "checksum": crate::graded_linalg::matrix::q_to_string(&sum),
                })
            })
            .collect();
        serde_json::json!({ "range": [self.lo, self.hi], "stalks": stalks, "restrictions": res })
    }
}

/// A right inverse of a surjective projection matrix.
fn section_of(p: &Mat) -> Mat {
    if p.rows() == 0 {
        return Mat::zeros(p.cols(), 0);
    }
    p.solve(&Mat::identity(p.rows())).expect("projection is onto")
}

impl LfSheaf {
    pub fn sections(&self, faces: &[FaceId], over: Option<FaceId>, lo: i64, hi: i64) -> Result<SectionModule> {
        self.to_quiver(lo, hi).sections(faces, over)
    }

    pub fn relative_sections(&self, tau: FaceId, lo: i64, hi: i64) -> Result<SectionModule> {
        self.to_quiver(lo, hi).relative_sections(tau)
    }

    pub fn predicates(&self, cutoff: i64) -> Result<Predicates> {
        let (lo, hi) = self.working_range(cutoff);
        let q = self.to_quiver(lo, hi);
        let mut fl = true;
        for t in 0..self.fan.num_faces() {
            if !q.is_flabby_at(t)? {
                fl = false;
                break;
            }
        }
        Ok(Predicates { is_flabby: fl, is_locally_free: true, is_pure: fl })
    }
}
