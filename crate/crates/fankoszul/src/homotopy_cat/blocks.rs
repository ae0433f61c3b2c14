//! Additive categories generated by labelled objects `(face, shift)`, and block matrices of
//! morphisms between finite sums of them.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::fan_core::{FaceId, Fan};
use crate::graded_linalg::poly::{grade_dim, grade_to_deg, poly_mul, subst_cached};
use crate::graded_linalg::Q;
use crate::pure_ic::PureCtx;
use crate::sheaf_quiver::LfMap;
use crate::Result;

/// An indecomposable object: `ℒ^face{shift}` on the pure side, `J_face{shift}` on the co-module side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Label {
    pub face: FaceId,
    pub shift: i64,
}

impl Label {
    pub fn new(face: FaceId, shift: i64) -> Label {
        Label { face, shift }
    }

    pub fn twist(self, k: i64) -> Label {
        Label { face: self.face, shift: self.shift + k }
    }
}

/// Degree-zero morphisms between labelled objects, in chosen bases.
pub trait Additive: Sync {
    fn fan(&self) -> &Arc<Fan>;
    fn hom_dim(&self, a: Label, b: Label) -> Result<usize>;
    /// `g ∘ f` for `f: a → b` and `g: b → c`.
    fn compose(&self, a: Label, b: Label, c: Label, f: &[Q], g: &[Q]) -> Result<Vec<Q>>;
    fn identity(&self, a: Label) -> Result<Vec<Q>>;
}

impl Additive for PureCtx {
    fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    fn hom_dim(&self, a: Label, b: Label) -> Result<usize> {
        PureCtx::hom_dim(self, a.face, b.face, b.shift - a.shift)
    }

    fn compose(&self, a: Label, b: Label, c: Label, f: &[Q], g: &[Q]) -> Result<Vec<Q>> {
        self.compose_coords(a.face, b.face, c.face, b.shift - a.shift, c.shift - b.shift, f, g)
    }

    fn identity(&self, a: Label) -> Result<Vec<Q>> {
        let h = self.hom(a.face, a.face, 0)?;
        let s = self.ic(a.face)?;
        let id = LfMap::identity(&s);
        Ok(h.coords(&id).expect("identity is a morphism"))
    }
}

/// Standard injective co-modules `J_τ = 𝒜*_{[τ]}`: `Hom(J_τ{a}, J_ξ{b}) = (𝒜_ξ)_{b-a}` when
/// `ξ ≤ τ`, composing by restriction and multiplication.
#[derive(Clone, Debug)]
pub struct CoCat {
    pub fan: Arc<Fan>,
}

impl CoCat {
    pub fn new(fan: &Arc<Fan>) -> CoCat {
        CoCat { fan: fan.clone() }
    }
}

impl Additive for CoCat {
    fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    fn hom_dim(&self, a: Label, b: Label) -> Result<usize> {
        if !self.fan.leq(b.face, a.face) {
            return Ok(0);
        }
        Ok(grade_dim(self.fan.dim(b.face), b.shift - a.shift))
    }

    fn compose(&self, a: Label, b: Label, c: Label, f: &[Q], g: &[Q]) -> Result<Vec<Q>> {
        let n = self.hom_dim(a, c)?;
        if n == 0 || f.iter().all(|x| x.is_zero()) || g.iter().all(|x| x.is_zero()) {
            return Ok(vec![Q::zero(); n]);
        }
        let df = grade_to_deg(b.shift - a.shift).unwrap();
        let dg = grade_to_deg(c.shift - b.shift).unwrap();
        let fr = subst_cached(self.fan.restriction_matrix(b.face, c.face), df).mul_vec(f);
        Ok(poly_mul(self.fan.dim(c.face), df, &fr, dg, g))
    }

    fn identity(&self, _a: Label) -> Result<Vec<Q>> {
        Ok(vec![Q::from_integer(1.into())])
    }
}

/// A morphism `⊕ cols → ⊕ rows`; entry `(r, c)` holds coordinates in `Hom(cols[c], rows[r])`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMat {
    pub rows: Vec<Label>,
    pub cols: Vec<Label>,
    pub entries: Vec<Vec<Q>>,
}

impl BlockMat {
    pub fn zero(cat: &dyn Additive, rows: &[Label], cols: &[Label]) -> Result<BlockMat> {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(vec![Q::zero(); cat.hom_dim(c, r)?]);
            }
        }
        Ok(BlockMat { rows: rows.to_vec(), cols: cols.to_vec(), entries })
    }

    pub fn identity(cat: &dyn Additive, labels: &[Label]) -> Result<BlockMat> {
        let mut m = BlockMat::zero(cat, labels, labels)?;
        for (i, &l) in labels.iter().enumerate() {
            m.set(i, i, cat.identity(l)?);
        }
        Ok(m)
    }

    pub fn get(&self, r: usize, c: usize) -> &[Q] {
        &self.entries[r * self.cols.len() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Vec<Q>) {
        let n = self.cols.len();
        assert_eq!(self.entries[r * n + c].len(), v.len());
        self.entries[r * n + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.iter().all(|x| x.is_zero()))
    }

    /// `self ∘ f`.
    pub fn compose(&self, cat: &dyn Additive, f: &BlockMat) -> Result<BlockMat> {
        assert_eq!(self.cols, f.rows, "inner labels differ");
        let mut out = BlockMat::zero(cat, &self.rows, &f.cols)?;
        for r in 0..self.rows.len() {
            for c in 0..f.cols.len() {
                let mut acc: Option<Vec<Q>> = None;
                for m in 0..self.cols.len() {
                    let (g, h) = (self.get(r, m), f.get(m, c));
                    if g.iter().all(|x| x.is_zero()) || h.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let v = cat.compose(f.cols[c], f.rows[m], self.rows[r], h, g)?;
                    match acc.as_mut() {
                        Some(a) => a.iter_mut().zip(v).for_each(|(x, y)| *x += y),
                        None => acc = Some(v),
                    }
                }
                if let Some(a) = acc {
                    out.set(r, c, a);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &BlockMat) -> BlockMat {
        assert_eq!((&self.rows, &self.cols), (&other.rows, &other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        BlockMat { rows: self.rows.clone(), cols: self.cols.clone(), entries }
    }

    pub fn scale(&self, s: &Q) -> BlockMat {
        let entries = self.entries.iter().map(|a| a.iter().map(|x| x * s).collect()).collect();
        BlockMat { rows: self.rows.clone(), cols: self.cols.clone(), entries }
    }

    pub fn neg(&self) -> BlockMat {
        self.scale(&Q::from_integer((-1).into()))
    }

    pub fn sub(&self, other: &BlockMat) -> BlockMat {
        self.add(&other.neg())
    }

    pub fn flatten(&self) -> Vec<Q> {
        self.entries.iter().flatten().cloned().collect()
    }

    pub fn num_coeffs(&self) -> usize {
        self.entries.iter().map(|e| e.len()).sum()
    }

    /// Same labels as `template`, coefficients read from `v`.
    pub fn from_flat(template: &BlockMat, v: &[Q]) -> BlockMat {
        let mut k = 0;
        let entries = template
            .entries
            .iter()
            .map(|e| {
                let out = v[k..k + e.len()].to_vec();
                k += e.len();
                out
            })
            .collect();
        BlockMat { rows: template.rows.clone(), cols: template.cols.clone(), entries }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> BlockMat {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c).to_vec());
            }
        }
        BlockMat { rows: rows.iter().map(|&r| self.rows[r]).collect(), cols: cols.iter().map(|&c| self.cols[c]).collect(), entries }
    }

    /// Copies `block` into the rows and columns starting at the given offsets.
    pub fn place(&mut self, r0: usize, c0: usize, block: &BlockMat) {
        for r in 0..block.rows.len() {
            for c in 0..block.cols.len() {
                assert_eq!((self.rows[r0 + r], self.cols[c0 + c]), (block.rows[r], block.cols[c]));
                self.set(r0 + r, c0 + c, block.get(r, c).to_vec());
            }
        }
    }

    /// Relabels along `{k}` on both sides; coordinates are unchanged.
    pub fn twist(&self, k: i64) -> BlockMat {
        BlockMat {
            rows: self.rows.iter().map(|l| l.twist(k)).collect(),
            cols: self.cols.iter().map(|l| l.twist(k)).collect(),
            entries: self.entries.clone(),
        }
    }

    /// Block matrix with `a` in the upper left and `b` in the lower right.
    pub fn direct_sum(cat: &dyn Additive, a: &BlockMat, b: &BlockMat) -> Result<BlockMat> {
        let rows: Vec<Label> = a.rows.iter().chain(&b.rows).copied().collect();
        let cols: Vec<Label> = a.cols.iter().chain(&b.cols).copied().collect();
        let mut m = BlockMat::zero(cat, &rows, &cols)?;
        m.place(0, 0, a);
        m.place(a.rows.len(), a.cols.len(), b);
        Ok(m)
    }
}
