//! The perverse t-structure on label complexes of pure sheaves: truncation, heart normal
//! form, perverse cohomology and the weight filtration.
//!
//! A label `(face, shift j)` in degree `i` is of type A when `j > i`, B when `j = i`, C when
//! `j < i`. Degree-zero maps between equal shifts are scalars on equal faces and vanish
//! otherwise, so the B-to-B part of each differential is a scalar matrix per face.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::graded_linalg::{Mat, Q};
use crate::{Error, Result};

use super::blocks::{Additive, BlockMat, Label};
use super::complex::{minimize, ChainMap, Complex};

/// `E → X → N` with `E ∈ K^{≤0}`, `N ∈ K^{≥1}`, split termwise.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub e: Complex,
    pub n: Complex,
    pub iota: ChainMap,
    pub pi: ChainMap,
}

/// Scalar multiple of the identity coordinates of `a`.
fn scalar(cat: &dyn Additive, a: Label, s: &Q) -> Result<Vec<Q>> {
    Ok(cat.identity(a)?.into_iter().map(|x| x * s).collect())
}

/// Recovers `s` from `s · id`.
fn scalar_of(cat: &dyn Additive, a: Label, v: &[Q]) -> Result<Q> {
    let id = cat.identity(a)?;
    let k = id.iter().position(|x| !x.is_zero()).unwrap();
    Ok(&v[k] / &id[k])
}

/// Per degree: the new basis `E-part ++ N-part` of `X^i` as a scalar matrix over the old labels.
struct Split {
    e: Vec<Label>,
    n: Vec<Label>,
    /// columns: new basis vectors in old coordinates
    t: Mat,
}

fn split_degree(cat: &dyn Additive, x: &Complex, i: i64) -> Result<Split> {
    let labels = x.term(i);
    let d = x.d(cat, i)?;
    let m = labels.len();
    let mut e_cols: Vec<(Label, Vec<Q>)> = Vec::new();
    let mut n_cols: Vec<(Label, Vec<Q>)> = Vec::new();
    let unit = |k: usize| {
        let mut v = vec![Q::zero(); m];
        v[k] = Q::from_integer(1.into());
        v
    };
    for (k, l) in labels.iter().enumerate() {
        if l.shift > i {
            e_cols.push((*l, unit(k)));
        } else if l.shift < i {
            n_cols.push((*l, unit(k)));
        }
    }
    let mut faces: Vec<usize> = labels.iter().filter(|l| l.shift == i).map(|l| l.face).collect();
    faces.sort();
    faces.dedup();
    for f in faces {
        let l = Label::new(f, i);
        let b: Vec<usize> = (0..m).filter(|&k| labels[k] == l).collect();
        let targets: Vec<usize> = (0..d.rows.len()).filter(|&r| d.rows[r] == l).collect();
        let mut s = Mat::zeros(targets.len(), b.len());
        for (a, &r) in targets.iter().enumerate() {
            for (c, &k) in b.iter().enumerate() {
                s[(a, c)] = scalar_of(cat, l, d.get(r, k))?;
            }
        }
        let ker = if targets.is_empty() { Mat::identity(b.len()) } else { s.kernel() };
        let comp = ker.extend_basis(&Mat::identity(b.len()));
        let lift = |v: Vec<Q>| {
            let mut out = vec![Q::zero(); m];
            for (c, &k) in b.iter().enumerate() {
                out[k] = v[c].clone();
            }
            out
        };
        for c in 0..ker.cols() {
            e_cols.push((l, lift(ker.col(c))));
        }
        for c in comp {
            let mut v = vec![Q::zero(); b.len()];
            v[c] = Q::from_integer(1.into());
            n_cols.push((l, lift(v)));
        }
    }
    let cols: Vec<Vec<Q>> = e_cols.iter().chain(&n_cols).map(|(_, v)| v.clone()).collect();
    Ok(Split { e: e_cols.iter().map(|(l, _)| *l).collect(), n: n_cols.iter().map(|(l, _)| *l).collect(), t: Mat::from_cols(m, &cols) })
}

/// Scalar matrix `mat` (rows over `rows`, columns over `cols`) as a block map; entries between
/// different labels must vanish.
fn scalar_blocks(cat: &dyn Additive, rows: &[Label], cols: &[Label], mat: &Mat) -> Result<BlockMat> {
    let mut b = BlockMat::zero(cat, rows, cols)?;
    for r in 0..rows.len() {
        for c in 0..cols.len() {
            let s = &mat[(r, c)];
            if s.is_zero() {
                continue;
            }
            assert_eq!(rows[r], cols[c], "scalar change of basis mixes labels");
            b.set(r, c, scalar(cat, rows[r], s)?);
        }
    }
    Ok(b)
}

pub fn truncate(cat: &dyn Additive, x: &Complex) -> Result<Truncation> {
    let mut splits = BTreeMap::new();
    for &i in x.terms.keys() {
        splits.insert(i, split_degree(cat, x, i)?);
    }
    let mut e = Complex::default();
    let mut n = Complex::default();
    let mut iota = ChainMap::default();
    let mut pi = ChainMap::default();
    let mut tmat = BTreeMap::new();
    let mut tinv = BTreeMap::new();
    for (&i, s) in &splits {
        let labels = x.term(i);
        let new: Vec<Label> = s.e.iter().chain(&s.n).copied().collect();
        let t = scalar_blocks(cat, labels, &new, &s.t)?;
        let ti = scalar_blocks(cat, &new, labels, &s.t.inverse().expect("change of basis"))?;
        let (ne, nn) = (s.e.len(), s.n.len());
        let all: Vec<usize> = (0..labels.len()).collect();
        iota.comps.insert(i, t.select(&all, &(0..ne).collect::<Vec<_>>()));
        pi.comps.insert(i, ti.select(&(ne..ne + nn).collect::<Vec<_>>(), &all));
        e.terms.insert(i, s.e.clone());
        n.terms.insert(i, s.n.clone());
        tmat.insert(i, t);
        tinv.insert(i, ti);
    }
    for &i in x.diffs.keys() {
        let (Some(t), Some(ti)) = (tmat.get(&i), tinv.get(&(i + 1))) else { continue };
        let dd = ti.compose(cat, &x.d(cat, i)?)?.compose(cat, t)?;
        let (ne0, nn0) = (splits[&i].e.len(), splits[&i].n.len());
        let (ne1, nn1) = (splits[&(i + 1)].e.len(), splits[&(i + 1)].n.len());
        let r_e: Vec<usize> = (0..ne1).collect();
        let r_n: Vec<usize> = (ne1..ne1 + nn1).collect();
        let c_e: Vec<usize> = (0..ne0).collect();
        let c_n: Vec<usize> = (ne0..ne0 + nn0).collect();
        if !dd.select(&r_n, &c_e).is_zero() {
            return Err(Error::RangeMismatch("truncation part is not a subcomplex".into()));
        }
        e.diffs.insert(i, dd.select(&r_e, &c_e));
        n.diffs.insert(i, dd.select(&r_n, &c_n));
    }
    Ok(Truncation { e: e.normalize(), n: n.normalize(), iota, pi })
}

/// `τ^{≤k} X` and `τ^{≥k+1} X`.
pub fn truncate_at(cat: &dyn Additive, x: &Complex, k: i64) -> Result<(Complex, Complex)> {
    let t = truncate(cat, &x.shift(k))?;
    Ok((t.e.shift(-k), t.n.shift(-k)))
}

/// Every label satisfies `shift ≥ degree` (`K^{≤0}`) or `shift ≤ degree - 1` (`K^{≥1}`) after minimizing.
pub fn in_le0(cat: &dyn Additive, x: &Complex) -> Result<bool> {
    Ok(minimize(cat, x)?.labels().iter().all(|l| l.shift >= l.degree))
}

pub fn in_ge1(cat: &dyn Additive, x: &Complex) -> Result<bool> {
    Ok(minimize(cat, x)?.labels().iter().all(|l| l.shift < l.degree))
}

/// A heart object with all terms of the form `⊕ ℒ^{σ}{i}` in degree `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeartObject {
    pub complex: Complex,
}

pub fn heart_normal_form(cat: &dyn Additive, x: &Complex) -> Result<HeartObject> {
    let m = minimize(cat, x)?;
    if let Some(l) = m.labels().into_iter().find(|l| l.shift != l.degree) {
        return Err(Error::NotInHeart(format!("label of face {} with shift {} survives in degree {}", l.face, l.shift, l.degree)));
    }
    Ok(HeartObject { complex: m })
}

/// `^pH^k(X)` for every `k` where it is nonzero.
pub fn perverse_cohomology(cat: &dyn Additive, x: &Complex) -> Result<BTreeMap<i64, HeartObject>> {
    let mut out = BTreeMap::new();
    if x.is_zero() {
        return Ok(out);
    }
    let shifts: Vec<i64> = x.labels().iter().map(|l| l.shift - l.degree).collect();
    let (smin, smax) = (*shifts.iter().min().unwrap(), *shifts.iter().max().unwrap());
    for k in -smax - 1..=-smin + 1 {
        let (le, _) = truncate_at(cat, x, k)?;
        let (_, ge) = truncate_at(cat, &le, k - 1)?;
        let h = ge.shift(k);
        if minimize(cat, &h)?.is_zero() {
            continue;
        }
        out.insert(k, heart_normal_form(cat, &h)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightPiece {
    pub weight: i64,
    /// `Gr^W_j` as faces `σ` of the summands `ℒ^σ⟨j⟩`.
    pub faces: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct WeightData {
    /// `W_j` for every `j` where it changes, plus one step below.
    pub filtration: BTreeMap<i64, Complex>,
    pub graded: Vec<WeightPiece>,
}

/// `W_j P = ⊕_{i ≥ -j} P^i`, with `Gr^W_j = P^{-j}`.
pub fn weight_filtration(p: &HeartObject) -> WeightData {
    let x = &p.complex;
    let mut filtration = BTreeMap::new();
    let mut graded = Vec::new();
    let Some((lo, hi)) = x.range() else { return WeightData { filtration, graded } };
    for j in -hi - 1..=-lo {
        let mut w = Complex::default();
        for (&i, t) in &x.terms {
            if i >= -j {
                w.terms.insert(i, t.clone());
            }
        }
        for (&i, d) in &x.diffs {
            if i >= -j {
                w.diffs.insert(i, d.clone());
            }
        }
        filtration.insert(j, w.normalize());
        let mut faces: Vec<usize> = x.term(-j).iter().map(|l| l.face).collect();
        if !faces.is_empty() {
            faces.sort();
            graded.push(WeightPiece { weight: j, faces });
        }
    }
    WeightData { filtration, graded }
}
