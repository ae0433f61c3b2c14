//! Bounded complexes over an [`Additive`] category, chain maps, Hom complexes and
//! Gaussian elimination.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::graded_linalg::{Mat, Q};
use crate::{Error, Result};

use super::blocks::{Additive, BlockMat, Label};

/// `terms[i]` lists the summands of `X^i`; `diffs[i]: X^i → X^{i+1}`; a missing differential is zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Complex {
    pub terms: BTreeMap<i64, Vec<Label>>,
    pub diffs: BTreeMap<i64, BlockMat>,
}

/// A degree-zero chain map; a missing component is zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChainMap {
    pub comps: BTreeMap<i64, BlockMat>,
}

/// `(degree, label)` pairs, the bookkeeping used in reports.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TermLabel {
    pub degree: i64,
    pub face: usize,
    pub shift: i64,
}

impl Complex {
    pub fn single(degree: i64, labels: Vec<Label>) -> Complex {
        let mut c = Complex::default();
        if !labels.is_empty() {
            c.terms.insert(degree, labels);
        }
        c
    }

    pub fn term(&self, i: i64) -> &[Label] {
        self.terms.get(&i).map_or(&[], |v| v.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|t| t.is_empty())
    }

    /// Lowest and highest degree with a nonzero term.
    pub fn range(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.iter().filter(|(_, t)| !t.is_empty()).map(|(&i, _)| i);
        let lo = it.next()?;
        Some((lo, it.next_back().unwrap_or(lo)))
    }

    pub fn d(&self, cat: &dyn Additive, i: i64) -> Result<BlockMat> {
        match self.diffs.get(&i) {
            Some(m) => Ok(m.clone()),
            None => BlockMat::zero(cat, self.term(i + 1), self.term(i)),
        }
    }

    pub fn set_d(&mut self, i: i64, m: BlockMat) {
        assert_eq!((m.cols.as_slice(), m.rows.as_slice()), (self.term(i), self.term(i + 1)));
        self.diffs.insert(i, m);
    }

    /// Drops empty terms and differentials between them.
    pub fn normalize(mut self) -> Complex {
        self.terms.retain(|_, t| !t.is_empty());
        let terms = self.terms.clone();
        self.diffs.retain(|i, m| terms.contains_key(i) && terms.contains_key(&(i + 1)) && !m.is_zero());
        self
    }

    pub fn labels(&self) -> Vec<TermLabel> {
        let mut out: Vec<TermLabel> =
            self.terms.iter().flat_map(|(&i, t)| t.iter().map(move |l| TermLabel { degree: i, face: l.face, shift: l.shift })).collect();
        out.sort();
        out
    }

    pub fn is_complex(&self, cat: &dyn Additive) -> Result<bool> {
        for (&i, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(i + 1)) {
                if !next.compose(cat, d)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `X[n]`: `X[n]^i = X^{i+n}`, differential times `(-1)^n`.
    pub fn shift(&self, n: i64) -> Complex {
        let terms = self.terms.iter().map(|(&i, t)| (i - n, t.clone())).collect();
        let diffs = self.diffs.iter().map(|(&i, d)| (i - n, if n.rem_euclid(2) == 1 { d.neg() } else { d.clone() })).collect();
        Complex { terms, diffs }
    }

    /// `X{k}`, applied termwise.
    pub fn twist(&self, k: i64) -> Complex {
        let terms = self.terms.iter().map(|(&i, t)| (i, t.iter().map(|l| l.twist(k)).collect())).collect();
        let diffs = self.diffs.iter().map(|(&i, d)| (i, d.twist(k))).collect();
        Complex { terms, diffs }
    }

    /// `X⟨n⟩ = X[n]{-n}`.
    pub fn tate(&self, n: i64) -> Complex {
        self.shift(n).twist(-n)
    }

    pub fn direct_sum(&self, other: &Complex, cat: &dyn Additive) -> Result<Complex> {
        let mut out = Complex::default();
        let degrees: std::collections::BTreeSet<i64> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        for &i in &degrees {
            let t: Vec<Label> = self.term(i).iter().chain(other.term(i)).copied().collect();
            out.terms.insert(i, t);
        }
        for &i in &degrees {
            if degrees.contains(&(i + 1)) {
                let d = BlockMat::direct_sum(cat, &self.d(cat, i)?, &other.d(cat, i)?)?;
                out.diffs.insert(i, d);
            }
        }
        Ok(out.normalize())
    }

    /// Mapping cone: `X^{i+1} ⊕ Y^i` with `d = [[-d_X, 0], [f, d_Y]]`.
    pub fn cone(cat: &dyn Additive, f: &ChainMap, x: &Complex, y: &Complex) -> Result<Complex> {
        let mut out = Complex::default();
        let degrees: std::collections::BTreeSet<i64> = x.terms.keys().map(|i| i - 1).chain(y.terms.keys().copied()).collect();
        for &i in &degrees {
            let t: Vec<Label> = x.term(i + 1).iter().chain(y.term(i)).copied().collect();
            out.terms.insert(i, t);
        }
        for &i in &degrees {
            let (src, dst) = (out.term(i).to_vec(), out.term(i + 1).to_vec());
            let mut d = BlockMat::zero(cat, &dst, &src)?;
            let nx1 = x.term(i + 2).len();
            d.place(0, 0, &x.d(cat, i + 1)?.neg());
            d.place(nx1, x.term(i + 1).len(), &y.d(cat, i)?);
            d.place(nx1, 0, &f.comp(cat, x, y, i + 1)?);
            out.diffs.insert(i, d);
        }
        Ok(out.normalize())
    }
}

impl ChainMap {
    pub fn comp(&self, cat: &dyn Additive, x: &Complex, y: &Complex, i: i64) -> Result<BlockMat> {
        match self.comps.get(&i) {
            Some(m) => Ok(m.clone()),
            None => BlockMat::zero(cat, y.term(i), x.term(i)),
        }
    }

    pub fn identity(cat: &dyn Additive, x: &Complex) -> Result<ChainMap> {
        let mut comps = BTreeMap::new();
        for (&i, t) in &x.terms {
            comps.insert(i, BlockMat::identity(cat, t)?);
        }
        Ok(ChainMap { comps })
    }

    pub fn is_chain_map(&self, cat: &dyn Additive, x: &Complex, y: &Complex) -> Result<bool> {
        let degrees: std::collections::BTreeSet<i64> = x.terms.keys().chain(y.terms.keys()).copied().collect();
        for &i in &degrees {
            let lhs = y.d(cat, i)?.compose(cat, &self.comp(cat, x, y, i)?)?;
            let rhs = self.comp(cat, x, y, i + 1)?.compose(cat, &x.d(cat, i)?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self ∘ f` for `f: x → y` and `self: y → z`.
    pub fn compose(&self, cat: &dyn Additive, f: &ChainMap, x: &Complex, y: &Complex, z: &Complex) -> Result<ChainMap> {
        let mut comps = BTreeMap::new();
        for &i in x.terms.keys() {
            if z.term(i).is_empty() {
                continue;
            }
            comps.insert(i, self.comp(cat, y, z, i)?.compose(cat, &f.comp(cat, x, y, i)?)?);
        }
        Ok(ChainMap { comps })
    }

    pub fn add(&self, other: &ChainMap, cat: &dyn Additive, x: &Complex, y: &Complex) -> Result<ChainMap> {
        let mut comps = BTreeMap::new();
        for &i in x.terms.keys() {
            comps.insert(i, self.comp(cat, x, y, i)?.add(&other.comp(cat, x, y, i)?));
        }
        Ok(ChainMap { comps })
    }

    /// The same coordinates, read as a map `X{k} → Y{k}`.
    pub fn twist(&self, k: i64) -> ChainMap {
        ChainMap { comps: self.comps.iter().map(|(&i, m)| (i, m.twist(k))).collect() }
    }
}

/// The graded pieces `Hom^p(X, Y) = ∏_i Hom(X^i, Y^{i+p})`, as flat coordinate vectors.
struct HomSlots {
    slots: Vec<(i64, BlockMat)>,
    offsets: Vec<usize>,
    total: usize,
}

impl HomSlots {
    fn new(cat: &dyn Additive, x: &Complex, y: &Complex, p: i64) -> Result<HomSlots> {
        let mut slots = Vec::new();
        for (&i, t) in &x.terms {
            let dst = y.term(i + p);
            if t.is_empty() || dst.is_empty() {
                continue;
            }
            slots.push((i, BlockMat::zero(cat, dst, t)?));
        }
        let mut offsets = Vec::with_capacity(slots.len());
        let mut total = 0;
        for (_, m) in &slots {
            offsets.push(total);
            total += m.num_coeffs();
        }
        Ok(HomSlots { slots, offsets, total })
    }

    fn position(&self, i: i64) -> Option<usize> {
        self.slots.iter().position(|(j, _)| *j == i)
    }

    fn unpack(&self, v: &[Q]) -> BTreeMap<i64, BlockMat> {
        self.slots.iter().zip(&self.offsets).map(|((i, t), &o)| (*i, BlockMat::from_flat(t, &v[o..o + t.num_coeffs()]))).collect()
    }

    fn pack(&self, m: &BTreeMap<i64, BlockMat>) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.total];
        for ((i, _), &o) in self.slots.iter().zip(&self.offsets) {
            if let Some(b) = m.get(i) {
                for (k, x) in b.flatten().into_iter().enumerate() {
                    out[o + k] = x;
                }
            }
        }
        out
    }
}

/// `D(f) = d_Y f - (-1)^p f d_X` as a matrix `Hom^p → Hom^{p+1}`.
fn hom_differential(cat: &dyn Additive, x: &Complex, y: &Complex, p: i64, src: &HomSlots, dst: &HomSlots) -> Result<Mat> {
    let mut cols = Vec::with_capacity(src.total);
    let sign = if p.rem_euclid(2) == 0 { -Q::one() } else { Q::one() };
    for ((i, t), _) in src.slots.iter().zip(&src.offsets) {
        let dy = y.d(cat, i + p)?;
        let dx = x.d(cat, i - 1)?;
        for k in 0..t.num_coeffs() {
            let mut e = vec![Q::zero(); t.num_coeffs()];
            e[k] = Q::one();
            let f = BlockMat::from_flat(t, &e);
            let mut out = BTreeMap::new();
            if dst.position(*i).is_some() {
                out.insert(*i, dy.compose(cat, &f)?);
            }
            if dst.position(i - 1).is_some() {
                out.insert(i - 1, f.compose(cat, &dx)?.scale(&sign));
            }
            cols.push(dst.pack(&out));
        }
    }
    Ok(Mat::from_cols(dst.total, &cols))
}

/// Degree-zero morphisms `X → Y` in the homotopy category.
#[derive(Clone, Debug)]
pub struct HomotopyHom {
    pub dim: usize,
    /// Chain-map representatives of a basis.
    pub basis: Vec<ChainMap>,
    reps: Mat,
    boundaries: Mat,
    slots_len: usize,
    slot_degrees: Vec<i64>,
    templates: Vec<BlockMat>,
    offsets: Vec<usize>,
}

impl HomotopyHom {
    fn pack(&self, f: &ChainMap) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.slots_len];
        for ((i, t), &o) in self.slot_degrees.iter().zip(&self.templates).zip(&self.offsets) {
            if let Some(b) = f.comps.get(i) {
                assert_eq!((&b.rows, &b.cols), (&t.rows, &t.cols));
                for (k, x) in b.flatten().into_iter().enumerate() {
                    out[o + k] = x;
                }
            }
        }
        out
    }

    /// Coordinates of the homotopy class of a chain map.
    pub fn class_coords(&self, f: &ChainMap) -> Option<Vec<Q>> {
        if self.slots_len == 0 {
            return Some(Vec::new());
        }
        let v = self.pack(f);
        let sys = self.reps.hstack(&self.boundaries);
        let x = sys.solve(&Mat::from_cols(v.len(), &[v]))?;
        Some(x.col(0)[..self.dim].to_vec())
    }

    /// Whether `f` is null-homotopic.
    pub fn is_null(&self, f: &ChainMap) -> bool {
        self.class_coords(f).is_some_and(|c| c.iter().all(|x| x.is_zero()))
    }
}

pub fn homotopy_hom(cat: &dyn Additive, x: &Complex, y: &Complex) -> Result<HomotopyHom> {
    let h0 = HomSlots::new(cat, x, y, 0)?;
    let hm = HomSlots::new(cat, x, y, -1)?;
    let h1 = HomSlots::new(cat, x, y, 1)?;
    let d0 = hom_differential(cat, x, y, 0, &h0, &h1)?;
    let dm = hom_differential(cat, x, y, -1, &hm, &h0)?;
    let cycles = if h0.total == 0 {
        Mat::zeros(0, 0)
    } else if h1.total == 0 {
        Mat::identity(h0.total)
    } else {
        d0.kernel()
    };
    let boundaries = if hm.total == 0 || h0.total == 0 { Mat::zeros(h0.total, 0) } else { dm.image() };
    let pick = if cycles.cols() == 0 { Vec::new() } else { boundaries.extend_basis(&cycles) };
    let reps = if pick.is_empty() { Mat::zeros(h0.total, 0) } else { cycles.select_cols(&pick) };
    let basis = (0..reps.cols()).map(|c| ChainMap { comps: h0.unpack(&reps.col(c)) }).collect();
    Ok(HomotopyHom {
        dim: reps.cols(),
        basis,
        reps,
        boundaries,
        slots_len: h0.total,
        slot_degrees: h0.slots.iter().map(|(i, _)| *i).collect(),
        templates: h0.slots.iter().map(|(_, t)| t.clone()).collect(),
        offsets: h0.offsets.clone(),
    })
}

/// Dimension of the null-homotopies `Hom^{-1}(X, Y)` modulo those that vanish as homotopies.
pub fn homotopy_ambiguity(cat: &dyn Additive, x: &Complex, y: &Complex) -> Result<usize> {
    let hm = HomSlots::new(cat, x, y, -1)?;
    let h0 = HomSlots::new(cat, x, y, 0)?;
    if hm.total == 0 || h0.total == 0 {
        return Ok(0);
    }
    Ok(hom_differential(cat, x, y, -1, &hm, &h0)?.rank())
}

/// Contracts every isomorphism between equal labels in a differential, leaving a homotopy
/// equivalent complex with none left.
pub fn minimize(cat: &dyn Additive, x: &Complex) -> Result<Complex> {
    let mut c = x.clone();
    'outer: loop {
        let degrees: Vec<i64> = c.diffs.keys().copied().collect();
        for i in degrees {
            let d = c.d(cat, i)?;
            for r in 0..d.rows.len() {
                for col in 0..d.cols.len() {
                    if d.rows[r] != d.cols[col] {
                        continue;
                    }
                    let e = d.get(r, col);
                    let id = cat.identity(d.cols[col])?;
                    if e.iter().all(|v| v.is_zero()) {
                        continue;
                    }
                    let k = id.iter().position(|v| !v.is_zero()).expect("identity is nonzero");
                    let a = &e[k] / &id[k];
                    if id.iter().map(|v| v * &a).collect::<Vec<_>>() != e {
                        return Err(Error::RangeMismatch("endomorphism of an indecomposable is not scalar".into()));
                    }
                    c = eliminate(cat, &c, i, r, col, &a)?;
                    continue 'outer;
                }
            }
        }
        return Ok(c.normalize());
    }
}

fn eliminate(cat: &dyn Additive, x: &Complex, i: i64, r: usize, c: usize, a: &Q) -> Result<Complex> {
    let d = x.d(cat, i)?;
    let rest_c: Vec<usize> = (0..d.cols.len()).filter(|&j| j != c).collect();
    let rest_r: Vec<usize> = (0..d.rows.len()).filter(|&j| j != r).collect();
    let eps = d.select(&[r], &rest_c).scale(&a.recip());
    let gamma = d.select(&rest_r, &[c]);
    let delta = d.select(&rest_r, &rest_c);
    let new_d = delta.sub(&gamma.compose(cat, &eps)?);
    let mut out = x.clone();
    let ti: Vec<Label> = rest_c.iter().map(|&j| d.cols[j]).collect();
    let ti1: Vec<Label> = rest_r.iter().map(|&j| d.rows[j]).collect();
    if let Some(prev) = x.diffs.get(&(i - 1)) {
        let all: Vec<usize> = (0..prev.cols.len()).collect();
        out.diffs.insert(i - 1, prev.select(&rest_c, &all));
    }
    if let Some(next) = x.diffs.get(&(i + 1)) {
        let all: Vec<usize> = (0..next.rows.len()).collect();
        out.diffs.insert(i + 1, next.select(&all, &rest_r));
    }
    out.terms.insert(i, ti);
    out.terms.insert(i + 1, ti1);
    out.diffs.insert(i, new_d);
    Ok(out)
}
