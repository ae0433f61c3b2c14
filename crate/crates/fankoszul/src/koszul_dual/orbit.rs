//! Stalks and costalks of co-module complexes along orbits, and the perversity and purity
//! checks built on them.
//!
//! Everything is realized degreewise: `J_ρ{a}` in grade `g` is `((𝒜_ρ)_{-g-a})*` with the dual
//! monomial basis, and a block `f` acts as the transpose of multiplication by `f`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::fan_core::{DualFanMap, FaceId, Fan};
use crate::graded_linalg::poly::{grade_dim, grade_to_deg, mul_matrix, subst_cached, variable};
use crate::graded_linalg::Mat;
use crate::homotopy_cat::{BlockMat, CoCat, Complex, Label};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extraction {
    Stalk,
    Costalk,
}

/// The restriction of a co-module complex to the orbit of `α = ρ^⊥`, as a complex of free
/// co-modules over `𝒜_ρ` (every label sits on `ρ`).
#[derive(Clone, Debug)]
pub struct OrbitStalkComplex {
    pub face: FaceId,
    pub kind: Extraction,
    pub complex: Complex,
}

fn extract(fan: &Arc<Fan>, y: &Complex, rho: FaceId, keep: impl Fn(FaceId) -> bool, kind: Extraction) -> Result<OrbitStalkComplex> {
    let cat = CoCat::new(fan);
    let mut out = Complex::default();
    let mut kept: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (&i, t) in &y.terms {
        let idx: Vec<usize> = (0..t.len()).filter(|&k| keep(t[k].face)).collect();
        out.terms.insert(i, idx.iter().map(|&k| Label::new(rho, t[k].shift)).collect());
        kept.insert(i, idx);
    }
    for (&i, d) in &y.diffs {
        let (Some(cols), Some(rows)) = (kept.get(&i), kept.get(&(i + 1))) else { continue };
        let mut b = BlockMat::zero(&cat, &out.terms[&(i + 1)], &out.terms[&i])?;
        for (r, &rr) in rows.iter().enumerate() {
            for (c, &cc) in cols.iter().enumerate() {
                let f = d.get(rr, cc);
                if f.is_empty() || b.get(r, c).is_empty() {
                    continue;
                }
                let xi = d.rows[rr].face;
                let deg = grade_to_deg(d.rows[rr].shift - d.cols[cc].shift).unwrap();
                let restricted = if xi == rho { f.to_vec() } else { subst_cached(fan.restriction_matrix(xi, rho), deg).mul_vec(f) };
                b.set(r, c, restricted);
            }
        }
        out.diffs.insert(i, b);
    }
    Ok(OrbitStalkComplex { face: rho, kind, complex: out.normalize() })
}

/// `j*_α`: every `J_τ{n}` with `ρ ≤ τ` contributes `(𝒜_ρ)*{n}`.
pub fn stalk_complex(fan: &Arc<Fan>, y: &Complex, rho: FaceId) -> Result<OrbitStalkComplex> {
    extract(fan, y, rho, |t| fan.leq(rho, t), Extraction::Stalk)
}

/// `j^!_α`: only the blocks `J_ρ{n}` survive.
pub fn costalk_complex(fan: &Arc<Fan>, y: &Complex, rho: FaceId) -> Result<OrbitStalkComplex> {
    extract(fan, y, rho, |t| t == rho, Extraction::Costalk)
}

/// Cohomology of one `(degree, grade)` cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellCohomology {
    pub degree: i64,
    pub grade: i64,
    pub dim: usize,
    /// Classes killed by every linear form.
    pub socle: usize,
}

impl CellCohomology {
    pub fn annihilated(&self) -> bool {
        self.socle == self.dim
    }
}

struct Realizer<'a> {
    nvars: usize,
    x: &'a Complex,
}

impl Realizer<'_> {
    fn block_dims(&self, labels: &[Label], g: i64) -> Vec<usize> {
        labels.iter().map(|l| grade_dim(self.nvars, -g - l.shift)).collect()
    }

    fn dim(&self, i: i64, g: i64) -> usize {
        self.block_dims(self.x.term(i), g).iter().sum()
    }

    /// `d^i` in grade `g`.
    fn diff(&self, i: i64, g: i64) -> Mat {
        let (src, dst) = (self.x.term(i), self.x.term(i + 1));
        let (cd, rd) = (self.block_dims(src, g), self.block_dims(dst, g));
        let mut m = Mat::zeros(rd.iter().sum(), cd.iter().sum());
        let Some(d) = self.x.diffs.get(&i) else { return m };
        let mut r0 = 0;
        for (r, &nr) in rd.iter().enumerate() {
            let mut c0 = 0;
            for (c, &nc) in cd.iter().enumerate() {
                let f = d.get(r, c);
                if nr > 0 && nc > 0 && f.iter().any(|v| !num_traits::Zero::is_zero(v)) {
                    let df = grade_to_deg(dst[r].shift - src[c].shift).unwrap();
                    let e = grade_to_deg(-g - dst[r].shift).unwrap();
                    m.add_block(r0, c0, &mul_matrix(self.nvars, df, f, e).transpose());
                }
                c0 += nc;
            }
            r0 += nr;
        }
        m
    }

    /// The action of the `v`-th coordinate from grade `g` to `g + 2` on term `i`.
    fn action(&self, i: i64, v: usize, g: i64) -> Mat {
        let labels = self.x.term(i);
        let (cd, rd) = (self.block_dims(labels, g), self.block_dims(labels, g + 2));
        let mut m = Mat::zeros(rd.iter().sum(), cd.iter().sum());
        let xv = variable(self.nvars, v);
        let (mut r0, mut c0) = (0, 0);
        for (k, l) in labels.iter().enumerate() {
            if rd[k] > 0 && cd[k] > 0 {
                let e = grade_to_deg(-g - 2 - l.shift).unwrap();
                m.add_block(r0, c0, &mul_matrix(self.nvars, 1, &xv, e).transpose());
            }
            r0 += rd[k];
            c0 += cd[k];
        }
        m
    }
}

fn kernel_of(a: &Mat, n: usize) -> Mat {
    if a.rows() == 0 || n == 0 {
        Mat::identity(n)
    } else {
        a.kernel()
    }
}

fn rank_of(a: &Mat) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        0
    } else {
        a.rank()
    }
}

/// Grades `lo..=hi` that can carry cohomology of a complex with these labels, up to `width`
/// below the top.
pub fn grade_window(x: &Complex, width: i64) -> Option<(i64, i64)> {
    let shifts: Vec<i64> = x.labels().iter().map(|l| l.shift).collect();
    let (amin, amax) = (*shifts.iter().min()?, *shifts.iter().max()?);
    Some((-amax - width, -amin))
}

/// Nonzero cohomology cells of a stalk or costalk complex on the grade window.
pub fn realized_cohomology(fan: &Fan, oc: &OrbitStalkComplex, lo: i64, hi: i64) -> Vec<CellCohomology> {
    let nvars = fan.dim(oc.face);
    let r = Realizer { nvars, x: &oc.complex };
    let mut out = Vec::new();
    let Some((dlo, dhi)) = oc.complex.range() else { return out };
    for i in dlo..=dhi {
        for g in lo..=hi {
            let n = r.dim(i, g);
            if n == 0 {
                continue;
            }
            let z = kernel_of(&r.diff(i, g), n);
            let b = rank_of(&r.diff(i - 1, g));
            let dim = z.cols() - b;
            if dim == 0 {
                continue;
            }
            // classes z with x_v z a boundary for every v
            let up = r.diff(i - 1, g + 2);
            let n2 = r.dim(i, g + 2);
            let perp = if up.cols() == 0 { Mat::identity(n2) } else { up.transpose().kernel() };
            let mut stack: Option<Mat> = None;
            if n2 > 0 && perp.cols() > 0 {
                for v in 0..nvars {
                    let m = perp.transpose().mul(&r.action(i, v, g)).mul(&z);
                    stack = Some(match stack {
                        None => m,
                        Some(s) => s.vstack(&m),
                    });
                }
            }
            let killed = z.cols() - stack.as_ref().map_or(0, rank_of);
            out.push(CellCohomology { degree: i, grade: g, dim, socle: killed - b });
        }
    }
    out
}

fn dual_label(dual: Option<&DualFanMap>, rho: FaceId) -> String {
    match dual.and_then(|d| d.perp(rho).ok()) {
        Some(a) => dual.unwrap().target.label(a),
        None => format!("{rho}^⊥"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PerversityRow {
    pub face: String,
    pub dual_face: String,
    /// `c(α) = dim α^⊥`.
    pub c: usize,
    pub stalk: Vec<CellCohomology>,
    pub costalk: Vec<CellCohomology>,
    pub stalk_ok: bool,
    pub costalk_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerversityReport {
    pub window: (i64, i64),
    pub rows: Vec<PerversityRow>,
    pub pass: bool,
}

/// `H^i(j*_α Y) = 0` for `i > -c(α)` and `H^i(j^!_α Y) = 0` for `i < -c(α)` on the grade window.
pub fn check_perversity(fan: &Arc<Fan>, y: &Complex, width: i64) -> Result<PerversityReport> {
    let dual = DualFanMap::new(fan).ok();
    let window = grade_window(y, width).unwrap_or((0, 0));
    let mut rows = Vec::new();
    for rho in 0..fan.num_faces() {
        let c = fan.dim(rho);
        let bound = -(c as i64);
        let stalk = realized_cohomology(fan, &stalk_complex(fan, y, rho)?, window.0, window.1);
        let costalk = realized_cohomology(fan, &costalk_complex(fan, y, rho)?, window.0, window.1);
        let stalk_ok = stalk.iter().all(|h| h.degree <= bound);
        let costalk_ok = costalk.iter().all(|h| h.degree >= bound);
        rows.push(PerversityRow {
            face: fan.label(rho),
            dual_face: dual_label(dual.as_ref(), rho),
            c,
            stalk,
            costalk,
            stalk_ok,
            costalk_ok,
        });
    }
    let pass = rows.iter().all(|r| r.stalk_ok && r.costalk_ok);
    Ok(PerversityReport { window, rows, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct PurityRow {
    pub face: String,
    pub dual_face: String,
    pub kind: Extraction,
    pub degree: i64,
    /// Grade demanded by the weight, `-(degree + w)`.
    pub expected_grade: i64,
    pub cells: Vec<CellCohomology>,
    /// Cohomology is zero at the two lowest grades of the window.
    pub finite: bool,
    pub annihilated: bool,
    pub concentrated: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PurityReport {
    pub weight: i64,
    pub window: (i64, i64),
    pub rows: Vec<PurityRow>,
    pub pass: bool,
}

/// Weight `w`: each `H^i` of every stalk and costalk is a finite sum of trivial blocks
/// `ℚ{i + w}`, which sit in grade `-(i + w)`. This agrees with `Y` of weight `w` iff `Y[-w]`
/// has weight 0.
pub fn check_purity(fan: &Arc<Fan>, y: &Complex, w: i64, width: i64) -> Result<PurityReport> {
    let dual = DualFanMap::new(fan).ok();
    let window = grade_window(y, width).unwrap_or((0, 0));
    let mut rows = Vec::new();
    for rho in 0..fan.num_faces() {
        for oc in [stalk_complex(fan, y, rho)?, costalk_complex(fan, y, rho)?] {
            let cells = realized_cohomology(fan, &oc, window.0, window.1);
            let mut by_degree: BTreeMap<i64, Vec<CellCohomology>> = BTreeMap::new();
            for c in cells {
                by_degree.entry(c.degree).or_default().push(c);
            }
            for (i, cells) in by_degree {
                let expected_grade = -(i + w);
                let finite = cells.iter().all(|c| c.grade > window.0 + 1);
                let annihilated = cells.iter().all(CellCohomology::annihilated);
                let concentrated = cells.iter().all(|c| c.grade == expected_grade);
                rows.push(PurityRow {
                    face: fan.label(rho),
                    dual_face: dual_label(dual.as_ref(), rho),
                    kind: oc.kind,
                    degree: i,
                    expected_grade,
                    pass: finite && annihilated && concentrated,
                    cells,
                    finite,
                    annihilated,
                    concentrated,
                });
            }
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(PurityReport { weight: w, window, rows, pass })
}

/// Whether every label in degree `-d` lives on a face of dimension `d`, as for `κ` of a
/// sheaf placed in degree 0.
pub fn respects_cellular_grading(fan: &Fan, y: &Complex) -> bool {
    y.labels().iter().all(|l| -(fan.dim(l.face) as i64) == l.degree)
}

/// Cohomology of `Y` as a co-module: the stalk complex at every face, on the grade window.
pub fn cohomology_table(fan: &Arc<Fan>, y: &Complex, width: i64) -> Result<BTreeMap<FaceId, Vec<CellCohomology>>> {
    let mut out = BTreeMap::new();
    let Some((lo, hi)) = grade_window(y, width) else { return Ok(out) };
    for rho in 0..fan.num_faces() {
        out.insert(rho, realized_cohomology(fan, &stalk_complex(fan, y, rho)?, lo, hi));
    }
    Ok(out)
}
