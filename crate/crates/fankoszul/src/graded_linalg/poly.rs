//! Homogeneous polynomials in dense monomial coordinates, and matrices of them
//! acting between graded free modules.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::matrix::{Mat, Q};

/// Monomials of one degree in a fixed number of variables, in descending
/// lexicographic order of exponent vectors.
#[derive(Debug)]
pub struct MonoTable {
    pub nvars: usize,
    pub deg: usize,
    pub monos: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonoTable {
    fn build(nvars: usize, deg: usize) -> MonoTable {
        let mut monos = Vec::new();
        let mut cur = vec![0u32; nvars];
        fill(&mut monos, &mut cur, 0, deg as u32);
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonoTable { nvars, deg, monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn index_of(&self, e: &[u32]) -> usize {
        self.index[e]
    }
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, var: usize, left: u32) {
    let n = cur.len();
    if n == 0 {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if var == n - 1 {
        cur[var] = left;
        out.push(cur.clone());
        cur[var] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[var] = e;
        fill(out, cur, var + 1, left - e);
    }
    cur[var] = 0;
}

type TableCache = Mutex<HashMap<(usize, usize), Arc<MonoTable>>>;

pub fn monomials(nvars: usize, deg: usize) -> Arc<MonoTable> {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard.entry((nvars, deg)).or_insert_with(|| Arc::new(MonoTable::build(nvars, deg))).clone()
}

/// Number of monomials of degree `deg` in `nvars` variables.
pub fn poly_dim(nvars: usize, deg: usize) -> usize {
    if nvars == 0 {
        return usize::from(deg == 0);
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..deg as u128 {
        num *= nvars as u128 + i;
        den *= i + 1;
    }
    (num / den) as usize
}

/// Dimension of the polynomial algebra in internal grade `g` (linear forms sit in grade 2).
pub fn grade_dim(nvars: usize, g: i64) -> usize {
    match grade_to_deg(g) {
        Some(d) => poly_dim(nvars, d),
        None => 0,
    }
}

pub fn grade_to_deg(g: i64) -> Option<usize> {
    if g < 0 || g % 2 != 0 {
        None
    } else {
        Some((g / 2) as usize)
    }
}

/// Product of two homogeneous coefficient vectors.
pub fn poly_mul(nvars: usize, da: usize, a: &[Q], db: usize, b: &[Q]) -> Vec<Q> {
    let ta = monomials(nvars, da);
    let tb = monomials(nvars, db);
    let tc = monomials(nvars, da + db);
    let mut out = vec![Q::zero(); tc.len()];
    let mut e = vec![0u32; nvars];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            for v in 0..nvars {
                e[v] = ta.monos[i][v] + tb.monos[j][v];
            }
            out[tc.index_of(&e)] += x * y;
        }
    }
    out
}

/// Matrix of multiplication by a homogeneous polynomial of degree `dp`,
/// from degree `d` to degree `d + dp`.
pub fn mul_matrix(nvars: usize, dp: usize, p: &[Q], d: usize) -> Mat {
    let tp = monomials(nvars, dp);
    let ts = monomials(nvars, d);
    let tt = monomials(nvars, d + dp);
    let mut m = Mat::zeros(tt.len(), ts.len());
    let mut e = vec![0u32; nvars];
    for (i, x) in p.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for j in 0..ts.len() {
            for v in 0..nvars {
                e[v] = tp.monos[i][v] + ts.monos[j][v];
            }
            m[(tt.index_of(&e), j)] += x;
        }
    }
    m
}

/// Coefficient vector of the linear form given by `row`.
pub fn linear_form(row: &[Q]) -> Vec<Q> {
    let t = monomials(row.len(), 1);
    let mut out = vec![Q::zero(); t.len()];
    for (v, x) in row.iter().enumerate() {
        let mut e = vec![0u32; row.len()];
        e[v] = 1;
        out[t.index_of(&e)] = x.clone();
    }
    out
}

/// The coordinate variable `v` as a degree-one coefficient vector.
pub fn variable(nvars: usize, v: usize) -> Vec<Q> {
    let mut row = vec![Q::zero(); nvars];
    row[v] = Q::one();
    linear_form(&row)
}

/// Matrix of the substitution `t = A s` on polynomials of degree `d`, where
/// `a` has one row per old variable `t_i` and one column per new variable `s_j`.
pub fn subst_matrix(a: &Mat, d: usize) -> Mat {
    let k_from = a.rows();
    let k_to = a.cols();
    let src = monomials(k_from, d);
    let dst_len = poly_dim(k_to, d);
    let lin: Vec<Vec<Q>> = (0..k_from).map(|i| linear_form(&a.row(i))).collect();
    let mut memo: HashMap<Vec<u32>, Vec<Q>> = HashMap::new();
    memo.insert(vec![0; k_from], vec![Q::one()]);
    let mut m = Mat::zeros(dst_len, src.len());
    for (j, e) in src.monos.iter().enumerate() {
        let img = subst_mono(e, &lin, k_to, &mut memo);
        for (i, x) in img.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    m
}

fn subst_mono(e: &[u32], lin: &[Vec<Q>], k_to: usize, memo: &mut HashMap<Vec<u32>, Vec<Q>>) -> Vec<Q> {
    if let Some(v) = memo.get(e) {
        return v.clone();
    }
    let v = e.iter().position(|&x| x > 0).unwrap();
    let mut prev = e.to_vec();
    prev[v] -= 1;
    let deg: u32 = prev.iter().sum();
    let base = subst_mono(&prev, lin, k_to, memo);
    let out = poly_mul(k_to, deg as usize, &base, 1, &lin[v]);
    memo.insert(e.to_vec(), out.clone());
    out
}

/// Value of a homogeneous polynomial at a point.
pub fn eval(nvars: usize, d: usize, p: &[Q], x: &[Q]) -> Q {
    let t = monomials(nvars, d);
    let mut acc = Q::zero();
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut term = c.clone();
        for (v, &k) in t.monos[i].iter().enumerate() {
            for _ in 0..k {
                term *= &x[v];
            }
        }
        acc += term;
    }
    acc
}

/// Generator grades of a graded free module over a polynomial algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeShape {
    pub nvars: usize,
    pub gens: Vec<i64>,
}

impl FreeShape {
    pub fn new(nvars: usize, gens: Vec<i64>) -> FreeShape {
        FreeShape { nvars, gens }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Polynomial degree carried by generator `i` in grade `g`.
    pub fn gen_deg(&self, i: usize, g: i64) -> Option<usize> {
        grade_to_deg(g - self.gens[i])
    }

    pub fn dim(&self, g: i64) -> usize {
        (0..self.gens.len()).map(|i| self.block_len(i, g)).sum()
    }

    pub fn block_len(&self, i: usize, g: i64) -> usize {
        self.gen_deg(i, g).map_or(0, |d| poly_dim(self.nvars, d))
    }

    /// Start offset of each generator block in grade `g`.
    pub fn offsets(&self, g: i64) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.gens.len());
        let mut acc = 0;
        for i in 0..self.gens.len() {
            out.push(acc);
            acc += self.block_len(i, g);
        }
        out
    }

    pub fn min_grade(&self) -> Option<i64> {
        self.gens.iter().copied().min()
    }

    pub fn concat(&self, other: &FreeShape) -> FreeShape {
        assert_eq!(self.nvars, other.nvars);
        let mut gens = self.gens.clone();
        gens.extend(&other.gens);
        FreeShape { nvars: self.nvars, gens }
    }

    /// Splits a grade-`g` coordinate vector into per-generator coefficient vectors.
    pub fn split(&self, g: i64, v: &[Q]) -> Vec<Vec<Q>> {
        let off = self.offsets(g);
        (0..self.gens.len()).map(|i| v[off[i]..off[i] + self.block_len(i, g)].to_vec()).collect()
    }

    pub fn join(&self, g: i64, parts: &[Vec<Q>]) -> Vec<Q> {
        let mut out = Vec::with_capacity(self.dim(g));
        for (i, p) in parts.iter().enumerate() {
            if p.is_empty() {
                out.extend(std::iter::repeat_n(Q::zero(), self.block_len(i, g)));
            } else {
                assert_eq!(p.len(), self.block_len(i, g));
                out.extend(p.iter().cloned());
            }
        }
        out
    }
}

/// A matrix of homogeneous polynomials describing a graded map between free
/// modules: column `j` is the image of source generator `j`, entry `(i, j)`
/// has grade `src.gens[j] + shift - dst.gens[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMat {
    pub nvars: usize,
    pub dst: Vec<i64>,
    pub src: Vec<i64>,
    pub shift: i64,
    entries: Vec<Vec<Q>>,
}

impl PolyMat {
    pub fn zero(nvars: usize, dst: Vec<i64>, src: Vec<i64>, shift: i64) -> PolyMat {
        let mut entries = Vec::with_capacity(dst.len() * src.len());
        for &r in &dst {
            for &c in &src {
                entries.push(vec![Q::zero(); grade_dim(nvars, c + shift - r)]);
            }
        }
        PolyMat { nvars, dst, src, shift, entries }
    }

    pub fn identity(nvars: usize, gens: Vec<i64>) -> PolyMat {
        let mut m = PolyMat::zero(nvars, gens.clone(), gens.clone(), 0);
        for i in 0..gens.len() {
            m.entries[i * gens.len() + i] = vec![Q::one()];
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.dst.len()
    }

    pub fn cols(&self) -> usize {
        self.src.len()
    }

    pub fn entry_grade(&self, i: usize, j: usize) -> i64 {
        self.src[j] + self.shift - self.dst[i]
    }

    pub fn entry_deg(&self, i: usize, j: usize) -> Option<usize> {
        grade_to_deg(self.entry_grade(i, j))
    }

    pub fn get(&self, i: usize, j: usize) -> &[Q] {
        &self.entries[i * self.src.len() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Vec<Q>) {
        let n = grade_dim(self.nvars, self.entry_grade(i, j));
        assert_eq!(c.len(), n, "entry length does not match its grade");
        let k = self.src.len();
        self.entries[i * k + j] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.iter().all(|x| x.is_zero()))
    }

    /// Composition `self ∘ rhs`.
    pub fn compose(&self, rhs: &PolyMat) -> PolyMat {
        assert_eq!(self.nvars, rhs.nvars);
        assert_eq!(self.src, rhs.dst, "inner generator grades differ");
        let mut out = PolyMat::zero(self.nvars, self.dst.clone(), rhs.src.clone(), self.shift + rhs.shift);
        for i in 0..self.rows() {
            for j in 0..rhs.cols() {
                let Some(dij) = out.entry_deg(i, j) else { continue };
                let mut acc = vec![Q::zero(); poly_dim(self.nvars, dij)];
                for k in 0..self.cols() {
                    let (Some(da), Some(db)) = (self.entry_deg(i, k), rhs.entry_deg(k, j)) else {
                        continue;
                    };
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if a.iter().all(|x| x.is_zero()) || b.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    for (t, x) in acc.iter_mut().zip(poly_mul(self.nvars, da, a, db, b)) {
                        *t += x;
                    }
                }
                out.entries[i * rhs.cols() + j] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMat) -> PolyMat {
        assert_eq!((&self.dst, &self.src, self.shift), (&other.dst, &other.src, other.shift));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        PolyMat { entries, ..self.clone() }
    }

    pub fn scale(&self, s: &Q) -> PolyMat {
        let entries = self.entries.iter().map(|a| a.iter().map(|x| x * s).collect()).collect();
        PolyMat { entries, ..self.clone() }
    }

    /// Applies the coordinate substitution `t = A s` to every entry.
    pub fn substitute(&self, a: &Mat) -> PolyMat {
        assert_eq!(a.rows(), self.nvars);
        let mut out = PolyMat::zero(a.cols(), self.dst.clone(), self.src.clone(), self.shift);
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let Some(d) = self.entry_deg(i, j) else { continue };
                let e = self.get(i, j);
                if e.iter().all(|x| x.is_zero()) {
                    continue;
                }
                out.entries[i * self.cols() + j] = subst_cached(a, d).mul_vec(e);
            }
        }
        out
    }

    /// Degreewise matrix from source grade `g` to target grade `g + shift`.
    pub fn at_grade(&self, g: i64) -> Mat {
        let src = FreeShape::new(self.nvars, self.src.clone());
        let dst = FreeShape::new(self.nvars, self.dst.clone());
        let soff = src.offsets(g);
        let doff = dst.offsets(g + self.shift);
        let mut m = Mat::zeros(dst.dim(g + self.shift), src.dim(g));
        for j in 0..self.cols() {
            let Some(dj) = src.gen_deg(j, g) else { continue };
            for i in 0..self.rows() {
                let Some(de) = self.entry_deg(i, j) else { continue };
                let e = self.get(i, j);
                if e.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let block = mul_matrix(self.nvars, de, e, dj);
                m.add_block(doff[i], soff[j], &block);
            }
        }
        m
    }

    /// Scalar part: entries between generators of equal grade (only meaningful for shift 0).
    pub fn constant_part(&self) -> Mat {
        let mut m = Mat::zeros(self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if self.entry_grade(i, j) == 0 {
                    m[(i, j)] = self.get(i, j)[0].clone();
                }
            }
        }
        m
    }

    /// Builds a map from the images of the source generators given as
    /// grade-`(src[j] + shift)` coordinate vectors in the target shape.
    pub fn from_columns(nvars: usize, dst: Vec<i64>, src: Vec<i64>, shift: i64, cols: &[Vec<Q>]) -> PolyMat {
        let shape = FreeShape::new(nvars, dst.clone());
        let mut m = PolyMat::zero(nvars, dst, src.clone(), shift);
        for (j, c) in cols.iter().enumerate() {
            let parts = shape.split(src[j] + shift, c);
            for (i, p) in parts.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    /// Image of source generator `j` as a coordinate vector in the target shape.
    pub fn column(&self, j: usize) -> Vec<Q> {
        let shape = FreeShape::new(self.nvars, self.dst.clone());
        let parts: Vec<Vec<Q>> = (0..self.rows()).map(|i| self.get(i, j).to_vec()).collect();
        shape.join(self.src[j] + self.shift, &parts)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &PolyMat) -> PolyMat {
        assert_eq!((self.nvars, self.shift), (other.nvars, other.shift));
        let mut dst = self.dst.clone();
        dst.extend(&other.dst);
        let mut src = self.src.clone();
        src.extend(&other.src);
        let mut m = PolyMat::zero(self.nvars, dst, src, self.shift);
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                m.set(i, j, self.get(i, j).to_vec());
            }
        }
        for i in 0..other.rows() {
            for j in 0..other.cols() {
                m.set(self.rows() + i, self.cols() + j, other.get(i, j).to_vec());
            }
        }
        m
    }

    /// Sub-block with the given target rows and source columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMat {
        let dst = rows.iter().map(|&i| self.dst[i]).collect();
        let src = cols.iter().map(|&j| self.src[j]).collect();
        let mut m = PolyMat::zero(self.nvars, dst, src, self.shift);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).to_vec());
            }
        }
        m
    }

    /// Writes `block` into the rows and columns given.
    pub fn place(&mut self, rows: &[usize], cols: &[usize], block: &PolyMat) {
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                self.set(i, j, block.get(a, b).to_vec());
            }
        }
    }

    /// All coefficients, flattened, in a fixed order.
    pub fn coefficients(&self) -> Vec<Q> {
        self.entries.iter().flatten().cloned().collect()
    }

    pub fn num_coefficients(&self) -> usize {
        self.entries.iter().map(|e| e.len()).sum()
    }

    pub fn from_coefficients(template: &PolyMat, coeffs: &[Q]) -> PolyMat {
        let mut m = template.clone();
        let mut k = 0;
        for e in m.entries.iter_mut() {
            for x in e.iter_mut() {
                *x = coeffs[k].clone();
                k += 1;
            }
        }
        assert_eq!(k, coeffs.len());
        m
    }

    /// Inverse of an isomorphism of free modules of shift 0, computed degreewise.
    pub fn inverse(&self) -> Option<PolyMat> {
        if self.shift != 0 || self.rows() != self.cols() {
            return None;
        }
        let mut src_sorted = self.src.clone();
        src_sorted.sort();
        let mut dst_sorted = self.dst.clone();
        dst_sorted.sort();
        if src_sorted != dst_sorted || self.constant_part().inverse().is_none() {
            return None;
        }
        let dst_shape = FreeShape::new(self.nvars, self.dst.clone());
        let mut cols = Vec::with_capacity(self.rows());
        for i in 0..self.rows() {
            let g = self.dst[i];
            let a = self.at_grade(g);
            let mut e = vec![Q::zero(); dst_shape.dim(g)];
            e[dst_shape.offsets(g)[i]] = Q::one();
            let x = a.solve(&Mat::from_cols(e.len(), &[e]))?;
            cols.push(x.col(0));
        }
        let inv = PolyMat::from_columns(self.nvars, self.src.clone(), self.dst.clone(), 0, &cols);
        Some(inv)
    }
}

type SubstKey = (Mat, usize);

/// Memoized substitution matrix for `t = A s` in degree `d`.
pub fn subst_cached(a: &Mat, d: usize) -> Arc<Mat> {
    static CACHE: OnceLock<Mutex<HashMap<SubstKey, Arc<Mat>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().unwrap().get(&(a.clone(), d)) {
        return m.clone();
    }
    let m = Arc::new(subst_matrix(a, d));
    cache.lock().unwrap().insert((a.clone(), d), m.clone());
    m
}

#[cfg(test)]
mod tests {
    use super::super::matrix::q;
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(poly_dim(3, 2), 6);
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(poly_dim(0, 0), 1);
        assert_eq!(poly_dim(0, 1), 0);
        assert_eq!(monomials(2, 2).monos, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn substitution_matches_evaluation() {
        // t1 = s1 + s2, t2 = 2 s2
        let a = Mat::from_i64(&[vec![1, 1], vec![0, 2]]);
        let p = vec![q(1), q(3), q(-1)]; // t1^2 + 3 t1 t2 - t2^2
        let sp = subst_matrix(&a, 2).mul_vec(&p);
        let s = vec![q(2), q(-5)];
        let t = a.mul_vec(&s);
        assert_eq!(eval(2, 2, &sp, &s), eval(2, 2, &p, &t));
    }

    #[test]
    fn polymat_inverse() {
        // generators in grades 0 and 2 over one variable: [[1, 0], [x, 1]]
        let mut m = PolyMat::identity(1, vec![0, 2]);
        m.set(1, 0, vec![]);
        m.set(0, 1, vec![q(5)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.compose(&inv), PolyMat::identity(1, vec![0, 2]));
    }
}
