//! Graded modules over a polynomial algebra, stored piece by piece on a
//! finite range of grades together with the action of each variable.

use num_traits::Zero;

use super::matrix::{Mat, Q};
use super::poly::{monomials, FreeShape};
use crate::Error;

/// A graded module stored on grades `lo..=hi`. `actions[v][g - lo]` is the
/// action of variable `v` from grade `g` to grade `g + 2` (absent at the top).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreewiseModule {
    pub nvars: usize,
    pub lo: i64,
    pub hi: i64,
    dims: Vec<usize>,
    actions: Vec<Vec<Mat>>,
    pub certificate: Option<FreeShape>,
}

/// A degree-preserving map between modules stored on the same range.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub lo: i64,
    pub hi: i64,
    pub mats: Vec<Mat>,
}

impl GradedMap {
    pub fn at(&self, g: i64) -> &Mat {
        &self.mats[(g - self.lo) as usize]
    }
}

impl DegreewiseModule {
    /// Builds a module from explicit pieces; `act(v, g)` returns the action matrix from `g` to `g + 2`.
    pub fn from_fn(nvars: usize, lo: i64, hi: i64, dim: impl Fn(i64) -> usize, act: impl Fn(usize, i64) -> Mat) -> Self {
        let dims: Vec<usize> = (lo..=hi).map(&dim).collect();
        let actions = (0..nvars).map(|v| (lo..hi - 1).map(|g| act(v, g)).collect::<Vec<_>>()).collect();
        let m = DegreewiseModule { nvars, lo, hi, dims, actions, certificate: None };
        m.check_shapes();
        m
    }

    fn check_shapes(&self) {
        for v in 0..self.nvars {
            for g in self.lo..self.hi - 1 {
                let a = self.action(v, g);
                assert_eq!((a.rows(), a.cols()), (self.dim(g + 2), self.dim(g)), "action shape at grade {g}");
            }
        }
    }

    pub fn zero(nvars: usize, lo: i64, hi: i64) -> Self {
        Self::from_fn(nvars, lo, hi, |_| 0, |_, _| Mat::zeros(0, 0))
    }

    /// The free module of the given shape on `lo..=hi`.
    pub fn free(shape: &FreeShape, lo: i64, hi: i64) -> Self {
        let k = shape.nvars;
        let mut m = Self::from_fn(
            k,
            lo,
            hi,
            |g| shape.dim(g),
            |v, g| {
                let x = super::poly::variable(k, v);
                let pm = super::poly::PolyMat::zero(k, shape.gens.clone(), shape.gens.clone(), 2);
                let mut pm = pm;
                for i in 0..shape.rank() {
                    pm.set(i, i, x.clone());
                }
                pm.at_grade(g)
            },
        );
        m.certificate = Some(shape.clone());
        m
    }

    pub fn dim(&self, g: i64) -> usize {
        if g < self.lo || g > self.hi {
            0
        } else {
            self.dims[(g - self.lo) as usize]
        }
    }

    pub fn action(&self, v: usize, g: i64) -> &Mat {
        &self.actions[v][(g - self.lo) as usize]
    }

    pub fn hilbert(&self) -> Vec<(i64, usize)> {
        (self.lo..=self.hi).map(|g| (g, self.dim(g))).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Action of the monomial with exponent vector `e` on grade `g`.
    pub fn monomial_action(&self, e: &[u32], g: i64) -> Mat {
        let mut m = Mat::identity(self.dim(g));
        let mut cur = g;
        for (v, &k) in e.iter().enumerate() {
            for _ in 0..k {
                m = self.action(v, cur).mul(&m);
                cur += 2;
            }
        }
        m
    }

    /// Whether all variable actions commute on the stored range.
    pub fn actions_commute(&self) -> bool {
        for g in self.lo..self.hi - 3 {
            for a in 0..self.nvars {
                for b in a + 1..self.nvars {
                    let ab = self.action(a, g + 2).mul(self.action(b, g));
                    let ba = self.action(b, g + 2).mul(self.action(a, g));
                    if ab != ba {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Span of `x_v M_{g-2}` over all variables, as columns in grade `g`.
    pub fn decomposables(&self, g: i64) -> Mat {
        let mut m = Mat::zeros(self.dim(g), 0);
        if g - 2 >= self.lo {
            for v in 0..self.nvars {
                m = m.hstack(self.action(v, g - 2));
            }
        }
        m
    }

    /// Minimal generators: grades and lifts of a basis of `M / 𝔪M`, grade by grade.
    pub fn minimal_generators(&self) -> Result<(FreeShape, Vec<Vec<Q>>), Error> {
        let mut gens = Vec::new();
        let mut lifts = Vec::new();
        for g in self.lo..=self.hi {
            let n = self.dim(g);
            if n == 0 {
                continue;
            }
            let dec = self.decomposables(g);
            let chosen = dec.extend_basis(&Mat::identity(n));
            if !chosen.is_empty() && g > self.hi - 2 {
                return Err(Error::CutoffTooSmall { cutoff: self.hi });
            }
            for c in chosen {
                let mut e = vec![Q::zero(); n];
                e[c] = num_traits::One::one();
                gens.push(g);
                lifts.push(e);
            }
        }
        Ok((FreeShape::new(self.nvars, gens), lifts))
    }

    /// Free cover on the minimal generators with its surjection onto the module.
    pub fn free_cover(&self) -> Result<(FreeShape, GradedMap), Error> {
        let (shape, lifts) = self.minimal_generators()?;
        let map = self.evaluation(&shape, &lifts)?;
        Ok((shape, map))
    }

    /// Degreewise matrix of the map from the free module on `shape` sending
    /// generator `i` to `lifts[i]`.
    pub fn evaluation(&self, shape: &FreeShape, lifts: &[Vec<Q>]) -> Result<GradedMap, Error> {
        let mut mats = Vec::new();
        for g in self.lo..=self.hi {
            let mut cols: Vec<Vec<Q>> = Vec::with_capacity(shape.dim(g));
            for (i, &gi) in shape.gens.iter().enumerate() {
                let Some(d) = shape.gen_deg(i, g) else { continue };
                if gi < self.lo {
                    return Err(Error::RangeMismatch(format!("generator grade {gi} below stored range")));
                }
                for e in &monomials(self.nvars, d).monos {
                    cols.push(self.monomial_action(e, gi).mul_vec(&lifts[i]));
                }
            }
            mats.push(Mat::from_cols(self.dim(g), &cols));
        }
        Ok(GradedMap { lo: self.lo, hi: self.hi, mats })
    }

    /// Checks that the module is free: minimal generators whose evaluation map
    /// is bijective on the whole stored range.
    pub fn certify_free(&self) -> Result<Option<(FreeShape, Vec<Vec<Q>>)>, Error> {
        let (shape, lifts) = self.minimal_generators()?;
        for g in self.lo..=self.hi {
            if shape.dim(g) != self.dim(g) {
                return Ok(None);
            }
        }
        let ev = self.evaluation(&shape, &lifts)?;
        for m in &ev.mats {
            if m.rank() != m.rows() {
                return Ok(None);
            }
        }
        Ok(Some((shape, lifts)))
    }

    /// Graded dual: `(M*)_n = (M_{-n})*` with transposed actions.
    pub fn graded_dual(&self) -> DegreewiseModule {
        let lo = -self.hi;
        let hi = -self.lo;
        Self::from_fn(self.nvars, lo, hi, |g| self.dim(-g), |v, g| self.action(v, -g - 2).transpose())
    }

    /// Submodule spanned by the columns of `basis[g]` in each grade, which must be closed
    /// under the actions.
    pub fn submodule(&self, basis: &[Mat]) -> Result<DegreewiseModule, Error> {
        let idx = |g: i64| (g - self.lo) as usize;
        let mut actions = vec![Vec::new(); self.nvars];
        for g in self.lo..self.hi - 1 {
            let src = &basis[idx(g)];
            let dst = &basis[idx(g + 2)];
            for (v, acts) in actions.iter_mut().enumerate() {
                let img = self.action(v, g).mul(src);
                let coords = if img.cols() == 0 {
                    Mat::zeros(dst.cols(), 0)
                } else {
                    dst.solve(&img).ok_or_else(|| Error::RangeMismatch(format!("subspace not closed under the action at grade {g}")))?
                };
                acts.push(coords);
            }
        }
        let dims = basis.iter().map(|b| b.cols()).collect();
        Ok(DegreewiseModule { nvars: self.nvars, lo: self.lo, hi: self.hi, dims, actions, certificate: None })
    }

    /// Quotient by the submodule spanned by `basis[g]`; returns the quotient and the
    /// projection.
    pub fn quotient(&self, basis: &[Mat]) -> (DegreewiseModule, GradedMap) {
        let idx = |g: i64| (g - self.lo) as usize;
        let mut proj = Vec::new();
        let mut compl = Vec::new();
        for g in self.lo..=self.hi {
            let n = self.dim(g);
            let sub = &basis[idx(g)];
            let chosen = sub.extend_basis(&Mat::identity(n));
            let c = Mat::identity(n).select_cols(&chosen);
            // coordinates in [sub | compl], keep the compl part
            let full = sub.image().hstack(&c);
            let inv = full.inverse().expect("complement fails to span");
            let k = full.cols() - c.cols();
            proj.push(inv.block(k, 0, c.cols(), n));
            compl.push(c);
        }
        let mut actions = vec![Vec::new(); self.nvars];
        for g in self.lo..self.hi - 1 {
            for (v, acts) in actions.iter_mut().enumerate() {
                acts.push(proj[idx(g + 2)].mul(self.action(v, g)).mul(&compl[idx(g)]));
            }
        }
        let dims = compl.iter().map(|c| c.cols()).collect();
        let q = DegreewiseModule { nvars: self.nvars, lo: self.lo, hi: self.hi, dims, actions, certificate: None };
        (q, GradedMap { lo: self.lo, hi: self.hi, mats: proj })
    }
}

/// Kernel of a degree-preserving map, with the induced actions.
pub fn kernel_degreewise(src: &DegreewiseModule, dst: &DegreewiseModule, map: &GradedMap) -> Result<(DegreewiseModule, Vec<Mat>), Error> {
    if (src.lo, src.hi) != (dst.lo, dst.hi) || (map.lo, map.hi) != (src.lo, src.hi) {
        return Err(Error::RangeMismatch(format!(
            "source [{}, {}] target [{}, {}] map [{}, {}]",
            src.lo, src.hi, dst.lo, dst.hi, map.lo, map.hi
        )));
    }
    let basis: Vec<Mat> = (src.lo..=src.hi)
        .map(|g| {
            let m = map.at(g);
            if m.rows() == 0 {
                Mat::identity(src.dim(g))
            } else {
                m.kernel()
            }
        })
        .collect();
    for (k, g) in (src.lo..=src.hi).enumerate() {
        let m = map.at(g);
        let rank = if m.rows() == 0 || m.cols() == 0 { 0 } else { m.rank() };
        assert_eq!(basis[k].cols() + rank, src.dim(g), "rank-nullity audit failed at grade {g}");
    }
    let k = src.submodule(&basis)?;
    Ok((k, basis))
}

#[cfg(test)]
mod tests {
    use super::super::matrix::q;
    use super::*;

    #[test]
    fn free_module_is_its_own_cover() {
        let shape = FreeShape::new(1, vec![-1]);
        let m = DegreewiseModule::free(&shape, -1, 8);
        let (s, lifts) = m.minimal_generators().unwrap();
        assert_eq!(s.gens, vec![-1]);
        assert_eq!(lifts, vec![vec![q(1)]]);
        assert!(m.certify_free().unwrap().is_some());
        assert!(m.actions_commute());
    }

    #[test]
    fn zero_module_has_empty_cover() {
        let m = DegreewiseModule::zero(2, 0, 6);
        let (s, _) = m.free_cover().unwrap();
        assert!(s.gens.is_empty());
    }

    #[test]
    fn dual_is_involutive() {
        let shape = FreeShape::new(2, vec![0, 1]);
        let m = DegreewiseModule::free(&shape, -2, 6);
        let mut dd = m.graded_dual().graded_dual();
        dd.certificate = m.certificate.clone();
        assert_eq!(dd, m);
        let d = m.graded_dual();
        assert_eq!(d.dim(0), 1);
        assert_eq!(d.dim(-2), 2);
        assert_eq!(d.dim(-1), 1);
    }

    #[test]
    fn cutoff_too_small_is_reported() {
        let shape = FreeShape::new(1, vec![6]);
        let m = DegreewiseModule::free(&shape, 0, 6);
        assert!(matches!(m.minimal_generators(), Err(Error::CutoffTooSmall { .. })));
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let shape = FreeShape::new(1, vec![0]);
        let a = DegreewiseModule::free(&shape, 0, 6);
        let map = GradedMap { lo: 0, hi: 6, mats: (0..=6).map(|g| Mat::zeros(a.dim(g), a.dim(g))).collect() };
        let (k, _) = kernel_degreewise(&a, &a, &map).unwrap();
        assert_eq!(k.hilbert(), a.hilbert());
    }
}
