//! Indecomposable pure sheaves `ℒ^σ`, decomposition of pure sheaves, and Hom spaces between them.

mod brute;
mod decompose;
mod hom;
mod ic;

pub use brute::boundary_generators_brute;
pub use decompose::{decompose, PureDecomposition};
pub use hom::{hom_lf, HomSpace};
pub use ic::{ic_sheaf, ic_sheaf_at, IcSheaf};

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::fan_core::{FaceId, Fan};
use crate::graded_linalg::{default_cutoff, Q};
use crate::sheaf_quiver::{LfMap, LfSheaf};
use crate::{Error, Result};

type Triple = (FaceId, FaceId, i64);
type Product = (FaceId, FaceId, FaceId, i64, i64);

/// Shared cache of `ℒ^σ`, Hom spaces `Hom(ℒ^σ, ℒ^τ{k})` and their composition constants.
pub struct PureCtx {
    pub fan: Arc<Fan>,
    pub cutoff: i64,
    ic: Mutex<HashMap<FaceId, Arc<LfSheaf>>>,
    hom: Mutex<HashMap<Triple, Arc<HomSpace>>>,
    prod: Mutex<HashMap<Product, Arc<Vec<Vec<Vec<Q>>>>>>,
}

impl std::fmt::Debug for PureCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PureCtx").field("cutoff", &self.cutoff).finish()
    }
}

impl PureCtx {
    pub fn new(fan: &Arc<Fan>) -> PureCtx {
        PureCtx::with_cutoff(fan, default_cutoff(fan.ambient_rank, 0))
    }

    pub fn with_cutoff(fan: &Arc<Fan>, cutoff: i64) -> PureCtx {
        PureCtx { fan: fan.clone(), cutoff, ic: Mutex::default(), hom: Mutex::default(), prod: Mutex::default() }
    }

    pub fn ic(&self, sigma: FaceId) -> Result<Arc<LfSheaf>> {
        if let Some(s) = self.ic.lock().unwrap().get(&sigma) {
            return Ok(s.clone());
        }
        let s = Arc::new(ic_sheaf(&self.fan, sigma, self.cutoff)?.sheaf);
        self.ic.lock().unwrap().insert(sigma, s.clone());
        Ok(s)
    }

    /// `Hom(ℒ^σ, ℒ^τ{k})`. Also equals `Hom(ℒ^σ{n}, ℒ^τ{n+k})` for every `n`.
    pub fn hom(&self, sigma: FaceId, tau: FaceId, k: i64) -> Result<Arc<HomSpace>> {
        if let Some(h) = self.hom.lock().unwrap().get(&(sigma, tau, k)) {
            return Ok(h.clone());
        }
        let (a, b) = (self.ic(sigma)?, self.ic(tau)?);
        let h = Arc::new(hom_lf(&a, &b, k));
        self.hom.lock().unwrap().insert((sigma, tau, k), h.clone());
        Ok(h)
    }

    pub fn hom_dim(&self, sigma: FaceId, tau: FaceId, k: i64) -> Result<usize> {
        Ok(self.hom(sigma, tau, k)?.dim())
    }

    /// `c[i][j]` = coordinates of `g_j ∘ f_i` where `f_i` runs over `Hom(ℒ^σ, ℒ^τ{k1})`
    /// and `g_j` over `Hom(ℒ^τ, ℒ^ρ{k2})`.
    pub fn product(&self, sigma: FaceId, tau: FaceId, rho: FaceId, k1: i64, k2: i64) -> Result<Arc<Vec<Vec<Vec<Q>>>>> {
        let key = (sigma, tau, rho, k1, k2);
        if let Some(p) = self.prod.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let f = self.hom(sigma, tau, k1)?;
        let g = self.hom(tau, rho, k2)?;
        let h = self.hom(sigma, rho, k1 + k2)?;
        let mut out = Vec::with_capacity(f.dim());
        for fi in &f.basis {
            let mut row = Vec::with_capacity(g.dim());
            for gj in &g.basis {
                let c = gj.compose(fi);
                row.push(h.coords(&c).expect("composite of morphisms is a morphism"));
            }
            out.push(row);
        }
        let out = Arc::new(out);
        self.prod.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// Composes coefficient vectors: `f` in `Hom(ℒ^σ, ℒ^τ{k1})`, `g` in `Hom(ℒ^τ, ℒ^ρ{k2})`.
    pub fn compose_coords(&self, sigma: FaceId, tau: FaceId, rho: FaceId, k1: i64, k2: i64, f: &[Q], g: &[Q]) -> Result<Vec<Q>> {
        let h = self.hom_dim(sigma, rho, k1 + k2)?;
        let mut out = vec![Q::default(); h];
        if h == 0 || f.iter().all(|x| *x == Q::default()) || g.iter().all(|x| *x == Q::default()) {
            return Ok(out);
        }
        let p = self.product(sigma, tau, rho, k1, k2)?;
        for (i, fi) in f.iter().enumerate() {
            if *fi == Q::default() {
                continue;
            }
            for (j, gj) in g.iter().enumerate() {
                if *gj == Q::default() {
                    continue;
                }
                let s = fi * gj;
                for (o, c) in out.iter_mut().zip(&p[i][j]) {
                    *o += &s * c;
                }
            }
        }
        Ok(out)
    }

    pub fn decompose(&self, m: &LfSheaf) -> Result<PureDecomposition> {
        decompose(self, m)
    }
}

/// Graded maps `src → dst{n}` between pure sheaves.
pub fn hom_pure(src: &PureDecomposition, dst: &PureDecomposition, n: i64) -> HomSpace {
    hom_lf(&src.sheaf, &dst.sheaf, n)
}

/// `g ∘ f`, where the target of `f` is the source of `g`.
pub fn compose_homs(f: &LfMap, g: &LfMap) -> Result<LfMap> {
    if f.comps.len() != g.comps.len() || f.comps.iter().zip(&g.comps).any(|(a, b)| a.dst != b.src) {
        return Err(Error::ShiftMismatch("target of the first map is not the source of the second".into()));
    }
    Ok(g.compose(f))
}

/// One entry of the local intersection cohomology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IcTableRow {
    pub sigma: String,
    pub tau: String,
    pub degrees: Vec<i64>,
    pub multiplicities: Vec<usize>,
}

/// Minimal generator degrees of `ℒ^σ(τ)` for all `σ ≤ τ`.
pub fn ic_table(ctx: &PureCtx) -> Result<Vec<IcTableRow>> {
    let fan = &ctx.fan;
    let mut rows = Vec::new();
    for sigma in 0..fan.num_faces() {
        let l = ctx.ic(sigma)?;
        for tau in 0..fan.num_faces() {
            if !fan.leq(sigma, tau) {
                continue;
            }
            let mut degrees: Vec<i64> = Vec::new();
            let mut multiplicities = Vec::new();
            let mut g = l.gens[tau].clone();
            g.sort();
            for d in g {
                if degrees.last() == Some(&d) {
                    *multiplicities.last_mut().unwrap() += 1;
                } else {
                    degrees.push(d);
                    multiplicities.push(1);
                }
            }
            rows.push(IcTableRow { sigma: fan.label(sigma), tau: fan.label(tau), degrees, multiplicities });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graded_linalg::q;

    fn ctx(f: Fan) -> PureCtx {
        PureCtx::new(&Arc::new(f))
    }

    #[test]
    fn ic_of_vertex_on_quadrant_is_shifted_structure_sheaf() {
        let c = ctx(fixtures::fx1());
        let l = c.ic(0).unwrap();
        for f in 0..c.fan.num_faces() {
            assert_eq!(l.gens[f], vec![-2]);
        }
        assert_eq!(*l, LfSheaf::structure_sheaf(&c.fan).shift(2));
    }

    #[test]
    fn ic_of_vertex_on_square_cone() {
        let c = ctx(fixtures::fx2());
        let l = c.ic(0).unwrap();
        let top = c.fan.top().unwrap();
        let mut g = l.gens[top].clone();
        g.sort();
        assert_eq!(g, vec![-3, -1]);
        assert!(l.is_functorial());
        assert!(l.predicates(c.cutoff).unwrap().is_pure);
    }

    #[test]
    fn ic_of_maximal_face_is_skyscraper() {
        let c = ctx(fixtures::fx3());
        let l = c.ic(1).unwrap();
        assert_eq!(l.gens, vec![vec![], vec![0]]);
    }

    #[test]
    fn degree_bounds_hold() {
        for (_, f) in fixtures::all() {
            let c = ctx(f);
            let fan = c.fan.clone();
            for s in 0..fan.num_faces() {
                let l = c.ic(s).unwrap();
                for t in 0..fan.num_faces() {
                    let ct = fan.codim(t) as i64;
                    if !fan.leq(s, t) {
                        assert!(l.gens[t].is_empty());
                    } else if t == s {
                        assert_eq!(l.gens[t], vec![-ct]);
                    } else {
                        assert!(l.gens[t].iter().all(|&g| g < -ct));
                    }
                }
            }
        }
    }

    #[test]
    fn hom_examples_on_quadrant() {
        let c = ctx(fixtures::fx1());
        let fan = c.fan.clone();
        let s2 = fan.find(&[0, 1]).unwrap();
        let r1 = fan.find(&[0]).unwrap();
        let h = c.hom(s2, s2, 0).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.basis[0], LfMap::identity(&c.ic(s2).unwrap()));
        assert_eq!(c.hom_dim(0, r1, -1).unwrap(), 0);
        assert_eq!(c.hom_dim(r1, s2, 1).unwrap(), 1);
        for s in 0..fan.num_faces() {
            for t in 0..fan.num_faces() {
                assert_eq!(c.hom_dim(s, t, -2).unwrap(), 0);
                assert_eq!(c.hom_dim(s, t, 0).unwrap(), usize::from(s == t));
            }
        }
    }

    #[test]
    fn compose_on_ray() {
        let c = ctx(fixtures::fx3());
        let f = c.hom(0, 1, 1).unwrap();
        let g = c.hom(1, 0, 1).unwrap();
        assert_eq!((f.dim(), g.dim()), (1, 1));
        let e = compose_homs(&f.basis[0], &g.basis[0]).unwrap();
        let l = c.ic(0).unwrap();
        assert!(e.is_morphism(&l, &l));
        assert!(e.comps[0].is_zero());
        // at the ray, the generator goes to a nonzero multiple of x
        let m = e.comps[1].get(0, 0);
        assert_eq!(m.len(), 1);
        assert_ne!(m[0], q(0));
        let z = LfMap::zero(&l, &c.ic(1).unwrap(), 1);
        assert!(compose_homs(&z, &g.basis[0]).unwrap().is_zero());
        assert!(compose_homs(&f.basis[0], &f.basis[0]).is_err());
    }

    #[test]
    fn decompose_simple_cases() {
        let c = ctx(fixtures::fx1());
        let fan = c.fan.clone();
        let a = LfSheaf::structure_sheaf(&fan).shift(2);
        assert_eq!(c.decompose(&a).unwrap().labels, vec![(0, 0)]);
        let s2 = fan.find(&[0, 1]).unwrap();
        let sky = LfSheaf::point_face(&fan, s2);
        assert_eq!(c.decompose(&sky).unwrap().labels, vec![(s2, 0)]);
        let fx2 = Arc::new(fixtures::fx2());
        let c2 = PureCtx::new(&fx2);
        assert!(matches!(c2.decompose(&LfSheaf::structure_sheaf(&fx2)), Err(Error::NotPure(_))));
    }

    #[test]
    fn decompose_direct_sum() {
        let c = ctx(fixtures::fx1());
        let fan = c.fan.clone();
        let r1 = fan.find(&[0]).unwrap();
        let m = LfSheaf::direct_sum(&[c.ic(0).unwrap().shift(1), c.ic(r1).unwrap().shift(-2)]);
        let d = c.decompose(&m).unwrap();
        assert_eq!(d.sorted_labels(), vec![(0, 1), (r1, -2)]);
        assert!(d.iso.is_morphism(&d.sum, &m));
        assert!(d.inverse.is_morphism(&m, &d.sum));
        assert_eq!(d.inverse.compose(&d.iso), LfMap::identity(&d.sum));
    }

    #[test]
    fn local_ic_table_row() {
        let c = ctx(fixtures::fx2());
        let t = ic_table(&c).unwrap();
        let top = c.fan.label(c.fan.top().unwrap());
        let row = t.iter().find(|r| r.sigma == "[]" && r.tau == top).unwrap();
        assert_eq!(row.degrees, vec![-3, -1]);
        assert_eq!(row.multiplicities, vec![1, 1]);
    }
}
