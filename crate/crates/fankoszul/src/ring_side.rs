//! Graded endomorphism rings on both sides of the equivalence, and numeric checks of the
//! necessary conditions for Koszulity.
//!
//! Products are written in path order: for `a: σ → τ` of degree `n` and `b: τ → ρ` of
//! degree `m`, `a · b` is the composite `b{n} ∘ a: σ → ρ{n+m}`. This makes `R` the opposite
//! of the composition ring of `⊕ ℒ^σ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::fan_core::{DualFanMap, FaceId, Fan};
use crate::graded_linalg::{q_to_string, Mat, Q};
use crate::homotopy_cat::{homotopy_hom, ChainMap, CoCat, Complex, HomotopyHom};
use crate::koszul_dual::injective;
use crate::pure_ic::PureCtx;
use crate::{Error, Result};

/// Basis element of `e_src R_n e_dst`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Arrow {
    pub src: FaceId,
    pub dst: FaceId,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct GradedRing {
    pub name: String,
    pub face_labels: Vec<String>,
    pub cutoff: i64,
    /// Bases of `R_n` for `-1 ≤ n ≤ cutoff`, sorted by `(src, dst, index)`.
    pub pieces: BTreeMap<i64, Vec<Arrow>>,
    /// `mult[(n, m, i, j)]`: product of `pieces[n][i]` and `pieces[m][j]`, in the basis of the
    /// block `(src_i, dst_j)` of degree `n + m`. Only composable pairs with `n + m ≤ cutoff`.
    pub mult: BTreeMap<(i64, i64, usize, usize), Vec<Q>>,
    /// `e_σ` as coordinates in the block `(σ, σ)` of degree zero.
    pub idempotents: Vec<Vec<Q>>,
}

/// Homs and their composition for a family of objects indexed by faces.
trait HomSource {
    fn dim(&self, a: FaceId, b: FaceId, n: i64) -> Result<usize>;
    /// `g{n} ∘ f` for `f: a → b{n}` and `g: b → c{m}`.
    fn compose(&self, a: FaceId, b: FaceId, c: FaceId, n: i64, m: i64, f: &[Q], g: &[Q]) -> Result<Vec<Q>>;
}

impl HomSource for PureCtx {
    fn dim(&self, a: FaceId, b: FaceId, n: i64) -> Result<usize> {
        self.hom_dim(a, b, n)
    }

    fn compose(&self, a: FaceId, b: FaceId, c: FaceId, n: i64, m: i64, f: &[Q], g: &[Q]) -> Result<Vec<Q>> {
        self.compose_coords(a, b, c, n, m, f, g)
    }
}

/// Homotopy classes of maps between the injectives `K(ℒ^σ)`.
struct CoSource {
    cat: CoCat,
    objects: Vec<Complex>,
    homs: std::sync::Mutex<BTreeMap<(FaceId, FaceId, i64), Arc<HomotopyHom>>>,
}

impl CoSource {
    fn hom(&self, a: FaceId, b: FaceId, n: i64) -> Result<Arc<HomotopyHom>> {
        if let Some(h) = self.homs.lock().unwrap().get(&(a, b, n)) {
            return Ok(h.clone());
        }
        let h = Arc::new(homotopy_hom(&self.cat, &self.objects[a], &self.objects[b].twist(n))?);
        self.homs.lock().unwrap().insert((a, b, n), h.clone());
        Ok(h)
    }
}

fn combination(basis: &[ChainMap], coeffs: &[Q]) -> ChainMap {
    let mut out = ChainMap::default();
    for (f, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (&i, b) in &f.comps {
            let s = b.scale(c);
            let e = match out.comps.remove(&i) {
                Some(acc) => acc.add(&s),
                None => s,
            };
            out.comps.insert(i, e);
        }
    }
    out
}

impl HomSource for CoSource {
    fn dim(&self, a: FaceId, b: FaceId, n: i64) -> Result<usize> {
        Ok(self.hom(a, b, n)?.dim)
    }

    fn compose(&self, a: FaceId, b: FaceId, c: FaceId, n: i64, m: i64, f: &[Q], g: &[Q]) -> Result<Vec<Q>> {
        let h = self.hom(a, c, n + m)?;
        if h.dim == 0 || f.iter().all(Zero::is_zero) || g.iter().all(Zero::is_zero) {
            return Ok(vec![Q::zero(); h.dim]);
        }
        let f = combination(&self.hom(a, b, n)?.basis, f);
        let g = combination(&self.hom(b, c, m)?.basis, g).twist(n);
        let (x, y, z) = (&self.objects[a], self.objects[b].twist(n), self.objects[c].twist(n + m));
        let gf = g.compose(&self.cat, &f, x, &y, &z)?;
        h.class_coords(&gf).ok_or_else(|| Error::SignAuditFailure("composite is not a chain map".into()))
    }
}

fn unit(n: usize, k: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[k] = Q::from_integer(1.into());
    v
}

fn build(src: &dyn HomSource, name: &str, face_labels: Vec<String>, cutoff: i64) -> Result<GradedRing> {
    if cutoff < 1 {
        return Err(Error::CutoffTooSmall { cutoff });
    }
    let nf = face_labels.len();
    let mut pieces = BTreeMap::new();
    for n in -1..=cutoff {
        let mut basis = Vec::new();
        for a in 0..nf {
            for b in 0..nf {
                basis.extend((0..src.dim(a, b, n)?).map(|index| Arrow { src: a, dst: b, index }));
            }
        }
        pieces.insert(n, basis);
    }
    let mut ring = GradedRing { name: name.into(), face_labels, cutoff, pieces, mult: BTreeMap::new(), idempotents: Vec::new() };
    for n in 0..=cutoff {
        for m in 0..=cutoff - n {
            for (i, x) in ring.pieces[&n].iter().enumerate() {
                for (j, y) in ring.pieces[&m].iter().enumerate() {
                    if x.dst != y.src {
                        continue;
                    }
                    let f = unit(src.dim(x.src, x.dst, n)?, x.index);
                    let g = unit(src.dim(y.src, y.dst, m)?, y.index);
                    let p = src.compose(x.src, x.dst, y.dst, n, m, &f, &g)?;
                    ring.mult.insert((n, m, i, j), p);
                }
            }
        }
    }
    for s in 0..nf {
        let k = ring.pieces[&0].iter().position(|a| a.src == s && a.dst == s);
        let e = match k {
            Some(k) if ring.block_dim(0, s, s) == 1 => {
                let c = ring.mult[&(0, 0, k, k)][0].clone();
                if c.is_zero() {
                    return Err(Error::SignAuditFailure(format!("degree-zero endomorphism of face {s} is nilpotent")));
                }
                vec![c.recip()]
            }
            _ => Vec::new(),
        };
        ring.idempotents.push(e);
    }
    Ok(ring)
}

/// `R = ⊕_n ⊕_{σ,τ} Hom(ℒ^σ, ℒ^τ{n})` for `n ≤ cutoff`.
pub fn end_ring_r(ctx: &PureCtx, cutoff: i64) -> Result<GradedRing> {
    let labels = (0..ctx.fan.num_faces()).map(|s| ctx.fan.label(s)).collect();
    build(ctx, "R", labels, cutoff)
}

/// `R^∨ = ⊕_n ⊕_{σ,τ} Hom(K(ℒ^σ), K(ℒ^τ){n})` up to homotopy. Faces are indexed by `σ`; the
/// labels show `σ^⊥` where the dual cone exists.
pub fn end_ring_rvee(ctx: &PureCtx, cutoff: i64) -> Result<GradedRing> {
    let fan = &ctx.fan;
    let objects = (0..fan.num_faces()).map(|s| injective(ctx, s)).collect::<Result<Vec<_>>>()?;
    let src = CoSource { cat: CoCat::new(fan), objects, homs: Default::default() };
    build(&src, "R^∨", dual_labels(fan), cutoff)
}

fn dual_labels(fan: &Fan) -> Vec<String> {
    match DualFanMap::new(fan) {
        Ok(d) => (0..fan.num_faces()).map(|s| d.target.label(d.perp(s).unwrap())).collect(),
        Err(_) => (0..fan.num_faces()).map(|s| format!("{}^⊥", fan.label(s))).collect(),
    }
}

impl GradedRing {
    pub fn num_faces(&self) -> usize {
        self.face_labels.len()
    }

    pub fn dim(&self, n: i64) -> usize {
        self.pieces.get(&n).map_or(0, Vec::len)
    }

    pub fn block_dim(&self, n: i64, a: FaceId, b: FaceId) -> usize {
        self.pieces.get(&n).map_or(0, |p| p.iter().filter(|x| x.src == a && x.dst == b).count())
    }

    fn block_offset(&self, n: i64, a: FaceId, b: FaceId) -> usize {
        self.pieces[&n].iter().position(|x| (x.src, x.dst) >= (a, b)).unwrap_or(self.dim(n))
    }

    /// Coordinates of a basis product in the full basis of `R_{n+m}`, or `None` past the cutoff.
    pub fn product(&self, n: i64, i: usize, m: i64, j: usize) -> Option<Vec<Q>> {
        if n + m > self.cutoff || n < 0 || m < 0 {
            return None;
        }
        let mut out = vec![Q::zero(); self.dim(n + m)];
        let (x, y) = (self.pieces[&n][i], self.pieces[&m][j]);
        if let Some(p) = self.mult.get(&(n, m, i, j)) {
            let o = self.block_offset(n + m, x.src, y.dst);
            for (k, c) in p.iter().enumerate() {
                out[o + k] = c.clone();
            }
        }
        Some(out)
    }

    /// Bilinear extension of [`GradedRing::product`].
    pub fn mul(&self, n: i64, x: &[Q], m: i64, y: &[Q]) -> Option<Vec<Q>> {
        let mut out = vec![Q::zero(); self.dim(n + m)];
        if n + m > self.cutoff {
            return None;
        }
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = self.product(n, i, m, j)?;
                let s = a * b;
                out.iter_mut().zip(p).for_each(|(o, c)| *o += &s * c);
            }
        }
        Some(out)
    }

    /// `e_σ` in the full basis of `R_0`.
    pub fn idempotent(&self, s: FaceId) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim(0)];
        let o = self.block_offset(0, s, s);
        for (k, c) in self.idempotents[s].iter().enumerate() {
            out[o + k] = c.clone();
        }
        out
    }

    /// A copy with every product `R_n × R_m` set to zero, for fault injection.
    pub fn with_zeroed_products(&self, n: i64, m: i64) -> GradedRing {
        let mut r = self.clone();
        for (k, v) in r.mult.iter_mut() {
            if (k.0, k.1) == (n, m) {
                v.iter_mut().for_each(|x| *x = Q::zero());
            }
        }
        r
    }

    /// `(fg)h = f(gh)` on all basis triples of total degree at most the cutoff.
    pub fn is_associative(&self) -> bool {
        for n in 0..=self.cutoff {
            for m in 0..=self.cutoff - n {
                for l in 0..=self.cutoff - n - m {
                    for i in 0..self.dim(n) {
                        for j in 0..self.dim(m) {
                            let Some(ij) = self.product(n, i, m, j) else { continue };
                            for k in 0..self.dim(l) {
                                let jk = self.product(m, j, l, k).unwrap();
                                let left = self.mul(n + m, &ij, l, &unit(self.dim(l), k)).unwrap();
                                let right = self.mul(n, &unit(self.dim(n), i), m + l, &jk).unwrap();
                                if left != right {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Rank of the span of `R_1(a, c) · R_{n-1}(c, b)` over all `c`.
    pub fn generated_rank(&self, n: i64, a: FaceId, b: FaceId) -> usize {
        let o = self.block_offset(n, a, b);
        let d = self.block_dim(n, a, b);
        let mut rows = Vec::new();
        for (i, x) in self.pieces[&1].iter().enumerate() {
            if x.src != a {
                continue;
            }
            for (j, y) in self.pieces[&(n - 1)].iter().enumerate() {
                if y.src != x.dst || y.dst != b {
                    continue;
                }
                if let Some(p) = self.product(1, i, n - 1, j) {
                    rows.push(p[o..o + d].to_vec());
                }
            }
        }
        if rows.is_empty() || d == 0 {
            return 0;
        }
        Mat::from_rows(rows).rank()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pieces: BTreeMap<String, Vec<Arrow>> = self.pieces.iter().map(|(n, p)| (n.to_string(), p.clone())).collect();
        let mut table = Vec::new();
        for (&(n, m, i, j), v) in &self.mult {
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            let (x, y) = (self.pieces[&n][i], self.pieces[&m][j]);
            let o = self.block_offset(n + m, x.src, y.dst);
            let terms: Vec<(usize, String)> =
                v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (o + k, q_to_string(c))).collect();
            table.push(serde_json::json!({ "left": [n, i], "right": [m, j], "product": terms }));
        }
        let idem: Vec<Vec<(usize, String)>> = (0..self.num_faces())
            .map(|s| self.idempotent(s).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, q_to_string(c))).collect())
            .collect();
        serde_json::json!({
            "name": self.name,
            "faces": self.face_labels,
            "cutoff": self.cutoff,
            "convention": "a·b = b∘a",
            "idempotents": idem,
            "pieces": pieces,
            "multiplication": table,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationFailure {
    pub ring: String,
    pub degree: i64,
    pub src: String,
    pub dst: String,
    pub rank: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRow {
    pub src: String,
    pub dst: String,
    pub r1: usize,
    pub rvee1_transposed: usize,
    pub r2: usize,
    pub rvee2_transposed: usize,
    /// `dim (R_1 ⊗_{R_0} R_1)(src, dst)`.
    pub r1_r1: usize,
    /// `r1_r1 - r2`: the quadratic relations of `R` in this block.
    pub relations: i64,
    pub degree_one_ok: bool,
    pub quadratic_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulReport {
    pub cutoff: i64,
    pub r_dims: BTreeMap<i64, usize>,
    pub rvee_dims: BTreeMap<i64, usize>,
    pub associative: bool,
    /// (i): nothing in negative degree, `R_0` spanned by a complete set of orthogonal idempotents.
    pub positivity: bool,
    /// (ii)
    pub generation: bool,
    pub generation_failures: Vec<GenerationFailure>,
    /// (iii)
    pub degree_one: bool,
    /// (iv)
    pub quadratic: bool,
    pub pairs: Vec<PairRow>,
}

impl KoszulReport {
    pub fn pass(&self) -> bool {
        self.associative && self.positivity && self.generation && self.degree_one && self.quadratic
    }
}

fn semisimple_degree_zero(r: &GradedRing) -> bool {
    let nf = r.num_faces();
    if r.dim(-1) != 0 || r.dim(0) != nf {
        return false;
    }
    if (0..nf).any(|s| r.block_dim(0, s, s) != 1) {
        return false;
    }
    for a in 0..nf {
        for b in 0..nf {
            let p = r.mul(0, &r.idempotent(a), 0, &r.idempotent(b)).unwrap();
            let want = if a == b { r.idempotent(a) } else { vec![Q::zero(); r.dim(0)] };
            if p != want {
                return false;
            }
        }
    }
    // e_src · x = x = x · e_dst on every basis element
    for n in 0..=r.cutoff {
        for (i, x) in r.pieces[&n].iter().enumerate() {
            let v = unit(r.dim(n), i);
            if r.mul(0, &r.idempotent(x.src), n, &v).unwrap() != v || r.mul(n, &v, 0, &r.idempotent(x.dst)).unwrap() != v {
                return false;
            }
        }
    }
    true
}

fn generation_failures(r: &GradedRing, cutoff: i64) -> Vec<GenerationFailure> {
    let mut out = Vec::new();
    for n in 2..=cutoff.min(r.cutoff) {
        for a in 0..r.num_faces() {
            for b in 0..r.num_faces() {
                let dim = r.block_dim(n, a, b);
                let rank = r.generated_rank(n, a, b);
                if rank != dim {
                    out.push(GenerationFailure {
                        ring: r.name.clone(),
                        degree: n,
                        src: r.face_labels[a].clone(),
                        dst: r.face_labels[b].clone(),
                        rank,
                        dim,
                    });
                }
            }
        }
    }
    out
}

/// Checks (i)-(iv) on two rings computed over the same face set. Face pairs of `R^∨` are read
/// transposed: the block `(a, b)` of `R` is compared with the block `(b, a)` of `R^∨`.
pub fn koszul_checks(r: &GradedRing, rvee: &GradedRing, cutoff: i64) -> KoszulReport {
    let cutoff = cutoff.min(r.cutoff).min(rvee.cutoff);
    let dims = |x: &GradedRing| (-1..=cutoff).map(|n| (n, x.dim(n))).collect::<BTreeMap<_, _>>();
    let mut generation_failures_all = generation_failures(r, cutoff);
    generation_failures_all.extend(generation_failures(rvee, cutoff));
    let nf = r.num_faces();
    let mut pairs = Vec::new();
    for a in 0..nf {
        for b in 0..nf {
            let r1_r1: usize = (0..nf).map(|c| r.block_dim(1, a, c) * r.block_dim(1, c, b)).sum();
            let (r1, v1) = (r.block_dim(1, a, b), rvee.block_dim(1, b, a));
            let (r2, v2) = (r.block_dim(2, a, b), rvee.block_dim(2, b, a));
            pairs.push(PairRow {
                src: r.face_labels[a].clone(),
                dst: r.face_labels[b].clone(),
                r1,
                rvee1_transposed: v1,
                r2,
                rvee2_transposed: v2,
                r1_r1,
                relations: r1_r1 as i64 - r2 as i64,
                degree_one_ok: r1 == v1,
                quadratic_ok: r2 + v2 == r1_r1,
            });
        }
    }
    KoszulReport {
        cutoff,
        r_dims: dims(r),
        rvee_dims: dims(rvee),
        associative: r.is_associative() && rvee.is_associative(),
        positivity: rvee.num_faces() == nf && semisimple_degree_zero(r) && semisimple_degree_zero(rvee),
        generation: generation_failures_all.is_empty(),
        generation_failures: generation_failures_all,
        degree_one: pairs.iter().all(|p| p.degree_one_ok),
        quadratic: pairs.iter().all(|p| p.quadratic_ok),
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ctx(f: Fan) -> PureCtx {
        PureCtx::new(&Arc::new(f))
    }

    #[test]
    fn ring_of_the_ray() {
        let c = ctx(fixtures::fx3());
        let r = end_ring_r(&c, 4).unwrap();
        assert_eq!((r.dim(-1), r.dim(0), r.dim(1), r.dim(2)), (0, 2, 2, 2));
        let o = c.fan.zero_cone();
        let s = 1 - o;
        assert_eq!((r.block_dim(1, o, s), r.block_dim(1, s, o)), (1, 1));
        assert!(r.is_associative());
        assert!(semisimple_degree_zero(&r));
        assert!(generation_failures(&r, 4).is_empty());
    }

    #[test]
    fn ring_of_the_quadrant() {
        let c = ctx(fixtures::fx1());
        let r = end_ring_r(&c, 2).unwrap();
        assert_eq!((r.dim(0), r.dim(1)), (4, 8));
        for (a, b) in c.fan.cover_pairs_in(&(0..4).collect::<Vec<_>>()) {
            assert_eq!((r.block_dim(1, a, b), r.block_dim(1, b, a)), (1, 1));
        }
        assert_eq!(
            r.dim(1),
            r.pieces[&1].iter().filter(|x| c.fan.facets(x.src).contains(&x.dst) || c.fan.facets(x.dst).contains(&x.src)).count()
        );
    }

    #[test]
    fn products_follow_path_order() {
        let c = ctx(fixtures::fx1());
        let r = end_ring_r(&c, 2).unwrap();
        let o = c.fan.zero_cone();
        let rho = c.fan.find(&[0]).unwrap();
        let up = r.pieces[&1].iter().position(|x| (x.src, x.dst) == (o, rho)).unwrap();
        let down = r.pieces[&1].iter().position(|x| (x.src, x.dst) == (rho, o)).unwrap();
        let ab = r.product(1, up, 1, down).unwrap();
        let ba = r.product(1, down, 1, up).unwrap();
        let nz = |v: &[Q]| v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, _)| r.pieces[&2][k]).collect::<Vec<_>>();
        assert!(!nz(&ab).is_empty() && nz(&ab).iter().all(|x| (x.src, x.dst) == (o, o)));
        assert!(!nz(&ba).is_empty() && nz(&ba).iter().all(|x| (x.src, x.dst) == (rho, rho)));
        assert_ne!(ab, ba);
    }

    #[test]
    fn dual_ring_of_the_ray() {
        let c = ctx(fixtures::fx3());
        let v = end_ring_rvee(&c, 2).unwrap();
        assert_eq!((v.dim(-1), v.dim(0), v.dim(1)), (0, 2, 2));
        assert!(v.is_associative());
        assert!(semisimple_degree_zero(&v));
    }

    #[test]
    fn corrupted_table_breaks_generation() {
        let c = ctx(fixtures::fx3());
        let r = end_ring_r(&c, 3).unwrap();
        let bad = r.with_zeroed_products(1, 1);
        let f = generation_failures(&bad, 3);
        assert!(f.iter().any(|w| w.degree == 2 && w.rank < w.dim));
    }

    #[test]
    fn small_cutoff_is_rejected() {
        assert!(matches!(end_ring_r(&ctx(fixtures::fx3()), 0), Err(Error::CutoffTooSmall { .. })));
    }

    #[test]
    fn json_export_uses_rational_strings() {
        let r = end_ring_r(&ctx(fixtures::fx3()), 2).unwrap();
        let j = r.to_json();
        assert_eq!(j["pieces"]["1"].as_array().unwrap().len(), 2);
        let first = &j["multiplication"][0]["product"][0][1];
        assert!(first.is_string());
    }
}
