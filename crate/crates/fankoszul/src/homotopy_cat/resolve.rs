//! Locally free covers of sheaves and pure (flabby) hulls of locally free complexes.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::fan_core::{FaceId, Fan};
use crate::graded_linalg::poly::PolyMat;
use crate::graded_linalg::{kernel_degreewise, q, with_cutoff, DegreewiseModule, GradedMap, Mat, Q};
use crate::sheaf_quiver::{LfMap, LfSheaf, QuiverSheaf};
use crate::{Error, Result};

use super::lfcomplex::{is_strong_injection, solve_vec, unit, LfChainMap, LfComplex};

/// The sheaf with stalk `ℚ` in grade 0 at `tau` and zero elsewhere.
pub fn skyscraper(fan: &Arc<Fan>, tau: FaceId, lo: i64, hi: i64) -> QuiverSheaf {
    let mut out = QuiverSheaf::zero(fan, lo, hi);
    let k = fan.dim(tau);
    let dim = |g: i64| usize::from(g == 0);
    out.stalks[tau] = DegreewiseModule::from_fn(k, lo, hi, dim, |_, g| Mat::zeros(dim(g + 2), dim(g)));
    for (&(b, a), m) in out.res.iter_mut() {
        let mats = (lo..=hi).map(|g| Mat::zeros(out.stalks[a].dim(g), out.stalks[b].dim(g))).collect();
        *m = GradedMap { lo, hi, mats };
    }
    out
}

/// Starting offset of the block of face `f` inside coordinates concatenated over `faces`.
fn offset_in(q: &QuiverSheaf, faces: &[FaceId], f: FaceId, g: i64) -> usize {
    let k = faces.iter().position(|&x| x == f).unwrap();
    faces[..k].iter().map(|&x| q.stalks[x].dim(g)).sum()
}

/// Resets the restrictions into `tau` from larger faces after its generators change.
fn reset_cofacets(s: &mut LfSheaf, tau: FaceId) {
    let fan = s.fan.clone();
    for &up in fan.cofacets(tau) {
        let old = &s.res[&(up, tau)];
        let pm = PolyMat::zero(fan.dim(tau), s.gens[tau].clone(), old.src.clone(), 0);
        s.res.insert((up, tau), pm);
    }
}

fn grade_range(parts: &[&LfSheaf], cutoff: i64) -> (i64, i64) {
    let fan = &parts[0].fan;
    let lo = parts.iter().filter_map(|p| p.min_grade()).min().unwrap_or(0);
    let hi = parts.iter().filter_map(|p| p.max_grade()).max().unwrap_or(0) + 2 * fan.ambient_rank as i64 + 4;
    (lo, hi.max(lo + cutoff))
}

/// A flabby sheaf `I` with a strong injection `η: M → I` that is the identity on the
/// generators of `M`.
#[derive(Clone, Debug)]
pub struct Hull {
    pub sheaf: LfSheaf,
    pub eta: LfMap,
}

pub fn pure_hull(m: &LfSheaf, cutoff: i64) -> Result<Hull> {
    with_cutoff(cutoff, |d| pure_hull_at(m, d))
}

/// Adds to each stalk free generators covering the boundary sections not reached by `M`.
fn pure_hull_at(m: &LfSheaf, cutoff: i64) -> Result<Hull> {
    let fan = m.fan.clone();
    let nf = fan.num_faces();
    let mut i = LfSheaf::from_gens(&fan, vec![Vec::new(); nf]);
    for tau in 0..nf {
        let bd = fan.boundary(tau);
        let mut extra: Vec<(i64, Vec<Q>)> = Vec::new();
        let mut quiver = None;
        if !bd.is_empty() {
            let (lo, hi) = grade_range(&[m, &i], cutoff);
            let qi = i.to_quiver(lo, hi);
            let sec = qi.sections(&bd, Some(tau))?;
            let mut img = Vec::new();
            for g in lo..=hi {
                let n = m.shape(tau).dim(g);
                let e = sec.embed_at(g);
                let mut a = Mat::zeros(0, n);
                for &rho in &bd {
                    let r = m.res_at_grade(tau, rho, g);
                    let pad = Mat::zeros(qi.stalks[rho].dim(g) - r.rows(), n);
                    a = a.vstack(&r).vstack(&pad);
                }
                let coords = if n == 0 || e.cols() == 0 {
                    Mat::zeros(e.cols(), 0)
                } else {
                    e.solve(&a).ok_or_else(|| Error::RangeMismatch("restriction is not a boundary section".into()))?
                };
                img.push(if coords.cols() == 0 { coords } else { coords.image() });
            }
            let (quot, proj) = sec.module.quotient(&img);
            let (shape, lifts) = quot.minimal_generators()?;
            for (j, &gj) in shape.gens.iter().enumerate() {
                let y = solve_vec(proj.at(gj), &lifts[j]).expect("projection is onto");
                extra.push((gj, sec.embed_at(gj).mul_vec(&y)));
            }
            quiver = Some(qi);
        }
        let mut gens = m.gens[tau].clone();
        gens.extend(extra.iter().map(|(g, _)| *g));
        i.gens[tau] = gens;
        for &xi in fan.facets(tau) {
            let mut cols = Vec::new();
            let phi = &m.res[&(tau, xi)];
            let dst_shape = i.shape(xi);
            for (j, &gj) in m.gens[tau].iter().enumerate() {
                let mut c = phi.column(j);
                c.resize(dst_shape.dim(gj), q(0));
                cols.push(c);
            }
            let qi = quiver.as_ref().unwrap();
            for (gj, amb) in &extra {
                let s = offset_in(qi, &bd, xi, *gj);
                cols.push(amb[s..s + qi.stalks[xi].dim(*gj)].to_vec());
            }
            let pm = PolyMat::from_columns(fan.dim(xi), i.gens[xi].clone(), i.gens[tau].clone(), 0, &cols);
            i.res.insert((tau, xi), pm);
        }
        reset_cofacets(&mut i, tau);
    }
    let mut eta = LfMap::zero(m, &i, 0);
    for f in 0..nf {
        for j in 0..m.gens[f].len() {
            eta.comps[f].set(j, j, vec![q(1)]);
        }
    }
    if !eta.is_morphism(m, &i) || !is_strong_injection(&eta) {
        return Err(Error::NotPure("hull inclusion is not a strong injection".into()));
    }
    if !i.predicates(cutoff)?.is_flabby {
        return Err(Error::NotPure("hull is not flabby".into()));
    }
    Ok(Hull { sheaf: i, eta })
}

/// A quasi-isomorphism `φ: P → I` into a bounded complex of pure sheaves.
#[derive(Clone, Debug)]
pub struct HullComplex {
    pub complex: LfComplex,
    pub phi: LfChainMap,
}

fn summand_cols(t_first: &LfSheaf, f: FaceId, first: bool, total: usize) -> Vec<usize> {
    let n = t_first.gens[f].len();
    if first {
        (0..n).collect()
    } else {
        (n..total).collect()
    }
}

/// Restricts a map out of `A ⊕ B` to one summand.
fn restrict(map: &LfMap, a: &LfSheaf, t: &LfSheaf, first: bool) -> LfMap {
    let comps = map
        .comps
        .iter()
        .enumerate()
        .map(|(f, c)| {
            let rows: Vec<usize> = (0..c.rows()).collect();
            c.select(&rows, &summand_cols(a, f, first, t.gens[f].len()))
        })
        .collect();
    LfMap { shift: map.shift, comps }
}

/// Resolves a complex of locally free sheaves by pure ones: `C^j = coker(C^{j-1} → P^j ⊕ I^{j-1})`,
/// `I^j` the hull of `C^j`.
pub fn flabby_hull(p: &LfComplex, cutoff: i64) -> Result<HullComplex> {
    let fan = p.fan.clone();
    let nf = fan.num_faces();
    let mut out = LfComplex { fan: fan.clone(), terms: BTreeMap::new(), diffs: BTreeMap::new() };
    let mut phi = LfChainMap { comps: BTreeMap::new() };
    let Some((a, b)) = p.range() else { return Ok(HullComplex { complex: out, phi }) };
    // C^a = P^a with preimages of generators in P^a
    let mut c = p.term(a);
    let mut pre: Vec<Vec<Vec<Q>>> = (0..nf)
        .map(|f| (0..c.gens[f].len()).map(|j| unit(c.shape(f).dim(c.gens[f][j]), c.shape(f).offsets(c.gens[f][j])[j])).collect())
        .collect();
    let hull = pure_hull(&c, cutoff)?;
    out.terms.insert(a, hull.sheaf.clone());
    phi.comps.insert(a, hull.eta.clone());
    let mut prev_eta = hull.eta;
    let mut prev_i = hull.sheaf;
    let mut j = a + 1;
    loop {
        if j > b + nf as i64 + 2 {
            return Err(Error::NotPure("hull construction does not terminate".into()));
        }
        let pj = p.term(j);
        let dp = p.d(j - 1);
        // u: C^{j-1} → P^j ⊕ I^{j-1}
        let t = LfSheaf::direct_sum(&[pj.clone(), prev_i.clone()]);
        let mut u = LfMap::zero(&c, &t, 0);
        for f in 0..nf {
            let mut cols = Vec::with_capacity(c.gens[f].len());
            for (k, &g) in c.gens[f].iter().enumerate() {
                let np = p.term(j - 1).shape(f).dim(g);
                let top = dp.at_grade(f, g).mul_vec(&pre[f][k][..np]);
                let e = unit(c.shape(f).dim(g), c.shape(f).offsets(g)[k]);
                let low: Vec<Q> = prev_eta.at_grade(f, g).mul_vec(&e).into_iter().map(|x| -x).collect();
                let mut parts = pj.shape(f).split(g, &top);
                parts.extend(prev_i.shape(f).split(g, &low));
                cols.push(t.shape(f).join(g, &parts));
            }
            u.comps[f] = PolyMat::from_columns(fan.dim(f), t.gens[f].clone(), c.gens[f].clone(), 0, &cols);
        }
        if !u.is_morphism(&c, &t) || !is_strong_injection(&u) {
            return Err(Error::NotPure(format!("cokernel map in degree {j} is not a strong injection")));
        }
        let (lo, hi) = grade_range(&[&t], cutoff);
        let tq = t.to_quiver(lo, hi);
        let images: Vec<Vec<Mat>> = (0..nf).map(|f| (lo..=hi).map(|g| u.at_grade(f, g)).collect()).collect();
        let (cq, projs) = tq.cokernel(&images);
        let Some((cj, evals)) = cq.to_lf()? else {
            return Err(Error::NotPure(format!("cokernel in degree {j} is not locally free")));
        };
        // q_j: T^j → C^j and preimages of the generators of C^j
        let mut qj = LfMap::zero(&t, &cj, 0);
        let mut next_pre = vec![Vec::new(); nf];
        for f in 0..nf {
            let mut cols = Vec::new();
            for (k, &g) in t.gens[f].iter().enumerate() {
                let e = unit(t.shape(f).dim(g), t.shape(f).offsets(g)[k]);
                let v = projs[f].at(g).mul_vec(&e);
                cols.push(solve_vec(evals[f].at(g), &v).expect("evaluation is an isomorphism"));
            }
            qj.comps[f] = PolyMat::from_columns(fan.dim(f), cj.gens[f].clone(), t.gens[f].clone(), 0, &cols);
            for (k, &g) in cj.gens[f].iter().enumerate() {
                let e = unit(cj.shape(f).dim(g), cj.shape(f).offsets(g)[k]);
                let y = evals[f].at(g).mul_vec(&e);
                next_pre[f].push(solve_vec(projs[f].at(g), &y).expect("projection is onto"));
            }
        }
        let hull = pure_hull(&cj, cutoff)?;
        let to_i = hull.eta.compose(&qj);
        out.diffs.insert(j - 1, restrict(&to_i, &pj, &t, false));
        out.terms.insert(j, hull.sheaf.clone());
        phi.comps.insert(j, restrict(&to_i, &pj, &t, true));
        if cj.is_zero() && j >= b {
            break;
        }
        c = cj;
        pre = next_pre;
        prev_eta = hull.eta;
        prev_i = hull.sheaf;
        j += 1;
    }
    out.terms.retain(|_, t| !t.is_zero());
    let terms = out.terms.clone();
    out.diffs.retain(|i, _| terms.contains_key(i) && terms.contains_key(&(i + 1)));
    phi.comps.retain(|i, _| terms.contains_key(i));
    Ok(HullComplex { complex: out, phi })
}

/// A resolution `P^• → M` by locally free sheaves, augmented in degree 0.
#[derive(Clone, Debug)]
pub struct Cover {
    pub complex: LfComplex,
    /// Per face, `P^0(τ) → M(τ)` on the stored range of `M`.
    pub aug: Vec<GradedMap>,
}

/// Locally free sheaf with a strong surjection onto `M`: boundary sections of the cover that
/// map into the image of `M(τ)` plus generators of the relative sections of `M(τ)`.
fn cover_step(m: &QuiverSheaf) -> Result<(LfSheaf, Vec<GradedMap>)> {
    let fan = m.fan.clone();
    let nf = fan.num_faces();
    let (lo, hi) = (m.lo, m.hi);
    let mut p = LfSheaf::from_gens(&fan, vec![Vec::new(); nf]);
    let mut imgs: Vec<Vec<Vec<Q>>> = vec![Vec::new(); nf];
    for tau in 0..nf {
        let bd = fan.boundary(tau);
        let mut first: Vec<(i64, Vec<Q>, Vec<Q>)> = Vec::new();
        let mut pq = None;
        if !bd.is_empty() {
            let qp = p.to_quiver(lo, hi);
            let sec = qp.sections(&bd, Some(tau))?;
            let evals: BTreeMap<FaceId, GradedMap> =
                bd.iter().map(|&r| Ok((r, m.stalks[r].evaluation(&p.shape(r), &imgs[r])?))).collect::<Result<_>>()?;
            let phi_at = |g: i64| {
                let rows: usize = bd.iter().map(|&r| m.stalks[r].dim(g)).sum();
                let cols: usize = bd.iter().map(|&r| qp.stalks[r].dim(g)).sum();
                let mut a = Mat::zeros(rows, cols);
                let (mut r0, mut c0) = (0, 0);
                for &r in &bd {
                    a.add_block(r0, c0, evals[&r].at(g));
                    r0 += m.stalks[r].dim(g);
                    c0 += qp.stalks[r].dim(g);
                }
                a
            };
            let res_at = |g: i64| {
                let mut a = Mat::zeros(0, m.stalks[tau].dim(g));
                for &r in &bd {
                    a = a.vstack(&m.res_at(tau, r, g));
                }
                a
            };
            let mut ubases = Vec::new();
            for g in lo..=hi {
                let e = sec.embed_at(g);
                let pe = phi_at(g).mul(e);
                let r = res_at(g);
                let n = e.cols();
                let ker = if pe.rows() == 0 { Mat::identity(n + r.cols()) } else { pe.hstack(&r.neg()).kernel() };
                let top = ker.block(0, 0, n, ker.cols());
                ubases.push(if top.cols() == 0 { Mat::zeros(n, 0) } else { top.image() });
            }
            let u = sec.module.submodule(&ubases)?;
            let (shape, lifts) = u.minimal_generators()?;
            for (j, &g) in shape.gens.iter().enumerate() {
                let s = ubases[(g - lo) as usize].mul_vec(&lifts[j]);
                let amb = sec.embed_at(g).mul_vec(&s);
                let target = phi_at(g).mul_vec(&amb);
                let x = solve_vec(&res_at(g), &target).expect("boundary section lies in the image");
                first.push((g, amb, x));
            }
            pq = Some(qp);
        }
        let rel = m.relative_sections(tau)?;
        let (shape2, lifts2) = rel.module.minimal_generators()?;
        let mut gens: Vec<i64> = first.iter().map(|(g, _, _)| *g).collect();
        gens.extend(&shape2.gens);
        p.gens[tau] = gens;
        imgs[tau] = first.iter().map(|(_, _, x)| x.clone()).collect();
        for (j, &g) in shape2.gens.iter().enumerate() {
            imgs[tau].push(rel.embed_at(g).mul_vec(&lifts2[j]));
        }
        for &xi in fan.facets(tau) {
            let qp = pq.as_ref().unwrap();
            let mut cols = Vec::new();
            for (g, amb, _) in &first {
                let s = offset_in(qp, &bd, xi, *g);
                cols.push(amb[s..s + qp.stalks[xi].dim(*g)].to_vec());
            }
            for &g in &shape2.gens {
                cols.push(vec![q(0); p.shape(xi).dim(g)]);
            }
            let pm = PolyMat::from_columns(fan.dim(xi), p.gens[xi].clone(), p.gens[tau].clone(), 0, &cols);
            p.res.insert((tau, xi), pm);
        }
        reset_cofacets(&mut p, tau);
    }
    let phi: Vec<GradedMap> = (0..nf).map(|f| m.stalks[f].evaluation(&p.shape(f), &imgs[f])).collect::<Result<_>>()?;
    check_strong_surjection(m, &p, &phi)?;
    Ok((p, phi))
}

/// Surjective on every stalk and on relative sections `M(τ, ∂τ)`.
fn check_strong_surjection(m: &QuiverSheaf, p: &LfSheaf, phi: &[GradedMap]) -> Result<()> {
    let pq = p.to_quiver(m.lo, m.hi);
    for tau in 0..m.fan.num_faces() {
        let rel_p = pq.relative_sections(tau)?;
        let rel_m = m.relative_sections(tau)?;
        for g in m.lo..=m.hi {
            let a = phi[tau].at(g);
            if a.rank() != m.stalks[tau].dim(g) {
                return Err(Error::RangeMismatch(format!("cover is not onto at {} in grade {g}", m.fan.label(tau))));
            }
            let img = a.mul(rel_p.embed_at(g));
            if !img.spans(rel_m.embed_at(g)) {
                return Err(Error::RangeMismatch(format!("cover misses relative sections at {}", m.fan.label(tau))));
            }
        }
    }
    Ok(())
}

/// Kernel of `φ: P → M` as a sheaf, with its inclusion into `P` per face and grade.
fn kernel_sheaf(m: &QuiverSheaf, p: &LfSheaf, phi: &[GradedMap]) -> Result<(QuiverSheaf, Vec<Vec<Mat>>)> {
    let (lo, hi) = (m.lo, m.hi);
    let pq = p.to_quiver(lo, hi);
    let mut stalks = Vec::new();
    let mut embeds = Vec::new();
    for f in 0..m.fan.num_faces() {
        let (k, e) = kernel_degreewise(&pq.stalks[f], &m.stalks[f], &phi[f])?;
        stalks.push(k);
        embeds.push(e);
    }
    let mut res = BTreeMap::new();
    for (&(b, a), map) in &pq.res {
        let mats = (lo..=hi)
            .map(|g| {
                let k = (g - lo) as usize;
                let img = map.at(g).mul(&embeds[b][k]);
                if img.cols() == 0 || embeds[a][k].cols() == 0 {
                    Mat::zeros(embeds[a][k].cols(), img.cols())
                } else {
                    embeds[a][k].solve(&img).expect("kernel is preserved by restriction")
                }
            })
            .collect();
        res.insert((b, a), GradedMap { lo, hi, mats });
    }
    Ok((QuiverSheaf { fan: m.fan.clone(), lo, hi, stalks, res }, embeds))
}

fn is_zero_quiver(m: &QuiverSheaf) -> bool {
    m.stalks.iter().all(|s| s.total_dim() == 0)
}

/// Iterates the cover construction on kernels until the kernel is locally free.
pub fn locally_free_cover(m: &QuiverSheaf) -> Result<Cover> {
    let fan = m.fan.clone();
    let nf = fan.num_faces();
    let mut complex = LfComplex { fan: fan.clone(), terms: BTreeMap::new(), diffs: BTreeMap::new() };
    if is_zero_quiver(m) {
        let aug = (0..nf).map(|_| GradedMap { lo: m.lo, hi: m.hi, mats: (m.lo..=m.hi).map(|_| Mat::zeros(0, 0)).collect() }).collect();
        return Ok(Cover { complex, aug });
    }
    if let Some((lf, evals)) = m.to_lf()? {
        complex.terms.insert(0, lf);
        return Ok(Cover { complex, aug: evals });
    }
    let (p0, phi0) = cover_step(m)?;
    complex.terms.insert(0, p0.clone());
    let aug = phi0.clone();
    let (mut cur_m, mut cur_p, mut cur_phi) = (m.clone(), p0, phi0);
    let mut deg = 0;
    loop {
        let (k, embeds) = kernel_sheaf(&cur_m, &cur_p, &cur_phi)?;
        if is_zero_quiver(&k) {
            break;
        }
        let (next_p, next_phi, last) = match k.to_lf()? {
            Some((lf, evals)) => (lf, evals, true),
            None => {
                let (np, nphi) = cover_step(&k)?;
                (np, nphi, false)
            }
        };
        let mut d = LfMap::zero(&next_p, &cur_p, 0);
        for f in 0..nf {
            let mut cols = Vec::new();
            for (j, &g) in next_p.gens[f].iter().enumerate() {
                let e = unit(next_p.shape(f).dim(g), next_p.shape(f).offsets(g)[j]);
                let v = next_phi[f].at(g).mul_vec(&e);
                cols.push(embeds[f][(g - m.lo) as usize].mul_vec(&v));
            }
            d.comps[f] = PolyMat::from_columns(fan.dim(f), cur_p.gens[f].clone(), next_p.gens[f].clone(), 0, &cols);
        }
        deg -= 1;
        complex.terms.insert(deg, next_p.clone());
        complex.diffs.insert(deg, d);
        if last {
            break;
        }
        if -deg > (nf + fan.ambient_rank + 2) as i64 {
            return Err(Error::RangeMismatch("cover construction does not terminate".into()));
        }
        cur_m = k;
        cur_p = next_p;
        cur_phi = next_phi;
    }
    Ok(Cover { complex, aug })
}

impl Cover {
    /// Exactness of `P^• → M → 0` on every stalk in the stored range of `M`.
    pub fn is_resolution(&self, m: &QuiverSheaf) -> bool {
        let x = &self.complex;
        for f in 0..m.fan.num_faces() {
            for g in m.lo..=m.hi {
                let dm = m.stalks[f].dim(g);
                let a = self.aug[f].at(g);
                let ra = if dm == 0 { 0 } else { a.rank() };
                if ra != dm {
                    return false;
                }
                if let Some(d) = x.diffs.get(&-1) {
                    if !a.mul(&d.at_grade(f, g)).is_zero() {
                        return false;
                    }
                }
                let Some((lo, _)) = x.range() else { return dm == 0 };
                for i in lo..=0 {
                    let dim = x.term(i).shape(f).dim(g);
                    let out = if i == 0 { ra } else { x.d(i).at_grade(f, g).rank() };
                    let inc = x.d(i - 1).at_grade(f, g).rank();
                    if dim != out + inc {
                        return false;
                    }
                }
            }
        }
        true
    }
}
