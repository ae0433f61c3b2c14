//! Moving between label complexes of pure sheaves and their sheaf realizations.

use std::collections::BTreeMap;

use crate::pure_ic::PureCtx;
use crate::sheaf_quiver::{LfMap, LfSheaf};
use crate::{Error, Result};

use super::blocks::{BlockMat, Label};
use super::complex::{ChainMap, Complex};
use super::lfcomplex::{LfChainMap, LfComplex};

/// `⊕ ℒ^{face}{shift}` over the labels.
pub fn realize_term(ctx: &PureCtx, labels: &[Label]) -> Result<LfSheaf> {
    if labels.is_empty() {
        return Ok(LfSheaf::zero(&ctx.fan));
    }
    let parts: Vec<LfSheaf> = labels.iter().map(|l| Ok(ctx.ic(l.face)?.shift(l.shift))).collect::<Result<_>>()?;
    Ok(LfSheaf::direct_sum(&parts))
}

/// Generator index ranges of each summand on every face.
fn ranges(ctx: &PureCtx, labels: &[Label]) -> Result<Vec<Vec<std::ops::Range<usize>>>> {
    let nf = ctx.fan.num_faces();
    let mut out = vec![Vec::with_capacity(labels.len()); nf];
    for f in 0..nf {
        let mut acc = 0;
        for l in labels {
            let n = ctx.ic(l.face)?.gens[f].len();
            out[f].push(acc..acc + n);
            acc += n;
        }
    }
    Ok(out)
}

pub fn realize_map(ctx: &PureCtx, m: &BlockMat) -> Result<LfMap> {
    let src = realize_term(ctx, &m.cols)?;
    let dst = realize_term(ctx, &m.rows)?;
    let mut out = LfMap::zero(&src, &dst, 0);
    let (rr, cr) = (ranges(ctx, &m.rows)?, ranges(ctx, &m.cols)?);
    for (r, rl) in m.rows.iter().enumerate() {
        for (c, cl) in m.cols.iter().enumerate() {
            let coords = m.get(r, c);
            if coords.iter().all(num_traits::Zero::is_zero) {
                continue;
            }
            let h = ctx.hom(cl.face, rl.face, rl.shift - cl.shift)?;
            let f = h.combine(coords).shift_grades(cl.shift);
            for t in 0..ctx.fan.num_faces() {
                let rows: Vec<usize> = rr[t][r].clone().collect();
                let cols: Vec<usize> = cr[t][c].clone().collect();
                if rows.is_empty() || cols.is_empty() {
                    continue;
                }
                let mut block = f.comps[t].clone();
                // move the twist `shift_r - shift_c` from the map into the target generators
                let k = block.shift;
                block.dst.iter_mut().for_each(|x| *x -= k);
                block.shift = 0;
                out.comps[t].place(&rows, &cols, &block);
            }
        }
    }
    Ok(out)
}

/// Reads a shift-zero map between realized sums back into label coordinates.
pub fn block_from_lf(ctx: &PureCtx, rows: &[Label], cols: &[Label], map: &LfMap) -> Result<BlockMat> {
    let mut out = BlockMat::zero(ctx, rows, cols)?;
    let (rr, cr) = (ranges(ctx, rows)?, ranges(ctx, cols)?);
    for (r, rl) in rows.iter().enumerate() {
        for (c, cl) in cols.iter().enumerate() {
            let k = rl.shift - cl.shift;
            let h = ctx.hom(cl.face, rl.face, k)?;
            let mut sub = h.template.clone();
            for t in 0..ctx.fan.num_faces() {
                let rows: Vec<usize> = rr[t][r].clone().collect();
                let cols: Vec<usize> = cr[t][c].clone().collect();
                let mut block = map.comps[t].select(&rows, &cols);
                block.src.iter_mut().for_each(|x| *x += cl.shift);
                block.dst.iter_mut().for_each(|x| *x += rl.shift);
                block.shift = k;
                sub.comps[t] = block;
            }
            let x = h.coords(&sub).ok_or_else(|| Error::RangeMismatch("block is not a morphism of pure sheaves".into()))?;
            out.set(r, c, x);
        }
    }
    Ok(out)
}

pub fn realize(ctx: &PureCtx, x: &Complex) -> Result<LfComplex> {
    let mut terms = BTreeMap::new();
    for (&i, t) in &x.terms {
        terms.insert(i, realize_term(ctx, t)?);
    }
    let mut diffs = BTreeMap::new();
    for (&i, d) in &x.diffs {
        diffs.insert(i, realize_map(ctx, d)?);
    }
    Ok(LfComplex { fan: ctx.fan.clone(), terms, diffs })
}

pub fn realize_chain_map(ctx: &PureCtx, f: &ChainMap) -> Result<LfChainMap> {
    let mut comps = BTreeMap::new();
    for (&i, m) in &f.comps {
        comps.insert(i, realize_map(ctx, m)?);
    }
    Ok(LfChainMap { comps })
}

/// Rewrites a complex of pure sheaves in label form, decomposing each term.
pub fn to_pure_complex(ctx: &PureCtx, x: &LfComplex) -> Result<(Complex, LfChainMap)> {
    let mut out = Complex::default();
    let mut decs = BTreeMap::new();
    for (&i, t) in &x.terms {
        if t.is_zero() {
            continue;
        }
        let dec = ctx.decompose(t)?;
        out.terms.insert(i, dec.labels.iter().map(|&(f, s)| Label::new(f, s)).collect());
        decs.insert(i, dec);
    }
    for (&i, d) in &x.diffs {
        let (Some(a), Some(b)) = (decs.get(&i), decs.get(&(i + 1))) else { continue };
        let m = b.inverse.compose(&d.compose(&a.iso));
        out.diffs.insert(i, block_from_lf(ctx, &out.terms[&(i + 1)], &out.terms[&i], &m)?);
    }
    // the realized sums agree with `dec.sum`, so `iso` gives the comparison map
    let comps = decs.into_iter().map(|(i, d)| (i, d.iso)).collect();
    Ok((out.normalize(), LfChainMap { comps }))
}
