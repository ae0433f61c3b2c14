//! Seeded random complexes for property tests.

use rand::Rng;

use crate::fan_core::FaceId;
use crate::graded_linalg::poly::{grade_dim, PolyMat};
use crate::graded_linalg::{q, Mat};
use crate::sheaf_quiver::LfSheaf;
use crate::Result;

use super::blocks::{Additive, BlockMat, Label};
use super::complex::Complex;

/// Terms in degrees `lo..=hi` with up to `max_terms` labels each, shifts within `spread` of
/// the degree; each differential is a random element of `{d : d ∘ d_prev = 0}`.
pub fn random_complex(
    cat: &dyn Additive,
    rng: &mut impl Rng,
    faces: &[FaceId],
    lo: i64,
    hi: i64,
    max_terms: usize,
    spread: i64,
) -> Result<Complex> {
    let mut x = Complex::default();
    for i in lo..=hi {
        let n = rng.random_range(0..=max_terms);
        let labels: Vec<Label> =
            (0..n).map(|_| Label::new(faces[rng.random_range(0..faces.len())], i + rng.random_range(-spread..=spread))).collect();
        x.terms.insert(i, labels);
    }
    for i in lo..hi {
        let template = BlockMat::zero(cat, x.term(i + 1), x.term(i))?;
        let n = template.num_coeffs();
        if n == 0 {
            continue;
        }
        let prev = x.d(cat, i - 1)?;
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut e = vec![q(0); n];
            e[k] = q(1);
            cols.push(BlockMat::from_flat(&template, &e).compose(cat, &prev)?.flatten());
        }
        let rows = cols.first().map_or(0, |c| c.len());
        let space = if rows == 0 { Mat::identity(n) } else { Mat::from_cols(rows, &cols).kernel() };
        let mut v = vec![q(0); n];
        for c in 0..space.cols() {
            let s = q(rng.random_range(-2..=2));
            for (vk, bk) in v.iter_mut().zip(space.col(c)) {
                *vk += &s * bk;
            }
        }
        x.set_d(i, BlockMat::from_flat(&template, &v));
    }
    Ok(x.normalize())
}

/// A random automorphism of every stalk of `m`: random constants between generators of equal
/// grade, random polynomials from lower to higher grades. Retries until invertible.
pub fn random_stalk_automorphisms(m: &LfSheaf, rng: &mut impl Rng) -> Vec<PolyMat> {
    let fan = &m.fan;
    (0..fan.num_faces())
        .map(|t| loop {
            let gens = m.gens[t].clone();
            let mut g = PolyMat::zero(fan.dim(t), gens.clone(), gens.clone(), 0);
            for i in 0..gens.len() {
                for j in 0..gens.len() {
                    let Some(d) = g.entry_deg(i, j) else { continue };
                    let c = (0..grade_dim(fan.dim(t), 2 * d as i64)).map(|_| q(rng.random_range(-2..=2))).collect();
                    g.set(i, j, c);
                }
            }
            if g.inverse().is_some() {
                break g;
            }
        })
        .collect()
}
