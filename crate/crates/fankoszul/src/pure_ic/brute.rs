//! Degreewise brute force for the minimal generators of `Γ(∂τ, ℒ^o)` when every face of `∂τ`
//! is simplicial. There `ℒ^o = 𝒜{n}`, and sections over `∂τ` form the face ring of the
//! boundary complex: a basis in degree `d` is given by monomials of degree `d` in the rays
//! whose support spans a face of `∂τ`. The ambient linear functions act by `ℓ = Σ_r ℓ(r) x_r`.

use std::collections::BTreeMap;

use crate::fan_core::{FaceId, Fan};
use crate::graded_linalg::{q, Mat, Q};
use crate::{Error, Result};

type Monomial = Vec<u32>;

fn monomials(nrays: usize, d: u32) -> Vec<Monomial> {
    if nrays == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for e in (0..=d).rev() {
        for mut rest in monomials(nrays - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Degree-`d` basis of the face ring of `∂τ`, in the ambient ray numbering.
fn basis(fan: &Fan, boundary: &[FaceId], rays: &[usize], d: u32) -> Vec<Monomial> {
    let faces: Vec<Vec<usize>> = boundary.iter().map(|&f| fan.face(f).ray_indices.clone()).collect();
    monomials(rays.len(), d)
        .into_iter()
        .filter(|m| {
            let support: Vec<usize> = rays.iter().zip(m).filter(|(_, &e)| e > 0).map(|(&r, _)| r).collect();
            faces.iter().any(|f| support.iter().all(|r| f.contains(r)))
        })
        .collect()
}

/// Grades of the minimal generators of `Γ(∂τ, ℒ^o)`, up to polynomial degree `max_deg`.
pub fn boundary_generators_brute(fan: &Fan, tau: FaceId, max_deg: u32) -> Result<Vec<i64>> {
    let boundary = fan.boundary(tau);
    for &f in &boundary {
        if fan.face(f).ray_indices.len() != fan.dim(f) {
            return Err(Error::NotPure(format!("face {} is not simplicial", fan.label(f))));
        }
    }
    let rays = fan.face(tau).ray_indices.clone();
    let n = fan.ambient_rank as i64;
    let mut out = Vec::new();
    let mut prev: Vec<Monomial> = Vec::new();
    for d in 0..=max_deg {
        let cur = basis(fan, &boundary, &rays, d);
        let index: BTreeMap<&Monomial, usize> = cur.iter().enumerate().map(|(k, m)| (m, k)).collect();
        // images of x_i · m for the coordinate functions x_i
        let mut cols: Vec<Vec<Q>> = Vec::new();
        for m in &prev {
            for i in 0..fan.ambient_rank {
                let mut v = vec![q(0); cur.len()];
                for (k, &r) in rays.iter().enumerate() {
                    let c = fan.rays[r][i];
                    if c == 0 {
                        continue;
                    }
                    let mut up = m.clone();
                    up[k] += 1;
                    if let Some(&j) = index.get(&up) {
                        v[j] += q(c);
                    }
                }
                cols.push(v);
            }
        }
        let rank = if cols.is_empty() || cur.is_empty() { 0 } else { Mat::from_cols(cur.len(), &cols).rank() };
        for _ in rank..cur.len() {
            out.push(2 * d as i64 - n);
        }
        prev = cur;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn square_cone_boundary() {
        let fan = fixtures::fx2();
        let top = fan.top().unwrap();
        assert_eq!(boundary_generators_brute(&fan, top, 6).unwrap(), vec![-3, -1]);
    }

    #[test]
    fn simplicial_boundary_is_free_of_rank_one() {
        let fan = fixtures::fx1();
        let top = fan.top().unwrap();
        assert_eq!(boundary_generators_brute(&fan, top, 5).unwrap(), vec![-2]);
    }
}
