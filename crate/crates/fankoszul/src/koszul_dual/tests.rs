use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures;
use crate::graded_linalg::poly::grade_dim;
use crate::homotopy_cat::{derived_hom, kb_hom, random_complex, simple};
use crate::sheaf_quiver::LfSheaf;

const WIDTH: i64 = 8;

fn table_dims(fan: &Arc<Fan>, y: &Complex) -> Vec<(FaceId, i64, i64, usize)> {
    let mut out = Vec::new();
    for (rho, cells) in cohomology_table(fan, y, WIDTH).unwrap() {
        for c in cells {
            out.push((rho, c.degree, c.grade, c.dim));
        }
    }
    out
}

/// Dimensions of `𝒜*` restricted to `keep`, placed in degree `deg`, on the window of `y`.
fn expected_dims(fan: &Arc<Fan>, y: &Complex, deg: i64, keep: impl Fn(FaceId) -> bool) -> Vec<(FaceId, i64, i64, usize)> {
    let (lo, hi) = grade_window(y, WIDTH).unwrap();
    let mut out = Vec::new();
    for rho in 0..fan.num_faces() {
        if !keep(rho) {
            continue;
        }
        for g in lo..=hi {
            let d = grade_dim(fan.dim(rho), -g);
            if d > 0 {
                out.push((rho, deg, g, d));
            }
        }
    }
    out
}

#[test]
fn kernel_diagram_commutes() {
    for (_, f) in fixtures::all() {
        let fan = Arc::new(f);
        let k = kernel_diagram(&fan).unwrap();
        assert!(k.is_functorial().unwrap());
        assert_eq!(k.labels[fan.zero_cone()], vec![Label::new(fan.zero_cone(), 0)]);
    }
}

#[test]
fn kernel_diagram_on_the_quadrant() {
    let fan = Arc::new(fixtures::fx1());
    let c = cellular_complex(&kernel_diagram(&fan).unwrap()).unwrap();
    assert_eq!(c.range(), Some((-2, 0)));
    // κ(𝒜) = 𝒜*_{σ}[2]: only the stalk at the top face survives
    let top = fan.top().unwrap();
    assert_eq!(table_dims(&fan, &c), expected_dims(&fan, &c, -2, |r| r == top));
}

#[test]
fn constant_diagrams_are_acyclic() {
    for (name, f) in fixtures::all() {
        let fan = Arc::new(f);
        let o = fan.zero_cone();
        for xi in 0..fan.num_faces() {
            for eta in 0..fan.num_faces() {
                if !fan.leq(xi, eta) {
                    continue;
                }
                let c = cellular_complex(&constant_diagram(&fan, xi, eta).unwrap()).unwrap();
                let h = realized_cohomology(&fan, &stalk_complex(&fan, &c, o).unwrap(), -2, 2);
                if xi == eta {
                    assert_eq!(c.labels().len(), 1);
                    assert_eq!(h.len(), 1, "{name}");
                } else {
                    assert!(h.is_empty(), "{name}: {xi} < {eta}");
                }
            }
        }
    }
}

#[test]
fn kappa_of_standard_sheaves() {
    for (name, f) in [("fx1", fixtures::fx1()), ("fx3", fixtures::fx3())] {
        let fan = Arc::new(f);
        for tau in 0..fan.num_faces() {
            let d = -(fan.dim(tau) as i64);
            let point = kappa(&LfComplex::single(&LfSheaf::point_face(&fan, tau), 0)).unwrap();
            assert_eq!(point, Complex::single(d, vec![Label::new(tau, 0)]), "{name}");
            assert_eq!(table_dims(&fan, &point), expected_dims(&fan, &point, d, |r| fan.leq(r, tau)));
            let closed = kappa(&LfComplex::single(&LfSheaf::closed_face(&fan, tau), 0)).unwrap();
            assert_eq!(table_dims(&fan, &closed), expected_dims(&fan, &closed, d, |r| r == tau), "{name}");
        }
    }
}

#[test]
fn kappa_commutes_with_shifts_and_twists() {
    let fan = Arc::new(fixtures::fx1());
    let ctx = PureCtx::new(&fan);
    let cat = CoCat::new(&fan);
    let faces: Vec<usize> = (0..fan.num_faces()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..4 {
        let x = random_complex(&ctx, &mut rng, &faces, -1, 1, 2, 1).unwrap();
        let kx = koszul_k_pure(&ctx, &x).unwrap();
        assert_eq!(koszul_k_pure(&ctx, &x.twist(3)).unwrap(), kx.twist(3));
        // K(X⟨1⟩) ≅ K(X)⟨-1⟩[1], with ⟨-1⟩ = {-1} on the co-module side
        let lhs = koszul_k_pure(&ctx, &x.tate(1)).unwrap();
        let rhs = kx.twist(-1).shift(1);
        assert_eq!(lhs.terms, rhs.terms);
        let iso = shift_comparison(&fan, &lhs).unwrap();
        assert!(iso.is_chain_map(&cat, &lhs, &rhs).unwrap());
    }
    assert!(koszul_k(&LfComplex::single(&LfSheaf::zero(&fan), 0)).unwrap().is_zero());
}

#[test]
fn homs_between_standard_objects() {
    let fan = Arc::new(fixtures::fx1());
    let s2 = fan.top().unwrap();
    let a = kappa(&LfComplex::single(&LfSheaf::closed_face(&fan, s2), 0)).unwrap();
    let j = kappa(&LfComplex::single(&LfSheaf::point_face(&fan, s2), 0)).unwrap();
    assert_eq!(co_hom(&fan, &a, &j, 2).unwrap(), 2);
    assert_eq!(co_hom(&fan, &a, &j, 0).unwrap(), 1);
    assert_eq!(co_hom(&fan, &a, &j, -2).unwrap(), 0);
}

#[test]
fn kappa_is_fully_faithful_on_standard_objects() {
    let fan = Arc::new(fixtures::fx3());
    let ctx = PureCtx::new(&fan);
    for tau in 0..fan.num_faces() {
        for xi in 0..fan.num_faces() {
            let x = LfComplex::single(&LfSheaf::closed_face(&fan, tau), 0);
            let y = LfComplex::single(&LfSheaf::point_face(&fan, xi), 0);
            let (kx, ky) = (kappa(&x).unwrap(), kappa(&y).unwrap());
            for n in -2..=2 {
                let expect = if tau == xi { grade_dim(fan.dim(tau), n) } else { 0 };
                assert_eq!(co_hom(&fan, &kx, &ky, n).unwrap(), expect, "{tau} {xi} {n}");
                assert_eq!(derived_hom(&ctx, &x, &y, n).unwrap(), expect, "{tau} {xi} {n}");
            }
        }
    }
}

#[test]
fn kappa_matches_homs_of_simples() {
    let fan = Arc::new(fixtures::fx3());
    let ctx = PureCtx::new(&fan);
    for s in 0..fan.num_faces() {
        for t in 0..fan.num_faces() {
            let (ks, kt) = (kappa_pure(&ctx, &simple(s, 0)).unwrap(), kappa_pure(&ctx, &simple(t, 0)).unwrap());
            for n in -1..=2 {
                let expect = kb_hom(&ctx, &simple(s, 0), &simple(t, 0), n).unwrap().dim;
                assert_eq!(co_hom(&fan, &ks, &kt, n).unwrap(), expect, "{s} {t} {n}");
            }
        }
    }
}

#[test]
fn locally_free_input_is_perverse() {
    for (name, f) in fixtures::all() {
        let fan = Arc::new(f);
        let a = kappa(&LfComplex::single(&LfSheaf::structure_sheaf(&fan), 0)).unwrap();
        assert!(respects_cellular_grading(&fan, &a));
        assert!(check_perversity(&fan, &a, WIDTH).unwrap().pass, "{name}");
        let top = fan.top().unwrap();
        let p = kappa(&LfComplex::single(&LfSheaf::point_face(&fan, top), 0)).unwrap();
        let bad = check_perversity(&fan, &p.shift(-1), WIDTH).unwrap();
        assert!(!bad.pass);
        assert!(bad.rows.iter().any(|r| !r.stalk_ok));
        let bad = check_perversity(&fan, &p.shift(1), WIDTH).unwrap();
        assert!(bad.rows.iter().any(|r| !r.costalk_ok));
    }
}

#[test]
fn injectives_are_perverse() {
    for (name, f) in fixtures::all() {
        let fan = Arc::new(f);
        let ctx = PureCtx::new(&fan);
        for s in 0..fan.num_faces() {
            let y = injective(&ctx, s).unwrap();
            assert!(check_perversity(&fan, &y, WIDTH).unwrap().pass, "{name} {s}");
        }
    }
}

#[test]
fn purity_weight_follows_shifts() {
    let fan = Arc::new(fixtures::fx3());
    let ctx = PureCtx::new(&fan);
    let y = injective(&ctx, 0).unwrap();
    for k in -2..=2 {
        let a = check_purity(&fan, &y.shift(-k), 0, WIDTH).unwrap();
        let b = check_purity(&fan, &y, k, WIDTH).unwrap();
        assert_eq!(a.pass, b.pass);
        let key = |r: &PurityRow, d: i64| (r.face.clone(), r.kind, r.degree - d, r.expected_grade, r.pass);
        let ka: Vec<_> = a.rows.iter().map(|r| key(r, k)).collect();
        let kb: Vec<_> = b.rows.iter().map(|r| key(r, 0)).collect();
        assert_eq!(ka, kb);
    }
}

#[test]
fn point_at_the_closed_orbit_is_pure() {
    // J_o in degree 0 is the skyscraper at the fixed point of the dual variety
    let fan = Arc::new(fixtures::fx1());
    let y = Complex::single(0, vec![Label::new(fan.zero_cone(), 0)]);
    let p = check_purity(&fan, &y, 0, WIDTH).unwrap();
    assert!(p.pass);
    assert!(!check_purity(&fan, &y, 1, WIDTH).unwrap().pass);
}

#[test]
fn no_negative_endomorphisms_of_injectives() {
    for f in [fixtures::fx1(), fixtures::fx3()] {
        let fan = Arc::new(f);
        let ctx = PureCtx::new(&fan);
        for s in 0..fan.num_faces() {
            let y = injective(&ctx, s).unwrap();
            assert_eq!(co_hom(&fan, &y, &y, -1).unwrap(), 0);
            assert_eq!(co_hom(&fan, &y, &y, 0).unwrap(), 1);
        }
    }
}
