use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fixtures;
use crate::graded_linalg::q;
use crate::pure_ic::PureCtx;
use crate::sheaf_quiver::LfSheaf;

fn ctx(f: crate::Fan) -> PureCtx {
    PureCtx::new(&Arc::new(f))
}

fn one_map(ctx: &PureCtx, a: Label, b: Label) -> BlockMat {
    let mut m = BlockMat::zero(ctx, &[b], &[a]).unwrap();
    let n = m.get(0, 0).len();
    assert!(n > 0, "no map {a:?} -> {b:?}");
    let mut v = vec![q(0); n];
    v[0] = q(1);
    m.set(0, 0, v);
    m
}

/// `a → b` in degrees `i, i+1`.
fn two_term(ctx: &PureCtx, a: Label, b: Label, i: i64) -> Complex {
    let mut x = Complex::default();
    x.terms.insert(i, vec![a]);
    x.terms.insert(i + 1, vec![b]);
    x.set_d(i, one_map(ctx, a, b));
    x
}

#[test]
fn endomorphisms_of_simples() {
    let c = ctx(fixtures::fx1());
    for s in 0..c.fan.num_faces() {
        let h = kb_hom(&c, &simple(s, 0), &simple(s, 0), 0).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(kb_hom(&c, &simple(s, 0), &simple(s, 0), -2).unwrap().dim, 0);
    }
}

#[test]
fn maps_from_acyclic_complexes_vanish() {
    let c = ctx(fixtures::fx1());
    let l = Label::new(1, 0);
    let x = two_term(&c, l, l, 0);
    assert!(x.is_complex(&c).unwrap());
    for s in 0..c.fan.num_faces() {
        for n in -2..=2 {
            for deg in -1..=1 {
                let y = simple(s, 0).shift(deg);
                assert_eq!(kb_hom(&c, &x, &y, n).unwrap().dim, 0);
            }
        }
    }
    assert!(minimize(&c, &x).unwrap().is_zero());
}

#[test]
fn structure_sheaf_has_no_maps_to_shifts() {
    let c = ctx(fixtures::fx1());
    let a = simple(0, -2);
    assert_eq!(realize_term(&c, &[Label::new(0, -2)]).unwrap(), LfSheaf::structure_sheaf(&c.fan));
    for i in -3..=3 {
        let d = kb_hom(&c, &a, &simple(0, 0).shift(i), 0).unwrap().dim;
        if i != 0 {
            assert_eq!(d, 0);
        }
    }
}

#[test]
fn tate_twist_keeps_heart() {
    let c = ctx(fixtures::fx1());
    let s2 = c.fan.find(&[0, 1]).unwrap();
    let x = two_term(&c, Label::new(1, 0), Label::new(s2, 1), 0);
    assert!(heart_normal_form(&c, &x).is_ok());
    assert_eq!(x.tate(0), x);
    assert!(heart_normal_form(&c, &x.tate(1)).is_ok());
    assert!(matches!(heart_normal_form(&c, &x.shift(1)), Err(crate::Error::NotInHeart(_))));
}

#[test]
fn truncation_of_heart_objects() {
    let c = ctx(fixtures::fx1());
    let s2 = c.fan.find(&[0, 1]).unwrap();
    let x = two_term(&c, Label::new(1, 0), Label::new(s2, 1), 0);
    let t = truncate(&c, &x).unwrap();
    assert_eq!(t.e, x);
    assert!(t.n.is_zero());
    let t = truncate(&c, &x.shift(-1)).unwrap();
    assert!(t.e.is_zero());
    assert_eq!(t.n, x.shift(-1));
}

#[test]
fn truncation_recovers_perverse_cohomology() {
    let c = ctx(fixtures::fx1());
    let s2 = c.fan.find(&[0, 1]).unwrap();
    // cone of a map ℒ^o → ℒ^{σ2}{2}, plus a contractible summand straddling the cut
    let cone = two_term(&c, Label::new(0, 0), Label::new(s2, 2), -1);
    let r1 = Label::new(1, 0);
    let x = cone.direct_sum(&two_term(&c, r1, r1, 0), &c).unwrap();
    assert!(x.is_complex(&c).unwrap());
    let t = truncate(&c, &x).unwrap();
    assert!(t.iota.is_chain_map(&c, &t.e, &x).unwrap());
    assert!(t.pi.is_chain_map(&c, &x, &t.n).unwrap());
    assert!(in_le0(&c, &t.e).unwrap());
    assert!(in_ge1(&c, &t.n).unwrap());
    assert!(minimize(&c, &t.n).unwrap().is_zero());
    let ph = perverse_cohomology(&c, &x).unwrap();
    let keys: Vec<i64> = ph.keys().copied().collect();
    assert_eq!(keys, vec![-2, -1]);
    assert_eq!(ph[&-1].complex, simple(0, 0));
    assert_eq!(ph[&-2].complex, Complex::single(2, vec![Label::new(s2, 2)]));
    // the diagonal label count of the minimal complex gives the same answer
    let m = minimize(&c, &x).unwrap();
    for (k, h) in &ph {
        let direct: Vec<usize> = m.labels().iter().filter(|l| l.shift - l.degree == -k).map(|l| l.face).collect();
        let got: Vec<usize> = h.complex.labels().iter().map(|l| l.face).collect();
        assert_eq!(direct, got);
    }
}

#[test]
fn heart_normal_form_drops_split_summands() {
    let c = ctx(fixtures::fx1());
    let s2 = c.fan.find(&[0, 1]).unwrap();
    let x = two_term(&c, Label::new(1, 0), Label::new(s2, 1), 0);
    let l = Label::new(s2, 1);
    let y = x.direct_sum(&two_term(&c, l, l, 0), &c).unwrap();
    let h = heart_normal_form(&c, &y).unwrap();
    assert_eq!(h.complex, x);
    assert_eq!(homotopy_ambiguity(&c, &h.complex, &h.complex).unwrap(), 0);
}

#[test]
fn weight_filtration_of_two_terms() {
    let c = ctx(fixtures::fx1());
    let s2 = c.fan.find(&[0, 1]).unwrap();
    let p = heart_normal_form(&c, &two_term(&c, Label::new(1, -1), Label::new(s2, 0), -1)).unwrap();
    let w = weight_filtration(&p);
    let weights: Vec<i64> = w.graded.iter().map(|g| g.weight).collect();
    assert_eq!(weights, vec![0, 1]);
    assert!(w.filtration[&-1].is_zero());
    assert_eq!(w.filtration[&1], p.complex);
    let p1 = HeartObject { complex: p.complex.tate(1) };
    let w1 = weight_filtration(&p1);
    let shifted: Vec<i64> = w1.graded.iter().map(|g| g.weight).collect();
    assert_eq!(shifted, vec![1, 2]);
    let single = weight_filtration(&HeartObject { complex: simple(2, 0) });
    assert!(single.filtration[&-1].is_zero());
    assert_eq!(single.filtration[&0], simple(2, 0));
}

#[test]
fn realization_round_trip() {
    let c = ctx(fixtures::fx1());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let faces: Vec<usize> = (0..c.fan.num_faces()).collect();
    for _ in 0..4 {
        let x = random_complex(&c, &mut rng, &faces, -1, 1, 2, 1).unwrap();
        assert!(x.is_complex(&c).unwrap());
        let r = realize(&c, &x).unwrap();
        assert!(r.is_complex());
        let (back, iso) = to_pure_complex(&c, &r).unwrap();
        assert_eq!(back.labels().len(), x.labels().len());
        assert!(iso.is_chain_map(&realize(&c, &back).unwrap(), &r));
    }
}

#[test]
fn hull_of_point_sheaf_on_a_ray() {
    let fan = Arc::new(fixtures::fx3());
    let c = PureCtx::new(&fan);
    let sky = skyscraper(&fan, 0, 0, 12);
    let cover = locally_free_cover(&sky).unwrap();
    assert_eq!(cover.complex.terms.len(), 1);
    assert!(cover.is_resolution(&sky));
    let h = flabby_hull(&cover.complex, c.cutoff).unwrap();
    let (lo, hi) = h.complex.window(c.cutoff);
    assert!(h.phi.is_quasi_iso(&cover.complex, &h.complex, lo, hi));
    let (x, _) = to_pure_complex(&c, &h.complex).unwrap();
    // 𝒜 = ℒ^o{-1} onto the skyscraper 𝒜_σ = ℒ^σ
    let expect = two_term(&c, Label::new(0, -1), Label::new(1, 0), 0);
    let labels: Vec<(i64, usize, i64)> = x.labels().iter().map(|l| (l.degree, l.face, l.shift)).collect();
    let expect_labels: Vec<(i64, usize, i64)> = expect.labels().iter().map(|l| (l.degree, l.face, l.shift)).collect();
    assert_eq!(labels, expect_labels);
}

#[test]
fn koszul_resolution_of_point_at_the_ray() {
    let fan = Arc::new(fixtures::fx3());
    let c = PureCtx::new(&fan);
    let sky = skyscraper(&fan, 1, 0, 12);
    let cover = locally_free_cover(&sky).unwrap();
    assert!(cover.is_resolution(&sky));
    assert_eq!(cover.complex.range(), Some((-1, 0)));
    assert_eq!(cover.complex.term(0).gens, vec![vec![], vec![0]]);
    assert_eq!(cover.complex.term(-1).gens, vec![vec![], vec![2]]);
    let h = flabby_hull(&cover.complex, c.cutoff).unwrap();
    let (lo, hi) = h.complex.window(c.cutoff);
    assert!(h.phi.is_quasi_iso(&cover.complex, &h.complex, lo, hi));
    let (x, _) = to_pure_complex(&c, &h.complex).unwrap();
    assert!(x.is_complex(&c).unwrap());
}

#[test]
fn hull_of_structure_sheaf_on_square_cone() {
    let fan = Arc::new(fixtures::fx2());
    let c = PureCtx::new(&fan);
    let a = LfSheaf::structure_sheaf(&fan);
    let p = LfComplex::single(&a, 0);
    let h = flabby_hull(&p, c.cutoff).unwrap();
    let (lo, hi) = h.complex.window(c.cutoff);
    assert!(h.phi.is_quasi_iso(&p, &h.complex, lo, hi));
    assert!(h.complex.range().unwrap().1 >= 1, "𝒜 is not flabby on this fan");
    let (x, _) = to_pure_complex(&c, &h.complex).unwrap();
    assert!(x.is_complex(&c).unwrap());
}

#[test]
fn pure_input_is_its_own_hull() {
    let fan = Arc::new(fixtures::fx1());
    let c = PureCtx::new(&fan);
    let l = c.ic(1).unwrap();
    let h = pure_hull(&l, c.cutoff).unwrap();
    assert_eq!(h.sheaf, *l);
    assert!(flabby_hull(&LfComplex { fan: fan.clone(), terms: Default::default(), diffs: Default::default() }, 8)
        .unwrap()
        .complex
        .terms
        .is_empty());
}

#[test]
fn random_truncations_are_orthogonal() {
    for (name, fan) in [("fx1", fixtures::fx1()), ("fx3", fixtures::fx3())] {
        let c = ctx(fan);
        let faces: Vec<usize> = (0..c.fan.num_faces()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let x = random_complex(&c, &mut rng, &faces, -1, 1, 2, 1).unwrap();
            let t = truncate(&c, &x).unwrap();
            assert!(in_le0(&c, &t.e).unwrap(), "{name}");
            assert!(in_ge1(&c, &t.n).unwrap(), "{name}");
            assert_eq!(homotopy_hom(&c, &t.e, &t.n).unwrap().dim, 0, "{name}");
            assert_eq!(homotopy_hom(&c, &t.e, &t.n.shift(-1)).unwrap().dim, 0, "{name}");
        }
    }
}
