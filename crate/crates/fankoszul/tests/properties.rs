use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fankoszul::cli_reports::{parse_object, ObjectAtom, ObjectSpec};
use fankoszul::graded_linalg::{q, Q};
use fankoszul::homotopy_cat::{homotopy_hom, minimize, random_complex, random_stalk_automorphisms};
use fankoszul::koszul_dual::kappa;
use fankoszul::pure_ic::PureCtx;
use fankoszul::ring_side::{end_ring_r, GradedRing};
use fankoszul::sheaf_quiver::LfSheaf;
use fankoszul::{fixtures, FaceId};

fn ctx(which: usize) -> &'static PureCtx {
    static CTX: OnceLock<Vec<PureCtx>> = OnceLock::new();
    &CTX.get_or_init(|| [fixtures::fx1(), fixtures::fx2(), fixtures::fx3()].into_iter().map(|f| PureCtx::new(&Arc::new(f))).collect())
        [which]
}

fn ring() -> &'static GradedRing {
    static R: OnceLock<GradedRing> = OnceLock::new();
    R.get_or_init(|| end_ring_r(ctx(0), 3).unwrap())
}

fn atom_text(ctx: &PureCtx, a: &ObjectAtom) -> String {
    let l = |f: FaceId| {
        let s = ctx.fan.label(f);
        if f == ctx.fan.zero_cone() {
            "o".to_string()
        } else {
            s.trim_start_matches('[').trim_end_matches(']').to_string()
        }
    };
    match a {
        ObjectAtom::Structure => "(A)".into(),
        ObjectAtom::Closed(t) => format!("A[{}]", l(*t)),
        ObjectAtom::Point(t) => format!("A{{{}}}", l(*t)),
        ObjectAtom::Ic(s) => format!("L<{}>", l(*s)),
    }
}

fn random_spec(ctx: &PureCtx, rng: &mut ChaCha8Rng, max: usize) -> ObjectSpec {
    let nf = ctx.fan.num_faces();
    let summands = (0..rng.random_range(1..=max))
        .map(|_| {
            let f = rng.random_range(0..nf);
            let atom = match rng.random_range(0..4) {
                0 => ObjectAtom::Structure,
                1 => ObjectAtom::Closed(f),
                2 => ObjectAtom::Point(f),
                _ => ObjectAtom::Ic(f),
            };
            (atom, rng.random_range(-2..=2), rng.random_range(-3..=3))
        })
        .collect();
    ObjectSpec { summands }
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| q(rng.random_range(-3..=3))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn object_specs_round_trip(which in 0usize..3, seed in any::<u64>()) {
        let ctx = ctx(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(ctx, &mut rng, 4);
        let text: Vec<String> = spec
            .summands
            .iter()
            .map(|(a, i, k)| format!("{}[{}]{{{}}}", atom_text(ctx, a), -i, k))
            .collect();
        let text = text.join(" + ");
        prop_assert_eq!(&parse_object(&ctx.fan, &text).unwrap(), &spec);
        let tate = parse_object(&ctx.fan, &format!("({text})<2>")).unwrap();
        let expect: Vec<_> = spec.summands.iter().map(|(a, i, k)| (a.clone(), i - 2, k - 2)).collect();
        prop_assert_eq!(tate.summands, expect);
    }

    #[test]
    fn scrambled_sums_decompose(which in 0usize..3, seed in any::<u64>()) {
        let ctx = ctx(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nf = ctx.fan.num_faces();
        let mut want: Vec<(FaceId, i64)> =
            (0..rng.random_range(1..=3)).map(|_| (rng.random_range(0..nf), rng.random_range(-2..=2))).collect();
        let parts: Vec<LfSheaf> = want.iter().map(|&(s, k)| ctx.ic(s).unwrap().shift(k)).collect();
        let m = LfSheaf::direct_sum(&parts);
        let g = random_stalk_automorphisms(&m, &mut rng);
        let (scrambled, iso) = m.change_basis(&g).unwrap();
        prop_assert!(iso.is_morphism(&m, &scrambled));
        want.sort();
        prop_assert_eq!(ctx.decompose(&scrambled).unwrap().sorted_labels(), want);
    }

    #[test]
    fn kappa_commutes_with_twists(which in prop_oneof![Just(0usize), Just(2usize)], seed in any::<u64>(), k in -3i64..=3) {
        let ctx = ctx(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_spec(ctx, &mut rng, 2).to_complex(ctx).unwrap();
        prop_assert_eq!(kappa(&x.twist(k)).unwrap(), kappa(&x).unwrap().twist(k));
    }

    #[test]
    fn homotopy_homs_are_stable(seed in any::<u64>(), n in -2i64..=2, k in -2i64..=2) {
        let ctx = ctx(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let faces: Vec<FaceId> = (0..ctx.fan.num_faces()).collect();
        let x = random_complex(ctx, &mut rng, &faces, 0, 2, 2, 1).unwrap();
        let y = random_complex(ctx, &mut rng, &faces, 0, 2, 2, 1).unwrap();
        let d = homotopy_hom(ctx, &x, &y).unwrap().dim;
        let moved = homotopy_hom(ctx, &x.shift(n).twist(k), &y.shift(n).twist(k)).unwrap().dim;
        prop_assert_eq!(d, moved);
        let m = minimize(ctx, &x).unwrap();
        prop_assert_eq!(homotopy_hom(ctx, &m, &y).unwrap().dim, d);
        prop_assert_eq!(homotopy_hom(ctx, &y, &m).unwrap().dim, homotopy_hom(ctx, &y, &x).unwrap().dim);
    }

    #[test]
    fn ring_products_are_associative_and_unital(seed in any::<u64>(), n in 0i64..=1, m in 0i64..=1, l in 0i64..=1) {
        let r = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (random_vec(&mut rng, r.dim(n)), random_vec(&mut rng, r.dim(m)), random_vec(&mut rng, r.dim(l)));
        let left = r.mul(n + m, &r.mul(n, &x, m, &y).unwrap(), l, &z).unwrap();
        let right = r.mul(n, &x, m + l, &r.mul(m, &y, l, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let mut one = vec![q(0); r.dim(0)];
        for s in 0..r.num_faces() {
            one.iter_mut().zip(r.idempotent(s)).for_each(|(o, e)| *o += e);
        }
        prop_assert_eq!(&r.mul(0, &one, n, &x).unwrap(), &x);
        prop_assert_eq!(&r.mul(n, &x, 0, &one).unwrap(), &x);
    }
}
