//! One PASS/FAIL line per acceptance criterion. Criteria 6 and 8 are expected to fail (see
//! the README); the target exits nonzero only if a verdict differs from the expected one.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fankoszul::cli_reports::{verify_cech, verify_homs, verify_perversity, verify_purity, verify_truncation, Section, WIDTH};
use fankoszul::graded_linalg::poly::grade_dim;
use fankoszul::homotopy_cat::{flabby_hull, locally_free_cover, random_stalk_automorphisms, skyscraper, to_pure_complex, LfComplex};
use fankoszul::koszul_dual::{cohomology_table, grade_window, kappa};
use fankoszul::pure_ic::{boundary_generators_brute, ic_table, PureCtx};
use fankoszul::ring_side::{end_ring_r, end_ring_rvee, koszul_checks};
use fankoszul::sheaf_quiver::LfSheaf;
use fankoszul::{fixtures, FaceId, Fan, Result};

fn all_pass(s: &Section) -> bool {
    s.verdicts.iter().all(|v| v.pass)
}

fn fans() -> Vec<(&'static str, Arc<Fan>)> {
    fixtures::all().into_iter().map(|(n, f)| (n, Arc::new(f))).collect()
}

/// `(face, degree, grade, dim)` of the stalk cohomology of `κ(M)`.
fn kappa_table(fan: &Arc<Fan>, m: &LfSheaf) -> Result<(Vec<(FaceId, i64, i64, usize)>, (i64, i64))> {
    let y = kappa(&LfComplex::single(m, 0))?;
    let mut out = Vec::new();
    for (rho, cells) in cohomology_table(fan, &y, WIDTH)? {
        out.extend(cells.into_iter().map(|c| (rho, c.degree, c.grade, c.dim)));
    }
    Ok((out, grade_window(&y, WIDTH).unwrap_or((0, -1))))
}

/// `𝒜*` on the faces selected by `keep`, in degree `deg`.
fn dual_structure(fan: &Fan, window: (i64, i64), deg: i64, keep: impl Fn(FaceId) -> bool) -> Vec<(FaceId, i64, i64, usize)> {
    let mut out = Vec::new();
    for rho in (0..fan.num_faces()).filter(|&r| keep(r)) {
        for g in window.0..=window.1 {
            let d = grade_dim(fan.dim(rho), -g);
            if d > 0 {
                out.push((rho, deg, g, d));
            }
        }
    }
    out
}

fn c1() -> Result<bool> {
    let mut ok = true;
    for (_, fan) in fans() {
        for tau in 0..fan.num_faces() {
            let d = -(fan.dim(tau) as i64);
            let (t, w) = kappa_table(&fan, &LfSheaf::point_face(&fan, tau))?;
            ok &= t == dual_structure(&fan, w, d, |r| fan.leq(r, tau));
            let (t, w) = kappa_table(&fan, &LfSheaf::closed_face(&fan, tau))?;
            ok &= t == dual_structure(&fan, w, d, |r| r == tau);
        }
    }
    Ok(ok)
}

fn c2() -> Result<bool> {
    let mut ok = true;
    for (_, fan) in fans() {
        ok &= all_pass(&verify_cech(&fan)?);
    }
    Ok(ok)
}

fn c3() -> Result<bool> {
    let fan = Arc::new(fixtures::fx2());
    let ctx = PureCtx::new(&fan);
    let top = fan.top().unwrap();
    let row = ic_table(&ctx)?.into_iter().find(|r| r.sigma == fan.label(fan.zero_cone()) && r.tau == fan.label(top)).unwrap();
    let inductive: Vec<i64> = row.degrees.iter().zip(&row.multiplicities).flat_map(|(&d, &m)| std::iter::repeat_n(d, m)).collect();
    let brute = boundary_generators_brute(&fan, top, 8)?;
    Ok(inductive == vec![-3, -1] && brute == inductive)
}

fn c4_and_7() -> Result<(bool, bool)> {
    let (mut c4, mut c7) = (true, true);
    for (name, fan) in fans() {
        let s = verify_homs(&PureCtx::new(&fan))?;
        c4 &= s.verdicts[0].pass && s.verdicts[1].pass;
        if name != "fx2" {
            c7 &= s.verdicts[2].pass;
        }
    }
    Ok((c4, c7))
}

fn c5() -> Result<bool> {
    let fan = Arc::new(fixtures::fx1());
    let ctx = PureCtx::new(&fan);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut changed = 0;
    for _ in 0..25 {
        let n = rand::Rng::random_range(&mut rng, 1..=4);
        let mut want: Vec<(FaceId, i64)> =
            (0..n).map(|_| (rand::Rng::random_range(&mut rng, 0..fan.num_faces()), rand::Rng::random_range(&mut rng, -2..=2))).collect();
        want.shuffle(&mut rng);
        let parts = want.iter().map(|&(s, k)| Ok(ctx.ic(s)?.shift(k))).collect::<Result<Vec<_>>>()?;
        let m = LfSheaf::direct_sum(&parts);
        let g = random_stalk_automorphisms(&m, &mut rng);
        let (scrambled, iso) = m.change_basis(&g).unwrap();
        if !iso.is_morphism(&m, &scrambled) {
            return Ok(false);
        }
        changed += usize::from(scrambled != m);
        let mut got = ctx.decompose(&scrambled)?.sorted_labels();
        got.sort();
        want.sort();
        if got != want {
            return Ok(false);
        }
    }
    Ok(changed > 0)
}

fn c6() -> Result<(bool, bool)> {
    let (mut perverse, mut pure) = (true, true);
    for (_, fan) in fans() {
        let ctx = PureCtx::new(&fan);
        perverse &= all_pass(&verify_perversity(&ctx)?);
        pure &= all_pass(&verify_purity(&ctx)?);
    }
    Ok((perverse, pure))
}

fn c8() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, f) in [("fx1", fixtures::fx1()), ("fx3", fixtures::fx3())] {
        let ctx = PureCtx::new(&Arc::new(f));
        let k = koszul_checks(&end_ring_r(&ctx, 4)?, &end_ring_rvee(&ctx, 4)?, 4);
        let flag = |b: bool| if b { "ok" } else { "FAIL" };
        parts.push(format!(
            "{name}: assoc {} (i) {} (ii) {} (iii) {} (iv) {}",
            flag(k.associative),
            flag(k.positivity),
            flag(k.generation),
            flag(k.degree_one),
            flag(k.quadratic)
        ));
        ok &= k.pass();
    }
    Ok((ok, parts.join("; ")))
}

fn c9() -> Result<bool> {
    Ok(all_pass(&verify_truncation(&PureCtx::new(&Arc::new(fixtures::fx1())), 10, 2024)?))
}

fn c10() -> Result<bool> {
    let mut ok = true;
    let fx3 = Arc::new(fixtures::fx3());
    let sky = skyscraper(&fx3, fx3.zero_cone(), 0, 12);
    let cover = locally_free_cover(&sky)?;
    ok &= cover.is_resolution(&sky);
    let mut inputs = vec![(fx3.clone(), cover.complex)];
    let fx2 = Arc::new(fixtures::fx2());
    inputs.push((fx2.clone(), LfComplex::single(&LfSheaf::structure_sheaf(&fx2), 0)));
    for (fan, p) in inputs {
        let ctx = PureCtx::new(&fan);
        let h = flabby_hull(&p, ctx.cutoff)?;
        let (lo, hi) = h.complex.window(ctx.cutoff);
        ok &= h.phi.is_quasi_iso(&p, &h.complex, lo, hi);
        let (x, _) = to_pure_complex(&ctx, &h.complex)?;
        ok &= x.is_complex(&ctx)? && x.range().is_some();
    }
    Ok(ok)
}

fn main() {
    let mut mismatches = 0;
    let mut line = |n: usize, got: Result<bool>, expect: bool, what: &str| {
        let got = got.unwrap_or_else(|e| {
            println!("criterion {n}: error {e}");
            false
        });
        println!("{} criterion {n}: {what}", if got { "PASS" } else { "FAIL" });
        if got != expect {
            mismatches += 1;
            println!("  unexpected verdict for criterion {n}");
        }
    };
    line(1, c1(), true, "κ of point and closed-face sheaves on FX1, FX2, FX3");
    line(2, c2(), true, "cellular complexes of constant diagrams are acyclic");
    line(3, c3(), true, "ℒ^o(σ3) on FX2 has generators in degrees -3, -1 by both algorithms");
    let (c4, c7) = c4_and_7().unwrap_or((false, false));
    line(4, Ok(c4), true, "Homs between simples vanish below degree 0 and are δ with identity basis at 0");
    line(5, c5(), true, "decomposition of 25 scrambled sums on FX1");
    let (perverse, pure) = c6().unwrap_or((false, false));
    line(6, Ok(perverse && pure), false, &format!("K(ℒ^σ) perverse: {perverse}; pure of weight 0: {pure}"));
    line(7, Ok(c7), true, "co_hom(κX, κY, n) = kb_hom(X, Y, n) = closed form on FX1, FX3");
    let (r, detail) = c8().unwrap_or((false, "error".into()));
    line(8, Ok(r), false, &format!("ring axioms ({detail})"));
    line(9, c9(), true, "truncation, orthogonality and heart normal forms on 10 random complexes");
    line(10, c10(), true, "resolution pipeline for the skyscraper on FX3 and 𝒜 on FX2");
    if mismatches > 0 {
        std::process::exit(1);
    }
}
