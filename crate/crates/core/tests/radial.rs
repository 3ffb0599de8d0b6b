#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use qring_core::oracle::brute_quadrature;
use qring_core::quadrature::{integrate_panels, Tolerance};
use qring_core::specfun::bessel_j0;
use qring_core::{basis_values, default_ceiling, find_levels, overlap_delta, RadialSolution, RingParams, SpinorAnsatz};

fn ground(m: i32, v: f64, a: f64, b: f64, r_i: f64, n: usize) -> RadialSolution {
    let p = RingParams::new(m, v, a, b, r_i).unwrap();
    let lv = find_levels(&p, n, default_ceiling(&p, n)).unwrap();
    lv[n - 1].solution.clone()
}

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs()
}

#[test]
fn basis_spot_values_match_reference() {
    let p = RingParams::new(0, 400.0, 1.0, 1.0, 0.5).unwrap();
    let bv = basis_values(&p, 26.4059, 0.7).unwrap();
    let want = [
        (bv.w1, 103_616.215_425_478_99),
        (bv.w1_prime, 1_998_329.452_327_838_9),
        (bv.w21, -0.507_980_122_458_804_35),
        (bv.w21_prime, -0.841_617_652_859_369_47),
        (bv.w22, -120.397_268_243_932_49),
        (bv.w22_prime, -3_862.904_772_037_998_3),
        (bv.w3, 4.963_986_419_032_676_1e-150),
        (bv.w3_prime, -9.589_585_820_800_885_9e-149),
    ];
    for (i, (got, exact)) in want.iter().enumerate() {
        assert!(close(*got, *exact, 1e-10), "entry {i}: {got} vs {exact}");
    }
    assert!(basis_values(&p, 26.4059, 0.0).is_err());
}

#[test]
fn region_two_pair_is_independent() {
    let p = RingParams::new(1, 400.0, 1.0, 1.0, 0.3).unwrap();
    for k in 1..10 {
        let r = 0.3 + 0.07 * k as f64;
        let bv = basis_values(&p, 50.0, r).unwrap();
        assert!(bv.w21 * bv.w22_prime - bv.w21_prime * bv.w22 != 0.0);
    }
}

#[test]
fn gamma_difference_is_exact() {
    let sol = ground(2, 250.0, 0.5, 2.0, 0.4, 1);
    assert!((sol.gamma_o() - sol.gamma_i() - 250.0 / 8.0).abs() < 1e-12);
}

#[test]
fn normalized_to_unit_probability() {
    for sol in [
        ground(0, 400.0, 1.0, 1.0, 0.5, 1),
        ground(2, 400.0, 1.0, 1.0, 0.0, 2),
        ground(1, 400.0, 1.0, 1.0, 0.9, 2),
    ] {
        let n = sol.radial_norm_integral().unwrap();
        assert!((2.0 * PI * n - 1.0).abs() < 1e-8, "{n}");
        assert!(sol.norm() > 0.0);
    }
}

#[test]
fn continuous_at_both_breakpoints() {
    for (m, r_i, n) in [(0, 0.5, 1), (0, 0.5, 2), (1, 0.9, 2), (2, 0.1, 1), (3, 0.7, 3)] {
        let sol = ground(m, 400.0, 1.0, 1.0, r_i, n);
        for r0 in [r_i, 1.0] {
            let below = r0 * (1.0 - 1e-14);
            let (ul, ur) = (sol.eval_u(below).unwrap(), sol.eval_u(r0).unwrap());
            let (dl, dr) = (sol.eval_u_prime(below).unwrap(), sol.eval_u_prime(r0).unwrap());
            let scale = ul.abs().max(ur.abs()) + dl.abs().max(dr.abs());
            assert!((ul - ur).abs() <= 1e-8 * scale, "u at {r0}: {ul} vs {ur}");
            assert!((dl - dr).abs() <= 1e-8 * scale, "u' at {r0}: {dl} vs {dr}");
        }
    }
}

#[test]
fn small_inner_radius_high_m_is_well_posed() {
    // U(γi) ~ r^-2|m| at r_i makes the raw system span ~300 decades.
    let p = RingParams::new(
        4,
        259.554_213_266_882_8,
        2.438_718_886_759_789,
        0.310_682_332_603_608_2,
        0.014_297_891_925_966_155,
    )
    .unwrap();
    let levels = find_levels(&p, 3, default_ceiling(&p, 3)).unwrap();
    for l in &levels {
        let n = l.solution.radial_norm_integral().unwrap();
        assert!((2.0 * PI * n - 1.0).abs() < 1e-8);
    }
    let dot = RingParams { r_i: 0.0, ..p };
    let e_dot = find_levels(&dot, 1, default_ceiling(&dot, 1)).unwrap()[0].e0;
    assert!((levels[0].e0 - e_dot).abs() < 1e-3, "{} vs {e_dot}", levels[0].e0);
}

#[test]
fn origin_values_are_the_limit() {
    for (m, r_i) in [(0, 0.5), (1, 0.5), (-1, 0.0), (2, 0.0), (0, 0.0)] {
        let sol = ground(m, 400.0, 1.0, 1.0, r_i, 1);
        let h = 1e-7;
        let (u0, du0) = (sol.eval_u(0.0).unwrap(), sol.eval_u_prime(0.0).unwrap());
        let (uh, duh) = (sol.eval_u(h).unwrap(), sol.eval_u_prime(h).unwrap());
        let scale = sol.eval_u(r_i.max(0.3)).unwrap().abs();
        assert!((u0 - uh).abs() <= 1e-5 * scale, "m={m}: {u0} vs {uh}");
        assert!((du0 - duh).abs() <= 1e-5 * scale, "m={m}: {du0} vs {duh}");
    }
    assert!(ground(0, 400.0, 1.0, 1.0, 0.5, 1).eval_u(-1.0).is_err());
}

#[test]
fn dot_limit_is_continuous() {
    for m in [0, 1] {
        let e_dot = ground(m, 400.0, 1.0, 1.0, 0.0, 2).e0();
        let e_tiny = ground(m, 400.0, 1.0, 1.0, 1e-6, 2).e0();
        assert!((e_dot - e_tiny).abs() <= 1e-6, "m={m}: {e_dot} vs {e_tiny}");
    }
}

#[test]
fn dot_has_no_inner_region() {
    let sol = ground(0, 400.0, 1.0, 1.0, 0.0, 1);
    assert!(sol.coefficients()[0].is_zero());
}

#[test]
fn vanishes_at_origin_like_power_of_m() {
    for m in [1, 2, 3] {
        let sol = ground(m, 400.0, 1.0, 1.0, 0.5, 1);
        let ratio = sol.eval_u(2e-3).unwrap() / sol.eval_u(1e-3).unwrap();
        assert!(close(ratio, 2f64.powi(m), 1e-3), "m={m}: {ratio}");
    }
}

#[test]
fn decays_beyond_tail_radius() {
    let sol = ground(0, 400.0, 1.0, 1.0, 0.5, 2);
    let peak = (1..200)
        .map(|k| {
            let r = k as f64 * sol.tail_radius() / 200.0;
            sol.eval_u(r).unwrap().powi(2) * r
        })
        .fold(0.0, f64::max);
    let mut prev = f64::INFINITY;
    for k in 0..50 {
        let r = sol.tail_radius() * (1.0 + 0.05 * k as f64);
        let d = sol.eval_u(r).unwrap().powi(2) * r;
        assert!(d < 1e-12 * peak && d <= prev);
        prev = d;
    }
}

#[test]
fn tail_doubling_is_negligible() {
    let sol = ground(1, 400.0, 1.0, 1.0, 0.5, 2);
    let base = sol.radial_norm_integral().unwrap();
    let mut breaks = sol.breaks();
    breaks.push(2.0 * sol.tail_radius());
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-13,
        max_intervals: 4000,
    };
    let doubled = integrate_panels(
        |r| {
            let u = sol.eval_u(r)?;
            Ok([u * u * r])
        },
        &breaks,
        tol,
    )
    .unwrap();
    assert!(close(doubled.value[0], base, 1e-10), "{} vs {base}", doubled.value[0]);
}

#[test]
fn adaptive_integrals_match_brute_force_trapezoid() {
    let sol = ground(0, 400.0, 1.0, 1.0, 0.5, 1);
    let r_max = sol.tail_radius();
    let mut weighted = 0.0;
    let n = 1_000_000;
    let h = r_max / n as f64;
    let plain = brute_quadrature(
        |r| {
            if r == 0.0 {
                return 0.0;
            }
            let d = sol.eval_u(r).unwrap().powi(2) * r;
            let w = if r == r_max { 0.5 } else { 1.0 };
            weighted += w * d * bessel_j0(2.0 * r);
            d
        },
        r_max,
        n,
    )
    .unwrap();
    let weighted = weighted * h;
    assert!(close(plain, sol.radial_norm_integral().unwrap(), 1e-8));
    let delta = overlap_delta(&sol, 1.0).unwrap();
    assert!(close(weighted, delta * plain, 1e-8), "{weighted} vs {}", delta * plain);
}

#[test]
fn branches_share_radial_data() {
    let sol = ground(1, 400.0, 1.0, 1.0, 0.5, 1);
    let [plus, minus] = SpinorAnsatz::pair(sol.clone());
    assert_ne!(plus.branch, minus.branch);
    assert_eq!(plus.radial, minus.radial);
    assert_eq!(plus.radial.e0(), sol.e0());
}
