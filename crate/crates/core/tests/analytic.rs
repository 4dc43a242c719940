use anyonchain::analytic::{
    asymptotic_aee, chi, chi_minmax, exact_average_aee, exact_variance, phi, q_sree, q_sree_direct, resolved_crossover,
    ParityCase, SectorDim, SectorDims,
};
use anyonchain::fusion::dim_bruteforce;
use anyonchain::{AnyonModel, Label};
use proptest::prelude::*;

const TAU: Label = Label(1);

fn fib_dims(l: usize, l_a: usize, total: Label) -> SectorDims {
    SectorDims::new(&AnyonModel::fibonacci(), TAU, l, l_a, total).unwrap()
}

fn page_harmonic(m: u32, n: u32) -> f64 {
    let (m, n) = if m <= n { (m, n) } else { (n, m) };
    let h: f64 = (n + 1..=m * n).map(|k| 1.0 / k as f64).sum();
    h - (m as f64 - 1.0) / (2.0 * n as f64)
}

#[test]
fn single_sector_reduces_to_page() {
    for m in 1..=6u32 {
        for n in 1..=6u32 {
            let got = exact_average_aee(&SectorDims::single(m as u128, n as u128, 1.0)).unwrap();
            assert!((got - page_harmonic(m, n)).abs() < 1e-12, "m={m} n={n}");
        }
    }
}

#[test]
fn sector_dims_partition_the_total_space() {
    for l in 4..=14 {
        for l_a in 1..=l {
            for total in [Label(0), TAU] {
                let d = fib_dims(l, l_a, total);
                let sum: u128 = d.sectors.iter().map(|s| s.m * s.n).sum();
                assert_eq!(sum, d.d_total);
                assert_eq!(d.d_total, dim_bruteforce(&AnyonModel::fibonacci(), TAU, l, total).unwrap());
            }
        }
    }
}

#[test]
fn average_grows_up_to_half_cut() {
    for total in [Label(0), TAU] {
        let l = 20;
        let vals: Vec<f64> = (1..=l / 2).map(|a| exact_average_aee(&fib_dims(l, a, total)).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]), "{vals:?}");
    }
}

#[test]
fn vacuum_curve_is_symmetric() {
    let l = 16;
    for a in 1..l {
        let x = exact_average_aee(&fib_dims(l, a, Label(0))).unwrap();
        let y = exact_average_aee(&fib_dims(l, l - a, Label(0))).unwrap();
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn tau_curve_asymmetry_approaches_log_golden_ratio() {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let l = 24;
    let x = exact_average_aee(&fib_dims(l, 6, TAU)).unwrap();
    let y = exact_average_aee(&fib_dims(l, 18, TAU)).unwrap();
    assert!(((y - x) - golden.ln()).abs() < 5e-3, "{}", y - x);
}

#[test]
fn chi_symmetric_at_equal_dims() {
    for m in [1.0, 2.0, 5.0, 13.0] {
        for d in [m * m, 2.0 * m * m + 3.0] {
            assert!((chi(m, m, d) - chi_minmax(m, m, d)).abs() < 1e-12);
        }
        let s = SectorDim { alpha: Label(0), m: m as u128, n: m as u128, qdim: 1.0 };
        assert!(phi(&s, m * m).is_finite());
    }
}

#[test]
fn exact_minus_asymptotic_shrinks() {
    let m = AnyonModel::fibonacci();
    let gaps: Vec<f64> = [8, 12, 16, 20]
        .iter()
        .map(|&l| {
            let e = exact_average_aee(&fib_dims(l, l / 2, Label(0))).unwrap();
            (e - asymptotic_aee(&m, TAU, Label(0), l, 0.5).unwrap()).abs()
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn variance_decays_at_golden_rate() {
    let pts: Vec<(f64, f64)> =
        (8..=20).step_by(2).map(|l| (l as f64, exact_variance(&fib_dims(l, l / 2, Label(0))).unwrap().ln())).collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / n, sy / n);
    let slope =
        pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let target = -((1.0 + 5f64.sqrt()) / 2.0).ln();
    assert!((slope / target - 1.0).abs() < 0.1, "slope {slope}");
}

#[test]
fn total_dimension_ratio_tends_to_qdim() {
    let m = AnyonModel::fibonacci();
    let golden = m.qdim(TAU);
    let errs: Vec<f64> = (10..=30)
        .step_by(5)
        .map(|l| {
            let a = dim_bruteforce(&m, TAU, l + 1, Label(0)).unwrap() as f64;
            let b = dim_bruteforce(&m, TAU, l, Label(0)).unwrap() as f64;
            (a / b - golden).abs()
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]) && errs[errs.len() - 1] < 1e-10);
}

#[test]
fn crossover_interpolates_between_branches() {
    let m = AnyonModel::fibonacci();
    let l = 400;
    let deep_left = resolved_crossover(&m, TAU, TAU, l, -60.0, 1.0).unwrap();
    let deep_right = resolved_crossover(&m, TAU, TAU, l, 60.0, 1.0).unwrap();
    let f_left = 0.5 - 60.0 / (2.0 * l as f64);
    let f_right = 0.5 + 60.0 / (2.0 * l as f64);
    assert!((deep_left - asymptotic_aee(&m, TAU, TAU, l, f_left).unwrap()).abs() < 1e-6);
    assert!((deep_right - asymptotic_aee(&m, TAU, TAU, l, f_right).unwrap()).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn page_average_is_below_maximal(m in 1u128..40, n in 1u128..40) {
        let s = exact_average_aee(&SectorDims::single(m, n, 1.0)).unwrap();
        prop_assert!(s >= -1e-12);
        prop_assert!(s <= (m.min(n) as f64).ln() + 1e-12);
        prop_assert!(exact_variance(&SectorDims::single(m, n, 1.0)).unwrap() >= -1e-12);
    }

    #[test]
    fn q_sree_closed_form_matches_sum(k in 3u32..=9, l in 4usize..40, f in 0.05f64..0.95) {
        let cases: &[ParityCase] = if k % 2 == 0 { &[ParityCase::Integer, ParityCase::HalfInteger] } else { &[ParityCase::Integer] };
        for &case in cases {
            let a = q_sree(k, Label(1), Label(0), l, f, case).unwrap();
            let b = q_sree_direct(k, Label(1), Label(0), l, f, case).unwrap();
            prop_assert!((a - b).abs() < 1e-10, "k={} {:?}: {} vs {}", k, case, a, b);
        }
    }
}

#[test]
fn half_cut_average_grows_with_length() {
    for total in [Label(0), TAU] {
        let vals: Vec<f64> =
            (4..=24).step_by(2).map(|l| exact_average_aee(&fib_dims(l, l / 2, total)).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] >= w[0]), "{vals:?}");
    }
}
