use anyonchain::analytic::{exact_average_aee, SectorDims};
use anyonchain::hamiltonian::{
    build_hamiltonian, eigenstate_aee_curve, level_spacing_ratios, mid_spectrum_states, parity_operator,
    reference_ratio_pdfs, solve, Chain, GoldenChainSpec, Parity, PoissonVariant,
};
use anyonchain::{AnyonModel, Label};

fn spec(l: usize, lambda: f64, total: u8, parity: Option<Parity>) -> GoldenChainSpec {
    GoldenChainSpec { l, lambda, total: Label(total), parity }
}

fn integrate(f: impl Fn(f64) -> f64) -> f64 {
    let n = 20_000;
    let h = 1.0 / n as f64;
    (0..n).map(|i| f((i as f64 + 0.5) * h) * h).sum()
}

#[test]
fn reference_densities_are_normalised() {
    let goe = integrate(|r| reference_ratio_pdfs(r, PoissonVariant::Standard).unwrap().goe);
    let poi = integrate(|r| reference_ratio_pdfs(r, PoissonVariant::Standard).unwrap().poisson);
    assert!((goe - 1.0).abs() < 1e-6 && (poi - 1.0).abs() < 1e-6);
    let mean = integrate(|r| r * reference_ratio_pdfs(r, PoissonVariant::Standard).unwrap().poisson);
    assert!((mean - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-6);
}

#[test]
fn spectrum_is_bounded_by_term_norms() {
    let chain = Chain::golden();
    for lambda in [0.0, 0.5, 0.9] {
        let l = 10;
        let s = solve(&chain, &spec(l, lambda, 0, None), false).unwrap();
        let bound = (l - 1) as f64 + lambda * (l - 2) as f64;
        assert!(s.eigenvalues.iter().all(|e| e.abs() <= bound + 1e-10));
    }
}

#[test]
fn parity_sectors_split_the_spectrum() {
    let chain = Chain::golden();
    for total in [0, 1] {
        let full = solve(&chain, &spec(11, 0.7, total, None), false).unwrap();
        let mut joined: Vec<f64> = [Parity::Even, Parity::Odd]
            .iter()
            .flat_map(|&p| solve(&chain, &spec(11, 0.7, total, Some(p)), false).unwrap().eigenvalues)
            .collect();
        joined.sort_by(f64::total_cmp);
        assert_eq!(joined.len(), full.eigenvalues.len());
        for (a, b) in joined.iter().zip(&full.eigenvalues) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn parity_commutes_with_hamiltonian() {
    let chain = Chain::golden();
    let h = build_hamiltonian(&chain, &spec(9, 0.9, 1, None)).unwrap();
    let p = parity_operator(&chain, &h.basis).unwrap();
    let hd = h.matrix.to_dense();
    assert!((&hd * &p - &p * &hd).amax() < 1e-12);
}

#[test]
fn mirror_braiding_gives_the_same_physics() {
    let golden = Chain::golden();
    let mirror = Chain::new(AnyonModel::fibonacci().with_conjugate_braiding(), Label(1)).unwrap();
    let sp = spec(10, 0.9, 0, Some(Parity::Even));
    let a = solve(&golden, &sp, false).unwrap().eigenvalues;
    let b = solve(&mirror, &sp, false).unwrap().eigenvalues;
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-10);
    }
    let sa = mid_spectrum_states(&golden, &sp, Some(10)).unwrap();
    let sb = mid_spectrum_states(&mirror, &sp, Some(10)).unwrap();
    let ca = eigenstate_aee_curve(&golden, &sa, &[3, 5]).unwrap();
    let cb = eigenstate_aee_curve(&mirror, &sb, &[3, 5]).unwrap();
    for (p, q) in ca.iter().zip(&cb) {
        assert!((p.mean_aee - q.mean_aee).abs() < 1e-8);
    }
}

#[test]
fn eigenstate_entropy_stays_below_haar_average() {
    let chain = Chain::golden();
    let sp = spec(12, 0.9, 0, Some(Parity::Even));
    let states = mid_spectrum_states(&chain, &sp, None).unwrap();
    let curve = eigenstate_aee_curve(&chain, &states, &(1..12).collect::<Vec<_>>()).unwrap();
    for p in &curve {
        let exact =
            exact_average_aee(&SectorDims::new(&chain.model, chain.jext, 12, p.l_a, Label(0)).unwrap()).unwrap();
        assert!(p.mean_aee <= exact * 1.02, "L_A={} {} vs {exact}", p.l_a, p.mean_aee);
        assert!((p.analytic_exact - exact).abs() < 1e-12);
    }
}

#[test]
fn chaotic_chain_has_repelling_levels() {
    let chain = Chain::golden();
    let s = solve(&chain, &spec(16, 0.9, 0, Some(Parity::Even)), false).unwrap();
    let stats = level_spacing_ratios(&s.eigenvalues).unwrap();
    assert!(stats.mean > 0.45, "{}", stats.mean);
    let hist: f64 = stats.histogram.iter().map(|(_, d)| d / stats.histogram.len() as f64).sum();
    assert!((hist - 1.0).abs() < 1e-12);
}

#[test]
fn invalid_specs_are_rejected() {
    let chain = Chain::golden();
    assert!(solve(&chain, &spec(1, 0.9, 0, None), false).is_err());
    assert!(solve(&chain, &spec(8, 0.9, 7, None), false).is_err());
    assert!(Chain::new(AnyonModel::fibonacci(), Label(5)).is_err());
    assert!(Chain::new(AnyonModel::abelian_zn(3).unwrap(), Label(1)).is_err());
}
