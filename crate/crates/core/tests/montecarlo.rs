use ffr_core::analytics;
use ffr_core::montecarlo::{self, edge_fraction_vs_distance, simulate, simulate_coverage, simulate_rate};
use ffr_core::{
    build_layout, Correlation, CorrelationMode, InterfererSet, LinkGains, Placement, QuadratureConfig, Quantity, Scheme,
    SimConfig, SpatialGrid, SystemParams, UserPosition,
};

fn params(alpha: f64, t_db: f64, s_db: f64) -> SystemParams {
    SystemParams::from_db(alpha, t_db, s_db, 0.0, build_layout(577.0).unwrap()).unwrap()
}

#[test]
fn standard_error_scales_as_inverse_sqrt_n() {
    let base = SimConfig::new(params(3.0, 0.0, 0.0), CorrelationMode::Independent, 10_000);
    let se: Vec<f64> = [10_000u64, 100_000, 1_000_000]
        .iter()
        .map(|&n| simulate_coverage(&base.clone().with_samples(n), Scheme::Ffr).unwrap().std_error)
        .collect();
    for w in se.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio / 10f64.sqrt() - 1.0).abs() < 0.2, "SE ratio {ratio}");
    }
}

#[test]
fn point_estimates_match_closed_forms() {
    let p = params(3.0, 0.0, 2.0);
    let user = UserPosition::new(450.0, 0.3).unwrap();
    let g = LinkGains::new(&p, &user);
    let (t, s) = (p.target(), p.threshold());
    for (mode, corr) in [
        (CorrelationMode::Independent, Correlation::Independent),
        (CorrelationMode::FullyCorrelated, Correlation::FullyCorrelated),
    ] {
        let cfg = SimConfig::new(p.clone(), mode, 400_000).with_placement(Placement::Point { r: 450.0, theta: 0.3 });
        let q = [Quantity::CoverageFr1, Quantity::CoverageFr3, Quantity::CoverageFfr, Quantity::RateFr3];
        let e = simulate(&cfg, &q).unwrap();
        let (_, _, ffr) = analytics::ffr_coverage_parts(&g, t, s, corr).unwrap();
        let k = analytics::k_factor(&p, &user, true).unwrap();
        let refs = [g.coverage(InterfererSet::Fr1, t), g.coverage(InterfererSet::Fr3, t), ffr, 3.0 * k];
        for ((est, r), name) in e.iter().zip(refs).zip(["fr1", "fr3", "ffr", "3K"]) {
            assert!(est.within(r, 3.0), "{corr:?} {name}: {} ± {} vs {r}", est.value, est.std_error);
        }
    }
}

#[test]
fn shat_matches_simulated_fr3_quantile() {
    // P[η̂ > Ŝ] must equal P[η > S] at a fixed position
    let p = params(3.0, 0.0, 1.0);
    let user = UserPosition::new(300.0, 0.8).unwrap();
    let shat = analytics::shat_threshold(&p, &user).unwrap();
    let probe = p.clone().with_target(shat).unwrap();
    let cfg = SimConfig::new(probe, CorrelationMode::Independent, 400_000)
        .with_placement(Placement::Point { r: 300.0, theta: 0.8 });
    let e = simulate_coverage(&cfg, Scheme::Fr3).unwrap();
    let reference = LinkGains::new(&p, &user).coverage(InterfererSet::Fr1, p.threshold());
    assert!(e.within(reference, 3.0), "{} ± {} vs {reference}", e.value, e.std_error);
}

#[test]
fn whole_cell_rate_matches_quadrature_within_one_percent() {
    let p = params(3.0, 0.0, 0.0);
    let e = simulate_rate(&SimConfig::new(p.clone(), CorrelationMode::Independent, 1_000_000), Scheme::Fr1).unwrap();
    let r = analytics::rate_fr1(&p).unwrap();
    assert!((e.value / r - 1.0).abs() < 0.01);
    assert!(e.within(r, 3.0));
}

#[test]
fn hexagon_placement_matches_hexagon_quadrature() {
    let p = params(3.5, 1.0, 1.0);
    let cfg = SimConfig::new(p.clone(), CorrelationMode::Independent, 400_000).with_placement(Placement::UniformHexagon);
    let e = simulate_coverage(&cfg, Scheme::Ffr).unwrap();
    let q = QuadratureConfig { shape: analytics::CellShape::Hexagon, ..Default::default() };
    let a = SpatialGrid::cell(&p, &q).unwrap().coverage_ffr(p.target(), p.threshold(), Correlation::Independent).unwrap();
    assert!(e.within(a.ffr, 3.0), "{} ± {} vs {}", e.value, e.std_error, a.ffr);
}

#[test]
fn noise_enters_simulated_coverage_like_the_closed_form() {
    let p = params(3.0, 0.0, 0.0).with_noise_over_power(0.5).unwrap();
    let e = simulate_coverage(&SimConfig::new(p.clone(), CorrelationMode::Independent, 400_000), Scheme::Fr1).unwrap();
    let a = SpatialGrid::cell(&p, &QuadratureConfig::default()).unwrap().coverage(InterfererSet::Fr1, p.target());
    assert!(e.within(a, 3.0), "{} ± {} vs {a}", e.value, e.std_error);
}

#[test]
fn edge_fraction_grows_with_distance() {
    let cfg = SimConfig::new(params(3.0, 0.0, 0.0), CorrelationMode::Independent, 50_000);
    let grid: Vec<f64> = (1..=10).map(|i| 57.7 * i as f64).collect();
    let f = edge_fraction_vs_distance(&cfg, &grid).unwrap();
    for w in f.windows(2) {
        assert!(w[1].1.value + 3.0 * w[1].1.std_error >= w[0].1.value);
    }
    // thresholds a few dB below 0 dB put 20-30% of users at 500 m in the edge class
    let mid = SimConfig::new(params(3.0, 0.0, -5.0), CorrelationMode::Independent, 100_000);
    let at_500 = edge_fraction_vs_distance(&mid, &[500.0]).unwrap()[0].1.value;
    assert!((0.15..=0.35).contains(&at_500), "edge fraction {at_500}");
}

#[test]
fn stream_blocks_do_not_overlap_between_radii() {
    let cfg = SimConfig::new(params(3.0, 0.0, 0.0), CorrelationMode::Independent, 20_000);
    let a = montecarlo::simulate_vs_distance(&cfg, &[300.0, 300.0], &[Quantity::CoverageFr1]).unwrap();
    assert_ne!(a[0].1[0].value, a[1].1[0].value);
}
