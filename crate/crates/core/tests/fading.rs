use ffr_core::fading::{BandPoint, TdlChannel};
use ffr_core::{subband_correlation, ChannelProfile, CorrelationMode, FadingSampler, SubbandPlan};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: usize = 1_000_000;

/// Asymptotic Kolmogorov p-value of a one-sample KS statistic.
fn ks_pvalue(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        p += 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp();
    }
    p.clamp(0.0, 1.0)
}

fn ks_exp1(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = 1.0 - (-x).exp();
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    ks_pvalue(d, xs.len())
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

struct Samples {
    g: Vec<f64>,
    g_hat: Vec<f64>,
    h: Vec<f64>,
    h_hat: Vec<f64>,
}

fn sample(mode: CorrelationMode, seed: u64) -> Samples {
    let s = FadingSampler::new(mode).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Samples { g: vec![], g_hat: vec![], h: vec![], h_hat: vec![] };
    for _ in 0..N {
        let d = s.draw(&mut rng, 2);
        out.g.push(d.g);
        out.g_hat.push(d.g_hat);
        out.h.push(d.h[1]);
        out.h_hat.push(d.h_hat[1]);
    }
    out
}

fn modes() -> Vec<(&'static str, CorrelationMode)> {
    vec![
        ("independent", CorrelationMode::Independent),
        ("fully_correlated", CorrelationMode::FullyCorrelated),
        ("pedA", CorrelationMode::TappedDelayLine(TdlChannel::new(ChannelProfile::pedestrian_a()))),
        ("vehA", CorrelationMode::TappedDelayLine(TdlChannel::new(ChannelProfile::vehicular_a()))),
    ]
}

#[test]
fn marginals_are_unit_exponential_in_every_mode() {
    for (i, (name, mode)) in modes().into_iter().enumerate() {
        let s = sample(mode, 1000 + i as u64);
        for (label, xs) in [("g", s.g), ("g_hat", s.g_hat), ("h", s.h), ("h_hat", s.h_hat)] {
            let mean = xs.iter().sum::<f64>() / N as f64;
            assert!((mean - 1.0).abs() < 0.01, "{name} {label} mean {mean}");
            let p = ks_exp1(xs);
            assert!(p > 0.01, "{name} {label}: KS p-value {p}");
        }
    }
}

#[test]
fn power_correlation_matches_closed_form() {
    let plan = SubbandPlan::default();
    let (kc, ke) = plan.representative_subcarriers().unwrap();
    for (i, profile) in [ChannelProfile::pedestrian_a(), ChannelProfile::vehicular_a()].into_iter().enumerate() {
        let df = profile.subcarrier_spacing_hz();
        let expected = subband_correlation(&profile, kc as f64 * df, ke as f64 * df).unwrap();
        let s = sample(CorrelationMode::TappedDelayLine(TdlChannel::new(profile.clone())), 7 + i as u64);
        let rho = pearson(&s.g, &s.g_hat);
        let rho_h = pearson(&s.h, &s.h_hat);
        // the correlation estimate of exponential pairs has SE below ~1.5/√n
        assert!((rho - expected).abs() < 0.005, "{}: sample {rho} vs {expected}", profile.name);
        assert!((rho_h - expected).abs() < 0.005, "{}: interferer {rho_h} vs {expected}", profile.name);
        assert!(rho > 0.0 && rho < 1.0);
    }
    let ind = sample(CorrelationMode::Independent, 3);
    assert!(pearson(&ind.g, &ind.g_hat).abs() < 0.01);
}

#[test]
fn subband_correlation_against_tap_simulation() {
    // independent route: sample taps and evaluate H at two frequencies directly
    let profile = ChannelProfile::pedestrian_a();
    let (f1, f2) = (-1.0e6, 0.4e6);
    let taps = profile.discrete_taps();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ts = 1.0 / profile.sampling_rate_hz;
    let (mut a, mut b) = (vec![], vec![]);
    for _ in 0..200_000 {
        let (mut h1, mut h2) = (num_complex::Complex64::new(0.0, 0.0), num_complex::Complex64::new(0.0, 0.0));
        for t in &taps {
            let re: f64 = rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng);
            let im: f64 = rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng);
            let c = num_complex::Complex64::new(re, im) * (t.power / 2.0).sqrt();
            let tau = t.sample as f64 * ts;
            h1 += c * num_complex::Complex64::from_polar(1.0, -std::f64::consts::TAU * f1 * tau);
            h2 += c * num_complex::Complex64::from_polar(1.0, -std::f64::consts::TAU * f2 * tau);
        }
        a.push(h1.norm_sqr());
        b.push(h2.norm_sqr());
    }
    let got = subband_correlation(&profile, f1, f2).unwrap();
    assert!((pearson(&a, &b) - got).abs() < 0.01);
}

#[test]
fn correlation_falls_with_spacing_and_delay_spread() {
    let ped = ChannelProfile::pedestrian_a();
    let veh = ChannelProfile::vehicular_a();
    for spacing in [15e3, 180e3, 1e6, 2e6] {
        let p = subband_correlation(&ped, -spacing / 2.0, spacing / 2.0).unwrap();
        let v = subband_correlation(&veh, -spacing / 2.0, spacing / 2.0).unwrap();
        assert!(v <= p + 1e-12, "spacing {spacing}: vehA {v} > pedA {p}");
    }
    let near = subband_correlation(&ped, 0.0, 15e3).unwrap();
    let far = subband_correlation(&ped, -1e6, 1e6).unwrap();
    assert!(far < near);
    assert!(veh.rms_delay_spread() > ped.rms_delay_spread());
}

#[test]
fn same_seed_same_draws() {
    let mode = CorrelationMode::TappedDelayLine(TdlChannel::new(ChannelProfile::vehicular_a()));
    let s = FadingSampler::new(mode).unwrap();
    let mut a = ChaCha8Rng::seed_from_u64(5);
    let mut b = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        assert_eq!(s.draw(&mut a, 18), s.draw(&mut b, 18));
    }
}

#[test]
fn band_point_is_configurable() {
    let plan = SubbandPlan { representative: BandPoint::Offset(0), ..SubbandPlan::default() };
    assert_eq!(plan.representative_subcarriers().unwrap(), (-150, 1));
    let ch = TdlChannel { profile: ChannelProfile::pedestrian_a(), plan };
    assert!(FadingSampler::new(CorrelationMode::TappedDelayLine(ch)).is_ok());
}

#[test]
fn profile_json_roundtrip() {
    let p = ChannelProfile::vehicular_a();
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(ChannelProfile::from_json(&text).unwrap(), p);
    let dir = tempdir();
    let path = dir.join("veh.json");
    std::fs::write(&path, text).unwrap();
    assert_eq!(ChannelProfile::from_json_file(&path).unwrap(), p);
    assert!(ChannelProfile::from_json_file(dir.join("missing.json")).is_err());
}

fn tempdir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("ffr-fading-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
