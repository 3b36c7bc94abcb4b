//! Seeded Monte Carlo estimators of the coverage and rate quantities.
//!
//! Samples are split over a fixed number of ChaCha8 streams (`seed`, stream
//! index). Streams run in parallel and their sums are merged in stream order,
//! so results depend on `(seed, n_streams, config)` but never on thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{Correlation, SystemParams};
use crate::error::{FfrError, Result};
use crate::fading::{CorrelationMode, FadingDraw, FadingSampler};
use crate::geometry::Point;
use crate::scalar::Real;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_STREAMS: usize = 64;

/// Where users are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement<R> {
    /// Uniform on the disk of radius `R` (minus the configured minimum radius).
    UniformDisk,
    /// Uniform on the hexagonal cell.
    UniformHexagon,
    /// Fixed distance, uniform angle.
    Ring(R),
    /// Fixed polar position.
    Point { r: R, theta: R },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig<R> {
    pub params: SystemParams<R>,
    pub mode: CorrelationMode,
    pub n_samples: u64,
    pub seed: u64,
    pub n_streams: usize,
    pub placement: Placement<R>,
}

impl<R: Real> SimConfig<R> {
    pub fn new(params: SystemParams<R>, mode: CorrelationMode, n_samples: u64) -> Self {
        Self { params, mode, n_samples, seed: DEFAULT_SEED, n_streams: DEFAULT_STREAMS, placement: Placement::UniformDisk }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_streams(mut self, n_streams: usize) -> Self {
        self.n_streams = n_streams;
        self
    }

    pub fn with_placement(mut self, placement: Placement<R>) -> Self {
        self.placement = placement;
        self
    }

    pub fn with_samples(mut self, n_samples: u64) -> Self {
        self.n_samples = n_samples;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(FfrError::param("n_samples must be at least 1"));
        }
        if self.n_streams == 0 {
            return Err(FfrError::param("n_streams must be at least 1"));
        }
        let radius = self.params.cell_radius();
        match self.placement {
            Placement::Ring(r) | Placement::Point { r, .. } if !(r > R::zero() && r <= radius) => {
                Err(FfrError::param(format!("user distance {r} outside (0, {radius}]")))
            }
            _ => Ok(()),
        }
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

impl Estimate {
    fn from_sums(sum: f64, sum_sq: f64, n: u64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = if n > 1 { ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
        Self { value: mean, std_error: (var / nf).sqrt(), n_samples: n }
    }

    /// Standard error floored at `1/n`, so that a run in which every sample
    /// gave the same outcome still carries the resolution of its sample size.
    pub fn effective_std_error(&self) -> f64 {
        self.std_error.max(1.0 / self.n_samples as f64)
    }

    /// `|value - reference|` in effective standard errors.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.value - reference).abs() / self.effective_std_error()
    }

    pub fn within(&self, reference: f64, n_se: f64) -> bool {
        self.z_score(reference) <= n_se
    }
}

/// Per-sample statistic whose mean is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `1{η > T}`
    CoverageFr1,
    /// `1{η̂ > T}`
    CoverageFr3,
    /// `1{η ≥ S, η > T} + 1{η < S, η̂ > T}`
    CoverageFfr,
    /// `1{η ≥ S}`
    CentreFraction,
    /// `1{η ≥ S, η > T}`
    CentreCovered,
    /// `1{η < S, η̂ > T}`
    EdgeCovered,
    /// `ln(1 + η)·1{η > T}`
    RateFr1,
    /// `ln(1 + η̂)·1{η̂ > T}`, full FR3 band
    RateFr3,
    /// `ln(1 + η)·1{η ≥ S, η > T} + ln(1 + η̂)·1{η < S, η̂ > T}/3`
    RateFfr,
}

impl Quantity {
    fn is_rate(self) -> bool {
        matches!(self, Self::RateFr1 | Self::RateFr3 | Self::RateFfr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Fr1,
    Fr3,
    Ffr,
}

impl CorrelationMode {
    /// The closed-form regime this mode corresponds to, if any.
    pub fn analytic(&self) -> Option<Correlation> {
        match self {
            Self::Independent => Some(Correlation::Independent),
            Self::FullyCorrelated => Some(Correlation::FullyCorrelated),
            Self::TappedDelayLine(_) => None,
        }
    }
}

/// Geometry and thresholds in `f64`, distances normalized by `R`.
struct Kernel {
    alpha: f64,
    target: f64,
    threshold: f64,
    noise: f64,
    min_radius: f64,
    fr1: Vec<(f64, f64)>,
    fr3_index: Vec<usize>,
}

impl Kernel {
    fn new<R: Real>(p: &SystemParams<R>) -> Result<Self> {
        let radius = p.cell_radius().as_f64();
        let layout = p.layout();
        let norm = |q: &Point<R>| (q.x.as_f64() / radius, q.y.as_f64() / radius);
        let fr1: Vec<(f64, f64)> = layout.interferers(crate::geometry::InterfererSet::Fr1).iter().map(norm).collect();
        let fr3_index = layout
            .interferers(crate::geometry::InterfererSet::Fr3)
            .iter()
            .map(|q| {
                let c = norm(q);
                fr1.iter()
                    .position(|&f| (f.0 - c.0).abs() < 1e-9 && (f.1 - c.1).abs() < 1e-9)
                    .ok_or_else(|| FfrError::param("every FR3 interferer must also be an FR1 interferer"))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            alpha: p.alpha().as_f64(),
            target: p.target().as_f64(),
            threshold: p.threshold().as_f64(),
            noise: p.noise_over_power().as_f64(),
            min_radius: p.min_radius().as_f64() / radius,
            fr1,
            fr3_index,
        })
    }

    fn place<G: Rng + ?Sized, R: Real>(&self, placement: &Placement<R>, radius: f64, rng: &mut G) -> (f64, f64) {
        let two_pi = std::f64::consts::TAU;
        let polar = |r: f64, t: f64| (r * t.cos(), r * t.sin());
        match *placement {
            Placement::UniformDisk => {
                let d2 = self.min_radius * self.min_radius;
                let u: f64 = rng.random();
                polar((d2 + u * (1.0 - d2)).sqrt(), two_pi * rng.random::<f64>())
            }
            Placement::UniformHexagon => loop {
                let rho = 2.0 / 3f64.sqrt();
                let x = rho * (2.0 * rng.random::<f64>() - 1.0);
                let y = rho * (2.0 * rng.random::<f64>() - 1.0);
                if in_unit_hexagon(x, y) && x * x + y * y >= self.min_radius * self.min_radius {
                    break (x, y);
                }
            },
            Placement::Ring(r) => polar(r.as_f64() / radius, two_pi * rng.random::<f64>()),
            Placement::Point { r, theta } => polar(r.as_f64() / radius, theta.as_f64()),
        }
    }

    /// `(η, η̂)` for a user at normalized `(x, y)`.
    fn sinr(&self, (x, y): (f64, f64), f: &FadingDraw, path: &mut [f64]) -> (f64, f64) {
        let half = -0.5 * self.alpha;
        let mut i1 = 0.0;
        for (k, &(bx, by)) in self.fr1.iter().enumerate() {
            let d2 = (bx - x).powi(2) + (by - y).powi(2);
            path[k] = d2.powf(half);
            i1 += f.h[k] * path[k];
        }
        let i3: f64 = self.fr3_index.iter().map(|&k| f.h_hat[k] * path[k]).sum();
        let s = (x * x + y * y).powf(half);
        (f.g * s / (i1 + self.noise), f.g_hat * s / (i3 + self.noise))
    }

    fn eval(&self, q: Quantity, eta: f64, eta3: f64) -> f64 {
        let (t, s) = (self.target, self.threshold);
        let ind = |b: bool| if b { 1.0 } else { 0.0 };
        let centre = eta >= s;
        match q {
            Quantity::CoverageFr1 => ind(eta > t),
            Quantity::CoverageFr3 => ind(eta3 > t),
            Quantity::CoverageFfr => ind(if centre { eta > t } else { eta3 > t }),
            Quantity::CentreFraction => ind(centre),
            Quantity::CentreCovered => ind(centre && eta > t),
            Quantity::EdgeCovered => ind(!centre && eta3 > t),
            Quantity::RateFr1 => ind(eta > t) * eta.ln_1p(),
            Quantity::RateFr3 => ind(eta3 > t) * eta3.ln_1p(),
            Quantity::RateFfr => {
                if centre {
                    ind(eta > t) * eta.ln_1p()
                } else {
                    ind(eta3 > t) * eta3.ln_1p() / 3.0
                }
            }
        }
    }
}

fn in_unit_hexagon(x: f64, y: f64) -> bool {
    // flat-topped relative to the sites at 0°, 60°, ...: inradius 1
    let (x, y) = (x.abs(), y.abs());
    let c = 3f64.sqrt() / 2.0;
    x <= 1.0 && 0.5 * x + c * y <= 1.0
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Estimates the means of `quantities` from one shared set of samples.
/// `stream_offset` separates independent runs under the same seed.
fn run<R: Real>(cfg: &SimConfig<R>, quantities: &[Quantity], stream_offset: u64) -> Result<Vec<Estimate>> {
    cfg.validate()?;
    if cfg.params.noise_over_power() > R::zero() && quantities.iter().any(|q| q.is_rate()) {
        return Err(FfrError::param("rate estimators are interference-limited; set noise_over_power to 0"));
    }
    let kernel = Kernel::new(&cfg.params)?;
    let sampler = FadingSampler::new(cfg.mode.clone())?;
    let radius = cfg.params.cell_radius().as_f64();
    let n_streams = cfg.n_streams as u64;
    let per = cfg.n_samples / n_streams;
    let extra = cfg.n_samples % n_streams;
    let nq = quantities.len();

    let sums: Vec<Vec<(f64, f64)>> = (0..n_streams)
        .into_par_iter()
        .map(|i| {
            let n = per + u64::from(i < extra);
            let mut rng = stream_rng(cfg.seed, stream_offset * n_streams + i);
            let mut draw = FadingDraw::default();
            let mut path = vec![0.0; kernel.fr1.len()];
            let mut acc = vec![(0.0, 0.0); nq];
            for _ in 0..n {
                let pos = kernel.place(&cfg.placement, radius, &mut rng);
                sampler.draw_into(&mut rng, kernel.fr1.len(), &mut draw);
                let (eta, eta3) = kernel.sinr(pos, &draw, &mut path);
                for (a, &q) in acc.iter_mut().zip(quantities) {
                    let v = kernel.eval(q, eta, eta3);
                    a.0 += v;
                    a.1 += v * v;
                }
            }
            acc
        })
        .collect();

    let mut total = vec![(0.0, 0.0); nq];
    for s in &sums {
        for (t, v) in total.iter_mut().zip(s) {
            t.0 += v.0;
            t.1 += v.1;
        }
    }
    Ok(total.into_iter().map(|(s, s2)| Estimate::from_sums(s, s2, cfg.n_samples)).collect())
}

/// Estimates several quantities from the same samples.
pub fn simulate<R: Real>(cfg: &SimConfig<R>, quantities: &[Quantity]) -> Result<Vec<Estimate>> {
    run(cfg, quantities, 0)
}

/// `P[SINR > T]` under FR1, FR3 or FFR classification.
pub fn simulate_coverage<R: Real>(cfg: &SimConfig<R>, scheme: Scheme) -> Result<Estimate> {
    let q = match scheme {
        Scheme::Fr1 => Quantity::CoverageFr1,
        Scheme::Fr3 => Quantity::CoverageFr3,
        Scheme::Ffr => Quantity::CoverageFfr,
    };
    Ok(run(cfg, &[q], 0)?[0])
}

/// Normalized average rate `E[ln(1 + SIR)·1{SIR > T}]`. The FR3 estimate is
/// over its full band; FFR edge users carry the one-third bandwidth factor.
pub fn simulate_rate<R: Real>(cfg: &SimConfig<R>, scheme: Scheme) -> Result<Estimate> {
    let q = match scheme {
        Scheme::Fr1 => Quantity::RateFr1,
        Scheme::Fr3 => Quantity::RateFr3,
        Scheme::Ffr => Quantity::RateFfr,
    };
    Ok(run(cfg, &[q], 0)?[0])
}

/// Estimates `quantities` on rings of each radius in `r_grid`, angle uniform.
/// Each radius uses its own block of streams.
pub fn simulate_vs_distance<R: Real>(cfg: &SimConfig<R>, r_grid: &[R], quantities: &[Quantity]) -> Result<Vec<(R, Vec<Estimate>)>> {
    r_grid
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let ring = cfg.clone().with_placement(Placement::Ring(r));
            Ok((r, run(&ring, quantities, 1 + k as u64)?))
        })
        .collect()
}

/// Fraction of users classified cell-edge, `P[η < S]`, at each radius.
pub fn edge_fraction_vs_distance<R: Real>(cfg: &SimConfig<R>, r_grid: &[R]) -> Result<Vec<(R, Estimate)>> {
    Ok(simulate_vs_distance(cfg, r_grid, &[Quantity::CentreFraction])?
        .into_iter()
        .map(|(r, e)| (r, Estimate { value: 1.0 - e[0].value, ..e[0] }))
        .collect())
}

/// FFR coverage at each radius under the configured fading mode, typically a
/// tapped-delay-line channel.
pub fn simulate_tdl_ffr_coverage<R: Real>(cfg: &SimConfig<R>, r_grid: &[R]) -> Result<Vec<(R, Estimate)>> {
    Ok(simulate_vs_distance(cfg, r_grid, &[Quantity::CoverageFfr])?.into_iter().map(|(r, e)| (r, e[0])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_layout;

    fn cfg(mode: CorrelationMode, n: u64) -> SimConfig<f64> {
        let p = SystemParams::from_db(3.0, 0.0, 0.0, 0.0, build_layout(1.0).unwrap()).unwrap();
        SimConfig::new(p, mode, n)
    }

    #[test]
    fn estimate_statistics() {
        let e = Estimate::from_sums(3.0, 3.0, 4);
        assert_eq!(e.value, 0.75);
        assert!((e.std_error - (0.25f64 / 4.0).sqrt()).abs() < 1e-15);
        assert!(e.within(0.75, 0.0));
        assert!((Estimate { value: 1.0, std_error: 0.0, n_samples: 100 }.z_score(0.99) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hexagon_membership() {
        assert!(in_unit_hexagon(0.99, 0.0));
        assert!(!in_unit_hexagon(1.01, 0.0));
        assert!(in_unit_hexagon(0.5, 0.85));
        assert!(!in_unit_hexagon(0.0, 1.01 * 2.0 / 3f64.sqrt()));
    }

    #[test]
    fn fr3_indices_point_at_second_ring_corners() {
        let c = cfg(CorrelationMode::Independent, 1);
        let k = Kernel::new(&c.params).unwrap();
        assert_eq!(k.fr3_index.len(), 6);
        for &i in &k.fr3_index {
            let (x, y) = k.fr1[i];
            assert!(((x * x + y * y).sqrt() - 2.0 * 3f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_and_stream_count_sensitive() {
        let c = cfg(CorrelationMode::Independent, 10_000);
        let a = simulate_coverage(&c, Scheme::Ffr).unwrap();
        let b = simulate_coverage(&c, Scheme::Ffr).unwrap();
        assert_eq!(a, b);
        let other = simulate_coverage(&c.clone().with_seed(7), Scheme::Ffr).unwrap();
        assert_ne!(a.value, other.value);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let c = cfg(CorrelationMode::FullyCorrelated, 20_000);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| simulate(&c, &[Quantity::CoverageFfr, Quantity::RateFfr]).unwrap());
        let b = four.install(|| simulate(&c, &[Quantity::CoverageFfr, Quantity::RateFfr]).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn trivial_limits() {
        let c = cfg(CorrelationMode::Independent, 2_000);
        let low = SimConfig { params: c.params.clone().with_target_db(-80.0).unwrap(), ..c.clone() };
        assert!(simulate_coverage(&low, Scheme::Ffr).unwrap().value > 0.999);
        let high = SimConfig { params: c.params.clone().with_target_db(80.0).unwrap(), ..c.clone() };
        assert_eq!(simulate_rate(&high, Scheme::Fr1).unwrap().value, 0.0);
        let s0 = SimConfig { params: c.params.clone().with_threshold_db(-80.0).unwrap(), ..c };
        let edge = edge_fraction_vs_distance(&s0, &[0.2, 0.9]).unwrap();
        assert!(edge.iter().all(|(_, e)| e.value < 1e-3));
    }

    #[test]
    fn rejects_invalid_configs() {
        let c = cfg(CorrelationMode::Independent, 0);
        assert!(simulate_coverage(&c, Scheme::Fr1).is_err());
        let c = cfg(CorrelationMode::Independent, 10).with_placement(Placement::Ring(1.5));
        assert!(simulate_coverage(&c, Scheme::Fr1).is_err());
        let mut c = cfg(CorrelationMode::Independent, 10);
        c.params = c.params.with_noise_over_power(0.1).unwrap();
        assert!(simulate_rate(&c, Scheme::Fr1).is_err());
        assert!(simulate_coverage(&c, Scheme::Fr1).is_ok());
    }

    #[test]
    fn fully_correlated_ffr_with_threshold_above_target_is_fr3() {
        // η̂ ≥ η pointwise, so the FFR success event equals the FR3 one
        let mut c = cfg(CorrelationMode::FullyCorrelated, 20_000);
        c.params = c.params.with_threshold_db(3.0).unwrap();
        let e = simulate(&c, &[Quantity::CoverageFfr, Quantity::CoverageFr3]).unwrap();
        assert_eq!(e[0].value, e[1].value);
    }
}
