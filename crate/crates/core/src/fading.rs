//! Rayleigh fading powers for the serving and interfering links on the
//! centre (FR1) and edge (FR3) sub-bands.
//!
//! The three regimes differ only in how the edge-band powers `ĝ`, `ĥ_i`
//! relate to the centre-band powers `g`, `h_i`: fresh draws, identical
//! copies, or two subcarriers of one tapped-delay-line frequency response.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{FfrError, Result};

pub const DEFAULT_SAMPLING_RATE_HZ: f64 = 7.68e6;
pub const DEFAULT_FFT_SIZE: usize = 512;
pub const DEFAULT_BANDWIDTH_HZ: f64 = 5.0e6;

fn default_sampling_rate() -> f64 {
    DEFAULT_SAMPLING_RATE_HZ
}

fn default_fft_size() -> usize {
    DEFAULT_FFT_SIZE
}

fn default_bandwidth() -> f64 {
    DEFAULT_BANDWIDTH_HZ
}

/// Multipath power delay profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelProfile {
    pub name: String,
    pub delays_ns: Vec<f64>,
    pub powers_db: Vec<f64>,
    #[serde(default = "default_sampling_rate")]
    pub sampling_rate_hz: f64,
    #[serde(default = "default_fft_size")]
    pub fft_size: usize,
    #[serde(default = "default_bandwidth")]
    pub bandwidth_hz: f64,
}

/// One discrete tap after rounding to the sampling grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    pub sample: usize,
    /// Linear power; the taps of a profile sum to one.
    pub power: f64,
}

impl ChannelProfile {
    pub fn new(name: impl Into<String>, delays_ns: Vec<f64>, powers_db: Vec<f64>) -> Result<Self> {
        let p = Self {
            name: name.into(),
            delays_ns,
            powers_db,
            sampling_rate_hz: DEFAULT_SAMPLING_RATE_HZ,
            fft_size: DEFAULT_FFT_SIZE,
            bandwidth_hz: DEFAULT_BANDWIDTH_HZ,
        };
        p.validate()?;
        Ok(p)
    }

    /// ITU Pedestrian A.
    pub fn pedestrian_a() -> Self {
        Self::new("pedA", vec![0.0, 110.0, 190.0, 410.0], vec![0.0, -9.7, -19.2, -22.8]).expect("valid built-in profile")
    }

    /// ITU Vehicular A.
    pub fn vehicular_a() -> Self {
        Self::new(
            "vehA",
            vec![0.0, 310.0, 710.0, 1090.0, 1730.0, 2510.0],
            vec![0.0, -1.0, -9.0, -10.0, -15.0, -20.0],
        )
        .expect("valid built-in profile")
    }

    /// Single zero-delay tap: a frequency-flat channel.
    pub fn flat() -> Self {
        Self::new("flat", vec![0.0], vec![0.0]).expect("valid built-in profile")
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "peda" | "pedestrian_a" => Some(Self::pedestrian_a()),
            "veha" | "vehicular_a" => Some(Self::vehicular_a()),
            "flat" => Some(Self::flat()),
            _ => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text).map_err(|e| FfrError::config(format!("channel profile: {e}")))?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| FfrError::config(format!("reading {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.delays_ns.is_empty() {
            return Err(FfrError::config(format!("profile {:?} has no taps", self.name)));
        }
        if self.delays_ns.len() != self.powers_db.len() {
            return Err(FfrError::config(format!(
                "profile {:?}: {} delays but {} powers",
                self.name,
                self.delays_ns.len(),
                self.powers_db.len()
            )));
        }
        if self.delays_ns[0] != 0.0 {
            return Err(FfrError::config(format!("profile {:?}: first delay must be 0 ns", self.name)));
        }
        if self.delays_ns.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(FfrError::config(format!("profile {:?}: delays must be strictly increasing", self.name)));
        }
        if self.powers_db.iter().any(|p| !p.is_finite()) {
            return Err(FfrError::config(format!("profile {:?}: tap powers must be finite", self.name)));
        }
        if !(self.sampling_rate_hz > 0.0) || self.fft_size == 0 || !(self.bandwidth_hz > 0.0) {
            return Err(FfrError::config(format!("profile {:?}: invalid numerology", self.name)));
        }
        if self.bandwidth_hz > self.sampling_rate_hz {
            return Err(FfrError::config(format!("profile {:?}: bandwidth exceeds the sampling rate", self.name)));
        }
        let symbol_ns = 1e9 * self.fft_size as f64 / self.sampling_rate_hz;
        let max_delay = self.delays_ns[self.delays_ns.len() - 1];
        if max_delay >= symbol_ns {
            return Err(FfrError::config(format!(
                "profile {:?}: delay spread {max_delay} ns exceeds the {symbol_ns} ns symbol",
                self.name
            )));
        }
        Ok(())
    }

    pub fn subcarrier_spacing_hz(&self) -> f64 {
        self.sampling_rate_hz / self.fft_size as f64
    }

    /// Taps rounded to the nearest sample, coincident taps merged, powers
    /// normalized to unit sum.
    pub fn discrete_taps(&self) -> Vec<Tap> {
        let mut taps: Vec<Tap> = Vec::with_capacity(self.delays_ns.len());
        for (&d, &p) in self.delays_ns.iter().zip(&self.powers_db) {
            let sample = (d * 1e-9 * self.sampling_rate_hz).round() as usize;
            let power = 10f64.powf(p / 10.0);
            match taps.last_mut() {
                Some(last) if last.sample == sample => last.power += power,
                _ => taps.push(Tap { sample, power }),
            }
        }
        let total: f64 = taps.iter().map(|t| t.power).sum();
        for t in &mut taps {
            t.power /= total;
        }
        taps
    }

    /// RMS delay spread of the discretized profile, in seconds.
    pub fn rms_delay_spread(&self) -> f64 {
        let taps = self.discrete_taps();
        let ts = 1.0 / self.sampling_rate_hz;
        let mean: f64 = taps.iter().map(|t| t.power * t.sample as f64 * ts).sum();
        let second: f64 = taps.iter().map(|t| t.power * (t.sample as f64 * ts).powi(2)).sum();
        (second - mean * mean).max(0.0).sqrt()
    }
}

/// Where within a band the channel is sampled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandPoint {
    #[default]
    Centre,
    /// Subcarrier at this position within the band, counted from its lowest.
    Offset(usize),
}

/// Subcarrier allocation of the centre band F0 and the three edge bands.
///
/// Subcarriers are signed offsets from DC; DC itself is unused.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubbandPlan {
    pub used_subcarriers: usize,
    pub centre_band: Vec<i32>,
    pub edge_bands: [Vec<i32>; 3],
    /// Edge band assigned to the serving cell and its co-channel interferers.
    pub serving_edge_band: usize,
    pub representative: BandPoint,
}

impl Default for SubbandPlan {
    fn default() -> Self {
        Self::lte(300).expect("valid default plan")
    }
}

impl SubbandPlan {
    /// Lower half of the used subcarriers for F0, upper half split in three.
    pub fn lte(used_subcarriers: usize) -> Result<Self> {
        if used_subcarriers < 6 || !used_subcarriers.is_multiple_of(6) {
            return Err(FfrError::param(format!(
                "used subcarrier count must be a positive multiple of 6, got {used_subcarriers}"
            )));
        }
        let half = (used_subcarriers / 2) as i32;
        let third = half / 3;
        let centre_band = (-half..0).collect();
        let edge = |b: i32| (1 + b * third..1 + (b + 1) * third).collect::<Vec<_>>();
        Ok(Self {
            used_subcarriers,
            centre_band,
            edge_bands: [edge(0), edge(1), edge(2)],
            serving_edge_band: 0,
            representative: BandPoint::Centre,
        })
    }

    pub fn validate(&self, profile: &ChannelProfile) -> Result<()> {
        let limit = (self.used_subcarriers / 2) as i32;
        if self.used_subcarriers as f64 * profile.subcarrier_spacing_hz() > profile.sampling_rate_hz {
            return Err(FfrError::config("plan uses more subcarriers than the FFT provides"));
        }
        if self.serving_edge_band >= 3 {
            return Err(FfrError::config("serving edge band index must be 0, 1 or 2"));
        }
        let n = self.edge_bands[0].len();
        if self.edge_bands.iter().any(|b| b.len() != n) {
            return Err(FfrError::config("edge bands must be of equal size"));
        }
        let mut all: Vec<i32> = self.centre_band.iter().chain(self.edge_bands.iter().flatten()).copied().collect();
        if all.iter().any(|&k| k == 0 || k.abs() > limit) {
            return Err(FfrError::config("band contains DC or an unused subcarrier"));
        }
        let len = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != len {
            return Err(FfrError::config("bands overlap"));
        }
        for band in std::iter::once(&self.centre_band).chain(self.edge_bands.iter()) {
            self.pick(band)?;
        }
        Ok(())
    }

    fn pick(&self, band: &[i32]) -> Result<i32> {
        let i = match self.representative {
            BandPoint::Centre => band.len() / 2,
            BandPoint::Offset(i) => i,
        };
        band.get(i).copied().ok_or_else(|| FfrError::config(format!("band point {i} outside a band of {}", band.len())))
    }

    /// Representative subcarriers of F0 and of the serving edge band.
    pub fn representative_subcarriers(&self) -> Result<(i32, i32)> {
        Ok((self.pick(&self.centre_band)?, self.pick(&self.edge_bands[self.serving_edge_band])?))
    }
}

/// Tapped-delay-line channel on a sub-band plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdlChannel {
    pub profile: ChannelProfile,
    #[serde(default)]
    pub plan: SubbandPlan,
}

impl TdlChannel {
    pub fn new(profile: ChannelProfile) -> Self {
        Self { profile, plan: SubbandPlan::default() }
    }
}

/// Relationship between centre-band and edge-band fading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationMode {
    Independent,
    FullyCorrelated,
    TappedDelayLine(TdlChannel),
}

/// Fading powers of one user: serving link and each interferer on both bands.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FadingDraw {
    pub g: f64,
    pub g_hat: f64,
    pub h: Vec<f64>,
    pub h_hat: Vec<f64>,
}

/// Precomputed per-tap amplitudes and subcarrier phasors.
#[derive(Debug, Clone)]
struct TdlState {
    amplitude: Vec<f64>,
    phasor_centre: Vec<Complex64>,
    phasor_edge: Vec<Complex64>,
}

impl TdlState {
    fn new(ch: &TdlChannel) -> Result<Self> {
        ch.profile.validate()?;
        ch.plan.validate(&ch.profile)?;
        let (kc, ke) = ch.plan.representative_subcarriers()?;
        let taps = ch.profile.discrete_taps();
        let n = ch.profile.fft_size as f64;
        let phasor = |k: i32| -> Vec<Complex64> {
            taps.iter().map(|t| Complex64::from_polar(1.0, -2.0 * PI * k as f64 * t.sample as f64 / n)).collect()
        };
        Ok(Self {
            amplitude: taps.iter().map(|t| (t.power / 2.0).sqrt()).collect(),
            phasor_centre: phasor(kc),
            phasor_edge: phasor(ke),
        })
    }

    fn draw<G: Rng + ?Sized>(&self, rng: &mut G) -> (f64, f64) {
        let mut hc = Complex64::new(0.0, 0.0);
        let mut he = Complex64::new(0.0, 0.0);
        for ((a, pc), pe) in self.amplitude.iter().zip(&self.phasor_centre).zip(&self.phasor_edge) {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let c = Complex64::new(a * re, a * im);
            hc += c * pc;
            he += c * pe;
        }
        (hc.norm_sqr(), he.norm_sqr())
    }
}

/// Draws [`FadingDraw`]s for a fixed mode.
#[derive(Debug, Clone)]
pub struct FadingSampler {
    mode: CorrelationMode,
    tdl: Option<TdlState>,
}

impl FadingSampler {
    pub fn new(mode: CorrelationMode) -> Result<Self> {
        let tdl = match &mode {
            CorrelationMode::TappedDelayLine(ch) => Some(TdlState::new(ch)?),
            _ => None,
        };
        Ok(Self { mode, tdl })
    }

    pub fn mode(&self) -> &CorrelationMode {
        &self.mode
    }

    fn pair<G: Rng + ?Sized>(&self, rng: &mut G) -> (f64, f64) {
        match (&self.mode, &self.tdl) {
            (_, Some(tdl)) => tdl.draw(rng),
            (CorrelationMode::FullyCorrelated, _) => {
                let x: f64 = rng.sample(Exp1);
                (x, x)
            }
            _ => (rng.sample(Exp1), rng.sample(Exp1)),
        }
    }

    /// Fills `out` with fresh powers for `n_interferers` interferers.
    pub fn draw_into<G: Rng + ?Sized>(&self, rng: &mut G, n_interferers: usize, out: &mut FadingDraw) {
        (out.g, out.g_hat) = self.pair(rng);
        out.h.resize(n_interferers, 0.0);
        out.h_hat.resize(n_interferers, 0.0);
        for i in 0..n_interferers {
            (out.h[i], out.h_hat[i]) = self.pair(rng);
        }
    }

    pub fn draw<G: Rng + ?Sized>(&self, rng: &mut G, n_interferers: usize) -> FadingDraw {
        let mut out = FadingDraw::default();
        self.draw_into(rng, n_interferers, &mut out);
        out
    }
}

/// One draw of `(g, ĝ, h, ĥ)` under `mode`.
pub fn draw_powers<G: Rng + ?Sized>(mode: &CorrelationMode, n_interferers: usize, rng: &mut G) -> Result<FadingDraw> {
    Ok(FadingSampler::new(mode.clone())?.draw(rng, n_interferers))
}

/// Correlation coefficient of `|H(f1)|²` and `|H(f2)|²` for Rayleigh taps:
/// `|Σ p_l exp(-j2π(f1 - f2)τ_l)|²`, frequencies relative to the carrier.
pub fn subband_correlation(profile: &ChannelProfile, f1: f64, f2: f64) -> Result<f64> {
    profile.validate()?;
    let half = profile.bandwidth_hz / 2.0;
    for f in [f1, f2] {
        if !f.is_finite() || f.abs() > half {
            return Err(FfrError::param(format!("frequency {f} Hz outside ±{half} Hz")));
        }
    }
    let ts = 1.0 / profile.sampling_rate_hz;
    let df = f1 - f2;
    let s: Complex64 = profile
        .discrete_taps()
        .iter()
        .map(|t| t.power * Complex64::from_polar(1.0, -2.0 * PI * df * t.sample as f64 * ts))
        .sum();
    Ok(s.norm_sqr().min(1.0))
}
