//! Closed-form coverage probabilities and normalized average rates.
//!
//! With Rayleigh fading every coverage event reduces to a product of Laplace
//! transforms, `∏ 1/(1 + x·(r/d_i)^α) · exp(-x·(r/R)^α·σ²/P)`. Rates integrate
//! that product over `t` with `x = max{e^t - 1, floor}`; spatial averages are
//! taken over a [`SpatialGrid`] of weighted user positions.
//!
//! Noise enters the coverage expressions only. Rate expressions are
//! interference-limited and ignore `noise_over_power`. The noise coefficient
//! uses distances normalized by the cell radius, so `noise_over_power` is the
//! noise-to-signal ratio of a user at the cell edge without fading.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FfrError, Result};
use crate::geometry::{interferer_distances, InterfererSet, NetworkLayout, UserPosition};
use crate::numerics::{adaptive_gk15, brent, GaussLegendre, QuadratureTolerance};
use crate::scalar::{db_to_linear, linear_to_db, Real};

/// Sub-band fading relationship used by the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correlation {
    /// Edge-band fading is an independent draw.
    Independent,
    /// Edge-band fading equals centre-band fading.
    FullyCorrelated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams<R> {
    alpha: R,
    target: R,
    threshold: R,
    noise_over_power: R,
    min_radius: R,
    layout: NetworkLayout<R>,
}

impl<R: Real> SystemParams<R> {
    /// Thresholds are given in dB and stored as linear power ratios.
    pub fn from_db(alpha: R, target_db: R, threshold_db: R, noise_over_power: R, layout: NetworkLayout<R>) -> Result<Self> {
        Self::new(alpha, db_to_linear(target_db), db_to_linear(threshold_db), noise_over_power, layout)
    }

    pub fn new(alpha: R, target: R, threshold: R, noise_over_power: R, layout: NetworkLayout<R>) -> Result<Self> {
        let p = Self { alpha, target, threshold, noise_over_power, min_radius: R::zero(), layout };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha >= R::lit(2.0) && self.alpha.is_finite()) {
            return Err(FfrError::param(format!("path-loss exponent must be finite and >= 2, got {}", self.alpha)));
        }
        if !(self.target > R::zero()) || self.target.is_nan() {
            return Err(FfrError::param(format!("target SINR must be positive, got {}", self.target)));
        }
        if !(self.threshold > R::zero()) || self.threshold.is_nan() {
            return Err(FfrError::param(format!("classification threshold must be positive, got {}", self.threshold)));
        }
        if !(self.noise_over_power >= R::zero() && self.noise_over_power.is_finite()) {
            return Err(FfrError::param(format!("noise-to-power ratio must be finite and >= 0, got {}", self.noise_over_power)));
        }
        if !(self.min_radius >= R::zero() && self.min_radius < self.layout.cell_radius()) {
            return Err(FfrError::param(format!(
                "minimum user distance must lie in [0, R), got {}",
                self.min_radius
            )));
        }
        Ok(())
    }

    pub fn with_target(mut self, target: R) -> Result<Self> {
        self.target = target;
        self.validate()?;
        Ok(self)
    }

    pub fn with_threshold(mut self, threshold: R) -> Result<Self> {
        self.threshold = threshold;
        self.validate()?;
        Ok(self)
    }

    pub fn with_target_db(self, db: R) -> Result<Self> {
        self.with_target(db_to_linear(db))
    }

    pub fn with_threshold_db(self, db: R) -> Result<Self> {
        self.with_threshold(db_to_linear(db))
    }

    pub fn with_alpha(mut self, alpha: R) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    pub fn with_noise_over_power(mut self, noise: R) -> Result<Self> {
        self.noise_over_power = noise;
        self.validate()?;
        Ok(self)
    }

    /// Users closer than `d` to the serving site are excluded from spatial averages.
    pub fn with_min_radius(mut self, d: R) -> Result<Self> {
        self.min_radius = d;
        self.validate()?;
        Ok(self)
    }

    pub fn alpha(&self) -> R {
        self.alpha
    }
    pub fn target(&self) -> R {
        self.target
    }
    pub fn threshold(&self) -> R {
        self.threshold
    }
    pub fn target_db(&self) -> R {
        linear_to_db(self.target)
    }
    pub fn threshold_db(&self) -> R {
        linear_to_db(self.threshold)
    }
    pub fn noise_over_power(&self) -> R {
        self.noise_over_power
    }
    pub fn min_radius(&self) -> R {
        self.min_radius
    }
    pub fn layout(&self) -> &NetworkLayout<R> {
        &self.layout
    }
    pub fn cell_radius(&self) -> R {
        self.layout.cell_radius()
    }

    pub fn radial_pdf(&self) -> RadialPdf<R> {
        RadialPdf { radius: self.cell_radius(), min_radius: self.min_radius }
    }
}

/// Distance of a uniformly placed user inside the inradius disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPdf<R> {
    radius: R,
    min_radius: R,
}

impl<R: Real> RadialPdf<R> {
    pub fn new(radius: R) -> Result<Self> {
        if !(radius > R::zero() && radius.is_finite()) {
            return Err(FfrError::param("radius must be positive"));
        }
        Ok(Self { radius, min_radius: R::zero() })
    }

    /// `2r / (R² - d²)` on `[d, R]`, zero elsewhere.
    pub fn density(&self, r: R) -> R {
        if r < self.min_radius || r > self.radius || r < R::zero() {
            return R::zero();
        }
        R::lit(2.0) * r / (self.radius * self.radius - self.min_radius * self.min_radius)
    }

    pub fn cdf(&self, r: R) -> R {
        let d2 = self.min_radius * self.min_radius;
        let rr = r.max(self.min_radius).min(self.radius);
        (rr * rr - d2) / (self.radius * self.radius - d2)
    }

    /// Inverse CDF for `u ∈ [0, 1]`.
    pub fn quantile(&self, u: R) -> R {
        let d2 = self.min_radius * self.min_radius;
        (d2 + u * (self.radius * self.radius - d2)).sqrt()
    }
}

/// Normalized path-gain ratios `(r/d_i)^α` of one user position.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkGains<R> {
    pub fr1: Vec<R>,
    pub fr3: Vec<R>,
    /// `(r/R)^α · σ²/P`
    pub noise: R,
}

impl<R: Real> LinkGains<R> {
    pub fn new(params: &SystemParams<R>, user: &UserPosition<R>) -> Self {
        let r = user.r();
        let alpha = params.alpha();
        let ratio = |d: R| if r == R::zero() { R::zero() } else { (r / d).powf(alpha) };
        let fr1 = interferer_distances(params.layout(), user, InterfererSet::Fr1).into_iter().map(ratio).collect();
        let fr3 = interferer_distances(params.layout(), user, InterfererSet::Fr3).into_iter().map(ratio).collect();
        let noise = if r == R::zero() {
            R::zero()
        } else {
            (r / params.cell_radius()).powf(alpha) * params.noise_over_power()
        };
        Self { fr1, fr3, noise }
    }

    pub fn set(&self, set: InterfererSet) -> &[R] {
        match set {
            InterfererSet::Fr1 => &self.fr1,
            InterfererSet::Fr3 => &self.fr3,
        }
    }

    /// `P[SINR > x]` on the given reuse pattern, noise included.
    pub fn coverage(&self, set: InterfererSet, x: R) -> R {
        laplace_product(self.set(set), x) * (-x * self.noise).exp()
    }

    /// `P[SIR > x]`, the interference-limited coverage used by rate expressions.
    pub fn sir_coverage(&self, set: InterfererSet, x: R) -> R {
        laplace_product(self.set(set), x)
    }

    /// `-d/dx P[SIR > x]` on FR1: `P · Σ a_i / (1 + x a_i)`.
    pub fn sir_coverage_slope_fr1(&self, x: R) -> R {
        let s: R = self.fr1.iter().map(|&a| a / (R::one() + x * a)).sum();
        laplace_product(&self.fr1, x) * s
    }

    /// `∫_0^∞ P[SIR > max{e^t - 1, floor}] dt`.
    pub fn rate_integral(&self, set: InterfererSet, floor: R, tol: QuadratureTolerance) -> Result<R> {
        rate_integral(self.set(set), floor, tol)
    }
}

fn laplace_product<R: Real>(gains: &[R], x: R) -> R {
    let mut p = R::one();
    for &a in gains {
        p = p / (R::one() + x * a);
    }
    p
}

/// `∫_0^∞ ∏ 1/(1 + max{e^t - 1, floor}·a_i) dt`.
///
/// The flat part below `ln(1 + floor)` is integrated exactly. The remainder is
/// truncated where the integrand falls below `1e-12` of its starting value.
pub fn rate_integral<R: Real>(gains: &[R], floor: R, tol: QuadratureTolerance) -> Result<R> {
    let floor = floor.max(R::zero());
    let t0 = floor.ln_1p();
    let head = t0 * laplace_product(gains, floor);
    Ok(head + rate_tail(gains, t0, tol)?)
}

fn rate_tail<R: Real>(gains: &[R], t0: R, tol: QuadratureTolerance) -> Result<R> {
    if gains.iter().all(|&a| a <= R::zero()) {
        return Err(FfrError::numerical(
            "rate_integral",
            "all path-gain ratios vanish (user at the serving site); rate is unbounded",
        ));
    }
    let h = |t: R| laplace_product(gains, t.exp_m1());
    let h0 = h(t0);
    if h0 == R::zero() {
        return Ok(R::zero());
    }
    let cutoff = R::lit(1e-12) * h0;
    let mut width = R::one();
    let mut t_end = t0 + width;
    while h(t_end) > cutoff {
        width = width * R::lit(2.0);
        t_end = t0 + width;
        if width > R::lit(4096.0) {
            return Err(FfrError::numerical("rate_integral", format!("integrand still {} at t = {t_end}", h(t_end))));
        }
    }
    Ok(adaptive_gk15(h, t0, t_end, tol)?.value)
}

/// `K(T, r)` for `exact`, else `K(r)`: one third of the FR3 rate integral.
pub fn k_of_gains<R: Real>(gains: &LinkGains<R>, target: R, exact: bool, tol: QuadratureTolerance) -> Result<R> {
    let floor = if exact { target } else { R::zero() };
    Ok(gains.rate_integral(InterfererSet::Fr3, floor, tol)? / R::lit(3.0))
}

/// FR3-domain threshold `Ŝ` with `P[η̂ < Ŝ] = P[η < S]`.
///
/// Since the FR3 SINR dominates the FR1 SINR, `Ŝ ≥ S`. Solved in log space.
pub fn shat_of_gains<R: Real>(gains: &LinkGains<R>, threshold: R, with_noise: bool) -> Result<R> {
    let noise = if with_noise { gains.noise } else { R::zero() };
    let log_cov = |set: &[R], x: R| -> R {
        let s: R = set.iter().map(|&a| (x * a).ln_1p()).sum();
        -s - x * noise
    };
    let target = log_cov(&gains.fr1, threshold);
    let f = |x: R| log_cov(&gains.fr3, x) - target;
    if f(threshold) <= R::zero() {
        return Ok(threshold);
    }
    let mut hi = threshold * R::lit(2.0);
    let mut expansions = 0;
    while f(hi) > R::zero() {
        hi = hi * R::lit(2.0);
        expansions += 1;
        if expansions > 400 || !hi.is_finite() {
            return Err(FfrError::numerical(
                "shat_threshold",
                format!("no bracket above S = {threshold}: log-coverage gap {} at {hi}", f(hi)),
            ));
        }
    }
    let lo = if expansions == 0 { threshold } else { hi / R::lit(2.0) };
    let root = brent(f, lo, hi, threshold * R::tol(1e-15), 200)?;
    Ok(root.x)
}

/// FFR coverage of one user position: `(centre, edge, total)`.
pub fn ffr_coverage_parts<R: Real>(gains: &LinkGains<R>, target: R, threshold: R, mode: Correlation) -> Result<(R, R, R)> {
    let cp1_s = gains.coverage(InterfererSet::Fr1, threshold);
    let cp1_joint = gains.coverage(InterfererSet::Fr1, target.max(threshold));
    let cp3_t = gains.coverage(InterfererSet::Fr3, target);
    let centre = if cp1_s > R::zero() { cp1_joint / cp1_s } else { R::one() };
    let p_edge = R::one() - cp1_s;
    match mode {
        Correlation::Independent => {
            let total = cp1_joint + cp3_t - cp3_t * cp1_s;
            Ok((centre, cp3_t, total))
        }
        Correlation::FullyCorrelated => {
            let shat = shat_of_gains(gains, threshold, true)?;
            // P[η̂ > T, η < S] = CP3(T) - CP3(max{Ŝ, T})
            let joint_edge = cp3_t - gains.coverage(InterfererSet::Fr3, shat.max(target));
            let edge = if p_edge > R::zero() { joint_edge / p_edge } else { cp3_t };
            Ok((centre, edge, cp1_joint + joint_edge))
        }
    }
}

/// Normalized average FFR rate density at one position: centre term plus the
/// one-third-bandwidth edge term.
pub fn ffr_rate_of_gains<R: Real>(gains: &LinkGains<R>, target: R, threshold: R, mode: Correlation, tol: QuadratureTolerance) -> Result<R> {
    let centre = gains.rate_integral(InterfererSet::Fr1, target.max(threshold), tol)?;
    let edge_full = gains.rate_integral(InterfererSet::Fr3, target, tol)?;
    let edge = match mode {
        Correlation::Independent => (R::one() - gains.sir_coverage(InterfererSet::Fr1, threshold)) * edge_full,
        Correlation::FullyCorrelated => {
            let shat = shat_of_gains(gains, threshold, false)?;
            let above = gains.rate_integral(InterfererSet::Fr3, target.max(shat), tol)?;
            (edge_full - above).max(R::zero())
        }
    };
    Ok(centre + edge / R::lit(3.0))
}

/// How user positions are averaged over the cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CellShape {
    /// Uniform users on the inradius disk: Gauss–Legendre in `r` weighted by
    /// the radial pdf, periodic trapezoid in `θ` over one 60° sector.
    #[default]
    InradiusDisk,
    /// Uniform users on the true hexagon, Gauss–Legendre in `θ` over the
    /// 30° half-sector and in `r` out to the hexagon boundary.
    Hexagon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub t_tolerance: QuadratureTolerance,
    pub shape: CellShape,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { radial_nodes: 64, angular_nodes: 16, t_tolerance: QuadratureTolerance::default(), shape: CellShape::InradiusDisk }
    }
}

#[derive(Debug, Clone)]
pub struct GridNode<R> {
    pub user: UserPosition<R>,
    pub weight: R,
    pub gains: LinkGains<R>,
}

/// Weighted user positions whose weighted sum approximates an expectation.
#[derive(Debug, Clone)]
pub struct SpatialGrid<R> {
    nodes: Vec<GridNode<R>>,
    tol: QuadratureTolerance,
}

impl<R: Real> SpatialGrid<R> {
    /// Whole-cell average under the configured cell shape.
    pub fn cell(params: &SystemParams<R>, cfg: &QuadratureConfig) -> Result<Self> {
        if cfg.radial_nodes == 0 || cfg.angular_nodes == 0 {
            return Err(FfrError::param("quadrature needs at least one radial and one angular node"));
        }
        let radius = params.cell_radius();
        let d = params.min_radius();
        let gl_r = GaussLegendre::<R>::new(cfg.radial_nodes)?;
        let mut nodes = Vec::with_capacity(cfg.radial_nodes * cfg.angular_nodes);
        match cfg.shape {
            CellShape::InradiusDisk => {
                let pdf = params.radial_pdf();
                let m = R::lit(cfg.angular_nodes as f64);
                for (r, w) in gl_r.on_interval(d, radius) {
                    for k in 0..cfg.angular_nodes {
                        let theta = crate::geometry::sector_angle::<R>() * R::lit(k as f64) / m;
                        let user = UserPosition::new(r, theta)?;
                        let weight = w * pdf.density(r) / m;
                        nodes.push(GridNode { user, weight, gains: LinkGains::new(params, &user) });
                    }
                }
            }
            CellShape::Hexagon => {
                let gl_t = GaussLegendre::<R>::new(cfg.angular_nodes)?;
                let half_sector = R::FRAC_PI_6();
                let area = R::lit(2.0) * R::lit(3.0).sqrt() * radius * radius - R::PI() * d * d;
                for (theta, wt) in gl_t.on_interval(R::zero(), half_sector) {
                    let rho = radius / theta.cos();
                    for (r, wr) in gl_r.on_interval(d, rho) {
                        let user = UserPosition::new(r, theta)?;
                        let weight = R::lit(12.0) * wt * wr * r / area;
                        nodes.push(GridNode { user, weight, gains: LinkGains::new(params, &user) });
                    }
                }
            }
        }
        Ok(Self { nodes, tol: cfg.t_tolerance })
    }

    /// Angular average on the circle of radius `r`.
    pub fn ring(params: &SystemParams<R>, r: R, cfg: &QuadratureConfig) -> Result<Self> {
        if cfg.angular_nodes == 0 {
            return Err(FfrError::param("quadrature needs at least one angular node"));
        }
        params.layout().user(r, R::zero())?;
        let m = R::lit(cfg.angular_nodes as f64);
        let nodes = (0..cfg.angular_nodes)
            .map(|k| {
                let theta = crate::geometry::sector_angle::<R>() * R::lit(k as f64) / m;
                let user = UserPosition::new(r, theta)?;
                Ok(GridNode { user, weight: R::one() / m, gains: LinkGains::new(params, &user) })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { nodes, tol: cfg.t_tolerance })
    }

    /// A single position with unit weight.
    pub fn point(params: &SystemParams<R>, user: &UserPosition<R>) -> Self {
        Self {
            nodes: vec![GridNode { user: *user, weight: R::one(), gains: LinkGains::new(params, user) }],
            tol: QuadratureTolerance::default(),
        }
    }

    pub fn nodes(&self) -> &[GridNode<R>] {
        &self.nodes
    }

    pub fn tolerance(&self) -> QuadratureTolerance {
        self.tol
    }

    /// Weighted sum of `f` over the nodes. Terms are evaluated in parallel and
    /// summed in node order, so the result does not depend on thread count.
    pub fn average<F>(&self, f: F) -> Result<R>
    where
        F: Fn(&LinkGains<R>) -> Result<R> + Sync,
    {
        let terms = self
            .nodes
            .par_iter()
            .map(|n| f(&n.gains).map(|v| v * n.weight))
            .collect::<Result<Vec<R>>>()?;
        Ok(terms.into_iter().fold(R::zero(), |acc, v| acc + v))
    }

    /// Per-node values (unweighted), in node order.
    pub fn map<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&LinkGains<R>) -> Result<T> + Sync,
    {
        self.nodes.par_iter().map(|n| f(&n.gains)).collect()
    }

    pub fn weighted_sum(&self, values: &[R]) -> R {
        self.nodes.iter().zip(values).fold(R::zero(), |acc, (n, &v)| acc + n.weight * v)
    }

    pub fn coverage(&self, set: InterfererSet, x: R) -> R {
        self.nodes.iter().fold(R::zero(), |acc, n| acc + n.weight * n.gains.coverage(set, x))
    }

    pub fn coverage_ffr(&self, target: R, threshold: R, mode: Correlation) -> Result<CoverageBreakdown<R>> {
        let parts = self.map(|g| ffr_coverage_parts(g, target, threshold, mode))?;
        let mut out = CoverageBreakdown {
            fr1: self.coverage(InterfererSet::Fr1, target),
            fr3: self.coverage(InterfererSet::Fr3, target),
            ffr_centre: R::zero(),
            ffr_edge: R::zero(),
            ffr: R::zero(),
        };
        for (n, (c, e, t)) in self.nodes.iter().zip(parts) {
            out.ffr_centre = out.ffr_centre + n.weight * c;
            out.ffr_edge = out.ffr_edge + n.weight * e;
            out.ffr = out.ffr + n.weight * t;
        }
        Ok(out)
    }

    pub fn rate(&self, set: InterfererSet, target: R) -> Result<R> {
        let tol = self.tol;
        self.average(|g| g.rate_integral(set, target, tol))
    }

    pub fn rate_ffr(&self, target: R, threshold: R, mode: Correlation) -> Result<R> {
        let tol = self.tol;
        self.average(|g| ffr_rate_of_gains(g, target, threshold, mode, tol))
    }

    /// Spatial average of `P[SINR > threshold]` on FR1.
    pub fn centre_fraction(&self, threshold: R) -> R {
        self.coverage(InterfererSet::Fr1, threshold)
    }
}

/// Coverage components averaged over a set of positions.
///
/// `ffr_centre` and `ffr_edge` are conditional probabilities (given the user
/// class); `ffr` is the unconditional FFR coverage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageBreakdown<R> {
    pub fr1: R,
    pub fr3: R,
    pub ffr_centre: R,
    pub ffr_edge: R,
    pub ffr: R,
}

/// `P[SINR > T]` on FR1 at one position.
pub fn coverage_fr1<R: Real>(params: &SystemParams<R>, user: &UserPosition<R>) -> R {
    LinkGains::new(params, user).coverage(InterfererSet::Fr1, params.target())
}

/// `P[SINR > T]` on FR3 at one position.
pub fn coverage_fr3<R: Real>(params: &SystemParams<R>, user: &UserPosition<R>) -> R {
    LinkGains::new(params, user).coverage(InterfererSet::Fr3, params.target())
}

/// Coverage of a cell-centre user, `P[η > T | η > S]`.
pub fn coverage_ffr_centre<R: Real>(params: &SystemParams<R>, user: &UserPosition<R>) -> R {
    let g = LinkGains::new(params, user);
    let s = params.threshold();
    let cp1_s = g.coverage(InterfererSet::Fr1, s);
    if cp1_s > R::zero() {
        g.coverage(InterfererSet::Fr1, params.target().max(s)) / cp1_s
    } else {
        R::one()
    }
}

/// Coverage of a cell-edge user, `P[η̂ > T | η < S]`.
pub fn coverage_ffr_edge<R: Real>(params: &SystemParams<R>, user: &UserPosition<R>, mode: Correlation) -> Result<R> {
    let g = LinkGains::new(params, user);
    Ok(ffr_coverage_parts(&g, params.target(), params.threshold(), mode)?.1)
}

/// Unconditional FFR coverage at one position.
pub fn coverage_ffr<R: Real>(params: &SystemParams<R>, user: &UserPosition<R>, mode: Correlation) -> Result<R> {
    let g = LinkGains::new(params, user);
    Ok(ffr_coverage_parts(&g, params.target(), params.threshold(), mode)?.2)
}

/// `Ŝ_th` at one position (noise included, as in the coverage expressions).
pub fn shat_threshold<R: Real>(params: &SystemParams<R>, user: &UserPosition<R>) -> Result<R> {
    shat_of_gains(&LinkGains::new(params, user), params.threshold(), true)
}

/// `K(T, r)` when `exact`, otherwise the target-free `K(r)`.
pub fn k_factor<R: Real>(params: &SystemParams<R>, user: &UserPosition<R>, exact: bool) -> Result<R> {
    k_of_gains(&LinkGains::new(params, user), params.target(), exact, QuadratureTolerance::default())
}

/// Normalized average rate of FR1 over the cell (nats/s/Hz).
pub fn rate_fr1<R: Real>(params: &SystemParams<R>) -> Result<R> {
    SpatialGrid::cell(params, &QuadratureConfig::default())?.rate(InterfererSet::Fr1, params.target())
}

/// Normalized average rate of FR3 over the cell, without the one-third
/// bandwidth factor.
pub fn rate_fr3<R: Real>(params: &SystemParams<R>) -> Result<R> {
    SpatialGrid::cell(params, &QuadratureConfig::default())?.rate(InterfererSet::Fr3, params.target())
}

/// Normalized average rate of FFR over the cell.
pub fn rate_ffr<R: Real>(params: &SystemParams<R>, mode: Correlation) -> Result<R> {
    SpatialGrid::cell(params, &QuadratureConfig::default())?.rate_ffr(params.target(), params.threshold(), mode)
}
