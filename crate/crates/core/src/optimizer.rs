//! Optimal SINR classification thresholds.
//!
//! Coverage is maximized at `S_th = T` for independent sub-bands and on the
//! whole set `S_th ≥ T` for fully correlated ones. The rate-optimal threshold
//! is `max(T, T′)` where `T′` zeroes the stationarity residual of the FFR rate
//! in `S_th`, and `max(T, T″)` in the correlated case, where `T″` is found by
//! direct maximization of the correlated FFR rate.

use serde::{Deserialize, Serialize};

use crate::analytics::{Correlation, QuadratureConfig, SpatialGrid, SystemParams};
use crate::error::{FfrError, Result};
use crate::geometry::InterfererSet;
use crate::numerics::{brent, golden_section_max};
use crate::scalar::{db_to_linear, linear_to_db, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    KktRoot,
    GridRefine,
}

/// Which `K` enters the stationarity residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KVariant {
    /// Target-free `K(r)`.
    Approximate,
    /// `K(T, r)` at the configured target.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdSolution<R> {
    pub s_opt: R,
    pub s_opt_db: R,
    pub objective_value: R,
    pub method: Method,
    /// Residual at the returned point; zero for closed forms.
    pub residual: R,
    /// The optimum is attained on a whole interval; `s_opt` is its lower end.
    pub set_valued: bool,
}

/// dB search window for the rate-optimal constants.
const BRACKET_HALF_WIDTHS_DB: [f64; 2] = [10.0, 20.0];
const GRID_STEP_DB: f64 = 0.1;
const ROOT_TOL_DB: f64 = 1e-3;

/// Caches the spatial grid and the per-node `K` values shared by repeated
/// residual and rate evaluations.
#[derive(Debug, Clone)]
pub struct ThresholdSolver<R> {
    params: SystemParams<R>,
    grid: SpatialGrid<R>,
    k_approx: Vec<R>,
    k_exact: Vec<R>,
}

impl<R: Real> ThresholdSolver<R> {
    pub fn new(params: &SystemParams<R>) -> Result<Self> {
        Self::with_config(params, &QuadratureConfig::default())
    }

    pub fn with_config(params: &SystemParams<R>, cfg: &QuadratureConfig) -> Result<Self> {
        let grid = SpatialGrid::cell(params, cfg)?;
        let tol = grid.tolerance();
        let third = R::lit(3.0);
        let k_approx = grid.map(|g| Ok(g.rate_integral(InterfererSet::Fr3, R::zero(), tol)? / third))?;
        let target = params.target();
        let k_exact = grid.map(|g| Ok(g.rate_integral(InterfererSet::Fr3, target, tol)? / third))?;
        Ok(Self { params: params.clone(), grid, k_approx, k_exact })
    }

    pub fn params(&self) -> &SystemParams<R> {
        &self.params
    }

    pub fn grid(&self) -> &SpatialGrid<R> {
        &self.grid
    }

    /// Derivative of the FFR rate with respect to `S_th` on `S_th ≥ T`:
    /// `∫ (K - ln(1 + S))·(-∂P[SIR > S]/∂S) f_R`.
    ///
    /// Positive below the optimum and negative above it.
    pub fn kkt_residual(&self, threshold: R, variant: KVariant) -> R {
        let ks = match variant {
            KVariant::Approximate => &self.k_approx,
            KVariant::Exact => &self.k_exact,
        };
        let log_s = threshold.ln_1p();
        self.grid
            .nodes()
            .iter()
            .zip(ks)
            .fold(R::zero(), |acc, (n, &k)| acc + n.weight * (k - log_s) * n.gains.sir_coverage_slope_fr1(threshold))
    }

    /// `T′`, the zero of [`Self::kkt_residual`], bracketed around the target.
    pub fn solve_tprime(&self, variant: KVariant) -> Result<ThresholdSolution<R>> {
        let f = |s_db: R| self.kkt_residual(db_to_linear(s_db), variant);
        let centre = self.params.target_db();
        let mut bracket = None;
        for hw in BRACKET_HALF_WIDTHS_DB {
            let (lo, hi) = (centre - R::lit(hw), centre + R::lit(hw));
            let (flo, fhi) = (f(lo), f(hi));
            if flo > R::zero() && fhi < R::zero() {
                bracket = Some((lo, hi));
                break;
            }
            if hw == BRACKET_HALF_WIDTHS_DB[BRACKET_HALF_WIDTHS_DB.len() - 1] {
                return Err(FfrError::numerical(
                    "solve_tprime",
                    format!("no sign change of the residual on [{lo}, {hi}] dB: residuals ({:e}, {:e})", flo.as_f64(), fhi.as_f64()),
                ));
            }
        }
        let (lo, hi) = bracket.expect("bracket found or returned early");
        let root = brent(f, lo, hi, R::lit(ROOT_TOL_DB), 200)?;
        let s_opt = db_to_linear(root.x);
        Ok(ThresholdSolution {
            s_opt,
            s_opt_db: root.x,
            objective_value: self.grid.rate_ffr(self.params.target().max(s_opt), s_opt, Correlation::Independent)?,
            method: Method::KktRoot,
            residual: root.f_x,
            set_valued: false,
        })
    }

    /// `T″`: maximizer of the fully correlated FFR rate over `S_th`.
    ///
    /// For `S_th ≥ T` the maximizer does not depend on `T`, so the objective is
    /// evaluated with the target pinned at the bottom of the search window.
    pub fn solve_tdoubleprime(&self) -> Result<ThresholdSolution<R>> {
        let centre = R::zero();
        let lo = centre - R::lit(BRACKET_HALF_WIDTHS_DB[1]);
        let hi = centre + R::lit(BRACKET_HALF_WIDTHS_DB[1]);
        let floor = db_to_linear(lo);
        let objective = |s_db: R| self.grid.rate_ffr(floor, db_to_linear(s_db), Correlation::FullyCorrelated);
        let steps = ((hi - lo).as_f64() / GRID_STEP_DB).round() as usize;
        let mut best = (lo, R::neg_infinity());
        for i in 0..=steps {
            let s_db = lo + R::lit(i as f64 * GRID_STEP_DB);
            let v = objective(s_db)?;
            if v > best.1 {
                best = (s_db, v);
            }
        }
        if best.0 <= lo || best.0 >= hi {
            return Err(FfrError::numerical(
                "solve_tdoubleprime",
                format!("correlated rate is maximized at the window edge {} dB", best.0),
            ));
        }
        let step = R::lit(GRID_STEP_DB);
        let refined = golden_section_max(objective, best.0 - step, best.0 + step, R::lit(ROOT_TOL_DB), 200)?;
        let (s_db, value) = if refined.value >= best.1 { (refined.x, refined.value) } else { best };
        Ok(ThresholdSolution {
            s_opt: db_to_linear(s_db),
            s_opt_db: s_db,
            objective_value: value,
            method: Method::GridRefine,
            residual: (refined.value - best.1).abs(),
            set_valued: false,
        })
    }

    /// `S_opt,R = max(T, T′)` or `max(T, T″)`.
    pub fn optimal_rate_threshold(&self, mode: Correlation) -> Result<ThresholdSolution<R>> {
        let inner = match mode {
            Correlation::Independent => self.solve_tprime(KVariant::Approximate)?,
            Correlation::FullyCorrelated => self.solve_tdoubleprime()?,
        };
        let target = self.params.target();
        let (s_opt, method, residual) = if target >= inner.s_opt {
            (target, Method::ClosedForm, R::zero())
        } else {
            (inner.s_opt, inner.method, inner.residual)
        };
        Ok(ThresholdSolution {
            s_opt,
            s_opt_db: linear_to_db(s_opt),
            objective_value: self.grid.rate_ffr(target, s_opt, mode)?,
            method,
            residual,
            set_valued: false,
        })
    }

    pub fn centre_user_fraction(&self, threshold: R) -> R {
        self.grid.centre_fraction(threshold)
    }
}

/// `S_opt,C`: `T` for independent sub-bands, the set `S_th ≥ T` (reported as
/// `T`) when fully correlated.
pub fn optimal_coverage_threshold<R: Real>(params: &SystemParams<R>, mode: Correlation) -> Result<ThresholdSolution<R>> {
    let grid = SpatialGrid::cell(params, &QuadratureConfig::default())?;
    let t = params.target();
    let objective_value = match mode {
        Correlation::Independent => grid.coverage_ffr(t, t, mode)?.ffr,
        Correlation::FullyCorrelated => grid.coverage(InterfererSet::Fr3, t),
    };
    Ok(ThresholdSolution {
        s_opt: t,
        s_opt_db: params.target_db(),
        objective_value,
        method: Method::ClosedForm,
        residual: R::zero(),
        set_valued: mode == Correlation::FullyCorrelated,
    })
}

/// Stationarity residual of the independent-case FFR rate at `threshold`,
/// using the approximate `K(r)`.
pub fn kkt_residual<R: Real>(params: &SystemParams<R>, threshold: R) -> Result<R> {
    Ok(ThresholdSolver::new(params)?.kkt_residual(threshold, KVariant::Approximate))
}

pub fn solve_tprime<R: Real>(params: &SystemParams<R>) -> Result<ThresholdSolution<R>> {
    ThresholdSolver::new(params)?.solve_tprime(KVariant::Approximate)
}

pub fn optimal_rate_threshold<R: Real>(params: &SystemParams<R>, mode: Correlation) -> Result<ThresholdSolution<R>> {
    ThresholdSolver::new(params)?.optimal_rate_threshold(mode)
}

/// Fraction of users classified cell-centre at `threshold`.
pub fn centre_user_fraction<R: Real>(params: &SystemParams<R>, threshold: R) -> Result<R> {
    Ok(SpatialGrid::cell(params, &QuadratureConfig::default())?.centre_fraction(threshold))
}

/// Per-exponent summary of the rate-optimal thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTableRow {
    pub alpha: f64,
    pub t_prime_db: f64,
    pub t_doubleprime_db: f64,
    /// `P[SIR > T′]` with `T = T′`.
    pub centre_fraction: f64,
    /// FFR rate gain over FR1 with `T = S_th = T′`, percent.
    pub gain_independent_pct: f64,
    /// Same with `T = S_th = T″` and fully correlated sub-bands, percent.
    pub gain_correlated_pct: f64,
    /// `max(T, T′)` at the configured target.
    pub compromise_threshold_db: f64,
    /// Independent FFR coverage at `S_th = T` minus coverage at `S_th = max(T, T′)`.
    pub compromise_coverage_loss: f64,
}

/// Solves `T′` and `T″` for one path-loss exponent and reports the FFR rate
/// gains over FR1 at `T = S_th` equal to each constant.
pub fn threshold_table_row<R: Real>(params: &SystemParams<R>, cfg: &QuadratureConfig) -> Result<ThresholdTableRow> {
    let solver = ThresholdSolver::with_config(params, cfg)?;
    let tprime = solver.solve_tprime(KVariant::Approximate)?;
    let tpp = solver.solve_tdoubleprime()?;
    let grid = solver.grid();
    let gain = |s: R, mode| -> Result<f64> {
        let fr1 = grid.rate(InterfererSet::Fr1, s)?;
        let ffr = grid.rate_ffr(s, s, mode)?;
        Ok(100.0 * (ffr / fr1 - R::one()).as_f64())
    };
    let t = params.target();
    let compromise = solver.optimal_rate_threshold(Correlation::Independent)?;
    let at_target = grid.coverage_ffr(t, t, Correlation::Independent)?.ffr;
    let at_compromise = grid.coverage_ffr(t, compromise.s_opt, Correlation::Independent)?.ffr;
    Ok(ThresholdTableRow {
        alpha: params.alpha().as_f64(),
        t_prime_db: tprime.s_opt_db.as_f64(),
        t_doubleprime_db: tpp.s_opt_db.as_f64(),
        centre_fraction: solver.centre_user_fraction(tprime.s_opt).as_f64(),
        gain_independent_pct: gain(tprime.s_opt, Correlation::Independent)?,
        gain_correlated_pct: gain(tpp.s_opt, Correlation::FullyCorrelated)?,
        compromise_threshold_db: compromise.s_opt_db.as_f64(),
        compromise_coverage_loss: (at_target - at_compromise).as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_layout;

    fn params(alpha: f64, t_db: f64) -> SystemParams<f64> {
        SystemParams::from_db(alpha, t_db, t_db, 0.0, build_layout(1.0).unwrap()).unwrap()
    }

    fn coarse() -> QuadratureConfig {
        QuadratureConfig { radial_nodes: 24, angular_nodes: 6, ..Default::default() }
    }

    #[test]
    fn coverage_threshold_is_target() {
        for t in [0.0, 5.0] {
            let s = optimal_coverage_threshold(&params(3.0, t), Correlation::Independent).unwrap();
            assert!((s.s_opt_db - t).abs() < 1e-12);
            assert_eq!(s.method, Method::ClosedForm);
            assert!(!s.set_valued);
        }
        let p = params(3.0, 0.0);
        let s = optimal_coverage_threshold(&p, Correlation::FullyCorrelated).unwrap();
        assert!(s.set_valued);
        let cp3 = SpatialGrid::cell(&p, &QuadratureConfig::default()).unwrap().coverage(InterfererSet::Fr3, 1.0);
        assert!((s.objective_value - cp3).abs() < 1e-15);
    }

    #[test]
    fn residual_signs_at_extremes() {
        let solver = ThresholdSolver::with_config(&params(3.0, 0.0), &coarse()).unwrap();
        assert!(solver.kkt_residual(1e-6, KVariant::Approximate) > 0.0);
        assert!(solver.kkt_residual(1e4, KVariant::Approximate) < 0.0);
    }

    #[test]
    fn residual_matches_literal_product_form() {
        // Σ_i a_i ∏_{j≠i}(1 + S a_j) / (∏_j (1 + S a_j))²
        let p = params(3.0, 0.0);
        let solver = ThresholdSolver::with_config(&p, &coarse()).unwrap();
        let s = 1.3;
        let mut literal = 0.0;
        for (n, k) in solver.grid().nodes().iter().zip(&solver.k_approx) {
            let a = &n.gains.fr1;
            let prod: f64 = a.iter().map(|x| 1.0 + s * x).product();
            let mut sum = 0.0;
            for i in 0..a.len() {
                let others: f64 = a.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| 1.0 + s * x).product();
                sum += a[i] * others;
            }
            literal += n.weight * (k - (1.0f64 + s).ln()) * sum / (prod * prod);
        }
        let got = solver.kkt_residual(s, KVariant::Approximate);
        assert!((got - literal).abs() < 1e-12 * literal.abs().max(1e-12));
    }

    #[test]
    fn residual_is_derivative_of_rate() {
        // central difference of the FFR rate with K(T, r) frozen at the target
        let p = params(3.0, -5.0);
        let solver = ThresholdSolver::with_config(&p, &coarse()).unwrap();
        let t = p.target();
        let s = 1.5;
        let h = 1e-4;
        let grid = solver.grid();
        let up = grid.rate_ffr(t, s + h, Correlation::Independent).unwrap();
        let dn = grid.rate_ffr(t, s - h, Correlation::Independent).unwrap();
        let fd = (up - dn) / (2.0 * h);
        let res = solver.kkt_residual(s, KVariant::Exact);
        assert!((fd - res).abs() < 1e-6, "fd {fd} vs residual {res}");
    }

    #[test]
    fn tprime_is_independent_of_target() {
        let mut roots = Vec::new();
        for t in [-3.0, 0.0, 3.0] {
            let solver = ThresholdSolver::with_config(&params(3.0, t), &coarse()).unwrap();
            roots.push(solver.solve_tprime(KVariant::Approximate).unwrap().s_opt_db);
        }
        assert!((roots[0] - roots[1]).abs() < 2.0 * ROOT_TOL_DB);
        assert!((roots[2] - roots[1]).abs() < 2.0 * ROOT_TOL_DB);
    }

    #[test]
    fn rate_threshold_clamps_to_target() {
        let solver = ThresholdSolver::with_config(&params(3.0, 6.0), &coarse()).unwrap();
        let s = solver.optimal_rate_threshold(Correlation::Independent).unwrap();
        assert!((s.s_opt_db - 6.0).abs() < 1e-12);
        assert_eq!(s.method, Method::ClosedForm);
    }

    #[test]
    fn centre_fraction_limits() {
        let p = params(3.0, 0.0);
        assert!((centre_user_fraction(&p, 1e-12).unwrap() - 1.0).abs() < 1e-9);
        assert!(centre_user_fraction(&p, 1e6).unwrap() < 1e-3);
    }
}
