use ffr_core::analytics::{CellShape, QuadratureConfig};
use ffr_core::montecarlo::{self, Placement, Quantity, SimConfig};
use ffr_core::optimizer::threshold_table_row;
use ffr_core::{Correlation, CorrelationMode, Estimate, FfrError, InterfererSet, SpatialGrid};
use serde::Serialize;

use crate::config::{CheckArg, RunConfig};
use crate::output::{Cell, Table};
use crate::{CliError, Report};

/// Standard errors allowed between an estimate and its closed form.
pub const CHECK_SIGMAS: f64 = 3.0;

/// A command error, possibly with output worth emitting anyway.
pub struct Failed {
    pub report: Option<Report>,
    pub error: CliError,
}

impl From<CliError> for Failed {
    fn from(error: CliError) -> Self {
        Self { report: None, error }
    }
}

impl From<FfrError> for Failed {
    fn from(e: FfrError) -> Self {
        CliError::from(e).into()
    }
}

type Outcome = Result<Report, Failed>;

fn quadrature(cfg: &RunConfig) -> QuadratureConfig {
    QuadratureConfig { shape: cfg.cell_shape.cell_shape(), ..Default::default() }
}

/// Coverage versus distance, angle-averaged at each radius.
pub fn coverage(cfg: &RunConfig) -> Outcome {
    let params = cfg.params()?;
    let q = quadrature(cfg);
    let (t, s) = (params.target(), params.threshold());
    let mut table = Table::new(vec!["r_m", "cp_fr1", "cp_fr3", "cp_ffr_centre", "cp_ffr_edge", "cp_ffr"]);
    for r in cfg.r_grid()? {
        let b = SpatialGrid::ring(&params, r, &q)?.coverage_ffr(t, s, cfg.mode.correlation())?;
        table.push(vec![
            Cell::Num(r),
            Cell::Num(b.fr1),
            Cell::Num(b.fr3),
            Cell::Num(b.ffr_centre),
            Cell::Num(b.ffr_edge),
            Cell::Num(b.ffr),
        ]);
    }
    Ok(Report { body: table.to_csv(), summary: None })
}

/// Cell-average rates over the threshold sweep; `rate_fr3` is over the full
/// FR3 band, without the one-third bandwidth factor.
pub fn rate(cfg: &RunConfig) -> Outcome {
    cfg.threshold_sweep.validate().map_err(CliError::Usage)?;
    let params = cfg.params()?;
    let grid = SpatialGrid::cell(&params, &quadrature(cfg))?;
    let t = params.target();
    let fr1 = grid.rate(InterfererSet::Fr1, t)?;
    let fr3 = grid.rate(InterfererSet::Fr3, t)?;
    let rows = cfg
        .threshold_sweep
        .points()
        .into_iter()
        .map(|s_db| Ok((s_db, grid.rate_ffr(t, ffr_core::db_to_linear(s_db), cfg.mode.correlation())?)))
        .collect::<Result<Vec<_>, FfrError>>()?;
    let best = rows.iter().enumerate().fold(0, |b, (i, r)| if r.1 > rows[b].1 { i } else { b });
    let mut table = Table::new(vec!["s_th_db", "rate_fr1", "rate_fr3", "rate_ffr", "is_max"]);
    for (i, (s_db, ffr)) in rows.into_iter().enumerate() {
        table.push(vec![Cell::Num(s_db), Cell::Num(fr1), Cell::Num(fr3), Cell::Num(ffr), Cell::Flag(i == best)]);
    }
    Ok(Report { body: table.to_csv(), summary: None })
}

/// One row per exponent: `T′`, `T″`, centre fraction and rate gains.
pub fn optimize(cfg: &RunConfig) -> Outcome {
    if cfg.alphas.is_empty() {
        return Err(CliError::Usage("no path-loss exponents requested".into()).into());
    }
    let q = quadrature(cfg);
    let rows = cfg
        .alphas
        .iter()
        .map(|&a| {
            let p = cfg.params_for(a)?;
            threshold_table_row(&p, &q).map_err(|e| CliError::from(e).into())
        })
        .collect::<Result<Vec<_>, Failed>>()?;
    let mut body = serde_json::to_string_pretty(&rows).expect("rows serialize");
    body.push('\n');
    Ok(Report { body, summary: None })
}

#[derive(Debug, Serialize)]
struct Summary {
    study: &'static str,
    mode: String,
    seed: u64,
    samples: u64,
    streams: usize,
    sigmas: f64,
    checks: usize,
    passed: usize,
    all_passed: bool,
}

fn quantities(check: CheckArg) -> Vec<Quantity> {
    let coverage = [
        Quantity::CoverageFr1,
        Quantity::CoverageFr3,
        Quantity::CoverageFfr,
        Quantity::CentreFraction,
        Quantity::CentreCovered,
        Quantity::EdgeCovered,
    ];
    let rate = [Quantity::RateFr1, Quantity::RateFr3, Quantity::RateFfr];
    match check {
        CheckArg::Coverage => coverage.to_vec(),
        CheckArg::Rate => rate.to_vec(),
        CheckArg::All => coverage.into_iter().chain(rate).collect(),
    }
}

fn quantity_name(q: Quantity) -> String {
    serde_json::to_value(q).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

/// Closed-form counterpart of a Monte Carlo quantity over `grid`.
pub fn analytic_value(grid: &SpatialGrid<f64>, q: Quantity, t: f64, s: f64, mode: Correlation) -> Result<f64, FfrError> {
    Ok(match q {
        Quantity::CoverageFr1 => grid.coverage(InterfererSet::Fr1, t),
        Quantity::CoverageFr3 => grid.coverage(InterfererSet::Fr3, t),
        Quantity::CoverageFfr => grid.coverage_ffr(t, s, mode)?.ffr,
        Quantity::CentreFraction => grid.centre_fraction(s),
        Quantity::CentreCovered => grid.coverage(InterfererSet::Fr1, t.max(s)),
        Quantity::EdgeCovered => {
            grid.coverage_ffr(t, s, mode)?.ffr - grid.coverage(InterfererSet::Fr1, t.max(s))
        }
        Quantity::RateFr1 => grid.rate(InterfererSet::Fr1, t)?,
        Quantity::RateFr3 => grid.rate(InterfererSet::Fr3, t)?,
        Quantity::RateFfr => grid.rate_ffr(t, s, mode)?,
    })
}

fn finish(table: Table, summary: Summary) -> Outcome {
    let report = Report {
        body: table.to_csv(),
        summary: Some(serde_json::to_string_pretty(&summary).expect("summary serializes")),
    };
    if summary.all_passed {
        Ok(report)
    } else {
        let error = CliError::CheckFailed(format!(
            "{} of {} estimates outside {} standard errors",
            summary.checks - summary.passed,
            summary.checks,
            summary.sigmas
        ));
        Err(Failed { report: Some(report), error })
    }
}

/// Whole-cell estimates of each requested quantity against the closed forms,
/// or, with a channel profile, FFR coverage versus distance against the
/// independent and fully correlated bounds.
pub fn simulate(cfg: &RunConfig) -> Outcome {
    let params = cfg.params()?;
    let mode = cfg.fading_mode()?;
    let q = quadrature(cfg);
    let sim = SimConfig::new(params.clone(), mode.clone(), cfg.samples)
        .with_seed(cfg.seed)
        .with_streams(cfg.streams)
        .with_placement(match q.shape {
            CellShape::InradiusDisk => Placement::UniformDisk,
            CellShape::Hexagon => Placement::UniformHexagon,
        });
    let (t, s) = (params.target(), params.threshold());

    let Some(correlation) = mode.analytic() else {
        let r_grid = cfg.r_grid()?;
        let curve = montecarlo::simulate_tdl_ffr_coverage(&sim, &r_grid)?;
        let mut table = Table::new(vec![
            "r_m",
            "mc_cp_ffr",
            "mc_std_error",
            "n_samples",
            "cp_ffr_independent",
            "cp_ffr_correlated",
            "pass",
        ]);
        let mut passed = 0;
        for (r, e) in &curve {
            let ring = SpatialGrid::ring(&params, *r, &q)?;
            let upper = ring.coverage_ffr(t, s, Correlation::Independent)?.ffr;
            let lower = ring.coverage_ffr(t, s, Correlation::FullyCorrelated)?.ffr;
            let ok = bounded(e, lower, upper);
            passed += usize::from(ok);
            table.push(vec![
                Cell::Num(*r),
                Cell::Num(e.value),
                Cell::Num(e.std_error),
                Cell::Int(e.n_samples),
                Cell::Num(upper),
                Cell::Num(lower),
                Cell::Flag(ok),
            ]);
        }
        let name = match &mode {
            CorrelationMode::TappedDelayLine(ch) => ch.profile.name.clone(),
            _ => unreachable!("analytic modes handled below"),
        };
        let summary = Summary {
            study: "tdl_coverage_vs_distance",
            mode: name,
            seed: cfg.seed,
            samples: cfg.samples,
            streams: cfg.streams,
            sigmas: CHECK_SIGMAS,
            checks: curve.len(),
            passed,
            all_passed: passed == curve.len(),
        };
        return finish(table, summary);
    };

    let wanted = quantities(cfg.check);
    let estimates = montecarlo::simulate(&sim, &wanted)?;
    let grid = SpatialGrid::cell(&params, &q)?;
    let mut table = Table::new(vec![
        "quantity",
        "mode",
        "mc_value",
        "mc_std_error",
        "n_samples",
        "analytic",
        "z_score",
        "pass",
    ]);
    let mut passed = 0;
    for (&quantity, e) in wanted.iter().zip(&estimates) {
        let reference = analytic_value(&grid, quantity, t, s, correlation)?;
        let z = e.z_score(reference);
        let ok = z <= CHECK_SIGMAS;
        passed += usize::from(ok);
        table.push(vec![
            Cell::Text(quantity_name(quantity)),
            Cell::Text(cfg.mode.as_str().into()),
            Cell::Num(e.value),
            Cell::Num(e.std_error),
            Cell::Int(e.n_samples),
            Cell::Num(reference),
            Cell::Num(z),
            Cell::Flag(ok),
        ]);
    }
    let summary = Summary {
        study: "cell_average",
        mode: cfg.mode.as_str().into(),
        seed: cfg.seed,
        samples: cfg.samples,
        streams: cfg.streams,
        sigmas: CHECK_SIGMAS,
        checks: wanted.len(),
        passed,
        all_passed: passed == wanted.len(),
    };
    finish(table, summary)
}

/// `lower - kσ ≤ estimate ≤ upper + kσ`.
pub fn bounded(e: &Estimate, lower: f64, upper: f64) -> bool {
    let slack = CHECK_SIGMAS * e.effective_std_error();
    e.value >= lower - slack && e.value <= upper + slack
}
