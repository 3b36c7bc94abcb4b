use crate::error::{FfrError, Result};
use crate::scalar::Real;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<R> {
    nodes: Vec<R>,
    weights: Vec<R>,
}

impl<R: Real> GaussLegendre<R> {
    /// Builds an `n`-point rule by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(FfrError::param("Gauss-Legendre rule needs at least one node"));
        }
        // Nodes are computed in f64 and narrowed, so f32 rules stay accurate.
        let mut nodes = vec![R::zero(); n];
        let mut weights = vec![R::zero(); n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = R::lit(-x);
            nodes[n - 1 - i] = R::lit(x);
            weights[i] = R::lit(w);
            weights[n - 1 - i] = R::lit(w);
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on_interval(&self, a: R, b: R) -> impl Iterator<Item = (R, R)> + '_ {
        let half = (b - a) / R::lit(2.0);
        let mid = (a + b) / R::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: R, b: R, mut f: impl FnMut(R) -> R) -> R {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// P_n(x) and P_n'(x).
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_segments: usize,
}

impl Default for QuadratureTolerance {
    fn default() -> Self {
        Self { abs: 1e-13, rel: 1e-8, max_segments: 400 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral<R> {
    pub value: R,
    pub error: R,
    pub evaluations: usize,
}

// Kronrod abscissae and weights (QUADPACK qk15); every odd index is also a
// 7-point Gauss node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<R: Real>(f: &mut impl FnMut(R) -> R, a: R, b: R) -> (R, R) {
    let half = (b - a) / R::lit(2.0);
    let mid = (a + b) / R::lit(2.0);
    let fc = f(mid);
    let mut kronrod = fc * R::lit(WGK[7]);
    let mut gauss = fc * R::lit(WG[3]);
    for j in 0..7 {
        let dx = half * R::lit(XGK[j]);
        let pair = f(mid - dx) + f(mid + dx);
        kronrod = kronrod + R::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss = gauss + R::lit(WG[j / 2]) * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive 15-point Gauss–Kronrod quadrature on a finite interval.
///
/// The segment with the largest error estimate is bisected until the summed
/// error drops below `max(abs, rel * |value|)`.
pub fn adaptive_gk15<R: Real>(
    mut f: impl FnMut(R) -> R,
    a: R,
    b: R,
    tol: QuadratureTolerance,
) -> Result<Integral<R>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(FfrError::param("quadrature limits must be finite"));
    }
    if a == b {
        return Ok(Integral { value: R::zero(), error: R::zero(), evaluations: 0 });
    }
    let abs_tol = R::lit(tol.abs);
    let rel_tol = R::tol(tol.rel);
    let (v, e) = gk15(&mut f, a, b);
    let mut segments = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let value: R = segments.iter().map(|s| s.2).sum();
        let error: R = segments.iter().map(|s| s.3).sum();
        if !value.is_finite() {
            return Err(FfrError::numerical("adaptive_gk15", "integrand produced a non-finite value"));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Integral { value, error, evaluations });
        }
        if segments.len() >= tol.max_segments {
            return Err(FfrError::numerical(
                "adaptive_gk15",
                format!(
                    "no convergence on [{a}, {b}] after {} segments: value {value}, error {error}",
                    segments.len()
                ),
            ));
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = segments.swap_remove(worst);
        let mid = (lo + hi) / R::lit(2.0);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        evaluations += 30;
        segments.push((lo, mid, v1, e1));
        segments.push((mid, hi, v2, e2));
    }
}
