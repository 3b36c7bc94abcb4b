use crate::error::{FfrError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct Root<R> {
    pub x: R,
    pub f_x: R,
    pub iterations: usize,
}

/// Brent's method on a bracket `[a, b]` with `f(a)` and `f(b)` of opposite sign.
///
/// Terminates when the bracket is narrower than `xtol` (absolute) or an exact
/// zero is hit.
pub fn brent<R: Real>(mut f: impl FnMut(R) -> R, a: R, b: R, xtol: R, max_iter: usize) -> Result<Root<R>> {
    let two = R::lit(2.0);
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() {
        return Err(FfrError::numerical("brent", "function is NaN at a bracket end"));
    }
    if fa == R::zero() {
        return Ok(Root { x: a, f_x: fa, iterations: 0 });
    }
    if fb == R::zero() {
        return Ok(Root { x: b, f_x: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(FfrError::numerical(
            "brent",
            format!("no sign change on [{a}, {b}]: f = ({fa}, {fb})"),
        ));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * R::epsilon() * b.abs() + xtol / two;
        let m = (c - b) / two;
        if m.abs() <= tol || fb == R::zero() {
            return Ok(Root { x: b, f_x: fb, iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = R::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - R::one()));
                q = (qa - R::one()) * (r - R::one()) * (s - R::one());
            }
            if p > R::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (R::lit(3.0) * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = b + if d.abs() > tol { d } else { tol * m.signum() };
        fb = f(b);
        if fb.is_nan() {
            return Err(FfrError::numerical("brent", format!("function is NaN at {b}")));
        }
    }
    Err(FfrError::numerical(
        "brent",
        format!("no convergence after {max_iter} iterations; last iterate {b}, f = {fb}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let r = brent(|x: f64| x * x * x - 2.0 * x - 5.0, 2.0, 3.0, 1e-14, 100).unwrap();
        assert!((r.x - 2.094_551_481_542_326_5).abs() < 1e-12);
    }

    #[test]
    fn handles_flat_tails_and_reversed_brackets() {
        let r = brent(|x: f64| (x - 0.7).tanh() * 1e-3, 10.0, -10.0, 1e-12, 200).unwrap();
        assert!((r.x - 0.7).abs() < 1e-10);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(brent(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12, 50).is_err());
    }

    #[test]
    fn exact_endpoint_root() {
        let r = brent(|x: f64| x, 0.0, 1.0, 1e-12, 50).unwrap();
        assert_eq!(r.x, 0.0);
    }
}
