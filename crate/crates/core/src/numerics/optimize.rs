use crate::error::{FfrError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct Maximum<R> {
    pub x: R,
    pub value: R,
    pub iterations: usize,
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
pub fn golden_section_max<R: Real>(
    mut f: impl FnMut(R) -> Result<R>,
    a: R,
    b: R,
    xtol: R,
    max_iter: usize,
) -> Result<Maximum<R>> {
    let inv_phi = (R::lit(5.0).sqrt() - R::one()) / R::lit(2.0);
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for iter in 1..=max_iter {
        if (b - a).abs() <= xtol {
            let (x, value) = if fc >= fd { (c, fc) } else { (d, fd) };
            return Ok(Maximum { x, value, iterations: iter });
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Err(FfrError::numerical(
        "golden_section_max",
        format!("bracket [{a}, {b}] still wider than {xtol} after {max_iter} iterations"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locates_parabola_peak() {
        let m = golden_section_max(|x: f64| Ok(-(x - 1.3).powi(2) + 2.0), -5.0, 5.0, 1e-8, 200).unwrap();
        assert!((m.x - 1.3).abs() < 1e-7);
        assert!((m.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn propagates_objective_errors() {
        let r = golden_section_max(|_: f64| Err(FfrError::param("boom")), 0.0, 1.0, 1e-6, 10);
        assert!(r.is_err());
    }
}
