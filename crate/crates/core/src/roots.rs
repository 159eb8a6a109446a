//! Bracketed bisection for continuous scalar functions.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Bisect `f` on `[lo, hi]` until `|f(x)| <= f_tol`.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them already
/// satisfies the tolerance). Stops with [`Error::NoConvergence`] if the
/// bracket collapses to adjacent floats without meeting `f_tol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, f_tol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    if flo.abs() <= f_tol {
        return Ok(Root { x: lo, fx: flo, iterations: 0 });
    }
    let fhi = f(hi)?;
    if fhi.abs() <= f_tol {
        return Ok(Root { x: hi, fx: fhi, iterations: 0 });
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NotBracketed { lo, hi });
    }
    for it in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let fm = f(mid)?;
        if fm.abs() <= f_tol {
            return Ok(Root { x: mid, fx: fm, iterations: it });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { iterations: max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt2() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn decreasing_function() {
        let r = bisect(|x| Ok(1.0 - x), 0.0, 5.0, 1e-12, 200).unwrap();
        assert!((r.x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_unbracketed() {
        assert!(matches!(
            bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 100),
            Err(Error::NotBracketed { .. })
        ));
    }

    #[test]
    fn unreachable_tolerance() {
        // jump at 0.5 never gets below 1e-3
        let r = bisect(|x| Ok(if x < 0.5 { -1.0 } else { 1.0 }), 0.0, 1.0, 1e-3, 500);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }
}
