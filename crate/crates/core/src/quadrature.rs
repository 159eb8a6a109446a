//! Quadrature over one period `[-pi, pi]`.
//!
//! Without breakpoints the integrand is smooth and periodic, and the plain
//! trapezoidal rule on the full period converges spectrally; it is refined by
//! halving the step until successive estimates agree.
//!
//! Breakpoints (gapless momenta, kinks of `|cos Delta_p|`) split the circle
//! into panels. On each panel the integrand is smooth up to the endpoints but
//! may be undefined *at* them, so panels are integrated with the tanh-sinh
//! rule: the trapezoidal rule in the variable `t`, `p = mid + half *
//! tanh(pi/2 sinh t)`, again refined by halving. It never evaluates the
//! endpoints and keeps converging exponentially in spite of endpoint kinks.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::Momentum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinements: usize,
    #[serde(skip)]
    pub breakpoints: Vec<Momentum>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_refinements: 24,
            breakpoints: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must be positive (rel_tol = {}, abs_tol = {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_refinements == 0 {
            return Err(Error::InvalidParameter(
                "max_refinements must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Copy of `self` with `extra` merged into the breakpoint list.
    pub fn with_breakpoints(&self, extra: impl IntoIterator<Item = Momentum>) -> Self {
        let mut out = self.clone();
        out.breakpoints.extend(extra);
        out.breakpoints
            .sort_by(|a, b| a.value().total_cmp(&b.value()));
        out.breakpoints.dedup();
        out
    }
}

/// Trapezoid points on the full period before the first halving.
const PERIODIC_START: usize = 16;
/// Minimum number of halvings before the error estimate is trusted.
const MIN_LEVELS: usize = 3;
/// Truncation of the tanh-sinh abscissae; beyond it the nodes are closer to
/// the endpoints than double precision resolves.
const TANH_SINH_TMAX: f64 = 4.0;

/// `int_{-pi}^{pi} f(p) dp` for a 2pi-periodic `f`.
pub fn periodic_quadrature<F>(mut f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_periodic(|p| [f(p)], spec).map(|[v]| v)
}

/// Vector-valued variant: all components share the nodes and each must meet
/// the tolerance.
pub fn integrate_periodic<const N: usize, F>(mut f: F, spec: &QuadratureSpec) -> Result<[f64; N]>
where
    F: FnMut(f64) -> [f64; N],
{
    spec.validate()?;
    let cuts = circle_cuts(&spec.breakpoints);
    if cuts.is_empty() {
        return trapezoid_full_period(&mut f, spec);
    }
    let mut total = [0.0; N];
    for (i, &a) in cuts.iter().enumerate() {
        let b = if i + 1 < cuts.len() {
            cuts[i + 1]
        } else {
            cuts[0] + 2.0 * PI
        };
        let panel = tanh_sinh_panel(&mut f, a, b, spec)?;
        for k in 0..N {
            total[k] += panel[k];
        }
    }
    Ok(total)
}

/// Breakpoints as distinct points on the circle, in `[-pi, pi)`, ascending.
fn circle_cuts(breakpoints: &[Momentum]) -> Vec<f64> {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .map(|p| {
            let v = p.value();
            if v >= PI {
                -PI
            } else {
                v
            }
        })
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

#[inline]
fn wrap(p: f64) -> f64 {
    if p > PI {
        p - 2.0 * PI
    } else {
        p
    }
}

fn converged<const N: usize>(new: &[f64; N], old: &[f64; N], spec: &QuadratureSpec) -> bool {
    new.iter()
        .zip(old)
        .all(|(n, o)| (n - o).abs() <= spec.abs_tol.max(spec.rel_tol * n.abs()))
}

fn worst<const N: usize>(new: &[f64; N], old: &[f64; N]) -> (f64, f64) {
    new.iter()
        .zip(old)
        .map(|(n, o)| ((n - o).abs(), *n))
        .fold((0.0, 0.0), |acc, x| if x.0 >= acc.0 { x } else { acc })
}

fn accumulate<const N: usize>(acc: &mut [f64; N], v: [f64; N], scale: f64, p: f64) -> Result<()> {
    for k in 0..N {
        if !v[k].is_finite() {
            return Err(Error::NonFiniteIntegrand { p });
        }
        acc[k] += scale * v[k];
    }
    Ok(())
}

fn trapezoid_full_period<const N: usize, F>(f: &mut F, spec: &QuadratureSpec) -> Result<[f64; N]>
where
    F: FnMut(f64) -> [f64; N],
{
    let mut n = PERIODIC_START;
    let mut sum = [0.0; N];
    for j in 0..n {
        let p = -PI + 2.0 * PI * j as f64 / n as f64;
        accumulate(&mut sum, f(p), 1.0, p)?;
    }
    let mut prev = sum.map(|s| s * 2.0 * PI / n as f64);
    let mut last = (f64::INFINITY, 0.0);
    for level in 1..=spec.max_refinements {
        // new nodes are the midpoints of the current grid
        for j in 0..n {
            let p = -PI + 2.0 * PI * (2 * j + 1) as f64 / (2 * n) as f64;
            accumulate(&mut sum, f(p), 1.0, p)?;
        }
        n *= 2;
        let cur = sum.map(|s| s * 2.0 * PI / n as f64);
        if level >= MIN_LEVELS && converged(&cur, &prev, spec) {
            return Ok(cur);
        }
        last = worst(&cur, &prev);
        prev = cur;
    }
    Err(Error::QuadratureFailed {
        refinements: spec.max_refinements,
        estimate: last.0,
        value: last.1,
    })
}

fn tanh_sinh_panel<const N: usize, F>(f: &mut F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<[f64; N]>
where
    F: FnMut(f64) -> [f64; N],
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    // Adds the pair of nodes at +-t (or the centre when t = 0).
    let mut add_node = |t: f64, sum: &mut [f64; N]| -> Result<()> {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (ch * ch);
        if !(w > 0.0) {
            return Ok(());
        }
        if t == 0.0 {
            return accumulate(sum, f(wrap(mid)), w, mid);
        }
        // 1 - tanh(u), without cancellation
        let comp = 2.0 / ((2.0 * u).exp() + 1.0);
        let off = half * comp;
        let hi = b - off;
        let lo = a + off;
        if hi < b && hi > mid {
            accumulate(sum, f(wrap(hi)), w, hi)?;
        }
        if lo > a && lo < mid {
            accumulate(sum, f(wrap(lo)), w, lo)?;
        }
        Ok(())
    };

    let mut sum = [0.0; N];
    let mut step = 1.0;
    let kmax = TANH_SINH_TMAX as usize;
    for j in 0..=kmax {
        add_node(j as f64, &mut sum)?;
    }
    let mut prev = sum.map(|s| s * step * half);
    let mut last = (f64::INFINITY, 0.0);
    for level in 1..=spec.max_refinements {
        step *= 0.5;
        let count = (TANH_SINH_TMAX / step) as usize;
        for j in (1..=count).step_by(2) {
            add_node(j as f64 * step, &mut sum)?;
        }
        let cur = sum.map(|s| s * step * half);
        if level >= MIN_LEVELS && converged(&cur, &prev, spec) {
            return Ok(cur);
        }
        last = worst(&cur, &prev);
        prev = cur;
    }
    Err(Error::QuadratureFailed {
        refinements: spec.max_refinements,
        estimate: last.0,
        value: last.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn with_cuts(cuts: &[f64]) -> QuadratureSpec {
        QuadratureSpec::default()
            .with_breakpoints(cuts.iter().map(|&p| Momentum::new(p).unwrap()))
    }

    #[test]
    fn trivial_integrals() {
        let s = QuadratureSpec::default();
        assert!(periodic_quadrature(f64::cos, &s).unwrap().abs() < 1e-14);
        let v = periodic_quadrature(|p| p.cos().powi(2), &s).unwrap();
        assert!((v - PI).abs() < 1e-13, "{v}");
        let v = periodic_quadrature(|p| p.cos().abs(), &with_cuts(&[-FRAC_PI_2, FRAC_PI_2])).unwrap();
        assert!((v - 4.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn single_breakpoint_wraps_around() {
        // |sin(p/2)| has its kink at p = 0; integral over a period is 4
        let v = periodic_quadrature(|p| (0.5 * p).sin().abs(), &with_cuts(&[0.0])).unwrap();
        assert!((v - 4.0).abs() < 1e-12, "{v}");
        let v = periodic_quadrature(|p| (0.5 * p).cos().abs(), &with_cuts(&[PI])).unwrap();
        assert!((v - 4.0).abs() < 1e-12, "{v}");
        let v = periodic_quadrature(|p| (0.5 * p).cos().abs(), &with_cuts(&[-PI, PI])).unwrap();
        assert!((v - 4.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn endpoints_are_never_evaluated() {
        // sign(p) is undefined at 0 for this test's purposes
        let f = |p: f64| {
            assert!(p != 0.0);
            if p > 0.0 { 1.0 } else { -3.0 }
        };
        let v = periodic_quadrature(f, &with_cuts(&[0.0, PI])).unwrap();
        assert!((v - (PI - 3.0 * PI)).abs() < 1e-12, "{v}");
    }

    #[test]
    fn sharp_but_smooth_periodic_integrand() {
        // 1 / (1 + a^2 - 2a cos p) integrates to 2 pi / (1 - a^2)
        let a: f64 = 0.99;
        let exact = 2.0 * PI / (1.0 - a * a);
        let v = periodic_quadrature(|p| 1.0 / (1.0 + a * a - 2.0 * a * p.cos()), &QuadratureSpec::default()).unwrap();
        assert!(((v - exact) / exact).abs() < 1e-12, "{v} vs {exact}");
    }

    #[test]
    fn failure_is_reported() {
        let spec = QuadratureSpec {
            max_refinements: 4,
            ..Default::default()
        };
        // unresolved jump without a breakpoint
        let r = periodic_quadrature(|p| if p > 0.3 { 1.0 } else { 0.0 }, &spec);
        assert!(matches!(r, Err(Error::QuadratureFailed { .. })));
        let r = periodic_quadrature(|_| f64::NAN, &QuadratureSpec::default());
        assert!(matches!(r, Err(Error::NonFiniteIntegrand { .. })));
        let bad = QuadratureSpec {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(periodic_quadrature(f64::cos, &bad).is_err());
    }

    #[test]
    fn vector_valued_matches_scalar() {
        let s = with_cuts(&[0.0, PI]);
        let [a, b] = integrate_periodic(|p| [p.sin().powi(2), p.sin().abs()], &s).unwrap();
        let a1 = periodic_quadrature(|p| p.sin().powi(2), &s).unwrap();
        assert!((a - a1).abs() < 1e-13);
        assert!((a - PI).abs() < 1e-12);
        assert!((b - 4.0).abs() < 1e-12, "{b}");
    }
}
