//! Single-mode quantities of the XY chain
//!
//! ```text
//! H = -sum_l [ (1+gamma)/2 sx_l sx_{l+1} + (1-gamma)/2 sy_l sy_{l+1} ] - h sum_l sz_l
//! ```
//!
//! maps onto free fermions with dispersion `eps(p) = 2 sqrt(gamma^2 sin^2 p + (h - cos p)^2)`.
//! Everything in this module is a closed-form function of one quasi-momentum.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anisotropy `gamma` and transverse field `h` of one XY Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub gamma: f64,
    pub h: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, h: f64) -> Result<Self> {
        if !gamma.is_finite() || !h.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma and h must be finite (got gamma = {gamma}, h = {h})"
            )));
        }
        Ok(Self { gamma, h })
    }

    /// `h - cos p`, evaluated without cancellation near the gapless points
    /// `p = 0` (h = 1) and `p = ±pi` (h = -1).
    pub(crate) fn field_offset(&self, p: f64) -> f64 {
        let half = 0.5 * p;
        if p.cos() >= 0.0 {
            (self.h - 1.0) + 2.0 * half.sin().powi(2)
        } else {
            (self.h + 1.0) - 2.0 * half.cos().powi(2)
        }
    }

    /// `eps(p) / 2`.
    pub(crate) fn half_dispersion(&self, p: f64) -> f64 {
        (self.gamma * p.sin()).hypot(self.field_offset(p))
    }

    pub(crate) fn dispersion_raw(&self, p: f64) -> f64 {
        2.0 * self.half_dispersion(p)
    }

    /// `eps(p)`, or a degenerate-mode error if it vanishes.
    pub(crate) fn gapped_dispersion(&self, p: f64) -> Result<f64> {
        let e = self.dispersion_raw(p);
        if e > 0.0 {
            Ok(e)
        } else {
            Err(Error::DegenerateMode { p })
        }
    }

    /// Point on the disorder line `h = sqrt(1 - gamma^2)` where the ground
    /// state is a product state. Requires `|gamma| <= 1`.
    pub fn disorder_line(gamma: f64) -> Result<Self> {
        if !(gamma.abs() <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "disorder line needs |gamma| <= 1 (got {gamma})"
            )));
        }
        Self::new(gamma, (1.0 - gamma * gamma).sqrt())
    }
}

/// Sudden change of parameters `pre -> post`, starting from the ground
/// state of `pre`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuenchSpec {
    pub pre: ModelParams,
    pub post: ModelParams,
}

impl QuenchSpec {
    pub fn new(pre: ModelParams, post: ModelParams) -> Self {
        Self { pre, post }
    }

    pub fn is_trivial(&self) -> bool {
        self.pre == self.post
    }
}

/// Quasi-momentum in `[-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Momentum(f64);

impl Momentum {
    pub fn new(p: f64) -> Result<Self> {
        if (-PI..=PI).contains(&p) {
            Ok(Self(p))
        } else {
            Err(Error::InvalidParameter(format!(
                "momentum {p} outside [-pi, pi]"
            )))
        }
    }

    /// Reduce any finite angle into `[-pi, pi]`.
    pub fn wrapped(p: f64) -> Self {
        let mut q = (p + PI).rem_euclid(2.0 * PI) - PI;
        if q < -PI {
            q = -PI;
        }
        Self(q)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Momentum> for f64 {
    fn from(p: Momentum) -> f64 {
        p.0
    }
}

/// Single-particle energy `eps(p) >= 0`.
pub fn dispersion(params: &ModelParams, p: Momentum) -> f64 {
    params.dispersion_raw(p.0)
}

/// Bogoliubov angle from the two-argument arctangent of
/// `(-gamma sin p, h - cos p)`.
pub fn bogoliubov_angle(params: &ModelParams, p: Momentum) -> Result<f64> {
    let y = -params.gamma * p.0.sin();
    let x = params.field_offset(p.0);
    if y == 0.0 && x == 0.0 {
        return Err(Error::DegenerateMode { p: p.0 });
    }
    Ok(y.atan2(x))
}

pub(crate) fn cos_delta_raw(quench: &QuenchSpec, p: f64) -> Result<f64> {
    if quench.is_trivial() {
        // still reject gapless modes
        quench.post.gapped_dispersion(p)?;
        return Ok(1.0);
    }
    let e = quench.post.half_dispersion(p);
    let e0 = quench.pre.half_dispersion(p);
    if !(e > 0.0) || !(e0 > 0.0) {
        return Err(Error::DegenerateMode { p });
    }
    let s = p.sin();
    // (cos p - h0)(cos p - h) = (h0 - cos p)(h - cos p)
    let num = quench.pre.field_offset(p) * quench.post.field_offset(p)
        + quench.pre.gamma * quench.post.gamma * s * s;
    Ok((num / (e * e0)).clamp(-1.0, 1.0))
}

/// `cos(Delta_p)` where `Delta_p` is the difference of pre- and post-quench
/// Bogoliubov angles, from the closed rational formula, clamped to `[-1, 1]`.
pub fn cos_delta(quench: &QuenchSpec, p: Momentum) -> Result<f64> {
    cos_delta_raw(quench, p.0)
}

/// Mode occupation in the initial state and its effective counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupation {
    /// `f_p = (1 - cos Delta_p) / 2`
    pub f: f64,
    /// `-ln|cos Delta_p| / 2`; infinite when `cos Delta_p = 0`.
    pub f_tilde: f64,
}

impl Occupation {
    pub fn from_cos_delta(c: f64) -> Self {
        let f = (0.5 * (1.0 - c)).clamp(0.0, 1.0);
        let a = c.abs();
        let f_tilde = if a == 0.0 {
            f64::INFINITY
        } else {
            (-0.5 * a.ln()).max(0.0)
        };
        Self { f, f_tilde }
    }
}

pub fn occupation(quench: &QuenchSpec, p: Momentum) -> Result<Occupation> {
    cos_delta(quench, p).map(Occupation::from_cos_delta)
}

/// All `p` in `[-pi, pi]` where `eps(p) = 0`, sorted ascending.
pub fn gapless_momenta(params: &ModelParams) -> Vec<Momentum> {
    let mut out: Vec<f64> = Vec::new();
    let h = params.h;
    if params.gamma == 0.0 && h.abs() <= 1.0 {
        let a = h.acos();
        out.push(-a);
        out.push(a);
    } else if h == 1.0 {
        out.push(0.0);
    } else if h == -1.0 {
        out.push(-PI);
        out.push(PI);
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out.into_iter().map(Momentum).collect()
}

/// Momenta where `cos Delta_p` vanishes.
///
/// The numerator of `cos Delta_p` is a quadratic in `c = cos p`:
/// `(1 - gamma gamma0) c^2 - (h + h0) c + (h h0 + gamma gamma0)`,
/// so its roots are available in closed form. Returned sorted.
pub fn cos_delta_zeros(quench: &QuenchSpec) -> Vec<Momentum> {
    if quench.is_trivial() {
        return Vec::new();
    }
    let gg = quench.pre.gamma * quench.post.gamma;
    let (h0, h) = (quench.pre.h, quench.post.h);
    let a = 1.0 - gg;
    let b = -(h + h0);
    let c = h * h0 + gg;

    let mut roots_c: Vec<f64> = Vec::new();
    if a == 0.0 {
        if b != 0.0 {
            roots_c.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            let q = -0.5 * (b + b.signum() * sq);
            if q != 0.0 {
                roots_c.push(q / a);
                roots_c.push(c / q);
            } else {
                roots_c.push(0.0);
            }
        }
    }

    let mut out: Vec<f64> = Vec::new();
    for rc in roots_c {
        if (-1.0..=1.0).contains(&rc) {
            let p = rc.acos();
            out.push(p);
            out.push(-p);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out.into_iter().map(Momentum).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn mp(g: f64, h: f64) -> ModelParams {
        ModelParams::new(g, h).unwrap()
    }
    fn m(p: f64) -> Momentum {
        Momentum::new(p).unwrap()
    }

    #[test]
    fn dispersion_examples() {
        assert!((dispersion(&mp(1.0, 0.0), m(FRAC_PI_2)) - 2.0).abs() < 1e-15);
        assert_eq!(dispersion(&mp(1.0, 1.0), m(0.0)), 0.0);
        let e = dispersion(&mp(0.5, 0.5), m(FRAC_PI_3));
        assert!((e - 0.8660254037844386).abs() < 1e-14, "{e}");
    }

    #[test]
    fn angle_examples() {
        assert_eq!(bogoliubov_angle(&mp(1.0, 2.0), m(0.0)).unwrap(), 0.0);
        let a = bogoliubov_angle(&mp(1.0, 0.0), m(FRAC_PI_2)).unwrap();
        assert!((a + FRAC_PI_2).abs() < 1e-12, "{a}");
        let a = bogoliubov_angle(&mp(0.5, 1.5), m(FRAC_PI_2)).unwrap();
        assert!((a - (-0.5f64).atan2(1.5)).abs() < 1e-15);
        assert!((a + 0.3217505543966422).abs() < 1e-15);
        assert!(matches!(
            bogoliubov_angle(&mp(1.0, 1.0), m(0.0)),
            Err(Error::DegenerateMode { .. })
        ));
    }

    #[test]
    fn cos_delta_examples() {
        let ising = mp(1.0, 0.0);
        let triv = QuenchSpec::new(ising, ising);
        for p in [-3.0, -1.0, 0.0, 0.3, 2.9] {
            assert_eq!(cos_delta(&triv, m(p)).unwrap(), 1.0);
        }
        let q = QuenchSpec::new(ising, mp(1.0, 2.0));
        let c = cos_delta(&q, m(FRAC_PI_2)).unwrap();
        assert!((c - 1.0 / 5f64.sqrt()).abs() < 1e-15, "{c}");
        assert_eq!(cos_delta(&q, m(0.0)).unwrap(), -1.0);

        let crit = QuenchSpec::new(mp(1.0, 1.0), mp(1.0, 2.0));
        assert!(matches!(cos_delta(&crit, m(0.0)), Err(Error::DegenerateMode { .. })));
    }

    #[test]
    fn occupation_examples() {
        let o = Occupation::from_cos_delta(1.0);
        assert_eq!((o.f, o.f_tilde), (0.0, 0.0));
        let o = Occupation::from_cos_delta(-1.0);
        assert_eq!((o.f, o.f_tilde), (1.0, 0.0));
        let o = Occupation::from_cos_delta(1.0 / 5f64.sqrt());
        assert!((o.f - 0.276_393_202_250_021).abs() < 1e-12);
        assert!((o.f_tilde - 0.402_359_478_108_525_1).abs() < 1e-12, "{}", o.f_tilde);
        assert!(Occupation::from_cos_delta(0.0).f_tilde.is_infinite());
        // f_tilde = f + O(f^2)
        let o = Occupation::from_cos_delta(1.0 - 2e-6);
        assert!((o.f_tilde - o.f).abs() < 1e-11);
    }

    #[test]
    fn gapless_examples() {
        assert_eq!(gapless_momenta(&mp(1.0, 1.0)), vec![m(0.0)]);
        assert!(gapless_momenta(&mp(0.5, 0.5)).is_empty());
        let g = gapless_momenta(&mp(0.0, 0.5));
        assert_eq!(g.len(), 2);
        assert!((g[0].value() + FRAC_PI_3).abs() < 1e-15);
        assert!((g[1].value() - FRAC_PI_3).abs() < 1e-15);
        assert_eq!(gapless_momenta(&mp(0.3, -1.0)), vec![m(-PI), m(PI)]);
        assert_eq!(gapless_momenta(&mp(0.0, 1.0)), vec![m(0.0)]);
        for params in [mp(1.0, 1.0), mp(0.0, 0.5), mp(0.0, -0.2), mp(0.7, -1.0)] {
            for p in gapless_momenta(&params) {
                assert!(dispersion(&params, p) < 1e-15);
            }
        }
    }

    #[test]
    fn cos_delta_zero_locations() {
        let q = QuenchSpec::new(mp(1.0, 0.0), mp(1.0, 2.0));
        let z = cos_delta_zeros(&q);
        assert_eq!(z.len(), 2);
        assert!((z[1].value() - FRAC_PI_3).abs() < 1e-15);
        for p in z {
            let c = cos_delta(&q, p).unwrap();
            assert!(c.abs() < 1e-14, "{c}");
        }
    }

    #[test]
    fn wrapping() {
        assert!((Momentum::wrapped(3.0 * PI / 2.0).value() + FRAC_PI_2).abs() < 1e-15);
        assert!((Momentum::wrapped(-PI).value() + PI).abs() < 1e-15);
        assert!(Momentum::new(4.0).is_err());
        assert!(ModelParams::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn stable_offset_near_gapless_point() {
        // naive h - cos p is exactly zero here
        let params = mp(0.0, 1.0);
        assert!(dispersion(&params, m(1e-9)) > 0.0);
    }
}
