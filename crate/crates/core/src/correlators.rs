//! Nearest-neighbor correlation functions in the thermodynamic limit.
//!
//! With a mode weight `w(p)` the three basic integrals are
//!
//! ```text
//! g_c = 1/pi int cos p (cos p - h) w / eps dp
//! g_s = -gamma/pi int sin^2 p w / eps dp
//! g_0 = 1/pi int (h - cos p) w / eps dp
//! ```
//!
//! and the spin correlators follow by Wick's theorem.

use serde::Serialize;

use crate::ensemble::ModeWeight;
use crate::error::Result;
use crate::quadrature::{integrate_periodic, QuadratureSpec};
use crate::spectrum::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GFunctions {
    pub g_c: f64,
    pub g_s: f64,
    pub g_0: f64,
}

/// Nearest-neighbor expectation values of a translation-invariant state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelatorSet {
    pub g_c: f64,
    pub g_s: f64,
    pub g_0: f64,
    /// `<sx_l sx_{l+1}>`
    pub sxsx: f64,
    /// `<sy_l sy_{l+1}>`
    pub sysy: f64,
    /// `<sz_l sz_{l+1}>`
    pub szsz: f64,
    /// `<sz_l>`
    pub sz: f64,
}

impl CorrelatorSet {
    pub fn from_g_functions(g: GFunctions) -> Self {
        let GFunctions { g_c, g_s, g_0 } = g;
        Self {
            g_c,
            g_s,
            g_0,
            sxsx: g_c - g_s,
            sysy: g_c + g_s,
            szsz: g_0 * g_0 - g_c * g_c + g_s * g_s,
            sz: g_0,
        }
    }

    /// Set built directly from spin correlations, e.g. for synthetic states.
    /// `g_c`, `g_s` and `g_0` are back-filled from `sxsx`, `sysy` and `sz`;
    /// `szsz` is taken as given.
    pub fn from_spin_correlations(sxsx: f64, sysy: f64, szsz: f64, sz: f64) -> Self {
        Self {
            g_c: 0.5 * (sxsx + sysy),
            g_s: 0.5 * (sysy - sxsx),
            g_0: sz,
            sxsx,
            sysy,
            szsz,
            sz,
        }
    }

    pub fn g_functions(&self) -> GFunctions {
        GFunctions {
            g_c: self.g_c,
            g_s: self.g_s,
            g_0: self.g_0,
        }
    }

    /// `<sz sz> - <sz>^2`, zero for product states.
    pub fn connected_zz(&self) -> f64 {
        self.szsz - self.sz * self.sz
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.g_c - other.g_c,
            self.g_s - other.g_s,
            self.g_0 - other.g_0,
            self.sxsx - other.sxsx,
            self.sysy - other.sysy,
            self.szsz - other.szsz,
            self.sz - other.sz,
        ]
        .into_iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }
}

/// The three integrands at one momentum, before the `1/pi` prefactor and the
/// sign of `g_s`. `gamma` stays inside the second one: `gamma sin^2 p / eps`
/// is bounded even where `eps` vanishes. Shared with the finite-chain sums.
pub(crate) fn g_integrands(params: &ModelParams, w: &ModeWeight, p: f64) -> [f64; 3] {
    let e = params.dispersion_raw(p);
    if e == 0.0 {
        return [0.0; 3];
    }
    // degenerate modes are isolated breakpoints of measure zero
    let Ok(wp) = w.weight_raw(params, p) else {
        return [0.0; 3];
    };
    let r = wp / e;
    let c = p.cos();
    let s = p.sin();
    let off = params.field_offset(p);
    [-c * off * r, params.gamma * s * s * r, off * r]
}

pub(crate) fn g_from_integrals(raw: [f64; 3], norm: f64) -> GFunctions {
    GFunctions {
        g_c: raw[0] * norm,
        g_s: -raw[1] * norm,
        g_0: raw[2] * norm,
    }
}

/// `g_c`, `g_s`, `g_0` under the weight `w`. Required breakpoints (gapless
/// momenta, GGE kinks) are added to those already in `spec`.
pub fn g_functions(params: &ModelParams, w: &ModeWeight, spec: &QuadratureSpec) -> Result<GFunctions> {
    w.check_params(params)?;
    let spec = spec.with_breakpoints(w.breakpoints(params));
    let raw = integrate_periodic(|p| g_integrands(params, w, p), &spec)?;
    Ok(g_from_integrals(raw, std::f64::consts::FRAC_1_PI))
}

pub fn nn_correlators(params: &ModelParams, w: &ModeWeight, spec: &QuadratureSpec) -> Result<CorrelatorSet> {
    g_functions(params, w, spec).map(CorrelatorSet::from_g_functions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::QuenchSpec;

    fn mp(g: f64, h: f64) -> ModelParams {
        ModelParams::new(g, h).unwrap()
    }

    #[test]
    fn ising_ground_state() {
        let g = g_functions(&mp(1.0, 0.0), &ModeWeight::GroundState, &QuadratureSpec::default()).unwrap();
        assert!((g.g_c - 0.5).abs() < 1e-13);
        assert!((g.g_s + 0.5).abs() < 1e-13);
        assert!(g.g_0.abs() < 1e-13);
        let c = CorrelatorSet::from_g_functions(g);
        assert!((c.sxsx - 1.0).abs() < 1e-13);
        assert!(c.sysy.abs() < 1e-13 && c.szsz.abs() < 1e-13 && c.sz.abs() < 1e-13);
    }

    #[test]
    fn infinite_temperature_is_featureless() {
        for params in [mp(1.0, 0.0), mp(0.3, 1.7), mp(0.0, 0.4)] {
            let c = nn_correlators(&params, &ModeWeight::thermal(1e12).unwrap(), &QuadratureSpec::default()).unwrap();
            for v in [c.sxsx, c.sysy, c.szsz, c.sz] {
                assert!(v.abs() < 1e-11);
            }
        }
    }

    #[test]
    fn identities_hold_by_construction() {
        let c = nn_correlators(&mp(0.4, 0.9), &ModeWeight::thermal(0.7).unwrap(), &QuadratureSpec::default()).unwrap();
        assert_eq!(c.sxsx, c.g_c - c.g_s);
        assert_eq!(c.sysy, c.g_c + c.g_s);
        assert_eq!(c.szsz, c.g_0 * c.g_0 - c.g_c * c.g_c + c.g_s * c.g_s);
        assert_eq!(c.sz, c.g_0);
    }

    #[test]
    fn disorder_line_factorizes() {
        let params = ModelParams::disorder_line(0.6).unwrap();
        assert!((params.h - 0.8).abs() < 1e-15);
        let c = nn_correlators(&params, &ModeWeight::GroundState, &QuadratureSpec::default()).unwrap();
        assert!(c.connected_zz().abs() < 1e-8, "{}", c.connected_zz());
    }

    #[test]
    fn strong_field_limit() {
        // sx sx and sy sy vanish like -+g_s ~ gamma / 2h; sz and sz sz approach 1
        // at O(1/h^2)
        let h = 50.0;
        for gamma in [0.0, 0.5, 1.0] {
            let c = nn_correlators(&mp(gamma, h), &ModeWeight::GroundState, &QuadratureSpec::default()).unwrap();
            assert!((c.sz - 1.0).abs() < 1e-3);
            assert!((c.szsz - 1.0).abs() < 1e-3);
            let lead = gamma / (2.0 * h);
            assert!((c.sxsx - lead).abs() < 1e-3, "{} vs {lead}", c.sxsx);
            assert!((c.sysy + lead).abs() < 1e-3, "{} vs {}", c.sysy, -lead);
        }
    }

    #[test]
    fn trivial_gge_is_ground_state() {
        let params = mp(0.35, 0.6);
        let s = QuadratureSpec::default();
        let gs = nn_correlators(&params, &ModeWeight::GroundState, &s).unwrap();
        let gge = nn_correlators(&params, &ModeWeight::Gge(QuenchSpec::new(params, params)), &s).unwrap();
        assert!(gs.max_abs_diff(&gge) < 1e-10);
    }

    #[test]
    fn critical_and_xx_chains_integrate() {
        let s = QuadratureSpec::default();
        // gapless at p = 0
        nn_correlators(&mp(1.0, 1.0), &ModeWeight::GroundState, &s).unwrap();
        // XX chain: jump discontinuities at +-acos(h)
        let c = nn_correlators(&mp(0.0, 0.5), &ModeWeight::GroundState, &s).unwrap();
        // free fermions with Fermi momentum kF = acos(h): g_0 = 1 - 2 kF/pi, g_c = 2 sin(kF)/pi
        let kf = 0.5f64.acos();
        assert!((c.g_0 - (1.0 - 2.0 * kf / std::f64::consts::PI)).abs() < 1e-12, "{}", c.g_0);
        assert!((c.g_c - 2.0 * kf.sin() / std::f64::consts::PI).abs() < 1e-12, "{}", c.g_c);
        // GGE out of a critical initial state
        let q = QuenchSpec::new(mp(0.5, 1.0), mp(0.5, 0.3));
        nn_correlators(&q.post, &ModeWeight::Gge(q), &s).unwrap();
    }
}
