//! Mode occupation weights for the ground state, the thermal Gibbs state and
//! the generalized Gibbs ensemble (GGE), plus energy densities and the
//! thermalization temperature.
//!
//! Every stationary state considered here is Gaussian and diagonal in the
//! post-quench modes, so it is fully described by a weight `w(p) in [0, 1]`
//! that multiplies each mode's ground-state contribution: `w = 1` in the
//! ground state, `w = tanh(eps/2T)` at temperature `T`, and `w = |cos Delta_p|`
//! in the GGE reached after a quench.

use std::fmt;

use crate::error::{Error, Result};
use crate::quadrature::{periodic_quadrature, QuadratureSpec};
use crate::roots::bisect;
use crate::spectrum::{cos_delta_raw, cos_delta_zeros, gapless_momenta, ModelParams, Momentum, QuenchSpec};

/// A temperature that may sit on either boundary of `[0, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Zero,
    Finite(f64),
    Infinite,
}

impl Temperature {
    /// Numeric value, with `Infinite` mapped to `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            Temperature::Zero => 0.0,
            Temperature::Finite(t) => t,
            Temperature::Infinite => f64::INFINITY,
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Temperature::Zero)
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Temperature::Zero => write!(f, "0"),
            Temperature::Finite(t) => write!(f, "{t}"),
            Temperature::Infinite => write!(f, "inf"),
        }
    }
}

/// Per-mode effective temperature of the GGE.
pub type EffectiveTemperature = Temperature;

/// Occupation weight `w(p)` replacing `tanh(eps(p) / 2T)` in all mode sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeWeight {
    GroundState,
    /// Gibbs state at `temperature > 0` (may be `+inf`).
    Thermal { temperature: f64 },
    /// Stationary GGE after `quench`; only valid together with the
    /// post-quench parameters.
    Gge(QuenchSpec),
}

impl ModeWeight {
    pub fn thermal(temperature: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature must be positive (got {temperature})"
            )));
        }
        Ok(ModeWeight::Thermal { temperature })
    }

    /// Gibbs weight at a possibly boundary-valued temperature.
    pub fn at_temperature(t: Temperature) -> Self {
        match t {
            Temperature::Zero => ModeWeight::GroundState,
            Temperature::Finite(temperature) => ModeWeight::Thermal { temperature },
            Temperature::Infinite => ModeWeight::Thermal {
                temperature: f64::INFINITY,
            },
        }
    }

    /// Checks that the weight can be used with the Hamiltonian `params`.
    pub fn check_params(&self, params: &ModelParams) -> Result<()> {
        if let ModeWeight::Gge(q) = self {
            if q.post != *params {
                return Err(Error::ParamsMismatch {
                    expected: (q.post.gamma, q.post.h),
                    actual: (params.gamma, params.h),
                });
            }
        }
        Ok(())
    }

    /// `w(p)` for modes of the Hamiltonian `params`.
    pub fn weight(&self, params: &ModelParams, p: Momentum) -> Result<f64> {
        self.check_params(params)?;
        self.weight_raw(params, p.value())
    }

    pub(crate) fn weight_raw(&self, params: &ModelParams, p: f64) -> Result<f64> {
        match *self {
            ModeWeight::GroundState => Ok(1.0),
            ModeWeight::Thermal { temperature } => {
                Ok((params.dispersion_raw(p) / (2.0 * temperature)).tanh())
            }
            ModeWeight::Gge(q) => cos_delta_raw(&q, p).map(f64::abs),
        }
    }

    /// Momenta where `w(p) / eps(p)`-type integrands of `params` have kinks
    /// or are undefined: gapless modes, and for the GGE also the pre-quench
    /// gapless modes and the zeros of `cos Delta_p`.
    pub fn breakpoints(&self, params: &ModelParams) -> Vec<Momentum> {
        let mut out = gapless_momenta(params);
        if let ModeWeight::Gge(q) = self {
            if !q.is_trivial() {
                out.extend(gapless_momenta(&q.pre));
                out.extend(cos_delta_zeros(q));
            }
        }
        out.sort_by(|a, b| a.value().total_cmp(&b.value()));
        out.dedup();
        out
    }
}

/// Effective temperature of mode `p`, defined by
/// `tanh(eps(p) / 2 T_eff) = |cos Delta_p|`.
pub fn effective_temperature(quench: &QuenchSpec, p: Momentum) -> Result<EffectiveTemperature> {
    let c = cos_delta_raw(quench, p.value())?.abs();
    let e = quench.post.gapped_dispersion(p.value())?;
    Ok(if c >= 1.0 {
        Temperature::Zero
    } else if c == 0.0 {
        Temperature::Infinite
    } else {
        Temperature::Finite(e / (2.0 * c.atanh()))
    })
}

/// Signed occupancy factor `s(p)` entering `e = -(1/4pi) int eps(p) s(p) dp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Occupancy {
    /// `s = w(p)` for one of the weights.
    Weight(ModeWeight),
    /// `s = cos Delta_p` with its sign: the energy actually injected by the
    /// quench, conserved under the post-quench dynamics.
    SignedQuench(QuenchSpec),
}

impl Occupancy {
    fn factor(&self, params: &ModelParams, p: f64) -> Result<f64> {
        match self {
            Occupancy::Weight(w) => w.weight_raw(params, p),
            Occupancy::SignedQuench(q) => cos_delta_raw(q, p),
        }
    }

    fn weight_view(&self) -> ModeWeight {
        match *self {
            Occupancy::Weight(w) => w,
            Occupancy::SignedQuench(q) => ModeWeight::Gge(q),
        }
    }
}

/// Integral `int eps(p) s(p) dp` over the Brillouin zone.
fn mode_energy_integral(params: &ModelParams, occ: &Occupancy, spec: &QuadratureSpec) -> Result<f64> {
    let w = occ.weight_view();
    w.check_params(params)?;
    let spec = spec.with_breakpoints(w.breakpoints(params));
    periodic_quadrature(
        |p| {
            let e = params.dispersion_raw(p);
            if e == 0.0 {
                return 0.0;
            }
            // isolated degenerate points only occur at breakpoints
            occ.factor(params, p).map_or(0.0, |s| e * s)
        },
        &spec,
    )
}

/// Energy per site, `-(1/4pi) int eps(p) s(p) dp`.
pub fn energy_density(params: &ModelParams, occupancy: &Occupancy, spec: &QuadratureSpec) -> Result<f64> {
    Ok(-mode_energy_integral(params, occupancy, spec)? / (4.0 * std::f64::consts::PI))
}

/// `R(T) = int eps tanh(eps / 2T) dp`; strictly decreasing in `T`.
pub fn thermal_mode_energy(params: &ModelParams, temperature: Temperature, spec: &QuadratureSpec) -> Result<f64> {
    mode_energy_integral(params, &Occupancy::Weight(ModeWeight::at_temperature(temperature)), spec)
}

/// Solution of the energy-matching condition for the thermalization
/// temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thermalization {
    pub temperature: Temperature,
    /// `int eps |cos Delta_p| dp`
    pub target: f64,
    /// `int eps dp`, i.e. `R(0)`
    pub ground: f64,
    /// `|R(T_th) - target| / ground`
    pub residual: f64,
}

/// Bracket in `T` searched by the solver.
pub const T_MIN: f64 = 1e-12;
pub const T_MAX: f64 = 1e12;
/// Relative residual at which the solver stops.
pub const T_TH_RESIDUAL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

/// Gibbs temperature `T_th` whose mode energy matches the GGE one:
/// `int eps |cos Delta_p| dp = int eps tanh(eps / 2 T_th) dp`.
///
/// Bisects on `ln T` over `[T_MIN, T_MAX]`.
pub fn thermalization_temperature(quench: &QuenchSpec, spec: &QuadratureSpec) -> Result<Thermalization> {
    let params = quench.post;
    let target = mode_energy_integral(&params, &Occupancy::Weight(ModeWeight::Gge(*quench)), spec)?;
    let ground = thermal_mode_energy(&params, Temperature::Zero, spec)?;
    let tol = T_TH_RESIDUAL * ground;

    let done = |temperature: Temperature, r: f64| Thermalization {
        temperature,
        target,
        ground,
        residual: (r - target).abs() / ground,
    };

    if target > ground + tol {
        return Err(Error::InconsistentEnergy { lhs: target, total: ground });
    }
    if target >= ground - tol {
        return Ok(done(Temperature::Zero, ground));
    }

    let r_lo = thermal_mode_energy(&params, Temperature::Finite(T_MIN), spec)?;
    if (r_lo - target).abs() <= tol {
        return Ok(done(Temperature::Finite(T_MIN), r_lo));
    }
    let r_hi = thermal_mode_energy(&params, Temperature::Finite(T_MAX), spec)?;
    if target <= r_hi {
        return Ok(if r_hi - target <= tol {
            done(Temperature::Finite(T_MAX), r_hi)
        } else {
            done(Temperature::Infinite, 0.0)
        });
    }

    let root = bisect(
        |log_t| Ok(thermal_mode_energy(&params, Temperature::Finite(log_t.exp()), spec)? - target),
        T_MIN.ln(),
        T_MAX.ln(),
        tol,
        MAX_BISECTIONS,
    )?;
    Ok(Thermalization {
        temperature: Temperature::Finite(root.x.exp()),
        target,
        ground,
        residual: root.fx.abs() / ground,
    })
}
