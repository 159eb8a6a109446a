//! Independent reference computations used to validate the production path:
//! finite-chain momentum sums, a cyclic Jacobi eigensolver, and brute-force
//! midpoint versions of the energy integrals and the thermalization
//! solver. Nothing in the production path calls into this module.

use std::f64::consts::PI;

use crate::correlators::{g_from_integrals, g_integrands, CorrelatorSet};
use crate::ensemble::ModeWeight;
use crate::error::{Error, Result};
use crate::spectrum::{cos_delta_raw, ModelParams, QuenchSpec};

/// Chain of `sites` spins with antiperiodic fermion momenta
/// `p_k = pi (2k + 1 - L) / L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteChainSpec {
    sites: usize,
}

impl FiniteChainSpec {
    pub fn new(sites: usize) -> Result<Self> {
        if sites < 8 || sites % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "chain length must be even and >= 8 (got {sites})"
            )));
        }
        Ok(Self { sites })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn momenta(&self) -> impl Iterator<Item = f64> + '_ {
        let l = self.sites as f64;
        (0..self.sites).map(move |k| PI * (2 * k + 1) as f64 / l - PI)
    }
}

/// Mode energies below this are treated as zero modes of the finite chain.
const DEGENERATE_ENERGY: f64 = 1e-12;

/// Correlators from discrete mode sums: `(1/L) sum_k` in place of
/// `(1/2pi) int dp`.
pub fn finite_chain_correlators(params: &ModelParams, w: &ModeWeight, spec: FiniteChainSpec) -> Result<CorrelatorSet> {
    w.check_params(params)?;
    let mut acc = [0.0; 3];
    for p in spec.momenta() {
        if params.dispersion_raw(p) < DEGENERATE_ENERGY {
            return Err(Error::DegenerateMode { p });
        }
        if let ModeWeight::Gge(q) = w {
            cos_delta_raw(q, p)?;
        }
        let v = g_integrands(params, w, p);
        for k in 0..3 {
            acc[k] += v[k];
        }
    }
    // (1/pi) int = 2 (1/2pi) int -> 2/L sum
    let g = g_from_integrals(acc, 2.0 / spec.sites as f64);
    Ok(CorrelatorSet::from_g_functions(g))
}

/// Midpoint rule with `n` points on `[-pi, pi]`.
pub fn midpoint_integral<F: FnMut(f64) -> f64>(mut f: F, n: usize) -> f64 {
    let dp = 2.0 * PI / n as f64;
    (0..n).map(|k| f(-PI + (k as f64 + 0.5) * dp)).sum::<f64>() * dp
}

/// `int eps |cos Delta_p| dp` by the midpoint rule.
pub fn midpoint_gge_mode_energy(quench: &QuenchSpec, n: usize) -> f64 {
    midpoint_integral(
        |p| {
            let e = quench.post.dispersion_raw(p);
            cos_delta_raw(quench, p).map_or(0.0, |c| e * c.abs())
        },
        n,
    )
}

/// `int eps tanh(eps / 2T) dp` by the midpoint rule.
pub fn midpoint_thermal_mode_energy(params: &ModelParams, temperature: f64, n: usize) -> f64 {
    midpoint_integral(
        |p| {
            let e = params.dispersion_raw(p);
            if temperature == 0.0 {
                e
            } else {
                e * (e / (2.0 * temperature)).tanh()
            }
        },
        n,
    )
}

/// Thermalization temperature from midpoint sums and plain bisection on `T`
/// (not `ln T`) after bracketing by doubling. Returns `0` for trivial
/// targets.
pub fn midpoint_thermalization_temperature(quench: &QuenchSpec, n: usize) -> f64 {
    let target = midpoint_gge_mode_energy(quench, n);
    let ground = midpoint_thermal_mode_energy(&quench.post, 0.0, n);
    if target >= ground * (1.0 - 1e-13) {
        return 0.0;
    }
    let r = |t: f64| midpoint_thermal_mode_energy(&quench.post, t, n) - target;
    let mut hi = 1.0;
    while r(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = hi;
    while r(lo) < 0.0 {
        lo *= 0.5;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if r(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending.
pub fn symmetric_eigenvalues<const N: usize>(m: &[[f64; N]; N]) -> Result<[f64; N]> {
    for i in 0..N {
        for j in (i + 1)..N {
            let diff = (m[i][j] - m[j][i]).abs();
            if diff > 1e-12 {
                return Err(Error::NotSymmetric { i, j, diff });
            }
        }
    }
    let mut a = *m;
    for _sweep in 0..100 {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off < 1e-14 {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev = [0.0; N];
    for i in 0..N {
        ev[i] = a[i][i];
    }
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}
