//! Two-site reduced density matrix, its partial transpose and the
//! negativity-based witnesses.
//!
//! Basis order is `|00>, |01>, |10>, |11>` with `sz|0> = |0>`. The state is
//! an X-state: only the diagonal and the anti-diagonal are populated, and it
//! splits into the blocks `{0, 3}` and `{1, 2}`. The partial transpose swaps
//! the two off-diagonal elements between the blocks, so both minimal
//! eigenvalues have closed forms:
//!
//! ```text
//! mu1 = (1 + <zz>)/4 - 1/4 sqrt((2 <z>)^2 + (<xx> + <yy>)^2)
//! mu2 = -1/4 (<xx> - <yy> + <zz> - 1)
//! ```
//!
//! `mu2` is the lower eigenvalue of its block whenever `<xx> >= <yy>`, which
//! holds for every XY state with `gamma >= 0`.

use serde::Serialize;

use crate::correlators::CorrelatorSet;
use crate::error::{Error, Result};

/// Entries below this threshold count as entanglement; quadrature noise
/// around zero does not.
pub const DEFAULT_DETECTION_THRESHOLD: f64 = -1e-12;

pub type Matrix4 = [[f64; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    rho: Matrix4,
}

impl TwoQubitState {
    pub fn matrix(&self) -> &Matrix4 {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.rho[i][i]).sum()
    }

    /// Eigenvalues of the two 2x2 blocks, unsorted.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let r = &self.rho;
        let [a, b] = block_eigenvalues(r[0][0], r[3][3], r[0][3]);
        let [c, d] = block_eigenvalues(r[1][1], r[2][2], r[1][2]);
        [a, b, c, d]
    }

    /// Positive semidefinite up to `floor` (e.g. `-1e-10`).
    pub fn is_physical(&self, floor: f64) -> bool {
        self.eigenvalues().iter().all(|&l| l >= floor)
    }

    /// Single-site state after tracing out the second site.
    pub fn reduce_to_first(&self) -> [[f64; 2]; 2] {
        let r = &self.rho;
        [
            [r[0][0] + r[1][1], r[0][2] + r[1][3]],
            [r[2][0] + r[3][1], r[2][2] + r[3][3]],
        ]
    }

    /// Single-site state after tracing out the first site.
    pub fn reduce_to_second(&self) -> [[f64; 2]; 2] {
        let r = &self.rho;
        [
            [r[0][0] + r[2][2], r[0][1] + r[2][3]],
            [r[1][0] + r[3][2], r[1][1] + r[3][3]],
        ]
    }
}

fn block_eigenvalues(a: f64, d: f64, off: f64) -> [f64; 2] {
    let m = 0.5 * (a + d);
    let r = (0.5 * (a - d)).hypot(off);
    [m - r, m + r]
}

/// `rho = 1/4 [ 1 + <z>(z1 + z2) + <xx> x x + <yy> y y + <zz> z z ]`.
pub fn reduced_density_matrix(c: &CorrelatorSet) -> TwoQubitState {
    let mut rho = [[0.0; 4]; 4];
    rho[0][0] = 0.25 * (1.0 + 2.0 * c.sz + c.szsz);
    rho[3][3] = 0.25 * (1.0 - 2.0 * c.sz + c.szsz);
    rho[1][1] = 0.25 * (1.0 - c.szsz);
    rho[2][2] = rho[1][1];
    rho[0][3] = 0.25 * (c.sxsx - c.sysy);
    rho[3][0] = rho[0][3];
    rho[1][2] = 0.25 * (c.sxsx + c.sysy);
    rho[2][1] = rho[1][2];
    TwoQubitState { rho }
}

/// Partial transpose on the first site: `(k m, l n) -> (l m, k n)`.
pub fn partial_transpose(s: &TwoQubitState) -> Matrix4 {
    partial_transpose_matrix(&s.rho)
}

pub fn partial_transpose_matrix(m: &Matrix4) -> Matrix4 {
    let mut out = [[0.0; 4]; 4];
    for k in 0..2 {
        for l in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    out[2 * k + i][2 * l + j] = m[2 * l + i][2 * k + j];
                }
            }
        }
    }
    out
}

pub fn mu_min_1(c: &CorrelatorSet) -> f64 {
    0.25 * (c.szsz + 1.0) - 0.25 * (2.0 * c.sz).hypot(c.sxsx + c.sysy)
}

pub fn mu_min_2(c: &CorrelatorSet) -> f64 {
    -0.25 * (c.sxsx - c.sysy + c.szsz - 1.0)
}

/// Expectation of `W = -1/4 (xx - yy + zz - 1)`; identical to [`mu_min_2`].
pub fn witness_expectation(c: &CorrelatorSet) -> f64 {
    mu_min_2(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Detector {
    Mu1,
    Mu2,
}

impl Detector {
    pub const ALL: [Detector; 2] = [Detector::Mu1, Detector::Mu2];

    pub fn name(self) -> &'static str {
        match self {
            Detector::Mu1 => "mu1",
            Detector::Mu2 => "mu2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Detection {
    ByMu1,
    ByMu2,
    Undetected,
}

impl Detection {
    pub fn name(self) -> &'static str {
        match self {
            Detection::ByMu1 => "ByMu1",
            Detection::ByMu2 => "ByMu2",
            Detection::Undetected => "Undetected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessReport {
    pub mu1: f64,
    pub mu2: f64,
    pub negativity: f64,
    pub detection: Detection,
}

impl WitnessReport {
    pub fn mu(&self, d: Detector) -> f64 {
        match d {
            Detector::Mu1 => self.mu1,
            Detector::Mu2 => self.mu2,
        }
    }

    pub fn detects(&self, d: Detector) -> bool {
        matches!(
            (d, self.detection),
            (Detector::Mu1, Detection::ByMu1) | (Detector::Mu2, Detection::ByMu2)
        )
    }
}

pub fn analyze(c: &CorrelatorSet) -> Result<WitnessReport> {
    analyze_with_threshold(c, DEFAULT_DETECTION_THRESHOLD)
}

pub fn analyze_with_threshold(c: &CorrelatorSet, threshold: f64) -> Result<WitnessReport> {
    let mu1 = mu_min_1(c);
    let mu2 = mu_min_2(c);
    let detection = match (mu1 < threshold, mu2 < threshold) {
        (true, true) => return Err(Error::Unphysical { mu1, mu2 }),
        (true, false) => Detection::ByMu1,
        (false, true) => Detection::ByMu2,
        (false, false) => Detection::Undetected,
    };
    Ok(WitnessReport {
        mu1,
        mu2,
        negativity: 2.0 * (-mu1.min(mu2)).max(0.0),
        detection,
    })
}
