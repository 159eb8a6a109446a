//! Sweeps of the `(h0, h)` plane at fixed anisotropy.
//!
//! Every grid cell is a quench `(gamma0, h0) -> (gamma, h)`. Its GGE state and
//! the Gibbs state at `T_th` are both checked with the two witnesses, and
//! each detector gets its own region map.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlators::nn_correlators;
use crate::ensemble::{thermalization_temperature, ModeWeight};
use crate::entanglement::{analyze_with_threshold, mu_min_1, mu_min_2, Detector, WitnessReport, DEFAULT_DETECTION_THRESHOLD};
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::roots::bisect;
use crate::spectrum::{ModelParams, QuenchSpec};

/// `n` equally spaced points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        let r = Self { lo, hi, n };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || !(self.lo < self.hi) {
            return Err(Error::InvalidParameter(format!(
                "axis range needs finite lo < hi (got {}..{})",
                self.lo, self.hi
            )));
        }
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "axis needs at least 2 points (got {})",
                self.n
            )));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.value(i)).collect()
    }
}

impl Default for AxisRange {
    fn default() -> Self {
        Self { lo: 0.0, hi: 2.0, n: 101 }
    }
}

fn default_threshold() -> f64 {
    DEFAULT_DETECTION_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub gamma: f64,
    /// Pre-quench anisotropy; `gamma` when absent.
    #[serde(default)]
    pub gamma0: Option<f64>,
    #[serde(default)]
    pub h0_range: AxisRange,
    #[serde(default)]
    pub h_range: AxisRange,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default = "default_threshold")]
    pub detection_threshold: f64,
}

impl ScanConfig {
    /// Default window and tolerances at the given anisotropy.
    pub fn new(gamma: f64) -> Self {
        Self {
            gamma,
            gamma0: None,
            h0_range: AxisRange::default(),
            h_range: AxisRange::default(),
            quadrature: QuadratureSpec::default(),
            detection_threshold: DEFAULT_DETECTION_THRESHOLD,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0.unwrap_or(self.gamma)
    }

    pub fn validate(&self) -> Result<()> {
        ModelParams::new(self.gamma, 0.0)?;
        ModelParams::new(self.gamma0(), 0.0)?;
        self.h0_range.validate()?;
        self.h_range.validate()?;
        self.quadrature.validate()?;
        if !self.detection_threshold.is_finite() || self.detection_threshold > 0.0 {
            return Err(Error::InvalidParameter(format!(
                "detection threshold must be finite and <= 0 (got {})",
                self.detection_threshold
            )));
        }
        Ok(())
    }

    pub fn quench(&self, h0: f64, h: f64) -> Result<QuenchSpec> {
        Ok(QuenchSpec::new(ModelParams::new(self.gamma0(), h0)?, ModelParams::new(self.gamma, h)?))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.h0_range.n, self.h_range.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellResult {
    pub h0: f64,
    pub h: f64,
    pub prethermal: WitnessReport,
    pub thermal: WitnessReport,
    /// `0` for a trivial quench, `inf` if the GGE carries no mode energy.
    pub t_th: f64,
}

/// GGE and thermal witness reports for one quench.
pub fn evaluate_cell(quench: &QuenchSpec, spec: &QuadratureSpec, threshold: f64) -> Result<CellResult> {
    let post = quench.post;
    let pre_c = nn_correlators(&post, &ModeWeight::Gge(*quench), spec)?;
    let prethermal = analyze_with_threshold(&pre_c, threshold)?;
    let th = thermalization_temperature(quench, spec)?;
    let th_c = nn_correlators(&post, &ModeWeight::at_temperature(th.temperature), spec)?;
    let thermal = analyze_with_threshold(&th_c, threshold)?;
    Ok(CellResult {
        h0: quench.pre.h,
        h: post.h,
        prethermal,
        thermal,
        t_th: th.temperature.value(),
    })
}

/// Classification of a cell for one detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    Neither,
    PrethermalOnly,
    ThermalOnly,
    Both,
}

impl Region {
    pub fn classify(prethermal: &WitnessReport, thermal: &WitnessReport, d: Detector) -> Self {
        match (prethermal.detects(d), thermal.detects(d)) {
            (false, false) => Region::Neither,
            (true, false) => Region::PrethermalOnly,
            (false, true) => Region::ThermalOnly,
            (true, true) => Region::Both,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::Neither => "Neither",
            Region::PrethermalOnly => "PrethermalOnly",
            Region::ThermalOnly => "ThermalOnly",
            Region::Both => "Both",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Region::Neither, Region::PrethermalOnly, Region::ThermalOnly, Region::Both]
            .into_iter()
            .find(|r| r.name() == s)
    }

    pub fn prethermal(self) -> bool {
        matches!(self, Region::PrethermalOnly | Region::Both)
    }

    pub fn thermal(self) -> bool {
        matches!(self, Region::ThermalOnly | Region::Both)
    }
}

/// One grid point; failures are kept as data.
#[derive(Debug, Clone, PartialEq)]
pub struct CellEntry {
    pub h0: f64,
    pub h: f64,
    pub result: std::result::Result<CellResult, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    pub detector: Detector,
    pub rows: usize,
    pub cols: usize,
    /// Row-major, `None` for failed cells.
    pub cells: Vec<Option<Region>>,
}

impl RegionMap {
    pub fn get(&self, i: usize, j: usize) -> Option<Region> {
        self.cells[i * self.cols + j]
    }

    pub fn count(&self, pred: impl Fn(Region) -> bool) -> usize {
        self.cells.iter().flatten().filter(|&&r| pred(r)).count()
    }

    /// Cells detected in either ensemble.
    pub fn detections(&self) -> usize {
        self.count(|r| r != Region::Neither)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutput {
    pub config: ScanConfig,
    pub h0_values: Vec<f64>,
    pub h_values: Vec<f64>,
    /// Row-major: `h0` selects the row, `h` the column.
    pub cells: Vec<CellEntry>,
}

impl ScanOutput {
    /// Assembles results evaluated in any order; `index` is the row-major
    /// position of each entry.
    pub fn from_indexed(config: ScanConfig, entries: impl IntoIterator<Item = (usize, CellEntry)>) -> Self {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_by_key(|(k, _)| *k);
        Self {
            h0_values: config.h0_range.values(),
            h_values: config.h_range.values(),
            config,
            cells: entries.into_iter().map(|(_, e)| e).collect(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.h0_values.len(), self.h_values.len())
    }

    pub fn cell(&self, i: usize, j: usize) -> &CellEntry {
        &self.cells[i * self.h_values.len() + j]
    }

    pub fn region_map(&self, detector: Detector) -> RegionMap {
        let (rows, cols) = self.dims();
        RegionMap {
            detector,
            rows,
            cols,
            cells: self
                .cells
                .iter()
                .map(|e| e.result.as_ref().ok().map(|c| Region::classify(&c.prethermal, &c.thermal, detector)))
                .collect(),
        }
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|e| e.result.is_err()).count()
    }
}

/// Evaluates the cell at row-major index `k`.
pub fn evaluate_index(config: &ScanConfig, k: usize) -> CellEntry {
    let cols = config.h_range.n;
    let h0 = config.h0_range.value(k / cols);
    let h = config.h_range.value(k % cols);
    let result = config
        .quench(h0, h)
        .and_then(|q| evaluate_cell(&q, &config.quadrature, config.detection_threshold));
    CellEntry { h0, h, result }
}

/// Runs the full grid on the current rayon pool. `progress(done, total)` is
/// called after every cell.
pub fn run_scan<P>(config: &ScanConfig, progress: P) -> Result<ScanOutput>
where
    P: Fn(usize, usize) + Sync,
{
    config.validate()?;
    let (rows, cols) = config.dims();
    let total = rows * cols;
    let done = AtomicUsize::new(0);
    let entries: Vec<(usize, CellEntry)> = (0..total)
        .into_par_iter()
        .map(|k| {
            let e = evaluate_index(config, k);
            progress(done.fetch_add(1, Ordering::Relaxed) + 1, total);
            (k, e)
        })
        .collect();
    Ok(ScanOutput::from_indexed(config.clone(), entries))
}

/// Which of the two states a boundary refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Prethermal,
    Thermal,
}

/// Stopping tolerance on `|mu|` at a refined boundary point.
pub const BOUNDARY_MU_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub h0: f64,
    pub h: f64,
    pub mu: f64,
    /// Grid indices of the two edge endpoints.
    pub from: (usize, usize),
    pub to: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedEdge {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Boundary {
    pub points: Vec<BoundaryPoint>,
    pub skipped: Vec<SkippedEdge>,
}

/// Zero crossings of `mu` on every grid edge whose endpoints are classified
/// differently (`mu < threshold` on one side only). `grid` holds the
/// row-major `mu` values at the nodes, `None` for failed nodes.
pub fn refine_boundary_with<F>(
    h0_values: &[f64],
    h_values: &[f64],
    grid: &[Option<f64>],
    threshold: f64,
    mu: F,
) -> Boundary
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let (rows, cols) = (h0_values.len(), h_values.len());
    assert_eq!(grid.len(), rows * cols, "grid size does not match the axes");
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if j + 1 < cols {
                edges.push(((i, j), (i, j + 1)));
            }
            if i + 1 < rows {
                edges.push(((i, j), (i + 1, j)));
            }
        }
    }
    let at = |(i, j): (usize, usize)| grid[i * cols + j];
    let results: Vec<Option<std::result::Result<BoundaryPoint, SkippedEdge>>> = edges
        .par_iter()
        .map(|&(a, b)| {
            let skip = |reason: String| Some(Err(SkippedEdge { from: a, to: b, reason }));
            let (Some(ma), Some(mb)) = (at(a), at(b)) else {
                return skip("endpoint failed".into());
            };
            if (ma < threshold) == (mb < threshold) {
                return None;
            }
            let (x0, y0) = (h0_values[a.0], h_values[a.1]);
            let (x1, y1) = (h0_values[b.0], h_values[b.1]);
            let point = |s: f64| (x0 + s * (x1 - x0), y0 + s * (y1 - y0));
            match bisect(
                |s| {
                    let (x, y) = point(s);
                    mu(x, y)
                },
                0.0,
                1.0,
                BOUNDARY_MU_TOL,
                200,
            ) {
                Ok(root) => {
                    let (h0, h) = point(root.x);
                    Some(Ok(BoundaryPoint { h0, h, mu: root.fx, from: a, to: b }))
                }
                Err(e) => skip(e.to_string()),
            }
        })
        .collect();
    let mut out = Boundary::default();
    for r in results.into_iter().flatten() {
        match r {
            Ok(p) => out.points.push(p),
            Err(s) => out.skipped.push(s),
        }
    }
    out
}

/// `mu` of `detector` in the given state at an arbitrary `(h0, h)`.
pub fn cell_mu(config: &ScanConfig, h0: f64, h: f64, detector: Detector, phase: Phase) -> Result<f64> {
    let q = config.quench(h0, h)?;
    let spec = &config.quadrature;
    let weight = match phase {
        Phase::Prethermal => ModeWeight::Gge(q),
        Phase::Thermal => ModeWeight::at_temperature(thermalization_temperature(&q, spec)?.temperature),
    };
    let c = nn_correlators(&q.post, &weight, spec)?;
    Ok(match detector {
        Detector::Mu1 => mu_min_1(&c),
        Detector::Mu2 => mu_min_2(&c),
    })
}

/// Boundary of the `detector` region in the given state of a finished scan.
pub fn refine_boundary(scan: &ScanOutput, detector: Detector, phase: Phase) -> Boundary {
    let grid: Vec<Option<f64>> = scan
        .cells
        .iter()
        .map(|e| {
            e.result.as_ref().ok().map(|c| match phase {
                Phase::Prethermal => c.prethermal.mu(detector),
                Phase::Thermal => c.thermal.mu(detector),
            })
        })
        .collect();
    refine_boundary_with(
        &scan.h0_values,
        &scan.h_values,
        &grid,
        scan.config.detection_threshold,
        |h0, h| cell_mu(&scan.config, h0, h, detector, phase),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::Detection;

    fn small(gamma: f64, lo: f64, hi: f64, n: usize) -> ScanConfig {
        let mut c = ScanConfig::new(gamma);
        c.h0_range = AxisRange::new(lo, hi, n).unwrap();
        c.h_range = AxisRange::new(lo, hi, n).unwrap();
        c
    }

    #[test]
    fn axis_values() {
        let a = AxisRange::new(0.0, 2.0, 21).unwrap();
        let v = a.values();
        assert_eq!(v.len(), 21);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[20], 2.0);
        assert!((v[10] - 1.0).abs() < 1e-15);
        assert!(AxisRange::new(1.0, 1.0, 3).is_err());
        assert!(AxisRange::new(0.0, 1.0, 1).is_err());
        assert!(AxisRange::new(0.0, f64::NAN, 3).is_err());
    }

    #[test]
    fn config_from_toml() {
        let c = ScanConfig::from_toml(
            "gamma = 0.5\nh0_range = { lo = 0.1, hi = 1.9, n = 5 }\n[quadrature]\nrel_tol = 1e-9\n",
        )
        .unwrap();
        assert_eq!(c.gamma0(), 0.5);
        assert_eq!(c.h0_range, AxisRange { lo: 0.1, hi: 1.9, n: 5 });
        assert_eq!(c.h_range, AxisRange::default());
        assert_eq!(c.quadrature.rel_tol, 1e-9);
        assert_eq!(c.quadrature.abs_tol, 1e-12);
        assert_eq!(c.detection_threshold, DEFAULT_DETECTION_THRESHOLD);
        assert!(ScanConfig::from_toml("gamma = 0.5\nbogus = 1\n").is_err());
        assert!(ScanConfig::from_toml("h_range = { lo = 0.0, hi = 1.0, n = 3 }\n").is_err());
        assert!(ScanConfig::from_toml("gamma = 0.5\nh_range = { lo = 0.0, hi = 1.0, n = 1 }\n").is_err());
    }

    #[test]
    fn trivial_cell_is_ground_state() {
        let params = ModelParams::new(0.8, 0.4).unwrap();
        let spec = QuadratureSpec::default();
        let cell = evaluate_cell(&QuenchSpec::new(params, params), &spec, DEFAULT_DETECTION_THRESHOLD).unwrap();
        assert_eq!(cell.t_th, 0.0);
        let gs = analyze_with_threshold(
            &nn_correlators(&params, &ModeWeight::GroundState, &spec).unwrap(),
            DEFAULT_DETECTION_THRESHOLD,
        )
        .unwrap();
        assert!((cell.prethermal.mu1 - gs.mu1).abs() < 1e-10);
        assert!((cell.prethermal.mu2 - gs.mu2).abs() < 1e-10);
        assert_eq!(cell.thermal, gs);
    }

    #[test]
    fn disorder_line_cell_is_undetected() {
        let params = ModelParams::disorder_line(0.6).unwrap();
        let cell = evaluate_cell(&QuenchSpec::new(params, params), &QuadratureSpec::default(), DEFAULT_DETECTION_THRESHOLD)
            .unwrap();
        assert_eq!(cell.prethermal.detection, Detection::Undetected);
        assert_eq!(cell.thermal.detection, Detection::Undetected);
    }

    #[test]
    fn two_by_two_grid() {
        let c = small(1.0, 0.3, 1.6, 2);
        let out = run_scan(&c, |_, _| {}).unwrap();
        assert_eq!(out.cells.len(), 4);
        assert_eq!(out.failures(), 0);
        for d in Detector::ALL {
            let map = out.region_map(d);
            for i in 0..2 {
                // diagonal cells are trivial quenches: both states coincide
                let r = map.get(i, i).unwrap();
                assert!(matches!(r, Region::Neither | Region::Both), "{r:?}");
                let cell = out.cell(i, i).result.as_ref().unwrap();
                assert_eq!(cell.t_th, 0.0);
            }
        }
    }

    #[test]
    fn classification_is_consistent() {
        let out = run_scan(&small(0.5, 0.2, 1.8, 4), |_, _| {}).unwrap();
        for d in Detector::ALL {
            let map = out.region_map(d);
            for (e, r) in out.cells.iter().zip(&map.cells) {
                let c = e.result.as_ref().unwrap();
                let r = r.unwrap();
                assert_eq!(r.prethermal(), c.prethermal.mu(d) < DEFAULT_DETECTION_THRESHOLD);
                assert_eq!(r.thermal(), c.thermal.mu(d) < DEFAULT_DETECTION_THRESHOLD);
            }
        }
    }

    #[test]
    fn invalid_cells_are_isolated() {
        // gamma0 = 0 and h0 = 0: the pre-quench XX chain is gapless at +-pi/2
        // and the quench stays well defined; a critical post-quench line too
        let mut c = small(1.0, 0.0, 1.0, 3);
        c.gamma0 = Some(0.0);
        let out = run_scan(&c, |_, _| {}).unwrap();
        assert_eq!(out.cells.len(), 9);
        for e in &out.cells {
            if let Err(err) = &e.result {
                assert!(!err.to_string().is_empty());
            }
        }
    }

    #[test]
    fn progress_reaches_total() {
        let seen = AtomicUsize::new(0);
        run_scan(&small(1.0, 0.2, 0.6, 2), |done, total| {
            assert_eq!(total, 4);
            seen.fetch_max(done, Ordering::Relaxed);
        })
        .unwrap();
        assert_eq!(seen.into_inner(), 4);
    }

    #[test]
    fn constant_sign_has_no_boundary() {
        let axes = [0.0, 0.5, 1.0];
        let grid = vec![Some(0.1); 9];
        let b = refine_boundary_with(&axes, &axes, &grid, -1e-12, |_, _| Ok(0.1));
        assert!(b.points.is_empty() && b.skipped.is_empty());
    }

    #[test]
    fn synthetic_linear_crossing() {
        // mu = h - 0.37 along a 1 x 5 slice
        let h0 = [0.0];
        let h = [0.0, 0.25, 0.5, 0.75, 1.0];
        let f = |_: f64, y: f64| Ok(y - 0.37);
        let grid: Vec<_> = h.iter().map(|&y| Some(y - 0.37)).collect();
        let b = refine_boundary_with(&h0, &h, &grid, -1e-12, f);
        assert_eq!(b.points.len(), 1);
        assert!((b.points[0].h - 0.37).abs() < 1e-6);
        assert!(b.points[0].mu.abs() <= BOUNDARY_MU_TOL);
        assert_eq!((b.points[0].from, b.points[0].to), ((0, 1), (0, 2)));
    }

    #[test]
    fn failed_or_unbracketed_edges_are_skipped() {
        let h0 = [0.0];
        let h = [0.0, 1.0, 2.0];
        // classification flips between nodes 0 and 1, but the injected mu
        // has a jump instead of a root
        let grid = vec![Some(-1.0), Some(1.0), None];
        let b = refine_boundary_with(&h0, &h, &grid, -1e-12, |_, y| Ok(if y < 0.5 { -1.0 } else { 1.0 }));
        assert!(b.points.is_empty());
        assert_eq!(b.skipped.len(), 2);
    }
}
