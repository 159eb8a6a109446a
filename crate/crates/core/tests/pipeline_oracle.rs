//! End-to-end comparison with an independent route: Bogoliubov angles from
//! `atan2`, midpoint sums on a fine grid, the explicit 4x4 density matrix
//! and a Jacobi eigensolve of its partial transpose.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use xyquench::entanglement::Detector;
use xyquench::oracle::{midpoint_thermalization_temperature, symmetric_eigenvalues};
use xyquench::scan::{evaluate_index, refine_boundary, Phase};
use xyquench::{
    evaluate_cell, nn_correlators, AxisRange, ModeWeight, ModelParams, QuadratureSpec, QuenchSpec, ScanConfig,
    ScanOutput, DEFAULT_DETECTION_THRESHOLD,
};

const NODES: usize = 400_000;

mod reference {
    use super::*;

    pub fn eps(g: f64, h: f64, p: f64) -> f64 {
        2.0 * ((g * p.sin()).powi(2) + (h - p.cos()).powi(2)).sqrt()
    }

    fn angle(g: f64, h: f64, p: f64) -> f64 {
        (-g * p.sin()).atan2(h - p.cos())
    }

    /// `(g_c, g_s, g_0)` with weight `w(p)`.
    pub fn g_functions(g: f64, h: f64, w: impl Fn(f64) -> f64) -> [f64; 3] {
        let dp = 2.0 * PI / NODES as f64;
        let mut acc = [0.0; 3];
        for k in 0..NODES {
            let p = -PI + (k as f64 + 0.5) * dp;
            let r = w(p) / eps(g, h, p);
            acc[0] += p.cos() * (p.cos() - h) * r;
            acc[1] += -g * p.sin().powi(2) * r;
            acc[2] += (h - p.cos()) * r;
        }
        acc.map(|x| x * dp / PI)
    }

    pub fn gge_weight(g0: f64, h0: f64, g: f64, h: f64) -> impl Fn(f64) -> f64 {
        move |p| (angle(g0, h0, p) - angle(g, h, p)).cos().abs()
    }

    /// Minimum eigenvalue of the partial transpose, by Jacobi.
    pub fn min_pt_eigenvalue(gf: [f64; 3]) -> [f64; 4] {
        let [gc, gs, g0] = gf;
        let (xx, yy, zz, z) = (gc - gs, gc + gs, g0 * g0 - gc * gc + gs * gs, g0);
        let mut rho = [[0.0; 4]; 4];
        rho[0][0] = 0.25 * (1.0 + 2.0 * z + zz);
        rho[3][3] = 0.25 * (1.0 - 2.0 * z + zz);
        rho[1][1] = 0.25 * (1.0 - zz);
        rho[2][2] = 0.25 * (1.0 - zz);
        rho[0][3] = 0.25 * (xx - yy);
        rho[3][0] = rho[0][3];
        rho[1][2] = 0.25 * (xx + yy);
        rho[2][1] = rho[1][2];
        // transpose the first qubit: swap |0a><1b| with |1a><0b|
        let mut pt = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let (a, b) = (i >> 1, j >> 1);
                pt[(b << 1) | (i & 1)][(a << 1) | (j & 1)] = rho[i][j];
            }
        }
        symmetric_eigenvalues(&pt).unwrap()
    }
}

// Frozen from the midpoint/Jacobi route above (4e5 nodes).
const GS_HALF_HALF: [f64; 3] = [0.504_786_928_950_285_1, -0.381_082_655_285_578_4, 0.296_656_917_093_895_2];
const QUENCH_TTH: f64 = 2.750_076_592_757_607_4;
const QUENCH_PRE_MU: [f64; 2] = [0.033_382_050_906_585_14, 0.102_781_535_149_837_18];
const QUENCH_TH_MU: [f64; 2] = [0.040_022_060_389_198_144, 0.085_886_246_462_271_89];

#[test]
fn ground_state_matches_midpoint_sums() {
    let r = reference::g_functions(0.5, 0.5, |_| 1.0);
    for k in 0..3 {
        assert!((r[k] - GS_HALF_HALF[k]).abs() < 1e-12);
    }
    let c = nn_correlators(&ModelParams::new(0.5, 0.5).unwrap(), &ModeWeight::GroundState, &QuadratureSpec::default())
        .unwrap();
    let lib = [c.g_c, c.g_s, c.g_0];
    for k in 0..3 {
        assert!((lib[k] - GS_HALF_HALF[k]).abs() < 1e-10, "{k}: {} vs {}", lib[k], GS_HALF_HALF[k]);
    }
}

#[test]
fn full_cell_matches_independent_pipeline() {
    let pre = reference::min_pt_eigenvalue(reference::g_functions(1.0, 2.0, reference::gge_weight(1.0, 0.0, 1.0, 2.0)));
    // the two block minima are the two smallest eigenvalues here
    assert!((pre[0] - QUENCH_PRE_MU[0]).abs() < 1e-9);
    assert!((pre[1] - QUENCH_PRE_MU[1]).abs() < 1e-9);
    let t = midpoint_thermalization_temperature(
        &QuenchSpec::new(ModelParams::new(1.0, 0.0).unwrap(), ModelParams::new(1.0, 2.0).unwrap()),
        NODES,
    );
    assert!((t - QUENCH_TTH).abs() < 1e-8, "{t}");
    let th = reference::min_pt_eigenvalue(reference::g_functions(1.0, 2.0, |p| {
        (reference::eps(1.0, 2.0, p) / (2.0 * QUENCH_TTH)).tanh()
    }));
    assert!((th[0] - QUENCH_TH_MU[0]).abs() < 1e-9);

    let q = QuenchSpec::new(ModelParams::new(1.0, 0.0).unwrap(), ModelParams::new(1.0, 2.0).unwrap());
    let cell = evaluate_cell(&q, &QuadratureSpec::default(), DEFAULT_DETECTION_THRESHOLD).unwrap();
    assert!((cell.t_th - QUENCH_TTH).abs() < 1e-8, "{}", cell.t_th);
    assert!((cell.prethermal.mu1 - QUENCH_PRE_MU[0]).abs() < 1e-9);
    assert!((cell.prethermal.mu2 - QUENCH_PRE_MU[1]).abs() < 1e-9);
    assert!((cell.thermal.mu1 - QUENCH_TH_MU[0]).abs() < 1e-9);
    assert!((cell.thermal.mu2 - QUENCH_TH_MU[1]).abs() < 1e-9);
}

#[test]
fn gge_correlators_agree_on_assorted_quenches() {
    let spec = QuadratureSpec::default();
    for (g0, h0, g, h) in [(0.5, 0.3, 0.5, 1.6), (0.9, 1.5, 0.4, 0.6), (0.2, 0.1, 0.7, 0.9)] {
        let q = QuenchSpec::new(ModelParams::new(g0, h0).unwrap(), ModelParams::new(g, h).unwrap());
        let c = nn_correlators(&q.post, &ModeWeight::Gge(q), &spec).unwrap();
        let r = reference::g_functions(g, h, reference::gge_weight(g0, h0, g, h));
        for (a, b) in [c.g_c, c.g_s, c.g_0].into_iter().zip(r) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b} for {:?}", (g0, h0, g, h));
        }
    }
}

#[test]
fn boundary_points_do_not_depend_on_cell_order() {
    let mut config = ScanConfig::new(1.0);
    config.h0_range = AxisRange::new(0.0, 2.0, 6).unwrap();
    config.h_range = AxisRange::new(0.0, 2.0, 6).unwrap();
    let n = 36;
    let forward = ScanOutput::from_indexed(config.clone(), (0..n).map(|k| (k, evaluate_index(&config, k))));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(7));
    let shuffled = ScanOutput::from_indexed(config.clone(), order.into_iter().map(|k| (k, evaluate_index(&config, k))));
    assert_eq!(forward, shuffled);
    let a = refine_boundary(&forward, Detector::Mu2, Phase::Thermal);
    let b = refine_boundary(&shuffled, Detector::Mu2, Phase::Thermal);
    assert!(!a.points.is_empty());
    assert_eq!(a.points.len(), b.points.len());
    for (x, y) in a.points.iter().zip(&b.points) {
        assert!((x.h0 - y.h0).abs() < 1e-6 && (x.h - y.h).abs() < 1e-6);
        assert!(x.mu.abs() < 1e-9);
    }
}
