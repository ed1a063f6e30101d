use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hodgelab_core::heat::{
    build_model, convergence_rate, graph_defect, phase_from_flow, phase_limit, stable_subspaces, trajectory,
    KernelPhase, QuadraticModel, TrajectoryRow,
};

use crate::config::RunConfig;
use crate::report::{write_csv, write_json, Check, CmdResult, Outcome};

/// Distances below this sit at roundoff and are left out of the rate fit.
const DISTANCE_FLOOR: f64 = 1e-12;

#[derive(Serialize)]
struct HeatResult {
    mu: Vec<f64>,
    n_minus: usize,
    /// Slope of `log‖ψ(t) − ψ(∞)‖` in `t`.
    log_slope: f64,
    rate: f64,
    rate_halved_step: Option<f64>,
    rate_delta: Option<f64>,
    route_agreement: f64,
    limit_im_hessian_min: f64,
    j_plus_positivity: f64,
    conjugation_defect: f64,
    lagrangian_defect: f64,
    graph_defect: f64,
    kernel: KernelChecks,
}

#[derive(Serialize)]
struct KernelChecks {
    diagonal_max: f64,
    hermitian_max: f64,
    /// `c = min |μ_j|` in `Re ψ ≤ −c|x−y|²`.
    c: f64,
    /// `max (Re ψ + c|x−y|²)`.
    decay_excess_max: f64,
    gradient_defect_max: f64,
}

fn fit_rows(rows: &[TrajectoryRow]) -> f64 {
    let usable: Vec<TrajectoryRow> = rows
        .iter()
        .filter(|r| r.t >= 1.0 && r.distance_to_limit > DISTANCE_FLOOR)
        .cloned()
        .collect();
    if usable.len() >= 2 {
        convergence_rate(&usable)
    } else {
        convergence_rate(rows)
    }
}

fn kernel_checks(model: &QuadraticModel, cfg: &RunConfig, rng: &mut ChaCha8Rng) -> CmdResult<KernelChecks> {
    let kp = KernelPhase::new(model)?;
    let n = model.n();
    let c = model.mu.iter().fold(f64::INFINITY, |a, m| a.min(m.abs()));
    let r = cfg.heat.grid_radius;
    let mut out = KernelChecks {
        diagonal_max: 0.0,
        hermitian_max: 0.0,
        c,
        decay_excess_max: f64::NEG_INFINITY,
        gradient_defect_max: 0.0,
    };
    for _ in 0..100 {
        let x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        // |x − y| ≤ r
        let dir: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = dir.iter().map(|d| d.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
        let scale = r * rng.random_range(0.0..1.0) / norm;
        let y: Vec<Complex64> = x.iter().zip(&dir).map(|(a, d)| a + d * scale).collect();
        let dist_sq: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).norm_sqr()).sum();
        let v = kp.eval(&x, &y);
        out.diagonal_max = out.diagonal_max.max(kp.eval(&x, &x).norm());
        out.hermitian_max = out.hermitian_max.max((kp.eval(&y, &x) - v.conj()).norm());
        out.decay_excess_max = out.decay_excess_max.max(v.re + c * dist_sq);
        out.gradient_defect_max = out.gradient_defect_max.max(kp.diagonal_gradient_defect(&model.mu, &x));
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> CmdResult<Outcome> {
    let h = &cfg.heat;
    let model = build_model(&h.mu)?;
    let times: Vec<f64> = (1..=h.samples).map(|i| h.t_max * i as f64 / h.samples as f64).collect();
    let limit = phase_limit(&model)?;
    let rows = trajectory(&model, &times, h.step, &limit)?;
    let rate = fit_rows(&rows);
    let rate_halved = if h.halve_step {
        Some(fit_rows(&trajectory(&model, &times, h.step / 2.0, &limit)?))
    } else {
        None
    };

    let mut route = 0.0_f64;
    for r in rows.iter().filter(|r| r.t <= 10.0) {
        route = route.max(phase_from_flow(&model, r.t)?.distance(&r.phase));
    }
    let im_min = limit.im_hessian_eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
    let pair = stable_subspaces(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let kernel = kernel_checks(&model, cfg, &mut rng)?;

    let stol = cfg.tol("heat.stable");
    let ktol = cfg.tol("heat.kernel");
    let result = HeatResult {
        mu: h.mu.clone(),
        n_minus: model.n_minus(),
        log_slope: -rate,
        rate,
        rate_halved_step: rate_halved,
        rate_delta: rate_halved.map(|r| r - rate),
        route_agreement: route,
        limit_im_hessian_min: im_min,
        j_plus_positivity: pair.positivity(),
        conjugation_defect: pair.conjugation_defect(),
        lagrangian_defect: pair.lagrangian_defect(),
        graph_defect: graph_defect(&limit, &pair),
        kernel,
    };
    let checks = vec![
        Check::flag("convergence_rate_positive", rate, rate > 0.0),
        Check::at_most("riccati_vs_flow", route, cfg.tol("heat.route")),
        Check::flag("limit_im_hessian_min", im_min, im_min > 0.0),
        Check::flag("j_plus_positivity", result.j_plus_positivity, result.j_plus_positivity > 0.0),
        Check::at_most("conjugation_defect", result.conjugation_defect, stol),
        Check::at_most("lagrangian_defect", result.lagrangian_defect, stol),
        Check::at_most("graph_defect", result.graph_defect, stol),
        Check::at_most("kernel_diagonal", result.kernel.diagonal_max, ktol),
        Check::at_most("kernel_hermitian", result.kernel.hermitian_max, ktol),
        Check::at_most("kernel_decay_excess", result.kernel.decay_excess_max, ktol),
        Check::at_most("kernel_diagonal_gradients", result.kernel.gradient_defect_max, ktol),
    ];
    println!("heat: measured log-distance slope {:.6} (rate {:.6})", -rate, rate);
    if let Some(d) = result.rate_delta {
        println!("heat: rate change under step halving {d:e}");
    }
    let csv = write_csv(
        &cfg.out,
        "heat_trajectory.csv",
        &TrajectoryRow::csv_header(model.n()),
        rows.iter().map(|r| r.csv_record()),
    )?;
    let json = write_json(cfg, "heat", &checks, &result)?;
    Ok(Outcome {
        command: "heat",
        checks,
        files: vec![json, csv],
    })
}
