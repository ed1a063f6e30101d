use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use hodgelab_core::bergman::{
    expansion_fit, fock_harmonic_kernel, fock_kernel_exact, gram_bergman_many, offdiag_decay, p1_kernel_exact,
    projector_checks, DecayReport, DecaySample, FitReport, KernelSample, ModelId, ProjectorReport, QuadSpec,
    SectionBasis, Space1D,
};

use crate::config::RunConfig;
use crate::report::{write_csv, write_json, Check, CmdResult, Failure, Outcome};

#[derive(Serialize)]
struct BergmanResult {
    model: &'static str,
    n: usize,
    route_max_diff: f64,
    quadrature_levels: Vec<(u32, u32)>,
    fit: Option<FitReport>,
    expected_b0: Option<f64>,
    decay: Option<DecayReport>,
    decay_half: Option<DecayReport>,
    expected_decay_rate: Option<f64>,
    projectors: Vec<ProjectorReport>,
}

fn parse_model(name: &str) -> CmdResult<ModelId> {
    match name {
        "fock" => Ok(ModelId::Fock),
        "fock_mixed" => Ok(ModelId::FockMixed),
        "p1" | "p1_oK" => Ok(ModelId::P1),
        other => Err(Failure::usage(format!(
            "unknown model '{other}'; expected fock, fock_mixed or p1_oK"
        ))),
    }
}

fn basis(model: ModelId, lambda: &[f64], k: u32, radius: f64, q: usize) -> CmdResult<SectionBasis> {
    Ok(match model {
        ModelId::Fock => SectionBasis::fock(lambda, k, radius)?,
        ModelId::FockMixed => SectionBasis::fock_mixed(lambda, k, radius, q)?,
        ModelId::P1 => SectionBasis::p1(k),
    })
}

fn exact(model: ModelId, lambda: &[f64], k: u32, q: usize, z: &[Complex64], w: &[Complex64]) -> CmdResult<Complex64> {
    Ok(match model {
        ModelId::Fock => fock_kernel_exact(lambda, k as f64, z, w)?,
        ModelId::FockMixed => fock_harmonic_kernel(lambda, k as f64, z, w, q)?.value,
        ModelId::P1 => p1_kernel_exact(k, z[0], w[0]),
    })
}

pub fn run(cfg: &RunConfig) -> CmdResult<Outcome> {
    let b = &cfg.bergman;
    let model = parse_model(&b.model)?;
    let n = if model == ModelId::P1 { 1 } else { b.lambda.len() };
    if n == 0 {
        return Err(Failure::usage("Fock models need a non-empty λ list"));
    }
    if b.points.is_empty() {
        return Err(Failure::usage("bergman: at least one sample point is required"));
    }
    if b.k.iter().any(|&k| k == 0) {
        return Err(Failure::usage("k values must be positive"));
    }
    let mut ks = b.k.clone();
    ks.sort_unstable();
    ks.dedup();

    let offset = Complex64::new(b.offset[0], b.offset[1]);
    let pts: Vec<Complex64> = b.points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    let radius = pts.iter().map(|p| p.norm()).fold(0.0, f64::max) + offset.norm() + 0.5;
    let rep = |c: Complex64| vec![c; n];
    let base = pts[0];
    // pairs: every point on the diagonal, then the two off-diagonal sweeps
    let mut pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = pts.iter().map(|&p| (rep(p), rep(p))).collect();
    let extra = [base + offset, base + offset * 0.5];
    for e in extra {
        pairs.push((rep(base), rep(e)));
        pairs.push((rep(e), rep(e)));
    }
    let quad = QuadSpec {
        initial_level: 0,
        max_level: b.max_level,
        tol: cfg.tol("bergman.quadrature"),
    };

    let mut samples = Vec::new();
    let mut route_max = 0.0_f64;
    let mut levels = Vec::new();
    let mut diag = Vec::new();
    let mut sweeps: [Vec<DecaySample>; 2] = [Vec::new(), Vec::new()];
    for &k in &ks {
        let basis = basis(model, &b.lambda, k, radius, b.q)?;
        let eval = gram_bergman_many(&basis, &quad, &pairs)?;
        levels.push((k, eval.level));
        for ((x, y), v) in pairs.iter().zip(&eval.values) {
            let e = exact(model, &b.lambda, k, b.q, x, y)?;
            route_max = route_max.max((v - e).norm());
            for (route, value) in [("gram", *v), ("exact", e)] {
                samples.push(KernelSample {
                    model: format!("{}/{route}", model.name()),
                    k,
                    x: x[0],
                    y: y[0],
                    value,
                });
            }
        }
        diag.push(eval.values[0].re);
        let np = pts.len();
        for (s, sweep) in sweeps.iter_mut().enumerate() {
            sweep.push(DecaySample {
                k: k as f64,
                offdiag: eval.values[np + 2 * s].norm(),
                diag_x: eval.values[0].re,
                diag_y: eval.values[np + 2 * s + 1].re,
            });
        }
    }

    let trivial = basis(model, &b.lambda, 1, radius, b.q)?.is_trivial();
    let kf: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    let fit = if !trivial && ks.len() >= 6 {
        Some(expansion_fit(&kf, &diag)?)
    } else {
        None
    };
    let expected_b0 = match model {
        ModelId::P1 => Some(1.0 / PI),
        _ if trivial => None,
        _ => Some(b.lambda.iter().map(|l| 2.0 * l.abs() / PI).product()),
    };
    let (decay, decay_half) = if trivial {
        (None, None)
    } else {
        let d = [offset, offset * 0.5].map(|o| n as f64 * o.norm_sqr());
        (Some(offdiag_decay(&sweeps[0], d[0])?), Some(offdiag_decay(&sweeps[1], d[1])?))
    };
    let expected_rate = match model {
        ModelId::P1 => None,
        _ if trivial => None,
        _ => Some(-b.lambda.iter().map(|l| l.abs()).sum::<f64>() * offset.norm_sqr()),
    };

    let kmax = *ks.last().expect("k list non-empty");
    let mut projectors = Vec::new();
    if !trivial {
        let mut spaces = Vec::new();
        for (s, _) in basis(model, &b.lambda, kmax, radius, b.q)?.factors() {
            let s = match s {
                Space1D::Fock { alpha, degree } => Space1D::Fock {
                    alpha,
                    degree: degree.min(b.projector_degree),
                },
                other => other,
            };
            if !spaces.contains(&s) {
                spaces.push(s);
            }
        }
        for s in spaces {
            projectors.push(projector_checks(&s, b.projector_level)?);
        }
    }

    let mut checks = vec![Check::at_most("route_max_diff", route_max, cfg.tol("bergman.route"))];
    if let (Some(f), Some(b0)) = (&fit, expected_b0) {
        checks.push(Check::at_most("fit_n_hat_error", (f.n_hat - n as f64).abs(), 0.02));
        checks.push(Check::at_most("fit_b0_relative_error", ((f.b0 - b0) / b0).abs(), cfg.tol("bergman.fit")));
    }
    if let (Some(d), Some(h)) = (&decay, &decay_half) {
        match expected_rate {
            Some(r) => checks.push(Check::at_most("decay_rate_error", (d.re_psi_hat - r).abs(), cfg.tol("bergman.decay"))),
            None => {
                checks.push(Check::flag("decay_rate_negative", d.re_psi_hat, d.re_psi_hat < 0.0));
                let (a, c) = (d.quadratic_coeff.unwrap_or(0.0), h.quadratic_coeff.unwrap_or(0.0));
                let rel = ((a - c) / a).abs();
                checks.push(Check::at_most("decay_normalized_stability", rel, 0.1));
            }
        }
    }
    let ptol = cfg.tol("bergman.projector");
    for (i, p) in projectors.iter().enumerate() {
        let tag = if projectors.len() > 1 {
            format!("{}{}", p.model, i + 1)
        } else {
            p.model.clone()
        };
        checks.push(Check::at_most(&format!("{tag}_idempotence"), p.idempotence, ptol));
        checks.push(Check::at_most(&format!("{tag}_self_adjointness"), p.self_adjointness, ptol));
        checks.push(Check::at_most(&format!("{tag}_trace_minus_dim"), (p.trace - p.dim as f64).abs(), ptol));
    }
    if let Some(f) = &fit {
        println!("bergman: n̂ = {:.6}, b̂0 = {:.9}, b̂1 = {:.6}", f.n_hat, f.b0, f.b1);
    }
    for p in &projectors {
        println!("bergman: {} projector trace {:.9} (dim {})", p.model, p.trace, p.dim);
    }

    let header: Vec<String> = KernelSample::CSV_HEADER.iter().map(|s| s.to_string()).collect();
    let csv = write_csv(&cfg.out, "bergman_samples.csv", &header, samples.iter().map(|s| s.csv_record()))?;
    let decay_header: Vec<String> = ["sweep", "k", "offdiag", "diag_x", "diag_y"].iter().map(|s| s.to_string()).collect();
    let decay_rows = sweeps.iter().enumerate().flat_map(|(i, sw)| {
        sw.iter().map(move |s| {
            vec![
                if i == 0 { "offset" } else { "half_offset" }.to_string(),
                s.k.to_string(),
                s.offdiag.to_string(),
                s.diag_x.to_string(),
                s.diag_y.to_string(),
            ]
        })
    });
    let dcsv = write_csv(&cfg.out, "bergman_decay.csv", &decay_header, decay_rows)?;
    let result = BergmanResult {
        model: model.name(),
        n,
        route_max_diff: route_max,
        quadrature_levels: levels,
        fit,
        expected_b0,
        decay,
        decay_half,
        expected_decay_rate: expected_rate,
        projectors,
    };
    let json = write_json(cfg, "bergman", &checks, &result)?;
    Ok(Outcome {
        command: "bergman",
        checks,
        files: vec![json, csv, dcsv],
    })
}
