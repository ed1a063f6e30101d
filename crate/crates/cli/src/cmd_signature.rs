use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hodgelab_core::geometry::{
    commutation_check, fundamental_matrix_data, levi_matrix, p0_eval, sigma_point, signature, subprincipal_spectrum,
    FundamentalMatrixData, WeightFunction,
};

use crate::config::RunConfig;
use crate::report::{write_json, Check, CmdResult, Failure, Outcome};

#[derive(Serialize)]
struct SubprincipalRow {
    q: usize,
    spectrum: Vec<f64>,
    min: f64,
}

#[derive(Serialize)]
struct SignatureResult {
    point: Vec<Complex64>,
    levi_eigenvalues: Vec<f64>,
    n_minus: usize,
    n_plus: usize,
    fundamental: FundamentalMatrixData,
    subprincipal: Vec<SubprincipalRow>,
    /// Form degree where the subprincipal minimum vanishes.
    q_star: Option<usize>,
    sigma_p0_max: f64,
    commutation_max: f64,
}

pub fn load_phi(cfg: &RunConfig) -> CmdResult<WeightFunction> {
    match &cfg.signature.phi {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Ok(WeightFunction::from_json(&text)?)
        }
        None => {
            if cfg.signature.mu.is_empty() {
                return Err(Failure::usage("signature: give a φ file or a non-empty μ list"));
            }
            Ok(WeightFunction::diagonal_quadratic(&cfg.signature.mu))
        }
    }
}

pub fn run(cfg: &RunConfig) -> CmdResult<Outcome> {
    let phi = load_phi(cfg)?;
    let n = phi.dim();
    let point: Vec<Complex64> = if cfg.signature.point.is_empty() {
        vec![Complex64::new(0.0, 0.0); n]
    } else {
        cfg.signature.point.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    };
    if point.len() != n {
        return Err(Failure::usage(format!("point has {} coordinates, φ has {n}", point.len())));
    }

    let h = levi_matrix(&phi, &point)?;
    let tol = cfg.tol("signature.degeneracy");
    let sig = signature(&h, tol);
    sig.require_nondegenerate(tol)?;
    let mu = sig.eigenvalues.clone();
    let fundamental = fundamental_matrix_data(&mu)?;
    let mut subprincipal = Vec::new();
    for q in 0..=n {
        let spectrum = subprincipal_spectrum(&mu, q)?;
        subprincipal.push(SubprincipalRow {
            q,
            min: spectrum[0],
            spectrum,
        });
    }
    let scale = mu.iter().fold(0.0_f64, |a, m| a.max(m.abs()));
    let q_star = subprincipal.iter().find(|r| r.min.abs() <= 1e-12 * scale.max(1.0)).map(|r| r.q);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sigma_max = 0.0_f64;
    let mut comm_max = 0.0_f64;
    for _ in 0..cfg.signature.samples {
        let z: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        sigma_max = sigma_max.max(p0_eval(&phi, &sigma_point(&phi, &z)));
        comm_max = comm_max.max(commutation_check(&phi, &z)?);
    }

    let checks = vec![
        Check::flag("q_star_equals_n_minus", q_star.map_or(-1.0, |q| q as f64), q_star == Some(sig.n_minus)),
        Check::at_most("sigma_p0_max", sigma_max, cfg.tol("signature.sigma")),
        Check::at_most("commutation_residual_max", comm_max, cfg.tol("signature.commutation")),
    ];
    println!(
        "signature: (n-, n+) = ({}, {}), q* = {}",
        sig.n_minus,
        sig.n_plus,
        q_star.map_or("none".to_string(), |q| q.to_string())
    );
    let result = SignatureResult {
        point,
        levi_eigenvalues: mu,
        n_minus: sig.n_minus,
        n_plus: sig.n_plus,
        fundamental,
        subprincipal,
        q_star,
        sigma_p0_max: sigma_max,
        commutation_max: comm_max,
    };
    let path = write_json(cfg, "signature", &checks, &result)?;
    Ok(Outcome {
        command: "signature",
        checks,
        files: vec![path],
    })
}
