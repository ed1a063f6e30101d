use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hodgelab_core::charclass::{
    flag_su3_line, flag_su3_tangent_roots, projective_tangent_roots, q, rr_integral, twist_check,
    verify_conjugate_identity, CohRing, FormalClass, KPolynomial, TwistCheck,
};
use hodgelab_core::flag::{
    bott_dim, curvature_index_of_weight, kx_minus_weight, serre_duality_check, signed_weyl_polynomial, BottResult,
    KxMinus, RootSystem, SerreReport, Weight,
};

use crate::config::RunConfig;
use crate::report::{write_json, Check, CmdResult, Failure, Outcome};


#[derive(Serialize)]
struct RingPolynomial {
    ring: String,
    polynomial: KPolynomial,
    expected: KPolynomial,
}

#[derive(Serialize)]
struct FlagRingCheck {
    euler_integral: String,
    signed_weyl: i128,
    twist: TwistCheck,
}

#[derive(Serialize)]
struct FlagResult {
    root_system: String,
    lambda: Weight,
    index: usize,
    word: Vec<usize>,
    dominant: Weight,
    bott: BottResult,
    kx_minus: KxMinus,
    curvature_n_minus: usize,
    serre: SerreReport,
    todd_residual: String,
    todd_lists: usize,
    rr: Vec<RingPolynomial>,
    flag_ring: Option<FlagRingCheck>,
}

fn random_roots(rng: &mut ChaCha8Rng, len: usize) -> Vec<FormalClass> {
    (0..len)
        .map(|_| {
            let c: Vec<_> = (0..2)
                .map(|_| q(rng.random_range(-9..=9), rng.random_range(1..=7)))
                .collect();
            FormalClass::linear(&c)
        })
        .collect()
}

pub fn run(cfg: &RunConfig) -> CmdResult<Outcome> {
    let f = &cfg.flag;
    let rs = RootSystem::from_label(&f.root_system)?;
    if f.weight.len() != rs.rank() {
        return Err(Failure::usage(format!(
            "{} needs {} weight coordinates, got {}",
            rs.label,
            rs.rank(),
            f.weight.len()
        )));
    }
    let lambda = Weight::from_fundamental(&f.weight);
    let index = rs.index_of_weight(&lambda)?;
    let (w, dominant) = rs.to_dominant(&lambda)?;
    let shifted_index = rs.index_of_weight(&lambda.add(&rs.rho())).unwrap_or(index);
    let bott = bott_dim(&rs, &lambda, shifted_index)?;
    let kx = kx_minus_weight(&rs, &lambda)?;
    let curv = curvature_index_of_weight(&rs, &lambda)?;
    let serre = serre_duality_check(&rs, &lambda, &f.k)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut todd_worst = q(0, 1);
    for _ in 0..f.todd_samples {
        let len = rng.random_range(1..=4);
        let roots = random_roots(&mut rng, len);
        let r = verify_conjugate_identity(&roots, 2, f.todd_trunc);
        if r > todd_worst {
            todd_worst = r;
        }
    }
    let todd_zero = todd_worst == q(0, 1);

    let mut rr = Vec::new();
    for n in 1..=3u32 {
        let ring = CohRing::projective(n)?;
        let poly = rr_integral(&ring, &projective_tangent_roots(&ring), &ring.generator(0), None, 0)?;
        rr.push(RingPolynomial {
            ring: ring.name.clone(),
            polynomial: poly,
            expected: KPolynomial::binomial_shift(n),
        });
    }

    let flag_ring = if rs.rank() == 2 {
        let ring = CohRing::flag_su3()?;
        let e = [lambda.real[0], lambda.real[1], lambda.real[2]];
        let roots = flag_su3_tangent_roots(&ring);
        let neg: Vec<bool> = roots.iter().map(|(i, j, _)| e[*i] - e[*j] < 0).collect();
        let classes: Vec<FormalClass> = roots.into_iter().map(|t| t.2).collect();
        let line = flag_su3_line(&ring, e);
        let euler = rr_integral(&ring, &classes, &line, None, 0)?.eval_int(1);
        Some(FlagRingCheck {
            euler_integral: euler.to_string(),
            signed_weyl: signed_weyl_polynomial(&rs, &lambda)?,
            twist: twist_check(&ring, &classes, &neg, &line)?,
        })
    } else {
        None
    };

    let mut checks = vec![
        Check::flag("serre_equal_from_k0", serre.k0.map_or(-1.0, |k| k as f64), serre.k0.is_some()),
        Check::flag("bott_euler_consistent", bott.dim as f64, bott.euler_consistent),
        Check::flag("kx_minus_two_routes", kx.index as f64, kx.weight == kx.rho_shift),
        Check::flag("curvature_index_equals_weight_index", curv.n_minus as f64, curv.n_minus == index),
        Check::flag("word_length_equals_index", w.length() as f64, w.length() == index),
        Check::flag("todd_identity_exact_zero", 0.0, todd_zero),
    ];
    for p in &rr {
        checks.push(Check::flag(&format!("rr_{}", p.ring), 0.0, p.polynomial == p.expected));
    }
    if let Some(fr) = &flag_ring {
        checks.push(Check::flag(
            "flag_ring_euler_equals_weyl",
            fr.signed_weyl as f64,
            fr.euler_integral == fr.signed_weyl.to_string(),
        ));
        checks.push(Check::flag("flag_ring_twist_identity", fr.twist.index as f64, fr.twist.holds()));
    }

    println!("flag: {} λ = {:?}", rs.label, lambda.fund);
    println!("  index {index}, w = {:?}, wλ = {:?}", w.word, dominant.fund);
    if let Some(mu) = &bott.mu {
        println!("  μ = w(λ+ρ) − ρ = {:?}, dim H^{} = {}", mu.fund, shifted_index, bott.dim);
    }
    println!("  K⁻ twist {:?}", kx.weight.fund);
    for r in &serre.rows {
        let show = |v: Option<u64>| v.map_or("-".to_string(), |d| d.to_string());
        let verdict = if r.wall {
            "wall"
        } else if r.equal {
            "equal"
        } else {
            "differ"
        };
        println!("  k = {:>3}: bott {} direct {} {verdict}", r.k, show(r.bott), show(r.direct));
    }
    match serre.k0 {
        Some(k0) => println!("  equal for all tested k ≥ {k0}"),
        None => println!("  no tested k from which the routes agree"),
    }
    println!(
        "  Todd identity residual: {}",
        if todd_zero { "exact 0".to_string() } else { todd_worst.to_string() }
    );
    for p in &rr {
        println!("  RR {}: {}", p.ring, p.polynomial);
    }

    let result = FlagResult {
        root_system: rs.label.clone(),
        lambda,
        index,
        word: w.word,
        dominant,
        bott,
        kx_minus: kx,
        curvature_n_minus: curv.n_minus,
        serre,
        todd_residual: if todd_zero { "exact 0".into() } else { todd_worst.to_string() },
        todd_lists: f.todd_samples,
        rr,
        flag_ring,
    };
    let json = write_json(cfg, "flag", &checks, &result)?;
    Ok(Outcome {
        command: "flag",
        checks,
        files: vec![json],
    })
}
