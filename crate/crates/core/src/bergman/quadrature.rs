//! Gauss–Legendre rules.

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`,
/// nodes ascending. Roots of `P_n` by Newton's method from Tricomi's
/// initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let k = (i + 1) as f64;
        let mut t = (std::f64::consts::PI * (k - 0.25) / (nf + 0.5)).cos()
            * (1.0 - (1.0 - 1.0 / nf) / (8.0 * nf * nf));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() <= 1e-16 * t.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        dp = if d != 0.0 { d } else { dp };
        let weight = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (t * p - p0) / (t * t - 1.0);
    (p, d)
}

/// The rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    x.iter().zip(&w).map(|(&x, &w)| (mid + half * x, half * w)).collect()
}
