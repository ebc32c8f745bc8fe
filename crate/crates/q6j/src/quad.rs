//! Gauss–Legendre rules and composite integration over panels.

use std::sync::OnceLock;

use num_complex::Complex64;

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Cached 20-point rule.
pub fn gl20() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(20))
}

/// Mapped nodes and weights of the 20-point rule on [a, b].
pub fn panel_nodes(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let (x, w) = gl20();
    let (h, c) = ((b - a) / 2.0, (a + b) / 2.0);
    x.iter()
        .zip(w.iter())
        .map(move |(&xi, &wi)| (c + h * xi, h * wi))
}

/// Composite rule over consecutive breakpoints.
pub fn integrate_complex(breaks: &[f64], mut f: impl FnMut(f64) -> Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in breaks.windows(2) {
        for (x, w) in panel_nodes(p[0], p[1]) {
            acc += f(x) * w;
        }
    }
    acc
}

pub fn integrate_real(breaks: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
    integrate_complex(breaks, |x| Complex64::new(f(x), 0.0)).re
}

/// Breakpoints 0, 1/2, 1, 2, 4, ... up to the first power of two >= x_max.
pub fn doubling_breaks(x_max: f64) -> Vec<f64> {
    let mut b = vec![0.0, 0.5, 1.0];
    while *b.last().unwrap() < x_max {
        let last = *b.last().unwrap();
        b.push(2.0 * last);
    }
    b
}

/// Every panel split in two.
pub fn halve(breaks: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * breaks.len());
    for p in breaks.windows(2) {
        out.push(p[0]);
        out.push(0.5 * (p[0] + p[1]));
    }
    out.extend(breaks.last());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 20, 33] {
            let (_, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let (x, w) = gauss_legendre(20);
        for deg in 0..40 {
            let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg)).sum();
            let want = if deg % 2 == 1 {
                0.0
            } else {
                2.0 / (deg as f64 + 1.0)
            };
            assert!((got - want).abs() < 1e-14, "deg={deg}");
        }
    }

    #[test]
    fn exponential_tail() {
        let v = integrate_real(&doubling_breaks(64.0), |x| (-x).exp());
        assert!((v - 1.0).abs() < 1e-14);
        let h = integrate_real(&halve(&doubling_breaks(64.0)), |x| (-x).exp());
        assert!((v - h).abs() < 1e-15);
    }
}
