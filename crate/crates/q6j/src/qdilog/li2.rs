//! Dilogarithm on the unit circle and the Clausen function.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

const TWO_PI: f64 = 2.0 * PI;
const TERMS: usize = 60;

/// ζ(2k) for k = 1..TERMS.
fn zeta_even() -> &'static [f64; TERMS + 1] {
    static Z: OnceLock<[f64; TERMS + 1]> = OnceLock::new();
    Z.get_or_init(|| {
        let mut z = [0.0; TERMS + 1];
        z[1] = PI * PI / 6.0;
        for (k, zk) in z.iter_mut().enumerate().skip(2) {
            let s = 2 * k as i32;
            let n = 64.0f64;
            // direct sum, then Euler–Maclaurin for the tail beyond n
            let mut acc: f64 = (1..64).rev().map(|j| (j as f64).powi(-s)).sum();
            acc += n.powi(1 - s) / (s as f64 - 1.0)
                + 0.5 * n.powi(-s)
                + s as f64 / 12.0 * n.powi(-s - 1);
            *zk = acc;
        }
        z
    })
}

/// Cl₂(θ) = Σ sin(kθ)/k².
pub fn clausen(theta: f64) -> f64 {
    if theta < 0.0 {
        return -clausen(-theta);
    }
    let mut t = theta % TWO_PI;
    let mut sign = 1.0;
    if t > PI {
        t = TWO_PI - t;
        sign = -1.0;
    }
    if t == 0.0 || t == PI {
        return 0.0;
    }
    let z = zeta_even();
    let x2 = (t / TWO_PI).powi(2);
    let mut pow = x2;
    let mut series = 0.0;
    for (k, zk) in z.iter().enumerate().skip(1) {
        let term = zk * pow / (k as f64 * (2 * k + 1) as f64);
        series += term;
        if term < 1e-18 * series {
            break;
        }
        pow *= x2;
    }
    sign * t * (1.0 - t.ln() + series)
}

/// Li₂(e^{2πit}).
pub fn li2_circle(t: f64) -> Complex64 {
    let f = t - t.floor();
    Complex64::new(PI * PI * (f * f - f + 1.0 / 6.0), clausen(TWO_PI * f))
}

/// Lobachevsky function Λ(θ) = Cl₂(2θ)/2.
pub fn lobachevsky(theta: f64) -> f64 {
    0.5 * clausen(2.0 * theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Partial Fourier sum; the tail is below 1/(N² sin(θ/2)).
    fn clausen_fourier(theta: f64, n: usize) -> f64 {
        let mut s = 0.0;
        for k in (1..=n).rev() {
            s += (k as f64 * theta).sin() / (k as f64 * k as f64);
        }
        s
    }

    #[test]
    fn special_values() {
        assert!((li2_circle(0.0).re - PI * PI / 6.0).abs() < 1e-15);
        assert!(li2_circle(0.0).im.abs() < 1e-15);
        assert!((li2_circle(0.5).re + PI * PI / 12.0).abs() < 1e-15);
        assert!((clausen(PI / 3.0) - 1.014_941_606_409_653_6).abs() < 1e-14);
        assert!((clausen(2.0 * PI / 3.0) - 2.0 / 3.0 * clausen(PI / 3.0)).abs() < 1e-14);
        assert!((clausen(PI / 2.0) - 0.915_965_594_177_219).abs() < 1e-14);
    }

    #[test]
    fn matches_fourier_sum() {
        for &th in &[0.3, 0.7, 1.3, 2.0, 2.9, 3.1, 4.0, 5.9] {
            let want = clausen_fourier(th, 4_000_000);
            assert!((clausen(th) - want).abs() < 1e-12, "θ={th}");
        }
    }

    #[test]
    fn symmetry_and_duplication() {
        for i in 1..50 {
            let th = i as f64 * 0.06;
            assert!((clausen(-th) + clausen(th)).abs() < 1e-15);
            assert!((clausen(th + TWO_PI) - clausen(th)).abs() < 1e-13);
            let dup = 2.0 * clausen(th) - 2.0 * clausen(PI - th);
            assert!((clausen(2.0 * th) - dup).abs() < 1e-13);
        }
    }
}
