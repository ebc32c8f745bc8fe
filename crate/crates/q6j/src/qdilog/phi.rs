//! Faddeev's quantum dilogarithm
//!
//!   φ_r(t) = ∫ e^{(2t-1)x} / (4x sinh x sinh(2x/r)) dx
//!
//! with the pole at 0 passed above. The path is moved to Im x = π/2, which
//! sits between the pole at 0 and the next one at iπ, and split into two rays
//! leaving iπ/2. For real t the rays are horizontal and their nodes are
//! tabulated once per r; for complex t they are tilted (at most π/4) so the
//! integrand does not oscillate along them.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qarith::Level;
use crate::quad::{doubling_breaks, halve, panel_nodes};

const TAIL: f64 = 44.0;
const TOL: f64 = 1e-11;
const MAX_HALVINGS: usize = 4;

/// φ_r(t) for real t: quadrature real part and closed-form imaginary part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiValue {
    pub re: f64,
    pub im: f64,
    /// Imaginary part as produced by the quadrature, kept for cross-checks.
    pub im_quad: f64,
    /// Difference between the last two panel refinements.
    pub err: f64,
}

impl PhiValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// −π(6r²t² − 6r²t + r² − 2)/(24r).
pub fn im_closed_form(r: u32, t: f64) -> f64 {
    let r = r as f64;
    -PI * (6.0 * r * r * t * t - 6.0 * r * r * t + r * r - 2.0) / (24.0 * r)
}

fn expm1c(y: Complex64) -> Complex64 {
    if y.norm() > 0.5 {
        return y.exp() - 1.0;
    }
    let (s, c) = y.im.sin_cos();
    let half = (0.5 * y.im).sin();
    Complex64::new(y.re.exp_m1() * c - 2.0 * half * half, y.re.exp() * s)
}

/// log of the integrand without the e^{kx} factor, for Re x >= 0.
fn h_right(r: f64, x: Complex64) -> Complex64 {
    let c = 1.0 + 2.0 / r;
    -c * x - x.ln() - (-expm1c(-2.0 * x)).ln() - (-expm1c(-4.0 * x / r)).ln()
}

/// Same, for Re x <= 0.
fn h_left(r: f64, x: Complex64) -> Complex64 {
    let c = 1.0 + 2.0 / r;
    c * x - x.ln() - (-expm1c(2.0 * x)).ln() - (-expm1c(4.0 * x / r)).ln()
}

struct Node {
    rho: f64,
    a: f64,
    u: Complex64,
}

struct RayTable {
    right: Vec<Node>,
    left: Vec<Node>,
}

impl RayTable {
    fn new(r: f64, breaks: &[f64]) -> Self {
        let x0 = Complex64::new(0.0, FRAC_PI_2);
        let build = |right: bool| {
            let mut v = Vec::new();
            for p in breaks.windows(2) {
                for (rho, w) in panel_nodes(p[0], p[1]) {
                    let h = if right {
                        h_right(r, x0 + rho)
                    } else {
                        h_left(r, x0 - rho)
                    };
                    v.push(Node {
                        rho,
                        a: h.re + w.ln(),
                        u: Complex64::from_polar(1.0, h.im),
                    });
                }
            }
            v
        };
        RayTable {
            right: build(true),
            left: build(false),
        }
    }

    fn eval(&self, k: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for n in &self.right {
            acc += n.u * (k * n.rho + n.a).exp();
        }
        for n in &self.left {
            acc += n.u * (-k * n.rho + n.a).exp();
        }
        acc * Complex64::from_polar(1.0, k * FRAC_PI_2)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Grid(i64),
    Bits(u64),
}

/// Nodes and log(weight) + h along one tilted ray at one refinement level.
type TiltedNodes = Vec<(Complex64, Complex64)>;

/// Per-level φ_r evaluator with node tables and a memo of real values.
pub struct PhiEngine {
    r: u32,
    tables: Vec<OnceLock<Vec<RayTable>>>,
    tilted: Vec<OnceLock<Vec<TiltedNodes>>>,
    cache: RwLock<HashMap<Key, PhiValue>>,
}

impl PhiEngine {
    fn new(r: u32) -> Self {
        PhiEngine {
            r,
            tables: (0..64).map(|_| OnceLock::new()).collect(),
            tilted: (0..2 * DIRECTIONS * 64).map(|_| OnceLock::new()).collect(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// Shared engine for level r.
    pub fn for_level(r: u32) -> Arc<PhiEngine> {
        static ENGINES: OnceLock<Mutex<HashMap<u32, Arc<PhiEngine>>>> = OnceLock::new();
        let map = ENGINES.get_or_init(|| Mutex::new(HashMap::new()));
        map.lock()
            .expect("engine registry poisoned")
            .entry(r)
            .or_insert_with(|| Arc::new(PhiEngine::new(r)))
            .clone()
    }

    fn check_strip(&self, re_t: f64) -> Result<f64> {
        let r = self.r as f64;
        let kappa = 1.0 + 2.0 / r - (2.0 * re_t - 1.0).abs();
        if kappa.is_nan() || kappa <= 0.0 {
            return Err(Error::OutsideStrip { r: self.r, t: re_t });
        }
        Ok(kappa)
    }

    /// Tables for rays of length 2^j, at refinement levels 0..=MAX_HALVINGS.
    fn tables(&self, j: usize) -> &[RayTable] {
        self.tables[j].get_or_init(|| {
            let mut breaks = doubling_breaks(2f64.powi(j as i32));
            let mut out = Vec::new();
            for _ in 0..=MAX_HALVINGS {
                out.push(RayTable::new(self.r as f64, &breaks));
                breaks = halve(&breaks);
            }
            out
        })
    }

    fn key(&self, t: f64) -> Key {
        let v = t * 2.0 * self.r as f64;
        let n = v.round();
        if (v - n).abs() < 1e-9 * v.abs().max(1.0) {
            Key::Grid(n as i64)
        } else {
            Key::Bits(t.to_bits())
        }
    }

    pub fn eval(&self, t: f64) -> Result<PhiValue> {
        let key = self.key(t);
        if let Some(v) = self.cache.read().expect("phi cache poisoned").get(&key) {
            return Ok(*v);
        }
        let kappa = self.check_strip(t)?;
        let j = ((TAIL / kappa).log2().ceil().max(1.0)) as usize;
        let k = 2.0 * t - 1.0;
        let tabs = self.tables(j.min(63));
        let mut prev = tabs[0].eval(k);
        let mut err = f64::INFINITY;
        for tab in &tabs[1..] {
            let next = tab.eval(k);
            err = (next - prev).norm();
            prev = next;
            if err <= TOL * prev.norm().max(1.0) {
                break;
            }
        }
        let v = PhiValue {
            re: prev.re,
            im: im_closed_form(self.r, t),
            im_quad: prev.im,
            err,
        };
        self.cache
            .write()
            .expect("phi cache poisoned")
            .insert(key, v);
        Ok(v)
    }

    /// Nodes x and log(weight) + h(x) along one tilted ray, per refinement level.
    fn tilted(&self, left: bool, dir: usize, j: usize) -> &[TiltedNodes] {
        let slot = (usize::from(left) * DIRECTIONS + dir) * 64 + j;
        self.tilted[slot].get_or_init(|| {
            let r = self.r as f64;
            let x0 = Complex64::new(0.0, FRAC_PI_2);
            let d = ray_direction(left, dir);
            let mut breaks = doubling_breaks(2f64.powi(j as i32));
            let mut out = Vec::new();
            for _ in 0..=MAX_HALVINGS {
                let mut v = Vec::new();
                for p in breaks.windows(2) {
                    for (rho, w) in panel_nodes(p[0], p[1]) {
                        let x = x0 + d * rho;
                        let h = if left { h_left(r, x) } else { h_right(r, x) };
                        v.push((x, h + w.ln()));
                    }
                }
                out.push(v);
                breaks = halve(&breaks);
            }
            out
        })
    }

    /// φ_r at complex t, with |Re(2t-1)| < 1 + 2/r.
    pub fn eval_complex(&self, t: Complex64) -> Result<Complex64> {
        if t.im == 0.0 {
            return self.eval(t.re).map(|v| v.value());
        }
        self.check_strip(t.re)?;
        let r = self.r as f64;
        let c = 1.0 + 2.0 / r;
        let k = 2.0 * t - 1.0;
        // tilt each ray so that e^{(k∓c)x} decays with little oscillation
        let pick = |g: f64| {
            let g = g.clamp(-FRAC_PI_4, FRAC_PI_4);
            ((g / DIR_STEP).round() as i64 + HALF_DIRS as i64) as usize
        };
        let (ir, il) = (pick(-(c - k).arg()), pick(-(k + c).arg()));
        let (dr, dl) = (ray_direction(false, ir), ray_direction(true, il));
        let bucket = |rate: f64| ((TAIL / rate).log2().ceil().max(1.0) as usize).min(63);
        let (jr, jl) = (bucket(((c - k) * dr).re), bucket((-(k + c) * dl).re));
        let (tr, tl) = (self.tilted(false, ir, jr), self.tilted(true, il, jl));
        let sum = |nodes: &[(Complex64, Complex64)]| {
            nodes
                .iter()
                .map(|(x, a)| (k * x + a).exp())
                .sum::<Complex64>()
        };
        let total = |h: usize| sum(&tr[h]) * dr - sum(&tl[h]) * dl;
        let mut prev = total(0);
        for h in 1..=MAX_HALVINGS {
            let next = total(h);
            let done = (next - prev).norm() <= TOL * next.norm().max(1.0);
            prev = next;
            if done {
                break;
            }
        }
        Ok(prev)
    }
}

const HALF_DIRS: usize = 4;
const DIRECTIONS: usize = 2 * HALF_DIRS + 1;
const DIR_STEP: f64 = FRAC_PI_4 / HALF_DIRS as f64;

fn ray_direction(left: bool, dir: usize) -> Complex64 {
    let d = Complex64::from_polar(1.0, (dir as f64 - HALF_DIRS as f64) * DIR_STEP);
    if left {
        -d
    } else {
        d
    }
}

/// φ_r(t) for real t in (−1/r, 1 + 1/r).
pub fn phi_r(level: &Level, t: f64) -> Result<PhiValue> {
    PhiEngine::for_level(level.r()).eval(t)
}

/// (q)_n = Π_{k=1}^n (1 − ξ_r^{2k}), by direct product.
pub fn qpoch(level: &Level, n: u32) -> Complex64 {
    let r = level.r() as f64;
    (1..=n).fold(Complex64::new(1.0, 0.0), |acc, k| {
        acc * (1.0 - Complex64::from_polar(1.0, 4.0 * PI * k as f64 / r))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(r: i64) -> Level {
        Level::new(r).unwrap()
    }

    #[test]
    fn center_value() {
        let v = phi_r(&lv(5), 0.5).unwrap();
        assert!(v.re.abs() < 1e-12);
        assert!((v.im - 0.379_609).abs() < 1e-6);
        assert!((v.im_quad - v.im).abs() < 1e-10);
    }

    #[test]
    fn quadrature_reproduces_closed_form_imaginary_part() {
        for r in [5, 11, 51, 201] {
            for i in 0..=20 {
                let t = -0.9 / r as f64 + i as f64 / 20.0 * (1.0 + 1.8 / r as f64);
                let v = phi_r(&lv(r), t).unwrap();
                assert!(
                    (v.im_quad - v.im).abs() < 1e-9 * v.im.abs().max(1.0),
                    "r={r} t={t}"
                );
            }
        }
    }

    #[test]
    fn outside_strip_rejected() {
        let l = lv(7);
        assert!(phi_r(&l, -1.0 / 7.0).is_err());
        assert!(phi_r(&l, 1.0 + 1.0 / 7.0).is_err());
        assert!(phi_r(&l, f64::NAN).is_err());
    }

    #[test]
    fn res_identity_small_r() {
        let l = lv(25);
        let a = 0.3;
        let lhs = 1.0 - Complex64::from_polar(1.0, 2.0 * PI * a);
        let rhs = (phi_r(&l, a - 1.0 / 25.0).unwrap().value()
            - phi_r(&l, a + 1.0 / 25.0).unwrap().value())
        .exp();
        assert!((lhs - rhs).norm() < 1e-8 * lhs.norm());
    }

    #[test]
    fn complex_path_agrees_with_real_path_near_axis() {
        let e = PhiEngine::for_level(31);
        for &t in &[0.01, 0.2, 0.5, 0.77, 1.02] {
            let real = e.eval(t).unwrap().value();
            let eps = 1e-7;
            let up = e.eval_complex(Complex64::new(t, eps)).unwrap();
            let dn = e.eval_complex(Complex64::new(t, -eps)).unwrap();
            let mid = (up + dn) / 2.0;
            assert!((mid - real).norm() < 1e-9 * real.norm().max(1.0), "t={t}");
        }
    }

    #[test]
    fn complex_res_identity() {
        // the shift identity continues analytically off the real line
        let r = 41.0;
        let e = PhiEngine::for_level(41);
        for &(a, b) in &[(0.3, 0.1), (0.5, -0.2), (0.8, 0.35)] {
            let a = Complex64::new(a, b);
            let lhs = 1.0 - (Complex64::new(0.0, 2.0 * PI) * a).exp();
            let rhs =
                (e.eval_complex(a - 1.0 / r).unwrap() - e.eval_complex(a + 1.0 / r).unwrap()).exp();
            assert!((lhs - rhs).norm() < 1e-8 * lhs.norm(), "a={a}");
        }
    }

    #[test]
    fn qpoch_examples() {
        assert_eq!(qpoch(&lv(5), 0), Complex64::new(1.0, 0.0));
        let xi2 = |k: f64| Complex64::from_polar(1.0, 4.0 * PI * k / 5.0);
        let want = (1.0 - xi2(1.0)) * (1.0 - xi2(2.0));
        assert!((qpoch(&lv(5), 2) - want).norm() < 1e-15);
    }
}
