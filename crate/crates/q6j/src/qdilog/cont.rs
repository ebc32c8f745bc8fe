//! Racah summands and triangle coefficients continued to real (and complex)
//! arguments through φ_r.

use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use num_complex::Complex64;

use super::phi::PhiEngine;
use crate::error::{Error, Result};
use crate::logsigned::LogSigned;
use crate::qarith::{is_r_admissible, Level, Spin};
use crate::sixj::SpinSextuple;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Quintic smoothstep cutoff: 1 on [lo, hi], 0 outside [lo - w, hi + w].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpSpec {
    pub width: f64,
}

impl Default for BumpSpec {
    fn default() -> Self {
        BumpSpec { width: 0.25 }
    }
}

impl BumpSpec {
    fn step(x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        x * x * x * (x * (6.0 * x - 15.0) + 10.0)
    }

    pub fn psi(&self, z: f64, lo: f64, hi: f64) -> f64 {
        if z < lo {
            Self::step((z - (lo - self.width)) / self.width)
        } else if z > hi {
            Self::step(((hi + self.width) - z) / self.width)
        } else {
            1.0
        }
    }
}

/// Data of α̃_r for one admissible sextuple.
#[derive(Clone)]
pub struct ContinuousSummandParams {
    pub level: Level,
    pub spins: SpinSextuple,
    pub s: [f64; 4],
    pub t: [f64; 3],
    pub spin_sum: f64,
    pub d2: f64,
    engine: Arc<PhiEngine>,
}

impl std::fmt::Debug for ContinuousSummandParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ContinuousSummandParams")
            .field("r", &self.level.r())
            .field("spins", &self.spins)
            .finish()
    }
}

impl ContinuousSummandParams {
    pub fn new(level: &Level, spins: SpinSextuple) -> Result<Self> {
        spins.check(level)?;
        let v = spins.twice().map(|x| x as f64 / 2.0);
        let mut d2 = -0.5;
        for i in 0..6 {
            for j in i..6 {
                d2 += v[i] * v[j];
            }
        }
        Ok(ContinuousSummandParams {
            level: level.clone(),
            spins,
            s: spins.s().map(|x| x as f64),
            t: spins.t().map(|x| x as f64),
            spin_sum: v.iter().sum(),
            d2,
            engine: PhiEngine::for_level(level.r()),
        })
    }

    pub fn r(&self) -> f64 {
        self.level.r() as f64
    }

    /// [m_r, M_r].
    pub fn range(&self) -> (f64, f64) {
        let (m, big_m) = self.spins.range();
        (m as f64, big_m as f64)
    }

    /// σ_{r,j} = (2S_j + 3)/r.
    pub fn sigma(&self) -> [f64; 4] {
        self.s.map(|s| (2.0 * s + 3.0) / self.r())
    }

    /// τ_{r,k} = (2T_k + 4)/r.
    pub fn tau(&self) -> [f64; 3] {
        self.t.map(|t| (2.0 * t + 4.0) / self.r())
    }

    /// d₁(z) = 3z²/2 − (2Σspins + 1/2)z.
    pub fn d1(&self, z: f64) -> f64 {
        1.5 * z * z - (2.0 * self.spin_sum + 0.5) * z
    }

    fn log_with(
        &self,
        z: Complex64,
        phi: impl Fn(Complex64) -> Result<Complex64>,
    ) -> Result<Complex64> {
        let r = self.r();
        let mut acc = c(LN_2) - 6.0 * phi(c(1.0 / r))? - phi((2.0 * z + 3.0) / r - 1.0)?;
        for s in self.s {
            acc += phi((2.0 * z - 2.0 * s + 1.0) / r)?;
        }
        for t in self.t {
            acc += phi((2.0 * t - 2.0 * z + 1.0) / r)?;
        }
        let poly = 3.0 * z * z - z - 4.0 * self.spin_sum * z;
        let phase =
            I * (PI * r / 2.0 + 4.0 * PI * self.d2 / r) + I * PI * z + I * (2.0 * PI / r) * poly;
        Ok(acc + phase)
    }

    /// Complex logarithm of α̃_r(z), continued to complex z.
    pub fn log_at_complex(&self, z: Complex64) -> Result<Complex64> {
        self.log_with(z, |t| self.engine.eval_complex(t))
    }

    pub fn log_at(&self, z: f64) -> Result<Complex64> {
        self.log_with(c(z), |t| self.engine.eval(t.re).map(|v| v.value()))
    }

    /// β_r(z) = (1/r) log|α̃_r(z)|.
    pub fn beta(&self, z: f64) -> Result<f64> {
        Ok(self.log_at(z)?.re / self.r())
    }
}

/// α̃_r(z) for real z in [m_r − 1/4, M_r + 1/4]. The value is real; its sign
/// is constant in z but depends on r.
pub fn alpha_tilde(params: &ContinuousSummandParams, z: f64) -> Result<LogSigned> {
    let (m, big_m) = params.range();
    if !(z >= m - 0.25 && z <= big_m + 0.25) {
        return Err(Error::Domain(format!(
            "z = {z} outside [{m} - 1/4, {big_m} + 1/4]"
        )));
    }
    let l = params.log_at(z)?;
    let (s, co) = l.im.sin_cos();
    if s.abs() > 1e-6 {
        return Err(Error::Domain(format!(
            "α̃ is not real at z = {z} (phase {})",
            l.im
        )));
    }
    Ok(LogSigned::new(if co > 0.0 { 1 } else { -1 }, l.re))
}

/// (−1)^{(r−1)/2} / (2 sin(2π/r)), the factor relating α̃_r to α_r.
pub fn bridging_factor(level: &Level) -> LogSigned {
    let r = level.r() as f64;
    let sign = if ((level.r() - 1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    LogSigned::new(sign, -(2.0 * (2.0 * PI / r).sin()).ln())
}

/// log Δ̃_r(u, v, w) for real spin values (complex in general).
pub fn delta_tilde_log(level: &Level, u: f64, v: f64, w: f64) -> Result<Complex64> {
    let e = PhiEngine::for_level(level.r());
    let r = level.r() as f64;
    let p = |t: f64| e.eval(t).map(|x| x.value());
    let inner = 2.0 * p(1.0 / r)? + p((2.0 * (u + v + w) + 3.0) / r - 1.0)?
        - LN_2
        - p((2.0 * (u + v - w) + 1.0) / r)?
        - p((2.0 * (v + w - u) + 1.0) / r)?
        - p((2.0 * (w + u - v) + 1.0) / r)?;
    Ok(0.5 * inner)
}

/// log Δ̃_r for an admissible triple.
pub fn delta_tilde(level: &Level, u: Spin, v: Spin, w: Spin) -> Result<Complex64> {
    if !is_r_admissible(level, u, v, w) {
        return Err(Error::Inadmissible(u.twice, v.twice, w.twice));
    }
    delta_tilde_log(level, u.value(), v.value(), w.value())
}

/// d₃(u, v, w) = −(u² + v² + w² − 2uv − 2uw − 2vw − u − v − w − 1)/2.
pub fn d3(u: f64, v: f64, w: f64) -> f64 {
    -0.5 * (u * u + v * v + w * w - 2.0 * u * v - 2.0 * u * w - 2.0 * v * w - u - v - w - 1.0)
}

/// log of √(2 sin(2π/r)) ξ_r^{d₃} i^{(r−1)/2 − (u+v+w)} Δ̃_r(u, v, w).
pub fn delta_from_tilde(level: &Level, u: Spin, v: Spin, w: Spin) -> Result<Complex64> {
    let r = level.r() as f64;
    let (a, b, e) = (u.value(), v.value(), w.value());
    let pre = 0.5 * (2.0 * (2.0 * PI / r).sin()).ln();
    let phase = 2.0 * PI * d3(a, b, e) / r + PI / 2.0 * ((r - 1.0) / 2.0 - (a + b + e));
    Ok(delta_tilde(level, u, v, w)? + Complex64::new(pre, phase))
}

/// Continuum data σ, τ, η from six η values (a..f order).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Continuum {
    pub r: u32,
    pub eta: [f64; 6],
    pub sigma: [f64; 4],
    pub tau: [f64; 3],
}

impl Continuum {
    pub fn new(r: u32, eta: [f64; 6]) -> Self {
        let [a, b, cc, d, e, f] = eta;
        Continuum {
            r,
            eta,
            sigma: [a + b + e, a + cc + f, b + d + f, cc + d + e],
            tau: [a + b + cc + d, a + d + e + f, b + cc + e + f],
        }
    }

    /// η of the lattice spins, (2a+1)/r.
    pub fn from_spins(r: u32, s: &SpinSextuple) -> Self {
        Self::new(r, s.twice().map(|x| (x as f64 + 1.0) / r as f64))
    }

    pub fn eta_sum(&self) -> f64 {
        self.eta.iter().sum()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn tau_min(&self) -> f64 {
        self.tau.iter().cloned().fold(f64::MAX, f64::min)
    }

    /// Plateau of the cutoff in z units: [(rσ_max − 3)/2, (rτ_min − 4)/2].
    pub fn z_plateau(&self) -> (f64, f64) {
        let r = self.r as f64;
        (
            (r * self.sigma_max() - 3.0) / 2.0,
            (r * self.tau_min() - 4.0) / 2.0,
        )
    }

    /// Support of ḡ_r in ζ.
    pub fn zeta_support(&self, bump: &BumpSpec) -> (f64, f64) {
        let r = self.r as f64;
        let (lo, hi) = self.z_plateau();
        (
            (2.0 * (lo - bump.width) + 3.0) / r,
            (2.0 * (hi + bump.width) + 3.0) / r,
        )
    }
}

/// log ḡ_r(ζ) without the cutoff, as a complex number whose imaginary part
/// is an unreduced real phase.
pub fn gbar_log_uncut(cont: &Continuum, zeta: f64) -> Result<Complex64> {
    let e = PhiEngine::for_level(cont.r);
    let r = cont.r as f64;
    let p = |t: f64| e.eval(t).map(|x| x.value());
    let mut acc = -6.0 * p(1.0 / r)? - p(zeta - 1.0)? + LN_2;
    for s in cont.sigma {
        acc += p(zeta - s + 1.0 / r)?;
    }
    for t in cont.tau {
        acc += p(t - zeta)?;
    }
    let phase = PI * r * zeta / 2.0
        + 2.0 * PI * r * (0.75 * zeta * zeta - cont.eta_sum() * zeta + zeta / r);
    Ok(acc + I * phase)
}

/// ḡ_r(ζ) in log form; None where the cutoff vanishes.
pub fn gbar_log(cont: &Continuum, zeta: f64, bump: &BumpSpec) -> Result<Option<Complex64>> {
    let r = cont.r as f64;
    let (lo, hi) = cont.z_plateau();
    let psi = bump.psi((r * zeta - 3.0) / 2.0, lo, hi);
    if psi == 0.0 {
        return Ok(None);
    }
    Ok(Some(gbar_log_uncut(cont, zeta)? + psi.ln()))
}

/// ḡ_r(ζ) as a complex number (0 outside the cutoff's support).
pub fn gbar(cont: &Continuum, zeta: f64, bump: &BumpSpec) -> Result<Complex64> {
    Ok(gbar_log(cont, zeta, bump)?.map_or(Complex64::new(0.0, 0.0), |l| l.exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sixj::{alpha_term, delta_coeff};

    #[test]
    fn bump_shape() {
        let b = BumpSpec::default();
        assert_eq!(b.psi(5.0, 5.0, 9.0), 1.0);
        assert_eq!(b.psi(4.75, 5.0, 9.0), 0.0);
        assert_eq!(b.psi(9.3, 5.0, 9.0), 0.0);
        assert!((b.psi(4.875, 5.0, 9.0) - 0.5).abs() < 1e-15);
        for i in 0..100 {
            let v = b.psi(4.7 + i as f64 * 0.05, 5.0, 9.0);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn bridging_small_level() {
        let l = Level::new(7).unwrap();
        let s = SpinSextuple::from_twice([2, 2, 2, 2, 2, 2]);
        let p = ContinuousSummandParams::new(&l, s).unwrap();
        let (m, big_m) = s.range();
        for z in m..=big_m.min(l.r() as i64 - 2) {
            let want = alpha_term(&l, &s, z).unwrap();
            let got = bridging_factor(&l) * alpha_tilde(&p, z as f64).unwrap();
            assert_eq!(want.sign, got.sign, "z={z}");
            assert!((want.logmag - got.logmag).abs() < 1e-8, "z={z}");
        }
    }

    #[test]
    fn delta_relation_magnitude() {
        let l = Level::new(101).unwrap();
        let h = |x: f64| Spin::from_f64(x).unwrap();
        let (u, v, w) = (h(16.5), h(16.5), h(17.0));
        let want = delta_coeff(&l, u, v, w).unwrap().logmag();
        let got = delta_from_tilde(&l, u, v, w).unwrap().re;
        assert!((want - got).abs() < 1e-8);
    }

    #[test]
    fn gbar_vanishes_off_support() {
        let cont = Continuum::new(51, [0.375; 6]);
        let b = BumpSpec::default();
        let (lo, _) = cont.zeta_support(&b);
        assert_eq!(
            gbar(&cont, lo - 1e-3, &b).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert!(gbar(&cont, 1.3, &b).unwrap().norm() > 0.0);
    }
}
