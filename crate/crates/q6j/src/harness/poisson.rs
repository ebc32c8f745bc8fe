//! Fourier coefficients of the continued Racah summand and the integral of ḡ_r.
//!
//! f̂(m) = ∫ e^{2πimz} ψ(z) α̃_r(z) dz. For m ≠ 0 the true value sits far
//! below the rounding noise of a real-axis rule, so the plateau part of the
//! path is lifted to height y where the integrand has its saddle; ψ ≡ 1 there
//! and α̃_r is analytic, so only the two ramps stay on the real axis.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spins::{build_spin_sequence, lattice_angles};
use crate::error::{Error, Result};
use crate::geometry::{potential_f, volume, AngleSet};
use crate::qarith::Level;
use crate::qdilog::{delta_tilde_log, gbar_log, BumpSpec, ContinuousSummandParams, Continuum};
use crate::quad::panel_nodes;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A path integral of e^{log f − anchor} with a halving error estimate.
#[derive(Clone, Copy, Debug)]
struct Piece {
    value: Complex64,
    err: f64,
}

/// ∫ exp(g(z) − anchor) dz along the segment z0 → z1, panels of at most `h`.
fn segment<G>(z0: Complex64, z1: Complex64, h: f64, anchor: f64, g: &G) -> Result<Piece>
where
    G: Fn(Complex64) -> Result<Option<Complex64>> + Sync,
{
    let len = (z1 - z0).norm();
    if len == 0.0 {
        return Ok(Piece {
            value: Complex64::new(0.0, 0.0),
            err: 0.0,
        });
    }
    let n = (len / h).ceil().max(1.0) as usize;
    let dir = (z1 - z0) / len;
    let rule = |n: usize| -> Result<Complex64> {
        let parts: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|k| {
                let (a, b) = (len * k as f64 / n as f64, len * (k + 1) as f64 / n as f64);
                let mut acc = Complex64::new(0.0, 0.0);
                for (s, w) in panel_nodes(a, b) {
                    if let Some(l) = g(z0 + dir * s)? {
                        acc += (l - anchor).exp() * w;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        Ok(parts.iter().sum::<Complex64>() * dir)
    };
    let coarse = rule(n)?;
    let fine = rule(2 * n)?;
    Ok(Piece {
        value: fine,
        err: (fine - coarse).norm(),
    })
}

/// Coefficients in units of e^{anchor}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PoissonSpectrum {
    pub r: u32,
    /// [m_r, M_r].
    pub range: (f64, f64),
    /// log of the largest |α̃_r| on the lattice.
    pub anchor: f64,
    pub m: Vec<i64>,
    pub coeffs: Vec<Complex64>,
    pub errs: Vec<f64>,
    /// Σ_{z = m_r}^{M_r} α̃_r(z).
    pub lattice_sum: f64,
    /// Height of the lifted path for m = 1, in z units.
    pub lift: f64,
}

impl PoissonSpectrum {
    pub fn coeff(&self, m: i64) -> Option<Complex64> {
        self.m.iter().position(|&x| x == m).map(|i| self.coeffs[i])
    }

    /// |f̂(m)|/|f̂(0)|.
    pub fn relative(&self, m: i64) -> Option<f64> {
        Some(self.coeff(m)?.norm() / self.coeff(0)?.norm())
    }

    /// |f̂(0) − Σ α̃| / |Σ α̃|.
    pub fn lattice_mismatch(&self) -> Option<f64> {
        Some((self.coeff(0)?.re - self.lattice_sum).abs() / self.lattice_sum.abs())
    }

    /// Σ_{m≠0} |f̂(m)| / |f̂(0)| over the computed m.
    pub fn tail(&self) -> Option<f64> {
        let f0 = self.coeff(0)?.norm();
        Some(
            self.m
                .iter()
                .zip(&self.coeffs)
                .filter(|(m, _)| **m != 0)
                .map(|(_, c)| c.norm())
                .sum::<f64>()
                / f0,
        )
    }

    /// Rounding floor for comparing f̂(0) with the lattice sum: the quadrature
    /// error estimate plus ε·(N + 1)·max|log α̃|, the error of exponentiating
    /// N anchored logarithms.
    pub fn numerical_floor(&self) -> Option<f64> {
        let n = self.range.1 - self.range.0 + 2.0;
        Some(self.f0_err()? + f64::EPSILON * n * self.anchor.abs().max(1.0))
    }

    /// Relative quadrature error of f̂(0).
    pub fn f0_err(&self) -> Option<f64> {
        let i = self.m.iter().position(|&x| x == 0)?;
        Some(self.errs[i] / self.coeffs[i].norm())
    }
}

pub fn poisson_spectrum(angles: &AngleSet, r: u32, m_range: &[i64]) -> Result<PoissonSpectrum> {
    let spins = build_spin_sequence(angles, r)?;
    let lat = lattice_angles(&spins, r)?;
    let geo = volume(&lat)?;
    if geo.det_g >= 0.0 {
        return Err(Error::NotHyperbolic(format!("det G = {}", geo.det_g)));
    }
    let fpp = potential_f(&lat, geo.stationary.zeta0)?.fpp.norm();
    let level = Level::new(r as i64)?;
    let params = ContinuousSummandParams::new(&level, spins)?;
    let (lo, hi) = params.range();
    let bump = BumpSpec::default();

    let lattice: Vec<Complex64> = (lo as i64..=hi as i64)
        .into_par_iter()
        .map(|z| params.log_at(z as f64))
        .collect::<Result<_>>()?;
    let anchor = lattice.iter().map(|l| l.re).fold(f64::MIN, f64::max);
    let lattice_sum = lattice.iter().map(|l| (l - anchor).exp().re).sum::<f64>();

    let lift = r as f64 / 2.0 * PI / fpp;
    let h = 0.5;
    let coeff = |m: i64| -> Result<Piece> {
        let mf = m as f64;
        let ramp = |z: Complex64| -> Result<Option<Complex64>> {
            let psi = bump.psi(z.re, lo, hi);
            if psi == 0.0 {
                return Ok(None);
            }
            Ok(Some(
                params.log_at(z.re)? + psi.ln() + 2.0 * PI * I * mf * z,
            ))
        };
        let plateau = |z: Complex64| -> Result<Option<Complex64>> {
            Ok(Some(params.log_at_complex(z)? + 2.0 * PI * I * mf * z))
        };
        let c = |x: f64, y: f64| Complex64::new(x, y);
        let y = lift * mf;
        let mut pieces = vec![
            segment(c(lo - bump.width, 0.0), c(lo, 0.0), h / 4.0, anchor, &ramp)?,
            segment(c(hi, 0.0), c(hi + bump.width, 0.0), h / 4.0, anchor, &ramp)?,
        ];
        if m == 0 {
            pieces.push(segment(c(lo, 0.0), c(hi, 0.0), h, anchor, &plateau)?);
        } else {
            pieces.push(segment(c(lo, 0.0), c(lo, y), h, anchor, &plateau)?);
            pieces.push(segment(c(lo, y), c(hi, y), h, anchor, &plateau)?);
            pieces.push(segment(c(hi, y), c(hi, 0.0), h, anchor, &plateau)?);
        }
        Ok(Piece {
            value: pieces.iter().map(|p| p.value).sum(),
            err: pieces.iter().map(|p| p.err).sum(),
        })
    };
    let pieces: Vec<Piece> = m_range.iter().map(|&m| coeff(m)).collect::<Result<_>>()?;
    Ok(PoissonSpectrum {
        r,
        range: (lo, hi),
        anchor,
        m: m_range.to_vec(),
        coeffs: pieces.iter().map(|p| p.value).collect(),
        errs: pieces.iter().map(|p| p.err).collect(),
        lattice_sum,
        lift,
    })
}

/// |(2/r) f̂(0)| against |∫ḡ_r| at the lattice η of the same spins, as a
/// relative difference.
pub fn lattice_gbar_mismatch(angles: &AngleSet, spectrum: &PoissonSpectrum) -> Result<f64> {
    let r = spectrum.r;
    let spins = build_spin_sequence(angles, r)?;
    let geo = volume(&lattice_angles(&spins, r)?)?;
    let gi = gbar_integral(&Continuum::from_spins(r, &spins), geo.stationary.zeta0)?;
    let f0 = spectrum
        .coeff(0)
        .ok_or_else(|| Error::Domain("f̂(0) not computed".into()))?;
    let lhs = (2.0 / r as f64).ln() + spectrum.anchor + f0.norm().ln();
    Ok((lhs - gi.log_abs()).exp_m1().abs())
}

/// ∫ ḡ_r dζ over its support, in units of e^{anchor}, with the anchor at ζ₀.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GbarIntegral {
    pub anchor: f64,
    pub value: Complex64,
    pub err: f64,
}

impl GbarIntegral {
    pub fn log_abs(&self) -> f64 {
        self.anchor + self.value.norm().ln()
    }
}

pub fn gbar_integral(cont: &Continuum, zeta0: f64) -> Result<GbarIntegral> {
    let bump = BumpSpec::default();
    let r = cont.r as f64;
    let (zl, zh) = cont.zeta_support(&bump);
    let (pl, ph) = cont.z_plateau();
    let (pl, ph) = ((2.0 * pl + 3.0) / r, (2.0 * ph + 3.0) / r);
    let g = |z: Complex64| gbar_log(cont, z.re, &bump);
    let anchor = gbar_log(cont, zeta0, &bump)?
        .ok_or_else(|| Error::Domain("ζ₀ outside the cutoff".into()))?
        .re;
    let h = 1.0 / r;
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (a, b) in [(zl, pl), (pl, ph), (ph, zh)] {
        let p = segment(c(a), c(b), h, anchor, &g)?;
        value += p.value;
        err += p.err;
    }
    Ok(GbarIntegral { anchor, value, err })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GbarCheck {
    /// |∫ḡ_r| over the stationary-phase closed form.
    pub ratio: f64,
    pub log_integral: f64,
    pub log_closed_form: f64,
    /// log of |r sin(2π/r) Π Δ̃ ∫ḡ_r|.
    pub log_recont: f64,
    pub quad_err: f64,
}

/// Quadrature of ḡ_r at the exact angles against
/// (16/r³)|u₀/Π√(1 − u₀/A_j)| √(2π/(r|F″|)) e^{r Re F(ζ₀)}.
pub fn integrate_gbar(angles: &AngleSet, r: u32) -> Result<GbarCheck> {
    let geo = volume(angles)?;
    if geo.det_g >= 0.0 {
        return Err(Error::NotHyperbolic(format!("det G = {}", geo.det_g)));
    }
    let st = geo.stationary;
    let rf = r as f64;
    let cont = Continuum::new(r, angles.eta());
    let gi = gbar_integral(&cont, st.zeta0)?;

    let u0 = st.u0;
    let mut den = Complex64::new(1.0, 0.0);
    for s in angles.sigma() {
        den *= (1.0 - u0 / Complex64::from_polar(1.0, 2.0 * PI * s)).sqrt();
    }
    let fv = potential_f(angles, st.zeta0)?;
    let log_cf = (16.0 / rf.powi(3)).ln()
        + (u0 / den).norm().ln()
        + 0.5 * (2.0 * PI / (rf * fv.fpp.norm())).ln()
        + rf * fv.f.re;

    let level = Level::new(r as i64)?;
    let eta = angles.eta();
    let spin = |i: usize| (rf * eta[i] - 1.0) / 2.0;
    let mut log_recont = (rf * (2.0 * PI / rf).sin()).ln() + gi.log_abs();
    for v in crate::geometry::VERTICES {
        log_recont += delta_tilde_log(&level, spin(v[0]), spin(v[1]), spin(v[2]))?.re;
    }
    Ok(GbarCheck {
        ratio: (gi.log_abs() - log_cf).exp(),
        log_integral: gi.log_abs(),
        log_closed_form: log_cf,
        log_recont,
        quad_err: gi.err / gi.value.norm(),
    })
}
