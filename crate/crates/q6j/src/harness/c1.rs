//! The 1/r coefficient C₁ of 6j/(A e^{rB/2π}).
//!
//! Writing the ratio as 1 + 2πiC₁/r + O(1/r²), the modulus gives Im C₁ and
//! the phase gives Re C₁. The modulus comes from exact 6j evaluations along
//! the spin sequence. The phase comes from the continuum: the argument of
//! the Δ̃ product times ḡ_r at ζ₀, minus r·Im B/2π, is a polynomial in r and
//! 1/r whose 1/r coefficient is 2π Re C₁.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::converge::{report_row, richardson3};
use crate::error::{Error, Result};
use crate::geometry::{volume, AngleSet, PredictorConstant, VERTICES};
use crate::logsigned::Precision;
use crate::qdilog::im_closed_form;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C1Estimate {
    pub re: f64,
    pub im: f64,
    /// Spread between the two ladders, max over both parts.
    pub err: f64,
    pub re_raw: f64,
    pub re_offset: f64,
    pub r_ladder: Vec<u32>,
}

/// Phase of the continuum integrand at ζ₀ minus r·Im B/2π, as an unreduced real.
pub fn phase_residual(angles: &AngleSet, r: u32) -> Result<f64> {
    let geo = volume(angles)?;
    let z = geo.stationary.zeta0;
    let rf = r as f64;
    let im = |t: f64| im_closed_form(r, t);
    let eta = angles.eta();
    let (sig, tau) = (angles.sigma(), angles.tau());
    let esum: f64 = eta.iter().sum();
    let mut g = PI * rf * z / 2.0 - 6.0 * im(1.0 / rf) - im(z - 1.0)
        + 2.0 * PI * rf * (0.75 * z * z - esum * z + z / rf);
    g += sig.iter().map(|s| im(z - s + 1.0 / rf)).sum::<f64>();
    g += tau.iter().map(|t| im(t - z)).sum::<f64>();
    for v in VERTICES {
        let [x, y, w] = v.map(|i| eta[i]);
        g += 0.5
            * (2.0 * im(1.0 / rf) + im(x + y + w - 1.0)
                - im(x + y - w)
                - im(y + w - x)
                - im(w + x - y));
    }
    Ok(g - rf * geo.b().im / (2.0 * PI))
}

/// Uncalibrated Re C₁ from the ladders {r0, 2r0−1, 4r0−3} and the next one.
pub fn re_c1_raw(angles: &AngleSet, r0: u32) -> Result<(f64, f64)> {
    let rs = [r0, 2 * r0 - 1, 4 * r0 - 3, 8 * r0 - 7];
    let p: Vec<f64> = rs
        .iter()
        .map(|&r| phase_residual(angles, r).map(|x| x / r as f64))
        .collect::<Result<_>>()?;
    let fit = |i: usize| {
        richardson3(
            [rs[i], rs[i + 1], rs[i + 2]].map(|x| x as f64),
            [p[i], p[i + 1], p[i + 2]],
        )[2] / (2.0 * PI)
    };
    let (coarse, fine) = (fit(0), fit(1));
    Ok((fine, (fine - coarse).abs()))
}

/// Offset that maps the raw θ = 0 value onto Re C₁ = −1.
pub fn re_c1_offset(r0: u32) -> Result<f64> {
    Ok(-1.0 - re_c1_raw(&AngleSet::regular(0.0)?, r0)?.0)
}

/// Im C₁ = −c/2π where |6j|/predictor = K(1 + c/r + c₂/r²).
pub fn im_c1(angles: &AngleSet, r0: u32, precision: Precision) -> Result<(f64, f64)> {
    let rs = [r0, 2 * r0 - 1, 4 * r0 - 3, 8 * r0 - 7];
    let ratios: Vec<f64> = rs
        .par_iter()
        .map(|&r| report_row(angles, r, precision, PredictorConstant::Sqrt2Pi).map(|x| x.ratio))
        .collect::<Result<_>>()?;
    let fit = |i: usize| {
        let c = richardson3(
            [rs[i], rs[i + 1], rs[i + 2]].map(|x| x as f64),
            [ratios[i], ratios[i + 1], ratios[i + 2]],
        );
        -c[1] / c[0] / (2.0 * PI)
    };
    let (coarse, fine) = (fit(0), fit(1));
    Ok((fine, (fine - coarse).abs()))
}

/// C₁ with a ladder-spread error bar; `tol` turns a large spread into an error.
pub fn extract_c1(
    angles: &AngleSet,
    r0: u32,
    precision: Precision,
    tol: Option<f64>,
) -> Result<C1Estimate> {
    if r0 < 3 || r0.is_multiple_of(2) {
        return Err(Error::BadLevel(r0 as i64));
    }
    let (im, err_im) = im_c1(angles, r0, precision)?;
    let (re_raw, err_re) = re_c1_raw(angles, r0)?;
    let re_offset = re_c1_offset(r0)?;
    let err = err_im.max(err_re);
    if let Some(tol) = tol {
        if err > tol {
            return Err(Error::NoConvergence { spread: err, tol });
        }
    }
    Ok(C1Estimate {
        re: re_raw + re_offset,
        im,
        err,
        re_raw,
        re_offset,
        r_ladder: vec![r0, 2 * r0 - 1, 4 * r0 - 3, 8 * r0 - 7],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_residual_closed_form_at_zero() {
        let a = AngleSet::regular(0.0).unwrap();
        for r in [101u32, 201, 401] {
            let rf = r as f64;
            let want = PI * rf / 12.0 + 3.5 * PI - PI / (2.0 * rf);
            assert!(
                (phase_residual(&a, r).unwrap() - want).abs() < 1e-9,
                "r={r}"
            );
        }
        let (raw, err) = re_c1_raw(&a, 101).unwrap();
        assert!((raw + 0.25).abs() < 1e-6 && err < 1e-6);
    }
}
