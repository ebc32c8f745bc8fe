//! Convergence tables of |6j| against the volume and the predictor.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spins::{build_spin_sequence, lattice_angles};
use crate::error::{Error, Result};
use crate::geometry::{predictor_from, volume, AngleSet, PredictorConstant};
use crate::logsigned::Precision;
use crate::qarith::Level;
use crate::sixj::{sixj_rw, SpinSextuple};

/// One row of a convergence table. Volume, det G, ζ₀ and the predictor are
/// taken at the lattice angles of the spins actually used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub r: u32,
    pub spins: SpinSextuple,
    pub logmag_6j: f64,
    pub two_pi_log_over_r: f64,
    pub vol_target: f64,
    pub gap: f64,
    pub det_g: f64,
    pub zeta0: f64,
    pub predictor_logmag: f64,
    pub ratio: f64,
}

pub fn report_row(
    angles: &AngleSet,
    r: u32,
    precision: Precision,
    k: PredictorConstant,
) -> Result<AsymptoticReport> {
    let spins = build_spin_sequence(angles, r)?;
    let level = Level::with_precision(r as i64, precision)?;
    let v = sixj_rw(&level, &spins)?;
    if v.is_zero {
        return Err(Error::Domain(format!("6j vanishes at r = {r}")));
    }
    let geo = volume(&lattice_angles(&spins, r)?)?;
    let pred = predictor_from(&geo, r, k)?;
    let two_pi_log = 2.0 * std::f64::consts::PI * v.logmag / r as f64;
    Ok(AsymptoticReport {
        r,
        spins,
        logmag_6j: v.logmag,
        two_pi_log_over_r: two_pi_log,
        vol_target: geo.vol,
        gap: (two_pi_log - geo.vol).abs(),
        det_g: geo.det_g,
        zeta0: geo.stationary.zeta0,
        predictor_logmag: pred,
        ratio: (v.logmag - pred).exp(),
    })
}

/// Rows in the order of `r_list`, computed in parallel.
pub fn convergence_table(
    angles: &AngleSet,
    r_list: &[u32],
    precision: Precision,
) -> Result<Vec<AsymptoticReport>> {
    if r_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("r list must be strictly increasing".into()));
    }
    volume(angles)?;
    r_list
        .par_iter()
        .map(|&r| report_row(angles, r, precision, PredictorConstant::Sqrt2Pi))
        .collect()
}

/// g_r·r/ln r for each row.
pub fn scaled_gaps(rows: &[AsymptoticReport]) -> Vec<f64> {
    rows.iter()
        .map(|x| x.gap * x.r as f64 / (x.r as f64).ln())
        .collect()
}

/// Largest relative deviation of the values from their mean.
pub fn spread_about_mean(v: &[f64]) -> f64 {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x / mean - 1.0).abs()).fold(0.0, f64::max)
}

#[allow(clippy::needless_range_loop)]
fn solve3(m: [[f64; 3]; 3], y: [f64; 3]) -> [f64; 3] {
    let mut a = [[0.0; 4]; 3];
    for i in 0..3 {
        a[i][..3].copy_from_slice(&m[i]);
        a[i][3] = y[i];
    }
    for c in 0..3 {
        let p = (c..3)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        a.swap(c, p);
        for i in 0..3 {
            if i != c {
                let f = a[i][c] / a[c][c];
                for k in c..4 {
                    a[i][k] -= f * a[c][k];
                }
            }
        }
    }
    [a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]]
}

/// Exact fit y = c₀ + c₁/r + c₂/r² through three points.
pub fn richardson3(r: [f64; 3], y: [f64; 3]) -> [f64; 3] {
    solve3(r.map(|x| [1.0, 1.0 / x, 1.0 / (x * x)]), y)
}

/// {r0, 2r0−1, 4r0−3}.
pub fn ladder(r0: u32) -> [u32; 3] {
    [r0, 2 * r0 - 1, 4 * r0 - 3]
}

/// Which overall constant the ratio data supports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantFit {
    /// Extrapolated |6j|/predictor with the √2π constant.
    pub limit: f64,
    /// Difference from the next ladder.
    pub err: f64,
    pub supported: PredictorConstant,
}

pub fn fit_constant(angles: &AngleSet, r0: u32, precision: Precision) -> Result<ConstantFit> {
    let rs = [r0, 2 * r0 - 1, 4 * r0 - 3, 8 * r0 - 7];
    let rows: Vec<AsymptoticReport> = rs
        .par_iter()
        .map(|&r| report_row(angles, r, precision, PredictorConstant::Sqrt2Pi))
        .collect::<Result<_>>()?;
    let fit = |i: usize| {
        richardson3(
            [rows[i].r, rows[i + 1].r, rows[i + 2].r].map(|x| x as f64),
            [rows[i].ratio, rows[i + 1].ratio, rows[i + 2].ratio],
        )[0]
    };
    let (coarse, fine) = (fit(0), fit(1));
    // with √2 instead of √2π every ratio is π times larger
    let supported = if (fine - 1.0).abs() <= (fine * std::f64::consts::PI - 1.0).abs() {
        PredictorConstant::Sqrt2Pi
    } else {
        PredictorConstant::Sqrt2
    };
    Ok(ConstantFit {
        limit: fine,
        err: (fine - coarse).abs(),
        supported,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_recovers_polynomial() {
        let f = |r: f64| 2.0 - 3.0 / r + 5.0 / (r * r);
        let c = richardson3([11.0, 21.0, 41.0], [f(11.0), f(21.0), f(41.0)]);
        assert!(
            (c[0] - 2.0).abs() < 1e-12 && (c[1] + 3.0).abs() < 1e-10 && (c[2] - 5.0).abs() < 1e-8
        );
    }

    #[test]
    fn empty_list_gives_empty_table() {
        assert!(
            convergence_table(&AngleSet::regular(0.7).unwrap(), &[], Precision::Double)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn ratio_near_one_at_large_r() {
        let rows = convergence_table(
            &AngleSet::regular(std::f64::consts::FRAC_PI_4).unwrap(),
            &[1001],
            Precision::Double,
        )
        .unwrap();
        assert!((0.9..=1.1).contains(&rows[0].ratio), "{}", rows[0].ratio);
    }
}
