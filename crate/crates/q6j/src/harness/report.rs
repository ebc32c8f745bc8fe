//! CSV, JSON and SVG output.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::c1::C1Estimate;
use super::converge::{AsymptoticReport, ConstantFit};
use super::poisson::PoissonSpectrum;
use crate::error::{Error, Result};
use crate::geometry::{AngleSet, VolumeData};

pub const CSV_HEADER: [&str; 7] = [
    "r",
    "logmag_6j",
    "two_pi_log_over_r",
    "vol_target",
    "gap",
    "predictor_logmag",
    "ratio",
];

/// 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// One parsed line of a convergence table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub r: u32,
    pub logmag_6j: f64,
    pub two_pi_log_over_r: f64,
    pub vol_target: f64,
    pub gap: f64,
    pub predictor_logmag: f64,
    pub ratio: f64,
}

impl From<&AsymptoticReport> for ConvergenceRow {
    fn from(x: &AsymptoticReport) -> Self {
        ConvergenceRow {
            r: x.r,
            logmag_6j: x.logmag_6j,
            two_pi_log_over_r: x.two_pi_log_over_r,
            vol_target: x.vol_target,
            gap: x.gap,
            predictor_logmag: x.predictor_logmag,
            ratio: x.ratio,
        }
    }
}

pub fn convergence_csv(rows: &[AsymptoticReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for x in rows {
        let c = ConvergenceRow::from(x);
        w.write_record([
            c.r.to_string(),
            num(c.logmag_6j),
            num(c.two_pi_log_over_r),
            num(c.vol_target),
            num(c.gap),
            num(c.predictor_logmag),
            num(c.ratio),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn poisson_csv(p: &PoissonSpectrum) -> String {
    let mut s = String::from("m,re,im,abs_over_f0,quad_err\n");
    let f0 = p.coeff(0).map(|c| c.norm());
    for (i, m) in p.m.iter().enumerate() {
        let c = p.coeffs[i];
        let rel = f0.map_or(f64::NAN, |f| c.norm() / f);
        let _ = writeln!(
            s,
            "{m},{},{},{},{}",
            num(c.re),
            num(c.im),
            num(rel),
            num(p.errs[i])
        );
    }
    s
}

/// The C₁ report. Field order is the serialized key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C1Report {
    pub angles: [f64; 6],
    pub det_g: f64,
    pub vol: f64,
    pub zeta0: f64,
    pub constant_fit: ConstantFit,
    pub c1_re: f64,
    pub c1_im: f64,
    pub c1_err: f64,
    pub r_ladder: Vec<u32>,
    pub c1_re_raw: f64,
    pub c1_re_offset: f64,
}

impl C1Report {
    pub fn new(
        angles: &AngleSet,
        geo: &VolumeData,
        constant_fit: ConstantFit,
        c1: &C1Estimate,
    ) -> Self {
        C1Report {
            angles: angles.theta,
            det_g: geo.det_g,
            vol: geo.vol,
            zeta0: geo.stationary.zeta0,
            constant_fit,
            c1_re: c1.re,
            c1_im: c1.im,
            c1_err: c1.err,
            r_ladder: c1.r_ladder.clone(),
            c1_re_raw: c1.re_raw,
            c1_re_offset: c1.re_offset,
        }
    }

    pub fn to_json(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ");
        let cf = &self.constant_fit;
        let supported = serde_json::to_string(&cf.supported).unwrap_or_default();
        let ladder = self
            .r_ladder
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        format!(
            "{{\n  \"angles\": [{}],\n  \"det_g\": {},\n  \"vol\": {},\n  \"zeta0\": {},\n  \"constant_fit\": {{\"limit\": {}, \"err\": {}, \"supported\": {}}},\n  \"c1_re\": {},\n  \"c1_im\": {},\n  \"c1_err\": {},\n  \"r_ladder\": [{}],\n  \"c1_re_raw\": {},\n  \"c1_re_offset\": {}\n}}\n",
            list(&self.angles),
            num(self.det_g),
            num(self.vol),
            num(self.zeta0),
            num(cf.limit),
            num(cf.err),
            supported,
            num(self.c1_re),
            num(self.c1_im),
            num(self.c1_err),
            ladder,
            num(self.c1_re_raw),
            num(self.c1_re_offset),
        )
    }
}

/// A line plot with one or more series.
pub struct Plot<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Plot<'_> {
    pub fn to_svg(&self) -> String {
        let (w, h, pad) = (640.0, 420.0, 60.0);
        let pts = self
            .series
            .iter()
            .flat_map(|s| s.1.iter())
            .filter(|p| p.0.is_finite() && p.1.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 == x0 {
            x1 = x0 + 1.0;
        }
        if y1 == y0 {
            y1 = y0 + 1.0;
        }
        let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
        let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
            w / 2.0,
            esc(self.title)
        );
        let _ = writeln!(
            s,
            r#"<path d="M{pad},{pad} L{pad},{} L{},{}" fill="none" stroke="black"/>"#,
            h - pad,
            w - pad,
            h - pad
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
            w / 2.0,
            h - 15.0,
            esc(self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 15 {})">{}</text>"#,
            h / 2.0,
            h / 2.0,
            esc(self.y_label)
        );
        for (v, anchor, x, y) in [
            (x0, "start", pad, h - pad + 16.0),
            (x1, "end", w - pad, h - pad + 16.0),
        ] {
            let _ = writeln!(
                s,
                r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-size="10">{v:.4}</text>"#
            );
        }
        for (v, y) in [(y0, h - pad), (y1, pad)] {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{y}" text-anchor="end" font-size="10">{v:.4}</text>"#,
                pad - 4.0
            );
        }
        for (i, (label, data)) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let path: Vec<String> = data
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path.join(" ")
            );
            for p in &path {
                let (x, y) = p.split_once(',').unwrap_or(("0", "0"));
                let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{color}"/>"#);
            }
            let ly = pad + 16.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{ly}" font-size="11" fill="{color}">{}</text>"#,
                w - pad - 120.0,
                esc(label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PredictorConstant;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-16.0), "-1.6000000000000000e1");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn json_key_order_and_roundtrip() {
        let r = C1Report {
            angles: [0.5; 6],
            det_g: -3.0,
            vol: 1.25,
            zeta0: 1.4,
            constant_fit: ConstantFit {
                limit: 1.0,
                err: 1e-4,
                supported: PredictorConstant::Sqrt2Pi,
            },
            c1_re: -1.0,
            c1_im: -0.27,
            c1_err: 1e-5,
            r_ladder: vec![201, 401, 801, 1601],
            c1_re_raw: -0.25,
            c1_re_offset: -0.75,
        };
        let j = r.to_json();
        let keys = [
            "angles",
            "det_g",
            "vol",
            "zeta0",
            "constant_fit",
            "c1_re",
            "c1_im",
            "c1_err",
            "r_ladder",
        ];
        let pos: Vec<usize> = keys
            .iter()
            .map(|k| j.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        let back: C1Report = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let p = Plot {
            title: "gap <r>",
            x_label: "r",
            y_label: "gap",
            series: vec![("a".into(), vec![(1.0, 2.0), (2.0, 1.0)])],
        };
        let s = p.to_svg();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("gap &lt;r&gt;"));
    }
}
