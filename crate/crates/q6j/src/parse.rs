//! Parsers for command-line lists, convergence CSV rows and JSON reports.
//! None of them panic on any input.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::AngleSet;
use crate::harness::{C1Report, ConvergenceRow, CSV_HEADER};
use crate::qarith::Spin;
use crate::sixj::SpinSextuple;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn split(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).collect()
}

/// A spin: integer, half-integer as "n/2", or decimal ending in .0 or .5.
pub fn parse_spin(s: &str) -> Result<Spin> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: u32 = n
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad spin {s:?}")))?;
        return match d.trim() {
            "2" => Ok(Spin::from_twice(n)),
            "1" => n
                .checked_mul(2)
                .map(Spin::from_twice)
                .ok_or_else(|| bad("spin too large")),
            _ => Err(bad(format!("bad spin denominator in {s:?}"))),
        };
    }
    let x: f64 = s.parse().map_err(|_| bad(format!("bad spin {s:?}")))?;
    if !(0.0..=1e9).contains(&x) {
        return Err(bad(format!("spin out of range: {s:?}")));
    }
    Spin::from_f64(x).map_err(|_| bad(format!("spin must be a multiple of 1/2: {s:?}")))
}

/// Six spins in the symbol's layout a,b,e,d,c,f.
pub fn parse_spins(s: &str) -> Result<SpinSextuple> {
    let parts = split(s);
    if parts.len() != 6 {
        return Err(bad(format!("expected 6 spins, got {}", parts.len())));
    }
    let v: Vec<Spin> = parts.iter().map(|p| parse_spin(p)).collect::<Result<_>>()?;
    Ok(SpinSextuple {
        a: v[0],
        b: v[1],
        e: v[2],
        d: v[3],
        c: v[4],
        f: v[5],
    })
}

/// An angle in radians: "0.7", "pi", "-pi/3", "0.08pi", "0.08*pi", "2pi/5".
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase().replace('π', "pi");
    let err = || bad(format!("bad angle {s:?}"));
    let num = |x: &str| -> Result<f64> {
        let x = x.trim().trim_end_matches('*').trim();
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| err()),
        }
    };
    let v = if let Some((head, tail)) = t.split_once("pi") {
        let k = num(head)?;
        let tail = tail.trim();
        let div = match tail.strip_prefix('/') {
            Some(d) => d.trim().parse::<f64>().map_err(|_| err())?,
            None if tail.is_empty() => 1.0,
            None => return Err(err()),
        };
        k * PI / div
    } else {
        t.parse::<f64>().map_err(|_| err())?
    };
    if !v.is_finite() {
        return Err(err());
    }
    Ok(v)
}

/// Six dihedral angles θ_a..θ_f, or one value for the regular tetrahedron.
pub fn parse_angles(s: &str) -> Result<AngleSet> {
    let v: Vec<f64> = split(s)
        .iter()
        .map(|p| parse_angle(p))
        .collect::<Result<_>>()?;
    let theta = match v.len() {
        1 => [v[0]; 6],
        6 => [v[0], v[1], v[2], v[3], v[4], v[5]],
        n => return Err(bad(format!("expected 1 or 6 angles, got {n}"))),
    };
    AngleSet::new(theta).map_err(|e| bad(e.to_string()))
}

/// One data line of the convergence CSV.
pub fn parse_csv_row(line: &str) -> Result<ConvergenceRow> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(line.as_bytes());
    let rec = rdr
        .records()
        .next()
        .ok_or_else(|| bad("empty row"))?
        .map_err(|e| bad(e.to_string()))?;
    if rec.len() != CSV_HEADER.len() {
        return Err(bad(format!(
            "expected {} fields, got {}",
            CSV_HEADER.len(),
            rec.len()
        )));
    }
    let f = |i: usize| -> Result<f64> {
        rec[i]
            .trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("bad {} value {:?}", CSV_HEADER[i], &rec[i])))
    };
    Ok(ConvergenceRow {
        r: rec[0]
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad r {:?}", &rec[0])))?,
        logmag_6j: f(1)?,
        two_pi_log_over_r: f(2)?,
        vol_target: f(3)?,
        gap: f(4)?,
        predictor_logmag: f(5)?,
        ratio: f(6)?,
    })
}

/// A whole convergence CSV, header included.
pub fn parse_convergence_csv(text: &str) -> Result<Vec<ConvergenceRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("missing header"))?;
    if split(header) != CSV_HEADER {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    lines.map(parse_csv_row).collect()
}

pub fn decode_report(json: &str) -> Result<C1Report> {
    serde_json::from_str(json).map_err(|e| bad(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spins_in_symbol_order() {
        let s = parse_spins("1, 1/2, 3/2, 2, 0.5, 1.0").unwrap();
        assert_eq!(s.twice(), [2, 1, 1, 4, 3, 2]);
        assert!(parse_spins("1,2,3").is_err());
        assert!(parse_spins("1,2,3,4,5,0.3").is_err());
        assert!(parse_spins("1,2,3,4,5,-1").is_err());
        assert!(parse_spins("1,2,3,4,5,7/3").is_err());
    }

    #[test]
    fn angle_forms() {
        for (s, v) in [
            ("pi/3", PI / 3.0),
            ("-0.3pi", -0.3 * PI),
            ("0.08*pi", 0.08 * PI),
            ("0.7", 0.7),
            ("2pi/5", 0.4 * PI),
            ("-pi/4", -PI / 4.0),
        ] {
            assert!((parse_angle(s).unwrap() - v).abs() < 1e-15, "{s}");
        }
        assert!(parse_angle("pix").is_err());
        assert!(parse_angle("nan").is_err());
        assert_eq!(parse_angles("pi/4").unwrap().theta, [PI / 4.0; 6]);
        assert!(parse_angles("1,2").is_err());
        assert!(parse_angles("4").is_err());
    }

    #[test]
    fn csv_row() {
        let r = parse_csv_row("101,2.5,0.1,1.0,0.2,2.4,1.05").unwrap();
        assert_eq!(r.r, 101);
        assert_eq!(r.ratio, 1.05);
        assert!(parse_csv_row("101,2.5").is_err());
        assert!(parse_csv_row("").is_err());
        assert!(parse_csv_row("x,1,1,1,1,1,1").is_err());
    }
}
