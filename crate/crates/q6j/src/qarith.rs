//! Quantum integers and factorials at q = exp(4πi/r).

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logsigned::{Accumulator, LogSigned, Precision};

/// sin(πp/r) for integer p, reduced so the argument never exceeds π/2.
pub(crate) fn sin_pi_frac(p: i64, r: i64) -> f64 {
    let two_r = 2 * r;
    let mut m = p.rem_euclid(two_r);
    let mut sign = 1.0;
    if m >= r {
        m -= r;
        sign = -1.0;
    }
    if 2 * m > r {
        m = r - m;
    }
    sign * (PI * m as f64 / r as f64).sin()
}

#[derive(Debug)]
struct Tables {
    log_qint: Vec<f64>,
    log_fact: Vec<f64>,
    sign_fact: Vec<i8>,
}

/// An odd level r >= 3 together with its quantum factorial prefix table.
#[derive(Clone, Debug)]
pub struct Level {
    r: u32,
    precision: Precision,
    tables: Arc<Tables>,
}

impl PartialEq for Level {
    fn eq(&self, o: &Self) -> bool {
        self.r == o.r && self.precision == o.precision
    }
}

impl Level {
    pub fn new(r: i64) -> Result<Self> {
        Self::with_precision(r, Precision::Double)
    }

    pub fn with_precision(r: i64, precision: Precision) -> Result<Self> {
        if r < 3 || r % 2 == 0 || r > u32::MAX as i64 / 4 {
            return Err(Error::BadLevel(r));
        }
        let n = 2 * r as usize;
        let s1 = sin_pi_frac(2, r);
        let log_s1 = s1.ln();
        let mut log_qint = vec![f64::NEG_INFINITY; n + 1];
        let mut log_fact = vec![0.0; n + 1];
        let mut sign_fact = vec![1i8; n + 1];
        let mut acc = Accumulator::new(precision);
        let mut sign = 1i8;
        for j in 1..=n {
            let s = sin_pi_frac(2 * j as i64, r);
            if j as i64 % r == 0 {
                sign = 0;
            } else {
                log_qint[j] = s.abs().ln() - log_s1;
                acc.push(log_qint[j]);
                if s < 0.0 {
                    sign = -sign;
                }
            }
            sign_fact[j] = sign;
            log_fact[j] = if sign == 0 {
                f64::NEG_INFINITY
            } else {
                acc.value()
            };
        }
        Ok(Level {
            r: r as u32,
            precision,
            tables: Arc::new(Tables {
                log_qint,
                log_fact,
                sign_fact,
            }),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// [n] = sin(2πn/r)/sin(2π/r).
    pub fn qint(&self, n: i64) -> f64 {
        let r = self.r as i64;
        sin_pi_frac(2 * n, r) / sin_pi_frac(2, r)
    }

    /// [n]! for 0 <= n <= 2r.
    pub fn qfact(&self, n: i64) -> Result<LogSigned> {
        if n < 0 {
            return Err(Error::Domain(format!(
                "quantum factorial of negative argument {n}"
            )));
        }
        let n = n as usize;
        if n >= self.tables.log_fact.len() {
            return Err(Error::Domain(format!(
                "quantum factorial argument {n} exceeds 2r"
            )));
        }
        Ok(LogSigned::new(
            self.tables.sign_fact[n],
            self.tables.log_fact[n],
        ))
    }

    /// ln|[n]| for 1 <= n <= 2r, -inf when r divides n.
    pub fn log_qint(&self, n: usize) -> f64 {
        self.tables.log_qint[n]
    }
}

/// A half-integer spin stored as twice its value.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct Spin {
    pub twice: u32,
}

impl Spin {
    pub const fn from_twice(twice: u32) -> Self {
        Spin { twice }
    }

    /// Accepts only exact multiples of 1/2.
    pub fn from_f64(x: f64) -> Result<Self> {
        let t = 2.0 * x;
        if t.is_nan() || t < 0.0 || t.fract() != 0.0 || t > u32::MAX as f64 {
            return Err(Error::Domain(format!(
                "{x} is not a non-negative half integer"
            )));
        }
        Ok(Spin { twice: t as u32 })
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

/// Spins in {0, ..., (r-2)/2}, Clebsch–Gordan, and a+b+c <= r-2.
pub fn is_r_admissible(level: &Level, a: Spin, b: Spin, c: Spin) -> bool {
    let (a, b, c) = (a.twice as i64, b.twice as i64, c.twice as i64);
    let cap = level.r as i64 - 2;
    if a > cap || b > cap || c > cap {
        return false;
    }
    let sum = a + b + c;
    (a - b).abs() <= c && c <= a + b && sum % 2 == 0 && sum / 2 <= cap
}
