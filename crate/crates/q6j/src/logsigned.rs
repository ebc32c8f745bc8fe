//! Signed numbers carried as (sign, ln|x|), plus the small amount of
//! double-double arithmetic needed for compensated accumulation.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Summation precision for prefix tables and log-sum-exp reductions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Precision {
    #[default]
    Double,
    DoubleDouble,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogSigned {
    pub sign: i8,
    pub logmag: f64,
}

impl LogSigned {
    pub const ZERO: LogSigned = LogSigned {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };
    pub const ONE: LogSigned = LogSigned {
        sign: 1,
        logmag: 0.0,
    };

    pub fn new(sign: i8, logmag: f64) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            LogSigned {
                sign: sign.signum(),
                logmag,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        match x.partial_cmp(&0.0) {
            Some(Ordering::Greater) => LogSigned {
                sign: 1,
                logmag: x.ln(),
            },
            Some(Ordering::Less) => LogSigned {
                sign: -1,
                logmag: (-x).ln(),
            },
            _ => Self::ZERO,
        }
    }

    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.logmag.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        if self.sign == 0 {
            self
        } else {
            LogSigned {
                sign: 1,
                logmag: self.logmag,
            }
        }
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero");
        LogSigned {
            sign: self.sign,
            logmag: -self.logmag,
        }
    }
}

/// Signed sum of two values.
impl Add for LogSigned {
    type Output = LogSigned;
    fn add(self, other: LogSigned) -> LogSigned {
        sum_signed([self, other], Precision::Double)
    }
}

impl Mul for LogSigned {
    type Output = LogSigned;
    fn mul(self, rhs: LogSigned) -> LogSigned {
        if self.sign == 0 || rhs.sign == 0 {
            return LogSigned::ZERO;
        }
        LogSigned {
            sign: self.sign * rhs.sign,
            logmag: self.logmag + rhs.logmag,
        }
    }
}

impl Div for LogSigned {
    type Output = LogSigned;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: LogSigned) -> LogSigned {
        self * rhs.recip()
    }
}

impl Neg for LogSigned {
    type Output = LogSigned;
    fn neg(self) -> LogSigned {
        LogSigned {
            sign: -self.sign,
            logmag: self.logmag,
        }
    }
}

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = two_sum(s, e + self.lo);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        let (hi, lo) = two_sum(p, e + self.lo * x);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (hi, lo) = two_sum(s, e + self.lo + o.lo);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + Dd {
            hi: -o.hi,
            lo: -o.lo,
        }
    }
}

/// Running sum with Neumaier compensation, or a full double-double accumulator.
#[derive(Clone, Copy, Debug)]
pub struct Accumulator {
    precision: Precision,
    sum: Dd,
}

impl Accumulator {
    pub fn new(precision: Precision) -> Self {
        Accumulator {
            precision,
            sum: Dd::default(),
        }
    }

    pub fn push(&mut self, x: f64) {
        match self.precision {
            Precision::Double => {
                // Neumaier: keep the rounding error of each step in lo.
                let (s, e) = two_sum(self.sum.hi, x);
                self.sum.hi = s;
                self.sum.lo += e;
            }
            Precision::DoubleDouble => self.sum = self.sum.add_f64(x),
        }
    }

    pub fn value(&self) -> f64 {
        self.sum.to_f64()
    }

    pub fn value_dd(&self) -> Dd {
        let (hi, lo) = two_sum(self.sum.hi, self.sum.lo);
        Dd { hi, lo }
    }
}

/// Signed log-sum-exp anchored at the largest magnitude. Positive and negative
/// parts are accumulated separately and subtracted once at the end.
pub fn sum_signed<I: IntoIterator<Item = LogSigned>>(terms: I, precision: Precision) -> LogSigned {
    let terms: Vec<LogSigned> = terms.into_iter().filter(|t| t.sign != 0).collect();
    let Some(anchor) = terms.iter().map(|t| t.logmag).reduce(f64::max) else {
        return LogSigned::ZERO;
    };
    let mut pos = Accumulator::new(precision);
    let mut neg = Accumulator::new(precision);
    for t in &terms {
        let v = (t.logmag - anchor).exp();
        if t.sign > 0 {
            pos.push(v);
        } else {
            neg.push(v);
        }
    }
    let diff = (pos.value_dd() - neg.value_dd()).to_f64();
    let mut out = LogSigned::from_f64(diff);
    if out.sign != 0 {
        out.logmag += anchor;
    }
    out
}

/// Whether every nonzero term shares one sign.
pub fn same_sign(terms: &[LogSigned]) -> bool {
    let mut seen = 0i8;
    for t in terms.iter().filter(|t| t.sign != 0) {
        if seen == 0 {
            seen = t.sign;
        } else if seen != t.sign {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn roundtrip_small_values() {
        for x in [-3.5, -1e-300, 0.0, 2.0, 7e200] {
            let y = LogSigned::from_f64(x).to_f64();
            assert!((y - x).abs() <= 1e-13 * x.abs());
        }
    }

    #[test]
    fn sum_keeps_sign_for_huge_terms() {
        let a = LogSigned::new(1, 1000.0);
        let b = LogSigned::new(1, 999.0);
        let s = a + b;
        assert_eq!(s.sign, 1);
        assert!((s.logmag - (1000.0 + (1.0 + (-1.0f64).exp()).ln())).abs() < 1e-12);
        let d = sum_signed([b, -a], Precision::Double);
        assert_eq!(d.sign, -1);
    }

    #[test]
    fn exact_cancellation_is_zero() {
        let a = LogSigned::new(1, 5.0);
        assert!(sum_signed([a, -a], Precision::DoubleDouble).is_zero());
    }

    #[test]
    fn dd_recovers_lost_bits() {
        let mut acc = Accumulator::new(Precision::DoubleDouble);
        acc.push(1.0);
        for _ in 0..1000 {
            acc.push(1e-17);
        }
        acc.push(-1.0);
        assert!((acc.value() - 1e-14).abs() < 1e-28);
    }

    proptest! {
        #[test]
        fn mul_matches_f64(x in -1e6f64..1e6, y in -1e6f64..1e6) {
            let p = (LogSigned::from_f64(x) * LogSigned::from_f64(y)).to_f64();
            prop_assert!((p - x * y).abs() <= 1e-12 * (x * y).abs().max(1e-300));
        }

        #[test]
        fn sum_matches_f64(xs in proptest::collection::vec(-1e3f64..1e3, 1..20)) {
            let s = sum_signed(xs.iter().map(|&x| LogSigned::from_f64(x)), Precision::Double).to_f64();
            let direct: f64 = xs.iter().sum();
            let scale: f64 = xs.iter().map(|x| x.abs()).sum();
            prop_assert!((s - direct).abs() <= 1e-12 * scale.max(1.0));
        }
    }
}
