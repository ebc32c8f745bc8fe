//! Racah–Wigner 6j symbols at q = ξ_r² in log-signed form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::logsigned::{same_sign, sum_signed, LogSigned};
use crate::qarith::{is_r_admissible, Level, Spin};

/// Six spins labelled as in the symbol {a b e; d c f}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SpinSextuple {
    pub a: Spin,
    pub b: Spin,
    pub c: Spin,
    pub d: Spin,
    pub e: Spin,
    pub f: Spin,
}

/// Edge positions, in a..f order, as pairs of the four triples
/// (a,b,e), (a,c,f), (b,d,f), (c,d,e).
pub const TRIPLE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 3), (2, 3), (0, 3), (1, 2)];

/// All 24 permutations of four symbols.
pub fn s4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    p.iter().for_each(|&i| seen[i] = true);
                    if seen.iter().all(|&s| s) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Relabel six edge values (a..f order) under a permutation of the four
/// corners, where `pairs[x]` names the two corners joined by edge x.
pub fn permute_edges<T: Copy>(v: [T; 6], pairs: &[(usize, usize); 6], perm: [usize; 4]) -> [T; 6] {
    let mut out = v;
    for (x, &(i, j)) in pairs.iter().enumerate() {
        let (pi, pj) = (perm[i], perm[j]);
        let src = pairs
            .iter()
            .position(|&(k, l)| (k == pi && l == pj) || (k == pj && l == pi))
            .expect("pairs must list the six corner pairs");
        out[x] = v[src];
    }
    out
}

impl SpinSextuple {
    pub fn from_twice(t: [u32; 6]) -> Self {
        let s = Spin::from_twice;
        SpinSextuple {
            a: s(t[0]),
            b: s(t[1]),
            c: s(t[2]),
            d: s(t[3]),
            e: s(t[4]),
            f: s(t[5]),
        }
    }

    /// Doubled spins in a..f order.
    pub fn twice(&self) -> [u32; 6] {
        [
            self.a.twice,
            self.b.twice,
            self.c.twice,
            self.d.twice,
            self.e.twice,
            self.f.twice,
        ]
    }

    pub fn triples(&self) -> [(Spin, Spin, Spin); 4] {
        [
            (self.a, self.b, self.e),
            (self.a, self.c, self.f),
            (self.b, self.d, self.f),
            (self.c, self.d, self.e),
        ]
    }

    /// Doubled vertex sums 2S_1..2S_4.
    pub fn s_twice(&self) -> [u32; 4] {
        self.triples().map(|(x, y, z)| x.twice + y.twice + z.twice)
    }

    /// Doubled quadrilateral sums 2T_1..2T_3.
    pub fn t_twice(&self) -> [u32; 3] {
        let [a, b, c, d, e, f] = self.twice();
        [a + b + c + d, a + d + e + f, b + c + e + f]
    }

    /// Integer S_j, assuming the triples are admissible.
    pub fn s(&self) -> [i64; 4] {
        self.s_twice().map(|x| (x / 2) as i64)
    }

    pub fn t(&self) -> [i64; 3] {
        self.t_twice().map(|x| (x / 2) as i64)
    }

    /// Summation range [m, M] of the Racah sum.
    pub fn range(&self) -> (i64, i64) {
        (
            *self.s().iter().max().unwrap(),
            *self.t().iter().min().unwrap(),
        )
    }

    pub fn check(&self, level: &Level) -> Result<()> {
        for (x, y, z) in self.triples() {
            if !is_r_admissible(level, x, y, z) {
                return Err(Error::Inadmissible(x.twice, y.twice, z.twice));
            }
        }
        Ok(())
    }

    /// The 24 images under relabelings of the tetrahedron.
    pub fn tetrahedral_images(&self) -> Vec<SpinSextuple> {
        s4().into_iter()
            .map(|p| SpinSextuple::from_twice(permute_edges(self.twice(), &TRIPLE_PAIRS, p)))
            .collect()
    }
}

/// A triangle coefficient Δ_r = sqrt(radicand), kept as the radicand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPower {
    pub radicand: LogSigned,
}

impl HalfPower {
    /// ln|Δ_r|.
    pub fn logmag(&self) -> f64 {
        self.radicand.logmag / 2.0
    }

    /// True when the radicand is negative, so Δ_r = i·sqrt(|radicand|).
    pub fn is_imaginary(&self) -> bool {
        self.radicand.sign < 0
    }

    pub fn to_complex(&self) -> Complex64 {
        let m = self.logmag().exp();
        if self.is_imaginary() {
            Complex64::new(0.0, m)
        } else {
            Complex64::new(m, 0.0)
        }
    }
}

pub fn delta_coeff(level: &Level, u: Spin, v: Spin, w: Spin) -> Result<HalfPower> {
    if !is_r_admissible(level, u, v, w) {
        return Err(Error::Inadmissible(u.twice, v.twice, w.twice));
    }
    let (u, v, w) = (u.twice as i64, v.twice as i64, w.twice as i64);
    let num = level.qfact((u + v - w) / 2)?
        * level.qfact((v + w - u) / 2)?
        * level.qfact((w + u - v) / 2)?;
    let den = level.qfact((u + v + w) / 2 + 1)?;
    if den.is_zero() || num.is_zero() {
        return Err(Error::Domain("vanishing triangle coefficient".into()));
    }
    Ok(HalfPower {
        radicand: num / den,
    })
}

pub fn alpha_term(level: &Level, s: &SpinSextuple, z: i64) -> Result<LogSigned> {
    let (m, big_m) = s.range();
    if z < m || z > big_m {
        return Err(Error::Domain(format!("z = {z} outside [{m}, {big_m}]")));
    }
    let mut den = LogSigned::ONE;
    for sj in s.s() {
        den = den * level.qfact(z - sj)?;
    }
    for tk in s.t() {
        den = den * level.qfact(tk - z)?;
    }
    if den.is_zero() {
        return Err(Error::Domain(format!("vanishing denominator at z = {z}")));
    }
    let num = level.qfact(z + 1)?;
    let parity = if z % 2 == 0 { 1 } else { -1 };
    Ok(LogSigned::new(parity, 0.0) * num / den)
}

/// Value of a 6j symbol: magnitude in log form times the phase i^quarter_turns.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SixjValue {
    /// ln|6j|, -inf when the symbol vanishes.
    pub logmag: f64,
    pub quarter_turns: u8,
    pub is_zero: bool,
    /// All Racah terms shared a sign.
    pub same_sign: bool,
    /// ln of the largest |α(z)| and the z attaining it.
    pub max_term_log: f64,
    pub argmax_z: i64,
    /// ln|Σ α(z)| and the number of nonvanishing terms.
    pub sum_log: f64,
    pub n_terms: usize,
}

impl SixjValue {
    pub fn magnitude(&self) -> LogSigned {
        if self.is_zero {
            LogSigned::ZERO
        } else {
            LogSigned::new(1, self.logmag)
        }
    }

    /// The complex value, when it fits in binary64.
    pub fn complex(&self) -> Option<Complex64> {
        if self.is_zero {
            return Some(Complex64::new(0.0, 0.0));
        }
        let m = self.logmag.exp();
        if !m.is_finite() || m == 0.0 {
            return None;
        }
        let unit = match self.quarter_turns % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        Some(unit * m)
    }
}

pub fn sixj_rw(level: &Level, s: &SpinSextuple) -> Result<SixjValue> {
    s.check(level)?;
    let (m, big_m) = s.range();
    let mut terms = Vec::with_capacity((big_m - m + 1).max(0) as usize);
    for z in m..=big_m {
        terms.push(alpha_term(level, s, z)?);
    }
    let (argmax_z, max_term_log) = terms
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_zero())
        .map(|(i, t)| (m + i as i64, t.logmag))
        .fold(
            (m, f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );
    let n_terms = terms.iter().filter(|t| !t.is_zero()).count();
    let same = same_sign(&terms);
    let sum = sum_signed(terms, level.precision());

    let mut quarter = 0u8;
    let mut logmag = sum.logmag;
    for (x, y, z) in s.triples() {
        let d = delta_coeff(level, x, y, z)?;
        logmag += d.logmag();
        if d.is_imaginary() {
            quarter += 1;
        }
    }
    if sum.sign < 0 {
        quarter += 2;
    }
    Ok(SixjValue {
        logmag: if sum.is_zero() {
            f64::NEG_INFINITY
        } else {
            logmag
        },
        quarter_turns: quarter % 4,
        is_zero: sum.is_zero(),
        same_sign: same,
        max_term_log,
        argmax_z,
        sum_log: sum.logmag,
        n_terms,
    })
}

/// Every admissible sextuple at level r, by brute force.
pub fn enumerate_admissible(level: &Level) -> Vec<SpinSextuple> {
    let cap = level.r() - 2;
    let adm = |x: u32, y: u32, z: u32| {
        is_r_admissible(
            level,
            Spin::from_twice(x),
            Spin::from_twice(y),
            Spin::from_twice(z),
        )
    };
    let mut out = Vec::new();
    for a in 0..=cap {
        for b in 0..=cap {
            for e in 0..=cap {
                if !adm(a, b, e) {
                    continue;
                }
                for c in 0..=cap {
                    for f in 0..=cap {
                        if !adm(a, c, f) {
                            continue;
                        }
                        for d in 0..=cap {
                            if adm(b, d, f) && adm(c, d, e) {
                                out.push(SpinSextuple::from_twice([a, b, c, d, e, f]));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(r: i64) -> Level {
        Level::new(r).unwrap()
    }

    #[test]
    fn delta_examples() {
        let h = Spin::from_twice;
        let d = delta_coeff(&lv(5), h(0), h(0), h(0)).unwrap();
        assert_eq!(d.radicand, LogSigned::ONE);
        let l7 = lv(7);
        let d = delta_coeff(&l7, h(1), h(1), h(2)).unwrap();
        let f3 = l7.qint(1) * l7.qint(2) * l7.qint(3);
        assert!((d.to_complex().re - f3.powf(-0.5)).abs() < 1e-14);
        // [3]! < 0 at r = 5, while [4]! > 0 since [3] and [4] are both negative
        assert!(delta_coeff(&lv(5), h(1), h(1), h(2))
            .unwrap()
            .is_imaginary());
        assert!(!delta_coeff(&lv(5), h(2), h(2), h(2))
            .unwrap()
            .is_imaginary());
        assert!(delta_coeff(&l7, h(2), h(2), h(6)).is_err());
    }

    #[test]
    fn alpha_trivial_and_plain_oracle() {
        let l = lv(7);
        let zero = SpinSextuple::from_twice([0; 6]);
        assert_eq!(alpha_term(&l, &zero, 0).unwrap(), LogSigned::ONE);
        // spins 1/2 except e = f = 1
        let s = SpinSextuple::from_twice([1, 1, 1, 1, 2, 2]);
        s.check(&l).unwrap();
        let (m, big_m) = s.range();
        assert!(m <= 2 && 2 <= big_m);
        let fact = |n: i64| (1..=n).map(|j| l.qint(j)).product::<f64>();
        let plain = fact(3)
            / (s.s().iter().map(|&x| fact(2 - x)).product::<f64>()
                * s.t().iter().map(|&x| fact(x - 2)).product::<f64>());
        let got = alpha_term(&l, &s, 2).unwrap().to_f64();
        assert!((got - plain).abs() < 1e-13 * plain.abs());
        assert!(alpha_term(&l, &s, big_m + 1).is_err());
    }

    #[test]
    fn zero_sextuple_is_one() {
        for r in (3..=51).step_by(2) {
            let v = sixj_rw(&lv(r), &SpinSextuple::from_twice([0; 6])).unwrap();
            assert_eq!(v.complex().unwrap(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn classical_value_small_case() {
        // {1/2 1/2 1; 1/2 1/2 1} computed term by term in plain floats.
        let l = lv(9);
        let s = SpinSextuple::from_twice([1, 1, 1, 1, 2, 2]);
        let fact = |n: i64| (1..=n).map(|j| l.qint(j)).product::<f64>();
        let delta = |x: i64, y: i64, z: i64| {
            fact((x + y - z) / 2) * fact((y + z - x) / 2) * fact((z + x - y) / 2)
                / fact((x + y + z) / 2 + 1)
        };
        let (m, big_m) = s.range();
        let mut sum = 0.0;
        for z in m..=big_m {
            let den: f64 = s.s().iter().map(|&x| fact(z - x)).product::<f64>()
                * s.t().iter().map(|&x| fact(x - z)).product::<f64>();
            sum += if z % 2 == 0 { 1.0 } else { -1.0 } * fact(z + 1) / den;
        }
        let rad: f64 = [(1, 1, 2), (1, 1, 2), (1, 1, 2), (1, 1, 2)]
            .iter()
            .map(|&(x, y, z)| delta(x, y, z))
            .product();
        let want = rad.sqrt() * sum;
        let got = sixj_rw(&l, &s).unwrap().complex().unwrap();
        assert!((got.re - want).abs() < 1e-13 * want.abs());
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn rejects_inadmissible() {
        let l = lv(7);
        assert!(sixj_rw(&l, &SpinSextuple::from_twice([2, 2, 0, 0, 6, 0])).is_err());
        // spin 2 exceeds (r - 2)/2 at r = 5
        assert!(sixj_rw(&lv(5), &SpinSextuple::from_twice([4, 4, 0, 0, 0, 0])).is_err());
    }

    #[test]
    fn images_are_24_and_closed() {
        let s = SpinSextuple::from_twice([1, 2, 3, 4, 5, 6]);
        let imgs = s.tetrahedral_images();
        assert_eq!(imgs.len(), 24);
        assert!(imgs.contains(&s));
        let mut uniq = imgs.clone();
        uniq.sort_by_key(|x| x.twice());
        uniq.dedup();
        assert_eq!(uniq.len(), 24);
        for img in &imgs {
            let mut a = img.s_twice();
            let mut b = s.s_twice();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn symmetry_small_enumeration() {
        let l = lv(7);
        for s in enumerate_admissible(&l) {
            let v = sixj_rw(&l, &s).unwrap();
            for img in s.tetrahedral_images() {
                let w = sixj_rw(&l, &img).unwrap();
                assert_eq!(v.is_zero, w.is_zero);
                if !v.is_zero {
                    assert!((v.logmag - w.logmag).abs() < 1e-12);
                }
            }
        }
    }
}
