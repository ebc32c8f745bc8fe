//! Admissible spin sextuples approximating target dihedral angles.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{classify_vertex, AngleSet, VertexClass, VERTICES};
use crate::qarith::Level;
use crate::sixj::SpinSextuple;

/// Parity repair visits f, e, c, b in this order on ties.
pub const REPAIR_PRIORITY: [usize; 4] = [5, 4, 2, 1];
const MAX_REPAIRS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinSequenceRule {
    pub angles: AngleSet,
    pub priority: [usize; 4],
    /// Push the first ideal vertex's triple up to S ≥ r/2.
    pub ideal_bias: bool,
}

impl SpinSequenceRule {
    pub fn new(angles: AngleSet) -> Self {
        SpinSequenceRule {
            angles,
            priority: REPAIR_PRIORITY,
            ideal_bias: true,
        }
    }

    pub fn build(&self, r: u32) -> Result<SpinSextuple> {
        if r < 3 || r.is_multiple_of(2) {
            return Err(Error::BadLevel(r as i64));
        }
        let rf = r as f64;
        let target = self.angles.theta.map(|t| rf * (PI - t) / (2.0 * PI) - 1.0);
        if target.iter().any(|&x| x < -0.5) {
            return Err(Error::Domain(format!("angle too large for r = {r}")));
        }
        let mut two = target.map(|x| (x + 0.5).floor().max(0.0) as i64);

        let designated = if self.ideal_bias {
            (0..4).find(|&v| classify_vertex(&self.angles, v) == VertexClass::Ideal)
        } else {
            None
        };
        if let Some(v) = designated {
            let tri = VERTICES[v];
            for &i in &tri {
                two[i] = (target[i] - 1e-12).ceil() as i64;
            }
            while tri.iter().map(|&i| two[i]).sum::<i64>() < r as i64 {
                tri.iter().for_each(|&i| two[i] += 1);
            }
            // S is an integer, so S ≥ r/2 means a doubled sum of at least r + 1
            if tri.iter().map(|&i| two[i]).sum::<i64>() % 2 != 0 {
                two[tri[0]] += 1;
            }
        }

        let keeps_bias = |two: &[i64; 6]| match designated {
            Some(v) => VERTICES[v].iter().map(|&i| two[i]).sum::<i64>() > r as i64,
            None => true,
        };
        let mut repairs = 0;
        loop {
            let bad: Vec<[usize; 3]> = VERTICES
                .iter()
                .copied()
                .filter(|t| t.iter().map(|&i| two[i]).sum::<i64>() % 2 != 0)
                .collect();
            if bad.is_empty() {
                break;
            }
            repairs += 1;
            if repairs > MAX_REPAIRS {
                return Err(Error::RepairFailed(MAX_REPAIRS));
            }
            let mut best: Option<(usize, usize)> = None;
            for &x in &self.priority {
                let mut trial = two;
                trial[x] -= 1;
                if trial[x] < 0 || !keeps_bias(&trial) {
                    continue;
                }
                let hits = bad.iter().filter(|t| t.contains(&x)).count();
                if best.is_none_or(|(_, h)| hits > h) {
                    best = Some((x, hits));
                }
            }
            let Some((x, _)) = best else {
                return Err(Error::RepairFailed(repairs));
            };
            two[x] -= 1;
        }

        let s = SpinSextuple::from_twice(two.map(|x| x as u32));
        s.check(&Level::new(r as i64)?)
            .map_err(|_| Error::RepairFailed(repairs))?;
        Ok(s)
    }
}

pub fn build_spin_sequence(angles: &AngleSet, r: u32) -> Result<SpinSextuple> {
    SpinSequenceRule::new(*angles).build(r)
}

/// Dihedral angles whose η are the lattice values (2a+1)/r.
pub fn lattice_angles(spins: &SpinSextuple, r: u32) -> Result<AngleSet> {
    AngleSet::new(
        spins
            .twice()
            .map(|t| PI - 2.0 * PI * (t as f64 + 1.0) / r as f64),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::is_r_admissible;

    #[test]
    fn golden_regular_ideal() {
        let s = build_spin_sequence(&AngleSet::regular(PI / 3.0).unwrap(), 101).unwrap();
        assert_eq!(s.twice(), [34, 34, 33, 33, 34, 33]);
        assert!(s.s_twice()[0] >= 101);
    }

    #[test]
    fn ideal_vertex_keeps_half_level() {
        let a = AngleSet::regular(PI / 3.0).unwrap();
        for r in [201, 401, 801, 1601] {
            let s = build_spin_sequence(&a, r).unwrap();
            assert!(s.s_twice()[0] > r, "r={r} {:?}", s.twice());
        }
        assert_eq!(
            build_spin_sequence(&a, 201).unwrap().twice(),
            [68, 67, 65, 66, 67, 65]
        );
    }

    #[test]
    fn small_level_smoke() {
        let lvl = Level::new(9).unwrap();
        let s = build_spin_sequence(&AngleSet::regular(PI / 4.0).unwrap(), 9).unwrap();
        for (a, b, c) in s.triples() {
            assert!(is_r_admissible(&lvl, a, b, c));
        }
    }

    #[test]
    fn admissible_along_sequences() {
        for th in [
            0.0,
            0.08 * PI,
            PI / 4.0,
            0.3 * PI,
            PI / 3.0,
            -0.08 * PI,
            -0.3 * PI,
        ] {
            let a = AngleSet::regular(th).unwrap();
            for r in (21..400).step_by(26) {
                let s = build_spin_sequence(&a, r).unwrap();
                s.check(&Level::new(r as i64).unwrap()).unwrap();
            }
        }
    }

    #[test]
    fn rejects_even_level() {
        assert!(matches!(
            build_spin_sequence(&AngleSet::regular(0.0).unwrap(), 100),
            Err(Error::BadLevel(100))
        ));
    }
}
