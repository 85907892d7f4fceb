//! Gate angles with an optional exact rational-π representation.
//!
//! Angles are always normalised into `[0, 2π)`. When an angle was built from a
//! rational multiple of π the exact fraction is kept alongside the float, so
//! that special angles (multiples of π/4) produce exact trigonometric values.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::Error;

/// Reduced fraction `num/den` of π with `0 <= num < 2*den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PiFraction {
    num: i64,
    den: i64,
}

impl PiFraction {
    fn new(num: i64, den: i64) -> Self {
        debug_assert!(den > 0);
        let g = gcd(num.unsigned_abs(), den as u64) as i64;
        let (num, den) = if g > 1 { (num / g, den / g) } else { (num, den) };
        PiFraction {
            num: num.rem_euclid(2 * den),
            den,
        }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    fn add(self, other: PiFraction) -> Option<PiFraction> {
        let den = self.den.checked_mul(other.den)?;
        let num = self
            .num
            .checked_mul(other.den)?
            .checked_add(other.num.checked_mul(self.den)?)?;
        Some(PiFraction::new(num, den))
    }

    /// Number of quarter turns (multiples of π/2) if the fraction is one.
    fn quarter_turns(self) -> Option<i64> {
        let twice = 2 * self.num;
        (twice % self.den == 0).then(|| (twice / self.den).rem_euclid(4))
    }

    /// Number of eighth turns (multiples of π/4) if the fraction is one.
    fn eighth_turns(self) -> Option<i64> {
        let quad = 4 * self.num;
        (quad % self.den == 0).then(|| (quad / self.den).rem_euclid(8))
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// An angle in radians, normalised modulo 2π.
#[derive(Clone, Copy, Debug)]
pub struct Angle {
    radians: f64,
    exact: Option<PiFraction>,
}

impl Angle {
    pub const ZERO: Angle = Angle {
        radians: 0.0,
        exact: Some(PiFraction { num: 0, den: 1 }),
    };

    pub fn from_radians(radians: f64) -> Self {
        let mut r = radians.rem_euclid(TAU);
        if r >= TAU {
            r = 0.0;
        }
        Angle {
            radians: r,
            exact: None,
        }
    }

    /// `k·π/m`, kept exactly.
    pub fn pi_fraction(k: i64, m: i64) -> Result<Self, Error> {
        if m <= 0 {
            return Err(Error::InvalidAngle(format!(
                "denominator must be positive in {k}*pi/{m}"
            )));
        }
        let frac = PiFraction::new(k, m);
        Ok(Angle {
            radians: frac.num as f64 * PI / frac.den as f64,
            exact: Some(frac),
        })
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    pub fn exact(&self) -> Option<PiFraction> {
        self.exact
    }

    pub fn half_pi() -> Self {
        Angle::pi_fraction(1, 2).expect("valid fraction")
    }

    /// Sum of two angles; stays exact when both operands are.
    pub fn add(&self, other: &Angle) -> Angle {
        if let (Some(a), Some(b)) = (self.exact, other.exact) {
            if let Some(f) = a.add(b) {
                return Angle {
                    radians: f.num as f64 * PI / f.den as f64,
                    exact: Some(f),
                };
            }
        }
        Angle::from_radians(self.radians + other.radians)
    }

    pub fn neg(&self) -> Angle {
        match self.exact {
            Some(f) => {
                let g = PiFraction::new(-f.num, f.den);
                Angle {
                    radians: g.num as f64 * PI / g.den as f64,
                    exact: Some(g),
                }
            }
            None => Angle::from_radians(-self.radians),
        }
    }

    /// `self + π/2`.
    pub fn plus_half_pi(&self) -> Angle {
        self.add(&Angle::half_pi())
    }

    pub fn cos(&self) -> f64 {
        match self.exact.and_then(PiFraction::quarter_turns) {
            Some(0) => 1.0,
            Some(1) | Some(3) => 0.0,
            Some(2) => -1.0,
            _ => self.radians.cos(),
        }
    }

    pub fn sin(&self) -> f64 {
        match self.exact.and_then(PiFraction::quarter_turns) {
            Some(0) | Some(2) => 0.0,
            Some(1) => 1.0,
            Some(3) => -1.0,
            _ => self.radians.sin(),
        }
    }

    /// cos²θ, exact for multiples of π/4.
    pub fn cos_sq(&self) -> f64 {
        match self.exact.and_then(PiFraction::eighth_turns) {
            Some(e) if e % 2 == 1 => 0.5,
            Some(0) | Some(4) => 1.0,
            Some(2) | Some(6) => 0.0,
            _ => {
                let c = self.radians.cos();
                c * c
            }
        }
    }

    /// sin²θ, exact for multiples of π/4.
    pub fn sin_sq(&self) -> f64 {
        match self.exact.and_then(PiFraction::eighth_turns) {
            Some(e) if e % 2 == 1 => 0.5,
            Some(0) | Some(4) => 0.0,
            Some(2) | Some(6) => 1.0,
            _ => {
                let s = self.radians.sin();
                s * s
            }
        }
    }

    /// Total order used to canonicalise gate lists.
    pub fn total_cmp(&self, other: &Angle) -> Ordering {
        self.radians.total_cmp(&other.radians)
    }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.radians == other.radians,
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(fr) => write!(f, "{}*pi/{}", fr.num, fr.den),
            None => write!(f, "{}", self.radians),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalises_into_one_turn() {
        let a = Angle::from_radians(-PI / 2.0);
        assert!((a.radians() - 1.5 * PI).abs() < 1e-15);
        let b = Angle::pi_fraction(-1, 4).unwrap();
        assert_eq!(b.exact().unwrap().numerator(), 7);
        assert_eq!(b.exact().unwrap().denominator(), 4);
        assert_eq!(Angle::pi_fraction(4, 2).unwrap(), Angle::ZERO);
    }

    #[test]
    fn special_angles_are_exact() {
        let h = Angle::half_pi();
        assert_eq!(h.cos(), 0.0);
        assert_eq!(h.cos_sq(), 0.0);
        assert_eq!(h.sin_sq(), 1.0);
        let q = Angle::pi_fraction(1, 4).unwrap();
        assert_eq!(q.cos_sq(), 0.5);
        let e = Angle::pi_fraction(1, 8).unwrap().plus_half_pi();
        assert_eq!(e.exact().unwrap().numerator(), 5);
        assert!((e.cos_sq() - (PI / 8.0).sin().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn negation_and_addition() {
        let t = Angle::pi_fraction(3, 8).unwrap();
        assert_eq!(t.add(&t.neg()), Angle::ZERO);
        let f = Angle::from_radians(0.3);
        assert!((f.add(&f.neg()).radians()).abs() < 1e-15 || (f.add(&f.neg()).radians() - TAU).abs() < 1e-15);
        assert!(Angle::pi_fraction(1, 0).is_err());
    }
}
