//! Boundary points `ζ = e(x)` stored as an angle in turns.
//!
//! Exact rational turns identify roots of unity; floating turns are treated as
//! irrational, except that dyadic quarters (0, 1/4, 1/2, 3/4) are promoted to
//! exact since they are represented without rounding.

use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::e_turns;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Turns {
    value: f64,
    exact: Option<Rational64>,
}

/// The six roots of unity `±i, ±ω, ±ω²`, all twelfth roots of unity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExcludedRoot {
    I,
    MinusI,
    Omega,
    Omega2,
    MinusOmega,
    MinusOmega2,
}

/// Arithmetic nature of a boundary point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaKind {
    One,
    MinusOne,
    Excluded(ExcludedRoot),
    /// Root of unity of the given order, with order not in {1, 2, 3, 4, 6}.
    RootOfUnity(u64),
    Irrational,
}

impl ExcludedRoot {
    pub const ALL: [ExcludedRoot; 6] = [
        ExcludedRoot::I,
        ExcludedRoot::MinusI,
        ExcludedRoot::Omega,
        ExcludedRoot::Omega2,
        ExcludedRoot::MinusOmega,
        ExcludedRoot::MinusOmega2,
    ];

    /// `s` with `ζ = e(s/12)`.
    pub fn twelfths(self) -> u8 {
        match self {
            ExcludedRoot::I => 3,
            ExcludedRoot::MinusI => 9,
            ExcludedRoot::Omega => 4,
            ExcludedRoot::Omega2 => 8,
            ExcludedRoot::MinusOmega2 => 2,
            ExcludedRoot::MinusOmega => 10,
        }
    }

    /// Multiplicative order of ζ.
    pub fn order(self) -> u64 {
        match self {
            ExcludedRoot::I | ExcludedRoot::MinusI => 4,
            ExcludedRoot::Omega | ExcludedRoot::Omega2 => 3,
            ExcludedRoot::MinusOmega | ExcludedRoot::MinusOmega2 => 6,
        }
    }

    /// `ζ + ζ̄`; ζ satisfies `ζ² = tζ − 1` with this trace `t`.
    pub fn trace(self) -> i64 {
        match self {
            ExcludedRoot::I | ExcludedRoot::MinusI => 0,
            ExcludedRoot::Omega | ExcludedRoot::Omega2 => -1,
            ExcludedRoot::MinusOmega | ExcludedRoot::MinusOmega2 => 1,
        }
    }

    pub fn value(self) -> Complex64 {
        e_turns(self.twelfths() as f64 / 12.0)
    }

    pub fn turns(self) -> Turns {
        Turns::rational(self.twelfths() as i64, 12).expect("nonzero denominator")
    }

    fn from_ratio(r: Rational64) -> Option<Self> {
        let (n, d) = (*r.numer(), *r.denom());
        Some(match (n, d) {
            (1, 4) => ExcludedRoot::I,
            (3, 4) => ExcludedRoot::MinusI,
            (1, 3) => ExcludedRoot::Omega,
            (2, 3) => ExcludedRoot::Omega2,
            (1, 6) => ExcludedRoot::MinusOmega2,
            (5, 6) => ExcludedRoot::MinusOmega,
            _ => return None,
        })
    }
}

fn reduce_mod_one(r: Rational64) -> Rational64 {
    let f = r - r.floor();
    if f.is_negative() {
        f + Rational64::from_integer(1)
    } else {
        f
    }
}

impl Turns {
    /// Exact rational angle `num/den` turns.
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("zero denominator in angle"));
        }
        let r = reduce_mod_one(Rational64::new(num, den));
        Ok(Turns { value: r.to_f64().unwrap_or(0.0), exact: Some(r) })
    }

    /// Floating angle, treated as irrational unless it is an exact quarter turn.
    pub fn float(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::invalid("angle must be finite"));
        }
        let v = x - x.floor();
        let v = if v >= 1.0 { 0.0 } else { v };
        let q = v * 4.0;
        if q == q.floor() {
            return Turns::rational(q as i64, 4);
        }
        Ok(Turns { value: v, exact: None })
    }

    /// Parses `"1/4"`, `"0.1414"`, optionally followed by ` exact` or `:exact`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("turns:").unwrap_or(s);
        let (body, exact) = match s.strip_suffix("exact") {
            Some(rest) => (rest.trim_end().trim_end_matches(':').trim(), true),
            None => (s, false),
        };
        if let Some((n, d)) = body.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| Error::invalid(format!("bad angle {s:?}")))?;
            let d: i64 = d.trim().parse().map_err(|_| Error::invalid(format!("bad angle {s:?}")))?;
            return Turns::rational(n, d);
        }
        let x: f64 = body.parse().map_err(|_| Error::invalid(format!("bad angle {s:?}")))?;
        if exact {
            Turns::exact_from_float(x)
        } else {
            Turns::float(x)
        }
    }

    fn exact_from_float(x: f64) -> Result<Self> {
        let r = Rational64::approximate_float(x)
            .filter(|r| *r.denom() <= 1_000_000 && r.to_f64() == Some(x))
            .ok_or_else(|| Error::invalid(format!("{x} is not a small-denominator rational")))?;
        Turns::rational(*r.numer(), *r.denom())
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<Rational64> {
        self.exact
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `ζ = e(x)`.
    pub fn unit(&self) -> Complex64 {
        match self.exact {
            Some(r) if *r.denom() <= 12 && (12 % *r.denom() == 0) => {
                // Use exact coordinates for the twelfth roots of unity.
                let s = (*r.numer() * (12 / *r.denom())) as usize % 12;
                twelfth_root(s)
            }
            _ => e_turns(self.value),
        }
    }

    /// Fractional part of `n·x`, exactly for rational angles.
    pub fn frac_of_multiple(&self, n: u64) -> f64 {
        match self.exact {
            Some(r) => {
                let d = *r.denom() as i128;
                let m = (*r.numer() as i128 * n as i128).rem_euclid(d);
                m as f64 / d as f64
            }
            None => {
                let t = self.value * n as f64;
                let f = t - t.floor();
                if f >= 1.0 {
                    0.0
                } else {
                    f
                }
            }
        }
    }

    /// `ζⁿ`.
    pub fn pow(&self, n: u64) -> Complex64 {
        match self.exact {
            Some(r) if 12 % *r.denom() == 0 => {
                let s = (*r.numer() as i128 * (12 / *r.denom()) as i128 * n as i128).rem_euclid(12);
                twelfth_root(s as usize)
            }
            _ => e_turns(self.frac_of_multiple(n)),
        }
    }

    pub fn kind(&self) -> ZetaKind {
        match self.exact {
            None => ZetaKind::Irrational,
            Some(r) if r.is_zero() => ZetaKind::One,
            Some(r) if *r.denom() == 2 => ZetaKind::MinusOne,
            Some(r) => match ExcludedRoot::from_ratio(r) {
                Some(e) => ZetaKind::Excluded(e),
                None => ZetaKind::RootOfUnity(*r.denom() as u64),
            },
        }
    }

    pub fn is_plus_minus_one(&self) -> bool {
        matches!(self.kind(), ZetaKind::One | ZetaKind::MinusOne)
    }
}

/// `e(s/12)` with exactly rounded coordinates.
pub fn twelfth_root(s: usize) -> Complex64 {
    const H: f64 = 0.5;
    const R3: f64 = 0.866_025_403_784_438_6;
    const TABLE: [(f64, f64); 12] = [
        (1.0, 0.0),
        (R3, H),
        (H, R3),
        (0.0, 1.0),
        (-H, R3),
        (-R3, H),
        (-1.0, 0.0),
        (-R3, -H),
        (-H, -R3),
        (0.0, -1.0),
        (H, -R3),
        (R3, -H),
    ];
    let (re, im) = TABLE[s % 12];
    Complex64::new(re, im)
}

impl fmt::Display for Turns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) => write!(f, "turns:{}/{} exact", r.numer(), r.denom()),
            None => write!(f, "turns:{}", self.value),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawTurns {
    Text(String),
    Number(f64),
}

#[derive(Serialize, Deserialize)]
struct RawAngle {
    turns: RawTurns,
    exact: bool,
}

impl Serialize for Turns {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = match self.exact {
            Some(r) => RawAngle { turns: RawTurns::Text(format!("{}/{}", r.numer(), r.denom())), exact: true },
            None => RawAngle { turns: RawTurns::Number(self.value), exact: false },
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Turns {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawAngle::deserialize(d)?;
        let parsed = match (raw.turns, raw.exact) {
            (RawTurns::Text(t), _) => Turns::parse(&t),
            (RawTurns::Number(x), true) => Turns::exact_from_float(x),
            (RawTurns::Number(x), false) => Turns::float(x),
        };
        parsed.map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_roots() {
        assert_eq!(Turns::parse("turns:1/4 exact").unwrap().kind(), ZetaKind::Excluded(ExcludedRoot::I));
        assert_eq!(Turns::parse("1/3").unwrap().kind(), ZetaKind::Excluded(ExcludedRoot::Omega));
        assert_eq!(Turns::parse("5/6").unwrap().kind(), ZetaKind::Excluded(ExcludedRoot::MinusOmega));
        assert_eq!(Turns::parse("turns:0").unwrap().kind(), ZetaKind::One);
        assert_eq!(Turns::parse("0.5").unwrap().kind(), ZetaKind::MinusOne);
        assert_eq!(Turns::parse("2/10").unwrap().kind(), ZetaKind::RootOfUnity(5));
        assert_eq!(Turns::parse("turns:0.1414").unwrap().kind(), ZetaKind::Irrational);
        assert_eq!(Turns::parse("0.25:exact").unwrap().kind(), ZetaKind::Excluded(ExcludedRoot::I));
    }

    #[test]
    fn excluded_root_values() {
        for e in ExcludedRoot::ALL {
            let z = e.value();
            let t = e.trace() as f64;
            assert!((z * z - (z * t - 1.0)).norm() < 1e-15);
            assert!((e.turns().unit() - z).norm() < 1e-15);
            assert!((z.powu(e.order() as u32) - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn json_round_trip() {
        for t in [Turns::parse("1/4").unwrap(), Turns::float(0.1414).unwrap()] {
            let s = serde_json::to_string(&t).unwrap();
            let back: Turns = serde_json::from_str(&s).unwrap();
            assert_eq!(t, back);
        }
        let s = serde_json::to_string(&Turns::parse("1/3").unwrap()).unwrap();
        assert_eq!(s, r#"{"turns":"1/3","exact":true}"#);
    }

    #[test]
    fn exact_powers() {
        let i = Turns::rational(1, 4).unwrap();
        assert_eq!(i.pow(2), Complex64::new(-1.0, 0.0));
        assert_eq!(i.pow(13), Complex64::new(0.0, 1.0));
    }
}
