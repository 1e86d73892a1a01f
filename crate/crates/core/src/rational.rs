//! Exact rationals and the extended exponent type `(0, ∞]`.
//!
//! Every exponent comparison in the decision tables is carried out on
//! [`Q`] values, so region boundaries are detected exactly. Integrability
//! exponents are stored as [`Exponent`], whose reciprocal is always a finite
//! rational (`1/∞ = 0`).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number used for all exponent arithmetic.
pub type Q = Ratio<i128>;

/// Shorthand constructor, `q(3, 4) == 3/4`.
pub fn q(numer: i128, denom: i128) -> Q {
    Q::new(numer, denom)
}

/// Integer as a rational.
pub fn qi(v: i128) -> Q {
    Q::from_integer(v)
}

pub fn to_f64(v: &Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Parse `a`, `a/b` or a finite decimal such as `-1.35` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den: i128 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(q(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = frac_part.len() as u32;
        if digits > 30 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int_val: i128 = match int_part.trim_start_matches(['-', '+']) {
            "" => 0,
            p => p.parse().map_err(|_| bad())?,
        };
        let frac_val: i128 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let scale = 10i128.pow(digits);
        let magnitude = q(int_val * scale + frac_val, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    s.parse::<i128>().map(qi).map_err(|_| bad())
}

/// Render a rational the way [`parse_rational`] reads it back.
pub fn format_rational(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// A positive extended rational exponent `0 < p ≤ ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Q),
    Infinite,
}

impl Exponent {
    /// Validating constructor for a finite exponent.
    pub fn finite(p: Q) -> Result<Self, Error> {
        if p <= Q::zero() {
            return Err(Error::InvalidExponent(format_rational(&p)));
        }
        Ok(Exponent::Finite(p))
    }

    /// Builds `p` from its reciprocal; `1/p = 0` gives `∞`.
    pub fn from_recip(r: Q) -> Result<Self, Error> {
        if r.is_negative() {
            return Err(Error::InvalidExponent(format!(
                "reciprocal {} is negative",
                format_rational(&r)
            )));
        }
        if r.is_zero() {
            Ok(Exponent::Infinite)
        } else {
            Ok(Exponent::Finite(r.recip()))
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn recip(&self) -> Q {
        match self {
            Exponent::Finite(p) => p.recip(),
            Exponent::Infinite => Q::zero(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(p) => to_f64(p),
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// Hölder conjugate: `p/(p-1)` for `1 < p < ∞`, `1` for `p = ∞`,
    /// `∞` for `0 < p ≤ 1`.
    pub fn conjugate(&self) -> Exponent {
        Exponent::from_recip(conjugate_recip(&self.recip()))
            .expect("conjugate reciprocal is non-negative")
    }
}

/// `1/p'` computed from `1/p`; equals `max(1 - 1/p, 0)`.
pub fn conjugate_recip(r: &Q) -> Q {
    let v = Q::one() - r;
    if v.is_negative() {
        Q::zero()
    } else {
        v
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger exponent <=> smaller reciprocal
        other.recip().cmp(&self.recip())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => f.write_str(&format_rational(p)),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "Inf" | "INF" => Ok(Exponent::Infinite),
            other => Exponent::finite(parse_rational(other)?),
        }
    }
}
