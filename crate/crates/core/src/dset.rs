//! Computable d-sets and the 2-microlocal weight.
//!
//! Every model is a product of one-dimensional factors (a point, the unit
//! interval, or a symmetric Cantor set), so the squared Euclidean distance
//! splits into a sum of one-dimensional squared distances. The partition code
//! relies on that.
//!
//! ```
//! use microwidth::prelude::*;
//!
//! let u = DSetModel::face_cube(1, 2).unwrap();
//! assert_eq!(distance(&[0.5, 0.3], &u), 0.3);
//! assert_eq!(weight(3, &[1.0, 0.0], &DSetModel::point(vec![0.0, 0.0]), 2.0), 81.0);
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{format_rational, q, qi, to_f64, Q};

/// One coordinate factor of a product d-set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Factor {
    /// The single value `x`.
    Point(f64),
    /// `[0, 1]`.
    Interval,
    /// Symmetric Cantor set in `[0, 1]` with contraction ratio `theta < 1/2`.
    Cantor { theta: f64, depth: u32 },
}

impl Factor {
    /// Distance from `y` to the factor.
    pub fn dist(&self, y: f64) -> f64 {
        match *self {
            Factor::Point(x) => (y - x).abs(),
            Factor::Interval => {
                if y < 0.0 {
                    -y
                } else if y > 1.0 {
                    y - 1.0
                } else {
                    0.0
                }
            }
            Factor::Cantor { theta, depth } => cantor_dist(y, theta, depth),
        }
    }

    /// Smallest closed interval containing the factor.
    pub fn hull(&self) -> (f64, f64) {
        match *self {
            Factor::Point(x) => (x, x),
            _ => (0.0, 1.0),
        }
    }
}

/// Exact descent through the construction of the Cantor set. Gap endpoints
/// belong to the set, so a point inside a gap is resolved exactly; only a
/// point that stays inside the retained intervals to full depth picks up an
/// error, bounded by the interval length at that depth.
fn cantor_dist(y: f64, theta: f64, depth: u32) -> f64 {
    if y <= 0.0 {
        return -y;
    }
    if y >= 1.0 {
        return y - 1.0;
    }
    let (mut a, mut len) = (0.0f64, 1.0f64);
    for _ in 0..depth {
        let left_end = a + theta * len;
        let right_start = a + len - theta * len;
        if y <= left_end {
            len *= theta;
        } else if y >= right_start {
            a = right_start;
            len *= theta;
        } else {
            return (y - left_end).min(right_start - y);
        }
    }
    0.0
}

/// Kind tag of a [`DSetModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DSetKind {
    Point,
    FaceCube,
    CantorProduct,
}

impl fmt::Display for DSetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DSetKind::Point => "point",
            DSetKind::FaceCube => "facecube",
            DSetKind::CantorProduct => "cantor",
        })
    }
}

/// A computable d-set in `ℝⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DSetModel {
    pub kind: DSetKind,
    pub n: u32,
    /// Dimension as a float (irrational for Cantor factors).
    pub d: f64,
    /// Rational dimension when there is one.
    pub d_exact: Option<Q>,
    pub factors: Vec<Factor>,
    /// Contraction ratio of the Cantor factor, as a rational.
    pub theta: Option<Q>,
}

impl DSetModel {
    /// The single point `x₀`.
    pub fn point(x0: Vec<f64>) -> Self {
        DSetModel {
            kind: DSetKind::Point,
            n: x0.len() as u32,
            d: 0.0,
            d_exact: Some(qi(0)),
            factors: x0.into_iter().map(Factor::Point).collect(),
            theta: None,
        }
    }

    /// `[0,1]^m × {0}^{n−m}`.
    pub fn face_cube(m: u32, n: u32) -> Result<Self> {
        if n == 0 || m > n {
            return Err(Error::InvalidParameter(format!("face cube needs 0 <= m <= n, n >= 1 (m = {m}, n = {n})")));
        }
        let mut factors = vec![Factor::Interval; m as usize];
        factors.extend(std::iter::repeat_n(Factor::Point(0.0), (n - m) as usize));
        Ok(DSetModel {
            kind: DSetKind::FaceCube,
            n,
            d: m as f64,
            d_exact: Some(qi(m as i128)),
            factors,
            theta: None,
        })
    }

    /// `C_θ × [0,1]^m × {0}^{n−1−m}` with `C_θ` of dimension `log 2 / log(1/θ)`.
    pub fn cantor_product(theta: Q, m: u32, n: u32) -> Result<Self> {
        if !(theta > qi(0) && theta < q(1, 2)) {
            return Err(Error::InvalidParameter(format!(
                "Cantor ratio {} must lie in (0, 1/2)",
                format_rational(&theta)
            )));
        }
        if n == 0 || m + 1 > n {
            return Err(Error::InvalidParameter(format!("Cantor product needs m + 1 <= n (m = {m}, n = {n})")));
        }
        let th = to_f64(&theta);
        let d_cantor = 2f64.ln() / (1.0 / th).ln();
        // enough levels for an error below 2^-40
        let depth = (40.0 * 2f64.ln() / (1.0 / th).ln()).ceil() as u32 + 1;
        let mut factors = vec![Factor::Cantor { theta: th, depth }];
        factors.extend(std::iter::repeat_n(Factor::Interval, m as usize));
        factors.extend(std::iter::repeat_n(Factor::Point(0.0), (n - 1 - m) as usize));
        Ok(DSetModel {
            kind: DSetKind::CantorProduct,
            n,
            d: d_cantor + m as f64,
            d_exact: None,
            factors,
            theta: Some(theta),
        })
    }

    /// Per-coordinate hull `[lo, hi]`.
    pub fn hull(&self) -> Vec<(f64, f64)> {
        self.factors.iter().map(Factor::hull).collect()
    }
}

/// Euclidean distance from `x` to `U`.
pub fn distance(x: &[f64], u: &DSetModel) -> f64 {
    squared_distance(x, u).sqrt()
}

pub fn squared_distance(x: &[f64], u: &DSetModel) -> f64 {
    assert_eq!(x.len(), u.factors.len(), "point dimension does not match the d-set");
    x.iter()
        .zip(&u.factors)
        .map(|(xi, f)| {
            let t = f.dist(*xi);
            t * t
        })
        .sum()
}

/// `w_j(x) = (1 + 2^j dist(x, U))^{s_w}`.
pub fn weight(j: u32, x: &[f64], u: &DSetModel, s_w: f64) -> f64 {
    (1.0 + 2f64.powi(j as i32) * distance(x, u)).powf(s_w)
}
