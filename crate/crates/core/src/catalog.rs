//! Widths of the identity `ℓ_{p₁}^N → ℓ_{p₂}^N` and exact oracles.
//!
//! Two closed forms are exact (`(N−k+1)^{1/p₂−1/p₁}` for approximation and
//! Gelfand numbers when `p₂ ≤ p₁`). Everything else is an order bound with
//! every multiplicative constant set to 1; the [`Exactness`] tag tells which
//! side of the estimate the value represents.
//!
//! ```
//! use microwidth::prelude::*;
//!
//! let v = exact_approx_pp(Exponent::Finite(qi(2)), Exponent::Finite(qi(1)), 5, 3).unwrap();
//! assert!((v.value - 3f64.sqrt()).abs() < 1e-12);
//! assert_eq!(v.exactness, Exactness::Exact);
//! ```

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rate::WidthKind;
use crate::rational::{format_rational, q, to_f64, Exponent, Q};

/// Which side of an order estimate a value stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    Exact,
    OrderUpper,
    OrderLower,
    OrderTwoSided,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Exact => "exact",
            Exactness::OrderUpper => "upper",
            Exactness::OrderLower => "lower",
            Exactness::OrderTwoSided => "two-sided",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderValue {
    pub value: f64,
    pub exactness: Exactness,
    /// Label of the estimate the value comes from.
    pub source: String,
}

impl OrderValue {
    fn new(value: f64, exactness: Exactness, source: impl Into<String>) -> Self {
        OrderValue {
            value,
            exactness,
            source: source.into(),
        }
    }

    fn zero() -> Self {
        OrderValue::new(0.0, Exactness::Exact, "rank")
    }
}

/// Tunables of the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogOptions {
    /// Split point `N^λ` of the upper estimate for `ℓ_p^N → ℓ_∞^N`, `p ≤ 1`.
    pub lambda: Q,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions { lambda: q(1, 2) }
    }
}

/// Lower and upper model values of one width.
#[derive(Clone, Debug, PartialEq)]
pub struct WidthBounds {
    pub lower: Option<OrderValue>,
    pub upper: OrderValue,
}

impl WidthBounds {
    fn exact(v: OrderValue) -> Self {
        WidthBounds {
            lower: Some(v.clone()),
            upper: v,
        }
    }

    fn two_sided(value: f64, source: impl Into<String>) -> Self {
        WidthBounds::exact(OrderValue::new(value, Exactness::OrderTwoSided, source))
    }

    fn upper_only(value: f64, source: impl Into<String>) -> Self {
        WidthBounds {
            lower: None,
            upper: OrderValue::new(value, Exactness::OrderUpper, source),
        }
    }

    fn split(lower: f64, upper: f64, source: impl Into<String>) -> Self {
        let source = source.into();
        WidthBounds {
            lower: Some(OrderValue::new(lower, Exactness::OrderLower, source.clone())),
            upper: OrderValue::new(upper, Exactness::OrderUpper, source),
        }
    }

    fn prefixed(mut self, prefix: &str) -> Self {
        self.upper.source = format!("{prefix}{}", self.upper.source);
        if let Some(l) = self.lower.as_mut() {
            l.source = format!("{prefix}{}", l.source);
        }
        self
    }
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidParameter("width index k starts at 1".into()))
    } else {
        Ok(())
    }
}

fn shrink_value(p1: Exponent, p2: Exponent, n: u64, k: u64) -> f64 {
    let x = to_f64(&(p2.recip() - p1.recip()));
    ((n - k + 1) as f64).powf(x)
}

/// Approximation numbers of `ℓ_{p₁}^N → ℓ_{p₂}^N` for `p₂ < p₁`, exactly.
pub fn exact_approx_pp(p1: Exponent, p2: Exponent, n: u64, k: u64) -> Result<OrderValue> {
    check_k(k)?;
    if p2 >= p1 {
        return Err(Error::InvalidParameter(format!("need p2 < p1, got p1 = {p1}, p2 = {p2}")));
    }
    if k > n {
        return Ok(OrderValue::zero());
    }
    Ok(OrderValue::new(shrink_value(p1, p2, n, k), Exactness::Exact, "an2"))
}

/// Gelfand numbers of `ℓ_{p₁}^N → ℓ_{p₂}^N` for `p₂ ≤ p₁`, exactly.
pub fn exact_gelfand_pp(p1: Exponent, p2: Exponent, n: u64, k: u64) -> Result<OrderValue> {
    check_k(k)?;
    if p2 > p1 {
        return Err(Error::InvalidParameter(format!("need p2 <= p1, got p1 = {p1}, p2 = {p2}")));
    }
    if k > n {
        return Ok(OrderValue::zero());
    }
    Ok(OrderValue::new(shrink_value(p1, p2, n, k), Exactness::Exact, "gn021ify"))
}

/// `min(1, N^r k^{-1/2})`.
fn xi(n: u64, k: u64, r: &Q) -> f64 {
    ((n as f64).powf(to_f64(r)) / (k as f64).sqrt()).min(1.0)
}

fn quarter(n: u64, k: u64) -> bool {
    4 * k <= n
}

/// `min{1, (ln(N/(k−1)) + 1)/(k−1)}`, equal to 1 at `k = 1`.
fn log_ratio_gelfand(n: u64, k: u64) -> f64 {
    if k == 1 {
        return 1.0;
    }
    let km = (k - 1) as f64;
    (((n as f64 / km).ln() + 1.0) / km).min(1.0)
}

/// `k^{-1/2} (ln(c N/k))^{3/2}`.
fn log_cube(n: u64, k: u64, c: f64) -> f64 {
    (c * n as f64 / k as f64).ln().powf(1.5) / (k as f64).sqrt()
}

fn two() -> Exponent {
    Exponent::Finite(q(2, 1))
}

fn one() -> Exponent {
    Exponent::Finite(q(1, 1))
}

fn approximation(p1: Exponent, p2: Exponent, n: u64, k: u64, opts: &CatalogOptions) -> WidthBounds {
    if p1 == p2 {
        return WidthBounds::exact(OrderValue::new(1.0, Exactness::Exact, "identity"));
    }
    if p2 < p1 {
        return WidthBounds::exact(OrderValue::new(shrink_value(p1, p2, n, k), Exactness::Exact, "an2"));
    }
    if p2 <= two() || two() <= p1 {
        return if quarter(n, k) {
            WidthBounds::two_sided(1.0, "an1(i)")
        } else {
            WidthBounds::upper_only(1.0, "norm")
        };
    }
    // p₁ < 2 < p₂
    if p1 <= one() && p2.is_infinite() {
        let lambda = to_f64(&opts.lambda);
        let source = format!("an1inf(lambda={})", format_rational(&opts.lambda));
        let kf = k as f64;
        let upper = if kf <= (n as f64).powf(lambda) { 1.0 } else { kf.powf(-0.5) };
        return if 2 * k <= n {
            WidthBounds::split(kf.powf(-0.5).min(upper), upper, source)
        } else {
            WidthBounds::upper_only(upper, source)
        };
    }
    let inv_t = std::cmp::max(p1.conjugate().recip(), p2.recip());
    let v = xi(n, k, &inv_t);
    let label = if p1 < one() { "an1(iii)" } else { "an1(ii)" };
    if quarter(n, k) {
        WidthBounds::two_sided(v, label)
    } else {
        WidthBounds::upper_only(v, "an3")
    }
}

fn kolmogorov(p1: Exponent, p2: Exponent, n: u64, k: u64) -> WidthBounds {
    if p1 == p2 {
        return WidthBounds::two_sided(1.0, "identity");
    }
    if p2 < p1 {
        return WidthBounds::two_sided(shrink_value(p1, p2, n, k), "kn021ify");
    }
    if p1 < one() {
        let lifted = std::cmp::min(one(), p2);
        return kolmogorov(lifted, p2, n, k).prefixed("knify(iii)+");
    }
    // 1 ≤ p₁ < p₂
    if p2 <= two() {
        return if quarter(n, k) {
            WidthBounds::two_sided(1.0, "kn1(i)")
        } else {
            WidthBounds::upper_only(1.0, "norm")
        };
    }
    if p2.is_infinite() {
        if p1 < two() {
            let at_quarter = (n / 4).max(1);
            if quarter(n, k) {
                let up = log_cube(n, k, std::f64::consts::E).min(1.0);
                return WidthBounds::split((k as f64).powf(-0.5).min(up), up, "knify(i)");
            }
            let envelope = if n >= 4 {
                log_cube(n, at_quarter, std::f64::consts::E)
            } else {
                1.0
            };
            let up = log_cube(n, k, 4.0 * std::f64::consts::E).min(envelope).min(1.0);
            return WidthBounds::upper_only(up, "knifyupp12");
        }
        let p = p1.to_f64();
        let up = if k == 1 {
            1.0
        } else {
            let km = (k - 1) as f64;
            ((1.0 + n as f64 / km).ln() / km).powf(1.0 / p).min(1.0)
        };
        return WidthBounds::split(up / 4.0, up, "knify(ii)");
    }
    // 1 ≤ p₁ < p₂ < ∞, p₂ > 2
    let r2 = p2.recip();
    if p1 < two() {
        let v = xi(n, k, &r2);
        return if quarter(n, k) {
            WidthBounds::two_sided(v, "kn1(ii)")
        } else {
            WidthBounds::upper_only(v, "kn3")
        };
    }
    let theta = (p1.recip() - r2) / (q(1, 2) - r2);
    WidthBounds::two_sided(xi(n, k, &r2).powf(to_f64(&theta)), "kn1(iv)")
}

fn gelfand(p1: Exponent, p2: Exponent, n: u64, k: u64) -> WidthBounds {
    if p2 <= p1 {
        return WidthBounds::exact(OrderValue::new(shrink_value(p1, p2, n, k), Exactness::Exact, "gn021ify"));
    }
    let (r1, r2) = (p1.recip(), p2.recip());
    if p1 <= one() {
        let base = log_ratio_gelfand(n, k);
        return if p2 > two() {
            let lo = base.powf(to_f64(&(r1 - r2)));
            let up = base.powf(to_f64(&(r1 - q(1, 2))));
            WidthBounds::split(lo, up, "gnupp(i)")
        } else {
            WidthBounds::two_sided(base.powf(to_f64(&(r1 - r2))), "gnupp(ii)")
        };
    }
    // 1 < p₁ < p₂
    if two() <= p1 {
        return if quarter(n, k) {
            WidthBounds::two_sided(1.0, "gn1(i)")
        } else {
            WidthBounds::upper_only(1.0, "norm")
        };
    }
    let r1c = p1.conjugate().recip();
    if two() < p2 {
        let v = xi(n, k, &r1c);
        return if quarter(n, k) {
            WidthBounds::two_sided(v, "gn1(ii)")
        } else {
            WidthBounds::upper_only(v, "kn3(dual)")
        };
    }
    let r2c = p2.conjugate().recip();
    let theta1 = (r2c - r1c) / (q(1, 2) - r1c);
    WidthBounds::two_sided(xi(n, k, &r1c).powf(to_f64(&theta1)), "gn1(iv)")
}

/// Lower and upper model values of `s_k(id, ℓ_{p₁}^N, ℓ_{p₂}^N)`.
pub fn width_bounds(
    kind: WidthKind,
    p1: Exponent,
    p2: Exponent,
    n: u64,
    k: u64,
    opts: &CatalogOptions,
) -> Result<WidthBounds> {
    check_k(k)?;
    if n == 0 {
        return Err(Error::InvalidParameter("dimension N must be positive".into()));
    }
    if k > n {
        return Ok(WidthBounds::exact(OrderValue::zero()));
    }
    Ok(match kind {
        WidthKind::Approximation => approximation(p1, p2, n, k, opts),
        WidthKind::Kolmogorov => kolmogorov(p1, p2, n, k),
        WidthKind::Gelfand => gelfand(p1, p2, n, k),
    })
}

/// Model value of `s_k(id, ℓ_{p₁}^N, ℓ_{p₂}^N)`: the common value when the
/// estimate is two-sided, the upper estimate otherwise.
pub fn order_width(
    kind: WidthKind,
    p1: Exponent,
    p2: Exponent,
    n: u64,
    k: u64,
    opts: &CatalogOptions,
) -> Result<OrderValue> {
    let b = width_bounds(kind, p1, p2, n, k, opts)?;
    match b.lower {
        Some(l) if l.value == b.upper.value => Ok(b.upper),
        _ => Ok(OrderValue {
            exactness: Exactness::OrderUpper,
            ..b.upper
        }),
    }
}

/// Exact s-numbers of a diagonal operator: the entries sorted descending.
pub fn diagonal_snumbers(sigma: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = sigma.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::InvalidParameter(format!("diagonal entry {bad} is not a nonnegative number")));
    }
    let mut out = sigma.to_vec();
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Singular values of a real matrix given by rows, sorted descending.
pub fn hilbert_snumbers(rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidParameter("matrix rows have different lengths".into()));
    }
    if nrows == 0 || ncols == 0 {
        return Ok(Vec::new());
    }
    let m = DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use approx::assert_relative_eq;

    fn e(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_relative_eq!(exact_approx_pp(e("inf"), e("1"), 10, 1).unwrap().value, 10.0);
        assert_relative_eq!(exact_approx_pp(e("7"), e("3"), 9, 9).unwrap().value, 1.0);
        assert_relative_eq!(exact_gelfand_pp(e("1"), e("1/2"), 4, 2).unwrap().value, 3.0);
        assert_relative_eq!(exact_gelfand_pp(e("3"), e("3"), 7, 2).unwrap().value, 1.0);
        assert_relative_eq!(exact_gelfand_pp(e("3"), e("1"), 1, 1).unwrap().value, 1.0);
        assert!(exact_approx_pp(e("1"), e("2"), 4, 2).is_err());
        assert_eq!(exact_approx_pp(e("2"), e("1"), 4, 5).unwrap().value, 0.0);
    }

    #[test]
    fn order_values() {
        let o = CatalogOptions::default();
        let v = order_width(WidthKind::Approximation, e("4/3"), e("4"), 16, 4, &o).unwrap();
        assert_relative_eq!(v.value, 1.0);
        assert_eq!(v.exactness, Exactness::OrderTwoSided);
        let v = order_width(WidthKind::Kolmogorov, e("2"), e("4"), 16, 16, &o).unwrap();
        assert_relative_eq!(v.value, 0.5);
        assert_eq!(v.exactness, Exactness::OrderTwoSided);
        let v = order_width(WidthKind::Gelfand, e("3/2"), e("4"), 100, 25, &o).unwrap();
        assert_relative_eq!(v.value, 100f64.powf(1.0 / 3.0) / 5.0, epsilon = 1e-12);
        assert!((v.value - 0.928).abs() < 1e-3);
    }

    #[test]
    fn lambda_is_recorded() {
        let o = CatalogOptions { lambda: q(1, 3) };
        let v = order_width(WidthKind::Approximation, e("1/2"), e("inf"), 1000, 50, &o).unwrap();
        assert_eq!(v.source, "an1inf(lambda=1/3)");
        assert_relative_eq!(v.value, 50f64.powf(-0.5));
        let v = order_width(WidthKind::Approximation, e("1"), e("inf"), 1000, 5, &o).unwrap();
        assert_relative_eq!(v.value, 1.0);
    }

    #[test]
    fn rank_property() {
        let o = CatalogOptions::default();
        for kind in WidthKind::ALL {
            let v = order_width(kind, e("3/2"), e("4"), 10, 11, &o).unwrap();
            assert_eq!((v.value, v.exactness), (0.0, Exactness::Exact));
        }
    }

    #[test]
    fn lower_never_exceeds_upper() {
        let o = CatalogOptions::default();
        let ps = ["1/2", "1", "3/2", "2", "3", "inf"];
        for kind in WidthKind::ALL {
            for a in ps {
                for b in ps {
                    for k in 1..=40 {
                        let wb = width_bounds(kind, e(a), e(b), 40, k, &o).unwrap();
                        if let Some(l) = wb.lower {
                            assert!(l.value <= wb.upper.value + 1e-12, "{kind} {a} {b} {k}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn oracles() {
        assert_eq!(diagonal_snumbers(&[4.0, 1.0, 2.0]).unwrap()[1], 2.0);
        assert_eq!(diagonal_snumbers(&[3.0, 5.0]).unwrap()[0], 5.0);
        assert!(diagonal_snumbers(&[1.0, -1.0]).is_err());
        let sv = hilbert_snumbers(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_relative_eq!(sv[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(sv[1], 1.0, epsilon = 1e-12);
        let sv = hilbert_snumbers(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_relative_eq!(sv[0], 2.0, epsilon = 1e-12);
        assert_eq!(qi(1), q(1, 1));
    }
}
