//! Decision tables for the decay exponents of approximation, Gelfand and
//! Kolmogorov numbers of the embedding.
//!
//! Every table is total: a parameter point is either not compact, covered by
//! exactly one clause, on the boundary of a clause (some strict inequality
//! holds with equality), or in a region no clause covers. The last two
//! outcomes are reported as [`RateKind::Open`] with a note.
//!
//! The summability exponents `q₁, q₂` are never read.
//!
//! ```
//! use microwidth::prelude::*;
//!
//! let p = EmbeddingParams::from_exponents(
//!     "4/3".parse().unwrap(), "4".parse().unwrap(),
//!     "1".parse().unwrap(), "1".parse().unwrap(),
//!     q(2, 1), q(3, 1), q(1, 1), 2,
//! ).unwrap();
//! let r = rate_approximation(&p);
//! assert_eq!(r.kappa, Some(q(7, 4)));
//! assert_eq!(r.case_id.as_deref(), Some("T1.iii"));
//! ```

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::params::{is_compact, EmbeddingParams};
use crate::rational::{q, Exponent, Q};

/// Verdict class of a decision table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RateKind {
    NotCompact,
    Exact,
    TwoSided,
    Open,
}

impl fmt::Display for RateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RateKind::NotCompact => "not-compact",
            RateKind::Exact => "exact",
            RateKind::TwoSided => "two-sided",
            RateKind::Open => "open",
        })
    }
}

impl std::str::FromStr for RateKind {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "not-compact" => Ok(RateKind::NotCompact),
            "exact" => Ok(RateKind::Exact),
            "two-sided" => Ok(RateKind::TwoSided),
            "open" => Ok(RateKind::Open),
            other => Err(crate::error::Error::Parse(format!("unknown rate kind {other:?}"))),
        }
    }
}

/// Result of one decision table.
///
/// `kappa_lb` is the exponent of the lower estimate `s_k ⪰ k^{-kappa_lb}`,
/// `kappa_ub` that of the upper estimate `s_k ⪯ k^{-kappa_ub}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateResult {
    pub kind: RateKind,
    pub kappa: Option<Q>,
    pub kappa_lb: Option<Q>,
    pub kappa_ub: Option<Q>,
    pub case_id: Option<String>,
    pub notes: String,
}

impl RateResult {
    fn not_compact() -> Self {
        RateResult {
            kind: RateKind::NotCompact,
            kappa: None,
            kappa_lb: None,
            kappa_ub: None,
            case_id: None,
            notes: "embedding is not compact".into(),
        }
    }

    fn open(notes: String) -> Self {
        RateResult {
            kind: RateKind::Open,
            kappa: None,
            kappa_lb: None,
            kappa_ub: None,
            case_id: None,
            notes,
        }
    }
}

/// Three-valued truth for strict-inequality hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    True,
    /// No inequality fails, but at least one holds with equality.
    Boundary,
    False,
}

impl Tri {
    fn crisp(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::Boundary, _) | (_, Tri::Boundary) => Tri::Boundary,
            _ => Tri::True,
        }
    }

    fn or(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::Boundary, _) | (_, Tri::Boundary) => Tri::Boundary,
            _ => Tri::False,
        }
    }
}

/// `a < b`, with equality reported as a boundary.
fn lt(a: Q, b: Q) -> Tri {
    if a < b {
        Tri::True
    } else if a == b {
        Tri::Boundary
    } else {
        Tri::False
    }
}

fn all(items: &[Tri]) -> Tri {
    items.iter().fold(Tri::True, |acc, t| acc.and(*t))
}

enum Verdict {
    Exact(Q),
    TwoSided { lb: Q, ub: Q },
}

struct Clause {
    id: &'static str,
    cond: Tri,
    /// The clause is void for this parameter point (vanishing case).
    suppressed: bool,
    verdict: Box<dyn Fn() -> Verdict>,
}

fn clause(id: &'static str, cond: Tri, verdict: impl Fn() -> Verdict + 'static) -> Clause {
    Clause {
        id,
        cond,
        suppressed: false,
        verdict: Box::new(verdict),
    }
}

/// Scalars shared by all three tables.
#[derive(Clone, Copy)]
struct Ctx {
    p1: Exponent,
    p2: Exponent,
    r1: Q,
    r2: Q,
    r1c: Q,
    d: Q,
    n: Q,
    delta: Q,
    sp: Q,
    m: Q,
}

impl Ctx {
    fn new(p: &EmbeddingParams) -> Self {
        Ctx {
            p1: p.p1(),
            p2: p.p2(),
            r1: p.r1(),
            r2: p.r2(),
            r1c: p.r1_conj(),
            d: p.d,
            n: p.nq(),
            delta: p.delta,
            sp: p.s_prime,
            m: p.min_ratio(),
        }
    }

    fn two() -> Exponent {
        Exponent::Finite(q(2, 1))
    }

    fn one() -> Exponent {
        Exponent::Finite(Q::one())
    }

    /// `p₁ < 2 < p₂`.
    fn mixed(&self) -> bool {
        self.p1 < Self::two() && Self::two() < self.p2
    }

    /// `p̃ < p₂ < p₁`.
    fn clause_ii(&self) -> Tri {
        Tri::crisp(self.p2 < self.p1).and(lt(self.r2, self.m + self.r1))
    }

    /// `min(δ/d, x)` with `δ/d = +∞` for `d = 0`.
    fn min_delta_d(&self, x: Q) -> Q {
        if self.d.is_zero() {
            x
        } else {
            std::cmp::min(self.delta / self.d, x)
        }
    }

    /// The restriction block shared by the `s'/n · t/2` clauses, with every
    /// threshold scaled by `r` (e.g. `r = 1/t`).
    fn weight_clause(&self, r: Q) -> Tri {
        let two_d_n = q(2, 1) * self.d - self.n;
        let a = lt(self.delta, self.d * r).and(lt(self.delta - self.sp, two_d_n * r));
        let b = lt(self.delta + self.sp, self.n * r).and(lt(two_d_n * r, self.delta - self.sp));
        lt(self.sp, self.delta).and(a.or(b))
    }

    fn besides_a(&self, r: Q) -> Tri {
        let two_d_n = q(2, 1) * self.d - self.n;
        all(&[
            lt(self.delta, self.sp),
            lt(self.delta, self.d * r),
            lt(self.sp, self.n * r),
            lt(self.delta - self.sp, two_d_n * r),
        ])
    }

    fn besides_b(&self, r: Q) -> Tri {
        let two_d_n = q(2, 1) * self.d - self.n;
        all(&[
            lt(self.delta, self.sp),
            lt(self.delta + self.sp, self.n * r),
            lt(two_d_n * r, self.delta - self.sp),
        ])
    }

    /// Interval of the first two-sided statement; `half_t` is `t/2`.
    fn verdict_a(&self, half_t: Q) -> Verdict {
        let ub = half_t * self.min_delta_d((self.delta + self.sp) / (q(2, 1) * self.n));
        Verdict::TwoSided { lb: half_t * self.m, ub }
    }

    fn verdict_b(&self, half_t: Q) -> Verdict {
        let t_over_n = q(2, 1) * half_t / self.n;
        let inner = std::cmp::min(self.delta, (self.delta + self.sp) / q(4, 1));
        Verdict::TwoSided {
            lb: half_t * self.m,
            ub: t_over_n * inner,
        }
    }
}

fn half_recip(r: Q) -> Q {
    (q(2, 1) * r).recip()
}

fn approximation_clauses(c: Ctx, inv_t: Q) -> Vec<Clause> {
    let two = Ctx::two();
    let vanishing = c.p1 <= Ctx::one() && c.p2.is_infinite();
    let mixed = Tri::crisp(c.mixed());
    let i = Tri::crisp((c.p1 <= c.p2 && c.p2 <= two) || (two <= c.p1 && c.p1 <= c.p2));
    let mut out = vec![
        clause("T1.i", i, move || Verdict::Exact(c.m)),
        clause("T1.ii", c.clause_ii(), move || Verdict::Exact(c.m + c.r1 - c.r2)),
        clause("T1.iii", mixed.and(lt(inv_t, c.m)), move || {
            Verdict::Exact(c.m + q(1, 2) - inv_t)
        }),
    ];
    let mut iv = clause("T1.iv", mixed.and(c.weight_clause(inv_t)), move || {
        Verdict::Exact(c.sp / c.n * half_recip(inv_t))
    });
    let mut bi = clause("T1.besides.i", mixed.and(c.besides_a(inv_t)), move || {
        c.verdict_a(half_recip(inv_t))
    });
    let mut bii = clause("T1.besides.ii", mixed.and(c.besides_b(inv_t)), move || {
        c.verdict_b(half_recip(inv_t))
    });
    iv.suppressed = vanishing;
    bi.suppressed = vanishing;
    bii.suppressed = vanishing;
    out.extend([iv, bi, bii]);
    out
}

fn kolmogorov_clauses(c: Ctx, theta: Option<Q>) -> Vec<Clause> {
    let two = Ctx::two();
    let r2 = c.r2;
    let vanishing = c.p2.is_infinite();
    let mixed = Tri::crisp(c.mixed());
    let upper = Tri::crisp(two <= c.p1 && c.p1 < c.p2);
    // θ/p₂; θ exists whenever p₂ > 2, which the clauses using it require
    let tr = theta.map(|t| t * r2).unwrap_or_else(Q::zero);
    let i = Tri::crisp((c.p1 <= c.p2 && c.p2 <= two) || (two < c.p1 && c.p1 == c.p2));
    let mut out = vec![
        clause("T2.i", i, move || Verdict::Exact(c.m)),
        clause("T2.ii", c.clause_ii(), move || Verdict::Exact(c.m + c.r1 - c.r2)),
        clause("T2.iii", mixed.and(lt(r2, c.m)), move || {
            Verdict::Exact(c.m + q(1, 2) - r2)
        }),
    ];
    let mut iv = clause("T2.iv", mixed.and(c.weight_clause(r2)), move || {
        Verdict::Exact(c.sp / c.n * half_recip(r2))
    });
    let v = clause("T2.v", upper.and(lt(tr, c.m)), move || {
        Verdict::Exact(c.m + c.r1 - c.r2)
    });
    let mut vi = clause("T2.vi", upper.and(c.weight_clause(tr)), move || {
        Verdict::Exact(c.sp / c.n * half_recip(r2))
    });
    let mut bia = clause("T2.besides.i.a", mixed.and(c.besides_a(r2)), move || {
        c.verdict_a(half_recip(r2))
    });
    let mut bib = clause("T2.besides.i.b", mixed.and(c.besides_b(r2)), move || {
        c.verdict_b(half_recip(r2))
    });
    let mut biia = clause("T2.besides.ii.a", upper.and(c.besides_a(tr)), move || {
        c.verdict_a(half_recip(r2))
    });
    let mut biib = clause("T2.besides.ii.b", upper.and(c.besides_b(tr)), move || {
        c.verdict_b(half_recip(r2))
    });
    for cl in [&mut iv, &mut vi, &mut bia, &mut bib, &mut biia, &mut biib] {
        cl.suppressed = vanishing;
    }
    out.extend([iv, v, vi, bia, bib, biia, biib]);
    out
}

fn gelfand_clauses(c: Ctx, theta1: Option<Q>) -> Vec<Clause> {
    let two = Ctx::two();
    let r = c.r1c;
    let vanishing = c.p1 <= Ctx::one();
    let mixed = Tri::crisp(c.mixed());
    let lower = Tri::crisp(c.p1 < c.p2 && c.p2 <= two);
    // θ₁/p₁'; θ₁ exists whenever p₁ < 2
    let tr = theta1.map(|t| t * r).unwrap_or_else(Q::zero);
    let i = Tri::crisp((two <= c.p1 && c.p1 <= c.p2) || (c.p1 == c.p2 && c.p1 < two));
    let mut out = vec![
        clause("T3.i", i, move || Verdict::Exact(c.m)),
        clause("T3.ii", c.clause_ii(), move || Verdict::Exact(c.m + c.r1 - c.r2)),
        clause("T3.iii", mixed.and(lt(r, c.m)), move || {
            Verdict::Exact(c.m + c.r1 - q(1, 2))
        }),
    ];
    let mut iv = clause("T3.iv", mixed.and(c.weight_clause(r)), move || {
        Verdict::Exact(c.sp / c.n * half_recip(r))
    });
    let v = clause("T3.v", lower.and(lt(tr, c.m)), move || {
        Verdict::Exact(c.m + c.r1 - c.r2)
    });
    let mut vi = clause("T3.vi", lower.and(c.weight_clause(tr)), move || {
        Verdict::Exact(c.sp / c.n * half_recip(r))
    });
    let mut bia = clause("T3.besides.i.a", mixed.and(c.besides_a(r)), move || {
        c.verdict_a(half_recip(r))
    });
    let mut bib = clause("T3.besides.i.b", mixed.and(c.besides_b(r)), move || {
        c.verdict_b(half_recip(r))
    });
    let mut biia = clause("T3.besides.ii.a", lower.and(c.besides_a(tr)), move || {
        c.verdict_a(half_recip(r))
    });
    let mut biib = clause("T3.besides.ii.b", lower.and(c.besides_b(tr)), move || {
        c.verdict_b(half_recip(r))
    });
    for cl in [&mut iv, &mut vi, &mut bia, &mut bib, &mut biia, &mut biib] {
        cl.suppressed = vanishing;
    }
    out.extend([iv, v, vi, bia, bib, biia, biib]);
    out
}

fn decide(params: &EmbeddingParams, clauses: Vec<Clause>) -> RateResult {
    if !is_compact(params) {
        return RateResult::not_compact();
    }
    let mut boundary = Vec::new();
    let mut vanished = Vec::new();
    for cl in &clauses {
        match cl.cond {
            Tri::True if cl.suppressed => vanished.push(cl.id),
            Tri::True => {
                let mut res = match (cl.verdict)() {
                    Verdict::Exact(k) => RateResult {
                        kind: RateKind::Exact,
                        kappa: Some(k),
                        kappa_lb: None,
                        kappa_ub: None,
                        case_id: Some(cl.id.to_string()),
                        notes: String::new(),
                    },
                    Verdict::TwoSided { lb, ub } => RateResult {
                        kind: RateKind::TwoSided,
                        kappa: None,
                        kappa_lb: Some(lb),
                        kappa_ub: Some(ub),
                        case_id: Some(cl.id.to_string()),
                        notes: String::new(),
                    },
                };
                if !boundary.is_empty() {
                    res.notes = format!("on the boundary of {}", boundary.join(", "));
                }
                return res;
            }
            Tri::Boundary if !cl.suppressed => boundary.push(cl.id),
            _ => {}
        }
    }
    if !vanished.is_empty() {
        RateResult::open(format!(
            "{} vanishes for these exponents; no estimate is available",
            vanished.join(", ")
        ))
    } else if !boundary.is_empty() {
        RateResult::open(format!("region boundary of {}", boundary.join(", ")))
    } else {
        RateResult::open("region not covered by any clause; the rate may depend on q1 and q2".into())
    }
}

/// Decay exponent of the approximation numbers.
pub fn rate_approximation(params: &EmbeddingParams) -> RateResult {
    decide(params, approximation_clauses(Ctx::new(params), params.inv_t()))
}

/// Decay exponent of the Kolmogorov numbers.
pub fn rate_kolmogorov(params: &EmbeddingParams) -> RateResult {
    decide(params, kolmogorov_clauses(Ctx::new(params), params.theta))
}

/// Decay exponent of the Gelfand numbers.
pub fn rate_gelfand(params: &EmbeddingParams) -> RateResult {
    decide(params, gelfand_clauses(Ctx::new(params), params.theta1))
}

/// Which of the three widths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WidthKind {
    /// Approximation numbers `a_k`.
    Approximation,
    /// Gelfand numbers `c_k`.
    Gelfand,
    /// Kolmogorov numbers `d_k`.
    Kolmogorov,
}

impl WidthKind {
    pub const ALL: [WidthKind; 3] = [WidthKind::Approximation, WidthKind::Gelfand, WidthKind::Kolmogorov];

    pub fn letter(&self) -> char {
        match self {
            WidthKind::Approximation => 'a',
            WidthKind::Gelfand => 'c',
            WidthKind::Kolmogorov => 'd',
        }
    }
}

impl fmt::Display for WidthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl std::str::FromStr for WidthKind {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "a" | "approximation" => Ok(WidthKind::Approximation),
            "c" | "gelfand" => Ok(WidthKind::Gelfand),
            "d" | "kolmogorov" => Ok(WidthKind::Kolmogorov),
            other => Err(crate::error::Error::Parse(format!("unknown width kind {other:?}"))),
        }
    }
}

pub fn rate(kind: WidthKind, params: &EmbeddingParams) -> RateResult {
    match kind {
        WidthKind::Approximation => rate_approximation(params),
        WidthKind::Gelfand => rate_gelfand(params),
        WidthKind::Kolmogorov => rate_kolmogorov(params),
    }
}

/// Ids of every clause whose hypothesis holds strictly, suppressed or not.
/// A well-formed table never reports more than one.
pub fn fired_clauses(kind: WidthKind, params: &EmbeddingParams) -> Vec<&'static str> {
    let c = Ctx::new(params);
    let clauses = match kind {
        WidthKind::Approximation => approximation_clauses(c, params.inv_t()),
        WidthKind::Gelfand => gelfand_clauses(c, params.theta1),
        WidthKind::Kolmogorov => kolmogorov_clauses(c, params.theta),
    };
    clauses
        .into_iter()
        .filter(|cl| cl.cond == Tri::True)
        .map(|cl| cl.id)
        .collect()
}

/// Asymptotic equivalence of two widths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WidthRelation {
    /// `a_k ∼ c_k`
    AC,
    /// `a_k ∼ d_k`
    AD,
    /// `c_k ∼ d_k`
    CD,
}

impl fmt::Display for WidthRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WidthRelation::AC => "a~c",
            WidthRelation::AD => "a~d",
            WidthRelation::CD => "c~d",
        })
    }
}

impl std::str::FromStr for WidthRelation {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "a~c" => Ok(WidthRelation::AC),
            "a~d" => Ok(WidthRelation::AD),
            "c~d" => Ok(WidthRelation::CD),
            other => Err(crate::error::Error::Parse(format!("unknown relation {other:?}"))),
        }
    }
}

/// Relations between the three widths that follow from the tables.
pub fn compare_widths(params: &EmbeddingParams) -> BTreeSet<WidthRelation> {
    let two = Exponent::Finite(q(2, 1));
    let one = Exponent::Finite(Q::one());
    let (p1, p2) = (params.p1(), params.p2());
    let p1c = p1.conjugate();
    let m = params.min_ratio();
    let tilde_below_p2 = match params.p_tilde {
        Some(pt) => pt < p2,
        None => false,
    };
    let shrinking = tilde_below_p2 && p2 <= p1;

    let mut out = BTreeSet::new();
    let ac = (two <= p1 && p1 < p2)
        || shrinking
        || (one <= p1 && p1 < p1c && p1c <= p2 && m > params.r1_conj());
    let ad = (p1 < p2 && p2 <= two) || shrinking || (p1 < two && two < p2 && p2 <= p1c && m > params.r2());
    let cd = shrinking || (one <= p1 && p1 < p1c && p1c == p2 && m > params.r2());
    if ac {
        out.insert(WidthRelation::AC);
    }
    if ad {
        out.insert(WidthRelation::AD);
    }
    if cd {
        out.insert(WidthRelation::CD);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn e(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    fn mk(p1: &str, p2: &str, d: Q, n: u32, delta: Q, sp: Q) -> EmbeddingParams {
        EmbeddingParams::from_exponents(e(p1), e(p2), e("1"), e("1"), delta, sp, d, n).unwrap()
    }

    #[test]
    fn diagonal_clause_one() {
        let r = rate_approximation(&mk("2", "2", qi(1), 2, qi(1), qi(2)));
        assert_eq!(r.kind, RateKind::Exact);
        assert_eq!(r.kappa, Some(qi(1)));
        assert_eq!(r.case_id.as_deref(), Some("T1.i"));
    }

    #[test]
    fn approximation_mixed_regime() {
        let r = rate_approximation(&mk("4/3", "4", qi(1), 2, qi(2), qi(3)));
        assert_eq!(r.kappa, Some(q(7, 4)));
        assert_eq!(r.case_id.as_deref(), Some("T1.iii"));
    }

    #[test]
    fn equal_smoothness_below_threshold_is_open() {
        // m = 1/10 < 1/t = 1/4 and δ = s'
        let r = rate_approximation(&mk("4/3", "4", qi(1), 2, q(1, 5), q(1, 5)));
        assert_eq!(r.kind, RateKind::Open);
        assert!(r.notes.contains("boundary"), "{}", r.notes);
    }

    #[test]
    fn kolmogorov_examples() {
        let r = rate_kolmogorov(&mk("1", "4", qi(1), 2, q(3, 2), qi(2)));
        assert_eq!((r.kappa, r.case_id.as_deref()), (Some(q(5, 4)), Some("T2.iii")));
        let r = rate_kolmogorov(&mk("2", "4", qi(1), 2, qi(1), qi(4)));
        assert_eq!((r.kappa, r.case_id.as_deref()), (Some(q(5, 4)), Some("T2.v")));
        let r = rate_kolmogorov(&mk("1/2", "1/2", qi(1), 1, qi(1), qi(1)));
        assert_eq!((r.kappa, r.case_id.as_deref()), (Some(qi(1)), Some("T2.i")));
    }

    #[test]
    fn gelfand_examples() {
        let r = rate_gelfand(&mk("3", "1", qi(1), 2, qi(2), qi(4)));
        assert_eq!((r.kappa, r.case_id.as_deref()), (Some(q(4, 3)), Some("T3.ii")));
        let r = rate_gelfand(&mk("4/3", "4", qi(1), 2, qi(2), q(11, 5)));
        assert_eq!((r.kappa, r.case_id.as_deref()), (Some(q(27, 20)), Some("T3.iii")));
        let r = rate_gelfand(&mk("3/2", "3/2", qi(1), 1, qi(2), qi(1)));
        assert_eq!((r.kappa, r.case_id.as_deref()), (Some(qi(1)), Some("T3.i")));
    }

    #[test]
    fn weight_governed_clause() {
        // p₁ = 4/3, p₂ = 4, t = 4, d = 1, n = 2: δ < 1/4, δ − s' < 0
        let r = rate_approximation(&mk("4/3", "4", qi(1), 2, q(1, 5), q(1, 10)));
        assert_eq!(r.case_id.as_deref(), Some("T1.iv"));
        assert_eq!(r.kappa, Some(q(1, 10)));
    }

    #[test]
    fn vanishing_case_is_open() {
        let r = rate_approximation(&mk("1", "inf", qi(1), 2, q(1, 5), q(1, 10)));
        // 1/t = 0, so clause (iii) applies whenever the embedding is compact
        assert_eq!(r.case_id.as_deref(), Some("T1.iii"));
        let r = rate_kolmogorov(&mk("1", "inf", qi(1), 2, q(1, 5), q(1, 10)));
        assert_eq!(r.case_id.as_deref(), Some("T2.iii"));
    }

    #[test]
    fn two_sided_interval() {
        // t = 4, d = 1, n = 2: δ < s' < 1/2, δ < 1/4, δ − s' < 0
        let r = rate_approximation(&mk("4/3", "4", qi(1), 2, q(1, 10), q(1, 5)));
        assert_eq!(r.kind, RateKind::TwoSided);
        assert_eq!(r.case_id.as_deref(), Some("T1.besides.i"));
        assert!(r.kappa_ub.unwrap() <= r.kappa_lb.unwrap());
    }

    #[test]
    fn not_compact_short_circuits() {
        let r = rate_gelfand(&mk("2", "1", qi(1), 2, q(2, 5), qi(3)));
        assert_eq!(r.kind, RateKind::NotCompact);
    }

    #[test]
    fn comparisons() {
        assert!(compare_widths(&mk("2", "4", qi(1), 2, qi(1), qi(1))).contains(&WidthRelation::AC));
        assert!(compare_widths(&mk("1", "2", qi(1), 2, qi(1), qi(1))).contains(&WidthRelation::AD));
        assert_eq!(compare_widths(&mk("3", "1", qi(1), 2, qi(2), qi(4))).len(), 3);
    }
}
