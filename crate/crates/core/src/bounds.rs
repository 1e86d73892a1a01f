//! Computable upper and lower envelopes for the widths of the truncated
//! embedding.
//!
//! The embedding is split into the block pieces `P_{j,i}`. Each piece is,
//! up to the factor `2^{-jδ-is'}`, an identity `ℓ_{p₁}^M → ℓ_{p₂}^M` with
//! `M = M_{j,i}`. An [`AllocationPlan`] hands rank `k_{j,i} − 1` to each block
//! with `Σ (k_{j,i} − 1) ≤ K − 1`, and the ρ-subadditivity of s-numbers gives
//!
//! `s_K ≤ (Σ (2^{-jδ-is'} s_{k_{j,i}}(id, ℓ_{p₁}^M, ℓ_{p₂}^M))^ρ)^{1/ρ}`, `ρ = min(1, p₂, q₂)`.
//!
//! The lower envelope restricts to one block: `s_k ≥ 2^{-jδ-is'} s_k(id, ℓ_{p₁}^M, ℓ_{p₂}^M)`.
//! All order constants are 1.
//!
//! ```
//! use microwidth::prelude::*;
//!
//! let p = EmbeddingParams::from_exponents(
//!     Exponent::Finite(qi(1)), Exponent::Finite(qi(2)),
//!     Exponent::Finite(qi(1)), Exponent::Finite(qi(1)),
//!     qi(1), qi(2), qi(1), 2,
//! ).unwrap();
//! assert_eq!(block_scale(2, 3, &p), 2f64.powi(-8));
//! ```

use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::catalog::{width_bounds, CatalogOptions};
use crate::error::{Error, Result};
use crate::params::{is_compact, rho, EmbeddingParams};
use crate::partition::BlockPartition;
use crate::rate::WidthKind;
use crate::rational::{format_rational, q, qi, to_f64, Exponent, Q};

/// `2^{-jδ-is'}`.
pub fn block_scale(j: u32, i: u32, params: &EmbeddingParams) -> f64 {
    2f64.powf(-(j as f64) * to_f64(&params.delta) - i as f64 * to_f64(&params.s_prime))
}

/// `sup_n n^{1/r} s_n` over a finite non-increasing sequence.
pub fn ideal_norm(values: &[f64], r: Q) -> Result<f64> {
    if !r.is_positive() {
        return Err(Error::InvalidParameter(format!("r = {} must be positive", format_rational(&r))));
    }
    if values.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidParameter("s-number sequence must be non-increasing".into()));
    }
    let inv_r = to_f64(&r.recip());
    Ok(values
        .iter()
        .enumerate()
        .map(|(n, s)| ((n + 1) as f64).powf(inv_r) * s)
        .fold(0.0, f64::max))
}

/// Rank allocation scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Annihilate a square of low blocks and spread the rest geometrically.
    Pq5,
    /// Diagonal cut levels `M₁..M₄` with power budgets in between.
    Pq6,
    /// Steepest descent on the combined bound.
    Greedy,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Pq5 => "pq5",
            Scheme::Pq6 => "pq6",
            Scheme::Greedy => "greedy",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pq5" => Ok(Scheme::Pq5),
            "pq6" => Ok(Scheme::Pq6),
            "greedy" => Ok(Scheme::Greedy),
            other => Err(Error::Parse(format!("unknown scheme {other:?}"))),
        }
    }
}

/// Cut levels of a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cuts {
    None,
    /// Blocks with `j, i ≤ m` are annihilated.
    Pq5 { m: i64 },
    Pq6 { m1: i64, m2: i64, m3: i64, m4: i64 },
}

/// Free parameters of the PQ6 budgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pq6Params {
    pub eps: Q,
    pub z1: Q,
    pub z2: Q,
    pub z3: Q,
    pub z4: Q,
    /// `1/t` of the table the plan follows (θ-scaled where applicable).
    pub inv_t: Q,
    /// `δ − s' < (2d − n)/t`.
    pub case_a: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AllocationPlan {
    pub budget: u64,
    pub scheme: Scheme,
    pub kind: WidthKind,
    pub cuts: Cuts,
    pub pq6: Option<Pq6Params>,
    /// `ranks[j][i] = k_{j,i} ≥ 1`.
    pub ranks: Vec<Vec<u64>>,
    /// The `k` fed into the scheme's formulas.
    pub nominal_k: u64,
    /// `(1 + Σ (k_{j,i} − 1)) / nominal_k`: the empirical rank constant.
    pub rank_constant: f64,
    /// Smallest power of two from which `M₁ < M₂` and `M₃ < M₄` (PQ6 only).
    pub k0: Option<u64>,
}

impl AllocationPlan {
    /// `Σ (k_{j,i} − 1)`.
    pub fn spent(&self) -> u64 {
        self.ranks.iter().flatten().map(|k| k - 1).sum()
    }

    pub fn rank(&self, j: u32, i: u32) -> u64 {
        self.ranks[j as usize][i as usize]
    }

    /// `1 + Σ (k_{j,i} − 1) ≤ K` and every `k_{j,i} ≥ 1`.
    pub fn is_within_budget(&self) -> bool {
        self.ranks.iter().flatten().all(|k| *k >= 1) && self.spent() < self.budget
    }
}

/// Per-block data shared by the envelope computations.
struct Blocks<'a> {
    ids: Vec<(u32, u32)>,
    sizes: Vec<u64>,
    scales: Vec<f64>,
    kind: WidthKind,
    p1: Exponent,
    p2: Exponent,
    rho: f64,
    opts: &'a CatalogOptions,
}

impl<'a> Blocks<'a> {
    fn new(partition: &BlockPartition, params: &EmbeddingParams, kind: WidthKind, opts: &'a CatalogOptions) -> Self {
        let ids: Vec<(u32, u32)> = partition.block_ids().collect();
        let sizes = ids.iter().map(|(j, i)| partition.size(*j, *i)).collect();
        let scales = ids.iter().map(|(j, i)| block_scale(*j, *i, params)).collect();
        Blocks {
            ids,
            sizes,
            scales,
            kind,
            p1: params.p1(),
            p2: params.p2(),
            rho: rho(&params.target.p, &params.target.q),
            opts,
        }
    }

    /// `(scale · upper width)^ρ` of block `b` at rank `k`.
    fn cost(&self, b: usize, k: u64) -> Result<f64> {
        let m = self.sizes[b];
        if m == 0 || k > m {
            return Ok(0.0);
        }
        let w = width_bounds(self.kind, self.p1, self.p2, m, k, self.opts)?;
        Ok((self.scales[b] * w.upper.value).powf(self.rho))
    }

    fn lower(&self, b: usize, k: u64) -> Result<Option<f64>> {
        let m = self.sizes[b];
        if m < k {
            return Ok(None);
        }
        let w = width_bounds(self.kind, self.p1, self.p2, m, k, self.opts)?;
        Ok(w.lower.map(|l| self.scales[b] * l.value))
    }
}

fn empty_ranks(partition: &BlockPartition) -> Vec<Vec<u64>> {
    vec![vec![1u64; partition.i_max as usize + 1]; partition.j_max as usize + 1]
}

/// Largest integer strictly smaller than `a`.
pub fn strict_floor(a: f64) -> i64 {
    let f = a.floor();
    if f == a {
        f as i64 - 1
    } else {
        f as i64
    }
}

fn mid(lo: Q, hi: Q) -> Q {
    (lo + hi) / qi(2)
}

/// `1/t` used by PQ6 for the given width kind, or `None` outside the
/// regimes where the construction applies.
pub fn pq6_inv_t(params: &EmbeddingParams, kind: WidthKind) -> Option<Q> {
    let two = Exponent::Finite(qi(2));
    let (p1, p2) = (params.p1(), params.p2());
    let mixed = p1 < two && two < p2;
    match kind {
        WidthKind::Approximation => mixed.then(|| params.inv_t()),
        WidthKind::Kolmogorov => {
            if mixed {
                Some(params.r2())
            } else if two <= p1 && p1 < p2 {
                params.theta.map(|t| t * params.r2())
            } else {
                None
            }
        }
        WidthKind::Gelfand => {
            if mixed {
                Some(params.r1_conj())
            } else if p1 < p2 && p2 <= two {
                params.theta1.map(|t| t * params.r1_conj())
            } else {
                None
            }
        }
    }
}

/// Chooses `ε, z₁..z₄` at sequential midpoints of the feasible intervals.
pub fn pq6_params(params: &EmbeddingParams, inv_t: Q) -> Result<Pq6Params> {
    let (delta, sp, d, n, r) = (params.delta, params.s_prime, params.d, params.nq(), inv_t);
    if !r.is_positive() {
        return Err(Error::Infeasible("1/t = 0".into()));
    }
    if sp >= n * r {
        return Err(Error::Infeasible("needs s' < n/t".into()));
    }
    let two_d_n = qi(2) * d - n;
    let diff = delta - sp;
    let eps_hi = Q::one() - sp / (n * r);
    let (eps, z1, z2, case_a) = if delta < d * r && diff < two_d_n * r {
        let z2 = mid(Q::zero(), std::cmp::min(qi(2) * (d * r - delta), qi(2) * d * r * eps_hi));
        let gap = qi(2) * (sp - delta + two_d_n * r);
        let z1_lo = std::cmp::max(Q::zero(), z2 - gap);
        let z1 = mid(z1_lo, z2);
        (z2 / (qi(2) * d * r), z1, z2, true)
    } else if delta + sp < n * r && diff > two_d_n * r {
        let u = mid(Q::zero(), qi(2) * (n * r - delta - sp));
        let v_hi = std::cmp::min(qi(2) * (diff - two_d_n * r), u);
        let v = mid(Q::zero(), v_hi);
        ((u / (qi(2) * n * r)), (u + v) / qi(2), (u - v) / qi(2), false)
    } else {
        return Err(Error::Infeasible(
            "neither delta < d/t with delta - s' < (2d-n)/t nor delta + s' < n/t with delta - s' > (2d-n)/t".into(),
        ));
    };
    let z3 = qi(2) * n * eps * r;
    let z4_lo = std::cmp::max(Q::zero(), z3 - qi(2) * (diff + n * r));
    let z4 = mid(z4_lo, z3);
    Ok(Pq6Params {
        eps,
        z1,
        z2,
        z3,
        z4,
        inv_t,
        case_a,
    })
}

/// Every strict inequality the PQ6 parameters must satisfy.
pub fn pq6_feasible(params: &EmbeddingParams, p: &Pq6Params) -> bool {
    let (delta, sp, d, n, r) = (params.delta, params.s_prime, params.d, params.nq(), p.inv_t);
    let two = qi(2);
    let two_d_n = two * d - n;
    let common = Q::zero() < p.eps
        && p.eps < Q::one()
        && [p.z1, p.z2, p.z3, p.z4].iter().all(|z| z.is_positive())
        && sp + p.z3 / two < n * r
        && Q::zero() < (p.z3 - p.z4) / two
        && (p.z3 - p.z4) / two < delta - sp + n * r
        && p.z3 / (two * n * r) == p.eps;
    let case = if p.case_a {
        delta + p.z2 / two < d * r
            && Q::zero() < (p.z2 - p.z1) / two
            && (p.z2 - p.z1) / two < sp - delta + two_d_n * r
            && p.z2 / (two * d * r) == p.eps
    } else {
        delta + sp + (p.z1 + p.z2) / two < n * r
            && Q::zero() < (p.z1 - p.z2) / two
            && (p.z1 - p.z2) / two < delta - sp + (n - two * d) * r
            && (p.z1 + p.z2) / (two * n * r) == p.eps
    };
    common && case
}

/// Cut levels `M₁..M₄` for the nominal rank `k`.
pub fn pq6_cuts(k: u64, params: &EmbeddingParams, p: &Pq6Params) -> Cuts {
    if k < 2 {
        return Cuts::Pq6 {
            m1: -1,
            m2: -1,
            m3: -1,
            m4: -1,
        };
    }
    let lk = (k as f64).log2();
    let d = to_f64(&params.d);
    let n = params.n as f64;
    let r = to_f64(&p.inv_t);
    let two_d = qi(2) * params.d;
    let m1 = if two_d < params.nq() {
        strict_floor(lk / (n / 2.0))
    } else if two_d > params.nq() {
        strict_floor(lk / d)
    } else {
        strict_floor(lk / d - lk.log2() / d)
    };
    let m2 = if p.case_a {
        strict_floor(lk / (2.0 * d * r))
    } else {
        strict_floor(lk / (n * r))
    };
    let m3 = strict_floor(lk / n);
    let m4 = strict_floor(lk / (2.0 * n * r));
    Cuts::Pq6 { m1, m2, m3, m4 }
}

/// Smallest power of two `K₀` with `M₁ < M₂`, `M₃ < M₄` for every power of
/// two from `K₀` up to `2^62`.
pub fn pq6_k0(params: &EmbeddingParams, p: &Pq6Params) -> Option<u64> {
    let ordered = |e: u32| match pq6_cuts(1u64 << e, params, p) {
        Cuts::Pq6 { m1, m2, m3, m4 } => m1 < m2 && m3 < m4,
        _ => false,
    };
    if !ordered(62) {
        return None;
    }
    let last_bad = (1..62).rev().find(|e| !ordered(*e));
    Some(1u64 << last_bad.map_or(1, |e| e + 1))
}

fn pq6_ranks(partition: &BlockPartition, params: &EmbeddingParams, p: &Pq6Params, k: u64) -> (Vec<Vec<u64>>, Cuts) {
    let cuts = pq6_cuts(k, params, p);
    let Cuts::Pq6 { m1, m2, m3, m4 } = cuts else {
        unreachable!()
    };
    let mut ranks = empty_ranks(partition);
    let base = (k as f64).powf(1.0 - to_f64(&p.eps));
    let (z1, z2, z3, z4) = (to_f64(&p.z1), to_f64(&p.z2), to_f64(&p.z3), to_f64(&p.z4));
    for (j, i) in partition.block_ids() {
        let m = partition.size(j, i);
        let s = (i + j) as i64;
        let rank = if i < j {
            if s <= m1 {
                m + 1
            } else if s <= m2 {
                strict_floor(base * 2f64.powf(i as f64 * z1 + j as f64 * z2)).max(1) as u64
            } else {
                1
            }
        } else if s <= m3 {
            m + 1
        } else if s <= m4 {
            strict_floor(base * 2f64.powf(i as f64 * z3 + j as f64 * z4)).max(1) as u64
        } else {
            1
        };
        ranks[j as usize][i as usize] = rank.clamp(1, m + 1);
    }
    (ranks, cuts)
}

fn pq5_ranks(partition: &BlockPartition, k: u64) -> (Vec<Vec<u64>>, Cuts) {
    let budget = k - 1;
    let square = |m: i64| -> u64 {
        if m < 0 {
            return 0;
        }
        let m = m as u32;
        (0..=m.min(partition.j_max))
            .flat_map(|j| (0..=m.min(partition.i_max)).map(move |i| (j, i)))
            .map(|(j, i)| partition.size(j, i))
            .sum()
    };
    let max_m = partition.j_max.max(partition.i_max) as i64;
    let mut m = -1i64;
    while m < max_m && square(m + 1) <= budget / 2 {
        m += 1;
    }
    let mut ranks = empty_ranks(partition);
    let mut used = 0u64;
    for (j, i) in partition.block_ids() {
        if (j as i64) <= m && (i as i64) <= m {
            let size = partition.size(j, i);
            ranks[j as usize][i as usize] = size + 1;
            used += size;
        }
    }
    let rest = budget - used;
    let level = |j: u32, i: u32| (j.max(i) as i64 - m).max(0) as u32;
    let mut per_level = std::collections::BTreeMap::<u32, u64>::new();
    for (j, i) in partition.block_ids() {
        let l = level(j, i);
        if l >= 1 {
            *per_level.entry(l).or_default() += 1;
        }
    }
    for (j, i) in partition.block_ids() {
        let l = level(j, i);
        if l == 0 {
            continue;
        }
        let share = (rest as f64 * 2f64.powi(-(l as i32)) / per_level[&l] as f64).floor() as u64;
        let size = partition.size(j, i);
        ranks[j as usize][i as usize] = (1 + share).min(size + 1);
    }
    (ranks, Cuts::Pq5 { m })
}

fn cover_all(partition: &BlockPartition) -> Vec<Vec<u64>> {
    let mut ranks = empty_ranks(partition);
    for (j, i) in partition.block_ids() {
        ranks[j as usize][i as usize] = partition.size(j, i) + 1;
    }
    ranks
}

/// Best step for one block: `(gain per unit, step, gain)`.
fn best_step(blocks: &Blocks, b: usize, k: u64, remaining: u64, unit: u64) -> Result<Option<(f64, u64, f64)>> {
    let m = blocks.sizes[b];
    if k > m || remaining == 0 {
        return Ok(None);
    }
    let now = blocks.cost(b, k)?;
    if now == 0.0 {
        return Ok(None);
    }
    let cover = m + 1 - k;
    let mut best: Option<(f64, u64, f64)> = None;
    let mut consider = |step: u64, gain: f64| {
        let ratio = gain / step as f64;
        if gain > 0.0 && best.is_none_or(|(r, s, _)| ratio > r || (ratio == r && step > s)) {
            best = Some((ratio, step, gain));
        }
    };
    let mut step = unit;
    while step < cover && step <= remaining {
        consider(step, now - blocks.cost(b, k + step)?);
        step = step.saturating_mul(2);
    }
    if cover <= remaining {
        consider(cover, now);
    }
    Ok(best)
}

fn greedy_ranks(partition: &BlockPartition, blocks: &Blocks, k: u64) -> Result<Vec<Vec<u64>>> {
    let mut ranks = empty_ranks(partition);
    let mut remaining = k - 1;
    let unit = (remaining / 4096).max(1);
    let mut cur: Vec<u64> = vec![1; blocks.ids.len()];
    let mut cand: Vec<Option<(f64, u64, f64)>> = (0..blocks.ids.len())
        .map(|b| best_step(blocks, b, 1, remaining, unit))
        .collect::<Result<_>>()?;
    loop {
        let pick = cand
            .iter()
            .enumerate()
            .filter_map(|(b, c)| c.map(|c| (b, c)))
            .fold(None::<(usize, (f64, u64, f64))>, |acc, (b, c)| match acc {
                Some((_, a)) if a.0 >= c.0 => acc,
                _ => Some((b, c)),
            });
        let Some((b, (_, step, _))) = pick else { break };
        cur[b] += step;
        remaining -= step;
        // steps that no longer fit the budget must be re-evaluated
        for (bb, c) in cand.iter_mut().enumerate() {
            if bb == b || c.is_some_and(|(_, s, _)| s > remaining) {
                *c = best_step(blocks, bb, cur[bb], remaining, unit)?;
            }
        }
        if remaining == 0 {
            break;
        }
    }
    for (b, (j, i)) in blocks.ids.iter().enumerate() {
        ranks[*j as usize][*i as usize] = cur[b];
    }
    Ok(ranks)
}

/// Distributes the rank budget `K` over the blocks.
pub fn allocate(
    k: u64,
    partition: &BlockPartition,
    params: &EmbeddingParams,
    scheme: Scheme,
    kind: WidthKind,
    opts: &CatalogOptions,
) -> Result<AllocationPlan> {
    if k == 0 {
        return Err(Error::InvalidParameter("rank budget K must be at least 1".into()));
    }
    if !is_compact(params) {
        return Err(Error::InvalidParameter("allocation needs a compact embedding".into()));
    }
    let mut plan = AllocationPlan {
        budget: k,
        scheme,
        kind,
        cuts: Cuts::None,
        pq6: None,
        ranks: empty_ranks(partition),
        nominal_k: k,
        rank_constant: 1.0,
        k0: None,
    };
    let total = partition.total_dimension();
    if k > total {
        plan.ranks = cover_all(partition);
    } else {
        match scheme {
            Scheme::Pq5 => {
                let (ranks, cuts) = pq5_ranks(partition, k);
                plan.ranks = ranks;
                plan.cuts = cuts;
            }
            Scheme::Pq6 => {
                let inv_t = pq6_inv_t(params, kind)
                    .ok_or_else(|| Error::Infeasible(format!("no PQ6 construction for {kind}-numbers in this regime")))?;
                let p = pq6_params(params, inv_t)?;
                let spent = |kk: u64| -> u64 {
                    pq6_ranks(partition, params, &p, kk).0.iter().flatten().map(|x| x - 1).sum()
                };
                let (mut lo, mut hi) = (1u64, k.max(2));
                while spent(hi) < k && hi < u64::MAX / 4 {
                    lo = hi;
                    hi *= 2;
                }
                while hi - lo > 1 {
                    let m = lo + (hi - lo) / 2;
                    if spent(m) < k {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
                let (ranks, cuts) = pq6_ranks(partition, params, &p, lo);
                plan.ranks = ranks;
                plan.cuts = cuts;
                plan.nominal_k = lo;
                plan.pq6 = Some(p);
                plan.k0 = pq6_k0(params, &p);
            }
            Scheme::Greedy => {
                let blocks = Blocks::new(partition, params, kind, opts);
                plan.ranks = greedy_ranks(partition, &blocks, k)?;
            }
        }
    }
    plan.rank_constant = (1 + plan.spent()) as f64 / plan.nominal_k as f64;
    debug_assert!(plan.is_within_budget());
    Ok(plan)
}

/// `(Σ (2^{-jδ-is'} s_{k_{j,i}}(id))^ρ)^{1/ρ}` for the plan.
pub fn upper_bound(
    plan: &AllocationPlan,
    partition: &BlockPartition,
    params: &EmbeddingParams,
    opts: &CatalogOptions,
) -> Result<f64> {
    let blocks = Blocks::new(partition, params, plan.kind, opts);
    let mut sum = 0.0;
    for (b, (j, i)) in blocks.ids.iter().enumerate() {
        sum += blocks.cost(b, plan.rank(*j, *i))?;
    }
    Ok(sum.powf(1.0 / blocks.rho))
}

/// `max_{M_{j,i} ≥ k} 2^{-jδ-is'} s_k(id, ℓ_{p₁}^{M_{j,i}}, ℓ_{p₂}^{M_{j,i}})` with
/// the lower model values of the catalog; 0 when no block qualifies.
pub fn lower_bound(
    k: u64,
    partition: &BlockPartition,
    params: &EmbeddingParams,
    kind: WidthKind,
    opts: &CatalogOptions,
) -> Result<f64> {
    let blocks = Blocks::new(partition, params, kind, opts);
    let mut best = 0.0f64;
    for b in 0..blocks.ids.len() {
        if let Some(v) = blocks.lower(b, k)? {
            best = best.max(v);
        }
    }
    Ok(best)
}

/// Provenance of a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveRole {
    Upper,
    Lower,
    Exact,
}

impl fmt::Display for CurveRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveRole::Upper => "upper",
            CurveRole::Lower => "lower",
            CurveRole::Exact => "exact",
        })
    }
}

impl std::str::FromStr for CurveRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "upper" => Ok(CurveRole::Upper),
            "lower" => Ok(CurveRole::Lower),
            "exact" => Ok(CurveRole::Exact),
            other => Err(Error::Parse(format!("unknown curve role {other:?}"))),
        }
    }
}

/// `(k, value)` pairs with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCurve {
    pub points: Vec<(u64, f64)>,
    pub role: CurveRole,
    /// Scheme label, `"oracle"` for exact curves, `"block"` for lower ones.
    pub scheme: String,
}

impl BoundCurve {
    pub fn new(points: Vec<(u64, f64)>, role: CurveRole, scheme: impl Into<String>) -> Self {
        BoundCurve {
            points,
            role,
            scheme: scheme.into(),
        }
    }

    pub fn value_at(&self, k: u64) -> Option<f64> {
        self.points.iter().find(|p| p.0 == k).map(|p| p.1)
    }

    /// CSV rows `k,value,role,scheme` (no header).
    pub fn csv_rows(&self) -> String {
        self.points
            .iter()
            .map(|(k, v)| format!("{k},{v:e},{},{}\n", self.role, self.scheme))
            .collect()
    }

    /// CSV with header for a set of curves.
    pub fn to_csv(curves: &[BoundCurve]) -> String {
        let mut s = String::from("k,value,role,scheme\n");
        for c in curves {
            s.push_str(&c.csv_rows());
        }
        s
    }

    /// Parses the output of [`BoundCurve::to_csv`], one curve per
    /// `(role, scheme)` pair in order of first appearance.
    pub fn from_csv(text: &str) -> Result<Vec<BoundCurve>> {
        let mut out: Vec<BoundCurve> = Vec::new();
        for (no, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("curve row {}: {line:?}", no + 1));
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(bad());
            }
            let k: u64 = cols[0].trim().parse().map_err(|_| bad())?;
            let v: f64 = cols[1].trim().parse().map_err(|_| bad())?;
            let role: CurveRole = cols[2].parse()?;
            let scheme = cols[3].trim().to_string();
            match out.iter_mut().find(|c| c.role == role && c.scheme == scheme) {
                Some(c) => c.points.push((k, v)),
                None => out.push(BoundCurve::new(vec![(k, v)], role, scheme)),
            }
        }
        Ok(out)
    }
}

/// Roughly `points` integers spaced geometrically in `[k_min, k_max]`.
pub fn geometric_grid(k_min: u64, k_max: u64, points: usize) -> Vec<u64> {
    if k_min >= k_max || points < 2 {
        return vec![k_min.max(1)];
    }
    let (a, b) = ((k_min.max(1) as f64).ln(), (k_max as f64).ln());
    let mut out: Vec<u64> = (0..points)
        .map(|s| (a + (b - a) * s as f64 / (points - 1) as f64).exp().round() as u64)
        .map(|k| k.clamp(k_min.max(1), k_max))
        .collect();
    out.dedup();
    out
}

/// Upper envelope over a k-grid, evaluated in parallel.
pub fn upper_curve(
    ks: &[u64],
    partition: &BlockPartition,
    params: &EmbeddingParams,
    scheme: Scheme,
    kind: WidthKind,
    opts: &CatalogOptions,
) -> Result<BoundCurve> {
    let points = ks
        .par_iter()
        .map(|&k| {
            let plan = allocate(k, partition, params, scheme, kind, opts)?;
            Ok((k, upper_bound(&plan, partition, params, opts)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundCurve::new(points, CurveRole::Upper, scheme.to_string()))
}

/// Lower envelope over a k-grid, evaluated in parallel.
pub fn lower_curve(
    ks: &[u64],
    partition: &BlockPartition,
    params: &EmbeddingParams,
    kind: WidthKind,
    opts: &CatalogOptions,
) -> Result<BoundCurve> {
    let points = ks
        .par_iter()
        .map(|&k| Ok((k, lower_bound(k, partition, params, kind, opts)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundCurve::new(points, CurveRole::Lower, "block"))
}

/// Least-squares slope and `r²` of `ln value` against `ln k` over the
/// positive points with `k_min ≤ k ≤ k_max`.
pub fn fit_slope(curve: &BoundCurve, k_min: u64, k_max: u64) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = curve
        .points
        .iter()
        .filter(|(k, v)| *k >= k_min && *k <= k_max && *v > 0.0)
        .map(|(k, v)| ((*k as f64).ln(), v.ln()))
        .collect();
    if pts.len() < 8 {
        return Err(Error::DegenerateFit(format!(
            "{} positive points in [{k_min}, {k_max}], need 8",
            pts.len()
        )));
    }
    let nf = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all points share one k".into()));
    }
    let slope = sxy / sxx;
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let r2 = if syy <= f64::EPSILON * nf { 1.0 } else { 1.0 - ss_res / syy };
    Ok((slope, r2))
}

/// One row of the ideal-norm diagnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealRow {
    pub j: u32,
    pub i: u32,
    pub size: u64,
    /// `2^{-jδ-is'} sup_n n^{1/s} s_n(id, ℓ_{p₁}^M, ℓ_{p₂}^M)`, `1/s = 1/r + 1/2`.
    pub measured: f64,
    /// `2^{-jδ-is'} 2^{(in + d(j−i))(1/t + 1/r)}`, with `in` alone for `j ≤ i`.
    pub model: f64,
}

/// Ideal quasi-norms `L_{s,∞}` of the block pieces next to their model
/// growth. The supremum over `n` is taken over every `n ≤ 1024` and a
/// geometric grid beyond.
pub fn ideal_table(
    partition: &BlockPartition,
    params: &EmbeddingParams,
    kind: WidthKind,
    inv_r: Q,
    opts: &CatalogOptions,
) -> Result<Vec<IdealRow>> {
    let inv_s = to_f64(&(inv_r + q(1, 2)));
    let inv_t = to_f64(&params.inv_t());
    let d = to_f64(&params.d);
    let n = params.n as f64;
    let mut rows = Vec::new();
    for (j, i) in partition.block_ids() {
        let m = partition.size(j, i);
        if m == 0 {
            continue;
        }
        let mut ns: Vec<u64> = (1..=m.min(1024)).collect();
        let mut x = 1024f64;
        while (x as u64) < m {
            x *= 1.05;
            ns.push((x as u64).min(m));
        }
        let mut sup = 0.0f64;
        for k in ns {
            let w = width_bounds(kind, params.p1(), params.p2(), m, k, opts)?.upper.value;
            sup = sup.max((k as f64).powf(inv_s) * w);
        }
        let scale = block_scale(j, i, params);
        let growth = if i < j {
            i as f64 * n + d * (j - i) as f64
        } else {
            i as f64 * n
        };
        rows.push(IdealRow {
            j,
            i,
            size: m,
            measured: scale * sup,
            model: scale * 2f64.powf(growth * (inv_t + to_f64(&inv_r))),
        });
    }
    Ok(rows)
}
