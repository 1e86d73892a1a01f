//! Truncated weighted sequence spaces `ℓ_q(2^{js} ℓ_p(w))`.
//!
//! In the diagonal case `p₁ = p₂ = q₁ = q₂ = p` the embedding is the diagonal
//! operator with entries `σ_{j,ℓ} = 2^{-jδ} w_j(2^{-j}ℓ)^{-1}` on a flat
//! `ℓ_p`, so its s-numbers are the entries sorted descending.
//! [`as_diagonal_top`] returns the first `K` of them without materialising
//! the whole truncation.
//!
//! ```
//! use microwidth::prelude::*;
//!
//! let u = DSetModel::point(vec![0.0]);
//! let spec = SpaceSpec::new(qi(1), Exponent::Finite(qi(2)), Exponent::Finite(qi(2)), qi(1), u);
//! let mut x = SeqElement::new(4, 4);
//! x.insert(2, vec![4], 1.0).unwrap();
//! assert!((norm(&x, &spec) - 20.0).abs() < 1e-12);
//! ```

use std::collections::BTreeMap;

use crate::dset::{squared_distance, DSetModel};
use crate::error::{Error, Result};
use crate::params::EmbeddingParams;
use crate::partition::BlockPartition;
use crate::rational::{to_f64, Exponent, Q};

/// Parameters of one space `ℓ_q(2^{js} ℓ_p(w))`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceSpec {
    pub s: Q,
    pub p: Exponent,
    pub q: Exponent,
    /// Exponent `s'` of the weight; 0 for an unweighted space.
    pub weight_exponent: Q,
    pub model: DSetModel,
}

impl SpaceSpec {
    pub fn new(s: Q, p: Exponent, q: Exponent, weight_exponent: Q, model: DSetModel) -> Self {
        SpaceSpec {
            s,
            p,
            q,
            weight_exponent,
            model,
        }
    }

    /// `ρ = min(1, p, q)`.
    pub fn rho(&self) -> f64 {
        crate::params::rho(&self.p, &self.q)
    }
}

/// A finitely supported sequence `λ_{j,ℓ}` within a truncation `(J, I_max)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeqElement {
    pub entries: BTreeMap<(u32, Vec<i64>), f64>,
    pub j_max: u32,
    pub i_max: u32,
}

impl SeqElement {
    pub fn new(j_max: u32, i_max: u32) -> Self {
        SeqElement {
            entries: BTreeMap::new(),
            j_max,
            i_max,
        }
    }

    /// Sets `λ_{j,ℓ}`; a zero value removes the entry.
    pub fn insert(&mut self, j: u32, l: Vec<i64>, v: f64) -> Result<()> {
        if j > self.j_max {
            return Err(Error::InvalidParameter(format!("level {j} exceeds the truncation J = {}", self.j_max)));
        }
        if v == 0.0 {
            self.entries.remove(&(j, l));
        } else {
            self.entries.insert((j, l), v);
        }
        Ok(())
    }

    pub fn get(&self, j: u32, l: &[i64]) -> f64 {
        self.entries.get(&(j, l.to_vec())).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every entry lies in a block `I_{j,i}` with `i ≤ I_max`.
    pub fn is_within(&self, partition: &BlockPartition) -> bool {
        self.entries.keys().all(|(j, l)| partition.block_of(*j, l).is_some())
    }

    pub fn scaled(&self, c: f64) -> SeqElement {
        let mut out = SeqElement::new(self.j_max, self.i_max);
        for (k, v) in &self.entries {
            if v * c != 0.0 {
                out.entries.insert(k.clone(), v * c);
            }
        }
        out
    }

    pub fn add(&self, other: &SeqElement) -> SeqElement {
        let mut out = self.clone();
        out.j_max = out.j_max.max(other.j_max);
        out.i_max = out.i_max.max(other.i_max);
        for (k, v) in &other.entries {
            let e = out.entries.entry(k.clone()).or_insert(0.0);
            *e += v;
            if *e == 0.0 {
                out.entries.remove(k);
            }
        }
        out
    }

    /// CSV with columns `j,l1..ln,value`.
    pub fn to_csv(&self, n: usize) -> String {
        let mut s = String::from("j");
        for k in 1..=n {
            s.push_str(&format!(",l{k}"));
        }
        s.push_str(",value\n");
        for ((j, l), v) in &self.entries {
            s.push_str(&j.to_string());
            for x in l {
                s.push_str(&format!(",{x}"));
            }
            s.push_str(&format!(",{v:e}\n"));
        }
        s
    }

    /// Reads the format written by [`SeqElement::to_csv`].
    pub fn from_csv(text: &str, j_max: u32, i_max: u32) -> Result<SeqElement> {
        let mut out = SeqElement::new(j_max, i_max);
        for (no, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            let bad = || Error::Parse(format!("element row {}: {line:?}", no + 1));
            if cols.len() < 3 {
                return Err(bad());
            }
            let j: u32 = cols[0].trim().parse().map_err(|_| bad())?;
            let l = cols[1..cols.len() - 1]
                .iter()
                .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            let v: f64 = cols[cols.len() - 1].trim().parse().map_err(|_| bad())?;
            out.insert(j, l, v)?;
        }
        Ok(out)
    }
}

fn lattice_point(j: u32, l: &[i64]) -> Vec<f64> {
    let scale = 2f64.powi(j as i32);
    l.iter().map(|v| *v as f64 / scale).collect()
}

/// `(1 + 2^j d)^{s_w}` from the squared distance `g = d²`.
fn weight_from_sq(j: u32, g: f64, s_w: f64) -> f64 {
    (1.0 + 2f64.powi(j as i32) * g.sqrt()).powf(s_w)
}

fn lp_sum(values: impl Iterator<Item = f64>, p: &Exponent) -> f64 {
    match p {
        Exponent::Infinite => values.fold(0.0, f64::max),
        Exponent::Finite(pp) => {
            let pf = to_f64(pp);
            values.map(|v| v.powf(pf)).sum::<f64>().powf(1.0 / pf)
        }
    }
}

/// `(Σ_j 2^{jsq} (Σ_ℓ |λ_{j,ℓ} w_j(2^{-j}ℓ)|^p)^{q/p})^{1/q}` with the
/// supremum at `p = ∞` or `q = ∞`.
pub fn norm(x: &SeqElement, spec: &SpaceSpec) -> f64 {
    let s = to_f64(&spec.s);
    let sw = to_f64(&spec.weight_exponent);
    let mut levels: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for ((j, l), v) in &x.entries {
        let g = squared_distance(&lattice_point(*j, l), &spec.model);
        levels.entry(*j).or_default().push((v * weight_from_sq(*j, g, sw)).abs());
    }
    let per_level = levels
        .into_iter()
        .map(|(j, vals)| 2f64.powf(j as f64 * s) * lp_sum(vals.into_iter(), &spec.p));
    lp_sum(per_level, &spec.q)
}

/// Keeps the coordinates in `I_{j,i}` and zeroes the rest.
pub fn project(x: &SeqElement, j: u32, i: u32, partition: &BlockPartition) -> SeqElement {
    let mut out = SeqElement::new(x.j_max, x.i_max);
    for ((jj, l), v) in &x.entries {
        if *jj == j && partition.block_of(j, l) == Some(i) {
            out.entries.insert((j, l.clone()), *v);
        }
    }
    out
}

fn require_diagonal(params: &EmbeddingParams) -> Result<()> {
    if params.is_diagonal() {
        Ok(())
    } else {
        Err(Error::NotDiagonal(format!(
            "p1 = {}, p2 = {}, q1 = {}, q2 = {}",
            params.source.p, params.target.p, params.source.q, params.target.q
        )))
    }
}

/// `σ_{j,ℓ} = 2^{-jδ} (1 + 2^j dist)^{-s'}` from the squared distance.
pub fn sigma(j: u32, g: f64, delta: f64, s_prime: f64) -> f64 {
    2f64.powf(-(j as f64) * delta) * weight_from_sq(j, g, -s_prime)
}

/// One diagonal entry with its position.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalEntry {
    pub value: f64,
    pub j: u32,
    pub l: Vec<i64>,
}

/// Every diagonal entry of the truncated embedding, sorted descending.
/// Fails if the truncation holds more points than the partition's cap.
pub fn as_diagonal(params: &EmbeddingParams, partition: &BlockPartition) -> Result<Vec<f64>> {
    require_diagonal(params)?;
    let total = partition.total_dimension();
    if total > partition.cap() {
        return Err(Error::EnumerationCap {
            requested: total,
            cap: partition.cap(),
        });
    }
    let (delta, sp) = (to_f64(&params.delta), to_f64(&params.s_prime));
    let mut out = Vec::with_capacity(total as usize);
    for j in 0..=partition.j_max {
        for (g, _) in partition.enumerate_within(j, f64::INFINITY)? {
            out.push(sigma(j, g, delta, sp));
        }
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// The `k` largest diagonal entries, sorted descending (all of them if the
/// truncation has fewer).
pub fn as_diagonal_top(params: &EmbeddingParams, partition: &BlockPartition, k: usize) -> Result<Vec<f64>> {
    Ok(as_diagonal_top_entries(params, partition, k)?
        .into_iter()
        .map(|e| e.value)
        .collect())
}

/// Squared radius at level `j` inside which `σ ≥ tau`, or a negative value
/// if no point qualifies.
fn radius2_for(j: u32, tau: f64, delta: f64, s_prime: f64) -> f64 {
    let base = tau * 2f64.powf(j as f64 * delta);
    let r = (base.powf(-1.0 / s_prime) - 1.0) / 2f64.powi(j as i32);
    if r < 0.0 {
        -1.0
    } else {
        r * r
    }
}

pub fn as_diagonal_top_entries(
    params: &EmbeddingParams,
    partition: &BlockPartition,
    k: usize,
) -> Result<Vec<DiagonalEntry>> {
    require_diagonal(params)?;
    let (delta, sp) = (to_f64(&params.delta), to_f64(&params.s_prime));
    let k64 = k as u64;
    let total = partition.total_dimension();
    let mut entries = Vec::new();
    if sp <= 0.0 || total <= k64 {
        if total > partition.cap() {
            return Err(Error::EnumerationCap {
                requested: total,
                cap: partition.cap(),
            });
        }
        for j in 0..=partition.j_max {
            for (g, l) in partition.enumerate_within(j, f64::INFINITY)? {
                entries.push(DiagonalEntry {
                    value: sigma(j, g, delta, sp),
                    j,
                    l,
                });
            }
        }
    } else {
        let count = |tau: f64| -> u64 {
            (0..=partition.j_max)
                .map(|j| partition.count_within(j, radius2_for(j, tau, delta, sp)))
                .sum()
        };
        // count(hi) < k ≤ count(lo), searched on a log scale
        let mut hi = (0..=partition.j_max)
            .map(|j| sigma(j, 0.0, delta, sp))
            .fold(0.0, f64::max)
            * 2.0;
        let mut lo = hi / 2.0;
        while count(lo) < k64 {
            lo /= 2.0;
        }
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if mid <= lo || mid >= hi {
                break;
            }
            if count(mid) >= k64 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        for j in 0..=partition.j_max {
            for (g, l) in partition.enumerate_within(j, radius2_for(j, lo, delta, sp))? {
                entries.push(DiagonalEntry {
                    value: sigma(j, g, delta, sp),
                    j,
                    l,
                });
            }
        }
    }
    entries.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.j.cmp(&b.j)).then_with(|| a.l.cmp(&b.l)));
    entries.truncate(k);
    Ok(entries)
}
