//! Scalar parameters of one embedding, their derived quantities and the
//! compactness gate.
//!
//! The embedding runs from `ℓ_{q₁}(2^{jδ} ℓ_{p₁}(w))` into `ℓ_{q₂}(ℓ_{p₂})`,
//! where `δ = s₁ − s₂ − n(1/p₁ − 1/p₂)` and the weight exponent is
//! `s' = s'₁ − s'₂`. All derived quantities are exact rationals; a quantity
//! whose defining condition fails is `None` rather than a default.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{conjugate_recip, q, qi, Exponent, Q};

/// Parameters of one side of the embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceParams {
    /// Integrability exponent.
    pub p: Exponent,
    /// Summability exponent over levels.
    pub q: Exponent,
    /// Smoothness.
    pub s: Q,
    /// Exponent of the 2-microlocal weight.
    pub s_w: Q,
}

impl SpaceParams {
    pub fn new(p: Exponent, q: Exponent, s: Q, s_w: Q) -> Self {
        SpaceParams { p, q, s, s_w }
    }
}

/// All scalar parameters of an embedding plus the derived quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EmbeddingParams {
    pub source: SpaceParams,
    pub target: SpaceParams,
    /// Ambient dimension.
    pub n: u32,
    /// Dimension of the d-set, `0 ≤ d ≤ n`.
    pub d: Q,
    /// `δ = s₁ − s₂ − n(1/p₁ − 1/p₂)`.
    pub delta: Q,
    /// `s' = s'₁ − s'₂`.
    pub s_prime: Q,
    /// `1/p* = max(1/p₂ − 1/p₁, 0)`.
    pub p_star: Exponent,
    /// `t = min(p₁', p₂)`.
    pub t: Exponent,
    /// `(1/p₁ − 1/p₂)/(1/2 − 1/p₂)`, present when `p₂ > 2`.
    pub theta: Option<Q>,
    /// `(1/p₂' − 1/p₁')/(1/2 − 1/p₁')`, present when `p₁ < 2`.
    pub theta1: Option<Q>,
    /// `1/p̃ = min(δ/d, s'/n) + 1/p₁`, present when that sum is non-negative.
    pub p_tilde: Option<Exponent>,
}

/// Hölder conjugate exponent.
pub fn conjugate(p: &Exponent) -> Exponent {
    p.conjugate()
}

/// `min(δ/d, s'/n)` with `δ/d = +∞` when `d = 0`.
pub fn min_ratio(delta: &Q, s_prime: &Q, d: &Q, n: u32) -> Q {
    let sn = s_prime / qi(n as i128);
    if d.is_zero() {
        sn
    } else {
        let dd = delta / d;
        if dd < sn {
            dd
        } else {
            sn
        }
    }
}

/// Computes every derived quantity of the embedding `source ↪ target`.
pub fn derive_params(source: SpaceParams, target: SpaceParams, n: u32, d: Q) -> Result<EmbeddingParams> {
    if n == 0 {
        return Err(Error::InvalidParameter("ambient dimension n must be positive".into()));
    }
    if d.is_negative() || d > qi(n as i128) {
        return Err(Error::InvalidParameter(format!(
            "d = {} lies outside [0, {n}]",
            crate::rational::format_rational(&d)
        )));
    }
    let half = q(1, 2);
    let nq = qi(n as i128);
    let r1 = source.p.recip();
    let r2 = target.p.recip();
    let r1c = conjugate_recip(&r1);
    let r2c = conjugate_recip(&r2);

    let delta = source.s - target.s - nq * (r1 - r2);
    let s_prime = source.s_w - target.s_w;

    let inv_p_star = if r2 > r1 { r2 - r1 } else { Q::zero() };
    let inv_t = if r1c > r2 { r1c } else { r2 };

    let theta = (r2 < half).then(|| (r1 - r2) / (half - r2));
    let theta1 = (r1 > half).then(|| (r2c - r1c) / (half - r1c));

    let inv_p_tilde = min_ratio(&delta, &s_prime, &d, n) + r1;
    let p_tilde = if inv_p_tilde.is_negative() {
        None
    } else {
        Some(Exponent::from_recip(inv_p_tilde)?)
    };

    Ok(EmbeddingParams {
        source,
        target,
        n,
        d,
        delta,
        s_prime,
        p_star: Exponent::from_recip(inv_p_star)?,
        t: Exponent::from_recip(inv_t)?,
        theta,
        theta1,
        p_tilde,
    })
}

impl EmbeddingParams {
    /// Builds the parameters from `δ` and `s'` directly, with the target
    /// normalised to `s₂ = s'₂ = 0`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_exponents(
        p1: Exponent,
        p2: Exponent,
        q1: Exponent,
        q2: Exponent,
        delta: Q,
        s_prime: Q,
        d: Q,
        n: u32,
    ) -> Result<Self> {
        let nq = qi(n as i128);
        let s1 = delta + nq * (p1.recip() - p2.recip());
        let source = SpaceParams::new(p1, q1, s1, s_prime);
        let target = SpaceParams::new(p2, q2, Q::zero(), Q::zero());
        derive_params(source, target, n, d)
    }

    pub fn p1(&self) -> Exponent {
        self.source.p
    }

    pub fn p2(&self) -> Exponent {
        self.target.p
    }

    /// `1/p₁`.
    pub fn r1(&self) -> Q {
        self.source.p.recip()
    }

    /// `1/p₂`.
    pub fn r2(&self) -> Q {
        self.target.p.recip()
    }

    /// `1/p₁'`.
    pub fn r1_conj(&self) -> Q {
        conjugate_recip(&self.r1())
    }

    /// `1/p₂'`.
    pub fn r2_conj(&self) -> Q {
        conjugate_recip(&self.r2())
    }

    /// `1/t`.
    pub fn inv_t(&self) -> Q {
        self.t.recip()
    }

    /// `1/p*`.
    pub fn inv_p_star(&self) -> Q {
        self.p_star.recip()
    }

    /// `min(δ/d, s'/n)`.
    pub fn min_ratio(&self) -> Q {
        min_ratio(&self.delta, &self.s_prime, &self.d, self.n)
    }

    pub fn nq(&self) -> Q {
        qi(self.n as i128)
    }

    /// The same embedding with different summability exponents.
    pub fn with_q(&self, q1: Exponent, q2: Exponent) -> Self {
        let mut out = *self;
        out.source.q = q1;
        out.target.q = q2;
        out
    }

    /// `p₁ = p₂ = q₁ = q₂`: the embedding is a diagonal operator on a flat `ℓ_p`.
    pub fn is_diagonal(&self) -> bool {
        let p = self.source.p;
        self.target.p == p && self.source.q == p && self.target.q == p
    }
}

/// Compactness gate: `δ > d/p*` and `s' > n/p*`.
pub fn is_compact(params: &EmbeddingParams) -> bool {
    let ip = params.inv_p_star();
    params.delta > params.d * ip && params.s_prime > params.nq() * ip
}

/// `ρ = min(1, p, q)` as a float; the target of the embedding is a ρ-Banach space.
pub fn rho(p: &Exponent, q: &Exponent) -> f64 {
    let one = Exponent::Finite(Q::one());
    let m = std::cmp::min(one, std::cmp::min(*p, *q));
    m.to_f64()
}
