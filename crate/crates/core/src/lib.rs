//! Widths of compact embeddings between 2-microlocal weighted sequence
//! spaces over d-sets.
//!
//! The crate has three layers:
//!
//! * [`params`] and [`rate`]: exact rational decision tables that give the
//!   decay exponent `κ` in `s_k ∼ k^{-κ}` for approximation, Gelfand and
//!   Kolmogorov numbers.
//! * [`catalog`], [`dset`], [`partition`] and [`seqspace`]: the
//!   finite-dimensional width catalog, computable d-sets, the block
//!   decomposition and the truncated sequence spaces.
//! * [`bounds`] and [`experiment`]: rank allocation, upper and lower
//!   envelopes, slope fitting and the experiment harness used by the CLI.
//!
//! ```
//! use microwidth::prelude::*;
//!
//! let p = EmbeddingParams::from_exponents(
//!     Exponent::Finite(qi(2)), Exponent::Finite(qi(2)),
//!     Exponent::Finite(qi(2)), Exponent::Finite(qi(2)),
//!     q(6, 5), qi(1), qi(1), 2,
//! ).unwrap();
//! assert!(is_compact(&p));
//! assert_eq!(rate_approximation(&p).kappa, Some(q(1, 2)));
//! ```

pub mod bounds;
pub mod catalog;
pub mod dset;
pub mod error;
pub mod experiment;
pub mod params;
pub mod partition;
pub mod rate;
pub mod rational;
pub mod seqspace;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::bounds::{
        allocate, block_scale, fit_slope, ideal_norm, lower_bound, upper_bound, AllocationPlan, BoundCurve,
        CurveRole, Scheme,
    };
    pub use crate::catalog::{
        diagonal_snumbers, exact_approx_pp, exact_gelfand_pp, hilbert_snumbers, order_width, width_bounds,
        CatalogOptions, Exactness, OrderValue,
    };
    pub use crate::dset::{distance, weight, DSetModel};
    pub use crate::error::{Error, Result};
    pub use crate::params::{conjugate, derive_params, is_compact, EmbeddingParams, SpaceParams};
    pub use crate::partition::{count_n, partition, BlockPartition};
    pub use crate::rate::{
        compare_widths, rate, rate_approximation, rate_gelfand, rate_kolmogorov, RateKind, RateResult,
        WidthKind, WidthRelation,
    };
    pub use crate::rational::{parse_rational, q, qi, Exponent, Q};
    pub use crate::seqspace::{as_diagonal, as_diagonal_top, norm, project, SeqElement, SpaceSpec};
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exponents.md")]
    mod exponents {}
    #[doc = include_str!("../../../book/src/rates.md")]
    mod rates {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/sequence-spaces.md")]
    mod sequence_spaces {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
