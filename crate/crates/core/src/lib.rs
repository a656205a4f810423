//! Convex risk measures with weak optimal transport penalties.
//!
//! The risk measure evaluated here is
//!
//! ```text
//! rho(f) = sup_nu ( ∫ f dnu - alpha(nu) ),
//! ```
//!
//! where the penalty `alpha` is a transport cost from a reference measure
//! `mu`, possibly restricted by a martingale (convex-order) or parametric
//! constraint. The central computational device is the pointwise transform
//!
//! ```text
//! f_C(x) = sup over admissible kernels at x of ( E f - cost ),
//! rho(f) = ∫ f_C(x) mu(dx),
//! ```
//!
//! which turns the measure-level supremum into a pointwise optimization
//! followed by plain Monte Carlo integration. Two routes to `f_C` are
//! provided:
//!
//! * [`ctransform`] — multi-start derivative-free search per point, plus
//!   dense-scan, concave-envelope, and Black-Scholes oracles used to
//!   cross-check it;
//! * [`neural`] — a from-scratch feed-forward network trained by stochastic
//!   gradient ascent to represent a displacement field `y(x)` (and, under the
//!   martingale constraint, a two-point kernel), which approximates `rho`
//!   from below.
//!
//! [`risk`] combines either route with sampling from [`measures`] to produce
//! risk values and no-arbitrage price bounds; [`moments`] computes model-free
//! bounds under bid-ask moment constraints by optimizing weighted Dirac
//! atoms.

pub mod costs;
pub mod ctransform;
pub mod error;
pub mod measures;
pub mod moments;
pub mod neural;
pub mod numerics;
pub mod payoffs;
pub mod risk;
pub mod solver;

pub use costs::CostSpec;
pub use ctransform::{bs_call, concave_envelope_1d, convex_envelope_1d, CTransformGrid, SearchConfig};
pub use error::{Error, Result};
pub use measures::ReferenceMeasure;
pub use moments::{Instrument, MomentProblem};
pub use neural::{AdamState, Mlp, TrainConfig, TrainReport};
pub use payoffs::Payoff;
pub use risk::{PriceBounds, Regime, RhoEstimate};
