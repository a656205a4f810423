//! Payoff and loss functions with almost-everywhere gradients and growth
//! metadata.
//!
//! Each payoff declares constants `(M, c, q)` with `c < 1` whenever such a
//! declaration exists, asserting `|f(x)| <= M + c * ||x||^q`. Payoffs with
//! exactly linear growth (calls, affine maps with slope norm >= 1) cannot
//! satisfy `c < 1` at order 1 and therefore declare order 2 via
//! `a*t <= a^2/2 + t^2/2`. [`check_growth`] then guarantees that the
//! variational objective `f(x + y) - cost(||y||)` stays bounded above.

use std::fmt;

use crate::costs::CostSpec;
use crate::error::{Error, Result};
use crate::numerics::norm2;

/// One Gaussian bump of the insurance loss surface.
#[derive(Debug, Clone, PartialEq)]
pub struct Bump {
    pub center: Vec<f64>,
    pub amplitude: f64,
    pub width: f64,
}

/// Growth declaration `|f(x)| <= bound + coeff * ||x||^order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Growth {
    pub bound: f64,
    pub coeff: f64,
    pub order: f64,
}

/// A payoff/loss function on `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub enum Payoff {
    /// `(x - k1)^+ - (x - k2)^+`, one-dimensional.
    BullSpread { k1: f64, k2: f64 },
    /// `(max_i x_i - strike)^+`.
    MaxCall { strike: f64 },
    /// `(mean_i x_i - strike)^+`.
    BasketCall { strike: f64 },
    /// `(strike - min_i x_i)^+`.
    MinPut { strike: f64 },
    /// `(strike - (prod_i x_i^+)^(1/d))^+`; negative coordinates clamp to 0.
    GeometricPut { strike: f64 },
    /// `slope . x + intercept`.
    Affine { slope: Vec<f64>, intercept: f64 },
    /// Sum of Gaussian bumps, bounded by the sum of amplitudes.
    EarthquakeLoss { bumps: Vec<Bump> },
    /// `coeff * ||x||^2`; mainly a test payoff with tunable growth coefficient.
    QuadraticNorm { coeff: f64 },
    /// `offset + sum_i w_i f_i(x)`: cash shifts and convex mixtures of payoffs.
    Combo { offset: f64, terms: Vec<(f64, Payoff)> },
    /// Pointwise negation of another payoff (used for lower price bounds).
    Negated(Box<Payoff>),
}

impl Payoff {
    pub fn bull_spread(k1: f64, k2: f64) -> Result<Self> {
        if !(0.0 < k1 && k1 < k2) {
            return Err(Error::InvalidArgument(format!(
                "bull spread needs 0 < k1 < k2, got {k1}, {k2}"
            )));
        }
        Ok(Self::BullSpread { k1, k2 })
    }

    pub fn max_call(strike: f64) -> Result<Self> {
        positive_strike(strike).map(|_| Self::MaxCall { strike })
    }

    pub fn basket_call(strike: f64) -> Result<Self> {
        positive_strike(strike).map(|_| Self::BasketCall { strike })
    }

    pub fn min_put(strike: f64) -> Result<Self> {
        positive_strike(strike).map(|_| Self::MinPut { strike })
    }

    pub fn geometric_put(strike: f64) -> Result<Self> {
        positive_strike(strike).map(|_| Self::GeometricPut { strike })
    }

    pub fn affine(slope: Vec<f64>, intercept: f64) -> Result<Self> {
        if slope.is_empty() {
            return Err(Error::InvalidArgument("affine payoff needs a slope vector".into()));
        }
        Ok(Self::Affine { slope, intercept })
    }

    pub fn constant(dim: usize, value: f64) -> Result<Self> {
        Self::affine(vec![0.0; dim.max(1)], value)
    }

    pub fn earthquake(bumps: Vec<Bump>) -> Result<Self> {
        if bumps.is_empty() {
            return Err(Error::InvalidArgument("earthquake loss needs at least one bump".into()));
        }
        let d = bumps[0].center.len();
        for b in &bumps {
            if b.center.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: b.center.len() });
            }
            if b.amplitude <= 0.0 || b.width <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "bump amplitude/width must be positive, got {}/{}",
                    b.amplitude, b.width
                )));
            }
        }
        Ok(Self::EarthquakeLoss { bumps })
    }

    /// Two-bump loss surface standing in for the insurance example: city
    /// centers at (0,0) and (1.5,0.5) with exposures 1.0 and 0.6.
    pub fn earthquake_default() -> Self {
        Self::EarthquakeLoss {
            bumps: vec![
                Bump { center: vec![0.0, 0.0], amplitude: 1.0, width: 0.5 },
                Bump { center: vec![1.5, 0.5], amplitude: 0.6, width: 0.3 },
            ],
        }
    }

    pub fn quadratic_norm(coeff: f64) -> Result<Self> {
        if coeff < 0.0 {
            return Err(Error::InvalidArgument(format!("coeff must be >= 0, got {coeff}")));
        }
        Ok(Self::QuadraticNorm { coeff })
    }

    pub fn negated(self) -> Self {
        match self {
            Self::Negated(inner) => *inner,
            other => Self::Negated(Box::new(other)),
        }
    }

    /// `f + m`.
    pub fn shifted(self, offset: f64) -> Self {
        Self::Combo { offset, terms: vec![(1.0, self)] }
    }

    /// `wa * a + wb * b`; the payoffs must agree on dimension.
    pub fn combo(wa: f64, a: Payoff, wb: f64, b: Payoff) -> Result<Self> {
        match (a.dim(), b.dim()) {
            (Some(da), Some(db)) if da != db => {
                return Err(Error::DimensionMismatch { expected: da, got: db })
            }
            _ => {}
        }
        Ok(Self::Combo { offset: 0.0, terms: vec![(wa, a), (wb, b)] })
    }

    /// Fixed dimension, or `None` when the payoff accepts any `d >= 1`.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::BullSpread { .. } => Some(1),
            Self::Affine { slope, .. } => Some(slope.len()),
            Self::EarthquakeLoss { bumps } => Some(bumps[0].center.len()),
            Self::Combo { terms, .. } => terms.iter().find_map(|(_, f)| f.dim()),
            Self::Negated(inner) => inner.dim(),
            _ => None,
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        match self.dim() {
            Some(d) if d != x.len() => Err(Error::DimensionMismatch { expected: d, got: x.len() }),
            None if x.is_empty() => {
                Err(Error::InvalidArgument("payoff argument must be non-empty".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.eval_raw(x))
    }

    /// Evaluation without the dimension check; callers in hot loops validate
    /// once up front.
    pub(crate) fn eval_raw(&self, x: &[f64]) -> f64 {
        match self {
            Self::BullSpread { k1, k2 } => (x[0] - k1).max(0.0) - (x[0] - k2).max(0.0),
            Self::MaxCall { strike } => (max_coord(x) - strike).max(0.0),
            Self::BasketCall { strike } => (mean_coord(x) - strike).max(0.0),
            Self::MinPut { strike } => (strike - min_coord(x)).max(0.0),
            Self::GeometricPut { strike } => (strike - geometric_mean_clamped(x)).max(0.0),
            Self::Affine { slope, intercept } => {
                intercept + slope.iter().zip(x).map(|(a, v)| a * v).sum::<f64>()
            }
            Self::EarthquakeLoss { bumps } => bumps
                .iter()
                .map(|b| {
                    let d2: f64 =
                        b.center.iter().zip(x).map(|(c, v)| (v - c) * (v - c)).sum();
                    b.amplitude * (-d2 / (2.0 * b.width * b.width)).exp()
                })
                .sum(),
            Self::QuadraticNorm { coeff } => coeff * x.iter().map(|v| v * v).sum::<f64>(),
            Self::Combo { offset, terms } => {
                offset + terms.iter().map(|(w, f)| w * f.eval_raw(x)).sum::<f64>()
            }
            Self::Negated(inner) => -inner.eval_raw(x),
        }
    }

    /// Almost-everywhere gradient. At kinks the one-sided limit from the
    /// right branch of the positive part is returned (derivative 1 at the
    /// strike of a call).
    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self.grad_raw(x))
    }

    pub(crate) fn grad_raw(&self, x: &[f64]) -> Vec<f64> {
        let d = x.len();
        match self {
            Self::BullSpread { k1, k2 } => {
                vec![if x[0] >= *k1 && x[0] < *k2 { 1.0 } else { 0.0 }]
            }
            Self::MaxCall { strike } => {
                let (idx, m) = argmax(x);
                let mut g = vec![0.0; d];
                if m >= *strike {
                    g[idx] = 1.0;
                }
                g
            }
            Self::BasketCall { strike } => {
                if mean_coord(x) >= *strike {
                    vec![1.0 / d as f64; d]
                } else {
                    vec![0.0; d]
                }
            }
            Self::MinPut { strike } => {
                let (idx, m) = argmin(x);
                let mut g = vec![0.0; d];
                if m < *strike {
                    g[idx] = -1.0;
                }
                g
            }
            Self::GeometricPut { strike } => {
                let g = geometric_mean_clamped(x);
                let mut out = vec![0.0; d];
                if g > 0.0 && g < *strike {
                    for i in 0..d {
                        out[i] = -g / (d as f64 * x[i]);
                    }
                }
                out
            }
            Self::Affine { slope, .. } => slope.clone(),
            Self::EarthquakeLoss { bumps } => {
                let mut out = vec![0.0; d];
                for b in bumps {
                    let d2: f64 = b.center.iter().zip(x).map(|(c, v)| (v - c) * (v - c)).sum();
                    let scale = b.amplitude * (-d2 / (2.0 * b.width * b.width)).exp()
                        / (b.width * b.width);
                    for i in 0..d {
                        out[i] -= scale * (x[i] - b.center[i]);
                    }
                }
                out
            }
            Self::QuadraticNorm { coeff } => x.iter().map(|v| 2.0 * coeff * v).collect(),
            Self::Combo { terms, .. } => {
                let mut out = vec![0.0; d];
                for (w, f) in terms {
                    for (o, g) in out.iter_mut().zip(f.grad_raw(x)) {
                        *o += w * g;
                    }
                }
                out
            }
            Self::Negated(inner) => inner.grad_raw(x).into_iter().map(|g| -g).collect(),
        }
    }

    /// Canonical growth declaration; see the module docs.
    pub fn growth(&self) -> Growth {
        match self {
            Self::BullSpread { k1, k2 } => Growth { bound: k2 - k1, coeff: 0.0, order: 1.0 },
            Self::MaxCall { .. } | Self::BasketCall { .. } => {
                Growth { bound: 0.5, coeff: 0.5, order: 2.0 }
            }
            Self::MinPut { strike } | Self::GeometricPut { strike } => {
                Growth { bound: *strike, coeff: 0.0, order: 1.0 }
            }
            Self::Affine { slope, intercept } => {
                let a = norm2(slope);
                if a < 1.0 {
                    Growth { bound: intercept.abs(), coeff: a, order: 1.0 }
                } else {
                    Growth { bound: intercept.abs() + 0.5 * a * a, coeff: 0.5, order: 2.0 }
                }
            }
            Self::EarthquakeLoss { bumps } => Growth {
                bound: bumps.iter().map(|b| b.amplitude).sum(),
                coeff: 0.0,
                order: 1.0,
            },
            Self::QuadraticNorm { coeff } => Growth { bound: 0.0, coeff: *coeff, order: 2.0 },
            // Conservative: |sum w_i f_i| <= sum |w_i| (M_i + c_i ||x||^(q_i))
            // and ||x||^q <= 1 + ||x||^qmax for q <= qmax.
            Self::Combo { offset, terms } => {
                let mut bound = offset.abs();
                let mut coeff = 0.0;
                let mut order: f64 = 1.0;
                for (w, f) in terms {
                    let g = f.growth();
                    bound += w.abs() * g.bound + w.abs() * g.coeff;
                    coeff += w.abs() * g.coeff;
                    if g.coeff > 0.0 {
                        order = order.max(g.order);
                    }
                }
                Growth { bound, coeff, order }
            }
            Self::Negated(inner) => inner.growth(),
        }
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BullSpread { k1, k2 } => write!(f, "bull_spread({k1},{k2})"),
            Self::MaxCall { strike } => write!(f, "max_call({strike})"),
            Self::BasketCall { strike } => write!(f, "basket_call({strike})"),
            Self::MinPut { strike } => write!(f, "min_put({strike})"),
            Self::GeometricPut { strike } => write!(f, "geometric_put({strike})"),
            Self::Affine { slope, intercept } => write!(f, "affine({slope:?},{intercept})"),
            Self::EarthquakeLoss { bumps } => write!(f, "earthquake({} bumps)", bumps.len()),
            Self::QuadraticNorm { coeff } => write!(f, "quadratic_norm({coeff})"),
            Self::Negated(inner) => write!(f, "negated({inner})"),
        }
    }
}

/// True iff the declared growth order stays within the cost power and the
/// growth coefficient is below 1, which guarantees the variational objective
/// is bounded above. Under the identically-zero cost only payoffs bounded
/// outright (coeff 0) qualify.
pub fn check_growth(payoff: &Payoff, cost: &CostSpec) -> bool {
    let g = payoff.growth();
    if cost.is_zero() {
        return g.coeff == 0.0;
    }
    g.coeff < 1.0 && g.order <= cost.power()
}

fn positive_strike(strike: f64) -> Result<()> {
    if strike > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("strike must be positive, got {strike}")))
    }
}

fn max_coord(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min_coord(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::INFINITY, f64::min)
}

fn mean_coord(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn argmax(x: &[f64]) -> (usize, f64) {
    let mut idx = 0;
    for i in 1..x.len() {
        if x[i] > x[idx] {
            idx = i;
        }
    }
    (idx, x[idx])
}

fn argmin(x: &[f64]) -> (usize, f64) {
    let mut idx = 0;
    for i in 1..x.len() {
        if x[i] < x[idx] {
            idx = i;
        }
    }
    (idx, x[idx])
}

/// Geometric mean with negative coordinates clamped to 0, computed in log
/// space so large dimensions do not underflow.
fn geometric_mean_clamped(x: &[f64]) -> f64 {
    let mut log_sum = 0.0;
    for &v in x {
        if v <= 0.0 {
            return 0.0;
        }
        log_sum += v.ln();
    }
    (log_sum / x.len() as f64).exp()
}
