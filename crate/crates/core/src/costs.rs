//! Power transport costs `c(v) = v^p` on the displacement norm, with the
//! time scaling `c_t(v) = t * c(v / sqrt(t)) = t^(1 - p/2) * v^p` used for
//! pricing after the quoted maturity, and an overall weight so the zero-cost
//! (pure convex-order) limit is expressible.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostSpec {
    power: f64,
    timescale: Option<f64>,
    weight: f64,
}

impl CostSpec {
    /// Unscaled power cost `v^p`, `p >= 1`.
    pub fn power(p: f64) -> Result<Self> {
        if p < 1.0 {
            return Err(Error::InvalidArgument(format!("cost power must be >= 1, got {p}")));
        }
        Ok(Self { power: p, timescale: None, weight: 1.0 })
    }

    /// Time-scaled cost `c_t(v) = t * (v / sqrt(t))^p`.
    pub fn time_scaled(p: f64, t: f64) -> Result<Self> {
        if t <= 0.0 {
            return Err(Error::InvalidArgument(format!("timescale must be positive, got {t}")));
        }
        Ok(Self { timescale: Some(t), ..Self::power(p)? })
    }

    /// The identically-zero cost; the martingale transform then degenerates
    /// to the concave envelope.
    pub fn zero() -> Self {
        Self { power: 2.0, timescale: None, weight: 0.0 }
    }

    pub fn with_timescale(self, t: f64) -> Result<Self> {
        if t <= 0.0 {
            return Err(Error::InvalidArgument(format!("timescale must be positive, got {t}")));
        }
        Ok(Self { timescale: Some(t), ..self })
    }

    pub fn power_exponent(&self) -> f64 {
        self.power
    }

    /// Alias used by growth checks.
    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn timescale(&self) -> Option<f64> {
        self.timescale
    }

    /// Multiplier in front of `v^p`: `weight * t^(1 - p/2)`.
    pub fn scale(&self) -> f64 {
        self.weight * self.timescale.map_or(1.0, |t| t.powf(1.0 - self.power / 2.0))
    }

    pub fn is_zero(&self) -> bool {
        self.weight == 0.0
    }

    pub fn cost(&self, v: f64) -> Result<f64> {
        if v < 0.0 {
            return Err(Error::InvalidArgument(format!("displacement must be >= 0, got {v}")));
        }
        Ok(self.cost_raw(v))
    }

    #[inline]
    pub(crate) fn cost_raw(&self, v: f64) -> f64 {
        if self.weight == 0.0 {
            return 0.0;
        }
        self.scale() * v.powf(self.power)
    }

    /// Derivative `d/dv`; at `p = 1`, `v = 0` the right derivative (1, times
    /// the scale) is returned.
    pub fn cost_deriv(&self, v: f64) -> Result<f64> {
        if v < 0.0 {
            return Err(Error::InvalidArgument(format!("displacement must be >= 0, got {v}")));
        }
        Ok(self.cost_deriv_raw(v))
    }

    #[inline]
    pub(crate) fn cost_deriv_raw(&self, v: f64) -> f64 {
        if self.weight == 0.0 {
            return 0.0;
        }
        // v^(p-1) with powf(0,0) = 1 realizes the p = 1 tie-break at v = 0.
        self.scale() * self.power * v.powf(self.power - 1.0)
    }
}

impl fmt::Display for CostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "zero");
        }
        match self.timescale {
            Some(t) => write!(f, "p={},t={t}", self.power),
            None => write!(f, "p={}", self.power),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cost_examples() {
        let p3 = CostSpec::power(3.0).unwrap();
        assert_eq!(p3.cost(2.0).unwrap(), 8.0);
        let p3t = CostSpec::time_scaled(3.0, 0.25).unwrap();
        assert!((p3t.cost(1.0).unwrap() - 2.0).abs() < 1e-12);
        for t in [0.1, 0.5, 2.0] {
            let p2t = CostSpec::time_scaled(2.0, t).unwrap();
            assert!((p2t.cost(1.0).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(p3.cost(-1.0).is_err());
        assert_eq!(CostSpec::zero().cost(5.0).unwrap(), 0.0);
    }

    #[test]
    fn cost_deriv_examples() {
        let p3 = CostSpec::power(3.0).unwrap();
        assert_eq!(p3.cost_deriv(2.0).unwrap(), 12.0);
        let p2 = CostSpec::power(2.0).unwrap();
        assert_eq!(p2.cost_deriv(0.0).unwrap(), 0.0);
        let p3t = CostSpec::time_scaled(3.0, 0.25).unwrap();
        assert!((p3t.cost_deriv(1.0).unwrap() - 6.0).abs() < 1e-12);
        let p1 = CostSpec::power(1.0).unwrap();
        assert_eq!(p1.cost_deriv(0.0).unwrap(), 1.0);
    }

    #[test]
    fn deriv_matches_finite_differences() {
        let h = 1e-7;
        for spec in [
            CostSpec::power(1.5).unwrap(),
            CostSpec::power(2.0).unwrap(),
            CostSpec::power(3.0).unwrap(),
            CostSpec::time_scaled(3.0, 1.0 / 12.0).unwrap(),
        ] {
            let mut v = 0.01;
            while v <= 10.0 {
                let fd = (spec.cost(v + h).unwrap() - spec.cost(v - h).unwrap()) / (2.0 * h);
                let d = spec.cost_deriv(v).unwrap();
                assert!(
                    ((d - fd) / fd.abs().max(1e-12)).abs() < 1e-6,
                    "{spec} at v={v}: {d} vs {fd}"
                );
                v *= 1.5;
            }
        }
    }

    proptest! {
        #[test]
        fn timescale_identity(p in 1.0f64..4.0, t in 0.01f64..4.0, v in 0.0f64..10.0) {
            let scaled = CostSpec::time_scaled(p, t).unwrap();
            let base = CostSpec::power(p).unwrap();
            let lhs = scaled.cost(v).unwrap();
            let rhs = t * base.cost(v / t.sqrt()).unwrap();
            let alt = t.powf(1.0 - p / 2.0) * v.powf(p);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
            prop_assert!((lhs - alt).abs() <= 1e-9 * (1.0 + alt.abs()));
        }

        #[test]
        fn cost_is_monotone_in_displacement(p in 1.0f64..4.0, a in 0.0f64..10.0, b in 0.0f64..10.0) {
            let spec = CostSpec::power(p).unwrap();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(spec.cost(lo).unwrap() <= spec.cost(hi).unwrap());
            prop_assert_eq!(spec.cost(0.0).unwrap(), 0.0);
        }

        #[test]
        fn scale_shrinks_with_time_above_power_two(
            p in 2.1f64..4.0, t1 in 0.01f64..1.0, dt in 0.01f64..2.0, v in 0.0f64..5.0
        ) {
            let t2 = t1 + dt;
            let c1 = CostSpec::time_scaled(p, t1).unwrap();
            let c2 = CostSpec::time_scaled(p, t2).unwrap();
            prop_assert!(c1.cost(v).unwrap() >= c2.cost(v).unwrap());
        }
    }
}
