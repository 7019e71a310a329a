//! Per-slot convex energy cost `C_t(E) = c_t * E^b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Slot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficients {
    /// `c_t = 1` everywhere.
    Uniform,
    /// One positive coefficient per slot `0..=T`.
    PerSlot(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    exponent: f64,
    coefficients: Coefficients,
}

impl CostModel {
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent >= 1.0 && exponent.is_finite()) {
            return Err(Error::Config(format!("cost exponent {exponent} must be >= 1")));
        }
        Ok(CostModel { exponent, coefficients: Coefficients::Uniform })
    }

    pub fn quadratic() -> Self {
        CostModel { exponent: 2.0, coefficients: Coefficients::Uniform }
    }

    pub fn per_slot(exponent: f64, coeffs: Vec<f64>) -> Result<Self> {
        let mut model = Self::power(exponent)?;
        if coeffs.is_empty() {
            return Err(Error::Config("per-slot coefficients must not be empty".into()));
        }
        if let Some((t, c)) = coeffs.iter().enumerate().find(|(_, c)| !(**c > 0.0 && c.is_finite())) {
            return Err(Error::Config(format!("coefficient c_{t} = {c} must be positive")));
        }
        model.coefficients = Coefficients::PerSlot(coeffs);
        Ok(model)
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.coefficients, Coefficients::Uniform)
    }

    /// `c_t`; slots past the end of a per-slot table reuse the last coefficient.
    pub fn coeff(&self, t: Slot) -> f64 {
        match &self.coefficients {
            Coefficients::Uniform => 1.0,
            Coefficients::PerSlot(c) => c[(t as usize).min(c.len() - 1)],
        }
    }

    pub fn c_min(&self) -> f64 {
        match &self.coefficients {
            Coefficients::Uniform => 1.0,
            Coefficients::PerSlot(c) => c.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub fn c_max(&self) -> f64 {
        match &self.coefficients {
            Coefficients::Uniform => 1.0,
            Coefficients::PerSlot(c) => c.iter().copied().fold(0.0, f64::max),
        }
    }

    /// The bare power function `E^b`.
    pub fn shape(&self, energy: f64) -> f64 {
        if energy <= 0.0 {
            0.0
        } else if self.exponent == 2.0 {
            energy * energy
        } else {
            energy.powf(self.exponent)
        }
    }

    /// `C_t(E)`.
    pub fn cost(&self, t: Slot, energy: f64) -> f64 {
        self.coeff(t) * self.shape(energy)
    }

    /// `C'_t(E) = c_t * b * E^(b-1)`.
    pub fn marginal(&self, t: Slot, energy: f64) -> f64 {
        let e = energy.max(0.0);
        let b = self.exponent;
        let pow = if b == 1.0 { 1.0 } else if b == 2.0 { e } else { e.powf(b - 1.0) };
        self.coeff(t) * b * pow
    }

    /// Checks that a per-slot table covers exactly the slots `0..=horizon`.
    pub fn check_horizon(&self, horizon: Slot) -> Result<()> {
        match &self.coefficients {
            Coefficients::Uniform => Ok(()),
            Coefficients::PerSlot(c) if c.len() == horizon as usize + 1 => Ok(()),
            Coefficients::PerSlot(c) => Err(Error::Config(format!(
                "cost table has {} coefficients but the horizon needs {}",
                c.len(),
                horizon as usize + 1
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_values() {
        let c = CostModel::quadratic();
        assert_eq!(c.cost(3, 0.0), 0.0);
        assert_eq!(c.cost(3, 5.0), 25.0);
        assert_eq!(c.marginal(0, 3.0), 6.0);
        let cubic = CostModel::power(3.0).unwrap();
        assert!((cubic.cost(0, 2.0) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn per_slot_validation() {
        assert!(CostModel::per_slot(2.0, vec![1.0, 0.0]).is_err());
        assert!(CostModel::per_slot(2.0, vec![]).is_err());
        assert!(CostModel::power(0.5).is_err());
        let c = CostModel::per_slot(2.0, vec![1.0, 1.0, 4.0]).unwrap();
        assert_eq!(c.cost(2, 1.0), 4.0);
        assert_eq!(c.c_min(), 1.0);
        assert_eq!(c.c_max(), 4.0);
        assert!(c.check_horizon(2).is_ok());
        assert!(c.check_horizon(3).is_err());
    }

    #[test]
    fn convex_and_monotone_on_samples() {
        let c = CostModel::power(2.5).unwrap();
        let pts = [0.0, 0.3, 1.0, 2.7, 9.0];
        for &x in &pts {
            for &y in &pts {
                assert!(2.0 * c.cost(0, (x + y) / 2.0) <= c.cost(0, x) + c.cost(0, y) + 1e-12);
                if x <= y {
                    assert!(c.cost(0, x) <= c.cost(0, y));
                }
            }
        }
    }
}
