//! Closed-form test functions for validating the optimizers.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::BoundsBox;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchFunction {
    Sphere,
    Rastrigin,
    Rosenbrock,
}

impl BenchFunction {
    pub const ALL: [BenchFunction; 3] = [Self::Sphere, Self::Rastrigin, Self::Rosenbrock];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sphere => "sphere",
            Self::Rastrigin => "rastrigin",
            Self::Rosenbrock => "rosenbrock",
        }
    }

    pub fn evaluate<T: Scalar>(self, x: &[T]) -> T {
        match self {
            Self::Sphere => sphere(x),
            Self::Rastrigin => rastrigin(x),
            Self::Rosenbrock => rosenbrock(x),
        }
    }

    /// Conventional search box.
    pub fn bounds<T: Scalar>(self, dim: usize) -> Result<BoundsBox<T>> {
        let (lo, hi) = match self {
            Self::Sphere => (-5.0, 5.0),
            Self::Rastrigin => (-5.12, 5.12),
            Self::Rosenbrock => (-2.048, 2.048),
        };
        BoundsBox::uniform(dim, T::of(lo), T::of(hi))
    }
}

impl std::str::FromStr for BenchFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sphere" => Ok(Self::Sphere),
            "rastrigin" => Ok(Self::Rastrigin),
            "rosenbrock" => Ok(Self::Rosenbrock),
            other => Err(Error::config(format!("unknown benchmark function '{other}'"))),
        }
    }
}

pub fn sphere<T: Scalar>(x: &[T]) -> T {
    x.iter().map(|&v| v * v).sum()
}

/// `sum(x^2 - 10 cos(2 pi x) + 10)`
pub fn rastrigin<T: Scalar>(x: &[T]) -> T {
    let ten = T::of(10.0);
    let two_pi = T::of(2.0 * PI);
    x.iter().map(|&v| v * v - ten * (two_pi * v).cos() + ten).sum()
}

pub fn rosenbrock<T: Scalar>(x: &[T]) -> T {
    let hundred = T::of(100.0);
    x.windows(2)
        .map(|w| {
            let a = w[1] - w[0] * w[0];
            let b = T::one() - w[0];
            hundred * a * a + b * b
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(sphere(&[0.0_f64; 10]), 0.0);
        assert_eq!(sphere(&[1.0_f64, 2.0]), 5.0);
        assert!(rastrigin(&[0.0_f64, 0.0]).abs() < 1e-12);
        assert!((rastrigin(&[1.0_f64, 1.0]) - 2.0).abs() < 1e-12);
        assert_eq!(rosenbrock(&[1.0_f64, 1.0, 1.0]), 0.0);
        assert_eq!(rosenbrock(&[0.0_f64, 0.0]), 1.0);
    }

    #[test]
    fn parse_names() {
        assert_eq!("Sphere".parse::<BenchFunction>().unwrap(), BenchFunction::Sphere);
        assert!("ackley".parse::<BenchFunction>().is_err());
    }
}
