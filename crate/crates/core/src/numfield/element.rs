use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// An element of K in integral-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn new(coords: Vec<BigRational>) -> Self {
        FieldElement { coords }
    }

    pub fn from_integers(coords: Vec<BigInt>) -> Self {
        FieldElement {
            coords: coords.into_iter().map(BigRational::from_integer).collect(),
        }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self::from_integers(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        FieldElement {
            coords: vec![BigRational::zero(); n],
        }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Integral-basis coordinates are all integers.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(BigRational::is_integer)
    }

    /// Integer coordinates, if integral.
    pub fn integer_coords(&self) -> Option<Vec<BigInt>> {
        self.is_integral()
            .then(|| self.coords.iter().map(BigRational::to_integer).collect())
    }

    /// `(y, den)` with `self = y / den`, `den > 0` minimal.
    pub fn split_denominator(&self) -> (Vec<BigInt>, BigInt) {
        let den = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let y = self
            .coords
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        (y, den.abs())
    }

    pub fn add(&self, o: &Self) -> Self {
        FieldElement {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FieldElement {
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        FieldElement {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }
}
