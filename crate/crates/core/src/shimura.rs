//! The genus 0 Shimura curves `M^B` as conics `x^2 + y^2 + m = 0`, their local and global
//! points over number fields, and the derived moduli flags.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfield::NumberField;
use crate::polyarith::{prime_divisors, primes_up_to};
use crate::quaternion::{hilbert_symbol_int, splits_over_k, Place, QuaternionAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicModel {
    pub d: u64,
    pub m: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("no conic model for discriminant {d}: M^B has positive genus")]
pub struct UnsupportedGenus {
    pub d: u64,
}

/// The conic model, available exactly for `d` in {6, 10, 22}.
pub fn conic_model(d: u64) -> std::result::Result<ConicModel, UnsupportedGenus> {
    let m = match d {
        6 => 3,
        10 => 2,
        22 => 11,
        _ => return Err(UnsupportedGenus { d }),
    };
    Ok(ConicModel { d, m })
}

impl ConicModel {
    fn symbol(&self, v: Place) -> i8 {
        hilbert_symbol_int(&BigInt::from(-1), &-BigInt::from(self.m), v).expect("nonzero arguments at a valid place")
    }

    /// `M^B(Q_p)` is nonempty.
    pub fn local_points_qp(&self, p: u64) -> Result<bool> {
        if !crate::polyarith::is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(self.symbol(Place::Finite(p)) == 1)
    }

    /// `M^B(R)` is empty.
    pub fn real_points(&self) -> bool {
        debug_assert_eq!(self.symbol(Place::Infinite), -1);
        false
    }

    /// For each prime of `K` above `p`, whether the conic has a `K_v`-point.
    pub fn local_points_kv(&self, k: &NumberField, p: u64) -> Result<Vec<bool>> {
        let over_qp = self.local_points_qp(p)?;
        let sd = k.splitting_data(p)?;
        Ok(sd.local_degrees().iter().map(|ef| over_qp || ef % 2 == 0).collect())
    }

    pub fn global_points(&self, k: &NumberField) -> Result<GlobalPoints> {
        if k.real_places()? > 0 {
            return Ok(GlobalPoints::Empty(ObstructingPlace::Real));
        }
        for p in self.bad_primes(k)? {
            if let Some(i) = self.local_points_kv(k, p)?.iter().position(|ok| !ok) {
                return Ok(GlobalPoints::Empty(ObstructingPlace::Finite { p, prime_index: i }));
            }
        }
        Ok(GlobalPoints::NonEmptyInfinite)
    }

    /// Primes dividing `2 m disc(K)`; at all others the conic has good reduction.
    pub fn bad_primes(&self, k: &NumberField) -> Result<Vec<u64>> {
        let n = k.disc() * BigInt::from(2 * self.m);
        prime_divisors(&n)?
            .iter()
            .map(|p| p.to_u64().ok_or_else(|| Error::invalid("prime exceeds 64 bits")))
            .collect()
    }

    /// Primes `p <= limit` with `M^B(Q_p)` empty.
    pub fn obstructed_primes(&self, limit: u64) -> Vec<u64> {
        primes_up_to(limit)
            .into_iter()
            .filter(|&p| self.symbol(Place::Finite(p)) == -1)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "place")]
pub enum ObstructingPlace {
    Real,
    /// The `prime_index`-th prime of `K` above `p`, in splitting-data order.
    Finite {
        p: u64,
        prime_index: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "detail")]
pub enum GlobalPoints {
    NonEmptyInfinite,
    Empty(ObstructingPlace),
    UnsupportedGenus(UnsupportedGenus),
}

/// `M^B(K)` for a discriminant, with positive genus reported rather than rejected.
pub fn global_points(d: u64, k: &NumberField) -> Result<GlobalPoints> {
    match conic_model(d) {
        Ok(model) => model.global_points(k),
        Err(e) => Ok(GlobalPoints::UnsupportedGenus(e)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialEmptiness {
    /// `K` has a real place.
    pub real_place: bool,
    /// `B ⊗ K` is not `M_2(K)`.
    pub nonsplit: bool,
}

impl TrivialEmptiness {
    pub fn holds(&self) -> bool {
        self.real_place || self.nonsplit
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliFlags {
    pub global_points: GlobalPoints,
    pub points_representable_by_qm_surface: bool,
    /// `None` when the genus is positive.
    pub infinitely_many_qm_surfaces: Option<bool>,
    pub trivial_emptiness: TrivialEmptiness,
}

pub fn moduli_flags(b: &QuaternionAlgebra, k: &NumberField) -> Result<ModuliFlags> {
    let split = splits_over_k(b, k)?;
    let gp = global_points(b.d, k)?;
    let infinitely_many = match gp {
        GlobalPoints::UnsupportedGenus(_) => None,
        GlobalPoints::NonEmptyInfinite => Some(split),
        GlobalPoints::Empty(_) => Some(false),
    };
    Ok(ModuliFlags {
        global_points: gp,
        points_representable_by_qm_surface: split,
        infinitely_many_qm_surfaces: infinitely_many,
        trivial_emptiness: TrivialEmptiness {
            real_place: k.real_places()? > 0,
            nonsplit: !split,
        },
    })
}
