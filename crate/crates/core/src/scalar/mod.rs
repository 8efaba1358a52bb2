//! Coefficient fields and parameter assignments.

mod params;
mod prime;
mod rational;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::RngCore;

use crate::error::{Error, Result};

pub use params::{Mode, ParamMatrix, ParameterAssignment, Symbol};
pub use prime::{is_prime_u64, Fp, SUPPORTED_PRIMES};
pub use rational::Q;

/// The default verification field, modulo the Mersenne prime 2^61 - 1.
pub type Fp61 = Fp<2_305_843_009_213_693_951>;

/// An exact coefficient field.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Eq
    + Hash
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Short label such as `F_p(2305843009213693951)` or `Q`.
    fn field_label() -> String;

    /// Characteristic of the field, `0` for the rationals.
    fn characteristic() -> u64;

    /// Number of values `sample_nonzero` can return, when finite.
    fn sample_space() -> Option<u128>;

    fn from_i64(v: i64) -> Self;

    fn try_inv(&self) -> Result<Self>;

    fn sample_nonzero(rng: &mut dyn RngCore) -> Self;

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.clone() * rhs.try_inv()?)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Integer power allowing negative exponents.
    fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.try_inv()?.pow(e.unsigned_abs()))
        }
    }
}

/// `1/k!` in the field.
pub fn inv_factorial<F: Scalar>(k: usize) -> Result<F> {
    let mut f = F::one();
    for i in 2..=k {
        f = f * F::from_i64(i as i64);
    }
    if f.is_zero() {
        return Err(Error::VanishingNormalizer(format!("{k}!")));
    }
    f.try_inv()
}

pub fn factorial<F: Scalar>(k: usize) -> F {
    (2..=k).fold(F::one(), |acc, i| acc * F::from_i64(i as i64))
}
