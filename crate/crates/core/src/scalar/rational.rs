use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use rand::{Rng, RngCore};

use super::Scalar;
use crate::error::{Error, Result};

/// Arbitrary-precision rationals.
pub type Q = BigRational;

const SAMPLE_HEIGHT: i64 = 97;

impl Scalar for BigRational {
    fn field_label() -> String {
        "Q".to_string()
    }

    fn characteristic() -> u64 {
        0
    }

    fn sample_space() -> Option<u128> {
        None
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    /// Small-height rationals `a/b` with `1 <= |a|, b <= 97`.
    fn sample_nonzero(rng: &mut dyn RngCore) -> Self {
        let mut a = rng.gen_range(1..=SAMPLE_HEIGHT);
        if rng.gen_bool(0.5) {
            a = -a;
        }
        let b = rng.gen_range(1..=SAMPLE_HEIGHT);
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rational_inverse() {
        let x = Q::new(BigInt::from(2), BigInt::from(3));
        assert_eq!(x.try_inv().unwrap(), Q::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(Q::zero().try_inv(), Err(Error::DivisionByZero));
        assert_eq!(x.powi(-2).unwrap(), Q::new(BigInt::from(9), BigInt::from(4)));
        assert!(Q::one().pow(0).is_one());
    }

    #[test]
    fn samples_are_nonzero() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            assert!(!Q::sample_nonzero(&mut rng).is_zero());
        }
    }
}
