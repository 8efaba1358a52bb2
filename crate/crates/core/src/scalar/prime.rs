use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use super::Scalar;
use crate::error::{Error, Result};

const MERSENNE_61: u64 = (1 << 61) - 1;

/// Primes above 2^31 with a compiled field implementation.
pub const SUPPORTED_PRIMES: [u64; 5] = [
    2_147_483_659,
    4_294_967_311,
    MERSENNE_61,
    4_611_686_018_427_387_847,
    9_223_372_036_854_775_783,
];

/// Element of the prime field F_P, stored as the canonical representative in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    #[inline(always)]
    fn reduce_wide(x: u128) -> u64 {
        if P == MERSENNE_61 {
            let lo = (x as u64) & MERSENNE_61;
            let hi = (x >> 61) as u64;
            let mut r = lo + (hi & MERSENNE_61) + (hi >> 61);
            while r >= MERSENNE_61 {
                r -= MERSENNE_61;
            }
            r
        } else {
            (x % P as u128) as u64
        }
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    #[inline(always)]
    fn add(self, rhs: Self) -> Self {
        let (s, overflow) = self.0.overflowing_add(rhs.0);
        if overflow || s >= P {
            Fp(s.wrapping_sub(P))
        } else {
            Fp(s)
        }
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    #[inline(always)]
    fn sub(self, rhs: Self) -> Self {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(P - (rhs.0 - self.0))
        }
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    #[inline(always)]
    fn mul(self, rhs: Self) -> Self {
        Fp(Self::reduce_wide(self.0 as u128 * rhs.0 as u128))
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn field_label() -> String {
        format!("F_p({P})")
    }

    fn characteristic() -> u64 {
        P
    }

    fn sample_space() -> Option<u128> {
        Some(P as u128 - 1)
    }

    fn from_i64(v: i64) -> Self {
        Fp((v as i128).rem_euclid(P as i128) as u64)
    }

    fn try_inv(&self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid over i128
        let (mut r0, mut r1) = (P as i128, self.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(Fp(t0.rem_euclid(P as i128) as u64))
    }

    fn sample_nonzero(rng: &mut dyn RngCore) -> Self {
        Fp(rng.gen_range(1..P))
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp61;
    use proptest::prelude::*;

    type Small = Fp<2_147_483_659>;

    #[test]
    fn menu_primes_are_prime_and_large() {
        for p in SUPPORTED_PRIMES {
            assert!(is_prime_u64(p), "{p}");
            assert!(p > 1 << 31);
        }
        assert!(!is_prime_u64(1 << 61));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(Fp61::zero().try_inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn from_i64_is_canonical() {
        assert_eq!(Fp61::from_i64(-1).value(), MERSENNE_61 - 1);
        assert_eq!(Fp61::from_i64(i64::MIN) + Fp61::from_i64(i64::MAX), Fp61::from_i64(-1));
        assert_eq!(Small::from_i64(-3).value(), 2_147_483_656);
    }

    proptest! {
        #[test]
        fn mersenne_mul_matches_plain_modmul(a in 0..MERSENNE_61, b in 0..MERSENNE_61) {
            let got = (Fp61::new(a) * Fp61::new(b)).value();
            let want = ((a as u128 * b as u128) % MERSENNE_61 as u128) as u64;
            prop_assert_eq!(got, want);
        }

        #[test]
        fn field_axioms(a in 1..MERSENNE_61, b in 0..MERSENNE_61, c in 0..MERSENNE_61) {
            let (a, b, c) = (Fp61::new(a), Fp61::new(b), Fp61::new(c));
            prop_assert_eq!(a * a.try_inv().unwrap(), Fp61::one());
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!((b - c) + c, b);
            prop_assert_eq!(b + (-b), Fp61::zero());
            prop_assert!(a.value() < MERSENNE_61);
        }

        #[test]
        fn largest_prime_add_does_not_overflow(a in 0u64..9_223_372_036_854_775_783, b in 0u64..9_223_372_036_854_775_783) {
            type Big = Fp<9_223_372_036_854_775_783>;
            let got = (Big::new(a) + Big::new(b)).value();
            let want = ((a as u128 + b as u128) % 9_223_372_036_854_775_783u128) as u64;
            prop_assert_eq!(got, want);
        }
    }
}
