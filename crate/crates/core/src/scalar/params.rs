use std::fmt;

use log::info;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Scalar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Generic,
    OneParameter,
    Classical,
    Yangian,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Generic => "generic",
            Mode::OneParameter => "one-parameter",
            Mode::Classical => "classical",
            Mode::Yangian => "yangian",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(Mode::Generic),
            "one-parameter" => Ok(Mode::OneParameter),
            "classical" => Ok(Mode::Classical),
            "yangian" => Ok(Mode::Yangian),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

/// Square parameter matrix with unit diagonal and `a_ji = a_ij^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamMatrix<F> {
    n: usize,
    vals: Vec<F>,
}

impl<F: Scalar> ParamMatrix<F> {
    pub fn ones(n: usize) -> Self {
        ParamMatrix {
            n,
            vals: vec![F::one(); n * n],
        }
    }

    /// Builds from the strictly upper entries listed row by row.
    pub fn from_upper(n: usize, upper: &[F]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: upper.len(),
            });
        }
        let mut out = Self::ones(n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().expect("length checked").clone();
                out.vals[j * n + i] = v.try_inv()?;
                out.vals[i * n + j] = v;
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)` with 1-based indices.
    pub fn get(&self, i: usize, j: usize) -> Result<F> {
        for x in [i, j] {
            if x == 0 || x > self.n {
                return Err(Error::IndexOutOfRange {
                    what: "parameter matrix",
                    index: x,
                    bound: self.n,
                });
            }
        }
        Ok(self.vals[(i - 1) * self.n + j - 1].clone())
    }

    /// Entry `(i, j)` with 1-based indices; panics when out of range.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &F {
        assert!(i >= 1 && j >= 1 && i <= self.n && j <= self.n, "parameter index ({i},{j}) out of range");
        &self.vals[(i - 1) * self.n + j - 1]
    }

    pub fn is_ones(&self) -> bool {
        self.vals.iter().all(|v| v.is_one())
    }

    /// Overwrites one off-diagonal entry without touching its mirror.
    pub(crate) fn set_raw(&mut self, i: usize, j: usize, v: F) {
        self.vals[(i - 1) * self.n + j - 1] = v;
    }

    /// Checks unit diagonal and `a_ij a_ji = 1`.
    pub fn is_consistent(&self) -> bool {
        (1..=self.n).all(|i| {
            self.at(i, i).is_one()
                && (1..=self.n).all(|j| (self.at(i, j).clone() * self.at(j, i).clone()).is_one())
        })
    }
}

/// Which parameter matrix a lookup refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Q,
    P,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterAssignment<F> {
    pub n: usize,
    pub m: usize,
    pub q: ParamMatrix<F>,
    pub p: ParamMatrix<F>,
    pub u: Option<F>,
    pub z: Option<F>,
    pub w: Option<F>,
    pub mode: Mode,
    pub seed: u64,
    /// Set by `break_constraint`; the `q` matrix then violates `q_21 q_12 = 1`.
    pub broken: bool,
}

impl<F: Scalar> ParameterAssignment<F> {
    /// Samples an assignment. Only `q_ij`, `p_ij` with `i < j` are drawn; the rest are forced.
    pub fn sample(n: usize, m: usize, mode: Mode, seed: u64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidConfig("dimensions must be positive".into()));
        }
        let char = F::characteristic();
        if char != 0 && char <= 1 << 31 {
            return Err(Error::InvalidConfig(format!("prime {char} is not above 2^31")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let upper = |rng: &mut ChaCha8Rng, k: usize| -> Vec<F> {
            (0..k * k.saturating_sub(1) / 2).map(|_| F::sample_nonzero(rng)).collect()
        };
        let mut out = ParameterAssignment {
            n,
            m,
            q: ParamMatrix::ones(n),
            p: ParamMatrix::ones(m),
            u: None,
            z: None,
            w: None,
            mode,
            seed,
            broken: false,
        };
        match mode {
            Mode::Classical => {}
            Mode::Generic => {
                out.q = ParamMatrix::from_upper(n, &upper(&mut rng, n))?;
                out.p = ParamMatrix::from_upper(m, &upper(&mut rng, m))?;
            }
            Mode::OneParameter => {
                let t = F::sample_nonzero(&mut rng);
                out.q = ParamMatrix::from_upper(n, &vec![t.clone(); n * n.saturating_sub(1) / 2])?;
                out.p = ParamMatrix::from_upper(m, &vec![t; m * m.saturating_sub(1) / 2])?;
            }
            Mode::Yangian => {
                if n != m {
                    return Err(Error::InvalidConfig("yangian mode needs n = m".into()));
                }
                let u = loop {
                    let u = F::sample_nonzero(&mut rng);
                    if yangian_u_admissible(&u) {
                        break u;
                    }
                    info!("seed {seed}: resampling u, {u} makes a q-integer vanish");
                };
                let qs = upper(&mut rng, n);
                let u2 = u.clone() * u.clone();
                let ps = qs
                    .iter()
                    .map(|q| u2.try_div(q))
                    .collect::<Result<Vec<F>>>()?;
                out.q = ParamMatrix::from_upper(n, &qs)?;
                out.p = ParamMatrix::from_upper(m, &ps)?;
                out.z = Some(F::sample_nonzero(&mut rng));
                out.w = Some(F::sample_nonzero(&mut rng));
                out.u = Some(u);
            }
        }
        Ok(out)
    }

    /// Assembles an assignment from explicit values, validating every constraint.
    pub fn from_parts(q: ParamMatrix<F>, p: ParamMatrix<F>, u: Option<F>, mode: Mode) -> Result<Self> {
        let out = ParameterAssignment {
            n: q.dim(),
            m: p.dim(),
            q,
            p,
            u,
            z: None,
            w: None,
            mode,
            seed: 0,
            broken: false,
        };
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.q.is_consistent() || !self.p.is_consistent() {
            return Err(Error::ConstraintUnsatisfiable("q_ij q_ji = 1 and q_ii = 1".into()));
        }
        if self.mode == Mode::Classical && !(self.q.is_ones() && self.p.is_ones()) {
            return Err(Error::ConstraintUnsatisfiable("classical mode needs q = p = 1".into()));
        }
        if self.mode == Mode::Yangian {
            let u = self
                .u
                .as_ref()
                .ok_or_else(|| Error::ConstraintUnsatisfiable("yangian mode needs u".into()))?;
            if u.is_zero() {
                return Err(Error::ConstraintUnsatisfiable("u = 0".into()));
            }
            let u2 = u.clone() * u.clone();
            if (u2.clone() + F::one()).is_zero() {
                return Err(Error::ConstraintUnsatisfiable("u^2 = -1".into()));
            }
            if self.n != self.m {
                return Err(Error::ConstraintUnsatisfiable("yangian mode needs n = m".into()));
            }
            for i in 1..=self.n {
                for j in i + 1..=self.n {
                    if self.p.at(i, j).clone() * self.q.at(i, j).clone() != u2 {
                        return Err(Error::ConstraintUnsatisfiable(format!("p_{i}{j} q_{i}{j} != u^2")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn lookup(&self, symbol: Symbol, i: usize, j: usize) -> Result<F> {
        match symbol {
            Symbol::Q => self.q.get(i, j),
            Symbol::P => self.p.get(i, j),
        }
    }

    pub fn u(&self) -> Result<F> {
        self.u
            .clone()
            .ok_or_else(|| Error::ConstraintUnsatisfiable("u is not set".into()))
    }

    /// Resamples `q_21` independently of `q_12`, breaking `q_12 q_21 = 1`.
    pub fn break_constraint(&self) -> Result<Self> {
        if self.mode == Mode::Classical {
            return Err(Error::InapplicableMutation {
                mutation: "break-constraint".into(),
                case: "classical mode (parameters are forced to 1)".into(),
            });
        }
        if self.n < 2 {
            return Err(Error::InapplicableMutation {
                mutation: "break-constraint".into(),
                case: "n < 2 (no off-diagonal q)".into(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x9e37_79b9_7f4a_7c15);
        let q12 = self.q.at(1, 2).clone();
        let q21 = loop {
            let v = F::sample_nonzero(&mut rng);
            if !(v.clone() * q12.clone()).is_one() {
                break v;
            }
        };
        let mut out = self.clone();
        out.q.set_raw(2, 1, q21);
        out.broken = true;
        Ok(out)
    }
}

/// `u` must avoid small roots of unity so that every q-integer and fusion factor used is nonzero.
fn yangian_u_admissible<F: Scalar>(u: &F) -> bool {
    if u.is_zero() {
        return false;
    }
    let u2 = u.clone() * u.clone();
    (1..=8).all(|j| !u2.pow(j).is_one()) && !(u2 + F::one()).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use crate::scalar::{Fp61, Q};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn classical_is_all_ones() {
        for seed in 0..5 {
            let a = ParameterAssignment::<Fp61>::sample(2, 2, Mode::Classical, seed).unwrap();
            assert!(a.q.is_ones() && a.p.is_ones());
            assert_eq!(a.lookup(Symbol::P, 1, 2).unwrap(), Fp61::one());
        }
    }

    #[test]
    fn generic_q21_is_inverse() {
        let a = ParameterAssignment::<Fp61>::sample(2, 2, Mode::Generic, 11).unwrap();
        assert_eq!(
            a.lookup(Symbol::Q, 2, 1).unwrap(),
            a.lookup(Symbol::Q, 1, 2).unwrap().try_inv().unwrap()
        );
        assert_eq!(a.lookup(Symbol::Q, 1, 1).unwrap(), Fp61::one());
        assert!(a.lookup(Symbol::Q, 3, 1).is_err());
        assert!(a.lookup(Symbol::P, 0, 1).is_err());
    }

    #[test]
    fn yangian_constraint() {
        let a = ParameterAssignment::<Fp61>::sample(3, 3, Mode::Yangian, 5).unwrap();
        let u = a.u().unwrap();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            assert_eq!(*a.p.at(i, j) * *a.q.at(i, j), u * u);
        }
        a.validate().unwrap();
    }

    #[test]
    fn yangian_u_zero_rejected() {
        let r = ParameterAssignment::<Fp61>::from_parts(
            ParamMatrix::ones(2),
            ParamMatrix::ones(2),
            Some(Fp61::zero()),
            Mode::Yangian,
        );
        assert!(matches!(r, Err(Error::ConstraintUnsatisfiable(_))));
    }

    #[test]
    fn exact_rational_assignment() {
        let two_thirds = Q::new(BigInt::from(2), BigInt::from(3));
        let q = ParamMatrix::from_upper(2, &[two_thirds.clone()]).unwrap();
        let a = ParameterAssignment::from_parts(q, ParamMatrix::ones(2), None, Mode::Generic).unwrap();
        assert_eq!(a.q.get(2, 1).unwrap(), Q::new(BigInt::from(3), BigInt::from(2)));
    }

    #[test]
    fn broken_constraint() {
        let a = ParameterAssignment::<Fp61>::sample(2, 2, Mode::Generic, 3).unwrap();
        let b = a.break_constraint().unwrap();
        assert!(!b.q.is_consistent());
        assert!(b.validate().is_err());
        let c = ParameterAssignment::<Fp61>::sample(2, 2, Mode::Classical, 3).unwrap();
        assert!(matches!(c.break_constraint(), Err(Error::InapplicableMutation { .. })));
    }

    #[test]
    fn small_prime_rejected() {
        type Tiny = crate::scalar::Fp<101>;
        assert!(ParameterAssignment::<Tiny>::sample(2, 2, Mode::Generic, 0).is_err());
    }

    proptest! {
        #[test]
        fn sampled_assignments_are_consistent(seed in any::<u64>(), n in 1usize..5, m in 1usize..5) {
            for mode in [Mode::Generic, Mode::OneParameter, Mode::Classical] {
                let a = ParameterAssignment::<Fp61>::sample(n, m, mode, seed).unwrap();
                prop_assert!(a.q.is_consistent() && a.p.is_consistent());
                let b = ParameterAssignment::<Fp61>::sample(n, m, mode, seed).unwrap();
                prop_assert_eq!(a, b);
            }
            let y = ParameterAssignment::<Fp61>::sample(n, n, Mode::Yangian, seed).unwrap();
            prop_assert!(y.validate().is_ok());
        }
    }
}
