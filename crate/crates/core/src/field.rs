//! Exact scalar fields.
//!
//! Two implementations are provided: [`Rational`] (arbitrary precision, the
//! default everywhere) and [`Fp`], the prime field whose modulus is installed
//! per thread with [`with_prime`].

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("cannot parse scalar {0:?}")]
    Syntax(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("{0} is not a supported prime modulus")]
    BadModulus(u64),
}

/// An exact field. Arithmetic takes references so big rationals are not
/// cloned on every operation.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `None` for zero.
    fn inverse(&self) -> Option<Self>;
    fn parse_scalar(text: &str) -> Result<Self, ScalarError>;
    /// Short name used in reports, e.g. `q` or `fp:7`.
    fn field_name() -> String;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Arbitrary-precision rationals, printed as `p` or `p/q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }
    fn minus(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }
    fn times(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }
    fn negated(&self) -> Self {
        Rational(-&self.0)
    }
    fn inverse(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn parse_scalar(text: &str) -> Result<Self, ScalarError> {
        let syntax = || ScalarError::Syntax(text.to_string());
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text.trim(), "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| syntax())?;
        let den = BigInt::from_str(den).map_err(|_| syntax())?;
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator(text.to_string()));
        }
        let mut value = BigRational::new(num, den);
        if value.denom().is_negative() {
            value = BigRational::new(-value.numer().clone(), -value.denom().clone());
        }
        Ok(Rational(value))
    }
    fn field_name() -> String {
        "q".to_string()
    }
}

thread_local! {
    static MODULUS: Cell<u64> = const { Cell::new(0) };
}

/// Largest modulus accepted by [`with_prime`]; products are formed in `u128`.
pub const MAX_PRIME: u64 = (1 << 32) - 5;

/// Residue class modulo the prime installed on the current thread.
///
/// The residues 0 and 1 do not depend on the modulus, so constants can be
/// created anywhere; every other operation panics when no modulus is set.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp(u64);

fn modulus() -> u64 {
    let p = MODULUS.with(Cell::get);
    assert!(p != 0, "prime field used outside with_prime");
    p
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Run `body` with `p` installed as the modulus of [`Fp`] on this thread.
pub fn with_prime<R>(p: u64, body: impl FnOnce() -> R) -> Result<R, ScalarError> {
    if p > MAX_PRIME || !is_prime(p) {
        return Err(ScalarError::BadModulus(p));
    }
    let previous = MODULUS.with(|m| m.replace(p));
    struct Restore(u64);
    impl Drop for Restore {
        fn drop(&mut self) {
            MODULUS.with(|m| m.set(self.0));
        }
    }
    let _restore = Restore(previous);
    Ok(body())
}

impl Fp {
    pub fn residue(&self) -> u64 {
        self.0
    }

    fn reduce(n: i128) -> Self {
        let p = modulus() as i128;
        Fp(n.rem_euclid(p) as u64)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_int(n: i64) -> Self {
        Fp::reduce(n as i128)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn plus(&self, rhs: &Self) -> Self {
        Fp::reduce(self.0 as i128 + rhs.0 as i128)
    }
    fn minus(&self, rhs: &Self) -> Self {
        Fp::reduce(self.0 as i128 - rhs.0 as i128)
    }
    fn times(&self, rhs: &Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % modulus() as u128) as u64)
    }
    fn negated(&self) -> Self {
        Fp::reduce(-(self.0 as i128))
    }
    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        let p = modulus() as i128;
        let (mut r0, mut r1) = (p, self.0 as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(Fp::reduce(s0))
    }
    fn parse_scalar(text: &str) -> Result<Self, ScalarError> {
        let value: i128 = text.trim().parse().map_err(|_| ScalarError::Syntax(text.to_string()))?;
        Ok(Fp::reduce(value))
    }
    fn field_name() -> String {
        format!("fp:{}", MODULUS.with(Cell::get))
    }
}
