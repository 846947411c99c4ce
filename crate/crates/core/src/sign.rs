//! The Koszul sign rule. Every sign in the crate is produced here.

use std::ops::Mul;

use crate::field::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^n`.
    pub fn parity(n: i64) -> Sign {
        if n.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `(-1)^(a*b)`: the sign picked up when symbols of degrees `a` and `b`
    /// are transposed.
    pub fn koszul(a: i32, b: i32) -> Sign {
        Sign::parity(a as i64 * b as i64)
    }

    pub fn scalar<F: Field>(self) -> F {
        match self {
            Sign::Plus => F::one(),
            Sign::Minus => F::one().negated(),
        }
    }

    pub fn apply<F: Field>(self, x: &F) -> F {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => x.negated(),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}
