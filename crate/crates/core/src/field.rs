//! Exact scalar fields for the linear-algebra oracle.
//!
//! Every representation built by this crate has 0/1 structure matrices, so the
//! algorithms only need a field; the concrete choices are prime fields
//! [`Gf<P>`] and the rationals.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An exact field.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// 0 for characteristic zero.
    const CHARACTERISTIC: u64;

    fn inverse(&self) -> Option<Self>;

    fn from_i64(value: i64) -> Self;
}

const fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field with `P` elements. `P` must be a prime below 2³¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Gf<const P: u32>(u32);

impl<const P: u32> Gf<P> {
    const VALID: () = assert!(is_prime(P) && P < (1 << 31), "modulus must be a prime below 2^31");

    pub fn new(value: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::VALID;
        Gf((value % P as u64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    fn pow(self, mut exp: u64) -> Self {
        let mut base = self.0 as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % P as u64;
            }
            base = base * base % P as u64;
            exp >>= 1;
        }
        Gf(acc as u32)
    }
}

impl<const P: u32> Add for Gf<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gf(((self.0 as u64 + rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gf(((self.0 as u64 + P as u64 - rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Gf((self.0 as u64 * rhs.0 as u64 % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Gf((P - self.0) % P)
    }
}

impl<const P: u32> Zero for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Gf<P> {
    fn one() -> Self {
        Gf::new(1)
    }
}

impl<const P: u32> Field for Gf<P> {
    const CHARACTERISTIC: u64 = P as u64;

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P as u64 - 2))
        }
    }

    fn from_i64(value: i64) -> Self {
        Gf::new(value.rem_euclid(P as i64) as u64)
    }
}

impl Field for BigRational {
    const CHARACTERISTIC: u64 = 0;

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        type F = Gf<7>;
        let a = F::new(3);
        assert_eq!((a * a.inverse().unwrap()).value(), 1);
        assert_eq!((a - F::new(5)).value(), 5);
        assert_eq!((-a).value(), 4);
        assert_eq!(F::from_i64(-1).value(), 6);
        assert!(F::zero().inverse().is_none());
        assert_eq!((F::one() + F::one()).value(), 2);
        assert_eq!((Gf::<2>::one() + Gf::<2>::one()).value(), 0);
    }

    #[test]
    fn large_prime() {
        type F = Gf<2147483647>;
        let x = F::new(123456789);
        assert_eq!(x * x.inverse().unwrap(), F::one());
    }

    #[test]
    fn rationals() {
        let half = BigRational::from_i64(2).inverse().unwrap();
        assert_eq!(half.clone() + half, BigRational::one());
        assert_eq!(<BigRational as Field>::CHARACTERISTIC, 0);
    }
}
