//! Exact arithmetic in `Z[sqrt 2]`.
//!
//! The unit `u = 3 + 2 sqrt 2` and its conjugate `v = 3 - 2 sqrt 2 = u^-1`
//! generate the `A` sequence: `A_{k+1} = u^(2^k) + v^(2^k)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{Budget, Natural};
use crate::error::{Error, Result};

/// `a + b sqrt 2` with exact integer components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZSqrt2 {
    pub a: BigInt,
    pub b: BigInt,
}

impl ZSqrt2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        ZSqrt2 {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn one() -> Self {
        ZSqrt2::new(1, 0)
    }

    pub fn zero() -> Self {
        ZSqrt2::new(0, 0)
    }

    pub fn conjugate(&self) -> Self {
        ZSqrt2 {
            a: self.a.clone(),
            b: -&self.b,
        }
    }

    /// `a^2 - 2 b^2`.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - BigInt::from(2) * &self.b * &self.b
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Both components reduced into `[0, p)`.
    pub fn reduce(&self, p: &Natural) -> Self {
        let p = BigInt::from(p.clone());
        ZSqrt2 {
            a: self.a.mod_floor(&p),
            b: self.b.mod_floor(&p),
        }
    }
}

impl fmt::Display for ZSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.sign() == Sign::Minus {
            write!(f, "{} - {}√2", self.a, -&self.b)
        } else {
            write!(f, "{} + {}√2", self.a, self.b)
        }
    }
}

impl Mul for &ZSqrt2 {
    type Output = ZSqrt2;

    fn mul(self, rhs: &ZSqrt2) -> ZSqrt2 {
        ZSqrt2 {
            a: &self.a * &rhs.a + BigInt::from(2) * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &rhs.a * &self.b,
        }
    }
}

impl Mul for ZSqrt2 {
    type Output = ZSqrt2;

    fn mul(self, rhs: ZSqrt2) -> ZSqrt2 {
        &self * &rhs
    }
}

impl Add for &ZSqrt2 {
    type Output = ZSqrt2;

    fn add(self, rhs: &ZSqrt2) -> ZSqrt2 {
        ZSqrt2 {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &ZSqrt2 {
    type Output = ZSqrt2;

    fn sub(self, rhs: &ZSqrt2) -> ZSqrt2 {
        ZSqrt2 {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Neg for ZSqrt2 {
    type Output = ZSqrt2;

    fn neg(self) -> ZSqrt2 {
        ZSqrt2 {
            a: -self.a,
            b: -self.b,
        }
    }
}

/// The fundamental unit and its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitPair {
    pub u: ZSqrt2,
    pub v: ZSqrt2,
}

impl UnitPair {
    pub fn new() -> Self {
        let u = ZSqrt2::new(3, 2);
        let v = ZSqrt2::new(3, -2);
        assert_eq!(&u + &v, ZSqrt2::new(6, 0), "u + v = 6");
        assert_eq!(&u * &v, ZSqrt2::one(), "u v = 1");
        UnitPair { u, v }
    }
}

impl Default for UnitPair {
    fn default() -> Self {
        Self::new()
    }
}

pub fn unit_u() -> ZSqrt2 {
    ZSqrt2::new(3, 2)
}

pub fn mul(x: &ZSqrt2, y: &ZSqrt2) -> ZSqrt2 {
    x * y
}

/// Exact `x^k` by repeated squaring. Exponents above the bit budget are
/// refused (for `u` the components are about `2.55 k` bits wide).
pub fn pow(x: &ZSqrt2, k: u64, budget: Budget) -> Result<ZSqrt2> {
    budget.check(k, format!("exact power x^{k}"))?;
    let mut acc = ZSqrt2::one();
    let mut base = x.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = base.square();
        }
    }
    Ok(acc)
}

fn check_modulus(p: &Natural) -> Result<()> {
    if *p < Natural::from(2u32) {
        return Err(Error::Domain(format!("modulus must be at least 2, got {p}")));
    }
    Ok(())
}

/// `x = y (mod p)` componentwise.
pub fn congruent_mod(x: &ZSqrt2, y: &ZSqrt2, p: &Natural) -> Result<bool> {
    check_modulus(p)?;
    let p = BigInt::from(p.clone());
    Ok((&x.a - &y.a).is_multiple_of(&p) && (&x.b - &y.b).is_multiple_of(&p))
}

/// `x^k` with both components reduced into `[0, p)` after every step.
pub fn pow_mod_p(x: &ZSqrt2, k: &Natural, p: &Natural) -> Result<ZSqrt2> {
    check_modulus(p)?;
    let base = x.reduce(p);
    let mut acc = ZSqrt2::one().reduce(p);
    for i in (0..k.bits()).rev() {
        acc = acc.square().reduce(p);
        if k.bit(i) {
            acc = (&acc * &base).reduce(p);
        }
    }
    Ok(acc)
}

/// `u^(2^k) + v^(2^k)`, computed as twice the rational part of `u^(2^k)`
/// since `v^(2^k)` is its conjugate.
pub fn trace_pow2(k: u32, budget: Budget) -> Result<Natural> {
    budget.check_pow2(k as u64, format!("u^(2^{k})"))?;
    let mut power = unit_u();
    for _ in 0..k {
        power = power.square();
    }
    let trace = &power + &power.conjugate();
    assert!(trace.b.is_zero(), "sqrt 2 components of u^(2^k) + v^(2^k) cancel");
    Ok(trace
        .a
        .to_biguint()
        .expect("trace of a power of u is positive"))
}

/// Whether `u^p = u (mod p)`.
///
/// For `p = F_n` prime this holds when `n >= 2`; it fails for `p = 3` and
/// `p = 5`, where `2^(n+1)` does not divide `(p - 1) / 2`.
pub fn frobenius_check(p: &Natural) -> Result<bool> {
    let u = unit_u();
    let lhs = pow_mod_p(&u, p, p)?;
    Ok(lhs == u.reduce(p))
}
