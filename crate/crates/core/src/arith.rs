//! Arithmetic modulo Fermat numbers `F_n = 2^b + 1`, `b = 2^n`.
//!
//! Reduction never divides: it folds `x = hi * 2^b + lo` into `lo - hi`
//! (because `2^b = -1` modulo `F_n`) and tracks the sign until the magnitude
//! fits in `b` bits. Residues are always canonical, in `[0, F_n)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

pub const DEFAULT_MAX_BITS: u64 = 1 << 16;
pub const MAX_BITS_ENV: &str = "FERMATLAB_MAX_BITS";

/// Upper bound on the width of any exact value or modulus the crate will build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    max_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

impl Budget {
    pub fn new(max_bits: u64) -> Result<Self> {
        if max_bits == 0 {
            return Err(Error::InvalidBudget("must be positive".into()));
        }
        Ok(Budget { max_bits })
    }

    /// Reads `FERMATLAB_MAX_BITS`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_BITS_ENV) {
            Ok(raw) => {
                let bits = raw
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| Error::InvalidBudget(format!("{MAX_BITS_ENV}={raw:?}: {e}")))?;
                Budget::new(bits)
            }
            Err(std::env::VarError::NotPresent) => Ok(Budget::default()),
            Err(e) => Err(Error::InvalidBudget(format!("{MAX_BITS_ENV}: {e}"))),
        }
    }

    pub fn max_bits(&self) -> u64 {
        self.max_bits
    }

    /// Fails unless `2^log2_width <= max_bits`.
    pub(crate) fn check_pow2(&self, log2_width: u64, what: impl Into<String>) -> Result<u64> {
        let needed = pow2_saturating(log2_width);
        self.check(needed, what)
    }

    pub(crate) fn check(&self, needed: u64, what: impl Into<String>) -> Result<u64> {
        if needed > self.max_bits {
            return Err(Error::BudgetExceeded {
                what: what.into(),
                needed,
                max_bits: self.max_bits,
            });
        }
        Ok(needed)
    }
}

pub(crate) fn pow2_saturating(e: u64) -> u64 {
    if e >= 64 {
        u64::MAX
    } else {
        1u64 << e
    }
}

/// `F_n = 2^(2^n) + 1`.
pub fn fermat_value(n: u32, budget: Budget) -> Result<Natural> {
    let bits = budget.check_pow2(n as u64, format!("F_{n}"))?;
    Ok((Natural::one() << bits) + 1u32)
}

struct ModulusInner {
    n: u32,
    bits: u64,
    value: Natural,
    low_mask: Natural,
}

/// The modulus `F_n`. Cloning is cheap; clones compare equal.
#[derive(Clone)]
pub struct FermatModulus(Arc<ModulusInner>);

impl FermatModulus {
    pub fn new(n: u32, budget: Budget) -> Result<Self> {
        let value = fermat_value(n, budget)?;
        let bits = 1u64 << n;
        let low_mask = (Natural::one() << bits) - 1u32;
        Ok(FermatModulus(Arc::new(ModulusInner {
            n,
            bits,
            value,
            low_mask,
        })))
    }

    pub fn n(&self) -> u32 {
        self.0.n
    }

    /// `b = 2^n`.
    pub fn bits(&self) -> u64 {
        self.0.bits
    }

    pub fn value(&self) -> &Natural {
        &self.0.value
    }

    /// Bytes needed to hold any canonical residue.
    pub fn residue_byte_len(&self) -> usize {
        (self.0.bits as usize + 1).div_ceil(8)
    }

    pub fn residue(&self, x: &Natural) -> FermatResidue {
        reduce_mod_fermat(x, self)
    }

    pub fn residue_u64(&self, x: u64) -> FermatResidue {
        self.residue(&Natural::from(x))
    }

    pub fn zero(&self) -> FermatResidue {
        FermatResidue {
            modulus: self.clone(),
            value: Natural::zero(),
        }
    }

    pub fn one(&self) -> FermatResidue {
        self.residue_u64(1)
    }

    /// `F_n - 1`, i.e. the class of `-1`.
    pub fn minus_one(&self) -> FermatResidue {
        FermatResidue {
            modulus: self.clone(),
            value: self.value() - 1u32,
        }
    }

    fn fold(&self, x: &Natural) -> Natural {
        if x < self.value() {
            return x.clone();
        }
        let b = self.bits();
        let mut magnitude = x.clone();
        let mut negative = false;
        while magnitude.bits() > b {
            let lo = &magnitude & &self.0.low_mask;
            let hi = &magnitude >> b;
            if lo >= hi {
                magnitude = lo - hi;
            } else {
                magnitude = hi - lo;
                negative = !negative;
            }
        }
        // magnitude < 2^b < F_n
        if negative && !magnitude.is_zero() {
            self.value() - magnitude
        } else {
            magnitude
        }
    }
}

impl PartialEq for FermatModulus {
    fn eq(&self, other: &Self) -> bool {
        self.0.n == other.0.n
    }
}

impl Eq for FermatModulus {}

impl fmt::Debug for FermatModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.n)
    }
}

/// Canonical residue in `[0, F_n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FermatResidue {
    modulus: FermatModulus,
    value: Natural,
}

impl FermatResidue {
    pub fn modulus(&self) -> &FermatModulus {
        &self.modulus
    }

    pub fn value(&self) -> &Natural {
        &self.value
    }

    pub fn into_value(self) -> Natural {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_u64(&self, x: u64) -> bool {
        self.value == Natural::from(x)
    }

    /// Little-endian bytes zero-padded to [`FermatModulus::residue_byte_len`].
    pub fn to_le_bytes_padded(&self) -> Vec<u8> {
        let mut bytes = self.value.to_bytes_le();
        bytes.resize(self.modulus.residue_byte_len(), 0);
        bytes
    }
}

impl fmt::Debug for FermatResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {:?}", self.value, self.modulus)
    }
}

impl fmt::Display for FermatResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)
    }
}

/// Squaring and multiplication counts for one test run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    squarings: u64,
    multiplications: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn squarings(&self) -> u64 {
        self.squarings
    }

    pub fn multiplications(&self) -> u64 {
        self.multiplications
    }
}

pub fn reduce_mod_fermat(x: &Natural, m: &FermatModulus) -> FermatResidue {
    FermatResidue {
        modulus: m.clone(),
        value: m.fold(x),
    }
}

fn check_same(a: &FermatResidue, b: &FermatResidue) -> Result<()> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch {
            left: a.modulus.n(),
            right: b.modulus.n(),
        });
    }
    Ok(())
}

pub fn mul_mod(a: &FermatResidue, b: &FermatResidue, counter: &mut OpCounter) -> Result<FermatResidue> {
    check_same(a, b)?;
    counter.multiplications += 1;
    let product = &a.value * &b.value;
    Ok(reduce_mod_fermat(&product, &a.modulus))
}

pub fn square_mod(a: &FermatResidue, counter: &mut OpCounter) -> FermatResidue {
    counter.squarings += 1;
    let square = &a.value * &a.value;
    reduce_mod_fermat(&square, &a.modulus)
}

pub fn add_mod(a: &FermatResidue, b: &FermatResidue) -> Result<FermatResidue> {
    check_same(a, b)?;
    let mut sum = &a.value + &b.value;
    if &sum >= a.modulus.value() {
        sum -= a.modulus.value();
    }
    Ok(FermatResidue {
        modulus: a.modulus.clone(),
        value: sum,
    })
}

pub fn sub_mod(a: &FermatResidue, b: &FermatResidue) -> Result<FermatResidue> {
    check_same(a, b)?;
    let value = if a.value >= b.value {
        &a.value - &b.value
    } else {
        a.modulus.value() - &b.value + &a.value
    };
    Ok(FermatResidue {
        modulus: a.modulus.clone(),
        value,
    })
}

/// Left-to-right square-and-multiply. An exponent `2^M` costs exactly `M`
/// squarings and no multiplications.
pub fn pow_mod(base: &FermatResidue, exponent: &Natural, counter: &mut OpCounter) -> FermatResidue {
    let top = exponent.bits();
    if top == 0 {
        return base.modulus.one();
    }
    let mut acc = base.clone();
    for i in (0..top - 1).rev() {
        acc = square_mod(&acc, counter);
        if exponent.bit(i) {
            acc = mul_mod(&acc, base, counter).expect("same modulus");
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(n: u32) -> FermatModulus {
        FermatModulus::new(n, Budget::default()).unwrap()
    }

    #[test]
    fn fermat_values() {
        let b = Budget::default();
        assert_eq!(fermat_value(0, b).unwrap(), Natural::from(3u32));
        assert_eq!(fermat_value(3, b).unwrap(), Natural::from(257u32));
        assert_eq!(fermat_value(5, b).unwrap(), Natural::from(4_294_967_297u64));
        assert_eq!(fermat_value(16, b).unwrap().bits(), 65537);
    }

    #[test]
    fn budget_exceeded_is_an_error() {
        let err = fermat_value(17, Budget::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 131072, max_bits: 65536, .. }));
        let err = fermat_value(200, Budget::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: u64::MAX, .. }));
        let small = Budget::new(8).unwrap();
        assert!(FermatModulus::new(3, small).is_ok());
        assert!(FermatModulus::new(4, small).is_err());
        assert!(Budget::new(0).is_err());
    }

    #[test]
    fn fold_examples() {
        let f2 = modulus(2);
        assert!(f2.residue_u64(17).is_zero());
        assert!(f2.residue_u64(257).is_u64(2));
        assert!(f2.residue_u64(34).is_zero());
        // 2^b itself is -1
        assert!(f2.residue_u64(16).is_u64(16));
        let f3 = modulus(3);
        assert!(f3.residue_u64(256).is_u64(256));
        assert!(f3.residue_u64(512).is_u64(255));
    }

    #[test]
    fn fold_handles_inputs_far_above_the_square() {
        let f2 = modulus(2);
        for x in [u64::MAX, 1 << 40, 17 * 17 * 17 * 17 + 5] {
            assert_eq!(f2.residue_u64(x).value(), &(Natural::from(x) % 17u32));
        }
        let f0 = modulus(0);
        for x in 0..200u64 {
            assert!(f0.residue_u64(x).is_u64(x % 3));
        }
    }

    #[test]
    fn mul_and_square() {
        let f2 = modulus(2);
        let mut c = OpCounter::new();
        let six = f2.residue_u64(6);
        assert!(mul_mod(&six, &six, &mut c).unwrap().is_u64(2));
        assert!(square_mod(&six, &mut c).is_u64(2));
        assert_eq!((c.squarings(), c.multiplications()), (1, 1));
        assert_eq!(mul_mod(&six, &f2.one(), &mut c).unwrap(), six);
        assert!(mul_mod(&f2.zero(), &six, &mut c).unwrap().is_zero());
        assert!(square_mod(&f2.zero(), &mut c).is_zero());

        // 197^2 = 38809 = 151 * 257 + 2
        let f3 = modulus(3);
        assert!(square_mod(&f3.residue_u64(197), &mut c).is_u64(2));
    }

    #[test]
    fn modulus_mismatch() {
        let mut c = OpCounter::new();
        let a = modulus(2).one();
        let b = modulus(3).one();
        assert_eq!(
            mul_mod(&a, &b, &mut c).unwrap_err(),
            Error::ModulusMismatch { left: 2, right: 3 }
        );
        assert!(add_mod(&a, &b).is_err());
        assert_eq!(c, OpCounter::new());
    }

    #[test]
    fn pow_examples() {
        let f2 = modulus(2);
        let mut c = OpCounter::new();
        let three = f2.residue_u64(3);
        assert!(pow_mod(&three, &Natural::from(8u32), &mut c).is_u64(16));
        assert_eq!(pow_mod(&three, &Natural::zero(), &mut c), f2.one());
        assert_eq!(pow_mod(&three, &Natural::one(), &mut c), three);
    }

    #[test]
    fn pow_of_power_of_two_counts_only_squarings() {
        let f5 = modulus(5);
        for m in 0..40u64 {
            let mut c = OpCounter::new();
            pow_mod(&f5.residue_u64(3), &(Natural::one() << m), &mut c);
            assert_eq!(c.squarings(), m);
            assert_eq!(c.multiplications(), 0);
        }
    }

    #[test]
    fn sub_wraps() {
        let f2 = modulus(2);
        let two = f2.residue_u64(2);
        assert!(sub_mod(&f2.zero(), &two).unwrap().is_u64(15));
        assert!(add_mod(&f2.residue_u64(16), &two).unwrap().is_u64(1));
    }

    #[test]
    fn padded_bytes() {
        let f3 = modulus(3);
        assert_eq!(f3.residue_byte_len(), 2);
        assert_eq!(f3.residue_u64(256).to_le_bytes_padded(), vec![0, 1]);
        assert_eq!(f3.zero().to_le_bytes_padded(), vec![0, 0]);
    }
}
