//! The sequence `A_1 = 6`, `A_{q+1} = A_q^2 - 2`, its halves `S_q = A_q / 2`,
//! and the interleaving `F_n < A_n < F_{n+1}`.
//!
//! Indices start at 1; there is no `A_0`.

use serde::{Deserialize, Serialize};

use crate::arith::{self, fermat_value, square_mod, Budget, FermatModulus, FermatResidue, Natural, OpCounter};
use crate::error::{Error, Result};

pub const A_FIRST: u64 = 6;

fn check_index(q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::Domain("the A sequence starts at index 1".into()));
    }
    Ok(())
}

/// `A_q` has roughly `2.55 * 2^(q-1)` bits; `2^(q-1)` must fit the budget.
fn check_exact(q: u64, budget: Budget) -> Result<()> {
    check_index(q)?;
    budget.check_pow2(q - 1, format!("exact A_{q}"))?;
    Ok(())
}

/// Exact `A_1, ..., A_q_max`.
pub fn a_exact_terms(q_max: u64, budget: Budget) -> Result<Vec<Natural>> {
    check_exact(q_max, budget)?;
    let mut terms = Vec::with_capacity(q_max as usize);
    let mut a = Natural::from(A_FIRST);
    for _ in 1..q_max {
        let next = &a * &a - 2u32;
        terms.push(std::mem::replace(&mut a, next));
    }
    terms.push(a);
    Ok(terms)
}

pub fn a_exact(q: u64, budget: Budget) -> Result<Natural> {
    Ok(a_exact_terms(q, budget)?.pop().expect("q >= 1"))
}

/// `S_q = A_q / 2`.
pub fn s_value(q: u64, budget: Budget) -> Result<Natural> {
    let a = a_exact(q, budget)?;
    debug_assert!(!a.bit(0));
    Ok(a >> 1)
}

/// `r^2 - 2` modulo `F_n`, with one counted squaring.
pub fn a_next_mod(r: &FermatResidue, counter: &mut OpCounter) -> FermatResidue {
    let square = square_mod(r, counter);
    let two = r.modulus().residue_u64(2);
    arith::sub_mod(&square, &two).expect("same modulus")
}

/// Walks `A_1, A_2, ...` modulo one Fermat number.
#[derive(Debug, Clone)]
pub struct ASequenceCursor {
    q: u64,
    residue: FermatResidue,
}

impl ASequenceCursor {
    /// Positioned at `A_1`.
    pub fn new(modulus: &FermatModulus) -> Self {
        ASequenceCursor {
            q: 1,
            residue: modulus.residue_u64(A_FIRST),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn residue(&self) -> &FermatResidue {
        &self.residue
    }

    pub fn advance(&mut self, counter: &mut OpCounter) -> &FermatResidue {
        self.residue = a_next_mod(&self.residue, counter);
        self.q += 1;
        &self.residue
    }
}

/// `A_q mod F_n` by `q - 1` modular steps from `A_1`.
pub fn a_mod_fermat(q: u64, modulus: &FermatModulus, counter: &mut OpCounter) -> Result<FermatResidue> {
    check_index(q)?;
    let mut cursor = ASequenceCursor::new(modulus);
    while cursor.q() < q {
        cursor.advance(counter);
    }
    Ok(cursor.residue)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub n_max: u64,
    /// Indices `n` where `F_n < A_n < F_{n+1}` fails.
    pub violations: Vec<u64>,
}

impl OverlapReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `F_n < A_n < F_{n+1}` for `1 <= n <= n_max` with exact integers.
pub fn overlap_check(n_max: u64, budget: Budget) -> Result<OverlapReport> {
    check_index(n_max)?;
    budget.check_pow2(n_max.saturating_add(1), format!("F_{}", n_max.saturating_add(1)))?;
    let terms = a_exact_terms(n_max, budget)?;
    let mut lower = fermat_value(1, budget)?;
    let mut violations = Vec::new();
    for (i, a) in terms.iter().enumerate() {
        let n = i as u64 + 1;
        let upper = fermat_value((n + 1) as u32, budget)?;
        if !(lower < *a && *a < upper) {
            violations.push(n);
        }
        lower = upper;
    }
    Ok(OverlapReport { n_max, violations })
}
