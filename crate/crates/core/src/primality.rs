//! Primality procedures for Fermat numbers.
//!
//! * [`paper_scan`] looks for `q` with `F_n | A_q`. If `F_n` is prime such a
//!   `q` exists with `n <= q < 2^n`, so an empty window certifies that `F_n`
//!   is composite. A hit only suggests primality (the converse is unproven);
//!   [`cross_check`] pairs it with Pépin's test.
//! * [`h_min`] finds the first `j` with `A_j = 2 (mod F_n)`; for prime `F_n`
//!   it satisfies `j >= 3` and `A_{j-2} = 0`.
//! * [`trial_factor_search`] hunts for divisors `k * 2^(n+2) + 1`.
//!
//! Everything requires `n >= 2`: for `F_1 = 5` neither `A_1 = 6` nor
//! `A_2 = 34` is divisible by 5 although 5 is prime.

use std::time::Instant;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{fermat_value, pow_mod, Budget, FermatModulus, Natural, OpCounter};
use crate::error::{Error, Result};
use crate::sequences::ASequenceCursor;

pub const PEPIN_BASE: u64 = 3;
pub const TRACE_HASH_ALGORITHM: &str = "sha256";

/// Smallest `n` for which the divisor scan means anything.
pub const SCAN_FLOOR: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    PrimeByPepin,
    CompositeByPepin,
    /// No `q` in the scanned window: composite by the proven direction.
    CompositeCertified,
    /// `F_n | A_q`. Prime only if the unproven converse holds.
    DivisorWitnessFound { q: u64 },
    NotApplicable { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::PrimeByPepin => "PrimeByPepin",
            Verdict::CompositeByPepin => "CompositeByPepin",
            Verdict::CompositeCertified => "CompositeCertified",
            Verdict::DivisorWitnessFound { .. } => "DivisorWitnessFound",
            Verdict::NotApplicable { .. } => "NotApplicable",
        }
    }

    /// Inverse of [`Verdict::label`]; `q` is needed for witnesses.
    pub fn from_label(label: &str, q: Option<u64>) -> Option<Verdict> {
        Some(match label {
            "PrimeByPepin" => Verdict::PrimeByPepin,
            "CompositeByPepin" => Verdict::CompositeByPepin,
            "CompositeCertified" => Verdict::CompositeCertified,
            "DivisorWitnessFound" => Verdict::DivisorWitnessFound { q: q? },
            "NotApplicable" => Verdict::NotApplicable {
                reason: String::new(),
            },
            _ => return None,
        })
    }
}

fn require_scan_floor(n: u32) -> Result<()> {
    if n < SCAN_FLOOR {
        return Err(Error::NotApplicable {
            n,
            reason: format!(
                "the A_q divisor criterion needs n >= {SCAN_FLOOR} (F_1 = 5 divides neither A_1 nor A_2)"
            ),
        });
    }
    Ok(())
}

/// Pépin's test with base 3, counting operations into `counter`.
///
/// Computes `3^((F_n - 1) / 2) = 3^(2^(2^n - 1))`, i.e. exactly `2^n - 1`
/// squarings and no multiplications.
pub fn pepin_test_counted(n: u32, budget: Budget, counter: &mut OpCounter) -> Result<Verdict> {
    if n == 0 {
        return Ok(Verdict::NotApplicable {
            reason: "Pépin's test needs n >= 1".into(),
        });
    }
    let modulus = FermatModulus::new(n, budget)?;
    let exponent = Natural::one() << (modulus.bits() - 1);
    let power = pow_mod(&modulus.residue_u64(PEPIN_BASE), &exponent, counter);
    Ok(if power == modulus.minus_one() {
        Verdict::PrimeByPepin
    } else {
        Verdict::CompositeByPepin
    })
}

pub fn pepin_test(n: u32, budget: Budget) -> Result<Verdict> {
    pepin_test_counted(n, budget, &mut OpCounter::new())
}

/// Half-open index range `[lo, hi)` checked for `A_q = 0 (mod F_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanWindow {
    pub lo: u64,
    pub hi: u64,
}

impl ScanWindow {
    /// `n <= q < 2^n`.
    pub fn narrow(n: u32) -> Self {
        ScanWindow { lo: n as u64, hi: 1 << n }
    }

    /// `1 <= q <= 2^n`.
    pub fn full(n: u32) -> Self {
        ScanWindow {
            lo: 1,
            hi: (1 << n) + 1,
        }
    }

    pub fn for_n(n: u32, full_window: bool) -> Self {
        if full_window {
            Self::full(n)
        } else {
            Self::narrow(n)
        }
    }

    pub fn contains(&self, q: u64) -> bool {
        self.lo <= q && q < self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub n: u32,
    pub window: ScanWindow,
    pub found_q: Option<u64>,
    /// Zero residues met below `window.lo`.
    pub anomalies: Vec<u64>,
    /// `sha256:<hex>` over the padded little-endian residues `A_1, A_2, ...` visited.
    pub residue_trace_hash: String,
    pub squarings: u64,
}

impl ScanResult {
    pub fn verdict(&self) -> Verdict {
        match self.found_q {
            Some(q) => Verdict::DivisorWitnessFound { q },
            None => Verdict::CompositeCertified,
        }
    }
}

/// Iterates `A_q mod F_n` from `A_1`, stopping at the first zero inside the
/// window or at its end.
pub fn paper_scan(n: u32, full_window: bool, budget: Budget) -> Result<ScanResult> {
    paper_scan_with(n, full_window, budget, |_, _| {})
}

/// [`paper_scan`] that also reports every visited `(q, residue)`.
pub fn paper_scan_with<F>(n: u32, full_window: bool, budget: Budget, mut visit: F) -> Result<ScanResult>
where
    F: FnMut(u64, &crate::FermatResidue),
{
    require_scan_floor(n)?;
    let modulus = FermatModulus::new(n, budget)?;
    let window = ScanWindow::for_n(n, full_window);
    let mut counter = OpCounter::new();
    let mut hasher = Sha256::new();
    let mut cursor = ASequenceCursor::new(&modulus);
    let mut found_q = None;
    let mut anomalies = Vec::new();
    loop {
        let q = cursor.q();
        let residue = cursor.residue();
        hasher.update(residue.to_le_bytes_padded());
        visit(q, residue);
        if residue.is_zero() {
            if window.contains(q) {
                found_q = Some(q);
                break;
            }
            anomalies.push(q);
        }
        if q + 1 >= window.hi {
            break;
        }
        cursor.advance(&mut counter);
    }
    Ok(ScanResult {
        n,
        window,
        found_q,
        anomalies,
        residue_trace_hash: format!("{TRACE_HASH_ALGORITHM}:{}", hex::encode(hasher.finalize())),
        squarings: counter.squarings(),
    })
}

/// Smallest `j` in `[1, 2^n + 1]` with `A_j = 2 (mod F_n)`.
pub fn h_min(n: u32, budget: Budget) -> Result<Option<u64>> {
    require_scan_floor(n)?;
    let modulus = FermatModulus::new(n, budget)?;
    let last = (1u64 << n) + 1;
    let mut counter = OpCounter::new();
    let mut cursor = ASequenceCursor::new(&modulus);
    loop {
        if cursor.residue().is_u64(2) {
            return Ok(Some(cursor.q()));
        }
        if cursor.q() >= last {
            return Ok(None);
        }
        cursor.advance(&mut counter);
    }
}

/// `2^(2^(n+1)) = 1 (mod F_n)`; true for every `n`.
pub fn verify_two_order(n: u32, budget: Budget) -> Result<bool> {
    let modulus = FermatModulus::new(n, budget)?;
    let exponent = Natural::one() << (n as u64 + 1);
    let power = pow_mod(&modulus.residue_u64(2), &exponent, &mut OpCounter::new());
    Ok(power == modulus.one())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorWitness {
    pub n: u32,
    pub k: u64,
    /// `k * 2^(n+2) + 1`.
    pub factor: Natural,
    pub cofactor: Natural,
}

/// Smallest `k <= k_max` such that `k * 2^(n+2) + 1` is a proper divisor of `F_n`.
pub fn trial_factor_search(n: u32, k_max: u64, budget: Budget) -> Result<Option<FactorWitness>> {
    require_scan_floor(n)?;
    let fermat = fermat_value(n, budget)?;
    let step = Natural::one() << (n + 2);
    for k in 1..=k_max {
        let candidate = &step * k + 1u32;
        if candidate >= fermat {
            break;
        }
        // F_n = 0 (mod d)  <=>  2^(2^n) = -1 (mod d)
        let mut x = Natural::from(2u32);
        for _ in 0..n {
            x = (&x * &x) % &candidate;
        }
        if x + 1u32 != candidate {
            continue;
        }
        let (cofactor, rem) = fermat.div_rem(&candidate);
        debug_assert!(rem.is_zero());
        return Ok(Some(FactorWitness {
            n,
            k,
            factor: candidate,
            cofactor,
        }));
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub n: u32,
    pub bits: u64,
    pub pepin: Verdict,
    pub paper: Verdict,
    pub scan: ScanResult,
    pub consistent: bool,
    pub squarings_pepin: u64,
    pub squarings_scan: u64,
    pub elapsed_ms_pepin: f64,
    pub elapsed_ms_scan: f64,
}

/// Pépin prime must pair with a witness, Pépin composite with a certificate.
pub fn verdicts_consistent(pepin: &Verdict, paper: &Verdict) -> bool {
    matches!(
        (pepin, paper),
        (Verdict::PrimeByPepin, Verdict::DivisorWitnessFound { .. })
            | (Verdict::CompositeByPepin, Verdict::CompositeCertified)
    )
}

/// Runs Pépin and the default-window scan for `F_n` and compares them.
pub fn cross_check(n: u32, budget: Budget) -> Result<TestReport> {
    require_scan_floor(n)?;
    let bits = FermatModulus::new(n, budget)?.bits();

    let mut pepin_ops = OpCounter::new();
    let started = Instant::now();
    let pepin = pepin_test_counted(n, budget, &mut pepin_ops)?;
    let elapsed_ms_pepin = started.elapsed().as_secs_f64() * 1e3;

    let started = Instant::now();
    let scan = paper_scan(n, false, budget)?;
    let elapsed_ms_scan = started.elapsed().as_secs_f64() * 1e3;

    let paper = scan.verdict();
    Ok(TestReport {
        n,
        bits,
        consistent: verdicts_consistent(&pepin, &paper),
        squarings_pepin: pepin_ops.squarings(),
        squarings_scan: scan.squarings,
        pepin,
        paper,
        scan,
        elapsed_ms_pepin,
        elapsed_ms_scan,
    })
}
