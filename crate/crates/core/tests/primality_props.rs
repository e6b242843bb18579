//! Desk-scale probes of the divisor criterion against Pépin and exact oracles.

use fermatlab::arith::fermat_value;
use fermatlab::primality::{
    cross_check, h_min, paper_scan, pepin_test, pepin_test_counted, trial_factor_search, verify_two_order,
    ScanWindow, Verdict,
};
use fermatlab::sequences::{a_exact_terms, a_mod_fermat};
use fermatlab::{Budget, Error, FermatModulus, Natural, OpCounter};

fn b() -> Budget {
    Budget::default()
}

#[test]
fn scan_and_pepin_agree_up_to_twelve() {
    for n in 2..=12 {
        let scan = paper_scan(n, false, b()).unwrap();
        let pepin = pepin_test(n, b()).unwrap();
        assert_eq!(scan.found_q.is_none(), pepin == Verdict::CompositeByPepin, "n={n}");
        assert!(scan.anomalies.is_empty());
    }
}

#[test]
fn proof_machinery_for_prime_fermat_numbers() {
    for n in 2..=4 {
        let m = h_min(n, b()).unwrap().expect("H is non-empty for prime F_n");
        assert!(m >= 3);
        assert!(m <= (1 << n) + 1);
        let modulus = FermatModulus::new(n, b()).unwrap();
        let r = a_mod_fermat(m - 2, &modulus, &mut OpCounter::new()).unwrap();
        assert!(r.is_zero(), "A_(m-2) mod F_{n}");
    }
}

#[test]
fn h_min_excludes_one_and_two() {
    // A_1 = 2 forces p | 4 and A_2 = 2 forces p | 32; no odd p >= 17 does.
    let terms = a_exact_terms(2, b()).unwrap();
    for n in 2..=10 {
        let f = fermat_value(n, b()).unwrap();
        for a in &terms {
            assert_ne!(a % &f, Natural::from(2u32));
        }
    }
}

#[test]
fn witnesses_sit_in_the_narrow_window() {
    for n in 2..=4u32 {
        let narrow = paper_scan(n, false, b()).unwrap();
        let q = narrow.found_q.unwrap();
        assert!(n as u64 <= q && q < 1 << n);
        let full = paper_scan(n, true, b()).unwrap();
        assert_eq!(full.window, ScanWindow { lo: 1, hi: (1 << n) + 1 });
        assert_eq!(full.found_q, Some(q), "nothing below n in the full window");
    }
}

#[test]
fn witness_index_is_a_true_zero() {
    for n in 2..=4 {
        let scan = paper_scan(n, false, b()).unwrap();
        let q = scan.found_q.unwrap();
        let terms = a_exact_terms(q, b()).unwrap();
        assert!(terms.len() as u64 == q);
        let f = fermat_value(n, b()).unwrap();
        let exact = &terms[q as usize - 1] % &f;
        assert_eq!(exact, Natural::from(0u32));
    }
}

#[test]
fn two_order_unconditional() {
    for n in 0..=12 {
        assert!(verify_two_order(n, b()).unwrap(), "n={n}");
    }
}

#[test]
fn squaring_accounting() {
    for n in 2..=10u32 {
        let mut c = OpCounter::new();
        pepin_test_counted(n, b(), &mut c).unwrap();
        assert_eq!(c.squarings(), (1 << n) - 1);
        let scan = paper_scan(n, false, b()).unwrap();
        match scan.found_q {
            Some(q) => assert_eq!(scan.squarings, q - 1),
            None => assert_eq!(scan.squarings, (1 << n) - 2),
        }
    }
}

#[test]
fn factor_witnesses_multiply_back() {
    for (n, k_max) in [(5u32, 10u64), (6, 10_000), (7, 100_000), (12, 10)] {
        let f = fermat_value(n, b()).unwrap();
        if let Some(w) = trial_factor_search(n, k_max, b()).unwrap() {
            assert_eq!(&w.factor * &w.cofactor, f);
            assert!(w.factor > Natural::from(1u32) && w.factor < f);
            assert_eq!(w.factor, (Natural::from(w.k) << (n + 2)) + 1u32);
        }
    }
    // F_6 = 274177 * 67280421310721, 274177 = 1071 * 2^8 + 1
    let w = trial_factor_search(6, 2000, b()).unwrap().unwrap();
    assert_eq!(w.k, 1071);
}

#[test]
fn statement_fails_literally_at_n_one() {
    let five = Natural::from(5u32);
    for a in a_exact_terms(2, b()).unwrap() {
        assert_ne!(a % &five, Natural::from(0u32));
    }
    assert_eq!(pepin_test(1, b()).unwrap(), Verdict::PrimeByPepin);
    assert!(matches!(paper_scan(1, false, b()), Err(Error::NotApplicable { n: 1, .. })));
    assert!(matches!(cross_check(1, b()), Err(Error::NotApplicable { .. })));
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let strip = |mut r: fermatlab::primality::TestReport| {
        r.elapsed_ms_pepin = 0.0;
        r.elapsed_ms_scan = 0.0;
        r
    };
    for n in [2, 7] {
        assert_eq!(strip(cross_check(n, b()).unwrap()), strip(cross_check(n, b()).unwrap()));
    }
}
