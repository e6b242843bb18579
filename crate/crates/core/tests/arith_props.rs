//! Folding reduction and residue arithmetic against a plain `%` oracle.

use fermatlab::arith::{add_mod, mul_mod, pow_mod, reduce_mod_fermat, square_mod};
use fermatlab::{Budget, FermatModulus, Natural, OpCounter};
use num_traits::One;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn modulus(n: u32) -> FermatModulus {
    FermatModulus::new(n, Budget::default()).unwrap()
}

/// Uniform-ish sample in `[0, bound]` with a random bit length, so small and
/// large inputs both show up.
fn sample_upto(rng: &mut StdRng, bound: &Natural) -> Natural {
    let bits = rng.gen_range(1..=bound.bits());
    let mut bytes = vec![0u8; bits.div_ceil(8) as usize];
    rng.fill(bytes.as_mut_slice());
    let x = Natural::from_bytes_le(&bytes) >> (bytes.len() as u64 * 8 - bits);
    if &x > bound {
        x - bound
    } else {
        x
    }
}

#[test]
fn folding_matches_generic_remainder() {
    let mut rng = StdRng::seed_from_u64(0x5eed_f01d);
    for n in 2..=10 {
        let m = modulus(n);
        let square = m.value() * m.value();
        for _ in 0..1500 {
            let x = sample_upto(&mut rng, &square);
            assert_eq!(reduce_mod_fermat(&x, &m).value(), &(&x % m.value()), "n={n} x={x}");
        }
        // edges
        for x in [Natural::from(0u32), m.value() - 1u32, m.value().clone(), square.clone(), Natural::one() << m.bits()] {
            assert_eq!(reduce_mod_fermat(&x, &m).value(), &(&x % m.value()));
        }
    }
}

#[test]
fn folding_far_beyond_the_square() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in [0, 1, 2, 5, 8] {
        let m = modulus(n);
        let bound = Natural::one() << (m.bits() * 7 + 13);
        for _ in 0..300 {
            let x = sample_upto(&mut rng, &bound);
            assert_eq!(reduce_mod_fermat(&x, &m).value(), &(&x % m.value()));
        }
    }
}

fn residues(n: u32) -> impl Strategy<Value = (Natural, Natural, Natural)> {
    let m = modulus(n);
    let f = m.value().clone();
    let one = proptest::collection::vec(any::<u8>(), 0..=(m.residue_byte_len()));
    (one.clone(), one.clone(), one).prop_map(move |(a, b, c)| {
        let r = |v: Vec<u8>| Natural::from_bytes_le(&v) % &f;
        (r(a), r(b), r(c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ring_laws(n in 2u32..=9, seed in any::<u64>()) {
        let m = modulus(n);
        let mut rng = StdRng::seed_from_u64(seed);
        let top = m.value() - 1u32;
        let [a, b, c] = [(); 3].map(|_| m.residue(&sample_upto(&mut rng, &top)));
        let mut k = OpCounter::new();
        let ab = mul_mod(&a, &b, &mut k).unwrap();
        prop_assert_eq!(&ab, &mul_mod(&b, &a, &mut k).unwrap());
        prop_assert_eq!(
            mul_mod(&ab, &c, &mut k).unwrap(),
            mul_mod(&a, &mul_mod(&b, &c, &mut k).unwrap(), &mut k).unwrap()
        );
        let lhs = mul_mod(&a, &add_mod(&b, &c).unwrap(), &mut k).unwrap();
        let rhs = add_mod(&ab, &mul_mod(&a, &c, &mut k).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(square_mod(&a, &mut k), mul_mod(&a, &a, &mut k).unwrap());
    }

    #[test]
    fn residues_stay_canonical((a, b, _c) in residues(6)) {
        let m = modulus(6);
        let mut k = OpCounter::new();
        let prod = mul_mod(&m.residue(&a), &m.residue(&b), &mut k).unwrap();
        prop_assert!(prod.value() < m.value());
        prop_assert_eq!(prod.value(), &((&a * &b) % m.value()));
        prop_assert!(add_mod(&m.residue(&a), &m.residue(&b)).unwrap().value() < m.value());
    }

    #[test]
    fn pow_adds_exponents(n in 2u32..=8, base in any::<u64>(), e1 in 0u64..5000, e2 in 0u64..5000) {
        let m = modulus(n);
        let b = m.residue_u64(base);
        let mut k = OpCounter::new();
        let whole = pow_mod(&b, &Natural::from(e1 + e2), &mut k);
        let split = mul_mod(
            &pow_mod(&b, &Natural::from(e1), &mut k),
            &pow_mod(&b, &Natural::from(e2), &mut k),
            &mut k,
        )
        .unwrap();
        prop_assert_eq!(&whole, &split);
        prop_assert_eq!(whole.value(), &Natural::from(base).modpow(&Natural::from(e1 + e2), m.value()));
    }

    #[test]
    fn counters_never_decrease(ops in proptest::collection::vec(0u8..3, 1..40)) {
        let m = modulus(4);
        let x = m.residue_u64(12345);
        let mut k = OpCounter::new();
        let mut last = (0, 0);
        for op in ops {
            match op {
                0 => { square_mod(&x, &mut k); }
                1 => { mul_mod(&x, &x, &mut k).unwrap(); }
                _ => { pow_mod(&x, &Natural::from(77u32), &mut k); }
            }
            let now = (k.squarings(), k.multiplications());
            prop_assert!(now.0 >= last.0 && now.1 >= last.1);
            last = now;
        }
    }
}

#[test]
fn pow_of_two_power_exponent_costs_m_squarings() {
    for n in 2..=10 {
        let m = modulus(n);
        for big_m in [1u64, 3, 17, 100] {
            let mut k = OpCounter::new();
            pow_mod(&m.residue_u64(5), &(Natural::one() << big_m), &mut k);
            assert_eq!((k.squarings(), k.multiplications()), (big_m, 0));
        }
    }
}
