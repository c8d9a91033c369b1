use num_bigint::BigInt;
use proptest::prelude::*;
use qmcert::polyarith::primes_up_to;
use qmcert::quaternion::{hilbert_symbol_int, ramification_set, Place};

fn h(a: i64, b: i64, v: Place) -> i8 {
    hilbert_symbol_int(&BigInt::from(a), &BigInt::from(b), v).unwrap()
}

/// Removes even powers of `p`, leaving valuation 0 or 1.
fn normalize(mut a: i64, p: i64) -> i64 {
    while a % (p * p) == 0 {
        a /= p * p;
    }
    a
}

/// Looks for a primitive solution of `z^2 = a x^2 + b y^2` modulo `p^k`. A primitive
/// solution has `x` or `y` a unit, so one of them can be scaled to 1.
fn brute_force_symbol(a: i64, b: i64, p: i64) -> i8 {
    let k = if p == 2 { 6 } else { 3 };
    let (a, b) = (normalize(a, p), normalize(b, p));
    let m = p.pow(k);
    let mut square = vec![false; m as usize];
    for z in 0..m {
        square[(z * z % m) as usize] = true;
    }
    let r = |v: i64| v.rem_euclid(m) as usize;
    for t in 0..m {
        let t2 = t * t % m;
        // x = 1: z^2 = a + b t^2; y = 1: z^2 = a t^2 + b
        if square[r(a + b * t2)] || square[r(a * t2 + b)] {
            return 1;
        }
    }
    -1
}

#[test]
fn hilbert_symbol_matches_brute_force() {
    let primes: Vec<i64> = primes_up_to(50).into_iter().map(|p| p as i64).collect();
    for a in -30i64..=30 {
        for b in a..=30 {
            if a == 0 || b == 0 {
                continue;
            }
            for &p in &primes {
                let want = brute_force_symbol(a, b, p);
                assert_eq!(h(a, b, Place::Finite(p as u64)), want, "({a}, {b})_{p}");
            }
        }
    }
}

#[test]
fn hilbert_symbol_matches_brute_force_for_units() {
    for p in [11i64, 13, 47] {
        for (a, b) in [(1, 2), (-1, -1), (3, 5), (-7, 6), (29, -30)] {
            assert_eq!(h(a, b, Place::Finite(p as u64)), brute_force_symbol(a, b, p));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn product_formula(a in -500i64..=500, b in -500i64..=500) {
        prop_assume!(a != 0 && b != 0);
        // ramification_set errors on an odd number of ramified places
        let ram = ramification_set(&BigInt::from(a), &BigInt::from(b)).unwrap();
        prop_assert_eq!(ram.len() % 2, 0);
    }

    #[test]
    fn symmetric_and_bimultiplicative(a in -200i64..=200, b in -200i64..=200, c in -200i64..=200,
                                      pi in 0usize..8) {
        prop_assume!(a != 0 && b != 0 && c != 0);
        let places = [Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Finite(7),
                      Place::Finite(11), Place::Finite(13), Place::Finite(199), Place::Infinite];
        let v = places[pi];
        prop_assert_eq!(h(a, b, v), h(b, a, v));
        prop_assert_eq!(h(a * c, b, v), h(a, b, v) * h(c, b, v));
    }
}
