use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use padtors::hensel::{poly_roots_in_disk, ScanOptions};
use padtors::poly::Poly;
use padtors::series::PadicSeries;
use padtors::Padic;

const P: u64 = 5;
const PREC: i64 = 24;
const T: i64 = 12;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn series(cs: &[i64]) -> PadicSeries {
    PadicSeries::from_i64s(P, cs, PREC, T)
}

fn is_one(s: &PadicSeries) -> bool {
    (&s.coeff(0) - &Padic::one(P, PREC)).is_zero() && (1..s.trunc()).all(|k| s.coeff(k).is_zero())
}

/// Plain truncated product, the oracle for `*`.
fn naive_mul(a: &[i64], b: &[i64], modulus: i128) -> Vec<i128> {
    let mut out = vec![0i128; T as usize];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < T as usize {
                out[i + j] = (out[i + j] + *x as i128 * *y as i128).rem_euclid(modulus);
            }
        }
    }
    out
}

fn ints() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1000i64..1000, T as usize)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn product_matches_convolution(a in ints(), b in ints()) {
        let prod = &series(&a) * &series(&b);
        let m = 5i128.pow(PREC as u32);
        for (k, c) in naive_mul(&a, &b, m).into_iter().enumerate() {
            let d = &prod.coeff(k as i64) - &Padic::from_i64(c as i64, P, PREC);
            prop_assert!(d.is_zero());
        }
    }

    #[test]
    fn reciprocal_and_sqrt(mut a in ints()) {
        a[0] = 1 + 5 * (a[0].rem_euclid(100));
        let f = series(&a);
        prop_assert!(is_one(&(&f * &f.reciprocal().unwrap())));
        // the square root is normalized to constant term 1
        a[0] = 1;
        let f = series(&a);
        let r = (&f * &f).sqrt().unwrap();
        prop_assert!((&r - &f).is_zero());
    }

    #[test]
    fn integrate_then_derive(a in ints()) {
        let f = series(&a);
        let back = f.integrate().unwrap().derive();
        for k in 0..T - 1 {
            prop_assert!((&back.coeff(k) - &f.coeff(k)).is_zero());
        }
    }

    #[test]
    fn composition_inverse_two_sided(mut a in ints()) {
        a[0] = 0;
        a[1] = 1 + 5 * a[1].rem_euclid(100);
        let f = series(&a);
        let g = f.comp_inverse().unwrap();
        let x = PadicSeries::var(P, PREC, T);
        prop_assert!((&f.compose(&g).unwrap() - &x).is_zero());
        prop_assert!((&g.compose(&f).unwrap() - &x).is_zero());
        prop_assert!((0..T).all(|k| g.coeff(k).is_integral()));
    }

    #[test]
    fn json_round_trip(a in ints()) {
        let f = series(&a);
        prop_assert_eq!(PadicSeries::from_json(&f.to_json()).unwrap(), f);
    }
}

fn residue(x: &Padic, k: u32) -> u64 {
    let m = BigUint::from(P).pow(k);
    let v = if x.is_zero() { BigUint::from(0u32) } else { x.to_biguint().unwrap() % &m };
    u64::try_from(v).unwrap()
}

proptest! {
    #![proptest_config(config(12))]

    /// Monic cubics whose discriminant is a unit: every root mod p lifts to
    /// exactly one class mod p^6, so the brute-force zero set mod p^6 must
    /// equal the reduced roots.
    #[test]
    fn poly_roots_match_brute_force(c0 in 0i64..125, c1 in 0i64..125, c2 in 0i64..125) {
        let disc = -4 * c1.pow(3) - 27 * c0.pow(2) + c1.pow(2) * c2.pow(2) - 4 * c0 * c2.pow(3) + 18 * c0 * c1 * c2;
        prop_assume!(disc.rem_euclid(5) != 0);
        let f = Poly::from_i64s(P, &[c0, c1, c2, 1], 30);
        let scan = poly_roots_in_disk(&f, 0, &ScanOptions::new(30)).unwrap();
        prop_assert!(scan.unresolved.is_empty());
        let found: BTreeSet<u64> = scan.roots.iter().map(|r| residue(&r.root, 6)).collect();
        let m = 5i128.pow(6);
        let brute: BTreeSet<u64> = (0..m)
            .filter(|&x| (((x * x % m + c2 as i128 * x) % m * x + c1 as i128 * x + c0 as i128) % m) == 0)
            .map(|x| x as u64)
            .collect();
        prop_assert_eq!(found, brute);
        for r in &scan.roots {
            prop_assert!(f.eval(&r.root).val() >= 28);
        }
    }
}
