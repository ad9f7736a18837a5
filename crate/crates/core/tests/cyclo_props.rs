use num_complex::Complex64;
use proptest::prelude::*;
use wrt_core::CyclotomicNumber;

// a random element of Q(ζ_n) for a small n, with its value in C
fn element() -> impl Strategy<Value = (CyclotomicNumber, Complex64)> {
    (
        prop::sample::select(vec![1i128, 3, 4, 5, 7, 8, 9, 12, 15, 20]),
        prop::collection::vec((0i128..60, -5i64..=5), 0..6),
        1i64..5,
    )
        .prop_map(|(n, terms, den)| {
            let x = CyclotomicNumber::root_sum(n, &terms);
            let x = &x * &CyclotomicNumber::from_ratio(1, den);
            let z = terms.iter().fold(Complex64::new(0.0, 0.0), |acc, &(e, c)| {
                acc + Complex64::from_polar(
                    c as f64,
                    2.0 * std::f64::consts::PI * e as f64 / n as f64,
                )
            }) / den as f64;
            (x, z)
        })
}

proptest! {
    #[test]
    fn ring_axioms((a, _) in element(), (b, _) in element(), (c, _) in element()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn embedding_is_a_homomorphism((a, za) in element(), (b, zb) in element()) {
        prop_assert!((a.embed_complex() - za).norm() < 1e-9);
        prop_assert!(((&a * &b).embed_complex() - za * zb).norm() < 1e-8);
        prop_assert!(((&a + &b).embed_complex() - (za + zb)).norm() < 1e-9);
        prop_assert!((a.conj().embed_complex() - za.conj()).norm() < 1e-9);
    }

    #[test]
    fn equality_is_faithful((a, za) in element(), (b, zb) in element()) {
        // distinct complex values never compare equal, equal ones always do
        if (za - zb).norm() > 1e-6 {
            prop_assert_ne!(a, b);
        } else {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn periodic_exponents(a in -200i128..200, n in 1i128..60, k in -3i128..3) {
        prop_assert_eq!(CyclotomicNumber::e_frac(a, n), CyclotomicNumber::e_frac(a + k * n, n));
        prop_assert_eq!(CyclotomicNumber::e_frac(a, n).conj(), CyclotomicNumber::e_frac(-a, n));
    }

    #[test]
    fn json_round_trip((a, _) in element()) {
        let json = serde_json::to_string(&a).unwrap();
        let back: CyclotomicNumber = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, a);
    }
}
