use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use wrt_core::modgroup::{
    cf_expand, cf_for_lens, cf_to_matrix, linking_data, ContinuedFraction, Sl2,
};

fn eigen_signature(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 0;
    }
    let mat = DMatrix::from_fn(n, n, |i, j| m[i][j] as f64);
    mat.symmetric_eigenvalues()
        .iter()
        .map(|&x| {
            if x > 1e-9 {
                1
            } else if x < -1e-9 {
                -1
            } else {
                0
            }
        })
        .sum()
}

proptest! {
    #[test]
    fn recurrence_matches_products(entries in prop::collection::vec(-6i64..=6, 1..8)) {
        let (cf, u) = cf_to_matrix(&entries).unwrap();
        prop_assert_eq!(cf.product_direct().unwrap(), u);
        prop_assert_eq!(u.a * u.d - u.b * u.c, 1);
        // each convergent is the product of its prefix
        for i in 1..=cf.len() {
            let prefix = ContinuedFraction::new(entries[..i].to_vec()).unwrap();
            prop_assert_eq!(prefix.matrix(), cf.convergent(i).as_matrix());
        }
    }

    #[test]
    fn nested_value_is_a_over_c(entries in prop::collection::vec(-6i64..=6, 1..8)) {
        let cf = ContinuedFraction::new(entries).unwrap();
        let last = cf.convergent(cf.len());
        match cf.nested_value() {
            Some(v) => prop_assert_eq!(v, BigRational::new(BigInt::from(last.a), BigInt::from(last.c))),
            None => prop_assert_eq!(last.c, 0),
        }
    }

    #[test]
    fn expansion_round_trip(num in -300i64..300, den in 1i64..120) {
        let g = num_integer::gcd(num, den);
        prop_assume!(num.abs() / g != den / g);
        let cf = cf_expand(num, den).unwrap();
        prop_assert_eq!(cf.nested_value(), Some(BigRational::new(num.into(), den.into())));
        let e = cf.entries();
        let x = num as f64 / den as f64;
        if x > 1.0 {
            prop_assert!(e.iter().all(|&m| m >= 2));
        } else if x < -1.0 {
            prop_assert!(e.iter().all(|&m| m <= -2));
        } else if num != 0 {
            prop_assert_eq!(*e.last().unwrap(), 0);
            let body = &e[..e.len() - 1];
            if x > 0.0 {
                prop_assert!(body.iter().all(|&m| m <= -2));
            } else {
                prop_assert!(body.iter().all(|&m| m >= 2));
            }
        }
    }

    #[test]
    fn signature_matches_eigenvalues(entries in prop::collection::vec(-4i64..=4, 1..8)) {
        let cf = ContinuedFraction::new(entries).unwrap();
        let link = linking_data(&cf);
        prop_assert_eq!(link.signature, eigen_signature(&link.matrix));
        prop_assert_eq!(link.trace, link.framings.iter().sum::<i64>());
    }

    #[test]
    fn lens_matrix_shape(p in 2i64..80, q in 1i64..80) {
        prop_assume!(q < p && num_integer::gcd(p, q) == 1);
        let (cf, u) = cf_for_lens(p, -q).unwrap();
        prop_assert_eq!((u.a, u.c), (-q, p));
        prop_assert!(cf.entries()[..cf.len() - 1].iter().all(|&m| m >= 2));
        prop_assert_eq!(*cf.entries().last().unwrap(), 0);
        let link = linking_data(&cf);
        // positive definite plumbing
        prop_assert_eq!(link.signature, link.framings.len() as i64);
    }
}

#[test]
fn identity_word() {
    assert_eq!(cf_to_matrix(&[0, 0, 0, 0]).unwrap().1, Sl2::IDENTITY);
}
