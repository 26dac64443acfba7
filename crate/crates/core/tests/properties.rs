use mostowkit::bounds::{beta, k_of_z};
use mostowkit::cli::{parse_matrix_file, render_matrix_file};
use mostowkit::decompose::{bipolar, mostow, relative_residual, BranchSpec};
use mostowkit::matcore::{c, cond, r, ComplexMatrix};
use mostowkit::validate::rng::{nonsingular, stream, unitary};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    any::<f64>().prop_filter("finite", |x| x.is_finite())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_file_round_trip(rows in 0usize..4, cols in 0usize..4, vals in prop::collection::vec((finite(), finite()), 16)) {
        let m = ComplexMatrix::from_fn(rows, cols, |i, j| {
            let (a, b) = vals[i * 4 + j];
            c(a, b)
        });
        let back = parse_matrix_file(&render_matrix_file(&m)).unwrap();
        prop_assert_eq!(back.shape(), m.shape());
        for (x, y) in m.iter().zip(back.iter()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn mostow_reconstructs(seed in any::<u64>(), n in 1usize..6) {
        let z = nonsingular(&mut stream(seed, 0), n, 1e3);
        let f = mostow(&z).unwrap();
        prop_assert!(relative_residual(&z, &f.reconstruct()) < 1e-9);
    }

    #[test]
    fn bipolar_reconstructs(seed in any::<u64>(), n in 1usize..5) {
        let z = nonsingular(&mut stream(seed, 1), n, 1e2);
        let f = bipolar(&z, BranchSpec::Auto).unwrap();
        prop_assert!(relative_residual(&z, &f.reconstruct()) < 1e-9);
    }

    #[test]
    fn beta_unitary_left_invariant(seed in any::<u64>(), n in 1usize..4) {
        let mut g = stream(seed, 2);
        let z = nonsingular(&mut g, n, 20.0);
        let u = unitary(&mut g, n);
        prop_assert!((beta(&(&u * &z)).unwrap() - beta(&z).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn k_scale_invariant(seed in any::<u64>(), scale in 0.01f64..100.0) {
        let z = nonsingular(&mut stream(seed, 3), 3, 5.0);
        let k = k_of_z(&z).unwrap();
        prop_assert!((k_of_z(&(&z * r(scale))).unwrap() - k).abs() <= 1e-8 * k);
        prop_assert!(cond(&z).unwrap() <= 5.0 * (1.0 + 1e-9));
    }
}
