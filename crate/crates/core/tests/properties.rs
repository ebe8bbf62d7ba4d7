use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sothardy::function::{eval_circle, eval_disk, sample, sample_values};
use sothardy::gallery::{make_arc_multiplier, make_rotation_symbol, random_matrix_polynomial, separability_witness};
use sothardy::norms::{hp_disk_norm, l2_strong_norm, lp_sot_norm, op_norm};
use sothardy::transforms::{fourier_coefficient, poisson_integral, strong_poisson};
use sothardy::verify::verify_contraction_nonanalytic;
use sothardy::{make_grid, CircleFunction, DiskFunction, Exponent, MatrixValue, RadiusLadder, C64};

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> MatrixValue {
    MatrixValue::from_fn(rows, cols, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Trigonometric polynomial with modes in `[-m, m]`.
fn trig_poly(seed: u64, rows: usize, cols: usize, m: i64) -> CircleFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: BTreeMap<i64, MatrixValue> = (-m..=m).map(|n| (n, random_matrix(&mut rng, rows, cols))).collect();
    CircleFunction::fourier_polynomial(coeffs).unwrap()
}

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn disk_point() -> impl Strategy<Value = C64> {
    (0.0..0.95f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::TWO),
        Just(Exponent::INF),
        (1.0..6.0f64).prop_map(|p| Exponent::finite(p).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fourier_and_poisson_are_linear(
        s1 in any::<u64>(), s2 in any::<u64>(), a in complex(), b in complex(),
        m in 0i64..5, zeta in disk_point(),
    ) {
        let f = trig_poly(s1, 2, 3, m);
        let g = trig_poly(s2, 2, 3, m);
        let combo = f.scale(a).try_add(&g.scale(b)).unwrap();
        let grid = make_grid(32).unwrap();
        for n in -m..=m {
            let lhs = fourier_coefficient(&combo, n, &grid).unwrap();
            let mut rhs = fourier_coefficient(&f, n, &grid).unwrap().scale(a);
            rhs.axpy(b, &fourier_coefficient(&g, n, &grid).unwrap());
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
        let lhs = poisson_integral(&combo, zeta).unwrap();
        let mut rhs = poisson_integral(&f, zeta).unwrap().scale(a);
        rhs.axpy(b, &poisson_integral(&g, zeta).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-11);
    }

    #[test]
    fn norms_are_scale_equivariant(seed in any::<u64>(), c in complex(), p in exponent()) {
        let f = trig_poly(seed, 2, 2, 3);
        let grid = make_grid(64).unwrap();
        let fc = f.scale(c);
        let base = lp_sot_norm(&f, p, &grid).unwrap();
        prop_assert!((lp_sot_norm(&fc, p, &grid).unwrap() - c.norm() * base).abs() <= 1e-12 * (1.0 + base));
        let strong = l2_strong_norm(&f, &grid).unwrap();
        prop_assert!((l2_strong_norm(&fc, &grid).unwrap() - c.norm() * strong).abs() <= 1e-12 * (1.0 + strong));
    }

    #[test]
    fn strong_norm_is_below_sot_norm(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4, m in 0i64..4) {
        let f = trig_poly(seed, rows, cols, m);
        let grid = make_grid(64).unwrap();
        let strong = l2_strong_norm(&f, &grid).unwrap();
        let sot = lp_sot_norm(&f, Exponent::TWO, &grid).unwrap();
        prop_assert!(strong <= sot * (1.0 + 1e-12));
    }

    #[test]
    fn lp_norms_nest(seed in any::<u64>(), p in 1.0..8.0f64, q in 1.0..8.0f64) {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        let f = trig_poly(seed, 2, 2, 3);
        let grid = make_grid(64).unwrap();
        let np = lp_sot_norm(&f, Exponent::finite(p).unwrap(), &grid).unwrap();
        let nq = lp_sot_norm(&f, Exponent::finite(q).unwrap(), &grid).unwrap();
        let ninf = lp_sot_norm(&f, Exponent::INF, &grid).unwrap();
        prop_assert!(np <= nq * (1.0 + 1e-12));
        prop_assert!(nq <= ninf * (1.0 + 1e-12));
    }

    #[test]
    fn analytic_disk_norms_grow_radially(seed in any::<u64>(), d in 1usize..4, degree in 0usize..5, p in exponent()) {
        let h = DiskFunction::poisson_extension(random_matrix_polynomial(d, degree, seed).unwrap());
        let profile = hp_disk_norm(&h, p, &RadiusLadder::new(8).unwrap(), &make_grid(64).unwrap()).unwrap();
        for w in profile.per_radius.windows(2) {
            prop_assert!(w[1].1 >= w[0].1 * (1.0 - 1e-12), "{:?}", profile.per_radius);
        }
    }

    #[test]
    fn transpose_commutes_with_fourier(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4, n in -4i64..5) {
        let f = trig_poly(seed, rows, cols, 3);
        let grid = make_grid(32).unwrap();
        let lhs = fourier_coefficient(&f.transpose(), n, &grid).unwrap();
        let rhs = fourier_coefficient(&f, n, &grid).unwrap().transpose();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn witness_is_monotone_in_epsilon(seed in any::<u64>(), e1 in 0.05..3.0f64, e2 in 0.05..3.0f64) {
        let (small, large) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let f = sample(&random_matrix_polynomial(2, 4, seed).unwrap(), &make_grid(256).unwrap()).unwrap();
        prop_assert!(separability_witness(&f, large).unwrap() <= separability_witness(&f, small).unwrap());
    }

    #[test]
    fn sampling_matches_evaluation_bitwise(seed in any::<u64>(), n in 2usize..200, which in 0usize..3) {
        let f = match which {
            0 => trig_poly(seed, 2, 3, 4),
            1 => make_arc_multiplier(1 + (seed % 8) as usize).unwrap(),
            _ => make_rotation_symbol(1 + (seed % 8) as usize).unwrap(),
        };
        let grid = make_grid(n).unwrap();
        let values = sample_values(&f, &grid).unwrap();
        let sampled = sample(&f, &grid).unwrap();
        for (j, v) in values.iter().enumerate() {
            prop_assert_eq!(v, &eval_circle(&f, grid.node(j)).unwrap());
            prop_assert_eq!(v, &eval_circle(&sampled, grid.node(j)).unwrap());
        }
    }

    #[test]
    fn operator_norm_ignores_transposition(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, rows, cols);
        let n = op_norm(&a).unwrap();
        prop_assert!((op_norm(&a.transpose()).unwrap() - n).abs() <= 1e-12 * n);
        prop_assert!((op_norm(&a.adjoint()).unwrap() - n).abs() <= 1e-12 * n);
        prop_assert!(n >= a.max_abs_entry() * (1.0 - 1e-12));
    }

    #[test]
    fn radial_sections_contract(seed in any::<u64>(), p in exponent()) {
        let f = trig_poly(seed, 2, 2, 3);
        let rep = verify_contraction_nonanalytic(&f, p, &make_grid(64).unwrap(), &RadiusLadder::new(8).unwrap()).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.verdict.failures);
    }

    #[test]
    fn poisson_extension_of_analytic_polynomial_is_taylor(seed in any::<u64>(), degree in 0usize..6, zeta in disk_point()) {
        let f = random_matrix_polynomial(2, degree, seed).unwrap();
        let CircleFunction::FourierPolynomial { coeffs } = &f else { unreachable!() };
        let taylor = DiskFunction::taylor((0..=degree as i64).map(|n| coeffs.get(&n).cloned().unwrap_or_else(|| MatrixValue::zeros(2, 2))).collect()).unwrap();
        let via_poisson = strong_poisson(&f, zeta).unwrap();
        prop_assert!(via_poisson.max_abs_diff(&eval_disk(&taylor, zeta).unwrap()) <= 1e-12);
    }
}
