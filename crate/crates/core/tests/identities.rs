use hermsim::chaos::{hermite, pair_partitions, wick_partition_route, wick_product};
use hermsim::farima::gamma_coefficients;
use hermsim::meyer::profile::{farima_symbol, fractional_difference_symbol};
use proptest::prelude::*;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn difference_symbol_is_multiplicative(
        xi in -2.0 * PI + 1e-3..2.0 * PI - 1e-3,
        d1 in -0.45f64..0.45,
        d2 in -0.45f64..0.45,
    ) {
        let lhs = fractional_difference_symbol(xi, d1) * fractional_difference_symbol(xi, d2);
        let rhs = fractional_difference_symbol(xi, d1 + d2);
        prop_assert!((lhs - rhs).norm() < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn farima_symbol_is_multiplicative(
        xi in 1e-3f64..2.0 * PI - 1e-3,
        sign in prop::bool::ANY,
        d1 in -0.45f64..0.45,
        d2 in -0.45f64..0.45,
    ) {
        let xi = if sign { xi } else { -xi };
        let lhs = farima_symbol(xi, d1) * farima_symbol(xi, d2);
        let rhs = farima_symbol(xi, d1 + d2);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn gamma_coefficients_match_gamma_functions(delta in -0.49f64..0.49, p in 1usize..2000) {
        prop_assume!(delta.abs() > 1e-6);
        let g = gamma_coefficients(delta, p).unwrap().values[p];
        // gamma_p = Gamma(p + delta) / (Gamma(delta) Gamma(p + 1)) and 1 / Gamma(delta) = delta / Gamma(1 + delta).
        let lg = delta * (ln_gamma(p as f64 + delta) - ln_gamma(1.0 + delta) - ln_gamma(p as f64 + 1.0)).exp();
        prop_assert!(close(g, lg, 1e-9), "{g} vs {lg}");
    }

    #[test]
    fn gamma_convolution_adds_exponents(d1 in -0.24f64..0.24, d2 in -0.24f64..0.24, p in 0usize..64) {
        let a = gamma_coefficients(d1, p).unwrap().values;
        let b = gamma_coefficients(d2, p).unwrap().values;
        let c = gamma_coefficients(d1 + d2, p).unwrap().values;
        let conv: f64 = (0..=p).map(|q| a[q] * b[p - q]).sum();
        prop_assert!(close(conv, c[p], 1e-12), "{conv} vs {}", c[p]);
    }

    #[test]
    fn hermite_three_term_recurrence(n in 1usize..14, x in -4.0f64..4.0) {
        let lhs = hermite(n + 1, x);
        let rhs = x * hermite(n, x) - n as f64 * hermite(n - 1, x);
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn wick_of_independent_values_is_hermite_product(xs in prop::collection::vec(-3.0f64..3.0, 1..6), reps in prop::collection::vec(1usize..4, 1..6)) {
        let m = xs.len().min(reps.len());
        let mut values = Vec::new();
        let mut owner = Vec::new();
        for i in 0..m {
            for _ in 0..reps[i] {
                values.push(xs[i]);
                owner.push(i);
            }
        }
        prop_assume!(values.len() <= 6);
        let cov = |a: usize, b: usize| if owner[a] == owner[b] { 1.0 } else { 0.0 };
        let expected: f64 = (0..m).map(|i| hermite(reps[i], xs[i])).product();
        let w = wick_product(&values, cov);
        let p = wick_partition_route(&values, cov, 6).unwrap();
        prop_assert!(close(w, expected, 1e-10), "{w} vs {expected}");
        prop_assert!(close(p, expected, 1e-10), "{p} vs {expected}");
    }
}

#[test]
fn partition_counts_follow_double_factorials() {
    // Perfect matchings of 2m points number (2m - 1)!!.
    let mut df = 1u128;
    for m in 1..=5usize {
        df *= (2 * m - 1) as u128;
        let ground: Vec<usize> = (0..2 * m).collect();
        assert_eq!(pair_partitions(&ground, m).unwrap().len() as u128, df);
    }
}
