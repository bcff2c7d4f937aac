//! Probabilists' Hermite polynomials and their partition coefficients.

use crate::error::{Error, Result};

/// `H_n(x)` via `H_{n+1} = x H_n - n H_{n-1}`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let c = x * b - k as f64 * a;
        a = b;
        b = c;
    }
    b
}

/// `a_m^{(n)}`, the number of partitions of `n` points into `m` pairs and `n - 2m` singletons.
pub fn hermite_partition_coeff(n: usize, m: usize) -> Result<u128> {
    if 2 * m > n {
        return Err(Error::Domain(format!("m = {m} exceeds n/2 for n = {n}")));
    }
    // Point n is a singleton or paired with one of the other n - 1 points.
    let mut table = vec![vec![0u128; m + 1]; n + 1];
    for (k, row) in table.iter_mut().enumerate() {
        if k <= n {
            row[0] = 1;
        }
    }
    for k in 2..=n {
        for mm in 1..=m {
            table[k][mm] = table[k - 1][mm] + (k as u128 - 1) * table[k - 2][mm - 1];
        }
    }
    Ok(table[n][m])
}

/// Monomial coefficients of `H_n` recovered by interpolating `hermite(n, .)`
/// on `n + 1` nodes.
pub fn hermite_coefficients_fit(n: usize) -> Vec<f64> {
    let size = n + 1;
    let nodes: Vec<f64> = (0..size).map(|i| i as f64 - n as f64 / 2.0).collect();
    let mut a: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&x| {
            let mut row: Vec<f64> = (0..size).map(|p| x.powi(p as i32)).collect();
            row.push(hermite(n, x));
            row
        })
        .collect();
    for col in 0..size {
        let piv = (col..size)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for r in 0..size {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=size {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    (0..size).map(|i| a[i][size] / a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn low_order_values() {
        assert_eq!(hermite(2, 1.0), 0.0);
        assert_eq!(hermite(3, 2.0), 2.0);
        assert_eq!(hermite(0, 123.0), 1.0);
        assert_eq!(hermite(1, -0.5), -0.5);
    }

    #[test]
    fn partition_coefficients() {
        assert_eq!(hermite_partition_coeff(2, 1).unwrap(), 1);
        assert_eq!(hermite_partition_coeff(3, 1).unwrap(), 3);
        assert_eq!(hermite_partition_coeff(6, 2).unwrap(), 45);
        assert!(hermite_partition_coeff(3, 2).is_err());
    }

    #[test]
    fn fitted_coefficients_match_counts() {
        for n in 0..=8usize {
            let c = hermite_coefficients_fit(n);
            for m in 0..=n / 2 {
                let expected = hermite_partition_coeff(n, m).unwrap() as f64;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((c[n - 2 * m] - sign * expected).abs() < 1e-6, "n={n} m={m}");
            }
        }
    }

    proptest! {
        #[test]
        fn derivative_identity(n in 1usize..12, x in -3.0f64..3.0) {
            // H_n'(x) = n H_{n-1}(x), checked by central differences.
            let e = 1e-5;
            let d = (hermite(n, x + e) - hermite(n, x - e)) / (2.0 * e);
            let r = n as f64 * hermite(n - 1, x);
            prop_assert!((d - r).abs() <= 1e-5 * (1.0 + r.abs()));
        }
    }
}
