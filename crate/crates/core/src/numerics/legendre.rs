//! Gauss-Legendre nodes and weights on [-1, 1].

use crate::scalar::Scalar;

/// Computes the `m`-point Gauss-Legendre rule by Newton iteration on the
/// Legendre recurrence. Deterministic for a given `m` and scalar type.
pub fn gauss_legendre<T: Scalar>(m: usize) -> (Vec<T>, Vec<T>) {
    assert!(m >= 1, "rule must have at least one node");
    let mut nodes = vec![T::zero(); m];
    let mut weights = vec![T::zero(); m];

    let mf = T::from_usize(m).unwrap();
    let pi = T::cst(std::f64::consts::PI);
    let half = T::cst(0.5);
    let tol = T::epsilon() * T::cst(4.0);

    for i in 0..m.div_ceil(2) {
        // Tricomi-style initial guess, then Newton.
        let k = T::from_usize(i).unwrap();
        let mut x = (pi * (k + T::cst(0.75)) / (mf + half)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= tol {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        let w = T::cst(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        // Center node of an odd rule sits exactly at zero.
        nodes[m / 2] = T::zero();
        let (_, d) = legendre_with_derivative(m, T::zero());
        weights[m / 2] = T::cst(2.0) / (d * d);
    }
    (nodes, weights)
}

/// Evaluates (P_m(x), P_m'(x)) via the three-term recurrence.
fn legendre_with_derivative<T: Scalar>(m: usize, x: T) -> (T, T) {
    let mut p_prev = T::one();
    let mut p = x;
    if m == 0 {
        return (T::one(), T::zero());
    }
    for j in 2..=m {
        let jf = T::from_usize(j).unwrap();
        let next = ((T::cst(2.0) * jf - T::one()) * x * p - (jf - T::one()) * p_prev) / jf;
        p_prev = p;
        p = next;
    }
    let d = T::from_usize(m).unwrap() * (p_prev - x * p) / (T::one() - x * x);
    (p, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for m in [1, 2, 5, 8, 16, 24, 31] {
            let (_, w) = gauss_legendre::<f64>(m);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "m={m}: {total}");
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // m-point rule is exact through degree 2m-1.
        let (x, w) = gauss_legendre::<f64>(6);
        let integral: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(10)).sum();
        assert!((integral - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        let (x, _) = gauss_legendre::<f64>(16);
        for i in 0..8 {
            assert!((x[i] + x[15 - i]).abs() < 1e-15);
        }
        for i in 1..16 {
            assert!(x[i] > x[i - 1]);
        }
    }

    #[test]
    fn f32_rule_is_usable() {
        let (x, w) = gauss_legendre::<f32>(8);
        let integral: f32 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi * xi).sum();
        assert!((integral - 2.0 / 3.0).abs() < 1e-6);
    }
}
