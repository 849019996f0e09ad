//! Standard nilpotent families used for tests and benchmarks.

use super::LieAlgebra;

/// Heisenberg algebra `h_{2m+1}`: `[e_i, e_{m+i}] = e_{2m+1}`.
pub fn heisenberg(m: usize) -> LieAlgebra {
    let n = 2 * m + 1;
    let brackets: Vec<_> = (1..=m).map(|i| (i, m + i, n, 1)).collect();
    LieAlgebra::from_int_brackets(format!("h{n}"), n, &brackets).expect("valid indices")
}

/// Standard filiform algebra `L_n`: `[e_1, e_i] = e_{i+1}` for `2 ≤ i < n`.
pub fn filiform(n: usize) -> LieAlgebra {
    let brackets: Vec<_> = (2..n).map(|i| (1, i, i + 1, 1)).collect();
    LieAlgebra::from_int_brackets(format!("L{n}"), n, &brackets).expect("valid indices")
}

/// Weights of the standard positive diagonal derivation of `h_{2m+1}`.
pub fn heisenberg_weights(m: usize) -> Vec<i64> {
    let mut w = vec![1; 2 * m];
    w.push(2);
    w
}

/// Weights `(1, 1, 2, …, n-1)` of the standard diagonal derivation of `L_n`.
pub fn filiform_weights(n: usize) -> Vec<i64> {
    let mut w = vec![1];
    w.extend((1..n).map(|i| i as i64));
    w
}
