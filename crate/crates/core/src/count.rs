//! Exact spanning tree counts via the Matrix-Tree theorem.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::graph::Graph;

/// Number of spanning trees of a multigraph, counted with edge multiplicity.
///
/// Computes the determinant of the Laplacian with the last row and column
/// removed using fraction-free (Bareiss) elimination, so every intermediate
/// value is an exact integer. A graph with at most one vertex has exactly one
/// spanning tree (the empty one); a disconnected graph has none.
pub fn count_spanning_trees(g: &Graph) -> BigUint {
    let n = g.num_vertices();
    if n <= 1 {
        return BigUint::one();
    }
    let size = n - 1;
    let mut a = vec![vec![BigInt::zero(); size]; size];
    for &(u, v) in g.edges() {
        if u < size {
            a[u][u] += 1;
        }
        if v < size {
            a[v][v] += 1;
        }
        if u < size && v < size {
            a[u][v] -= 1;
            a[v][u] -= 1;
        }
    }
    let det = bareiss_determinant(a);
    // A Laplacian minor is positive semidefinite.
    debug_assert!(!det.is_negative());
    det.to_biguint().unwrap_or_default()
}

pub(crate) fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
        for row in a.iter_mut().skip(k + 1) {
            row[k] = BigInt::zero();
        }
    }
    sign * a[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::build_grid;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    #[test]
    fn small_cases() {
        assert_eq!(count_spanning_trees(&cycle(4)), BigUint::from(4u32));
        let two = Graph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(count_spanning_trees(&two), BigUint::from(2u32));
        assert_eq!(count_spanning_trees(&Graph::new(1, vec![]).unwrap()), BigUint::one());
        assert_eq!(count_spanning_trees(&Graph::new(3, vec![(0, 1)]).unwrap()), BigUint::zero());
    }

    #[test]
    fn grid_counts_match_known_values() {
        // 2x3 grid has 15 trees, 3x3 has 192, 4x4 has 100352 (OEIS A007341).
        let count = |m, n| count_spanning_trees(build_grid(m, n).unwrap().graph());
        assert_eq!(count(2, 3), BigUint::from(15u32));
        assert_eq!(count(3, 3), BigUint::from(192u32));
        assert_eq!(count(4, 4), BigUint::from(100352u32));
    }

    #[test]
    fn large_counts_do_not_overflow() {
        // 10x10 grid: 5.7e42 spanning trees, far beyond u128.
        let c = count_spanning_trees(build_grid(10, 10).unwrap().graph());
        assert_eq!(c.to_string(), "5694319004079097795957215725765328371712000");
    }

    #[test]
    fn determinant_with_pivoting() {
        let m = vec![vec![BigInt::from(0), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(0)]];
        assert_eq!(bareiss_determinant(m), BigInt::from(-1));
    }
}
