//! Closed-form lower bounds on splitting and balance probabilities for grids.
//!
//! Bounds with an unknown constant `beta` are kept as exponents, with a
//! numeric value at `beta = 1` for reference only.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `1 / (beta^b * n^p * m^q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolicBound {
    pub beta_exponent: u64,
    pub n_exponent: u64,
    pub m_exponent: u64,
    pub value_beta_one: f64,
    pub log10_beta_one: f64,
}

impl SymbolicBound {
    fn new(m: usize, n: usize, beta_exponent: u64, n_exponent: u64, m_exponent: u64) -> Self {
        let log10 = -(n_exponent as f64 * (n as f64).log10() + m_exponent as f64 * (m as f64).log10());
        SymbolicBound {
            beta_exponent,
            n_exponent,
            m_exponent,
            value_beta_one: 10f64.powf(log10),
            log10_beta_one: log10,
        }
    }
}

impl fmt::Display for SymbolicBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/(beta^{} n^{} m^{})", self.beta_exponent, self.n_exponent, self.m_exponent)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsTable {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    /// Vertex count `N`.
    pub vertices: usize,
    /// Edge count `M`.
    pub edges: usize,
    /// The k-splitting bound assumes `k` divides the longer side.
    pub k_divides_long_side: bool,
    /// A k-partition from the spanning tree distribution is balanced.
    pub balanced_partition: SymbolicBound,
    /// Some fixed set of `k - 1` edges splits a uniform tree evenly.
    pub k_splittable: SymbolicBound,
    /// `alpha / (N^(k-1) (M - N + 1)^(k-1))` with `alpha` the k-splitting
    /// bound at `beta = 1`: the balanced-forest probability it implies.
    pub forest_transfer: f64,
    pub forest_transfer_log10: f64,
    /// `1 / N^2`: a uniform tree is 2-splittable. Only for `k = 2`.
    pub two_splittable: Option<f64>,
    /// `1 / (m n^3)` for a central edge when the long side is even.
    pub central_edge_even: Option<f64>,
    /// `1 / (4 m n^3)` for a central edge when the long side is odd.
    pub central_edge_odd: Option<f64>,
    /// The central-edge value matching this grid's parity.
    pub central_edge: Option<f64>,
}

/// Bounds for the `m x n` grid. The grid is oriented so that the long side
/// plays the role of `m`.
pub fn bounds_table(m: usize, n: usize, k: usize) -> Result<BoundsTable> {
    if m == 0 || n == 0 || k == 0 {
        return Err(Error::InvalidParameter("m, n and k must be positive".into()));
    }
    let (m, n) = (m.max(n), m.min(n));
    let vertices = m * n;
    let edges = 2 * m * n - m - n;
    let k1 = (k - 1) as u64;
    let balanced_partition = SymbolicBound::new(m, n, (k * k) as u64, 5 * k1, 3 * k1);
    let k_splittable = SymbolicBound::new(m, n, (k * k) as u64, 3 * k1, k1);
    let forest_transfer_log10 = if k == 1 {
        0.0
    } else {
        k_splittable.log10_beta_one
            - k1 as f64 * ((vertices as f64).log10() + ((edges + 1 - vertices) as f64).max(1.0).log10())
    };
    let (two_splittable, central_edge_even, central_edge_odd, central_edge) = if k == 2 {
        let (mf, nf) = (m as f64, n as f64);
        let even = 1.0 / (mf * nf.powi(3));
        let odd = even / 4.0;
        (Some(1.0 / (vertices as f64).powi(2)), Some(even), Some(odd), Some(if m % 2 == 0 { even } else { odd }))
    } else if k == 1 {
        (Some(1.0), Some(1.0), Some(1.0), Some(1.0))
    } else {
        (None, None, None, None)
    };
    Ok(BoundsTable {
        m,
        n,
        k,
        vertices,
        edges,
        k_divides_long_side: m % k == 0,
        balanced_partition,
        k_splittable,
        forest_transfer: 10f64.powf(forest_transfer_log10),
        forest_transfer_log10,
        two_splittable,
        central_edge_even,
        central_edge_odd,
        central_edge,
    })
}

impl BoundsTable {
    /// Leading exponents of `n` and `m` in the forest transfer, counting
    /// `N = mn` and `M - N + 1 = (m - 1)(n - 1)` as `mn` each.
    pub fn transfer_exponents(&self) -> (u64, u64) {
        let k1 = (self.k - 1) as u64;
        (self.k_splittable.n_exponent + 2 * k1, self.k_splittable.m_exponent + 2 * k1)
    }
}

impl fmt::Display for BoundsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.6e}"));
        writeln!(f, "grid {}x{} (N = {}, M = {}), k = {}", self.m, self.n, self.vertices, self.edges, self.k)?;
        if !self.k_divides_long_side {
            writeln!(f, "warning: k does not divide {}; the k-splitting bound does not apply", self.m)?;
        }
        writeln!(f, "{:<24} {:<30} value (beta = 1)", "bound", "symbolic")?;
        writeln!(
            f,
            "{:<24} {:<30} {:.6e}",
            "balanced k-partition",
            self.balanced_partition.to_string(),
            self.balanced_partition.value_beta_one
        )?;
        writeln!(
            f,
            "{:<24} {:<30} {:.6e}",
            "k-splittable",
            self.k_splittable.to_string(),
            self.k_splittable.value_beta_one
        )?;
        writeln!(f, "{:<24} {:<30} {:.6e}", "forest transfer", "alpha/(N^(k-1)(M-N+1)^(k-1))", self.forest_transfer)?;
        writeln!(f, "{:<24} {:<30} {}", "2-splittable", "1/N^2", opt(self.two_splittable))?;
        writeln!(f, "{:<24} {:<30} {}", "central edge (m even)", "1/(m n^3)", opt(self.central_edge_even))?;
        writeln!(f, "{:<24} {:<30} {}", "central edge (m odd)", "1/(4 m n^3)", opt(self.central_edge_odd))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_by_ten_halves() {
        let t = bounds_table(10, 10, 2).unwrap();
        assert!((t.two_splittable.unwrap() - 1e-4).abs() < 1e-18);
        assert!((t.central_edge.unwrap() - 1e-4).abs() < 1e-18);
        assert!((t.central_edge_odd.unwrap() - 2.5e-5).abs() < 1e-18);
        assert_eq!(t.balanced_partition.to_string(), "1/(beta^4 n^5 m^3)");
        assert!((t.balanced_partition.value_beta_one - 1e-8).abs() < 1e-20);
        // alpha = 1/(n^3 m) = 1e-4; N = 100; M - N + 1 = 81.
        assert!((t.forest_transfer - 1e-4 / (100.0 * 81.0)).abs() < 1e-15);
    }

    #[test]
    fn transfer_reproduces_partition_exponents() {
        for k in 1..6 {
            let t = bounds_table(12, 7, k).unwrap();
            assert_eq!(t.transfer_exponents(), (t.balanced_partition.n_exponent, t.balanced_partition.m_exponent));
            assert!(t.forest_transfer > 0.0 && t.k_splittable.value_beta_one > 0.0);
        }
    }

    #[test]
    fn one_part_is_certain() {
        let t = bounds_table(6, 4, 1).unwrap();
        assert_eq!(t.balanced_partition.value_beta_one, 1.0);
        assert_eq!(t.k_splittable.value_beta_one, 1.0);
        assert_eq!(t.forest_transfer, 1.0);
        assert_eq!(t.two_splittable, Some(1.0));
        assert_eq!(t.central_edge, Some(1.0));
    }

    #[test]
    fn long_side_is_m() {
        let a = bounds_table(3, 8, 2).unwrap();
        assert_eq!((a.m, a.n), (8, 3));
        assert!(!bounds_table(9, 4, 2).unwrap().k_divides_long_side);
        assert!(bounds_table(9, 4, 2).unwrap().to_string().contains("warning"));
    }
}
