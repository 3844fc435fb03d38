// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Explicit block matrix of one flying–static interaction over the register
//! `{f, s1, …, sN}`. Used only to validate the strided kernel.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::protocol::ExchangeModel;

/// Largest chain length the dense builder accepts.
pub const MAX_DENSE_CHAIN: usize = 6;

/// Builds the `2^(N+1)`-dimensional operator for the flying qubit meeting
/// site `k`, block by block.
///
/// Blocks have size `m = 2^(N-k)`. Along the diagonal of the `f = ↑` quadrant
/// they alternate `1, C`; along the `f = ↓` quadrant `C, 1`; the off-diagonal
/// quadrants carry `S` at every other block. `C = cos θ·1`, `S = −i sin θ·1`,
/// both scaled by `e^{iθ}` in the Heisenberg model.
pub fn dense_interaction_matrix(
    chain_len: usize,
    site: usize,
    theta: f64,
    model: ExchangeModel,
) -> Result<DMatrix<Complex64>> {
    if chain_len == 0 || chain_len > MAX_DENSE_CHAIN {
        return Err(Error::invalid(format!("dense matrix is limited to 1 ≤ N ≤ {MAX_DENSE_CHAIN} (got {chain_len})")));
    }
    if site == 0 || site > chain_len {
        return Err(Error::invalid(format!("site {site} outside 1..={chain_len}")));
    }
    let phase = match model {
        ExchangeModel::Xy => Complex64::new(1.0, 0.0),
        ExchangeModel::Heisenberg => Complex64::from_polar(1.0, theta),
    };
    let cos = phase * theta.cos();
    let sin = phase * Complex64::new(0.0, -theta.sin());
    let one = Complex64::new(1.0, 0.0);

    let half = 1usize << chain_len;
    let m = 1usize << (chain_len - site);
    let blocks = half / m;
    let mut u = DMatrix::<Complex64>::zeros(2 * half, 2 * half);
    let mut fill = |row_block: usize, col_block: usize, value: Complex64| {
        for t in 0..m {
            u[(row_block * m + t, col_block * m + t)] = value;
        }
    };
    for b in 0..blocks {
        let odd = b % 2 == 1;
        // upper-left and lower-right quadrants
        fill(b, b, if odd { cos } else { one });
        fill(blocks + b, blocks + b, if odd { one } else { cos });
        // off-diagonal quadrants
        if odd {
            fill(b, blocks + b - 1, sin);
            fill(blocks + b - 1, b, sin);
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        assert!(dense_interaction_matrix(7, 1, 0.3, ExchangeModel::Xy).is_err());
        assert!(dense_interaction_matrix(3, 0, 0.3, ExchangeModel::Xy).is_err());
        assert!(dense_interaction_matrix(3, 4, 0.3, ExchangeModel::Xy).is_err());
    }

    #[test]
    fn zero_angle_is_identity() {
        for model in [ExchangeModel::Xy, ExchangeModel::Heisenberg] {
            let u = dense_interaction_matrix(4, 2, 0.0, model).unwrap();
            assert_eq!(u, DMatrix::identity(32, 32));
        }
    }
}
