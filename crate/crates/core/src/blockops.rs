//! Block structure over a flat [`ComplexMatrix`].
//!
//! A [`BlockMatrix`] is an `mn x mn` matrix read as an `m x m` grid of `n x n`
//! blocks; block `(i, j)` occupies rows `i*n..(i+1)*n` and columns
//! `j*n..(j+1)*n`. Partial traces, the partial transpose and the embeddings
//! `X ↦ I_m ⊗ X`, `Y ↦ Y ⊗ I_n` all work on that view.

use serde::{Deserialize, Serialize};

use crate::error::{LinalgError, Result};
use crate::matkernel::{kron, Complex64, ComplexMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    m: usize,
    n: usize,
    data: ComplexMatrix,
}

/// Shape tag `(m, n)`: `m x m` blocks, each `n x n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockShape {
    pub m: usize,
    pub n: usize,
}

impl BlockShape {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub fn dim(&self) -> usize {
        self.m * self.n
    }
}

impl std::fmt::Display for BlockShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

impl BlockMatrix {
    /// Tags `data` with block structure `(m, n)`.
    pub fn new(m: usize, n: usize, data: ComplexMatrix) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(LinalgError::dim("BlockMatrix::new", "block counts must be positive"));
        }
        if data.rows() != m * n || data.cols() != m * n {
            return Err(LinalgError::dim(
                "BlockMatrix::new",
                format!(
                    "data is {}x{}, expected {d}x{d} for m={m}, n={n}",
                    data.rows(),
                    data.cols(),
                    d = m * n
                ),
            ));
        }
        Ok(Self { m, n, data })
    }

    /// Assembles an `m x m` grid of `n x n` blocks.
    pub fn assemble(blocks: &[Vec<ComplexMatrix>]) -> Result<Self> {
        let m = blocks.len();
        let n = blocks
            .first()
            .and_then(|row| row.first())
            .map(|b| b.rows())
            .ok_or_else(|| LinalgError::dim("assemble", "empty block grid"))?;
        let mut data = ComplexMatrix::zeros(m * n, m * n);
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != m {
                return Err(LinalgError::dim(
                    "assemble",
                    format!("row {i} has {} blocks, expected {m}", row.len()),
                ));
            }
            for (j, b) in row.iter().enumerate() {
                if b.rows() != n || b.cols() != n {
                    return Err(LinalgError::dim(
                        "assemble",
                        format!("block ({i}, {j}) is {}x{}, expected {n}x{n}", b.rows(), b.cols()),
                    ));
                }
                data.set_submatrix(i * n, j * n, b);
            }
        }
        Self::new(m, n, data)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> BlockShape {
        BlockShape::new(self.m, self.n)
    }

    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.data
    }

    /// Same block tags over different data of the same size.
    pub fn with_data(&self, data: ComplexMatrix) -> Result<Self> {
        Self::new(self.m, self.n, data)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self {
            m: self.m,
            n: self.n,
            data: self.data.scale_real(c),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn block_at(&self, i: usize, j: usize) -> Result<ComplexMatrix> {
        if i >= self.m || j >= self.m {
            return Err(LinalgError::Index { i, j, bound: self.m });
        }
        Ok(self.block(i, j))
    }

    pub(crate) fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        self.data.submatrix(i * self.n, j * self.n, self.n, self.n)
    }

    /// `tr₁ A = Σ_i A_{i,i}`, an `n x n` matrix.
    pub fn partial_trace_1(&self) -> ComplexMatrix {
        let n = self.n;
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..self.m).map(|i| self.data[(i * n + r, i * n + c)]).sum()
        })
    }

    /// `tr₂ A = [tr A_{i,j}]`, an `m x m` matrix.
    pub fn partial_trace_2(&self) -> ComplexMatrix {
        let n = self.n;
        ComplexMatrix::from_fn(self.m, self.m, |i, j| {
            (0..n).map(|k| self.data[(i * n + k, j * n + k)]).sum()
        })
    }

    /// `A^τ`: block `(i, j)` of the result is block `(j, i)` of `self`; the
    /// blocks themselves are not transposed.
    pub fn partial_transpose(&self) -> Self {
        let n = self.n;
        let data = ComplexMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            let (i, k) = (r / n, r % n);
            let (j, l) = (c / n, c % n);
            self.data[(j * n + k, i * n + l)]
        });
        Self {
            m: self.m,
            n: self.n,
            data,
        }
    }

    /// Applies `f` to every block, keeping positions.
    pub fn map_blocks(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        let grid: Vec<Vec<ComplexMatrix>> = (0..self.m)
            .map(|i| (0..self.m).map(|j| f(&self.block(i, j))).collect())
            .collect();
        Self::assemble(&grid)
    }
}

/// `I_m ⊗ x`.
pub fn embed_left(x: &ComplexMatrix, m: usize) -> Result<BlockMatrix> {
    let n = x.require_square("embed_left")?;
    BlockMatrix::new(m, n, kron(&ComplexMatrix::identity(m), x))
}

/// `y ⊗ I_n`.
pub fn embed_right(y: &ComplexMatrix, n: usize) -> Result<BlockMatrix> {
    let m = y.require_square("embed_right")?;
    BlockMatrix::new(m, n, kron(y, &ComplexMatrix::identity(n)))
}

/// Block-diagonal matrix with the given `n x n` diagonal blocks.
pub fn block_diagonal(blocks: &[ComplexMatrix]) -> Result<BlockMatrix> {
    let m = blocks.len();
    let n = blocks.first().map_or(0, |b| b.rows());
    let grid: Vec<Vec<ComplexMatrix>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { blocks[i].clone() } else { ComplexMatrix::zeros(n, n) })
                .collect()
        })
        .collect();
    BlockMatrix::assemble(&grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::test_support::*;
    use crate::matkernel::frobenius_inner;
    use proptest::prelude::*;

    fn astar() -> BlockMatrix {
        block_diagonal(&[
            ComplexMatrix::from_real_diag(&[1.0, 2.0]),
            ComplexMatrix::from_real_diag(&[3.0, 4.0]),
        ])
        .unwrap()
    }

    fn random_block(m: usize, n: usize, seed: u64) -> BlockMatrix {
        BlockMatrix::new(m, n, gaussian(m * n, m * n, &mut rng(seed))).unwrap()
    }

    #[test]
    fn assemble_identity() {
        let id = ComplexMatrix::identity(2);
        let zero = ComplexMatrix::zeros(2, 2);
        let a = BlockMatrix::assemble(&[vec![id.clone(), zero.clone()], vec![zero, id]]).unwrap();
        assert_eq!(a.matrix(), &ComplexMatrix::identity(4));
    }

    #[test]
    fn assemble_fixture_and_roundtrip() {
        let a = astar();
        assert_eq!(a.matrix(), &ComplexMatrix::from_real_diag(&[1.0, 2.0, 3.0, 4.0]));
        assert_eq!(a.block_at(1, 1).unwrap(), ComplexMatrix::from_real_diag(&[3.0, 4.0]));
        assert_eq!(a.block_at(0, 1).unwrap(), ComplexMatrix::zeros(2, 2));

        let r = random_block(3, 2, 1);
        let grid: Vec<Vec<_>> = (0..3).map(|i| (0..3).map(|j| r.block_at(i, j).unwrap()).collect()).collect();
        assert_eq!(BlockMatrix::assemble(&grid).unwrap(), r);
    }

    #[test]
    fn assemble_rejects_ragged() {
        let id = ComplexMatrix::identity(2);
        assert!(BlockMatrix::assemble(&[vec![id.clone(), id.clone()], vec![id.clone()]]).is_err());
        let odd = ComplexMatrix::identity(3);
        assert!(BlockMatrix::assemble(&[vec![id.clone(), odd], vec![id.clone(), id]]).is_err());
    }

    #[test]
    fn block_at_out_of_range() {
        let a = astar();
        assert_eq!(a.block_at(0, 0).unwrap(), ComplexMatrix::from_real_diag(&[1.0, 2.0]));
        assert!(matches!(a.block_at(2, 0), Err(LinalgError::Index { .. })));
        assert!(matches!(a.block_at(0, 2), Err(LinalgError::Index { .. })));
    }

    #[test]
    fn partial_traces_of_identity_and_fixture() {
        let id = BlockMatrix::new(2, 2, ComplexMatrix::identity(4)).unwrap();
        assert_eq!(id.partial_trace_1(), ComplexMatrix::identity(2).scale_real(2.0));
        assert_eq!(id.partial_trace_2(), ComplexMatrix::identity(2).scale_real(2.0));
        let a = astar();
        assert_eq!(a.partial_trace_1(), ComplexMatrix::from_real_diag(&[4.0, 6.0]));
        assert_eq!(a.partial_trace_2(), ComplexMatrix::from_real_diag(&[3.0, 7.0]));
    }

    #[test]
    fn adjoint_pairing_characterisation() {
        let mut r = rng(2);
        for (m, n) in [(2, 2), (2, 3), (3, 2)] {
            for _ in 0..20 {
                let g = gaussian(m * n, m * n, &mut r);
                let a = BlockMatrix::new(m, n, &g * &g.adjoint()).unwrap();
                let x = hermitian(n, &mut r);
                let y = hermitian(m, &mut r);
                let l1 = frobenius_inner(embed_left(&x, m).unwrap().matrix(), a.matrix()).unwrap();
                let r1 = frobenius_inner(&x, &a.partial_trace_1()).unwrap();
                let scale = a.matrix().frobenius_norm() * x.frobenius_norm();
                assert!((l1 - r1).norm() <= 1e-10 * scale);
                let l2 = frobenius_inner(embed_right(&y, n).unwrap().matrix(), a.matrix()).unwrap();
                let r2 = frobenius_inner(&y, &a.partial_trace_2()).unwrap();
                let scale = a.matrix().frobenius_norm() * y.frobenius_norm();
                assert!((l2 - r2).norm() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn partial_transpose_cases() {
        let id = BlockMatrix::new(2, 2, ComplexMatrix::identity(4)).unwrap();
        assert_eq!(id.partial_transpose(), id);
        assert_eq!(astar().partial_transpose(), astar());
        let r = random_block(3, 2, 3);
        let t = r.partial_transpose();
        assert_eq!(t.block_at(0, 2).unwrap(), r.block_at(2, 0).unwrap());
        assert_eq!(t.partial_transpose(), r);
    }

    #[test]
    fn embeddings() {
        assert_eq!(embed_left(&ComplexMatrix::identity(2), 2).unwrap().matrix(), &ComplexMatrix::identity(4));
        assert_eq!(
            embed_left(&ComplexMatrix::from_real_diag(&[4.0, 6.0]), 2).unwrap().matrix(),
            &ComplexMatrix::from_real_diag(&[4.0, 6.0, 4.0, 6.0])
        );
        assert_eq!(embed_right(&ComplexMatrix::identity(2), 2).unwrap().matrix(), &ComplexMatrix::identity(4));
        assert_eq!(
            embed_right(&ComplexMatrix::from_real_diag(&[3.0, 7.0]), 2).unwrap().matrix(),
            &ComplexMatrix::from_real_diag(&[3.0, 3.0, 7.0, 7.0])
        );
        let mut r = rng(4);
        let x = gaussian(3, 3, &mut r);
        assert_eq!(embed_left(&x, 4).unwrap().partial_trace_1(), x.scale_real(4.0));
        let y = gaussian(2, 2, &mut r);
        assert!(rel_diff(&embed_right(&y, 3).unwrap().partial_trace_2(), &y.scale_real(3.0)) < 1e-15);
    }

    #[test]
    fn degenerate_block_sizes() {
        let mut r = rng(5);
        let g = gaussian(3, 3, &mut r);
        // n = 1: tr₂ is the matrix itself, tr₁ its trace
        let a = BlockMatrix::new(3, 1, g.clone()).unwrap();
        assert_eq!(a.partial_trace_2(), g);
        assert_eq!(a.partial_trace_1()[(0, 0)], g.trace());
        // m = 1: tr₁ is the matrix itself
        let b = BlockMatrix::new(1, 3, g.clone()).unwrap();
        assert_eq!(b.partial_trace_1(), g);
        assert_eq!(b.partial_trace_2()[(0, 0)], g.trace());
        assert_eq!(b.partial_transpose(), b);
    }

    #[test]
    fn tr2_of_partial_transpose_is_transpose() {
        let a = random_block(3, 2, 6);
        let lhs = a.partial_transpose().partial_trace_2();
        let rhs = a.partial_trace_2().transpose();
        assert!((&lhs - &rhs).max_abs() <= 1e-12);
    }

    #[test]
    fn bad_shapes_rejected() {
        assert!(BlockMatrix::new(2, 2, ComplexMatrix::identity(3)).is_err());
        assert!(BlockMatrix::new(0, 2, ComplexMatrix::identity(0)).is_err());
        assert!(embed_left(&ComplexMatrix::zeros(2, 3), 2).is_err());
    }

    fn arb_block(m: usize, n: usize) -> impl Strategy<Value = BlockMatrix> {
        let d = m * n;
        proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), d * d).prop_map(move |v| {
            let data = ComplexMatrix::new(d, d, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap();
            BlockMatrix::new(m, n, data).unwrap()
        })
    }

    proptest! {
        #[test]
        fn traces_agree(a in arb_block(3, 2)) {
            let t = a.trace();
            let scale = t.norm().max(1e-300);
            prop_assert!((a.partial_trace_1().trace() - t).norm() <= 1e-10 * scale.max(1.0));
            prop_assert!((a.partial_trace_2().trace() - t).norm() <= 1e-10 * scale.max(1.0));
        }

        #[test]
        fn partial_traces_are_linear(a in arb_block(2, 3), b in arb_block(2, 3), alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
            let combo = a.with_data(&a.matrix().scale_real(alpha) + &b.matrix().scale_real(beta)).unwrap();
            let want1 = &a.partial_trace_1().scale_real(alpha) + &b.partial_trace_1().scale_real(beta);
            let want2 = &a.partial_trace_2().scale_real(alpha) + &b.partial_trace_2().scale_real(beta);
            let scale = combo.matrix().frobenius_norm().max(1.0);
            prop_assert!((&combo.partial_trace_1() - &want1).max_abs() <= 1e-12 * scale);
            prop_assert!((&combo.partial_trace_2() - &want2).max_abs() <= 1e-12 * scale);
        }

        #[test]
        fn partial_transpose_is_involution(a in arb_block(3, 2)) {
            prop_assert_eq!(a.partial_transpose().partial_transpose(), a);
        }
    }
}
