//! The polynomial system whose real roots are exactly the CAZAC sequences.
//!
//! For `x_j = a_j + i b_j` (indices mod n) the residual vector is laid out as
//!
//! ```text
//! f_ℓ = a_ℓ² + b_ℓ² - 1                          ℓ = 0..n-1
//! g_k = Σ_j a_{j+k} a_j + b_{j+k} b_j            k = 1..n-1
//! h_k = Σ_j a_j b_{j+k} - b_j a_{j+k}            k = 1..n-1
//! ```
//!
//! giving `3n - 2` equations in `2n` unknowns. `g_k` and `h_k` are `n` times
//! the real and imaginary parts of the periodic autocorrelation at lag `k`.

use crate::seq::RealEmbedding;
use crate::solver::LeastSquaresProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidualSystem {
    n: usize,
}

impl ResidualSystem {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "sequence length must be positive");
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn residual_count(&self) -> usize {
        3 * self.n - 2
    }

    pub fn variable_count(&self) -> usize {
        2 * self.n
    }

    /// Row offset of `g_1`; `h_1` starts at `g_offset() + n - 1`.
    pub fn g_offset(&self) -> usize {
        self.n
    }

    pub fn h_offset(&self) -> usize {
        2 * self.n - 1
    }

    pub fn residuals(&self, v: &RealEmbedding) -> Vec<f64> {
        assert_eq!(v.n(), self.n, "embedding length does not match system");
        let mut out = vec![0.0; self.residual_count()];
        self.residuals_into(v.as_slice(), &mut out);
        out
    }

    /// Sum of squared residuals.
    pub fn objective(&self, v: &RealEmbedding) -> f64 {
        self.residuals(v).iter().map(|r| r * r).sum()
    }

    pub fn jacobian(&self, v: &RealEmbedding) -> JacobianMatrix {
        assert_eq!(v.n(), self.n, "embedding length does not match system");
        let mut data = vec![0.0; self.residual_count() * self.variable_count()];
        self.jacobian_into(v.as_slice(), &mut data);
        JacobianMatrix { rows: self.residual_count(), cols: self.variable_count(), data }
    }

    pub fn residuals_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        let (a, b) = x.split_at(n);
        for l in 0..n {
            out[l] = a[l] * a[l] + b[l] * b[l] - 1.0;
        }
        let (g_off, h_off) = (self.g_offset(), self.h_offset());
        for k in 1..n {
            let mut g = 0.0;
            let mut h = 0.0;
            for j in 0..n {
                let jk = (j + k) % n;
                g += a[jk] * a[j] + b[jk] * b[j];
                h += a[j] * b[jk] - b[j] * a[jk];
            }
            out[g_off + k - 1] = g;
            out[h_off + k - 1] = h;
        }
    }

    /// Row-major `(3n-2) × 2n`, columns ordered `a_0..a_{n-1}, b_0..b_{n-1}`.
    pub fn jacobian_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        let cols = 2 * n;
        let (a, b) = x.split_at(n);
        out.fill(0.0);
        for l in 0..n {
            out[l * cols + l] = 2.0 * a[l];
            out[l * cols + n + l] = 2.0 * b[l];
        }
        for k in 1..n {
            let g_row = &mut out[(self.g_offset() + k - 1) * cols..][..cols];
            for m in 0..n {
                let (up, down) = ((m + k) % n, (m + n - k) % n);
                g_row[m] = a[up] + a[down];
                g_row[n + m] = b[up] + b[down];
            }
            let h_row = &mut out[(self.h_offset() + k - 1) * cols..][..cols];
            for m in 0..n {
                let (up, down) = ((m + k) % n, (m + n - k) % n);
                h_row[m] = b[up] - b[down];
                h_row[n + m] = a[down] - a[up];
            }
        }
    }
}

impl LeastSquaresProblem for ResidualSystem {
    fn variable_count(&self) -> usize {
        ResidualSystem::variable_count(self)
    }

    fn residual_count(&self) -> usize {
        ResidualSystem::residual_count(self)
    }

    fn residuals(&self, x: &[f64], out: &mut [f64]) {
        self.residuals_into(x, out);
    }

    fn jacobian(&self, x: &[f64], out: &mut [f64]) {
        self.jacobian_into(x, out);
    }
}

/// Dense row-major Jacobian of a [`ResidualSystem`].
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl JacobianMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_matrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}
