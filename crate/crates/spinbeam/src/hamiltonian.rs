//! Single-excitation Hamiltonian matrix and its spectral decomposition.
//!
//! In the one-excitation sector the XY network is a hopping particle:
//! `H[i][j]` is the bond coupling between sites `i` and `j`, the diagonal
//! is zero (no magnetic field terms), and the matrix is real symmetric.
//! Dimensions stay at desk scale, so dense storage plus one full LAPACK
//! eigendecomposition is both exact and fast; the edge list on
//! [`SpinNetwork`](crate::network::SpinNetwork) remains the sparse view
//! for structural checks.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};

use crate::error::{Error, Result};
use crate::network::SpinNetwork;

/// Relative tolerance accepted by [`Hamiltonian::new`] before a matrix is
/// rejected as non-symmetric. Inputs within the tolerance are symmetrized.
const SYMMETRY_TOL: f64 = 1e-9;

/// Real symmetric hopping matrix over the global site basis.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    matrix: Array2<f64>,
}

impl Hamiltonian {
    /// Wrap an explicit matrix. Rejects non-square or non-symmetric input
    /// (asymmetry above `1e-9` relative to the largest entry); small
    /// floating-point asymmetry is averaged away.
    pub fn new(matrix: Array2<f64>) -> Result<Self> {
        let (r, c) = matrix.dim();
        if r != c {
            return Err(Error::DimensionMismatch { expected: r, got: c });
        }
        let scale = matrix.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let mut worst = 0.0f64;
        for i in 0..r {
            for j in (i + 1)..r {
                worst = worst.max((matrix[[i, j]] - matrix[[j, i]]).abs());
            }
        }
        if worst > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric(worst));
        }
        let mut m = matrix;
        for i in 0..r {
            for j in (i + 1)..r {
                let v = 0.5 * (m[[i, j]] + m[[j, i]]);
                m[[i, j]] = v;
                m[[j, i]] = v;
            }
        }
        Ok(Self { matrix: m })
    }

    /// Build the hopping matrix of a validated network: `J_l` on intra-leg
    /// nearest-neighbor pairs, the node couplings on anchor-end pairs, zero
    /// elsewhere (zero diagonal).
    pub fn from_network(network: &SpinNetwork) -> Result<Self> {
        let report = network.validate();
        if !report.is_valid() {
            return Err(Error::InvalidNetwork(report.violations.join("; ")));
        }
        let n = network.site_count();
        let mut m = Array2::zeros((n, n));
        for (a, b, w) in network.edges() {
            m[[a, b]] = w;
            m[[b, a]] = w;
        }
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    /// Nonzero bonds `(i, j, weight)` with `i < j`, row-major order.
    pub fn nonzero_bonds(&self) -> Vec<(usize, usize, f64)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.matrix[[i, j]] != 0.0 {
                    out.push((i, j, self.matrix[[i, j]]));
                }
            }
        }
        out
    }

    /// Full orthonormal eigendecomposition, eigenvalues ascending.
    pub fn eigensystem(&self) -> Result<EigenSystem> {
        let (values, vectors) = self
            .matrix
            .eigh(UPLO::Lower)
            .map_err(|e| Error::Linalg(e.to_string()))?;
        Ok(EigenSystem { values, vectors })
    }
}

/// Eigenvalues (ascending) and the orthogonal matrix of eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    values: Array1<f64>,
    vectors: Array2<f64>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    /// Columns are the eigenvectors, ordered as [`values`](Self::values).
    pub fn vectors(&self) -> &Array2<f64> {
        &self.vectors
    }

    /// `max |V L V^T - H|`, the reconstruction residual against `h`.
    pub fn reconstruction_residual(&self, h: &Hamiltonian) -> f64 {
        let scaled = &self.vectors * &self.values.view().insert_axis(ndarray::Axis(0));
        let rebuilt = scaled.dot(&self.vectors.t());
        (&rebuilt - h.matrix()).iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `max |V^T V - I|`, the orthonormality defect.
    pub fn orthogonality_error(&self) -> f64 {
        let gram = self.vectors.t().dot(&self.vectors);
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[[i, j]] - target).abs());
            }
        }
        worst
    }
}
