//! Real symmetric maps with a clustered eigendecomposition, plus small dense
//! complex helpers.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::clifford::C64;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;
pub type RMatrix = DMatrix<f64>;

/// Relative gap below which two eigenvalues are treated as equal (after scaling
/// `B` to unit infinity norm).
pub const CLUSTER_TOL: f64 = 1e-8;

/// Symmetry tolerance, relative to `max(1, ||B||)`.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Eigenvalues and orthonormal eigenvectors (columns) of a real symmetric matrix,
/// eigenvalues ascending, computed with cyclic Jacobi rotations.
pub fn jacobi_eigen(m: &RMatrix) -> (Vec<f64>, RMatrix) {
    let n = m.nrows();
    let mut a = m.clone();
    let mut v = RMatrix::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)] * a[(p, q)])
            .sum();
        let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vecs = RMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut c = v.column(i).into_owned();
        // sign convention: largest component positive
        let (imax, _) = c.iter().enumerate().fold((0, 0.0), |(bi, bv), (k, x)| {
            if x.abs() > bv + 1e-12 {
                (k, x.abs())
            } else {
                (bi, bv)
            }
        });
        if c[imax] < 0.0 {
            c = -c;
        }
        vecs.set_column(col, &c);
    }
    (values, vecs)
}

/// A group of numerically equal eigenvalues.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub value: f64,
    /// Columns of the eigenvector matrix spanning the eigenspace.
    pub columns: Vec<usize>,
}

impl Cluster {
    pub fn multiplicity(&self) -> usize {
        self.columns.len()
    }
}

/// A real symmetric linear map `B` on `R^n` with its spectral data.
#[derive(Clone, Debug)]
pub struct SymmetricMap {
    matrix: RMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: RMatrix,
    clusters: Vec<Cluster>,
}

impl PartialEq for SymmetricMap {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl SymmetricMap {
    pub fn new(matrix: RMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.ncols(),
            });
        }
        let scale = inf_norm(&matrix).max(1.0);
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let matrix = (&matrix + matrix.transpose()) * 0.5;
        let (eigenvalues, eigenvectors) = jacobi_eigen(&matrix);
        let norm = inf_norm(&matrix);
        let unit = if norm > 0.0 { norm } else { 1.0 };
        let mut clusters: Vec<Cluster> = Vec::new();
        for (i, &lam) in eigenvalues.iter().enumerate() {
            match clusters.last_mut() {
                Some(c)
                    if (lam - eigenvalues[*c.columns.last().unwrap()]).abs() / unit
                        <= CLUSTER_TOL =>
                {
                    c.columns.push(i)
                }
                _ => clusters.push(Cluster {
                    value: lam,
                    columns: vec![i],
                }),
            }
        }
        for c in &mut clusters {
            c.value =
                c.columns.iter().map(|&i| eigenvalues[i]).sum::<f64>() / c.columns.len() as f64;
        }
        Ok(SymmetricMap {
            matrix,
            eigenvalues,
            eigenvectors,
            clusters,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
        Self::new(RMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::new(RMatrix::from_diagonal(&DVector::from_column_slice(values)))
            .expect("diagonal matrices are symmetric")
    }

    pub fn scalar(n: usize, lambda: f64) -> Self {
        Self::diagonal(&vec![lambda; n])
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvectors as columns, ordered like [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &RMatrix {
        &self.eigenvectors
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(Cluster::multiplicity).collect()
    }

    /// `Some(lambda)` if `B = lambda * 1`.
    pub fn scalar_value(&self) -> Option<f64> {
        (self.clusters.len() == 1).then(|| self.clusters[0].value)
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    /// Cluster index of each eigenvector column.
    pub fn cluster_of_column(&self) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for (k, c) in self.clusters.iter().enumerate() {
            for &i in &c.columns {
                out[i] = k;
            }
        }
        out
    }
}

/// Maximum absolute row sum.
pub fn inf_norm<T: nalgebra::ComplexField>(m: &DMatrix<T>) -> f64
where
    T::RealField: Into<f64>,
{
    (0..m.nrows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.clone().modulus().into())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

pub fn cmax_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_skew(m: &RMatrix, tol: f64) -> bool {
    (m + m.transpose()).amax() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_matches_nalgebra() {
        let m = RMatrix::from_row_slice(
            4,
            4,
            &[
                2.0, 1.0, 0.5, 0.0, 1.0, -3.0, 0.2, 1.0, 0.5, 0.2, 0.0, -1.0, 0.0, 1.0, -1.0, 4.0,
            ],
        );
        let (vals, vecs) = jacobi_eigen(&m);
        let mut reference: Vec<f64> = m
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        reference.sort_by(f64::total_cmp);
        for (a, b) in vals.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-12);
        }
        let recon = &vecs * RMatrix::from_diagonal(&DVector::from_vec(vals)) * vecs.transpose();
        assert!((recon - m).amax() < 1e-12);
    }

    #[test]
    fn clusters_group_equal_eigenvalues() {
        let b = SymmetricMap::diagonal(&[-9.0, -1.0, -9.0]);
        assert_eq!(b.multiplicities(), vec![2, 1]);
        assert_eq!(b.clusters()[0].value, -9.0);
        assert_eq!(SymmetricMap::scalar(3, 2.0).scalar_value(), Some(2.0));
        assert!(matches!(
            SymmetricMap::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]),
            Err(Error::NotSymmetric { .. })
        ));
    }
}
