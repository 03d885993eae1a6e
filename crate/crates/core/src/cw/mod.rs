//! The Lie algebra `g = h' + V* + V + R e+ + R e-` attached to a symmetric map
//! `B`, where `h'` is the commutant `so(B)` of `B` in `so(V)`.
//!
//! Nonzero brackets:
//!
//! ```text
//! [v*, w]  = -<Bv, w> e+        [v*, e-] = B v        [e-, w] = w*
//! [A, w]   = A w                [A, v*]  = (A v)*      [A, A'] = A A' - A' A
//! ```
//!
//! Elements of `V*` are stored by their preimage `v` under the metric.

mod block;
mod map;
mod restrict;

pub use block::{
    embed, CwElement, GAMMA_MINUS, GAMMA_PLUS, IDENTITY, SIGMA, SIGMA_MINUS, SIGMA_PLUS,
};
pub use map::{
    build_flat_rep_alphanotzero, build_flat_rep_alphazero, chiral_projectors, e_offdiag_solution,
    lambda_for, AlphaNonzeroParams, CliffordMap, CliffordMapParams, FlatnessReport, Validation,
    FLAT_TOL,
};
pub use restrict::{check_restriction, projector, x_projector, RestrictionReport, PROJECTOR_NAMES};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{RMatrix, SymmetricMap};

/// Element of `h' + V* + V + R e+ + R e-`.
#[derive(Clone, Debug, PartialEq)]
pub struct CwVector {
    /// Component in `h'`, a real skew matrix commuting with `B`.
    pub h: RMatrix,
    /// Preimage of the `V*` component.
    pub vstar: DVector<f64>,
    pub v: DVector<f64>,
    pub plus: f64,
    pub minus: f64,
}

impl CwVector {
    pub fn zero(n: usize) -> Self {
        CwVector {
            h: RMatrix::zeros(n, n),
            vstar: DVector::zeros(n),
            v: DVector::zeros(n),
            plus: 0.0,
            minus: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn e_plus(n: usize) -> Self {
        CwVector {
            plus: 1.0,
            ..Self::zero(n)
        }
    }

    pub fn e_minus(n: usize) -> Self {
        CwVector {
            minus: 1.0,
            ..Self::zero(n)
        }
    }

    pub fn basis_v(n: usize, mu: usize) -> Self {
        let mut x = Self::zero(n);
        x.v[mu] = 1.0;
        x
    }

    pub fn basis_vstar(n: usize, mu: usize) -> Self {
        let mut x = Self::zero(n);
        x.vstar[mu] = 1.0;
        x
    }

    pub fn from_h(h: RMatrix) -> Self {
        let n = h.nrows();
        CwVector { h, ..Self::zero(n) }
    }

    pub fn from_v(v: DVector<f64>) -> Self {
        let n = v.len();
        CwVector { v, ..Self::zero(n) }
    }

    pub fn from_vstar(v: DVector<f64>) -> Self {
        let n = v.len();
        CwVector {
            vstar: v,
            ..Self::zero(n)
        }
    }

    pub fn max_abs(&self) -> f64 {
        [
            self.h.amax(),
            self.vstar.amax(),
            self.v.amax(),
            self.plus.abs(),
            self.minus.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn add(&self, o: &Self) -> Self {
        CwVector {
            h: &self.h + &o.h,
            vstar: &self.vstar + &o.vstar,
            v: &self.v + &o.v,
            plus: self.plus + o.plus,
            minus: self.minus + o.minus,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        CwVector {
            h: &self.h * s,
            vstar: &self.vstar * s,
            v: &self.v * s,
            plus: self.plus * s,
            minus: self.minus * s,
        }
    }
}

/// Residual of `[A, B]` relative to `1 + |A| |B|`.
pub fn commutant_residual(h: &RMatrix, b: &SymmetricMap) -> f64 {
    let bm = b.matrix();
    (h * bm - bm * h).amax() / (1.0 + h.amax() * bm.amax())
}

fn check_element(x: &CwVector, b: &SymmetricMap) -> Result<()> {
    let n = b.dim();
    for got in [x.h.nrows(), x.h.ncols(), x.vstar.len(), x.v.len()] {
        if got != n {
            return Err(Error::DimensionMismatch { expected: n, got });
        }
    }
    let r = commutant_residual(&x.h, b);
    if r > 1e-10 {
        return Err(Error::NotInSoB { residual: r });
    }
    Ok(())
}

pub fn cw_bracket(x: &CwVector, y: &CwVector, b: &SymmetricMap) -> Result<CwVector> {
    check_element(x, b)?;
    check_element(y, b)?;
    let bm = b.matrix();
    let h = &x.h * &y.h - &y.h * &x.h;
    let vstar = &x.h * &y.vstar - &y.h * &x.vstar + &y.v * x.minus - &x.v * y.minus;
    let v = &x.h * &y.v - &y.h * &x.v + (bm * &x.vstar) * y.minus - (bm * &y.vstar) * x.minus;
    let plus = -(bm * &x.vstar).dot(&y.v) + (bm * &y.vstar).dot(&x.v);
    Ok(CwVector {
        h,
        vstar,
        v,
        plus,
        minus: 0.0,
    })
}

/// Basis of `so(B)`: `u_i u_j^T - u_j u_i^T` for eigenvectors in a common cluster.
pub fn so_b_basis(b: &SymmetricMap) -> Vec<RMatrix> {
    let vecs = b.eigenvectors();
    let mut out = Vec::new();
    for cl in b.clusters() {
        for (k, &i) in cl.columns.iter().enumerate() {
            for &j in &cl.columns[k + 1..] {
                let u = vecs.column(i);
                let w = vecs.column(j);
                out.push(u * w.transpose() - w * u.transpose());
            }
        }
    }
    out
}

/// Basis of `g`: `e+, e-, e_mu, e_mu*` and optionally a basis of `so(B)`.
pub fn basis(b: &SymmetricMap, include_h: bool) -> Vec<CwVector> {
    let n = b.dim();
    let mut out = vec![CwVector::e_plus(n), CwVector::e_minus(n)];
    out.extend((0..n).map(|mu| CwVector::basis_v(n, mu)));
    out.extend((0..n).map(|mu| CwVector::basis_vstar(n, mu)));
    if include_h {
        out.extend(so_b_basis(b).into_iter().map(CwVector::from_h));
    }
    out
}

/// Largest violation of the Jacobi identity on basis triples.
pub fn jacobi_residual(b: &SymmetricMap, include_h: bool) -> Result<f64> {
    let basis = basis(b, include_h);
    let mut worst: f64 = 0.0;
    for x in &basis {
        for y in &basis {
            for z in &basis {
                let a = cw_bracket(x, &cw_bracket(y, z, b)?, b)?;
                let bb = cw_bracket(y, &cw_bracket(z, x, b)?, b)?;
                let c = cw_bracket(z, &cw_bracket(x, y, b)?, b)?;
                worst = worst.max(a.add(&bb).add(&c).max_abs());
            }
        }
    }
    Ok(worst)
}
