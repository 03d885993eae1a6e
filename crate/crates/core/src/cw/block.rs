//! The Clifford algebra of `W = V + R e+ + R e-` realised as 2x2 matrices over
//! `Cl(V)`, with the graded tensor product `r (x) a` acting as
//! `[[r11 a~, r12 a], [r21 a~, r22 a]]` where `a~` is the parity involution.

use std::f64::consts::SQRT_2;

use crate::clifford::{Multivector, C64};
use crate::gamma::GammaRep;
use crate::linalg::CMatrix;

pub const IDENTITY: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
/// Image of `e+`.
pub const GAMMA_PLUS: [[f64; 2]; 2] = [[0.0, SQRT_2], [0.0, 0.0]];
/// Image of `e-`.
pub const GAMMA_MINUS: [[f64; 2]; 2] = [[0.0, 0.0], [-SQRT_2, 0.0]];
/// `[e+, e-] / 2 = diag(-1, 1)`.
pub const SIGMA: [[f64; 2]; 2] = [[-1.0, 0.0], [0.0, 1.0]];
/// `(1 - sigma) / 2`, the kernel of `e+`.
pub const SIGMA_MINUS: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 0.0]];
/// `(1 + sigma) / 2`, the kernel of `e-`.
pub const SIGMA_PLUS: [[f64; 2]; 2] = [[0.0, 0.0], [0.0, 1.0]];

/// 2x2 matrix with entries in `Cl(V)`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CwElement {
    blocks: [Multivector; 4],
}

/// `r (x) a` for a numeric 2x2 matrix `r` on the left factor.
pub fn embed(r: [[f64; 2]; 2], a: &Multivector) -> CwElement {
    let abar = a.bar();
    CwElement::new(
        abar.scale(r[0][0]),
        a.scale(r[0][1]),
        abar.scale(r[1][0]),
        a.scale(r[1][1]),
    )
}

impl CwElement {
    pub fn new(a11: Multivector, a12: Multivector, a21: Multivector, a22: Multivector) -> Self {
        CwElement {
            blocks: [a11, a12, a21, a22],
        }
    }

    pub fn zero(n: usize) -> Self {
        let z = Multivector::zero(n);
        CwElement::new(z.clone(), z.clone(), z.clone(), z)
    }

    pub fn identity(n: usize) -> Self {
        let one = Multivector::scalar(n, 1.0);
        let z = Multivector::zero(n);
        CwElement::new(one.clone(), z.clone(), z, one)
    }

    pub fn diag(a11: Multivector, a22: Multivector) -> Self {
        let n = a11.dim();
        CwElement::new(a11, Multivector::zero(n), Multivector::zero(n), a22)
    }

    pub fn dim(&self) -> usize {
        self.blocks[0].dim()
    }

    /// Block `(i, j)` with zero-based indices.
    pub fn get(&self, i: usize, j: usize) -> &Multivector {
        &self.blocks[2 * i + j]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let b = &self.blocks;
        let c = &o.blocks;
        CwElement::new(
            &b[0] * &c[0] + &b[1] * &c[2],
            &b[0] * &c[1] + &b[1] * &c[3],
            &b[2] * &c[0] + &b[3] * &c[2],
            &b[2] * &c[1] + &b[3] * &c[3],
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        CwElement {
            blocks: std::array::from_fn(|k| &self.blocks[k] + &o.blocks[k]),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CwElement {
            blocks: std::array::from_fn(|k| &self.blocks[k] - &o.blocks[k]),
        }
    }

    pub fn scale(&self, z: impl Into<C64>) -> Self {
        let z = z.into();
        CwElement {
            blocks: std::array::from_fn(|k| self.blocks[k].scale(z)),
        }
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn anticommutator(&self, o: &Self) -> Self {
        self.mul(o).add(&o.mul(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .map(Multivector::max_abs)
            .fold(0.0, f64::max)
    }

    pub fn block_residuals(&self) -> [f64; 4] {
        std::array::from_fn(|k| self.blocks[k].max_abs())
    }

    /// Matrix of size `2 s` in a representation of `Cl(V)` of size `s`.
    pub fn to_matrix(&self, rep: &GammaRep) -> CMatrix {
        let s = rep.size();
        let mut out = CMatrix::zeros(2 * s, 2 * s);
        for i in 0..2 {
            for j in 0..2 {
                out.view_mut((i * s, j * s), (s, s))
                    .copy_from(&rep.represent(self.get(i, j)));
            }
        }
        out
    }
}
