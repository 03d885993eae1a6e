//! Explicit matrix representations of the Clifford algebra.
//!
//! Generators are built as tensor products of Pauli matrices: for the `k`-th
//! pair, `Z x .. x Z x (i X) x 1 x .. x 1` and the same with `i Y`. In odd
//! dimension the last generator is `+- i Z x .. x Z` with the sign chosen so that
//! the chirality element acts as `+1` on the irreducible module. The faithful
//! representation in odd dimension is the direct sum of both irreducibles.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::{blade_mul, Blade, Multivector, C64};
use crate::error::{Error, Result};
use crate::linalg::{cmax_abs, CMatrix};
use crate::sample;

/// Largest dimension for which a representation is built.
pub const MAX_REP_DIM: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepKind {
    Irreducible,
    Faithful,
}

/// Matrices for every basis blade of `Cl(n)`.
#[derive(Clone, Debug)]
pub struct GammaRep {
    dim: usize,
    kind: RepKind,
    size: usize,
    blades: Vec<CMatrix>,
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn pauli() -> [CMatrix; 4] {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::i();
    [
        CMatrix::from_row_slice(2, 2, &[l, o, o, l]),
        CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    ]
}

/// Irreducible generators; `flip` negates the extra generator in odd dimension.
fn irreducible_generators(n: usize, flip: bool) -> Vec<CMatrix> {
    let [one, x, y, z] = pauli();
    let m = n / 2;
    let i = C64::i();
    let tensor = |factors: Vec<&CMatrix>| -> CMatrix {
        factors
            .into_iter()
            .fold(CMatrix::identity(1, 1), |acc, f| kron(&acc, f))
    };
    let mut gens = Vec::with_capacity(n);
    for k in 0..m {
        for p in [&x, &y] {
            let mut f: Vec<&CMatrix> = Vec::with_capacity(m);
            f.extend(std::iter::repeat_n(&z, k));
            f.push(p);
            f.extend(std::iter::repeat_n(&one, m - k - 1));
            gens.push(tensor(f) * i);
        }
    }
    if n % 2 == 1 {
        let last = tensor(std::iter::repeat_n(&z, m).collect()) * i;
        gens.push(last);
        // orient so that the chirality element is +1
        let size = 1 << m;
        let mut vol = CMatrix::identity(size, size);
        for g in &gens {
            vol *= g;
        }
        vol *= C64::i().powu(n.div_ceil(2) as u32);
        let positive = vol[(0, 0)].re > 0.0;
        if positive == flip {
            let l = gens.len() - 1;
            gens[l] = -gens[l].clone();
        }
    }
    gens
}

fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (p, q) = (a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(p + q, p + q);
    out.view_mut((0, 0), (p, p)).copy_from(a);
    out.view_mut((p, p), (q, q)).copy_from(b);
    out
}

pub fn build_rep(n: usize, kind: RepKind) -> Result<GammaRep> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { dim: n, min: 1 });
    }
    if n > MAX_REP_DIM {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: MAX_REP_DIM,
        });
    }
    let gens = if n % 2 == 1 && kind == RepKind::Faithful {
        let plus = irreducible_generators(n, false);
        let minus = irreducible_generators(n, true);
        plus.iter()
            .zip(&minus)
            .map(|(a, b)| block_diag(a, b))
            .collect()
    } else {
        irreducible_generators(n, false)
    };
    let size = gens[0].nrows();
    let mut blades: Vec<CMatrix> = Vec::with_capacity(1 << n);
    blades.push(CMatrix::identity(size, size));
    for mask in 1usize..(1 << n) {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        blades.push(&blades[rest] * &gens[top]);
    }
    Ok(GammaRep {
        dim: n,
        kind,
        size,
        blades,
    })
}

impl GammaRep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    /// Size of the represented matrices.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn generator(&self, mu: usize) -> &CMatrix {
        &self.blades[1 << mu]
    }

    pub fn blade_matrix(&self, b: Blade) -> &CMatrix {
        &self.blades[b.mask() as usize]
    }

    pub fn represent(&self, a: &Multivector) -> CMatrix {
        assert_eq!(a.dim(), self.dim, "dimension mismatch");
        let mut out = CMatrix::zeros(self.size, self.size);
        for (b, z) in a.terms() {
            out.zip_apply(self.blade_matrix(b), |o, m| *o += z * m);
        }
        out
    }

    fn check_extractable(&self, m: &CMatrix) -> Result<()> {
        if self.dim % 2 == 1 && self.kind == RepKind::Irreducible {
            return Err(Error::AmbiguousOddIrreducible);
        }
        if m.nrows() != self.size || m.ncols() != self.size {
            return Err(Error::DimensionMismatch {
                expected: self.size,
                got: m.nrows(),
            });
        }
        Ok(())
    }

    /// Coefficient of `e_I`: `sigma_I * tr(M Gamma_I) / tr(1)`.
    pub fn extract_component(&self, m: &CMatrix, b: Blade) -> Result<C64> {
        self.check_extractable(m)?;
        let g = self.blade_matrix(b);
        let mut tr = C64::default();
        for i in 0..self.size {
            for k in 0..self.size {
                tr += m[(i, k)] * g[(k, i)];
            }
        }
        Ok(tr * b.square_sign() / self.size as f64)
    }

    /// Recover the multivector represented by `m`.
    pub fn extract(&self, m: &CMatrix) -> Result<Multivector> {
        self.check_extractable(m)?;
        let terms: Result<Vec<(Blade, C64)>> = (0..1u32 << self.dim)
            .map(|mask| {
                let b = Blade::from_mask(mask as u16);
                self.extract_component(m, b).map(|z| (b, z))
            })
            .collect();
        Ok(Multivector::from_terms(self.dim, terms?))
    }
}

/// Residuals of a randomized self-check of a representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RepCheck {
    pub dim: usize,
    pub size: usize,
    pub trials: usize,
    /// `max |G_mu G_nu + G_nu G_mu + 2 delta_{mu nu}|`.
    pub clifford_residual: f64,
    /// `max |G_mu^dagger + G_mu|`.
    pub anti_hermitian_residual: f64,
    /// `max |rho(a b) - rho(a) rho(b)|` over random pairs.
    pub homomorphism_residual: f64,
    /// `max |extract(rho(a)) - a|` (faithful representation).
    pub round_trip_residual: f64,
}

pub fn rep_check<R: Rng>(n: usize, trials: usize, rng: &mut R) -> Result<RepCheck> {
    let rep = build_rep(n, RepKind::Faithful)?;
    let size = rep.size();
    let mut clifford_residual: f64 = 0.0;
    let mut anti_hermitian_residual: f64 = 0.0;
    for mu in 0..n {
        let g = rep.generator(mu);
        anti_hermitian_residual = anti_hermitian_residual.max(cmax_abs(&(g.adjoint() + g)));
        for nu in 0..n {
            let h = rep.generator(nu);
            let mut r = g * h + h * g;
            if mu == nu {
                r += CMatrix::identity(size, size) * C64::new(2.0, 0.0);
            }
            clifford_residual = clifford_residual.max(cmax_abs(&r));
        }
    }
    let mut homomorphism_residual: f64 = 0.0;
    let mut round_trip_residual: f64 = 0.0;
    for _ in 0..trials {
        let a = sample::multivector(n, rng);
        let b = sample::multivector(n, rng);
        let lhs = rep.represent(&a.gp(&b));
        let rhs = rep.represent(&a) * rep.represent(&b);
        homomorphism_residual = homomorphism_residual.max(cmax_abs(&(lhs - rhs)));
        let back = rep.extract(&rep.represent(&a))?;
        round_trip_residual = round_trip_residual.max((back - &a).max_abs());
    }
    Ok(RepCheck {
        dim: n,
        size,
        trials,
        clifford_residual,
        anti_hermitian_residual,
        homomorphism_residual,
        round_trip_residual,
    })
}

/// Check that blade products computed symbolically match the matrices.
pub fn blade_table_residual(rep: &GammaRep) -> f64 {
    let n = rep.dim();
    let mut worst: f64 = 0.0;
    for a in 0..1u16 << n {
        for b in 0..1u16 << n {
            let (ab, s) = blade_mul(Blade::from_mask(a), Blade::from_mask(b));
            let lhs = rep.blade_matrix(Blade::from_mask(a)) * rep.blade_matrix(Blade::from_mask(b));
            let rhs = rep.blade_matrix(ab) * C64::new(s, 0.0);
            worst = worst.max(cmax_abs(&(lhs - rhs)));
        }
    }
    worst
}
