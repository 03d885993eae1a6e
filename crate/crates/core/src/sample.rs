//! Random inputs for self-checks, property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::clifford::{Blade, Multivector, C64};
use crate::linalg::{RMatrix, SymmetricMap};

pub fn real<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-1.0..1.0)
}

pub fn complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(real(rng), real(rng))
}

/// A real number bounded away from zero, magnitude in `[0.2, 2]`.
pub fn nonzero_real<R: Rng>(rng: &mut R) -> f64 {
    let m = rng.gen_range(0.2..2.0);
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Dense random multivector with complex coefficients in the unit square.
pub fn multivector<R: Rng>(n: usize, rng: &mut R) -> Multivector {
    Multivector::from_terms(
        n,
        (0..1u32 << n).map(|m| (Blade::from_mask(m as u16), complex(rng))),
    )
}

/// Random multivector supported on `k` random blades.
pub fn sparse_multivector<R: Rng>(n: usize, k: usize, rng: &mut R) -> Multivector {
    Multivector::from_terms(
        n,
        (0..k).map(|_| {
            (
                Blade::from_mask(rng.gen_range(0..1u32 << n) as u16),
                complex(rng),
            )
        }),
    )
}

/// Random element of a single grade.
pub fn homogeneous<R: Rng>(n: usize, grade: usize, rng: &mut R) -> Multivector {
    Multivector::from_terms(
        n,
        (0..1u32 << n)
            .map(|m| Blade::from_mask(m as u16))
            .filter(|b| b.grade() == grade)
            .map(|b| (b, complex(rng)))
            .collect::<Vec<_>>(),
    )
}

pub fn real_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| real(rng)).collect()
}

/// Random orthogonal matrix (Gram-Schmidt on a random square matrix).
pub fn orthogonal<R: Rng>(n: usize, rng: &mut R) -> RMatrix {
    let m = RMatrix::from_fn(n, n, |_, _| real(rng));

    m.qr().q()
}

/// Random symmetric map with eigenvalues `values` in a random orthonormal frame.
pub fn symmetric_with_spectrum<R: Rng>(values: &[f64], rng: &mut R) -> SymmetricMap {
    let n = values.len();
    let o = orthogonal(n, rng);
    let d = RMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values));
    let m = &o * d * o.transpose();
    SymmetricMap::new((&m + m.transpose()) * 0.5).expect("symmetric by construction")
}

/// Random symmetric map with generic (simple) spectrum.
pub fn symmetric<R: Rng>(n: usize, rng: &mut R) -> SymmetricMap {
    let m = RMatrix::from_fn(n, n, |_, _| real(rng));
    SymmetricMap::new((&m + m.transpose()) * 0.5).expect("symmetric by construction")
}

/// Random partition of `{0..n}` into blocks with the given sizes.
pub fn partition<R: Rng>(sizes: &[usize], rng: &mut R) -> Vec<Blade> {
    let n: usize = sizes.iter().sum();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut out = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &s in sizes {
        out.push(Blade::from_indices(&idx[start..start + s]));
        start += s;
    }
    out
}
