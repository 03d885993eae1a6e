//! Subspaces of the spinor module cut out by projectors, and whether a
//! Clifford map preserves them or restricts to a representation on them.

use serde::{Deserialize, Serialize};

use super::block::CwElement;
use super::map::{chiral_projectors, CliffordMap, FLAT_TOL};
use super::CwVector;
use crate::clifford::{Blade, Multivector, C64};
use crate::error::{Error, Result};
use crate::pairs::Sign;

/// Names accepted by [`projector`]; `x-plus:I:J` and `x-minus:I:J` take
/// comma-separated one-based index lists.
pub const PROJECTOR_NAMES: &[&str] = &[
    "upper",
    "lower",
    "upper-plus",
    "upper-minus",
    "lower-plus",
    "lower-minus",
    "upper-full-lower-plus",
    "upper-full-lower-minus",
    "chiral-w-plus",
    "chiral-w-minus",
    "x-plus:I:J",
    "x-minus:I:J",
];

/// `(1 +- iota G_I G_J) / 2` with `iota^2` the sign of `(G_I G_J)^2`.
pub fn x_projector(n: usize, i: Blade, j: Blade, sign: Sign) -> Result<Multivector> {
    for b in [i, j] {
        if !b.fits(n) {
            return Err(Error::IndexOutOfRange {
                index: 16 - b.mask().leading_zeros() as usize,
                dim: n,
            });
        }
    }
    if !i.is_disjoint(j) || i == Blade::SCALAR || j == Blade::SCALAR {
        return Err(Error::UnknownProjector(
            "I and J must be nonempty and disjoint".into(),
        ));
    }
    let gij = Multivector::from_blade(n, i, 1.0) * Multivector::from_blade(n, j, 1.0);
    let sq = (&gij * &gij).scalar_part().re;
    let iota = if sq > 0.0 {
        C64::new(1.0, 0.0)
    } else {
        C64::i()
    };
    let half = Multivector::scalar(n, 0.5);
    Ok(half + gij.scale(iota * 0.5 * sign.value()))
}

fn parse_indices(n: usize, s: &str, name: &str) -> Result<Blade> {
    let mut idx = Vec::new();
    for t in s.split(',') {
        let k: usize = t
            .trim()
            .parse()
            .map_err(|_| Error::UnknownProjector(name.to_string()))?;
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, dim: n });
        }
        idx.push(k - 1);
    }
    Ok(Blade::from_indices(&idx))
}

/// Catalog projector on the spinor module of `W` for `Cl(V)` of dimension `n`.
pub fn projector(name: &str, n: usize) -> Result<CwElement> {
    let one = Multivector::scalar(n, 1.0);
    let z = Multivector::zero(n);
    let (pp, pm) = chiral_projectors(n);
    let p = match name {
        "upper" => CwElement::diag(one, z),
        "lower" => CwElement::diag(z, one),
        "upper-plus" => CwElement::diag(pp, z),
        "upper-minus" => CwElement::diag(pm, z),
        "lower-plus" => CwElement::diag(z, pp),
        "lower-minus" => CwElement::diag(z, pm),
        "upper-full-lower-plus" => CwElement::diag(one, pp),
        "upper-full-lower-minus" => CwElement::diag(one, pm),
        "chiral-w-plus" => CwElement::diag(pm, pp),
        "chiral-w-minus" => CwElement::diag(pp, pm),
        _ => {
            let parts: Vec<&str> = name.split(':').collect();
            let sign = match parts.first() {
                Some(&"x-plus") => Sign::Plus,
                Some(&"x-minus") => Sign::Minus,
                _ => return Err(Error::UnknownProjector(name.to_string())),
            };
            if parts.len() != 3 {
                return Err(Error::UnknownProjector(name.to_string()));
            }
            let i = parse_indices(n, parts[1], name)?;
            let j = parse_indices(n, parts[2], name)?;
            CwElement::diag(one, x_projector(n, i, j, sign)?)
        }
    };
    Ok(p)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictionReport {
    /// `rho(x) P = P rho(x) P` for every generator.
    pub invariant: bool,
    /// Invariant and `P R(x, y) P = 0` for every pair of generators.
    pub representation: bool,
    pub invariance_residual: f64,
    pub curvature_residual: f64,
    pub tol: f64,
}

/// Generators `e+, e-, e_mu, e_mu*`.
fn generators(n: usize) -> Vec<CwVector> {
    let mut g = vec![CwVector::e_plus(n), CwVector::e_minus(n)];
    g.extend((0..n).map(|mu| CwVector::basis_v(n, mu)));
    g.extend((0..n).map(|mu| CwVector::basis_vstar(n, mu)));
    g
}

pub fn check_restriction(map: &CliffordMap, p: &CwElement) -> Result<RestrictionReport> {
    let n = map.dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.dim(),
        });
    }
    let idem = p.mul(p).sub(p).max_abs();
    if idem > 1e-10 * (1.0 + p.max_abs()) {
        return Err(Error::NotAProjector { residual: idem });
    }
    let gens = generators(n);
    let images: Vec<CwElement> = gens.iter().map(|x| map.apply(x)).collect::<Result<_>>()?;
    let mut invariance_residual: f64 = 0.0;
    for r in &images {
        let rp = r.mul(p);
        invariance_residual = invariance_residual.max(rp.sub(&p.mul(&rp)).max_abs());
    }
    let mut curvature_residual: f64 = 0.0;
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i + 1..] {
            let r = map.curvature(x, y)?;
            curvature_residual = curvature_residual.max(p.mul(&r).mul(p).max_abs());
        }
    }
    let tol = FLAT_TOL * map.params().scale();
    let invariant = invariance_residual <= tol;
    Ok(RestrictionReport {
        invariant,
        representation: invariant && curvature_residual <= tol,
        invariance_residual,
        curvature_residual,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_entries_are_projectors() {
        for n in [3, 4] {
            for name in PROJECTOR_NAMES.iter().filter(|s| !s.contains(':')) {
                let p = projector(name, n).unwrap();
                assert!(p.mul(&p).sub(&p).max_abs() < 1e-14, "{name}");
            }
        }
        let p = projector("x-plus:1,2:3", 4).unwrap();
        assert!(p.mul(&p).sub(&p).max_abs() < 1e-14);
        let p = projector("x-minus:1:2", 4).unwrap();
        assert!(p.mul(&p).sub(&p).max_abs() < 1e-14);
        assert!(matches!(
            projector("sideways", 3),
            Err(Error::UnknownProjector(_))
        ));
        assert!(matches!(
            projector("x-plus:1:9", 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
