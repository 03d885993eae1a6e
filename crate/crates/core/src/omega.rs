//! The two-form `Omega_{c,d}(v, w) = s_{d,c}(v) w + w s_{c,d}(v)` and the
//! classification of pairs for which it takes values in `so(B) (x) Cl(V)`.

use serde::{Deserialize, Serialize};

use crate::clifford::{Blade, Multivector, C64};
use crate::error::{Error, Result};
use crate::linalg::{RMatrix, SymmetricMap};
use crate::pairs::s_map;

/// Absolute tolerance for vanishing entries, scaled by `1 + |c| + |d|`.
pub const OMEGA_TOL: f64 = 1e-9;

/// Antisymmetric array of multivectors, stored above the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaTensor {
    dim: usize,
    entries: Vec<Multivector>,
}

fn upper_index(n: usize, mu: usize, nu: usize) -> usize {
    mu * n - mu * (mu + 1) / 2 + (nu - mu - 1)
}

impl OmegaTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(mu, nu)`; antisymmetry supplies the lower triangle.
    pub fn get(&self, mu: usize, nu: usize) -> Multivector {
        match mu.cmp(&nu) {
            std::cmp::Ordering::Less => self.entries[upper_index(self.dim, mu, nu)].clone(),
            std::cmp::Ordering::Greater => self.entries[upper_index(self.dim, nu, mu)].scale(-1.0),
            std::cmp::Ordering::Equal => Multivector::zero(self.dim),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(Multivector::max_abs)
            .fold(0.0, f64::max)
    }
}

fn check_pair(c: &Multivector, d: &Multivector) -> Result<()> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: d.dim(),
        });
    }
    Ok(())
}

/// `Omega_{mu nu} = 2 G_[mu c G_nu] - {G_mu G_nu, d}` for `mu != nu`. This is
/// `-Omega_{c,d}(e_mu, e_nu)`.
pub fn omega_tensor(c: &Multivector, d: &Multivector) -> Result<OmegaTensor> {
    check_pair(c, d)?;
    let n = c.dim();
    let g: Vec<Multivector> = (0..n).map(|mu| Multivector::basis_vector(n, mu)).collect();
    let mut entries = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for mu in 0..n {
        for nu in mu + 1..n {
            let skew = &g[mu] * c * &g[nu] - &g[nu] * c * &g[mu];
            let gmn = &g[mu] * &g[nu];
            entries.push(skew - gmn.anticommutator(d));
        }
    }
    Ok(OmegaTensor { dim: n, entries })
}

/// `Omega_{c,d}(v, w)` for arbitrary vectors.
pub fn omega_eval(
    c: &Multivector,
    d: &Multivector,
    v: &Multivector,
    w: &Multivector,
) -> Multivector {
    s_map(d, c, v) * w + w * s_map(c, d, v)
}

fn real_vector(col: nalgebra::DVectorView<'_, f64>) -> Multivector {
    let comps: Vec<f64> = col.iter().copied().collect();
    Multivector::real_vector(col.len(), &comps)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SoBCheck {
    pub holds: bool,
    /// Eigenvector indices `(i, j)` of the worst crossing entry.
    pub worst_entry: Option<(usize, usize)>,
    pub worst_norm: f64,
    pub tol: f64,
}

/// Whether `Omega_{c,d}(u_i, u_j)` vanishes for eigenvectors `u_i`, `u_j` of
/// `B` with different eigenvalues.
pub fn omega_in_sob(c: &Multivector, d: &Multivector, b: &SymmetricMap) -> Result<SoBCheck> {
    check_pair(c, d)?;
    if c.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            got: c.dim(),
        });
    }
    let vecs = b.eigenvectors();
    let cluster = b.cluster_of_column();
    let u: Vec<Multivector> = (0..b.dim()).map(|i| real_vector(vecs.column(i))).collect();
    let mut worst_entry = None;
    let mut worst_norm: f64 = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if cluster[i] == cluster[j] {
                continue;
            }
            let r = omega_eval(c, d, &u[i], &u[j]).max_abs();
            if r > worst_norm || worst_entry.is_none() {
                worst_norm = worst_norm.max(r);
                worst_entry = Some((i, j));
            }
        }
    }
    let tol = OMEGA_TOL * (1.0 + c.max_abs() + d.max_abs()).powi(2);
    Ok(SoBCheck {
        holds: worst_norm <= tol,
        worst_entry,
        worst_norm,
        tol,
    })
}

/// Admissible form by number of distinct eigenvalues: one, two, or more.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Template {
    SingleEigenvalue,
    TwoEigenvalues,
    ManyEigenvalues,
}

impl std::fmt::Display for Template {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Template::SingleEigenvalue => "single-eigenvalue",
            Template::TwoEigenvalues => "two-eigenvalues",
            Template::ManyEigenvalues => "many-eigenvalues",
        })
    }
}

/// Coefficients of `c` and `d` on the product of the eigenspace volume
/// elements indexed by `clusters`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterTerm {
    pub clusters: Vec<usize>,
    pub c: C64,
    pub d: C64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub template: Template,
    /// `None` when every coefficient condition of the template holds.
    pub violation: Option<String>,
    pub terms: Vec<ClusterTerm>,
}

impl Classification {
    pub fn matches(&self) -> bool {
        self.violation.is_none()
    }
}

/// Orthonormal eigenframe of `B` with positive orientation.
fn oriented_frame(b: &SymmetricMap) -> RMatrix {
    let mut o = b.eigenvectors().clone();
    let n = o.ncols();
    if n > 0 && o.determinant() < 0.0 {
        let mut last = o.column_mut(n - 1);
        last *= -1.0;
    }
    o
}

/// `(c, d)` expressed in the eigenframe of `B`.
pub fn to_eigenframe(
    c: &Multivector,
    d: &Multivector,
    b: &SymmetricMap,
) -> (Multivector, Multivector) {
    let ot = oriented_frame(b).transpose();
    (c.transform(&ot), d.transform(&ot))
}

/// Condition on `(c_T, d_T)` for the product `T` of `t` of the `r` eigenspace
/// volume elements, `k` the grade of `T`.
fn condition(n: usize, r: usize, t: usize, k: usize, c: C64, d: C64, tol: f64) -> Option<String> {
    let sgn = |p: usize| if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    if r == 1 {
        return None;
    }
    let (ok, rule) = if t == 0 {
        ((c - d).norm() <= tol, "d = c".to_string())
    } else if t == r {
        let s = -sgn(n);
        ((d - c * s).norm() <= tol, format!("d = {s:+} c"))
    } else if r == 2 {
        (true, String::new())
    } else if t == 1 {
        let s = sgn(k);
        ((d - c * s).norm() <= tol, format!("d = {s:+} c"))
    } else if t == r - 1 {
        let s = -sgn(k);
        ((d - c * s).norm() <= tol, format!("d = {s:+} c"))
    } else {
        (c.norm() <= tol && d.norm() <= tol, "c = d = 0".to_string())
    };
    (!ok).then_some(rule)
}

/// Match an `so(B)`-invariant pair against the admissible form for the
/// eigenvalue count of `B`.
pub fn classify_distinguished(
    c: &Multivector,
    d: &Multivector,
    b: &SymmetricMap,
) -> Result<Classification> {
    check_pair(c, d)?;
    let n = b.dim();
    if c.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.dim(),
        });
    }
    let (ce, de) = to_eigenframe(c, d, b);
    let parts: Vec<Blade> = b
        .clusters()
        .iter()
        .map(|cl| Blade::from_indices(&cl.columns))
        .collect();
    let r = parts.len();
    let tol = OMEGA_TOL * (1.0 + c.max_abs() + d.max_abs());
    for (blade, z) in ce.terms().chain(de.terms()) {
        let whole = parts
            .iter()
            .all(|p| p.is_disjoint(blade) || p.is_subset_of(blade));
        if !whole && z.norm() > tol {
            return Err(Error::NotSoBInvariant(format!(
                "eigenframe blade {:?} is not a product of eigenspace volume elements",
                blade.indices().iter().map(|i| i + 1).collect::<Vec<_>>()
            )));
        }
    }
    let template = match r {
        1 => Template::SingleEigenvalue,
        2 => Template::TwoEigenvalues,
        _ => Template::ManyEigenvalues,
    };
    let mut terms = Vec::new();
    let mut violation = None;
    for mask in 0u32..1 << r {
        let chosen: Vec<usize> = (0..r).filter(|&k| mask >> k & 1 == 1).collect();
        let blade = chosen
            .iter()
            .fold(Blade::SCALAR, |acc, &k| acc.union(parts[k]));
        let (cz, dz) = (ce.coeff(blade), de.coeff(blade));
        if cz.norm() <= tol && dz.norm() <= tol && !chosen.is_empty() && chosen.len() < r {
            continue;
        }
        if violation.is_none() {
            if let Some(rule) = condition(n, r, chosen.len(), blade.grade(), cz, dz, tol) {
                let names: Vec<String> = chosen.iter().map(|k| (k + 1).to_string()).collect();
                violation = Some(format!(
                    "term over eigenspaces {{{}}} needs {rule}",
                    names.join(",")
                ));
            }
        }
        terms.push(ClusterTerm {
            clusters: chosen,
            c: cz,
            d: dz,
        });
    }
    Ok(Classification {
        template,
        violation,
        terms,
    })
}

/// Residuals of the two identities satisfied by classified pairs:
/// `d s_{d,c}(e_nu) G_mu + d G_mu s_{c,d}(e_nu) - s_{d,c}(e_nu) G_mu d - G_mu s_{c,d}(e_nu) d = 0`
/// and `s_{d,c}(e_nu) s_{c,d}(e_mu) + s_{d,c}(e_mu) s_{c,d}(e_nu) = 2 B_{mu nu}`.
pub fn closing_identities(
    c: &Multivector,
    d: &Multivector,
    b: &SymmetricMap,
) -> Result<(f64, f64)> {
    check_pair(c, d)?;
    let n = b.dim();
    if c.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.dim(),
        });
    }
    let g: Vec<Multivector> = (0..n).map(|mu| Multivector::basis_vector(n, mu)).collect();
    let sdc: Vec<Multivector> = g.iter().map(|x| s_map(d, c, x)).collect();
    let scd: Vec<Multivector> = g.iter().map(|x| s_map(c, d, x)).collect();
    let mut first: f64 = 0.0;
    let mut second: f64 = 0.0;
    for mu in 0..n {
        for nu in 0..n {
            let x = d * &sdc[nu] * &g[mu] + d * &g[mu] * &scd[nu]
                - &sdc[nu] * &g[mu] * d
                - &g[mu] * &scd[nu] * d;
            first = first.max(x.max_abs());
            let y = &sdc[nu] * &scd[mu] + &sdc[mu] * &scd[nu]
                - Multivector::scalar(n, 2.0 * b.matrix()[(mu, nu)]);
            second = second.max(y.max_abs());
        }
    }
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tensor_is_minus_the_two_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=5 {
            let c = sample::multivector(n, &mut rng);
            let d = sample::multivector(n, &mut rng);
            let om = omega_tensor(&c, &d).unwrap();
            for mu in 0..n {
                for nu in 0..n {
                    if mu == nu {
                        continue;
                    }
                    let v = Multivector::basis_vector(n, mu);
                    let w = Multivector::basis_vector(n, nu);
                    let r = om.get(mu, nu) + omega_eval(&c, &d, &v, &w);
                    assert!(r.max_abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn homogeneous_entries() {
        let n = 4;
        let i = Blade::from_indices(&[0, 1, 2]);
        let (ci, di) = (C64::new(0.7, 0.0), C64::new(-0.3, 0.2));
        let c = Multivector::from_blade(n, i, ci);
        let d = Multivector::from_blade(n, i, di);
        let om = omega_tensor(&c, &d).unwrap();
        let gi = Multivector::from_blade(n, i, 1.0);
        let g01 = Multivector::from_blade(n, Blade::from_indices(&[0, 1]), 1.0);
        let expect = (&gi * &g01).scale((ci * -1.0 + di) * -2.0);
        assert!((om.get(0, 1) - expect).max_abs() < 1e-12);
        assert!(om.get(0, 3).max_abs() < 1e-12);
    }

    #[test]
    fn crossing_entry_detected() {
        let n = 3;
        let c = Multivector::basis_vector(n, 0);
        let d = Multivector::basis_vector(n, 1);
        let b = SymmetricMap::diagonal(&[1.0, 2.0, 2.0]);
        let chk = omega_in_sob(&c, &d, &b).unwrap();
        assert!(!chk.holds);
        let chk = omega_in_sob(&c, &d, &SymmetricMap::scalar(n, 3.0)).unwrap();
        assert!(chk.holds && chk.worst_entry.is_none());
    }

    #[test]
    fn scalar_identity_needs_single_eigenvalue() {
        let n = 4;
        let g = Multivector::volume_element(n);
        let c = Multivector::scalar(n, 0.4) + g.scale(0.9);
        let d = Multivector::scalar(n, -1.2) + g.scale(0.1);
        let cl = classify_distinguished(&c, &d, &SymmetricMap::scalar(n, 2.0)).unwrap();
        assert_eq!(cl.template, Template::SingleEigenvalue);
        assert!(cl.matches());
        let b = SymmetricMap::diagonal(&[1.0, 1.0, 2.0, 2.0]);
        let cl = classify_distinguished(&c, &d, &b).unwrap();
        assert!(!cl.matches());
        assert!(!omega_in_sob(&c, &d, &b).unwrap().holds);
        let e1 = Multivector::basis_vector(n, 0);
        assert!(matches!(
            classify_distinguished(&e1, &e1, &b),
            Err(Error::NotSoBInvariant(_))
        ));
    }
}
