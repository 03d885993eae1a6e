//! Quadratic Clifford pairs.
//!
//! For `c, d` in the Clifford algebra put `s_{c,d}(x) = c x - x d` and
//! `q_{c,d} = s_{c,d} o s_{c,d}`, i.e. `q_{c,d}(x) = c^2 x + x d^2 - 2 c x d`.
//! The pair `(c, d)` is a quadratic Clifford pair for the real symmetric map `B`
//! when `q_{c,d}(v) = B v` for every vector `v`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::clifford::{Blade, Multivector, C64};
use crate::error::{Error, Result};
use crate::linalg::{cmax_abs, inf_norm, to_complex, CMatrix, RMatrix, SymmetricMap, CLUSTER_TOL};

/// Relative tolerance of [`extract_b`]; scaled by `1 + |c| |d|`.
pub const EXTRACT_TOL: f64 = 1e-9;

pub fn s_map(c: &Multivector, d: &Multivector, x: &Multivector) -> Multivector {
    c * x - x * d
}

pub fn q_map(c: &Multivector, d: &Multivector, x: &Multivector) -> Multivector {
    let cc = c * c;
    let dd = d * d;
    &cc * x + x * &dd - (c * x * d) * 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairStatus {
    Verified,
    NotClosedInV,
    NotSymmetric,
}

impl std::fmt::Display for PairStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PairStatus::Verified => "verified",
            PairStatus::NotClosedInV => "not-closed-in-V",
            PairStatus::NotSymmetric => "not-symmetric",
        })
    }
}

/// Result of evaluating `q_{c,d}` on the standard basis.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub status: PairStatus,
    /// `M[(mu, nu)]` is the coefficient of `e_nu` in `q(e_mu)`; present when
    /// `q` maps vectors to vectors.
    pub matrix: Option<CMatrix>,
    pub b: Option<SymmetricMap>,
    /// Largest coefficient of `q(e_mu)` outside grade one.
    pub leak: f64,
    pub asymmetry: f64,
    pub imaginary: f64,
    /// Absolute tolerance that was applied.
    pub tol: f64,
}

pub fn extract_b(c: &Multivector, d: &Multivector) -> Result<Extraction> {
    extract_b_with_tol(c, d, EXTRACT_TOL)
}

pub fn extract_b_with_tol(c: &Multivector, d: &Multivector, rel_tol: f64) -> Result<Extraction> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: d.dim(),
        });
    }
    let n = c.dim();
    let tol = rel_tol * (1.0 + c.norm() * d.norm());
    let mut m = CMatrix::zeros(n, n);
    let mut leak: f64 = 0.0;
    for mu in 0..n {
        let img = q_map(c, d, &Multivector::basis_vector(n, mu));
        for (b, z) in img.terms() {
            if b.grade() == 1 {
                m[(mu, b.indices()[0])] = z;
            } else {
                leak = leak.max(z.norm());
            }
        }
    }
    let asymmetry = cmax_abs(&(&m - m.transpose()));
    let imaginary = m.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let status = if leak > tol {
        PairStatus::NotClosedInV
    } else if asymmetry > tol || imaginary > tol {
        PairStatus::NotSymmetric
    } else {
        PairStatus::Verified
    };
    let b = if status == PairStatus::Verified {
        let re = m.map(|z| z.re);
        Some(SymmetricMap::new((&re + re.transpose()) * 0.5)?)
    } else {
        None
    };
    Ok(Extraction {
        status,
        matrix: (status != PairStatus::NotClosedInV).then_some(m),
        b,
        leak,
        asymmetry,
        imaginary,
        tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Monomial,
    PseudoMonomialEven,
    PseudoMonomialOdd,
    Linear,
    GeneralizedMonomial,
    Other,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Monomial => "monomial",
            Family::PseudoMonomialEven => "pseudo-monomial-even",
            Family::PseudoMonomialOdd => "pseudo-monomial-odd",
            Family::Linear => "linear",
            Family::GeneralizedMonomial => "generalized-monomial",
            Family::Other => "other",
        })
    }
}

/// A pair `(c, d)` together with its extracted map and, for pairs built by one of
/// the family constructors, the closed-form prediction of `M`.
#[derive(Clone, Debug)]
pub struct QuadraticPair {
    pub c: Multivector,
    pub d: Multivector,
    pub extraction: Extraction,
    pub family: Option<Family>,
    pub predicted: Option<CMatrix>,
}

impl QuadraticPair {
    pub fn new(c: Multivector, d: Multivector) -> Result<Self> {
        let extraction = extract_b(&c, &d)?;
        Ok(QuadraticPair {
            c,
            d,
            extraction,
            family: None,
            predicted: None,
        })
    }

    /// Tag the pair with the family it was built from.
    pub fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    fn with_prediction(mut self, family: Family, predicted: CMatrix) -> Self {
        self.family = Some(family);
        self.predicted = Some(predicted);
        self
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn status(&self) -> PairStatus {
        self.extraction.status
    }

    pub fn is_verified(&self) -> bool {
        self.status() == PairStatus::Verified
    }

    pub fn b(&self) -> Option<&SymmetricMap> {
        self.extraction.b.as_ref()
    }

    /// `max |M - predicted|`, or `None` without a prediction or when `q` leaves `V`.
    pub fn prediction_residual(&self) -> Option<f64> {
        let p = self.predicted.as_ref()?;
        let m = self.extraction.matrix.as_ref()?;
        Some(cmax_abs(&(m - p)))
    }

    /// Prediction residual divided by `1 + max |predicted|`.
    pub fn relative_prediction_residual(&self) -> Option<f64> {
        let p = self.predicted.as_ref()?;
        Some(self.prediction_residual()? / (1.0 + cmax_abs(p)))
    }
}

fn check_blade(n: usize, b: Blade) -> Result<()> {
    if !b.fits(n) {
        return Err(Error::IndexOutOfRange {
            index: b.indices().last().copied().unwrap_or(0) + 1,
            dim: n,
        });
    }
    Ok(())
}

fn diag_prediction(n: usize, on: Blade, inside: C64, outside: C64) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if i != j {
            C64::default()
        } else if on.contains(i) {
            inside
        } else {
            outside
        }
    })
}

fn sign_pow(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(alpha e_I, beta e_I)`; eigenvalue `sigma_I (alpha + (-1)^|I| beta)^2` on the
/// span of `I` and `sigma_I (alpha - (-1)^|I| beta)^2` on its complement.
pub fn make_monomial(n: usize, blade: Blade, alpha: C64, beta: C64) -> Result<QuadraticPair> {
    check_blade(n, blade)?;
    let c = Multivector::from_blade(n, blade, alpha);
    let d = Multivector::from_blade(n, blade, beta);
    let sigma = blade.square_sign();
    let eps = sign_pow(blade.grade());
    let inside = (alpha + beta * eps).powu(2) * sigma;
    let outside = (alpha - beta * eps).powu(2) * sigma;
    Ok(QuadraticPair::new(c, d)?
        .with_prediction(Family::Monomial, diag_prediction(n, blade, inside, outside)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Parameters of the two pseudo-monomial families (even dimension only).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum PseudoParams {
    /// `((alpha + beta G*) e_I, +-(alpha + beta G*) e_I)` with `|I|` even.
    Even { alpha: C64, beta: C64, sign: Sign },
    /// `(alpha (cos phi e^{i psi} + sin phi G*) e_I, beta (cos phi e^{i psi} - sin phi G*) e_I)`
    /// with `|I|` odd.
    Odd {
        alpha: C64,
        beta: C64,
        phi: f64,
        psi: f64,
    },
}

pub fn make_pseudo_monomial(n: usize, blade: Blade, params: PseudoParams) -> Result<QuadraticPair> {
    check_blade(n, blade)?;
    if n % 2 == 1 {
        return Err(Error::OddDimension { dim: n });
    }
    let g = Multivector::volume_element(n);
    let gi = Multivector::from_blade(n, blade, 1.0);
    let one = Multivector::scalar(n, 1.0);
    let sigma = blade.square_sign();
    let k = blade.grade();
    match params {
        PseudoParams::Even { alpha, beta, sign } => {
            if k % 2 == 1 {
                return Err(Error::ParityMismatch(format!(
                    "even-type pseudo-monomial needs an even blade, got grade {k}"
                )));
            }
            let c = (&one * alpha + &g * beta) * &gi;
            let d = &c * sign.value();
            let (a2, b2) = (alpha * alpha * 4.0 * sigma, beta * beta * 4.0 * sigma);
            let (inside, outside) = match sign {
                Sign::Plus => (a2, b2),
                Sign::Minus => (b2, a2),
            };
            Ok(QuadraticPair::new(c, d)?.with_prediction(
                Family::PseudoMonomialEven,
                diag_prediction(n, blade, inside, outside),
            ))
        }
        PseudoParams::Odd {
            alpha,
            beta,
            phi,
            psi,
        } => {
            if k.is_multiple_of(2) {
                return Err(Error::ParityMismatch(format!(
                    "odd-type pseudo-monomial needs an odd blade, got grade {k}"
                )));
            }
            let phase = C64::from_polar(phi.cos(), psi);
            let c = (&one * (alpha * phase) + &g * (alpha * phi.sin())) * &gi;
            let d = (&one * (beta * phase) - &g * (beta * phi.sin())) * &gi;
            let f = phase * phase - phi.sin().powi(2);
            let inside = (alpha - beta).powu(2) * f * sigma;
            let outside = (alpha + beta).powu(2) * f * sigma;
            Ok(QuadraticPair::new(c, d)?.with_prediction(
                Family::PseudoMonomialOdd,
                diag_prediction(n, blade, inside, outside),
            ))
        }
    }
}

/// Bivector `-1/4 sum_{mu,nu} A_{mu nu} e_mu e_nu` of a skew matrix; its
/// commutator with a vector `v` is the vector `A v`.
pub fn skew_to_bivector(a: &CMatrix) -> Multivector {
    let n = a.nrows();
    let mut terms = Vec::new();
    for mu in 0..n {
        for nu in mu + 1..n {
            terms.push((Blade::from_indices(&[mu, nu]), a[(mu, nu)] * -0.5));
        }
    }
    Multivector::from_terms(n, terms)
}

/// Inverse of [`skew_to_bivector`] on the bivector part.
pub fn bivector_to_skew(a: &Multivector) -> CMatrix {
    let n = a.dim();
    let mut m = CMatrix::zeros(n, n);
    for mu in 0..n {
        for nu in mu + 1..n {
            let z = a.coeff(Blade::from_indices(&[mu, nu])) * -2.0;
            m[(mu, nu)] = z;
            m[(nu, mu)] = -z;
        }
    }
    m
}

/// `(A, A)` for a bivector `A` with `A^2 = B` as matrices. Every nonzero
/// eigenvalue of `B` must have even multiplicity.
pub fn make_linear(b: &SymmetricMap) -> Result<QuadraticPair> {
    let n = b.dim();
    let unit = inf_norm(b.matrix()).max(f64::MIN_POSITIVE);
    let vecs = b.eigenvectors();
    let mut a = CMatrix::zeros(n, n);
    for cl in b.clusters() {
        if cl.value.abs() <= CLUSTER_TOL * unit {
            continue;
        }
        if cl.multiplicity() % 2 == 1 {
            return Err(Error::OddMultiplicity {
                eigenvalue: cl.value,
                multiplicity: cl.multiplicity(),
            });
        }
        let l = cl.value.abs().sqrt();
        let z = if cl.value < 0.0 {
            C64::new(l, 0.0)
        } else {
            C64::new(0.0, l)
        };
        for pair in cl.columns.chunks(2) {
            let (u, w) = (vecs.column(pair[0]), vecs.column(pair[1]));
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] += z * (u[i] * w[j] - w[i] * u[j]);
                }
            }
        }
    }
    let biv = skew_to_bivector(&a);
    Ok(QuadraticPair::new(biv.clone(), biv)?
        .with_prediction(Family::Linear, to_complex(b.matrix())))
}

/// `(A, A)` for the complex skew matrix `A = a0 + i a1`. `A^2` is real exactly
/// when `a0` and `a1` anticommute, which is enforced.
pub fn make_linear_from_skew(a0: &RMatrix, a1: &RMatrix) -> Result<QuadraticPair> {
    let n = a0.nrows();
    if a1.nrows() != n || a0.ncols() != n || a1.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a1.nrows(),
        });
    }
    let scale = 1.0 + a0.amax() * a0.amax() + a1.amax() * a1.amax();
    for m in [a0, a1] {
        let r = (m + m.transpose()).amax();
        if r > 1e-12 * scale.sqrt() {
            return Err(Error::NotSkew { residual: r });
        }
    }
    let anti = (a0 * a1 + a1 * a0).amax();
    if anti > 1e-10 * scale {
        return Err(Error::NotAnticommuting { residual: anti });
    }
    let a = CMatrix::from_fn(n, n, |i, j| C64::new(a0[(i, j)], a1[(i, j)]));
    let biv = skew_to_bivector(&a);
    let predicted = &a * &a;
    Ok(QuadraticPair::new(biv.clone(), biv)?.with_prediction(Family::Linear, predicted))
}

/// Check that `parts` is a partition of `{0..n}` into nonempty blades.
pub fn check_partition(n: usize, parts: &[Blade]) -> Result<()> {
    let mut seen = Blade::SCALAR;
    for &p in parts {
        check_blade(n, p)?;
        if p == Blade::SCALAR {
            return Err(Error::IllegalParityPattern("empty part".into()));
        }
        if !p.is_disjoint(seen) {
            return Err(Error::IllegalParityPattern("parts overlap".into()));
        }
        seen = seen.union(p);
    }
    if seen != Blade::full(n) {
        return Err(Error::IllegalParityPattern(
            "parts do not cover all indices".into(),
        ));
    }
    Ok(())
}

/// Build `c = sum (c_a + h_a G*) e_{I_a}` and
/// `d = sum (eps_a c_a - eps_a h_a G*) e_{I_a}` with `eps_a = (-1)^|I_a|`,
/// without any legality checks.
pub fn generalized_elements(
    n: usize,
    parts: &[Blade],
    coeffs: &[C64],
    hats: &[C64],
) -> (Multivector, Multivector) {
    let g = Multivector::volume_element(n);
    let mut c = Multivector::zero(n);
    let mut d = Multivector::zero(n);
    for ((&p, &ca), &ha) in parts.iter().zip(coeffs).zip(hats) {
        let gi = Multivector::from_blade(n, p, 1.0);
        let ggi = &g * &gi;
        let eps = sign_pow(p.grade());
        c += &(&gi * ca + &ggi * ha);
        d += &(&gi * (ca * eps) - &ggi * (ha * eps));
    }
    (c, d)
}

const COEFF_TOL: f64 = 1e-12;

/// Check the parity and coefficient rules of the generalized family.
pub fn check_generalized(n: usize, parts: &[Blade], coeffs: &[C64], hats: &[C64]) -> Result<()> {
    check_partition(n, parts)?;
    if coeffs.len() != parts.len() || hats.len() != parts.len() {
        return Err(Error::DimensionMismatch {
            expected: parts.len(),
            got: coeffs.len().min(hats.len()),
        });
    }
    if parts.len() < 2 {
        return Err(Error::IllegalParityPattern(
            "need at least two parts".into(),
        ));
    }
    let odd: Vec<usize> = (0..parts.len())
        .filter(|&a| parts[a].grade() % 2 == 1)
        .collect();
    let any_hat = hats.iter().any(|h| h.norm() > COEFF_TOL);
    if n % 2 == 1 {
        if any_hat {
            return Err(Error::CoefficientConstraintViolated(
                "chirality terms need even dimension".into(),
            ));
        }
        if odd.len() != 1 {
            return Err(Error::IllegalParityPattern(format!(
                "odd dimension allows exactly one odd part, got {}",
                odd.len()
            )));
        }
        return Ok(());
    }
    match odd.len() {
        0 => {
            for a in 0..parts.len() {
                if (coeffs[a] * hats[a]).norm() > COEFF_TOL {
                    return Err(Error::CoefficientConstraintViolated(format!(
                        "part {a} has both a plain and a chirality coefficient"
                    )));
                }
            }
            Ok(())
        }
        2 => {
            for a in 0..parts.len() {
                if !odd.contains(&a) && hats[a].norm() > COEFF_TOL {
                    return Err(Error::CoefficientConstraintViolated(format!(
                        "even part {a} carries a chirality coefficient"
                    )));
                }
            }
            let (x, y) = (odd[0], odd[1]);
            let r = coeffs[x] * coeffs[y] - hats[x] * hats[y];
            if r.norm() > COEFF_TOL * (1.0 + coeffs[x].norm() * coeffs[y].norm()) {
                return Err(Error::CoefficientConstraintViolated(
                    "the two odd parts need c_0 c_1 = h_0 h_1".into(),
                ));
            }
            Ok(())
        }
        k => Err(Error::IllegalParityPattern(format!(
            "even dimension allows zero or two odd parts, got {k}"
        ))),
    }
}

/// Generalized monomial pair; eigenvalue `4 sigma_a (c_a^2 + (-1)^|I_a| h_a^2)` on
/// the span of each part.
pub fn make_generalized(
    n: usize,
    parts: &[Blade],
    coeffs: &[C64],
    hats: &[C64],
) -> Result<QuadraticPair> {
    check_generalized(n, parts, coeffs, hats)?;
    let (c, d) = generalized_elements(n, parts, coeffs, hats);
    let mut predicted = CMatrix::zeros(n, n);
    for ((&p, &ca), &ha) in parts.iter().zip(coeffs).zip(hats) {
        let lam = (ca * ca + ha * ha * sign_pow(p.grade())) * 4.0 * p.square_sign();
        for i in p.indices() {
            predicted[(i, i)] = lam;
        }
    }
    Ok(QuadraticPair::new(c, d)?.with_prediction(Family::GeneralizedMonomial, predicted))
}

// ---------------------------------------------------------------------------
// Template matching

const MATCH_TOL: f64 = 1e-10;

fn non_scalar_support(m: &Multivector) -> Vec<Blade> {
    m.terms()
        .map(|(b, _)| b)
        .filter(|&b| b != Blade::SCALAR)
        .collect()
}

fn gauges(c: &Multivector, d: &Multivector) -> Vec<(Multivector, Multivector)> {
    let n = c.dim();
    let mut out = vec![(c.clone(), d.clone())];
    for t in [c.scalar_part(), d.scalar_part()] {
        if t != C64::default() {
            let s = Multivector::scalar(n, t);
            out.push((c - &s, d - &s));
        }
    }
    out
}

fn is_monomial(c: &Multivector, d: &Multivector) -> bool {
    if c.grades().iter().chain(&d.grades()).all(|&g| g == 0) {
        return true;
    }
    if (c.scalar_part() - d.scalar_part()).norm() > MATCH_TOL {
        return false;
    }
    let mut blades = non_scalar_support(c);
    blades.extend(non_scalar_support(d));
    blades.sort();
    blades.dedup();
    blades.len() <= 1
}

fn is_linear(c: &Multivector, d: &Multivector) -> bool {
    let n = c.dim();
    if c.grades().iter().chain(&d.grades()).all(|&g| g == 0) {
        return true;
    }
    let cs = Multivector::scalar(n, c.scalar_part());
    let ds = Multivector::scalar(n, d.scalar_part());
    let a = c - &cs;
    let b = d - &ds;
    (c.scalar_part() - d.scalar_part()).norm() <= MATCH_TOL
        && a.approx_eq(&b, MATCH_TOL * (1.0 + a.norm()))
        && a.grades().iter().all(|&g| g == 2)
}

/// Coefficients `(x1, x2)` with `m = x1 e_I + x2 G* e_I`, if `m` lies in that span.
fn split_chiral(m: &Multivector, blade: Blade) -> Option<(C64, C64)> {
    let n = m.dim();
    let ggi = &Multivector::volume_element(n) * &Multivector::from_blade(n, blade, 1.0);
    let (cb, k) = ggi.terms().next()?;
    let x1 = m.coeff(blade);
    let x2 = if cb == blade {
        C64::default()
    } else {
        m.coeff(cb) / k
    };
    let rebuilt = Multivector::from_blade(n, blade, x1) + &ggi * x2;
    rebuilt
        .approx_eq(m, MATCH_TOL * (1.0 + m.norm()))
        .then_some((x1, x2))
}

fn pseudo_match(c: &Multivector, d: &Multivector) -> Option<Family> {
    let n = c.dim();
    if n % 2 == 1 {
        return None;
    }
    let mut cand = non_scalar_support(c);
    cand.extend(non_scalar_support(d));
    if c.scalar_part() != C64::default() || d.scalar_part() != C64::default() {
        cand.push(Blade::SCALAR);
    }
    let mut tried = Vec::new();
    for b in cand {
        for blade in [b, b.complement(n)] {
            if tried.contains(&blade) {
                continue;
            }
            tried.push(blade);
            let (Some((x1, x2)), Some((y1, y2))) = (split_chiral(c, blade), split_chiral(d, blade))
            else {
                continue;
            };
            let scale = MATCH_TOL * (1.0 + c.norm() * d.norm());
            if blade.grade() % 2 == 0 {
                let plus = (x1 - y1).norm() <= scale && (x2 - y2).norm() <= scale;
                let minus = (x1 + y1).norm() <= scale && (x2 + y2).norm() <= scale;
                if plus || minus {
                    return Some(Family::PseudoMonomialEven);
                }
            } else if (x1 * y2 + x2 * y1).norm() <= scale {
                return Some(Family::PseudoMonomialOdd);
            }
        }
    }
    None
}

/// Split the index set into the atoms generated by the support of `c` and `d`.
fn atoms(n: usize, blades: &[Blade]) -> Vec<Blade> {
    let mut groups: Vec<(u64, Blade)> = Vec::new();
    for mu in 0..n {
        let sig = blades
            .iter()
            .enumerate()
            .filter(|(_, b)| b.contains(mu))
            .fold(0u64, |s, (k, _)| s | (1 << k));
        match groups.iter_mut().find(|(s, _)| *s == sig) {
            Some((_, b)) => *b = b.union(Blade::basis(mu)),
            None => groups.push((sig, Blade::basis(mu))),
        }
    }
    groups.into_iter().map(|(_, b)| b).collect()
}

/// Fit `(c, d)` to the generalized template; returns `(parts, coeffs, hats)`.
pub fn fit_generalized(
    c: &Multivector,
    d: &Multivector,
) -> Option<(Vec<Blade>, Vec<C64>, Vec<C64>)> {
    let n = c.dim();
    if c.scalar_part() != C64::default() || d.scalar_part() != C64::default() {
        return None;
    }
    let mut support = non_scalar_support(c);
    support.extend(non_scalar_support(d));
    support.sort();
    support.dedup();
    let parts = atoms(n, &support);
    if parts.len() < 2 {
        return None;
    }
    let g = Multivector::volume_element(n);
    let use_hats = parts.len() > 2 && n.is_multiple_of(2);
    let mut coeffs = Vec::with_capacity(parts.len());
    let mut hats = Vec::with_capacity(parts.len());
    for &p in &parts {
        coeffs.push(c.coeff(p));
        if use_hats {
            let ggi = &g * &Multivector::from_blade(n, p, 1.0);
            let (cb, k) = ggi.terms().next()?;
            hats.push(c.coeff(cb) / k);
        } else {
            hats.push(C64::default());
        }
    }
    let (cc, dd) = generalized_elements(n, &parts, &coeffs, &hats);
    let tol = MATCH_TOL * (1.0 + c.norm() + d.norm());
    (cc.approx_eq(c, tol) && dd.approx_eq(d, tol)).then_some((parts, coeffs, hats))
}

fn is_generalized(c: &Multivector, d: &Multivector) -> bool {
    match fit_generalized(c, d) {
        Some((parts, coeffs, hats)) => check_generalized(c.dim(), &parts, &coeffs, &hats).is_ok(),
        None => false,
    }
}

/// Every family template that `(c, d)` matches up to the scalar gauge
/// `(c + t, d + t)`, most specific first. Returns `[Other]` if none match.
pub fn classify_family(c: &Multivector, d: &Multivector) -> Vec<Family> {
    let mut out = Vec::new();
    let gauged = gauges(c, d);
    if gauged.iter().any(|(a, b)| is_monomial(a, b)) {
        out.push(Family::Monomial);
    }
    if let Some(f) = gauged.iter().find_map(|(a, b)| pseudo_match(a, b)) {
        out.push(f);
    }
    if gauged.iter().any(|(a, b)| is_linear(a, b)) {
        out.push(Family::Linear);
    }
    if gauged.iter().any(|(a, b)| is_generalized(a, b)) {
        out.push(Family::GeneralizedMonomial);
    }
    if out.is_empty() {
        out.push(Family::Other);
    }
    out
}

/// Largest violation of
/// `(q_{c,d})_I^J = (-1)^((|I|+|J|)(|I|+|J|-1)/2) (-1)^(|I||J|) (q_{d,c})_J^I`
/// over all blades, where `(q)_I^J = (-1)^(|J|(|J|-1)/2) <q(e_I) e_J>_0`.
pub fn transpose_relation_check(c: &Multivector, d: &Multivector) -> Result<f64> {
    let n = c.dim();
    if n > 6 {
        return Err(Error::DimensionTooLarge { dim: n, max: 6 });
    }
    if d.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: d.dim(),
        });
    }
    let blades: Vec<Blade> = (0..1u16 << n).map(Blade::from_mask).collect();
    let table = |a: &Multivector, b: &Multivector| -> DMatrix<C64> {
        let mut t = DMatrix::<C64>::zeros(blades.len(), blades.len());
        for (i, &bi) in blades.iter().enumerate() {
            let img = q_map(a, b, &Multivector::from_blade(n, bi, 1.0));
            for (j, &bj) in blades.iter().enumerate() {
                let k = bj.grade();
                // <X e_J>_0 = X_J sigma_J
                t[(i, j)] =
                    img.coeff(bj) * bj.square_sign() * sign_pow(k * k.saturating_sub(1) / 2);
            }
        }
        t
    };
    let lhs = table(c, d);
    let rhs = table(d, c);
    let mut worst: f64 = 0.0;
    for (i, bi) in blades.iter().enumerate() {
        for (j, bj) in blades.iter().enumerate() {
            let (ki, kj) = (bi.grade(), bj.grade());
            let s = ki + kj;
            let sign = sign_pow(s * s.saturating_sub(1) / 2) * sign_pow(ki * kj);
            worst = worst.max((lhs[(i, j)] - rhs[(j, i)] * sign).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn monomial_example_in_three_dimensions() {
        let p = make_monomial(3, Blade::basis(0), c(2.0), c(1.0)).unwrap();
        assert!(p.is_verified());
        let b = p.b().unwrap().matrix();
        let expected = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, -9.0, -9.0]));
        assert!((b - expected).amax() < 1e-12);
        assert!(p.prediction_residual().unwrap() < 1e-12);
    }

    #[test]
    fn vector_with_its_negative() {
        // q_{w,-w}(v) = -4 <w,v> w for a unit vector w
        let n = 3;
        let w = Multivector::basis_vector(n, 0);
        let ex = extract_b(&w, &-&w).unwrap();
        assert_eq!(ex.status, PairStatus::Verified);
        let b = ex.b.unwrap();
        assert!((b.matrix()[(0, 0)] + 4.0).abs() < 1e-12);
        assert!(b.matrix()[(1, 1)].abs() < 1e-12);
    }

    #[test]
    fn scalar_pair() {
        let n = 4;
        let p = QuadraticPair::new(Multivector::zero(n), Multivector::scalar(n, 1.5)).unwrap();
        let b = p.b().unwrap();
        assert_eq!(
            b.scalar_value().map(|x| (x - 2.25).abs() < 1e-12),
            Some(true)
        );
    }

    #[test]
    fn linear_minus_four_in_plane() {
        let b = SymmetricMap::scalar(2, -4.0);
        let p = make_linear(&b).unwrap();
        let expected = Multivector::from_blade(2, Blade::full(2), -1.0);
        assert!(p.c.approx_eq(&expected, 1e-12), "{}", p.c);
        assert!(p.is_verified());
        assert!(p.prediction_residual().unwrap() < 1e-12);
    }

    #[test]
    fn constructor_errors() {
        assert!(matches!(
            make_pseudo_monomial(
                3,
                Blade::basis(0),
                PseudoParams::Odd {
                    alpha: c(1.0),
                    beta: c(1.0),
                    phi: 0.3,
                    psi: 0.0
                }
            ),
            Err(Error::OddDimension { .. })
        ));
        assert!(matches!(
            make_pseudo_monomial(
                4,
                Blade::basis(0),
                PseudoParams::Even {
                    alpha: c(1.0),
                    beta: c(1.0),
                    sign: Sign::Plus
                }
            ),
            Err(Error::ParityMismatch(_))
        ));
        assert!(matches!(
            make_linear(&SymmetricMap::diagonal(&[1.0, 1.0, 2.0])),
            Err(Error::OddMultiplicity { .. })
        ));
        let parts = [Blade::from_indices(&[0]), Blade::from_indices(&[1, 2, 3])];
        assert!(matches!(
            make_generalized(4, &parts, &[c(1.0), c(1.0)], &[c(0.0), c(0.0)]),
            Err(Error::CoefficientConstraintViolated(_))
        ));
        let parts3 = [
            Blade::from_indices(&[0]),
            Blade::from_indices(&[1]),
            Blade::from_indices(&[2, 3]),
        ];
        assert!(matches!(
            make_generalized(4, &parts3, &[c(1.0), c(1.0), c(1.0)], &[c(0.0); 3]),
            Err(Error::CoefficientConstraintViolated(_))
        ));
    }

    #[test]
    fn classification_examples() {
        let n = 4;
        let a = Multivector::from_terms(
            n,
            [
                (Blade::from_indices(&[0, 1]), c(1.0)),
                (Blade::from_indices(&[2, 3]), c(2.0)),
            ],
        );
        let fams = classify_family(&a, &a);
        assert!(fams.contains(&Family::Linear));
        assert!(fams.contains(&Family::GeneralizedMonomial));
        let m = Multivector::from_blade(3, Blade::basis(0), 2.0);
        let d = Multivector::from_blade(3, Blade::basis(0), 1.0);
        assert_eq!(classify_family(&m, &d)[0], Family::Monomial);
    }
}
