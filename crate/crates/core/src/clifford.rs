//! Complex Clifford algebra of a Euclidean space with generators squaring to `-1`.
//!
//! A basis blade `e_I = e_{i1} e_{i2} ... e_{ik}` (indices increasing) is stored as a
//! bitmask; bit `mu` stands for the generator `e_{mu+1}`. All index arguments in the
//! Rust API are zero-based, the text format is one-based.
//!
//! ```
//! use cliffpair::clifford::{Blade, Multivector};
//! let e1 = Multivector::basis_vector(3, 0);
//! let e2 = Multivector::basis_vector(3, 1);
//! // anticommutation and e_mu^2 = -1
//! assert!((&e1 * &e2 + &e2 * &e1).is_zero(0.0));
//! assert_eq!((&e1 * &e1).scalar_part().re, -1.0);
//! let text = (&e1 * &e2).to_string();
//! assert_eq!(text, "1 e_{1,2}");
//! assert_eq!(text.parse::<Multivector>().unwrap().coeff(Blade::from_indices(&[0, 1])).re, 1.0);
//! ```

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest supported dimension of the underlying vector space.
pub const MAX_DIM: usize = 12;

/// Coefficients with modulus below this are dropped after every operation.
pub const PRUNE_TOL: f64 = 1e-14;

pub fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: MAX_DIM,
        });
    }
    Ok(())
}

/// A basis blade, i.e. a subset of `{0, .., n-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Blade(u16);

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.grade(), self.0).cmp(&(other.grade(), other.0))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    pub fn from_mask(mask: u16) -> Self {
        Blade(mask)
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Blade(indices.iter().fold(0u16, |m, &i| m | (1 << i)))
    }

    pub fn basis(mu: usize) -> Self {
        Blade(1 << mu)
    }

    /// The blade `e_1 ... e_n`.
    pub fn full(n: usize) -> Self {
        Blade(((1u32 << n) - 1) as u16)
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..16).filter(|&i| self.0 >> i & 1 == 1).collect()
    }

    pub fn contains(self, mu: usize) -> bool {
        self.0 >> mu & 1 == 1
    }

    pub fn is_disjoint(self, other: Blade) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Blade) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }

    pub fn complement(self, n: usize) -> Blade {
        Blade(Blade::full(n).0 & !self.0)
    }

    pub fn fits(self, n: usize) -> bool {
        (self.0 as u32) >> n == 0
    }

    /// `e_I e_I = sigma_I`, which equals `(-1)^(k(k+1)/2)` for grade `k`.
    pub fn square_sign(self) -> f64 {
        let k = self.grade();
        if (k * (k + 1) / 2).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Product of two basis blades: `e_I e_J = sign * e_{I xor J}`.
pub fn blade_mul(a: Blade, b: Blade) -> (Blade, f64) {
    let mut swaps = (a.0 & b.0).count_ones();
    let mut rest = b.0;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += ((a.0 as u32) >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    let sign = if swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
    (Blade(a.0 ^ b.0), sign)
}

fn parity_sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Element of the complex Clifford algebra of an `n`-dimensional Euclidean space.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    dim: usize,
    terms: BTreeMap<Blade, C64>,
}

impl Multivector {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        Multivector {
            dim: n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, z: impl Into<C64>) -> Self {
        Self::from_blade(n, Blade::SCALAR, z)
    }

    pub fn from_blade(n: usize, blade: Blade, z: impl Into<C64>) -> Self {
        assert!(blade.fits(n), "blade {blade:?} does not fit dimension {n}");
        let mut m = Self::zero(n);
        m.add_term(blade, z.into());
        m.prune();
        m
    }

    /// Build from `(blade, coefficient)` pairs; repeated blades are summed.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Blade, C64)>) -> Self {
        let mut m = Self::zero(n);
        for (b, z) in terms {
            assert!(b.fits(n), "blade {b:?} does not fit dimension {n}");
            m.add_term(b, z);
        }
        m.prune();
        m
    }

    pub fn basis_vector(n: usize, mu: usize) -> Self {
        Self::from_blade(n, Blade::basis(mu), 1.0)
    }

    pub fn vector(n: usize, components: &[C64]) -> Self {
        assert_eq!(components.len(), n);
        Self::from_terms(
            n,
            components
                .iter()
                .enumerate()
                .map(|(mu, &z)| (Blade::basis(mu), z)),
        )
    }

    pub fn real_vector(n: usize, components: &[f64]) -> Self {
        let c: Vec<C64> = components.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::vector(n, &c)
    }

    /// The chirality element `i^floor((n+1)/2) e_1 ... e_n`, which squares to one.
    pub fn volume_element(n: usize) -> Self {
        let phase = C64::i().powu(n.div_ceil(2) as u32);
        Self::from_blade(n, Blade::full(n), phase)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, C64)> + '_ {
        self.terms.iter().map(|(&b, &z)| (b, z))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, blade: Blade) -> C64 {
        self.terms.get(&blade).copied().unwrap_or_default()
    }

    pub fn scalar_part(&self) -> C64 {
        self.coeff(Blade::SCALAR)
    }

    /// Components of the grade-one part.
    pub fn vector_part(&self) -> Vec<C64> {
        (0..self.dim)
            .map(|mu| self.coeff(Blade::basis(mu)))
            .collect()
    }

    fn add_term(&mut self, blade: Blade, z: C64) {
        *self.terms.entry(blade).or_default() += z;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, z| z.norm() >= PRUNE_TOL);
    }

    fn map_coeffs(&self, f: impl Fn(Blade, C64) -> C64) -> Self {
        Self::from_terms(self.dim, self.terms().map(|(b, z)| (b, f(b, z))))
    }

    pub fn scale(&self, z: impl Into<C64>) -> Self {
        let z = z.into();
        self.map_coeffs(|_, c| c * z)
    }

    /// Geometric product.
    pub fn gp(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in product");
        let n = self.dim;
        if self.len() * other.len() <= 64 {
            let mut out = Self::zero(n);
            for (a, x) in self.terms() {
                for (b, y) in other.terms() {
                    let (ab, s) = blade_mul(a, b);
                    out.add_term(ab, x * y * s);
                }
            }
            out.prune();
            out
        } else {
            let mut dense = vec![C64::default(); 1 << n];
            for (a, x) in self.terms() {
                for (b, y) in other.terms() {
                    let (ab, s) = blade_mul(a, b);
                    dense[ab.0 as usize] += x * y * s;
                }
            }
            Self::from_terms(
                n,
                dense
                    .into_iter()
                    .enumerate()
                    .map(|(m, z)| (Blade(m as u16), z)),
            )
        }
    }

    pub fn grade_project(&self, k: usize) -> Self {
        Self::from_terms(self.dim, self.terms().filter(|(b, _)| b.grade() == k))
    }

    /// Sorted list of grades present.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// `Some(0)` for even, `Some(1)` for odd elements, `None` for mixed parity.
    /// Zero counts as even.
    pub fn parity(&self) -> Option<usize> {
        let mut p = self.terms.keys().map(|b| b.grade() % 2);
        match p.next() {
            None => Some(0),
            Some(first) => p.all(|q| q == first).then_some(first),
        }
    }

    /// Grade involution: grade `k` is multiplied by `(-1)^k`.
    pub fn bar(&self) -> Self {
        self.map_coeffs(|b, z| z * parity_sign(b.grade()))
    }

    /// Reversion: grade `k` is multiplied by `(-1)^(k(k-1)/2)`.
    pub fn tilde(&self) -> Self {
        self.map_coeffs(|b, z| {
            let k = b.grade();
            z * parity_sign(k * k.saturating_sub(1) / 2)
        })
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).max_abs() <= tol
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.gp(other) - other.gp(self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.gp(other) + other.gp(self)
    }

    /// Image under the algebra automorphism induced by the orthogonal matrix `o`,
    /// which sends `e_k` to `sum_j o[(j, k)] e_j`.
    pub fn transform(&self, o: &DMatrix<f64>) -> Self {
        let n = self.dim;
        assert_eq!(o.nrows(), n);
        assert_eq!(o.ncols(), n);
        let images: Vec<Multivector> = (0..n)
            .map(|k| {
                let col: Vec<f64> = (0..n).map(|j| o[(j, k)]).collect();
                Multivector::real_vector(n, &col)
            })
            .collect();
        let mut out = Self::zero(n);
        for (b, z) in self.terms() {
            let mut img = Multivector::scalar(n, z);
            for k in b.indices() {
                img = img.gp(&images[k]);
            }
            out += &img;
        }
        out
    }
}

/// Left contraction `v -| a`, defined on blades by
/// `v -| e_I = sum_k (-1)^(k-1) <v, e_{i_k}> e_{I \ i_k}`.
pub fn left_contract(v: &Multivector, a: &Multivector) -> Result<Multivector> {
    if v.dim != a.dim {
        return Err(Error::DimensionMismatch {
            expected: v.dim,
            got: a.dim,
        });
    }
    let grades = v.grades();
    if grades.iter().any(|&g| g != 1) {
        return Err(Error::NotGradeOne { grades });
    }
    let mut out = Multivector::zero(a.dim);
    for (blade, z) in a.terms() {
        for (pos, i) in blade.indices().into_iter().enumerate() {
            let vi = v.coeff(Blade::basis(i));
            if vi != C64::default() {
                let rest = Blade(blade.0 & !(1 << i));
                out.add_term(rest, vi * z * parity_sign(pos));
            }
        }
    }
    out.prune();
    Ok(out)
}

/// Scalar part of `a * tilde(b)`; on blades this is `(-1)^|I|` on the diagonal and
/// zero off it.
pub fn trace_pairing(a: &Multivector, b: &Multivector) -> C64 {
    a.gp(&b.tilde()).scalar_part()
}

pub fn gp(a: &Multivector, b: &Multivector) -> Multivector {
    a.gp(b)
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        for (b, z) in rhs.terms() {
            self.add_term(b, z);
        }
        self.prune();
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        for (b, z) in rhs.terms() {
            self.add_term(b, -z);
        }
        self.prune();
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.map_coeffs(|_, z| -z)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Multivector> for &Multivector {
            type Output = Multivector;
            fn $m(self, rhs: &Multivector) -> Multivector {
                let f: fn(&Multivector, &Multivector) -> Multivector = $body;
                f(self, rhs)
            }
        }
        impl $tr<Multivector> for Multivector {
            type Output = Multivector;
            fn $m(self, rhs: Multivector) -> Multivector {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Multivector> for Multivector {
            type Output = Multivector;
            fn $m(self, rhs: &Multivector) -> Multivector {
                (&self).$m(rhs)
            }
        }
        impl $tr<Multivector> for &Multivector {
            type Output = Multivector;
            fn $m(self, rhs: Multivector) -> Multivector {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    let mut out = a.clone();
    out += b;
    out
});
binop!(Sub, sub, |a, b| {
    let mut out = a.clone();
    out -= b;
    out
});
binop!(Mul, mul, |a, b| a.gp(b));

impl Mul<C64> for &Multivector {
    type Output = Multivector;
    fn mul(self, z: C64) -> Multivector {
        self.scale(z)
    }
}

impl Mul<C64> for Multivector {
    type Output = Multivector;
    fn mul(self, z: C64) -> Multivector {
        self.scale(z)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, x: f64) -> Multivector {
        self.scale(x)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, x: f64) -> Multivector {
        self.scale(x)
    }
}

// ---------------------------------------------------------------------------
// Text format: `<complex> e_{i1,i2,...}` terms joined by ` + `, scalar blade `e_{}`,
// complex literals `a`, `bi` or `(a+bi)`. Floats use the shortest representation
// that parses back to the same bits.

pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        format!("{}", z.re)
    } else if z.re == 0.0 && z.re.is_sign_positive() {
        format!("{}i", z.im)
    } else {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        format!("({}{}{}i)", z.re, sign, z.im.abs())
    }
}

fn parse_real(s: &str, pos: usize) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse {
        pos,
        msg: format!("invalid number {s:?}"),
    })
}

fn parse_imag(s: &str, pos: usize) -> Result<f64> {
    let body = s.trim().strip_suffix('i').ok_or_else(|| Error::Parse {
        pos,
        msg: format!("expected imaginary literal, got {s:?}"),
    })?;
    match body {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        b => parse_real(b, pos),
    }
}

pub fn parse_complex(s: &str) -> Result<C64> {
    parse_complex_at(s, 0)
}

fn parse_complex_at(s: &str, pos: usize) -> Result<C64> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        // split at the last sign that is not part of an exponent
        let bytes = inner.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| {
                (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
            })
            .ok_or_else(|| Error::Parse {
                pos,
                msg: format!("expected (a+bi), got {s:?}"),
            })?;
        let re = parse_real(&inner[..split], pos)?;
        let im = parse_imag(&inner[split..], pos)?;
        Ok(C64::new(re, im))
    } else if s.ends_with('i') && !s.ends_with("inf") {
        Ok(C64::new(0.0, parse_imag(s, pos)?))
    } else {
        Ok(C64::new(parse_real(s, pos)?, 0.0))
    }
}

fn format_blade(b: Blade) -> String {
    let idx: Vec<String> = b.indices().iter().map(|i| (i + 1).to_string()).collect();
    format!("e_{{{}}}", idx.join(","))
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(b, z)| format!("{} {}", format_complex(z), format_blade(b)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Multivector {
    /// Parse the text form in dimension `n`; indices are one-based and must be
    /// strictly increasing inside each blade.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        check_dim(n)?;
        let m: Multivector = s.parse()?;
        if let Some((b, _)) = m.terms().find(|(b, _)| !b.fits(n)) {
            return Err(Error::IndexOutOfRange {
                index: b.indices().last().copied().unwrap_or(0) + 1,
                dim: n,
            });
        }
        let mut out = Multivector::zero(n);
        for (b, z) in m.terms() {
            out.add_term(b, z);
        }
        Ok(out)
    }
}

impl FromStr for Multivector {
    type Err = Error;

    /// Parses into the smallest dimension that holds every blade mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let err = |pos: usize, msg: &str| Error::Parse {
            pos,
            msg: msg.to_string(),
        };
        let trimmed = s.trim();
        if trimmed == "0" || trimmed.is_empty() {
            return Ok(Multivector::zero(0));
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut terms: Vec<(Blade, C64)> = Vec::new();
        let skip_ws = |p: &mut usize| {
            while *p < bytes.len() && bytes[*p].is_ascii_whitespace() {
                *p += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            let start = pos;
            if pos < bytes.len() && bytes[pos] == b'(' {
                while pos < bytes.len() && bytes[pos] != b')' {
                    pos += 1;
                }
                if pos == bytes.len() {
                    return Err(err(start, "unterminated complex literal"));
                }
                pos += 1;
            } else {
                while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
            }
            let z = parse_complex_at(&s[start..pos], start)?;
            skip_ws(&mut pos);
            if !s[pos..].starts_with("e_{") {
                return Err(err(pos, "expected e_{...}"));
            }
            pos += 3;
            let close = s[pos..]
                .find('}')
                .ok_or_else(|| err(pos, "unterminated blade"))?;
            let list = &s[pos..pos + close];
            let mut mask: u32 = 0;
            let mut last = 0usize;
            for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let idx: usize = tok.parse().map_err(|_| err(pos, "invalid index"))?;
                if idx == 0 || idx > MAX_DIM {
                    return Err(err(pos, "index out of range"));
                }
                if idx <= last {
                    return Err(err(pos, "blade indices must be strictly increasing"));
                }
                last = idx;
                mask |= 1 << (idx - 1);
            }
            pos += close + 1;
            terms.push((Blade(mask as u16), z));
            skip_ws(&mut pos);
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b'+' {
                return Err(err(pos, "expected '+' between terms"));
            }
            pos += 1;
        }
        let n = terms
            .iter()
            .map(|(b, _)| 16 - b.0.leading_zeros() as usize)
            .max()
            .unwrap_or(0);
        Ok(Multivector::from_terms(n, terms))
    }
}
