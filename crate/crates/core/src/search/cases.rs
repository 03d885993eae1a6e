//! Two-monomial pairs `c = (a G_I + b G_J) G_K`, `d = (a' G_I + b' G_J) G_K`
//! with disjoint `I, J, K`.
//!
//! Writing `X = G_I G_K` and `Y = G_J G_K`, the part of `q_{c,d}(e_mu)` that
//! mixes `X` and `Y` is
//!
//! ```text
//! ab (XY + YX) e_mu + a'b' e_mu (XY + YX) - 2 ab' X e_mu Y - 2 a'b Y e_mu X
//! ```
//!
//! and it never contributes to the `e_mu` coefficient. The pair maps `V`
//! diagonally exactly when every blade coefficient of this expression
//! vanishes, which is a homogeneous integer system in `(ab, a'b', ab', a'b)`.
//! Dividing by `ab` and writing `r1 = a'/a`, `r2 = b'/b` each row reads
//! `p + q r1 r2 + s r2 + t r1 = 0`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clifford::{Blade, Multivector, C64};
use crate::error::{Error, Result};

const ROOT_TOL: f64 = 1e-12;

/// Grades of `I`, `J`, `K` and of the complement of their union.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shape {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub complement: usize,
}

impl Shape {
    /// Labeled representative: `I` takes the first indices, then `J`, then `K`.
    pub fn blades(&self) -> (Blade, Blade, Blade) {
        let range = |a: usize, len: usize| Blade::from_indices(&(a..a + len).collect::<Vec<_>>());
        (
            range(0, self.i),
            range(self.i, self.j),
            range(self.i + self.j, self.k),
        )
    }

    pub fn dim(&self) -> usize {
        self.i + self.j + self.k + self.complement
    }

    /// `(-1)^{IJ + (I + J) K}`; `(c, 0)` is a pair exactly when this is `-1`.
    pub fn single_element_sign(&self) -> i32 {
        if (self.i * self.j + (self.i + self.j) * self.k).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "1a")]
    Case1a,
    #[serde(rename = "1b")]
    Case1b,
    #[serde(rename = "2a")]
    Case2a,
    #[serde(rename = "2b")]
    Case2b,
    #[serde(rename = "3a")]
    Case3a,
    #[serde(rename = "3b")]
    Case3b,
    #[serde(rename = "4a")]
    Case4a,
    #[serde(rename = "4b")]
    Case4b,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseLabel::Case1a => "1a",
            CaseLabel::Case1b => "1b",
            CaseLabel::Case2a => "2a",
            CaseLabel::Case2b => "2b",
            CaseLabel::Case3a => "3a",
            CaseLabel::Case3b => "3b",
            CaseLabel::Case4a => "4a",
            CaseLabel::Case4b => "4b",
        };
        f.write_str(s)
    }
}

/// Case of a shape: the digit records whether `I` is empty (3, 4) and whether
/// the complement is empty (2, 4), the letter whether `K` is empty (b).
pub fn classify_shape(s: &Shape) -> CaseLabel {
    let full = s.complement == 0;
    match (s.i == 0, s.k == 0, full) {
        (false, false, false) => CaseLabel::Case1a,
        (false, true, false) => CaseLabel::Case1b,
        (false, false, true) => CaseLabel::Case2a,
        (false, true, true) => CaseLabel::Case2b,
        (true, false, false) => CaseLabel::Case3a,
        (true, true, false) => CaseLabel::Case3b,
        (true, false, true) => CaseLabel::Case4a,
        (true, true, true) => CaseLabel::Case4b,
    }
}

/// Solution component of the reduced system in `(r1, r2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Branch {
    /// Every `(r1, r2)` solves the system.
    Plane,
    /// `r2` fixed, `r1` free.
    FixedR2 {
        r2: C64,
    },
    /// `r1 = -(p0 + p1 r2) / (q0 + q1 r2)`.
    Curve {
        p: [f64; 2],
        q: [f64; 2],
    },
    Point {
        r1: C64,
        r2: C64,
    },
}

impl Branch {
    /// A point on the branch for parameter `t`, or `None` where the branch
    /// hits `r1 = 0`, `r2 = 0` or a pole.
    pub fn sample(&self, t: C64) -> Option<(C64, C64)> {
        let (r1, r2) = match *self {
            Branch::Plane => (t, t * t + 1.0),
            Branch::FixedR2 { r2 } => (t, r2),
            Branch::Curve { p, q } => {
                let den = q[0] + t * q[1];
                if den.norm() < ROOT_TOL {
                    return None;
                }
                (-(p[0] + t * p[1]) / den, t)
            }
            Branch::Point { r1, r2 } => (r1, r2),
        };
        (r1.norm() > ROOT_TOL && r2.norm() > ROOT_TOL).then_some((r1, r2))
    }

    pub fn contains(&self, r1: C64, r2: C64, tol: f64) -> bool {
        match *self {
            Branch::Plane => true,
            Branch::FixedR2 { r2: s } => (r2 - s).norm() <= tol,
            Branch::Curve { p, q } => (p[0] + r2 * p[1] + r1 * (q[0] + r2 * q[1])).norm() <= tol,
            Branch::Point { r1: a, r2: b } => (r1 - a).norm() <= tol && (r2 - b).norm() <= tol,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseEntry {
    pub shape: Shape,
    pub label: CaseLabel,
    /// Distinct rows `[ab, a'b', ab', a'b]`, normalised by their gcd and sign.
    pub rows: Vec<[i64; 4]>,
    /// Non-monomial solutions, empty when only monomial pairs occur.
    pub branches: Vec<Branch>,
    /// `(c, 0)` is a pair, read off from the rows.
    pub single_element: bool,
    /// `(c, 0)` is a pair according to the parity rule.
    pub single_element_predicted: bool,
}

impl CaseEntry {
    pub fn admits_non_monomial(&self) -> bool {
        !self.branches.is_empty()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rows of the homogeneous system for a shape.
pub fn shape_rows(s: &Shape) -> Vec<[i64; 4]> {
    let n = s.dim();
    let (bi, bj, bk) = s.blades();
    let gk = Multivector::from_blade(n, bk, 1.0);
    let x = Multivector::from_blade(n, bi, 1.0) * &gk;
    let y = Multivector::from_blade(n, bj, 1.0) * &gk;
    let xy = x.anticommutator(&y);
    let mut rows = BTreeSet::new();
    for mu in 0..n {
        let e = Multivector::basis_vector(n, mu);
        let terms = [
            &xy * &e,
            &e * &xy,
            (&x * &e * &y).scale(-2.0),
            (&y * &e * &x).scale(-2.0),
        ];
        let mut support = BTreeSet::new();
        for t in &terms {
            support.extend(t.terms().map(|(b, _)| b));
        }
        for blade in support {
            let mut row = [0i64; 4];
            for (slot, t) in row.iter_mut().zip(&terms) {
                *slot = t.coeff(blade).re.round() as i64;
            }
            let g = row.iter().fold(0, |g, &v| gcd(g, v));
            if g == 0 {
                continue;
            }
            let lead = *row.iter().find(|&&v| v != 0).unwrap_or(&1);
            let sgn = lead.signum();
            rows.insert(row.map(|v| v / g * sgn));
        }
    }
    rows.into_iter().collect()
}

type Lin = [f64; 2];

fn eval(p: Lin, t: C64) -> C64 {
    t * p[1] + p[0]
}

fn lin_roots(p: Lin) -> Vec<C64> {
    if p[1] != 0.0 {
        vec![C64::new(-p[0] / p[1], 0.0)]
    } else {
        Vec::new()
    }
}

fn quad_roots(a: f64, b: f64, c: f64) -> Vec<C64> {
    if a.abs() < ROOT_TOL {
        return lin_roots([c, b]);
    }
    let disc = C64::new(b * b - 4.0 * a * c, 0.0).sqrt();
    vec![(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)]
}

/// Non-monomial solution components of a row system with `r1 r2 != 0`.
pub fn solve_rows(rows: &[[i64; 4]]) -> Vec<Branch> {
    if rows.is_empty() {
        return vec![Branch::Plane];
    }
    // P_k + r1 Q_k = 0 with P_k = p + s r2, Q_k = t + q r2
    let pq: Vec<(Lin, Lin)> = rows
        .iter()
        .map(|r| {
            let f = r.map(|v| v as f64);
            ([f[0], f[2]], [f[3], f[1]])
        })
        .collect();
    let vanish = |t: C64| {
        pq.iter()
            .all(|(p, q)| eval(*p, t).norm() < ROOT_TOL && eval(*q, t).norm() < ROOT_TOL)
    };
    let mut out = Vec::new();
    let mut lines: Vec<C64> = Vec::new();
    for (p, q) in &pq {
        for t in lin_roots(*p).into_iter().chain(lin_roots(*q)) {
            if t.norm() > ROOT_TOL && vanish(t) && !lines.iter().any(|s| (s - t).norm() < ROOT_TOL)
            {
                lines.push(t);
            }
        }
    }
    for &t in &lines {
        out.push(Branch::FixedR2 { r2: t });
    }
    // cross polynomials P_k Q_l - P_l Q_k as coefficient triples in r2
    let mut cross = Vec::new();
    for (a, (p1, q1)) in pq.iter().enumerate() {
        for (p2, q2) in &pq[a + 1..] {
            let c = [
                p1[0] * q2[0] - p2[0] * q1[0],
                p1[0] * q2[1] + p1[1] * q2[0] - p2[0] * q1[1] - p2[1] * q1[0],
                p1[1] * q2[1] - p2[1] * q1[1],
            ];
            if c.iter().any(|v| v.abs() > ROOT_TOL) {
                cross.push(c);
            }
        }
    }
    let on_line = |r2: C64| lines.iter().any(|s| (s - r2).norm() < 1e-9);
    if cross.is_empty() {
        // rows are proportional; reduce one nonzero row by its common root
        let Some(&(mut p, mut q)) = pq
            .iter()
            .find(|(p, q)| p.iter().chain(q).any(|v| *v != 0.0))
        else {
            return vec![Branch::Plane];
        };
        if !lines.is_empty() {
            // both P and Q are multiples of (r2 - t)
            p = [p[1], 0.0];
            q = [q[1], 0.0];
        }
        if p.iter().all(|v| *v == 0.0) {
            return out;
        }
        if q.iter().all(|v| *v == 0.0) {
            for t in lin_roots(p) {
                if t.norm() > ROOT_TOL && !on_line(t) {
                    out.push(Branch::FixedR2 { r2: t });
                }
            }
            return out;
        }
        out.push(Branch::Curve { p, q });
        return out;
    }
    let [c0, c1, c2] = cross[0];
    let mut seen: Vec<(C64, C64)> = Vec::new();
    for t in quad_roots(c2, c1, c0) {
        if t.norm() < ROOT_TOL || on_line(t) {
            continue;
        }
        if !cross
            .iter()
            .all(|c| (t * t * c[2] + t * c[1] + c[0]).norm() < 1e-9)
        {
            continue;
        }
        let Some(r1) = pq.iter().find_map(|(p, q)| {
            let qt = eval(*q, t);
            (qt.norm() > ROOT_TOL).then(|| -eval(*p, t) / qt)
        }) else {
            continue;
        };
        let ok = pq
            .iter()
            .all(|(p, q)| (eval(*p, t) + r1 * eval(*q, t)).norm() < 1e-9);
        if ok
            && r1.norm() > ROOT_TOL
            && !seen
                .iter()
                .any(|(a, b)| (a - r1).norm() + (b - t).norm() < 1e-9)
        {
            seen.push((r1, t));
            out.push(Branch::Point { r1, r2: t });
        }
    }
    out
}

/// Shapes with `|I| <= |J|` when `I` is nonempty, `J` nonempty, and their case data.
pub fn enumerate_two_monomial_cases(n: usize) -> Result<Vec<CaseEntry>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { dim: n, min: 2 });
    }
    if n > 6 {
        return Err(Error::DimensionTooLarge { dim: n, max: 6 });
    }
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 1..=n - i {
            if i > 0 && i > j {
                continue;
            }
            for k in 0..=n - i - j {
                let shape = Shape {
                    i,
                    j,
                    k,
                    complement: n - i - j - k,
                };
                let rows = shape_rows(&shape);
                out.push(CaseEntry {
                    shape,
                    label: classify_shape(&shape),
                    branches: solve_rows(&rows),
                    single_element: rows.iter().all(|r| r[0] == 0),
                    single_element_predicted: shape.single_element_sign() == -1,
                    rows,
                });
            }
        }
    }
    Ok(out)
}

/// `(c, d)` for a shape with `a = b = 1`, `a' = r1`, `b' = r2`.
pub fn instantiate(
    shape: &Shape,
    alpha: C64,
    beta: C64,
    r1: C64,
    r2: C64,
) -> (Multivector, Multivector) {
    let n = shape.dim();
    let (bi, bj, bk) = shape.blades();
    let gk = Multivector::from_blade(n, bk, 1.0);
    let x = Multivector::from_blade(n, bi, 1.0) * &gk;
    let y = Multivector::from_blade(n, bj, 1.0) * &gk;
    let c = x.scale(alpha) + y.scale(beta);
    let d = x.scale(alpha * r1) + y.scale(beta * r2);
    (c, d)
}
