//! Constructive search for pairs realising a given symmetric map, and the
//! case analysis of two-monomial pairs.

mod cases;

pub use cases::{
    classify_shape, enumerate_two_monomial_cases, instantiate, shape_rows, solve_rows, Branch,
    CaseEntry, CaseLabel, Shape,
};

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_8;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clifford::{Blade, Multivector, C64};
use crate::error::{Error, Result};
use crate::gamma::MAX_REP_DIM;
use crate::linalg::{RMatrix, SymmetricMap, CLUSTER_TOL};
use crate::pairs::{check_generalized, generalized_elements, make_linear, Family, QuadraticPair};

/// Tolerance on `|B_pair - B| / max(1, |B|)` for returned pairs.
pub const SEARCH_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ansatz {
    Monomial,
    PseudoMonomial,
    Linear,
    Generalized,
    All,
}

impl FromStr for Ansatz {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "monomial" => Ansatz::Monomial,
            "pseudo-monomial" => Ansatz::PseudoMonomial,
            "linear" => Ansatz::Linear,
            "generalized" => Ansatz::Generalized,
            "all" => Ansatz::All,
            _ => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("unknown ansatz {s:?}"),
                })
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchHit {
    pub family: Family,
    pub pair: QuadraticPair,
    /// `|B_pair - B| / max(1, |B|)`.
    pub residual: f64,
    /// Coefficients in the eigenframe of `B`.
    pub parameters: BTreeMap<String, C64>,
    /// One-based eigenvector indices of the blades used.
    pub index_sets: Vec<Vec<usize>>,
    /// Present for continuous families, where a representative is returned.
    pub descriptor: Option<String>,
}

/// Representative of `{z, -z}`: nonnegative real part, then nonnegative imaginary part.
pub fn canonical_sign(z: C64) -> f64 {
    if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
        -1.0
    } else {
        1.0
    }
}

fn csqrt(x: f64) -> C64 {
    C64::new(x, 0.0).sqrt()
}

struct Ctx<'a> {
    b: &'a SymmetricMap,
    frame: RMatrix,
    parts: Vec<Blade>,
    values: Vec<f64>,
    out: Vec<SearchHit>,
}

impl Ctx<'_> {
    fn n(&self) -> usize {
        self.b.dim()
    }

    fn push(
        &mut self,
        family: Family,
        c: Multivector,
        d: Multivector,
        parameters: Vec<(&str, C64)>,
        blades: &[Blade],
        descriptor: Option<String>,
    ) -> Result<()> {
        let lead = parameters.first().map(|p| p.1).unwrap_or_default();
        let sgn = canonical_sign(lead);
        let (c, d) = (
            c.scale(sgn).transform(&self.frame),
            d.scale(sgn).transform(&self.frame),
        );
        let pair = QuadraticPair::new(c, d)?.with_family(family);
        let Some(found) = pair.b() else {
            return Ok(());
        };
        let unit = self.b.matrix().amax().max(1.0);
        let residual = (found.matrix() - self.b.matrix()).amax() / unit;
        if !pair.is_verified() || residual > SEARCH_TOL {
            return Ok(());
        }
        let dup = self.out.iter().any(|h| {
            h.family == family
                && h.pair.c.approx_eq(&pair.c, 1e-12)
                && h.pair.d.approx_eq(&pair.d, 1e-12)
        });
        if dup {
            return Ok(());
        }
        self.out.push(SearchHit {
            family,
            pair,
            residual,
            parameters: parameters
                .into_iter()
                .map(|(k, v)| (k.to_string(), v * sgn))
                .collect(),
            index_sets: blades
                .iter()
                .map(|b| b.indices().iter().map(|i| i + 1).collect())
                .collect(),
            descriptor,
        });
        Ok(())
    }

    fn monomial(&mut self) -> Result<()> {
        let n = self.n();
        match self.parts.len() {
            1 => {
                let root = csqrt(self.values[0]);
                let c = Multivector::scalar(n, root);
                let d = Multivector::zero(n);
                self.push(Family::Monomial, c, d, vec![("alpha", root)], &[], None)
            }
            2 => {
                for k in 0..2 {
                    let blade = self.parts[k];
                    if n % 2 == 1 && 2 * blade.grade() > n {
                        continue;
                    }
                    let sigma = blade.square_sign();
                    let eps = if blade.grade().is_multiple_of(2) {
                        1.0
                    } else {
                        -1.0
                    };
                    let x = csqrt(sigma * self.values[k]);
                    let y0 = csqrt(sigma * self.values[1 - k]);
                    for y in [y0, -y0] {
                        let alpha = (x + y) * 0.5;
                        let beta = (x - y) * (0.5 * eps);
                        let c = Multivector::from_blade(n, blade, alpha);
                        let d = Multivector::from_blade(n, blade, beta);
                        self.push(
                            Family::Monomial,
                            c,
                            d,
                            vec![("alpha", alpha), ("beta", beta)],
                            &[blade],
                            None,
                        )?;
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn pseudo(&mut self) -> Result<()> {
        let n = self.n();
        if n % 2 == 1 || self.parts.len() != 2 {
            return Ok(());
        }
        let g = Multivector::volume_element(n);
        let one = Multivector::scalar(n, 1.0);
        for k in 0..2 {
            let blade = self.parts[k];
            let gi = Multivector::from_blade(n, blade, 1.0);
            let sigma = blade.square_sign();
            let (li, lo) = (self.values[k], self.values[1 - k]);
            if blade.grade().is_multiple_of(2) {
                let (a_in, a_out) = (csqrt(sigma * li) * 0.5, csqrt(sigma * lo) * 0.5);
                for (sign, alpha, beta) in [(1.0, a_in, a_out), (-1.0, a_out, a_in)] {
                    let c = (&one * alpha + &g * beta) * &gi;
                    let d = c.scale(sign);
                    let family = Family::PseudoMonomialEven;
                    let tag = C64::new(sign, 0.0);
                    self.push(
                        family,
                        c,
                        d,
                        vec![("alpha", alpha), ("beta", beta), ("sign", tag)],
                        &[blade],
                        None,
                    )?;
                }
            } else {
                let phi = FRAC_PI_8;
                let f = (2.0 * phi).cos();
                let u = csqrt(sigma * li / f);
                let w = csqrt(sigma * lo / f);
                let alpha = (u + w) * 0.5;
                let beta = (w - u) * 0.5;
                let c = (&one * (alpha * phi.cos()) + &g * (alpha * phi.sin())) * &gi;
                let d = (&one * (beta * phi.cos()) - &g * (beta * phi.sin())) * &gi;
                self.push(
                    Family::PseudoMonomialOdd,
                    c,
                    d,
                    vec![
                        ("alpha", alpha),
                        ("beta", beta),
                        ("phi", C64::new(phi, 0.0)),
                        ("psi", C64::default()),
                    ],
                    &[blade],
                    Some(
                        "alpha^2 - beta^2 and (alpha+beta)^2 cos(2 phi) fixed; \
                         phi, psi range over a circle family, representative phi = pi/8, psi = 0"
                            .into(),
                    ),
                )?;
            }
        }
        Ok(())
    }

    fn linear(&mut self) -> Result<()> {
        let n = self.n();
        if self.parts.len() == 1 {
            let root = csqrt(self.values[0]);
            let c = Multivector::zero(n);
            let d = Multivector::scalar(n, root);
            self.push(Family::Linear, c, d, vec![("beta0", root)], &[], None)?;
        }
        let unit = self.b.matrix().amax().max(f64::MIN_POSITIVE);
        let ok = self
            .b
            .clusters()
            .iter()
            .all(|cl| cl.value.abs() <= CLUSTER_TOL * unit || cl.multiplicity() % 2 == 0);
        if ok {
            let pair = make_linear(self.b)?;
            let residual = (pair
                .b()
                .map_or(f64::INFINITY, |f| (f.matrix() - self.b.matrix()).amax()))
                / self.b.matrix().amax().max(1.0);
            if pair.is_verified() && residual <= SEARCH_TOL {
                self.out.push(SearchHit {
                    family: Family::Linear,
                    pair,
                    residual,
                    parameters: BTreeMap::new(),
                    index_sets: Vec::new(),
                    descriptor: Some("bivector A with A^2 = B".into()),
                });
            }
        }
        Ok(())
    }

    fn generalized(&mut self) -> Result<()> {
        let n = self.n();
        let r = self.parts.len();
        if r < 2 {
            return Ok(());
        }
        let odd: Vec<usize> = (0..r).filter(|&a| self.parts[a].grade() % 2 == 1).collect();
        let mut coeffs = vec![C64::default(); r];
        let mut hats = vec![C64::default(); r];
        let scaled = |a: usize| self.parts[a].square_sign() * self.values[a] / 4.0;
        if n % 2 == 1 || odd.is_empty() {
            for a in 0..r {
                coeffs[a] = csqrt(scaled(a));
            }
        } else if odd.len() == 2 {
            // c_x c_y = h_x h_y with h_x = m c_x, c_y = m h_y
            let m = 2.0;
            for a in 0..r {
                if !odd.contains(&a) {
                    coeffs[a] = csqrt(scaled(a));
                }
            }
            let (x, y) = (odd[0], odd[1]);
            coeffs[x] = csqrt(scaled(x) / (1.0 - m * m));
            hats[x] = coeffs[x] * m;
            hats[y] = csqrt(scaled(y) / (m * m - 1.0));
            coeffs[y] = hats[y] * m;
        }
        if check_generalized(n, &self.parts, &coeffs, &hats).is_err() {
            return Ok(());
        }
        let (c, d) = generalized_elements(n, &self.parts, &coeffs, &hats);
        let mut params: Vec<(String, C64)> = Vec::new();
        for a in 0..r {
            params.push((format!("c{}", a + 1), coeffs[a]));
            if hats[a] != C64::default() {
                params.push((format!("h{}", a + 1), hats[a]));
            }
        }
        let names: Vec<String> = params.iter().map(|p| p.0.clone()).collect();
        let param_refs: Vec<(&str, C64)> = names
            .iter()
            .zip(&params)
            .map(|(k, p)| (k.as_str(), p.1))
            .collect();
        let parts = self.parts.clone();
        self.push(Family::GeneralizedMonomial, c, d, param_refs, &parts, None)
    }
}

/// Pairs from the constructive families whose map is `B`.
pub fn search_pairs_for_b(b: &SymmetricMap, ansatz: Ansatz) -> Result<Vec<SearchHit>> {
    let n = b.dim();
    if n > MAX_REP_DIM {
        return Err(Error::DimensionTooLarge {
            dim: n,
            max: MAX_REP_DIM,
        });
    }
    let mut frame = b.eigenvectors().clone();
    if n > 0 && frame.determinant() < 0.0 {
        let mut last = frame.column_mut(n - 1);
        last *= -1.0;
    }
    let mut ctx = Ctx {
        b,
        frame,
        parts: b
            .clusters()
            .iter()
            .map(|cl| Blade::from_indices(&cl.columns))
            .collect(),
        values: b.clusters().iter().map(|cl| cl.value).collect(),
        out: Vec::new(),
    };
    let all = ansatz == Ansatz::All;
    if all || ansatz == Ansatz::Monomial {
        ctx.monomial()?;
    }
    if all || ansatz == Ansatz::PseudoMonomial {
        ctx.pseudo()?;
    }
    if all || ansatz == Ansatz::Linear {
        ctx.linear()?;
    }
    if all || ansatz == Ansatz::Generalized {
        ctx.generalized()?;
    }
    Ok(ctx.out)
}
