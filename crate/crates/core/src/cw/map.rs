//! Clifford maps `rho: g -> Cl(W)` and the curvature of the associated
//! invariant connection.
//!
//! With `b' = bar(b)` and `c' = bar(c)`:
//!
//! ```text
//! rho(e+) = [[0, sqrt2 a], [0, 0]]
//! rho(e-) = [[c', sqrt2 e], [sqrt2 b', d]]
//! rho(w)  = [[w b', -s_{c',d}(w) / sqrt2], [0, -b' w]]
//! rho(v*) = [[0, B v / sqrt2], [0, 0]]
//! rho(A)  = [[A^, 0], [0, A^]]        A^ the spin image of A in so(B)
//! ```
//!
//! The curvature is `R(x, y) = [rho(x), rho(y)] - rho([x, y])`.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::block::CwElement;
use super::{basis, cw_bracket, CwVector};
use crate::clifford::{Multivector, C64};
use crate::error::{Error, Result};
use crate::linalg::{to_complex, SymmetricMap};
use crate::pairs::{extract_b, q_map, s_map, skew_to_bivector, PairStatus, Sign};

/// Relative tolerance of flatness and validation reports.
pub const FLAT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct CliffordMapParams {
    pub bmap: SymmetricMap,
    pub a: Multivector,
    pub b: Multivector,
    pub c: Multivector,
    pub d: Multivector,
    pub e: Multivector,
}

impl CliffordMapParams {
    /// All Clifford parameters zero.
    pub fn zero(bmap: SymmetricMap) -> Self {
        let z = Multivector::zero(bmap.dim());
        CliffordMapParams {
            bmap,
            a: z.clone(),
            b: z.clone(),
            c: z.clone(),
            d: z.clone(),
            e: z,
        }
    }

    pub fn dim(&self) -> usize {
        self.bmap.dim()
    }

    fn check(&self) -> Result<()> {
        let n = self.dim();
        for m in [&self.a, &self.b, &self.c, &self.d, &self.e] {
            if m.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.dim(),
                });
            }
        }
        Ok(())
    }

    /// Scale used to turn relative tolerances into absolute ones.
    pub fn scale(&self) -> f64 {
        let m = [&self.a, &self.b, &self.c, &self.d, &self.e]
            .iter()
            .map(|x| x.max_abs())
            .fold(self.bmap.matrix().amax().sqrt(), f64::max);
        1.0 + m * m
    }
}

/// Residuals of the conditions under which `rho` is a Clifford map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Validation {
    /// `max |(G_mu b' G_nu + G_nu b' G_mu) / 2 - delta_{mu nu} a|`.
    pub symmetric: f64,
    /// `|a - (1/n) sum_mu G_mu b' G_mu|`.
    pub average: f64,
    /// `max |[rho(v*), rho(w)] + <Bv, w> rho(e+)|` over basis vectors.
    pub equivariance: f64,
    pub tol: f64,
    pub passes: bool,
}

/// Per-condition residuals of the curvature on `W x W`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub residuals: BTreeMap<String, f64>,
    /// Largest block of `R(x, y)` over basis pairs of `W`.
    pub sweep: f64,
    /// Same sweep extended by `V*` and `so(B)`.
    pub extended_sweep: f64,
    pub tol: f64,
    pub flat: bool,
    pub validation: Validation,
}

#[derive(Clone, Debug)]
pub struct CliffordMap {
    params: CliffordMapParams,
    plus: CwElement,
    minus: CwElement,
    v: Vec<CwElement>,
    vstar: Vec<CwElement>,
}

fn gammas(n: usize) -> Vec<Multivector> {
    (0..n).map(|mu| Multivector::basis_vector(n, mu)).collect()
}

impl CliffordMap {
    pub fn new(params: CliffordMapParams) -> Result<Self> {
        params.check()?;
        let n = params.dim();
        let z = Multivector::zero(n);
        let bbar = params.b.bar();
        let cbar = params.c.bar();
        let plus = CwElement::new(z.clone(), params.a.scale(SQRT_2), z.clone(), z.clone());
        let minus = CwElement::new(
            cbar.clone(),
            params.e.scale(SQRT_2),
            bbar.scale(SQRT_2),
            params.d.clone(),
        );
        let v = gammas(n)
            .iter()
            .map(|w| {
                CwElement::new(
                    w * &bbar,
                    s_map(&cbar, &params.d, w).scale(-1.0 / SQRT_2),
                    z.clone(),
                    (&bbar * w).scale(-1.0),
                )
            })
            .collect();
        let bm = params.bmap.matrix();
        let vstar = (0..n)
            .map(|mu| {
                let col: Vec<f64> = bm.column(mu).iter().copied().collect();
                let bv = Multivector::real_vector(n, &col);
                CwElement::new(z.clone(), bv.scale(1.0 / SQRT_2), z.clone(), z.clone())
            })
            .collect();
        Ok(CliffordMap {
            params,
            plus,
            minus,
            v,
            vstar,
        })
    }

    pub fn params(&self) -> &CliffordMapParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn apply(&self, x: &CwVector) -> Result<CwElement> {
        let n = self.dim();
        if x.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.dim(),
            });
        }
        let mut out = CwElement::zero(n);
        let mut acc = |k: f64, m: &CwElement| {
            if k != 0.0 {
                out = out.add(&m.scale(k));
            }
        };
        acc(x.plus, &self.plus);
        acc(x.minus, &self.minus);
        for mu in 0..n {
            acc(x.v[mu], &self.v[mu]);
            acc(x.vstar[mu], &self.vstar[mu]);
        }
        if x.h.amax() > 0.0 {
            let spin = skew_to_bivector(&to_complex(&x.h));
            out = out.add(&CwElement::diag(spin.clone(), spin));
        }
        Ok(out)
    }

    pub fn curvature(&self, x: &CwVector, y: &CwVector) -> Result<CwElement> {
        let rx = self.apply(x)?;
        let ry = self.apply(y)?;
        let xy = cw_bracket(x, y, &self.params.bmap)?;
        Ok(rx.commutator(&ry).sub(&self.apply(&xy)?))
    }

    /// Largest curvature block over basis pairs of `W`, or of `g + so(B)`
    /// when `extended` is set.
    pub fn curvature_sweep(&self, extended: bool) -> Result<f64> {
        let n = self.dim();
        let mut elems = basis(&self.params.bmap, extended);
        if !extended {
            elems.truncate(n + 2);
        }
        let mut worst: f64 = 0.0;
        for (i, x) in elems.iter().enumerate() {
            for y in &elems[i + 1..] {
                worst = worst.max(self.curvature(x, y)?.max_abs());
            }
        }
        Ok(worst)
    }

    pub fn validate(&self) -> Result<Validation> {
        let p = &self.params;
        let n = p.dim();
        let g = gammas(n);
        let bbar = p.b.bar();
        let mut symmetric: f64 = 0.0;
        let mut avg = Multivector::zero(n);
        for mu in 0..n {
            for nu in mu..n {
                let mut r = (&g[mu] * &bbar * &g[nu] + &g[nu] * &bbar * &g[mu]).scale(0.5);
                if mu == nu {
                    r -= &p.a;
                }
                symmetric = symmetric.max(r.max_abs());
            }
            avg += &(&g[mu] * &bbar * &g[mu]);
        }
        let average = (&p.a - avg.scale(1.0 / n as f64)).max_abs();
        let mut equivariance: f64 = 0.0;
        for mu in 0..n {
            for nu in 0..n {
                let r = self.curvature(&CwVector::basis_vstar(n, mu), &CwVector::basis_v(n, nu))?;
                equivariance = equivariance.max(r.max_abs());
            }
        }
        let tol = FLAT_TOL * p.scale();
        Ok(Validation {
            symmetric,
            average,
            equivariance,
            tol,
            passes: symmetric <= tol && average <= tol && equivariance <= tol,
        })
    }

    /// Residual of every block condition contained in `R = 0` on `W x W`.
    pub fn flatness_report(&self) -> Result<FlatnessReport> {
        let p = &self.params;
        let n = p.dim();
        let g = gammas(n);
        let a = &p.a;
        let bb = p.b.bar();
        let cb = p.c.bar();
        let d = &p.d;
        let e = &p.e;
        let mut res: BTreeMap<String, f64> = BTreeMap::new();
        let mut put = |k: &str, v: f64| {
            let slot = res.entry(k.to_string()).or_insert(0.0);
            *slot = slot.max(v);
        };
        put("center/c-a-minus-a-d", (&cb * a - a * d).max_abs());
        put("center/a-b", (a * &bb).max_abs());
        put("center/b-a", (&bb * a).max_abs());
        put("center-vector/a-b-v", 0.0);
        put("vector-vector/v-b-w-b", 0.0);
        put("vector-vector/b-v-b-w", 0.0);
        put("vector-vector/mixed", 0.0);
        let bcd = &bb * &cb + d * &bb;
        let ebbe = (e * &bb, (&bb * e).scale(-1.0));
        let bm = p.bmap.matrix();
        for mu in 0..n {
            let w = &g[mu];
            put("center-vector/a-b-v", (a * &bb * w + w * &bb * a).max_abs());
            put(
                "null-vector/upper-left",
                ((&cb * w * &bb).scale(2.0) - w * &bcd).max_abs(),
            );
            put(
                "null-vector/lower-right",
                ((&bb * w * d).scale(2.0) - &bcd * w).max_abs(),
            );
            put("null-vector/b-v-b", (&bb * w * &bb).max_abs());
            let col: Vec<f64> = bm.column(mu).iter().copied().collect();
            let bw = Multivector::real_vector(n, &col);
            let quad = q_map(&cb, d, w) + s_map(&ebbe.0, &ebbe.1, w).scale(2.0) + bw;
            put("null-vector/quadratic", quad.max_abs());
            for nu in mu + 1..n {
                let v = &g[nu];
                put(
                    "vector-vector/v-b-w-b",
                    (w * &bb * v * &bb - v * &bb * w * &bb).max_abs(),
                );
                put(
                    "vector-vector/b-v-b-w",
                    (&bb * w * &bb * v - &bb * v * &bb * w).max_abs(),
                );
                let sw = s_map(&cb, d, w);
                let sv = s_map(&cb, d, v);
                let mixed = w * &bb * &sv - v * &bb * &sw - &sw * &bb * v + &sv * &bb * w;
                put("vector-vector/mixed", mixed.max_abs());
            }
        }
        let tol = FLAT_TOL * p.scale();
        let sweep = self.curvature_sweep(false)?;
        let extended_sweep = self.curvature_sweep(true)?;
        let flat = res.values().all(|&r| r <= tol);
        Ok(FlatnessReport {
            residuals: res,
            sweep,
            extended_sweep,
            tol,
            flat,
            validation: self.validate()?,
        })
    }
}

/// Flat map with `a = b = 0` from a pair `(bar(c), d)` representing `-B`.
pub fn build_flat_rep_alphazero(
    c: &Multivector,
    d: &Multivector,
    e: &Multivector,
    bmap: &SymmetricMap,
) -> Result<CliffordMap> {
    let n = bmap.dim();
    for m in [c, d, e] {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.dim(),
            });
        }
    }
    let ex = extract_b(&c.bar(), d)?;
    let residual = match &ex.b {
        Some(b) => (b.matrix() + bmap.matrix()).amax(),
        None => f64::INFINITY,
    };
    let scale = 1.0 + bmap.matrix().amax();
    if ex.status != PairStatus::Verified || residual > FLAT_TOL * scale {
        return Err(Error::PairNotAssociatedToMinusB {
            status: ex.status.to_string(),
            residual,
        });
    }
    let mut params = CliffordMapParams::zero(bmap.clone());
    params.c = c.clone();
    params.d = d.clone();
    params.e = e.clone();
    CliffordMap::new(params)
}

/// `(Pi+, Pi-)` with `Pi+- = (1 +- G*) / 2`.
pub fn chiral_projectors(n: usize) -> (Multivector, Multivector) {
    let one = Multivector::scalar(n, 0.5);
    let g = Multivector::volume_element(n).scale(0.5);
    (&one + &g, &one - &g)
}

/// Parameters of the flat maps with nonzero central action; `B = -2 lambda`.
///
/// With `P = Pi+-`, `M = Pi-+` (upper/lower sign) and `s = sqrt(2 (alpha beta + lambda))`:
///
/// ```text
/// a = alpha P           b = -alpha M
/// bar(c) = rho0 - s M + c_off      c_off = P c_off M
/// d      = rho0 + s M + d_off      d_off = M d_off P
/// e      = beta M + e_pp + e_off   e_pp = P e_pp P,  e_off = P e_off M + M e_off P
/// ```
///
/// Flatness needs `s s_{c_off, d_off}(v) = -2 alpha s_{P e_off M, -M e_off P}(v)`.
#[derive(Clone, Debug)]
pub struct AlphaNonzeroParams {
    pub dim: usize,
    pub alpha: f64,
    pub beta: f64,
    pub rho0: C64,
    pub lambda: f64,
    pub sign: Sign,
    pub e_pp: Multivector,
    pub c_offdiag: Multivector,
    pub d_offdiag: Multivector,
    pub e_offdiag: Multivector,
}

impl AlphaNonzeroParams {
    /// All offdiagonal blocks and `e_pp` zero.
    pub fn plain(dim: usize, alpha: f64, beta: f64, rho0: C64, lambda: f64, sign: Sign) -> Self {
        let z = Multivector::zero(dim);
        AlphaNonzeroParams {
            dim,
            alpha,
            beta,
            rho0,
            lambda,
            sign,
            e_pp: z.clone(),
            c_offdiag: z.clone(),
            d_offdiag: z.clone(),
            e_offdiag: z,
        }
    }

    /// `(P, M)` for the chosen sign.
    pub fn projectors(&self) -> (Multivector, Multivector) {
        let (pp, pm) = chiral_projectors(self.dim);
        match self.sign {
            Sign::Plus => (pp, pm),
            Sign::Minus => (pm, pp),
        }
    }

    /// Principal square root of `2 (alpha beta + lambda)`.
    pub fn root(&self) -> C64 {
        C64::new(2.0 * (self.alpha * self.beta + self.lambda), 0.0).sqrt()
    }
}

/// `lambda` with `B = -2 lambda`; fails unless `B` is scalar.
pub fn lambda_for(bmap: &SymmetricMap) -> Result<f64> {
    bmap.scalar_value()
        .map(|l| -0.5 * l)
        .ok_or(Error::NonScalarB)
}

/// Offdiagonal blocks of `e` solving the flatness constraint for given
/// `c_off`, `d_off`: `(P e M, M e P) = (-s/(2 alpha) c_off, s/(2 alpha) d_off)`.
pub fn e_offdiag_solution(p: &AlphaNonzeroParams) -> Result<Multivector> {
    if p.alpha == 0.0 {
        return Err(Error::ConstraintViolated(
            "offdiagonal e blocks are determined only for alpha != 0".into(),
        ));
    }
    let k = p.root() / (2.0 * p.alpha);
    Ok(p.c_offdiag.scale(-k) + p.d_offdiag.scale(k))
}

fn check_block(name: &str, x: &Multivector, left: &Multivector, right: &Multivector) -> Result<()> {
    let r = (left * x * right - x).max_abs();
    if r > FLAT_TOL * (1.0 + x.max_abs()) {
        return Err(Error::ConstraintViolated(format!(
            "{name} has the wrong half-spinor block structure (residual {r:e})"
        )));
    }
    Ok(())
}

pub fn build_flat_rep_alphanotzero(p: &AlphaNonzeroParams) -> Result<CliffordMap> {
    let n = p.dim;
    if n % 2 == 1 {
        return Err(Error::OddDimension { dim: n });
    }
    for m in [&p.e_pp, &p.c_offdiag, &p.d_offdiag, &p.e_offdiag] {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.dim(),
            });
        }
    }
    let (pp, mm) = p.projectors();
    check_block("c_offdiag", &p.c_offdiag, &pp, &mm)?;
    check_block("d_offdiag", &p.d_offdiag, &mm, &pp)?;
    check_block("e_pp", &p.e_pp, &pp, &pp)?;
    let e_pm = &pp * &p.e_offdiag * &mm;
    let e_mp = &mm * &p.e_offdiag * &pp;
    let stray = (&e_pm + &e_mp - &p.e_offdiag).max_abs();
    if stray > FLAT_TOL * (1.0 + p.e_offdiag.max_abs()) {
        return Err(Error::ConstraintViolated(format!(
            "e_offdiag has diagonal half-spinor blocks (residual {stray:e})"
        )));
    }
    let s = p.root();
    let scale = 1.0
        + s.norm() * p.c_offdiag.max_abs().max(p.d_offdiag.max_abs())
        + p.alpha.abs() * p.e_offdiag.max_abs();
    for mu in 0..n {
        let v = Multivector::basis_vector(n, mu);
        let lhs = s_map(&p.c_offdiag, &p.d_offdiag, &v).scale(s);
        let rhs = s_map(&e_pm, &e_mp.scale(-1.0), &v).scale(-2.0 * p.alpha);
        let r = (lhs - rhs).max_abs();
        if r > FLAT_TOL * scale {
            return Err(Error::ConstraintViolated(format!(
                "offdiagonal blocks violate the flatness relation at e_{} (residual {r:e})",
                mu + 1
            )));
        }
    }
    let rho0 = Multivector::scalar(n, p.rho0);
    let cbar = &rho0 - mm.scale(s) + &p.c_offdiag;
    let d = &rho0 + mm.scale(s) + &p.d_offdiag;
    let e = mm.scale(p.beta) + &p.e_pp + &p.e_offdiag;
    let params = CliffordMapParams {
        bmap: SymmetricMap::scalar(n, -2.0 * p.lambda),
        a: pp.scale(p.alpha),
        b: mm.scale(-p.alpha).bar(),
        c: cbar.bar(),
        d,
        e,
    };
    CliffordMap::new(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Blade;
    use crate::pairs::make_monomial;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_map_has_spin_curvature() {
        let b = SymmetricMap::diagonal(&[1.0, 2.0, 3.0]);
        let map = CliffordMap::new(CliffordMapParams::zero(b)).unwrap();
        let r = map
            .curvature(&CwVector::e_minus(3), &CwVector::basis_v(3, 1))
            .unwrap();
        // -rho(e_2*) = -(1/sqrt2) [[0, 2 e_2], [0, 0]]
        let expect = Multivector::basis_vector(3, 1).scale(-2.0 / SQRT_2);
        assert!((r.get(0, 1) - &expect).max_abs() < 1e-14);
        assert!(r.get(0, 0).max_abs() < 1e-14);
    }

    #[test]
    fn monomial_gives_flat_map() {
        let n = 3;
        let blade = Blade::from_indices(&[0]);
        let pair = make_monomial(n, blade, C64::new(2.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        let minus_b = SymmetricMap::new(-pair.b().unwrap().matrix()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let e = sample::multivector(n, &mut rng);
        let map = build_flat_rep_alphazero(&pair.c.bar(), &pair.d, &e, &minus_b).unwrap();
        let rep = map.flatness_report().unwrap();
        assert!(rep.flat, "{:?}", rep.residuals);
        assert!(rep.sweep < 1e-10);
        let wrong = SymmetricMap::new(minus_b.matrix() * 1.01).unwrap();
        assert!(matches!(
            build_flat_rep_alphazero(&pair.c.bar(), &pair.d, &e, &wrong),
            Err(Error::PairNotAssociatedToMinusB { .. })
        ));
    }

    #[test]
    fn special_alphanotzero_choices_are_flat() {
        let lambda = 0.7;
        for sign in [Sign::Plus, Sign::Minus] {
            let p = AlphaNonzeroParams::plain(4, -lambda, 1.0, C64::new(0.0, 0.0), lambda, sign);
            let map = build_flat_rep_alphanotzero(&p).unwrap();
            assert!(map.curvature_sweep(true).unwrap() < 1e-10);
            let p = AlphaNonzeroParams::plain(4, 0.0, 0.0, C64::new(0.0, 0.0), lambda, sign);
            let map = build_flat_rep_alphanotzero(&p).unwrap();
            assert!(map.curvature_sweep(true).unwrap() < 1e-10);
        }
        let p = AlphaNonzeroParams::plain(3, 1.0, 1.0, C64::new(0.0, 0.0), 1.0, Sign::Plus);
        assert_eq!(
            build_flat_rep_alphanotzero(&p).unwrap_err(),
            Error::OddDimension { dim: 3 }
        );
    }
}
