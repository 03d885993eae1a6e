use std::path::Path;

use cliffpair::clifford::{Multivector, C64};
use cliffpair::cw::{check_restriction, projector, CliffordMap, FLAT_TOL};
use cliffpair::gamma::{build_rep, rep_check as check_rep, RepKind};
use cliffpair::linalg::{cmax_abs, CMatrix};
use cliffpair::omega::{classify_distinguished, closing_identities, omega_in_sob, OMEGA_TOL};
use cliffpair::pairs::{classify_family, extract_b_with_tol, EXTRACT_TOL};
use cliffpair::search::SEARCH_TOL;
use cliffpair::{enumerate_two_monomial_cases, search_pairs_for_b, Ansatz, Error};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::io::{complex, complex_rows, read_b, read_pair, read_params, real_rows};
use crate::CliError;

/// Default bound on the representation self-check.
const REP_TOL: f64 = 1e-10;

/// Largest dimension for which `verify` replays `q` in matrices.
const ORACLE_MAX_DIM: usize = 8;

pub struct Output {
    pub value: Value,
    /// Set when an internal consistency check failed.
    pub breach: Option<String>,
}

impl Output {
    fn ok(value: Value) -> Self {
        Output {
            value,
            breach: None,
        }
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// `max_mu |rho(q(e_mu)) - sum_nu M[mu, nu] rho(e_nu)|` in the faithful representation.
fn matrix_oracle(c: &Multivector, d: &Multivector, m: &CMatrix) -> Result<f64, CliError> {
    let n = c.dim();
    let rep = build_rep(n, RepKind::Faithful)?;
    let (rc, rd) = (rep.represent(c), rep.represent(d));
    let (rc2, rd2) = (&rc * &rc, &rd * &rd);
    let mut worst: f64 = 0.0;
    for mu in 0..n {
        let x = rep.generator(mu);
        let q = &rc2 * x + x * &rd2 - (&rc * x * &rd) * C64::new(2.0, 0.0);
        let mut expect = CMatrix::zeros(rep.size(), rep.size());
        for nu in 0..n {
            expect += rep.generator(nu) * m[(mu, nu)];
        }
        worst = worst.max(cmax_abs(&(q - expect)));
    }
    Ok(worst)
}

pub fn verify(path: &Path, tol: Option<f64>) -> Result<Output, CliError> {
    let (c, d) = read_pair(path)?;
    let n = c.dim();
    let ex = extract_b_with_tol(&c, &d, tol.unwrap_or(EXTRACT_TOL))?;
    let families: Vec<String> = classify_family(&c, &d)
        .iter()
        .map(|f| f.to_string())
        .collect();
    let mut out = Map::new();
    out.insert("dim".into(), json!(n));
    out.insert("status".into(), json!(ex.status.to_string()));
    out.insert("family".into(), json!(families[0]));
    out.insert("families".into(), json!(families));
    out.insert(
        "B".into(),
        ex.b.as_ref().map_or(Value::Null, |b| real_rows(b.matrix())),
    );
    out.insert(
        "M".into(),
        ex.matrix.as_ref().map_or(Value::Null, complex_rows),
    );
    out.insert("leak".into(), json!(ex.leak));
    out.insert("asymmetry".into(), json!(ex.asymmetry));
    out.insert("imaginary".into(), json!(ex.imaginary));
    out.insert("tol".into(), json!(ex.tol));
    let mut breach = None;
    if let (Some(m), true) = (&ex.matrix, n <= ORACLE_MAX_DIM) {
        let r = matrix_oracle(&c, &d, m)?;
        out.insert("oracle_residual".into(), json!(r));
        let bound = ex.tol * (1u64 << n) as f64;
        if r > bound {
            breach = Some(format!("matrix oracle residual {r:e} exceeds {bound:e}"));
        }
    }
    Ok(Output {
        value: Value::Object(out),
        breach,
    })
}

pub fn search(path: &Path, ansatz: &str, tol: Option<f64>) -> Result<Output, CliError> {
    let b = read_b(path)?;
    let ansatz: Ansatz = ansatz.parse()?;
    let hits = search_pairs_for_b(&b, ansatz)?;
    let bound = tol.unwrap_or(SEARCH_TOL);
    let mut breach = None;
    let list: Vec<Value> = hits
        .iter()
        .map(|h| {
            if h.residual > bound && breach.is_none() {
                breach = Some(format!(
                    "{} pair misses B by {:e} (bound {bound:e})",
                    h.family, h.residual
                ));
            }
            let params: Map<String, Value> = h
                .parameters
                .iter()
                .map(|(k, z)| (k.clone(), complex(*z)))
                .collect();
            json!({
                "family": h.family.to_string(),
                "c": h.pair.c.to_string(),
                "d": h.pair.d.to_string(),
                "B_check_residual": h.residual,
                "parameters": params,
                "index_sets": h.index_sets,
                "descriptor": h.descriptor,
            })
        })
        .collect();
    Ok(Output {
        value: json!({
            "dim": b.dim(),
            "ansatz": to_json(&ansatz),
            "B": real_rows(b.matrix()),
            "hits": list,
        }),
        breach,
    })
}

pub fn cw_flat(path: &Path, tol: Option<f64>) -> Result<Output, CliError> {
    let map = CliffordMap::new(read_params(path)?)?;
    let report = map.flatness_report()?;
    let abs_tol = tol.unwrap_or(FLAT_TOL) * map.params().scale();
    let flat = report.residuals.values().all(|&r| r <= abs_tol);
    let mut value = to_json(&report);
    value["tol"] = json!(abs_tol);
    value["flat"] = json!(flat);
    value["dim"] = json!(map.dim());
    let breach = (flat != (report.sweep <= abs_tol)).then(|| {
        format!(
            "condition residuals say flat = {flat} but the curvature sweep is {:e}",
            report.sweep
        )
    });
    Ok(Output { value, breach })
}

pub fn cw_restrict(path: &Path, name: &str, tol: Option<f64>) -> Result<Output, CliError> {
    let map = CliffordMap::new(read_params(path)?)?;
    let p = projector(name, map.dim())?;
    let mut report = check_restriction(&map, &p)?;
    if let Some(t) = tol {
        report.tol = t * map.params().scale();
        report.invariant = report.invariance_residual <= report.tol;
        report.representation = report.invariant && report.curvature_residual <= report.tol;
    }
    let mut value = to_json(&report);
    value["projector"] = json!(name);
    value["dim"] = json!(map.dim());
    Ok(Output::ok(value))
}

pub fn omega(pair: &Path, bpath: &Path, tol: Option<f64>) -> Result<Output, CliError> {
    let (c, d) = read_pair(pair)?;
    let b = read_b(bpath)?;
    let mut check = omega_in_sob(&c, &d, &b)?;
    if let Some(t) = tol {
        check.tol = check.tol / OMEGA_TOL * t;
        check.holds = check.worst_norm <= check.tol;
    }
    let mut out = Map::new();
    out.insert("dim".into(), json!(b.dim()));
    out.insert(
        "so_b".into(),
        json!({
            "holds": check.holds,
            "worst_entry": check.worst_entry.map(|(i, j)| [i + 1, j + 1]),
            "worst_norm": check.worst_norm,
            "tol": check.tol,
        }),
    );
    let mut breach = None;
    match classify_distinguished(&c, &d, &b) {
        Ok(cl) => {
            let terms: Vec<Value> = cl
                .terms
                .iter()
                .map(|t| {
                    json!({
                        "clusters": t.clusters.iter().map(|k| k + 1).collect::<Vec<_>>(),
                        "c": complex(t.c),
                        "d": complex(t.d),
                    })
                })
                .collect();
            out.insert(
                "classification".into(),
                json!({
                    "template": cl.template.to_string(),
                    "matches": cl.matches(),
                    "violation": cl.violation,
                    "terms": terms,
                }),
            );
            if cl.matches() != check.holds {
                breach = Some(format!(
                    "template match {} disagrees with the so(B) test {}",
                    cl.matches(),
                    check.holds
                ));
            }
            if cl.matches() {
                let (first, second) = closing_identities(&c, &d, &b)?;
                out.insert(
                    "closing".into(),
                    json!({ "first": first, "second": second }),
                );
            }
        }
        Err(Error::NotSoBInvariant(msg)) => {
            out.insert("classification".into(), Value::Null);
            out.insert("not_invariant".into(), json!(msg));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Output {
        value: Value::Object(out),
        breach,
    })
}

pub fn rep_check(
    dim: usize,
    trials: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<Output, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = check_rep(dim, trials, &mut rng)?;
    let bound = tol.unwrap_or(REP_TOL);
    let worst = report
        .clifford_residual
        .max(report.anti_hermitian_residual)
        .max(report.homomorphism_residual)
        .max(report.round_trip_residual);
    let mut value = to_json(&report);
    value["tol"] = json!(bound);
    value["seed"] = json!(seed);
    let breach = (worst > bound).then(|| format!("residual {worst:e} exceeds {bound:e}"));
    Ok(Output { value, breach })
}

pub fn enumerate_cases(dim: usize) -> Result<Output, CliError> {
    let table = enumerate_two_monomial_cases(dim)?;
    let breach = table
        .iter()
        .find(|e| e.single_element != e.single_element_predicted)
        .map(|e| format!("single-element rule fails for shape {:?}", e.shape));
    Ok(Output {
        value: json!({ "dim": dim, "cases": to_json(&table) }),
        breach,
    })
}
