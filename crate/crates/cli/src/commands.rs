use std::fmt;
use std::fs;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use weyl_core::algebra::AlgebraJson;
use weyl_core::checks::{self, CheckResult, TransformRecord};
use weyl_core::cohomology::{Cochain, CochainComplex, CochainJson};
use weyl_core::fixtures::Fixtures;
use weyl_core::grading::{grade as build_grading, Grading};
use weyl_core::linalg::Matrix;
use weyl_core::normalization::{run_normalization, NormalizationRun};
use weyl_core::rational;
use weyl_core::weyl::{GradedVector, RhoMap, UpsilonJet, UpsilonJetJson};
use weyl_core::{build_algebra, Element, LieAlgebra, Q};

use crate::Config;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unreadable input: exit 2.
    Malformed(String),
    /// Well-formed input failing a required property: exit 1.
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Malformed(s) | CliError::Failed(s) => f.write_str(s),
        }
    }
}

impl From<weyl_core::Error> for CliError {
    fn from(e: weyl_core::Error) -> Self {
        use weyl_core::Error::*;
        match e {
            NotCentral | NotScaling | HodgeFailure { .. } | NotInLaplacianImage { .. } => {
                CliError::Failed(e.to_string())
            }
            _ => CliError::Malformed(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub struct Report {
    pub doc: Value,
    pub passed: bool,
}

pub fn emit(cfg: &Config, report: &Report) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(&report.doc).expect("json values serialize");
    text.push('\n');
    match &cfg.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input<T: DeserializeOwned>(cfg: &Config) -> CliResult<Option<T>> {
    let Some(path) = &cfg.input else { return Ok(None) };
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| CliError::Malformed(format!("invalid input {}: {e}", path.display())))
}

fn algebra_from(cfg: &Config) -> CliResult<LieAlgebra> {
    let series = cfg
        .series
        .ok_or_else(|| CliError::Malformed("--series is required".into()))?;
    let rank = cfg
        .rank
        .ok_or_else(|| CliError::Malformed("--rank is required".into()))?;
    Ok(build_algebra(series.to_ascii_uppercase(), rank)?)
}

fn grading_from(cfg: &Config) -> CliResult<Arc<Grading>> {
    let alg = Arc::new(algebra_from(cfg)?);
    let cross = cfg
        .cross
        .as_ref()
        .ok_or_else(|| CliError::Malformed("--cross is required".into()))?;
    Ok(Arc::new(build_grading(alg, cross)?))
}

fn qstr(x: &Q) -> Value {
    Value::String(rational::to_string(x))
}

fn qvec(v: &[Q]) -> Value {
    Value::Array(v.iter().map(qstr).collect())
}

fn element(x: &Element) -> Value {
    qvec(&x.coeffs)
}

fn parse_element(v: &[String], dim: usize) -> CliResult<Element> {
    if v.len() != dim {
        return Err(CliError::Malformed(format!(
            "element has {} coefficients, expected {dim}",
            v.len()
        )));
    }
    let coeffs = v
        .iter()
        .map(|s| rational::parse(s))
        .collect::<Result<Vec<Q>, _>>()
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    Ok(Element::from_coeffs(coeffs))
}

fn with_checks(mut doc: Value, passed: bool, checks: Option<Vec<CheckResult>>) -> Report {
    let mut ok = passed;
    if let Some(c) = checks {
        ok &= checks::all_passed(&c);
        doc["checks"] = serde_json::to_value(&c).expect("check results serialize");
    }
    doc["passed"] = Value::Bool(ok);
    Report { doc, passed: ok }
}

fn sparse_matrix(m: &Matrix) -> Value {
    let mut out = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !num_is_zero(&m[(r, c)]) {
                out.push(json!([r, c, qstr(&m[(r, c)])]));
            }
        }
    }
    Value::Array(out)
}

fn num_is_zero(x: &Q) -> bool {
    *x == rational::zero()
}

pub fn algebra(cfg: &Config) -> CliResult<Report> {
    let alg = match read_input::<AlgebraJson>(cfg)? {
        Some(doc) => LieAlgebra::from_json(&doc)?,
        None => algebra_from(cfg)?,
    };
    let doc = json!({
        "algebra": alg.to_json(),
        "killing_form": sparse_matrix(alg.killing_matrix()),
    });
    Ok(with_checks(doc, true, cfg.check.then(|| checks::algebra_suite(&alg))))
}

pub fn grade(cfg: &Config) -> CliResult<Report> {
    let gr = grading_from(cfg)?;
    let doc = json!({ "grading": gr.summary() });
    Ok(with_checks(doc, true, cfg.check.then(|| checks::grading_suite(&gr))))
}

pub fn cohomology(cfg: &Config) -> CliResult<Report> {
    let gr = grading_from(cfg)?;
    let cx = CochainComplex::new(gr.clone());
    let arities: Vec<usize> = match cfg.arity {
        Some(n) if n > 2 => {
            return Err(CliError::Malformed(format!(
                "--arity {n}: tables exist for arity 0..=2"
            )))
        }
        Some(n) => vec![n],
        None => (0..=2).collect(),
    };
    let mut tables = Vec::new();
    for n in arities {
        let ranks = cx.verify_hodge(n)?;
        let dims = cx.cohomology_dims(n)?;
        let blocks: Vec<Value> = ranks
            .iter()
            .map(|r| {
                json!({
                    "homogeneity": r.homogeneity,
                    "dim": r.dim,
                    "rank_d": r.rank_d,
                    "rank_dstar": r.rank_dstar,
                    "harmonic": r.harmonic,
                    "cohomology": dims.get(&r.homogeneity).copied().unwrap_or(0),
                })
            })
            .collect();
        tables.push(json!({ "arity": n, "dim": cx.space(n)?.dim(), "blocks": blocks }));
    }
    let mut doc = json!({
        "grading": { "algebra": gr.algebra().cartan_type().to_string(), "crossed": gr.crossed() },
        "tables": tables,
        "h1_condition": cx.check_h1_condition()?,
    });
    if let Some(c) = read_input::<CochainJson>(cfg)? {
        let c = Cochain::from_json(&gr, &c)?;
        let h = cx.hodge_decompose(&c)?;
        doc["hodge"] = json!({
            "exact": h.exact.to_json(),
            "harmonic": h.harmonic.to_json(),
            "coexact": h.coexact.to_json(),
        });
    }
    Ok(with_checks(
        doc,
        true,
        cfg.check.then(|| checks::cohomology_suite(&cx, cfg.seed, cfg.fixtures)),
    ))
}

#[derive(Deserialize)]
struct ScalesInput {
    e_lambda: Vec<String>,
}

pub fn scales(cfg: &Config) -> CliResult<Report> {
    let gr = grading_from(cfg)?;
    let g = gr.algebra();
    let e = match read_input::<ScalesInput>(cfg)? {
        Some(s) => parse_element(&s.e_lambda, gr.dim())?,
        None => gr.grading_element().clone(),
    };
    let center: Vec<Value> = gr.center_of_g0().iter().map(element).collect();
    let verdict = gr.is_scaling_element(&e)?;
    let spaces: Vec<Value> = verdict
        .spaces
        .iter()
        .map(|s| json!({ "basis": s.basis, "scalar": qstr(&s.scalar) }))
        .collect();
    let mut doc = json!({
        "e_lambda": element(&e),
        "center_of_g0": center,
        "is_scaling": verdict.is_scaling,
        "central_spaces": spaces,
    });
    if verdict.is_scaling {
        let l = gr.scale_functional(&e)?;
        let trace: Vec<Value> = gr
            .component(0)
            .iter()
            .map(|&i| qstr(&l.trace_formula(g, &g.basis_element(i))))
            .collect();
        doc["g0_basis"] = json!(l.g0_basis);
        doc["lambda_prime"] = qvec(&l.lambda_prime);
        doc["lambda_prime_trace_formula"] = Value::Array(trace);
        doc["pairing_ranks"] = json!(l.pairing_ranks(&gr));
    }
    let checks = cfg.check.then(|| checks::scales_suite(&gr, &e, cfg.seed, cfg.fixtures));
    Ok(with_checks(doc, verdict.is_scaling, checks))
}

#[derive(Deserialize)]
struct TransformInput {
    jet: UpsilonJetJson,
    rho: CochainJson,
    xi: Vec<String>,
}

fn record_json(u: &UpsilonJet, p: &RhoMap, xi: &GradedVector, r: &TransformRecord) -> Value {
    json!({
        "input": { "jet": u.to_json(), "rho": p.to_json(), "xi": element(&xi.total()) },
        "splitting": element(&r.splitting.total()),
        "connection": element(&r.connection),
        "rho": element(&r.rho),
        "phi": element(&r.phi),
        "residuals": {
            "splitting": element(&r.residual_splitting),
            "connection": element(&r.residual_connection),
            "rho": element(&r.residual_rho),
            "delta_splitting": qvec(&r.residual_delta_splitting),
            "delta_connection": qvec(&r.residual_delta_connection),
            "delta_rho": qvec(&r.residual_delta_rho),
        },
        "residuals_zero": r.residuals_zero(),
    })
}

pub fn transform(cfg: &Config) -> CliResult<Report> {
    let gr = grading_from(cfg)?;
    let cases: Vec<(UpsilonJet, RhoMap, GradedVector)> = match read_input::<TransformInput>(cfg)? {
        Some(t) => {
            let u = UpsilonJet::from_json(&gr, &t.jet)?;
            let p = RhoMap::new(Cochain::from_json(&gr, &t.rho)?)?;
            let xi = GradedVector::from_element(&gr, &parse_element(&t.xi, gr.dim())?)?;
            vec![(u, p, xi)]
        }
        None => {
            let mut f = Fixtures::new(cfg.seed);
            (0..cfg.fixtures)
                .map(|_| (f.jet(&gr), f.rho(&gr), f.graded_vector(&gr)))
                .collect()
        }
    };
    let records = weyl_core::par::map(&cases, |(u, p, xi)| checks::evaluate_fixture(u, p, xi));
    let all_zero = records.iter().all(TransformRecord::residuals_zero);
    let out: Vec<Value> = cases
        .iter()
        .zip(&records)
        .map(|((u, p, xi), r)| record_json(u, p, xi, r))
        .collect();
    let doc = json!({
        "grading": { "algebra": gr.algebra().cartan_type().to_string(), "crossed": gr.crossed() },
        "seed": cfg.seed.to_string(),
        "fixtures": out,
        "all_residuals_zero": all_zero,
    });
    Ok(with_checks(
        doc,
        all_zero,
        cfg.check.then(|| checks::transform_suite(&gr, cfg.seed, cfg.fixtures)),
    ))
}

fn run_json(run: &NormalizationRun) -> Value {
    let steps: Vec<Value> = run
        .steps
        .iter()
        .map(|s| {
            json!({
                "ell": s.ell,
                "rho": s.rho.to_json(),
                "alpha": element(&s.alpha),
                "obstruction": s.obstruction.to_json(),
                "obstructed": !s.obstruction.is_zero(),
            })
        })
        .collect();
    json!({ "rho": run.rho.to_json(), "steps": steps, "obstructed": run.obstructed() })
}

pub fn normalize(cfg: &Config, synthetic: Option<u64>) -> CliResult<Report> {
    let gr = grading_from(cfg)?;
    let cx = CochainComplex::new(gr.clone());
    let (mut doc, passed) = match (synthetic, read_input::<CochainJson>(cfg)?) {
        (Some(_), Some(_)) => return Err(CliError::Malformed("--synthetic and --in are exclusive".into())),
        (None, None) => return Err(CliError::Malformed("normalize needs --in or --synthetic".into())),
        (None, Some(doc)) => {
            let k = Cochain::from_json(&gr, &doc)?;
            if k.arity() != 2 {
                return Err(CliError::Malformed(format!(
                    "curvature must have arity 2, got {}",
                    k.arity()
                )));
            }
            let run = run_normalization(&cx, |ell, _| Ok(k.component(ell)))?;
            let ok = !run.obstructed();
            (run_json(&run), ok)
        }
        (Some(seed), None) => {
            let s = checks::synthetic_run(&cx, &mut Fixtures::new(seed))?;
            let mut doc = run_json(&s.run);
            doc["planted"] = json!(s.planted.to_json());
            doc["recovered_equals_planted"] = Value::Bool(s.recovered_equals_planted);
            doc["recovery_expected"] = Value::Bool(s.recovery_expected);
            doc["residual_normal"] = Value::Bool(s.residual_normal);
            (doc, s.passed())
        }
    };
    doc["grading"] = json!({ "algebra": gr.algebra().cartan_type().to_string(), "crossed": gr.crossed() });
    Ok(with_checks(
        doc,
        passed,
        cfg.check
            .then(|| checks::normalization_suite(&cx, cfg.seed, cfg.fixtures)),
    ))
}
