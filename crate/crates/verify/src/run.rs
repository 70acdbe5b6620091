//! Builds the constructions for one (example, m) and evaluates the selected suites.

use std::collections::BTreeMap;

use crgeom::constructions::{
    anticanonical_structure, einstein_rescale, explicit_einstein_metric, fefferman_metric, make_kahler_einstein,
    AnticanonicalChart, ExplicitEinsteinMetric, FeffermanChart, KahlerEinsteinChart, RescaledChart,
};
use crgeom::linalg::{self, max_abs};
use crgeom::sampling::sample_points;
use crgeom::Point;
use rayon::prelude::*;

use crate::checks::{self, Bound, CheckSpec, Suite};
use crate::config::SuiteConfig;
use crate::error::VerifyError;
use crate::report::{CheckResult, Header, Measurement, Report, CONVENTIONS};

/// Smallest `cos(s/2)` accepted by the rescaling suite.
pub const MIN_COS: f64 = 1e-3;

type Values = Vec<(&'static str, f64)>;
type PointOutcome = std::result::Result<Values, String>;

/// How a measurement is reduced over the points.
#[derive(Clone, Copy)]
enum Agg {
    Mean,
    Min,
    Max,
}

struct MeasureSpec {
    key: &'static str,
    name: &'static str,
    expected: Option<f64>,
    agg: Agg,
    /// Multiplies the reduced value.
    factor: f64,
    note: &'static str,
}

/// Constructions shared between suites; each is built at most once.
struct Context {
    ac: Result<AnticanonicalChart, String>,
    fc: Result<FeffermanChart, String>,
    rc: Result<RescaledChart, String>,
    ex: Result<ExplicitEinsteinMetric, String>,
}

fn chain<A, B>(prev: &Result<A, String>, f: impl FnOnce(&A) -> crgeom::Result<B>) -> Result<B, String> {
    match prev {
        Ok(a) => f(a).map_err(|e| e.to_string()),
        Err(e) => Err(e.clone()),
    }
}

impl Context {
    fn build(cfg: &SuiteConfig) -> Context {
        let ke: Result<KahlerEinsteinChart, String> =
            make_kahler_einstein(cfg.example, cfg.m, 1.0).map_err(|e| e.to_string());
        let ac = chain(&ke, anticanonical_structure);
        let fc = chain(&ac, fefferman_metric);
        let rc = chain(&fc, einstein_rescale);
        let ex = chain(&ke, explicit_einstein_metric);
        Context { ac, fc, rc, ex }
    }
}

fn rel(value: f64, expected: f64) -> f64 {
    (value - expected).abs() / expected.abs().max(1.0)
}

fn eval_points(n: usize, f: impl Fn(usize) -> crgeom::Result<Values> + Sync) -> Vec<PointOutcome> {
    (0..n).into_par_iter().map(|i| f(i).map_err(|e| e.to_string())).collect()
}

fn webster(ac: &AnticanonicalChart, points: &[Point]) -> Vec<PointOutcome> {
    let ph = &ac.ph;
    let wd = ph.webster_connection();
    let half = ac.ke.scal_h / 2.0;
    eval_points(points.len(), |i| {
        let p = &points[i];
        let s = ph.structure_residuals(p)?;
        let ts = ph.transversal_symmetry_residual(p)?;
        let at = wd.at(p, 2)?;
        let ax = at.axiom_residuals();
        let c = at.curvature()?;
        let e = at.einstein_residual()?;
        let j = linalg::values(&at.local.j);
        Ok(vec![
            ("structure.reeb", s.reeb),
            ("structure.j_squared", s.j_squared),
            ("structure.levi_symmetry", s.levi_symmetry),
            ("structure.integrability", s.integrability),
            ("structure.contact", s.contact_volume.abs()),
            ("webster.transversal_symmetry", ts.max()),
            ("webster.metricity", ax.metricity),
            ("webster.theta_parallel", ax.theta_parallel),
            ("webster.j_parallel", ax.j_parallel),
            ("webster.torsion_horizontal", ax.torsion_h),
            ("webster.torsion_reeb_identity", ax.torsion_reeb),
            ("webster.reeb_torsion", ax.reeb_torsion),
            ("webster.curvature_symmetries", c.symmetry_residual(&j)),
            ("webster.einstein", e.ricci),
            ("webster.scal_relation", rel(c.scal_w, half)),
            ("webster.scal_constancy", c.scal_w),
            ("webster.ricci_flat", max_abs(c.ricw_rep.iter().copied())),
            ("scal_w", c.scal_w),
        ])
    })
}

fn comparison(ac: &AnticanonicalChart, points: &[Point]) -> Vec<PointOutcome> {
    let wd = ac.ph.webster_connection();
    eval_points(points.len(), |i| {
        let c = wd.comparison_residuals(&points[i])?;
        Ok(vec![
            ("comparison.curvature_formula", c.curvature_formula),
            ("comparison.bianchi", c.bianchi),
            ("comparison.pair_symmetry", c.pair_symmetry),
            ("comparison.j_pair", c.j_pair),
            ("comparison.ricci_horizontal", c.ricci_h),
            ("comparison.ricci_w_reeb", c.ricci_w_reeb),
            ("comparison.ricci_tt", c.ricci_tt),
            ("comparison.ricci_tx", c.ricci_tx),
            ("comparison.r_xtt", c.rtt),
        ])
    })
}

fn submersion(ac: &AnticanonicalChart, points: &[Point]) -> Vec<PointOutcome> {
    let expected = ac.expected_reeb();
    eval_points(points.len(), |i| {
        let p = &points[i];
        let k = ac.ke.residuals(&ac.project(p)?)?;
        let reeb = ac.ph.reeb_at(p)?;
        let s = ac.submersion_residuals(p)?;
        Ok(vec![
            ("kahler.j_squared", k.j_squared),
            ("kahler.j_parallel", k.j_parallel),
            ("kahler.einstein", k.einstein),
            ("kahler.gamma", k.gamma),
            ("kahler.scal", rel(k.scal, ac.ke.scal_h)),
            ("construction.reeb", max_abs(reeb.iter().zip(&expected).map(|(a, b)| a - b))),
            ("construction.connection_curvature", ac.curvature_relation_residual(p)?),
            ("construction.dtheta_base", ac.dtheta_base_residual(p)?),
            ("submersion.metric", s.metric),
            ("submersion.ricci_tt", s.ricci_tt),
            ("submersion.ricci_tx", s.ricci_tx),
            ("submersion.ricci_horizontal", s.ricci_h),
            ("submersion.ricci_webster", s.ricci_w),
            ("scal_h", k.scal),
        ])
    })
}

fn fefferman(fc: &FeffermanChart, points: &[Point]) -> Vec<PointOutcome> {
    let m = fc.m() as f64;
    let scal_f = m * fc.s_const * (2.0 * m + 1.0);
    eval_points(points.len(), |i| {
        let p = &points[i];
        let sig = if fc.signature_check(p).is_ok() { 0.0 } else { 1.0 };
        let s = fc.structure_residuals(p)?;
        let r = fc.ricci_residuals(p)?;
        let id = fc.identity_residuals(p)?;
        Ok(vec![
            ("fefferman.signature", sig),
            ("fefferman.null_pair", s.null_pair),
            ("fefferman.orthogonality", s.orthogonality),
            ("fefferman.levi", s.levi),
            ("fefferman.closed_form_metric", s.closed_form),
            ("fefferman.lightlike", s.lightlike),
            ("fefferman.connection_curvature", s.connection_curvature),
            ("fefferman.ricci_closed_form", r.closed_form),
            ("fefferman.ricci_closed_form_b", r.closed_form_b),
            ("fefferman.ricci_components", r.components),
            ("fefferman.scalar", rel(r.scalar, scal_f)),
            ("fefferman.trace_free_form", r.trace_free),
            ("fefferman.never_einstein", r.trace_free_pp),
            ("fefferman.r_p_tstar", id.r_p_tstar),
            ("fefferman.r_x_p_tstar", id.r_x_p_tstar),
            ("fefferman.r_p_x_y", id.r_p_x_y),
            ("fefferman.r_tstar_x_y", id.r_tstar_x_y),
            ("fefferman.r_horizontal", id.r_horizontal),
            ("fefferman.nabla_xy", id.nabla_xy),
            ("fefferman.nabla_tstar_x", id.nabla_tstar_x),
            ("fefferman.nabla_p_x", id.nabla_p_x),
            ("fefferman.nabla_vertical", id.nabla_vertical),
            ("fefferman.parallel", id.parallel),
            ("fefferman.dual", id.dual),
            ("fefferman.closed_sum", fc.closed_sum_residual(p)?),
            ("fefferman.killing", id.killing),
            ("scal_f", r.scalar),
            ("trace_free_norm", r.trace_free_norm),
        ])
    })
}

fn rescale(rc: &RescaledChart, points: &[Point]) -> Vec<PointOutcome> {
    eval_points(points.len(), |i| {
        let p = &points[i];
        rc.check_point(p, MIN_COS)?;
        let r = rc.residuals(p)?;
        Ok(vec![
            ("rescale.ode", r.ode),
            ("rescale.einstein", r.einstein),
            ("rescale.scalar", rel(r.measured_scalar, rc.scalar)),
            ("rescale.oracle", r.oracle),
            ("rescale.support", r.support),
            ("rescale.support_ds2", r.support_ds2),
            ("rescale.support_f", r.support_f),
            ("rescale.slice", rc.slice_residual(p)?),
            ("scal_ft", r.measured_scalar),
            ("c1", r.c1),
            ("unrescaled", r.unrescaled_einstein),
        ])
    })
}

fn explicit(ex: &ExplicitEinsteinMetric, rc: &Result<RescaledChart, String>, points: &[Point], fpoints: &[Point]) -> Vec<PointOutcome> {
    eval_points(points.len(), |i| {
        let q = &points[i];
        let sig = if ex.metric.check_at(q).is_ok() { 0.0 } else { 1.0 };
        let r = ex.residuals(q)?;
        let mut out = vec![
            ("explicit.signature", sig),
            ("explicit.einstein", r.einstein),
            ("explicit.scalar", rel(r.measured_scalar, ex.scalar)),
            ("lambda_explicit", r.measured_scalar / ex.dim() as f64),
        ];
        match rc {
            Ok(rc) => out.push(("explicit.pipeline", ex.pipeline_residual(rc, &fpoints[i])?)),
            Err(e) => return Err(crgeom::GeomError::Unsupported(format!("pipeline unavailable: {e}"))),
        }
        if let Some(s) = ex.sasaki_residuals(q)? {
            out.extend([
                ("explicit.sasaki_mixed_metric", s.mixed_metric),
                ("explicit.sasaki_mixed_curvature", s.mixed_curvature),
                ("explicit.sasaki_einstein", s.einstein),
            ]);
        }
        Ok(out)
    })
}

fn aggregate(spec: &CheckSpec, tol: f64, outcomes: &[PointOutcome]) -> CheckResult {
    let mut values = Vec::with_capacity(outcomes.len());
    let mut failures = 0;
    let mut first_error = None;
    for o in outcomes {
        match o {
            Ok(v) => match v.iter().find(|(k, _)| *k == spec.name) {
                Some((_, x)) => values.push(*x),
                None => {
                    failures += 1;
                    first_error.get_or_insert_with(|| "value missing".to_string());
                }
            },
            Err(e) => {
                failures += 1;
                first_error.get_or_insert_with(|| e.clone());
            }
        }
    }
    let reduced = reduce(spec.bound, &values);
    let within = match spec.bound {
        Bound::Max | Bound::Spread => reduced <= tol,
        Bound::Min => reduced > tol,
    };
    CheckResult {
        name: spec.name.to_string(),
        suite: spec.suite.id().to_string(),
        anchor: spec.anchor.to_string(),
        bound: spec.bound.id(),
        points_evaluated: values.len(),
        failures,
        max_residual: reduced,
        tolerance: tol,
        pass: failures == 0 && !values.is_empty() && reduced.is_finite() && within,
        error: first_error,
    }
}

fn reduce(bound: Bound, values: &[f64]) -> f64 {
    if values.is_empty() || values.iter().any(|v| v.is_nan()) {
        return f64::NAN;
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    match bound {
        Bound::Max => max,
        Bound::Min => min,
        Bound::Spread => max - min,
    }
}

fn failed(spec: &CheckSpec, tol: f64, error: &str) -> CheckResult {
    CheckResult {
        name: spec.name.to_string(),
        suite: spec.suite.id().to_string(),
        anchor: spec.anchor.to_string(),
        bound: spec.bound.id(),
        points_evaluated: 0,
        failures: 0,
        max_residual: f64::NAN,
        tolerance: tol,
        pass: false,
        error: Some(format!("construction failed: {error}")),
    }
}

fn measure(suite: Suite, spec: &MeasureSpec, outcomes: &[PointOutcome]) -> Option<Measurement> {
    let values: Vec<f64> = outcomes
        .iter()
        .filter_map(|o| o.as_ref().ok())
        .filter_map(|v| v.iter().find(|(k, _)| *k == spec.key).map(|(_, x)| *x))
        .collect();
    if values.is_empty() {
        return None;
    }
    let value = match spec.agg {
        Agg::Mean => values.iter().sum::<f64>() / values.len() as f64,
        Agg::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
        Agg::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    Some(Measurement {
        name: spec.name.to_string(),
        suite: suite.id().to_string(),
        value: value * spec.factor,
        expected: spec.expected,
        note: spec.note.to_string(),
    })
}

fn measure_specs(suite: Suite, scal_h: f64, m: f64) -> Vec<MeasureSpec> {
    let lambda = (2.0 * m + 1.0) * scal_h / (4.0 * m * (m + 1.0));
    let scal_ft = (2.0 * m + 1.0) * scal_h / (2.0 * m);
    let spec = |key, name, expected, agg, note| MeasureSpec {
        key,
        name,
        expected,
        agg,
        factor: 1.0,
        note,
    };
    match suite {
        Suite::Webster => vec![spec("scal_w", "scal_w", Some(scal_h / 2.0), Agg::Mean, "Webster scalar curvature, mean over points")],
        Suite::Comparison => vec![],
        Suite::Submersion => vec![spec("scal_h", "scal_h", Some(scal_h), Agg::Mean, "base scalar curvature, mean over points")],
        Suite::Fefferman => vec![
            spec(
                "scal_f",
                "scal_f",
                Some((2.0 * m + 1.0) * scal_h / (2.0 * (m + 1.0))),
                Agg::Mean,
                "scalar curvature of f, mean over points",
            ),
            spec("trace_free_norm", "trace_free_ricci_min", None, Agg::Min, "smallest max-norm of Ric₀(f); f is never Einstein"),
        ],
        Suite::Rescale => vec![
            spec("scal_ft", "scal_ftilde", Some(scal_ft), Agg::Mean, "scal(f̃), mean over points"),
            MeasureSpec {
                factor: 1.0 / (2.0 * m + 2.0),
                ..spec("scal_ft", "lambda_measured", Some(lambda), Agg::Mean, "scal(f̃)/(2m+2), mean over points")
            },
            spec("c1", "c1", Some(-m / 2.0), Agg::Mean, "C_φ(P,P), the ds² coefficient of the conformal correction"),
            spec(
                "unrescaled",
                "unrescaled_einstein_residual",
                None,
                Agg::Max,
                "max |Ric(f) − λ f|; nonzero, the Einstein property belongs to f̃",
            ),
        ],
        Suite::ExplicitEinstein => vec![spec(
            "lambda_explicit",
            "lambda_explicit",
            Some(lambda),
            Agg::Mean,
            "scal/dim of the chart metric, mean over points",
        )],
    }
}

/// Runs every selected suite of `cfg` and assembles the report.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, VerifyError> {
    cfg.validate()?;
    let ctx = Context::build(cfg);
    let m = cfg.m as f64;
    let scal_h = cfg.example.scalar_curvature(cfg.m, 1.0);
    let flat = scal_h == 0.0;
    let n = cfg.points;
    let mpoints = ctx.ac.as_ref().ok().map(|ac| sample_points(&ac.chart, n, cfg.seed));
    let fpoints = ctx.fc.as_ref().ok().map(|fc| sample_points(&fc.chart, n, cfg.seed));
    let xpoints = ctx.ex.as_ref().ok().map(|ex| sample_points(&ex.chart, n, cfg.seed));

    let mut checks_out = Vec::new();
    let mut measurements = Vec::new();
    for &suite in &cfg.suites {
        let outcomes: Result<Vec<PointOutcome>, String> = match suite {
            Suite::Webster => ctx.ac.clone().map(|ac| webster(&ac, mpoints.as_deref().unwrap_or_default())),
            Suite::Comparison => ctx.ac.clone().map(|ac| comparison(&ac, mpoints.as_deref().unwrap_or_default())),
            Suite::Submersion => ctx.ac.clone().map(|ac| submersion(&ac, mpoints.as_deref().unwrap_or_default())),
            Suite::Fefferman => ctx.fc.clone().map(|fc| fefferman(&fc, fpoints.as_deref().unwrap_or_default())),
            Suite::Rescale => ctx.rc.clone().map(|rc| rescale(&rc, fpoints.as_deref().unwrap_or_default())),
            Suite::ExplicitEinstein => ctx.ex.clone().map(|ex| {
                let fp = fpoints.clone().unwrap_or_default();
                explicit(&ex, &ctx.rc, xpoints.as_deref().unwrap_or_default(), &fp)
            }),
        };
        let specs = checks::for_suite(suite).filter(|c| c.applies.includes(flat));
        match &outcomes {
            Ok(o) => {
                checks_out.extend(specs.map(|s| aggregate(s, cfg.tolerance(s), o)));
                measurements.extend(measure_specs(suite, scal_h, m).iter().filter_map(|ms| measure(suite, ms, o)));
            }
            Err(e) => checks_out.extend(specs.map(|s| failed(s, cfg.tolerance(s), e))),
        }
    }
    if let Ok(fc) = &ctx.fc {
        if cfg.suites.contains(&Suite::Fefferman) {
            measurements.push(Measurement {
                name: "scal_w_used".into(),
                suite: Suite::Fefferman.id().into(),
                value: fc.scal_w,
                expected: Some(scal_h / 2.0),
                note: "scal^W measured at the chart center and used in a_W".into(),
            });
        }
    }
    let pass = checks_out.iter().all(|c| c.pass);
    Ok(Report {
        header: Header {
            tool: "verify",
            version: env!("CARGO_PKG_VERSION"),
            example: cfg.example.id().to_string(),
            m: cfg.m,
            seed: cfg.seed,
            points: cfg.points,
            suites: cfg.suites.iter().map(|s| s.id().to_string()).collect(),
            scal_h,
            conventions: CONVENTIONS,
        },
        checks: checks_out,
        measurements,
        pass,
    })
}

/// Runs `base` for each example and `m` in turn.
pub fn run_many(base: &SuiteConfig, examples: &[crgeom::constructions::KahlerKind], ms: &[usize]) -> Result<Vec<Report>, VerifyError> {
    let mut out = Vec::new();
    for &example in examples {
        for &m in ms {
            let cfg = SuiteConfig { example, m, ..base.clone() };
            out.push(run_suite(&cfg)?);
        }
    }
    Ok(out)
}

/// Check counts per suite, for listings.
pub fn suite_sizes() -> BTreeMap<&'static str, usize> {
    Suite::ALL.iter().map(|s| (s.id(), checks::for_suite(*s).count())).collect()
}
