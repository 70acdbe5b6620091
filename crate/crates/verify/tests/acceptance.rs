//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest harness so
//! the lines are always printed; exits non-zero if any criterion fails.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crgeom::constructions::{
    anticanonical_structure, flat_gauge_structure, make_kahler_einstein, perturbed_structure, sphere_times_flat,
    KahlerKind,
};
use crgeom::sampling::{sample_points, DEFAULT_POINTS, DEFAULT_SEED};
use crgeom::semi_riemannian::{conformal_ricci_correction, ricci, riemann};
use crgeom::{Chart, MetricField, ScalarField, SymmetricTwoTensor};
use crgeom_verify::config::SUPPORTED_M;
use crgeom_verify::{run_many, run_suite, Report, ReportSet, Suite, SuiteConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ENTRY_BUDGET: Duration = Duration::from_secs(5);
const FULL_BUDGET: Duration = Duration::from_secs(60);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Every named check passes in every report; reports the worst value.
fn all_pass(reports: &[Report], names: &[&str]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in names {
        let found: Vec<_> = reports.iter().filter_map(|r| r.check(name)).collect();
        let Some(first) = found.first() else {
            pass = false;
            parts.push(format!("{name} missing"));
            continue;
        };
        pass &= found.iter().all(|c| c.pass && c.points_evaluated == DEFAULT_POINTS);
        let values = found.iter().map(|c| c.max_residual);
        let worst = if first.bound == "min" {
            values.fold(f64::INFINITY, f64::min)
        } else {
            values.fold(0.0, f64::max)
        };
        parts.push(format!("{name} {worst:.1e} (tol {:.0e}, {} runs)", first.tolerance, found.len()));
    }
    outcome(pass, parts.join("; "))
}

fn full_config() -> SuiteConfig {
    SuiteConfig::new(KahlerKind::Flat, 1)
}

fn criterion_1() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (kind, m, scal_h) in [
        (KahlerKind::FubiniStudy, 1, 2.0),
        (KahlerKind::ComplexHyperbolic, 1, -2.0),
        (KahlerKind::FubiniStudy, 2, 6.0),
    ] {
        let cfg = SuiteConfig {
            suites: vec![Suite::Webster],
            ..SuiteConfig::new(kind, m)
        };
        let start = Instant::now();
        let r = run_suite(&cfg).expect("valid config");
        let elapsed = start.elapsed();
        let c = r.check("webster.scal_relation").expect("check present");
        let scal_w = r.measurement("scal_w").map(|x| x.value).unwrap_or(f64::NAN);
        let ok = c.pass
            && c.points_evaluated == DEFAULT_POINTS
            && r.header.scal_h == scal_h
            && (scal_w - scal_h / 2.0).abs() < 1e-7 * (scal_h / 2.0_f64).abs()
            && elapsed < ENTRY_BUDGET;
        pass &= ok;
        parts.push(format!(
            "{kind} m={m}: scal^W {scal_w:.12} vs {}, rel {:.1e}, {:.2}s",
            scal_h / 2.0,
            c.max_residual,
            elapsed.as_secs_f64()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_2(reports: &[Report]) -> Outcome {
    let a = all_pass(reports, &["webster.einstein", "webster.reeb_torsion"]);
    let heis: Vec<Report> = reports
        .iter()
        .filter(|r| r.header.example == "flat" && r.header.m == 1)
        .cloned()
        .collect();
    let b = all_pass(&heis, &["webster.ricci_flat"]);
    outcome(a.pass && b.pass && heis.len() == 1, format!("{}; Heisenberg {}", a.detail, b.detail))
}

fn criterion_3(reports: &[Report]) -> Outcome {
    all_pass(
        reports,
        &["comparison.bianchi", "comparison.pair_symmetry", "comparison.curvature_formula"],
    )
}

fn criterion_4(reports: &[Report]) -> Outcome {
    all_pass(
        reports,
        &[
            "comparison.ricci_tt",
            "comparison.ricci_tx",
            "comparison.r_xtt",
            "submersion.ricci_tt",
            "submersion.ricci_horizontal",
        ],
    )
}

fn criterion_5(reports: &[Report]) -> Outcome {
    all_pass(reports, &["fefferman.null_pair", "fefferman.connection_curvature"])
}

fn criterion_6(reports: &[Report]) -> Outcome {
    let a = all_pass(
        reports,
        &[
            "fefferman.ricci_closed_form",
            "fefferman.ricci_components",
            "fefferman.parallel",
            "fefferman.killing",
            "fefferman.never_einstein",
        ],
    );
    // The trace-free norm measurement must also stay above the frozen bound.
    let floor = reports
        .iter()
        .filter_map(|r| r.measurement("trace_free_ricci_min"))
        .map(|m| m.value)
        .fold(f64::INFINITY, f64::min);
    let bound = crgeom_verify::checks::find("fefferman.never_einstein").unwrap().tolerance;
    outcome(
        a.pass && floor > bound,
        format!("{}; min ‖Ric₀‖ {floor:.3} > {bound}", a.detail),
    )
}

fn criterion_7(reports: &[Report]) -> Outcome {
    all_pass(
        reports,
        &[
            "rescale.einstein",
            "rescale.scalar",
            "rescale.ode",
            "explicit.einstein",
            "explicit.pipeline",
        ],
    )
}

/// Gauss curvature of `E(dx² + dy²)` from `K = −Δ(ln E)/(2E)`, with the Laplacian taken by
/// central differences and two Richardson steps.
fn gauss_oracle(e: impl Fn(f64, f64) -> f64, x: f64, y: f64) -> f64 {
    let l = |x: f64, y: f64| e(x, y).ln();
    let lap = |h: f64| (l(x + h, y) + l(x - h, y) + l(x, y + h) + l(x, y - h) - 4.0 * l(x, y)) / (h * h);
    let h = 0.02;
    let (a, b, c) = (lap(h), lap(h / 2.0), lap(h / 4.0));
    let r1 = (4.0 * b - a) / 3.0;
    let r2 = (4.0 * c - b) / 3.0;
    let lap = (16.0 * r2 - r1) / 15.0;
    -lap / (2.0 * e(x, y))
}

fn random_metric(chart: &Arc<Chart>, rng: &mut ChaCha8Rng, lorentzian: bool) -> MetricField {
    let d = chart.dim();
    let xs = ScalarField::coordinates(chart);
    let wave = |rng: &mut ChaCha8Rng| {
        let mut arg = ScalarField::constant(chart, rng.random_range(-1.0..1.0));
        for x in &xs {
            arg = arg + rng.random_range(-1.5..1.5) * x;
        }
        rng.random_range(-0.15..0.15) * arg.sin()
    };
    let mut entries = Vec::new();
    for i in 0..d {
        for j in i..d {
            let base = if i == j {
                if lorentzian && i == 0 {
                    -1.0
                } else {
                    1.0
                }
            } else {
                0.0
            };
            entries.push((i, j, wave(rng) + base));
        }
    }
    let sig = if lorentzian { (d - 1, 1) } else { (d, 0) };
    MetricField::new(SymmetricTwoTensor::from_entries(chart, entries), sig).expect("valid signature")
}

fn random_potential(chart: &Arc<Chart>, rng: &mut ChaCha8Rng) -> ScalarField {
    let xs = ScalarField::coordinates(chart);
    let mut phi = ScalarField::constant(chart, 0.0);
    for _ in 0..3 {
        let mut arg = ScalarField::constant(chart, rng.random_range(-1.0..1.0));
        for x in &xs {
            arg = arg + rng.random_range(-1.0..1.0) * x;
        }
        phi = phi + rng.random_range(-0.5..0.5) * arg.sin();
    }
    phi + rng.random_range(-0.5..0.5) * (&xs[0] * &xs[1])
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let chart = Chart::cube(3, -0.5, 0.5).unwrap();
    let mut worst: f64 = 0.0;
    let mut fixtures = 0;
    for k in 0..8 {
        let g = random_metric(&chart, &mut rng, k % 2 == 1);
        let phi = random_potential(&chart, &mut rng);
        for p in sample_points(&chart, 3, k) {
            if g.check_at(&p).is_err() {
                continue;
            }
            let corr = conformal_ricci_correction(&g, &phi, &p).unwrap();
            let base = ricci(&g, &p).unwrap();
            let direct = ricci(&g.conformal(&phi), &p).unwrap();
            for ((c, b), r) in corr.iter().zip(&base).zip(&direct) {
                worst = worst.max((b + c - r).abs());
            }
            fixtures += 1;
        }
    }
    let mut scal_err: f64 = 0.0;
    let mut oracle_err: f64 = 0.0;
    let plane = Chart::cube(2, -0.6, 0.6).unwrap();
    for (sign, expected) in [(1.0, 2.0), (-1.0, -2.0)] {
        let x = ScalarField::coordinate(&plane, 0);
        let y = ScalarField::coordinate(&plane, 1);
        let e = 4.0 * (1.0 + sign * (&x * &x + &y * &y)).powi(-2);
        let g = MetricField::new(SymmetricTwoTensor::from_entries(&plane, vec![(0, 0, e.clone()), (1, 1, e)]), (2, 0))
            .unwrap();
        for p in sample_points(&plane, 8, DEFAULT_SEED) {
            let (u, v) = (p.coords()[0], p.coords()[1]);
            let scal = riemann(&g, &p).unwrap().scalar;
            let k = gauss_oracle(|a, b| 4.0 / (1.0 + sign * (a * a + b * b)).powi(2), u, v);
            scal_err = scal_err.max((scal - expected).abs());
            oracle_err = oracle_err.max((scal - 2.0 * k).abs());
        }
    }
    outcome(
        worst < 1e-7 && fixtures >= 20 && scal_err < 1e-8 && oracle_err < 1e-8,
        format!(
            "conformal correction vs direct {worst:.1e} over {fixtures} fixture points (tol 1e-7); \
             sphere/disc scal error {scal_err:.1e}, vs Gauss oracle {oracle_err:.1e} (tol 1e-8)"
        ),
    )
}

fn criterion_9() -> Outcome {
    let ke = sphere_times_flat().unwrap();
    let rejected = anticanonical_structure(&ke).is_err();
    let ac = flat_gauge_structure(&ke).unwrap();
    let wd = ac.ph.webster_connection();
    let einstein = sample_points(&ac.chart, DEFAULT_POINTS, DEFAULT_SEED)
        .iter()
        .map(|p| wd.einstein_residual(p).unwrap().ricci)
        .fold(f64::INFINITY, f64::min);

    let flat = make_kahler_einstein(KahlerKind::Flat, 1, 1.0).unwrap();
    let ph = perturbed_structure(&flat, 0.1).unwrap();
    let tsph = sample_points(ph.chart(), DEFAULT_POINTS, DEFAULT_SEED)
        .iter()
        .map(|p| ph.transversal_symmetry_residual(p).unwrap().max())
        .fold(f64::INFINITY, f64::min);
    outcome(
        rejected && einstein > 1e-2 && tsph > 1e-3,
        format!(
            "sphere×flat m=2 min Einstein residual {einstein:.3} (> 1e-2, Einstein gauge refused: {rejected}); \
             perturbed Heisenberg min TSPH residual {tsph:.3} (> 1e-3)"
        ),
    )
}

fn criterion_10(reports: Vec<Report>) -> Outcome {
    let dir = std::env::temp_dir().join(format!("crgeom-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("all.json");
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(["run", "--example", "all", "--suite", "all", "--out"])
        .arg(&out)
        .output()
        .expect("verify runs");
    let elapsed = start.elapsed();
    let written = std::fs::read_to_string(&out).unwrap_or_default();
    let _ = std::fs::remove_dir_all(&dir);
    let expected = serde_json::to_string_pretty(&ReportSet::new(reports)).unwrap() + "\n";
    let same = written == expected;
    outcome(
        status.status.success() && elapsed < FULL_BUDGET && same,
        format!(
            "verify run --example all --suite all: exit {:?}, {:.1}s (budget 60s), identical to in-process run: {same}",
            status.status.code(),
            elapsed.as_secs_f64()
        ),
    )
}

fn main() {
    let reports = run_many(&full_config(), &KahlerKind::CATALOG, &SUPPORTED_M).expect("valid config");
    let results = vec![
        (1, "scalar relation scal^W = scal^h/2", criterion_1()),
        (2, "pseudo-Hermitian Einstein and Reeb torsion", criterion_2(&reports)),
        (3, "Webster curvature symmetries and comparison formula", criterion_3(&reports)),
        (4, "Ricci relations of g_θ and the submersion", criterion_4(&reports)),
        (5, "Fefferman structure", criterion_5(&reports)),
        (6, "Fefferman Ricci closed form", criterion_6(&reports)),
        (7, "conformal Einstein rescaling and explicit metric", criterion_7(&reports)),
        (8, "oracle equivalence", criterion_8()),
        (9, "negative controls", criterion_9()),
        (10, "full suite runtime and determinism", criterion_10(reports)),
    ];
    let mut failed = 0;
    for (n, title, o) in &results {
        println!("criterion {n:>2} {}: {title}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
