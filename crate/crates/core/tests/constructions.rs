use approx::assert_abs_diff_eq;
use crgeom::constructions::{
    anticanonical_structure, einstein_rescale, explicit_einstein_metric, fefferman_metric, flat_gauge_structure,
    make_kahler_einstein, sphere_times_flat, KahlerKind,
};
use crgeom::sampling::{sample_points, DEFAULT_SEED};
use crgeom::semi_riemannian::{ricci, riemann};

const N: usize = 6;

fn catalog() -> Vec<(KahlerKind, usize)> {
    KahlerKind::CATALOG.into_iter().flat_map(|k| [(k, 1), (k, 2)]).collect()
}

fn max_abs(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |a, b| a.max(b.abs()))
}

fn pair(g: &[f64], u: &[f64], v: &[f64]) -> f64 {
    let d = u.len();
    (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).map(|(a, b)| g[a * d + b] * u[a] * v[b]).sum()
}

#[test]
fn kahler_einstein_examples() {
    for (kind, m, scal) in [
        (KahlerKind::Flat, 1, 0.0),
        (KahlerKind::FubiniStudy, 1, 2.0),
        (KahlerKind::ComplexHyperbolic, 1, -2.0),
        (KahlerKind::FubiniStudy, 2, 6.0),
        (KahlerKind::ComplexHyperbolic, 2, -6.0),
    ] {
        let ke = make_kahler_einstein(kind, m, 1.0).unwrap();
        assert_eq!(ke.scal_h, scal);
        assert!(ke.einstein);
        for p in sample_points(&ke.base, N, DEFAULT_SEED) {
            // Ric^h = (scal/2m) h, recomputed from the metric alone.
            let ric = ricci(&ke.h, &p).unwrap();
            let h = ke.h.values(&p).unwrap();
            let k = scal / (2.0 * m as f64);
            assert!(max_abs(ric.iter().zip(&h).map(|(r, g)| r - k * g)) < 1e-10, "{kind} {m}");
            let r = ke.residuals(&p).unwrap();
            assert!(r.j_squared < 1e-12 && r.j_parallel < 1e-10 && r.gamma < 1e-10 && r.einstein < 1e-10);
            assert_abs_diff_eq!(r.scal, scal, epsilon = 1e-10);
        }
    }
    let bad = sphere_times_flat().unwrap();
    assert!(!bad.einstein);
}

#[test]
fn anticanonical_examples() {
    for (kind, m) in catalog() {
        let ke = make_kahler_einstein(kind, m, 1.0).unwrap();
        let ac = anticanonical_structure(&ke).unwrap();
        assert_eq!(ac.dim(), 2 * m + 1);
        for p in sample_points(&ac.chart, N, DEFAULT_SEED) {
            assert!(ac.dtheta_base_residual(&p).unwrap() < 1e-10, "{kind} {m}");
            assert!(ac.curvature_relation_residual(&p).unwrap() < 1e-10, "{kind} {m}");
            assert!(ac.submersion_residuals(&p).unwrap().max() < 1e-9, "{kind} {m}");
        }
    }
    assert!(anticanonical_structure(&sphere_times_flat().unwrap()).is_err());
}

#[test]
fn submersion_examples() {
    // On the base, Ric^h = h for the unit Fubini-Study line and −h for the hyperbolic one.
    for (kind, k) in [(KahlerKind::FubiniStudy, 1.0), (KahlerKind::ComplexHyperbolic, -1.0)] {
        let ke = make_kahler_einstein(kind, 1, 1.0).unwrap();
        for p in sample_points(&ke.base, N, DEFAULT_SEED) {
            let ric = ricci(&ke.h, &p).unwrap();
            let h = ke.h.values(&p).unwrap();
            assert!(max_abs(ric.iter().zip(&h).map(|(r, g)| r - k * g)) < 1e-10);
        }
    }
    // g_θ of the anticanonical structure on the Fubini-Study line is Einstein-Sasaki-like:
    // Ric(T,T) = ½ with T the unit Reeb field.
    let ac = anticanonical_structure(&make_kahler_einstein(KahlerKind::FubiniStudy, 1, 1.0).unwrap()).unwrap();
    let g = ac.ph.g_theta();
    for p in sample_points(&ac.chart, N, DEFAULT_SEED) {
        let t = ac.ph.reeb_at(&p).unwrap();
        let ric = ricci(&g, &p).unwrap();
        assert_abs_diff_eq!(pair(&ric, &t, &t), 0.5, epsilon = 1e-10);
    }
}

#[test]
fn fefferman_examples() {
    for (kind, m) in catalog() {
        let ke = make_kahler_einstein(kind, m, 1.0).unwrap();
        let fc = fefferman_metric(&anticanonical_structure(&ke).unwrap()).unwrap();
        assert_eq!(fc.metric.signature(), (2 * m + 1, 1));
        let mf = m as f64;
        let s = ke.scal_h / (2.0 * mf * (mf + 1.0));
        for p in sample_points(&fc.chart, N, DEFAULT_SEED) {
            let f = fc.metric.values(&p).unwrap();
            let pv = fc.p.values(&p).unwrap();
            let tv = fc.t_star.values(&p).unwrap();
            assert_abs_diff_eq!(pair(&f, &pv, &tv), 1.0, epsilon = 1e-12);
            assert!(pair(&f, &pv, &pv).abs() < 1e-12);
            // Ric(f) = mS f + (m/2) ds², recomputed from f.
            let ric = ricci(&fc.metric, &p).unwrap();
            let d = fc.dim();
            let mut want = vec![0.0; d * d];
            for i in 0..d * d {
                want[i] = mf * s * f[i];
            }
            want[d * d - 1] += 0.5 * mf;
            assert!(max_abs(ric.iter().zip(&want).map(|(a, b)| a - b)) < 1e-9, "{kind} {m}");
            assert!(fc.structure_residuals(&p).unwrap().max() < 1e-9);
            assert!(fc.identity_residuals(&p).unwrap().max() < 1e-8, "{kind} {m}");
            assert!(fc.closed_sum_residual(&p).unwrap() < 1e-10);
            let r = fc.ricci_residuals(&p).unwrap();
            assert!(r.trace_free_norm > 0.49, "{kind} {m}");
        }
    }
    // Flat base: f agrees with its closed form and is Ricci flat away from ds².
    let fc = fefferman_metric(&anticanonical_structure(&make_kahler_einstein(KahlerKind::Flat, 1, 1.0).unwrap()).unwrap())
        .unwrap();
    let closed = fc.closed_form_metric();
    for p in sample_points(&fc.chart, N, DEFAULT_SEED) {
        let a = fc.metric.values(&p).unwrap();
        let b = closed.values(&p).unwrap();
        assert!(max_abs(a.iter().zip(&b).map(|(x, y)| x - y)) < 1e-14);
        let r = riemann(&fc.metric, &p).unwrap();
        assert!(r.scalar.abs() < 1e-12);
    }
}

#[test]
fn rescale_examples() {
    for (kind, m, lambda, scalar) in [
        (KahlerKind::Flat, 1, 0.0, 0.0),
        (KahlerKind::FubiniStudy, 1, 0.75, 3.0),
        (KahlerKind::ComplexHyperbolic, 1, -0.75, -3.0),
        (KahlerKind::FubiniStudy, 2, 1.25, 7.5),
    ] {
        let ke = make_kahler_einstein(kind, m, 1.0).unwrap();
        let rc = einstein_rescale(&fefferman_metric(&anticanonical_structure(&ke).unwrap()).unwrap()).unwrap();
        assert_abs_diff_eq!(rc.lambda, lambda, epsilon = 1e-14);
        assert_abs_diff_eq!(rc.scalar, scalar, epsilon = 1e-14);
        for p in sample_points(&rc.fefferman.chart, N, DEFAULT_SEED) {
            rc.check_point(&p, 1e-3).unwrap();
            let ric = ricci(&rc.metric, &p).unwrap();
            let g = rc.metric.values(&p).unwrap();
            assert!(max_abs(ric.iter().zip(&g).map(|(r, v)| r - lambda * v)) < 1e-8, "{kind} {m}");
            let r = rc.residuals(&p).unwrap();
            assert!(r.ode < 1e-12 && r.oracle < 1e-8 && r.support < 1e-8 && r.scalar < 1e-8, "{kind} {m}: {r:?}");
            assert_abs_diff_eq!(r.c1, -(m as f64) / 2.0, epsilon = 1e-10);
            assert_abs_diff_eq!(r.measured_scalar, scalar, epsilon = 1e-8);
            assert!(rc.slice_residual(&p).unwrap() < 1e-14);
            if kind != KahlerKind::Flat {
                assert!(r.unrescaled_einstein > 1e-2);
            }
        }
    }
}

#[test]
fn explicit_metric_examples() {
    for (kind, m, lambda, scalar) in [
        (KahlerKind::Flat, 1, 0.0, 0.0),
        (KahlerKind::FubiniStudy, 1, 0.75, 3.0),
        (KahlerKind::ComplexHyperbolic, 1, -0.75, -3.0),
        (KahlerKind::ComplexHyperbolic, 2, -1.25, -7.5),
    ] {
        let ke = make_kahler_einstein(kind, m, 1.0).unwrap();
        let ex = explicit_einstein_metric(&ke).unwrap();
        assert_eq!(ex.metric.signature(), (2 * m + 1, 1));
        assert_abs_diff_eq!(ex.lambda, lambda, epsilon = 1e-14);
        let rc = einstein_rescale(&fefferman_metric(&anticanonical_structure(&ke).unwrap()).unwrap()).unwrap();
        for p in sample_points(&ex.chart, N, DEFAULT_SEED) {
            let ric = ricci(&ex.metric, &p).unwrap();
            let g = ex.metric.values(&p).unwrap();
            assert!(max_abs(ric.iter().zip(&g).map(|(r, v)| r - lambda * v)) < 1e-8, "{kind} {m}");
            let r = ex.residuals(&p).unwrap();
            assert_abs_diff_eq!(r.measured_scalar, scalar, epsilon = 1e-8);
            if let Some(s) = ex.sasaki_residuals(&p).unwrap() {
                assert!(s.max() < 1e-8, "{kind} {m}: {s:?}");
            }
        }
        for p in sample_points(&rc.fefferman.chart, N, DEFAULT_SEED) {
            assert!(ex.pipeline_residual(&rc, &p).unwrap() < 1e-6, "{kind} {m}");
        }
    }
    assert!(explicit_einstein_metric(&sphere_times_flat().unwrap()).is_err());
}

#[test]
fn non_einstein_base_is_not_einstein_after_rescaling() {
    let ac = flat_gauge_structure(&sphere_times_flat().unwrap()).unwrap();
    let p = sample_points(&ac.chart, 1, DEFAULT_SEED).remove(0);
    let e = ac.ph.webster_connection().einstein_residual(&p).unwrap();
    assert!(e.ricci > 1e-2);
}
