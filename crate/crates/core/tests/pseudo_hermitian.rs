use approx::assert_abs_diff_eq;
use crgeom::constructions::{anticanonical_structure, gauge_shifted_structure, make_kahler_einstein, perturbed_structure, KahlerKind};
use crgeom::pseudo_hermitian::{
    comparison_identities_residual, g_theta, heisenberg, ph_einstein_residual, reeb_field, transversal_symmetry_residual,
    webster_connection, webster_curvature,
};
use crgeom::sampling::{sample_points, DEFAULT_POINTS, DEFAULT_SEED};
use crgeom::semi_riemannian::christoffel;
use crgeom::tensor::TensorJets;
use crgeom::{exterior_derivative, Endomorphism, GeomError, OneForm, PHStructure, ScalarField, VectorField};

fn catalog() -> Vec<(KahlerKind, usize)> {
    KahlerKind::CATALOG.into_iter().flat_map(|k| [(k, 1), (k, 2)]).collect()
}

#[test]
fn reeb_field_examples() {
    let ph = heisenberg(1, 1.0).unwrap();
    for p in sample_points(ph.chart(), 8, DEFAULT_SEED) {
        let t = reeb_field(&ph).values(&p).unwrap();
        assert!(t[0].abs() < 1e-15 && t[1].abs() < 1e-15);
        assert_abs_diff_eq!(t[2], -1.0, epsilon = 1e-15);
    }
    for m in [1, 2] {
        let ke = make_kahler_einstein(KahlerKind::FubiniStudy, m, 1.0).unwrap();
        let ac = anticanonical_structure(&ke).unwrap();
        for p in sample_points(&ac.chart, 8, DEFAULT_SEED) {
            let t = ac.ph.reeb_at(&p).unwrap();
            for (a, b) in t.iter().zip(ac.expected_reeb()) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
            }
            assert_abs_diff_eq!(t[2 * m], -ke.scal_h / (2.0 * m as f64), epsilon = 1e-12);
        }
    }
    // dθ = 0: the Reeb system is singular.
    let c = ph.chart().clone();
    let closed = PHStructure::new(OneForm::coordinate(&c, 2), Endomorphism::zero(&c), 1, (1, 0)).unwrap();
    let p = c.point(&[0.1, 0.2, 0.3]).unwrap();
    assert!(matches!(closed.reeb_at(&p), Err(GeomError::Degenerate { .. })));
}

#[test]
fn g_theta_examples() {
    let ph = heisenberg(1, 1.0).unwrap();
    let g = g_theta(&ph);
    let t = reeb_field(&ph);
    let levi = ph.levi_form();
    let theta = ph.theta().clone();
    let h: Vec<VectorField> = (0..2)
        .map(|i| &VectorField::coordinate(ph.chart(), i) - &t.times(&theta.component(i)))
        .collect();
    for p in sample_points(ph.chart(), 8, DEFAULT_SEED) {
        let gv = g.values(&p).unwrap();
        let tv = t.values(&p).unwrap();
        let gtt: f64 = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| gv[a * 3 + b] * tv[a] * tv[b]).sum();
        assert_abs_diff_eq!(gtt, 1.0, epsilon = 1e-14);
        let lv = levi.values(&p).unwrap();
        for x in &h {
            let xv = x.values(&p).unwrap();
            let gtx: f64 = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| gv[a * 3 + b] * tv[a] * xv[b]).sum();
            assert!(gtx.abs() < 1e-14);
            for y in &h {
                let yv = y.values(&p).unwrap();
                let (mut gxy, mut lxy) = (0.0, 0.0);
                for a in 0..3 {
                    for b in 0..3 {
                        gxy += gv[a * 3 + b] * xv[a] * yv[b];
                        lxy += lv[a * 3 + b] * xv[a] * yv[b];
                    }
                }
                assert_abs_diff_eq!(gxy, lxy, epsilon = 1e-14);
            }
        }
    }
    for m in [1, 2] {
        let ac = anticanonical_structure(&make_kahler_einstein(KahlerKind::FubiniStudy, m, 1.0).unwrap()).unwrap();
        let g = ac.ph.g_theta();
        assert_eq!(g.signature(), (2 * m + 1, 0));
        for p in sample_points(&ac.chart, 8, DEFAULT_SEED) {
            g.check_at(&p).unwrap();
        }
    }
}

#[test]
fn webster_connection_examples() {
    let ph = heisenberg(1, 1.0).unwrap();
    let wd = webster_connection(&ph);
    let d = 3;
    let t = reeb_field(&ph);
    let h: Vec<VectorField> = (0..2)
        .map(|i| &VectorField::coordinate(ph.chart(), i) - &t.times(&ph.theta().component(i)))
        .collect();
    let dtheta = exterior_derivative(ph.theta());
    for p in sample_points(ph.chart(), 8, DEFAULT_SEED) {
        let at = wd.at(&p, 1).unwrap();
        // ∇^W of the horizontal coordinate frame vanishes.
        for x in &h {
            let nx = at.webster.covariant_derivative(&TensorJets::new(d, 1, 0, x.jets(&p, 1).unwrap()));
            assert!(nx.values().iter().all(|v| v.abs() < 1e-14));
        }
        // Oracle: Γ^W − Γ^{g_θ} equals ½(dθ_ab T^c − θ_a J^c_b − θ_b J^c_a).
        let lc = christoffel(&ph.g_theta(), &p).unwrap();
        let th = ph.theta().values(&p).unwrap();
        let dt = dtheta.values(&p).unwrap();
        let tv = t.values(&p).unwrap();
        let j = ph.j().values(&p).unwrap();
        for c in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let expected = 0.5 * (dt[a * d + b] * tv[c] - th[a] * j[c * d + b] - th[b] * j[c * d + a]);
                    let got = at.webster.gamma(c, a, b).value() - lc.get(c, a, b);
                    assert_abs_diff_eq!(got, expected, epsilon = 1e-14);
                }
            }
        }
    }
    for (kind, m) in catalog() {
        let ac = anticanonical_structure(&make_kahler_einstein(kind, m, 1.0).unwrap()).unwrap();
        let wd = webster_connection(&ac.ph);
        for p in sample_points(&ac.chart, 8, DEFAULT_SEED) {
            let ax = wd.axiom_residuals(&p).unwrap();
            assert!(ax.reeb_torsion < 1e-10, "{kind} {m}");
            assert!(ax.theta_parallel < 1e-10 && ax.metricity < 1e-10 && ax.j_parallel < 1e-10);
            assert!(ax.torsion_h < 1e-10, "{kind} {m}");
        }
    }
}

#[test]
fn transversal_symmetry_examples() {
    let ph = heisenberg(2, 1.0).unwrap();
    for p in sample_points(ph.chart(), 4, DEFAULT_SEED) {
        assert!(transversal_symmetry_residual(&ph, &p).unwrap().max() < 1e-14);
    }
    for (kind, m) in catalog() {
        let ac = anticanonical_structure(&make_kahler_einstein(kind, m, 1.0).unwrap()).unwrap();
        for p in sample_points(&ac.chart, 8, DEFAULT_SEED) {
            let r = transversal_symmetry_residual(&ac.ph, &p).unwrap();
            assert!(r.bracket < 1e-10 && r.killing < 1e-10, "{kind} {m}: {r:?}");
        }
    }
    let ph = perturbed_structure(&make_kahler_einstein(KahlerKind::Flat, 1, 1.0).unwrap(), 0.1).unwrap();
    for p in sample_points(ph.chart(), 8, DEFAULT_SEED) {
        let r = transversal_symmetry_residual(&ph, &p).unwrap();
        assert!(r.bracket > 1e-3, "{r:?}");
        assert!(matches!(webster_connection(&ph).at(&p, 2), Err(GeomError::Precondition { .. })));
    }
}

#[test]
fn webster_curvature_examples() {
    let ph = heisenberg(1, 1.0).unwrap();
    for p in sample_points(ph.chart(), 8, DEFAULT_SEED) {
        let c = webster_curvature(&webster_connection(&ph), &p).unwrap();
        assert!(c.ricw_rep.iter().all(|v| v.abs() < 1e-14));
        assert!(c.scal_w.abs() < 1e-14);
    }
    for (kind, expected) in [(KahlerKind::FubiniStudy, 1.0), (KahlerKind::ComplexHyperbolic, -1.0)] {
        let ke = make_kahler_einstein(kind, 1, 1.0).unwrap();
        assert_eq!(ke.scal_h, 2.0 * expected);
        let ac = anticanonical_structure(&ke).unwrap();
        let wd = webster_connection(&ac.ph);
        for p in sample_points(&ac.chart, DEFAULT_POINTS, DEFAULT_SEED) {
            let c = webster_curvature(&wd, &p).unwrap();
            assert_abs_diff_eq!(c.scal_w, expected, epsilon = 1e-12);
            let j = ac.ph.j().values(&p).unwrap();
            assert!(c.symmetry_residual(&j) < 1e-10);
        }
    }
}

#[test]
fn einstein_residual_examples() {
    for (kind, m) in catalog() {
        let ac = anticanonical_structure(&make_kahler_einstein(kind, m, 1.0).unwrap()).unwrap();
        let wd = webster_connection(&ac.ph);
        let mut scal = Vec::new();
        for p in sample_points(&ac.chart, 8, DEFAULT_SEED) {
            let e = ph_einstein_residual(&wd, &p).unwrap();
            assert!(e.max() < 1e-10, "{kind} {m}: {e:?}");
            scal.push(e.scal_w);
        }
        let spread = scal.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - scal.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-10);
    }
    let ph = heisenberg(1, 1.0).unwrap();
    let p = ph.chart().point(&[0.1, 0.2, 0.3]).unwrap();
    assert_eq!(ph_einstein_residual(&webster_connection(&ph), &p).unwrap().max(), 0.0);
}

#[test]
fn comparison_examples() {
    let ph = heisenberg(1, 1.0).unwrap();
    for p in sample_points(ph.chart(), 4, DEFAULT_SEED) {
        assert!(comparison_identities_residual(&webster_connection(&ph), &p).unwrap().max() < 1e-13);
    }
    let ac = anticanonical_structure(&make_kahler_einstein(KahlerKind::FubiniStudy, 1, 1.0).unwrap()).unwrap();
    let wd = webster_connection(&ac.ph);
    for p in sample_points(&ac.chart, DEFAULT_POINTS, DEFAULT_SEED) {
        let r = comparison_identities_residual(&wd, &p).unwrap();
        assert_abs_diff_eq!(r.ricci_tt_value, 0.5, epsilon = 1e-12);
        assert!(r.rtt < 1e-10 && r.bianchi < 1e-10 && r.pair_symmetry < 1e-10 && r.curvature_formula < 1e-10);
    }
}

#[test]
fn gauge_invariance_of_scal_w() {
    // θ̂ = θ + d(π*f) for a small basic f; for the flat base the gauge change is a genuine
    // change of contact form, and scal^W stays zero. For curved bases it stays scal^h/2.
    for (kind, m) in catalog() {
        let ke = make_kahler_einstein(kind, m, 1.0).unwrap();
        let xs = ScalarField::coordinates(&ke.base);
        let f = 0.05 * (&xs[0] * &xs[1]).sin() + 0.02 * &(&xs[0] * &xs[0]);
        let a = anticanonical_structure(&ke).unwrap();
        let b = gauge_shifted_structure(&ke, &f).unwrap();
        let (wa, wb) = (webster_connection(&a.ph), webster_connection(&b.ph));
        for p in sample_points(&a.chart, 8, DEFAULT_SEED) {
            let sa = webster_curvature(&wa, &p).unwrap().scal_w;
            let sb = webster_curvature(&wb, &p).unwrap().scal_w;
            assert!((sa - sb).abs() < 1e-6, "{kind} {m}: {sa} vs {sb}");
        }
    }
}

#[test]
fn structure_invariants() {
    for (kind, m) in catalog() {
        let ac = anticanonical_structure(&make_kahler_einstein(kind, m, 1.0).unwrap()).unwrap();
        for p in sample_points(&ac.chart, DEFAULT_POINTS, DEFAULT_SEED) {
            let s = ac.ph.structure_residuals(&p).unwrap();
            assert!(s.reeb < 1e-10 && s.j_squared < 1e-10 && s.levi_symmetry < 1e-10, "{kind} {m}: {s:?}");
            assert!(s.integrability < 1e-8);
            assert!(s.contact_volume.abs() > 1e-6);
        }
    }
}
