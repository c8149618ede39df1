mod common;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qgs::closed_forms::{parallel_pair, series_chain, series_pair, TwoPort};
use qgs::engine::scattering_matrix;
use qgs::families;
use qgs::sweep::{closed_form_amplitudes, validate_family, FamilyName};
use qgs::{BoundaryCondition, MetricGraph, OpenGraph, VertexAmplitudes};

fn two_port(v: (Complex64, Complex64)) -> TwoPort {
    TwoPort::new(v.0, v.1)
}

fn vertex(v: (Complex64, Complex64)) -> VertexAmplitudes {
    VertexAmplitudes::new(v.0, v.1)
}

#[test]
fn every_family_member_matches_engine() {
    for family in FamilyName::ALL {
        for n in family.default_sizes() {
            for e in validate_family(family, n, 96).unwrap() {
                assert!(e.passed(), "{e:?}");
            }
        }
    }
}

#[test]
fn diamond_with_random_vertices() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..40 {
        let ends = common::random_vertex(&mut rng, 3);
        let a = common::random_vertex(&mut rng, 2);
        let b = common::random_vertex(&mut rng, 2);
        let (l1, l2) = (rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
        let og = families::diamond(l1, l2, vertex(ends), vertex(a), vertex(b)).unwrap();
        for _ in 0..8 {
            let k = rng.random_range(0.1..10.0);
            let sm = scattering_matrix(&og, k).unwrap();
            let cf = parallel_pair(
                two_port(ends),
                two_port(a),
                two_port(b),
                Complex64::from_polar(1.0, k * l1),
                Complex64::from_polar(1.0, k * l2),
            )
            .unwrap();
            assert!((sm.get(0, 0) - cf.r).norm() < 1e-9, "k = {k}");
            assert!((sm.get(1, 0) - cf.t).norm() < 1e-9, "k = {k}");
        }
    }
}

/// Path of `m` vertices with leads on its ends, so every vertex has degree 2
/// and carries the given custom amplitudes.
fn custom_path(amps: &[(Complex64, Complex64)], length: f64) -> OpenGraph {
    let m = amps.len();
    let edges: Vec<_> = (1..m).map(|i| (i, i + 1, length)).collect();
    let mut g = MetricGraph::from_triples(m, &edges).unwrap();
    for (i, &(r, t)) in amps.iter().enumerate() {
        g.set_boundary(i + 1, BoundaryCondition::Custom { r, t }).unwrap();
    }
    OpenGraph::new(g, vec![1, m], 0).unwrap()
}

#[test]
fn two_vertex_path_is_a_series_pair() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..50 {
        let a = common::random_vertex(&mut rng, 2);
        let b = common::random_vertex(&mut rng, 2);
        let og = custom_path(&[a, b], 1.0);
        let k = rng.random_range(0.1..10.0);
        let sm = scattering_matrix(&og, k).unwrap();
        let cf = series_pair(two_port(a), two_port(b), Complex64::from_polar(1.0, k)).unwrap();
        assert!((sm.get(0, 0) - cf.r).norm() < 1e-10);
        assert!((sm.get(1, 0) - cf.t).norm() < 1e-10);
    }
}

#[test]
fn custom_chain_matches_series_chain() {
    let mut rng = StdRng::seed_from_u64(13);
    for m in 2..=7 {
        let amps: Vec<_> = (0..m).map(|_| common::random_vertex(&mut rng, 2)).collect();
        let og = custom_path(&amps, 0.8);
        let ports: Vec<TwoPort> = amps.iter().copied().map(two_port).collect();
        for j in 0..16 {
            let k = 0.3 + 0.7 * j as f64;
            let sm = scattering_matrix(&og, k).unwrap();
            let cf = series_chain(&ports, Complex64::from_polar(1.0, 0.8 * k)).unwrap();
            assert!((sm.get(0, 0) - cf.r).norm() < 1e-9, "m = {m}, k = {k}");
            assert!((sm.get(1, 0) - cf.t).norm() < 1e-9, "m = {m}, k = {k}");
        }
    }
}

#[test]
fn closed_form_columns_conserve_flux() {
    for family in FamilyName::ALL {
        for n in family.default_sizes() {
            for j in 0..64 {
                let k = 0.05 + 0.1 * j as f64;
                let Ok(sigma) = closed_form_amplitudes(family, n, k) else {
                    continue;
                };
                let s: f64 = sigma.iter().map(|s| s.norm_sqr()).sum();
                assert!((s - 1.0).abs() < 1e-9, "{family}{n} at k = {k}: {s}");
            }
        }
    }
}
