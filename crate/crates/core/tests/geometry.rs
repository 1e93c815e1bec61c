#![allow(clippy::needless_range_loop)]

use sympcalc::geometry::{
    builtin_chart, decompose_curvature, kahler_consequence_residual, kahler_decompose, phi_from_j_trace,
    pointwise_kahler, u_trace_residual, BuiltinKind, FedosovStructure, Slot, Tensor,
};
use sympcalc::suites::geometry_checks;
use sympcalc_exact::{RatFunc, Rational};

fn fs(n: usize) -> sympcalc::geometry::Builtin {
    builtin_chart(BuiltinKind::FubiniStudy, n).unwrap()
}

#[test]
fn fubini_study_metric_at_origin() {
    let b = fs(1);
    let k = b.kahler.unwrap();
    let origin = [Rational::ZERO, Rational::ZERO];
    let g = |a: usize, c: usize| k.data.g[a][c].eval(&origin).unwrap();
    assert_eq!(g(0, 0), g(1, 1));
    assert!(g(0, 1).is_zero());
    assert_eq!(g(0, 0), Rational::ONE);
}

#[test]
fn fubini_study_is_symplectically_flat_with_phi_multiple_of_g() {
    for n in 1..=2 {
        let b = fs(n);
        let d = decompose_curvature(&b.fedosov);
        assert!(d.v.is_zero(), "V != 0 on CP^{n}");
        let k = b.kahler.unwrap();
        let c = d.phi.get(&[0, 0]).div(&k.data.g[0][0]);
        assert!(c.as_constant().is_some(), "Phi/g not constant: {c}");
        for a in 0..2 * n {
            for e in 0..2 * n {
                assert!(d.phi.get(&[a, e]).sub(&k.data.g[a][e].mul(&c)).is_zero());
            }
        }
        assert_eq!(c.as_constant().unwrap(), Rational::ONE);
    }
}

#[test]
fn fubini_study_kahler_pieces() {
    for n in 1..=2 {
        let b = fs(n);
        let k = b.kahler.unwrap();
        let r = b.fedosov.curvature();
        let kd = kahler_decompose(&k.data, &r);
        assert!(kd.u.is_zero());
        assert!(kd.xi.is_zero());
        assert!(kd.sigma.is_zero());
        for a in 0..2 * n {
            assert!(kd.lambda.partial(a).is_zero());
        }
        assert!(!kd.lambda.is_zero());
    }
}

/// Independent oracle: the commutator of covariant derivatives applied to a
/// vector field built from the Christoffel symbols directly.
fn commutator_on_vector(f: &FedosovStructure, x: &[RatFunc]) -> Tensor {
    let d = f.dim();
    let xt = Tensor::from_fn(d, &[Slot::Up], |i| x[i[0]].clone());
    let nx = f.covariant_derivative(&xt);
    let nnx = f.covariant_derivative(&nx);
    Tensor::from_fn(d, &[Slot::Down, Slot::Down, Slot::Up], |i| {
        nnx.get(&[i[0], i[1], i[2]]).sub(nnx.get(&[i[1], i[0], i[2]]))
    })
}

#[test]
fn curvature_matches_commutator_on_random_structures() {
    for seed in 0..3 {
        let b = builtin_chart(BuiltinKind::Random { seed }, 2).unwrap();
        let f = &b.fedosov;
        let r = f.curvature();
        let ring = f.ring().clone();
        let x: Vec<RatFunc> = (0..4)
            .map(|i| {
                RatFunc::var(&ring, i)
                    .mul(&RatFunc::var(&ring, (i + 1) % 4))
                    .add(&RatFunc::from_int(&ring, i as i64))
            })
            .collect();
        let lhs = commutator_on_vector(f, &x);
        let rhs = Tensor::from_fn(4, &[Slot::Down, Slot::Down, Slot::Up], |i| {
            let mut acc = RatFunc::zero(&ring);
            for e in 0..4 {
                acc = acc.add(&r.get(&[i[0], i[1], i[2], e]).mul(&x[e]));
            }
            acc
        });
        assert!(lhs.sub(&rhs).is_zero());
    }
}

#[test]
fn phi_two_traces_agree() {
    for seed in 0..3 {
        let b = builtin_chart(BuiltinKind::Random { seed }, 2).unwrap();
        let r = b.fedosov.curvature();
        let (phi, _) = sympcalc::geometry::phi_and_v(b.fedosov.space(), &r);
        let other = phi_from_j_trace(b.fedosov.space(), &r);
        assert_eq!(phi, other);
    }
}

#[test]
fn suite_identities_hold_on_all_structures() {
    let mut structures = vec![
        builtin_chart(BuiltinKind::Flat, 1).unwrap(),
        builtin_chart(BuiltinKind::Flat, 2).unwrap(),
        fs(1),
        fs(2),
    ];
    for seed in 0..3 {
        structures.push(builtin_chart(BuiltinKind::Random { seed }, 2).unwrap());
    }
    for b in &structures {
        for check in geometry_checks(&b.fedosov, 2) {
            assert!(
                check.passed,
                "{} on {}: {:?}",
                check.name, b.fedosov.chart.name, check.detail
            );
        }
    }
}

#[test]
fn random_structure_has_nonzero_v() {
    let b = builtin_chart(BuiltinKind::Random { seed: 0 }, 2).unwrap();
    assert!(!decompose_curvature(&b.fedosov).v.is_zero());
}

#[test]
fn kahler_consequence_holds_pointwise() {
    let points = [
        [
            Rational::new(1, 3),
            Rational::new(-1, 2),
            Rational::new(1, 5),
            Rational::new(2, 7),
        ],
        [
            Rational::new(-1, 4),
            Rational::new(1, 6),
            Rational::new(-2, 9),
            Rational::new(1, 2),
        ],
    ];
    for seed in 0..2 {
        for p in &points {
            let pk = pointwise_kahler(2, seed, p).unwrap();
            assert!(pk.nabla_j_residual.is_none(), "{:?}", pk.nabla_j_residual);
            assert!(!pk.decomp.sigma.is_zero());
            assert!(kahler_consequence_residual(&pk.data, &pk.v, &pk.decomp.sigma).is_zero());
            assert_eq!(u_trace_residual(&pk.data, &pk.decomp.u), None);
        }
    }
}
