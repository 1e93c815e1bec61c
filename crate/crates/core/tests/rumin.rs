use sympcalc::geometry::{builtin_chart, random_connection_matrices, BuiltinKind};
use sympcalc::rumin::{lemma1_complex, tau_connection, verify_rs_complex, BundleConnection, RsOperators};
use sympcalc::symplin::{j_trace, perp_project, Form};
use sympcalc_exact::{RatFunc, Rational};

fn all_pass(checks: &[sympcalc::report::Check]) {
    for c in checks {
        assert!(c.passed, "{}/{}: {:?}", c.suite, c.name, c.detail);
    }
}

#[test]
fn uncoupled_complex_on_builtin_and_random_structures() {
    let mut structures = Vec::new();
    for n in 1..=2 {
        structures.push(builtin_chart(BuiltinKind::Flat, n).unwrap());
        structures.push(builtin_chart(BuiltinKind::FubiniStudy, n).unwrap());
    }
    for seed in 0..3 {
        structures.push(builtin_chart(BuiltinKind::Random { seed }, 2).unwrap());
    }
    for b in &structures {
        let conn = BundleConnection::trivial(&b.fedosov, 1);
        all_pass(&verify_rs_complex(&conn, 2));
    }
}

#[test]
fn tau_twisted_connection() {
    for n in 1..=2 {
        let b = builtin_chart(BuiltinKind::Flat, n).unwrap();
        let conn = tau_connection(&b.fedosov).unwrap();
        let theta = conn.theta();
        assert_eq!(theta[0][0].as_constant(), Some(Rational::new(1, 2)));
        assert!(conn.is_symplectically_flat());
        all_pass(&verify_rs_complex(&conn, 2));
        all_pass(&lemma1_complex(&conn, 2));
    }
}

#[test]
fn random_connection_is_not_flat_and_breaks_the_complex() {
    let b = builtin_chart(BuiltinKind::Flat, 2).unwrap();
    let a = random_connection_matrices(b.fedosov.ring(), 2, 2, 7);
    let conn = BundleConnection::new(&b.fedosov, a, "random").unwrap();
    assert!(!conn.is_symplectically_flat());
    let checks = verify_rs_complex(&conn, 1);
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed && c.name.contains('.')).collect();
    assert!(!failed.is_empty());
    assert!(failed[0].detail.as_deref().unwrap().starts_with("on "));
}

#[test]
fn up_operator_on_a_linear_one_form_is_projected_derivative() {
    let b = builtin_chart(BuiltinKind::Flat, 2).unwrap();
    let conn = BundleConnection::trivial(&b.fedosov, 1);
    let ops = RsOperators::new(&conn);
    let space = conn.space.clone();
    let ring = conn.ring().clone();
    // φ = x1 e[1]; dφ = x-derivative only.
    let mut phi = Form::zero(&ring, 4, 1, 1);
    *phi.at_mut(1, 0) = RatFunc::var(&ring, 0);
    let up = ops.up(&phi).unwrap();
    // Independent route: exterior derivative with the averaging convention, then project.
    let mut d = Form::zero(&ring, 4, 2, 1);
    *d.at_mut(0, 0) = RatFunc::from_int(&ring, 1).scale(&Rational::new(1, 2));
    assert_eq!(up, perp_project(&space, &d).unwrap());
    assert!(j_trace(&space, &up).unwrap().is_zero());
}

#[test]
fn down_operator_contracts_with_inverse_form() {
    // n = 1: ψ = x1 e[0]; J^{bc}∂_bψ_c = J^{00}·1 + J^{10}... only ∂_0ψ_0 is nonzero.
    let b = builtin_chart(BuiltinKind::Flat, 1).unwrap();
    let conn = BundleConnection::trivial(&b.fedosov, 1);
    let ops = RsOperators::new(&conn);
    let ring = conn.ring().clone();
    let mut psi = Form::zero(&ring, 2, 1, 1);
    *psi.at_mut(0, 0) = RatFunc::var(&ring, 0);
    *psi.at_mut(1, 0) = RatFunc::var(&ring, 0);
    let down = ops.down(&psi).unwrap();
    // Brute force: Σ_b Σ_c J^{bc} ∂_b ψ_c; only b = 0 contributes.
    let mut expect = RatFunc::zero(&ring);
    for c in 0..2 {
        expect = expect.add(&conn.space.ju(0, c).mul(&psi.at(c, 0).partial(0)));
    }
    assert_eq!(down.at(0, 0), &expect);
    assert!(!expect.is_zero());
}

#[test]
fn lemma1_uncoupled_flat() {
    let b = builtin_chart(BuiltinKind::Flat, 2).unwrap();
    all_pass(&lemma1_complex(&BundleConnection::trivial(&b.fedosov, 1), 2));
}
