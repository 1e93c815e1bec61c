#![allow(clippy::needless_range_loop)]

use sympcalc::geometry::{builtin_chart, Builtin, BuiltinKind};
use sympcalc::induced::RepDesc;
use sympcalc::report::Check;
use sympcalc::rumin::verify_rs_complex;
use sympcalc::tractor::{a1_example_checks, skew_form, tractor_checks, TractorConnection, TractorSection};
use sympcalc_exact::RatFunc;

fn structures() -> Vec<Builtin> {
    let mut v = vec![
        builtin_chart(BuiltinKind::Flat, 1).unwrap(),
        builtin_chart(BuiltinKind::Flat, 2).unwrap(),
        builtin_chart(BuiltinKind::FubiniStudy, 1).unwrap(),
        builtin_chart(BuiltinKind::FubiniStudy, 2).unwrap(),
    ];
    for seed in 0..3 {
        v.push(builtin_chart(BuiltinKind::Random { seed }, 2).unwrap());
    }
    v
}

fn all_pass(checks: &[Check], what: &str) {
    for c in checks {
        assert!(c.passed, "{what}: {}/{}: {:?} {:?}", c.suite, c.name, c.detail, c.data);
    }
}

#[test]
fn tractor_suite_on_all_structures() {
    for b in structures() {
        let tc = TractorConnection::new(&b.fedosov).unwrap();
        all_pass(
            &tractor_checks(&tc, b.kahler.as_ref().map(|k| &k.data), 1),
            &b.fedosov.chart.name,
        );
    }
}

#[test]
fn random_structure_tractors_are_not_flat() {
    let b = builtin_chart(BuiltinKind::Random { seed: 1 }, 2).unwrap();
    let tc = TractorConnection::new(&b.fedosov).unwrap();
    assert!(!tc.decomp.v.is_zero());
    assert!(!tc.conn.is_symplectically_flat());
}

#[test]
fn flat_chart_nabla_of_rho_unit() {
    let b = builtin_chart(BuiltinKind::Flat, 1).unwrap();
    let tc = TractorConnection::new(&b.fedosov).unwrap();
    let ring = b.fedosov.ring().clone();
    let z = RatFunc::zero(&ring);
    let one = RatFunc::one(&ring);
    let t = TractorSection {
        sigma: z.clone(),
        mu: vec![z.clone(), z.clone()],
        rho: one.clone(),
    };
    let n = tc.nabla(&t);
    for a in 0..2 {
        assert!(n[a].sigma.is_zero() && n[a].rho.is_zero());
        for bb in 0..2 {
            assert_eq!(&n[a].mu[bb], b.fedosov.space().jl(a, bb));
        }
    }
    let s = TractorSection {
        sigma: one.clone(),
        mu: vec![z.clone(), z.clone()],
        rho: z.clone(),
    };
    assert_eq!(skew_form(b.fedosov.space(), &s, &t), one);
    assert!(skew_form(b.fedosov.space(), &t, &t).is_zero());
}

#[test]
fn skew_form_leibniz_on_fubini_study() {
    let b = builtin_chart(BuiltinKind::FubiniStudy, 1).unwrap();
    let tc = TractorConnection::new(&b.fedosov).unwrap();
    let ring = b.fedosov.ring().clone();
    let x = |i| RatFunc::var(&ring, i);
    let t = TractorSection {
        sigma: x(0),
        mu: vec![x(1).mul(&x(0)), RatFunc::from_int(&ring, 2)],
        rho: x(1),
    };
    let s = TractorSection {
        sigma: x(1).mul(&x(1)),
        mu: vec![x(0), x(1)],
        rho: RatFunc::from_int(&ring, -1),
    };
    let space = b.fedosov.space();
    let (nt, ns) = (tc.nabla(&t), tc.nabla(&s));
    for a in 0..2 {
        let lhs = skew_form(space, &t, &s).partial(a);
        let rhs = skew_form(space, &nt[a], &s).add(&skew_form(space, &t, &ns[a]));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn induced_identity_and_dual() {
    let b = builtin_chart(BuiltinKind::FubiniStudy, 1).unwrap();
    let tc = TractorConnection::new(&b.fedosov).unwrap();
    let sym1 = tc.induced(&"sym:1(standard)".parse().unwrap(), 100).unwrap();
    assert_eq!(sym1.a, tc.conn.a);
    let dual = tc.induced(&RepDesc::Dual(Box::new(RepDesc::Standard)), 100).unwrap();
    let theta = tc.conn.theta();
    let theta_dual = dual.theta();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(theta_dual[i][j], theta[j][i].neg());
        }
    }
}

#[test]
fn induced_bundles_on_cp1_are_flat() {
    let b = builtin_chart(BuiltinKind::FubiniStudy, 1).unwrap();
    let tc = TractorConnection::new(&b.fedosov).unwrap();
    for desc in [
        "sym:2(standard)",
        "perp_ext:2(standard)",
        "tensor(standard,dual(standard))",
    ] {
        let conn = tc.induced(&desc.parse().unwrap(), 100).unwrap();
        assert!(conn.is_symplectically_flat(), "{desc}");
    }
}

#[test]
fn coupled_complex_on_cp1_tractors() {
    let b = builtin_chart(BuiltinKind::FubiniStudy, 1).unwrap();
    let tc = TractorConnection::new(&b.fedosov).unwrap();
    all_pass(&verify_rs_complex(&tc.conn, 2), "cp1");
}

#[test]
fn a1_example_operators() {
    let mut refuted = 0;
    for b in structures() {
        let checks = a1_example_checks(&b.fedosov, 1);
        all_pass(&checks, &b.fedosov.chart.name);
        let plus = checks.iter().find(|c| c.name == "plus_sign_variant").unwrap();
        // Where V is nonzero the opposite sign of the V term is refuted.
        if plus.data["distinguishable"] == true {
            assert_eq!(plus.data["holds"], false, "{}", b.fedosov.chart.name);
            refuted += 1;
        }
    }
    assert_eq!(refuted, 3);
}
