use std::sync::Arc;

use proptest::prelude::*;
use sympcalc::symplin::{
    basis, binomial, j_trace, lefschetz_matrix, perp_dim, perp_frame, perp_project, rank_over_functions, trace_matrix,
    wedge, Form, SympSpace,
};
use sympcalc_exact::{RatFunc, Rational, Ring};

fn ring() -> Arc<Ring> {
    Ring::new::<&str>(&[])
}

fn form(ring: &Arc<Ring>, dim: usize, k: usize, coeffs: &[i64]) -> Form {
    let mut f = Form::zero(ring, dim, k, 1);
    for (i, c) in f.comps.iter_mut().enumerate() {
        *c = RatFunc::from_int(ring, coeffs[i % coeffs.len()]);
    }
    f
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..=20)
}

#[test]
fn perp_dimensions_match_trace_kernels() {
    let r = ring();
    for n in 1..=3 {
        let space = SympSpace::standard(n, &r);
        for k in 0..=n {
            let (frame, free) = perp_frame(&space, k);
            assert_eq!(frame.len(), perp_dim(n, k).unwrap(), "n={n} k={k}");
            assert_eq!(free.len(), frame.len());
            if k >= 2 {
                let t = trace_matrix(&space, k);
                assert_eq!(binomial(2 * n, k) - rank_over_functions(&t), frame.len());
            }
        }
        assert!(perp_dim(n, n + 1).is_err());
    }
}

#[test]
fn lefschetz_ranks_are_maximal() {
    let r = ring();
    for n in 1..=3 {
        let space = SympSpace::standard(n, &r);
        for deg in 1..2 * n {
            let rank = rank_over_functions(&lefschetz_matrix(&space, deg));
            let expect = binomial(2 * n, deg - 1).min(binomial(2 * n, deg + 1));
            assert_eq!(rank, expect, "n={n} r={deg}");
        }
    }
}

#[test]
fn wedge_of_basis_covectors_is_averaged() {
    let r = ring();
    let space = SympSpace::standard(2, &r);
    let e0 = space.unit_form(&[0], 1, 0);
    let e1 = space.unit_form(&[1], 1, 0);
    let w = wedge(&e0, &e1, &r);
    let b = basis(4, 2);
    let (pos, _) = b.locate(&[0, 1]).unwrap();
    assert_eq!(w.at(pos, 0), &RatFunc::from_int(&r, 1).scale(&Rational::new(1, 2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn binomial_pascal_and_symmetry(n in 1usize..30, k in 0usize..30) {
        prop_assume!(k <= n);
        prop_assert_eq!(binomial(n, k), binomial(n, n - k));
        if k >= 1 {
            prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        }
    }

    #[test]
    fn wedge_is_graded_commutative(n in 1usize..=3, k in 0usize..=3, l in 0usize..=3, a in coeffs(), b in coeffs()) {
        let r = ring();
        let dim = 2 * n;
        prop_assume!(k <= dim && l <= dim);
        let alpha = form(&r, dim, k, &a);
        let beta = form(&r, dim, l, &b);
        let ab = wedge(&alpha, &beta, &r);
        let ba = wedge(&beta, &alpha, &r);
        let expect = if (k * l) % 2 == 0 { ba } else { ba.scale(&Rational::from_int(-1)) };
        prop_assert_eq!(ab, expect);
    }

    #[test]
    fn wedge_is_associative(k in 0usize..=2, l in 0usize..=2, m in 0usize..=2, a in coeffs(), b in coeffs(), c in coeffs()) {
        let r = ring();
        let dim = 6;
        let (x, y, z) = (form(&r, dim, k, &a), form(&r, dim, l, &b), form(&r, dim, m, &c));
        let left = wedge(&wedge(&x, &y, &r), &z, &r);
        let right = wedge(&x, &wedge(&y, &z, &r), &r);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn projection_is_idempotent_and_trace_free(n in 2usize..=3, k in 2usize..=3, a in coeffs()) {
        prop_assume!(k <= n);
        let r = ring();
        let space = SympSpace::standard(n, &r);
        let phi = form(&r, 2 * n, k, &a);
        let p = perp_project(&space, &phi).unwrap();
        prop_assert!(j_trace(&space, &p).unwrap().is_zero());
        prop_assert_eq!(perp_project(&space, &p).unwrap(), p.clone());
        // The removed part lies in the image of J∧, so projecting it gives zero.
        prop_assert!(perp_project(&space, &phi.sub(&p)).unwrap().is_zero());
    }
}
