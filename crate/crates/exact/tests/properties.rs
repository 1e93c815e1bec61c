use std::sync::Arc;

use proptest::prelude::*;
use sympcalc_exact::{linalg, parse_expr, Monomial, Poly, RatFunc, Rational, Ring};

fn ring() -> Arc<Ring> {
    Ring::new(&["x", "y", "z"])
}

fn poly_strategy(max_terms: usize) -> impl Strategy<Value = Vec<([u16; 3], i64)>> {
    prop::collection::vec(([0u16..3, 0u16..3, 0u16..2], -5i64..=5), 1..=max_terms)
}

fn build(ring: &Arc<Ring>, terms: &[([u16; 3], i64)]) -> Poly {
    Poly::from_terms(
        ring,
        terms
            .iter()
            .map(|(e, c)| (Monomial::from_exponents(e), Rational::from_int(*c)))
            .collect(),
    )
}

type Terms = Vec<([u16; 3], i64)>;

fn ratfunc_strategy() -> impl Strategy<Value = (Terms, Terms)> {
    (poly_strategy(4), poly_strategy(3))
}

fn build_rf(ring: &Arc<Ring>, spec: &(Terms, Terms)) -> RatFunc {
    let num = build(ring, &spec.0);
    let mut den = build(ring, &spec.1);
    if den.is_zero() {
        den = Poly::one(ring);
    }
    RatFunc::new(num, den)
}

/// A handful of rational points at which none of the given functions has a
/// vanishing denominator.
fn good_points(fs: &[&RatFunc]) -> Vec<Vec<Rational>> {
    let candidates = [
        [Rational::new(1, 2), Rational::new(-3, 5), Rational::new(7, 3)],
        [Rational::new(2, 7), Rational::new(5, 4), Rational::new(-1, 9)],
        [Rational::new(-11, 6), Rational::new(1, 13), Rational::new(3, 2)],
        [Rational::new(17, 5), Rational::new(-2, 3), Rational::new(4, 11)],
        [Rational::new(-5, 8), Rational::new(9, 7), Rational::new(-6, 5)],
        [Rational::new(3, 19), Rational::new(23, 6), Rational::new(1, 4)],
    ];
    candidates
        .iter()
        .filter(|p| fs.iter().all(|f| !f.den().eval(&p[..]).is_zero()))
        .map(|p| p.to_vec())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in ratfunc_strategy(), b in ratfunc_strategy(), c in ratfunc_strategy()) {
        let r = ring();
        let (a, b, c) = (build_rf(&r, &a), build_rf(&r, &b), build_rf(&r, &c));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        let lhs = a.mul(&b.add(&c));
        let rhs = a.mul(&b).add(&a.mul(&c));
        prop_assert_eq!(&lhs, &rhs);
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.div(&a).is_one());
        }
        for p in good_points(&[&a, &b, &c, &lhs]) {
            let (va, vb, vc) = (a.eval(&p).unwrap(), b.eval(&p).unwrap(), c.eval(&p).unwrap());
            prop_assert_eq!(lhs.eval(&p).unwrap(), &va * &(&vb + &vc));
        }
    }

    #[test]
    fn canonical_form_is_reduced(a in ratfunc_strategy()) {
        let r = ring();
        let f = build_rf(&r, &a);
        prop_assert!(sympcalc_exact::gcd(f.num(), f.den()).is_one() || f.is_zero());
        prop_assert!(f.den().lc().is_one());
    }

    #[test]
    fn mixed_partials_commute(a in ratfunc_strategy(), u in 0usize..3, v in 0usize..3) {
        let f = build_rf(&ring(), &a);
        prop_assert_eq!(f.partial(u).partial(v), f.partial(v).partial(u));
    }

    #[test]
    fn quotient_rule_oracle(a in ratfunc_strategy(), v in 0usize..3) {
        // Independent route: differentiate numerator and denominator as
        // polynomials and evaluate (p'q - pq')/q^2 pointwise.
        let f = build_rf(&ring(), &a);
        let df = f.partial(v);
        let (p, q) = (f.num(), f.den());
        let (dp, dq) = (p.partial(v), q.partial(v));
        for pt in good_points(&[&f]) {
            let qv = q.eval(&pt);
            let expected = (&dp.eval(&pt) * &qv - &p.eval(&pt) * &dq.eval(&pt)) / (&qv * &qv);
            prop_assert_eq!(df.eval(&pt).unwrap(), expected);
        }
    }

    #[test]
    fn parse_print_roundtrip(a in ratfunc_strategy()) {
        let r = ring();
        let f = build_rf(&r, &a);
        let text = f.to_string();
        prop_assert_eq!(parse_expr(&text, &r).unwrap(), f);
    }

    #[test]
    fn rational_field_ops(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let x = Rational::new(a, b);
        let y = Rational::new(c, d);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
        }
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }
}

#[test]
fn parsed_quotient_matches_text_at_points() {
    let r = Ring::new(&["x", "y"]);
    let f = parse_expr("1/(1+x^2+y^2)", &r).unwrap();
    assert!(f.num().is_one());
    assert_eq!(f.den().to_string(), "x^2 + y^2 + 1");
    let pts = [
        (1, 2, 3, 4),
        (-5, 3, 2, 7),
        (0, 1, 9, 2),
        (7, 3, -1, 5),
        (11, 13, 17, 19),
    ];
    for (a, b, c, d) in pts {
        let (x, y) = (Rational::new(a, b), Rational::new(c, d));
        // Direct evaluation of the text's arithmetic.
        let direct = Rational::ONE / (Rational::ONE + &x * &x + &y * &y);
        assert_eq!(f.eval(&[x, y]).unwrap(), direct);
    }
}

#[test]
fn derivative_of_reciprocal() {
    let r = Ring::new(&["x"]);
    let f = parse_expr("1/(1+x^2)", &r).unwrap();
    let expected = parse_expr("-2*x/(1+x^2)^2", &r).unwrap();
    assert_eq!(f.partial(0), expected);
    assert_eq!(parse_expr("x^2", &r).unwrap().partial(0).to_string(), "2*x");
    let r2 = Ring::new(&["x", "y"]);
    assert!(parse_expr("x", &r2).unwrap().partial_by_name("y").unwrap().is_zero());
    assert!(parse_expr("x", &r2).unwrap().partial_by_name("w").is_err());
}

#[test]
fn zero_tests() {
    let r = Ring::new(&["x", "y"]);
    let z = |s: &str| parse_expr(s, &r).unwrap().is_zero();
    assert!(z("(x+y)^2 - x^2 - 2*x*y - y^2"));
    assert!(z("x/x - 1"));
    let f = parse_expr("x^3*y/(1+y^2)", &r).unwrap();
    assert!(f.partial(0).partial(1).sub(&f.partial(1).partial(0)).is_zero());
    assert!(!z("x - y"));
}

#[test]
fn gcd_with_shared_powers() {
    let r = Ring::new(&["x1", "y1", "x2", "y2"]);
    let d = parse_expr("1 + x1^2 + y1^2 + x2^2 + y2^2", &r).unwrap();
    let a = parse_expr("x1*y2 - x2*y1", &r).unwrap();
    let f = a.div(&d.pow(3));
    let g = parse_expr("x1^2 + 3", &r).unwrap().div(&d.pow(2));
    let s = f.add(&g);
    assert_eq!(s.den(), d.pow(3).num());
    // Cancellation of a common factor after subtraction.
    let h = d.mul(&a).div(&d.pow(2)).sub(&a.div(&d));
    assert!(h.is_zero());
    let k = d.pow(2).mul(&a).add(&d).div(&d.pow(3));
    assert_eq!(k.den(), d.pow(2).num());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fraction_free_rank_matches_rref(
        rows in 1usize..=6,
        cols in 1usize..=6,
        entries in prop::collection::vec((-3i64..=3, 1i64..=4), 36),
        dup in 0usize..6,
    ) {
        let mut m: Vec<Vec<Rational>> = (0..rows)
            .map(|i| (0..cols).map(|j| { let (a, b) = entries[i * 6 + j]; Rational::new(a, b) }).collect())
            .collect();
        // Force some dependence so low ranks are exercised.
        if rows > 1 {
            let src = m[dup % rows].clone();
            let last = m.last_mut().unwrap();
            for (x, y) in last.iter_mut().zip(&src) {
                *x = y * &Rational::new(-2, 3);
            }
        }
        prop_assert_eq!(linalg::rank_fraction_free(&m), linalg::rank(&m));
    }
}
