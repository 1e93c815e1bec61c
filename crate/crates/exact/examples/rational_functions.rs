//! Exact rational functions: parsing, arithmetic, differentiation and
//! evaluation.

use sympcalc_exact::{parse_expr, Rational, Ring};

fn main() {
    let ring = Ring::new(&["x", "y"]);
    let f = parse_expr("1/(1 + x^2)", &ring).unwrap();
    let g = parse_expr("(x^2 - y^2)/(x - y)", &ring).unwrap();

    println!("f          = {f}");
    println!("df/dx      = {}", f.partial(0));
    // Common factors cancel on construction.
    println!("g          = {g}");
    println!("f * g      = {}", f.mul(&g));
    println!("f + 1/f    = {}", f.add(&f.recip()));

    let p = [Rational::new(1, 2), Rational::new(-3, 4)];
    println!("g(1/2,-3/4) = {}", g.eval(&p).unwrap());

    // Mixed partials commute exactly.
    let h = parse_expr("x^3*y/(1 + x*y)", &ring).unwrap();
    assert!(h.partial(0).partial(1).sub(&h.partial(1).partial(0)).is_zero());
    println!("d2h/dxdy   = {}", h.partial(0).partial(1));
}
