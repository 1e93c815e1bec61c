//! Curvature of Fedosov structures: the split `R = V + (Φ terms)` on
//! projective space and on a seeded random structure, with the structural
//! identities checked exactly.

use sympcalc::geometry::{builtin_chart, decompose_curvature, BuiltinKind};
use sympcalc::suites::geometry_checks;

fn main() {
    for kind in [BuiltinKind::FubiniStudy, BuiltinKind::Random { seed: 1 }] {
        let b = builtin_chart(kind, 2).unwrap();
        let f = &b.fedosov;
        let dc = decompose_curvature(f);
        println!("{} (n = {})", f.chart.name, f.n());
        println!("  V = 0: {}", dc.v.is_zero());
        println!("  Phi_00 = {}", dc.phi.get(&[0, 0]));
        for c in geometry_checks(f, 1) {
            println!("  {:<5} {}/{}", if c.passed { "ok" } else { "FAIL" }, c.suite, c.name);
        }
    }
}
