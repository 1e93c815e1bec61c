//! Kähler suite on projective space, plus the contraction identity between
//! the Fedosov Weyl-type tensor and the trace-free Ricci part on random
//! Kähler potentials.

use sympcalc::geometry::{builtin_chart, BuiltinKind};
use sympcalc::suites::kahler_checks;

fn main() {
    let b = builtin_chart(BuiltinKind::FubiniStudy, 2).unwrap();
    let k = b.kahler.as_ref().unwrap();
    for c in kahler_checks(k, 0, 4) {
        let data: Vec<String> = c.data.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!(
            "{:<5} {} {}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            data.join(" ")
        );
    }
}
