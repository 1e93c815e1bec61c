//! The symplectic tractor connection on projective space: curvature formula
//! against the commutator, the endomorphism Θ and the induced bundles.

use sympcalc::geometry::{builtin_chart, BuiltinKind};
use sympcalc::rumin::verify_rs_complex;
use sympcalc::tractor::{tractor_checks, TractorConnection};

fn main() {
    let b = builtin_chart(BuiltinKind::FubiniStudy, 1).unwrap();
    let tc = TractorConnection::new(&b.fedosov).unwrap();
    let kahler = b.kahler.as_ref().map(|k| &k.data);
    for c in tractor_checks(&tc, kahler, 2) {
        println!("{:<5} {}", if c.passed { "ok" } else { "FAIL" }, c.name);
    }

    let theta = tc.conn.theta();
    println!("Theta on CP^1 tractors:");
    for row in &theta {
        println!(
            "  [{}]",
            row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        );
    }

    let sym2 = tc.induced(&"sym:2(standard)".parse().unwrap(), 64).unwrap();
    println!(
        "sym^2 of the tractor bundle: rank {}, flat: {}",
        sym2.rank(),
        sym2.is_symplectically_flat()
    );
    let failed = verify_rs_complex(&tc.conn, 2).iter().filter(|c| !c.passed).count();
    println!("coupled complex on tractors: {failed} failed compositions");
}
