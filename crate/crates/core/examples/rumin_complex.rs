//! The Rumin–Seshadri complex, uncoupled and coupled. Every consecutive
//! composition is evaluated on all polynomial basis sections of bounded
//! degree and must vanish exactly; a connection that is not symplectically
//! flat breaks the complex and a witness is reported.

use sympcalc::geometry::{builtin_chart, random_connection_matrices, BuiltinKind};
use sympcalc::report::Check;
use sympcalc::rumin::{tau_connection, verify_rs_complex, BundleConnection};

fn show(title: &str, checks: &[Check]) {
    println!("{title}");
    for c in checks {
        println!("  {:<5} {}", if c.passed { "ok" } else { "FAIL" }, c.name);
        if let Some(d) = &c.detail {
            println!("        {d}");
        }
    }
}

fn main() {
    let b = builtin_chart(BuiltinKind::FubiniStudy, 2).unwrap();
    let f = &b.fedosov;
    show(
        "uncoupled, CP^2",
        &verify_rs_complex(&BundleConnection::trivial(f, 1), 2),
    );

    let flat = builtin_chart(BuiltinKind::Flat, 2).unwrap();
    let tau = tau_connection(&flat.fedosov).unwrap();
    println!("Theta of the rank-one twist: {}", tau.theta()[0][0]);
    show("twisted by tau with d tau = J", &verify_rs_complex(&tau, 2));

    let a = random_connection_matrices(flat.fedosov.ring(), 2, 2, 3);
    let random = BundleConnection::new(&flat.fedosov, a, "random").unwrap();
    show("random rank-two connection", &verify_rs_complex(&random, 1));
}
