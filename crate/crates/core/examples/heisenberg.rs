//! Cohomology of the Heisenberg algebra with coefficients in induced
//! representations: the Chevalley–Eilenberg complex against the BGG-type
//! complex, and the Kostant prediction with Weyl dimensions.

use sympcalc::heisenberg::{cohomology, kostant_predict, weyl_dim, DynkinLabel};
use sympcalc::induced::RepDesc;

fn main() {
    for (rep, n) in [
        ("trivial", 1),
        ("standard", 2),
        ("sym:2(standard)", 2),
        ("perp_ext:2(standard)", 2),
    ] {
        let desc: RepDesc = rep.parse().unwrap();
        let (report, checks) = cohomology(&desc, n, 64).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        println!(
            "{rep} at n = {n}: CE {:?}, BGG {:?}, failed checks {failed:?}",
            report.ce_dims, report.bgg_dims
        );
        if let Some(k) = &report.kostant_dims {
            println!("  Kostant prediction {k:?}");
        }
    }

    let labels = DynkinLabel(vec![1, 0, 0]);
    for (r, l) in kostant_predict(&labels).unwrap().iter().enumerate() {
        println!("H^{r} of the standard rep of sp(6): {l}, dim {}", weyl_dim(l).unwrap());
    }
}
