//! Linear algebra of forms on a symplectic vector space: wedge products,
//! the symplectic trace, the trace-free projection and the ranks of `J∧`.

use sympcalc::exact::Ring;
use sympcalc::symplin::{
    j_trace, lefschetz_matrix, perp_dim, perp_project, rank_over_functions, wedge, wedge_j, SympSpace,
};

fn main() {
    let ring = Ring::new::<&str>(&[]);
    let n = 2;
    let space = SympSpace::standard(n, &ring);

    let e0 = space.unit_form(&[0], 1, 0);
    let e2 = space.unit_form(&[2], 1, 0);
    let e0e2 = wedge(&e0, &e2, &ring);
    println!(
        "e0 ^ e2 components: {:?}",
        e0e2.comps.iter().map(|c| c.to_string()).collect::<Vec<_>>()
    );

    let j = space.j_form();
    println!("tr J = {}", j_trace(&space, &j).unwrap().comps[0]);

    // J itself is pure trace, so its trace-free part vanishes.
    let phi = j.add(&e0e2);
    let p = perp_project(&space, &phi).unwrap();
    println!(
        "trace of projected form is zero: {}",
        j_trace(&space, &p).unwrap().is_zero()
    );
    println!(
        "projection of J is zero: {}",
        perp_project(&space, &j).unwrap().is_zero()
    );
    println!("J ^ J is nonzero in degree 4: {}", !wedge_j(&space, &j).is_zero());

    for k in 0..=n {
        println!("dim of trace-free {k}-forms for n = {n}: {}", perp_dim(n, k).unwrap());
    }
    for r in 1..2 * n {
        println!(
            "rank of J^ on degree {}: {}",
            r - 1,
            rank_over_functions(&lefschetz_matrix(&space, r))
        );
    }
}
