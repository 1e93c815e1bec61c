use sympcalc::heisenberg::{
    bgg_complex, build_rep, ce_complex, ce_complex_direct, cohomology, cohomology_dims, jwedge_rank_checks,
    kostant_predict, standard_rep, weyl_dim, Chain, DynkinLabel, HRep,
};
use sympcalc::induced::RepDesc;
use sympcalc::symplin::{binomial, perp_dim};
use sympcalc::Error;
use sympcalc_exact::Rational;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn desc(s: &str) -> RepDesc {
    s.parse().unwrap()
}

fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| (0..b.len()).fold(Rational::ZERO, |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

fn is_zero(m: &[Vec<Rational>]) -> bool {
    m.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

#[test]
fn standard_theta_is_single_entry_from_rho_to_sigma() {
    let rep = standard_rep(1).unwrap();
    assert_eq!(rep.dim(), 4);
    for i in 0..4 {
        for j in 0..4 {
            let expect = if (i, j) == (0, 3) { q(1) } else { q(0) };
            assert_eq!(rep.theta[i][j], expect, "theta[{i}][{j}]");
        }
    }
    let t2 = matmul(&rep.theta, &rep.theta);
    assert!(is_zero(&matmul(&t2, &rep.theta)));
}

#[test]
fn broken_representation_is_rejected() {
    let mut rep = standard_rep(1).unwrap();
    rep.theta[0][3] = q(2);
    assert!(rep.residual().is_some());
    let err = HRep::new(1, rep.partial.clone(), rep.theta.clone(), "bad").unwrap_err();
    assert!(matches!(err, Error::Invariant(_)));
}

#[test]
fn induced_representation_dimensions() {
    let std1 = standard_rep(1).unwrap();
    let dual = build_rep(&desc("dual(standard)"), 1, 60).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(dual.theta[i][j], -std1.theta[j][i].clone());
        }
    }
    assert_eq!(
        build_rep(&desc("sym:2(standard)"), 1, 60).unwrap().dim(),
        binomial(5, 2)
    );
    assert_eq!(build_rep(&desc("ext:2(standard)"), 2, 60).unwrap().dim(), 15);
    // Trace-free part of Λ^2 of a 6-dimensional symplectic space.
    assert_eq!(build_rep(&desc("perp_ext:2(standard)"), 2, 60).unwrap().dim(), 15 - 1);
    let err = build_rep(&desc("sym:3(standard)"), 2, 20).unwrap_err();
    assert!(matches!(err, Error::Config(_)));
}

#[test]
fn cohomology_of_explicit_chains() {
    let zero_chain = Chain {
        dims: vec![1, 3, 3, 1],
        maps: vec![vec![vec![q(0)]; 3], vec![vec![q(0); 3]; 3], vec![vec![q(0); 3]]],
    };
    assert_eq!(cohomology_dims(&zero_chain).unwrap(), vec![1, 3, 3, 1]);
    let exact = Chain {
        dims: vec![1, 1],
        maps: vec![vec![vec![q(1)]]],
    };
    assert_eq!(cohomology_dims(&exact).unwrap(), vec![0, 0]);
    let bad = Chain {
        dims: vec![1, 1, 1],
        maps: vec![vec![vec![q(1)]], vec![vec![q(1)]]],
    };
    assert!(matches!(cohomology_dims(&bad), Err(Error::NotAComplex(_))));
}

#[test]
fn trivial_representation_n1() {
    let rep = build_rep(&RepDesc::Trivial, 1, 60).unwrap();
    // The bracket is nonzero, so the differential carries J even though θ and ∂ vanish.
    assert_eq!(cohomology_dims(&ce_complex(&rep)).unwrap(), vec![1, 2, 2, 1]);
    assert_eq!(cohomology_dims(&ce_complex_direct(&rep)).unwrap(), vec![1, 2, 2, 1]);
    let bgg = bgg_complex(&rep).unwrap();
    assert_eq!(bgg.dims, vec![1, 2, 2, 1]);
    assert_eq!(cohomology_dims(&bgg).unwrap(), vec![1, 2, 2, 1]);
}

#[test]
fn standard_representation_complexes() {
    for n in 1..=2 {
        let rep = standard_rep(n).unwrap();
        for chain in [ce_complex(&rep), ce_complex_direct(&rep), bgg_complex(&rep).unwrap()] {
            assert!(chain.composition_residual().is_none());
            let dims = cohomology_dims(&chain).unwrap();
            let alt: i64 = dims
                .iter()
                .enumerate()
                .map(|(r, &d)| if r % 2 == 0 { d as i64 } else { -(d as i64) })
                .sum();
            assert_eq!(alt, chain.euler_characteristic());
        }
        let direct = ce_complex_direct(&rep);
        assert_eq!(direct.euler_characteristic(), 0);
    }
}

#[test]
fn weyl_dimensions_against_independent_counts() {
    for m in 1..=4 {
        assert_eq!(weyl_dim(&DynkinLabel(vec![0; m])).unwrap(), 1);
        // Symmetric powers of the standard representation of sp(2m).
        for k in 0..=4u32 {
            let mut l = vec![0; m];
            l[0] = k;
            let expect = binomial(2 * m + k as usize - 1, k as usize) as u64;
            assert_eq!(weyl_dim(&DynkinLabel(l)).unwrap(), expect, "C{m} sym^{k}");
        }
        // Fundamental weights are the trace-free exterior powers.
        for k in 1..=m {
            let mut l = vec![0; m];
            l[k - 1] = 1;
            assert_eq!(
                weyl_dim(&DynkinLabel(l)).unwrap(),
                perp_dim(m, k).unwrap() as u64,
                "C{m} w{k}"
            );
        }
    }
    assert_eq!(weyl_dim(&DynkinLabel(vec![1, 0])).unwrap(), 4);
    assert_eq!(weyl_dim(&DynkinLabel(vec![0, 1])).unwrap(), 5);
}

#[test]
fn kostant_table_entries() {
    let trivial = kostant_predict(&DynkinLabel(vec![0, 0, 0])).unwrap();
    assert_eq!(trivial.len(), 6);
    assert_eq!(trivial[0], DynkinLabel(vec![0, 0]));
    let std = kostant_predict(&DynkinLabel(vec![1, 0, 0])).unwrap();
    assert_eq!(std[0], DynkinLabel(vec![0, 0]));
    assert_eq!(std[1], DynkinLabel(vec![2, 0]));
    assert_eq!(std[2], DynkinLabel(vec![1, 1]));
    assert_eq!(std[3], std[2]);
    assert_eq!(std[5], std[0]);
    let generic = kostant_predict(&DynkinLabel(vec![3, 5, 7, 11])).unwrap();
    assert_eq!(generic[1], DynkinLabel(vec![9, 7, 11]));
    assert_eq!(generic[2], DynkinLabel(vec![3, 13, 11]));
    assert_eq!(generic[3], DynkinLabel(vec![3, 5, 19]));
    assert!(kostant_predict(&DynkinLabel(vec![1])).is_err());
}

#[test]
fn lemma4_on_every_listed_representation() {
    let reps = [
        "trivial",
        "standard",
        "dual(standard)",
        "sym:2(standard)",
        "ext:2(standard)",
        "perp_ext:2(standard)",
    ];
    for n in 1..=2 {
        for r in reps {
            let (report, checks) = cohomology(&desc(r), n, 60).unwrap();
            for c in &checks {
                assert!(c.passed, "{r} n={n}: {} {:?}", c.name, c.detail);
            }
            assert_eq!(report.ce_dims, report.bgg_dims, "{r} n={n}");
            assert_eq!(report.ce_dims.len(), 2 * n + 2);
        }
    }
    let (report, _) = cohomology(&RepDesc::Standard, 3, 60).unwrap();
    assert_eq!(report.ce_dims, report.bgg_dims);
}

#[test]
fn kostant_agrees_with_computed_cohomology() {
    for k in 0..=2 {
        let d = if k == 0 {
            "trivial".to_string()
        } else {
            format!("sym:{k}(standard)")
        };
        let (report, _) = cohomology(&desc(&d), 2, 60).unwrap();
        let predicted = report.kostant_dims.clone().unwrap();
        let computed: Vec<u64> = report.ce_dims.iter().map(|&x| x as u64).collect();
        assert_eq!(predicted, computed, "{d}");
        assert!(report.matched);
    }
    let (report, _) = cohomology(&RepDesc::Standard, 2, 60).unwrap();
    assert_eq!(report.ce_dims[0], 1);
    assert_eq!(report.ce_dims[1], 10);
}

#[test]
fn jwedge_ranks() {
    for n in 1..=3 {
        for c in jwedge_rank_checks(n) {
            assert!(c.passed, "n={n}: {} {:?}", c.name, c.data);
        }
    }
}
