//! Verification suites. Each returns a list of checks; none of them panic
//! on a failed identity.

use sympcalc_exact::{RatFunc, Rational};

use crate::geometry::{
    decompose_curvature, index_label, kahler_consequence_residual, kahler_decompose, phi_from_j_trace, phi_terms,
    pointwise_kahler, u_trace_residual, CurvatureDecomp, FedosovStructure, KahlerStructure, Slot, Tensor,
};
use crate::report::Check;
use crate::sections::monomials;

/// First nonzero component of `t`, labelled.
pub fn residual(name: &str, t: &Tensor) -> Option<String> {
    t.first_nonzero()
        .map(|(idx, v)| format!("{} = {v}", index_label(name, &t.slots, &idx)))
}

/// Structural curvature identities on a Fedosov structure, plus the
/// contracted Bianchi identity and the formula for `∇Y`. `deg_bound` bounds
/// the polynomial vector fields used for the commutator check.
pub fn geometry_checks(f: &FedosovStructure, deg_bound: usize) -> Vec<Check> {
    let dc = decompose_curvature(f);
    geometry_checks_with(f, &dc, deg_bound)
}

pub fn geometry_checks_with(f: &FedosovStructure, dc: &CurvatureDecomp, deg_bound: usize) -> Vec<Check> {
    const S: &str = "curvature";
    let space = f.space();
    let d = f.dim();
    let n = f.n() as i64;
    let ring = f.ring();
    let zero = RatFunc::zero(ring);
    let r = &dc.r;
    let mut out = Vec::new();

    // Commutator of covariant derivatives on polynomial vector fields.
    let mut comm = None;
    'fields: for m in monomials(ring, deg_bound) {
        for comp in 0..d {
            let x = Tensor::from_fn(d, &[Slot::Up], |i| if i[0] == comp { m.clone() } else { zero.clone() });
            let nnx = f.covariant_derivative(&f.covariant_derivative(&x));
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let lhs = nnx.get(&[a, b, c]).sub(nnx.get(&[b, a, c]));
                        let rhs = r.get(&[a, b, c, comp]).mul(&m);
                        if lhs != rhs {
                            comm = Some(format!("X = ({m}) e_{comp}: component ({a},{b},{c})"));
                            break 'fields;
                        }
                    }
                }
            }
        }
    }
    out.push(Check::from_residual(S, "commutator_identity", comm));

    let first_bianchi = Tensor::from_fn(d, &[Slot::Down, Slot::Down, Slot::Up, Slot::Down], |i| {
        let (a, b, c, dd) = (i[0], i[1], i[2], i[3]);
        r.get(&[a, b, c, dd])
            .add(r.get(&[b, dd, c, a]))
            .add(r.get(&[dd, a, c, b]))
    });
    out.push(Check::from_residual(
        S,
        "first_bianchi",
        residual("cyc R", &first_bianchi),
    ));

    let j_sym = Tensor::from_fn(d, &[Slot::Down; 4], |i| {
        let (a, b, dd, e) = (i[0], i[1], i[2], i[3]);
        let mut acc = zero.clone();
        for c in 0..d {
            acc = acc.add(&r.get(&[a, b, c, dd]).mul(space.jl(c, e)));
            acc = acc.sub(&r.get(&[a, b, c, e]).mul(space.jl(c, dd)));
        }
        acc
    });
    out.push(Check::from_residual(S, "j_symmetry", residual("RJ", &j_sym)));

    let nabla_r = f.covariant_derivative(r);
    let second = Tensor::from_fn(d, &[Slot::Down, Slot::Down, Slot::Down, Slot::Up, Slot::Down], |i| {
        let (a, b, c, dd, e) = (i[0], i[1], i[2], i[3], i[4]);
        nabla_r
            .get(&[a, b, c, dd, e])
            .add(nabla_r.get(&[b, c, a, dd, e]))
            .add(nabla_r.get(&[c, a, b, dd, e]))
    });
    out.push(Check::from_residual(
        S,
        "second_bianchi",
        residual("cyc nabla R", &second),
    ));

    let phi_sym = Tensor::from_fn(d, &[Slot::Down, Slot::Down], |i| {
        dc.phi.get(&[i[0], i[1]]).sub(dc.phi.get(&[i[1], i[0]]))
    });
    out.push(Check::from_residual(S, "phi_symmetric", residual("Phi", &phi_sym)));
    let phi2 = phi_from_j_trace(space, r);
    out.push(Check::from_residual(
        S,
        "phi_two_traces_agree",
        residual("Phi - Phi'", &dc.phi.sub(&phi2)),
    ));

    let v_trace = Tensor::from_fn(d, &[Slot::Down, Slot::Down], |i| {
        let mut acc = zero.clone();
        for a in 0..d {
            acc = acc.add(dc.v.get(&[a, i[0], a, i[1]]));
        }
        acc
    });
    out.push(Check::from_residual(S, "v_trace_free", residual("V_a.^a_.", &v_trace)));
    let reassembled = dc.v.add(&phi_terms(space, &dc.phi));
    out.push(Check::from_residual(
        S,
        "reassembly",
        residual("V + Phi terms - R", &reassembled.sub(r)),
    ));

    // Y_abc = ∇_aΦ_bc - ∇_bΦ_ac - (J_ca S_b - J_cb S_a) + 2 J_ab S_c
    let s = &dc.s;
    let np = &dc.nabla_phi;
    let lemma3a = Tensor::from_fn(d, &[Slot::Down; 3], |i| {
        let (a, b, c) = (i[0], i[1], i[2]);
        let rhs = np
            .get(&[a, b, c])
            .sub(np.get(&[b, a, c]))
            .sub(&space.jl(c, a).mul(s.get(&[b])))
            .add(&space.jl(c, b).mul(s.get(&[a])))
            .add(&space.jl(a, b).mul(s.get(&[c])).mul_int(2));
        dc.y.get(&[a, b, c]).sub(&rhs)
    });
    out.push(Check::from_residual(
        "lemma3",
        "contracted_bianchi",
        residual("Y - rhs", &lemma3a),
    ));

    let ny = f.covariant_derivative(&dc.y);
    let ns = f.covariant_derivative(s);
    // ∇_a S_d - J^{ef} Φ_ae Φ_df, contracted with J^{ad}.
    let mut scalar = zero.clone();
    for a in 0..d {
        for dd in 0..d {
            let j = space.ju(a, dd);
            if j.is_zero() {
                continue;
            }
            let mut inner = ns.get(&[a, dd]).clone();
            for e in 0..d {
                for ff in 0..d {
                    let jef = space.ju(e, ff);
                    if !jef.is_zero() {
                        inner = inner.sub(&jef.mul(dc.phi.get(&[a, e])).mul(dc.phi.get(&[dd, ff])));
                    }
                }
            }
            scalar = scalar.add(&j.mul(&inner));
        }
    }
    let half = Rational::new(1, 2);
    let lemma3b = Tensor::from_fn(d, &[Slot::Down, Slot::Down], |i| {
        let (b, c) = (i[0], i[1]);
        let mut lhs = zero.clone();
        let mut rhs = zero.clone();
        let mut phiphi = zero.clone();
        for a in 0..d {
            for dd in 0..d {
                let j = space.ju(a, dd);
                if j.is_zero() {
                    continue;
                }
                lhs = lhs.add(&j.mul(ny.get(&[a, b, c, dd])));
                for e in 0..d {
                    let x = dc.v.get(&[b, c, e, a]);
                    if !x.is_zero() {
                        rhs = rhs.add(&j.mul(x).mul(dc.phi.get(&[e, dd])));
                    }
                }
                phiphi = phiphi.add(&j.mul(dc.phi.get(&[b, a])).mul(dc.phi.get(&[c, dd])));
            }
        }
        let skew_ns = ns.get(&[b, c]).sub(ns.get(&[c, b])).scale(&half);
        rhs = rhs.add(&phiphi.sub(&skew_ns).mul_int(4 * n));
        rhs = rhs.add(&space.jl(b, c).mul(&scalar).mul_int(2));
        lhs.sub(&rhs)
    });
    out.push(Check::from_residual(
        "lemma3",
        "nabla_y",
        residual("lhs - rhs", &lemma3b),
    ));
    out
}

/// A fixed rational point away from the origin, for pointwise checks.
fn sample_point(dim: usize) -> Vec<Rational> {
    let base = [(1, 3), (-1, 2), (1, 5), (2, 7), (-3, 4), (1, 6)];
    (0..dim).map(|i| Rational::new(base[i % 6].0, base[i % 6].1)).collect()
}

/// Kähler suite on a Kähler chart: the curvature pieces `U, Σ, Ξ, V`, the
/// constancy of `Λ` and of `Φ/g`, and the contraction identity
/// `J_c^a V_ab^c_d = -2 n(n+2)/(n+1) Σ_bd`, both symbolically on the chart
/// and pointwise on `trials` seeded random Kähler potentials.
pub fn kahler_checks(k: &KahlerStructure, seed: u64, trials: usize) -> Vec<Check> {
    const S: &str = "kahler";
    let f = &k.fedosov;
    let d = f.dim();
    let n = f.n();
    let dc = decompose_curvature(f);
    let kd = kahler_decompose(&k.data, &dc.r);
    let mut out = Vec::new();

    for (name, t) in [
        ("u_zero", &kd.u),
        ("sigma_zero", &kd.sigma),
        ("xi_zero", &kd.xi),
        ("v_zero", &dc.v),
    ] {
        out.push(Check::from_residual(S, name, residual(&name[..name.len() - 5], t)));
    }
    let lambda_grad = (0..d).find(|&a| !kd.lambda.partial(a).is_zero());
    let mut lambda = Check::from_residual(
        S,
        "lambda_constant",
        lambda_grad.map(|a| format!("d_{a} Lambda = {}", kd.lambda.partial(a))),
    );
    if let Some(c) = kd.lambda.as_constant() {
        lambda = lambda.with("lambda", c.to_string());
    }
    out.push(lambda);

    let g = &k.data.g;
    let c = dc.phi.get(&[0, 0]).div(&g[0][0]);
    let proportional = match c.as_constant() {
        None => Some(format!("Phi_00 / g_00 = {c} is not constant")),
        Some(_) => {
            let diff = Tensor::from_fn(d, &[Slot::Down, Slot::Down], |i| {
                dc.phi.get(i).sub(&g[i[0]][i[1]].mul(&c))
            });
            residual("Phi - c g", &diff)
        }
    };
    let mut phi_check = Check::from_residual(S, "phi_constant_multiple_of_g", proportional);
    if let Some(c) = c.as_constant() {
        phi_check = phi_check.with("c", c.to_string());
    }
    out.push(phi_check);

    out.push(Check::from_residual(
        S,
        "u_trace_free",
        u_trace_residual(&k.data, &kd.u),
    ));
    out.push(Check::from_residual(
        S,
        "contraction_identity",
        residual("JV + c Sigma", &kahler_consequence_residual(&k.data, &dc.v, &kd.sigma)),
    ));

    let point = sample_point(d);
    let mut pointwise = None;
    let mut nontrivial = 0usize;
    for t in 0..trials as u64 {
        let s = seed.wrapping_add(t);
        let pk = match pointwise_kahler(n, s, &point) {
            Ok(pk) => pk,
            Err(e) => {
                pointwise = Some(format!("seed {s}: {e}"));
                break;
            }
        };
        if let Some(r) = pk.nabla_j_residual {
            pointwise = Some(format!("seed {s}: metric is not Kähler: {r}"));
            break;
        }
        if !pk.decomp.sigma.is_zero() {
            nontrivial += 1;
        }
        let res = kahler_consequence_residual(&pk.data, &pk.v, &pk.decomp.sigma);
        if let Some(r) = residual("JV + c Sigma", &res) {
            pointwise = Some(format!("seed {s}: {r}"));
            break;
        }
        if let Some(r) = u_trace_residual(&pk.data, &pk.decomp.u) {
            pointwise = Some(format!("seed {s}: {r}"));
            break;
        }
    }
    out.push(
        Check::from_residual(S, "contraction_identity_random_potentials", pointwise)
            .with("trials", trials)
            .with("nonzero_sigma", nontrivial),
    );
    out
}
