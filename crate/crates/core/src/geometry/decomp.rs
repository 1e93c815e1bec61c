use sympcalc_exact::{RatFunc, Rational};

use super::{FedosovStructure, Slot, Tensor};
use crate::symplin::SympSpace;

/// Irreducible pieces of a Fedosov curvature tensor together with the
/// derived tensors `S_a` and `Y_abc`.
#[derive(Clone, Debug)]
pub struct CurvatureDecomp {
    pub r: Tensor,
    pub v: Tensor,
    pub phi: Tensor,
    pub s: Tensor,
    pub y: Tensor,
    /// `∇_c Φ_ab` stored `[c][a][b]`.
    pub nabla_phi: Tensor,
}

const R_SLOTS: [Slot; 4] = [Slot::Down, Slot::Down, Slot::Up, Slot::Down];

/// `Φ_bd = R_ab^a_d / (2(n+1))` and `V = R` minus the five `Φ` terms.
/// Purely algebraic, so it also serves pointwise (constant) data.
pub fn phi_and_v(space: &SympSpace, r: &Tensor) -> (Tensor, Tensor) {
    let d = space.dim;
    let n = space.n as i64;
    let ring = &space.ring;
    let c = Rational::new(1, 2 * (n + 1));
    let phi = Tensor::from_fn(d, &[Slot::Down, Slot::Down], |i| {
        let mut acc = RatFunc::zero(ring);
        for a in 0..d {
            acc = acc.add(r.get(&[a, i[0], a, i[1]]));
        }
        acc.scale(&c)
    });
    let trace_part = phi_terms(space, &phi);
    (phi, r.sub(&trace_part))
}

/// `δ_a^cΦ_bd - δ_b^cΦ_ad + J_adΦ_beJ^{ce} - J_bdΦ_aeJ^{ce} + 2J_abΦ_deJ^{ce}`.
pub fn phi_terms(space: &SympSpace, phi: &Tensor) -> Tensor {
    let d = space.dim;
    let ring = &space.ring;
    // m[b][c] = Φ_be J^{ce}
    let m: Vec<Vec<RatFunc>> = (0..d)
        .map(|b| {
            (0..d)
                .map(|c| {
                    let mut acc = RatFunc::zero(ring);
                    for e in 0..d {
                        let (p, q) = (phi.get(&[b, e]), space.ju(c, e));
                        if !p.is_zero() && !q.is_zero() {
                            acc = acc.add(&p.mul(q));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Tensor::from_fn(d, &R_SLOTS, |i| {
        let (a, b, c, dd) = (i[0], i[1], i[2], i[3]);
        let mut acc = RatFunc::zero(ring);
        if a == c {
            acc = acc.add(phi.get(&[b, dd]));
        }
        if b == c {
            acc = acc.sub(phi.get(&[a, dd]));
        }
        acc = acc.add(&space.jl(a, dd).mul(&m[b][c]));
        acc = acc.sub(&space.jl(b, dd).mul(&m[a][c]));
        acc.add(&space.jl(a, b).mul(&m[dd][c]).mul_int(2))
    })
}

/// Second expression for `Φ`: `J^{ae} R_ae^c_b J_cd / (4(n+1))`.
pub fn phi_from_j_trace(space: &SympSpace, r: &Tensor) -> Tensor {
    let d = space.dim;
    let n = space.n as i64;
    let ring = &space.ring;
    let k = Rational::new(1, 4 * (n + 1));
    Tensor::from_fn(d, &[Slot::Down, Slot::Down], |i| {
        let (b, dd) = (i[0], i[1]);
        let mut acc = RatFunc::zero(ring);
        for a in 0..d {
            for e in 0..d {
                let j = space.ju(a, e);
                if j.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let (x, y) = (r.get(&[a, e, c, b]), space.jl(c, dd));
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.add(&j.mul(x).mul(y));
                    }
                }
            }
        }
        acc.scale(&k)
    })
}

/// Full decomposition. `S_a = J^{bc}∇_cΦ_ab/(2n+1)` and
/// `Y_abc = ∇_eV_ab^e_c/(2n+1)`.
pub fn decompose_curvature(f: &FedosovStructure) -> CurvatureDecomp {
    let space = f.space();
    let d = f.dim();
    let n = f.n() as i64;
    let ring = f.ring();
    let r = f.curvature();
    let (phi, v) = phi_and_v(space, &r);
    let nabla_phi = f.covariant_derivative(&phi);
    let k = Rational::new(1, 2 * n + 1);
    let s = Tensor::from_fn(d, &[Slot::Down], |i| {
        let a = i[0];
        let mut acc = RatFunc::zero(ring);
        for b in 0..d {
            for c in 0..d {
                let (j, x) = (space.ju(b, c), nabla_phi.get(&[c, a, b]));
                if !j.is_zero() && !x.is_zero() {
                    acc = acc.add(&j.mul(x));
                }
            }
        }
        acc.scale(&k)
    });
    let y = if v.is_zero() {
        Tensor::zero(ring, d, &[Slot::Down; 3])
    } else {
        let nabla_v = f.covariant_derivative(&v);
        Tensor::from_fn(d, &[Slot::Down; 3], |i| {
            let mut acc = RatFunc::zero(ring);
            for e in 0..d {
                acc = acc.add(nabla_v.get(&[e, i[0], i[1], e, i[2]]));
            }
            acc.scale(&k)
        })
    };
    CurvatureDecomp {
        r,
        v,
        phi,
        s,
        y,
        nabla_phi,
    }
}
