//! Bundle connections, their symplectic curvature `Θ`, and the coupled
//! Rumin–Seshadri operators together with the two-row complex they are
//! built from.
//!
//! Sections of `Λ^k ⊗ E` are [`Form`]s whose value index runs over a frame
//! of `E`. The same connection type serves the algebraic (Heisenberg) case:
//! there `differentiate` is off, there are no Christoffel symbols and
//! `A_a` is the action of `∂_a`.

use std::sync::Arc;

use sympcalc_exact::linalg::Matrix;
use sympcalc_exact::{RatFunc, Rational, Ring};

use crate::error::Error;
use crate::geometry::{FedosovStructure, Tensor};
use crate::report::Check;
use crate::sections::{basis_sections, first_failure, form_witness, FibreBasis};
use crate::symplin::{basis, perp_project, wedge, wedge_j, Form, SympSpace};

/// `∇_a Σ^v = ∂_a Σ^v + (A_a)^v_w Σ^w`, extended to `E`-valued forms with
/// the Christoffel symbols of the underlying Fedosov structure.
#[derive(Clone, Debug)]
pub struct BundleConnection {
    pub space: Arc<SympSpace>,
    pub gamma: Option<Tensor>,
    pub a: Vec<Matrix<RatFunc>>,
    pub differentiate: bool,
    pub label: String,
}

fn zero_matrix(ring: &Arc<Ring>, r: usize) -> Matrix<RatFunc> {
    vec![vec![RatFunc::zero(ring); r]; r]
}

fn mat_mul(x: &Matrix<RatFunc>, y: &Matrix<RatFunc>, ring: &Arc<Ring>) -> Matrix<RatFunc> {
    sympcalc_exact::linalg::mat_mul(x, y, &RatFunc::zero(ring))
}

fn mat_sub(x: &Matrix<RatFunc>, y: &Matrix<RatFunc>) -> Matrix<RatFunc> {
    x.iter()
        .zip(y)
        .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a.sub(b)).collect())
        .collect()
}

fn mat_add(x: &Matrix<RatFunc>, y: &Matrix<RatFunc>) -> Matrix<RatFunc> {
    x.iter()
        .zip(y)
        .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a.add(b)).collect())
        .collect()
}

fn mat_scale(x: &Matrix<RatFunc>, c: &RatFunc) -> Matrix<RatFunc> {
    x.iter().map(|r| r.iter().map(|a| a.mul(c)).collect()).collect()
}

fn first_entry(m: &Matrix<RatFunc>) -> Option<(usize, usize, &RatFunc)> {
    m.iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, x)| (i, j, x)))
        .find(|(_, _, x)| !x.is_zero())
}

impl BundleConnection {
    /// Connection on a bundle over a Fedosov structure.
    pub fn new(f: &FedosovStructure, a: Vec<Matrix<RatFunc>>, label: &str) -> Result<Self, Error> {
        let d = f.dim();
        let r = a.first().map_or(0, |m| m.len());
        if a.len() != d || r == 0 || a.iter().any(|m| m.len() != r || m.iter().any(|row| row.len() != r)) {
            return Err(Error::Config(format!(
                "connection needs {d} square matrices of equal size"
            )));
        }
        Ok(BundleConnection {
            space: f.space().clone(),
            gamma: Some(f.gamma.clone()),
            a,
            differentiate: true,
            label: label.to_string(),
        })
    }

    /// The trivial bundle of the given rank with `A = 0`: the uncoupled case.
    pub fn trivial(f: &FedosovStructure, rank: usize) -> Self {
        let a = (0..f.dim()).map(|_| zero_matrix(f.ring(), rank)).collect();
        Self::new(f, a, &format!("trivial rank {rank}")).expect("shape is consistent")
    }

    /// Pointwise (constant) action of `∂_a` on a fixed vector space.
    pub fn algebraic(space: Arc<SympSpace>, partials: Vec<Matrix<RatFunc>>, label: &str) -> Self {
        BundleConnection {
            space,
            gamma: None,
            a: partials,
            differentiate: false,
            label: label.to_string(),
        }
    }

    pub fn rank(&self) -> usize {
        self.a[0].len()
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.space.ring
    }

    /// `(∇_a φ)` for every `a`; each entry is a form of the same degree.
    pub fn nabla(&self, phi: &Form) -> Vec<Form> {
        let d = self.dim();
        let r = phi.rank;
        let b = phi.basis();
        let one = RatFunc::one(self.ring());
        (0..d)
            .map(|a| {
                let mut out = Form::zero(self.ring(), d, phi.k, r);
                let am = &self.a[a];
                for (t, tuple) in b.tuples.iter().enumerate() {
                    for v in 0..r {
                        let dphi = if self.differentiate {
                            phi.at(t, v).partial(a)
                        } else {
                            RatFunc::zero(self.ring())
                        };
                        let mut terms = vec![(Rational::ONE, &one, &dphi)];
                        if let Some(g) = &self.gamma {
                            let mut probe = tuple.clone();
                            for s in 0..tuple.len() {
                                for e in 0..d {
                                    let c = g.get(&[e, a, tuple[s]]);
                                    if c.is_zero() {
                                        continue;
                                    }
                                    probe[s] = e;
                                    if let Some((i, sign)) = b.locate(&probe) {
                                        terms.push((Rational::from_int(-sign), c, phi.at(i, v)));
                                    }
                                }
                                probe[s] = tuple[s];
                            }
                        }
                        for w in 0..r {
                            terms.push((Rational::ONE, &am[v][w], phi.at(t, w)));
                        }
                        let acc = RatFunc::sum_of_products(self.ring(), terms);
                        *out.at_mut(t, v) = acc;
                    }
                }
                out
            })
            .collect()
    }

    /// `F_ab = ∂_aA_b - ∂_bA_a + A_aA_b - A_bA_a`, so that
    /// `(∇_a∇_b - ∇_b∇_a)Σ = F_ab Σ` on sections.
    pub fn curvature(&self) -> Vec<Vec<Matrix<RatFunc>>> {
        let d = self.dim();
        let ring = self.ring();
        let r = self.rank();
        let mut f = vec![vec![zero_matrix(ring, r); d]; d];
        for a in 0..d {
            for b in a + 1..d {
                let mut m = mat_sub(
                    &mat_mul(&self.a[a], &self.a[b], ring),
                    &mat_mul(&self.a[b], &self.a[a], ring),
                );
                if self.differentiate {
                    for (v, row) in m.iter_mut().enumerate() {
                        for (w, x) in row.iter_mut().enumerate() {
                            *x = x.add(&self.a[b][v][w].partial(a)).sub(&self.a[a][v][w].partial(b));
                        }
                    }
                }
                f[b][a] = m.iter().map(|row| row.iter().map(|x| x.neg()).collect()).collect();
                f[a][b] = m;
            }
        }
        f
    }

    /// `Θ = J^{ab}F_ab / (4n)`; if the connection is symplectically flat
    /// then `F_ab = 2J_ab Θ`.
    pub fn theta(&self) -> Matrix<RatFunc> {
        let f = self.curvature();
        let d = self.dim();
        let ring = self.ring();
        let mut acc = zero_matrix(ring, self.rank());
        for a in 0..d {
            for b in 0..d {
                let j = self.space.ju(a, b);
                if !j.is_zero() {
                    acc = mat_add(&acc, &mat_scale(&f[a][b], j));
                }
            }
        }
        let c = RatFunc::constant(ring, Rational::new(1, 4 * self.n() as i64));
        mat_scale(&acc, &c)
    }

    /// First component of `F_ab - 2J_abΘ` that is not zero.
    pub fn flatness_residual(&self, theta: &Matrix<RatFunc>) -> Option<String> {
        let f = self.curvature();
        let d = self.dim();
        for a in 0..d {
            for b in a + 1..d {
                let two_j = self.space.jl(a, b).mul_int(2);
                let res = mat_sub(&f[a][b], &mat_scale(theta, &two_j));
                if let Some((v, w, x)) = first_entry(&res) {
                    return Some(format!("(F - 2J Theta)_{a}{b}[{v}][{w}] = {x}"));
                }
            }
        }
        None
    }

    pub fn is_symplectically_flat(&self) -> bool {
        self.flatness_residual(&self.theta()).is_none()
    }

    /// `∇_aΘ = ∂_aΘ + [A_a, Θ]`.
    pub fn nabla_theta(&self, theta: &Matrix<RatFunc>) -> Vec<Matrix<RatFunc>> {
        let ring = self.ring();
        (0..self.dim())
            .map(|a| {
                let comm = mat_sub(&mat_mul(&self.a[a], theta, ring), &mat_mul(theta, &self.a[a], ring));
                if self.differentiate {
                    let d: Matrix<RatFunc> = theta.iter().map(|r| r.iter().map(|x| x.partial(a)).collect()).collect();
                    mat_add(&d, &comm)
                } else {
                    comm
                }
            })
            .collect()
    }

    pub fn nabla_theta_residual(&self, theta: &Matrix<RatFunc>) -> Option<String> {
        self.nabla_theta(theta)
            .iter()
            .enumerate()
            .find_map(|(a, m)| first_entry(m).map(|(v, w, x)| format!("(nabla_{a} Theta)[{v}][{w}] = {x}")))
    }
}

/// `(Alt∇φ)_{i0..ik} = (1/(k+1)) Σ_p (-1)^p ∇_{i_p}φ_{i0..î_p..ik}`.
pub fn alt(d_phi: &[Form], ring: &Arc<Ring>) -> Form {
    let first = &d_phi[0];
    let (dim, k, r) = (first.dim, first.k, first.rank);
    let mut out = Form::zero(ring, dim, k + 1, r);
    if k + 1 > dim {
        return out;
    }
    let ob = out.basis();
    let ib = basis(dim, k);
    let w = Rational::new(1, k as i64 + 1);
    let one = RatFunc::one(ring);
    let mut rest = Vec::with_capacity(k);
    for (t, tuple) in ob.tuples.iter().enumerate() {
        for v in 0..r {
            let mut terms = Vec::with_capacity(k + 1);
            for p in 0..=k {
                rest.clear();
                rest.extend(tuple.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, &x)| x));
                let x = d_phi[tuple[p]].at(ib.position(&rest), v);
                let c = if p % 2 == 0 { w.clone() } else { -w.clone() };
                terms.push((c, &one, x));
            }
            *out.at_mut(t, v) = RatFunc::sum_of_products(ring, terms);
        }
    }
    out
}

/// `J^{bc} ∇_b φ_{c...}`, a form of one degree less.
pub fn j_divergence(space: &SympSpace, d_phi: &[Form]) -> Form {
    let first = &d_phi[0];
    let (dim, k, r) = (first.dim, first.k, first.rank);
    assert!(k >= 1);
    let mut out = Form::zero(&space.ring, dim, k - 1, r);
    let ob = out.basis();
    let ib = first.basis();
    let mut idx = vec![0usize; k];
    for (t, rest) in ob.tuples.iter().enumerate() {
        idx[1..].copy_from_slice(rest);
        for v in 0..r {
            let mut terms = Vec::new();
            for (b, db) in d_phi.iter().enumerate() {
                for c in 0..dim {
                    let j = space.ju(b, c);
                    if j.is_zero() {
                        continue;
                    }
                    idx[0] = c;
                    if let Some((i, sign)) = ib.locate(&idx) {
                        terms.push((Rational::from_int(sign), j, db.at(i, v)));
                    }
                }
            }
            *out.at_mut(t, v) = RatFunc::sum_of_products(&space.ring, terms);
        }
    }
    out
}

/// The coupled Rumin–Seshadri operators of a connection with a fixed `Θ`.
#[derive(Clone, Debug)]
pub struct RsOperators<'a> {
    pub conn: &'a BundleConnection,
    pub theta: Matrix<RatFunc>,
}

impl<'a> RsOperators<'a> {
    pub fn new(conn: &'a BundleConnection) -> Self {
        RsOperators {
            theta: conn.theta(),
            conn,
        }
    }

    fn ring(&self) -> &Arc<Ring> {
        self.conn.ring()
    }

    fn n(&self) -> usize {
        self.conn.n()
    }

    /// Coupled exterior derivative with the averaging convention.
    pub fn alt_nabla(&self, phi: &Form) -> Form {
        alt(&self.conn.nabla(phi), self.ring())
    }

    /// `Λ^k_⊥ ⊗ E → Λ^{k+1}_⊥ ⊗ E` for `k < n`:
    /// `Alt∇φ - (k/(2(n+1-k))) J ∧ (J^{ab}∇_aφ_{b...})`.
    pub fn up(&self, phi: &Form) -> Result<Form, Error> {
        let (k, n) = (phi.k, self.n());
        if k >= n {
            return Err(Error::Config(format!(
                "up operator needs degree < n (degree {k}, n {n})"
            )));
        }
        let d = self.conn.nabla(phi);
        let out = alt(&d, self.ring());
        if k == 0 {
            return Ok(out);
        }
        let div = j_divergence(&self.conn.space, &d);
        let c = Rational::new(k as i64, 2 * (n + 1 - k) as i64);
        Ok(out.sub(&wedge_j(&self.conn.space, &div).scale(&c)))
    }

    /// `Λ^{k+1}_⊥ ⊗ E → Λ^k_⊥ ⊗ E`: `J^{bc}∇_bψ_{c...}`.
    pub fn down(&self, psi: &Form) -> Result<Form, Error> {
        if psi.k == 0 {
            return Err(Error::Config("down operator needs degree >= 1".into()));
        }
        Ok(j_divergence(&self.conn.space, &self.conn.nabla(psi)))
    }

    /// Second-order operator on `Λ^n_⊥ ⊗ E`: `Alt∇(J^{bc}∇_bψ_{c...}) - (2/n)Θψ`.
    pub fn middle(&self, psi: &Form) -> Result<Form, Error> {
        let n = self.n();
        if psi.k != n {
            return Err(Error::Config(format!(
                "middle operator needs degree n = {n}, got {}",
                psi.k
            )));
        }
        let inner = self.alt_nabla(&self.down(psi)?);
        Ok(inner.sub(&psi.apply_endo(&self.theta).scale(&Rational::new(2, n as i64))))
    }

    /// `D_k(ω, ψ) = (Alt∇ω + (-1)^k J∧ψ, Alt∇ψ + (-1)^k Θω)` on
    /// `(Λ^k ⊕ Λ^{k-1}) ⊗ E`; the second slot is absent in degree 0.
    pub fn lemma1_d(&self, omega: &Form, psi: Option<&Form>) -> (Form, Form) {
        let space = &self.conn.space;
        let k = omega.k;
        let sign = if k.is_multiple_of(2) {
            Rational::ONE
        } else {
            -Rational::ONE
        };
        let mut top = self.alt_nabla(omega);
        let theta_omega = omega.apply_endo(&self.theta).scale(&sign);
        let bottom = match psi {
            Some(p) => {
                top = top.add(&wedge(&space.j_form(), p, &space.ring).scale(&sign));
                self.alt_nabla(p).add(&theta_omega)
            }
            None => theta_omega,
        };
        (top, bottom)
    }
}

/// Rank-one connection `A_a = τ_a` on a chart with the standard constant
/// `J`, where `τ_{2i+1} = x_{2i}`, so that `∂_aτ_b - ∂_bτ_a = J_ab` and
/// `Θ = 1/2`.
pub fn tau_connection(f: &FedosovStructure) -> Result<BundleConnection, Error> {
    let d = f.dim();
    let ring = f.ring();
    let std = crate::symplin::standard_j(ring, f.n());
    if f.space().j_lower != std {
        return Err(Error::Config("tau connection needs the standard constant J".into()));
    }
    let a = (0..d)
        .map(|a| {
            let x = if a % 2 == 1 {
                RatFunc::var(ring, a - 1)
            } else {
                RatFunc::zero(ring)
            };
            vec![vec![x]]
        })
        .collect();
    BundleConnection::new(f, a, "tau")
}

struct Composition<'s> {
    name: String,
    degree: usize,
    sections: &'s [(Form, String)],
}

fn composition_check(suite: &str, c: Composition<'_>, apply: impl Fn(&Form) -> Result<Form, Error> + Sync) -> Check {
    let failure = first_failure(c.sections.len(), |i| {
        let (s, label) = &c.sections[i];
        match apply(s) {
            Ok(out) => form_witness(&out).map(|w| format!("on {label}: {w}")),
            Err(e) => Some(format!("on {label}: {e}")),
        }
    });
    let status = if failure.is_none() { "zero" } else { "nonzero" };
    Check::from_residual(suite, &c.name, failure)
        .with("operator_pair", c.name.clone())
        .with("degree", c.degree)
        .with("status", status)
        .with("sections", c.sections.len())
}

/// Every consecutive composition in the coupled Rumin–Seshadri complex,
/// evaluated on all basis sections of polynomial degree at most
/// `deg_bound`, plus the structural facts the complex relies on.
pub fn verify_rs_complex(conn: &BundleConnection, deg_bound: usize) -> Vec<Check> {
    const S: &str = "rs";
    let ops = RsOperators::new(conn);
    let space = &conn.space;
    let ring = conn.ring();
    let n = conn.n();
    let r = conn.rank();
    let mut out = Vec::new();

    let flat = conn.flatness_residual(&ops.theta);
    out.push(Check::from_residual(S, "symplectically_flat", flat.clone()).with("connection", conn.label.clone()));
    if flat.is_none() {
        out.push(Check::from_residual(
            S,
            "nabla_theta_zero",
            conn.nabla_theta_residual(&ops.theta),
        ));
    }

    let sections: Vec<Vec<(Form, String)>> = (0..=n)
        .map(|k| basis_sections(&FibreBasis::perp(space, k, r), ring, deg_bound))
        .collect();

    for k in 0..n.saturating_sub(1) {
        let c = Composition {
            name: format!("up{}.up{k}", k + 1),
            degree: k,
            sections: &sections[k],
        };
        out.push(composition_check(S, c, |s| ops.up(&ops.up(s)?)));
    }
    let c = Composition {
        name: format!("middle.up{}", n - 1),
        degree: n - 1,
        sections: &sections[n - 1],
    };
    out.push(composition_check(S, c, |s| ops.middle(&ops.up(s)?)));
    let c = Composition {
        name: format!("down{n}.middle"),
        degree: n,
        sections: &sections[n],
    };
    out.push(composition_check(S, c, |s| ops.down(&ops.middle(s)?)));
    for k in (2..=n).rev() {
        let c = Composition {
            name: format!("down{}.down{k}", k - 1),
            degree: k,
            sections: &sections[k],
        };
        out.push(composition_check(S, c, |s| ops.down(&ops.down(s)?)));
    }

    // The first-order operator agrees with π∘∇ on trace-free forms.
    for k in 1..n {
        let c = Composition {
            name: format!("up{k}_is_projected_derivative"),
            degree: k,
            sections: &sections[k],
        };
        out.push(composition_check(S, c, |s| {
            Ok(ops.up(s)?.sub(&perp_project(space, &ops.alt_nabla(s))?))
        }));
    }
    // Alt∇ of the down operator already lands in Λ^n_⊥.
    let c = Composition {
        name: "middle_intermediate_is_trace_free".into(),
        degree: n,
        sections: &sections[n],
    };
    out.push(composition_check(S, c, |s| {
        Ok(wedge_j(space, &ops.alt_nabla(&ops.down(s)?)))
    }));
    // J ∧ (down ψ) = (2/n) Alt∇ψ on Λ^n_⊥.
    let c = Composition {
        name: "wedge_j_down_identity".into(),
        degree: n,
        sections: &sections[n],
    };
    let two_over_n = Rational::new(2, n as i64);
    out.push(composition_check(S, c, |s| {
        Ok(wedge_j(space, &ops.down(s)?).sub(&ops.alt_nabla(s).scale(&two_over_n)))
    }));
    out
}

/// Compositions of the two-row complex `D_{k+1} ∘ D_k` for
/// `k = 0..2n-1`, and `∇Θ = 0`.
pub fn lemma1_complex(conn: &BundleConnection, deg_bound: usize) -> Vec<Check> {
    const S: &str = "lemma1";
    let ops = RsOperators::new(conn);
    let space = &conn.space;
    let ring = conn.ring();
    let dim = conn.dim();
    let r = conn.rank();
    let mut out = Vec::new();
    let flat = conn.flatness_residual(&ops.theta);
    out.push(Check::from_residual(S, "symplectically_flat", flat.clone()).with("connection", conn.label.clone()));
    if flat.is_some() {
        return out;
    }
    out.push(Check::from_residual(
        S,
        "nabla_theta_zero",
        conn.nabla_theta_residual(&ops.theta),
    ));
    for k in 0..dim {
        // Degree-k sections are pairs; each basis section lives in one slot.
        let top = basis_sections(&FibreBasis::full(space, k, r), ring, deg_bound);
        let bottom = if k == 0 {
            Vec::new()
        } else {
            basis_sections(&FibreBasis::full(space, k - 1, r), ring, deg_bound)
        };
        let zero_top = Form::zero(ring, dim, k, r);
        let zero_bottom = (k > 0).then(|| Form::zero(ring, dim, k - 1, r));
        let count = top.len() + bottom.len();
        let failure = first_failure(count, |i| {
            let (omega, psi, label) = if i < top.len() {
                (top[i].0.clone(), zero_bottom.clone(), format!("({}, 0)", top[i].1))
            } else {
                let (p, l) = &bottom[i - top.len()];
                (zero_top.clone(), Some(p.clone()), format!("(0, {l})"))
            };
            let (a, b) = ops.lemma1_d(&omega, psi.as_ref());
            let (c, e) = ops.lemma1_d(&a, Some(&b));
            form_witness(&c)
                .map(|w| format!("on {label}: top {w}"))
                .or_else(|| form_witness(&e).map(|w| format!("on {label}: bottom {w}")))
        });
        let status = if failure.is_none() { "zero" } else { "nonzero" };
        out.push(
            Check::from_residual(S, &format!("d{}.d{k}", k + 1), failure)
                .with("degree", k)
                .with("status", status)
                .with("sections", count),
        );
    }
    out
}
