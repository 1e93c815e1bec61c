//! Symplectic multilinear algebra on a 2n-dimensional fibre: alternating
//! (bundle-valued) forms, the symplectic trace, wedging with J and the
//! projection onto the trace-free forms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use sympcalc_exact::linalg::{self, Matrix};
use sympcalc_exact::{RatFunc, Rational, Ring};

use crate::error::Error;

/// Increasing index tuples of length `k` in `0..dim`, listed
/// lexicographically, with a bitmask lookup table.
#[derive(Debug)]
pub struct FormBasis {
    pub dim: usize,
    pub k: usize,
    pub tuples: Vec<Vec<usize>>,
    index: Vec<usize>,
}

const MAX_DIM: usize = 10;

fn build_basis(dim: usize, k: usize) -> FormBasis {
    let mut tuples = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    rec(0, dim, k, &mut cur, &mut tuples);
    let mut index = vec![usize::MAX; 1 << dim];
    for (i, t) in tuples.iter().enumerate() {
        let mask: usize = t.iter().map(|&x| 1 << x).sum();
        index[mask] = i;
    }
    FormBasis { dim, k, tuples, index }
}

/// Shared basis for `(dim, k)`; `k > dim` yields the empty basis.
pub fn basis(dim: usize, k: usize) -> Arc<FormBasis> {
    static CACHE: OnceLock<Vec<Vec<Arc<FormBasis>>>> = OnceLock::new();
    assert!(dim <= MAX_DIM, "fibre dimension {dim} too large");
    let all = CACHE.get_or_init(|| {
        (0..=MAX_DIM)
            .map(|d| (0..=MAX_DIM + 2).map(|k| Arc::new(build_basis(d, k))).collect())
            .collect()
    });
    all[dim][k.min(MAX_DIM + 2)].clone()
}

impl FormBasis {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Position and sign of the basis element `e[i0]^e[i1]^...` for an
    /// arbitrary index list; `None` if an index repeats.
    pub fn locate(&self, idx: &[usize]) -> Option<(usize, i64)> {
        debug_assert_eq!(idx.len(), self.k);
        let mut mask = 0usize;
        for &i in idx {
            if mask & (1 << i) != 0 {
                return None;
            }
            mask |= 1 << i;
        }
        let mut inversions = 0;
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                if idx[a] > idx[b] {
                    inversions += 1;
                }
            }
        }
        Some((self.index[mask], if inversions % 2 == 0 { 1 } else { -1 }))
    }

    pub fn position(&self, sorted: &[usize]) -> usize {
        let mask: usize = sorted.iter().map(|&x| 1 << x).sum();
        self.index[mask]
    }

    pub fn label(&self, i: usize) -> String {
        if self.k == 0 {
            return "1".to_string();
        }
        self.tuples[i]
            .iter()
            .map(|x| format!("e[{x}]"))
            .collect::<Vec<_>>()
            .join("^")
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Alternating form of degree `k` with values in a rank-`rank` bundle,
/// stored on increasing index tuples: component `(I, v)` sits at
/// `I * rank + v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    pub k: usize,
    pub dim: usize,
    pub rank: usize,
    pub comps: Vec<RatFunc>,
}

impl Form {
    pub fn zero(ring: &Arc<Ring>, dim: usize, k: usize, rank: usize) -> Self {
        let len = binomial(dim, k) * rank;
        Form {
            k,
            dim,
            rank,
            comps: vec![RatFunc::zero(ring); len],
        }
    }

    pub fn basis(&self) -> Arc<FormBasis> {
        basis(self.dim, self.k)
    }

    pub fn ring(&self) -> Option<&Arc<Ring>> {
        self.comps.first().map(|c| c.ring())
    }

    pub fn at(&self, tuple: usize, v: usize) -> &RatFunc {
        &self.comps[tuple * self.rank + v]
    }

    pub fn at_mut(&mut self, tuple: usize, v: usize) -> &mut RatFunc {
        &mut self.comps[tuple * self.rank + v]
    }

    /// Component at an arbitrary index list, with the alternating sign.
    pub fn get(&self, idx: &[usize], v: usize, zero: &RatFunc) -> RatFunc {
        match self.basis().locate(idx) {
            None => zero.clone(),
            Some((i, 1)) => self.at(i, v).clone(),
            Some((i, _)) => self.at(i, v).neg(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Form) -> Form {
        assert_eq!((self.k, self.dim, self.rank), (o.k, o.dim, o.rank));
        Form {
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect(),
            ..*self
        }
    }

    pub fn sub(&self, o: &Form) -> Form {
        assert_eq!((self.k, self.dim, self.rank), (o.k, o.dim, o.rank));
        Form {
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.sub(b)).collect(),
            ..*self
        }
    }

    pub fn scale(&self, c: &Rational) -> Form {
        Form {
            comps: self.comps.iter().map(|a| a.scale(c)).collect(),
            ..*self
        }
    }

    pub fn mul_fn(&self, f: &RatFunc) -> Form {
        Form {
            comps: self.comps.iter().map(|a| a.mul(f)).collect(),
            ..*self
        }
    }

    /// Applies a rank×rank matrix to the value index.
    pub fn apply_endo(&self, m: &Matrix<RatFunc>) -> Form {
        let mut out = self.clone();
        let r = self.rank;
        for t in 0..self.comps.len() / r.max(1) {
            for v in 0..r {
                let mut acc = self.comps[t * r].zero_like_rf();
                for w in 0..r {
                    let (mv, x) = (&m[v][w], &self.comps[t * r + w]);
                    if !mv.is_zero() && !x.is_zero() {
                        acc = acc.add(&mv.mul(x));
                    }
                }
                out.comps[t * r + v] = acc;
            }
        }
        out
    }

    /// First nonzero component as `(tuple, value index)`.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        let r = self.rank;
        self.comps.iter().position(|c| !c.is_zero()).map(|i| (i / r, i % r))
    }
}

trait ZeroLike {
    fn zero_like_rf(&self) -> RatFunc;
}

impl ZeroLike for RatFunc {
    fn zero_like_rf(&self) -> RatFunc {
        RatFunc::zero(self.ring())
    }
}

/// Fibre data: `n`, the symplectic form `J_ab` and its inverse `J^ab`
/// normalised by `J_ab J^ac = δ_b^c`.
pub struct SympSpace {
    pub n: usize,
    pub dim: usize,
    pub ring: Arc<Ring>,
    pub j_lower: Matrix<RatFunc>,
    pub j_upper: Matrix<RatFunc>,
    pub base_point: Vec<Rational>,
    projector_cache: Mutex<HashMap<usize, Arc<Matrix<RatFunc>>>>,
}

impl std::fmt::Debug for SympSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SympSpace")
            .field("n", &self.n)
            .field("vars", &self.ring.vars())
            .finish()
    }
}

/// The standard form with `J_{2i,2i+1} = 1`.
pub fn standard_j(ring: &Arc<Ring>, n: usize) -> Matrix<RatFunc> {
    let dim = 2 * n;
    let mut j = vec![vec![RatFunc::zero(ring); dim]; dim];
    for i in 0..n {
        j[2 * i][2 * i + 1] = RatFunc::one(ring);
        j[2 * i + 1][2 * i] = RatFunc::from_int(ring, -1);
    }
    j
}

impl SympSpace {
    /// Validates antisymmetry and nondegeneracy at the base point and
    /// computes `J^ab = ((J_ab)^T)^{-1}`.
    pub fn new(n: usize, ring: Arc<Ring>, j_lower: Matrix<RatFunc>, base_point: Vec<Rational>) -> Result<Self, Error> {
        let dim = 2 * n;
        if n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        if j_lower.len() != dim || j_lower.iter().any(|r| r.len() != dim) {
            return Err(Error::Invariant(format!("J must be a {dim}x{dim} matrix")));
        }
        for a in 0..dim {
            for b in 0..dim {
                if !j_lower[a][b].add(&j_lower[b][a]).is_zero() {
                    return Err(Error::Invariant(format!("J is not antisymmetric at ({a},{b})")));
                }
            }
        }
        if base_point.len() != ring.nvars() {
            return Err(Error::Invariant("base point has the wrong length".into()));
        }
        let mut at_base: Matrix<Rational> = Vec::new();
        for row in &j_lower {
            let mut r = Vec::new();
            for x in row {
                r.push(
                    x.eval(&base_point)
                        .ok_or_else(|| Error::Invariant("J has a pole at the base point".into()))?,
                );
            }
            at_base.push(r);
        }
        if linalg::rank(&at_base) < dim {
            return Err(Error::Invariant("J is degenerate at the base point".into()));
        }
        let transposed: Matrix<RatFunc> = (0..dim)
            .map(|a| (0..dim).map(|b| j_lower[b][a].clone()).collect())
            .collect();
        let j_upper = linalg::inverse(&transposed).ok_or_else(|| Error::Invariant("J is not invertible".into()))?;
        Ok(SympSpace {
            n,
            dim,
            ring,
            j_lower,
            j_upper,
            base_point,
            projector_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Constant standard J over the given ring, base point at the origin.
    pub fn standard(n: usize, ring: &Arc<Ring>) -> Self {
        let origin = vec![Rational::ZERO; ring.nvars()];
        Self::new(n, ring.clone(), standard_j(ring, n), origin).expect("standard J is valid")
    }

    pub fn zero(&self) -> RatFunc {
        RatFunc::zero(&self.ring)
    }

    pub fn jl(&self, a: usize, b: usize) -> &RatFunc {
        &self.j_lower[a][b]
    }

    pub fn ju(&self, a: usize, b: usize) -> &RatFunc {
        &self.j_upper[a][b]
    }

    /// `J` as a scalar 2-form.
    pub fn j_form(&self) -> Form {
        let mut f = Form::zero(&self.ring, self.dim, 2, 1);
        let b = f.basis();
        for (i, t) in b.tuples.iter().enumerate() {
            f.comps[i] = self.j_lower[t[0]][t[1]].clone();
        }
        f
    }

    /// Unit basis form `e[i0]^...` with value vector `v`.
    pub fn unit_form(&self, idx: &[usize], rank: usize, v: usize) -> Form {
        let mut f = Form::zero(&self.ring, self.dim, idx.len(), rank);
        if let Some((i, s)) = f.basis().locate(idx) {
            *f.at_mut(i, v) = RatFunc::from_int(&self.ring, s);
        }
        f
    }
}

/// `Alt(α ⊗ β)` with the averaging antisymmetriser; `α` scalar-valued,
/// `β` of any rank. Degrees beyond the dimension give the zero form.
pub fn wedge(alpha: &Form, beta: &Form, ring: &Arc<Ring>) -> Form {
    assert_eq!(alpha.rank, 1, "left factor must be scalar-valued");
    assert_eq!(alpha.dim, beta.dim);
    let (k, l, dim) = (alpha.k, beta.k, alpha.dim);
    let mut out = Form::zero(ring, dim, k + l, beta.rank);
    if k + l > dim {
        return out;
    }
    let ob = out.basis();
    let ab = alpha.basis();
    let bb = beta.basis();
    let weight = Rational::new(1, binomial(k + l, k) as i64);
    let positions = basis(k + l, k);
    for (oi, tuple) in ob.tuples.iter().enumerate() {
        for v in 0..beta.rank {
            let mut acc = RatFunc::zero(ring);
            for sel in &positions.tuples {
                // Shuffle: the selected positions go to α, the rest to β.
                let mut a_idx = Vec::with_capacity(k);
                let mut b_idx = Vec::with_capacity(l);
                let mut inv = 0usize;
                let mut taken = 0usize;
                for (p, &x) in tuple.iter().enumerate() {
                    if sel.contains(&p) {
                        inv += p - taken;
                        taken += 1;
                        a_idx.push(x);
                    } else {
                        b_idx.push(x);
                    }
                }
                let a = alpha.at(ab.position(&a_idx), 0);
                let b = beta.at(bb.position(&b_idx), v);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let term = a.mul(b);
                acc = if inv.is_multiple_of(2) {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            *out.at_mut(oi, v) = acc.scale(&weight);
        }
    }
    out
}

/// `J ∧ ψ`.
pub fn wedge_j(space: &SympSpace, psi: &Form) -> Form {
    wedge(&space.j_form(), psi, &space.ring)
}

/// Symplectic trace `J^ab φ_{ab...}` on the first two slots.
pub fn j_trace(space: &SympSpace, phi: &Form) -> Result<Form, Error> {
    if phi.k < 2 {
        return Err(Error::Invariant(format!("j_trace needs degree >= 2, got {}", phi.k)));
    }
    let dim = space.dim;
    let mut out = Form::zero(&space.ring, dim, phi.k - 2, phi.rank);
    let ob = out.basis();
    let zero = space.zero();
    let mut idx = vec![0usize; phi.k];
    for (oi, rest) in ob.tuples.iter().enumerate() {
        idx[2..].copy_from_slice(rest);
        for v in 0..phi.rank {
            let mut acc = zero.clone();
            for a in 0..dim {
                for b in 0..dim {
                    let j = space.ju(a, b);
                    if j.is_zero() {
                        continue;
                    }
                    idx[0] = a;
                    idx[1] = b;
                    let c = phi.get(&idx, v, &zero);
                    if !c.is_zero() {
                        acc = acc.add(&j.mul(&c));
                    }
                }
            }
            *out.at_mut(oi, v) = acc;
        }
    }
    Ok(out)
}

/// Matrix of a linear map on scalar forms, built column by column from the
/// unit basis forms of degree `k`.
fn matrix_of(space: &SympSpace, k: usize, f: impl Fn(&Form) -> Form) -> Matrix<RatFunc> {
    let b = basis(space.dim, k);
    let cols: Vec<Form> = b.tuples.iter().map(|t| f(&space.unit_form(t, 1, 0))).collect();
    let rows = cols.first().map_or(0, |c| c.comps.len());
    (0..rows)
        .map(|r| cols.iter().map(|c| c.comps[r].clone()).collect())
        .collect()
}

/// Matrix of the trace `Λ^k → Λ^{k-2}`.
pub fn trace_matrix(space: &SympSpace, k: usize) -> Matrix<RatFunc> {
    matrix_of(space, k, |f| j_trace(space, f).expect("degree checked"))
}

/// Matrix of `J∧ : Λ^{r-1} → Λ^{r+1}`.
pub fn lefschetz_matrix(space: &SympSpace, r: usize) -> Matrix<RatFunc> {
    assert!(r >= 1);
    matrix_of(space, r - 1, |f| wedge_j(space, f))
}

/// `C(2n,k) - C(2n,k-2)`.
pub fn perp_dim(n: usize, k: usize) -> Result<usize, Error> {
    if k > n {
        return Err(Error::Config(format!("perp_dim needs k <= n (k={k}, n={n})")));
    }
    let lower = if k >= 2 { binomial(2 * n, k - 2) } else { 0 };
    Ok(binomial(2 * n, k) - lower)
}

/// Inverse of `ψ ↦ tr(J∧ψ)` on `Λ^{k-2}`, cached per space.
fn projector_solve_matrix(space: &SympSpace, k: usize) -> Arc<Matrix<RatFunc>> {
    if let Some(m) = space.projector_cache.lock().unwrap().get(&k) {
        return m.clone();
    }
    let m = matrix_of(space, k - 2, |f| {
        j_trace(space, &wedge_j(space, f)).expect("degree >= 2")
    });
    let inv = Arc::new(linalg::inverse(&m).expect("tr∘(J∧) is invertible below the middle degree"));
    space.projector_cache.lock().unwrap().insert(k, inv.clone());
    inv
}

/// The projection `π : Λ^k → Λ^k_⊥` (componentwise in the value index).
/// `π(φ) = φ - J∧ψ` where `ψ` is the unique solution of
/// `tr(J∧ψ) = tr(φ)`.
pub fn perp_project(space: &SympSpace, phi: &Form) -> Result<Form, Error> {
    if phi.k > space.n {
        return Err(Error::Config(format!(
            "perp_project needs degree <= n (degree {}, n {})",
            phi.k, space.n
        )));
    }
    if phi.k < 2 {
        return Ok(phi.clone());
    }
    let solve = projector_solve_matrix(space, phi.k);
    let tr = j_trace(space, phi)?;
    let r = phi.rank;
    let mut psi = Form::zero(&space.ring, space.dim, phi.k - 2, r);
    for v in 0..r {
        let rhs: Vec<RatFunc> = (0..tr.comps.len() / r).map(|t| tr.at(t, v).clone()).collect();
        let sol = linalg::mat_vec(&solve, &rhs);
        for (t, x) in sol.into_iter().enumerate() {
            *psi.at_mut(t, v) = x;
        }
    }
    Ok(phi.sub(&wedge_j(space, &psi)))
}

/// A frame of `Λ^k_⊥`: kernel basis of the trace matrix, each vector being
/// the identity on its free column. Returns the frame forms and the free
/// columns, which serve as coordinates on the subspace.
pub fn perp_frame(space: &SympSpace, k: usize) -> (Vec<Form>, Vec<usize>) {
    let b = basis(space.dim, k);
    if k < 2 {
        let frames = b.tuples.iter().map(|t| space.unit_form(t, 1, 0)).collect();
        return (frames, (0..b.len()).collect());
    }
    let m = trace_matrix(space, k);
    let (ns, free) = linalg::kernel(&m, b.len(), &space.zero());
    let frames = ns
        .into_iter()
        .map(|comps| Form {
            k,
            dim: space.dim,
            rank: 1,
            comps,
        })
        .collect();
    (frames, free)
}

/// Rank of a RatFunc matrix evaluated exactly (ranks over the function
/// field).
pub fn rank_over_functions(m: &Matrix<RatFunc>) -> usize {
    linalg::rank(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_lookup_signs() {
        let b = basis(4, 2);
        assert_eq!(b.len(), 6);
        assert_eq!(b.locate(&[1, 0]), Some((0, -1)));
        assert_eq!(b.locate(&[2, 2]), None);
        assert_eq!(b.label(5), "e[2]^e[3]");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 5), 0);
    }
}
