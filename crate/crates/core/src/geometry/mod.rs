//! Charts, Fedosov structures, covariant differentiation and curvature.

mod builtin;
mod chartfile;
mod decomp;
mod kahler;

pub use builtin::{builtin_chart, coordinate_names, random_connection_matrices, random_fedosov, Builtin, BuiltinKind};
pub use chartfile::{chart_to_file, load_chart_file, parse_chart_file, ChartFile, ChristoffelEntry, ConnectionSpec};
pub use decomp::{decompose_curvature, phi_and_v, phi_from_j_trace, phi_terms, CurvatureDecomp};
pub use kahler::{
    complex_structure, kahler_consequence_residual, kahler_decompose, metric_from_potential_hessian, pointwise_kahler,
    u_trace_residual, KahlerData, KahlerDecomp, KahlerStructure, PointwiseKahler,
};

use std::sync::Arc;

use sympcalc_exact::linalg::{self, Matrix};
use sympcalc_exact::{RatFunc, Rational, Ring};

use crate::error::Error;
use crate::symplin::SympSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Up,
    Down,
}

/// Dense tensor of mixed variance with RatFunc components; every slot has
/// extent `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    pub dim: usize,
    pub slots: Vec<Slot>,
    pub data: Vec<RatFunc>,
}

/// All index tuples of the given length over `0..dim`, last index fastest.
pub fn multi_indices(dim: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = dim.pow(len as u32);
    (0..total).map(move |mut k| {
        let mut idx = vec![0; len];
        for slot in (0..len).rev() {
            idx[slot] = k % dim;
            k /= dim;
        }
        idx
    })
}

impl Tensor {
    pub fn zero(ring: &Arc<Ring>, dim: usize, slots: &[Slot]) -> Self {
        Tensor {
            dim,
            slots: slots.to_vec(),
            data: vec![RatFunc::zero(ring); dim.pow(slots.len() as u32)],
        }
    }

    pub fn from_fn(dim: usize, slots: &[Slot], mut f: impl FnMut(&[usize]) -> RatFunc) -> Self {
        let data = multi_indices(dim, slots.len()).map(|i| f(&i)).collect();
        Tensor {
            dim,
            slots: slots.to_vec(),
            data,
        }
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.slots.len());
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> &RatFunc {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: RatFunc) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn sub(&self, o: &Tensor) -> Tensor {
        assert_eq!(self.slots, o.slots);
        Tensor {
            dim: self.dim,
            slots: self.slots.clone(),
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn add(&self, o: &Tensor) -> Tensor {
        assert_eq!(self.slots, o.slots);
        Tensor {
            dim: self.dim,
            slots: self.slots.clone(),
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Tensor {
        Tensor {
            dim: self.dim,
            slots: self.slots.clone(),
            data: self.data.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn first_nonzero(&self) -> Option<(Vec<usize>, RatFunc)> {
        multi_indices(self.dim, self.rank())
            .zip(&self.data)
            .find(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
    }

    /// Entrywise evaluation; `None` at a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Vec<Rational>> {
        self.data.iter().map(|x| x.eval(point)).collect()
    }

    pub fn as_matrix(&self) -> Matrix<RatFunc> {
        assert_eq!(self.rank(), 2);
        (0..self.dim)
            .map(|a| (0..self.dim).map(|b| self.get(&[a, b]).clone()).collect())
            .collect()
    }

    pub fn from_matrix(m: &Matrix<RatFunc>, slots: [Slot; 2]) -> Tensor {
        let dim = m.len();
        Tensor::from_fn(dim, &slots, |i| m[i[0]][i[1]].clone())
    }
}

/// Formats an index tuple with its variance, e.g. `R[0][1]^[2]_[3]`.
pub fn index_label(name: &str, slots: &[Slot], idx: &[usize]) -> String {
    let mut s = name.to_string();
    for (slot, i) in slots.iter().zip(idx) {
        match slot {
            Slot::Up => s.push_str(&format!("^{i}")),
            Slot::Down => s.push_str(&format!("_{i}")),
        }
    }
    s
}

/// A coordinate chart with its symplectic form.
#[derive(Clone, Debug)]
pub struct Chart {
    pub name: String,
    pub n: usize,
    pub space: Arc<SympSpace>,
}

impl Chart {
    pub fn new(name: &str, space: SympSpace) -> Result<Self, Error> {
        let chart = Chart {
            name: name.to_string(),
            n: space.n,
            space: Arc::new(space),
        };
        chart.check_closed()?;
        Ok(chart)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.space.ring
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn zero(&self) -> RatFunc {
        RatFunc::zero(self.ring())
    }

    /// `∂_a J_bc + ∂_b J_ca + ∂_c J_ab = 0`.
    pub fn check_closed(&self) -> Result<(), Error> {
        let d = self.dim();
        let j = &self.space.j_lower;
        for a in 0..d {
            for b in a + 1..d {
                for c in b + 1..d {
                    let s = j[b][c].partial(a).add(&j[c][a].partial(b)).add(&j[a][b].partial(c));
                    if !s.is_zero() {
                        return Err(Error::Invariant(format!("dJ != 0 at ({a},{b},{c}): {s}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Chart plus torsion-free Christoffel symbols `Γ^c_ab` (stored
/// `gamma[c][a][b]`) preserving `J`.
#[derive(Clone, Debug)]
pub struct FedosovStructure {
    pub chart: Chart,
    pub gamma: Tensor,
}

impl FedosovStructure {
    pub fn new(chart: Chart, gamma: Tensor) -> Result<Self, Error> {
        let d = chart.dim();
        if gamma.dim != d || gamma.slots != [Slot::Up, Slot::Down, Slot::Down] {
            return Err(Error::Invariant("Christoffel array has the wrong shape".into()));
        }
        for c in 0..d {
            for a in 0..d {
                for b in a + 1..d {
                    if gamma.get(&[c, a, b]) != gamma.get(&[c, b, a]) {
                        return Err(Error::Invariant(format!(
                            "connection has torsion: Gamma^{c}_{a}{b} != Gamma^{c}_{b}{a}"
                        )));
                    }
                }
            }
        }
        let f = FedosovStructure { chart, gamma };
        let j = Tensor::from_matrix(&f.chart.space.j_lower, [Slot::Down, Slot::Down]);
        let nj = f.covariant_derivative(&j);
        if let Some((idx, v)) = nj.first_nonzero() {
            return Err(Error::Invariant(format!(
                "connection does not preserve J: nabla_{} J_{}{} = {v}",
                idx[0], idx[1], idx[2]
            )));
        }
        Ok(f)
    }

    /// Levi-Civita connection of a metric, validated as a Fedosov structure.
    pub fn levi_civita(chart: Chart, g: &Matrix<RatFunc>) -> Result<Self, Error> {
        let gamma = levi_civita_symbols(&chart, g)?;
        FedosovStructure::new(chart, gamma)
    }

    pub fn n(&self) -> usize {
        self.chart.n
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.chart.ring()
    }

    pub fn space(&self) -> &Arc<SympSpace> {
        &self.chart.space
    }

    pub fn g(&self, c: usize, a: usize, b: usize) -> &RatFunc {
        self.gamma.get(&[c, a, b])
    }

    /// `∇_a T`: the new down slot is prepended. Each down slot receives
    /// `-Γ^e_{a s} T_{..e..}` and each up slot `+Γ^s_{a e} T^{..e..}`.
    pub fn covariant_derivative(&self, t: &Tensor) -> Tensor {
        let d = self.dim();
        let mut slots = vec![Slot::Down];
        slots.extend_from_slice(&t.slots);
        Tensor::from_fn(d, &slots, |idx| {
            let a = idx[0];
            let inner = &idx[1..];
            let mut acc = t.get(inner).partial(a);
            let mut probe = inner.to_vec();
            for (s, slot) in t.slots.iter().enumerate() {
                let orig = inner[s];
                for e in 0..d {
                    let coeff = match slot {
                        Slot::Down => self.g(e, a, orig),
                        Slot::Up => self.g(orig, a, e),
                    };
                    if coeff.is_zero() {
                        continue;
                    }
                    probe[s] = e;
                    let v = t.get(&probe);
                    if v.is_zero() {
                        continue;
                    }
                    let term = coeff.mul(v);
                    acc = match slot {
                        Slot::Down => acc.sub(&term),
                        Slot::Up => acc.add(&term),
                    };
                }
                probe[s] = orig;
            }
            acc
        })
    }

    /// `R_ab^c_d` with `(∇_a∇_b - ∇_b∇_a)X^c = R_ab^c_d X^d`.
    pub fn curvature(&self) -> Tensor {
        curvature_from_gamma(self.ring(), self.dim(), &self.gamma)
    }
}

/// `R_ab^c_d = ∂_aΓ^c_bd - ∂_bΓ^c_ad + Γ^c_ae Γ^e_bd - Γ^c_be Γ^e_ad`,
/// stored `[a][b][c][d]`.
pub fn curvature_from_gamma(ring: &Arc<Ring>, dim: usize, gamma: &Tensor) -> Tensor {
    let slots = [Slot::Down, Slot::Down, Slot::Up, Slot::Down];
    let mut r = Tensor::zero(ring, dim, &slots);
    for a in 0..dim {
        for b in a + 1..dim {
            for c in 0..dim {
                for d in 0..dim {
                    let mut acc = gamma.get(&[c, b, d]).partial(a).sub(&gamma.get(&[c, a, d]).partial(b));
                    for e in 0..dim {
                        let (p, q) = (gamma.get(&[c, a, e]), gamma.get(&[e, b, d]));
                        if !p.is_zero() && !q.is_zero() {
                            acc = acc.add(&p.mul(q));
                        }
                        let (p, q) = (gamma.get(&[c, b, e]), gamma.get(&[e, a, d]));
                        if !p.is_zero() && !q.is_zero() {
                            acc = acc.sub(&p.mul(q));
                        }
                    }
                    r.set(&[b, a, c, d], acc.neg());
                    r.set(&[a, b, c, d], acc);
                }
            }
        }
    }
    r
}

/// `Γ^c_ab = ½ g^{cd}(∂_a g_bd + ∂_b g_ad - ∂_d g_ab)`.
pub fn levi_civita_symbols(chart: &Chart, g: &Matrix<RatFunc>) -> Result<Tensor, Error> {
    let d = chart.dim();
    check_metric(chart, g)?;
    let ginv = linalg::inverse(g).ok_or_else(|| Error::Invariant("metric is singular".into()))?;
    let half = Rational::new(1, 2);
    let dg: Vec<Matrix<RatFunc>> = (0..d)
        .map(|e| g.iter().map(|row| row.iter().map(|x| x.partial(e)).collect()).collect())
        .collect();
    let mut first = vec![chart.zero(); d * d * d];
    for dd in 0..d {
        for a in 0..d {
            for b in 0..d {
                first[(dd * d + a) * d + b] = dg[a][b][dd].add(&dg[b][a][dd]).sub(&dg[dd][a][b]).scale(&half);
            }
        }
    }
    Ok(Tensor::from_fn(d, &[Slot::Up, Slot::Down, Slot::Down], |i| {
        let (c, a, b) = (i[0], i[1], i[2]);
        let mut acc = chart.zero();
        for dd in 0..d {
            let (p, q) = (&ginv[c][dd], &first[(dd * d + a) * d + b]);
            if !p.is_zero() && !q.is_zero() {
                acc = acc.add(&p.mul(q));
            }
        }
        acc
    }))
}

fn check_metric(chart: &Chart, g: &Matrix<RatFunc>) -> Result<(), Error> {
    let d = chart.dim();
    if g.len() != d || g.iter().any(|r| r.len() != d) {
        return Err(Error::Invariant(format!("metric must be {d}x{d}")));
    }
    for a in 0..d {
        for b in 0..a {
            if g[a][b] != g[b][a] {
                return Err(Error::Invariant(format!("metric is not symmetric at ({a},{b})")));
            }
        }
    }
    let at: Option<Matrix<Rational>> = g
        .iter()
        .map(|r| r.iter().map(|x| x.eval(&chart.space.base_point)).collect())
        .collect();
    match at {
        Some(m) if linalg::rank(&m) == d => Ok(()),
        _ => Err(Error::Invariant("metric is degenerate at the base point".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_order() {
        let v: Vec<_> = multi_indices(2, 2).collect();
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
