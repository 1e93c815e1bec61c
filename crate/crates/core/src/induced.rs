//! Derivation actions on induced representations and bundles: duals,
//! tensor products, symmetric and exterior powers, and the trace-free part
//! of an exterior power with respect to an invariant skew form.
//!
//! A matrix `X` acts on column vectors, `X[j][i]` being the coefficient of
//! `e_j` in `X e_i`. The same formulas extend connection matrices (with a
//! frame-derivative correction on subbundles) and Lie-algebra actions.

use sympcalc_exact::linalg::{self, Field, Matrix};

use crate::error::Error;
use crate::symplin::basis;

pub fn dual<T: Field>(x: &Matrix<T>) -> Matrix<T> {
    let r = x.len();
    (0..r).map(|i| (0..r).map(|j| x[j][i].neg()).collect()).collect()
}

/// `X ⊗ 1 + 1 ⊗ Y` on the basis `e_i ⊗ f_j`, index `i * dim(Y) + j`.
pub fn tensor<T: Field>(x: &Matrix<T>, y: &Matrix<T>, zero: &T) -> Matrix<T> {
    let (p, q) = (x.len(), y.len());
    let mut out = vec![vec![zero.clone(); p * q]; p * q];
    for i in 0..p {
        for j in 0..q {
            let col = i * q + j;
            for i2 in 0..p {
                if !x[i2][i].is_zero() {
                    out[i2 * q + j][col] = out[i2 * q + j][col].add(&x[i2][i]);
                }
            }
            for j2 in 0..q {
                if !y[j2][j].is_zero() {
                    out[i * q + j2][col] = out[i * q + j2][col].add(&y[j2][j]);
                }
            }
        }
    }
    out
}

/// Non-decreasing `k`-tuples in `0..dim`, lexicographic.
pub fn multisets(dim: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(i, dim, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, dim, k, &mut Vec::new(), &mut out);
    out
}

/// Action on `⊙^k` with basis the monomials `e_{i1}⋯e_{ik}`.
pub fn sym<T: Field>(x: &Matrix<T>, k: usize, zero: &T) -> Matrix<T> {
    let dim = x.len();
    let b = multisets(dim, k);
    let index: std::collections::HashMap<&Vec<usize>, usize> = b.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut out = vec![vec![zero.clone(); b.len()]; b.len()];
    for (col, t) in b.iter().enumerate() {
        for s in 0..k {
            for j in 0..dim {
                let c = &x[j][t[s]];
                if c.is_zero() {
                    continue;
                }
                let mut u = t.clone();
                u[s] = j;
                u.sort_unstable();
                let row = index[&u];
                out[row][col] = out[row][col].add(c);
            }
        }
    }
    out
}

/// Action on `Λ^k` with basis `e_{i1}∧⋯∧e_{ik}`, `i1 < ⋯ < ik`.
pub fn ext<T: Field>(x: &Matrix<T>, k: usize, zero: &T) -> Matrix<T> {
    let dim = x.len();
    let b = basis(dim, k);
    let mut out = vec![vec![zero.clone(); b.len()]; b.len()];
    for (col, t) in b.tuples.iter().enumerate() {
        for s in 0..k {
            for j in 0..dim {
                let c = &x[j][t[s]];
                if c.is_zero() {
                    continue;
                }
                let mut u = t.clone();
                u[s] = j;
                if let Some((row, sign)) = b.locate(&u) {
                    out[row][col] = if sign > 0 {
                        out[row][col].add(c)
                    } else {
                        out[row][col].sub(c)
                    };
                }
            }
        }
    }
    out
}

/// Contraction `Λ^k → Λ^{k-2}` with a skew form `G`:
/// `e_{i1}∧⋯∧e_{ik} ↦ Σ_{p<q} (-1)^{p+q+1} G[i_p][i_q] e_{I∖{p,q}}`.
pub fn skew_contraction<T: Field>(g: &Matrix<T>, k: usize, zero: &T) -> Matrix<T> {
    let dim = g.len();
    let src = basis(dim, k);
    let dst = basis(dim, k.saturating_sub(2));
    let mut out = vec![vec![zero.clone(); src.len()]; if k >= 2 { dst.len() } else { 0 }];
    if k < 2 {
        return out;
    }
    for (col, t) in src.tuples.iter().enumerate() {
        for p in 0..k {
            for q in p + 1..k {
                let c = &g[t[p]][t[q]];
                if c.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != p && i != q)
                    .map(|(_, &x)| x)
                    .collect();
                let row = dst.position(&rest);
                out[row][col] = if (p + q) % 2 == 1 {
                    out[row][col].add(c)
                } else {
                    out[row][col].sub(c)
                };
            }
        }
    }
    out
}

/// A subspace given by a frame that is the identity on the `free`
/// coordinates, so those coordinates give a left inverse.
#[derive(Clone, Debug)]
pub struct Subspace<T> {
    /// Column vectors of the frame.
    pub frame: Vec<Vec<T>>,
    pub free: Vec<usize>,
}

impl<T: Field> Subspace<T> {
    pub fn kernel_of(m: &Matrix<T>, cols: usize, zero: &T) -> Self {
        let (frame, free) = linalg::kernel(m, cols, zero);
        Subspace { frame, free }
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    /// `L X P` for an operator preserving the subspace.
    pub fn restrict(&self, x: &Matrix<T>) -> Matrix<T> {
        let images: Vec<Vec<T>> = self.frame.iter().map(|p| linalg::mat_vec(x, p)).collect();
        self.free
            .iter()
            .map(|&f| images.iter().map(|img| img[f].clone()).collect())
            .collect()
    }

    /// Residual of `X P` against `P (L X P)`; zero iff `X` preserves the
    /// subspace.
    pub fn preserved_by(&self, x: &Matrix<T>, zero: &T) -> bool {
        let r = self.restrict(x);
        self.frame.iter().enumerate().all(|(c, p)| {
            let img = linalg::mat_vec(x, p);
            (0..img.len()).all(|i| {
                let mut acc = zero.clone();
                for (k, q) in self.frame.iter().enumerate() {
                    if !r[k][c].is_zero() && !q[i].is_zero() {
                        acc = acc.add(&r[k][c].mul(&q[i]));
                    }
                }
                acc == img[i]
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sympcalc_exact::Rational;

    fn q(x: i64) -> Rational {
        Rational::from(x)
    }

    #[test]
    fn sym_and_ext_dimensions() {
        assert_eq!(multisets(5, 2).len(), 15);
        let x = vec![vec![q(0); 4]; 4];
        assert_eq!(ext(&x, 2, &q(0)).len(), 6);
        assert_eq!(sym(&x, 3, &q(0)).len(), 20);
    }

    #[test]
    fn functors_preserve_commutators() {
        // [X, Y] maps to [ρ(X), ρ(Y)] for each derivation functor.
        let x = vec![vec![q(1), q(2), q(0)], vec![q(0), q(-1), q(3)], vec![q(1), q(0), q(0)]];
        let y = vec![vec![q(0), q(1), q(0)], vec![q(2), q(0), q(-1)], vec![q(0), q(4), q(1)]];
        let z = q(0);
        let comm = |a: &Matrix<Rational>, b: &Matrix<Rational>| {
            let ab = linalg::mat_mul(a, b, &z);
            let ba = linalg::mat_mul(b, a, &z);
            ab.iter()
                .zip(&ba)
                .map(|(r, s)| r.iter().zip(s).map(|(u, v)| u - v).collect())
                .collect::<Matrix<Rational>>()
        };
        let xy = comm(&x, &y);
        for k in 1..=3 {
            assert_eq!(sym(&xy, k, &z), comm(&sym(&x, k, &z), &sym(&y, k, &z)));
            assert_eq!(ext(&xy, k, &z), comm(&ext(&x, k, &z), &ext(&y, k, &z)));
        }
        assert_eq!(dual(&xy), comm(&dual(&x), &dual(&y)));
        assert_eq!(tensor(&xy, &xy, &z), comm(&tensor(&x, &x, &z), &tensor(&y, &y, &z)));
    }
}

/// Representations built functorially from the standard one:
/// `trivial | standard | dual(R) | sym:k(R) | ext:k(R) | perp_ext:k(R) | tensor(R,R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepDesc {
    Trivial,
    Standard,
    Dual(Box<RepDesc>),
    Sym(usize, Box<RepDesc>),
    Ext(usize, Box<RepDesc>),
    PerpExt(usize, Box<RepDesc>),
    Tensor(Box<RepDesc>, Box<RepDesc>),
}

impl std::fmt::Display for RepDesc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RepDesc::Trivial => write!(f, "trivial"),
            RepDesc::Standard => write!(f, "standard"),
            RepDesc::Dual(r) => write!(f, "dual({r})"),
            RepDesc::Sym(k, r) => write!(f, "sym:{k}({r})"),
            RepDesc::Ext(k, r) => write!(f, "ext:{k}({r})"),
            RepDesc::PerpExt(k, r) => write!(f, "perp_ext:{k}({r})"),
            RepDesc::Tensor(a, b) => write!(f, "tensor({a},{b})"),
        }
    }
}

struct DescParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl DescParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Descriptor(format!("{msg} at position {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphabetic() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }

    fn number(&mut self) -> Result<usize, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| self.err("expected a nonnegative integer"))
    }

    fn rep(&mut self) -> Result<RepDesc, Error> {
        let at = self.pos;
        let w = self.word().to_string();
        match w.as_str() {
            "trivial" => Ok(RepDesc::Trivial),
            "standard" => Ok(RepDesc::Standard),
            "dual" => {
                self.expect(b'(')?;
                let r = self.rep()?;
                self.expect(b')')?;
                Ok(RepDesc::Dual(Box::new(r)))
            }
            "tensor" => {
                self.expect(b'(')?;
                let a = self.rep()?;
                self.expect(b',')?;
                let b = self.rep()?;
                self.expect(b')')?;
                Ok(RepDesc::Tensor(Box::new(a), Box::new(b)))
            }
            "sym" | "ext" | "perp_ext" => {
                self.expect(b':')?;
                let k = self.number()?;
                self.expect(b'(')?;
                let r = Box::new(self.rep()?);
                self.expect(b')')?;
                Ok(match w.as_str() {
                    "sym" => RepDesc::Sym(k, r),
                    "ext" => RepDesc::Ext(k, r),
                    _ => RepDesc::PerpExt(k, r),
                })
            }
            "" => Err(self.err("expected a representation")),
            other => {
                self.pos = at;
                Err(self.err(&format!("unknown representation '{other}'")))
            }
        }
    }
}

impl std::str::FromStr for RepDesc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut p = DescParser {
            s: s.as_bytes(),
            pos: 0,
        };
        let r = p.rep()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(r)
    }
}

impl RepDesc {
    /// Dimension when the standard representation has dimension `std_dim`.
    pub fn dim(&self, std_dim: usize) -> usize {
        use crate::symplin::binomial;
        match self {
            RepDesc::Trivial => 1,
            RepDesc::Standard => std_dim,
            RepDesc::Dual(r) => r.dim(std_dim),
            RepDesc::Sym(k, r) => binomial(r.dim(std_dim) + k - 1, *k),
            RepDesc::Ext(k, r) => binomial(r.dim(std_dim), *k),
            RepDesc::PerpExt(k, r) => {
                let d = r.dim(std_dim);
                binomial(d, *k) - if *k >= 2 { binomial(d, k - 2) } else { 0 }
            }
            RepDesc::Tensor(a, b) => a.dim(std_dim) * b.dim(std_dim),
        }
    }

    /// Symmetric powers of the standard representation are irreducible.
    pub fn sym_power_of_standard(&self) -> Option<usize> {
        match self {
            RepDesc::Trivial => Some(0),
            RepDesc::Standard => Some(1),
            RepDesc::Sym(k, r) if **r == RepDesc::Standard => Some(*k),
            _ => None,
        }
    }
}

/// Matrices acting by derivations (connection matrices or Lie algebra
/// elements), with an invariant skew form when one is known.
#[derive(Clone, Debug)]
pub struct Realized<T> {
    pub mats: Vec<Matrix<T>>,
    pub form: Option<Matrix<T>>,
}

impl<T: Field> Realized<T> {
    pub fn dim(&self) -> usize {
        self.mats.first().map_or(0, |m| m.len())
    }
}

/// Builds the induced matrices of `desc` from the standard ones. For
/// connection matrices on a subbundle the frame-derivative term `L ∂P`
/// vanishes, since the frame is the identity on the free coordinates.
pub fn realize<T: Field>(
    desc: &RepDesc,
    standard: &Realized<T>,
    zero: &T,
    max_dim: usize,
) -> Result<Realized<T>, Error> {
    let dim = desc.dim(standard.dim());
    if dim > max_dim {
        return Err(Error::Config(format!(
            "representation {desc} has dimension {dim} > {max_dim}"
        )));
    }
    let count = standard.mats.len();
    let map =
        |r: &Realized<T>, f: &dyn Fn(&Matrix<T>) -> Matrix<T>| -> Vec<Matrix<T>> { r.mats.iter().map(f).collect() };
    Ok(match desc {
        RepDesc::Trivial => Realized {
            mats: vec![vec![vec![zero.clone()]]; count],
            form: None,
        },
        RepDesc::Standard => standard.clone(),
        RepDesc::Dual(r) => {
            let inner = realize(r, standard, zero, max_dim)?;
            Realized {
                mats: map(&inner, &|m| dual(m)),
                form: inner.form.as_ref().and_then(linalg::inverse),
            }
        }
        RepDesc::Sym(k, r) => {
            let inner = realize(r, standard, zero, max_dim)?;
            Realized {
                mats: map(&inner, &|m| sym(m, *k, zero)),
                form: None,
            }
        }
        RepDesc::Ext(k, r) => {
            let inner = realize(r, standard, zero, max_dim)?;
            Realized {
                mats: map(&inner, &|m| ext(m, *k, zero)),
                form: None,
            }
        }
        RepDesc::Tensor(a, b) => {
            let x = realize(a, standard, zero, max_dim)?;
            let y = realize(b, standard, zero, max_dim)?;
            Realized {
                mats: x.mats.iter().zip(&y.mats).map(|(p, q)| tensor(p, q, zero)).collect(),
                form: None,
            }
        }
        RepDesc::PerpExt(k, r) => {
            let inner = realize(r, standard, zero, max_dim)?;
            let g = inner
                .form
                .as_ref()
                .ok_or_else(|| Error::Descriptor(format!("{desc}: {r} carries no invariant skew form")))?;
            let n_inner = inner.dim();
            if 2 * k > n_inner {
                return Err(Error::Descriptor(format!("{desc}: degree exceeds half the dimension")));
            }
            let contraction = skew_contraction(g, *k, zero);
            let sub = Subspace::kernel_of(&contraction, crate::symplin::binomial(n_inner, *k), zero);
            let mats = inner.mats.iter().map(|m| sub.restrict(&ext(m, *k, zero))).collect();
            Realized { mats, form: None }
        }
    })
}
