use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use smallvec::SmallVec;

use crate::rational::{content_and_denominator, mulmod, Rational};

/// An ordered list of coordinate names. Polynomials over the same variables
/// share one `Arc<Ring>`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Arc<Ring> {
        assert!(vars.len() < 64, "too many variables");
        Arc::new(Ring {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub(crate) fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exponent vector with the total degree stored in front, so that the
/// derived lexicographic order on the vector is graded lexicographic order
/// with the first declared variable largest.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars + 1))
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        let mut v: SmallVec<[u16; 8]> = SmallVec::with_capacity(exps.len() + 1);
        v.push(exps.iter().sum());
        v.extend_from_slice(exps);
        Monomial(v)
    }

    pub fn degree(&self) -> u16 {
        self.0[0]
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0[1..]
    }

    pub fn exp(&self, var: usize) -> u16 {
        self.0[var + 1]
    }

    pub fn is_one(&self) -> bool {
        self.0[0] == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect())
    }

    fn with_exp(&self, var: usize, e: u16) -> Monomial {
        let mut m = self.clone();
        m.0[0] = m.0[0] - m.0[var + 1] + e;
        m.0[var + 1] = e;
        m
    }
}

/// Sparse multivariate polynomial over the rationals. Terms are kept sorted
/// in strictly decreasing monomial order with no zero coefficients.
#[derive(Clone)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn combine_sorted(mut v: Vec<(Monomial, Rational)>) -> Vec<(Monomial, Rational)> {
    v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(v.len());
    for (m, c) in v {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += &c,
            _ => {
                if let Some((_, lc)) = out.last() {
                    if lc.is_zero() {
                        out.pop();
                    }
                }
                out.push((m, c));
            }
        }
    }
    if let Some((_, lc)) = out.last() {
        if lc.is_zero() {
            out.pop();
        }
    }
    out
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Rational::ONE)
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(ring.nvars()), c)]
        };
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        assert!(i < ring.nvars());
        let mut e = vec![0u16; ring.nvars()];
        e[i] = 1;
        Poly {
            ring: ring.clone(),
            terms: vec![(Monomial::from_exponents(&e), Rational::ONE)],
        }
    }

    pub fn monomial(ring: &Arc<Ring>, exps: &[u16], c: Rational) -> Self {
        assert_eq!(exps.len(), ring.nvars());
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::from_exponents(exps), c)]
        };
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(ring: &Arc<Ring>, terms: Vec<(Monomial, Rational)>) -> Self {
        for (m, _) in &terms {
            assert_eq!(m.exponents().len(), ring.nvars());
        }
        Poly {
            ring: ring.clone(),
            terms: combine_sorted(terms),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The value if the polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::ZERO),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Leading coefficient in graded lex order. Panics on zero.
    pub fn lc(&self) -> &Rational {
        &self.terms[0].1
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn total_degree(&self) -> u16 {
        self.terms.first().map_or(0, |t| t.0.degree())
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|t| t.0.exp(var)).max().unwrap_or(0)
    }

    /// Bitmask of variables with a positive exponent somewhere.
    pub fn var_mask(&self) -> u64 {
        let mut mask = 0u64;
        for (m, _) in &self.terms {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    fn check_ring(&self, other: &Poly) {
        assert!(
            same_ring(&self.ring, &other.ring),
            "polynomials over different variable lists"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplication by a single term; order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(tm, tc)| (tm.mul(m), tc * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let (a, b) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if a.terms.len() == 1 {
            return b.mul_term(&a.terms[0].0, &a.terms[0].1);
        }
        let mut prods = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                prods.push((ma.mul(mb), ca * cb));
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms: combine_sorted(prods),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Poly {
        assert!(var < self.ring.nvars());
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| {
                let e = m.exp(var);
                (m.with_exp(var, e - 1), c * Rational::from_int(e as i64))
            })
            .collect();
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        self.check_ring(d);
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero(&self.ring));
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = (&d.terms[0].0, d.terms[0].1.recip());
        // The smallest terms must also divide.
        let (tm, _) = self.terms.last().unwrap();
        let (dtm, _) = d.terms.last().unwrap();
        if !dtm.divides(tm) || !dm.divides(&self.terms[0].0) {
            return None;
        }
        if self.terms.len() > 8 && !crate::gcd::may_divide(self, d) {
            return None;
        }
        let mut r = self.clone();
        let mut q = Vec::new();
        while !r.is_zero() {
            let (rm, rc) = &r.terms[0];
            if !dm.divides(rm) {
                return None;
            }
            let qm = dm.quotient_of(rm);
            let qc = rc * &dc;
            r = r.sub(&d.mul_term(&qm, &qc));
            q.push((qm, qc));
        }
        Some(Poly {
            ring: self.ring.clone(),
            terms: q,
        })
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = Rational::ZERO;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e as u32);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Evaluation modulo a prime. `None` if a coefficient denominator
    /// vanishes modulo `p`.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Option<u64> {
        let pows = self.power_table(point, p, None);
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = c.mod_p(p)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = mulmod(t, pows[i][e as usize], p);
                }
            }
            acc = (acc + t) % p;
        }
        Some(acc)
    }

    /// Image in F_p[x_var] after substituting `point` for all other
    /// variables; coefficient list indexed by degree.
    pub fn univariate_mod(&self, var: usize, point: &[u64], p: u64) -> Option<Vec<u64>> {
        let pows = self.power_table(point, p, Some(var));
        let mut out = vec![0u64; self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            let mut t = c.mod_p(p)?;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 && i != var {
                    t = mulmod(t, pows[i][e as usize], p);
                }
            }
            let k = m.exp(var) as usize;
            out[k] = (out[k] + t) % p;
        }
        Some(out)
    }

    /// `pows[i][e] = point[i]^e mod p` up to the degree of each variable.
    fn power_table(&self, point: &[u64], p: u64, skip: Option<usize>) -> Vec<Vec<u64>> {
        let mut degs = vec![0u16; self.ring.nvars()];
        for (m, _) in &self.terms {
            for (d, &e) in degs.iter_mut().zip(m.exponents()) {
                *d = (*d).max(e);
            }
        }
        (0..self.ring.nvars())
            .map(|i| {
                let top = if Some(i) == skip { 0 } else { degs[i] as usize };
                let mut row = Vec::with_capacity(top + 1);
                row.push(1u64);
                for e in 1..=top {
                    row.push(mulmod(row[e - 1], point[i], p));
                }
                row
            })
            .collect()
    }

    /// Substitutes a rational value for one variable; the variable stays in
    /// the ring with exponent zero.
    pub fn substitute(&self, var: usize, value: &Rational) -> Poly {
        let mut pw: Vec<Rational> = vec![Rational::ONE];
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let e = m.exp(var) as usize;
                while pw.len() <= e {
                    let next = pw.last().unwrap() * value;
                    pw.push(next);
                }
                (m.with_exp(var, 0), c * &pw[e])
            })
            .collect();
        Poly::from_terms(&self.ring, terms)
    }

    /// Coefficients with respect to `var`: entry `k` multiplies `var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(var) as usize].push((m.with_exp(var, 0), c.clone()));
        }
        buckets.into_iter().map(|b| Poly::from_terms(&self.ring, b)).collect()
    }

    /// Inverse of [`Poly::coefficients_in`].
    pub fn from_coefficients_in(ring: &Arc<Ring>, var: usize, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                debug_assert_eq!(m.exp(var), 0);
                terms.push((m.with_exp(var, k as u16), x.clone()));
            }
        }
        Poly::from_terms(ring, terms)
    }

    /// Integer content of the numerators and lcm of the denominators of the
    /// coefficients.
    pub fn content_denominator(&self) -> (BigInt, BigInt) {
        content_and_denominator(self.terms.iter().map(|t| &t.1))
    }

    /// Scalar multiple with coprime integer coefficients and positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let (g, l) = self.content_denominator();
        let mut s = Rational::from_big(num_rational::BigRational::new(l, g));
        if self.lc().is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Scalar multiple with leading coefficient one.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    /// Largest absolute value of the integer coefficients. Requires integer
    /// coefficients.
    pub(crate) fn max_norm(&self) -> BigInt {
        let mut m = BigInt::zero();
        for (_, c) in &self.terms {
            let a = c.numer().abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    pub(crate) fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> Poly {
        Poly::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }

    /// Render with the ring's variable names, e.g. `3*x^2*y - 1/2*x + 1`.
    pub fn to_expr_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(a.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ring.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Symmetric residue of `c` modulo `x`, i.e. in `(-x/2, x/2]`.
pub(crate) fn symmetric_mod(c: &BigInt, x: &BigInt) -> BigInt {
    let mut r = ((c % x) + x) % x;
    let half: BigInt = x >> 1;
    if r > half {
        r -= x;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::new(&["x", "y"])
    }

    #[test]
    fn grlex_order_and_display() {
        let r = ring();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let p = x
            .mul(&x)
            .mul(&y)
            .scale(&Rational::from_int(3))
            .add(&x.scale(&Rational::new(-1, 2)))
            .add(&Poly::one(&r))
            .add(&y.mul(&y).mul(&y));
        assert_eq!(p.to_string(), "3*x^2*y + y^3 - 1/2*x + 1");
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let a = x.add(&y);
        let b = x.sub(&y).add(&Poly::one(&r));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.div_exact(&x).is_none());
    }

    #[test]
    fn partial_power_rule() {
        let r = ring();
        let x = Poly::var(&r, 0);
        assert_eq!(x.pow(2).partial(0), x.scale(&Rational::from_int(2)));
        assert!(x.partial(1).is_zero());
    }
}
