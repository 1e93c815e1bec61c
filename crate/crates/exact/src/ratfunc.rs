use std::fmt;
use std::sync::Arc;

use crate::gcd::gcd;
use crate::poly::{same_ring, Poly, Ring};
use crate::rational::Rational;

/// Reduced quotient of polynomials with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        RatFunc {
            num: Poly::zero(ring),
            den: Poly::one(ring),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Rational::ONE)
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        RatFunc {
            num: Poly::constant(ring, c),
            den: Poly::one(ring),
        }
    }

    pub fn from_int(ring: &Arc<Ring>, c: i64) -> Self {
        Self::constant(ring, Rational::from_int(c))
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Self::from_poly(Poly::var(ring, i))
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.ring());
        RatFunc { num: p, den }
    }

    /// Builds `num/den` in canonical form. Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let g = gcd(&num, &den);
        if g.is_one() {
            Self::normalize(num, den)
        } else {
            Self::normalize(
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        }
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero(num.ring());
        }
        if den.lc().is_one() {
            return RatFunc { num, den };
        }
        let s = den.lc().recip();
        RatFunc {
            num: num.scale(&s),
            den: den.scale(&s),
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.num.ring()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RatFunc) -> Self {
        assert!(
            same_ring(self.ring(), other.ring()),
            "rational functions over different variable lists"
        );
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc {
                num: self.num.mul(&other.den).add(&other.num),
                den: other.den.clone(),
            };
        }
        if other.den.is_one() {
            return RatFunc {
                num: self.num.add(&other.num.mul(&self.den)),
                den: self.den.clone(),
            };
        }
        // Henrici: with g = gcd(b, d), only g can share factors with the
        // new numerator.
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            return RatFunc::normalize(num, self.den.mul(&other.den));
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return RatFunc::zero(self.ring());
        }
        let h = gcd(&num, &g);
        let (num, g) = if h.is_one() {
            (num, g)
        } else {
            (num.div_exact(&h).unwrap(), g.div_exact(&h).unwrap())
        };
        RatFunc::normalize(num, b1.mul(&d1).mul(&g))
    }

    /// Sum of many terms over one common denominator, reduced once at the
    /// end. Much cheaper than repeated `add` when most denominators divide
    /// one another.
    pub fn sum<'a, I: IntoIterator<Item = &'a RatFunc>>(ring: &Arc<Ring>, terms: I) -> Self {
        let parts: Vec<(Poly, Poly)> = terms
            .into_iter()
            .filter(|t| !t.is_zero())
            .map(|t| (t.num.clone(), t.den.clone()))
            .collect();
        Self::sum_fractions(ring, parts)
    }

    /// `Σ c_i a_i b_i`; each product is reduced, the sum is formed over a
    /// common denominator.
    pub fn sum_of_products<'a, I>(ring: &Arc<Ring>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Rational, &'a RatFunc, &'a RatFunc)>,
    {
        let parts: Vec<(Poly, Poly)> = terms
            .into_iter()
            .filter(|(c, a, b)| !c.is_zero() && !a.is_zero() && !b.is_zero())
            .map(|(c, a, b)| {
                let p = a.mul(b);
                (p.num.scale(&c), p.den)
            })
            .collect();
        Self::sum_fractions(ring, parts)
    }

    fn sum_fractions(ring: &Arc<Ring>, parts: Vec<(Poly, Poly)>) -> Self {
        match parts.len() {
            0 => return RatFunc::zero(ring),
            1 => {
                let (n, d) = parts.into_iter().next().unwrap();
                return RatFunc::new(n, d);
            }
            _ => {}
        }
        let mut l = Poly::one(ring);
        let mut seen: Vec<Poly> = Vec::new();
        for (_, d) in &parts {
            if d.is_one() || *d == l || seen.contains(d) {
                continue;
            }
            seen.push(d.clone());
            if l.is_one() {
                l = d.clone();
            } else if l.div_exact(d).is_none() {
                let g = gcd(&l, d);
                l = l.mul(&d.div_exact(&g).unwrap());
            }
        }
        let mut cofactors: Vec<(Poly, Poly)> = Vec::new();
        let mut num = Poly::zero(ring);
        for (n, d) in &parts {
            let scaled = if *d == l {
                n.clone()
            } else if d.is_one() {
                n.mul(&l)
            } else {
                let q = match cofactors.iter().find(|(k, _)| k == d) {
                    Some((_, q)) => q.clone(),
                    None => {
                        let q = l.div_exact(d).unwrap();
                        cofactors.push((d.clone(), q.clone()));
                        q
                    }
                };
                n.mul(&q)
            };
            num = num.add(&scaled);
        }
        if l.is_one() {
            return RatFunc::from_poly(num);
        }
        RatFunc::new(num, l)
    }

    pub fn sub(&self, other: &RatFunc) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> Self {
        assert!(
            same_ring(self.ring(), other.ring()),
            "rational functions over different variable lists"
        );
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.ring());
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&other.num));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let div = |p: &Poly, g: &Poly| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).unwrap()
            }
        };
        let num = div(&self.num, &g1).mul(&div(&other.num, &g2));
        let den = div(&self.den, &g2).mul(&div(&other.den, &g1));
        RatFunc::normalize(num, den)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RatFunc::zero(self.ring());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_int(&self, c: i64) -> Self {
        self.scale(&Rational::from_int(c))
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of the zero rational function");
        RatFunc::normalize(self.den.clone(), self.num.clone())
    }

    /// Quotient. Panics if `other` is zero.
    pub fn div(&self, other: &RatFunc) -> Self {
        self.mul(&other.recip())
    }

    pub fn pow(&self, e: u32) -> Self {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Partial derivative with respect to variable index `var`.
    pub fn partial(&self, var: usize) -> Self {
        let dn = self.num.partial(var);
        if self.den.is_one() {
            return RatFunc::from_poly(dn);
        }
        let dd = self.den.partial(var);
        if dd.is_zero() {
            return RatFunc::new(dn, self.den.clone());
        }
        if dn.is_zero() && self.num.is_zero() {
            return RatFunc::zero(self.ring());
        }
        // d(a/b) = (a' b/g - a b'/g) / (b * b/g) with g = gcd(b, b'); the
        // numerator is coprime to b/g, so only g can cancel.
        let g = gcd(&self.den, &dd);
        let bg = self.den.div_exact(&g).unwrap();
        let dg = dd.div_exact(&g).unwrap();
        let num = dn.mul(&bg).sub(&self.num.mul(&dg));
        if num.is_zero() {
            return RatFunc::zero(self.ring());
        }
        let h = gcd(&num, &g);
        if h.is_one() {
            RatFunc::normalize(num, self.den.mul(&bg))
        } else {
            let num = num.div_exact(&h).unwrap();
            let den = self.den.div_exact(&h).unwrap().mul(&bg);
            RatFunc::normalize(num, den)
        }
    }

    /// Partial derivative by variable name.
    pub fn partial_by_name(&self, name: &str) -> Result<Self, crate::ExactError> {
        let i = self
            .ring()
            .index_of(name)
            .ok_or_else(|| crate::ExactError::UnknownVariable(name.to_string()))?;
        Ok(self.partial(i))
    }

    /// Value at a point, or `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}
