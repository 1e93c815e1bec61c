//! Multivariate polynomial gcd over the rationals.
//!
//! The dispatcher tries cheap exits first (constants, exact division, a
//! modular coprimality certificate), then the integer-evaluation heuristic
//! gcd, and finally a recursive primitive PRS which always succeeds.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::poly::{symmetric_mod, Poly};
use crate::rational::{invmod, mulmod, Rational};

const P: u64 = (1 << 61) - 1;
const HEU_ROUNDS: usize = 6;
const CACHE_LIMIT: usize = 4096;

const FACTOR_LIMIT: usize = 16;

thread_local! {
    static CACHE: RefCell<HashMap<(Poly, Poly), Poly>> = RefCell::new(HashMap::new());
    // Recent nontrivial gcds. Denominators in one computation tend to be
    // products of the same few factors, so dividing these out first avoids
    // most calls into the heuristic gcd.
    static FACTORS: RefCell<Vec<Poly>> = const { RefCell::new(Vec::new()) };
}

fn known_common_factor(a: &Poly, b: &Poly) -> Option<(Poly, Poly, Poly)> {
    FACTORS.with(|f| {
        let f = f.borrow();
        f.iter().find_map(|g| {
            if g.ring() != a.ring() || g.total_degree() > a.total_degree().min(b.total_degree()) {
                return None;
            }
            let qa = a.div_exact(g)?;
            let qb = b.div_exact(g)?;
            Some((g.clone(), qa, qb))
        })
    })
}

fn remember_factor(g: &Poly) {
    if g.is_constant() {
        return;
    }
    FACTORS.with(|f| {
        let mut f = f.borrow_mut();
        if let Some(i) = f.iter().position(|h| h == g) {
            let h = f.remove(i);
            f.insert(0, h);
            return;
        }
        f.insert(0, g.clone());
        f.truncate(FACTOR_LIMIT);
    });
}

/// Deterministic splitmix64 stream for evaluation points. The modular test
/// is one-sided (it only ever certifies coprimality), so the choice of
/// points affects speed, never results.
struct Points(u64);

impl Points {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        (z ^ (z >> 31)) % (P - 1) + 1
    }
}

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.ring());
    }
    if a.var_mask() & b.var_mask() == 0 {
        return Poly::one(a.ring());
    }
    let (small, large) = if a.nterms() <= b.nterms() { (a, b) } else { (b, a) };
    if large.div_exact(small).is_some() {
        return small.monic();
    }
    if small.nterms() == large.nterms() && small.div_exact(large).is_some() {
        return large.monic();
    }
    if modular_coprime(a, b) {
        return Poly::one(a.ring());
    }
    if let Some((g, qa, qb)) = known_common_factor(a, b) {
        return gcd(&qa, &qb).mul(&g).monic();
    }
    let key = (a.clone(), b.clone());
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return Poly::from_terms(a.ring(), hit.terms().to_vec());
    }
    let g = hard_gcd(a, b);
    remember_factor(&g);
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(key, g.clone());
    });
    g
}

fn hard_gcd(a: &Poly, b: &Poly) -> Poly {
    let ai = a.primitive_integer();
    let bi = b.primitive_integer();
    if let Some(h) = heu_gcd(&ai, &bi) {
        if let (Some(ca), Some(cb)) = (ai.div_exact(&h), bi.div_exact(&h)) {
            if ca.is_constant() || cb.is_constant() || modular_coprime(&ca, &cb) {
                return h.monic();
            }
        }
    }
    prs_gcd(a, b).monic()
}

/// `a mod b` over F_p for nonempty, trimmed `b`; coefficients indexed by
/// degree, result trimmed.
pub(crate) fn uni_rem_mod(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let inv = invmod(b[db], p);
    while a.last() == Some(&0) {
        a.pop();
    }
    while a.len() > db {
        let da = a.len() - 1;
        let q = mulmod(a[da], inv, p);
        for (i, &bc) in b.iter().enumerate() {
            let idx = da - db + i;
            a[idx] = (a[idx] + p - mulmod(q, bc, p)) % p;
        }
        a.pop();
        while a.last() == Some(&0) {
            a.pop();
        }
    }
    a
}

/// Cheap necessary condition for `d | f`: the image of `d` in F_p[v] at a
/// fixed point must divide the image of `f`. `false` means `d` certainly
/// does not divide `f`.
pub(crate) fn may_divide(f: &Poly, d: &Poly) -> bool {
    let mask = d.var_mask();
    if mask == 0 {
        return true;
    }
    let v = mask.trailing_zeros() as usize;
    let mut rng = Points(0xD1_71DE);
    let point: Vec<u64> = (0..f.ring().nvars()).map(|_| rng.next()).collect();
    let (Some(uf), Some(mut ud)) = (f.univariate_mod(v, &point, P), d.univariate_mod(v, &point, P)) else {
        return true;
    };
    while ud.last() == Some(&0) {
        ud.pop();
    }
    if ud.is_empty() {
        return true;
    }
    uni_rem_mod(uf, &ud, P).is_empty()
}

/// Univariate polynomial gcd over F_p; coefficients indexed by degree.
fn uni_gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let db = b.len() - 1;
        let inv = invmod(*b.last().unwrap(), P);
        while a.len() > db {
            let da = a.len() - 1;
            let q = mulmod(*a.last().unwrap(), inv, P);
            if q != 0 {
                for (i, &bc) in b.iter().enumerate() {
                    let idx = da - db + i;
                    a[idx] = (a[idx] + P - mulmod(q, bc, P)) % P;
                }
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Returns `true` only if `a` and `b` are certainly coprime. For each
/// shared variable the images in F_p[v] keep their leading coefficients, so
/// a constant image gcd proves the true gcd has degree zero in `v`.
pub(crate) fn modular_coprime(a: &Poly, b: &Poly) -> bool {
    let shared = a.var_mask() & b.var_mask();
    if shared == 0 {
        return true;
    }
    let n = a.ring().nvars();
    let mut rng = Points(0x5EED);
    for v in 0..n {
        if shared & (1 << v) == 0 {
            continue;
        }
        let (da, db) = (a.degree_in(v) as usize, b.degree_in(v) as usize);
        let mut certified = false;
        for _ in 0..3 {
            let point: Vec<u64> = (0..n).map(|_| rng.next()).collect();
            let (Some(ua), Some(ub)) = (a.univariate_mod(v, &point, P), b.univariate_mod(v, &point, P)) else {
                return false;
            };
            if ua[da] == 0 || ub[db] == 0 {
                continue;
            }
            if uni_gcd_mod(ua, ub).len() <= 1 {
                certified = true;
            }
            break;
        }
        if !certified {
            return false;
        }
    }
    true
}

fn integer_content(p: &Poly) -> BigInt {
    p.content_denominator().0
}

/// Heuristic gcd of integer-coefficient polynomials by evaluation at a
/// large integer and balanced-digit interpolation. Returns a common divisor
/// with primitive integer coefficients times the common integer content.
fn heu_gcd(f: &Poly, g: &Poly) -> Option<Poly> {
    let ring = f.ring().clone();
    if f.is_zero() {
        return Some(g.clone());
    }
    if g.is_zero() {
        return Some(f.clone());
    }
    if f.is_constant() || g.is_constant() {
        let c = integer_content(f).gcd(&integer_content(g));
        return Some(Poly::constant(&ring, Rational::from_bigint(c)));
    }
    let mask = f.var_mask() | g.var_mask();
    let v = mask.trailing_zeros() as usize;

    let gc = integer_content(f).gcd(&integer_content(g));
    let inv = Rational::from_bigint(gc.clone()).recip();
    let f = f.scale(&inv);
    let g = g.scale(&inv);

    let fnorm = f.max_norm();
    let gnorm = g.max_norm();
    let b: BigInt = BigInt::from(2) * (&fnorm).min(&gnorm) + 29;
    let lcf = f.lc().numer().abs();
    let lcg = g.lc().numer().abs();
    let by_lc: BigInt = BigInt::from(2) * (&fnorm / &lcf).min(&gnorm / &lcg) + 4;
    let mut x: BigInt = b.clone().min(BigInt::from(99) * b.sqrt()).max(by_lc);

    for _ in 0..HEU_ROUNDS {
        let xr = Rational::from_bigint(x.clone());
        let ff = f.substitute(v, &xr);
        let gg = g.substitute(v, &xr);
        if !ff.is_zero() && !gg.is_zero() {
            let h = heu_gcd(&ff, &gg)?;
            let h = interpolate(&h, &x, v).primitive_integer();
            if f.div_exact(&h).is_some() && g.div_exact(&h).is_some() {
                return Some(h.scale(&Rational::from_bigint(gc)));
            }
        }
        x = BigInt::from(73794) * &x * x.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

/// Rebuilds a polynomial in `v` from its value at `v = x`, reading the
/// coefficients as balanced base-`x` digits.
fn interpolate(h: &Poly, x: &BigInt, v: usize) -> Poly {
    let ring = h.ring().clone();
    let mut digits = Vec::new();
    let mut rest = h.clone();
    let xr = Rational::from_bigint(x.clone()).recip();
    while !rest.is_zero() {
        let d = rest.map_coeffs(|c| Rational::from_bigint(symmetric_mod(&c.numer(), x)));
        rest = rest.sub(&d).scale(&xr);
        digits.push(d);
    }
    let p = Poly::from_coefficients_in(&ring, v, &digits);
    if !p.is_zero() && p.lc().is_negative() {
        p.neg()
    } else {
        p
    }
}

/// Content with respect to `v`: the gcd of the coefficients of powers of `v`.
fn content_in(p: &Poly, v: usize) -> Poly {
    let mut c = Poly::zero(p.ring());
    for coeff in p.coefficients_in(v) {
        if coeff.is_zero() {
            continue;
        }
        c = gcd(&c, &coeff);
        if c.is_constant() {
            return Poly::one(p.ring());
        }
    }
    c
}

/// Sparse pseudo-remainder of `a` by `b` with respect to `v`.
fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let bc = b.coefficients_in(v);
    let lcb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = r.coefficients_in(v)[dr as usize].clone();
        let mut e = vec![0u16; r.ring().nvars()];
        e[v] = dr - db;
        let shift = Poly::monomial(r.ring(), &e, Rational::ONE);
        r = r.mul(&lcb).sub(&lcr.mul(&shift).mul(b));
    }
    r
}

/// Recursive primitive polynomial remainder sequence gcd.
fn prs_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.ring());
    }
    let shared = a.var_mask() & b.var_mask();
    if shared == 0 {
        return Poly::one(a.ring());
    }
    let v = shared.trailing_zeros() as usize;
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut x = a.div_exact(&ca).expect("content divides");
    let mut y = b.div_exact(&cb).expect("content divides");
    if x.degree_in(v) < y.degree_in(v) {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        if y.degree_in(v) == 0 {
            // A nonzero remainder free of v: primitive parts are coprime in v.
            return c;
        }
        let r = pseudo_rem(&x, &y, v);
        x = y;
        y = if r.is_zero() {
            r
        } else {
            let cr = content_in(&r, v);
            r.div_exact(&cr).expect("content divides").primitive_integer()
        };
    }
    c.mul(&x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;

    fn p(ring: &std::sync::Arc<crate::poly::Ring>, s: &str) -> Poly {
        let f = crate::parse::parse_expr(s, ring).unwrap();
        assert!(f.den().is_one());
        f.num().clone()
    }

    #[test]
    fn shared_factor_found() {
        let r = Ring::new(&["x", "y", "z"]);
        let d = p(&r, "1 + x^2 + y^2 + z^2");
        let a = d.pow(2).mul(&p(&r, "x - 3*y"));
        let b = d.mul(&p(&r, "x*z + 7"));
        assert_eq!(gcd(&a, &b), d);
        assert_eq!(prs_gcd(&a, &b).monic(), d);
    }

    #[test]
    fn coprime_certified() {
        let r = Ring::new(&["x", "y"]);
        let a = p(&r, "x^2 + y^2 + 1");
        let b = p(&r, "x*y - 2");
        assert!(modular_coprime(&a, &b));
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn heuristic_agrees_with_prs() {
        let r = Ring::new(&["x", "y"]);
        let g = p(&r, "3*x^2*y - 5*y + 2");
        let a = g.mul(&p(&r, "x + y^3 - 4"));
        let b = g.mul(&p(&r, "2*x^3 - y"));
        let h = heu_gcd(&a.primitive_integer(), &b.primitive_integer()).unwrap();
        assert_eq!(h.monic(), g.monic());
        assert_eq!(prs_gcd(&a, &b).monic(), g.monic());
    }

    #[test]
    fn univariate_mod_gcd() {
        // (t - 1)(t - 2) and (t - 1)(t + 5)
        let a = vec![2, P - 3, 1];
        let b = vec![P - 5, 4, 1];
        let g = uni_gcd_mod(a, b);
        assert_eq!(g.len(), 2);
    }
}
