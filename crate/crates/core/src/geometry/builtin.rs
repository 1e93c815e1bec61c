use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sympcalc_exact::linalg::Matrix;
use sympcalc_exact::{Monomial, Poly, RatFunc, Rational, Ring};

use super::{metric_from_potential_hessian, multi_indices, Chart, FedosovStructure, KahlerStructure, Slot, Tensor};
use crate::error::Error;
use crate::symplin::{standard_j, SympSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinKind {
    Flat,
    FubiniStudy,
    /// Seeded random polynomial Fedosov structure on the standard form.
    Random {
        seed: u64,
    },
}

/// A built-in structure; Kähler data is present for `flat` and
/// `fubini_study`.
#[derive(Clone, Debug)]
pub struct Builtin {
    pub fedosov: FedosovStructure,
    pub kahler: Option<KahlerStructure>,
}

/// `x1, y1, x2, y2, ...`
pub fn coordinate_names(n: usize) -> Vec<String> {
    (1..=n).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect()
}

pub fn builtin_chart(kind: BuiltinKind, n: usize) -> Result<Builtin, Error> {
    let max = match kind {
        BuiltinKind::Flat => 3,
        BuiltinKind::FubiniStudy => 2,
        BuiltinKind::Random { .. } => 3,
    };
    if n == 0 || n > max {
        return Err(Error::Config(format!("n must be in 1..={max} for this chart, got {n}")));
    }
    let ring = Ring::new(&coordinate_names(n));
    match kind {
        BuiltinKind::Flat => {
            let d = 2 * n;
            let g: Matrix<RatFunc> = (0..d)
                .map(|a| (0..d).map(|b| RatFunc::from_int(&ring, (a == b) as i64)).collect())
                .collect();
            let chart = Chart::new("flat", SympSpace::standard(n, &ring))?;
            let k = KahlerStructure::new(chart, g)?;
            Ok(Builtin {
                fedosov: k.fedosov.clone(),
                kahler: Some(k),
            })
        }
        BuiltinKind::FubiniStudy => {
            let k = fubini_study(&ring, n)?;
            Ok(Builtin {
                fedosov: k.fedosov.clone(),
                kahler: Some(k),
            })
        }
        BuiltinKind::Random { seed } => Ok(Builtin {
            fedosov: random_fedosov(&ring, n, seed)?,
            kahler: None,
        }),
    }
}

/// Affine chart of complex projective space with the metric induced by the
/// potential `log(1 + |z|²)`: the Hessian of `log D` is `∂_b(∂_a D / D)`.
fn fubini_study(ring: &Arc<Ring>, n: usize) -> Result<KahlerStructure, Error> {
    let d = 2 * n;
    let mut big_d = RatFunc::one(ring);
    for a in 0..d {
        big_d = big_d.add(&RatFunc::var(ring, a).pow(2));
    }
    let grad: Vec<RatFunc> = (0..d).map(|a| big_d.partial(a).div(&big_d)).collect();
    let h: Matrix<RatFunc> = (0..d).map(|a| (0..d).map(|b| grad[a].partial(b)).collect()).collect();
    let (g, j) = metric_from_potential_hessian(ring, n, &h);
    let origin = vec![Rational::ZERO; d];
    let chart = Chart::new("fubini_study", SympSpace::new(n, ring.clone(), j, origin)?)?;
    KahlerStructure::new(chart, g)
}

fn random_poly(ring: &Arc<Ring>, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let d = ring.nvars();
    let mut terms = Vec::new();
    for deg in 0..=max_deg {
        for idx in multi_indices(d, deg) {
            if idx.windows(2).any(|w| w[0] > w[1]) || rng.gen_range(0..3) != 0 {
                continue;
            }
            let mut e = vec![0u16; d];
            for &x in &idx {
                e[x] += 1;
            }
            let c = rng.gen_range(-2i64..=2);
            if c != 0 {
                terms.push((Monomial::from_exponents(&e), Rational::from_int(c)));
            }
        }
    }
    Poly::from_terms(ring, terms)
}

/// `Γ^c_ab = J^{cd} Ξ_dab` with `Ξ` totally symmetric, entries random
/// polynomials of degree at most 2.
pub fn random_fedosov(ring: &Arc<Ring>, n: usize, seed: u64) -> Result<FedosovStructure, Error> {
    let d = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xi = Tensor::zero(ring, d, &[Slot::Down; 3]);
    for idx in multi_indices(d, 3) {
        if idx.windows(2).any(|w| w[0] > w[1]) {
            continue;
        }
        let p = RatFunc::from_poly(random_poly(ring, &mut rng, 2));
        let (a, b, c) = (idx[0], idx[1], idx[2]);
        for perm in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            xi.set(&perm, p.clone());
        }
    }
    let space = SympSpace::new(n, ring.clone(), standard_j(ring, n), vec![Rational::ZERO; d])?;
    let gamma = Tensor::from_fn(d, &[Slot::Up, Slot::Down, Slot::Down], |i| {
        let mut acc = RatFunc::zero(ring);
        for dd in 0..d {
            let j = space.ju(i[0], dd);
            if !j.is_zero() {
                acc = acc.add(&j.mul(xi.get(&[dd, i[1], i[2]])));
            }
        }
        acc
    });
    let chart = Chart::new(&format!("random(seed={seed})"), space)?;
    FedosovStructure::new(chart, gamma)
}

/// Seeded random rank-`r` connection matrices with entries of degree at
/// most 1; generically not symplectically flat.
pub fn random_connection_matrices(ring: &Arc<Ring>, n: usize, rank: usize, seed: u64) -> Vec<Matrix<RatFunc>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    (0..2 * n)
        .map(|_| {
            (0..rank)
                .map(|_| {
                    (0..rank)
                        .map(|_| RatFunc::from_poly(random_poly(ring, &mut rng, 1)))
                        .collect()
                })
                .collect()
        })
        .collect()
}
