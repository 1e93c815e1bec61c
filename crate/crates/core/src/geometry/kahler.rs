use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sympcalc_exact::linalg::{self, Matrix};
use sympcalc_exact::{Monomial, Poly, RatFunc, Rational, Ring};

use super::{curvature_from_gamma, multi_indices, phi_and_v, Chart, FedosovStructure, Slot, Tensor};
use crate::error::Error;
use crate::symplin::SympSpace;

/// Metric data compatible with the symplectic form: `g`, `g^{-1}` and
/// `J_a^b = J_ac g^{bc}`.
#[derive(Clone, Debug)]
pub struct KahlerData {
    pub space: Arc<SympSpace>,
    pub g: Matrix<RatFunc>,
    pub g_inv: Matrix<RatFunc>,
    pub j_mixed: Matrix<RatFunc>,
}

impl KahlerData {
    fn new(space: Arc<SympSpace>, g: Matrix<RatFunc>) -> Result<Self, Error> {
        let d = space.dim;
        let g_inv = linalg::inverse(&g).ok_or_else(|| Error::Invariant("metric is singular".into()))?;
        let zero = space.zero();
        let j_mixed: Matrix<RatFunc> = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| {
                        let mut acc = zero.clone();
                        for c in 0..d {
                            acc = acc.add(&space.jl(a, c).mul(&g_inv[b][c]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let sq = linalg::mat_mul(&j_mixed, &j_mixed, &zero);
        for (a, row) in sq.iter().enumerate() {
            for (b, x) in row.iter().enumerate() {
                let expected = if a == b { -1 } else { 0 };
                if !x.sub(&RatFunc::from_int(&space.ring, expected)).is_zero() {
                    return Err(Error::Invariant(format!(
                        "J_a^c J_c^b != -delta at ({a},{b}): metric and J are not compatible"
                    )));
                }
            }
        }
        Ok(KahlerData {
            space,
            g,
            g_inv,
            j_mixed,
        })
    }
}

/// A Kähler chart: the Levi-Civita connection of `g` preserves `J`.
#[derive(Clone, Debug)]
pub struct KahlerStructure {
    pub fedosov: FedosovStructure,
    pub data: KahlerData,
}

impl KahlerStructure {
    pub fn new(chart: Chart, g: Matrix<RatFunc>) -> Result<Self, Error> {
        let data = KahlerData::new(chart.space.clone(), g)?;
        let fedosov =
            FedosovStructure::levi_civita(chart, &data.g).map_err(|e| Error::Invariant(format!("not Kähler: {e}")))?;
        Ok(KahlerStructure { fedosov, data })
    }
}

/// Pieces of the Riemann tensor of a Kähler metric.
#[derive(Clone, Debug)]
pub struct KahlerDecomp {
    pub ricci: Tensor,
    pub scal: RatFunc,
    pub lambda: RatFunc,
    pub xi: Tensor,
    pub sigma: Tensor,
    pub u: Tensor,
}

fn contract(a: &[RatFunc], b: &[RatFunc], zero: &RatFunc) -> RatFunc {
    let mut acc = zero.clone();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add(&x.mul(y));
        }
    }
    acc
}

/// Splits `R` into `U`, `Ξ`, `Σ`, `Λ` using
/// `Ric = 2(n+2)Ξ + 2(n+1)Λg` and `Σ_ab = J_a^cΞ_bc`.
pub fn kahler_decompose(k: &KahlerData, r: &Tensor) -> KahlerDecomp {
    let sp = &k.space;
    let d = sp.dim;
    let n = sp.n as i64;
    let zero = sp.zero();
    let ricci = Tensor::from_fn(d, &[Slot::Down, Slot::Down], |i| {
        let mut acc = zero.clone();
        for a in 0..d {
            acc = acc.add(r.get(&[a, i[0], a, i[1]]));
        }
        acc
    });
    let mut scal = zero.clone();
    for b in 0..d {
        for dd in 0..d {
            scal = scal.add(&k.g_inv[b][dd].mul(ricci.get(&[b, dd])));
        }
    }
    let lambda = scal.scale(&Rational::new(1, 4 * n * (n + 1)));
    let xi = Tensor::from_fn(d, &[Slot::Down, Slot::Down], |i| {
        let l = lambda.mul(&k.g[i[0]][i[1]]).mul_int(2 * (n + 1));
        ricci.get(i).sub(&l).scale(&Rational::new(1, 2 * (n + 2)))
    });
    let sigma = Tensor::from_fn(d, &[Slot::Down, Slot::Down], |i| {
        let mut acc = zero.clone();
        for c in 0..d {
            acc = acc.add(&k.j_mixed[i[0]][c].mul(xi.get(&[i[1], c])));
        }
        acc
    });
    let u = r.sub(&kahler_reassemble(k, &xi, &sigma, &lambda));
    KahlerDecomp {
        ricci,
        scal,
        lambda,
        xi,
        sigma,
        u,
    }
}

/// The `Ξ`, `Σ` and `Λ` terms of the Kähler curvature decomposition.
fn kahler_reassemble(k: &KahlerData, xi: &Tensor, sigma: &Tensor, lambda: &RatFunc) -> Tensor {
    let sp = &k.space;
    let d = sp.dim;
    let zero = sp.zero();
    let gi = &k.g_inv;
    let col = |m: &dyn Fn(usize, usize) -> RatFunc, b: usize| -> Vec<RatFunc> { (0..d).map(|e| m(b, e)).collect() };
    let raise2 = |t: &Tensor| -> Vec<Vec<RatFunc>> {
        // t_b^c = t_be g^{ec}
        (0..d)
            .map(|b| {
                (0..d)
                    .map(|c| {
                        let row = col(&|b, e| t.get(&[b, e]).clone(), b);
                        let gc: Vec<RatFunc> = (0..d).map(|e| gi[e][c].clone()).collect();
                        contract(&row, &gc, &zero)
                    })
                    .collect()
            })
            .collect()
    };
    let xi_up = raise2(xi);
    let sigma_up = raise2(sigma);
    // Σ^c_d = g^{ce}Σ_ed and J^c_d = g^{ce}J_ed
    let raise1 = |f: &dyn Fn(usize, usize) -> RatFunc| -> Vec<Vec<RatFunc>> {
        (0..d)
            .map(|c| {
                (0..d)
                    .map(|dd| {
                        let mut acc = zero.clone();
                        for e in 0..d {
                            acc = acc.add(&gi[c][e].mul(&f(e, dd)));
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    };
    let sigma_cd = raise1(&|e, dd| sigma.get(&[e, dd]).clone());
    let j_cd = raise1(&|e, dd| sp.jl(e, dd).clone());
    let jm = &k.j_mixed;
    let g = &k.g;
    Tensor::from_fn(d, &[Slot::Down, Slot::Down, Slot::Up, Slot::Down], |i| {
        let (a, b, c, dd) = (i[0], i[1], i[2], i[3]);
        let delta = |x: usize, y: usize| x == y;
        let mut acc = zero.clone();
        if delta(a, c) {
            acc = acc.add(xi.get(&[b, dd]));
        }
        if delta(b, c) {
            acc = acc.sub(xi.get(&[a, dd]));
        }
        acc = acc.sub(&g[a][dd].mul(&xi_up[b][c]));
        acc = acc.add(&g[b][dd].mul(&xi_up[a][c]));
        acc = acc.add(&jm[a][c].mul(sigma.get(&[b, dd])));
        acc = acc.sub(&jm[b][c].mul(sigma.get(&[a, dd])));
        acc = acc.sub(&sp.jl(a, dd).mul(&sigma_up[b][c]));
        acc = acc.add(&sp.jl(b, dd).mul(&sigma_up[a][c]));
        acc = acc.add(&sp.jl(a, b).mul(&sigma_cd[c][dd]).mul_int(2));
        acc = acc.add(&j_cd[c][dd].mul(sigma.get(&[a, b])).mul_int(2));
        let mut l = zero.clone();
        if delta(a, c) {
            l = l.add(&g[b][dd]);
        }
        if delta(b, c) {
            l = l.sub(&g[a][dd]);
        }
        l = l.add(&jm[a][c].mul(sp.jl(b, dd)));
        l = l.sub(&jm[b][c].mul(sp.jl(a, dd)));
        l = l.add(&sp.jl(a, b).mul(&j_cd[c][dd]).mul_int(2));
        acc.add(&lambda.mul(&l))
    })
}

/// Residual of `J_c^a V_ab^c_d + 2(n(n+2)/(n+1)) Σ_bd`.
pub fn kahler_consequence_residual(k: &KahlerData, v: &Tensor, sigma: &Tensor) -> Tensor {
    let sp = &k.space;
    let d = sp.dim;
    let n = sp.n as i64;
    let coeff = Rational::new(2 * n * (n + 2), n + 1);
    Tensor::from_fn(d, &[Slot::Down, Slot::Down], |i| {
        let (b, dd) = (i[0], i[1]);
        let mut acc = sigma.get(&[b, dd]).scale(&coeff);
        for a in 0..d {
            for c in 0..d {
                let (j, x) = (&k.j_mixed[c][a], v.get(&[a, b, c, dd]));
                if !j.is_zero() && !x.is_zero() {
                    acc = acc.add(&j.mul(x));
                }
            }
        }
        acc
    })
}

/// First nonzero trace of `U` (all indices lowered with `g`) against
/// `g^{..}` or `J^{..}` over any pair of slots.
pub fn u_trace_residual(k: &KahlerData, u: &Tensor) -> Option<String> {
    let sp = &k.space;
    let d = sp.dim;
    let zero = sp.zero();
    let low = Tensor::from_fn(d, &[Slot::Down; 4], |i| {
        let mut acc = zero.clone();
        for e in 0..d {
            acc = acc.add(&u.get(&[i[0], i[1], e, i[3]]).mul(&k.g[e][i[2]]));
        }
        acc
    });
    let forms: [(&str, &Matrix<RatFunc>); 2] = [("g", &k.g_inv), ("J", &sp.j_upper)];
    for (name, m) in forms {
        for p in 0..4 {
            for q in p + 1..4 {
                for rest in multi_indices(d, 2) {
                    let mut acc = zero.clone();
                    for x in 0..d {
                        for y in 0..d {
                            if m[x][y].is_zero() {
                                continue;
                            }
                            let mut idx = [0usize; 4];
                            let mut it = rest.iter();
                            for (s, slot) in idx.iter_mut().enumerate() {
                                *slot = if s == p {
                                    x
                                } else if s == q {
                                    y
                                } else {
                                    *it.next().unwrap()
                                };
                            }
                            acc = acc.add(&m[x][y].mul(low.get(&idx)));
                        }
                    }
                    if !acc.is_zero() {
                        return Some(format!("{name}-trace over slots ({p},{q}) at {rest:?}: {acc}"));
                    }
                }
            }
        }
    }
    None
}

/// Standard complex structure on `(x1,y1,...)` coordinates as a matrix whose
/// columns are the images of the coordinate vectors.
pub fn complex_structure(n: usize) -> Matrix<Rational> {
    let d = 2 * n;
    let mut m = vec![vec![Rational::ZERO; d]; d];
    for j in 0..n {
        m[2 * j + 1][2 * j] = Rational::ONE;
        m[2 * j][2 * j + 1] = Rational::from_int(-1);
    }
    m
}

/// The `I`-invariant part of a Hessian, `g = (H + IᵀHI)/4`, and the
/// compatible form `J(X,Y) = g(IX,Y)`.
pub fn metric_from_potential_hessian(
    ring: &Arc<Ring>,
    n: usize,
    h: &Matrix<RatFunc>,
) -> (Matrix<RatFunc>, Matrix<RatFunc>) {
    let d = 2 * n;
    let i = complex_structure(n);
    let quarter = Rational::new(1, 4);
    let zero = RatFunc::zero(ring);
    let g: Matrix<RatFunc> = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| {
                    let mut acc = h[a][b].clone();
                    for c in 0..d {
                        for e in 0..d {
                            let w = &i[c][a] * &i[e][b];
                            if !w.is_zero() {
                                acc = acc.add(&h[c][e].scale(&w));
                            }
                        }
                    }
                    acc.scale(&quarter)
                })
                .collect()
        })
        .collect();
    let j = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| {
                    let mut acc = zero.clone();
                    for c in 0..d {
                        if !i[c][a].is_zero() {
                            acc = acc.add(&g[c][b].scale(&i[c][a]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    (g, j)
}

/// Exact curvature data of a Kähler metric at a single point, obtained
/// from the 2-jet of the metric.
#[derive(Clone, Debug)]
pub struct PointwiseKahler {
    pub point: Vec<Rational>,
    pub data: KahlerData,
    pub r: Tensor,
    pub v: Tensor,
    pub decomp: KahlerDecomp,
    /// Largest `|∇J|` component at the point; zero for a genuine Kähler
    /// metric.
    pub nabla_j_residual: Option<String>,
}

fn random_potential(ring: &Arc<Ring>, n: usize, rng: &mut ChaCha8Rng) -> Poly {
    let d = 2 * n;
    let mut terms = Vec::new();
    for a in 0..d {
        let mut e = vec![0u16; d];
        e[a] = 2;
        terms.push((Monomial::from_exponents(&e), Rational::ONE));
    }
    for deg in 3..=4u16 {
        for idx in multi_indices(d, deg as usize) {
            if idx.windows(2).any(|w| w[0] > w[1]) || rng.gen_range(0..3) != 0 {
                continue;
            }
            let mut e = vec![0u16; d];
            for &x in &idx {
                e[x] += 1;
            }
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                terms.push((Monomial::from_exponents(&e), Rational::new(c, 5)));
            }
        }
    }
    Poly::from_terms(ring, terms)
}

fn eval_matrix(m: &Matrix<RatFunc>, p: &[Rational]) -> Matrix<Rational> {
    m.iter()
        .map(|r| r.iter().map(|x| x.eval(p).expect("polynomial entries")).collect())
        .collect()
}

/// Curvature of the Kähler metric with a seeded random polynomial
/// potential `|z|² + (cubic and quartic terms)` at `point`.
pub fn pointwise_kahler(n: usize, seed: u64, point: &[Rational]) -> Result<PointwiseKahler, Error> {
    let d = 2 * n;
    let names = super::builtin::coordinate_names(n);
    let ring = Ring::new(&names);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = random_potential(&ring, n, &mut rng);
    let h: Matrix<RatFunc> = (0..d)
        .map(|a| (0..d).map(|b| RatFunc::from_poly(k.partial(a).partial(b))).collect())
        .collect();
    let (g, j) = metric_from_potential_hessian(&ring, n, &h);
    let g0 = eval_matrix(&g, point);
    let j0 = eval_matrix(&j, point);
    let g0_inv = linalg::inverse(&g0).ok_or_else(|| Error::Invariant("metric singular at the point".into()))?;
    let dg: Vec<Matrix<Rational>> = (0..d)
        .map(|e| {
            eval_matrix(
                &g.iter().map(|r| r.iter().map(|x| x.partial(e)).collect()).collect(),
                point,
            )
        })
        .collect();
    let ddg: Vec<Vec<Matrix<Rational>>> = (0..d)
        .map(|f| {
            (0..d)
                .map(|e| {
                    let m: Matrix<RatFunc> = g
                        .iter()
                        .map(|r| r.iter().map(|x| x.partial(e).partial(f)).collect())
                        .collect();
                    eval_matrix(&m, point)
                })
                .collect()
        })
        .collect();
    let half = Rational::new(1, 2);
    // Christoffel symbols of the first kind and their first derivatives.
    let first =
        |dd: usize, a: usize, b: usize| -> Rational { &(&(&dg[a][b][dd] + &dg[b][a][dd]) - &dg[dd][a][b]) * &half };
    let first_d = |f: usize, dd: usize, a: usize, b: usize| -> Rational {
        &(&(&ddg[f][a][b][dd] + &ddg[f][b][a][dd]) - &ddg[f][dd][a][b]) * &half
    };
    let ginv_d: Vec<Matrix<Rational>> = (0..d)
        .map(|f| {
            let t = linalg::mat_mul(&g0_inv, &dg[f], &Rational::ZERO);
            linalg::mat_mul(&t, &g0_inv, &Rational::ZERO)
                .into_iter()
                .map(|r| r.into_iter().map(|x| -x).collect())
                .collect()
        })
        .collect();
    let gamma0 = |c: usize, a: usize, b: usize| -> Rational {
        (0..d).fold(Rational::ZERO, |acc, dd| acc + &g0_inv[c][dd] * &first(dd, a, b))
    };
    let gamma_d = |f: usize, c: usize, a: usize, b: usize| -> Rational {
        (0..d).fold(Rational::ZERO, |acc, dd| {
            acc + &ginv_d[f][c][dd] * &first(dd, a, b) + &g0_inv[c][dd] * &first_d(f, dd, a, b)
        })
    };
    // First-order Taylor polynomial of Γ around the point; its curvature
    // at the point equals the true curvature there.
    let shifted: Vec<RatFunc> = (0..d)
        .map(|f| RatFunc::var(&ring, f).sub(&RatFunc::constant(&ring, point[f].clone())))
        .collect();
    let gamma_taylor = Tensor::from_fn(d, &[Slot::Up, Slot::Down, Slot::Down], |i| {
        let (c, a, b) = (i[0], i[1], i[2]);
        let mut acc = RatFunc::constant(&ring, gamma0(c, a, b));
        for (f, s) in shifted.iter().enumerate() {
            acc = acc.add(&s.scale(&gamma_d(f, c, a, b)));
        }
        acc
    });
    let r_full = curvature_from_gamma(&ring, d, &gamma_taylor);
    let r_vals = r_full.eval(point).expect("polynomial");

    // ∇_a J_bc at the point, with ∂J = Iᵀ∂g.
    let i = complex_structure(n);
    let mut nabla_j_residual = None;
    'outer: for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let mut v = (0..d).fold(Rational::ZERO, |acc, e| acc + &i[e][b] * &dg[a][e][c]);
                for e in 0..d {
                    v = v - &gamma0(e, a, b) * &j0[e][c] - &gamma0(e, a, c) * &j0[b][e];
                }
                if !v.is_zero() {
                    nabla_j_residual = Some(format!("nabla_{a} J_{b}{c} = {v}"));
                    break 'outer;
                }
            }
        }
    }

    let point_ring = Ring::new::<&str>(&[]);
    let cst = |x: &Rational| RatFunc::constant(&point_ring, x.clone());
    let jc: Matrix<RatFunc> = j0.iter().map(|r| r.iter().map(cst).collect()).collect();
    let space = Arc::new(SympSpace::new(n, point_ring.clone(), jc, vec![])?);
    let gc: Matrix<RatFunc> = g0.iter().map(|r| r.iter().map(cst).collect()).collect();
    let data = KahlerData::new(space.clone(), gc)?;
    let r = Tensor {
        dim: d,
        slots: r_full.slots.clone(),
        data: r_vals.iter().map(cst).collect(),
    };
    let (_, v) = phi_and_v(&space, &r);
    let decomp = kahler_decompose(&data, &r);
    Ok(PointwiseKahler {
        point: point.to_vec(),
        data,
        r,
        v,
        decomp,
        nabla_j_residual,
    })
}
