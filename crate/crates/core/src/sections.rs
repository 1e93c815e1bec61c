//! Generic polynomial sections. A section whose coefficients are free
//! symbols is linear in those symbols, so an operator identity holds on it
//! exactly when it holds on every basis section `x^α e_i`; the checks below
//! iterate over those basis sections and report the first failing one.

use std::sync::Arc;

use sympcalc_exact::{Poly, RatFunc, Rational, Ring};

use crate::geometry::multi_indices;

/// Monomials of total degree at most `deg`, graded, as RatFuncs.
pub fn monomials(ring: &Arc<Ring>, deg: usize) -> Vec<RatFunc> {
    let nv = ring.nvars();
    let mut out = Vec::new();
    for k in 0..=deg {
        for idx in multi_indices(nv.max(1), k) {
            if nv == 0 && k > 0 {
                break;
            }
            if idx.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            let mut e = vec![0u16; nv];
            for &x in &idx {
                e[x] += 1;
            }
            out.push(RatFunc::from_poly(Poly::monomial(ring, &e, Rational::ONE)));
        }
    }
    out
}

use crate::symplin::{basis, perp_frame, Form, SympSpace};

/// Basis of the fibre `Λ^k ⊗ E` or `Λ^k_⊥ ⊗ E`: scalar frame forms with
/// labels, to be tensored with monomials and value vectors.
#[derive(Clone, Debug)]
pub struct FibreBasis {
    pub k: usize,
    pub rank: usize,
    pub perp: bool,
    pub frames: Vec<Form>,
    pub labels: Vec<String>,
}

impl FibreBasis {
    pub fn full(space: &SympSpace, k: usize, rank: usize) -> Self {
        let b = basis(space.dim, k);
        FibreBasis {
            k,
            rank,
            perp: false,
            frames: b.tuples.iter().map(|t| space.unit_form(t, 1, 0)).collect(),
            labels: (0..b.len()).map(|i| b.label(i)).collect(),
        }
    }

    /// Trace-free forms; each frame form is labelled by the basis element
    /// on which it is the identity.
    pub fn perp(space: &SympSpace, k: usize, rank: usize) -> Self {
        let b = basis(space.dim, k);
        let (frames, free) = perp_frame(space, k);
        FibreBasis {
            k,
            rank,
            perp: true,
            frames,
            labels: free.iter().map(|&f| format!("perp({})", b.label(f))).collect(),
        }
    }

    pub fn fibre_dim(&self) -> usize {
        self.frames.len() * self.rank
    }

    /// `m · frame_f ⊗ e_v`.
    pub fn section(&self, m: &RatFunc, f: usize, v: usize) -> Form {
        let fr = &self.frames[f];
        let mut out = Form {
            k: fr.k,
            dim: fr.dim,
            rank: self.rank,
            comps: vec![RatFunc::zero(m.ring()); fr.comps.len() * self.rank],
        };
        for (t, c) in fr.comps.iter().enumerate() {
            if !c.is_zero() {
                out.comps[t * self.rank + v] = c.mul(m);
            }
        }
        out
    }

    pub fn section_label(&self, m: &RatFunc, f: usize, v: usize) -> String {
        format!("({m}) {} (x) e{v}", self.labels[f])
    }
}

/// Every basis section `m · frame ⊗ e_v` with `m` a monomial of degree at
/// most `deg`, paired with a label.
pub fn basis_sections(fb: &FibreBasis, ring: &Arc<Ring>, deg: usize) -> Vec<(Form, String)> {
    let mut out = Vec::new();
    for m in monomials(ring, deg) {
        for f in 0..fb.frames.len() {
            for v in 0..fb.rank {
                out.push((fb.section(&m, f, v), fb.section_label(&m, f, v)));
            }
        }
    }
    out
}

/// `label = value` for the first nonzero component of a form.
pub fn form_witness(f: &Form) -> Option<String> {
    f.first_nonzero().map(|(t, v)| {
        let label = basis(f.dim, f.k).label(t);
        format!("{label} (x) e{v} = {}", f.at(t, v))
    })
}

/// Evaluates `check` on `0..count` in parallel and returns the failure with
/// the smallest index, so the result does not depend on scheduling.
pub fn first_failure<F>(count: usize, check: F) -> Option<String>
where
    F: Fn(usize) -> Option<String> + Sync,
{
    use std::sync::atomic::{AtomicUsize, Ordering};
    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(count.max(1));
    if threads <= 1 {
        return (0..count).find_map(&check);
    }
    let best = AtomicUsize::new(usize::MAX);
    let next = AtomicUsize::new(0);
    let mut found: Vec<(usize, String)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= count || i > best.load(Ordering::Relaxed) {
                            break;
                        }
                        if let Some(msg) = check(i) {
                            best.fetch_min(i, Ordering::Relaxed);
                            local.push((i, msg));
                            break;
                        }
                    }
                    local
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("check thread panicked"))
            .collect()
    });
    found.sort_by_key(|(i, _)| *i);
    found.into_iter().next().map(|(_, m)| m)
}
