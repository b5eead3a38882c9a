//! Exact feasibility of mixed strict/weak linear systems by Fourier–Motzkin
//! elimination. Constants may carry a formal infinitesimal part, compared
//! lexicographically.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::linalg::{nullspace, solve, Q};

/// `real + ε·eps` with `ε` a positive infinitesimal. The derived order is
/// lexicographic, which is exactly the order for all sufficiently small ε.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lex {
    pub real: Q,
    pub eps: Q,
}

impl Lex {
    pub fn zero() -> Self {
        Lex {
            real: Q::zero(),
            eps: Q::zero(),
        }
    }

    pub fn real(x: Q) -> Self {
        Lex {
            real: x,
            eps: Q::zero(),
        }
    }

    pub fn sign(&self) -> Ordering {
        self.cmp(&Lex::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.real.is_zero() && self.eps.is_zero()
    }

    pub fn scale(&self, c: &Q) -> Lex {
        Lex {
            real: &self.real * c,
            eps: &self.eps * c,
        }
    }

    pub fn add(&self, o: &Lex) -> Lex {
        Lex {
            real: &self.real + &o.real,
            eps: &self.eps + &o.eps,
        }
    }
}

/// `coeffs · x + constant > 0` (strict) or `≥ 0` (weak).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub constant: Lex,
    pub strict: bool,
}

impl Constraint {
    fn holds_trivially(&self) -> Option<bool> {
        if self.coeffs.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(match self.constant.sign() {
            Ordering::Greater => true,
            Ordering::Equal => !self.strict,
            Ordering::Less => false,
        })
    }
}

/// Keeps only the tightest constraint per (positively normalized) direction.
/// Returns `None` if some constant constraint is violated.
fn normalize(rows: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut best: BTreeMap<Vec<Q>, (Lex, bool)> = BTreeMap::new();
    for row in rows {
        match row.holds_trivially() {
            Some(true) => continue,
            Some(false) => return None,
            None => {}
        }
        let lead = row
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs())
            .expect("nonzero row");
        let inv = lead.recip();
        let coeffs: Vec<Q> = row.coeffs.iter().map(|c| c * &inv).collect();
        let constant = row.constant.scale(&inv);
        match best.get_mut(&coeffs) {
            Some((k, s)) => match constant.cmp(k) {
                Ordering::Less => {
                    *k = constant;
                    *s = row.strict;
                }
                Ordering::Equal => *s |= row.strict,
                Ordering::Greater => {}
            },
            None => {
                best.insert(coeffs, (constant, row.strict));
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(coeffs, (constant, strict))| Constraint {
                coeffs,
                constant,
                strict,
            })
            .collect(),
    )
}

/// Decides whether some `x ∈ ℚ^nvars` satisfies every constraint, for all
/// sufficiently small values of the infinitesimal.
pub fn fm_feasible(nvars: usize, constraints: Vec<Constraint>) -> bool {
    let Some(mut rows) = normalize(constraints) else {
        return false;
    };
    let mut alive: Vec<usize> = (0..nvars).collect();
    while !alive.is_empty() && !rows.is_empty() {
        // eliminate the variable producing the fewest combinations
        let (pos, &var) = alive
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| {
                let p = rows.iter().filter(|r| r.coeffs[v].is_positive()).count();
                let m = rows.iter().filter(|r| r.coeffs[v].is_negative()).count();
                p * m
            })
            .expect("nonempty");
        alive.remove(pos);
        let (mut up, mut down, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.coeffs[var].is_positive() {
                up.push(r);
            } else if r.coeffs[var].is_negative() {
                down.push(r);
            } else {
                keep.push(r);
            }
        }
        for p in &up {
            for m in &down {
                let a = p.coeffs[var].clone();
                let b = -m.coeffs[var].clone();
                let coeffs: Vec<Q> = p
                    .coeffs
                    .iter()
                    .zip(&m.coeffs)
                    .map(|(x, y)| x * &b + y * &a)
                    .collect();
                keep.push(Constraint {
                    coeffs,
                    constant: p.constant.scale(&b).add(&m.constant.scale(&a)),
                    strict: p.strict || m.strict,
                });
            }
        }
        match normalize(keep) {
            Some(k) => rows = k,
            None => return false,
        }
    }
    rows.iter().all(|r| r.holds_trivially().unwrap_or(true))
}

/// Feasibility of `A x = rhs` together with inequality constraints on `x`.
/// The equalities are removed by parametrizing their solution space.
pub fn feasible_affine(
    nvars: usize,
    eq_rows: &[Vec<Q>],
    eq_rhs: &[Lex],
    ineqs: &[Constraint],
) -> bool {
    let real: Vec<Q> = eq_rhs.iter().map(|l| l.real.clone()).collect();
    let eps: Vec<Q> = eq_rhs.iter().map(|l| l.eps.clone()).collect();
    let (x0, x1) = if eq_rows.is_empty() {
        (vec![Q::zero(); nvars], vec![Q::zero(); nvars])
    } else {
        match (solve(eq_rows, &real, nvars), solve(eq_rows, &eps, nvars)) {
            (Some(a), Some(b)) => (a, b),
            _ => return false,
        }
    };
    let kernel = if eq_rows.is_empty() {
        (0..nvars)
            .map(|i| {
                let mut v = vec![Q::zero(); nvars];
                v[i] = Q::from_integer(1.into());
                v
            })
            .collect()
    } else {
        nullspace(eq_rows, nvars)
    };
    let k = kernel.len();
    let rows: Vec<Constraint> = ineqs
        .iter()
        .map(|c| {
            let coeffs: Vec<Q> = (0..k)
                .map(|t| c.coeffs.iter().zip(&kernel[t]).map(|(a, b)| a * b).sum())
                .collect();
            let shift = Lex {
                real: c.coeffs.iter().zip(&x0).map(|(a, b)| a * b).sum(),
                eps: c.coeffs.iter().zip(&x1).map(|(a, b)| a * b).sum(),
            };
            Constraint {
                coeffs,
                constant: c.constant.add(&shift),
                strict: c.strict,
            }
        })
        .collect();
    fm_feasible(k, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn c(coeffs: &[i64], k: i64, strict: bool) -> Constraint {
        Constraint {
            coeffs: coeffs.iter().map(|&x| q(x)).collect(),
            constant: Lex::real(q(k)),
            strict,
        }
    }

    #[test]
    fn strict_versus_weak() {
        // x > 0 and -x >= 0
        assert!(!fm_feasible(1, vec![c(&[1], 0, true), c(&[-1], 0, false)]));
        // x >= 0 and -x >= 0
        assert!(fm_feasible(1, vec![c(&[1], 0, false), c(&[-1], 0, false)]));
        // x > 1, x < 2
        assert!(fm_feasible(1, vec![c(&[1], -1, true), c(&[-1], 2, true)]));
        // x > 2, x < 1
        assert!(!fm_feasible(1, vec![c(&[1], -2, true), c(&[-1], 1, true)]));
    }

    #[test]
    fn two_variable_system() {
        // x > 0, y > 0, x + y < 1
        assert!(fm_feasible(
            2,
            vec![c(&[1, 0], 0, true), c(&[0, 1], 0, true), c(&[-1, -1], 1, true)]
        ));
        // x > 0, y > 0, x + y <= 0
        assert!(!fm_feasible(
            2,
            vec![c(&[1, 0], 0, true), c(&[0, 1], 0, true), c(&[-1, -1], 0, false)]
        ));
    }

    #[test]
    fn infinitesimal_constants() {
        // x > -ε and -x > 0: feasible (x = -ε/2)
        let row = Constraint {
            coeffs: vec![q(1)],
            constant: Lex {
                real: q(0),
                eps: q(1),
            },
            strict: true,
        };
        assert!(fm_feasible(1, vec![row.clone(), c(&[-1], 0, true)]));
        // x > ε and -x > 0: infeasible
        let row = Constraint {
            constant: Lex {
                real: q(0),
                eps: q(-1),
            },
            ..row
        };
        assert!(!fm_feasible(1, vec![row, c(&[-1], 0, true)]));
    }

    #[test]
    fn affine_equalities() {
        // 2a = 1, a > 0
        let eq = vec![vec![q(2)]];
        assert!(feasible_affine(1, &eq, &[Lex::real(q(1))], &[c(&[1], 0, true)]));
        // -a = 1, a > 0
        let eq = vec![vec![q(-1)]];
        assert!(!feasible_affine(1, &eq, &[Lex::real(q(1))], &[c(&[1], 0, true)]));
    }
}
