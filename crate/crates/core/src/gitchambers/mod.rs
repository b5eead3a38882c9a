//! GIT data, anticones, chambers and single-wall crossings.

pub mod feasibility;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::fgab::{cokernel, is_surjective, kernel_basis, IntMatrix};
use crate::linalg::{self, dot_iq, inverse, nullspace, primitive, qi, to_q, Q};
use crate::subset::{self, Subset, MAX_CHARS};
use feasibility::{feasible_affine, fm_feasible, Constraint, Lex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GitError {
    #[error("malformed GIT data: {0}")]
    Shape(String),
    #[error("stability vector is not generic (it lies on a wall)")]
    NonGenericTheta,
    #[error("both stability vectors lie in the same chamber")]
    SameChamber,
    #[error("chambers do not share a codimension-one wall")]
    NotAdjacent,
    #[error("internal error: {0}")]
    Internal(String),
}

/// Characters `D_1..D_N ∈ 𝕃^∨ = ℤ^r`: `n` Lawrence pairs followed by the
/// extended slots. Each character carries an equivariant twist, an integer
/// combination of the symbols `λ_1, …, λ_m, λ` with `m = n + #extended`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GitData {
    r: usize,
    n: usize,
    characters: Vec<Vec<BigInt>>,
    twists: Vec<Vec<i64>>,
}

impl GitData {
    pub fn new(r: usize, n: usize, characters: Vec<Vec<BigInt>>) -> Result<Self, GitError> {
        let big_n = characters.len();
        if big_n < 2 * n {
            return Err(GitError::Shape(format!(
                "{big_n} characters cannot hold {n} Lawrence pairs"
            )));
        }
        if big_n > MAX_CHARS {
            return Err(GitError::Shape(format!(
                "at most {MAX_CHARS} characters are supported, got {big_n}"
            )));
        }
        if let Some(i) = characters.iter().position(|c| c.len() != r) {
            return Err(GitError::Shape(format!(
                "character {} has length {}, expected {r}",
                i + 1,
                characters[i].len()
            )));
        }
        let m = big_n - n;
        let twists = (0..big_n)
            .map(|i| {
                let mut t = vec![0i64; m + 1];
                if i < n {
                    t[i] = 1;
                } else if i < 2 * n {
                    t[m] = 1;
                    t[i - n] = -1;
                } else {
                    t[i - n] = 1;
                }
                t
            })
            .collect();
        Ok(GitData {
            r,
            n,
            characters,
            twists,
        })
    }

    pub fn from_i64(r: usize, n: usize, characters: &[Vec<i64>]) -> Result<Self, GitError> {
        let big = characters
            .iter()
            .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::new(r, n, big)
    }

    /// Rank-one convenience constructor.
    pub fn rank_one(n: usize, characters: &[i64]) -> Self {
        let rows: Vec<Vec<i64>> = characters.iter().map(|&x| vec![x]).collect();
        Self::from_i64(1, n, &rows).expect("well-formed rank-one data")
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn n_pairs(&self) -> usize {
        self.n
    }

    pub fn num_chars(&self) -> usize {
        self.characters.len()
    }

    pub fn ext_count(&self) -> usize {
        self.num_chars() - 2 * self.n
    }

    pub fn is_extended(&self, i: usize) -> bool {
        i >= 2 * self.n
    }

    pub fn character(&self, i: usize) -> &[BigInt] {
        &self.characters[i]
    }

    pub fn characters(&self) -> &[Vec<BigInt>] {
        &self.characters
    }

    /// `r × N` matrix with the characters as columns.
    pub fn d_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.characters, self.r)
    }

    /// Twist of the `i`-th standard line bundle, over `num_weights()` symbols.
    pub fn twist(&self, i: usize) -> &[i64] {
        &self.twists[i]
    }

    pub fn num_weights(&self) -> usize {
        self.twists.first().map_or(self.num_chars() - self.n + 1, Vec::len)
    }

    pub fn hbar_twist(&self) -> Vec<i64> {
        let mut t = vec![0; self.num_weights()];
        t[self.num_weights() - 1] = 1;
        t
    }

    pub fn weight_labels(&self) -> Vec<String> {
        let m = self.num_weights() - 1;
        let mut v: Vec<String> = (1..=m).map(|i| format!("λ{i}")).collect();
        v.push("λ".to_string());
        v
    }

    /// Replaces the twist table; used for auxiliary data sharing the weight
    /// space of another datum.
    pub fn with_twists(mut self, twists: Vec<Vec<i64>>) -> Self {
        assert_eq!(twists.len(), self.num_chars());
        self.twists = twists;
        self
    }

    pub fn lawrence_pairing_holds(&self) -> bool {
        (0..self.n).all(|i| {
            self.characters[i]
                .iter()
                .zip(&self.characters[self.n + i])
                .all(|(a, b)| (a + b).is_zero())
        })
    }

    pub fn calabi_yau_holds(&self) -> bool {
        (0..self.r).all(|k| {
            (0..2 * self.n)
                .map(|i| &self.characters[i][k])
                .sum::<BigInt>()
                .is_zero()
        })
    }

    pub fn pairing(&self, i: usize, v: &[BigInt]) -> BigInt {
        linalg::dot_int(&self.characters[i], v)
    }

    pub fn pairing_q(&self, i: usize, v: &[Q]) -> Q {
        dot_iq(&self.characters[i], v)
    }

    fn columns_q(&self, s: Subset) -> Vec<Vec<Q>> {
        // r × |s|
        let idx = subset::indices(s);
        (0..self.r)
            .map(|k| idx.iter().map(|&i| qi(&self.characters[i][k])).collect())
            .collect()
    }

    /// Rank of the span of `{D_i : i ∈ s}`.
    pub fn span_rank(&self, s: Subset) -> usize {
        if s == 0 {
            return 0;
        }
        linalg::rank(&self.columns_q(s))
    }
}

/// A stability parameter `value + ε·infinitesimal` for a positive
/// infinitesimal `ε`. Plain stability vectors have zero infinitesimal part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVector {
    pub value: Vec<Q>,
    pub infinitesimal: Vec<Q>,
}

impl StabilityVector {
    pub fn new(value: Vec<Q>) -> Self {
        let infinitesimal = vec![Q::zero(); value.len()];
        StabilityVector {
            value,
            infinitesimal,
        }
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| linalg::q(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.value.len()
    }

    pub fn component(&self, k: usize) -> Lex {
        Lex {
            real: self.value[k].clone(),
            eps: self.infinitesimal[k].clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.iter().chain(&self.infinitesimal).all(Zero::is_zero)
    }

    /// `⟨v, θ⟩` for an integer covector `v`.
    pub fn pair(&self, v: &[BigInt]) -> Lex {
        Lex {
            real: dot_iq(v, &self.value),
            eps: dot_iq(v, &self.infinitesimal),
        }
    }

    pub fn extended(&self, value: Q, infinitesimal: Q) -> Self {
        let mut s = self.clone();
        s.value.push(value);
        s.infinitesimal.push(infinitesimal);
        s
    }
}

impl fmt::Display for StabilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dim())
            .map(|k| {
                if self.infinitesimal[k].is_zero() {
                    self.value[k].to_string()
                } else {
                    format!("{}{:+}ε", self.value[k], self.infinitesimal[k])
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Whether `θ ∈ ∠_I`, the strictly positive span of `{D_i : i ∈ I}`.
pub fn angle_contains(g: &GitData, set: Subset, theta: &StabilityVector) -> bool {
    if set == 0 {
        return theta.is_zero();
    }
    let k = subset::size(set);
    let eq_rows = g.columns_q(set);
    let rhs: Vec<Lex> = (0..g.rank()).map(|j| theta.component(j)).collect();
    let positivity: Vec<Constraint> = (0..k)
        .map(|i| {
            let mut coeffs = vec![Q::zero(); k];
            coeffs[i] = linalg::q(1);
            Constraint {
                coeffs,
                constant: Lex::zero(),
                strict: true,
            }
        })
        .collect();
    feasible_affine(k, &eq_rows, &rhs, &positivity)
}

/// `θ` is generic when it avoids every cone `∠_J` whose span is not full.
/// By Carathéodory it suffices to test linearly independent `J` with
/// `|J| < r`.
pub fn is_generic(g: &GitData, theta: &StabilityVector) -> bool {
    let big_n = g.num_chars();
    !(0..g.rank()).any(|k| {
        subset::of_size(big_n, k)
            .into_par_iter()
            .any(|j| g.span_rank(j) == k && angle_contains(g, j, theta))
    })
}

/// The anticones of a chamber, stored through their minimal members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnticoneSet {
    pub minimal: Vec<Subset>,
    pub num_chars: usize,
}

impl AnticoneSet {
    pub fn contains(&self, set: Subset) -> bool {
        self.minimal.iter().any(|&m| subset::is_subset(m, set))
    }

    pub fn is_minimal(&self, set: Subset) -> bool {
        self.minimal.contains(&set)
    }

    /// Every anticone, in increasing bitmask order.
    pub fn all(&self) -> Vec<Subset> {
        (0..=subset::full(self.num_chars))
            .filter(|&s| self.contains(s))
            .collect()
    }
}

/// Minimal anticones without a genericity requirement. A minimal anticone
/// always has linearly independent characters, so only subsets of size at
/// most `r` are scanned.
pub fn minimal_anticones(g: &GitData, theta: &StabilityVector) -> Vec<Subset> {
    let big_n = g.num_chars();
    let mut minimal: Vec<Subset> = Vec::new();
    for k in 0..=g.rank().min(big_n) {
        let candidates: Vec<Subset> = subset::of_size(big_n, k)
            .into_iter()
            .filter(|&s| !minimal.iter().any(|&m| subset::is_subset(m, s)))
            .collect();
        let mut found: Vec<Subset> = candidates
            .into_par_iter()
            .filter(|&s| angle_contains(g, s, theta))
            .collect();
        found.sort_unstable();
        minimal.extend(found);
    }
    minimal.sort_by_key(|&s| (subset::labels(s), s));
    minimal
}

pub fn anticone_set(g: &GitData, theta: &StabilityVector) -> Result<AnticoneSet, GitError> {
    check_theta_dim(g, theta)?;
    if !is_generic(g, theta) {
        return Err(GitError::NonGenericTheta);
    }
    Ok(AnticoneSet {
        minimal: minimal_anticones(g, theta),
        num_chars: g.num_chars(),
    })
}

fn check_theta_dim(g: &GitData, theta: &StabilityVector) -> Result<(), GitError> {
    if theta.dim() != g.rank() {
        return Err(GitError::Shape(format!(
            "stability vector has {} entries, expected {}",
            theta.dim(),
            g.rank()
        )));
    }
    Ok(())
}

/// `S = {i : [N] ∖ {i} is not an anticone}`.
pub fn extended_set(g: &GitData, theta: &StabilityVector) -> Result<Subset, GitError> {
    let a = anticone_set(g, theta)?;
    Ok(extended_set_of(&a))
}

pub fn extended_set_of(a: &AnticoneSet) -> Subset {
    let full = subset::full(a.num_chars);
    (0..a.num_chars)
        .filter(|&i| !a.contains(full & !(1 << i)))
        .fold(0, |s, i| s | (1 << i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn validate(g: &GitData, theta: &StabilityVector) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| {
        checks.push(CheckResult {
            name,
            passed,
            detail,
        })
    };
    push(
        "lawrence_pairing",
        g.lawrence_pairing_holds(),
        "D_{n+i} = -D_i for i <= n".into(),
    );
    push(
        "calabi_yau",
        g.calabi_yau_holds(),
        "sum of the paired characters is zero".into(),
    );

    let d = g.d_matrix();
    let rank = d.rank();
    let c1 = rank == g.rank() && {
        let coker = cokernel(&d.transpose());
        is_surjective(&coker.projection, &coker.group)
    };
    push(
        "c1_surjective",
        c1,
        format!("character span has rank {rank} of {}", g.rank()),
    );

    if theta.dim() != g.rank() {
        let msg = format!("stability vector has {} entries", theta.dim());
        push("a1_nonempty", false, msg.clone());
        push("a2_dm", false, msg.clone());
        push("generic", false, msg);
        return ValidationReport { checks };
    }

    let full = subset::full(g.num_chars());
    push(
        "a1_nonempty",
        angle_contains(g, full, theta),
        "stability lies in the cone of all characters".into(),
    );
    let minimal = minimal_anticones(g, theta);
    let bad: Vec<String> = minimal
        .iter()
        .filter(|&&m| g.span_rank(m) != g.rank())
        .map(|&m| subset::format(m))
        .collect();
    push(
        "a2_dm",
        bad.is_empty() && !minimal.is_empty(),
        if bad.is_empty() {
            format!("{} minimal anticones, all of full span", minimal.len())
        } else {
            format!("minimal anticones without full span: {}", bad.join(" "))
        },
    );
    push(
        "generic",
        is_generic(g, theta),
        "stability avoids every lower-dimensional cone".into(),
    );
    ValidationReport { checks }
}

/// Primitive inequalities `a·x ≥ 0` cutting out the closure of the chamber
/// of a generic `θ`.
pub fn chamber_inequalities(g: &GitData, a: &AnticoneSet) -> Result<Vec<Vec<BigInt>>, GitError> {
    let mut rows = BTreeSet::new();
    for &delta in &a.minimal {
        let inv = inverse(&g.columns_q(delta))
            .ok_or_else(|| GitError::Internal("minimal anticone without full span".into()))?;
        for row in inv {
            rows.insert(primitive(&row));
        }
    }
    Ok(rows.into_iter().collect())
}

fn weak_rows(rows: &[Vec<BigInt>]) -> Vec<Constraint> {
    rows.iter()
        .map(|a| Constraint {
            coeffs: to_q(a),
            constant: Lex::zero(),
            strict: false,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCrossingData {
    pub git: GitData,
    pub theta_plus: StabilityVector,
    pub theta_minus: StabilityVector,
    pub plus: AnticoneSet,
    pub minus: AnticoneSet,
    /// Basis of `W ∩ ℤ^r` in Hermite form.
    pub wall_basis: Vec<Vec<BigInt>>,
    /// Primitive normal to the wall, positive on the plus chamber.
    pub e: Vec<BigInt>,
    pub m_plus: Subset,
    pub m_minus: Subset,
    pub m_zero: Subset,
    /// A rational point in the relative interior of the shared facet.
    pub theta_zero: Vec<Q>,
}

impl WallCrossingData {
    pub fn pairing_e(&self, i: usize) -> BigInt {
        self.git.pairing(i, &self.e)
    }

    /// Minimal anticones shared by both chambers.
    pub fn shared(&self) -> Vec<Subset> {
        self.minus
            .minimal
            .iter()
            .copied()
            .filter(|&d| self.plus.contains(d))
            .collect()
    }
}

pub fn wall_crossing(
    g: &GitData,
    theta_plus: &StabilityVector,
    theta_minus: &StabilityVector,
) -> Result<WallCrossingData, GitError> {
    let plus = anticone_set(g, theta_plus)?;
    let minus = anticone_set(g, theta_minus)?;
    if plus.minimal == minus.minimal {
        return Err(GitError::SameChamber);
    }
    let r = g.rank();
    let mut rows: BTreeSet<Vec<BigInt>> = chamber_inequalities(g, &plus)?.into_iter().collect();
    rows.extend(chamber_inequalities(g, &minus)?);
    let rows: Vec<Vec<BigInt>> = rows.into_iter().collect();

    // implicit equalities of the intersection of both closures
    let base = weak_rows(&rows);
    let implicit: Vec<Vec<Q>> = rows
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let mut sys = base.clone();
            sys[*k].strict = true;
            !fm_feasible(r, sys)
        })
        .map(|(_, a)| to_q(a))
        .collect();
    match linalg::rank(&implicit) {
        0 => return Err(GitError::SameChamber),
        1 => {}
        _ => return Err(GitError::NotAdjacent),
    }
    let normal = nullspace(&nullspace(&implicit, r), r);
    let mut e = primitive(&normal[0]);
    match theta_plus.pair(&e).sign() {
        std::cmp::Ordering::Greater => {}
        std::cmp::Ordering::Less => e.iter_mut().for_each(|x| *x = -x.clone()),
        std::cmp::Ordering::Equal => return Err(GitError::NotAdjacent),
    }
    if theta_minus.pair(&e).sign() != std::cmp::Ordering::Less {
        return Err(GitError::NotAdjacent);
    }

    let wall = kernel_basis(&IntMatrix::from_rows(&[e.clone()], r));
    let wall_basis = wall.column_vecs();
    let theta_zero = facet_barycenter(&rows, &e, r)?;

    let (m_plus, m_minus, m_zero) = sign_partition(g, &e);
    Ok(WallCrossingData {
        git: g.clone(),
        theta_plus: theta_plus.clone(),
        theta_minus: theta_minus.clone(),
        plus,
        minus,
        wall_basis,
        e,
        m_plus,
        m_minus,
        m_zero,
        theta_zero,
    })
}

/// Indices with `D_i·e` positive, negative and zero.
pub fn sign_partition(g: &GitData, e: &[BigInt]) -> (Subset, Subset, Subset) {
    let (mut plus, mut minus, mut zero) = (0, 0, 0);
    for i in 0..g.num_chars() {
        let s = g.pairing(i, e);
        if s.is_positive() {
            plus |= 1 << i;
        } else if s.is_negative() {
            minus |= 1 << i;
        } else {
            zero |= 1 << i;
        }
    }
    (plus, minus, zero)
}

/// Crossing of a hyperplane through the interior of a single chamber, for
/// two linearly independent stability vectors in that chamber. No anticone
/// changes, so every transform attached to it is trivial.
pub fn trivial_crossing(
    g: &GitData,
    theta_plus: &StabilityVector,
    theta_minus: &StabilityVector,
) -> Result<WallCrossingData, GitError> {
    let plus = anticone_set(g, theta_plus)?;
    let minus = anticone_set(g, theta_minus)?;
    if plus.minimal != minus.minimal {
        return Err(GitError::NotAdjacent);
    }
    let r = g.rank();
    let rows = vec![theta_plus.value.clone(), theta_minus.value.clone()];
    let rhs = vec![linalg::q(1), linalg::q(-1)];
    let normal = linalg::solve(&rows, &rhs, r)
        .ok_or_else(|| GitError::Shape("stability vectors are proportional".into()))?;
    let e = primitive(&normal);
    let wall = kernel_basis(&IntMatrix::from_rows(std::slice::from_ref(&e), r));
    let theta_zero: Vec<Q> = (0..r)
        .map(|k| {
            let a = theta_minus.pair(&e).real;
            let b = theta_plus.pair(&e).real;
            // point of the segment on the hyperplane
            (&theta_plus.value[k] * -&a + &theta_minus.value[k] * &b) / (&b - &a)
        })
        .collect();
    let (m_plus, m_minus, m_zero) = sign_partition(g, &e);
    Ok(WallCrossingData {
        git: g.clone(),
        theta_plus: theta_plus.clone(),
        theta_minus: theta_minus.clone(),
        plus,
        minus,
        wall_basis: wall.column_vecs(),
        e,
        m_plus,
        m_minus,
        m_zero,
        theta_zero,
    })
}

/// Average of the primitive extremal rays of `{x : e·x = 0, a·x ≥ 0}`.
fn facet_barycenter(rows: &[Vec<BigInt>], e: &[BigInt], r: usize) -> Result<Vec<Q>, GitError> {
    if r == 1 {
        return Ok(vec![Q::zero()]);
    }
    let eq = to_q(e);
    let a: Vec<Vec<Q>> = rows.iter().map(|x| to_q(x)).collect();
    let in_facet = |v: &[Q]| a.iter().all(|row| !linalg::dot(row, v).is_negative());
    let mut rays: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for pick in subset::of_size(a.len(), r - 2) {
        let mut m = vec![eq.clone()];
        m.extend(subset::indices(pick).into_iter().map(|k| a[k].clone()));
        let ns = nullspace(&m, r);
        if ns.len() != 1 {
            continue;
        }
        for sign in [1, -1] {
            let v: Vec<Q> = ns[0].iter().map(|x| x * linalg::q(sign)).collect();
            if in_facet(&v) {
                rays.insert(primitive(&v));
            }
        }
    }
    if rays.is_empty() {
        return Err(GitError::Internal("shared facet has no extremal rays".into()));
    }
    let count = linalg::q(rays.len() as i64);
    Ok((0..r)
        .map(|k| rays.iter().map(|v| qi(&v[k])).sum::<Q>() / &count)
        .collect())
}

/// GIT data of the common blowup: rank `r + 1`, one extra character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeGitData {
    pub git: GitData,
    /// `(θ0, −ε)`.
    pub theta: StabilityVector,
    /// `(θ₊, 1)`.
    pub theta_plus: StabilityVector,
    /// `(θ₋, 1)`.
    pub theta_minus: StabilityVector,
}

pub fn tilde_data(wc: &WallCrossingData) -> TildeGitData {
    let g = &wc.git;
    let big_n = g.num_chars();
    let mut chars = Vec::with_capacity(big_n + 1);
    let mut twists = Vec::with_capacity(big_n + 1);
    for i in 0..big_n {
        let mut c = g.character(i).to_vec();
        let s = wc.pairing_e(i);
        c.push(if s.is_positive() { -s } else { BigInt::zero() });
        chars.push(c);
        twists.push(g.twist(i).to_vec());
    }
    let mut last = vec![BigInt::zero(); g.rank() + 1];
    last[g.rank()] = BigInt::from(1);
    chars.push(last);
    twists.push(vec![0; g.num_weights()]);
    let git = GitData::new(g.rank() + 1, g.n_pairs(), chars)
        .expect("tilde data is well formed")
        .with_twists(twists);
    let one = linalg::q(1);
    TildeGitData {
        git,
        theta: StabilityVector::new(wc.theta_zero.clone()).extended(Q::zero(), -one.clone()),
        theta_plus: wc.theta_plus.extended(one.clone(), Q::zero()),
        theta_minus: wc.theta_minus.extended(one, Q::zero()),
    }
}
