//! Truncated equivariant I-function series: degrees in `𝕂`, telescoped
//! hypergeometric factors, sector labels, the moduli chart transition and
//! restriction of terms to inertia points.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::fgab::{hermite_rows, reduce_mod_hermite, smith_normal_form, IntMatrix};
use crate::gitchambers::{
    anticone_set, extended_set_of, AnticoneSet, GitData, GitError, StabilityVector, WallCrossingData,
};
use crate::linalg::{dot_iq, frac, qi, solve, to_q, Q};
use crate::stackgeom::{fixed_points_of, FixedPointAtlas, InertiaPoint};
use crate::subset::{self, Subset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IfunError {
    #[error("term sector does not match the inertia point")]
    SectorMismatch,
    #[error("ordered bases are not adapted to the wall")]
    BasisNotAdapted,
    #[error(transparent)]
    Git(#[from] GitError),
}

/// Which of `𝟙_{[−d]}` and `𝟙_{[d]}` labels a term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SectorSign {
    #[default]
    Minus,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RationalDegree {
    /// `D_i·d` for every character.
    pub pairings: Vec<Q>,
    pub d: Vec<Q>,
}

impl RationalDegree {
    pub fn new(g: &GitData, d: Vec<Q>) -> Self {
        let pairings = (0..g.num_chars()).map(|i| g.pairing_q(i, &d)).collect();
        RationalDegree { pairings, d }
    }

    pub fn integrality_set(&self) -> Subset {
        let idx: Vec<usize> = (0..self.pairings.len())
            .filter(|&i| self.pairings[i].is_integer())
            .collect();
        subset::from_indices(&idx)
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(Zero::is_zero)
    }

    pub fn max_pairing(&self) -> Q {
        self.pairings.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }
}

/// All `d ∈ 𝕂` with `|D_i·d| ≤ bound`, sorted by pairings.
pub fn enumerate_degrees(g: &GitData, a: &AnticoneSet, bound: &Q) -> Vec<RationalDegree> {
    let b = bound.floor().to_integer();
    let r = g.rank();
    let found: BTreeSet<RationalDegree> = a
        .minimal
        .par_iter()
        .flat_map_iter(|&delta| {
            let cols = subset::indices(delta);
            // rows D_j, j ∈ δ
            let dt: Vec<Vec<Q>> = cols.iter().map(|&j| to_q(g.character(j))).collect();
            let mut out = Vec::new();
            let mut m = vec![-b.clone(); r];
            loop {
                let rhs: Vec<Q> = m.iter().map(qi).collect();
                if let Some(d) = solve(&dt, &rhs, r) {
                    let deg = RationalDegree::new(g, d);
                    if deg.max_pairing() <= *bound && a.contains(deg.integrality_set()) {
                        out.push(deg);
                    }
                }
                // odometer over [-b, b]^r
                let mut k = 0;
                while k < r {
                    if m[k] < b {
                        m[k] += 1;
                        break;
                    }
                    m[k] = -b.clone();
                    k += 1;
                }
                if k == r || r == 0 {
                    break;
                }
            }
            out
        })
        .collect();
    found.into_iter().collect()
}

/// The finite product left after telescoping the two infinite products of
/// index `j`: `Π (u_j + a z)` over `a_values`, in the denominator when
/// `denominator` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypFactor {
    pub index: usize,
    pub denominator: bool,
    pub a_values: Vec<Q>,
}

impl HypFactor {
    pub fn is_empty(&self) -> bool {
        self.a_values.is_empty()
    }
}

pub fn hyperg_factor(pairing: &Q, j: usize) -> HypFactor {
    let one = Q::one();
    let mut a_values = Vec::new();
    if pairing.is_positive() {
        // a ∈ (0, D_j·d]
        let mut a = pairing.clone();
        while a.is_positive() {
            a_values.push(a.clone());
            a -= &one;
        }
        a_values.reverse();
    } else {
        // a ∈ (D_j·d, 0]
        let mut a = pairing + &one;
        while !a.is_positive() {
            a_values.push(a.clone());
            a += &one;
        }
        a_values.reverse();
    }
    HypFactor {
        index: j,
        denominator: pairing.is_positive(),
        a_values,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorLabel {
    pub fractions: Vec<Q>,
    /// `Σ` of the fractions over non-extended indices.
    pub age: Q,
}

impl SectorLabel {
    pub fn is_untwisted(&self) -> bool {
        self.fractions.iter().all(Zero::is_zero)
    }
}

pub fn sector(deg: &RationalDegree, ext: Subset, sign: SectorSign) -> SectorLabel {
    let fractions: Vec<Q> = deg
        .pairings
        .iter()
        .map(|p| match sign {
            SectorSign::Minus => frac(&-p),
            SectorSign::Plus => frac(p),
        })
        .collect();
    let age = fractions
        .iter()
        .enumerate()
        .filter(|(i, _)| !subset::contains(ext, *i))
        .map(|(_, f)| f.clone())
        .sum();
    SectorLabel { fractions, age }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ISeriesTerm {
    pub degree: RationalDegree,
    /// Exponents of `𝗒_1, …, 𝗒_r`.
    pub monomial: Vec<Q>,
    /// Nonempty factors only, by index.
    pub factors: Vec<HypFactor>,
    pub sector: SectorLabel,
}

impl ISeriesTerm {
    pub fn is_identity(&self) -> bool {
        self.monomial.iter().all(Zero::is_zero) && self.factors.is_empty() && self.sector.is_untwisted()
    }

    pub fn format(&self) -> String {
        let r = self.monomial.len();
        let mut mono = Vec::new();
        for (i, x) in self.monomial.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let name = if r == 1 { "y".to_string() } else { format!("y{}", i + 1) };
            if x.is_one() {
                mono.push(name);
            } else {
                mono.push(format!("{name}^{{{x}}}"));
            }
        }
        let lin = |j: usize, a: &Q| {
            if a.is_zero() {
                format!("u{}", j + 1)
            } else if a.is_negative() {
                format!("(u{}-{}z)", j + 1, show_coeff(&-a))
            } else {
                format!("(u{}+{}z)", j + 1, show_coeff(a))
            }
        };
        let mut num = mono;
        let mut den = Vec::new();
        for f in &self.factors {
            for a in &f.a_values {
                if f.denominator {
                    den.push(lin(f.index, a));
                } else {
                    num.push(lin(f.index, a));
                }
            }
        }
        let n = if num.is_empty() { "1".to_string() } else { num.join("·") };
        if den.is_empty() {
            n
        } else {
            format!("{n} / ({})", den.join(""))
        }
    }
}

fn show_coeff(a: &Q) -> String {
    if a.is_one() {
        String::new()
    } else {
        format!("{a}")
    }
}

/// `σ = Σ_i θ(𝗉_i) log 𝗒_i + c_0`, kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma {
    pub basis: Vec<Vec<BigInt>>,
    pub c0: String,
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.basis.len();
        for (i, p) in self.basis.iter().enumerate() {
            let ps: Vec<String> = p.iter().map(ToString::to_string).collect();
            let y = if r == 1 { "y".to_string() } else { format!("y{}", i + 1) };
            write!(f, "θ({}) log {y} + ", ps.join(","))?;
        }
        write!(f, "{}", self.c0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ISeries {
    pub sigma: Sigma,
    pub ext: Subset,
    pub sign: SectorSign,
    pub terms: Vec<ISeriesTerm>,
}

/// Ordered bases `{𝗉_i^±}` and the coordinate change
/// `𝗒̃_i = 𝗒_i 𝗒_r^{c_i}` (`i < r`), `𝗒̃_r = 𝗒_r^{−c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliChartTransition {
    pub c_i: Vec<Q>,
    pub c: Q,
    pub basis_plus: Vec<Vec<BigInt>>,
    pub basis_minus: Vec<Vec<BigInt>>,
}

impl ModuliChartTransition {
    /// `𝗒`-exponents obtained from `𝗒̃`-exponents by the coordinate law.
    pub fn pull_exponents(&self, tilde: &[Q]) -> Vec<Q> {
        let r = tilde.len();
        let mut out: Vec<Q> = tilde[..r - 1].to_vec();
        let mut last = -&self.c * &tilde[r - 1];
        for (ci, t) in self.c_i.iter().zip(tilde) {
            last += ci * t;
        }
        out.push(last);
        out
    }

    pub fn basis(&self, plus: bool) -> &[Vec<BigInt>] {
        if plus {
            &self.basis_plus
        } else {
            &self.basis_minus
        }
    }
}

/// Wall lattice basis in Hermite form, followed on each side by the
/// reduced vector pairing `±1` with `e`.
pub fn chart_transition(wc: &WallCrossingData) -> Result<ModuliChartTransition, IfunError> {
    let r = wc.git.rank();
    let e = &wc.e;
    let wall = if r > 1 {
        hermite_rows(&IntMatrix::from_rows(&wc.wall_basis, r))
    } else {
        IntMatrix::zeros(0, r)
    };
    let snf = smith_normal_form(&IntMatrix::from_rows(std::slice::from_ref(e), r));
    let sign = snf.u[(0, 0)].clone();
    let p: Vec<BigInt> = (0..r).map(|k| &snf.v[(k, 0)] * &sign).collect();
    let neg: Vec<BigInt> = p.iter().map(|x| -x).collect();
    let pr_plus = reduce_mod_hermite(&p, &wall);
    let pr_minus = reduce_mod_hermite(&neg, &wall);
    let mut basis_plus = wall.row_vecs();
    let mut basis_minus = basis_plus.clone();
    basis_plus.push(pr_plus.clone());
    basis_minus.push(pr_minus);
    let pe = |v: &[BigInt]| -> BigInt { v.iter().zip(e).map(|(a, b)| a * b).sum() };
    if basis_plus[..r - 1].iter().any(|v| !pe(v).is_zero())
        || pe(&basis_plus[r - 1]) != BigInt::one()
        || pe(&basis_minus[r - 1]) != -BigInt::one()
    {
        return Err(IfunError::BasisNotAdapted);
    }
    // 𝗉_r^+ = Σ c_i 𝗉_i − c 𝗉_r^−, solved in the columns 𝗉^−
    let cols: Vec<Vec<Q>> = (0..r)
        .map(|k| basis_minus.iter().map(|v| qi(&v[k])).collect())
        .collect();
    let coeffs = solve(&cols, &to_q(&pr_plus), r).ok_or(IfunError::BasisNotAdapted)?;
    let c = -coeffs[r - 1].clone();
    if !c.is_positive() {
        return Err(IfunError::BasisNotAdapted);
    }
    Ok(ModuliChartTransition {
        c_i: coeffs[..r - 1].to_vec(),
        c,
        basis_plus,
        basis_minus,
    })
}

/// The series `I(𝗒, z)` truncated at `max |D_i·d| ≤ bound`. Without a
/// chart, `𝗒` uses the standard basis of `𝕃^∨`.
pub fn i_series(
    g: &GitData,
    theta: &StabilityVector,
    bound: &Q,
    basis: Option<&[Vec<BigInt>]>,
    sign: SectorSign,
) -> Result<ISeries, IfunError> {
    let a = anticone_set(g, theta)?;
    let ext = extended_set_of(&a);
    let r = g.rank();
    let basis: Vec<Vec<BigInt>> = match basis {
        Some(b) => b.to_vec(),
        None => (0..r)
            .map(|k| (0..r).map(|l| BigInt::from((k == l) as i64)).collect())
            .collect(),
    };
    let terms = enumerate_degrees(g, &a, bound)
        .into_par_iter()
        .map(|deg| {
            let monomial = basis.iter().map(|p| dot_iq(p, &deg.d)).collect();
            let factors = deg
                .pairings
                .iter()
                .enumerate()
                .map(|(j, p)| hyperg_factor(p, j))
                .filter(|f| !f.is_empty())
                .collect();
            let sector = sector(&deg, ext, sign);
            ISeriesTerm {
                degree: deg,
                monomial,
                factors,
                sector,
            }
        })
        .collect();
    Ok(ISeries {
        sigma: Sigma {
            basis,
            c0: "c0".into(),
        },
        ext,
        sign,
        terms,
    })
}

/// Linear form in `(λ_1, …, λ_m, ħ, z)`.
pub type LinearForm = Vec<Q>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedTerm {
    pub numerator: Vec<LinearForm>,
    pub denominator: Vec<LinearForm>,
}

impl RestrictedTerm {
    pub fn is_zero(&self) -> bool {
        self.numerator.iter().any(|f| f.iter().all(Zero::is_zero))
    }

    pub fn is_one(&self) -> bool {
        self.numerator.is_empty() && self.denominator.is_empty()
    }
}

/// `u_j` at a fixed point: zero on `δ` and on extended indices, otherwise
/// `λ′_j − Σ_{i∈δ} c_i λ′_i` with `D_j = Σ c_i D_i`.
pub fn restrict_u(g: &GitData, atlas: &FixedPointAtlas, point: usize, ext: Subset, j: usize) -> LinearForm {
    let w = g.num_weights();
    let fp = &atlas.points[point];
    let mut out = vec![Q::zero(); w + 1];
    if subset::contains(fp.delta, j) || subset::contains(ext, j) {
        return out;
    }
    let c = fp.coordinates(&to_q(g.character(j)));
    for k in 0..w {
        let mut v = Q::from_integer(g.twist(j)[k].into());
        for (ci, &i) in c.iter().zip(&subset::indices(fp.delta)) {
            v -= ci * Q::from_integer(g.twist(i)[k].into());
        }
        out[k] = v;
    }
    out
}

pub fn restrict_term(
    g: &GitData,
    series: &ISeries,
    term: &ISeriesTerm,
    atlas: &FixedPointAtlas,
    ip: InertiaPoint,
) -> Result<RestrictedTerm, IfunError> {
    if atlas.label(g, ip) != term.sector.fractions {
        return Err(IfunError::SectorMismatch);
    }
    let w = g.num_weights();
    let mut numerator = Vec::new();
    let mut denominator = Vec::new();
    for f in &term.factors {
        let u = restrict_u(g, atlas, ip.point, series.ext, f.index);
        for a in &f.a_values {
            let mut lf = u.clone();
            lf[w] = a.clone();
            if f.denominator {
                denominator.push(lf);
            } else {
                numerator.push(lf);
            }
        }
    }
    Ok(RestrictedTerm {
        numerator,
        denominator,
    })
}

/// Inertia points whose label matches the sector of `term`.
pub fn matching_points(g: &GitData, atlas: &FixedPointAtlas, term: &ISeriesTerm) -> Vec<InertiaPoint> {
    atlas
        .inertia_points()
        .into_iter()
        .filter(|&ip| atlas.label(g, ip) == term.sector.fractions)
        .collect()
}

/// For each term: some inertia point carries its sector, or all its
/// restrictions vanish. Returns the indices of offending terms.
pub fn support_violations(g: &GitData, theta: &StabilityVector, series: &ISeries) -> Result<Vec<usize>, IfunError> {
    let a = anticone_set(g, theta)?;
    let atlas = fixed_points_of(g, &a)?;
    let mut bad = Vec::new();
    for (k, t) in series.terms.iter().enumerate() {
        let pts = matching_points(g, &atlas, t);
        if pts.is_empty() {
            bad.push(k);
        }
    }
    Ok(bad)
}

/// Number of `a` with `⟨a⟩ = ⟨x⟩` in `(min(0,x), max(0,x)]`, by scanning a
/// grid of step `1/den` with `den` a multiple of the denominator of `x`.
pub fn brute_force_count(x: &Q, den: i64) -> usize {
    let lo = x.clone().min(Q::zero());
    let hi = x.clone().max(Q::zero());
    let step = Q::new(1.into(), den.into());
    let target = frac(x);
    let mut a = (lo.clone() * Q::from_integer(den.into())).floor() * &step;
    let mut n = 0;
    while a <= hi {
        if a > lo && frac(&a) == target {
            n += 1;
        }
        a += &step;
    }
    n
}

/// `𝗒^{d}` exponents in `basis`, as a check for the cocycle law.
pub fn monomial(basis: &[Vec<BigInt>], d: &[Q]) -> Vec<Q> {
    basis.iter().map(|p| dot_iq(p, d)).collect()
}
