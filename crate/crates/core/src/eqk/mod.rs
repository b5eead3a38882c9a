//! Localized torus-equivariant K-theory in the fixed-point restriction
//! model. A class is the tuple of its restrictions to the inertia points
//! `(δ, g)`; line bundles restrict to unit monomials in `ζ_M` and
//! `Λ_k = e^{λ_k}`.

pub mod cyclo;
pub mod laurent;
pub mod scalar;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::gitchambers::{anticone_set, AnticoneSet, GitData, GitError, StabilityVector};
use crate::linalg::{self, to_q, Q};
use crate::stackgeom::{fixed_points_of, FixedPointAtlas, InertiaPoint};
use crate::subset::{self, Subset};
pub use cyclo::Cyclo;
pub use laurent::{LaurentPoly, UnitMonomial};
pub use scalar::CycloScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EqkError {
    #[error("classes live on different sides ({0} and {1})")]
    SideMismatch(Side, Side),
    #[error("characters of {0} do not span")]
    SpanFailure(String),
    #[error("scalar order {0} is too small for this restriction")]
    OrderTooSmall(u32),
    #[error(transparent)]
    Git(#[from] GitError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
    Tilde,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
            Side::Tilde => "tilde",
        })
    }
}

/// `L(p) ⊗ e^{twist}` for `p ∈ 𝕃^∨`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleSymbol {
    pub p: Vec<BigInt>,
    pub twist: Vec<i64>,
}

impl LineBundleSymbol {
    /// `R_i = L(D_i) ⊗ e^{twist_i}`.
    pub fn r(g: &GitData, i: usize) -> Self {
        LineBundleSymbol {
            p: g.character(i).to_vec(),
            twist: g.twist(i).to_vec(),
        }
    }

    /// `S_i = R_i^{-1}`.
    pub fn s(g: &GitData, i: usize) -> Self {
        Self::r(g, i).inverse()
    }

    /// `ħ = e^{λ}`.
    pub fn hbar(g: &GitData) -> Self {
        LineBundleSymbol {
            p: vec![BigInt::zero(); g.rank()],
            twist: g.hbar_twist(),
        }
    }

    /// `L(p)` with no twist.
    pub fn plain(g: &GitData, p: &[BigInt]) -> Self {
        LineBundleSymbol {
            p: p.to_vec(),
            twist: vec![0; g.num_weights()],
        }
    }

    pub fn inverse(&self) -> Self {
        LineBundleSymbol {
            p: self.p.iter().map(|x| -x).collect(),
            twist: self.twist.iter().map(|x| -x).collect(),
        }
    }

    pub fn tensor(&self, o: &Self) -> Self {
        LineBundleSymbol {
            p: self.p.iter().zip(&o.p).map(|(a, b)| a + b).collect(),
            twist: self.twist.iter().zip(&o.twist).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `lcm` of the isotropy orders times `lcm` of the root degrees.
pub fn scalar_order(atlases: &[&FixedPointAtlas], root_degrees: &[i64]) -> u32 {
    let g = atlases
        .iter()
        .flat_map(|a| a.points.iter().map(|p| p.order() as u64))
        .fold(1u64, |a, b| a.lcm(&b));
    let l = root_degrees.iter().fold(1u64, |a, &b| a.lcm(&b.unsigned_abs().max(1)));
    u32::try_from(g * l).expect("scalar order fits in 32 bits")
}

/// One side of a crossing together with its fixed-point atlas and the
/// cyclotomic order used for its scalars.
#[derive(Clone, Debug)]
pub struct KContext {
    pub git: GitData,
    pub side: Side,
    pub anticones: AnticoneSet,
    pub atlas: FixedPointAtlas,
    pub m: u32,
    points: Vec<InertiaPoint>,
}

impl KContext {
    pub fn new(git: &GitData, theta: &StabilityVector, side: Side, m: u32) -> Result<Self, EqkError> {
        let a = anticone_set(git, theta)?;
        Self::from_anticones(git, a, side, m)
    }

    pub fn from_anticones(
        git: &GitData,
        anticones: AnticoneSet,
        side: Side,
        m: u32,
    ) -> Result<Self, EqkError> {
        let atlas = fixed_points_of(git, &anticones)?;
        Ok(Self::from_atlas(git, anticones, atlas, side, m))
    }

    pub fn from_atlas(
        git: &GitData,
        anticones: AnticoneSet,
        atlas: FixedPointAtlas,
        side: Side,
        m: u32,
    ) -> Self {
        let points = atlas.inertia_points();
        KContext {
            git: git.clone(),
            side,
            anticones,
            atlas,
            m,
            points,
        }
    }

    pub fn nvars(&self) -> usize {
        self.git.num_weights()
    }

    pub fn inertia_points(&self) -> &[InertiaPoint] {
        &self.points
    }

    /// Position of the inertia point `(point, element)` in class tuples.
    pub fn position(&self, ip: InertiaPoint) -> usize {
        self.points.iter().position(|&q| q == ip).expect("known inertia point")
    }

    pub fn delta(&self, point: usize) -> Subset {
        self.atlas.points[point].delta
    }

    /// Restriction of `L(p) ⊗ e^{twist}` to `(δ, g)`:
    /// `exp(2πi⟨p, ĝ⟩) · Λ^{twist − Σ_{j∈δ} c_j twist_j}` with `p = Σ c_j D_j`.
    pub fn restrict(&self, sym: &LineBundleSymbol, ip: InertiaPoint) -> Result<UnitMonomial, EqkError> {
        let fp = &self.atlas.points[ip.point];
        let delta = subset::indices(fp.delta);
        let c = fp.coordinates(&to_q(&sym.p));
        if c.len() != delta.len() {
            return Err(EqkError::SpanFailure(subset::format(fp.delta)));
        }
        let m = Q::from_integer(self.m.into());
        let phase = linalg::dot_iq(&sym.p, &fp.elements[ip.element]) * &m;
        if !phase.is_integer() {
            return Err(EqkError::OrderTooSmall(self.m));
        }
        let mut exps = Vec::with_capacity(self.nvars());
        for k in 0..self.nvars() {
            let mut e = Q::from_integer(sym.twist[k].into());
            for (cj, &j) in c.iter().zip(&delta) {
                e -= cj * Q::from_integer(self.git.twist(j)[k].into());
            }
            let scaled = e * &m;
            if !scaled.is_integer() {
                return Err(EqkError::OrderTooSmall(self.m));
            }
            exps.push(scaled.to_integer().to_i64().expect("exponent fits"));
        }
        let root = phase.to_integer().to_i64().expect("phase fits");
        Ok(UnitMonomial::new(self.m, root, exps))
    }

    pub fn line_bundle(&self, sym: &LineBundleSymbol) -> Result<KClass, EqkError> {
        let values = self
            .points
            .iter()
            .map(|&ip| self.restrict(sym, ip).map(|u| CycloScalar::from_unit(&u)))
            .collect::<Result<_, _>>()?;
        Ok(KClass {
            side: self.side,
            values,
        })
    }

    pub fn r(&self, i: usize) -> KClass {
        self.line_bundle(&LineBundleSymbol::r(&self.git, i)).expect("standard class")
    }

    pub fn s(&self, i: usize) -> KClass {
        self.line_bundle(&LineBundleSymbol::s(&self.git, i)).expect("standard class")
    }

    pub fn hbar(&self) -> KClass {
        self.line_bundle(&LineBundleSymbol::hbar(&self.git)).expect("standard class")
    }

    pub fn constant(&self, c: &CycloScalar) -> KClass {
        KClass {
            side: self.side,
            values: vec![c.clone(); self.points.len()],
        }
    }

    pub fn one(&self) -> KClass {
        self.constant(&CycloScalar::one(self.m, self.nvars()))
    }

    pub fn zero(&self) -> KClass {
        self.constant(&CycloScalar::zero(self.m, self.nvars()))
    }

    /// `Π_{i∈set} (1 − S_i)`.
    pub fn koszul(&self, set: Subset) -> KClass {
        subset::indices(set).into_iter().fold(self.one(), |acc, i| {
            acc.mul(&self.one().sub(&self.s(i)).expect("same side"))
                .expect("same side")
        })
    }

    /// `e_{δ,ρ} = L(ρ̂)·Π_{i∉δ}(1 − S_i)`, ordered by fixed point then
    /// character.
    pub fn structure_basis(&self) -> Vec<BasisElement> {
        let full = subset::full(self.git.num_chars());
        let mut out = Vec::new();
        for (pi, fp) in self.atlas.points.iter().enumerate() {
            let euler = self.koszul(full & !fp.delta);
            for (ci, rho) in fp.characters.iter().enumerate() {
                let l = self
                    .line_bundle(&LineBundleSymbol::plain(&self.git, rho))
                    .expect("character lift");
                out.push(BasisElement {
                    point: pi,
                    character: ci,
                    class: l.mul(&euler).expect("same side"),
                });
            }
        }
        out
    }

    /// Label `{δ}:ρ̂` of a basis element, one-based.
    pub fn basis_label(&self, b: &BasisElement) -> String {
        let fp = &self.atlas.points[b.point];
        let rho: Vec<String> = fp.characters[b.character].iter().map(|x| x.to_string()).collect();
        format!("{}:({})", subset::format(fp.delta), rho.join(","))
    }

    /// Restrictions of the basis elements at `δ` to the elements of `G_δ`;
    /// rows are characters, columns group elements.
    pub fn restriction_block(&self, basis: &[BasisElement], point: usize) -> Vec<Vec<CycloScalar>> {
        let cols: Vec<usize> = (0..self.points.len())
            .filter(|&k| self.points[k].point == point)
            .collect();
        basis
            .iter()
            .filter(|b| b.point == point)
            .map(|b| cols.iter().map(|&k| b.class.values[k].clone()).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub point: usize,
    pub character: usize,
    pub class: KClass,
}

/// An equivariant class as the tuple of its restrictions, aligned with the
/// inertia points of its context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClass {
    pub side: Side,
    pub values: Vec<CycloScalar>,
}

impl KClass {
    fn zip(
        &self,
        o: &KClass,
        f: impl Fn(&CycloScalar, &CycloScalar) -> CycloScalar,
    ) -> Result<KClass, EqkError> {
        if self.side != o.side {
            return Err(EqkError::SideMismatch(self.side, o.side));
        }
        assert_eq!(self.values.len(), o.values.len(), "classes of one side align");
        Ok(KClass {
            side: self.side,
            values: self.values.iter().zip(&o.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, o: &KClass) -> Result<KClass, EqkError> {
        self.zip(o, CycloScalar::add)
    }

    pub fn sub(&self, o: &KClass) -> Result<KClass, EqkError> {
        self.zip(o, CycloScalar::sub)
    }

    pub fn mul(&self, o: &KClass) -> Result<KClass, EqkError> {
        self.zip(o, CycloScalar::mul)
    }

    pub fn equals(&self, o: &KClass) -> Result<bool, EqkError> {
        if self.side != o.side {
            return Err(EqkError::SideMismatch(self.side, o.side));
        }
        Ok(self.values == o.values)
    }

    pub fn scale(&self, c: &CycloScalar) -> KClass {
        KClass {
            side: self.side,
            values: self.values.iter().map(|v| v.mul(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(CycloScalar::is_zero)
    }
}

/// Determinant of a square matrix over the scalar field, by elimination.
pub fn determinant(mat: &[Vec<CycloScalar>]) -> Option<CycloScalar> {
    let n = mat.len();
    let first = mat.first()?.first()?;
    let (m, w) = (first.order(), first.nvars());
    let mut a: Vec<Vec<CycloScalar>> = mat.to_vec();
    let mut det = CycloScalar::one(m, w);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Some(CycloScalar::zero(m, w));
        };
        if p != k {
            a.swap(p, k);
            det = det.neg();
        }
        det = det.mul(&a[k][k]);
        let inv = a[k][k].inv()?;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].mul(&inv);
            for j in k..n {
                let v = a[i][j].sub(&f.mul(&a[k][j]));
                a[i][j] = v;
            }
        }
    }
    Some(det)
}

/// Solves `x · A = b` for a row vector `x`, `A` square and invertible.
pub fn solve_left(a: &[Vec<CycloScalar>], b: &[CycloScalar]) -> Option<Vec<CycloScalar>> {
    // transpose to A^T x^T = b^T and eliminate
    let n = a.len();
    let mut aug: Vec<Vec<CycloScalar>> = (0..n)
        .map(|j| {
            let mut row: Vec<CycloScalar> = (0..n).map(|i| a[i][j].clone()).collect();
            row.push(b[j].clone());
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !aug[i][k].is_zero())?;
        aug.swap(p, k);
        let inv = aug[k][k].inv()?;
        for j in k..=n {
            aug[k][j] = aug[k][j].mul(&inv);
        }
        for i in 0..n {
            if i == k || aug[i][k].is_zero() {
                continue;
            }
            let f = aug[i][k].clone();
            for j in k..=n {
                let v = aug[i][j].sub(&f.mul(&aug[k][j]));
                aug[i][j] = v;
            }
        }
    }
    Some(aug.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    /// Minimal sets meeting every minimal anticone, each checked for the
    /// vanishing of `Π(1 − S_i)` at every inertia point.
    pub hitting_sets: Vec<Subset>,
    pub koszul_vanishing: bool,
    /// `R_i · R_{n+i} = ħ` for every pair.
    pub pair_relations: bool,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.koszul_vanishing && self.pair_relations
    }
}

/// Minimal subsets meeting every set of `family`.
pub fn minimal_hitting_sets(family: &[Subset], n: usize) -> Vec<Subset> {
    let mut out: Vec<Subset> = Vec::new();
    for k in 0..=n {
        for s in subset::of_size(n, k) {
            if out.iter().any(|&h| subset::is_subset(h, s)) {
                continue;
            }
            if family.iter().all(|&f| f & s != 0) {
                out.push(s);
            }
        }
    }
    out
}

pub fn verify_relations(ctx: &KContext) -> RelationReport {
    let mut failures = Vec::new();
    let hitting = minimal_hitting_sets(&ctx.anticones.minimal, ctx.git.num_chars());
    let mut koszul_vanishing = true;
    for &h in &hitting {
        if !ctx.koszul(h).is_zero() {
            koszul_vanishing = false;
            failures.push(format!("product over {} does not vanish", subset::format(h)));
        }
    }
    let n = ctx.git.n_pairs();
    let hbar = ctx.hbar();
    let mut pair_relations = true;
    for i in 0..n {
        let prod = ctx.r(i).mul(&ctx.r(n + i)).expect("same side");
        if prod != hbar {
            pair_relations = false;
            failures.push(format!("R{}·R{} differs from hbar", i + 1, n + i + 1));
        }
    }
    RelationReport {
        hitting_sets: hitting,
        koszul_vanishing,
        pair_relations,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;
    use crate::stackgeom::fixed_points;

    fn ctx(c: &datasets::Crossing, plus: bool) -> KContext {
        let (g, tp, tm) = c;
        let a = fixed_points(g, tp).unwrap();
        let b = fixed_points(g, tm).unwrap();
        let m = scalar_order(&[&a, &b], &[2]);
        let (th, side) = if plus { (tp, Side::Plus) } else { (tm, Side::Minus) };
        KContext::new(g, th, side, m).unwrap()
    }

    #[test]
    fn restriction_examples() {
        let c = ctx(&datasets::tstar_p12(), true);
        assert_eq!(c.m, 4);
        let g = &c.git;
        let p2 = c.atlas.find(1 << 1).unwrap();
        for e in 0..2 {
            let ip = InertiaPoint { point: p2, element: e };
            assert!(c.restrict(&LineBundleSymbol::r(g, 1), ip).unwrap().is_one());
        }
        let twisted = InertiaPoint { point: p2, element: 1 };
        let r1 = c.restrict(&LineBundleSymbol::r(g, 0), twisted).unwrap();
        // −Λ1·Λ2^{−1/2}: ζ_4^2 = −1, exponents in quarters
        assert_eq!(r1, UnitMonomial::new(4, 2, vec![4, -2, 0]));
        let hb = c.restrict(&LineBundleSymbol::hbar(g), twisted).unwrap();
        assert_eq!(hb, UnitMonomial::new(4, 0, vec![0, 0, 4]));
    }

    #[test]
    fn line_bundles_are_multiplicative() {
        for data in datasets::bundled() {
            for plus in [true, false] {
                let c = ctx(&data, plus);
                let g = &c.git;
                for i in 0..g.num_chars() {
                    for j in 0..g.num_chars() {
                        let a = LineBundleSymbol::r(g, i);
                        let b = LineBundleSymbol::s(g, j);
                        let lhs = c.line_bundle(&a.tensor(&b)).unwrap();
                        let rhs = c.line_bundle(&a).unwrap().mul(&c.line_bundle(&b).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                    assert!(c.r(i).mul(&c.s(i)).unwrap().equals(&c.one()).unwrap());
                }
            }
        }
    }

    #[test]
    fn relations_hold_on_bundled_data() {
        for data in datasets::bundled() {
            for plus in [true, false] {
                let c = ctx(&data, plus);
                let rep = verify_relations(&c);
                assert!(rep.passed(), "{:?}", rep.failures);
                assert!(!rep.hitting_sets.is_empty());
            }
        }
    }

    #[test]
    fn tstar_hitting_set() {
        let c = ctx(&datasets::tstar_p12(), true);
        let rep = verify_relations(&c);
        assert_eq!(rep.hitting_sets, vec![0b11]);
        assert!(c.koszul(0).equals(&c.one()).unwrap());
    }

    #[test]
    fn basis_is_block_diagonal_and_invertible() {
        for data in datasets::bundled() {
            for plus in [true, false] {
                let c = ctx(&data, plus);
                let basis = c.structure_basis();
                assert_eq!(basis.len(), c.atlas.total_size());
                for b in &basis {
                    for (k, ip) in c.inertia_points().iter().enumerate() {
                        if ip.point != b.point {
                            assert!(b.class.values[k].is_zero());
                        }
                    }
                }
                for p in 0..c.atlas.points.len() {
                    let block = c.restriction_block(&basis, p);
                    let det = determinant(&block).unwrap();
                    assert!(!det.is_zero());
                }
            }
        }
    }

    #[test]
    fn minus_basis_size_for_tstar() {
        let c = ctx(&datasets::tstar_p12(), false);
        let basis = c.structure_basis();
        assert_eq!(basis.len(), 3);
        let labels: Vec<String> = basis.iter().map(|b| c.basis_label(b)).collect();
        assert_eq!(labels, vec!["{3}:(0)", "{4}:(0)", "{4}:(1)"]);
        // trivial lift gives the bare Koszul class
        let full = subset::full(4);
        assert_eq!(basis[0].class, c.koszul(full & !(1 << 2)));
    }

    #[test]
    fn side_mismatch() {
        let p = ctx(&datasets::atiyah(), true);
        let m = ctx(&datasets::atiyah(), false);
        assert!(matches!(p.one().add(&m.one()), Err(EqkError::SideMismatch(..))));
    }

    #[test]
    fn enlarging_the_order_embeds() {
        let data = datasets::tstar_p12();
        let c4 = ctx(&data, true);
        let c12 = KContext::new(&data.0, &data.1, Side::Plus, 12).unwrap();
        let g = &c4.git;
        for i in 0..4 {
            let a = c4.line_bundle(&LineBundleSymbol::r(g, i)).unwrap();
            let b = c12.line_bundle(&LineBundleSymbol::r(g, i)).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert_eq!(x.embed(12), *y);
            }
        }
    }
}
