//! The Fourier–Mukai transformation across a wall, in the restriction
//! model: images of the minus structure basis, the matrix in the plus
//! basis, the reverse transform and the monodromy, plus a localization
//! oracle on the common blowup for smooth data.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::eqk::{
    determinant, scalar_order, BasisElement, Cyclo, CycloScalar, EqkError, KClass, KContext,
    LaurentPoly, LineBundleSymbol, Side, UnitMonomial,
};
use crate::fgab::gale_dual;
use crate::gitchambers::{
    anticone_set, tilde_data, wall_crossing, GitData, GitError, StabilityVector, WallCrossingData,
};
use crate::linalg::{dot_int, inverse, mat_vec, rank, to_q, Q};
use crate::stackgeom::{fixed_points_of, reconstruct_beta, InertiaPoint};
use crate::subset::{self, Subset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FmkError {
    #[error("minimal anticone {0} has more than one index pairing negatively with e")]
    DegenerateCrossing(String),
    #[error("the localization oracle needs trivial isotropy everywhere")]
    OrbifoldUnsupported,
    #[error("structure basis restriction is singular")]
    SingularBasis,
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Eqk(#[from] EqkError),
    #[error(transparent)]
    Git(#[from] GitError),
}

/// How a minus fixed point crosses the wall.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// `δ₋` is also a plus anticone.
    Shared { plus_point: usize },
    /// `δ₋` has a unique `j₋` with `D_{j₋}·e = −l < 0`.
    Flopped { j: usize, l: i64 },
    /// More than one index of `δ₋` pairs negatively with `e`.
    Degenerate { negatives: Subset },
}

#[derive(Clone, Debug)]
pub struct CrossingContext {
    pub wc: WallCrossingData,
    pub plus: KContext,
    pub minus: KContext,
    pub plus_basis: Vec<BasisElement>,
    pub minus_basis: Vec<BasisElement>,
    /// One tag per minus fixed point.
    pub cases: Vec<CaseTag>,
}

impl CrossingContext {
    pub fn new(wc: &WallCrossingData) -> Result<Self, FmkError> {
        let g = &wc.git;
        let pa = fixed_points_of(g, &wc.plus)?;
        let ma = fixed_points_of(g, &wc.minus)?;
        let ls: Vec<i64> = (0..g.num_chars())
            .map(|i| wc.pairing_e(i).abs().to_i64().expect("pairing fits"))
            .filter(|&x| x != 0)
            .collect();
        let m = scalar_order(&[&pa, &ma], &ls);
        Self::with_order(wc, m)
    }

    pub fn with_order(wc: &WallCrossingData, m: u32) -> Result<Self, FmkError> {
        let g = &wc.git;
        let plus = KContext::from_anticones(g, wc.plus.clone(), Side::Plus, m)?;
        let minus = KContext::from_anticones(g, wc.minus.clone(), Side::Minus, m)?;
        let cases = minus
            .atlas
            .points
            .iter()
            .map(|fp| {
                if let Some(p) = plus.atlas.find(fp.delta) {
                    return CaseTag::Shared { plus_point: p };
                }
                let neg: Vec<usize> = subset::indices(fp.delta)
                    .into_iter()
                    .filter(|&j| wc.pairing_e(j).is_negative())
                    .collect();
                if neg.len() == 1 {
                    let l = -wc.pairing_e(neg[0]).to_i64().expect("pairing fits");
                    CaseTag::Flopped { j: neg[0], l }
                } else {
                    CaseTag::Degenerate {
                        negatives: subset::from_indices(&neg),
                    }
                }
            })
            .collect();
        let plus_basis = plus.structure_basis();
        let minus_basis = minus.structure_basis();
        Ok(CrossingContext {
            wc: wc.clone(),
            plus,
            minus,
            plus_basis,
            minus_basis,
            cases,
        })
    }

    pub fn order(&self) -> u32 {
        self.plus.m
    }

    /// Order of the cyclotomic field generated by plus-side restrictions.
    pub fn plus_isotropy_order(&self) -> u32 {
        scalar_order(&[&self.plus.atlas], &[])
    }

    fn nvars(&self) -> usize {
        self.plus.nvars()
    }
}

/// Image of the minus basis element with index `k`.
pub fn fm_transform(ctx: &CrossingContext, k: usize) -> Result<KClass, FmkError> {
    let b = &ctx.minus_basis[k];
    let rho = &ctx.minus.atlas.points[b.point].characters[b.character];
    fm_transform_lift(ctx, b.point, rho, 0)
}

/// Image of `L₋(ρ̂)·Π_{i∉δ₋}(1 − S_i)` for an arbitrary lift `ρ̂`, with the
/// principal `l`-th roots multiplied by `ζ_l^{branch_shift}`.
pub fn fm_transform_lift(
    ctx: &CrossingContext,
    point: usize,
    rho: &[BigInt],
    branch_shift: i64,
) -> Result<KClass, FmkError> {
    let plus = &ctx.plus;
    let g = &plus.git;
    let delta = ctx.minus.atlas.points[point].delta;
    let full = subset::full(g.num_chars());
    let lrho = plus.line_bundle(&LineBundleSymbol::plain(g, rho))?;
    match ctx.cases[point] {
        CaseTag::Shared { .. } => Ok(lrho.mul(&plus.koszul(full & !delta))?),
        CaseTag::Degenerate { .. } => {
            Err(FmkError::DegenerateCrossing(subset::format(delta)))
        }
        CaseTag::Flopped { j, l } => {
            let e = &ctx.wc.e;
            let rho_e = dot_int(rho, e).to_i64().expect("pairing fits");
            let m = ctx.order();
            let w = ctx.nvars();
            let rj = LineBundleSymbol::r(g, j);
            let zeta_l = UnitMonomial::new(m, (m as i64 / l) * branch_shift, vec![0; w]);
            let values = plus
                .inertia_points()
                .par_iter()
                .enumerate()
                .map(|(k, &ip)| {
                    let base = plus
                        .restrict(&rj, ip)?
                        .principal_root(l)
                        .ok_or(EqkError::OrderTooSmall(m))?
                        .mul(&zeta_l);
                    let mut fixed = LaurentPoly::one(m, w);
                    for i in subset::indices(full & !delta) {
                        let s = ctx.wc.pairing_e(i);
                        if s.is_negative() {
                            let si = plus.restrict(&LineBundleSymbol::s(g, i), ip)?;
                            fixed = fixed.mul(&one_minus(&si, w));
                        }
                    }
                    let fixed = fixed.mul(lrho.values[k].as_poly().expect("unit"));
                    let mut total = LaurentPoly::zero(m, w);
                    for s in 0..l {
                        let t = base.mul(&UnitMonomial::new(m, (m as i64 / l) * s, vec![0; w]));
                        let mut term = LaurentPoly::zero(m, w);
                        for k2 in 0..l {
                            term = term.add(&t.pow(-k2).to_poly());
                        }
                        term = term.mul_unit(&t.pow(rho_e));
                        for i in subset::indices(full & !delta) {
                            let d = ctx.wc.pairing_e(i).to_i64().expect("pairing fits");
                            if d >= 0 {
                                let si = plus.restrict(&LineBundleSymbol::s(g, i), ip)?;
                                term = term.mul(&one_minus(&t.pow(-d).mul(&si), w));
                            }
                        }
                        total = total.add(&term.mul(&fixed));
                    }
                    let inv_l = Q::new(1.into(), l.into());
                    Ok(CycloScalar::from_poly(total.scale_q(&inv_l)))
                })
                .collect::<Result<Vec<_>, FmkError>>()?;
            Ok(KClass {
                side: Side::Plus,
                values,
            })
        }
    }
}

fn one_minus(u: &UnitMonomial, w: usize) -> LaurentPoly {
    LaurentPoly::one(u.m, w).sub(&u.to_poly())
}

/// Coefficients of a class in the structure basis of its side, by
/// orthogonality of the characters of each isotropy group.
pub fn expand_in_basis(
    ctx: &KContext,
    basis: &[BasisElement],
    class: &KClass,
) -> Result<Vec<CycloScalar>, FmkError> {
    let g = &ctx.git;
    let full = subset::full(g.num_chars());
    let (m, w) = (ctx.m, ctx.nvars());
    basis
        .iter()
        .map(|b| {
            let fp = &ctx.atlas.points[b.point];
            let rho = &fp.characters[b.character];
            let sym = LineBundleSymbol::plain(g, rho);
            let id = InertiaPoint {
                point: b.point,
                element: 0,
            };
            let mu = ctx.restrict(&sym, id)?;
            let mut acc = CycloScalar::zero(m, w);
            for el in 0..fp.order() {
                let ip = InertiaPoint {
                    point: b.point,
                    element: el,
                };
                let pos = ctx.position(ip);
                let euler = ctx.koszul(full & !fp.delta).values[pos].clone();
                let chi = ctx.restrict(&sym, ip)?.mul(&mu.inv());
                let term = class.values[pos]
                    .div(&euler)
                    .ok_or(FmkError::SingularBasis)?
                    .mul_unit(&chi.inv());
                acc = acc.add(&term);
            }
            let inv_order = Q::new(1.into(), (fp.order() as i64).into());
            Ok(acc.scale_q(&inv_order).mul_unit(&mu.inv()))
        })
        .collect()
}

/// Matrix with rows labelled by the target basis and columns by the
/// source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: Vec<Vec<CycloScalar>>,
}

impl FMMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn determinant(&self) -> Option<CycloScalar> {
        determinant(&self.entries)
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }

    /// `self · other`.
    pub fn compose(&self, other: &FMMatrix) -> FMMatrix {
        let n = self.entries.len();
        let k = other.entries.first().map_or(0, Vec::len);
        let first = &self.entries[0][0];
        let (m, w) = (first.order(), first.nvars());
        let entries = (0..n)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        (0..other.entries.len()).fold(CycloScalar::zero(m, w), |acc, t| {
                            acc.add(&self.entries[i][t].mul(&other.entries[t][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        FMMatrix {
            row_labels: self.row_labels.clone(),
            col_labels: other.col_labels.clone(),
            entries,
        }
    }
}

impl fmt::Display for FMMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                writeln!(f, "[{} <- {}] {:?}", self.row_labels[i], self.col_labels[j], x)?;
            }
        }
        Ok(())
    }
}

/// All images of the minus basis, in basis order.
pub fn fm_images(ctx: &CrossingContext) -> Result<Vec<KClass>, FmkError> {
    (0..ctx.minus_basis.len())
        .into_par_iter()
        .map(|k| fm_transform(ctx, k))
        .collect()
}

pub fn fm_matrix(ctx: &CrossingContext) -> Result<FMMatrix, FmkError> {
    let images = fm_images(ctx)?;
    matrix_of(ctx, &images)
}

fn matrix_of(ctx: &CrossingContext, images: &[KClass]) -> Result<FMMatrix, FmkError> {
    let cols: Vec<Vec<CycloScalar>> = images
        .par_iter()
        .map(|img| expand_in_basis(&ctx.plus, &ctx.plus_basis, img))
        .collect::<Result<_, _>>()?;
    let n = ctx.plus_basis.len();
    let entries = (0..n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    Ok(FMMatrix {
        row_labels: ctx.plus_basis.iter().map(|b| ctx.plus.basis_label(b)).collect(),
        col_labels: ctx.minus_basis.iter().map(|b| ctx.minus.basis_label(b)).collect(),
        entries,
    })
}

/// The transform for the reverse crossing `θ₋ → θ₊`, sharing the scalar
/// order of `ctx`.
pub fn reverse_context(ctx: &CrossingContext) -> Result<CrossingContext, FmkError> {
    let wc = &ctx.wc;
    let rev = if wc.shared().len() == wc.minus.minimal.len() {
        // a crossing that changes no anticone reverses to itself
        let mut r = wc.clone();
        std::mem::swap(&mut r.theta_plus, &mut r.theta_minus);
        std::mem::swap(&mut r.plus, &mut r.minus);
        std::mem::swap(&mut r.m_plus, &mut r.m_minus);
        r.e = r.e.iter().map(|x| -x).collect();
        r
    } else {
        wall_crossing(&wc.git, &wc.theta_minus, &wc.theta_plus)?
    };
    CrossingContext::with_order(&rev, ctx.order())
}

/// `Ψ′ ∘ Ψ` on the minus side, as a matrix in the minus basis.
pub fn monodromy(ctx: &CrossingContext) -> Result<FMMatrix, FmkError> {
    let forward = fm_matrix(ctx)?;
    let back = fm_matrix(&reverse_context(ctx)?)?;
    Ok(back.compose(&forward))
}

/// Fixed-point localization of `(F₊)⋆F₋^⋆` on the common blowup.
pub struct Oracle {
    tilde: KContext,
    /// For each tilde fixed point, the plus and minus fixed points it maps to.
    to_plus: Vec<usize>,
    to_minus: Vec<usize>,
}

impl Oracle {
    pub fn new(ctx: &CrossingContext) -> Result<Self, FmkError> {
        if !ctx.plus.atlas.is_smooth() || !ctx.minus.atlas.is_smooth() {
            return Err(FmkError::OrbifoldUnsupported);
        }
        let t = tilde_data(&ctx.wc);
        let a = anticone_set(&t.git, &t.theta)?;
        let tilde = KContext::from_anticones(&t.git, a, Side::Tilde, ctx.order())?;
        if !tilde.atlas.is_smooth() {
            return Err(FmkError::OrbifoldUnsupported);
        }
        let big_n = ctx.plus.git.num_chars();
        let mut to_plus = Vec::new();
        let mut to_minus = Vec::new();
        for q in 0..tilde.atlas.points.len() {
            to_plus.push(Self::image(ctx, &tilde, &ctx.plus, q, big_n, true)?);
            to_minus.push(Self::image(ctx, &tilde, &ctx.minus, q, big_n, false)?);
        }
        Ok(Oracle {
            tilde,
            to_plus,
            to_minus,
        })
    }

    /// Pullback of `L_±(p) ⊗ e^{twist}` to the blowup.
    pub fn pullback(ctx: &CrossingContext, sym: &LineBundleSymbol, plus: bool) -> LineBundleSymbol {
        let mut p = sym.p.clone();
        p.push(if plus {
            -dot_int(&sym.p, &ctx.wc.e)
        } else {
            BigInt::zero()
        });
        LineBundleSymbol {
            p,
            twist: sym.twist.clone(),
        }
    }

    fn image(
        ctx: &CrossingContext,
        tilde: &KContext,
        side: &KContext,
        q: usize,
        big_n: usize,
        plus: bool,
    ) -> Result<usize, FmkError> {
        let dq = tilde.atlas.points[q].delta & subset::full(big_n);
        let qi = InertiaPoint {
            point: q,
            element: 0,
        };
        let mut found = Vec::new();
        for (pi, fp) in side.atlas.points.iter().enumerate() {
            if !subset::is_subset(fp.delta, dq) {
                continue;
            }
            let pip = InertiaPoint {
                point: pi,
                element: 0,
            };
            let mut ok = true;
            for i in 0..big_n {
                let sym = LineBundleSymbol::r(&ctx.plus.git, i);
                let down = side.restrict(&sym, pip)?;
                let up = tilde.restrict(&Self::pullback(ctx, &sym, plus), qi)?;
                if down != up {
                    ok = false;
                    break;
                }
            }
            if ok {
                found.push(pi);
            }
        }
        match found.as_slice() {
            [p] => Ok(*p),
            _ => Err(FmkError::Internal(format!(
                "tilde fixed point {} has {} candidate images",
                subset::format(tilde.atlas.points[q].delta),
                found.len()
            ))),
        }
    }

    pub fn tilde(&self) -> &KContext {
        &self.tilde
    }

    pub fn maps(&self) -> (&[usize], &[usize]) {
        (&self.to_plus, &self.to_minus)
    }

    pub fn apply(&self, ctx: &CrossingContext, class: &KClass) -> Result<KClass, FmkError> {
        if class.side != Side::Minus {
            return Err(EqkError::SideMismatch(class.side, Side::Minus).into());
        }
        let plus = &ctx.plus;
        let (m, w) = (plus.m, plus.nvars());
        let tfull = subset::full(self.tilde.git.num_chars());
        let full = subset::full(plus.git.num_chars());
        let values = (0..plus.atlas.points.len())
            .map(|p| {
                let mut acc = CycloScalar::zero(m, w);
                for q in 0..self.tilde.atlas.points.len() {
                    if self.to_plus[q] != p {
                        continue;
                    }
                    let from = ctx.minus.position(InertiaPoint {
                        point: self.to_minus[q],
                        element: 0,
                    });
                    let qpos = self.tilde.position(InertiaPoint {
                        point: q,
                        element: 0,
                    });
                    let et = &self.tilde.koszul(tfull & !self.tilde.atlas.points[q].delta).values[qpos];
                    acc = acc.add(&class.values[from].div(et).ok_or(FmkError::SingularBasis)?);
                }
                let ppos = plus.position(InertiaPoint {
                    point: p,
                    element: 0,
                });
                let ep = &plus.koszul(full & !plus.atlas.points[p].delta).values[ppos];
                Ok(acc.mul(ep))
            })
            .collect::<Result<Vec<_>, FmkError>>()?;
        Ok(KClass {
            side: Side::Plus,
            values,
        })
    }
}

pub fn localization_oracle(ctx: &CrossingContext, class: &KClass) -> Result<KClass, FmkError> {
    Oracle::new(ctx)?.apply(ctx, class)
}

/// Whether every value of `class` lies in the field generated by the
/// plus-side restrictions.
pub fn galois_invariant(ctx: &CrossingContext, class: &KClass) -> bool {
    let m0 = ctx.plus_isotropy_order();
    class.values.iter().all(|v| v.in_subfield(m0))
}

/// One lift comparison: the image of the class built from `ρ̂ + D_k`
/// against `Λ^{-twist_k}` times the image built from `ρ̂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftCheck {
    pub basis_label: String,
    pub shifted_by: usize,
    pub agrees: bool,
}

/// Compares images across the lifts `ρ̂ + D_k`, `k ∈ δ₋`, of every minus
/// basis character.
pub fn lift_checks(ctx: &CrossingContext) -> Result<Vec<LiftCheck>, FmkError> {
    let g = &ctx.plus.git;
    let w = ctx.nvars();
    let mut out = Vec::new();
    for (idx, b) in ctx.minus_basis.iter().enumerate() {
        let fp = &ctx.minus.atlas.points[b.point];
        let rho = &fp.characters[b.character];
        let base = fm_transform(ctx, idx)?;
        for k in subset::indices(fp.delta) {
            let lifted: Vec<BigInt> = rho.iter().zip(g.character(k)).map(|(a, d)| a + d).collect();
            let img = fm_transform_lift(ctx, b.point, &lifted, 0)?;
            let factor = UnitMonomial::new(
                ctx.order(),
                0,
                g.twist(k).iter().map(|t| -t * ctx.order() as i64).collect(),
            );
            let expect = KClass {
                side: Side::Plus,
                values: base.values.iter().map(|v| v.mul_unit(&factor)).collect(),
            };
            debug_assert_eq!(factor.exps.len(), w);
            out.push(LiftCheck {
                basis_label: ctx.minus.basis_label(b),
                shifted_by: k,
                agrees: img == expect,
            });
        }
    }
    Ok(out)
}

/// Rebuilds the GIT datum from the quotient map `β: ℤ^N → 𝐍` of the
/// hypertoric side and carries `θ₊`, `θ₋` along the resulting change of
/// basis `U` of `𝕃^∨` (`D′ = U·D`). Twists are kept.
pub fn via_arrangement(
    g: &GitData,
    theta_plus: &StabilityVector,
    theta_minus: &StabilityVector,
) -> Result<(GitData, StabilityVector, StabilityVector), FmkError> {
    let coker = reconstruct_beta(g);
    let d2 = gale_dual(&coker.projection, &coker.group)
        .map_err(|e| FmkError::Internal(e.to_string()))?;
    let r = g.rank();
    // r independent columns of D
    let mut cols: Vec<usize> = Vec::new();
    for i in 0..g.num_chars() {
        let mut trial: Vec<Vec<Q>> = cols.iter().map(|&j| to_q(g.character(j))).collect();
        trial.push(to_q(g.character(i)));
        if rank(&trial) == trial.len() {
            cols.push(i);
        }
        if cols.len() == r {
            break;
        }
    }
    // D_J has the chosen characters as columns; U = D′_J · D_J⁻¹
    let dj: Vec<Vec<Q>> = (0..r)
        .map(|a| cols.iter().map(|&j| Q::from_integer(g.character(j)[a].clone())).collect())
        .collect();
    let dj_inv = inverse(&dj).ok_or_else(|| FmkError::Internal("dependent columns".into()))?;
    let d2j: Vec<Vec<Q>> = (0..r)
        .map(|a| cols.iter().map(|&j| Q::from_integer(d2[(a, j)].clone())).collect())
        .collect();
    let u: Vec<Vec<Q>> = (0..r)
        .map(|a| {
            (0..r)
                .map(|b| (0..r).map(|k| &d2j[a][k] * &dj_inv[k][b]).sum())
                .collect()
        })
        .collect();
    let chars: Vec<Vec<BigInt>> = d2.column_vecs();
    let twists = (0..g.num_chars()).map(|i| g.twist(i).to_vec()).collect();
    let g2 = GitData::new(r, g.n_pairs(), chars)?.with_twists(twists);
    let carry = |t: &StabilityVector| StabilityVector {
        value: mat_vec(&u, &t.value),
        infinitesimal: mat_vec(&u, &t.infinitesimal),
    };
    Ok((g2, carry(theta_plus), carry(theta_minus)))
}

/// `ζ_M` as a scalar, for callers assembling their own classes.
pub fn root_of_unity(ctx: &CrossingContext, k: i64) -> CycloScalar {
    CycloScalar::from_cyclo(Cyclo::root(ctx.order(), k), ctx.nvars())
}
