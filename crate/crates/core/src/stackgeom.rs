//! Stacky fans, hypertoric ideals and torus-fixed points.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::fgab::{cokernel, coset_representatives, kernel_basis, Cokernel, FgAbelianGroup, IntMatrix};
use crate::gitchambers::feasibility::{feasible_affine, Constraint, Lex};
use crate::gitchambers::{anticone_set, extended_set_of, AnticoneSet, GitData, GitError, StabilityVector};
use crate::linalg::{self, frac, inverse, qi, to_q, Q};
use crate::subset::{self, Subset};

/// `𝐍 = coker(𝕃 ↪ ℤ^N)` with `β` the quotient map; the inclusion has
/// `i`-th coordinate `⟨D_i, −⟩`.
pub fn reconstruct_beta(g: &GitData) -> Cokernel {
    let inclusion = IntMatrix::from_rows(g.characters(), g.rank());
    cokernel(&inclusion)
}

#[derive(Clone, Debug)]
pub struct StackyFanData {
    pub n_group: FgAbelianGroup,
    /// `b_i = β(e_i)` in the invariant-factor coordinates of `𝐍`.
    pub b: Vec<Vec<BigInt>>,
    /// Every cone `σ_I` with `Ī` an anticone.
    pub cones: Vec<Subset>,
    /// Complements of the minimal anticones.
    pub top_cones: Vec<Subset>,
    pub ext: Subset,
    /// For each extended index, whether `b̄_i` was certified to lie in the
    /// support of the fan.
    pub ext_support: Vec<(usize, bool)>,
}

pub fn stacky_fan(g: &GitData, theta: &StabilityVector) -> Result<StackyFanData, GitError> {
    let a = anticone_set(g, theta)?;
    Ok(stacky_fan_of(g, &a))
}

pub fn stacky_fan_of(g: &GitData, a: &AnticoneSet) -> StackyFanData {
    let big_n = g.num_chars();
    let full = subset::full(big_n);
    let coker = reconstruct_beta(g);
    let b = coker.projection.column_vecs();
    let mut cones: Vec<Subset> = a.all().into_iter().map(|s| full & !s).collect();
    cones.sort_by_key(|&s| (subset::size(s), subset::labels(s)));
    let mut top_cones: Vec<Subset> = a.minimal.iter().map(|&m| full & !m).collect();
    top_cones.sort_by_key(|&s| subset::labels(s));
    let ext = extended_set_of(a);

    // free part of 𝐍, where the fan lives
    let t = coker.group.torsion.len();
    let bbar: Vec<Vec<Q>> = b.iter().map(|v| to_q(&v[t..])).collect();
    let ext_support = subset::indices(ext)
        .into_iter()
        .map(|i| {
            let ok = top_cones.iter().any(|&c| in_cone(&bbar, c, &bbar[i]));
            (i, ok)
        })
        .collect();
    StackyFanData {
        n_group: coker.group,
        b,
        cones,
        top_cones,
        ext,
        ext_support,
    }
}

/// Whether `v` is a nonnegative combination of `{gens[j] : j ∈ cone}`.
fn in_cone(gens: &[Vec<Q>], cone: Subset, v: &[Q]) -> bool {
    let idx = subset::indices(cone);
    let dim = v.len();
    let k = idx.len();
    let rows: Vec<Vec<Q>> = (0..dim)
        .map(|d| idx.iter().map(|&j| gens[j][d].clone()).collect())
        .collect();
    let rhs: Vec<Lex> = v.iter().map(|x| Lex::real(x.clone())).collect();
    let nonneg: Vec<Constraint> = (0..k)
        .map(|i| {
            let mut coeffs = vec![Q::zero(); k];
            coeffs[i] = Q::one();
            Constraint {
                coeffs,
                constant: Lex::zero(),
                strict: false,
            }
        })
        .collect();
    feasible_affine(k, &rows, &rhs, &nonneg)
}

/// Generators `Σ_i c_i z_i w_i` of the hypertoric ideal, one per basis
/// vector `x` of `𝕃_red = {x ∈ 𝕃 : D_j·x = 0 for extended j}`, with
/// `c_i = D_i·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypertoricIdealData {
    pub generators: Vec<Vec<BigInt>>,
}

impl HypertoricIdealData {
    pub fn format(&self) -> Vec<String> {
        self.generators
            .iter()
            .map(|c| {
                let mut out = String::new();
                for (i, x) in c.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let neg = x < &BigInt::zero();
                    let mag = if neg { -x } else { x.clone() };
                    if !out.is_empty() {
                        out.push_str(if neg { " - " } else { " + " });
                    } else if neg {
                        out.push('-');
                    }
                    if !mag.is_one() {
                        out.push_str(&mag.to_string());
                    }
                    out.push_str(&format!("z{}w{}", i + 1, i + 1));
                }
                if out.is_empty() {
                    "0".into()
                } else {
                    out
                }
            })
            .collect()
    }
}

pub fn hypertoric_ideal(g: &GitData) -> HypertoricIdealData {
    let r = g.rank();
    let ext: Vec<Vec<BigInt>> = (2 * g.n_pairs()..g.num_chars())
        .map(|j| g.character(j).to_vec())
        .collect();
    let basis = if ext.is_empty() {
        IntMatrix::identity(r)
    } else {
        kernel_basis(&IntMatrix::from_rows(&ext, r))
    };
    let generators = basis
        .column_vecs()
        .into_iter()
        .map(|x| (0..g.n_pairs()).map(|i| g.pairing(i, &x)).collect())
        .collect();
    HypertoricIdealData { generators }
}

/// A torus-fixed point `x_δ` with its isotropy group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub delta: Subset,
    pub isotropy: FgAbelianGroup,
    /// Canonical lifts `ρ̂ ∈ 𝕃^∨` of the irreducible characters of `G_δ`,
    /// trivial character first.
    pub characters: Vec<Vec<BigInt>>,
    /// Lifts `ĝ ∈ 𝕃⊗ℚ` of the elements of `G_δ` with coordinates in
    /// `[0, 1)`, identity first.
    pub elements: Vec<Vec<Q>>,
    /// `D_δ⁻¹`: row `k` expresses coordinate functionals in the basis
    /// `{D_j : j ∈ δ}` (columns of `δ` in increasing order).
    pub inverse: Vec<Vec<Q>>,
}

impl FixedPoint {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Coefficients `c` with `p = Σ_{j∈δ} c_j D_j`, ordered as `δ`.
    pub fn coordinates(&self, p: &[Q]) -> Vec<Q> {
        linalg::mat_vec(&self.inverse, p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointAtlas {
    pub points: Vec<FixedPoint>,
}

/// An inertia point `(δ, g)` addressed by indices into the atlas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InertiaPoint {
    pub point: usize,
    pub element: usize,
}

impl FixedPointAtlas {
    pub fn inertia_points(&self) -> Vec<InertiaPoint> {
        self.points
            .iter()
            .enumerate()
            .flat_map(|(p, fp)| {
                (0..fp.order()).map(move |e| InertiaPoint {
                    point: p,
                    element: e,
                })
            })
            .collect()
    }

    /// `Σ_δ |G_δ|`.
    pub fn total_size(&self) -> usize {
        self.points.iter().map(FixedPoint::order).sum()
    }

    pub fn is_smooth(&self) -> bool {
        self.points.iter().all(|p| p.order() == 1)
    }

    pub fn find(&self, delta: Subset) -> Option<usize> {
        self.points.iter().position(|p| p.delta == delta)
    }

    pub fn element(&self, ip: InertiaPoint) -> &[Q] {
        &self.points[ip.point].elements[ip.element]
    }

    /// Fractional parts `⟨D_i·ĝ⟩` labelling an inertia point.
    pub fn label(&self, g: &GitData, ip: InertiaPoint) -> Vec<Q> {
        let ghat = self.element(ip);
        (0..g.num_chars()).map(|i| frac(&g.pairing_q(i, ghat))).collect()
    }
}

pub fn fixed_points(g: &GitData, theta: &StabilityVector) -> Result<FixedPointAtlas, GitError> {
    let a = anticone_set(g, theta)?;
    fixed_points_of(g, &a)
}

pub fn fixed_points_of(g: &GitData, a: &AnticoneSet) -> Result<FixedPointAtlas, GitError> {
    let points = a
        .minimal
        .par_iter()
        .map(|&delta| fixed_point(g, delta))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FixedPointAtlas { points })
}

fn fixed_point(g: &GitData, delta: Subset) -> Result<FixedPoint, GitError> {
    let r = g.rank();
    let idx = subset::indices(delta);
    if idx.len() != r || g.span_rank(delta) != r {
        return Err(GitError::Internal(format!(
            "minimal anticone {} does not give a basis",
            subset::format(delta)
        )));
    }
    let cols: Vec<Vec<BigInt>> = idx.iter().map(|&j| g.character(j).to_vec()).collect();
    // r × r with the characters of δ as columns
    let dmat = IntMatrix::from_columns(&cols, r);
    let isotropy = cokernel(&dmat).group;
    let characters = if r == 0 {
        vec![vec![]]
    } else {
        coset_representatives(&IntMatrix::from_rows(&cols, r))
    };
    let dq: Vec<Vec<Q>> = (0..r).map(|k| cols.iter().map(|c| qi(&c[k])).collect()).collect();
    let inv = inverse(&dq).unwrap_or_default();
    // ĝ = (D_δᵀ)⁻¹ m; the rows of D_δᵀ are the characters of δ
    let inv_t = linalg::transpose(&inv);
    let reps = if r == 0 {
        vec![vec![]]
    } else {
        coset_representatives(&dmat)
    };
    let mut elements: Vec<Vec<Q>> = reps
        .iter()
        .map(|m| linalg::mat_vec(&inv_t, &to_q(m)).iter().map(frac).collect())
        .collect();
    elements.sort();
    elements.dedup();
    Ok(FixedPoint {
        delta,
        isotropy,
        characters,
        elements,
        inverse: inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;
    use crate::fgab::{gale_dual, hermite_rows};

    fn s(ix: &[usize]) -> Subset {
        subset::from_indices(&ix.iter().map(|i| i - 1).collect::<Vec<_>>())
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn beta_examples() {
        let (g, _, _) = datasets::tstar_p12();
        let c = reconstruct_beta(&g);
        assert_eq!(c.group, FgAbelianGroup::free(3));

        let g = GitData::rank_one(1, &[1, -1]);
        let c = reconstruct_beta(&g);
        assert_eq!(c.group, FgAbelianGroup::free(1));
        let back = gale_dual(&c.projection, &c.group).unwrap();
        assert_eq!(back, hermite_rows(&g.d_matrix()));

        let g = GitData::from_i64(0, 0, &[vec![], vec![]]).unwrap();
        let c = reconstruct_beta(&g);
        assert_eq!(c.group, FgAbelianGroup::free(2));
        assert_eq!(c.projection, IntMatrix::identity(2));
    }

    #[test]
    fn roundtrip_bundled() {
        for (g, _, _) in datasets::bundled() {
            let c = reconstruct_beta(&g);
            let back = gale_dual(&c.projection, &c.group).unwrap();
            assert_eq!(back, hermite_rows(&g.d_matrix()));
        }
    }

    #[test]
    fn fan_tstar() {
        let (g, tp, tm) = datasets::tstar_p12();
        let f = stacky_fan(&g, &tp).unwrap();
        assert_eq!(f.top_cones, vec![s(&[1, 3, 4]), s(&[2, 3, 4])]);
        let f = stacky_fan(&g, &tm).unwrap();
        assert_eq!(f.top_cones, vec![s(&[1, 2, 3]), s(&[1, 2, 4])]);
        assert!(stacky_fan(&g, &StabilityVector::from_i64(&[0])).is_err());
        // cones are closed under taking faces
        for &c in &f.cones {
            for face in 0..=c {
                if subset::is_subset(face, c) {
                    assert!(f.cones.contains(&face));
                }
            }
        }
    }

    #[test]
    fn extended_support_certified() {
        let g = GitData::rank_one(1, &[1, -1]);
        let f = stacky_fan(&g, &StabilityVector::from_i64(&[1])).unwrap();
        assert_eq!(f.ext, s(&[1]));
        assert_eq!(f.top_cones, vec![s(&[2])]);
        assert_eq!(f.ext_support, vec![(0, true)]);
    }

    #[test]
    fn ideal_examples() {
        let (g, _, _) = datasets::tstar_p12();
        let h = hypertoric_ideal(&g);
        assert_eq!(h.generators, vec![big(&[1, 2])]);
        assert_eq!(h.format(), vec!["z1w1 + 2z2w2".to_string()]);
        let (g, _, _) = datasets::atiyah();
        assert_eq!(hypertoric_ideal(&g).format(), vec!["z1w1 + z2w2".to_string()]);
        // extended slot kills 𝕃_red
        let g = GitData::rank_one(1, &[1, -1, 1]);
        assert!(hypertoric_ideal(&g).generators.is_empty());
    }

    #[test]
    fn ideal_rows_span_inclusion() {
        let (g, _, _) = datasets::rank2_flop();
        let h = hypertoric_ideal(&g);
        assert_eq!(h.generators.len(), 2);
        let rows: Vec<Vec<Q>> = h.generators.iter().map(|r| to_q(r)).collect();
        assert_eq!(linalg::rank(&rows), 2);
    }

    #[test]
    fn atlas_tstar() {
        let (g, tp, tm) = datasets::tstar_p12();
        let a = fixed_points(&g, &tp).unwrap();
        assert_eq!(a.points.len(), 2);
        assert_eq!(a.points[0].delta, s(&[1]));
        assert!(a.points[0].isotropy.is_trivial());
        assert_eq!(a.points[1].isotropy.torsion, big(&[2]));
        assert_eq!(a.points[1].characters, vec![big(&[0]), big(&[1])]);
        assert_eq!(a.points[1].elements, vec![vec![linalg::q(0)], vec![Q::new(1.into(), 2.into())]]);
        assert_eq!(a.total_size(), 3);
        assert_eq!(fixed_points(&g, &tm).unwrap().total_size(), 3);
    }

    #[test]
    fn atlas_sizes_match_across_walls() {
        for (g, tp, tm) in datasets::bundled() {
            let p = fixed_points(&g, &tp).unwrap();
            let m = fixed_points(&g, &tm).unwrap();
            assert_eq!(p.total_size(), m.total_size());
            for fp in p.points.iter().chain(&m.points) {
                assert_eq!(fp.characters.len(), fp.order());
                let det = IntMatrix::from_columns(
                    &subset::indices(fp.delta).iter().map(|&j| g.character(j).to_vec()).collect::<Vec<_>>(),
                    g.rank(),
                )
                .determinant();
                assert_eq!(BigInt::from(fp.order()), det.magnitude().clone().into());
                for ghat in &fp.elements {
                    for &j in &subset::indices(fp.delta) {
                        assert!(g.pairing_q(j, ghat).is_integer());
                    }
                }
            }
        }
    }
}
