//! Bundled GIT data used by tests, benches and the command line tool.

use crate::gitchambers::{GitData, StabilityVector};

pub type Crossing = (GitData, StabilityVector, StabilityVector);

/// `D = (1, 2, −1, −2)`, `θ± = ±1`: the cotangent bundle of `P(1,2)`.
pub fn tstar_p12() -> Crossing {
    (
        GitData::rank_one(2, &[1, 2, -1, -2]),
        StabilityVector::from_i64(&[1]),
        StabilityVector::from_i64(&[-1]),
    )
}

/// `D = (1, 1, −1, −1)`, `θ± = ±1`: the Atiyah flop.
pub fn atiyah() -> Crossing {
    (
        GitData::rank_one(2, &[1, 1, -1, -1]),
        StabilityVector::from_i64(&[1]),
        StabilityVector::from_i64(&[-1]),
    )
}

/// Rank-two smooth flop with `θ₊ = (1, 1)`, `θ₋ = (−1, 1)`.
pub fn rank2_flop() -> Crossing {
    let rows = [
        vec![1, 0],
        vec![1, 0],
        vec![0, 1],
        vec![-1, 0],
        vec![-1, 0],
        vec![0, -1],
    ];
    (
        GitData::from_i64(2, 3, &rows).expect("well formed"),
        StabilityVector::from_i64(&[1, 1]),
        StabilityVector::from_i64(&[-1, 1]),
    )
}

/// `D = (1, 3, −1, −3)`, `θ± = ±1`: a flop with a `μ_3` point.
pub fn tstar_p13() -> Crossing {
    (
        GitData::rank_one(2, &[1, 3, -1, -3]),
        StabilityVector::from_i64(&[1]),
        StabilityVector::from_i64(&[-1]),
    )
}

/// Every bundled crossing between adjacent chambers.
pub fn bundled() -> Vec<Crossing> {
    vec![tstar_p12(), atiyah(), rank2_flop(), tstar_p13()]
}

/// Rank-one Lawrence datum with pairs `(a_i, −a_i)`.
pub fn rank_one_lawrence(a: &[i64]) -> Crossing {
    let mut d = a.to_vec();
    d.extend(a.iter().map(|x| -x));
    (
        GitData::rank_one(a.len(), &d),
        StabilityVector::from_i64(&[1]),
        StabilityVector::from_i64(&[-1]),
    )
}
