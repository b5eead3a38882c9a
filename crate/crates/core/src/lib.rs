//! Exact computations for wall crossings of Lawrence toric and hypertoric
//! Deligne–Mumford stacks: GIT chambers, stacky fans, localized equivariant
//! K-theory, the Fourier–Mukai transformation between the two sides of a
//! wall, and truncated equivariant I-function series.

#![allow(clippy::needless_range_loop)]

pub mod datasets;
pub mod eqk;
pub mod fgab;
pub mod fmk;
pub mod gitchambers;
pub mod ifun;
pub mod linalg;
pub mod stackgeom;
pub mod subset;

pub use fgab::{FgAbelianGroup, IntMatrix, SmithDecomposition};
pub use gitchambers::{
    AnticoneSet, GitData, GitError, StabilityVector, TildeGitData, WallCrossingData,
};
pub use eqk::{CycloScalar, KClass, KContext, LineBundleSymbol, Side};
pub use fmk::{CrossingContext, FMMatrix, FmkError};
pub use ifun::{ISeries, ISeriesTerm, IfunError, ModuliChartTransition, SectorSign};
pub use stackgeom::{FixedPointAtlas, InertiaPoint, StackyFanData};
pub use subset::Subset;
