//! Symbolic dynamics and fractal geometry of strictly A-coupled-expanding
//! interval maps.
//!
//! * [`matrix`]: 0/1 transition matrices and their combinatorics.
//! * [`symbolic`]: words, finite-horizon sequences, the shift and the
//!   star-to-full-shift coding.
//! * [`ifs`]: similarity systems and Moran equations.
//! * [`expanding`]: piecewise-affine expanding maps and their basic sets.
//! * [`witness`]: Li-Yorke witness sequences and the length bookkeeping behind
//!   the full-dimension argument.
//! * [`dimension`]: box-counting estimates compared against Moran roots.

pub mod dimension;
pub mod error;
pub mod expanding;
pub mod ifs;
pub mod matrix;
pub mod numeric;
pub mod symbolic;
pub mod witness;

pub use error::{Error, Result};
pub use expanding::{BasicSet, Branch, MapSpec, PiecewiseExpandingMap, Sign, VerifyReport};
pub use ifs::{
    moran_root, moran_root_star, IfsSpec, MoranRoot, Similarity, SimilarityIFS, WeightMode,
};
pub use matrix::TransitionMatrix;
pub use numeric::{Exact, Interval, Scalar};
pub use symbolic::{Cylinder, Provenance, Symbol, SymbolStream, SymbolWord};
pub use witness::WitnessSchedule;

/// Default cap on the number of words any enumeration may materialize.
pub const DEFAULT_WORD_BUDGET: usize = 1 << 22;
