pub mod algebra;
pub mod counting;
pub mod curvature;
pub mod error;
pub mod jet;
pub mod report;
pub mod rng;
pub mod run;
pub mod invariants;
pub mod symmetry;

pub use algebra::{Dir, Fiber, Matrix, MultiIndex, PolyExpr, RatExpr, Scalar, Var};
pub use error::{Error, Result};
pub use counting::{DimensionTable, Family, SpanningSet};
pub use curvature::Orientation;
pub use invariants::{I2Reading, Which};
pub use jet::{DualScalar, JetGerm, SDESystem};
pub use report::{CheckReport, Failure, Rule};
pub use run::{CheckGroup, RunConfig, RunOutcome};
pub use symmetry::{Generator, PointField};
