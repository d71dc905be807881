//! Exact symbolic engine for the Z2xZ2-graded super-Liouville system.
pub mod algebra;
pub mod backlund;
pub mod components;
pub mod grading;
pub mod lax;
pub mod matrix;
pub mod report;
pub mod reps;
pub mod ring;
pub mod scalar;
pub mod soldering;
pub mod solutions;
pub mod virasoro;
pub use grading::GradeVec;
pub use ring::{Deriv, Field, GradedPoly};
pub use scalar::{Scalar, Q};
