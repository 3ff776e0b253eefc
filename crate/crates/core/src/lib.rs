//! Exact counting of real and positive solutions of polynomial systems
//! supported on circuits, with the sharp bounds and systems attaining them.

pub mod bounds;
pub mod circuit;
pub mod counting;
pub mod eliminant;
pub mod error;
pub mod galesystem;
pub mod io;
pub mod lattice;
pub mod scalar;
pub mod upoly;
pub mod witness;

pub use circuit::{AffineRelation, Circuit};
pub use counting::{enumerate_real_solutions, positive_count, real_count, SolutionCount};
pub use error::{Error, ErrorKind, Result};
pub use galesystem::CircuitSystem;
pub use lattice::{IntMatrix, Matrix};
pub use scalar::{Int, Rational};
pub use upoly::{FloatPoly, IntPoly, Poly, RatPoly};
