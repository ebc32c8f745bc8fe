//! Quantum 6j symbols at roots of unity, hyperbolic tetrahedron geometry, and
//! numerical checks of the volume asymptotics of the symbols.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod logsigned;
pub mod parse;
pub mod qarith;
pub mod qdilog;
pub mod quad;
pub mod sixj;

pub use error::{Error, Result};
pub use geometry::{AngleSet, VertexClass};
pub use logsigned::{LogSigned, Precision};
pub use qarith::{is_r_admissible, Level, Spin};
pub use sixj::{alpha_term, delta_coeff, sixj_rw, SixjValue, SpinSextuple};
