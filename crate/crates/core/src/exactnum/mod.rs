//! Exact rationals, dense rational polynomials and certified real root
//! isolation. Nothing here touches floating point on a decision path.

mod interval;
mod polynomial;
mod rational;
pub mod roots;

pub use interval::Interval;
pub use polynomial::Polynomial;
pub use rational::Rational;
pub use roots::{isolate_real_roots, refine_root};
