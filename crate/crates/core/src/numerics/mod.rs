//! Double-precision numerical kernel.
//!
//! Everything here is a pure function of its inputs. The pieces are small and
//! specialised: polynomials of degree at most six, Hermitian matrices of size
//! two or four, and smooth scalar functions on a bounded time window.

mod eigen;
mod intervals;
mod laplace;
mod ode;
mod poly;
mod quad;
mod roots;

pub use eigen::{hermitian_eigenvalues, CMatrix, HERMITIAN_TOL};
pub use intervals::IntervalSet;
pub use laplace::{invert_laplace, InverseLaplace, RationalLaplace, MAX_DENOMINATOR_DEGREE};
pub use ode::{ode_evolve, OdeOptions};
pub use poly::{poly_roots, Polynomial};
pub use quad::integrate;
pub use roots::{find_roots, refine_root, ROOT_RTOL};
