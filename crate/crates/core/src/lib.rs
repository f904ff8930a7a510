//! Probabilities `P(Y = b)` for `Y = A·X`, where `X` is a vector of
//! independent Poisson variables and `A` a matrix of natural numbers.
//!
//! The defining sum over `{k ∈ ℕⁿ : A·k = b}` is evaluated along one of three
//! paths, chosen once per model:
//!
//! * **single index**: when `rank A = m = n − 1` and every elementary divisor
//!   is one, the Smith normal form `P·A·Q = (I | 0)` turns the solution set
//!   into the integer points of a line `Q·(P·b ; j)`;
//! * **invertible**: for square nonsingular `A` the only candidate is
//!   `A⁻¹·b`;
//! * **enumerate**: depth-first enumeration, used otherwise and as the
//!   oracle for the other two.
//!
//! ```
//! use mvpoisson::{eval::{pmf, PoissonModel}, intlinalg::IntMatrix, lattice::MethodTag};
//!
//! let a = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 2, 1]]).unwrap();
//! let model = PoissonModel::new(a, vec![1.0, 1.0, 1.0]).unwrap();
//! let r = pmf(&model, &[2, 2]).unwrap();
//! assert_eq!(r.method, MethodTag::SingleIndex);
//! assert_eq!(r.terms, 2);
//! assert!((r.prob - (-3.0f64).exp()).abs() < 1e-15);
//! ```

pub mod cli;
pub mod error;
pub mod eval;
pub mod intlinalg;
pub mod lattice;
pub mod mc;

pub use error::{Error, Result};
