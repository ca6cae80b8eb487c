//! Counting and maximising solutions to homogeneous linear equations
//! `a_1 x_1 + ... + a_k x_k = 0` (and small systems of them) in finite sets
//! of integers.
//!
//! The crate provides:
//!
//! - exact counting of solution tuples, representation functions, additive
//!   energy, sumsets and difference sets ([`counting`]);
//! - the pieced extremal constructions whose solution density approaches
//!   `1/12` (three variables) and `sigma_k / k^{k-1}` in general
//!   ([`construct`]);
//! - exact evaluation of the continuum convolution values `Phi_k` and the
//!   constants `sigma_k`, with an independent quadrature cross-check
//!   ([`continuum`]);
//! - exact instance checks of the additive-combinatorial inequalities the
//!   subject leans on ([`oracles`]);
//! - exhaustive and stochastic search for solution-dense sets ([`search`]).
//!
//! All counts and comparisons are exact: integer arithmetic is checked, and
//! densities are `num_rational::BigRational`s. Floating point appears only
//! in the quadrature and asymptotic helpers.
//!
//! ```
//! use lincount::counting::count_solutions;
//! use lincount::{IntSet, LinearForm};
//!
//! // ordered 3-term arithmetic progressions in {0, ..., 4}
//! let form = LinearForm::new(&[1, -2, 1])?;
//! let set = IntSet::new([0, 1, 2, 3, 4]);
//! assert_eq!(count_solutions(&form, &set)?.count, 13);
//! # Ok::<(), lincount::Error>(())
//! ```

pub mod construct;
pub mod continuum;
pub mod counting;
mod error;
pub mod model;
pub mod oracles;
pub mod search;
pub mod setfile;

pub use error::{Error, Result};
pub use model::{IntSet, LinearForm, LinearSystem, Rational};
