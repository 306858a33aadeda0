//! Exact multispecies TASEPs attached to the classical affine Weyl groups.
//!
//! The crate builds the multispecies, two-species, `D*` and two-row chains as
//! exact rational kernels ([`models`], [`tworow`]), checks the lumpings between
//! them ([`lumping`]), evaluates partition functions, correlations and limiting
//! directions in closed form ([`closedform`]), and simulates the reduced alcove
//! walk whose direction those formulas predict ([`walk`]).
//!
//! ```
//! use weyl_tasep::closedform::limdir_closed;
//! use weyl_tasep::rational::q;
//! use weyl_tasep::weyl::{Family, WeylKind};
//!
//! let d = limdir_closed(WeylKind::new(Family::D, 4).unwrap()).unwrap();
//! assert_eq!(d.coefficients, vec![q(0, 1), q(5, 58), q(19, 116), q(1, 4)]);
//! ```

#[cfg(feature = "cli")]
pub mod cli;
pub mod closedform;
pub mod error;
pub mod lumping;
pub mod markov;
pub mod models;
pub mod rational;
pub mod tworow;
pub mod walk;
pub mod weyl;
