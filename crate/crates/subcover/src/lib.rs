//! Subtrajectory covering of polygonal curves under the Fréchet distance.
//!
//! A curve is first simplified, a finite set of candidate segments is
//! derived from the simplification, and a multiplicative-weights set cover
//! picks few candidates whose coverage spans the whole curve.

pub mod approx;
pub mod candidates;
pub mod cli;
pub mod coverage;
pub mod frechet;
pub mod geom;
pub mod implicit;
pub mod mwu;
pub mod oracle;
pub mod simplify;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/curves.md")]
pub mod book_curves {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/frechet.md")]
pub mod book_frechet {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/simplification.md")]
pub mod book_simplification {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/candidates.md")]
pub mod book_candidates {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/coverage.md")]
pub mod book_coverage {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/solver.md")]
pub mod book_solver {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/implicit.md")]
pub mod book_implicit {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/approx.md")]
pub mod book_approx {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod book_cli {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/testing.md")]
pub mod book_testing {}
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub mod readme {}
