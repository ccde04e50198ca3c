//! Computable projective structures on Riemann surfaces.
//!
//! A projective structure is encoded as a trivialisation of
//! `K_{X×X}(2Δ)` on the second infinitesimal neighbourhood of the diagonal.
//! This crate provides the local calculus behind that picture:
//!
//! - [`jets`]: truncated complex power series.
//! - [`moebius`]: PSL(2, C) and the isotropy group of `0`.
//! - [`schwarzian`]: the Schwarzian derivative and the solver for `S(w) = h`.
//! - [`bidifferential`]: diagonal germs of symmetric bidifferentials, their
//!   pullbacks and the projective connection they carry.
//! - [`torsor`]: 3-jets modulo the isotropy group as a torsor under quadratic
//!   differentials.
//! - [`surfaces`]: theta functions, `℘`, prime forms and cross ratios in
//!   genus 0 and 1.

pub mod bidifferential;
pub mod error;
pub mod jets;
pub mod moebius;
pub mod schwarzian;
pub mod surfaces;
pub mod torsor;

pub use bidifferential::{BidiffGerm, CanonicalReport, ProjConnGerm};
pub use error::{Error, Result};
pub use jets::Jet;
pub use moebius::{ExtendedComplex, IsotropyElement, MoebiusMap};
pub use num_complex::Complex64;
pub use schwarzian::QuadDiffGerm;
pub use surfaces::{Surface, TorusModulus};
pub use torsor::TorsorElement;
