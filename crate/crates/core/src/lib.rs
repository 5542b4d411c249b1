//! Exact symbolic computation for truncated jet groups, their
//! finite-dimensional representations, and bundles of AV-modules.
//!
//! Everything is computed over the rationals with explicit truncation
//! orders; every identity the library claims is checked exactly, never
//! numerically.

pub mod avmod;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod idx;
pub mod jets;
pub mod matrix;
pub mod poly;
pub mod rat;
pub mod report;
pub mod repn;
pub mod ring;
pub mod sample;
pub mod series;
pub mod smash;
pub mod suites;

pub use avmod::{av_axiom_check, differentiability_check, glue_equivariance_check, jet_glue_matrix, localize_at_point, minimal_diff_order, rudakov_realization_check, AvModule, DeltaModule, DerivElt, JetModule, RealizationModule, RudakovModule};
pub use error::{Error, Result};
pub use geometry::{p1_atlas, Atlas, Chart, Point, Transition};
pub use idx::MultiIndex;
pub use jets::{aut_exp, aut_log, coproduct_check, faa_di_bruno, JetAutomorphism, JetDerivation};
pub use matrix::{Matrix, QMatrix, RMatrix};
pub use poly::Poly;
pub use rat::Rat;
pub use repn::{builtin_rep, k_tr, rho_family, sigma_family, trivial_rep, weight_rep, RepSpec};
pub use report::{CheckReport, Finding};
pub use ring::{FnRing, RingElem};
pub use suites::{run_suite, SuiteConfig, SUITE_NAMES};
pub use smash::{anchor_of_smash, delta, diff_element, phi, psi, JetVF, SmashTerm, VectorField};
pub use series::{taylor_shift, SeriesCtx, TruncSeries};
