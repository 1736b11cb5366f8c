//! Lower bounds on averaged Dirichlet eigenvalues of the Laplacian and the
//! poly-Laplacian, together with the machinery used to check them:
//!
//! - [`polyid`]: exact-rational expansion of the two binary polynomial
//!   identities behind the inertia-corrected estimates.
//! - [`profiles`]: piecewise-linear decreasing Lipschitz profiles, their
//!   moments, the rearrangement lemmas and the Jensen-step floors.
//! - [`bounds`]: closed-form evaluators for every named bound.
//! - [`spectra`]: exact Dirichlet spectra of boxes and balls.
//! - [`verify`]: joins spectra and bounds into reports, dominance tables and
//!   the lemma fuzz campaign.

pub mod bounds;
pub mod error;
pub mod polyid;
pub mod profiles;
pub mod special;
pub mod spectra;
pub mod verify;

pub use bounds::{AMode, BoundName, BoundSpec, BoundValue, DerivedConstants, DomainData};
pub use error::{Error, Result};
pub use polyid::BivariatePolynomial;
pub use profiles::{LemmaReport, Profile};
pub use spectra::{DomainDescriptor, ModelDomain, Spectrum};
pub use verify::{BoundReport, ReportRow};
