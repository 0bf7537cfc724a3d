//! Exact random variate generation for eigenvalues of GUE matrices.
//!
//! Two samplers are provided:
//!
//! * [`samplers`] draws one uniformly chosen eigenvalue of a GUE(n) matrix by
//!   picking an index `k` uniformly and sampling from the squared Hermite
//!   function density `phi_k^2`. Sampling is rejection from a piecewise
//!   envelope ([`dominator`]), optionally accelerated by a constant-time
//!   squeeze ([`vanveen`]) so that the O(k) Hermite recurrence is only run
//!   on a vanishing fraction of proposals.
//! * [`joint`] draws the full ordered spectrum by rejection from a product of
//!   independent bivariate components.
//!
//! Everything uses the unscaled convention, in which the joint eigenvalue
//! density carries the weight `exp(-x^2/2)` and the spectrum lives on roughly
//! `[-2 sqrt(n), 2 sqrt(n)]`.
//!
//! [`oracle`] and [`stats`] hold the independent ground truth and
//! goodness-of-fit machinery used by [`verify`].

pub mod cli;
pub mod dominator;
pub mod error;
pub mod hermite;
pub mod joint;
pub mod oracle;
pub mod quadrature;
pub mod rng;
pub mod samplers;
pub mod scaled;
pub mod stats;
pub mod tabulate;
pub mod vanveen;
pub mod verify;

pub use dominator::DominatorSpec;
pub use error::{Error, Result};
pub use hermite::{hermite_poly, mixture_density, phi_sq_cdf, phi_squared, HermiteEval, PhiSqCdf};
pub use joint::{sample_joint, vandermonde_max, JointSample, JointSampler};
pub use oracle::{eigenvalues_small, sample_gue_matrix, Convention, HermitianMatrix};
pub use rng::RandomStream;
pub use samplers::{GueEigenvalueSampler, Mode, PhiSquaredSampler, SamplerStats};

pub use scaled::ScaledValue;
pub use vanveen::{VanVeen, VanVeenTerms};
