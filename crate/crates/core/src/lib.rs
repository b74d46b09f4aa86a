//! Root finding for transcendental equations by branch-indexed term inversion.
//!
//! An equation is modeled as `f(x) = Σ aᵢ·σᵢ(x) − a₀` where each functional
//! factor σᵢ is invertible on the complex plane once a branch of its inverse
//! is chosen (logarithm branch, root of unity, Lambert-W branch). Fixing a
//! term k and a branch tuple turns `f(x) = 0` into the fixed-point problem
//! `x = σₖ⁻¹((a₀ − σₖᶜ(x)) / aₖ)` whose attractive fixed points are roots.
//! Enumerating branch tuples enumerates roots per term ("subfield"), Newton
//! polishing drives residuals to tolerance, and the union of subfields is
//! counted with inclusion–exclusion.
//!
//! Modules:
//! - [`branch_inverse`]: branch-indexed log, fractional power, arcsine, Lambert W
//! - [`special_fn`]: complex Gamma (Lanczos) and Riemann zeta (Euler–Maclaurin)
//! - [`equation_model`]: typed terms, evaluation, complements, term inversion
//! - [`iteration_engine`]: fixed-point driver, Newton polish, branch enumeration
//! - [`root_catalog`]: dedupe, subfield bookkeeping, inclusion–exclusion counts
//! - [`scenarios`]: ready-to-run worked examples with golden expected roots
//! - [`cli`]: `solve` / `reproduce` / `count` / `list-scenarios` front end

pub mod branch_inverse;
pub mod cli;
pub mod equation_model;
pub mod error;
pub mod iteration_engine;
pub mod root_catalog;
pub mod scenarios;
pub mod special_fn;

pub use error::{SolverError, SolverResult};

/// The universal scalar: a complex number in double precision.
pub type ComplexValue = num_complex::Complex64;

/// Integer branch index; 0 always denotes the principal determination.
pub type BranchIndex = i32;
