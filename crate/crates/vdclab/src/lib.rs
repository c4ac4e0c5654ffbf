//! Numerical laboratory for difference-set avoidance over floor-of-growth-function
//! sequences.
//!
//! The crate generates sets `S = { floor(h(n)) : n in N }` for a catalog of
//! smooth growth functions `h` with growth rate `c in (1, 6/5)`, builds the
//! Fejér-weighted witness polynomial that certifies an upper bound
//! `gamma_hat(N) = delta1 / (delta1 + delta2)` on the least constant term of a
//! non-negative cosine polynomial supported on `S ∩ [N]`, and checks the result
//! against two independent oracles: exact extremal search (largest `A ⊆ [N]`
//! with `(A - A) ∩ S = ∅`) and a grid-discretized linear program.
//!
//! Modules map one-to-one onto the subsystems:
//!
//! * [`growth`] — the growth-function catalog, derivatives, inverse, thresholds
//! * [`sequence`] — set generation and the floor-identity membership test
//! * [`kernels`] — Fejér and Dirichlet kernels and their identities
//! * [`witness`] — the weighted indicator, `delta1`/`delta2`, and the witness polynomial
//! * [`analysis`] — inequality and decomposition checks (sawtooth, exponential sums)
//! * [`extremal`] — branch-and-bound and greedy difference-avoiding set search
//! * [`lpgamma`] — the LP lower oracle with cutting-plane grid refinement
//! * [`cli`] — experiment configuration and the subcommand entry points

pub mod analysis;
pub mod cli;
pub mod constants;
pub mod error;
pub mod extremal;
pub mod fit;
pub mod growth;
pub mod kernels;
pub mod lpgamma;
pub mod numeric;
pub mod sequence;
pub mod witness;

pub use error::{Error, Result};
