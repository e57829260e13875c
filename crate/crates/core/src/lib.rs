//! Exact numerical calculus of relative Fourier–Mukai transforms on elliptic
//! fibrations with relative Picard number one.
//!
//! * [`lattice`]: the `SL(2, Z)` action of transform kernels on fiberwise
//!   classes `(r, d)` and an equality decider for pushforward classes.
//! * [`cycle`]: locally free sheaves on Kodaira `I_n` cycles, their Hom
//!   spaces, simplicity, and Gieseker stability.
//! * [`grr`]: cohomology-ring arithmetic, Grothendieck–Riemann–Roch
//!   pushforwards, and the moduli-invariant solver.

pub mod arith;
pub mod cycle;
pub mod error;
pub mod grr;
pub mod io;
pub mod lattice;

pub use error::{Error, Result};
