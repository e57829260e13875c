//! Integer lattice calculus of relative Fourier–Mukai transforms on
//! fiberwise numerical classes `(r, d)`, and an equality decider for the
//! pushforward invariants `P(r, d)`.

mod class;
mod decider;
mod kernel;
mod pclass;

pub use class::FiberClass;
pub use decider::{Decision, PDecider, TensorAnnotation, RankOneIdentity};
pub use kernel::{compose_kernels, kernel_between, kernel_from_moduli, KernelData, Sl2};
pub use pclass::{canonicalize, canonicalize_with, jacobian_step, Canonical, PClass, Relation};
