//! Cohomology-ring arithmetic, Grothendieck–Riemann–Roch pushforwards and
//! the solver that recovers the cubic form and `c2` pairings of a relative
//! moduli space.

pub mod chern;
pub mod presets;
pub mod ring;
pub mod solver;
pub mod symbolic;
pub mod synthetic;

pub use chern::{
    chern_to_ch, chi_grr, c2_pair, cubic_form, line_bundle, p_class_ch, pushforward_ch, relative_todd, todd,
    SheafClass, TemplateSet,
};
pub use ring::{validate_ring, BasisElement, Class, FibrationData, RingBuilder, RingReport, RingSpec, Violation};
pub use solver::{solve_moduli_invariants, Factor, Sample, SolveReport, SolveStatus};
pub use synthetic::{synthetic_datum, Planted, SyntheticDatum};
