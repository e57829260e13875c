//! Locally free sheaves on Kodaira `I_n` fibers, with Hom spaces, slopes,
//! simplicity and a bounded Gieseker-stability oracle.

pub mod generate;
pub mod hom;
pub mod scan;
pub mod sheaf;
pub mod stability;

pub use hom::{h0, h1, hom, hom_dim, hom_dim_in, is_simple, is_simple_in, HomReport, NodeSystem};
pub use sheaf::{
    det_bundle, euler_char, induced_polarization, make_cyclic_bundle, slope_mu, CycleBundle,
    Definiteness, Lambda, Mark, PolarizedCycle, RankOneTestSheaf, Support,
};
pub use stability::{
    enumerate_destabilizers, is_stable, verify_certificate, Destabilizer, DestabilizerSearch, Family,
    StabilityReport, Verdict, Witness,
};
pub use scan::{agreement_scan, CertificateSummary, FieldChoice, ScanConfig, ScanReport};
