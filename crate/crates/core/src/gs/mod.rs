//! The Gross-Stark unit `u_η(b, D_f)`, the verifier for the identity
//! `log_p u_η = -Y_p(b) + Nη Y_p(bη^{-1})`, and conjecture probes.

pub mod config;
pub mod probe;
pub mod recognize;
pub mod unit;

pub use config::{ConfigSpec, EtaSpec, GSConfig};
pub use probe::{probe_conjecture, ProbeOutcome, ProbeReport};
pub use recognize::{rational_reconstruction, recognize};
pub use unit::{epsilon_eta, required_precision, exact_side, theorem_combo, u_eta, verify_theorem, EpsilonEta, Fault, UEta, VerificationReport, SCHEMA};
