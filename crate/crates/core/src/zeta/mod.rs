//! Exact special values at non-positive integers of the partial zeta
//! functions attached to lattice points in cones.

pub mod bernoulli;
pub mod cn;
pub mod cyclotomic;
pub mod lattice;
pub mod nu;

pub use bernoulli::{barnes_zeta0, bernoulli_number, bernoulli_poly};
pub use cn::{lemma_cn_value, smoothed_literal, TwistTable};
pub use cyclotomic::Cyclotomic;
pub use lattice::{build_rset, BallCondition, ConePlan, EnumContext, LatticeConeSet, LatticePoint};
pub use nu::{
    nu_eta, nu_eta_routes, partial_zeta0, smoothed_partial_zeta0, smoothed_zeta_neg_k, zeta0_unsmoothed,
    zeta0_unsmoothed_norm, ConeData, NuRoutes,
};
