//! Open simplicial cones in the totally positive quadrant and exact set
//! operations on finite disjoint unions of them.

mod cone;
mod decomposition;
mod domain;
mod sector;

pub use cone::{Cone, ShintaniSet};
pub use decomposition::{simultaneous_decomposition, GoodDecomposition, Piece};
pub use domain::{
    fundamental_domain_check, pi_inverse_domain, shintani_domain, shintani_domain_with_base, FdReport,
};
pub use sector::{cmp_slope, SectorForm, Segment};
