//! p-adic numbers over `Q_p`, the embedding of the field at a split prime,
//! logarithms, and integration against tabulated measures.

pub mod log;
pub mod measure;
pub mod num;

pub use log::{bracket_p, iwasawa_log, teichmuller, AlgLogCombo, LogCoeff, PadicEmbedding};
pub use measure::{build_measure, integrate_log, integrate_moment, integrate_mult, BallLabel, ResidueMeasure};
pub use num::PadicNum;
