//! Surface-plasmon and phonon band edges, non-Markovian emitter dynamics and
//! junction current noise.

// `!(x > 0.0)` is used on purpose so that NaN fails validation; published
// quadrature constants keep their printed digits; index loops mirror the
// matrix algebra they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

pub mod band_edge;
pub mod emission;
pub mod dynamics;
pub mod error;
pub mod media;
pub mod noise;
pub mod numerics;
pub mod phonon;
pub mod plasmon;
pub mod retardation;

pub use error::{Error, Result};
