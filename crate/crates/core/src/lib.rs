//! Dynamic average consensus: agents track the network average of
//! time-varying local inputs over fixed or switching digraphs.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod discrete;
pub mod error;
pub mod graph;
pub mod output;
pub mod protocol;
pub mod scenario;
pub mod signal;
pub mod sim;
pub mod switching;

pub use error::{Error, Result};
pub use graph::{Edge, LaplacianMatrix, SpectralData, WeightedDigraph};
pub use protocol::{AgentState, AlgorithmParams, Protocol, ThetaGain};
pub use signal::{InputSet, Signal};
