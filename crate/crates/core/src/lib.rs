//! Finite frames in real and complex Hilbert spaces: spectral data, standard
//! constructions, the distribution of frame coefficients, span structure of
//! subsets, and extremal problems for product and distance sums.

pub mod coefficients;
pub mod constructors;
pub mod error;
pub mod frame;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod search;
pub mod spark;

pub use error::{FrameError, Result};
pub use frame::{classify, Frame, SpectralSummary};
pub use linalg::{Field, Matrix, Vector, C64};
pub use report::{HypothesisStatus, TheoremReport};
pub use search::{BoundLedger, Direction, SearchConfig, SearchResult};
