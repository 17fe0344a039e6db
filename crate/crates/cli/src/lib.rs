//! Library side of the `framedist` command: frame files, the claim suite
//! runner and report emitters.

pub mod emit;
pub mod frame_file;
pub mod suite;

pub use emit::Format;
pub use frame_file::{FileError, FrameFile};
pub use suite::{run_suite, Suite, SuiteConfig, SuiteReport};
