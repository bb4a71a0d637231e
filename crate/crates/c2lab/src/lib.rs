//! IO, parallel counting, the corpus pipeline and the `c2lab` command line
//! on top of `c2lab-core`.

pub mod cli;
pub mod format;
pub mod json;
pub mod parallel;
pub mod pipeline;

pub use c2lab_core as core;
