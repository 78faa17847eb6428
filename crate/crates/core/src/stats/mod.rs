//! Reference laws, test statistics and the experiment runner.

pub mod experiment;
pub mod hypothesis;
pub mod reference;

pub use experiment::*;
pub use hypothesis::*;
pub use reference::*;
