pub mod allocation;
pub mod bits;
pub mod capacity;
pub mod error;
pub mod generators;
pub mod lp;
pub mod model;
pub mod partitions;
pub mod subset;
pub mod typecheck;

pub use bits::Bits;
pub use error::{Error, Result};
pub use subset::TerminalSet;
