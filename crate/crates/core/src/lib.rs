//! Customizable contraction hierarchies: nested dissection orders,
//! metric-independent contraction, fast customization and elimination-tree
//! based queries.

pub mod decomposition;
pub mod error;
pub mod graph;
pub mod order;
pub mod preprocess;
pub mod customize;
pub mod query;

pub use error::{Error, Result};
