pub mod cli;
pub mod error;
pub mod flow;
pub mod graph;
pub mod instance;
pub mod obstructions;
pub mod oracle;
pub mod recognition;
pub mod reduction;

pub use error::{Error, Result};
pub use graph::{Graph, MinorSpec, VertexId};
pub use instance::{Instance, Weight};
