//! One module per subcommand. Each exposes `run`, returning a serializable
//! report, and `write`, emitting it in the requested formats.

pub mod analyze;
pub mod audit;
pub mod hciz;
pub mod sample;
pub mod tables;
pub mod verify;
