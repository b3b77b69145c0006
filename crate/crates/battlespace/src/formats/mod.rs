//! On-disk formats shared by the CLI, the server and the tests.

pub mod checkpoint;
pub mod encoded;
pub mod logs;
pub mod snapshot;
