//! Standard-library companion to `raidsim-core`: scenario files, canonical
//! log serialization, the parallel experiment runner, report writers, and
//! the newline-delimited JSON environment protocol.

pub mod scenario;
