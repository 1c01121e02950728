//! Shared parts of the `kplanar` command line tool.

pub mod table;
