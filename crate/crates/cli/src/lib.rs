//! Support code for the `rique` command line tool.

pub mod suite;
