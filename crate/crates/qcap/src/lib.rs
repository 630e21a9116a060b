//! File formats and the command-line front end for `qcap-core`.

pub mod cli;
pub mod io;
