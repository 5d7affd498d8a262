//! File formats, verification and the command-line front end for
//! `mixmaxd-core`.

pub mod cli;
pub mod golden;
pub mod io;
pub mod report;
pub mod verify;
