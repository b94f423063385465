//! Library side of the `polyprobe` command: problem files, traces, rendering
//! and bound sweeps.

pub mod bench;
pub mod problem;
pub mod run;
pub mod svg;
pub mod trace;
