//! Modeling, slicing and core-decomposing multilayer time-varying networks
//! with MultiAspect Graphs, plus a flight-schedule pipeline on top.

pub mod analysis;
pub mod export;
pub mod ingest;
pub mod kcore;
pub mod mag;
pub mod report;
