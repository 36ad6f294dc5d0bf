//! Orchestration around the `contpotts` core: single-chain runs, the
//! Metropolis cross-check runner, activity scans with transition
//! classification, and the text/CSV output formats of the `contpotts`
//! binary.

pub mod output;
pub mod run;
pub mod scan;

pub use run::{equilibration_check, run_chain, run_dissoc, run_oracle, ChainOutput, RunConfig};
pub use scan::{
    classify, scan_transition, BranchFlag, ChainResult, Evidence, ScanConfig, TransitionOrder,
    TransitionVerdict,
};
