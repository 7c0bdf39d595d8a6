//! Thesis defence scheduling: problem model, objectives, MILP encoding,
//! epsilon-grid bookkeeping and random instance generation.
//!
//! The crate is `no_std` and only needs an allocator. Solving, timing, file
//! formats and the command line live in the `defsched` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chain;
pub mod epsilon;
pub mod feasibility;
pub mod generate;
pub mod instance;
pub mod milp;
pub mod model;
pub mod objectives;
pub mod pareto;
pub mod schedule;

pub use feasibility::{check_feasibility, is_feasible, Violation};
pub use instance::{Defence, Dims, Instance, InstanceError, Member};
pub use objectives::{evaluate_objectives, ObjectiveId, ObjectiveVector, Sense, N_OBJECTIVES};
pub use schedule::{Assignment, Schedule};
