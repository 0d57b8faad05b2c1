//! Race-logic state machines over the min-plus tropical semiring.
//!
//! Values are edge arrival times ([`TimeValue`]) collected into
//! [`Wavefront`]s. The [`machine`] module executes instruction sequences on
//! a modeled register file and crossbar with energy/latency accounting;
//! [`algorithms`] drives shortest-path, alignment and closure kernels on it.

pub mod algorithms;
pub mod error;
pub mod lang;
pub mod machine;
pub mod memory;
pub mod tropical;

pub use error::{Error, Result};
pub use machine::{CostReport, CostTable, Instruction, Machine, MachineConfig, TraceEntry};
pub use memory::{OverflowPolicy, RangeConfig};
pub use tropical::{TieMode, TimeValue, TropicalMatrix, Wavefront, INF};
