use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Opcode, TraceEntry};

/// Energy and latency constants for the modeled datapath.
///
/// Defaults come from a 180 nm memristive implementation. The latency
/// constant is chosen so a 32x32 VMM transition sustains 10 edge
/// traversals per nanosecond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostTable {
    #[serde(rename = "read_pJ_per_line")]
    pub read_pj_per_line: f64,
    #[serde(rename = "write_pJ_per_line")]
    pub write_pj_per_line: f64,
    #[serde(rename = "vmm_fJ_per_cell")]
    pub vmm_fj_per_cell: f64,
    #[serde(rename = "ew_pJ_per_32_channels")]
    pub ew_pj_per_32_channels: f64,
    /// VMM latency is this times `n^2`.
    pub vmm_latency_ns_per_cell: f64,
    pub other_op_latency_ns: f64,
    #[serde(rename = "matrix_program_pJ_per_cell")]
    pub matrix_program_pj_per_cell: f64,
}

impl Default for CostTable {
    fn default() -> Self {
        CostTable {
            read_pj_per_line: 2.0,
            write_pj_per_line: 10.0,
            vmm_fj_per_cell: 700.0,
            ew_pj_per_32_channels: 1.0,
            vmm_latency_ns_per_cell: 0.1,
            other_op_latency_ns: 10.0,
            matrix_program_pj_per_cell: 10.0,
        }
    }
}

impl CostTable {
    pub fn validate(&self) -> crate::Result<()> {
        let fields = [
            ("read_pJ_per_line", self.read_pj_per_line),
            ("write_pJ_per_line", self.write_pj_per_line),
            ("vmm_fJ_per_cell", self.vmm_fj_per_cell),
            ("ew_pJ_per_32_channels", self.ew_pj_per_32_channels),
            ("vmm_latency_ns_per_cell", self.vmm_latency_ns_per_cell),
            ("other_op_latency_ns", self.other_op_latency_ns),
            ("matrix_program_pJ_per_cell", self.matrix_program_pj_per_cell),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(crate::Error::InvalidArgument(format!(
                    "cost {name} must be a nonnegative number, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn vmm_latency_ns(&self, n: usize) -> f64 {
        self.vmm_latency_ns_per_cell * (n * n) as f64
    }

    pub fn energy_pj(&self, u: &Usage) -> f64 {
        u.lines_read as f64 * self.read_pj_per_line
            + u.lines_written as f64 * self.write_pj_per_line
            + u.vmm_cells as f64 * self.vmm_fj_per_cell / 1000.0
            + u.ew_channels as f64 * self.ew_pj_per_32_channels / 32.0
            + u.program_cells as f64 * self.matrix_program_pj_per_cell
    }
}

/// Resource counts of one transition, the inputs to the cost model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Usage {
    pub lines_read: u64,
    pub lines_written: u64,
    pub vmm_cells: u64,
    pub ew_channels: u64,
    pub program_cells: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OpcodeCost {
    pub count: u64,
    pub transitions: u64,
    #[serde(rename = "energy_pJ")]
    pub energy_pj: f64,
    pub latency_ns: f64,
}

/// Aggregate cost of a trace.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CostReport {
    #[serde(rename = "energy_pJ")]
    pub energy_pj: f64,
    pub latency_ns: f64,
    pub transitions: u64,
    pub overflow_events: u64,
    pub edges_traversed: u64,
    /// Giga-edge traversals per second (edges per nanosecond).
    #[serde(rename = "GETS")]
    pub gets: f64,
    /// Giga-edge traversals per joule (edges per nanojoule).
    #[serde(rename = "GETJ")]
    pub getj: f64,
    pub by_opcode: BTreeMap<Opcode, OpcodeCost>,
}

pub fn cost_report(trace: &[TraceEntry], edges_traversed: u64) -> CostReport {
    let mut report = CostReport {
        edges_traversed,
        ..Default::default()
    };
    for e in trace {
        report.energy_pj += e.energy_pj;
        report.latency_ns += e.latency_ns;
        report.transitions += u64::from(e.transitions);
        report.overflow_events += e.overflow_events;
        let slot = report.by_opcode.entry(e.instruction.opcode()).or_default();
        slot.count += 1;
        slot.transitions += u64::from(e.transitions);
        slot.energy_pj += e.energy_pj;
        slot.latency_ns += e.latency_ns;
    }
    let edges = edges_traversed as f64;
    if edges_traversed > 0 && report.latency_ns > 0.0 {
        report.gets = edges / report.latency_ns;
    }
    if edges_traversed > 0 && report.energy_pj > 0.0 {
        report.getj = edges / (report.energy_pj / 1000.0);
    }
    report
}

/// Edge traversals credited to a trace: every VMM evaluates all `n^2` cells.
pub fn edges_traversed(trace: &[TraceEntry]) -> u64 {
    trace.iter().map(|e| e.usage.vmm_cells).sum()
}
