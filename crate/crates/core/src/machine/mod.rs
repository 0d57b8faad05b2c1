//! The temporal state machine: a register file of wavefront memories,
//! matrix banks, and an arithmetic unit of pure race-logic operations.
//!
//! Each [`Instruction`] is one read-compute-store transition (TROPMUL and
//! INHIBIT_ROWS expand to several). Control flow stays in the host driver;
//! the machine only executes straight-line transitions and accounts for
//! their energy and latency.

mod cost;
mod instruction;

use serde::{Deserialize, Serialize};

pub use cost::{cost_report, edges_traversed, CostReport, CostTable, OpcodeCost, Usage};
pub use instruction::{Bank, Instruction, Opcode, Operand, Reg, Slice, WriteMode};

use crate::error::{Error, Result};
use crate::memory::{MatrixBank, OverflowPolicy, RangeConfig, VectorRegister, WriteOutcome};
use crate::tropical::{self, EwOp, TimeValue, Wavefront};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MachineConfig {
    /// Wavefront width N (also the crossbar dimension).
    pub width: usize,
    pub registers: usize,
    pub banks: usize,
    pub bits: u32,
    pub overflow_policy: OverflowPolicy,
    #[serde(flatten)]
    pub costs: CostTable,
}

impl Default for MachineConfig {
    fn default() -> Self {
        MachineConfig {
            width: 32,
            registers: 8,
            banks: 2,
            bits: 5,
            overflow_policy: OverflowPolicy::Strict,
            costs: CostTable::default(),
        }
    }
}

impl MachineConfig {
    pub fn with_width(mut self, width: usize) -> Self {
        self.width = width;
        self
    }

    pub fn with_bits(mut self, bits: u32) -> Self {
        self.bits = bits;
        self
    }

    pub fn with_registers(mut self, registers: usize) -> Self {
        self.registers = registers;
        self
    }

    pub fn range(&self) -> RangeConfig {
        RangeConfig {
            bits: self.bits,
            overflow_policy: self.overflow_policy,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 {
            return Err(Error::InvalidArgument("machine width must be at least 1".into()));
        }
        if self.registers > usize::from(u16::MAX) || self.banks > usize::from(u16::MAX) {
            return Err(Error::InvalidArgument("too many registers or banks".into()));
        }
        self.range().validate()?;
        self.costs.validate()
    }

    /// Parse a flat key-value JSON document; missing keys take defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: MachineConfig = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("machine config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One executed instruction with its resource counts and cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub instruction: Instruction,
    pub transitions: u32,
    #[serde(flatten)]
    pub usage: Usage,
    #[serde(rename = "energy_pJ")]
    pub energy_pj: f64,
    pub latency_ns: f64,
    /// Emitted by projective writes.
    pub norm_constant: Option<TimeValue>,
    pub overflow_events: u64,
}

/// A failed [`Machine::run`], carrying the trace of what did execute.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("instruction {index} failed: {error}")]
pub struct RunError {
    pub index: usize,
    pub error: Error,
    pub partial: Vec<TraceEntry>,
}

#[derive(Debug, Clone)]
pub struct Machine {
    config: MachineConfig,
    range: RangeConfig,
    registers: Vec<VectorRegister>,
    banks: Vec<MatrixBank>,
}

impl Machine {
    pub fn new(config: MachineConfig) -> Result<Self> {
        config.validate()?;
        let registers = (0..config.registers)
            .map(|i| VectorRegister::new(Reg(i as u16).to_string(), config.width))
            .collect();
        let banks = (0..config.banks)
            .map(|i| MatrixBank::new(Bank(i as u16).to_string(), config.width))
            .collect();
        Ok(Machine {
            range: config.range(),
            config,
            registers,
            banks,
        })
    }

    pub fn config(&self) -> &MachineConfig {
        &self.config
    }

    pub fn register(&self, reg: Reg) -> Result<&VectorRegister> {
        self.registers
            .get(usize::from(reg.0))
            .ok_or_else(|| Error::UnknownRegister(reg.to_string()))
    }

    fn register_mut(&mut self, reg: Reg) -> Result<&mut VectorRegister> {
        self.registers
            .get_mut(usize::from(reg.0))
            .ok_or_else(|| Error::UnknownRegister(reg.to_string()))
    }

    pub fn bank(&self, bank: Bank) -> Result<&MatrixBank> {
        self.banks
            .get(usize::from(bank.0))
            .ok_or_else(|| Error::UnknownBank(bank.to_string()))
    }

    fn bank_mut(&mut self, bank: Bank) -> Result<&mut MatrixBank> {
        self.banks
            .get_mut(usize::from(bank.0))
            .ok_or_else(|| Error::UnknownBank(bank.to_string()))
    }

    /// Host-side allocation: give a register a new width (at most N) and clear it.
    pub fn configure_register(&mut self, reg: Reg, width: usize) -> Result<()> {
        if width == 0 || width > self.config.width {
            return Err(Error::ExceedsWidth {
                size: width,
                width: self.config.width,
            });
        }
        self.register_mut(reg)?.resize(width);
        Ok(())
    }

    /// Host-side preload of an input wavefront. Not a transition; not charged.
    pub fn load(&mut self, reg: Reg, w: &Wavefront) -> Result<()> {
        let range = self.range;
        self.register_mut(reg)?.write_direct(w, &range)?;
        Ok(())
    }

    pub fn read(&self, reg: Reg) -> Result<&Wavefront> {
        self.register(reg)?.read()
    }

    /// True while the register holds any finite arrival.
    pub fn halt_test(&self, reg: Reg) -> Result<bool> {
        Ok(tropical::min_reduce(self.read(reg)?).is_finite())
    }

    fn operand(&self, op: &Operand, width: usize) -> Result<(Wavefront, u64)> {
        match op {
            Operand::Reg(r) => {
                let w = self.read(*r)?.clone();
                let lines = w.len() as u64;
                Ok((w, lines))
            }
            Operand::Imm(t) => Ok((Wavefront::splat(width, *t), 0)),
        }
    }

    /// Width an element-wise op works at: the first register operand, else the destination.
    fn ew_width(&self, a: &Operand, b: &Operand, dst: Reg) -> Result<usize> {
        for op in [a, b] {
            if let Operand::Reg(r) = op {
                return Ok(self.read(*r)?.len());
            }
        }
        Ok(self.register(dst)?.width())
    }

    fn store(&mut self, dst: Reg, w: &Wavefront, mode: WriteMode) -> Result<WriteOutcome> {
        let range = self.range;
        let reg = self.register_mut(dst)?;
        match mode {
            WriteMode::Direct => reg.write_direct(w, &range),
            WriteMode::Projective => reg.write_projective(w, &range),
        }
    }

    fn check_hazard(instr: &Instruction) -> Result<()> {
        if let Some(dst) = instr.dest_reg() {
            if instr.source_regs().contains(&dst) {
                return Err(Error::HazardViolation(dst.to_string()));
            }
        }
        Ok(())
    }

    /// Execute one instruction. On error, machine state is unchanged.
    pub fn execute(&mut self, instr: &Instruction) -> Result<TraceEntry> {
        use Instruction::*;
        Self::check_hazard(instr)?;
        let other_ns = self.config.costs.other_op_latency_ns;
        let mut usage = Usage::default();
        let mut transitions = 1u32;
        let mut latency_ns = other_ns;
        let mut outcome = WriteOutcome::default();

        // Register-producing ops compute a result, then store it.
        let produced: Option<(Reg, Wavefront, WriteMode)> = match instr {
            Vmm { bank, src, dst, mode } => {
                let x = self.read(*src)?;
                let a = self.bank(*bank)?.entries();
                let y = tropical::vmm(a, x)?;
                let n = a.n();
                usage.lines_read = x.len() as u64;
                usage.vmm_cells = (n * n) as u64;
                latency_ns = self.config.costs.vmm_latency_ns(n);
                Some((*dst, y, *mode))
            }
            EwMin { lhs, rhs, dst, mode } | EwMax { lhs, rhs, dst, mode } => {
                let width = self.ew_width(lhs, rhs, *dst)?;
                let (u, ru) = self.operand(lhs, width)?;
                let (v, rv) = self.operand(rhs, width)?;
                let op = if matches!(instr, EwMin { .. }) { EwOp::Min } else { EwOp::Max };
                let y = tropical::ew(op, &u, &v, Default::default())?;
                usage.lines_read = ru + rv;
                usage.ew_channels = width as u64;
                Some((*dst, y, *mode))
            }
            EwInhibit { inhibitor, data, dst, mode, tie } => {
                let width = self.ew_width(inhibitor, data, *dst)?;
                let (u, ru) = self.operand(inhibitor, width)?;
                let (v, rv) = self.operand(data, width)?;
                let y = tropical::ew(EwOp::Inhibit, &u, &v, *tie)?;
                usage.lines_read = ru + rv;
                usage.ew_channels = width as u64;
                Some((*dst, y, *mode))
            }
            TropMul { lhs, rhs, dst, mode } => {
                // phase 1 captures lhs into the additive memory, phase 2
                // plays rhs through it into dst
                let u = self.read(*lhs)?;
                let v = self.read(*rhs)?;
                let y = tropical::ew_mul(u, v)?;
                usage.lines_read = (u.len() + v.len()) as u64;
                usage.lines_written = u.len() as u64;
                transitions = 2;
                latency_ns = 2.0 * other_ns;
                Some((*dst, y, *mode))
            }
            Argmin { src, dst, mode } => {
                let x = self.read(*src)?;
                usage.lines_read = x.len() as u64;
                usage.ew_channels = x.len() as u64;
                Some((*dst, tropical::argmin_onehot(x), *mode))
            }
            Binarize { src, dst, t_max, mode } => {
                let x = self.read(*src)?;
                let limit = t_max.unwrap_or(self.range.t_max());
                let y = tropical::binarize(x, limit)?;
                usage.lines_read = x.len() as u64;
                usage.ew_channels = x.len() as u64;
                Some((*dst, y, *mode))
            }
            Coincidence { lhs, rhs, dst, epsilon, mode } => {
                let u = self.read(*lhs)?;
                let v = self.read(*rhs)?;
                let y = tropical::ew_coincidence(u, v, *epsilon)?;
                usage.lines_read = (u.len() + v.len()) as u64;
                usage.ew_channels = u.len() as u64;
                Some((*dst, y, *mode))
            }
            MinReduce { src, dst } | MaxReduce { src, dst } => {
                let x = self.read(*src)?;
                let t = if matches!(instr, MinReduce { .. }) {
                    tropical::min_reduce(x)
                } else {
                    tropical::max_reduce(x)
                };
                usage.lines_read = x.len() as u64;
                usage.ew_channels = x.len() as u64;
                Some((*dst, Wavefront::new(vec![t]), WriteMode::Direct))
            }
            Scale { src, delay, dst, mode } => {
                let x = self.read(*src)?;
                usage.lines_read = x.len() as u64;
                usage.ew_channels = x.len() as u64;
                let y = x
                    .iter()
                    .map(|t| delay.checked_delay(*t).ok_or(Error::TickOverflow))
                    .collect::<Result<Wavefront>>()?;
                Some((*dst, y, *mode))
            }
            Move { parts, dst, mode } => {
                let mut gathered = Vec::new();
                for p in parts {
                    let x = self.read(p.reg)?;
                    if p.start > p.end || p.end > x.len() {
                        return Err(Error::InvalidArgument(format!(
                            "slice {}[{}..{}] out of bounds for width {}",
                            p.reg,
                            p.start,
                            p.end,
                            x.len()
                        )));
                    }
                    gathered.extend_from_slice(&x.as_slice()[p.start..p.end]);
                }
                usage.lines_read = gathered.len() as u64;
                Some((*dst, Wavefront::new(gathered), *mode))
            }
            WriteColumn { bank, select, src } => {
                let onehot = self.read(*select)?.clone();
                let w = self.read(*src)?.clone();
                let range = self.range;
                let b = self.bank_mut(*bank)?;
                let n = b.n();
                outcome.overflow_events = b.write_column(&onehot, &w, &range)?;
                usage.lines_read = (onehot.len() + w.len()) as u64;
                usage.lines_written = n as u64;
                None
            }
            InhibitRows { bank, mask } => {
                let m = self.read(*mask)?.clone();
                let b = self.bank_mut(*bank)?;
                let n = b.n();
                b.inhibit_rows(&m)?;
                // one transition per row: read its mask line, rewrite the row line
                usage.lines_read = n as u64;
                usage.lines_written = n as u64;
                transitions = n as u32;
                latency_ns = n as f64 * other_ns;
                None
            }
            ProgramMatrix { bank, matrix } => {
                let range = self.range;
                let b = self.bank_mut(*bank)?;
                outcome.overflow_events = b.program(matrix, &range)?;
                usage.program_cells = (matrix.n() * matrix.n()) as u64;
                None
            }
        };

        if let Some((dst, w, mode)) = produced {
            usage.lines_written += w.len() as u64;
            outcome = self.store(dst, &w, mode)?;
        }

        Ok(TraceEntry {
            instruction: instr.clone(),
            transitions,
            energy_pj: self.config.costs.energy_pj(&usage),
            usage,
            latency_ns,
            norm_constant: outcome.norm_constant,
            overflow_events: outcome.overflow_events as u64,
        })
    }

    /// Execute a straight-line program, stopping at the first error.
    pub fn run(&mut self, program: &[Instruction]) -> Result<Vec<TraceEntry>, RunError> {
        let mut trace = Vec::with_capacity(program.len());
        for (index, instr) in program.iter().enumerate() {
            match self.execute(instr) {
                Ok(entry) => trace.push(entry),
                Err(error) => {
                    return Err(RunError {
                        index,
                        error,
                        partial: trace,
                    })
                }
            }
        }
        Ok(trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::example_matrix;
    use crate::wf;

    fn machine(width: usize) -> Machine {
        Machine::new(MachineConfig::default().with_width(width)).unwrap()
    }

    #[test]
    fn vmm_energy_on_32_wide_machine() {
        let mut m = machine(32);
        m.load(Reg(0), &Wavefront::one_hot(32, 0)).unwrap();
        let e = m
            .execute(&Instruction::Vmm { bank: Bank(0), src: Reg(0), dst: Reg(1), mode: WriteMode::Direct })
            .unwrap();
        assert_eq!(e.usage.vmm_cells, 1024);
        let vmm_part = e.usage.vmm_cells as f64 * m.config().costs.vmm_fj_per_cell / 1000.0;
        assert!((vmm_part - 716.8).abs() < 1e-9);
        assert!((e.latency_ns - 102.4).abs() < 1e-9);
        // plus one read and one write of the 32-line wavefront
        assert!((e.energy_pj - (716.8 + 64.0 + 320.0)).abs() < 1e-9);
    }

    #[test]
    fn ew_min_energy() {
        let mut m = machine(32);
        m.load(Reg(0), &Wavefront::splat(32, TimeValue::Finite(1))).unwrap();
        m.load(Reg(1), &Wavefront::splat(32, TimeValue::Finite(2))).unwrap();
        let e = m
            .execute(&Instruction::EwMin {
                lhs: Reg(0).into(),
                rhs: Reg(1).into(),
                dst: Reg(2),
                mode: WriteMode::Direct,
            })
            .unwrap();
        assert_eq!((e.usage.lines_read, e.usage.lines_written), (64, 32));
        assert!((e.energy_pj - 449.0).abs() < 1e-9);
    }

    #[test]
    fn tropmul_takes_two_transitions() {
        let mut m = machine(2);
        m.load(Reg(0), &wf![1, 1]).unwrap();
        m.load(Reg(1), &wf![2, 0]).unwrap();
        let e = m
            .execute(&Instruction::TropMul { lhs: Reg(0), rhs: Reg(1), dst: Reg(2), mode: WriteMode::Direct })
            .unwrap();
        assert_eq!(e.transitions, 2);
        assert_eq!(m.read(Reg(2)).unwrap(), &wf![3, 1]);
    }

    #[test]
    fn hazard_rule() {
        let mut m = machine(2);
        m.load(Reg(0), &wf![1, 1]).unwrap();
        let bad = Instruction::EwMin { lhs: Reg(0).into(), rhs: Reg(1).into(), dst: Reg(0), mode: WriteMode::Direct };
        assert_eq!(m.execute(&bad), Err(Error::HazardViolation("r0".into())));
        let err = m.run(&[bad]).unwrap_err();
        assert_eq!(err.index, 0);
        assert!(err.partial.is_empty());
    }

    #[test]
    fn empty_program() {
        assert!(machine(2).run(&[]).unwrap().is_empty());
    }

    #[test]
    fn run_keeps_partial_trace() {
        let mut m = machine(2);
        m.load(Reg(0), &wf![1, 1]).unwrap();
        let program = vec![
            Instruction::Scale { src: Reg(0), delay: TimeValue::Finite(1), dst: Reg(1), mode: WriteMode::Direct },
            Instruction::Argmin { src: Reg(5), dst: Reg(2), mode: WriteMode::Direct },
        ];
        let err = m.run(&program).unwrap_err();
        assert_eq!(err.index, 1);
        assert_eq!(err.partial.len(), 1);
        assert_eq!(err.error, Error::UninitializedRegister("r5".into()));
    }

    #[test]
    fn projective_write_emits_constant() {
        let mut m = machine(3);
        m.load(Reg(0), &wf![3, 5, inf]).unwrap();
        let e = m
            .execute(&Instruction::Scale { src: Reg(0), delay: TimeValue::ZERO, dst: Reg(1), mode: WriteMode::Projective })
            .unwrap();
        assert_eq!(e.norm_constant, Some(TimeValue::Finite(3)));
        assert_eq!(m.read(Reg(1)).unwrap(), &wf![0, 2, inf]);
    }

    #[test]
    fn saturation_is_counted() {
        let mut cfg = MachineConfig::default().with_width(2);
        cfg.overflow_policy = OverflowPolicy::SaturateToInfinity;
        let mut m = Machine::new(cfg).unwrap();
        m.load(Reg(0), &wf![30, 1]).unwrap();
        let e = m
            .execute(&Instruction::Scale { src: Reg(0), delay: TimeValue::Finite(5), dst: Reg(1), mode: WriteMode::Direct })
            .unwrap();
        assert_eq!(e.overflow_events, 1);
        assert_eq!(m.read(Reg(1)).unwrap(), &wf![inf, 6]);

        let mut strict = machine(2);
        strict.load(Reg(0), &wf![30, 1]).unwrap();
        let r = strict.execute(&Instruction::Scale {
            src: Reg(0),
            delay: TimeValue::Finite(5),
            dst: Reg(1),
            mode: WriteMode::Direct,
        });
        assert!(matches!(r, Err(Error::RangeViolation { .. })));
        assert!(!strict.register(Reg(1)).unwrap().is_initialized());
    }

    #[test]
    fn bank_ops_and_halt_test() {
        let mut m = machine(4);
        m.execute(&Instruction::ProgramMatrix { bank: Bank(0), matrix: example_matrix() }).unwrap();
        m.load(Reg(0), &wf![inf, 0, inf, inf]).unwrap();
        m.execute(&Instruction::Vmm { bank: Bank(0), src: Reg(0), dst: Reg(1), mode: WriteMode::Direct })
            .unwrap();
        assert_eq!(m.read(Reg(1)).unwrap(), &wf![inf, inf, 2, 4]);

        m.execute(&Instruction::WriteColumn { bank: Bank(1), select: Reg(0), src: Reg(1) }).unwrap();
        assert_eq!(m.bank(Bank(1)).unwrap().entries().column(1), wf![inf, inf, 2, 4]);

        m.load(Reg(2), &wf![inf, inf, 0, inf]).unwrap();
        let e = m.execute(&Instruction::InhibitRows { bank: Bank(1), mask: Reg(2) }).unwrap();
        assert_eq!(e.transitions, 4);
        assert_eq!(m.bank(Bank(1)).unwrap().entries().column(1), wf![inf, inf, inf, 4]);

        assert!(m.halt_test(Reg(1)).unwrap());
        m.configure_register(Reg(3), 2).unwrap();
        m.load(Reg(3), &wf![inf, inf]).unwrap();
        assert!(!m.halt_test(Reg(3)).unwrap());
        assert!(matches!(m.halt_test(Reg(4)), Err(Error::UninitializedRegister(_))));
    }

    #[test]
    fn config_json_is_flat() {
        let cfg = MachineConfig::from_json(r#"{"width": 16, "bits": 6, "write_pJ_per_line": 12.5}"#).unwrap();
        assert_eq!(cfg.width, 16);
        assert_eq!(cfg.range().t_max_ticks(), 63);
        assert_eq!(cfg.costs.write_pj_per_line, 12.5);
        assert_eq!(cfg.costs.read_pj_per_line, 2.0);
        assert!(MachineConfig::from_json(r#"{"width": 0}"#).is_err());
    }
}
