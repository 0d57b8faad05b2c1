use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::{Instruction, Machine, MachineConfig, Operand, Reg, Slice, TraceEntry, WriteMode};
use crate::tropical::{TimeValue, Wavefront};

/// Two equal-length nucleotide sequences with indel and mismatch costs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentProblem {
    /// Codes G=0, A=1, T=2, C=3.
    pub x: Vec<u8>,
    pub y: Vec<u8>,
    pub sigma: u64,
    pub mismatch: u64,
}

pub fn encode(seq: &str) -> Result<Vec<u8>> {
    seq.chars()
        .map(|c| match c {
            'G' => Ok(0),
            'A' => Ok(1),
            'T' => Ok(2),
            'C' => Ok(3),
            other => Err(Error::InvalidAlphabet(other)),
        })
        .collect()
}

impl AlignmentProblem {
    pub fn new(x: &str, y: &str, sigma: u64, mismatch: u64) -> Result<Self> {
        let p = AlignmentProblem {
            x: encode(x)?,
            y: encode(y)?,
            sigma,
            mismatch,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.is_empty() {
            return Err(Error::InvalidArgument("sequences must be non-empty".into()));
        }
        if self.x.len() != self.y.len() {
            return Err(Error::DimensionMismatch {
                expected: self.x.len(),
                found: self.y.len(),
            });
        }
        if self.sigma == 0 || self.mismatch == 0 {
            return Err(Error::InvalidArgument("indel and mismatch costs must be at least 1".into()));
        }
        if let Some(&bad) = self.x.iter().chain(&self.y).find(|&&c| c > 3) {
            return Err(Error::InvalidArgument(format!("nucleotide code {bad} out of range")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Textbook O(n^2) forward pass. Mismatches cost `m`, matches are free.
pub fn classical_nw(p: &AlignmentProblem) -> u64 {
    let n = p.x.len();
    let k = p.y.len();
    let mut prev: Vec<u64> = (0..=k as u64).map(|j| j * p.sigma).collect();
    for i in 1..=n {
        let mut row = vec![i as u64 * p.sigma; k + 1];
        for j in 1..=k {
            let sub = if p.x[i - 1] == p.y[j - 1] { 0 } else { p.mismatch };
            row[j] = (row[j - 1] + p.sigma)
                .min(prev[j] + p.sigma)
                .min(prev[j - 1] + sub);
        }
        prev = row;
    }
    prev[k]
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentRun {
    pub cost: TimeValue,
    pub trace: Vec<TraceEntry>,
}

// fixed registers
const X: Reg = Reg(0);
const Y_REV: Reg = Reg(1);
const XS: Reg = Reg(2);
const YS: Reg = Reg(3);
const C_RAW: Reg = Reg(4);
const C: Reg = Reg(5);
const A: Reg = Reg(6);
const MC: Reg = Reg(7);
const MU2S: Reg = Reg(8);
const B: Reg = Reg(9);
const A_LO: Reg = Reg(10);
const A_HI: Reg = Reg(11);
const T: Reg = Reg(12);
const R: Reg = Reg(13);
// three registers rotate through the roles mu(k-2), mu(k-1), mu(k)
const MU: [Reg; 3] = [Reg(14), Reg(15), Reg(16)];
const REGISTERS: usize = 17;

/// Alignment cost by the skew-diagonal recursion on a state machine.
///
/// `mu(k)` is anti-diagonal `k` of the score matrix, element `e` holding
/// `M(p, k - p)` where `p = e` while `k <= n` and `p = k - n + e` after.
/// Sequence slicing and boundary concatenation are host-addressed MOVEs;
/// everything else is wavefront arithmetic.
pub fn temporal_nw(p: &AlignmentProblem, config: &MachineConfig) -> Result<AlignmentRun> {
    p.validate()?;
    let n = p.len();
    if n + 1 > config.width {
        return Err(Error::ExceedsWidth {
            size: n + 1,
            width: config.width,
        });
    }
    // Every stored score is at most n * max(sigma, m); the indel delay can
    // add one more step before the min is taken.
    let range = config.range();
    let worst = (n as u64 + 1).saturating_mul(p.sigma.max(p.mismatch));
    if worst > range.t_max_ticks() {
        return Err(Error::RangeViolation {
            value: TimeValue::Finite(worst),
            t_max: range.t_max(),
        });
    }

    let cfg = config.clone().with_registers(config.registers.max(REGISTERS));
    let mut m = Machine::new(cfg)?;
    let mut trace = Vec::new();
    let sigma = TimeValue::Finite(p.sigma);
    let mismatch = TimeValue::Finite(p.mismatch);

    let codes = |s: &mut dyn Iterator<Item = &u8>| -> Wavefront {
        s.map(|&c| TimeValue::Finite(u64::from(c))).collect()
    };
    // y is stored reversed so each anti-diagonal reads a contiguous slice
    m.configure_register(X, n)?;
    m.load(X, &codes(&mut p.x.iter()))?;
    m.configure_register(Y_REV, n)?;
    m.load(Y_REV, &codes(&mut p.y.iter().rev()))?;

    let [mut mu2, mut mu1, mut mu] = MU;
    m.configure_register(mu2, 1)?;
    m.load(mu2, &Wavefront::new(vec![TimeValue::ZERO]))?;
    m.configure_register(mu1, 2)?;
    m.load(mu1, &Wavefront::splat(2, sigma))?;

    let mv = |parts: Vec<Slice>, dst: Reg| Instruction::Move { parts, dst, mode: WriteMode::Direct };
    let ew_min = |lhs: Operand, rhs: Operand, dst: Reg| Instruction::EwMin { lhs, rhs, dst, mode: WriteMode::Direct };

    for k in 2..=2 * n {
        let rising = k <= n;
        // interior length, and slice origins (0-indexed) of x, reversed y and mu(k-2)
        let (len, x0, y0, mu2_off) = if rising {
            (k - 1, 0, n + 1 - k, 0)
        } else {
            (2 * n - k + 1, k - n - 1, 0, usize::from(k != n + 1))
        };
        let a_len = m.register(mu1)?.width();
        for (reg, w) in [(XS, len), (YS, len), (C_RAW, len), (C, len), (A, a_len), (MC, len), (MU2S, len)] {
            m.configure_register(reg, w)?;
        }
        for reg in [B, A_LO, A_HI, T, R] {
            m.configure_register(reg, len)?;
        }

        let mut program = vec![
            mv(vec![Slice::new(X, x0, x0 + len)], XS),
            mv(vec![Slice::new(Y_REV, y0, y0 + len)], YS),
            Instruction::Coincidence { lhs: XS, rhs: YS, dst: C_RAW, epsilon: 1, mode: WriteMode::Direct },
            // matches become 0, mismatches inf
            Instruction::Binarize { src: C_RAW, dst: C, t_max: None, mode: WriteMode::Projective },
            Instruction::Scale { src: mu1, delay: sigma, dst: A, mode: WriteMode::Direct },
            ew_min(Operand::Imm(mismatch), Operand::Reg(C), MC),
            mv(vec![Slice::new(mu2, mu2_off, mu2_off + len)], MU2S),
            Instruction::TropMul { lhs: MC, rhs: MU2S, dst: B, mode: WriteMode::Direct },
            mv(vec![Slice::new(A, 0, len)], A_LO),
            mv(vec![Slice::new(A, 1, len + 1)], A_HI),
            ew_min(Operand::Reg(A_LO), Operand::Reg(B), T),
        ];
        if rising {
            m.configure_register(mu, k + 1)?;
            program.push(ew_min(Operand::Reg(T), Operand::Reg(A_HI), R));
            // boundary cells are k * sigma
            program.push(mv(
                vec![Slice::new(A, 0, 1), Slice::new(R, 0, len), Slice::new(A, k - 1, k)],
                mu,
            ));
        } else {
            m.configure_register(mu, len)?;
            program.push(ew_min(Operand::Reg(T), Operand::Reg(A_HI), mu));
        }
        for instr in &program {
            trace.push(m.execute(instr).map_err(|e| e.at_iteration(k))?);
        }
        (mu2, mu1, mu) = (mu1, mu, mu2);
    }

    let cost = m.read(mu1)?.as_slice()[0];
    Ok(AlignmentRun { cost, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(x: &str, y: &str, s: u64, mm: u64) -> (u64, TimeValue) {
        let p = AlignmentProblem::new(x, y, s, mm).unwrap();
        let cfg = MachineConfig::default().with_bits(8);
        (classical_nw(&p), temporal_nw(&p, &cfg).unwrap().cost)
    }

    #[test]
    fn small_cases() {
        assert_eq!(run("GA", "GA", 1, 1), (0, TimeValue::Finite(0)));
        assert_eq!(run("G", "A", 1, 1), (1, TimeValue::Finite(1)));
        assert_eq!(run("GAT", "GTT", 1, 1), (1, TimeValue::Finite(1)));
        assert_eq!(run("G", "A", 1, 3), (2, TimeValue::Finite(2)));
        let (classical, temporal) = run("GATTACA", "TACAGAT", 2, 3);
        assert_eq!(TimeValue::Finite(classical), temporal);
    }

    #[test]
    fn input_errors() {
        assert_eq!(AlignmentProblem::new("GX", "GA", 1, 1), Err(Error::InvalidAlphabet('X')));
        assert!(AlignmentProblem::new("GA", "G", 1, 1).is_err());
        assert!(AlignmentProblem::new("", "", 1, 1).is_err());
        assert!(AlignmentProblem::new("G", "G", 0, 1).is_err());
        let p = AlignmentProblem::new("GATTACA", "GATTACA", 3, 3).unwrap();
        // 8 * 3 = 24 fits five bits, but not four
        assert!(temporal_nw(&p, &MachineConfig::default()).is_ok());
        assert!(matches!(
            temporal_nw(&p, &MachineConfig::default().with_bits(4)),
            Err(Error::RangeViolation { .. })
        ));
    }

    #[test]
    fn trace_uses_tropmul_and_coincidence() {
        let p = AlignmentProblem::new("GAT", "GTT", 1, 1).unwrap();
        let r = temporal_nw(&p, &MachineConfig::default()).unwrap();
        use crate::machine::Opcode;
        let count = |op| r.trace.iter().filter(|t| t.instruction.opcode() == op).count();
        assert_eq!(count(Opcode::Tropmul), 5);
        assert_eq!(count(Opcode::Coincidence), 5);
    }
}
