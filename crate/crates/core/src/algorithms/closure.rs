use crate::error::{Error, Result};
use crate::machine::{Bank, Instruction, Machine, MachineConfig, Operand, Reg, TraceEntry, WriteMode};
use crate::tropical::{TimeValue, TropicalMatrix, Wavefront};

#[derive(Debug, Clone, PartialEq)]
pub struct ClosureRun {
    pub value: Wavefront,
    pub trace: Vec<TraceEntry>,
}

/// `x ⊕ A x ⊕ A^2 x ⊕ ... ⊕ A^hops x` by repeated VMM with a running min.
///
/// Evaluated as `y_k = x ⊕ A y_(k-1)`, which expands to the same sum while
/// keeping every intermediate at most the final distance.
pub fn closure(a: &TropicalMatrix, x: &Wavefront, hops: usize, config: &MachineConfig) -> Result<ClosureRun> {
    let n = a.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if n > config.width {
        return Err(Error::ExceedsWidth {
            size: n,
            width: config.width,
        });
    }
    let width = config.width;
    let mut m = Machine::new(config.clone().with_registers(config.registers.max(4)))?;
    let mut trace = vec![m.execute(&Instruction::ProgramMatrix {
        bank: Bank(0),
        matrix: a.padded(width),
    })?];

    let (x_reg, t) = (Reg(0), Reg(1));
    let mut padded = x.as_slice().to_vec();
    padded.resize(width, TimeValue::Infinity);
    m.load(x_reg, &Wavefront::new(padded))?;

    let (mut y, mut spare) = (x_reg, Reg(2));
    for hop in 1..=hops {
        let program = [
            Instruction::Vmm { bank: Bank(0), src: y, dst: t, mode: WriteMode::Direct },
            Instruction::EwMin { lhs: Operand::Reg(x_reg), rhs: Operand::Reg(t), dst: spare, mode: WriteMode::Direct },
        ];
        for instr in &program {
            trace.push(m.execute(instr).map_err(|e| e.at_iteration(hop))?);
        }
        y = spare;
        spare = if spare == Reg(2) { Reg(3) } else { Reg(2) };
    }
    let value = m.read(y)?.as_slice()[..n].iter().copied().collect();
    Ok(ClosureRun { value, trace })
}

/// Relax every edge until nothing changes.
pub fn minplus_bellman_ford(a: &TropicalMatrix, x: &Wavefront) -> Result<Wavefront> {
    let n = a.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let mut d: Vec<Option<u64>> = x.iter().map(|t| t.finite()).collect();
    loop {
        let mut changed = false;
        for j in 0..n {
            for i in 0..n {
                if let (Some(di), Some(w)) = (d[i], a.get(j, i).finite()) {
                    if d[j].map_or(true, |dj| di + w < dj) {
                        d[j] = Some(di + w);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(d.into_iter()
        .map(|t| t.map_or(TimeValue::Infinity, TimeValue::Finite))
        .collect())
}
