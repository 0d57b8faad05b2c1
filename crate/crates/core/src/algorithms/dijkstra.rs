use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::{Bank, Instruction, Machine, MachineConfig, Operand, Reg, TraceEntry, WriteMode};
use crate::tropical::{self, TieMode, TimeValue, TropicalMatrix, Wavefront};

use super::graph::Graph;

/// How newly found paths are masked before they update the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskVariant {
    /// `f = d -| (v -| e)`: edges into visited nodes are blocked.
    #[default]
    Amended,
    /// `f = d -| e`. An edge into an already visited node overwrites that
    /// node's parent, which corrupts the tree on some graphs.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DijkstraOptions {
    pub variant: MaskVariant,
    pub config: MachineConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DijkstraResult {
    /// Row `j` holds at most one finite entry, at the column of `j`'s parent,
    /// equal to the weight of that tree edge.
    pub parent_matrix: TropicalMatrix,
    pub visit_order: Vec<usize>,
    /// Constant emitted by the projective update of `d`, one per iteration.
    pub norm_constants: Vec<TimeValue>,
    pub distances: Vec<TimeValue>,
}

impl DijkstraResult {
    pub fn parent(&self, node: usize) -> Option<usize> {
        tree_parent(&self.parent_matrix, node)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DijkstraRun {
    pub result: DijkstraResult,
    pub trace: Vec<TraceEntry>,
    /// `min(d)` after each projective update; always 0 or inf.
    pub frontier_minima: Vec<TimeValue>,
}

// register map
const D: Reg = Reg(0);
const N: Reg = Reg(1);
const E: Reg = Reg(2);
const F: Reg = Reg(3);
const D_NEXT: Reg = Reg(4);
const F_STAR: Reg = Reg(5);
const A: Bank = Bank(0);
const P: Bank = Bank(1);

fn inhibit(inhibitor: Reg, data: Reg, dst: Reg, mode: WriteMode) -> Instruction {
    Instruction::EwInhibit {
        inhibitor: inhibitor.into(),
        data: data.into(),
        dst,
        mode,
        tie: TieMode::StrictBlock,
    }
}

fn min(lhs: Reg, rhs: Reg, dst: Reg) -> Instruction {
    Instruction::EwMin {
        lhs: Operand::Reg(lhs),
        rhs: Operand::Reg(rhs),
        dst,
        mode: WriteMode::Direct,
    }
}

/// Shortest-path tree from `source`, computed entirely with wavefront
/// operations on a state machine.
///
/// The graph is padded to the machine width. Each iteration picks the
/// nearest unvisited node, relaxes its out-edges with one VMM, and stores
/// the unvisited distances projectively so every value stays relative to
/// the node being visited. Absolute distances are rebuilt from the emitted
/// norm constants.
pub fn temporal_dijkstra(g: &Graph, source: &str, opts: &DijkstraOptions) -> Result<DijkstraRun> {
    let s = g.node_index(source)?;
    let n = g.node_count();
    let width = opts.config.width;
    if n > width {
        return Err(Error::ExceedsWidth { size: n, width });
    }
    let config = opts.config.clone().with_registers(opts.config.registers.max(8));
    let mut m = Machine::new(config)?;
    if m.config().banks < 2 {
        return Err(Error::InvalidArgument("temporal Dijkstra needs two matrix banks".into()));
    }

    let mut trace = Vec::new();
    trace.push(m.execute(&Instruction::ProgramMatrix {
        bank: A,
        matrix: g.adjacency_matrix().padded(width),
    })?);
    m.load(D, &Wavefront::one_hot(width, s))?;
    // v and the scratch register swap roles every iteration
    let (mut v, mut scratch) = (Reg(6), Reg(7));
    m.load(v, &Wavefront::infinite(width))?;

    let mut visit_order = Vec::new();
    let mut norm_constants = Vec::new();
    let mut frontier_minima = Vec::new();
    let mut iteration = 0;
    while m.halt_test(D)? {
        iteration += 1;
        let mut step = |m: &mut Machine, i: Instruction| -> Result<TraceEntry> {
            let entry = m.execute(&i).map_err(|e| e.at_iteration(iteration))?;
            trace.push(entry.clone());
            Ok(entry)
        };
        step(&mut m, Instruction::Argmin { src: D, dst: N, mode: WriteMode::Direct })?;
        step(&mut m, Instruction::Vmm { bank: A, src: N, dst: E, mode: WriteMode::Direct })?;
        match opts.variant {
            MaskVariant::Amended => {
                step(&mut m, inhibit(v, E, scratch, WriteMode::Direct))?;
                step(&mut m, inhibit(D, scratch, F, WriteMode::Direct))?;
            }
            MaskVariant::Literal => {
                step(&mut m, inhibit(D, E, F, WriteMode::Direct))?;
            }
        }
        step(&mut m, min(v, N, scratch))?;
        std::mem::swap(&mut v, &mut scratch);
        step(&mut m, min(D, F, D_NEXT))?;
        let update = step(&mut m, inhibit(v, D_NEXT, D, WriteMode::Projective))?;
        norm_constants.push(update.norm_constant.unwrap_or(TimeValue::ZERO));
        step(
            &mut m,
            Instruction::Binarize { src: F, dst: F_STAR, t_max: None, mode: WriteMode::Projective },
        )?;
        step(&mut m, Instruction::InhibitRows { bank: P, mask: F_STAR })?;
        step(&mut m, Instruction::WriteColumn { bank: P, select: N, src: F })?;

        let visited = m
            .read(N)?
            .finite_indices()
            .next()
            .expect("argmin of a wavefront with a finite element is one-hot");
        visit_order.push(visited);
        frontier_minima.push(tropical::min_reduce(m.read(D)?));
    }

    let distances = recover_distances(n, &visit_order, &norm_constants);
    Ok(DijkstraRun {
        result: DijkstraResult {
            parent_matrix: m.bank(P)?.entries().truncated(n),
            visit_order,
            norm_constants,
            distances,
        },
        trace,
        frontier_minima,
    })
}

/// Absolute distances from the visit order and the per-iteration norm
/// constants: the node visited in iteration `k` sits at the sum of the
/// constants emitted before it.
pub fn recover_distances(n: usize, visit_order: &[usize], norm_constants: &[TimeValue]) -> Vec<TimeValue> {
    let mut dist = vec![TimeValue::Infinity; n];
    let mut elapsed = 0u64;
    for (k, &node) in visit_order.iter().enumerate() {
        if node < n {
            dist[node] = TimeValue::Finite(elapsed);
        }
        if let Some(TimeValue::Finite(c)) = norm_constants.get(k) {
            elapsed += c;
        }
    }
    dist
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortestPaths {
    pub distances: Vec<TimeValue>,
    pub parents: Vec<Option<usize>>,
}

/// Textbook binary-heap Dijkstra.
pub fn classical_dijkstra(g: &Graph, source: &str) -> Result<ShortestPaths> {
    let s = g.node_index(source)?;
    let n = g.node_count();
    let mut out: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for e in g.edges() {
        out[e.src].push((e.dst, e.weight));
    }
    let mut dist: Vec<Option<u64>> = vec![None; n];
    let mut parents = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(0);
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, w) in &out[u] {
            let cand = d + w;
            if dist[v].map_or(true, |old| cand < old) {
                dist[v] = Some(cand);
                parents[v] = Some(u);
                heap.push(Reverse((cand, v)));
            }
        }
    }
    Ok(ShortestPaths {
        distances: dist
            .into_iter()
            .map(|d| d.map_or(TimeValue::Infinity, TimeValue::Finite))
            .collect(),
        parents,
    })
}

/// Column of the single finite entry in row `node`, if any.
pub fn tree_parent(p: &TropicalMatrix, node: usize) -> Option<usize> {
    p.row(node).finite_indices().next()
}

/// Sum of tree-edge weights from the root down to `node`, following the
/// parent matrix. `None` if the walk hits a cycle.
pub fn tree_path_sum(p: &TropicalMatrix, node: usize) -> Option<u64> {
    let mut sum = 0u64;
    let mut cur = node;
    for _ in 0..=p.n() {
        match tree_parent(p, cur) {
            None => return Some(sum),
            Some(parent) => {
                sum += p.get(cur, parent).finite()?;
                cur = parent;
            }
        }
    }
    None
}

/// Check that `p` encodes a shortest-path tree of `g` rooted at `source`
/// whose path sums equal `distances`.
pub fn validate_shortest_path_tree(
    g: &Graph,
    source: usize,
    p: &TropicalMatrix,
    distances: &[TimeValue],
) -> std::result::Result<(), String> {
    let n = g.node_count();
    if p.n() != n || distances.len() != n {
        return Err(format!("expected {n} nodes, got matrix {} and {} distances", p.n(), distances.len()));
    }
    for j in 0..n {
        let row = p.row(j);
        let finite: Vec<usize> = row.finite_indices().collect();
        let reachable = distances[j].is_finite();
        if finite.len() > 1 {
            return Err(format!("node {} has {} parents", g.name(j), finite.len()));
        }
        if j == source || !reachable {
            if !finite.is_empty() {
                return Err(format!("node {} should have no parent", g.name(j)));
            }
            continue;
        }
        let Some(&i) = finite.first() else {
            return Err(format!("reachable node {} has no parent", g.name(j)));
        };
        let w = p.get(j, i).finite().unwrap_or(u64::MAX);
        if g.weight(i, j) != Some(w) {
            return Err(format!("tree edge {}->{} weight {w} is not a graph edge", g.name(i), g.name(j)));
        }
        match tree_path_sum(p, j) {
            Some(sum) if TimeValue::Finite(sum) == distances[j] => {}
            Some(sum) => {
                return Err(format!("path sum to {} is {sum}, distance is {}", g.name(j), distances[j]));
            }
            None => return Err(format!("parent chain from {} loops", g.name(j))),
        }
    }
    if distances.get(source) != Some(&TimeValue::ZERO) {
        return Err("source distance must be 0".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Graph {
        let mut g = Graph::new();
        for n in ["a", "b", "c", "d"] {
            g.add_node(n);
        }
        for (s, d, w) in [("a", "b", 2), ("b", "d", 4), ("b", "c", 2), ("c", "a", 1), ("c", "d", 1)] {
            g.add_edge(s, d, w).unwrap();
        }
        g
    }

    fn ticks(v: &[Option<u64>]) -> Vec<TimeValue> {
        v.iter().map(|t| t.map_or(TimeValue::Infinity, TimeValue::Finite)).collect()
    }

    #[test]
    fn example_from_a() {
        let g = example();
        let run = temporal_dijkstra(&g, "a", &DijkstraOptions::default()).unwrap();
        let r = &run.result;
        assert_eq!(r.distances, ticks(&[Some(0), Some(2), Some(4), Some(5)]));
        assert_eq!(r.visit_order, [0, 1, 2, 3]);
        assert!(run.frontier_minima.iter().all(|t| *t == TimeValue::ZERO || t.is_infinite()));
        assert_eq!(&r.norm_constants[..3], &[2u64, 2, 1].map(TimeValue::Finite));
        assert_eq!((r.parent(1), r.parent(2), r.parent(3)), (Some(0), Some(1), Some(2)));
        assert_eq!(r.parent_matrix.get(3, 2), TimeValue::Finite(1));
        validate_shortest_path_tree(&g, 0, &r.parent_matrix, &r.distances).unwrap();
        assert_eq!(classical_dijkstra(&g, "a").unwrap().distances, r.distances);
    }

    #[test]
    fn example_from_d_and_b() {
        let g = example();
        let r = temporal_dijkstra(&g, "d", &DijkstraOptions::default()).unwrap().result;
        assert_eq!(r.distances, ticks(&[None, None, None, Some(0)]));
        assert_eq!(r.parent_matrix, TropicalMatrix::infinite(4));

        let r = temporal_dijkstra(&g, "b", &DijkstraOptions::default()).unwrap().result;
        assert_eq!(r.distances, ticks(&[Some(3), Some(0), Some(2), Some(3)]));
        assert_eq!(classical_dijkstra(&g, "b").unwrap().distances, r.distances);
        validate_shortest_path_tree(&g, 1, &r.parent_matrix, &r.distances).unwrap();
    }

    #[test]
    fn recover() {
        let c = [2u64, 2, 1, 0].map(TimeValue::Finite);
        assert_eq!(recover_distances(4, &[0, 1, 2, 3], &c), ticks(&[Some(0), Some(2), Some(4), Some(5)]));
        assert_eq!(recover_distances(1, &[0], &[TimeValue::ZERO]), ticks(&[Some(0)]));
        assert_eq!(recover_distances(3, &[1], &[TimeValue::ZERO]), ticks(&[None, Some(0), None]));
    }

    #[test]
    fn literal_mask_corrupts_tree() {
        let g = Graph::from_edges([("a", "b", 1), ("a", "c", 10), ("c", "b", 1)]).unwrap();
        let good = temporal_dijkstra(&g, "a", &DijkstraOptions::default()).unwrap().result;
        assert_eq!(good.parent(1), Some(0));
        assert_eq!(tree_path_sum(&good.parent_matrix, 1), Some(1));

        let opts = DijkstraOptions { variant: MaskVariant::Literal, ..Default::default() };
        let bad = temporal_dijkstra(&g, "a", &opts).unwrap().result;
        assert_eq!(bad.parent(1), Some(2));
        assert_eq!(tree_path_sum(&bad.parent_matrix, 1), Some(11));
        assert_eq!(bad.distances, good.distances);
        assert!(validate_shortest_path_tree(&g, 0, &bad.parent_matrix, &bad.distances).is_err());
    }

    #[test]
    fn errors() {
        let g = example();
        assert_eq!(
            temporal_dijkstra(&g, "z", &DijkstraOptions::default()).unwrap_err(),
            Error::NodeNotFound("z".into())
        );
        let small = DijkstraOptions { config: MachineConfig::default().with_width(3), ..Default::default() };
        assert_eq!(
            temporal_dijkstra(&g, "a", &small).unwrap_err(),
            Error::ExceedsWidth { size: 4, width: 3 }
        );
        let heavy = Graph::from_edges([("a", "b", 8)]).unwrap();
        let three_bits = DijkstraOptions { config: MachineConfig::default().with_bits(3), ..Default::default() };
        assert!(matches!(
            temporal_dijkstra(&heavy, "a", &three_bits).unwrap_err(),
            Error::RangeViolation { .. }
        ));
    }

    #[test]
    fn long_path_fits_in_three_bits() {
        // diameter 20 > t_max = 7, yet every stored value stays relative
        let names: Vec<String> = (0..6).map(|i| format!("n{i}")).collect();
        let mut g = Graph::new();
        for w in names.windows(2) {
            g.add_edge(&w[0], &w[1], 4).unwrap();
        }
        let opts = DijkstraOptions { config: MachineConfig::default().with_bits(3), ..Default::default() };
        let r = temporal_dijkstra(&g, "n0", &opts).unwrap().result;
        assert_eq!(r.distances[5], TimeValue::Finite(20));
    }
}
