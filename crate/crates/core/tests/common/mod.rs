#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::Rng;
use racelogic::algorithms::Graph;
use racelogic::lang::{BinOp, Bindings, Expr};
use racelogic::{TimeValue, Wavefront};

/// G(n, p) digraph with uniform integer weights in `1..=max_weight`.
pub fn random_graph(rng: &mut StdRng, n: usize, p: f64, max_weight: u64) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        g.add_node(&format!("n{i}"));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(p) {
                g.add_edge(&format!("n{i}"), &format!("n{j}"), rng.gen_range(1..=max_weight))
                    .unwrap();
            }
        }
    }
    g
}

pub fn random_time(rng: &mut StdRng, max: u64, p_inf: f64) -> TimeValue {
    if rng.gen_bool(p_inf) {
        TimeValue::Infinity
    } else {
        TimeValue::Finite(rng.gen_range(0..=max))
    }
}

pub fn random_wavefront(rng: &mut StdRng, len: usize, max: u64, p_inf: f64) -> Wavefront {
    (0..len).map(|_| random_time(rng, max, p_inf)).collect()
}

pub fn random_expr(rng: &mut StdRng, depth: usize, vars: &[&str]) -> Expr {
    if depth <= 1 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) {
            Expr::var(vars[rng.gen_range(0..vars.len())])
        } else {
            Expr::Const(random_time(rng, 7, 0.1))
        };
    }
    let op = [BinOp::Add, BinOp::Max, BinOp::Mul, BinOp::Inhibit][rng.gen_range(0..4)];
    Expr::binary(op, random_expr(rng, depth - 1, vars), random_expr(rng, depth - 1, vars))
}

pub fn random_bindings(rng: &mut StdRng, vars: &[&str], width: usize) -> Bindings {
    let map: BTreeMap<String, Wavefront> = vars
        .iter()
        .map(|v| (v.to_string(), random_wavefront(rng, width, 7, 0.2)))
        .collect();
    Bindings::new(map).unwrap()
}

pub fn random_dna(rng: &mut StdRng, n: usize) -> String {
    (0..n).map(|_| ['G', 'A', 'T', 'C'][rng.gen_range(0..4)]).collect()
}

/// Every tick value 0..=7 plus infinity.
pub fn small_grid() -> Vec<TimeValue> {
    (0..=7).map(TimeValue::Finite).chain([TimeValue::Infinity]).collect()
}
