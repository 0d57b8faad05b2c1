use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tropical::{TimeValue, TropicalMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: u64,
}

/// Weighted directed graph with named nodes, indexed by first appearance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    seen: HashSet<(usize, usize)>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from `(src, dst, weight)` triples.
    pub fn from_edges<'a, I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, u64)>,
    {
        let mut g = Graph::new();
        for (s, d, w) in edges {
            g.add_edge(s, d, w)?;
        }
        Ok(g)
    }

    /// Index of `name`, inserting it if new.
    pub fn add_node(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    /// Add a directed edge. Self-loops register their node but are otherwise dropped.
    pub fn add_edge(&mut self, src: &str, dst: &str, weight: u64) -> Result<()> {
        let s = self.add_node(src);
        let d = self.add_node(dst);
        if s == d {
            return Ok(());
        }
        if !self.seen.insert((s, d)) {
            return Err(Error::DuplicateEdge {
                src: src.to_string(),
                dst: dst.to_string(),
            });
        }
        self.edges.push(Edge { src: s, dst: d, weight });
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn node_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::NodeNotFound(name.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, src: usize, dst: usize) -> Option<u64> {
        self.edges
            .iter()
            .find(|e| e.src == src && e.dst == dst)
            .map(|e| e.weight)
    }

    /// Entry `(dst, src)` holds the weight of edge `src -> dst`, so a
    /// one-hot input at `i` selects the out-edges of node `i`.
    pub fn adjacency_matrix(&self) -> TropicalMatrix {
        let mut a = TropicalMatrix::infinite(self.node_count());
        for e in &self.edges {
            a.set(e.dst, e.src, TimeValue::Finite(e.weight));
        }
        a
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).max().unwrap_or(0)
    }
}
