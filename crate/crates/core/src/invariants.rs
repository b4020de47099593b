//! State graphs and the genus / crosscap computation.

use std::collections::HashMap;

use thiserror::Error;

use crate::codec::{CrossingLabel, GaussCode};
use crate::engine::{minimal_genus_states_with, EngineConfig, EngineError, StateCode};
use crate::smoothing::SmoothingError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("crossing number {0} is below 2")]
    TooFewCrossings(usize),
    #[error(transparent)]
    Conservation(#[from] SmoothingError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// One vertex per circle, one edge per crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateGraph {
    pub vertex_count: usize,
    /// `(u, v, crossing)` with `u <= v`; `u == v` is a loop.
    pub edges: Vec<(usize, usize, CrossingLabel)>,
}

impl StateGraph {
    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v, _)| u == v).count()
    }
}

pub fn build_state_graph(x: &StateCode) -> Result<StateGraph, InvariantError> {
    x.check_conservation()?;
    let mut seen: HashMap<CrossingLabel, usize> = HashMap::new();
    let mut edges = Vec::new();
    for (i, circle) in x.circles().iter().enumerate() {
        for &l in circle.labels() {
            if let Some(j) = seen.remove(&l) {
                edges.push((j.min(i), j.max(i), l));
            } else {
                seen.insert(l, i);
            }
        }
    }
    edges.sort_by_key(|e| e.2);
    Ok(StateGraph {
        vertex_count: x.len(),
        edges,
    })
}

/// No loops and no two tuples sharing more than one label.
pub fn is_simple(x: &StateCode) -> bool {
    let Ok(graph) = build_state_graph(x) else {
        return false;
    };
    graph_is_simple(&graph)
}

pub fn graph_is_simple(graph: &StateGraph) -> bool {
    let mut pairs = std::collections::HashSet::new();
    graph
        .edges
        .iter()
        .all(|&(u, v, _)| u != v && pairs.insert((u, v)))
}

/// Two-colorability of the state graph; loops force `false`.
pub fn is_bipartite(x: &StateCode) -> bool {
    let Ok(graph) = build_state_graph(x) else {
        return false;
    };
    graph_is_bipartite(&graph)
}

pub fn graph_is_bipartite(graph: &StateGraph) -> bool {
    let n = graph.vertex_count;
    let mut adj = vec![Vec::new(); n];
    for &(u, v, _) in &graph.edges {
        if u == v {
            return false;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(false);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].expect("colored on enqueue");
            for &v in &adj[u] {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Partition phrasing: the tuples split into two classes so that every
/// crossing occurs exactly once in each class. Decided with a parity
/// union-find rather than a traversal.
pub fn is_bipartite_by_partition(x: &StateCode) -> bool {
    if x.check_conservation().is_err() {
        return false;
    }
    let n = x.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity = vec![false; n];

    fn find(parent: &mut [usize], parity: &mut [bool], i: usize) -> (usize, bool) {
        if parent[i] == i {
            return (i, false);
        }
        let (root, p) = find(parent, parity, parent[i]);
        parent[i] = root;
        parity[i] ^= p;
        (root, parity[i])
    }

    let mut first: HashMap<CrossingLabel, usize> = HashMap::new();
    for (i, c) in x.circles().iter().enumerate() {
        for &l in c.labels() {
            let Some(j) = first.remove(&l) else {
                first.insert(l, i);
                continue;
            };
            // the two tuples holding l must land in different classes
            let (ri, pi) = find(&mut parent, &mut parity, i);
            let (rj, pj) = find(&mut parent, &mut parity, j);
            if ri == rj {
                if pi == pj {
                    return false;
                }
            } else {
                parent[ri] = rj;
                parity[ri] = pi ^ pj ^ true;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub crossing_count: usize,
    pub circle_count: usize,
    pub unoriented_genus: usize,
    pub crosscap: usize,
    pub bipartite: bool,
    pub simple: bool,
    pub witness: StateCode,
}

/// Builds the report from a maximal state. `c == 2` is the Hopf link.
pub fn report_from_state(c: usize, witness: StateCode) -> Result<InvariantReport, InvariantError> {
    if c < 2 {
        return Err(InvariantError::TooFewCrossings(c));
    }
    let graph = build_state_graph(&witness)?;
    let s = witness.len();
    let simple = graph_is_simple(&graph);
    let bipartite = graph_is_bipartite(&graph);
    let genus = 1 + c - s;
    let crosscap = if c == 2 {
        2
    } else if simple && bipartite {
        genus + 1
    } else {
        genus
    };
    Ok(InvariantReport {
        crossing_count: c,
        circle_count: s,
        unoriented_genus: if c == 2 { 1 } else { genus },
        crosscap,
        bipartite,
        simple,
        witness,
    })
}

/// Precondition (not checked): `g` is a reduced prime alternating diagram.
pub fn compute_invariants(g: &GaussCode) -> Result<InvariantReport, InvariantError> {
    compute_invariants_with(
        g,
        &EngineConfig {
            best_only: true,
            ..EngineConfig::default()
        },
    )
}

pub fn compute_invariants_with(
    g: &GaussCode,
    config: &EngineConfig,
) -> Result<InvariantReport, InvariantError> {
    let c = g.crossing_count();
    if c < 2 {
        return Err(InvariantError::TooFewCrossings(c));
    }
    let best = minimal_genus_states_with(g, config)?.best;
    report_from_state(c, best)
}
