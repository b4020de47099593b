//! Depth-first driver of the minimal genus algorithm.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::codec::{self, CodecError, CrossingLabel, Cursor, GaussCode};
use crate::smoothing::{
    detect_smallest_mgon, harvest_closed_components, smooth_anti_triangle, smooth_bigon,
    smooth_one_gon, smooth_triangle, Circle, GaussStateCode, MgonFinding, SmoothingError,
};

/// A terminal state: one tuple per state circle, in discovery order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StateCode {
    circles: Vec<Circle>,
}

impl StateCode {
    pub fn new(circles: Vec<Circle>) -> Self {
        StateCode { circles }
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    /// Every label must appear exactly twice across all tuples.
    pub fn check_conservation(&self) -> Result<(), SmoothingError> {
        let mut counts: HashMap<CrossingLabel, usize> = HashMap::new();
        for &l in self.circles.iter().flat_map(|c| c.labels()) {
            *counts.entry(l).or_default() += 1;
        }
        let mut bad: Vec<_> = counts.into_iter().filter(|&(_, n)| n != 2).collect();
        bad.sort();
        match bad.first() {
            Some(&(l, n)) => Err(SmoothingError::Conservation {
                label: l.get(),
                count: n,
            }),
            None => Ok(()),
        }
    }

    /// Same tuples in the same order, each up to rotation and reversal.
    pub fn equivalent(&self, other: &StateCode) -> bool {
        self.len() == other.len()
            && self
                .circles
                .iter()
                .zip(&other.circles)
                .all(|(a, b)| a.equivalent(b))
    }
}

impl fmt::Display for StateCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.circles.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for StateCode {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        cur.expect(b'[')?;
        let mut circles = Vec::new();
        if !cur.eat(b']') {
            loop {
                circles.push(Circle::new(codec::parse_word(&mut cur, b'(', b')')?));
                if !cur.eat(b',') {
                    break;
                }
            }
            cur.expect(b']')?;
        }
        cur.finish()?;
        Ok(StateCode { circles })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("no m-gon with m <= 3 in {0} (input is not a realizable alternating diagram)")]
    NoMgon(String),
    #[error("node budget of {0} exceeded")]
    Budget(usize),
    #[error(transparent)]
    Smoothing(#[from] SmoothingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub node_budget: usize,
    /// Keep only the best leaf instead of the full leaf list.
    pub best_only: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            node_budget: 1_000_000,
            best_only: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchResult {
    /// Leaves in depth-first order; empty in best-only mode.
    pub all_leaves: Vec<StateCode>,
    /// First leaf (in DFS order) with the most circles.
    pub best: StateCode,
    /// Number of leaves reached.
    pub branch_count: usize,
    pub nodes: usize,
    /// Largest number of triangle events on a root-leaf path.
    pub max_triangle_depth: usize,
}

pub fn minimal_genus_states(g: &GaussCode) -> Result<BranchResult, EngineError> {
    explore(g, &EngineConfig::default(), |_, _| {})
}

pub fn minimal_genus_states_with(
    g: &GaussCode,
    config: &EngineConfig,
) -> Result<BranchResult, EngineError> {
    explore(g, config, |_, _| {})
}

pub fn optimal_state(g: &GaussCode) -> Result<StateCode, EngineError> {
    let cfg = EngineConfig {
        best_only: true,
        ..EngineConfig::default()
    };
    Ok(minimal_genus_states_with(g, &cfg)?.best)
}

/// Runs the search, calling `visit` on every node after harvesting together
/// with the m-gon found there (`None` at leaves).
pub fn explore<F>(
    g: &GaussCode,
    config: &EngineConfig,
    mut visit: F,
) -> Result<BranchResult, EngineError>
where
    F: FnMut(&GaussStateCode, Option<&MgonFinding>),
{
    let mut stack = vec![(GaussStateCode::from_gauss(g), 0usize)];
    let mut leaves = Vec::new();
    let mut best: Option<StateCode> = None;
    let mut branch_count = 0;
    let mut nodes = 0;
    let mut max_depth = 0;

    while let Some((state, depth)) = stack.pop() {
        nodes += 1;
        if nodes > config.node_budget {
            return Err(EngineError::Budget(config.node_budget));
        }
        let state = harvest_closed_components(&state);
        if state.gauss().is_empty() {
            visit(&state, None);
            let leaf = StateCode::new(state.into_circles());
            branch_count += 1;
            max_depth = max_depth.max(depth);
            if best.as_ref().is_none_or(|b| leaf.len() > b.len()) {
                best = Some(leaf.clone());
            }
            if !config.best_only {
                leaves.push(leaf);
            }
            continue;
        }
        let finding =
            detect_smallest_mgon(&state).ok_or_else(|| EngineError::NoMgon(state.to_string()))?;
        visit(&state, Some(&finding));
        match finding {
            MgonFinding::OneGon { .. } => stack.push((smooth_one_gon(&state, &finding)?, depth)),
            MgonFinding::Bigon { .. } => stack.push((smooth_bigon(&state, &finding)?, depth)),
            MgonFinding::Triangle { .. } => {
                stack.push((smooth_anti_triangle(&state, &finding)?, depth + 1));
                stack.push((smooth_triangle(&state, &finding)?, depth + 1));
            }
        }
    }
    Ok(BranchResult {
        all_leaves: leaves,
        best: best.expect("the root always yields a leaf"),
        branch_count,
        nodes,
        max_triangle_depth: max_depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> GaussCode {
        s.parse().unwrap()
    }

    #[test]
    fn trefoil_best_state() {
        let r = minimal_genus_states(&code("[[1,2,3,1,2,3]]")).unwrap();
        assert_eq!(r.best.to_string(), "[(1,2),(1,3),(3,2)]");
        assert_eq!(r.branch_count, 1);
    }

    #[test]
    fn single_crossing_word() {
        let s = optimal_state(&code("[[1,1]]")).unwrap();
        assert_eq!(s.to_string(), "[(1),(1)]");
    }

    #[test]
    fn figure_eight_and_whitehead() {
        assert_eq!(
            optimal_state(&code("[[1,2,3,1,4,3,2,4]]")).unwrap().len(),
            3
        );
        assert_eq!(
            optimal_state(&code("[[1,2,3,4,2,5],[3,5,1,4]]"))
                .unwrap()
                .len(),
            4
        );
    }

    #[test]
    fn eight_eighteen_branches() {
        let r = minimal_genus_states(&code("[[1,2,3,4,5,6,2,7,4,8,6,1,7,3,8,5]]")).unwrap();
        assert!(r.branch_count >= 2);
        assert!(r.branch_count <= 1 << r.max_triangle_depth);
        assert_eq!(r.all_leaves.len(), r.branch_count);
        let max = r.all_leaves.iter().map(StateCode::len).max().unwrap();
        assert_eq!(r.best.len(), max);
        for leaf in &r.all_leaves {
            leaf.check_conservation().unwrap();
        }
    }

    #[test]
    fn best_only_matches_full() {
        let g = code("[[1,2,3,4,5,6,2,7,4,8,6,1,7,3,8,5]]");
        let full = minimal_genus_states(&g).unwrap();
        let lean = minimal_genus_states_with(
            &g,
            &EngineConfig {
                best_only: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(full.best, lean.best);
        assert!(lean.all_leaves.is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = EngineConfig {
            node_budget: 1,
            best_only: false,
        };
        assert_eq!(
            minimal_genus_states_with(&code("[[1,2,3,1,2,3]]"), &cfg),
            Err(EngineError::Budget(1))
        );
    }

    #[test]
    fn non_realizable_word_errors() {
        // an Euler circuit of K4,4: no loops, no parallel edges, no odd cycles
        let r = minimal_genus_states(&code("[[1,5,2,6,1,7,2,8,3,5,4,6,3,7,4,8]]"));
        assert!(matches!(r, Err(EngineError::NoMgon(_))));
    }

    #[test]
    fn state_code_text() {
        let s: StateCode = "[(1,2),(1,3),(3,2)]".parse().unwrap();
        assert_eq!(s.to_string(), "[(1,2),(1,3),(3,2)]");
        assert!(s.equivalent(&"[(2,1),(3,1),(2,3)]".parse().unwrap()));
        assert!("[(1,2),(1)]"
            .parse::<StateCode>()
            .unwrap()
            .check_conservation()
            .is_err());
    }
}
