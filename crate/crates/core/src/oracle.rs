//! Exhaustive Kauffman-state enumeration, independent of the smoothing rewrites.
//!
//! Segment `k` of a component runs from position `k` to position `k + 1`. At an
//! occurrence the segment arriving is `L` and the one leaving is `R`. For the two
//! occurrences `p, q` of a crossing, the oriented smoothing joins `L(p)` with
//! `R(q)` and `L(q)` with `R(p)`; the unoriented one joins `L(p)` with `L(q)` and
//! `R(p)` with `R(q)`.

use std::collections::HashMap;

use thiserror::Error;

use crate::codec::{CrossingLabel, GaussCode};
use crate::engine::StateCode;
use crate::invariants::{report_from_state, InvariantError, InvariantReport};
use crate::smoothing::Circle;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{crossings} crossings exceed the exhaustive bound of {bound}")]
    BoundExceeded { crossings: usize, bound: usize },
    #[error("simple-and-bipartite verdict differs between maximal states")]
    InconsistentVerdict,
    #[error("no state passes the adequacy filter")]
    NoAdequateState,
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SmoothingChoice {
    Oriented,
    Unoriented,
}

/// One choice per crossing, in first-appearance order of the labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmoothingAssignment {
    choices: Vec<(CrossingLabel, SmoothingChoice)>,
}

impl SmoothingAssignment {
    pub fn new(choices: Vec<(CrossingLabel, SmoothingChoice)>) -> Self {
        SmoothingAssignment { choices }
    }

    pub fn uniform(g: &GaussCode, choice: SmoothingChoice) -> Self {
        SmoothingAssignment {
            choices: g.labels().into_iter().map(|l| (l, choice)).collect(),
        }
    }

    /// Bit `i` set means the `i`-th crossing is smoothed unoriented.
    pub fn from_mask(g: &GaussCode, mask: u64) -> Self {
        let choices = g
            .labels()
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                let c = if mask >> i & 1 == 1 {
                    SmoothingChoice::Unoriented
                } else {
                    SmoothingChoice::Oriented
                };
                (l, c)
            })
            .collect();
        SmoothingAssignment { choices }
    }

    pub fn choices(&self) -> &[(CrossingLabel, SmoothingChoice)] {
        &self.choices
    }

    pub fn get(&self, l: CrossingLabel) -> Option<SmoothingChoice> {
        self.choices.iter().find(|(x, _)| *x == l).map(|(_, c)| *c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub bound: usize,
    /// Skip states where some crossing touches one circle twice.
    pub adequate_only: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            bound: 16,
            adequate_only: false,
        }
    }
}

struct Tracer {
    segments: usize,
    labels: Vec<CrossingLabel>,
    /// per crossing (first-appearance order): L(p), R(p), L(q), R(q)
    darts: Vec<[usize; 4]>,
}

impl Tracer {
    fn new(g: &GaussCode) -> Self {
        let mut occ: HashMap<CrossingLabel, Vec<(usize, usize)>> = HashMap::new();
        let mut offset = 0;
        for comp in g.components() {
            let n = comp.len();
            for (k, &l) in comp.iter().enumerate() {
                let left = offset + (k + n - 1) % n;
                let right = offset + k;
                occ.entry(l).or_default().push((left, right));
            }
            offset += n;
        }
        let labels = g.labels();
        let darts = labels
            .iter()
            .map(|l| {
                let v = &occ[l];
                [v[0].0, v[0].1, v[1].0, v[1].1]
            })
            .collect();
        Tracer {
            segments: offset,
            labels,
            darts,
        }
    }

    fn resolve(&self, choose: impl Fn(usize) -> SmoothingChoice) -> UnionFind {
        let mut uf = UnionFind::new(self.segments);
        for (i, &[lp, rp, lq, rq]) in self.darts.iter().enumerate() {
            match choose(i) {
                SmoothingChoice::Oriented => {
                    uf.union(lp, rq);
                    uf.union(lq, rp);
                }
                SmoothingChoice::Unoriented => {
                    uf.union(lp, lq);
                    uf.union(rp, rq);
                }
            }
        }
        uf
    }

    fn mask_circles(&self, mask: u64) -> UnionFind {
        self.resolve(|i| choice_bit(mask, i))
    }

    /// The two arcs at crossing `i` after smoothing.
    fn arcs(&self, i: usize, choice: SmoothingChoice) -> (usize, usize) {
        let [lp, rp, lq, _] = self.darts[i];
        match choice {
            SmoothingChoice::Oriented => (lp, lq),
            SmoothingChoice::Unoriented => (lp, rp),
        }
    }

    fn adequate(&self, uf: &mut UnionFind, mask: u64) -> bool {
        (0..self.darts.len()).all(|i| {
            let (a, b) = self.arcs(i, choice_bit(mask, i));
            uf.find(a) != uf.find(b)
        })
    }

    /// State code listing each circle's incident crossings in label order.
    fn state_code(&self, uf: &mut UnionFind, mask: u64) -> StateCode {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut circles: Vec<Vec<CrossingLabel>> = Vec::new();
        for seg in 0..self.segments {
            let r = uf.find(seg);
            index.entry(r).or_insert_with(|| {
                circles.push(Vec::new());
                circles.len() - 1
            });
        }
        for (i, &l) in self.labels.iter().enumerate() {
            let (a, b) = self.arcs(i, choice_bit(mask, i));
            circles[index[&uf.find(a)]].push(l);
            circles[index[&uf.find(b)]].push(l);
        }
        StateCode::new(circles.into_iter().map(Circle::new).collect())
    }
}

fn choice_bit(mask: u64, i: usize) -> SmoothingChoice {
    if mask >> i & 1 == 1 {
        SmoothingChoice::Unoriented
    } else {
        SmoothingChoice::Oriented
    }
}

struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.sets -= 1;
        }
    }
}

/// Number of state circles of `g` under `a`; crossings missing from `a` are oriented.
pub fn count_circles(g: &GaussCode, a: &SmoothingAssignment) -> usize {
    let t = Tracer::new(g);
    let choices: Vec<SmoothingChoice> = t
        .labels
        .iter()
        .map(|l| a.get(*l).unwrap_or(SmoothingChoice::Oriented))
        .collect();
    t.resolve(|i| choices[i]).sets
}

fn check_bound(g: &GaussCode, bound: usize) -> Result<usize, OracleError> {
    let c = g.crossing_count();
    if c > bound || c > 63 {
        return Err(OracleError::BoundExceeded {
            crossings: c,
            bound,
        });
    }
    Ok(c)
}

fn maximizers(g: &GaussCode, config: &OracleConfig) -> Result<(usize, Vec<u64>), OracleError> {
    let c = check_bound(g, config.bound)?;
    let t = Tracer::new(g);
    let mut best = 0;
    let mut masks = Vec::new();
    for mask in 0..1u64 << c {
        let mut uf = t.mask_circles(mask);
        if config.adequate_only && !t.adequate(&mut uf, mask) {
            continue;
        }
        if uf.sets > best {
            best = uf.sets;
            masks.clear();
        }
        if uf.sets == best {
            masks.push(mask);
        }
    }
    if masks.is_empty() {
        return Err(OracleError::NoAdequateState);
    }
    Ok((best, masks))
}

/// Maximum circle count over all `2^c` states, with every maximizing assignment.
pub fn brute_force_max_circles(
    g: &GaussCode,
    config: &OracleConfig,
) -> Result<(usize, Vec<SmoothingAssignment>), OracleError> {
    let (best, masks) = maximizers(g, config)?;
    Ok((
        best,
        masks
            .into_iter()
            .map(|m| SmoothingAssignment::from_mask(g, m))
            .collect(),
    ))
}

/// State codes of every maximal state.
pub fn maximal_state_codes(
    g: &GaussCode,
    config: &OracleConfig,
) -> Result<Vec<StateCode>, OracleError> {
    let (_, masks) = maximizers(g, config)?;
    let t = Tracer::new(g);
    Ok(masks
        .into_iter()
        .map(|m| {
            let mut uf = t.mask_circles(m);
            t.state_code(&mut uf, m)
        })
        .collect())
}

/// Invariants from exhaustive search; errors if maximal states disagree on the
/// simple-and-bipartite verdict.
pub fn brute_force_invariants(
    g: &GaussCode,
    config: &OracleConfig,
) -> Result<InvariantReport, OracleError> {
    let c = g.crossing_count();
    let mut reports = maximal_state_codes(g, config)?
        .into_iter()
        .map(|s| report_from_state(c, s))
        .collect::<Result<Vec<_>, _>>()?;
    let first = reports.remove(0);
    let verdict = first.simple && first.bipartite;
    if reports.iter().any(|r| (r.simple && r.bipartite) != verdict) {
        return Err(OracleError::InconsistentVerdict);
    }
    Ok(first)
}
