//! Gauss-state codes, m-gon detection and the smoothing rewrites.
//!
//! Smoothed crossings stay in the near-Gauss code as arc markers. An *edge* is a
//! pair of cyclically consecutive unsmoothed occurrences in one component; the
//! smoothed markers between them form its segment.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::codec::{self, CodecError, CrossingLabel, Cursor, GaussCode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SmoothingError {
    #[error("finding does not match the Gauss-state code")]
    Stale,
    #[error("{0} walk did not close cleanly")]
    Walk(&'static str),
    #[error("label {label} occurs {count} time(s) across gauss and circles")]
    Conservation { label: u32, count: usize },
    #[error("smoothed flags are inconsistent for label {0}")]
    SmoothedFlag(u32),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// One state circle, stored in construction order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circle(Vec<CrossingLabel>);

impl Circle {
    pub fn new(labels: Vec<CrossingLabel>) -> Self {
        Circle(labels)
    }

    pub fn labels(&self) -> &[CrossingLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Equality up to cyclic rotation and reversal.
    pub fn equivalent(&self, other: &Circle) -> bool {
        let (a, b) = (&self.0, &other.0);
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let n = a.len();
        (0..n).any(|r| {
            (0..n).all(|i| a[i] == b[(i + r) % n]) || (0..n).all(|i| a[i] == b[(r + n - i) % n])
        })
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        codec::write_word(f, "(", &self.0, ")")
    }
}

impl FromStr for Circle {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let w = codec::parse_word(&mut cur, b'(', b')')?;
        cur.finish()?;
        Ok(Circle(w))
    }
}

/// The working triple: near-Gauss code, circles found so far, smoothed crossings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussStateCode {
    gauss: Vec<Vec<CrossingLabel>>,
    circles: Vec<Circle>,
    smoothed: BTreeSet<CrossingLabel>,
}

impl GaussStateCode {
    pub fn new(
        gauss: Vec<Vec<CrossingLabel>>,
        circles: Vec<Circle>,
        smoothed: BTreeSet<CrossingLabel>,
    ) -> Result<Self, SmoothingError> {
        let g = GaussStateCode {
            gauss,
            circles,
            smoothed,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn from_gauss(code: &GaussCode) -> Self {
        GaussStateCode {
            gauss: code.components().to_vec(),
            circles: Vec::new(),
            smoothed: BTreeSet::new(),
        }
    }

    pub fn gauss(&self) -> &[Vec<CrossingLabel>] {
        &self.gauss
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn smoothed(&self) -> &BTreeSet<CrossingLabel> {
        &self.smoothed
    }

    pub fn into_circles(self) -> Vec<Circle> {
        self.circles
    }

    pub fn is_smoothed(&self, l: CrossingLabel) -> bool {
        self.smoothed.contains(&l)
    }

    pub fn unsmoothed_count(&self) -> usize {
        self.gauss
            .iter()
            .flatten()
            .filter(|l| !self.is_smoothed(**l))
            .count()
            / 2
    }

    /// Checks the twice-per-label conservation law and smoothed-flag consistency.
    pub fn validate(&self) -> Result<(), SmoothingError> {
        let mut in_gauss: HashMap<CrossingLabel, usize> = HashMap::new();
        let mut in_circles: HashMap<CrossingLabel, usize> = HashMap::new();
        for &l in self.gauss.iter().flatten() {
            *in_gauss.entry(l).or_default() += 1;
        }
        for &l in self.circles.iter().flat_map(|c| c.0.iter()) {
            *in_circles.entry(l).or_default() += 1;
        }
        let mut labels: BTreeSet<CrossingLabel> = in_gauss.keys().copied().collect();
        labels.extend(in_circles.keys().copied());
        labels.extend(self.smoothed.iter().copied());
        for l in labels {
            let g = in_gauss.get(&l).copied().unwrap_or(0);
            let c = in_circles.get(&l).copied().unwrap_or(0);
            if g + c != 2 {
                return Err(SmoothingError::Conservation {
                    label: l.get(),
                    count: g + c,
                });
            }
            if !self.is_smoothed(l) && c != 0 {
                return Err(SmoothingError::SmoothedFlag(l.get()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GaussStateCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[[")?;
        for (i, comp) in self.gauss.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            codec::write_word(f, "[", comp, "]")?;
        }
        f.write_str("],[")?;
        for (i, c) in self.circles.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("],")?;
        let smoothed: Vec<_> = self.smoothed.iter().copied().collect();
        codec::write_word(f, "[", &smoothed, "]]")
    }
}

impl FromStr for GaussStateCode {
    type Err = SmoothingError;

    /// Parses the debug form `[[gauss],[circles],[smoothed]]`; any list may be empty.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        cur.expect(b'[')?;
        cur.expect(b'[')?;
        let mut gauss = Vec::new();
        if !cur.eat(b']') {
            loop {
                gauss.push(codec::parse_word(&mut cur, b'[', b']')?);
                if !cur.eat(b',') {
                    break;
                }
            }
            cur.expect(b']')?;
        }
        cur.expect(b',')?;
        cur.expect(b'[')?;
        let mut circles = Vec::new();
        if !cur.eat(b']') {
            loop {
                circles.push(Circle(codec::parse_word(&mut cur, b'(', b')')?));
                if !cur.eat(b',') {
                    break;
                }
            }
            cur.expect(b']')?;
        }
        cur.expect(b',')?;
        let open = if cur.peek() == Some(b'{') { b'{' } else { b'[' };
        let close = if open == b'{' { b'}' } else { b']' };
        cur.expect(open)?;
        let mut smoothed = BTreeSet::new();
        if !cur.eat(close) {
            loop {
                smoothed.insert(cur.label()?);
                if !cur.eat(b',') {
                    break;
                }
            }
            cur.expect(close)?;
        }
        cur.expect(b']')?;
        cur.finish()?;
        GaussStateCode::new(gauss, circles, smoothed)
    }
}

/// An occurrence of a crossing: component index and position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occ {
    pub comp: usize,
    pub pos: usize,
}

/// Consecutive unsmoothed occurrences `from -> to` (forward) in one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub comp: usize,
    pub from: usize,
    pub to: usize,
}

impl Edge {
    fn start(&self) -> Occ {
        Occ {
            comp: self.comp,
            pos: self.from,
        }
    }

    fn end(&self) -> Occ {
        Occ {
            comp: self.comp,
            pos: self.to,
        }
    }

    /// The smoothed markers strictly between the two endpoints.
    pub fn segment(&self, g: &GaussStateCode) -> Vec<CrossingLabel> {
        arc(&g.gauss[self.comp], self.from, self.to)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BigonCase {
    /// `[a,s0,b,w0,b,s1,a,w1]`
    OrientedKnot,
    /// `[a,s0,b,w0,a,s1,b,w1]`
    UnorientedKnot,
    /// `[a,s0,b,w0],[b,s1,a,w1]`
    OrientedLink,
    /// `[a,s0,b,w0],[a,s1,b,w1]`
    UnorientedLink,
}

impl BigonCase {
    pub fn is_oriented(self) -> bool {
        matches!(self, BigonCase::OrientedKnot | BigonCase::OrientedLink)
    }

    pub fn number(self) -> u8 {
        match self {
            BigonCase::OrientedKnot => 1,
            BigonCase::UnorientedKnot => 2,
            BigonCase::OrientedLink => 3,
            BigonCase::UnorientedLink => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MgonFinding {
    /// `edge` runs from one occurrence of `crossing` to the other.
    OneGon { crossing: CrossingLabel, edge: Edge },
    /// `first` runs a -> b; `second` joins the other occurrences of a and b.
    Bigon {
        a: CrossingLabel,
        b: CrossingLabel,
        case: BigonCase,
        first: Edge,
        second: Edge,
    },
    /// Three s-edges pairwise sharing one crossing, using all six occurrences.
    Triangle {
        crossings: [CrossingLabel; 3],
        sides: [Edge; 3],
    },
}

impl MgonFinding {
    pub fn size(&self) -> usize {
        match self {
            MgonFinding::OneGon { .. } => 1,
            MgonFinding::Bigon { .. } => 2,
            MgonFinding::Triangle { .. } => 3,
        }
    }
}

fn arc(comp: &[CrossingLabel], from: usize, to: usize) -> Vec<CrossingLabel> {
    let n = comp.len();
    let mut out = Vec::new();
    let mut i = (from + 1) % n;
    while i != to {
        out.push(comp[i]);
        i = (i + 1) % n;
    }
    out
}

fn reversed(mut v: Vec<CrossingLabel>) -> Vec<CrossingLabel> {
    v.reverse();
    v
}

/// Edge structure of the unsmoothed occurrences.
struct Layout {
    edges: Vec<Edge>,
    out_edge: HashMap<Occ, usize>,
    in_edge: HashMap<Occ, usize>,
    occs: HashMap<CrossingLabel, Vec<Occ>>,
    order: Vec<CrossingLabel>,
}

impl Layout {
    fn new(g: &GaussStateCode) -> Self {
        let mut edges = Vec::new();
        let mut out_edge = HashMap::new();
        let mut in_edge = HashMap::new();
        let mut occs: HashMap<CrossingLabel, Vec<Occ>> = HashMap::new();
        let mut order = Vec::new();
        for (ci, comp) in g.gauss.iter().enumerate() {
            let live: Vec<usize> = (0..comp.len())
                .filter(|&p| !g.is_smoothed(comp[p]))
                .collect();
            for &p in &live {
                let o = occs.entry(comp[p]).or_default();
                if o.is_empty() {
                    order.push(comp[p]);
                }
                o.push(Occ { comp: ci, pos: p });
            }
            if live.len() < 2 {
                continue;
            }
            for k in 0..live.len() {
                let e = Edge {
                    comp: ci,
                    from: live[k],
                    to: live[(k + 1) % live.len()],
                };
                out_edge.insert(e.start(), edges.len());
                in_edge.insert(e.end(), edges.len());
                edges.push(e);
            }
        }
        Layout {
            edges,
            out_edge,
            in_edge,
            occs,
            order,
        }
    }

    fn partner(&self, g: &GaussStateCode, o: Occ) -> Occ {
        let v = &self.occs[&label_at(g, o)];
        if v[0] == o {
            v[1]
        } else {
            v[0]
        }
    }

    /// Edges touching `o`: the one leaving forward first, then the one arriving.
    fn incident(&self, o: Occ) -> impl Iterator<Item = (Edge, Occ)> + '_ {
        let fwd = self
            .out_edge
            .get(&o)
            .map(|&i| (self.edges[i], self.edges[i].end()));
        let bwd = self
            .in_edge
            .get(&o)
            .map(|&i| (self.edges[i], self.edges[i].start()));
        fwd.into_iter().chain(bwd)
    }
}

fn label_at(g: &GaussStateCode, o: Occ) -> CrossingLabel {
    g.gauss[o.comp][o.pos]
}

/// Finds the smallest m-gon (m <= 3) by word patterns, or `None`.
pub fn detect_smallest_mgon(g: &GaussStateCode) -> Option<MgonFinding> {
    let lay = Layout::new(g);
    find_one_gon(&lay)
        .or_else(|| find_bigon(g, &lay))
        .or_else(|| find_triangle(g, &lay))
}

fn find_one_gon(lay: &Layout) -> Option<MgonFinding> {
    for &x in &lay.order {
        let v = &lay.occs[&x];
        let (i, j) = (v[0], v[1]);
        if i.comp != j.comp {
            continue;
        }
        // prefer the arc that runs from the later occurrence around the end
        for (from, to) in [(j, i), (i, j)] {
            if let Some(&e) = lay.out_edge.get(&from) {
                if lay.edges[e].end() == to {
                    return Some(MgonFinding::OneGon {
                        crossing: x,
                        edge: lay.edges[e],
                    });
                }
            }
        }
    }
    None
}

fn find_bigon(g: &GaussStateCode, lay: &Layout) -> Option<MgonFinding> {
    for &e1 in &lay.edges {
        let (a, b) = (label_at(g, e1.start()), label_at(g, e1.end()));
        if a == b {
            continue;
        }
        let a2 = lay.partner(g, e1.start());
        let b2 = lay.partner(g, e1.end());
        for (e2, far) in lay.incident(a2) {
            if far != b2 {
                continue;
            }
            let oriented = e2.start() == b2;
            let same = e1.comp == e2.comp;
            let case = match (same, oriented) {
                (true, true) => BigonCase::OrientedKnot,
                (true, false) => BigonCase::UnorientedKnot,
                (false, true) => BigonCase::OrientedLink,
                (false, false) => BigonCase::UnorientedLink,
            };
            return Some(MgonFinding::Bigon {
                a,
                b,
                case,
                first: e1,
                second: e2,
            });
        }
    }
    None
}

fn find_triangle(g: &GaussStateCode, lay: &Layout) -> Option<MgonFinding> {
    for &e1 in &lay.edges {
        let (a, b) = (label_at(g, e1.start()), label_at(g, e1.end()));
        if a == b {
            continue;
        }
        let a2 = lay.partner(g, e1.start());
        let b2 = lay.partner(g, e1.end());
        for (e2, c_occ) in lay.incident(b2) {
            let c = label_at(g, c_occ);
            if c == a || c == b {
                continue;
            }
            let c2 = lay.partner(g, c_occ);
            for (e3, far) in lay.incident(a2) {
                if far == c2 {
                    return Some(MgonFinding::Triangle {
                        crossings: [a, b, c],
                        sides: [e1, e2, e3],
                    });
                }
            }
        }
    }
    None
}

fn check_edge(g: &GaussStateCode, e: &Edge) -> Result<(), SmoothingError> {
    let comp = g.gauss.get(e.comp).ok_or(SmoothingError::Stale)?;
    if e.from >= comp.len() || e.to >= comp.len() {
        return Err(SmoothingError::Stale);
    }
    if g.is_smoothed(comp[e.from]) || g.is_smoothed(comp[e.to]) {
        return Err(SmoothingError::Stale);
    }
    if arc(comp, e.from, e.to).iter().any(|l| !g.is_smoothed(*l)) {
        return Err(SmoothingError::Stale);
    }
    Ok(())
}

/// Assembles the successor: rebuilt components first, untouched ones after.
fn rebuild(
    g: &GaussStateCode,
    touched: &[usize],
    mut fresh: Vec<Vec<CrossingLabel>>,
    circle: Option<Circle>,
    newly_smoothed: &[CrossingLabel],
) -> GaussStateCode {
    fresh.extend(
        g.gauss
            .iter()
            .enumerate()
            .filter(|(i, _)| !touched.contains(i))
            .map(|(_, c)| c.clone()),
    );
    let mut circles = g.circles.clone();
    circles.extend(circle);
    let mut smoothed = g.smoothed.clone();
    smoothed.extend(newly_smoothed.iter().copied());
    let next = GaussStateCode {
        gauss: fresh,
        circles,
        smoothed,
    };
    debug_assert!(next.validate().is_ok(), "conservation broken: {next}");
    next
}

/// `[a,s0,a,w0] -> [a,w0]` with circle `(s0,a)`.
pub fn smooth_one_gon(
    g: &GaussStateCode,
    f: &MgonFinding,
) -> Result<GaussStateCode, SmoothingError> {
    let MgonFinding::OneGon { crossing, edge } = f else {
        return Err(SmoothingError::Stale);
    };
    check_edge(g, edge)?;
    let comp = &g.gauss[edge.comp];
    if edge.from == edge.to || comp[edge.from] != *crossing || comp[edge.to] != *crossing {
        return Err(SmoothingError::Stale);
    }
    let mut circle = arc(comp, edge.from, edge.to);
    circle.push(*crossing);
    let mut rest = vec![*crossing];
    rest.extend(arc(comp, edge.to, edge.from));
    Ok(rebuild(
        g,
        &[edge.comp],
        vec![rest],
        Some(Circle(circle)),
        &[*crossing],
    ))
}

/// Applies the bigon rewrite matching the finding's case.
pub fn smooth_bigon(g: &GaussStateCode, f: &MgonFinding) -> Result<GaussStateCode, SmoothingError> {
    let MgonFinding::Bigon {
        a,
        b,
        case,
        first,
        second,
    } = *f
    else {
        return Err(SmoothingError::Stale);
    };
    check_edge(g, &first)?;
    check_edge(g, &second)?;
    let at = |c: usize, p: usize| g.gauss[c][p];
    let (c1, c2) = (first.comp, second.comp);
    let (p, q) = (first.from, first.to);
    if at(c1, p) != a || at(c1, q) != b || a == b {
        return Err(SmoothingError::Stale);
    }
    // second edge endpoints as (a', b')
    let (pa, pb) = if case.is_oriented() {
        (second.to, second.from)
    } else {
        (second.from, second.to)
    };
    if at(c2, pa) != a || at(c2, pb) != b || (c1 == c2 && (pa == p || pb == q)) {
        return Err(SmoothingError::Stale);
    }
    if (c1 == c2) != matches!(case, BigonCase::OrientedKnot | BigonCase::UnorientedKnot) {
        return Err(SmoothingError::Stale);
    }
    let s0 = first.segment(g);
    let s1 = second.segment(g);
    let s1 = if case.is_oriented() { s1 } else { reversed(s1) };
    let mut circle = vec![a];
    circle.extend(s0);
    circle.push(b);
    circle.extend(s1);

    let comp1 = &g.gauss[c1];
    let comp2 = &g.gauss[c2];
    let word = |head: CrossingLabel, w: Vec<CrossingLabel>| {
        let mut v = vec![head];
        v.extend(w);
        v
    };
    let fresh = match case {
        BigonCase::OrientedKnot => {
            vec![word(a, arc(comp1, pa, p)), word(b, arc(comp1, q, pb))]
        }
        BigonCase::UnorientedKnot => {
            let mut v = word(a, reversed(arc(comp1, q, pa)));
            v.push(b);
            v.extend(arc(comp1, pb, p));
            vec![v]
        }
        BigonCase::OrientedLink => {
            let mut v = word(a, arc(comp2, pa, pb));
            v.push(b);
            v.extend(arc(comp1, q, p));
            vec![v]
        }
        BigonCase::UnorientedLink => {
            let mut v = word(a, reversed(arc(comp2, pb, pa)));
            v.push(b);
            v.extend(arc(comp1, q, p));
            vec![v]
        }
    };
    let touched = if c1 == c2 { vec![c1] } else { vec![c1, c2] };
    Ok(rebuild(g, &touched, fresh, Some(Circle(circle)), &[a, b]))
}

/// Local picture of a triangle: each occurrence's s-edge and w-pairing.
struct TriangleFrame {
    crossings: [CrossingLabel; 3],
    /// triangle occurrences in scan order
    occs: Vec<Occ>,
    /// per occurrence: index of its side and whether it is the side's start
    side_of: HashMap<Occ, (usize, bool)>,
    sides: [Edge; 3],
    comps: Vec<usize>,
}

/// A w-word between two triangle occurrences of one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pairing {
    comp: usize,
    left: usize,
    right: usize,
}

impl TriangleFrame {
    fn new(g: &GaussStateCode, f: &MgonFinding) -> Result<Self, SmoothingError> {
        let MgonFinding::Triangle { crossings, sides } = *f else {
            return Err(SmoothingError::Stale);
        };
        let mut side_of = HashMap::new();
        for (i, e) in sides.iter().enumerate() {
            check_edge(g, e)?;
            if e.from == e.to {
                return Err(SmoothingError::Stale);
            }
            side_of.insert(e.start(), (i, true));
            side_of.insert(e.end(), (i, false));
        }
        if side_of.len() != 6 {
            return Err(SmoothingError::Stale);
        }
        let mut counts: HashMap<CrossingLabel, usize> = HashMap::new();
        for o in side_of.keys() {
            *counts.entry(label_at(g, *o)).or_default() += 1;
        }
        if crossings.iter().any(|x| counts.get(x) != Some(&2)) {
            return Err(SmoothingError::Stale);
        }
        let mut occs: Vec<Occ> = side_of.keys().copied().collect();
        occs.sort();
        let mut comps: Vec<usize> = occs.iter().map(|o| o.comp).collect();
        comps.dedup();
        Ok(TriangleFrame {
            crossings,
            occs,
            side_of,
            sides,
            comps,
        })
    }

    fn partner(&self, g: &GaussStateCode, o: Occ) -> Occ {
        let x = label_at(g, o);
        *self
            .occs
            .iter()
            .find(|&&p| p != o && label_at(g, p) == x)
            .expect("two occurrences")
    }

    fn step(&self, o: Occ, forward: bool, len: usize) -> Occ {
        let pos = if forward {
            (o.pos + 1) % len
        } else {
            (o.pos + len - 1) % len
        };
        Occ { comp: o.comp, pos }
    }

    fn next_tri(&self, g: &GaussStateCode, o: Occ, forward: bool) -> Occ {
        let len = g.gauss[o.comp].len();
        let mut p = self.step(o, forward, len);
        while !self.side_of.contains_key(&p) {
            p = self.step(p, forward, len);
        }
        p
    }

    /// The w-word on the side of `o` away from its s-edge.
    fn pairing(&self, g: &GaussStateCode, o: Occ) -> Pairing {
        let (_, is_start) = self.side_of[&o];
        if is_start {
            Pairing {
                comp: o.comp,
                left: self.next_tri(g, o, false).pos,
                right: o.pos,
            }
        } else {
            Pairing {
                comp: o.comp,
                left: o.pos,
                right: self.next_tri(g, o, true).pos,
            }
        }
    }

    /// The far end of `o`'s s-edge and the segment read away from `o`.
    fn traverse_side(&self, g: &GaussStateCode, o: Occ) -> (Occ, Vec<CrossingLabel>) {
        let (i, is_start) = self.side_of[&o];
        let e = self.sides[i];
        let seg = e.segment(g);
        if is_start {
            (e.end(), seg)
        } else {
            (e.start(), reversed(seg))
        }
    }

    /// The far end of `o`'s pairing and its word read away from `o`.
    fn traverse_pairing(&self, g: &GaussStateCode, o: Occ) -> (Occ, Vec<CrossingLabel>) {
        let p = self.pairing(g, o);
        let word = arc(&g.gauss[p.comp], p.left, p.right);
        if p.left == o.pos {
            (
                Occ {
                    comp: p.comp,
                    pos: p.right,
                },
                word,
            )
        } else {
            (
                Occ {
                    comp: p.comp,
                    pos: p.left,
                },
                reversed(word),
            )
        }
    }

    fn circle(&self, g: &GaussStateCode) -> Result<Circle, SmoothingError> {
        let start = self.occs[0];
        let x0 = label_at(g, start);
        let mut out = vec![x0];
        let mut o = start;
        for _ in 0..3 {
            let (far, seg) = self.traverse_side(g, o);
            out.extend(seg);
            if label_at(g, far) == x0 {
                return Ok(Circle(out));
            }
            out.push(label_at(g, far));
            o = self.partner(g, far);
        }
        Err(SmoothingError::Walk("triangle circle"))
    }
}

/// Triangle smoothing: one new circle glued from the three s-segments, and the
/// components rebuilt from the w-pairings.
pub fn smooth_triangle(
    g: &GaussStateCode,
    f: &MgonFinding,
) -> Result<GaussStateCode, SmoothingError> {
    let fr = TriangleFrame::new(g, f)?;
    let circle = fr.circle(g)?;

    let mut order: Vec<Pairing> = Vec::new();
    for &o in &fr.occs {
        let p = fr.pairing(g, o);
        if !order.contains(&p) {
            order.push(p);
        }
    }
    let mut processed = vec![false; order.len()];
    let mut fresh = Vec::new();
    let mut guard = 0;
    while let Some(start) = processed.iter().position(|d| !d) {
        let mut comp = Vec::new();
        let mut first_len = None;
        let mut entry = Occ {
            comp: order[start].comp,
            pos: order[start].left,
        };
        loop {
            guard += 1;
            if guard > 16 {
                return Err(SmoothingError::Walk("triangle"));
            }
            let p = fr.pairing(g, entry);
            let idx = order
                .iter()
                .position(|q| *q == p)
                .ok_or(SmoothingError::Walk("triangle"))?;
            if processed[idx] {
                break;
            }
            processed[idx] = true;
            let (far, word) = fr.traverse_pairing(g, entry);
            first_len.get_or_insert(word.len());
            comp.extend(word);
            comp.push(label_at(g, far));
            entry = fr.partner(g, far);
        }
        comp.rotate_left(first_len.unwrap_or(0));
        fresh.push(comp);
    }
    Ok(rebuild(g, &fr.comps, fresh, Some(circle), &fr.crossings))
}

/// Anti-triangle smoothing: no circle; components alternate s-segments and w-words.
pub fn smooth_anti_triangle(
    g: &GaussStateCode,
    f: &MgonFinding,
) -> Result<GaussStateCode, SmoothingError> {
    let fr = TriangleFrame::new(g, f)?;
    let mut written = [false; 3];
    let mut fresh = Vec::new();
    let mut guard = 0;
    while let Some(&start) = fr.occs.iter().find(|o| !written[fr.side_of[o].0]) {
        let mut comp = Vec::new();
        let mut o = start;
        loop {
            guard += 1;
            if guard > 8 {
                return Err(SmoothingError::Walk("anti-triangle"));
            }
            let side = fr.side_of[&o].0;
            if written[side] {
                break;
            }
            written[side] = true;
            comp.push(label_at(g, o));
            let (far, seg) = fr.traverse_side(g, o);
            comp.extend(seg);
            let q = fr.partner(g, far);
            comp.push(label_at(g, q));
            let (r, word) = fr.traverse_pairing(g, q);
            comp.extend(word);
            o = fr.partner(g, r);
        }
        fresh.push(comp);
    }
    Ok(rebuild(g, &fr.comps, fresh, None, &fr.crossings))
}

/// Moves every fully smoothed component to the circle list.
pub fn harvest_closed_components(g: &GaussStateCode) -> GaussStateCode {
    let mut next = g.clone();
    next.gauss.clear();
    for comp in &g.gauss {
        if comp.iter().all(|l| g.is_smoothed(*l)) {
            next.circles.push(Circle(comp.clone()));
        } else {
            next.gauss.push(comp.clone());
        }
    }
    next
}

/// Applies a 1-gon or bigon finding; triangles need an explicit branch choice.
pub fn smooth(g: &GaussStateCode, f: &MgonFinding) -> Result<GaussStateCode, SmoothingError> {
    match f {
        MgonFinding::OneGon { .. } => smooth_one_gon(g, f),
        MgonFinding::Bigon { .. } => smooth_bigon(g, f),
        MgonFinding::Triangle { .. } => smooth_triangle(g, f),
    }
}
