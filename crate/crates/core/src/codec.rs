//! Gauss code text form, validation, relabeling and DT conversion.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A 1-based crossing identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossingLabel(u32);

impl CrossingLabel {
    pub fn new(value: u32) -> Result<Self, CodecError> {
        if value == 0 {
            return Err(CodecError::ZeroLabel);
        }
        Ok(CrossingLabel(value))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for CrossingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("crossing labels must be positive")]
    ZeroLabel,
    #[error("a Gauss code needs at least one non-empty component")]
    Empty,
    #[error("label {label} occurs {count} time(s), expected exactly 2")]
    Occurrence { label: u32, count: usize },
    #[error("invalid DT code: {0}")]
    Dt(String),
}

/// An unsigned Gauss code: one cyclic word of crossing labels per component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussCode {
    components: Vec<Vec<CrossingLabel>>,
}

impl GaussCode {
    /// Builds a code from raw labels, checking that every label occurs exactly twice.
    pub fn new(components: Vec<Vec<u32>>) -> Result<Self, CodecError> {
        let components = components
            .into_iter()
            .map(|c| c.into_iter().map(CrossingLabel::new).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Self::from_labels(components)
    }

    pub fn from_labels(components: Vec<Vec<CrossingLabel>>) -> Result<Self, CodecError> {
        if components.is_empty() || components.iter().any(|c| c.is_empty()) {
            return Err(CodecError::Empty);
        }
        let mut counts: HashMap<CrossingLabel, usize> = HashMap::new();
        for &l in components.iter().flatten() {
            *counts.entry(l).or_default() += 1;
        }
        let mut bad: Vec<_> = counts.into_iter().filter(|&(_, n)| n != 2).collect();
        bad.sort();
        if let Some(&(label, count)) = bad.first() {
            return Err(CodecError::Occurrence {
                label: label.get(),
                count,
            });
        }
        Ok(GaussCode { components })
    }

    pub fn components(&self) -> &[Vec<CrossingLabel>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Vec<CrossingLabel>> {
        self.components
    }

    pub fn crossing_count(&self) -> usize {
        crossing_count(self)
    }

    /// Labels in order of first appearance.
    pub fn labels(&self) -> Vec<CrossingLabel> {
        let mut seen = std::collections::HashSet::new();
        self.components
            .iter()
            .flatten()
            .copied()
            .filter(|l| seen.insert(*l))
            .collect()
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, comp) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write_word(f, "[", comp, "]")?;
        }
        f.write_str("]")
    }
}

pub(crate) fn write_word(
    f: &mut fmt::Formatter<'_>,
    open: &str,
    word: &[CrossingLabel],
    close: &str,
) -> fmt::Result {
    f.write_str(open)?;
    for (i, l) in word.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{l}")?;
    }
    f.write_str(close)
}

impl FromStr for GaussCode {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_gauss(s)
    }
}

/// Minimal cursor over ASCII text shared by the code parsers.
pub(crate) struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Cursor {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> CodecError {
        CodecError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    pub(crate) fn expect(&mut self, b: u8) -> Result<(), CodecError> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{}', found '{}'", b as char, c as char))),
            None => Err(self.error(format!("expected '{}', found end of input", b as char))),
        }
    }

    pub(crate) fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn label(&mut self) -> Result<CrossingLabel, CodecError> {
        match self.peek() {
            Some(b'-') | Some(b'+') => {
                return Err(self.error("signed Gauss codes are not supported"))
            }
            Some(b'0') => return Err(self.error("labels are positive and have no leading zero")),
            Some(c) if c.is_ascii_digit() => {}
            _ => return Err(self.error("expected a positive integer")),
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        let value: u32 = digits.parse().map_err(|_| CodecError::Syntax {
            pos: start,
            msg: "label out of range".into(),
        })?;
        CrossingLabel::new(value)
    }

    pub(crate) fn finish(&mut self) -> Result<(), CodecError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("trailing input")),
        }
    }
}

/// Parses `[[a,b,...],[...]]`, allowing whitespace between tokens.
pub fn parse_gauss(text: &str) -> Result<GaussCode, CodecError> {
    let mut cur = Cursor::new(text);
    let components = parse_components(&mut cur)?;
    cur.finish()?;
    GaussCode::from_labels(components)
}

pub(crate) fn parse_components(
    cur: &mut Cursor<'_>,
) -> Result<Vec<Vec<CrossingLabel>>, CodecError> {
    cur.expect(b'[')?;
    let mut components = vec![parse_word(cur, b'[', b']')?];
    while cur.eat(b',') {
        components.push(parse_word(cur, b'[', b']')?);
    }
    cur.expect(b']')?;
    Ok(components)
}

pub(crate) fn parse_word(
    cur: &mut Cursor<'_>,
    open: u8,
    close: u8,
) -> Result<Vec<CrossingLabel>, CodecError> {
    cur.expect(open)?;
    let mut word = vec![cur.label()?];
    while cur.eat(b',') {
        word.push(cur.label()?);
    }
    cur.expect(close)?;
    Ok(word)
}

pub fn serialize_gauss(g: &GaussCode) -> String {
    g.to_string()
}

/// Renames labels to 1..c in order of first appearance.
pub fn canonical_relabel(g: &GaussCode) -> GaussCode {
    let map: HashMap<CrossingLabel, CrossingLabel> = g
        .labels()
        .into_iter()
        .enumerate()
        .map(|(i, l)| (l, CrossingLabel(i as u32 + 1)))
        .collect();
    GaussCode {
        components: g
            .components
            .iter()
            .map(|c| c.iter().map(|l| map[l]).collect())
            .collect(),
    }
}

pub fn crossing_count(g: &GaussCode) -> usize {
    g.components.iter().map(Vec::len).sum::<usize>() / 2
}

/// Dowker-Thistlethwaite code of a knot; signs are dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtCode {
    entries: Vec<u32>,
}

impl DtCode {
    pub fn new(entries: &[i64]) -> Result<Self, CodecError> {
        let n = entries.len();
        if n == 0 {
            return Err(CodecError::Dt("no entries".into()));
        }
        let mut seen = vec![false; 2 * n + 1];
        let mut out = Vec::with_capacity(n);
        for (k, &e) in entries.iter().enumerate() {
            let v = e.unsigned_abs();
            if v == 0 || v % 2 == 1 {
                return Err(CodecError::Dt(format!(
                    "entry {e} is not a nonzero even integer"
                )));
            }
            if v > 2 * n as u64 {
                return Err(CodecError::Dt(format!("entry {e} exceeds {}", 2 * n)));
            }
            let v = v as usize;
            if seen[v] {
                return Err(CodecError::Dt(format!("entry {e} is repeated")));
            }
            seen[v] = true;
            let odd = 2 * k + 1;
            let adjacent = v == odd + 1 || v + 1 == odd || (odd == 1 && v == 2 * n);
            if adjacent {
                return Err(CodecError::Dt(format!(
                    "entry {e} pairs adjacent positions {odd} and {v} (nugatory kink)"
                )));
            }
            out.push(v as u32);
        }
        Ok(DtCode { entries: out })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }
}

impl FromStr for DtCode {
    type Err = CodecError;

    /// Accepts space- or comma-separated integers, optionally wrapped in one
    /// pair of brackets or parentheses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut body = s.trim();
        let opens = body.matches(['(', '[', '{']).count();
        if opens > 1 {
            return Err(CodecError::Dt(
                "multi-component DT codes are not supported".into(),
            ));
        }
        if opens == 1 {
            let inner = body
                .strip_prefix(['(', '[', '{'])
                .and_then(|b| b.strip_suffix([')', ']', '}']))
                .ok_or_else(|| CodecError::Dt("unbalanced brackets".into()))?;
            body = inner;
        }
        let entries = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| CodecError::Dt(format!("bad entry '{t}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        DtCode::new(&entries)
    }
}

/// Pairs odd position 2k-1 with position |entry_k| and relabels canonically.
pub fn dt_to_gauss(d: &DtCode) -> GaussCode {
    let n = d.entries.len();
    let mut word = vec![0u32; 2 * n];
    for (k, &e) in d.entries.iter().enumerate() {
        word[2 * k] = k as u32 + 1;
        word[e as usize - 1] = k as u32 + 1;
    }
    let g = GaussCode::new(vec![word]).expect("DT pairing is a double-occurrence word");
    canonical_relabel(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussCode {
        parse_gauss(s).unwrap()
    }

    #[test]
    fn parses_figure_eight_and_whitehead() {
        let f8 = g("[[1,2,3,1,4,3,2,4]]");
        assert_eq!(f8.components().len(), 1);
        assert_eq!(f8.crossing_count(), 4);
        let wh = g(" [ [1, 2,3,4,2,5] ,\n[3,5,1,4] ] ");
        assert_eq!(wh.components().len(), 2);
        assert_eq!(wh.crossing_count(), 5);
        assert_eq!(wh.to_string(), "[[1,2,3,4,2,5],[3,5,1,4]]");
    }

    #[test]
    fn rejects_single_occurrence() {
        assert_eq!(
            parse_gauss("[[1,2,3,1,2]]"),
            Err(CodecError::Occurrence { label: 3, count: 1 })
        );
    }

    #[test]
    fn rejects_bad_syntax() {
        for bad in [
            "",
            "[]",
            "[[]]",
            "[[1,1]",
            "[[1,-1]]",
            "[[0,0]]",
            "[[1,1]]x",
            "[[1,,1]]",
            "[[01,01]]",
        ] {
            assert!(
                matches!(parse_gauss(bad), Err(CodecError::Syntax { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn serializes_without_whitespace() {
        assert_eq!(serialize_gauss(&g("[[1, 1]]")), "[[1,1]]");
        let wh = g("[[1,2,3,4,2,5],[3,5,1,4]]");
        assert_eq!(g(&serialize_gauss(&wh)), wh);
    }

    #[test]
    fn relabels_by_first_appearance() {
        assert_eq!(
            canonical_relabel(&g("[[2,3,1,4,3,2,4,1]]")),
            g("[[1,2,3,4,2,1,4,3]]")
        );
        assert_eq!(
            canonical_relabel(&g("[[4,2,3,4,1,3,2,1]]")),
            g("[[1,2,3,1,4,3,2,4]]")
        );
        let canon = g("[[1,2,3,4,2,5],[3,5,1,4]]");
        assert_eq!(canonical_relabel(&canon), canon);
    }

    #[test]
    fn crossing_counts() {
        assert_eq!(crossing_count(&g("[[1,2,3,1,2,3]]")), 3);
        assert_eq!(crossing_count(&g("[[1,1]]")), 1);
    }

    #[test]
    fn dt_conversion() {
        let dt: DtCode = "4 6 2".parse().unwrap();
        assert_eq!(dt_to_gauss(&dt), g("[[1,2,3,1,2,3]]"));
        let dt: DtCode = "(4, -6, 8, 2)".parse().unwrap();
        assert_eq!(dt_to_gauss(&dt), g("[[1,2,3,1,4,3,2,4]]"));
    }

    #[test]
    fn dt_rejections() {
        for bad in ["2", "4 4 2", "4 6 3", "4 6 10", "", "(4 6) (2 8)", "4 x 2"] {
            assert!(bad.parse::<DtCode>().is_err(), "{bad}");
        }
    }
}
