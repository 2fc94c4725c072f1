//! Wiring diagrams: swap lists of adjacent wires, realized as polylines.

use std::collections::HashSet;

use ote_decoder::{Mode, OrientationSign};

use crate::arrangement::{AnyArrangement, Curve};
use crate::encoder::{EncodeError, Prepared};
use crate::exact::{ExactPoint, ExactRational};

/// `n` wires and the positions of their swaps, top to bottom from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WiringDiagram {
    pub n: usize,
    pub swaps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WiringError {
    #[error("line {line}: {msg}")]
    MalformedLine { line: usize, msg: String },
    #[error("line {line}: swap position {pos} has no neighbour below among {n} wires")]
    NonAdjacentSwap { line: usize, pos: usize, n: usize },
    #[error("line {line}: wires {a} and {b} swap a second time")]
    PairSwappedTwice { line: usize, a: usize, b: usize },
    #[error("{found} swaps for {n} wires, expected {expected}")]
    MissingSwaps { n: usize, found: usize, expected: usize },
    #[error("wire index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
}

impl WiringDiagram {
    /// Checks the simple-arrangement contract: every pair swaps exactly once.
    pub fn new(n: usize, swaps: Vec<usize>) -> Result<Self, WiringError> {
        let w = WiringDiagram { n, swaps };
        w.check()?;
        Ok(w)
    }

    fn expected_swaps(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// Replays the swaps. Line numbers in errors are swap indices offset by
    /// the header line.
    fn check(&self) -> Result<(), WiringError> {
        let mut order: Vec<usize> = (0..self.n).collect();
        let mut seen = HashSet::new();
        for (step, &pos) in self.swaps.iter().enumerate() {
            let line = step + 2;
            if pos + 1 >= self.n {
                return Err(WiringError::NonAdjacentSwap { line, pos, n: self.n });
            }
            let (a, b) = (order[pos], order[pos + 1]);
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(WiringError::PairSwappedTwice { line, a, b });
            }
            order.swap(pos, pos + 1);
        }
        if self.swaps.len() != self.expected_swaps() {
            return Err(WiringError::MissingSwaps { n: self.n, found: self.swaps.len(), expected: self.expected_swaps() });
        }
        Ok(())
    }

    /// Position of every wire before each step, plus the final order.
    fn positions(&self) -> Vec<Vec<usize>> {
        let mut pos: Vec<usize> = (0..self.n).collect();
        let mut out = Vec::with_capacity(self.swaps.len() + 1);
        out.push(pos.clone());
        let mut order: Vec<usize> = (0..self.n).collect();
        for &p in &self.swaps {
            let (a, b) = (order[p], order[p + 1]);
            order.swap(p, p + 1);
            pos[a] = p + 1;
            pos[b] = p;
            out.push(pos.clone());
        }
        out
    }

    /// Step at which wires `a` and `b` swap, and the upper position.
    fn swap_of(&self, a: usize, b: usize) -> (usize, usize) {
        let mut order: Vec<usize> = (0..self.n).collect();
        for (step, &p) in self.swaps.iter().enumerate() {
            let pair = (order[p], order[p + 1]);
            if pair == (a, b) || pair == (b, a) {
                return (step, p);
            }
            order.swap(p, p + 1);
        }
        unreachable!("validated diagrams swap every pair")
    }
}

/// Parses `n=<int>` followed by one swap position per line. `#` starts a
/// comment; blank lines are skipped.
pub fn parse_wiring(text: &str) -> Result<WiringDiagram, WiringError> {
    let mut n: Option<usize> = None;
    let mut swaps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let bad = |msg: String| WiringError::MalformedLine { line, msg };
        match n {
            None => {
                let v = body
                    .strip_prefix("n=")
                    .ok_or_else(|| bad(format!("expected `n=<int>`, found `{body}`")))?;
                let v: usize = v.trim().parse().map_err(|_| bad(format!("bad wire count `{v}`")))?;
                if v == 0 {
                    return Err(bad("a diagram needs at least one wire".into()));
                }
                n = Some(v);
            }
            Some(_) => {
                let p: usize = body.parse().map_err(|_| bad(format!("bad swap position `{body}`")))?;
                swaps.push((p, line));
            }
        }
    }
    let n = n.ok_or(WiringError::MalformedLine { line: 1, msg: "missing `n=<int>` header".into() })?;
    let lines: Vec<usize> = swaps.iter().map(|&(_, l)| l).collect();
    let w = WiringDiagram { n, swaps: swaps.into_iter().map(|(p, _)| p).collect() };
    // report errors against source lines rather than swap indices
    w.check().map_err(|e| match e {
        WiringError::NonAdjacentSwap { line, pos, n } => WiringError::NonAdjacentSwap { line: lines[line - 2], pos, n },
        WiringError::PairSwappedTwice { line, a, b } => WiringError::PairSwappedTwice { line: lines[line - 2], a, b },
        e => e,
    })?;
    Ok(w)
}

/// Wire `i` sits at height `-position` at every integer `x = k` and moves
/// linearly to its next position over `(k, k + 1)`; the end rays are
/// horizontal.
pub fn realize_polylines(w: &WiringDiagram) -> Vec<Curve> {
    let pos = w.positions();
    (0..w.n)
        .map(|wire| {
            let vertices = pos
                .iter()
                .enumerate()
                .map(|(k, p)| ExactPoint::from_ints(k as i64, -(p[wire] as i64)))
                .collect();
            Curve::Polyline { vertices, left_slope: ExactRational::zero(), right_slope: ExactRational::zero() }
        })
        .collect()
}

/// Which side of wire `c` the crossing of wires `a` and `b` lies on, signed
/// by `b - a` so the result alternates like an orientation.
pub fn wiring_chirotope(w: &WiringDiagram, a: usize, b: usize, c: usize) -> Result<OrientationSign, WiringError> {
    for index in [a, b, c] {
        if index >= w.n {
            return Err(WiringError::IndexOutOfRange { index, n: w.n });
        }
    }
    if a == b || b == c || a == c {
        return Ok(OrientationSign::Zero);
    }
    let (step, upper) = w.swap_of(a, b);
    let half = ExactRational::new(1, 2);
    let x = ExactRational::from_int(step as i64) + half.clone();
    let y = -(ExactRational::from_int(upper as i64) + half);
    let curves = realize_polylines(w);
    let side = (y - curves[c].eval(&x)).sign();
    Ok(side.times(OrientationSign::from_ordering(b.cmp(&a))))
}

/// Curves of a wiring diagram, ready for encoding in abstract mode.
pub fn prepare_wiring(w: &WiringDiagram) -> Result<Prepared, EncodeError> {
    let curves = realize_polylines(w);
    Ok(Prepared {
        mode: Mode::Abstract,
        arrangement: AnyArrangement::build(&curves)?,
        representative: (0..w.n as u32).collect(),
    })
}
