//! Hierarchical 1/r-cuttings: a small random sample is decomposed, then
//! overloaded pieces are split greedily until every piece meets its target.

use std::cmp::Ordering;
use std::collections::HashMap;

use ote_decoder::{
    format::{cell_bound, FieldWidths},
    CellRelation, SubcellKind,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arrangement::{Arrangement, CellGeom, CurveId, Frac, HitKey, Relation, Scalar, Trap, XCoord};

#[derive(Clone, Debug, PartialEq)]
pub struct CuttingParams {
    pub r: u64,
    pub t: u64,
    pub seed: u64,
    /// Sample size factor `a` in `s = ceil(a * r * ln(r + 1))`.
    pub sample_factor: f64,
}

pub const DEFAULT_R: u64 = 4;
pub const DEFAULT_SAMPLE_FACTOR: f64 = 0.1;

/// Overloaded trapezoids with at most this many curves try every curve as
/// the splitter.
const EXHAUSTIVE_SPLIT: usize = 16;

impl CuttingParams {
    pub fn new(r: u64, t: u64, seed: u64) -> Self {
        CuttingParams { r, t, seed, sample_factor: DEFAULT_SAMPLE_FACTOR }
    }

    pub fn sample_size(&self, m: usize) -> usize {
        let r = self.r as f64;
        let s = (self.sample_factor * r * (r + 1.0).ln()).ceil().max(1.0) as usize;
        s.min(m)
    }
}

/// Default leaf threshold: `log n / log log n` for point sets,
/// `sqrt(log n)` for wiring diagrams.
pub fn default_t(n: u64, abstract_mode: bool) -> u64 {
    let lg = (n.max(2) as f64).log2();
    let t = if abstract_mode {
        lg.sqrt().floor()
    } else if lg > 1.0 {
        (lg / lg.log2()).floor()
    } else {
        0.0
    };
    (t as u64).max(3)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CuttingError {
    #[error("r must be at least 2 (got {0})")]
    BadR(u64),
    #[error("t must be at least 3 (got {0})")]
    BadT(u64),
}

/// A full-dimensional cell scheduled for refinement or kept as a leaf.
#[derive(Clone, Debug)]
pub struct CellRecord<S> {
    pub level: u32,
    pub trap: Trap<S>,
    /// Crossing curves, ascending.
    pub curves: Vec<CurveId>,
}

/// One subcell of a refined cell.
#[derive(Clone, Debug)]
pub struct Subcell<S> {
    pub geom: CellGeom<S>,
    pub kind: SubcellKind,
    /// Relation code of every curve of the parent, by parent rank.
    pub codes: Vec<CellRelation>,
    /// Parent ranks of the curves crossing this subcell, ascending, with
    /// the crossing details.
    pub crossing: Vec<(u32, Relation<S>)>,
}

#[derive(Clone, Debug)]
pub struct Refinement<S> {
    pub subcells: Vec<Subcell<S>>,
}

/// Approximate signature bits of one subcell and of one crossing entry,
/// used to compare candidate splits.
struct BitCost {
    code: f64,
    trap: f64,
    segment: f64,
}

struct Ctx<'a, S> {
    arr: &'a Arrangement<S>,
    /// Position in the top-to-bottom order at `-inf`.
    order: &'a [u32],
}

fn mix(seed: u64, level: u32, index: u64) -> u64 {
    let mut z = seed ^ (level as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Vertical decomposition of `t` by the sample curves (all of which cross `t`).
pub fn decompose<S: Scalar>(arr: &Arrangement<S>, t: &Trap<S>, sample: &[CurveId]) -> Vec<CellGeom<S>> {
    let in_range = |x: &Frac<S>| {
        let xc = XCoord::At(x.clone());
        t.xl < xc && xc < t.xr
    };
    let in_closure = |c: CurveId, x: &XCoord<S>| {
        arr.cmp_opt(c, t.bottom, x, true) != Ordering::Less && arr.cmp_opt(c, t.top, x, false) != Ordering::Greater
    };

    let mut events: Vec<Frac<S>> = Vec::new();
    for &s in sample {
        for b in [t.bottom, t.top].into_iter().flatten() {
            if let Some(x) = arr.crossing(s, b) {
                if in_range(&x) {
                    events.push(x);
                }
            }
        }
    }
    for (i, &a) in sample.iter().enumerate() {
        for &b in &sample[i + 1..] {
            if let Some(x) = arr.crossing(a, b) {
                if in_range(&x) && in_closure(a, &XCoord::At(x.clone())) {
                    events.push(x);
                }
            }
        }
    }
    events.sort();
    events.dedup();

    let slab = |x: &XCoord<S>| -> Vec<Option<CurveId>> {
        let mut inner: Vec<CurveId> = sample
            .iter()
            .copied()
            .filter(|&s| {
                t.bottom.is_none_or(|b| arr.cmp_right(s, b, x) == Ordering::Greater)
                    && t.top.is_none_or(|b| arr.cmp_right(s, b, x) == Ordering::Less)
            })
            .collect();
        inner.sort_by(|&a, &b| arr.cmp_right(a, b, x));
        let mut v = Vec::with_capacity(inner.len() + 2);
        v.push(t.bottom);
        v.extend(inner.into_iter().map(Some));
        v.push(t.top);
        v
    };

    let mut out = Vec::new();
    let mut list = slab(&t.xl);
    let mut traps: Vec<(Option<CurveId>, Option<CurveId>, XCoord<S>)> =
        list.windows(2).map(|w| (w[0], w[1], t.xl.clone())).collect();
    let mut edges: Vec<(CurveId, XCoord<S>)> =
        list[1..list.len() - 1].iter().map(|c| (c.unwrap(), t.xl.clone())).collect();

    for e in events {
        let xc = XCoord::At(e.clone());
        let mut members: Vec<CurveId> = sample.iter().copied().filter(|&s| in_closure(s, &xc)).collect();
        members.extend(t.bottom);
        members.extend(t.top);
        members.sort_by(|&a, &b| arr.cmp_at(a, b, &xc));
        let mut groups: Vec<&[CurveId]> = Vec::new();
        let mut start = 0;
        for i in 1..=members.len() {
            if i == members.len() || arr.cmp_at(members[i - 1], members[i], &xc) != Ordering::Equal {
                groups.push(&members[start..i]);
                start = i;
            }
        }
        let mut mult: HashMap<CurveId, usize> = HashMap::new();
        for g in &groups {
            for &c in *g {
                mult.insert(c, g.len());
            }
        }
        let m = |c: Option<CurveId>| c.map_or(1, |c| mult.get(&c).copied().unwrap_or(1));

        let mut kept: HashMap<(Option<CurveId>, Option<CurveId>), XCoord<S>> = HashMap::new();
        for (lo, hi, from) in traps.drain(..) {
            if m(lo) == 1 && m(hi) == 1 {
                kept.insert((lo, hi), from);
            } else {
                out.push(CellGeom::Trapezoid(Trap { xl: from, xr: xc.clone(), bottom: lo, top: hi }));
            }
        }
        let mut kept_edges: HashMap<CurveId, XCoord<S>> = HashMap::new();
        for (c, from) in edges.drain(..) {
            if m(Some(c)) == 1 {
                kept_edges.insert(c, from);
            } else {
                out.push(CellGeom::Edge { curve: c, xl: from, xr: xc.clone() });
            }
        }

        let boundary = |g: &[CurveId]| g.iter().any(|&c| Some(c) == t.bottom || Some(c) == t.top);
        let mut stack: Vec<(Option<CurveId>, usize)> = Vec::new();
        if t.bottom.is_none() {
            stack.push((None, 1));
        }
        for g in &groups {
            if g.len() >= 2 && !boundary(g) {
                out.push(CellGeom::Vertex { x: e.clone(), through: g[0] });
            }
            stack.push((Some(g[0]), g.len()));
        }
        if t.top.is_none() {
            stack.push((None, 1));
        }
        for w in stack.windows(2) {
            if w[0].1 >= 2 || w[1].1 >= 2 {
                out.push(CellGeom::Wall { x: e.clone(), lower: w[0].0, upper: w[1].0 });
            }
        }

        list = slab(&xc);
        traps = list
            .windows(2)
            .map(|w| {
                let from = kept.remove(&(w[0], w[1])).unwrap_or_else(|| xc.clone());
                (w[0], w[1], from)
            })
            .collect();
        edges = list[1..list.len() - 1]
            .iter()
            .map(|c| {
                let c = c.unwrap();
                (c, kept_edges.remove(&c).unwrap_or_else(|| xc.clone()))
            })
            .collect();
    }
    for (lo, hi, from) in traps {
        out.push(CellGeom::Trapezoid(Trap { xl: from, xr: t.xr.clone(), bottom: lo, top: hi }));
    }
    for (c, from) in edges {
        out.push(CellGeom::Edge { curve: c, xl: from, xr: t.xr.clone() });
    }
    out
}

impl<S: Scalar> Ctx<'_, S> {
    /// Subcells of `geoms`, classifying the curves listed in `cands`
    /// (parent ranks) and inheriting every other code from `base`.
    fn classify_all(
        &self,
        parent_curves: &[CurveId],
        geoms: Vec<CellGeom<S>>,
        base: &[CellRelation],
        cands: &[u32],
        t_leaf: usize,
    ) -> Vec<Subcell<S>> {
        geoms
            .into_iter()
            .map(|geom| {
                let mut codes = base.to_vec();
                let mut crossing = Vec::new();
                for &k in cands {
                    let rel = self.arr.classify(&geom, parent_curves[k as usize]);
                    codes[k as usize] = rel.code();
                    if rel.crosses() {
                        crossing.push((k, rel));
                    }
                }
                let kind = match &geom {
                    CellGeom::Vertex { .. } => SubcellKind::Vertex,
                    CellGeom::Wall { .. } | CellGeom::Edge { .. } => SubcellKind::Segment,
                    CellGeom::Trapezoid(_) if crossing.len() <= t_leaf => SubcellKind::Leaf,
                    CellGeom::Trapezoid(_) => SubcellKind::Internal,
                };
                Subcell { geom, kind, codes, crossing }
            })
            .collect()
    }

    fn settle(
        &self,
        parent_curves: &[CurveId],
        sub: Subcell<S>,
        target: usize,
        t_leaf: usize,
        cost: &BitCost,
        out: &mut Vec<Subcell<S>>,
    ) {
        if sub.crossing.len() <= target {
            out.push(sub);
            return;
        }
        let cands: Vec<u32> = sub.crossing.iter().map(|(k, _)| *k).collect();
        let geoms = match &sub.geom {
            CellGeom::Trapezoid(trap) => self.split_trap(parent_curves, trap, &sub.crossing, target, cost),
            CellGeom::Edge { curve, xl, xr } => {
                let mut xs: Vec<&Frac<S>> = sub
                    .crossing
                    .iter()
                    .map(|(_, rel)| match rel {
                        Relation::CrossEdge { x, .. } => x,
                        _ => unreachable!("edges are crossed at a point"),
                    })
                    .collect();
                xs.sort();
                let x = xs[xs.len() / 2].clone();
                vec![
                    CellGeom::Edge { curve: *curve, xl: xl.clone(), xr: XCoord::At(x.clone()) },
                    CellGeom::Vertex { x: x.clone(), through: *curve },
                    CellGeom::Edge { curve: *curve, xl: XCoord::At(x), xr: xr.clone() },
                ]
            }
            CellGeom::Wall { x, lower, upper } => {
                let xc = XCoord::At(x.clone());
                let mut cs: Vec<CurveId> = cands.iter().map(|&k| parent_curves[k as usize]).collect();
                cs.sort_by(|&a, &b| self.arr.cmp_at(a, b, &xc));
                let mid = cs[cs.len() / 2];
                vec![
                    CellGeom::Wall { x: x.clone(), lower: *lower, upper: Some(mid) },
                    CellGeom::Vertex { x: x.clone(), through: mid },
                    CellGeom::Wall { x: x.clone(), lower: Some(mid), upper: *upper },
                ]
            }
            CellGeom::Vertex { .. } => unreachable!("vertices are never crossed"),
        };
        for s in self.classify_all(parent_curves, geoms, &sub.codes, &cands, t_leaf) {
            self.settle(parent_curves, s, target, t_leaf, cost, out);
        }
    }

    /// Cheapest of a few single-curve and vertical splits of an overloaded
    /// trapezoid, scored by the load of the pieces.
    fn split_trap(
        &self,
        parent_curves: &[CurveId],
        trap: &Trap<S>,
        crossing: &[(u32, Relation<S>)],
        target: usize,
        cost: &BitCost,
    ) -> Vec<CellGeom<S>> {
        let cs: Vec<CurveId> = crossing.iter().map(|(k, _)| parent_curves[*k as usize]).collect();
        let mut curves = if cs.len() <= EXHAUSTIVE_SPLIT {
            cs.clone()
        } else {
            let median = |cmp: &dyn Fn(&CurveId, &CurveId) -> Ordering| {
                let mut v = cs.clone();
                v.sort_by(cmp);
                v[v.len() / 2]
            };
            vec![
                median(&|a, b| self.order[*a as usize].cmp(&self.order[*b as usize])),
                median(&|a, b| self.arr.cmp_right(*a, *b, &trap.xl)),
                median(&|a, b| self.arr.cmp_left(*a, *b, &trap.xr)),
            ]
        };
        curves.sort_unstable();
        curves.dedup();
        let mut options: Vec<Vec<CellGeom<S>>> = curves.into_iter().map(|c| decompose(self.arr, trap, &[c])).collect();

        let mut xs: Vec<&Frac<S>> = Vec::new();
        for (_, rel) in crossing {
            if let Relation::CrossTrap(a, b) = rel {
                for h in [a, b] {
                    if let HitKey::Bottom(x) | HitKey::Top(x) = h {
                        let xc = XCoord::At(x.clone());
                        if trap.xl < xc && xc < trap.xr {
                            xs.push(x);
                        }
                    }
                }
            }
        }
        xs.sort();
        xs.dedup();
        let curve_options = options.len();
        let mut walls: Vec<&Frac<S>> = if xs.is_empty() {
            Vec::new()
        } else {
            [1, 2, 3].iter().map(|q| xs[xs.len() * q / 4]).collect()
        };
        walls.dedup();
        for x in walls {
            let x = x.clone();
            let at = XCoord::At(x.clone());
            options.push(vec![
                CellGeom::Trapezoid(Trap { xl: trap.xl.clone(), xr: at.clone(), bottom: trap.bottom, top: trap.top }),
                CellGeom::Wall { x, lower: trap.bottom, upper: trap.top },
                CellGeom::Trapezoid(Trap { xl: at, xr: trap.xr.clone(), bottom: trap.bottom, top: trap.top }),
            ]);
        }

        let tf = target.max(1) as f64;
        let score = |geoms: &[CellGeom<S>]| -> Option<f64> {
            let mut total = 0.0;
            let mut progress = false;
            for g in geoms {
                let c = cs.iter().filter(|&&c| self.arr.classify(g, c).crosses()).count();
                progress |= g.dim() == 2 && c < cs.len();
                let over = (c as f64 / tf).max(1.0);
                let (pieces, field) =
                    if g.dim() == 2 { (3.0 * over * over - 2.0, cost.trap) } else { (2.0 * over - 1.0, cost.segment) };
                total += pieces * (cost.code + field * c as f64 / pieces);
            }
            progress.then_some(total)
        };
        let mut best: Option<(f64, usize)> = None;
        for (i, o) in options.iter().enumerate() {
            // curve splits always shrink the pieces
            let sc = if i < curve_options { score(o).or(Some(f64::MAX)) } else { score(o) };
            if let Some(sc) = sc {
                if best.is_none_or(|(b, _)| sc < b) {
                    best = Some((sc, i));
                }
            }
        }
        options.swap_remove(best.expect("a curve split is always available").1)
    }

    fn refine(&self, cell: &CellRecord<S>, target: usize, params: &CuttingParams, rng_seed: u64) -> Refinement<S> {
        let m = cell.curves.len();
        let s = params.sample_size(m);
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut picks = rand::seq::index::sample(&mut rng, m, s).into_vec();
        picks.sort_unstable();
        let sample: Vec<CurveId> = picks.iter().map(|&k| cell.curves[k]).collect();
        let geoms = decompose(self.arr, &cell.trap, &sample);
        let all: Vec<u32> = (0..m as u32).collect();
        let base = vec![CellRelation::Above; m];
        let t_leaf = params.t as usize;
        let widths = FieldWidths::for_level(self.arr.len() as u64, params.r, params.t, cell.level);
        let cost = BitCost {
            code: 2.0 * m as f64,
            trap: (2 * widths.index + widths.rank + 2) as f64,
            segment: (widths.index + 3) as f64,
        };
        let mut subcells = Vec::new();
        for sub in self.classify_all(&cell.curves, geoms, &base, &all, t_leaf) {
            self.settle(&cell.curves, sub, target, t_leaf, &cost, &mut subcells);
        }
        Refinement { subcells }
    }
}

/// Rough directory cost of one internal cell, in bits.
const DIRECTORY_ENTRY_BITS: u64 = 48;

/// Signature bits a refinement occupies: shape codes plus `m` padded
/// signatures.
pub fn block_bits<S>(refinement: &Refinement<S>, m: usize, widths: FieldWidths) -> u64 {
    let k = refinement.subcells.len() as u64;
    let mut lens = vec![2 * k; m];
    for s in &refinement.subcells {
        let extra = match s.kind {
            SubcellKind::Internal | SubcellKind::Leaf => 2 * widths.index as u64 + widths.rank as u64,
            SubcellKind::Segment => widths.index as u64 + 1,
            SubcellKind::Vertex => 0,
        };
        for (c, _) in &s.crossing {
            lens[*c as usize] += extra;
        }
    }
    2 * k + m as u64 * lens.into_iter().max().unwrap_or(0)
}

impl<S: Scalar> Ctx<'_, S> {
    /// Refines to `target` and the children on to leaves, or straight to
    /// leaves, whichever takes fewer bits.
    fn cheaper_of(&self, cell: &CellRecord<S>, target: usize, params: &CuttingParams, seed: u64, n: u64) -> Refinement<S> {
        let t = params.t as usize;
        let here = FieldWidths::for_level(n, params.r, params.t, cell.level);
        let below = FieldWidths::for_level(n, params.r, params.t, cell.level + 1);
        let two = self.refine(cell, target, params, seed);
        let mut two_bits = block_bits(&two, cell.curves.len(), here);
        for (kind, child) in child_records(cell, &two) {
            if kind == SubcellKind::Internal {
                let r = self.refine(&child, t, params, seed);
                two_bits += DIRECTORY_ENTRY_BITS + block_bits(&r, child.curves.len(), below);
            }
        }
        let one = self.refine(cell, t, params, seed);
        if block_bits(&one, cell.curves.len(), here) < two_bits {
            one
        } else {
            two
        }
    }
}

/// Refines one cell so every full-dimensional subcell is crossed by at most
/// `target` curves.
pub fn refine_cell<S: Scalar>(
    arr: &Arrangement<S>,
    order: &[u32],
    cell: &CellRecord<S>,
    target: usize,
    params: &CuttingParams,
    seed: u64,
) -> Refinement<S> {
    Ctx { arr, order }.refine(cell, target, params, seed)
}

/// What the level driver reports for each cell, in breadth-first order.
pub enum Visit<'a, S> {
    Leaf { cell: &'a CellRecord<S>, leaf_id: u64 },
    Internal {
        cell: &'a CellRecord<S>,
        internal_id: u64,
        refinement: &'a Refinement<S>,
        first_internal_child: u64,
        first_leaf_child: u64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CuttingSummary {
    /// Levels including the root level.
    pub levels: u32,
    pub internal_per_level: Vec<u64>,
    pub leaves: u64,
}

fn child_records<S: Scalar>(parent: &CellRecord<S>, refinement: &Refinement<S>) -> Vec<(SubcellKind, CellRecord<S>)> {
    refinement
        .subcells
        .iter()
        .filter_map(|s| match &s.geom {
            CellGeom::Trapezoid(t) => Some((
                s.kind,
                CellRecord {
                    level: parent.level + 1,
                    trap: t.clone(),
                    curves: s.crossing.iter().map(|(k, _)| parent.curves[*k as usize]).collect(),
                },
            )),
            _ => None,
        })
        .collect()
}

const CHUNK: usize = 64;

type Refined<S> = (Refinement<S>, Vec<(SubcellKind, CellRecord<S>)>);

/// Builds the hierarchy level by level, handing every cell to `visit`
/// in breadth-first order. Only one level is held in memory.
pub fn build_cutting_with<S: Scalar>(
    arr: &Arrangement<S>,
    params: &CuttingParams,
    mut visit: impl FnMut(Visit<'_, S>),
) -> Result<CuttingSummary, CuttingError> {
    if params.r < 2 {
        return Err(CuttingError::BadR(params.r));
    }
    if params.t < 3 {
        return Err(CuttingError::BadT(params.t));
    }
    let order = arr.ranks_at_neg_inf();
    let ctx = Ctx { arr, order: &order };
    let n = arr.len() as u64;
    let root = CellRecord { level: 0, trap: Trap::plane(), curves: (0..n as CurveId).collect() };
    let mut summary = CuttingSummary { levels: 1, ..Default::default() };
    if n <= params.t {
        visit(Visit::Leaf { cell: &root, leaf_id: 0 });
        summary.leaves = 1;
        return Ok(summary);
    }
    let mut current = vec![root];
    let mut next_internal_id = 0u64;
    let mut level = 0u32;
    while !current.is_empty() {
        summary.levels = level + 1;
        summary.internal_per_level.push(current.len() as u64);
        let level_start = next_internal_id;
        let level_len = current.len() as u64;
        let bound = cell_bound(n, params.r, params.t, level + 1) as usize;
        let mut next: Vec<CellRecord<S>> = Vec::new();
        for (chunk_idx, chunk) in current.chunks(CHUNK).enumerate() {
            let done: Vec<Refined<S>> = chunk
                .par_iter()
                .enumerate()
                .map(|(i, cell)| {
                    let idx = level_start + (chunk_idx * CHUNK + i) as u64;
                    let m = cell.curves.len();
                    let t = params.t as usize;
                    // one more level of tiny cells costs more than going straight to leaves
                    let target = if bound <= 2 * t { t } else { m.div_ceil(params.r as usize).min(bound).max(t) };
                    let seed = mix(params.seed, level, idx);
                    let refinement = if target > t && target <= params.r as usize * t {
                        ctx.cheaper_of(cell, target, params, seed, n)
                    } else {
                        ctx.refine(cell, target, params, seed)
                    };
                    let children = child_records(cell, &refinement);
                    (refinement, children)
                })
                .collect();
            for (i, (refinement, children)) in done.into_iter().enumerate() {
                let cell = &chunk[i];
                let internal_id = level_start + (chunk_idx * CHUNK + i) as u64;
                let first_internal_child = level_start + level_len + next.len() as u64;
                let first_leaf_child = summary.leaves;
                visit(Visit::Internal { cell, internal_id, refinement: &refinement, first_internal_child, first_leaf_child });
                for (kind, child) in children {
                    if kind == SubcellKind::Leaf {
                        visit(Visit::Leaf { cell: &child, leaf_id: summary.leaves });
                        summary.leaves += 1;
                    } else {
                        next.push(child);
                    }
                }
            }
        }
        next_internal_id += level_len;
        summary.levels = level + 2;
        current = next;
        level += 1;
    }
    Ok(summary)
}

/// A node of a materialised hierarchy.
#[derive(Clone, Debug)]
pub struct Node<S> {
    pub record: CellRecord<S>,
    pub parent: Option<usize>,
    /// Subcells and, for full-dimensional ones, the child node index.
    pub subcells: Vec<(CellGeom<S>, Option<usize>)>,
}

impl<S> Node<S> {
    pub fn is_leaf(&self) -> bool {
        self.subcells.is_empty()
    }
}

/// The whole hierarchy in memory, for inspection and validation.
#[derive(Clone, Debug)]
pub struct CuttingHierarchy<S> {
    pub params: CuttingParams,
    pub n: u64,
    pub levels: u32,
    /// Nodes in breadth-first order; node 0 is the root.
    pub nodes: Vec<Node<S>>,
}

pub fn build_cutting<S: Scalar>(arr: &Arrangement<S>, params: &CuttingParams) -> Result<CuttingHierarchy<S>, CuttingError> {
    let mut nodes: Vec<Node<S>> = Vec::new();
    // children of an internal node, in subcell order, are matched as they are visited
    let mut pending: std::collections::VecDeque<(usize, usize)> = Default::default();
    let mut internal_nodes: Vec<usize> = Vec::new();
    let summary = build_cutting_with(arr, params, |v| match v {
        Visit::Leaf { cell, .. } => {
            let idx = nodes.len();
            let parent = attach(&mut nodes, &mut pending, idx, cell);
            nodes.push(Node { record: cell.clone(), parent, subcells: Vec::new() });
        }
        Visit::Internal { cell, internal_id, refinement, .. } => {
            let idx = if internal_id == 0 {
                nodes.push(Node { record: cell.clone(), parent: None, subcells: Vec::new() });
                nodes.len() - 1
            } else {
                internal_nodes[internal_id as usize]
            };
            if internal_id == 0 {
                internal_nodes.push(idx);
            }
            nodes[idx].subcells = refinement.subcells.iter().map(|s| (s.geom.clone(), None)).collect();
            for (j, s) in refinement.subcells.iter().enumerate() {
                if let CellGeom::Trapezoid(_) = s.geom {
                    if s.kind == SubcellKind::Internal {
                        let child = nodes.len();
                        let mut rec = cell.clone();
                        rec.level += 1;
                        rec.curves = s.crossing.iter().map(|(k, _)| cell.curves[*k as usize]).collect();
                        if let CellGeom::Trapezoid(t) = &s.geom {
                            rec.trap = t.clone();
                        }
                        nodes.push(Node { record: rec, parent: Some(idx), subcells: Vec::new() });
                        internal_nodes.push(child);
                        nodes[idx].subcells[j].1 = Some(child);
                    } else {
                        pending.push_back((idx, j));
                    }
                }
            }
        }
    })?;
    if nodes.is_empty() {
        unreachable!("root is always visited");
    }
    Ok(CuttingHierarchy { params: params.clone(), n: arr.len() as u64, levels: summary.levels, nodes })
}

fn attach<S>(
    nodes: &mut [Node<S>],
    pending: &mut std::collections::VecDeque<(usize, usize)>,
    idx: usize,
    _cell: &CellRecord<S>,
) -> Option<usize> {
    let (p, j) = pending.pop_front()?;
    nodes[p].subcells[j].1 = Some(idx);
    Some(p)
}

/// Per-level summary produced by [`validate_cutting`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub level: u32,
    pub cells: u64,
    pub max_crossing: u64,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub levels: Vec<LevelReport>,
    pub located_crossings: u64,
    pub errors: Vec<String>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.errors.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.levels {
            writeln!(f, "level {}: {} cells, max crossing {} (bound {})", l.level, l.cells, l.max_crossing, l.bound)?;
        }
        writeln!(f, "{} crossing points located", self.located_crossings)?;
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        write!(f, "{}", if self.pass() { "pass" } else { "fail" })
    }
}

/// Checks crossing bounds, crossing lists and the partition property.
pub fn validate_cutting<S: Scalar>(arr: &Arrangement<S>, h: &CuttingHierarchy<S>) -> ValidationReport {
    let n = h.n;
    let r = h.params.r;
    let mut errors = Vec::new();
    let mut levels: Vec<LevelReport> = Vec::new();
    for (i, node) in h.nodes.iter().enumerate() {
        let lvl = node.record.level;
        while levels.len() <= lvl as usize {
            let l = levels.len() as u32;
            levels.push(LevelReport { level: l, cells: 0, max_crossing: 0, bound: cell_bound(n, r, h.params.t, l) });
        }
        let rep = &mut levels[lvl as usize];
        let m = node.record.curves.len() as u64;
        rep.cells += 1;
        rep.max_crossing = rep.max_crossing.max(m);
        if m > rep.bound {
            errors.push(format!("cell {i} at level {lvl} crossed by {m} curves, bound {}", rep.bound));
        }
        if node.is_leaf() && m > h.params.t {
            errors.push(format!("leaf {i} crossed by {m} curves, threshold {}", h.params.t));
        }
        if !node.record.curves.windows(2).all(|w| w[0] < w[1]) {
            errors.push(format!("cell {i}: crossing list not ascending"));
        }
        let expected: Vec<CurveId> = match node.parent {
            None => (0..n as CurveId).collect(),
            Some(p) => h.nodes[p]
                .record
                .curves
                .iter()
                .copied()
                .filter(|&c| arr.classify_trap(&node.record.trap, c).crosses())
                .collect(),
        };
        for c in &expected {
            if node.record.curves.binary_search(c).is_err() {
                errors.push(format!("missing curve {c} at cell {i} (level {lvl})"));
            }
        }
        for c in &node.record.curves {
            if expected.binary_search(c).is_err() {
                errors.push(format!("extra curve {c} at cell {i} (level {lvl})"));
            }
        }
    }
    let depth_cap = depth_bound(n, r, h.params.t);
    if n > h.params.t && h.levels as u64 > depth_cap + 1 {
        errors.push(format!("{} levels exceed the depth cap {}", h.levels, depth_cap + 1));
    }

    let mut located = 0u64;
    for a in 0..n as CurveId {
        for b in a + 1..n as CurveId {
            let Some(x) = arr.crossing(a, b) else { continue };
            located += 1;
            let mut node = 0usize;
            loop {
                let nd = &h.nodes[node];
                if nd.is_leaf() {
                    break;
                }
                let hits: Vec<usize> = nd
                    .subcells
                    .iter()
                    .enumerate()
                    .filter(|(_, (g, _))| arr.cell_contains(g, &x, a))
                    .map(|(j, _)| j)
                    .collect();
                if hits.len() != 1 {
                    errors.push(format!("crossing of {a} and {b} lies in {} subcells of cell {node}", hits.len()));
                    break;
                }
                match nd.subcells[hits[0]].1 {
                    Some(child) => {
                        let cl = &h.nodes[child].record.curves;
                        if cl.binary_search(&a).is_err() || cl.binary_search(&b).is_err() {
                            errors.push(format!("crossing of {a} and {b} located in cell {child} which lacks them"));
                            break;
                        }
                        node = child;
                    }
                    None => break,
                }
            }
        }
    }
    ValidationReport { levels, located_crossings: located, errors }
}

/// `ceil(log_r(n / t))`, the depth the query bound is stated against.
pub fn depth_bound(n: u64, r: u64, t: u64) -> u64 {
    let mut d = 0u64;
    let mut cap = t as u128;
    while cap < n as u128 {
        cap *= r as u128;
        d += 1;
    }
    d
}
