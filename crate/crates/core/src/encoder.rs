//! Serialises a cutting hierarchy into the self-contained byte format read
//! by `ote-decoder`.

use std::cmp::Ordering;
use std::collections::HashMap;

use ote_decoder::bits::{width_for, BitWriter};
use ote_decoder::format::{choose3, table_slot_bits, FieldWidths, Header, HEADER_LEN};
use ote_decoder::{CellRelation, Mode, OrientationSign, SubcellKind};

use crate::arrangement::{AnyArrangement, Arrangement, CellGeom, CurveId, Curve, Relation, Scalar, XCoord};
use crate::cutting::{build_cutting, build_cutting_with, validate_cutting, ValidationReport, default_t, CuttingError, CuttingParams, Refinement, Subcell, Visit, DEFAULT_R};
use crate::exact::{dual_line, shear_normalize, ExactPoint};
use crate::with_arrangement;

#[derive(Clone, Debug, PartialEq)]
pub struct EncodeOptions {
    pub r: u64,
    /// Leaf threshold; the mode's default when `None`.
    pub t: Option<u64>,
    pub seed: u64,
    pub sample_factor: f64,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions { r: DEFAULT_R, t: None, seed: 0, sample_factor: crate::cutting::DEFAULT_SAMPLE_FACTOR }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EncodeError {
    #[error("empty input")]
    Empty,
    #[error(transparent)]
    Cutting(#[from] CuttingError),
    #[error(transparent)]
    Arrangement(#[from] crate::arrangement::ArrangementError),
}

/// Curves of an input together with the label-to-curve map.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub mode: Mode,
    pub arrangement: AnyArrangement,
    /// Curve of each input label; equal labels share a curve.
    pub representative: Vec<u32>,
}

/// Merges duplicate points, shears and dualises.
pub fn prepare_points(points: &[ExactPoint]) -> Result<Prepared, EncodeError> {
    if points.is_empty() {
        return Err(EncodeError::Empty);
    }
    let mut first: HashMap<&ExactPoint, u32> = HashMap::new();
    let mut distinct: Vec<ExactPoint> = Vec::new();
    let representative = points
        .iter()
        .map(|p| {
            *first.entry(p).or_insert_with(|| {
                distinct.push(p.clone());
                distinct.len() as u32 - 1
            })
        })
        .collect();
    let (sheared, _) = shear_normalize(&distinct);
    let curves: Vec<Curve> = sheared
        .iter()
        .map(|p| {
            let (m, c) = dual_line(p);
            Curve::line(m, c)
        })
        .collect();
    Ok(Prepared { mode: Mode::Realizable, arrangement: AnyArrangement::build(&curves)?, representative })
}

impl Prepared {
    pub fn n(&self) -> u64 {
        self.representative.len() as u64
    }

    pub fn curves(&self) -> u64 {
        self.arrangement.len() as u64
    }

    pub fn params(&self, opts: &EncodeOptions) -> CuttingParams {
        let t = opts.t.unwrap_or_else(|| default_t(self.n(), self.mode == Mode::Abstract));
        CuttingParams { r: opts.r, t, seed: opts.seed, sample_factor: opts.sample_factor }
    }
}

/// Boundary positions of one subcell: per crossing curve (in the subcell's
/// crossing order) two indices for a trapezoid, or index and direction bit
/// for a segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    pub positions: u64,
    pub fields: Vec<(u64, u64)>,
}

fn rank_distinct<T>(items: &[T], cmp: impl Fn(&T, &T) -> Ordering) -> (Vec<u64>, u64) {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| cmp(&items[a], &items[b]));
    let mut pos = vec![0u64; items.len()];
    let mut p = 0u64;
    for (i, &k) in order.iter().enumerate() {
        if i > 0 && cmp(&items[order[i - 1]], &items[k]) != Ordering::Equal {
            p += 1;
        }
        pos[k] = p;
    }
    let count = if items.is_empty() { 0 } else { p + 1 };
    (pos, count)
}

/// Cyclic (trapezoid) or linear (segment) order of the boundary hits.
pub fn build_permutation<S: Scalar>(arr: &Arrangement<S>, parent_curves: &[CurveId], sub: &Subcell<S>) -> Permutation {
    match &sub.geom {
        CellGeom::Trapezoid(t) => {
            let keys: Vec<_> = sub
                .crossing
                .iter()
                .flat_map(|(_, rel)| match rel {
                    Relation::CrossTrap(p, q) => [p.clone(), q.clone()],
                    _ => unreachable!("trapezoid crossings carry two hits"),
                })
                .collect();
            let (pos, positions) = rank_distinct(&keys, |p, q| arr.cmp_hits(t, p, q));
            Permutation { positions, fields: pos.chunks(2).map(|c| (c[0], c[1])).collect() }
        }
        CellGeom::Edge { .. } => {
            let xs: Vec<_> = sub
                .crossing
                .iter()
                .map(|(_, rel)| match rel {
                    Relation::CrossEdge { x, above_left } => (x.clone(), *above_left),
                    _ => unreachable!("edge crossings carry a point"),
                })
                .collect();
            let (pos, positions) = rank_distinct(&xs, |a, b| a.0.cmp(&b.0));
            Permutation { positions, fields: pos.iter().zip(&xs).map(|(&p, x)| (p, x.1 as u64)).collect() }
        }
        CellGeom::Wall { x, .. } => {
            let xc = XCoord::At(x.clone());
            let cs: Vec<CurveId> = sub.crossing.iter().map(|(k, _)| parent_curves[*k as usize]).collect();
            let (pos, positions) = rank_distinct(&cs, |&a, &b| arr.cmp_at(a, b, &xc));
            Permutation { positions, fields: pos.into_iter().map(|p| (p, 1)).collect() }
        }
        CellGeom::Vertex { .. } => Permutation { positions: 0, fields: Vec::new() },
    }
}

/// One cell's block: shape descriptors then one fixed-width signature per
/// crossing curve. Returns the block and the signature width.
pub fn build_signatures<S: Scalar>(
    arr: &Arrangement<S>,
    parent_curves: &[CurveId],
    refinement: &Refinement<S>,
    widths: FieldWidths,
) -> (BitWriter, u64) {
    let m = parent_curves.len();
    let subs = &refinement.subcells;
    let perms: Vec<Permutation> = subs.iter().map(|s| build_permutation(arr, parent_curves, s)).collect();
    let extra = |kind: SubcellKind| -> u64 {
        match kind {
            SubcellKind::Internal | SubcellKind::Leaf => 2 * widths.index as u64 + widths.rank as u64,
            SubcellKind::Segment => widths.index as u64 + 1,
            SubcellKind::Vertex => 0,
        }
    };
    let mut lens = vec![2 * subs.len() as u64; m];
    for s in subs {
        for (k, _) in &s.crossing {
            lens[*k as usize] += extra(s.kind);
        }
    }
    let zeta = lens.iter().copied().max().unwrap_or(0);
    let mut block = BitWriter::new();
    for s in subs {
        block.push(s.kind as u64, 2);
    }
    let mut cursor = vec![0usize; subs.len()];
    let fits = |v: u64, w: u32| w == 64 || v >> w == 0;
    for k in 0..m {
        let start = block.len();
        for (j, s) in subs.iter().enumerate() {
            let code = s.codes[k];
            block.push(code as u64, 2);
            if code != CellRelation::Crosses {
                continue;
            }
            let i = cursor[j];
            cursor[j] += 1;
            debug_assert_eq!(s.crossing[i].0 as usize, k);
            let (f1, f2) = perms[j].fields[i];
            match s.kind {
                SubcellKind::Internal | SubcellKind::Leaf => {
                    assert!(fits(f1, widths.index) && fits(f2, widths.index) && fits(i as u64, widths.rank));
                    block.push(f1, widths.index);
                    block.push(f2, widths.index);
                    block.push(i as u64, widths.rank);
                }
                SubcellKind::Segment => {
                    assert!(fits(f1, widths.index), "segment position {f1} overflows {} bits", widths.index);
                    block.push(f1, widths.index);
                    block.push(f2, 1);
                }
                SubcellKind::Vertex => unreachable!("vertices are never crossed"),
            }
        }
        let used = block.len() - start;
        block.push(0, 0);
        let mut pad = zeta - used;
        while pad > 0 {
            let w = pad.min(64) as u32;
            block.push(0, w);
            pad -= w as u64;
        }
    }
    (block, zeta)
}

/// The full chirotope of a leaf's curves under local labels `0..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeafTable {
    pub m: u64,
    /// One code per triple in lexicographic order.
    pub codes: Vec<u8>,
}

/// Orientation of curves `(a, b, c)` from the arrangement: the side of the
/// crossing of `a` and `b` relative to `c`, times the order of `a`, `b`
/// at `-inf`.
pub fn curve_chirotope<S: Scalar>(arr: &Arrangement<S>, rank: &[u32], a: CurveId, b: CurveId, c: CurveId) -> OrientationSign {
    if a == b || b == c || a == c {
        return OrientationSign::Zero;
    }
    let side = arr.side_of_crossing(a, b, c).expect("curves of an arrangement cross");
    side.times(OrientationSign::from_ordering(rank[b as usize].cmp(&rank[a as usize])))
}

pub fn build_leaf_table<S: Scalar>(arr: &Arrangement<S>, rank: &[u32], curves: &[CurveId]) -> LeafTable {
    let m = curves.len();
    let mut codes = Vec::with_capacity(choose3(m as u64) as usize);
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                codes.push(curve_chirotope(arr, rank, curves[i], curves[j], curves[k]).to_code() as u8);
            }
        }
    }
    LeafTable { m: m as u64, codes }
}

/// Signature, directory and table data gathered while walking the hierarchy.
#[derive(Default)]
struct Sections {
    signatures: BitWriter,
    directory: Vec<[u64; 3]>,
    leaf_pointers: Vec<u64>,
    tables: Vec<LeafTable>,
    table_index: HashMap<LeafTable, u64>,
}

impl Sections {
    fn visit<S: Scalar>(&mut self, arr: &Arrangement<S>, rank: &[u32], curves: u64, params: &CuttingParams, v: Visit<'_, S>) {
        match v {
            Visit::Leaf { cell, leaf_id } => {
                debug_assert_eq!(leaf_id as usize, self.leaf_pointers.len());
                if cell.curves.len() <= 2 {
                    self.leaf_pointers.push(0);
                    return;
                }
                let table = build_leaf_table(arr, rank, &cell.curves);
                let next = self.tables.len() as u64;
                let id = *self.table_index.entry(table.clone()).or_insert_with(|| next);
                if id == next {
                    self.tables.push(table);
                }
                self.leaf_pointers.push(id + 1);
            }
            Visit::Internal { cell, internal_id, refinement, .. } => {
                debug_assert_eq!(internal_id as usize, self.directory.len());
                let widths = FieldWidths::for_level(curves, params.r, params.t, cell.level);
                let (block, zeta) = build_signatures(arr, &cell.curves, refinement, widths);
                let offset = self.signatures.len();
                self.signatures.append(&block);
                self.directory.push([offset, refinement.subcells.len() as u64, zeta]);
            }
        }
    }
}

fn packed(words: &[u64], values: impl Iterator<Item = u64>, width: u32) -> Vec<u8> {
    let mut w = BitWriter::new();
    for v in words {
        w.push(*v, 64);
    }
    for v in values {
        w.push(v, width);
    }
    w.into_bytes()
}

/// Assembles the header and sections.
pub fn serialize(mode: Mode, n: u64, params: &CuttingParams, levels: u64, sections: Vec<Vec<u8>>) -> Vec<u8> {
    let mut offsets = [0u64; 6];
    let mut at = HEADER_LEN as u64;
    for (k, s) in sections.iter().enumerate() {
        offsets[k] = at;
        at += s.len() as u64;
    }
    let header = Header { mode, n, r: params.r, t: params.t, levels, offsets };
    let mut out = header.to_bytes();
    for s in sections {
        out.extend_from_slice(&s);
    }
    out
}

fn encode_with<S: Scalar>(prep: &Prepared, arr: &Arrangement<S>, params: &CuttingParams) -> Result<Vec<u8>, EncodeError> {
    let curves = arr.len() as u64;
    let rank = arr.ranks_at_neg_inf();
    let mut sec = Sections::default();
    let summary = build_cutting_with(arr, params, |v| sec.visit(arr, &rank, curves, params, v))?;

    let cw = width_for(curves.saturating_sub(1));
    let slope = packed(&[curves, cw as u64], rank.iter().map(|&r| r as u64), cw);
    let dup = packed(&[prep.n(), cw as u64], prep.representative.iter().map(|&r| r as u64), cw);

    let mut dir_words = vec![sec.directory.len() as u64, summary.internal_per_level.len() as u64];
    dir_words.extend(&summary.internal_per_level);
    let mut dw = [0u32; 3];
    for e in &sec.directory {
        for (k, w) in dw.iter_mut().enumerate() {
            *w = (*w).max(width_for(e[k]));
        }
    }
    dir_words.extend(dw.iter().map(|&w| w as u64));
    let mut dir = BitWriter::new();
    for v in &dir_words {
        dir.push(*v, 64);
    }
    for e in &sec.directory {
        for k in 0..3 {
            dir.push(e[k], dw[k]);
        }
    }

    let mut sig = BitWriter::new();
    sig.push(sec.signatures.len(), 64);
    sig.append(&sec.signatures);

    let psi = width_for(sec.tables.len() as u64);
    let leaves = packed(&[sec.leaf_pointers.len() as u64, psi as u64], sec.leaf_pointers.iter().copied(), psi);

    let slot = table_slot_bits(params.t);
    let mw = width_for(params.t);
    let mut tables = BitWriter::new();
    for v in [sec.tables.len() as u64, params.t, slot] {
        tables.push(v, 64);
    }
    for tb in &sec.tables {
        let start = tables.len();
        tables.push(tb.m, mw);
        for &c in &tb.codes {
            tables.push(c as u64, 2);
        }
        tables.pad_to(start + slot);
    }

    Ok(serialize(
        prep.mode,
        prep.n(),
        params,
        summary.levels as u64,
        vec![slope, dup, dir.into_bytes(), sig.into_bytes(), leaves, tables.into_bytes()],
    ))
}

/// Encodes prepared curves.
pub fn encode_prepared(prep: &Prepared, opts: &EncodeOptions) -> Result<Vec<u8>, EncodeError> {
    let params = prep.params(opts);
    with_arrangement!(&prep.arrangement, a => encode_with(prep, a, &params))
}

/// Builds the cutting hierarchy the encoder would serialise and checks it.
pub fn validate_prepared(prep: &Prepared, opts: &EncodeOptions) -> Result<ValidationReport, EncodeError> {
    let params = prep.params(opts);
    with_arrangement!(&prep.arrangement, a => Ok(validate_cutting(a, &build_cutting(a, &params)?)))
}

/// Encodes the order type of a point set.
pub fn encode_points(points: &[ExactPoint], opts: &EncodeOptions) -> Result<Vec<u8>, EncodeError> {
    encode_prepared(&prepare_points(points)?, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::PlCurve;
    use crate::exact::orient;
    use ote_decoder::format::Section;
    use ote_decoder::Encoding;

    fn pts(v: &[(i64, i64)]) -> Vec<ExactPoint> {
        v.iter().map(|&(x, y)| ExactPoint::from_ints(x, y)).collect()
    }

    #[test]
    fn three_points_single_leaf() {
        let bytes = encode_points(&pts(&[(0, 0), (1, 0), (0, 1)]), &EncodeOptions::default()).unwrap();
        assert_eq!(&bytes[..4], b"OTE1");
        let enc = Encoding::parse(&bytes).unwrap();
        assert_eq!(enc.levels(), 1);
        assert_eq!(enc.query(0, 1, 2).unwrap(), OrientationSign::Positive);
        let (s, trace) = enc.query_traced(0, 1, 2).unwrap();
        assert_eq!(s, OrientationSign::Positive);
        assert_eq!(trace.step_count(), 1);
        assert_eq!(trace.terminal, ote_decoder::Terminal::LeafTable);
        assert_eq!(enc.query(0, 0, 2).unwrap(), OrientationSign::Zero);
        assert!(enc.query(0, 1, 3).is_err());
    }

    #[test]
    fn positive_leaf_table_slot_zero() {
        let p = prepare_points(&pts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        let AnyArrangement::Small(a) = &p.arrangement else { panic!() };
        let rank = a.ranks_at_neg_inf();
        let table = build_leaf_table(a, &rank, &[0, 1, 2]);
        assert_eq!(table.codes, vec![OrientationSign::Positive.to_code() as u8]);
    }

    #[test]
    fn small_leaves_get_sentinel() {
        let bytes = encode_points(&pts(&[(0, 0), (1, 1)]), &EncodeOptions::default()).unwrap();
        let enc = Encoding::parse(&bytes).unwrap();
        assert_eq!(enc.leaf_pointer(0).unwrap(), 0);
        assert_eq!(enc.table_count(), 0);
    }

    #[test]
    fn permutations_alternate_iff_inside() {
        let lines = [(1i128, 0i128), (-1, 2), (3, -1), (-2, -7), (5, 4), (-4, 9), (2, 3)];
        let arr = Arrangement::new(lines.iter().map(|&(a, b)| PlCurve::line(a, b)).collect());
        let h = build_cutting(&arr, &CuttingParams::new(2, 3, 5)).unwrap();
        let order = arr.ranks_at_neg_inf();
        let root = &h.nodes[0].record;
        let refinement = crate::cutting::refine_cell(&arr, &order, root, 4, &h.params, 99);
        for s in &refinement.subcells {
            let CellGeom::Trapezoid(_) = &s.geom else { continue };
            let perm = build_permutation(&arr, &root.curves, s);
            for (i, (ka, _)) in s.crossing.iter().enumerate() {
                for (j, (kb, _)) in s.crossing.iter().enumerate().skip(i + 1) {
                    let (a, b) = (root.curves[*ka as usize], root.curves[*kb as usize]);
                    let x = arr.crossing(a, b).unwrap();
                    let inside = arr.cell_contains(&s.geom, &x, a);
                    let alt = crate::arrangement::alternates(perm.fields[i], perm.fields[j]);
                    assert_eq!(inside, alt, "curves {a} {b}");
                }
            }
        }
    }

    #[test]
    fn concurrent_edge_position_shared() {
        // y=0, y=x, y=-x meet at the origin; an edge of y=0 through it
        let arr = Arrangement::new(vec![PlCurve::line(0i128, 0), PlCurve::line(1, 0), PlCurve::line(-1, 0)]);
        let geom = CellGeom::Edge {
            curve: 0,
            xl: XCoord::At(crate::arrangement::Frac::int(-1)),
            xr: XCoord::At(crate::arrangement::Frac::int(1)),
        };
        let crossing: Vec<(u32, Relation<i128>)> = vec![(1, arr.classify(&geom, 1)), (2, arr.classify(&geom, 2))];
        let sub = Subcell { geom, kind: SubcellKind::Segment, codes: vec![], crossing };
        let perm = build_permutation(&arr, &[0, 1, 2], &sub);
        assert_eq!(perm.positions, 1);
        assert_eq!(perm.fields[0].0, perm.fields[1].0);
    }

    #[test]
    fn round_trip_n10() {
        let p = pts(&[(3, 1), (7, 2), (1, 8), (9, 9), (4, 4), (2, 6), (8, 3), (5, 7), (6, 5), (0, 2)]);
        let opts = EncodeOptions::default();
        let bytes = encode_points(&p, &opts).unwrap();
        let again = encode_points(&p, &opts).unwrap();
        assert_eq!(bytes, again);
        let enc = Encoding::parse(&bytes).unwrap();
        assert_eq!(enc.n(), 10);
        assert_eq!(enc.header().r, 4);
        for a in 0..10 {
            for b in 0..10 {
                for c in 0..10 {
                    let want = orient(&p[a], &p[b], &p[c]);
                    assert_eq!(enc.query(a as u64, b as u64, c as u64).unwrap(), want, "({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn round_trip_deep_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let p: Vec<ExactPoint> =
            (0..70).map(|_| ExactPoint::from_ints(rng.gen_range(0..343_000), rng.gen_range(0..343_000))).collect();
        let bytes = encode_points(&p, &EncodeOptions::default()).unwrap();
        let enc = Encoding::parse(&bytes).unwrap();
        assert!(enc.levels() >= 3);
        for a in 0..70 {
            for b in a + 1..70 {
                for c in b + 1..70 {
                    let want = orient(&p[a], &p[b], &p[c]);
                    assert_eq!(enc.query(a as u64, b as u64, c as u64).unwrap(), want, "({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn signature_addresses_recomputed() {
        use ote_decoder::bits::BitReader;
        let p: Vec<ExactPoint> = (0..40i64).map(|i| ExactPoint::from_ints((i * 37) % 101, (i * i * 13) % 97)).collect();
        let prep = prepare_points(&p).unwrap();
        let opts = EncodeOptions::default();
        let bytes = encode_prepared(&prep, &opts).unwrap();
        let enc = Encoding::parse(&bytes).unwrap();
        let AnyArrangement::Small(arr) = &prep.arrangement else { panic!() };
        let params = prep.params(&opts);
        let sig_start = enc.header().offsets[Section::Signatures as usize] * 8 + 64;
        let reader = BitReader::new(&bytes);
        let mut checked = 0;
        build_cutting_with(arr, &params, |v| {
            if let Visit::Internal { cell, internal_id, refinement, .. } = v {
                let widths = FieldWidths::for_level(arr.len() as u64, params.r, params.t, cell.level);
                let (block, zeta) = build_signatures(arr, &cell.curves, refinement, widths);
                let e = enc.directory_entry(internal_id).unwrap();
                assert_eq!(e.zeta, zeta);
                let k = refinement.subcells.len() as u64;
                let own = BitReader::new(block.as_bytes());
                for l in 0..cell.curves.len() as u64 {
                    let pos = sig_start + e.block + 2 * k + l * zeta;
                    let mut off = 0;
                    while off < zeta {
                        let w = (zeta - off).min(64) as u32;
                        assert_eq!(reader.get(pos + off, w), own.get(2 * k + l * zeta + off, w));
                        off += w as u64;
                    }
                    checked += 1;
                }
            }
        })
        .unwrap();
        assert!(checked > 40);
    }
}
