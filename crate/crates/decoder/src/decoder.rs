//! Orientation queries answered from encoding bytes alone.

use crate::bits::{BitCursor, BitReader};
use crate::error::DecodeError;
use crate::format::{
    lex_triple_index, read_u64, CellRelation, FieldWidths, Header, Mode, OrientationSign,
    Section, SubcellKind, HEADER_LEN, SECTION_COUNT,
};

/// Bit-packed array of equal-width unsigned integers.
#[derive(Debug, Clone, Copy)]
struct Packed {
    base: u64,
    width: u32,
    len: u64,
}

impl Packed {
    fn get(&self, reader: &BitReader<'_>, i: u64) -> Result<u64, DecodeError> {
        if i >= self.len {
            return Err(DecodeError::Malformed(format!("packed index {i} >= {}", self.len)));
        }
        reader
            .get(self.base + i * self.width as u64, self.width)
            .ok_or_else(|| DecodeError::Truncated("packed array".into()))
    }
}

/// One internal cell of the hierarchy as stored in the cell directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectoryEntry {
    /// Bit offset of the cell's block inside the signature section payload.
    pub block: u64,
    pub subcells: u64,
    /// Width of every signature in this cell's block.
    pub zeta: u64,
    /// Id of the internal cell refining this cell's first internal subcell.
    pub first_internal_child: u64,
    /// Id of the leaf for this cell's first leaf subcell.
    pub first_leaf_child: u64,
}

/// Stored fields per directory entry: block offset, subcell count, zeta.
const DIRECTORY_FIELDS: usize = 3;

#[derive(Debug, Clone)]
struct Directory {
    count: u64,
    per_level: Vec<u64>,
    widths: [u32; DIRECTORY_FIELDS],
    base: u64,
    /// First internal and first leaf child of every cell, recovered from
    /// the shape codes at parse time.
    children: Vec<(u64, u64)>,
}

impl Directory {
    fn entry_bits(&self) -> u64 {
        self.widths.iter().map(|&w| w as u64).sum()
    }
}

/// How a query was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    AnsweredAbove,
    AnsweredBelow,
    AnsweredOn,
    LeafTable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub level: u32,
    /// Internal cell id, or leaf id when `relation` is `None`.
    pub cell: u64,
    /// Subcell holding the crossing of the first two curves.
    pub subcell: Option<u64>,
    pub relation: Option<CellRelation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryTrace {
    pub steps: Vec<TraceStep>,
    pub terminal: Terminal,
}

impl QueryTrace {
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }
}

/// A parsed, read-only view of an encoding.
#[derive(Debug, Clone)]
pub struct Encoding<'a> {
    bytes: &'a [u8],
    reader: BitReader<'a>,
    header: Header,
    curves: u64,
    slope: Packed,
    dup: Packed,
    dir: Directory,
    sig_base: u64,
    sig_used: u64,
    leaves: Packed,
    tables: Packed,
    table_t: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Entry {
    code: u64,
    a: u64,
    b: u64,
    rank: u64,
}

impl Entry {
    fn relation(&self) -> CellRelation {
        CellRelation::from_code(self.code)
    }
}

fn read_stored(reader: &BitReader<'_>, dir: &Directory, cell: u64) -> Result<[u64; DIRECTORY_FIELDS], DecodeError> {
    let mut c = BitCursor::new(*reader, dir.base + cell * dir.entry_bits());
    let mut f = [0u64; DIRECTORY_FIELDS];
    for (k, v) in f.iter_mut().enumerate() {
        *v = c.read(dir.widths[k]).ok_or_else(|| truncated("directory entry"))?;
    }
    Ok(f)
}

/// Children are numbered breadth first, so a cell's first child follows
/// the children of every earlier cell.
fn child_links(
    reader: &BitReader<'_>,
    dir: &Directory,
    sig_base: u64,
    sig_used: u64,
    leaves: u64,
) -> Result<Vec<(u64, u64)>, DecodeError> {
    let mut out = Vec::with_capacity(dir.count as usize);
    let (mut internal, mut leaf) = (1u64, 0u64);
    for cell in 0..dir.count {
        out.push((internal, leaf));
        let [block, subcells, _] = read_stored(reader, dir, cell)?;
        if block.checked_add(2 * subcells).is_none_or(|end| end > sig_used) {
            return malformed(format!("cell {cell}: shape codes beyond the signature payload"));
        }
        for j in 0..subcells {
            match SubcellKind::from_code(reader.get(sig_base + block + 2 * j, 2).ok_or_else(|| truncated("shape"))?) {
                SubcellKind::Internal => internal += 1,
                SubcellKind::Leaf => leaf += 1,
                _ => {}
            }
        }
    }
    if dir.count > 0 && (internal != dir.count || leaf != leaves) {
        return malformed(format!(
            "shape codes name {} internal cells and {leaf} leaves, directories hold {} and {leaves}",
            internal,
            dir.count
        ));
    }
    Ok(out)
}

fn malformed<T>(msg: impl Into<String>) -> Result<T, DecodeError> {
    Err(DecodeError::Malformed(msg.into()))
}

fn truncated(what: &str) -> DecodeError {
    DecodeError::Truncated(what.to_string())
}

impl<'a> Encoding<'a> {
    /// Parses the header and section preambles. Section bounds are
    /// validated here; per-query reads are still bounds-checked.
    pub fn parse(bytes: &'a [u8]) -> Result<Encoding<'a>, DecodeError> {
        let header = Header::parse(bytes)?;
        let reader = BitReader::new(bytes);
        let range = |s: Section| header.section_range(s, bytes.len());
        let words = |s: Section, k: usize| -> Result<Vec<u64>, DecodeError> {
            let r = range(s);
            (0..k)
                .map(|i| {
                    let at = r.start + 8 * i;
                    if at + 8 > r.end {
                        return Err(DecodeError::Truncated(format!("{} preamble", s.name())));
                    }
                    read_u64(bytes, at).ok_or_else(|| truncated(s.name()))
                })
                .collect()
        };
        let packed = |s: Section, skip: usize, width: u64, len: u64, max_width: u64| -> Result<Packed, DecodeError> {
            if width > max_width {
                return malformed(format!("{} field width {width}", s.name()));
            }
            let r = range(s);
            let base = (r.start + 8 * skip) as u64 * 8;
            let need = width.checked_mul(len).ok_or_else(|| truncated(s.name()))?;
            if base + need > r.end as u64 * 8 {
                return Err(DecodeError::Truncated(format!("{} payload", s.name())));
            }
            Ok(Packed { base, width: width as u32, len })
        };

        let so = words(Section::SlopeOrder, 2)?;
        let curves = so[0];
        let slope = packed(Section::SlopeOrder, 2, so[1], curves, 64)?;
        let dm = words(Section::DupMap, 2)?;
        if dm[0] != header.n {
            return malformed(format!("dup map covers {} ids, header says {}", dm[0], header.n));
        }
        let dup = packed(Section::DupMap, 2, dm[1], header.n, 64)?;

        let d0 = words(Section::CellDirectory, 2)?;
        let (count, nlev) = (d0[0], d0[1]);
        if nlev > 64 {
            return malformed(format!("{nlev} directory levels"));
        }
        let d1 = words(Section::CellDirectory, 2 + nlev as usize + DIRECTORY_FIELDS)?;
        let per_level = d1[2..2 + nlev as usize].to_vec();
        if per_level.iter().sum::<u64>() != count {
            return malformed("directory level counts do not add up");
        }
        let mut widths = [0u32; DIRECTORY_FIELDS];
        for (k, w) in widths.iter_mut().enumerate() {
            let v = d1[2 + nlev as usize + k];
            if v > 64 {
                return malformed("directory field width > 64");
            }
            *w = v as u32;
        }
        let entry_bits: u64 = widths.iter().map(|&w| w as u64).sum();
        let dir_packed =
            packed(Section::CellDirectory, 2 + nlev as usize + DIRECTORY_FIELDS, entry_bits, count, 192)?;
        let mut dir = Directory { count, per_level, widths, base: dir_packed.base, children: Vec::new() };

        let sw = words(Section::Signatures, 1)?;
        let sig_range = range(Section::Signatures);
        let sig_base = (sig_range.start as u64 + 8) * 8;
        let sig_used = sw[0];
        if sig_base + sig_used > sig_range.end as u64 * 8 {
            return Err(truncated("signature payload"));
        }

        let lw = words(Section::LeafDirectory, 2)?;
        let leaves = packed(Section::LeafDirectory, 2, lw[1], lw[0], 64)?;
        let tw = words(Section::Tables, 3)?;
        let tables = packed(Section::Tables, 3, tw[2], tw[0], u32::MAX as u64)?;
        let table_t = tw[1];

        if header.n > 0 && curves == 0 {
            return malformed("no curves for non-empty input");
        }
        dir.children = child_links(&reader, &dir, sig_base, sig_used, leaves.len)?;
        Ok(Encoding {
            bytes,
            reader,
            header,
            curves,
            slope,
            dup,
            dir,
            sig_base,
            sig_used,
            leaves,
            tables,
            table_t,
        })
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    pub fn mode(&self) -> Mode {
        self.header.mode
    }

    /// Number of input labels.
    pub fn n(&self) -> u64 {
        self.header.n
    }

    /// Number of distinct curves after merging duplicate inputs.
    pub fn curves(&self) -> u64 {
        self.curves
    }

    pub fn levels(&self) -> u64 {
        self.header.levels
    }

    pub fn internal_cells(&self) -> u64 {
        self.dir.count
    }

    pub fn internal_cells_per_level(&self) -> &[u64] {
        &self.dir.per_level
    }

    pub fn leaf_count(&self) -> u64 {
        self.leaves.len
    }

    pub fn table_count(&self) -> u64 {
        self.tables.len
    }

    /// Representative curve of an input label.
    pub fn representative(&self, id: u64) -> Result<u64, DecodeError> {
        let rep = self.dup.get(&self.reader, id)?;
        if rep >= self.curves {
            return malformed(format!("representative {rep} >= {}", self.curves));
        }
        Ok(rep)
    }

    /// Position of a curve in the slope order (top-to-bottom order far left).
    pub fn slope_rank(&self, curve: u64) -> Result<u64, DecodeError> {
        self.slope.get(&self.reader, curve)
    }

    pub fn directory_entry(&self, cell: u64) -> Result<DirectoryEntry, DecodeError> {
        if cell >= self.dir.count {
            return malformed(format!("cell {cell} >= {}", self.dir.count));
        }
        let [block, subcells, zeta] = read_stored(&self.reader, &self.dir, cell)?;
        let (first_internal_child, first_leaf_child) = self.dir.children[cell as usize];
        Ok(DirectoryEntry { block, subcells, zeta, first_internal_child, first_leaf_child })
    }

    /// Table pointer of a leaf: `0` means no table (fewer than three curves).
    pub fn leaf_pointer(&self, leaf: u64) -> Result<u64, DecodeError> {
        self.leaves.get(&self.reader, leaf)
    }

    /// Orientation of labels `(a, b, c)`, 0-based.
    pub fn query(&self, a: u64, b: u64, c: u64) -> Result<OrientationSign, DecodeError> {
        self.run(a, b, c, None)
    }

    pub fn query_traced(
        &self,
        a: u64,
        b: u64,
        c: u64,
    ) -> Result<(OrientationSign, QueryTrace), DecodeError> {
        let mut trace = QueryTrace { steps: Vec::new(), terminal: Terminal::AnsweredOn };
        let sign = self.run(a, b, c, Some(&mut trace))?;
        Ok((sign, trace))
    }

    fn run(
        &self,
        a: u64,
        b: u64,
        c: u64,
        mut trace: Option<&mut QueryTrace>,
    ) -> Result<OrientationSign, DecodeError> {
        for idx in [a, b, c] {
            if idx >= self.header.n {
                return Err(DecodeError::IndexOutOfRange { index: idx, n: self.header.n });
            }
        }
        let (ra, rb, rc) = (self.representative(a)?, self.representative(b)?, self.representative(c)?);
        if ra == rb || rb == rc || ra == rc {
            if let Some(t) = trace.as_deref_mut() {
                t.terminal = Terminal::AnsweredOn;
            }
            return Ok(OrientationSign::Zero);
        }
        let slope_sign = {
            let (sa, sb) = (self.slope_rank(ra)?, self.slope_rank(rb)?);
            OrientationSign::from_ordering(sb.cmp(&sa))
        };
        if self.dir.count == 0 {
            // The root is itself a leaf, labelled by curve index.
            return self.leaf_answer(0, 0, [ra, rb, rc], trace);
        }

        let mut cell = 0u64;
        let mut level = 0u32;
        let mut labels = [ra, rb, rc];
        loop {
            if level as u64 >= self.header.levels {
                return malformed("query descended past the last level");
            }
            let entry = self.directory_entry(cell)?;
            let widths = FieldWidths::for_level(self.curves, self.header.r, self.header.t, level);
            let shape_base = self.sig_base + entry.block;
            let sig_base = shape_base + 2 * entry.subcells;
            let end = self.sig_base + self.sig_used;
            let mut cursors = labels.map(|l| BitCursor::new(self.reader, sig_base + l * entry.zeta));
            for (l, cur) in labels.iter().zip(&cursors) {
                if cur.pos() + entry.zeta > end {
                    return malformed(format!("signature of rank {l} beyond cell block"));
                }
            }

            let mut found: Option<(u64, SubcellKind, [Entry; 3], u64)> = None;
            let mut internal_seen = 0u64;
            let mut leaf_seen = 0u64;
            for j in 0..entry.subcells {
                let kind = SubcellKind::from_code(
                    self.reader.get(shape_base + 2 * j, 2).ok_or_else(|| truncated("shape"))?,
                );
                let mut e = [Entry::default(); 3];
                for (k, cur) in cursors.iter_mut().enumerate() {
                    e[k] = read_entry(cur, kind, widths)?;
                }
                if holds_crossing(kind, &e[0], &e[1])? {
                    if found.is_some() {
                        return malformed(format!("cell {cell}: crossing located in two subcells"));
                    }
                    let ordinal = match kind {
                        SubcellKind::Internal => internal_seen,
                        SubcellKind::Leaf => leaf_seen,
                        _ => j,
                    };
                    found = Some((j, kind, e, ordinal));
                }
                match kind {
                    SubcellKind::Internal => internal_seen += 1,
                    SubcellKind::Leaf => leaf_seen += 1,
                    _ => {}
                }
            }
            let Some((j, kind, e, ordinal)) = found else {
                return malformed(format!("cell {cell}: no subcell holds the crossing"));
            };
            let rel_c = e[2].relation();
            if let Some(t) = trace.as_deref_mut() {
                t.steps.push(TraceStep { level, cell, subcell: Some(j), relation: Some(rel_c) });
            }
            let (side, terminal) = match rel_c {
                CellRelation::Above => (OrientationSign::Negative, Terminal::AnsweredAbove),
                CellRelation::Below => (OrientationSign::Positive, Terminal::AnsweredBelow),
                CellRelation::Contains => {
                    if kind.is_trapezoid() {
                        return malformed("contains code on a trapezoid");
                    }
                    (OrientationSign::Zero, Terminal::AnsweredOn)
                }
                CellRelation::Crosses => match kind {
                    SubcellKind::Vertex => return malformed("crossing code on a vertex"),
                    SubcellKind::Segment => {
                        let at = if e[0].relation() == CellRelation::Crosses { e[0].a } else { e[1].a };
                        let (pos, dir) = (e[2].a, e[2].b == 1);
                        if pos == at {
                            (OrientationSign::Zero, Terminal::AnsweredOn)
                        } else if (pos > at) == dir {
                            (OrientationSign::Negative, Terminal::AnsweredAbove)
                        } else {
                            (OrientationSign::Positive, Terminal::AnsweredBelow)
                        }
                    }
                    SubcellKind::Internal => {
                        cell = entry.first_internal_child + ordinal;
                        level += 1;
                        labels = [e[0].rank, e[1].rank, e[2].rank];
                        continue;
                    }
                    SubcellKind::Leaf => {
                        let leaf = entry.first_leaf_child + ordinal;
                        let ranks = [e[0].rank, e[1].rank, e[2].rank];
                        return self.leaf_answer(leaf, level + 1, ranks, trace);
                    }
                },
            };
            if let Some(t) = trace.as_deref_mut() {
                t.terminal = terminal;
            }
            return Ok(side.times(slope_sign));
        }
    }

    fn leaf_answer(
        &self,
        leaf: u64,
        level: u32,
        labels: [u64; 3],
        trace: Option<&mut QueryTrace>,
    ) -> Result<OrientationSign, DecodeError> {
        if let Some(t) = trace {
            t.steps.push(TraceStep { level, cell: leaf, subcell: None, relation: None });
            t.terminal = Terminal::LeafTable;
        }
        let ptr = self.leaf_pointer(leaf)?;
        if ptr == 0 {
            return malformed(format!("leaf {leaf} reached by a query but has no table"));
        }
        self.table_answer(ptr - 1, labels)
    }

    /// Reads the orientation of local labels from a lookup table.
    pub fn table_answer(&self, table: u64, labels: [u64; 3]) -> Result<OrientationSign, DecodeError> {
        if table >= self.tables.len {
            return malformed(format!("table {table} >= {}", self.tables.len));
        }
        let slot = self.tables.base + table * self.tables.width as u64;
        let mw = crate::bits::width_for(self.table_t);
        let m = self.reader.get(slot, mw).ok_or_else(|| truncated("table"))?;
        let mut l = labels;
        if l.iter().any(|&x| x >= m) {
            return malformed(format!("local label out of range for a table of {m} curves"));
        }
        // sort, tracking permutation parity
        let mut parity = false;
        for i in 0..3 {
            for j in 0..2 - i {
                if l[j] > l[j + 1] {
                    l.swap(j, j + 1);
                    parity = !parity;
                }
            }
        }
        if l[0] == l[1] || l[1] == l[2] {
            return Ok(OrientationSign::Zero);
        }
        let idx = lex_triple_index(m, l[0], l[1], l[2]);
        let code = self.reader.get(slot + mw as u64 + 2 * idx, 2).ok_or_else(|| truncated("table"))?;
        let sign = OrientationSign::from_code(code)
            .ok_or_else(|| DecodeError::Malformed("invalid table code 11".into()))?;
        Ok(if parity { sign.negate() } else { sign })
    }

    /// Size breakdown of the encoding.
    pub fn stats(&self) -> Result<Stats, DecodeError> {
        let mut sections = Vec::with_capacity(SECTION_COUNT + 1);
        sections.push(SectionBits { name: "header", bits: HEADER_LEN as u64 * 8, payload_bits: HEADER_LEN as u64 * 8 });
        for s in Section::ALL {
            let r = self.header.section_range(s, self.bytes.len());
            let bits = (r.end - r.start) as u64 * 8;
            let payload_bits = match s {
                Section::SlopeOrder => 128 + self.slope.width as u64 * self.slope.len,
                Section::DupMap => 128 + self.dup.width as u64 * self.dup.len,
                Section::CellDirectory => {
                    64 * (2 + self.dir.per_level.len() as u64 + 5) + self.dir.entry_bits() * self.dir.count
                }
                Section::Signatures => 64 + self.sig_used,
                Section::LeafDirectory => 128 + self.leaves.width as u64 * self.leaves.len,
                Section::Tables => 192 + self.tables.width as u64 * self.tables.len,
            };
            sections.push(SectionBits { name: s.name(), bits, payload_bits });
        }

        let mut signature_bits_per_level = vec![0u64; self.dir.per_level.len()];
        let mut cell = 0u64;
        for (lvl, &cnt) in self.dir.per_level.iter().enumerate() {
            for _ in 0..cnt {
                let e = self.directory_entry(cell)?;
                let next = if cell + 1 < self.dir.count {
                    self.directory_entry(cell + 1)?.block
                } else {
                    self.sig_used
                };
                signature_bits_per_level[lvl] += next.saturating_sub(e.block);
                cell += 1;
            }
        }
        let nonempty_leaves = (0..self.leaves.len)
            .map(|i| self.leaf_pointer(i))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter(|&p| p != 0)
            .count() as u64;

        let total_bits = self.bytes.len() as u64 * 8;
        let n = self.header.n.max(1) as f64;
        Ok(Stats {
            n: self.header.n,
            curves: self.curves,
            mode: self.header.mode,
            r: self.header.r,
            t: self.header.t,
            levels: self.header.levels,
            total_bits,
            sections,
            signature_bits_per_level,
            internal_cells_per_level: self.dir.per_level.clone(),
            leaves: self.leaves.len,
            nonempty_leaves,
            distinct_tables: self.tables.len,
            bits_per_n2: total_bits as f64 / (n * n),
            bits_per_nlogn: total_bits as f64 / (n * n.log2().max(1.0)),
        })
    }
}

fn read_entry(cur: &mut BitCursor<'_>, kind: SubcellKind, w: FieldWidths) -> Result<Entry, DecodeError> {
    let code = cur.read(2).ok_or_else(|| truncated("signature"))?;
    let mut e = Entry { code, ..Entry::default() };
    if CellRelation::from_code(code) == CellRelation::Crosses {
        let mut rd = |width: u32| cur.read(width).ok_or_else(|| truncated("signature"));
        match kind {
            SubcellKind::Internal | SubcellKind::Leaf => {
                e.a = rd(w.index)?;
                e.b = rd(w.index)?;
                e.rank = rd(w.rank)?;
            }
            SubcellKind::Segment => {
                e.a = rd(w.index)?;
                e.b = rd(1)?;
            }
            SubcellKind::Vertex => {}
        }
    }
    Ok(e)
}

/// Does this subcell contain the crossing of the two curves with entries `a`, `b`?
fn holds_crossing(kind: SubcellKind, a: &Entry, b: &Entry) -> Result<bool, DecodeError> {
    use CellRelation::*;
    Ok(match kind {
        SubcellKind::Vertex => a.relation() == Contains && b.relation() == Contains,
        SubcellKind::Segment => match (a.relation(), b.relation()) {
            (Crosses, Crosses) => a.a == b.a,
            (Contains, Crosses) | (Crosses, Contains) => true,
            (Contains, Contains) => return malformed("two curves contain one segment"),
            _ => false,
        },
        SubcellKind::Internal | SubcellKind::Leaf => {
            a.relation() == Crosses && b.relation() == Crosses && alternates((a.a, a.b), (b.a, b.b))
        }
    })
}

/// Strict interleaving of two chords on a cycle of positions.
pub fn alternates(a: (u64, u64), b: (u64, u64)) -> bool {
    let (a1, a2) = if a.0 <= a.1 { a } else { (a.1, a.0) };
    let inside = |x: u64| a1 < x && x < a2;
    let distinct = a1 != a2 && b.0 != b.1 && a1 != b.0 && a1 != b.1 && a2 != b.0 && a2 != b.1;
    distinct && (inside(b.0) != inside(b.1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionBits {
    pub name: &'static str,
    /// Bits occupied in the file, including byte padding.
    pub bits: u64,
    /// Bits carrying data.
    pub payload_bits: u64,
}

/// Size report for an encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct Stats {
    pub n: u64,
    pub curves: u64,
    pub mode: Mode,
    pub r: u64,
    pub t: u64,
    pub levels: u64,
    pub total_bits: u64,
    pub sections: Vec<SectionBits>,
    pub signature_bits_per_level: Vec<u64>,
    pub internal_cells_per_level: Vec<u64>,
    pub leaves: u64,
    pub nonempty_leaves: u64,
    pub distinct_tables: u64,
    pub bits_per_n2: f64,
    pub bits_per_nlogn: f64,
}

impl Stats {
    pub fn section(&self, name: &str) -> Option<&SectionBits> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn padding_bits(&self) -> u64 {
        self.sections.iter().map(|s| s.bits - s.payload_bits).sum()
    }
}

impl std::fmt::Display for Stats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "n={} curves={} mode={} r={} t={} levels={}",
            self.n,
            self.curves,
            self.mode.name(),
            self.r,
            self.t,
            self.levels
        )?;
        writeln!(f, "total_bits={} ({} bytes)", self.total_bits, self.total_bits / 8)?;
        for s in &self.sections {
            writeln!(f, "  {:<15} {:>12} bits ({} payload)", s.name, s.bits, s.payload_bits)?;
        }
        for (lvl, (bits, cells)) in self
            .signature_bits_per_level
            .iter()
            .zip(&self.internal_cells_per_level)
            .enumerate()
        {
            writeln!(f, "  level {lvl}: {cells} internal cells, {bits} signature bits")?;
        }
        writeln!(
            f,
            "leaves={} (with table: {}) distinct_tables={}",
            self.leaves, self.nonempty_leaves, self.distinct_tables
        )?;
        write!(f, "bits/n^2={:.4} bits/(n log n)={:.4}", self.bits_per_n2, self.bits_per_nlogn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternation_cases() {
        assert!(alternates((0, 2), (1, 3)));
        assert!(alternates((2, 0), (3, 1)));
        assert!(alternates((1, 3), (0, 2)));
        assert!(!alternates((0, 3), (1, 2)));
        assert!(!alternates((0, 1), (2, 3)));
        // shared position: the curves meet on the boundary, not inside
        assert!(!alternates((0, 2), (2, 4)));
        assert!(!alternates((0, 2), (0, 1)));
    }
}
