//! Constants and small value types shared by the writer and the reader.
//!
//! Layout of an encoding file (all integers little-endian):
//!
//! ```text
//! magic "OTE1" | version u16 | mode u8 | reserved u8 | n, r, t, levels: u64
//! section offsets: 6 x u64 (slope order, dup map, cell directory,
//!                           signatures, leaf directory, tables)
//! sections, each starting on a byte boundary
//! ```
//!
//! Inside a section, fixed 64-bit counts come first and the remaining
//! fields are bit-packed least-significant bit first.

use crate::error::DecodeError;

pub const MAGIC: [u8; 4] = *b"OTE1";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 4 + 2 + 1 + 1 + 4 * 8 + SECTION_COUNT * 8;
pub const SECTION_COUNT: usize = 6;

/// Sections in file order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Section {
    SlopeOrder = 0,
    DupMap = 1,
    CellDirectory = 2,
    Signatures = 3,
    LeafDirectory = 4,
    Tables = 5,
}

impl Section {
    pub const ALL: [Section; SECTION_COUNT] = [
        Section::SlopeOrder,
        Section::DupMap,
        Section::CellDirectory,
        Section::Signatures,
        Section::LeafDirectory,
        Section::Tables,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Section::SlopeOrder => "slope_order",
            Section::DupMap => "dup_map",
            Section::CellDirectory => "cell_directory",
            Section::Signatures => "signatures",
            Section::LeafDirectory => "leaf_directory",
            Section::Tables => "tables",
        }
    }
}

/// Where the encoded order type came from. Queries behave identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Realizable = 0,
    Abstract = 1,
}

impl Mode {
    pub fn from_byte(b: u8) -> Option<Mode> {
        match b {
            0 => Some(Mode::Realizable),
            1 => Some(Mode::Abstract),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Realizable => "realizable",
            Mode::Abstract => "abstract",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub mode: Mode,
    pub n: u64,
    pub r: u64,
    pub t: u64,
    pub levels: u64,
    /// Byte offsets of the sections, in [`Section::ALL`] order.
    pub offsets: [u64; SECTION_COUNT],
}

impl Header {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(self.mode as u8);
        out.push(0);
        for v in [self.n, self.r, self.t, self.levels] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for v in self.offsets {
            out.extend_from_slice(&v.to_le_bytes());
        }
        debug_assert_eq!(out.len(), HEADER_LEN);
        out
    }

    /// Parses and bounds-checks the fixed header against the full file.
    pub fn parse(bytes: &[u8]) -> Result<Header, DecodeError> {
        if bytes.len() < 4 || bytes[..4] != MAGIC {
            return Err(DecodeError::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(DecodeError::Truncated("header".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(DecodeError::UnsupportedVersion(version));
        }
        let mode = Mode::from_byte(bytes[6])
            .ok_or_else(|| DecodeError::Malformed(format!("unknown mode byte {}", bytes[6])))?;
        let word = |i: usize| read_u64(bytes, 8 + 8 * i).expect("length checked above");
        let mut offsets = [0u64; SECTION_COUNT];
        for (k, o) in offsets.iter_mut().enumerate() {
            *o = word(4 + k);
        }
        let header = Header {
            mode,
            n: word(0),
            r: word(1),
            t: word(2),
            levels: word(3),
            offsets,
        };
        let len = bytes.len() as u64;
        let mut prev = HEADER_LEN as u64;
        for (k, &o) in header.offsets.iter().enumerate() {
            if o > len {
                return Err(DecodeError::Truncated(format!(
                    "{} section offset {o} beyond file length {len}",
                    Section::ALL[k].name()
                )));
            }
            if o < prev {
                return Err(DecodeError::Malformed(format!(
                    "{} section offset {o} precedes previous section",
                    Section::ALL[k].name()
                )));
            }
            prev = o;
        }
        if header.r < 2 {
            return Err(DecodeError::Malformed(format!("r = {} < 2", header.r)));
        }
        Ok(header)
    }

    /// Byte range of a section; the last one runs to the end of the file.
    pub fn section_range(&self, s: Section, file_len: usize) -> std::ops::Range<usize> {
        let k = s as usize;
        let start = self.offsets[k] as usize;
        let end = if k + 1 < SECTION_COUNT {
            self.offsets[k + 1] as usize
        } else {
            file_len
        };
        start..end
    }
}

pub fn read_u64(bytes: &[u8], at: usize) -> Option<u64> {
    let slice = bytes.get(at..at + 8)?;
    Some(u64::from_le_bytes(slice.try_into().ok()?))
}

/// Three-valued orientation of a triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrientationSign {
    Negative,
    Zero,
    Positive,
}

impl OrientationSign {
    pub fn from_i32(v: i32) -> Self {
        match v.signum() {
            -1 => OrientationSign::Negative,
            0 => OrientationSign::Zero,
            _ => OrientationSign::Positive,
        }
    }

    pub fn from_ordering(o: std::cmp::Ordering) -> Self {
        match o {
            std::cmp::Ordering::Less => OrientationSign::Negative,
            std::cmp::Ordering::Equal => OrientationSign::Zero,
            std::cmp::Ordering::Greater => OrientationSign::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            OrientationSign::Negative => -1,
            OrientationSign::Zero => 0,
            OrientationSign::Positive => 1,
        }
    }

    pub fn negate(self) -> Self {
        OrientationSign::from_i32(-self.as_i32())
    }

    pub fn times(self, other: OrientationSign) -> Self {
        OrientationSign::from_i32(self.as_i32() * other.as_i32())
    }

    /// `+`, `0` or `-`.
    pub fn symbol(self) -> &'static str {
        match self {
            OrientationSign::Negative => "-",
            OrientationSign::Zero => "0",
            OrientationSign::Positive => "+",
        }
    }

    /// Two-bit table code: `00` zero, `01` positive, `10` negative.
    pub fn to_code(self) -> u64 {
        match self {
            OrientationSign::Zero => 0,
            OrientationSign::Positive => 1,
            OrientationSign::Negative => 2,
        }
    }

    pub fn from_code(code: u64) -> Option<Self> {
        match code {
            0 => Some(OrientationSign::Zero),
            1 => Some(OrientationSign::Positive),
            2 => Some(OrientationSign::Negative),
            _ => None,
        }
    }
}

impl std::fmt::Display for OrientationSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Location of a curve relative to a cell, stored as a two-bit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellRelation {
    /// The curve passes strictly above every point of the cell (`00`).
    Above = 0,
    /// The curve passes strictly below every point of the cell (`01`).
    Below = 1,
    /// The curve meets the relative interior of the cell (`10`).
    Crosses = 2,
    /// The cell lies on the curve (`11`); lower-dimensional cells only.
    Contains = 3,
}

impl CellRelation {
    pub fn from_code(code: u64) -> CellRelation {
        match code & 3 {
            0 => CellRelation::Above,
            1 => CellRelation::Below,
            2 => CellRelation::Crosses,
            _ => CellRelation::Contains,
        }
    }
}

/// Shape tag stored for every subcell of an internal cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubcellKind {
    Vertex = 0,
    /// Open segment: a piece of a curve or a vertical wall.
    Segment = 1,
    /// Trapezoid refined further at the next level.
    Internal = 2,
    /// Trapezoid answered by a lookup table.
    Leaf = 3,
}

impl SubcellKind {
    pub fn from_code(code: u64) -> SubcellKind {
        match code & 3 {
            0 => SubcellKind::Vertex,
            1 => SubcellKind::Segment,
            2 => SubcellKind::Internal,
            _ => SubcellKind::Leaf,
        }
    }

    pub fn is_trapezoid(self) -> bool {
        matches!(self, SubcellKind::Internal | SubcellKind::Leaf)
    }
}

/// `floor(n / r^level)`, saturating to zero.
pub fn level_bound(n: u64, r: u64, level: u32) -> u64 {
    let mut b = n;
    for _ in 0..level {
        b /= r;
        if b == 0 {
            break;
        }
    }
    b
}

/// Crossing bound for level-`level` cells: `floor(n / r^level)`, but never
/// below the leaf threshold `t`.
pub fn cell_bound(n: u64, r: u64, t: u64, level: u32) -> u64 {
    level_bound(n, r, level).max(t.min(n))
}

/// Widths of the fields stored in signatures of level-`level` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldWidths {
    /// Boundary position indices: `ceil(log2(2 * floor(n / r^(level+1)) + 2))`.
    pub index: u32,
    /// Rank of a curve in a subcell's crossing list.
    pub rank: u32,
}

impl FieldWidths {
    pub fn for_level(curves: u64, r: u64, t: u64, level: u32) -> FieldWidths {
        let b = cell_bound(curves, r, t, level + 1);
        FieldWidths {
            index: crate::bits::width_for(2 * b + 1),
            rank: crate::bits::width_for(b.saturating_sub(1)),
        }
    }
}

/// Index of the triple `i < j < k` among all triples of `0..m` in
/// lexicographic order.
pub fn lex_triple_index(m: u64, i: u64, j: u64, k: u64) -> u64 {
    debug_assert!(i < j && j < k && k < m);
    let choose2 = |x: u64| x * x.saturating_sub(1) / 2;
    let mut idx = 0;
    for a in 0..i {
        idx += choose2(m - 1 - a);
    }
    for b in (i + 1)..j {
        idx += m - 1 - b;
    }
    idx + (k - j - 1)
}

pub fn choose3(m: u64) -> u64 {
    if m < 3 {
        0
    } else {
        m * (m - 1) * (m - 2) / 6
    }
}

/// Fixed slot size of one lookup table for leaf threshold `t`.
pub fn table_slot_bits(t: u64) -> u64 {
    crate::bits::width_for(t) as u64 + 2 * choose3(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_index_enumerates_in_order() {
        for m in 3..9u64 {
            let mut expect = 0;
            for i in 0..m {
                for j in i + 1..m {
                    for k in j + 1..m {
                        assert_eq!(lex_triple_index(m, i, j, k), expect);
                        expect += 1;
                    }
                }
            }
            assert_eq!(expect, choose3(m));
        }
    }

    #[test]
    fn level_bounds_floor() {
        assert_eq!(level_bound(50, 3, 0), 50);
        assert_eq!(level_bound(50, 3, 1), 16);
        assert_eq!(level_bound(50, 3, 2), 5);
        assert_eq!(level_bound(50, 3, 3), 1);
        assert_eq!(level_bound(50, 3, 9), 0);
    }

    #[test]
    fn index_width_formula() {
        // floor(16/4) = 4 -> 2*4+2 = 10 positions -> 4 bits
        assert_eq!(FieldWidths::for_level(16, 4, 1, 0).index, 4);
        assert_eq!(FieldWidths::for_level(16, 4, 1, 0).rank, 2);
        // floor(16/16) = 1 -> 4 positions -> 2 bits, rank always 0
        assert_eq!(FieldWidths::for_level(16, 4, 1, 1), FieldWidths { index: 2, rank: 0 });
    }

    #[test]
    fn header_round_trip_and_faults() {
        let h = Header {
            mode: Mode::Abstract,
            n: 9,
            r: 4,
            t: 3,
            levels: 2,
            offsets: [88, 90, 95, 100, 120, 130],
        };
        let mut bytes = h.to_bytes();
        bytes.resize(140, 0);
        assert_eq!(Header::parse(&bytes).unwrap(), h);

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert_eq!(Header::parse(&bad), Err(DecodeError::BadMagic));

        let mut short = bytes.clone();
        short.truncate(125);
        assert!(matches!(Header::parse(&short), Err(DecodeError::Truncated(_))));

        let mut ver = bytes;
        ver[4] = 7;
        assert_eq!(Header::parse(&ver), Err(DecodeError::UnsupportedVersion(7)));
    }
}
