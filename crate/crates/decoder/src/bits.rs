//! Little-endian, least-significant-bit-first bit packing.

/// Append-only bit buffer. Bit `k` of the stream lives in byte `k / 8` at
/// bit position `k % 8`.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct BitWriter {
    bytes: Vec<u8>,
    len: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of bits written so far.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Writes the low `width` bits of `value`. `width` may be zero.
    pub fn push(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || value >> width == 0, "{value} does not fit in {width} bits");
        let mut remaining = width;
        let mut value = value;
        while remaining > 0 {
            let bit = (self.len % 8) as u32;
            if bit == 0 {
                self.bytes.push(0);
            }
            let take = remaining.min(8 - bit);
            let mask = if take == 64 { u64::MAX } else { (1u64 << take) - 1 };
            let last = self.bytes.len() - 1;
            self.bytes[last] |= ((value & mask) as u8) << bit;
            value = if take == 64 { 0 } else { value >> take };
            remaining -= take;
            self.len += take as u64;
        }
    }

    pub fn push_bool(&mut self, bit: bool) {
        self.push(bit as u64, 1);
    }

    /// Appends the contents of another writer bit for bit.
    pub fn append(&mut self, other: &BitWriter) {
        if self.len.is_multiple_of(8) {
            self.bytes.extend_from_slice(&other.bytes);
            self.len += other.len;
            return;
        }
        let full = other.len / 8;
        for &b in &other.bytes[..full as usize] {
            self.push(b as u64, 8);
        }
        let rest = (other.len % 8) as u32;
        if rest > 0 {
            let b = other.bytes[full as usize] as u64;
            self.push(b & ((1 << rest) - 1), rest);
        }
    }

    /// Zero-fills up to `target` bits.
    pub fn pad_to(&mut self, target: u64) {
        debug_assert!(target >= self.len);
        while self.len < target {
            let step = (target - self.len).min(64) as u32;
            self.push(0, step);
        }
    }

    /// Zero-fills to the next byte boundary.
    pub fn align_byte(&mut self) {
        let target = self.len.div_ceil(8) * 8;
        self.pad_to(target);
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

/// Random-access reader over a byte slice with bit addressing.
#[derive(Debug, Clone, Copy)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes }
    }

    pub fn bit_len(&self) -> u64 {
        self.bytes.len() as u64 * 8
    }

    /// Reads `width` bits starting at bit `pos`, or `None` past the end.
    #[inline]
    pub fn get(&self, pos: u64, width: u32) -> Option<u64> {
        if width == 0 {
            return Some(0);
        }
        if pos + width as u64 > self.bit_len() {
            return None;
        }
        let mut out = 0u64;
        let mut got = 0u32;
        let mut p = pos;
        while got < width {
            let byte = self.bytes[(p / 8) as usize] as u64;
            let bit = (p % 8) as u32;
            let take = (width - got).min(8 - bit);
            let chunk = (byte >> bit) & ((1u64 << take) - 1);
            out |= chunk << got;
            got += take;
            p += take as u64;
        }
        Some(out)
    }
}

/// Sequential cursor on top of [`BitReader`].
#[derive(Debug, Clone, Copy)]
pub struct BitCursor<'a> {
    reader: BitReader<'a>,
    pos: u64,
}

impl<'a> BitCursor<'a> {
    pub fn new(reader: BitReader<'a>, pos: u64) -> Self {
        BitCursor { reader, pos }
    }

    pub fn pos(&self) -> u64 {
        self.pos
    }

    #[inline]
    pub fn read(&mut self, width: u32) -> Option<u64> {
        let v = self.reader.get(self.pos, width)?;
        self.pos += width as u64;
        Some(v)
    }
}

/// Bits needed to store every value in `0..=max_value`; zero for `max_value == 0`.
pub fn width_for(max_value: u64) -> u32 {
    64 - max_value.leading_zeros()
}
