//! Reader for compact order type encodings.
//!
//! Nothing here knows about coordinates: every answer is
//! read from the encoded bytes. The writer lives in `ote-core`.

pub mod bits;
pub mod decoder;
pub mod error;
pub mod format;

pub use decoder::{DirectoryEntry, Encoding, QueryTrace, SectionBits, Stats, Terminal, TraceStep};
pub use error::DecodeError;
pub use format::{CellRelation, Header, Mode, OrientationSign, SubcellKind};
