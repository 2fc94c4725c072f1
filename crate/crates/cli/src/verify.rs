//! Decoder answers against the brute-force oracle.

use anyhow::{bail, Result};
use ote_decoder::{Encoding, OrientationSign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::input::Input;
use crate::oracle::expected;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub triple: (usize, usize, usize),
    pub expected: OrientationSign,
    pub decoded: OrientationSign,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: u64,
    pub zeros: u64,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn merge(mut self, other: VerifyReport) -> VerifyReport {
        self.checked += other.checked;
        self.zeros += other.zeros;
        self.mismatches.extend(other.mismatches);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    All,
    Samples { count: u64, seed: u64 },
}

fn check(enc: &Encoding, input: &Input, triples: impl Iterator<Item = (usize, usize, usize)>) -> Result<VerifyReport> {
    let mut rep = VerifyReport::default();
    for (a, b, c) in triples {
        let want = expected(input, a, b, c);
        let got = enc.query(a as u64, b as u64, c as u64)?;
        rep.checked += 1;
        if want == OrientationSign::Zero {
            rep.zeros += 1;
        }
        if want != got {
            rep.mismatches.push(Mismatch { triple: (a, b, c), expected: want, decoded: got });
        }
    }
    Ok(rep)
}

/// Compares every (or a sample of) `a < b < c` triple. Mismatches come back
/// in lexicographic order for `All` and in draw order for samples.
pub fn verify(input: &Input, bytes: &[u8], coverage: Coverage) -> Result<VerifyReport> {
    let enc = Encoding::parse(bytes)?;
    let n = input.n();
    if enc.n() != n as u64 {
        bail!("encoding holds n = {} labels but the input has {n}", enc.n());
    }
    match coverage {
        Coverage::All => {
            let parts: Vec<VerifyReport> = (0..n)
                .into_par_iter()
                .map(|a| check(&enc, input, (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| (a, b, c)))))
                .collect::<Result<_>>()?;
            Ok(parts.into_iter().fold(VerifyReport::default(), VerifyReport::merge))
        }
        Coverage::Samples { count, seed } => {
            if n < 3 {
                return Ok(VerifyReport::default());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples: Vec<_> = (0..count).map(|_| sample_triple(&mut rng, n)).collect();
            check(&enc, input, triples.into_iter())
        }
    }
}

/// Uniform sorted triple of distinct labels.
pub fn sample_triple(rng: &mut impl Rng, n: usize) -> (usize, usize, usize) {
    loop {
        let mut t = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
        t.sort_unstable();
        if t[0] < t[1] && t[1] < t[2] {
            return (t[0], t[1], t[2]);
        }
    }
}
