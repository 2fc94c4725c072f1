//! Command implementations behind the `ote` binary.

pub mod bench;
pub mod input;
pub mod oracle;
pub mod verify;

use anyhow::{bail, Result};
use ote_core::encoder::{encode_prepared, EncodeOptions};
use ote_decoder::{Encoding, OrientationSign, QueryTrace};

use input::Input;

pub fn check_params(r: u64, t: Option<u64>) -> Result<()> {
    if r < 2 {
        bail!("r must be at least 2, got {r}");
    }
    if let Some(t) = t.filter(|&t| t < 3) {
        bail!("t must be at least 3, got {t}");
    }
    Ok(())
}

pub fn encode(input: &Input, opts: &EncodeOptions) -> Result<Vec<u8>> {
    check_params(opts.r, opts.t)?;
    Ok(encode_prepared(&input.prepare()?, opts)?)
}

/// Answers a query given 1-based labels.
pub fn query(bytes: &[u8], labels: [u64; 3]) -> Result<(OrientationSign, QueryTrace)> {
    let enc = Encoding::parse(bytes)?;
    let n = enc.n();
    for l in labels {
        if l == 0 || l > n {
            bail!("index {l} out of range: labels run from 1 to {n}");
        }
    }
    let [a, b, c] = labels.map(|l| l - 1);
    Ok(enc.query_traced(a, b, c)?)
}

/// Caps the global rayon pool at `OTE_THREADS` when set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("OTE_THREADS") {
        let k: usize = v.trim().parse().map_err(|_| anyhow::anyhow!("OTE_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global()?;
    }
    Ok(())
}
