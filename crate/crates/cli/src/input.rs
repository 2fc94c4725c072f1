//! Loading points files and wiring diagrams.

use std::path::Path;

use anyhow::{Context, Result};
use ote_core::encoder::{prepare_points, Prepared};
use ote_core::exact::ExactPoint;
use ote_core::io::parse_points;
use ote_core::wiring::{parse_wiring, prepare_wiring, WiringDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum InputKind {
    /// Wiring when the first non-comment line is `n=<int>`, points otherwise.
    Auto,
    Points,
    Wiring,
}

#[derive(Clone, Debug)]
pub enum Input {
    Points(Vec<ExactPoint>),
    Wiring(WiringDiagram),
}

impl Input {
    pub fn parse(text: &str, kind: InputKind) -> Result<Input> {
        let kind = match kind {
            InputKind::Auto => {
                let first = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty());
                if first.is_some_and(|l| l.starts_with("n=")) { InputKind::Wiring } else { InputKind::Points }
            }
            k => k,
        };
        Ok(match kind {
            InputKind::Wiring => Input::Wiring(parse_wiring(text)?),
            _ => Input::Points(parse_points(text)?),
        })
    }

    pub fn load(path: &Path, kind: InputKind) -> Result<Input> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Input::parse(&text, kind).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn n(&self) -> usize {
        match self {
            Input::Points(p) => p.len(),
            Input::Wiring(w) => w.n,
        }
    }

    pub fn prepare(&self) -> Result<Prepared> {
        Ok(match self {
            Input::Points(p) => prepare_points(p)?,
            Input::Wiring(w) => prepare_wiring(w)?,
        })
    }
}
