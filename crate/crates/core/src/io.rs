//! Points file: one `x y` pair per line, each coordinate an integer or
//! `p/q`. Commas may separate the coordinates; `#` starts a comment.

use crate::exact::{ExactPoint, ExactRational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct PointsError {
    pub line: usize,
    pub msg: String,
}

pub fn parse_points(text: &str) -> Result<Vec<ExactPoint>, PointsError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
        if fields.len() != 2 {
            return Err(PointsError { line, msg: format!("expected two coordinates, found `{body}`") });
        }
        let coord = |f: &str| {
            f.parse::<ExactRational>().map_err(|_| PointsError { line, msg: format!("bad coordinate `{f}`") })
        };
        out.push(ExactPoint::new(coord(fields[0])?, coord(fields[1])?));
    }
    Ok(out)
}

pub fn format_points(points: &[ExactPoint]) -> String {
    points.iter().map(|p| format!("{} {}\n", p.x, p.y)).collect()
}
