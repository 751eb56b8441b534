//! Placement files.
//!
//! The canonical format is JSON:
//!
//! ```text
//! {
//!   "version": "1",
//!   "n": 5,
//!   "d": 2,
//!   "queens": [
//!     [0, 0],
//!     [1, 2]
//!   ]
//! }
//! ```
//!
//! The plain-text alternative has `version`, `n` and `d` lines followed by
//! one queen per line; `#` starts a comment:
//!
//! ```text
//! version 1
//! n 5
//! d 2
//! 0 0
//! 1 2
//! ```
//!
//! Both writers are deterministic, so write → read → write is the identity.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;
use torus_queens::Placement;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed placement JSON")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {msg}")]
    Text { line: usize, msg: String },
    #[error("unsupported placement format version {0:?} (expected {FORMAT_VERSION:?})")]
    Version(String),
    #[error("invalid placement")]
    Placement(#[from] torus_queens::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Encoding {
    Json,
    Text,
}

impl Encoding {
    /// `.txt` files are plain text; everything else is JSON.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("txt") => Encoding::Text,
            _ => Encoding::Json,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacementFile {
    version: String,
    n: u64,
    d: usize,
    queens: Vec<Vec<u64>>,
}

pub fn to_json(pl: &Placement) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\n  \"version\": \"{FORMAT_VERSION}\",\n  \"n\": {},\n  \"d\": {},\n  \"queens\": [",
        pl.n(),
        pl.d()
    );
    for (i, q) in pl.queens().iter().enumerate() {
        let coords: Vec<String> = q.coords().iter().map(u64::to_string).collect();
        let sep = if i == 0 { "" } else { "," };
        let _ = write!(out, "{sep}\n    [{}]", coords.join(", "));
    }
    if !pl.is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    out
}

pub fn to_text(pl: &Placement) -> String {
    let mut out = format!("version {FORMAT_VERSION}\nn {}\nd {}\n", pl.n(), pl.d());
    for q in pl.queens() {
        let coords: Vec<String> = q.coords().iter().map(u64::to_string).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    out
}

pub fn encode(pl: &Placement, enc: Encoding) -> String {
    match enc {
        Encoding::Json => to_json(pl),
        Encoding::Text => to_text(pl),
    }
}

pub fn from_json(src: &str) -> Result<Placement, FormatError> {
    let file: PlacementFile = serde_json::from_str(src)?;
    if file.version != FORMAT_VERSION {
        return Err(FormatError::Version(file.version));
    }
    Ok(Placement::from_coords(file.n, file.d, file.queens)?)
}

pub fn from_text(src: &str) -> Result<Placement, FormatError> {
    let mut header: [Option<u64>; 3] = [None; 3];
    let mut queens = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| FormatError::Text { line: idx + 1, msg };
        let mut words = line.split_whitespace();
        let first = words.next().expect("line is not blank");
        let slot = ["version", "n", "d"].iter().position(|&k| k == first);
        if let Some(slot) = slot {
            if !queens.is_empty() {
                return Err(bad(format!("`{first}` after the first queen")));
            }
            let value = words
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| bad(format!("`{first}` needs a nonnegative integer")))?;
            if words.next().is_some() || header[slot].replace(value).is_some() {
                return Err(bad(format!("malformed or repeated `{first}` line")));
            }
            continue;
        }
        let coords = line
            .split_whitespace()
            .map(|w| w.parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("bad coordinate: {e}")))?;
        queens.push(coords);
    }
    let missing = |key: &str| FormatError::Text {
        line: 0,
        msg: format!("missing `{key}` line"),
    };
    let version = header[0].ok_or_else(|| missing("version"))?;
    if version.to_string() != FORMAT_VERSION {
        return Err(FormatError::Version(version.to_string()));
    }
    let n = header[1].ok_or_else(|| missing("n"))?;
    let d = header[2].ok_or_else(|| missing("d"))? as usize;
    Ok(Placement::from_coords(n, d, queens)?)
}

/// Parses either encoding, picking JSON when the first visible character is `{`.
pub fn decode(src: &str) -> Result<Placement, FormatError> {
    if src.trim_start().starts_with('{') {
        from_json(src)
    } else {
        from_text(src)
    }
}

pub fn read_placement(path: &Path) -> Result<Placement, FormatError> {
    let src = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode(&src)
}
