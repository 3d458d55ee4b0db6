//! Text map format.
//!
//! ```text
//! lrmcmap v1 <rows> <cols> <resolution>
//! <rows lines of exactly <cols> glyphs: '#' featured, '.' free, '?' unknown>
//! ```
//!
//! UTF-8, LF line endings, no trailing whitespace, final line LF-terminated.

use super::{CellState, FeatureMap};
use crate::error::{Error, Result};

const MAGIC: &str = "lrmcmap";
const VERSION: &str = "v1";

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn save_map(map: &FeatureMap) -> Vec<u8> {
    let mut out = format!(
        "{MAGIC} {VERSION} {} {} {}\n",
        map.rows(),
        map.cols(),
        map.resolution()
    )
    .into_bytes();
    out.reserve(map.len() + map.rows());
    for row in map.cells().chunks(map.cols()) {
        out.extend(row.iter().map(|s| s.glyph()));
        out.push(b'\n');
    }
    out
}

pub fn load_map(bytes: &[u8]) -> Result<FeatureMap> {
    let text = std::str::from_utf8(bytes).map_err(|e| parse_err(1, format!("not UTF-8: {e}")))?;
    if text.is_empty() {
        return Err(parse_err(1, "empty input"));
    }
    if !text.ends_with('\n') {
        let last = text.split('\n').count();
        return Err(parse_err(last, "final line is not LF-terminated"));
    }
    let mut lines = text[..text.len() - 1].split('\n');

    let header = lines.next().unwrap_or("");
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 5 || fields[0] != MAGIC || fields[1] != VERSION {
        return Err(parse_err(
            1,
            format!("expected header `{MAGIC} {VERSION} <rows> <cols> <resolution>`, found `{header}`"),
        ));
    }
    let rows: usize = fields[2]
        .parse()
        .map_err(|_| parse_err(1, format!("bad row count `{}`", fields[2])))?;
    let cols: usize = fields[3]
        .parse()
        .map_err(|_| parse_err(1, format!("bad column count `{}`", fields[3])))?;
    let resolution: f64 = fields[4]
        .parse()
        .map_err(|_| parse_err(1, format!("bad resolution `{}`", fields[4])))?;
    if rows == 0 || cols == 0 {
        return Err(parse_err(1, "dimensions must be positive"));
    }
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(parse_err(1, "resolution must be positive and finite"));
    }

    let mut cells = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (k, line) in lines.enumerate() {
        let line_no = k + 2;
        if seen == rows {
            return Err(parse_err(line_no, format!("expected {rows} rows, found more")));
        }
        if line.len() != cols {
            return Err(parse_err(
                line_no,
                format!("expected {cols} glyphs, found {}", line.len()),
            ));
        }
        for (c, g) in line.bytes().enumerate() {
            let state = CellState::from_glyph(g).ok_or_else(|| {
                parse_err(line_no, format!("unknown glyph {:?} at column {}", g as char, c + 1))
            })?;
            cells.push(state);
        }
        seen += 1;
    }
    if seen != rows {
        return Err(parse_err(seen + 2, format!("expected {rows} rows, found {seen}")));
    }
    FeatureMap::from_cells(rows, cols, resolution, cells)
}
