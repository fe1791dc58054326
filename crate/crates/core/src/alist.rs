//! Reading and writing parity-check matrices in the alist text format.
//!
//! ```text
//! N M
//! max_column_weight max_row_weight
//! column weights (N values)
//! row weights (M values)
//! N lines: 1-based row indices of each column, zero-padded
//! M lines: 1-based column indices of each row, zero-padded
//! ```

use std::fmt::Write as _;

use crate::construct::ParityCheckMatrix;
use crate::error::{Error, Result};

fn padded_line(out: &mut String, entries: &[usize], width: usize) {
    let mut items: Vec<String> = entries.iter().map(|&i| (i + 1).to_string()).collect();
    items.resize(width, "0".to_string());
    out.push_str(&items.join(" "));
    out.push('\n');
}

pub fn write_alist(h: &ParityCheckMatrix) -> String {
    let columns = h.columns();
    let max_col = columns.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = h.rows().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.cols(), h.row_count());
    let _ = writeln!(out, "{max_col} {max_row}");
    let join = |v: Vec<usize>| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "{}", join(columns.iter().map(Vec::len).collect()));
    let _ = writeln!(out, "{}", join(h.rows().iter().map(Vec::len).collect()));
    for c in &columns {
        padded_line(&mut out, c, max_col);
    }
    for r in h.rows() {
        padded_line(&mut out, r, max_row);
    }
    out
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("alist line {lineno}: bad number `{t}`"))))
        .collect()
}

/// Parses an alist file. Zero padding is optional; column and row lists
/// must describe the same matrix.
pub fn read_alist(text: &str) -> Result<ParityCheckMatrix> {
    let lines: Vec<(usize, &str)> =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect();
    let get = |k: usize| -> Result<Vec<usize>> {
        let (no, l) = lines.get(k).ok_or_else(|| Error::Parse("alist file is truncated".into()))?;
        numbers(l, *no)
    };
    let head = get(0)?;
    let [n, m] = head[..] else {
        return Err(Error::Parse("alist header must be `N M`".into()));
    };
    let col_weights = get(2)?;
    let row_weights = get(3)?;
    if col_weights.len() != n || row_weights.len() != m {
        return Err(Error::Parse("alist weight lists do not match N and M".into()));
    }
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(m);
    for i in 0..m {
        let row: Vec<usize> = get(4 + n + i)?.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
        if row.len() != row_weights[i] || row.iter().any(|&c| c >= n) {
            return Err(Error::Parse(format!("alist row {} is inconsistent", i + 1)));
        }
        rows.push(row);
    }
    let h = ParityCheckMatrix::new(n, rows)?;
    for (j, col) in h.columns().iter().enumerate() {
        let listed: Vec<usize> = get(4 + j)?.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
        let mut sorted = listed.clone();
        sorted.sort_unstable();
        if sorted != *col || listed.len() != col_weights[j] {
            return Err(Error::Parse(format!("alist column {} disagrees with the row lists", j + 1)));
        }
    }
    Ok(h)
}
