//! The plain-text matrix exchange format.
//!
//! ```text
//! # optional comments
//! n ell
//! e e e ... e     (n rows of n exponents)
//! ```
//!
//! Each entry is an exponent in `[0, ℓ)`, or `.` for a zero entry (weighing
//! intermediates only — zero-free consumers reject them via
//! [`GenMatrix::to_log`]). `#` starts a comment that runs to end of line;
//! blank lines are ignored. Writing and re-reading is bit-exact.

use super::{GenMatrix, LogMatrix};
use crate::{Error, Result};

/// Parses the text format. Returns a [`GenMatrix`]; call
/// [`GenMatrix::to_log`] for contexts that forbid zero entries.
pub fn parse_matrix(text: &str) -> Result<GenMatrix> {
    let mut rows: Vec<Vec<Option<u32>>> = Vec::new();
    let mut header: Option<(usize, u32)> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno + 1, msg };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match header {
            None => {
                if tokens.len() != 2 {
                    return Err(err("expected header line `n ell`".into()));
                }
                let n: usize = tokens[0]
                    .parse()
                    .map_err(|_| err(format!("bad order `{}`", tokens[0])))?;
                let ell: u32 = tokens[1]
                    .parse()
                    .map_err(|_| err(format!("bad root order `{}`", tokens[1])))?;
                if n == 0 {
                    return Err(err("order must be positive".into()));
                }
                if ell < 2 {
                    return Err(err("root order must be at least 2".into()));
                }
                header = Some((n, ell));
            }
            Some((n, ell)) => {
                if rows.len() == n {
                    return Err(err(format!("more than {n} matrix rows")));
                }
                if tokens.len() != n {
                    return Err(err(format!(
                        "row has {} entries, expected {n}",
                        tokens.len()
                    )));
                }
                let mut row = Vec::with_capacity(n);
                for t in tokens {
                    if t == "." {
                        row.push(None);
                    } else {
                        let e: u32 =
                            t.parse().map_err(|_| err(format!("bad exponent `{t}`")))?;
                        if e >= ell {
                            return Err(err(format!(
                                "exponent {e} out of range for root order {ell}"
                            )));
                        }
                        row.push(Some(e));
                    }
                }
                rows.push(row);
            }
        }
    }
    let (n, ell) = header.ok_or(Error::Parse {
        line: 1,
        msg: "empty input (missing `n ell` header)".into(),
    })?;
    if rows.len() != n {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {n} matrix rows, found {}", rows.len()),
        });
    }
    GenMatrix::new(ell, rows)
}

pub(crate) fn format_log(m: &LogMatrix) -> String {
    let mut out = format!("{} {}\n", m.n(), m.ell());
    for i in 0..m.n() {
        let row: Vec<String> = (0..m.n()).map(|j| m.exp(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub(crate) fn format_gen(m: &GenMatrix) -> String {
    let mut out = format!("{} {}\n", m.n(), m.ell());
    for i in 0..m.n() {
        let row: Vec<String> = (0..m.n())
            .map(|j| match m.entry(i, j) {
                Some(e) => e.to_string(),
                None => ".".to_string(),
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
