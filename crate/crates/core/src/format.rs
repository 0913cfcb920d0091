//! Plain-text poset files.
//!
//! ```text
//! # comment
//! n 4
//! rel 0 2
//! rel 1 2
//! ```
//!
//! `rel a b` means `a < b`. Alternatively a single `perm v1 ... vn` line gives
//! the 2-dimensional order of the permutation; `rel` and `perm` do not mix.

use crate::error::{PosetError, Result};
use crate::poset::Poset;

fn parse_err(line: usize, msg: impl Into<String>) -> PosetError {
    PosetError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut n: Option<usize> = None;
    let mut rels: Vec<(usize, usize)> = Vec::new();
    let mut perm: Option<Vec<i64>> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let args: Vec<&str> = words.collect();
        match keyword {
            "n" => {
                if n.is_some() {
                    return Err(parse_err(line_no, "duplicate `n` line"));
                }
                let [count] = args[..] else {
                    return Err(parse_err(line_no, "expected `n <count>`"));
                };
                n = Some(
                    count
                        .parse()
                        .map_err(|_| parse_err(line_no, "bad element count"))?,
                );
            }
            "rel" => {
                if perm.is_some() {
                    return Err(parse_err(line_no, "`rel` and `perm` lines cannot be mixed"));
                }
                let [a, b] = args[..] else {
                    return Err(parse_err(line_no, "expected `rel <a> <b>`"));
                };
                let a = a
                    .parse()
                    .map_err(|_| parse_err(line_no, "bad element index"))?;
                let b = b
                    .parse()
                    .map_err(|_| parse_err(line_no, "bad element index"))?;
                rels.push((a, b));
            }
            "perm" => {
                if !rels.is_empty() {
                    return Err(parse_err(line_no, "`rel` and `perm` lines cannot be mixed"));
                }
                if perm.is_some() {
                    return Err(parse_err(line_no, "duplicate `perm` line"));
                }
                let values = args
                    .iter()
                    .map(|v| v.parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| parse_err(line_no, "bad permutation value"))?;
                perm = Some(values);
            }
            other => return Err(parse_err(line_no, format!("unknown keyword `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(last_line, "missing `n <count>` line"))?;
    match perm {
        Some(values) => {
            if values.len() != n {
                return Err(parse_err(
                    last_line,
                    format!("`perm` has {} values but n is {n}", values.len()),
                ));
            }
            Poset::from_permutation(&values)
        }
        None => Poset::from_relations(n, &rels),
    }
}

/// Writes `n` and one `rel` line per cover.
pub fn write_poset(p: &Poset) -> String {
    let mut out = format!("n {}\n", p.len());
    for (a, b) in p.covers().pairs {
        out.push_str(&format!("rel {a} {b}\n"));
    }
    out
}
