//! Substitution spec files for `verify-locality`.
//!
//! ```text
//! base n.poset
//! at 0 r_tu.poset
//! ```
//!
//! Paths are relative to the spec file.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use gpc_core::Poset;

use crate::read_poset;

#[derive(Clone, Debug)]
pub struct SumSpec {
    pub base: Poset,
    pub index: usize,
    pub factor: Poset,
}

pub fn load(path: &Path) -> anyhow::Result<SumSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut base = None;
    let mut at = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let here = || format!("{}:{}", path.display(), idx + 1);
        match words[..] {
            ["base", file] if base.is_none() => base = Some(read_poset(&dir.join(file))?),
            ["at", index, file] if at.is_none() => {
                let index: usize = index
                    .parse()
                    .map_err(|_| anyhow!("{}: bad index `{index}`", here()))?;
                at = Some((index, read_poset(&dir.join(file))?));
            }
            _ => bail!(
                "{}: expected `base FILE` or `at INDEX FILE`, once each",
                here()
            ),
        }
    }
    let base = base.ok_or_else(|| anyhow!("{}: missing `base` line", path.display()))?;
    let (index, factor) = at.ok_or_else(|| anyhow!("{}: missing `at` line", path.display()))?;
    Ok(SumSpec {
        base,
        index,
        factor,
    })
}
