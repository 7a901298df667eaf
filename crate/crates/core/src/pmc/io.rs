//! Plain-text PMC-GD format.
//!
//! ```text
//! U V k
//! <U rows of V probabilities p(u, v)>
//! ```
//!
//! The null mass of each row is implied as `1 − Σ_v p(u, v)`. Fields are
//! whitespace-separated and `#` starts a comment.

use std::fmt::Write;

use crate::error::Result;
use crate::tokens::{checked_size, Tokens};

use super::instance::BipartiteInstance;

const MAX_TABLE: usize = 1 << 22;

pub fn parse_pmc(text: &str) -> Result<BipartiteInstance> {
    let mut tokens = Tokens::new(text);
    let sources = tokens.usize("U")?;
    let targets = tokens.usize("V")?;
    let budget = tokens.usize("k")?;
    if sources == 0 || targets == 0 {
        return Err(tokens.error("U and V must be positive"));
    }
    checked_size(&tokens, &[sources, targets], MAX_TABLE)?;
    let mut rows = Vec::with_capacity(sources);
    for _ in 0..sources {
        let row = (0..targets)
            .map(|_| tokens.f64("edge probability"))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    tokens.finish()?;
    BipartiteInstance::new(targets, budget, &rows)
}

pub fn format_pmc(instance: &BipartiteInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {}",
        instance.sources(),
        instance.targets(),
        instance.budget()
    );
    for u in 0..instance.sources() {
        let row: Vec<String> = (0..instance.targets())
            .map(|v| format!("{:?}", instance.edge(u, v)))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
