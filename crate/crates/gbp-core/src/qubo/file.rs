//! QUBO file emission.
//!
//! Text format, deterministic ordering:
//!
//! ```text
//! c <model description>
//! c offset <value>
//! c values are exact decimals or num/den rationals; ids are 0-based
//! c var <id> <structured name>
//! p qubo 0 <maxDiagonals> <nDiagonals> <nElements>
//! <i> <i> <value>      one line per nonzero diagonal, ascending
//! <i> <j> <value>      one line per off-diagonal (i < j), ascending
//! ```
//!
//! The offset travels in a comment so round-trip readers can reproduce
//! objective values exactly.

use super::{QuboKind, QuboModel};
use crate::scalar::{emit_value, Scalar};
use crate::Result;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

pub fn write_qubo<S: Scalar, W: Write>(model: &QuboModel<S>, w: &mut W) -> Result<()> {
    let desc = match model.kind {
        QuboKind::Slack { n, g, slack_bits } => {
            format!("slack qubo n={n} g={g} slack_bits={slack_bits}")
        }
        QuboKind::Unbalanced { n, g } => format!("unbalanced qubo n={n} g={g}"),
    };
    writeln!(w, "c {desc}")?;
    writeln!(w, "c offset {}", emit_value(&model.offset))?;
    writeln!(w, "c values are exact decimals or num/den rationals; ids are 0-based")?;
    for (id, var) in model.vars.iter().enumerate() {
        writeln!(w, "c var {id} {}", var.name())?;
    }
    let n_diag = model.q.keys().filter(|(a, b)| a == b).count();
    let n_elem = model.q.len() - n_diag;
    writeln!(w, "p qubo 0 {} {} {}", model.dim, n_diag, n_elem)?;
    for (&(a, b), v) in model.q.iter().filter(|((a, b), _)| a == b) {
        debug_assert_eq!(a, b);
        writeln!(w, "{a} {b} {}", emit_value(v))?;
    }
    for (&(a, b), v) in model.q.iter().filter(|((a, b), _)| a != b) {
        writeln!(w, "{a} {b} {}", emit_value(v))?;
    }
    Ok(())
}

pub fn write_qubo_file<S: Scalar>(model: &QuboModel<S>, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_qubo(model, &mut w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::build_squbo;
    use super::*;
    use crate::graph::Graph;
    use crate::Rat;

    #[test]
    fn emission_is_deterministic_and_counts_match() {
        let g = Graph::generate_path(4).unwrap();
        let m: QuboModel<Rat> = build_squbo(&g, 2).unwrap();
        let mut a = Vec::new();
        write_qubo(&m, &mut a).unwrap();
        let mut b = Vec::new();
        write_qubo(&m, &mut b).unwrap();
        assert_eq!(a, b);

        let text = String::from_utf8(a).unwrap();
        let header = text
            .lines()
            .find(|l| l.starts_with("p qubo"))
            .expect("header present");
        let parts: Vec<usize> = header
            .split_whitespace()
            .skip(2)
            .map(|t| t.parse().unwrap())
            .collect();
        let entry_lines = text
            .lines()
            .skip_while(|l| !l.starts_with("p qubo"))
            .skip(1)
            .count();
        assert_eq!(parts[0], 0);
        assert_eq!(parts[1], m.dim);
        assert_eq!(parts[2] + parts[3], entry_lines);
    }
}
