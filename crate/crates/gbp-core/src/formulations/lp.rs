//! LP-file emission.
//!
//! Standard LP text format: objective section, `Subject To`, `Bounds` for
//! continuous variables, `Binaries`, `End`. Satisfaction models get an empty
//! objective under `Minimize`. Output is deterministic: variables in flat-id
//! order, constraints in declaration order, long rows wrapped at a fixed
//! term count.

use super::{LinearModel, Sense, VarKind};
use crate::scalar::Scalar;
use crate::Result;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

const TERMS_PER_LINE: usize = 12;

fn coeff_string<S: Scalar>(c: &S) -> String {
    c.exact_decimal()
        .unwrap_or_else(|| format!("{:.17}", c.to_f64()))
}

/// Renders `terms` as ` + c x`-style pieces, wrapping continuation lines.
fn write_terms<S: Scalar, W: Write>(
    w: &mut W,
    model: &LinearModel<S>,
    terms: &[(usize, S)],
) -> Result<()> {
    for (idx, (var, coeff)) in terms.iter().enumerate() {
        let name = &model.variables[*var].name;
        let negative = *coeff < S::zero();
        let magnitude = coeff.abs();
        let sign = if idx == 0 {
            if negative { "- " } else { "" }
        } else if negative {
            " - "
        } else {
            " + "
        };
        let body = if magnitude == S::one() {
            name.clone()
        } else {
            format!("{} {}", coeff_string(&magnitude), name)
        };
        if idx > 0 && idx % TERMS_PER_LINE == 0 {
            writeln!(w)?;
            write!(w, "   ")?;
        }
        write!(w, "{sign}{body}")?;
    }
    Ok(())
}

/// Writes the model in LP format to `w`.
pub fn write_lp<S: Scalar, W: Write>(model: &LinearModel<S>, w: &mut W) -> Result<()> {
    debug_assert!(model.check_consistency());
    writeln!(w, "\\ {}", model.name)?;
    let sense = match model.objective.sense {
        Sense::Maximize => "Maximize",
        Sense::Minimize | Sense::Satisfy => "Minimize",
    };
    writeln!(w, "{sense}")?;
    write!(w, " obj:")?;
    if !model.objective.terms.is_empty() {
        write!(w, " ")?;
        write_terms(w, model, &model.objective.terms)?;
    }
    writeln!(w)?;

    writeln!(w, "Subject To")?;
    for c in &model.constraints {
        write!(w, " {}: ", c.name)?;
        write_terms(w, model, &c.terms)?;
        writeln!(w, " {} {}", c.relation.symbol(), coeff_string(&c.rhs))?;
    }

    let continuous: Vec<usize> = model
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VarKind::Continuous)
        .map(|(id, _)| id)
        .collect();
    if !continuous.is_empty() {
        writeln!(w, "Bounds")?;
        for id in continuous {
            let v = &model.variables[id];
            match (&v.lower, &v.upper) {
                (Some(lo), Some(hi)) => writeln!(
                    w,
                    " {} <= {} <= {}",
                    coeff_string(lo),
                    v.name,
                    coeff_string(hi)
                )?,
                (Some(lo), None) => writeln!(w, " {} >= {}", v.name, coeff_string(lo))?,
                (None, Some(hi)) => writeln!(w, " {} <= {}", v.name, coeff_string(hi))?,
                (None, None) => writeln!(w, " {} free", v.name)?,
            }
        }
    }

    let binaries: Vec<&str> = model
        .variables
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        writeln!(w, "Binaries")?;
        for chunk in binaries.chunks(TERMS_PER_LINE) {
            writeln!(w, " {}", chunk.join(" "))?;
        }
    }
    writeln!(w, "End")?;
    Ok(())
}

/// Writes the model to a file at `path`.
pub fn write_lp_file<S: Scalar>(model: &LinearModel<S>, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_lp(model, &mut w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::build::{build_cov_csp, build_cov_ilp, build_prop_milp};
    use super::*;
    use crate::graph::Graph;
    use crate::Rat;

    fn render<S: Scalar>(m: &LinearModel<S>) -> String {
        let mut buf = Vec::new();
        write_lp(m, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn emission_is_deterministic() {
        let g = Graph::generate_path(4).unwrap();
        let m: LinearModel<Rat> = build_cov_csp(&g, 2).unwrap();
        assert_eq!(render(&m), render(&m));
    }

    #[test]
    fn maximize_header_for_cov_ilp() {
        let g = Graph::generate_path(4).unwrap();
        let m: LinearModel<Rat> = build_cov_ilp(&g, 2).unwrap();
        assert!(render(&m).starts_with("\\ cov-ilp n=4 g=2\nMaximize\n"));
    }

    #[test]
    fn prop_milp_declares_90_binaries_and_z() {
        let g = Graph::generate_path(9).unwrap();
        let m: LinearModel<Rat> = build_prop_milp(&g, 5).unwrap();
        let text = render(&m);
        let binaries: usize = text
            .lines()
            .skip_while(|l| *l != "Binaries")
            .skip(1)
            .take_while(|l| *l != "End")
            .map(|l| l.split_whitespace().count())
            .sum();
        assert_eq!(binaries, 90);
        assert!(text.contains("Bounds\n z >= 0\n"));
    }

    #[test]
    fn satisfaction_gets_empty_objective() {
        let g = Graph::generate_path(4).unwrap();
        let m: LinearModel<Rat> = build_cov_csp(&g, 2).unwrap();
        assert!(render(&m).contains("Minimize\n obj:\n"));
    }
}
