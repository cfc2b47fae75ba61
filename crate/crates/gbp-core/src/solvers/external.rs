//! Bridge to external LP/MILP solvers.
//!
//! The contract is file-based and solver-agnostic: the model goes out as an
//! LP file, the command template runs with `{in}` and `{out}` substituted,
//! and the solution comes back as `name value` lines (unlisted variables
//! are zero). The objective is always recomputed from the model, never
//! trusted from the solver. An optional marker line signals infeasibility
//! for satisfaction models.

use crate::error::Error;
use crate::formulations::{write_lp_file, Assignment, LinearModel};
use crate::scalar::Scalar;
use crate::Result;
use std::collections::HashMap;
use std::path::Path;
use std::process::Command;

/// External solver profile: a command template with `{in}`/`{out}`
/// placeholders and an optional infeasibility marker to scan for in the
/// solver's solution file or standard output.
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    pub command_template: String,
    pub infeasible_marker: Option<String>,
}

/// Splits the template on whitespace and substitutes the placeholders,
/// yielding the exact argument vector to run.
pub fn substitute_template(template: &str, input: &Path, output: &Path) -> Vec<String> {
    template
        .split_whitespace()
        .map(|tok| {
            tok.replace("{in}", &input.display().to_string())
                .replace("{out}", &output.display().to_string())
        })
        .collect()
}

/// Parses a decimal or scientific token into an exact scalar
/// (e.g. `1`, `-0.5`, `1e-6`). Mantissas longer than 15 significant digits
/// are truncated; magnitudes beyond 1e18 are format errors.
pub fn parse_solution_value<S: Scalar>(token: &str) -> Result<S> {
    let err = || Error::Format(format!("unparsable numeric value '{token}'"));
    let (mantissa, exp) = match token.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| err())?),
        None => (token, 0),
    };
    let negative = mantissa.starts_with('-');
    let unsigned = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = match unsigned.split_once('.') {
        Some((i, f)) => (i, f),
        None => (unsigned, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let frac_trunc = &frac_part[..frac_part.len().min(15)];
    let digits = format!("{int_part}{frac_trunc}");
    let digits_trimmed = digits.trim_start_matches('0');
    let num: i64 = if digits_trimmed.is_empty() {
        0
    } else {
        digits_trimmed.parse().map_err(|_| err())?
    };
    let scale = exp - frac_trunc.len() as i32;
    if !(-18..=18).contains(&scale) {
        return Err(err());
    }
    let mut value = S::from_int(if negative { -num } else { num });
    if scale > 0 {
        value *= S::from_int(10i64.pow(scale as u32));
    } else if scale < 0 {
        value /= S::from_int(10i64.pow((-scale) as u32));
    }
    Ok(value)
}

/// Writes the model, runs the solver command, and parses the solution file.
pub fn external_solve<S: Scalar>(
    model: &LinearModel<S>,
    solver: &ExternalSolver,
    workdir: &Path,
) -> Result<Assignment<S>> {
    std::fs::create_dir_all(workdir)?;
    let input = workdir.join("model.lp");
    let output = workdir.join("model.sol");
    let _ = std::fs::remove_file(&output);
    write_lp_file(model, &input)?;

    let argv = substitute_template(&solver.command_template, &input, &output);
    if argv.is_empty() {
        return Err(Error::Backend {
            msg: "empty solver command".into(),
        });
    }
    let run = Command::new(&argv[0])
        .args(&argv[1..])
        .output()
        .map_err(|e| Error::Backend {
            msg: format!("failed to launch '{}': {e}", argv[0]),
        })?;
    let stdout = String::from_utf8_lossy(&run.stdout);
    if !run.status.success() {
        return Err(Error::Backend {
            msg: format!(
                "solver exited with {}: {}{}",
                run.status,
                stdout,
                String::from_utf8_lossy(&run.stderr)
            ),
        });
    }
    if let Some(marker) = &solver.infeasible_marker {
        if stdout.lines().any(|l| l.contains(marker.as_str())) {
            return Err(Error::Infeasible);
        }
    }

    let text = std::fs::read_to_string(&output).map_err(|e| Error::Backend {
        msg: format!("solver produced no solution file at {}: {e}", output.display()),
    })?;
    parse_solution(model, &text, solver.infeasible_marker.as_deref())
}

/// Parses `name value` lines; comment lines start with `#`, `%` or `\`.
/// Names not declared by the model are ignored (solver metadata); lines
/// that are not two tokens are format errors.
pub fn parse_solution<S: Scalar>(
    model: &LinearModel<S>,
    text: &str,
    infeasible_marker: Option<&str>,
) -> Result<Assignment<S>> {
    let ids: HashMap<&str, usize> = model
        .variables
        .iter()
        .enumerate()
        .map(|(id, v)| (v.name.as_str(), id))
        .collect();
    let mut values = vec![S::zero(); model.variables.len()];
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty()
            || trimmed.starts_with('#')
            || trimmed.starts_with('%')
            || trimmed.starts_with('\\')
        {
            continue;
        }
        if let Some(marker) = infeasible_marker {
            if trimmed.contains(marker) {
                return Err(Error::Infeasible);
            }
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Format(format!(
                "expected 'name value', got '{trimmed}'"
            )));
        }
        if let Some(&id) = ids.get(tokens[0]) {
            values[id] = parse_solution_value(tokens[1])?;
        }
    }
    Ok(Assignment {
        objective_value: model.objective_value(&values),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulations::build_cov_csp;
    use crate::graph::Graph;
    use crate::Rat;
    use std::path::PathBuf;

    #[test]
    fn template_substitution_is_exact() {
        let argv = substitute_template(
            "solve {in} -o {out}",
            &PathBuf::from("/tmp/a.lp"),
            &PathBuf::from("/tmp/a.sol"),
        );
        assert_eq!(argv, vec!["solve", "/tmp/a.lp", "-o", "/tmp/a.sol"]);
    }

    #[test]
    fn value_parsing() {
        assert_eq!(parse_solution_value::<Rat>("1").unwrap(), Rat::new(1, 1));
        assert_eq!(parse_solution_value::<Rat>("0.5").unwrap(), Rat::new(1, 2));
        assert_eq!(
            parse_solution_value::<Rat>("1e-6").unwrap(),
            Rat::new(1, 1_000_000)
        );
        assert_eq!(
            parse_solution_value::<Rat>("-2.25").unwrap(),
            Rat::new(-9, 4)
        );
        assert_eq!(
            parse_solution_value::<Rat>("0.999999").unwrap(),
            Rat::new(999_999, 1_000_000)
        );
        assert!(parse_solution_value::<Rat>("abc").is_err());
    }

    #[test]
    fn solution_zero_fills_unlisted_variables() {
        let g = Graph::generate_path(4).unwrap();
        let m = build_cov_csp::<Rat>(&g, 2).unwrap();
        // Only the nonzeros of a feasible pick: x_2_2 (radius 1) + x_4_1.
        let a = parse_solution(&m, "# solver log\nx_2_2 1\nx_4_1 1\n", None).unwrap();
        assert_eq!(a.values.iter().filter(|v| **v == Rat::new(1, 1)).count(), 2);
        assert!(m.is_feasible(&a.values));
        assert!(parse_solution(&m, "x_1_1 1 extra\n", None).is_err());
    }

    #[test]
    fn infeasible_marker_is_recognized() {
        let g = Graph::generate_path(4).unwrap();
        let m = build_cov_csp::<Rat>(&g, 2).unwrap();
        let r = parse_solution(&m, "model is INFEASIBLE\n", Some("INFEASIBLE"));
        assert!(matches!(r, Err(Error::Infeasible)));
    }
}
