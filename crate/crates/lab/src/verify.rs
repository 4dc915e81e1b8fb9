//! Named verification suites and their table output.

use std::fmt::Write as _;

use crate::criteria::{self, Criterion};
use crate::error::LabError;

pub const SUITES: [&str; 7] = ["operators", "weights", "commutators", "groundstate", "evolution", "functionals", "all"];

/// Criterion ids making up a suite; 0 is the operator invariant set.
pub fn suite_ids(name: &str) -> Result<Vec<u8>, LabError> {
    let ids = match name {
        "operators" => vec![0],
        "weights" => vec![1, 2],
        "commutators" => vec![3],
        "groundstate" => vec![4],
        "evolution" => vec![5],
        "functionals" => vec![6, 7, 8, 9],
        "all" => (0..=10).collect(),
        other => return Err(LabError::UnknownSuite(other.to_string())),
    };
    Ok(ids)
}

pub fn run_suite(name: &str) -> Result<Vec<Criterion>, LabError> {
    Ok(suite_ids(name)?.into_iter().map(criteria::run).collect())
}

pub fn table(results: &[Criterion]) -> String {
    let width = results
        .iter()
        .flat_map(|c| c.checks.iter().map(|k| k.name.len()))
        .max()
        .unwrap_or(10)
        .max(10);
    let mut s = String::new();
    for c in results {
        let _ = writeln!(s, "[{}] {}", c.id, c.title);
        for k in &c.checks {
            let status = if k.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "  {status}  {:<width$}  {:>12.4e}  {}", k.name, k.value, k.limit);
        }
    }
    let failed = results.iter().filter(|c| !c.passed()).count();
    let _ = writeln!(s, "{} criteria, {} failed", results.len(), failed);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!(suite_ids("all").unwrap().len(), 11);
        assert!(matches!(suite_ids("bogus"), Err(LabError::UnknownSuite(_))));
        assert_eq!(LabError::UnknownSuite("x".into()).exit_code(), 2);
    }

    #[test]
    fn operator_suite_passes() {
        let r = run_suite("operators").unwrap();
        assert!(r[0].passed(), "{}", table(&r));
    }
}
