//! Not-all-equal constraint satisfaction with `r`-valued variables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NaeError {
    #[error("clause {clause} has {got} entries, expected width {expected}")]
    WidthMismatch { clause: usize, expected: usize, got: usize },
    #[error("clause {clause} repeats variable {var}")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("clause {clause} mentions variable {var} but there are only {vars}")]
    VariableOutOfRange { clause: usize, var: usize, vars: usize },
    #[error("value count must be between 1 and 64, got {0}")]
    BadValueCount(usize),
    #[error("clause width must be at least 2, got {0}")]
    BadWidth(usize),
}

/// Variables `0..vars`, each taking one of `values` values; every clause is an
/// ordered tuple of `width` distinct variables that must not all be equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawNae", into = "RawNae")]
pub struct NaeInstance {
    vars: usize,
    values: usize,
    width: usize,
    clauses: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawNae {
    vars: usize,
    values: usize,
    width: usize,
    clauses: Vec<Vec<usize>>,
}

impl TryFrom<RawNae> for NaeInstance {
    type Error = NaeError;
    fn try_from(raw: RawNae) -> Result<Self, NaeError> {
        NaeInstance::new(raw.vars, raw.values, raw.width, raw.clauses)
    }
}

impl From<NaeInstance> for RawNae {
    fn from(i: NaeInstance) -> Self {
        RawNae {
            vars: i.vars,
            values: i.values,
            width: i.width,
            clauses: i.clauses,
        }
    }
}

impl NaeInstance {
    pub fn new(vars: usize, values: usize, width: usize, clauses: Vec<Vec<usize>>) -> Result<Self, NaeError> {
        if values == 0 || values > 64 {
            return Err(NaeError::BadValueCount(values));
        }
        if width < 2 {
            return Err(NaeError::BadWidth(width));
        }
        for (ci, clause) in clauses.iter().enumerate() {
            if clause.len() != width {
                return Err(NaeError::WidthMismatch {
                    clause: ci,
                    expected: width,
                    got: clause.len(),
                });
            }
            for (i, &x) in clause.iter().enumerate() {
                if x >= vars {
                    return Err(NaeError::VariableOutOfRange { clause: ci, var: x, vars });
                }
                if clause[..i].contains(&x) {
                    return Err(NaeError::RepeatedVariable { clause: ci, var: x });
                }
            }
        }
        Ok(NaeInstance {
            vars,
            values,
            width,
            clauses,
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn values(&self) -> usize {
        self.values
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn clauses(&self) -> &[Vec<usize>] {
        &self.clauses
    }

    /// For each variable, its occurrences as `(clause, position)` in clause order.
    pub fn occurrences(&self) -> Vec<Vec<(usize, usize)>> {
        let mut occ = vec![Vec::new(); self.vars];
        for (ci, clause) in self.clauses.iter().enumerate() {
            for (pos, &x) in clause.iter().enumerate() {
                occ[x].push((ci, pos));
            }
        }
        occ
    }

    pub fn is_satisfied_by(&self, assignment: &[usize]) -> bool {
        assignment.len() == self.vars
            && assignment.iter().all(|&a| a < self.values)
            && self.clauses.iter().all(|clause| {
                let first = assignment[clause[0]];
                clause.iter().any(|&x| assignment[x] != first)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(
            NaeInstance::new(3, 2, 3, vec![vec![0, 1, 1]]),
            Err(NaeError::RepeatedVariable { clause: 0, var: 1 })
        );
        assert_eq!(
            NaeInstance::new(3, 2, 3, vec![vec![0, 1]]),
            Err(NaeError::WidthMismatch {
                clause: 0,
                expected: 3,
                got: 2
            })
        );
        let i = NaeInstance::new(3, 2, 3, vec![vec![0, 1, 2]]).unwrap();
        assert!(i.is_satisfied_by(&[0, 0, 1]));
        assert!(!i.is_satisfied_by(&[1, 1, 1]));
    }

    #[test]
    fn json_round_trip_validates() {
        let i = NaeInstance::new(3, 2, 3, vec![vec![2, 0, 1]]).unwrap();
        let s = serde_json::to_string(&i).unwrap();
        assert_eq!(serde_json::from_str::<NaeInstance>(&s).unwrap(), i);
        let bad = r#"{"vars":2,"values":2,"width":3,"clauses":[[0,1,2]]}"#;
        assert!(serde_json::from_str::<NaeInstance>(bad).is_err());
    }
}
