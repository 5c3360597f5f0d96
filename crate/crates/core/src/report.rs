//! Check results, counterexamples and exhaustive basis sweeps.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::linalg::Matrix;
use crate::scalars::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
    Error,
}

/// A failing basis tuple with both sides of the identity evaluated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub tuple: Vec<usize>,
    pub lhs: Vec<Value>,
    pub rhs: Vec<Value>,
}

impl Counterexample {
    pub fn new<S: Scalar>(tuple: &[usize], lhs: &[S], rhs: &[S]) -> Self {
        Counterexample {
            tuple: tuple.to_vec(),
            lhs: lhs.iter().map(Scalar::to_json).collect(),
            rhs: rhs.iter().map(Scalar::to_json).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Pass, counterexample: None, note: None }
    }

    pub fn fail(name: impl Into<String>, note: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Fail, counterexample: None, note: Some(note.into()) }
    }

    pub fn vacuous(name: impl Into<String>, note: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Vacuous, counterexample: None, note: Some(note.into()) }
    }

    pub fn error(name: impl Into<String>, note: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Error, counterexample: None, note: Some(note.into()) }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool) -> Self {
        if ok {
            Check::pass(name)
        } else {
            Check { name: name.into(), status: Status::Fail, counterexample: None, note: None }
        }
    }

    /// `Pass` when the sweep found nothing, otherwise `Fail` with the tuple.
    pub fn from_sweep(name: impl Into<String>, found: Option<Counterexample>) -> Self {
        let status = if found.is_some() { Status::Fail } else { Status::Pass };
        Check { name: name.into(), status, counterexample: found, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn ok(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Vacuous)
    }
}

/// Outcome of a suite of checks plus any derived data (dimensions, witnesses).
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub data: Map<String, Value>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { subject: subject.into(), checks: Vec::new(), data: Map::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        for (k, v) in other.data {
            self.data.insert(k, v);
        }
    }

    pub fn insert(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok())
    }
}

fn decode(mut t: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = t % d;
        t /= d;
    }
}

/// Exhaustively evaluates an identity on every basis tuple of the given
/// shape, in lexicographic order, and returns the first tuple at which the
/// two sides differ. Tuples are evaluated in parallel; the answer does not
/// depend on scheduling.
pub fn sweep<S, F>(dims: &[usize], eval: F) -> Option<Counterexample>
where
    S: Scalar,
    F: Fn(&[usize]) -> (Vec<S>, Vec<S>) + Sync,
{
    if dims.iter().any(|&d| d == 0) {
        return None;
    }
    let total: usize = dims.iter().product();
    (0..total).into_par_iter().find_map_first(|t| {
        let mut tuple = vec![0; dims.len()];
        decode(t, dims, &mut tuple);
        let (lhs, rhs) = eval(&tuple);
        (lhs != rhs).then(|| Counterexample::new(&tuple, &lhs, &rhs))
    })
}

/// [`sweep`] for identities between operators.
pub fn sweep_matrices<S, F>(dims: &[usize], eval: F) -> Option<Counterexample>
where
    S: Scalar,
    F: Fn(&[usize]) -> (Matrix<S>, Matrix<S>) + Sync,
{
    sweep(dims, |t| {
        let (a, b) = eval(t);
        (a.flat().to_vec(), b.flat().to_vec())
    })
}

/// Renders a coordinate vector in the textual scalar form.
pub fn vector_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    #[test]
    fn sweep_finds_first_lexicographic_failure() {
        let found = sweep(&[3, 3], |t| {
            let bad = t[0] + t[1] >= 3;
            (vec![Rational::from_i64(bad as i64)], vec![Rational::from_i64(0)])
        });
        assert_eq!(found.unwrap().tuple, vec![1, 2]);
        let none = sweep(&[2, 0], |_| (vec![Rational::from_i64(1)], vec![Rational::from_i64(0)]));
        assert!(none.is_none());
    }
}
