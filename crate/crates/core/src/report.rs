//! Verification reports: every case carries a closed-form value, an oracle
//! value, their distance and the verdict against a named tolerance.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    /// Tolerance group; `pass` compares `abs_diff` with the group's tolerance.
    pub check: String,
    pub inputs: String,
    /// (re, im)
    pub closed_form: [f64; 2],
    pub oracle: [f64; 2],
    pub abs_diff: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub cases: Vec<Case>,
    pub passed: bool,
    /// Seconds; left out unless timing is requested so reports stay byte-stable.
    pub wall_time: Option<f64>,
}

impl Report {
    pub fn new(suite: &str, seed: u64, tolerances: BTreeMap<String, f64>) -> Self {
        Report { suite: suite.into(), seed, tolerances, cases: Vec::new(), passed: true, wall_time: None }
    }

    pub fn tolerance(&self, check: &str) -> f64 {
        *self.tolerances.get(check).unwrap_or_else(|| panic!("no tolerance registered for {check}"))
    }

    pub fn compare(&mut self, check: &str, inputs: impl Into<String>, closed: C64, oracle: C64) {
        let diff = (closed - oracle).norm();
        self.push(check, inputs, closed, oracle, diff);
    }

    pub fn compare_real(&mut self, check: &str, inputs: impl Into<String>, closed: f64, oracle: f64) {
        self.compare(check, inputs, C64::new(closed, 0.0), C64::new(oracle, 0.0));
    }

    /// For one-sided checks: `value ≤ bound` is recorded with diff max(0, value − bound).
    pub fn upper_bound(&mut self, check: &str, inputs: impl Into<String>, value: f64, bound: f64) {
        let diff = (value - bound).max(0.0);
        self.push(check, inputs, C64::new(bound, 0.0), C64::new(value, 0.0), diff);
    }

    /// Boolean facts: closed form 1, oracle 1 or 0.
    pub fn holds(&mut self, check: &str, inputs: impl Into<String>, ok: bool) {
        let v = if ok { 1.0 } else { 0.0 };
        self.push(check, inputs, C64::new(1.0, 0.0), C64::new(v, 0.0), 1.0 - v);
    }

    /// A computation that should have succeeded but errored.
    pub fn failed(&mut self, check: &str, inputs: impl Into<String>) {
        self.push(check, inputs, C64::new(f64::NAN, 0.0), C64::new(f64::NAN, 0.0), f64::INFINITY);
    }

    fn push(&mut self, check: &str, inputs: impl Into<String>, closed: C64, oracle: C64, diff: f64) {
        let pass = diff <= self.tolerance(check);
        self.passed &= pass;
        self.cases.push(Case {
            check: check.into(),
            inputs: inputs.into(),
            closed_form: [closed.re, closed.im],
            oracle: [oracle.re, oracle.im],
            abs_diff: diff,
            pass,
        });
    }

    /// Sorts cases by (check, inputs) so the order never depends on evaluation order.
    pub fn finish(mut self) -> Self {
        self.cases.sort_by(|a, b| (&a.check, &a.inputs).cmp(&(&b.check, &b.inputs)));
        self.passed = self.cases.iter().all(|c| c.pass);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn max_diff(&self, check: &str) -> f64 {
        self.cases.iter().filter(|c| c.check == check).map(|c| c.abs_diff).fold(0.0, f64::max)
    }

    pub fn all_pass(&self, check: &str) -> bool {
        self.cases.iter().filter(|c| c.check == check).all(|c| c.pass)
    }

    pub fn count(&self, check: &str) -> usize {
        self.cases.iter().filter(|c| c.check == check).count()
    }
}
