use std::time::Instant;

use serde::Serialize;

use crate::scalar::{Scalar, Specialization};
use crate::tensor::Discrepancy;

/// Witness lists are truncated to this many entries; the total is kept.
pub const WITNESS_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub identity: String,
    pub at: String,
    pub lhs: String,
    pub rhs: String,
}

/// Per-identity outcome inside a suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemSummary {
    pub name: String,
    pub pass: bool,
    pub checked: u64,
    pub failures: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub n: usize,
    pub symbolic: Vec<String>,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
    pub witness_count: u64,
    pub checked: u64,
    pub items: Vec<ItemSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub millis: u64,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Witnesses recorded for one named identity.
    pub fn witnesses_for<'a>(&'a self, identity: &'a str) -> impl Iterator<Item = &'a Witness> + 'a {
        self.witnesses.iter().filter(move |w| w.identity == identity)
    }

    pub fn item(&self, name: &str) -> Option<&ItemSummary> {
        self.items.iter().find(|i| i.name == name)
    }
}

/// Accumulates checks and witnesses for one suite run.
pub(crate) struct ReportBuilder {
    suite: String,
    n: usize,
    symbolic: Vec<String>,
    started: Instant,
    witnesses: Vec<Witness>,
    witness_count: u64,
    checked: u64,
    items: Vec<ItemSummary>,
    note: Option<String>,
}

impl ReportBuilder {
    pub fn new(suite: &str, n: usize, spec: &Specialization) -> Self {
        ReportBuilder {
            suite: suite.to_string(),
            n,
            symbolic: spec.symbolic_names().into_iter().map(String::from).collect(),
            started: Instant::now(),
            witnesses: Vec::new(),
            witness_count: 0,
            checked: 0,
            items: Vec::new(),
            note: None,
        }
    }

    /// Overrides the list of symbols reported as free.
    pub fn symbolic(mut self, names: &[&str]) -> Self {
        self.symbolic = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn witness(&mut self, w: Witness) {
        self.witness_count += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(w);
        }
    }

    /// Records one identity: `checked` comparisons and its failing witnesses.
    pub fn item(&mut self, name: &str, checked: u64, failures: Vec<Witness>) {
        self.checked += checked;
        self.items.push(ItemSummary {
            name: name.to_string(),
            pass: failures.is_empty(),
            checked,
            failures: failures.len() as u64,
        });
        for w in failures {
            self.witness(w);
        }
    }

    pub fn finish(self) -> VerificationReport {
        VerificationReport {
            suite: self.suite,
            n: self.n,
            symbolic: self.symbolic,
            pass: self.witness_count == 0,
            witnesses: self.witnesses,
            witness_count: self.witness_count,
            checked: self.checked,
            items: self.items,
            note: self.note,
            millis: self.started.elapsed().as_millis() as u64,
        }
    }
}

pub(crate) fn discrepancy_witness(identity: &str, d: &Discrepancy) -> Witness {
    Witness {
        identity: identity.to_string(),
        at: format!("out=({}) in=({})", join(&d.out), join(&d.inp)),
        lhs: d.left.to_string(),
        rhs: d.right.to_string(),
    }
}

pub(crate) fn scalar_witness(identity: &str, at: String, lhs: &Scalar, rhs: &Scalar) -> Witness {
    Witness {
        identity: identity.to_string(),
        at,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

pub(crate) fn join(idx: &[usize]) -> String {
    idx.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}
