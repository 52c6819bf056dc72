//! Machine-readable verification reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Evidence,
    InvalidInput,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Evidence => "evidence",
            Status::InvalidInput => "invalid-input",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub key: String,
    pub expected: String,
    pub actual: String,
    pub status: Status,
}

impl Item {
    pub fn new(
        key: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        status: Status,
    ) -> Self {
        Item {
            key: key.into(),
            expected: expected.into(),
            actual: actual.into(),
            status,
        }
    }

    /// Item whose status is the exact equality of the two renderings.
    pub fn compare(key: impl Into<String>, expected: String, actual: String) -> Self {
        let status = Status::from_bool(expected == actual);
        Item::new(key, expected, actual, status)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub items: Vec<Item>,
    pub status: Status,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(
        command: impl Into<String>,
        params: BTreeMap<String, String>,
        items: Vec<Item>,
    ) -> Self {
        let status = Self::combine(&items);
        Report {
            command: command.into(),
            params,
            items,
            status,
            elapsed_ms: 0,
        }
    }

    /// `fail` dominates, then `evidence`; an empty report passes.
    pub fn combine(items: &[Item]) -> Status {
        if items.iter().any(|i| i.status == Status::Fail) {
            Status::Fail
        } else if items.iter().any(|i| i.status == Status::InvalidInput) {
            Status::InvalidInput
        } else if items.iter().any(|i| i.status == Status::Evidence) {
            Status::Evidence
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Evidence)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Item> {
        self.items.iter().filter(|i| i.status == Status::Fail)
    }
}

/// Shorthand for building parameter maps.
pub fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_combination() {
        let pass = Item::compare("a", "1".into(), "1".into());
        let fail = Item::compare("b", "1".into(), "2".into());
        let ev = Item::new("c", "x", "y", Status::Evidence);
        assert_eq!(Report::combine(std::slice::from_ref(&pass)), Status::Pass);
        assert_eq!(
            Report::combine(&[pass.clone(), ev.clone()]),
            Status::Evidence
        );
        assert_eq!(Report::combine(&[ev, fail, pass]), Status::Fail);
        assert_eq!(Report::combine(&[]), Status::Pass);
    }
}
