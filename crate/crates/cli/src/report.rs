use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    SubsetSum,
    LinSat,
    SetPart,
    SetCover,
    Cnf,
    SelfTest,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Decision(Verdict),
    /// Decimal, since counts can exceed 64 bits.
    Count(String),
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub enum Verdict {
    #[serde(rename = "YES")]
    Yes,
    #[serde(rename = "NO")]
    No,
}

impl From<bool> for Verdict {
    fn from(yes: bool) -> Self {
        if yes {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

/// One run, printed as a single JSON object. Field order and map order are
/// fixed, so equal inputs give equal bytes unless `elapsed_ms` is requested.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub problem: Problem,
    pub algorithm: String,
    pub answer: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    pub parameters: BTreeMap<String, Value>,
    pub oracle_checked: bool,
}

impl RunReport {
    pub fn new(problem: Problem, algorithm: &str, answer: Answer, seed: u64) -> Self {
        Self {
            problem,
            algorithm: algorithm.to_owned(),
            answer,
            witness: None,
            seed,
            elapsed_ms: None,
            parameters: BTreeMap::new(),
            oracle_checked: false,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_owned(), value.into());
        self
    }

    pub fn is_no(&self) -> bool {
        self.answer == Answer::Decision(Verdict::No)
    }
}
