use std::collections::BTreeMap;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "Pass",
            Status::Fail => "Fail",
            Status::Inconclusive => "Inconclusive",
        }
    }

    /// Process exit code: 0 on Pass, 1 otherwise.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail | Status::Inconclusive => 1,
        }
    }

    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Canonical description of everything a run depends on apart from the
/// seed. Keys are sorted, so the digest does not depend on flag order.
#[derive(Clone, Debug, Default)]
pub struct Inputs(BTreeMap<String, String>);

impl Inputs {
    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for (k, v) in &self.0 {
            hasher.update((k.len() as u64).to_le_bytes());
            hasher.update(k.as_bytes());
            hasher.update((v.len() as u64).to_le_bytes());
            hasher.update(v.as_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub results: Value,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str, inputs: &Inputs, seed: u64, results: Value, status: Status) -> Self {
        Report {
            command: command.to_string(),
            inputs_digest: inputs.digest(),
            seed,
            results,
            status,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputsDigest": self.inputs_digest,
            "seed": self.seed,
            "results": self.results,
            "status": self.status.label(),
        })
    }

    /// Pretty-printed with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }
}

/// Rows of a comma-separated table.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| {
                    if c.contains([',', '"', '\n']) {
                        format!("\"{}\"", c.replace('"', "\"\""))
                    } else {
                        c.clone()
                    }
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_ignores_insertion_order() {
        let mut a = Inputs::default();
        a.set("map", "X0; X1");
        a.set("point", "[1, 2]");
        let mut b = Inputs::default();
        b.set("point", "[1, 2]");
        b.set("map", "X0; X1");
        assert_eq!(a.digest(), b.digest());
        b.set("point", "[1, 3]");
        assert_ne!(a.digest(), b.digest());
    }

    #[test]
    fn keys_are_sorted() {
        let r = Report::new("orbit", &Inputs::default(), 3, json!({"z": 1, "a": 2}), Status::Pass);
        let text = r.render();
        let pos = |k: &str| text.find(k).unwrap();
        assert!(pos("\"command\"") < pos("\"inputsDigest\""));
        assert!(pos("\"results\"") < pos("\"seed\""));
        assert!(pos("\"a\"") < pos("\"z\""));
    }

    #[test]
    fn csv_quotes_cells_with_commas() {
        let mut t = Table::new(vec!["k", "point"]);
        t.push(vec!["0".into(), "[1, 2]".into()]);
        assert_eq!(t.to_csv(), "k,point\n0,\"[1, 2]\"\n");
    }
}
