//! Item-by-item reports, as text or as one JSON record per line.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Item {
    pub id: String,
    pub verdict: String,
    pub pass: bool,
    /// Witness, counterexample or diagnostic.
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuel_used: Option<u64>,
}

impl Item {
    pub fn new(id: impl Into<String>, verdict: impl Into<String>, pass: bool) -> Self {
        Item { id: id.into(), verdict: verdict.into(), pass, detail: String::new(), steps: None, fuel_used: None }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    pub fn steps(mut self, n: u64) -> Self {
        self.steps = Some(n);
        self.fuel_used = Some(n);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub items: Vec<Item>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), items: Vec::new() }
    }

    pub fn push(&mut self, item: Item) {
        self.items.push(item);
    }

    pub fn extend(&mut self, other: Report) {
        self.items.extend(other.items);
    }

    pub fn passed(&self) -> usize {
        self.items.iter().filter(|i| i.pass).count()
    }

    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn summary(&self) -> String {
        format!("{}: {}/{} passed", self.name, self.passed(), self.items.len())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            out.push_str(&format!("{} {}: {}", if i.pass { "ok  " } else { "FAIL" }, i.id, i.verdict));
            if let Some(n) = i.steps {
                out.push_str(&format!(" ({n} steps)"));
            }
            if !i.detail.is_empty() {
                out.push_str(&format!("\n       {}", i.detail));
            }
            out.push('\n');
        }
        out.push_str(&self.summary());
        out.push('\n');
        out
    }

    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for i in &self.items {
            out.push_str(&serde_json::to_string(i).expect("items serialize"));
            out.push('\n');
        }
        out
    }
}
