use serde_json::{Map, Value};

/// Ordered key/value report, printed as `key=value` lines or one JSON object.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn extend(&mut self, entries: impl IntoIterator<Item = (String, Value)>) -> &mut Self {
        self.entries.extend(entries);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn entries(&self) -> &[(String, Value)] {
        &self.entries
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let map: Map<String, Value> = self.entries.iter().cloned().collect();
            let mut out = serde_json::to_string_pretty(&Value::Object(map)).expect("reports serialize");
            out.push('\n');
            return out;
        }
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('=');
            match v {
                Value::String(s) => out.push_str(s),
                other => out.push_str(&other.to_string()),
            }
            out.push('\n');
        }
        out
    }
}
