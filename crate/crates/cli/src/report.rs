//! Reports as ordered lines of `key: value` pairs, rendered as text or as JSON with the same keys.

use serde_json::{Map, Value as Json};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Text(String),
    Int(i64),
    Bool(bool),
    /// Rendered as `undefined (reason)`.
    Undefined(String),
    /// Rendered as `indeterminate`: a gated verdict whose preconditions failed.
    Indeterminate,
    /// Nested records, one text line each.
    List(Vec<Line>),
}

impl Value {
    pub fn text(s: impl ToString) -> Self {
        Value::Text(s.to_string())
    }

    fn render(&self) -> String {
        match self {
            Value::Text(s) => s.clone(),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Undefined(reason) => format!("undefined ({reason})"),
            Value::Indeterminate => "indeterminate".into(),
            Value::List(_) => unreachable!("lists render as separate lines"),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Text(s) => Json::String(s.clone()),
            Value::Int(i) => Json::from(*i),
            Value::Bool(b) => Json::Bool(*b),
            Value::Undefined(_) | Value::Indeterminate => Json::String(self.render()),
            Value::List(lines) => Json::Array(lines.iter().map(Line::to_json).collect()),
        }
    }
}

/// One text line: pairs joined by `, `.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Line(pub Vec<(String, Value)>);

impl Line {
    pub fn one(key: &str, value: Value) -> Self {
        Line(vec![(key.to_string(), value)])
    }

    pub fn and(mut self, key: &str, value: Value) -> Self {
        self.0.push((key.to_string(), value));
        self
    }

    fn to_json(&self) -> Json {
        let mut map = Map::new();
        for (k, v) in &self.0 {
            map.insert(k.clone(), v.to_json());
        }
        Json::Object(map)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub lines: Vec<Line>,
}

impl Report {
    pub fn push(&mut self, key: &str, value: Value) {
        self.lines.push(Line::one(key, value));
    }

    pub fn push_line(&mut self, line: Line) {
        self.lines.push(line);
    }

    /// A list value is printed as its key on its own line followed by indented entries.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            if let [(key, Value::List(entries))] = line.0.as_slice() {
                out.push_str(&format!("{key}:\n"));
                for entry in entries {
                    out.push_str("  ");
                    out.push_str(&render_pairs(entry));
                    out.push('\n');
                }
            } else {
                out.push_str(&render_pairs(line));
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut map = Map::new();
        for line in &self.lines {
            for (k, v) in &line.0 {
                map.insert(k.clone(), v.to_json());
            }
        }
        let mut s = serde_json::to_string_pretty(&Json::Object(map)).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

fn render_pairs(line: &Line) -> String {
    line.0.iter().map(|(k, v)| format!("{k}: {}", v.render())).collect::<Vec<_>>().join(", ")
}
