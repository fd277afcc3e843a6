//! Command results with a machine rendering (JSON lines) and a human one
//! (aligned table), both derived from the same rows.

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Computed,
    /// A selftest criterion failed.
    Failed,
    /// A verdict could not be settled within the configured budget.
    Indeterminate,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Computed => 0,
            Status::Failed => 1,
            Status::Indeterminate => 3,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Computed => "computed",
            Status::Failed => "failed",
            Status::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub config: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Value>,
    pub status: Status,
}

impl RunReport {
    pub fn new(command: impl Into<String>, config: Value, columns: &[&str]) -> Self {
        RunReport {
            command: command.into(),
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            status: Status::Computed,
        }
    }

    pub fn push(&mut self, row: Value) {
        self.rows.push(row);
    }

    /// Raises the status; `Failed` outranks `Indeterminate`.
    pub fn mark(&mut self, status: Status) {
        let rank = |s: Status| match s {
            Status::Computed => 0,
            Status::Indeterminate => 1,
            Status::Failed => 2,
        };
        if rank(status) > rank(self.status) {
            self.status = status;
        }
    }

    /// Header line, one line per row, status line.
    pub fn render_json(&self) -> String {
        let mut out = json!({ "command": self.command, "config": self.config }).to_string();
        out.push('\n');
        for r in &self.rows {
            out += &r.to_string();
            out.push('\n');
        }
        out +=
            &json!({ "status": self.status.label(), "exit": self.status.exit_code() }).to_string();
        out.push('\n');
        out
    }

    pub fn render_table(&self) -> String {
        let cell = |row: &Value, col: &str| -> String {
            match row.get(col) {
                None | Some(Value::Null) => "-".into(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            }
        };
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| self.columns.iter().map(|c| cell(r, c)).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(k, c)| {
                cells
                    .iter()
                    .map(|r| r[k].chars().count())
                    .chain([c.chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: &[String]| -> String {
            let parts: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = format!("# {}", self.command);
        if let Value::Object(cfg) = &self.config {
            for (k, v) in cfg {
                let v = match v {
                    Value::String(s) => s.clone(),
                    v => v.to_string(),
                };
                out += &format!("  {k}={v}");
            }
        }
        out.push('\n');
        out += &line(&self.columns);
        out += &line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
        for r in &cells {
            out += &line(r);
        }
        out += &format!("status: {}\n", self.status.label());
        out
    }
}

/// Builds a row object from `(column, value)` pairs.
pub fn row<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}
