//! JSON run reports with a fixed schema:
//! `{"command", "inputs", "outputs", "fit"?, "warnings"}`.
//!
//! Keys are sorted, floats carry 17 significant digits and non-finite
//! values become `null`, so identical runs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use qtd_core::fit::FitResult;

use crate::error::CliError;
use crate::table::format_number;

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(BTreeMap<String, Json>),
}

impl From<f64> for Json {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<bool> for Json {
    fn from(b: bool) -> Self {
        Self::Bool(b)
    }
}

impl From<usize> for Json {
    fn from(n: usize) -> Self {
        Self::Int(n as i64)
    }
}

impl From<u64> for Json {
    fn from(n: u64) -> Self {
        Self::Int(n as i64)
    }
}

impl From<u32> for Json {
    fn from(n: u32) -> Self {
        Self::Int(n.into())
    }
}

impl From<i32> for Json {
    fn from(n: i32) -> Self {
        Self::Int(n.into())
    }
}

impl From<&str> for Json {
    fn from(s: &str) -> Self {
        Self::Str(s.to_owned())
    }
}

impl From<String> for Json {
    fn from(s: String) -> Self {
        Self::Str(s)
    }
}

impl<T: Into<Json>> From<Vec<T>> for Json {
    fn from(v: Vec<T>) -> Self {
        Self::Arr(v.into_iter().map(Into::into).collect())
    }
}

impl<T: Into<Json>> From<Option<T>> for Json {
    fn from(v: Option<T>) -> Self {
        v.map_or(Self::Null, Into::into)
    }
}

impl Json {
    pub fn object<K: Into<String>>(entries: impl IntoIterator<Item = (K, Json)>) -> Self {
        Self::Obj(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Self::Null => out.push_str("null"),
            Self::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Self::Int(n) => {
                let _ = write!(out, "{n}");
            }
            Self::Num(x) if x.is_finite() => out.push_str(&format_number(*x)),
            Self::Num(_) => out.push_str("null"),
            Self::Str(s) => out.push_str(&serde_json::to_string(s).expect("strings always serialize")),
            Self::Arr(items) if items.is_empty() => out.push_str("[]"),
            Self::Arr(items) => {
                // numeric arrays stay on one line
                if items.iter().all(|i| matches!(i, Self::Num(_) | Self::Int(_) | Self::Null)) {
                    out.push('[');
                    for (i, item) in items.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        item.write(out, indent);
                    }
                    out.push(']');
                    return;
                }
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    pad(out, indent + 1);
                    item.write(out, indent + 1);
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push(']');
            }
            Self::Obj(map) if map.is_empty() => out.push_str("{}"),
            Self::Obj(map) => {
                out.push_str("{\n");
                for (i, (k, v)) in map.iter().enumerate() {
                    pad(out, indent + 1);
                    out.push_str(&serde_json::to_string(k).expect("strings always serialize"));
                    out.push_str(": ");
                    v.write(out, indent + 1);
                    out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
                }
                pad(out, indent);
                out.push('}');
            }
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0);
        s.push('\n');
        s
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Json>,
    pub outputs: BTreeMap<String, Json>,
    pub fit: Option<Json>,
    pub converged: Option<bool>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            fit: None,
            converged: None,
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Json>) -> &mut Self {
        self.inputs.insert(key.to_owned(), value.into());
        self
    }

    pub fn output(&mut self, key: &str, value: impl Into<Json>) -> &mut Self {
        self.outputs.insert(key.to_owned(), value.into());
        self
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    /// Plot-ready table under `outputs.table`, one array per column.
    pub fn table(&mut self, columns: &[(&str, &[f64])]) {
        let t = Json::object(columns.iter().map(|(name, v)| (*name, Json::from(v.to_vec()))));
        self.outputs.insert("table".into(), t);
    }

    pub fn set_fit(&mut self, fit: &FitResult) {
        let params = fit.names.iter().zip(&fit.params).zip(&fit.std_errors).map(|((n, &v), &e)| {
            (
                n.clone(),
                Json::object([("value", Json::from(v)), ("std_error", Json::from(e))]),
            )
        });
        self.fit = Some(Json::object([
            ("params", Json::object(params)),
            ("chi2", fit.chi2.into()),
            ("dof", fit.dof.into()),
            ("converged", fit.converged.into()),
            ("iterations", fit.iterations.into()),
            ("weighted", fit.weighted.into()),
        ]));
        self.converged = Some(fit.converged);
        if !fit.converged {
            self.warn(format!("fit did not converge within {} iterations", fit.iterations));
        }
    }

    pub fn to_json(&self) -> Json {
        let mut top = BTreeMap::new();
        top.insert("command".into(), Json::from(self.command.as_str()));
        top.insert("inputs".into(), Json::Obj(self.inputs.clone()));
        top.insert("outputs".into(), Json::Obj(self.outputs.clone()));
        if let Some(fit) = &self.fit {
            top.insert("fit".into(), fit.clone());
        }
        top.insert("warnings".into(), Json::from(self.warnings.clone()));
        Json::Obj(top)
    }

    pub fn render(&self) -> String {
        self.to_json().render()
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.render()).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_valid_sorted_json() {
        let mut r = Report::new("demo");
        r.input("zeta", 1.0).input("alpha", f64::NAN);
        r.output("list", vec![0.1, 0.2]).output("name", "a \"quoted\" name");
        r.warn("careful");
        let text = r.render();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["inputs"]["alpha"], serde_json::Value::Null);
        assert_eq!(v["outputs"]["list"][0].as_f64().unwrap(), 0.1);
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.find("\"command\"").unwrap() < text.find("\"inputs\"").unwrap());
        assert_eq!(v["warnings"][0], "careful");
    }
}
