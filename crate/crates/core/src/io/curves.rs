use std::path::Path;

use crate::error::{Error, Result};
use crate::stats::fmt_g9;

/// Columns of a curve CSV: `i,r_true[,r_pred]`, or `i,r_pred` for a bare
/// prediction.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurveTable {
    pub truth: Option<Vec<f64>>,
    pub pred: Option<Vec<f64>>,
}

impl CurveTable {
    pub fn truth(values: Vec<f64>) -> Self {
        Self {
            truth: Some(values),
            pred: None,
        }
    }

    pub fn prediction(values: Vec<f64>) -> Self {
        Self {
            truth: None,
            pred: Some(values),
        }
    }

    pub fn both(truth: Vec<f64>, pred: Vec<f64>) -> Result<Self> {
        if truth.len() != pred.len() {
            return Err(Error::LengthMismatch(truth.len(), pred.len()));
        }
        Ok(Self {
            truth: Some(truth),
            pred: Some(pred),
        })
    }

    pub fn len(&self) -> usize {
        self.truth
            .as_ref()
            .or(self.pred.as_ref())
            .map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("i");
        if self.truth.is_some() {
            out.push_str(",r_true");
        }
        if self.pred.is_some() {
            out.push_str(",r_pred");
        }
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&i.to_string());
            for col in [&self.truth, &self.pred].into_iter().flatten() {
                out.push(',');
                out.push_str(&fmt_g9(col[i]));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, reason: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            reason,
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty curve file".into()))?;
        let cols: Vec<&str> = header.trim().split(',').collect();
        let (has_truth, has_pred) = match cols.as_slice() {
            ["i", "r_true"] => (true, false),
            ["i", "r_pred"] => (false, true),
            ["i", "r_true", "r_pred"] => (true, true),
            _ => return Err(err(1, format!("unexpected header `{header}`"))),
        };
        let mut truth = Vec::new();
        let mut pred = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != cols.len() {
                return Err(err(lineno, format!("expected {} fields", cols.len())));
            }
            let expected = if has_truth { truth.len() } else { pred.len() };
            if fields[0].parse::<usize>().ok() != Some(expected) {
                return Err(err(lineno, format!("expected index {expected}")));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| err(lineno, format!("`{s}` is not a number")))
            };
            if has_truth {
                truth.push(num(fields[1])?);
            }
            if has_pred {
                pred.push(num(fields[cols.len() - 1])?);
            }
        }
        Ok(Self {
            truth: has_truth.then_some(truth),
            pred: has_pred.then_some(pred),
        })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }
}
