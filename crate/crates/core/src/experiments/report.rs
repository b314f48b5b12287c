use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::catalog::Source;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Matrix table with rows labelled by `row_key` values and one column per `col_values`.
    pub fn matrix(name: &str, row_key: &str, row_values: &[f64], col_prefix: &str, col_values: &[f64], cells: &[Vec<f64>]) -> Self {
        let mut columns = vec![row_key.to_string()];
        columns.extend(col_values.iter().map(|c| format!("{col_prefix}{c}")));
        let rows = row_values
            .iter()
            .zip(cells)
            .map(|(r, cs)| std::iter::once(num(*r)).chain(cs.iter().map(|c| num(*c))).collect())
            .collect();
        Self {
            name: name.into(),
            columns,
            rows,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| match v {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            }))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// JSON number, with non-finite values spelled out.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{x}")))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constant {
    pub name: String,
    pub value: Value,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<u8>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub id: String,
    pub anchor: String,
    pub config: Value,
    pub seed: u64,
    pub tables: Vec<Table>,
    pub constants: Vec<Constant>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ExperimentReport {
    pub(crate) fn new(id: &str, anchor: &str, config: Value, seed: u64) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            config,
            seed,
            tables: Vec::new(),
            constants: Vec::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub(crate) fn constant(&mut self, name: &str, value: f64, source: Source) {
        self.constants.push(Constant {
            name: name.into(),
            value: num(value),
            source,
        });
    }

    pub(crate) fn check(&mut self, name: &str, criterion: Option<u8>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            criterion,
            passed,
            detail: detail.into(),
        });
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Checks attached to one acceptance criterion.
    pub fn criterion_checks(&self, criterion: u8) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(move |c| c.criterion == Some(criterion))
    }
}

/// Everything produced by one run of a manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub seed: u64,
    pub passed: bool,
    pub experiments: Vec<ExperimentReport>,
}

impl SuiteReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `report.json` plus one `<experiment>.<table>.csv` per table.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json()? + "\n")?;
        for e in &self.experiments {
            for t in &e.tables {
                let file = std::fs::File::create(dir.join(format!("{}.{}.csv", e.id, t.name)))?;
                t.write_csv(std::io::BufWriter::new(file))?;
            }
        }
        Ok(())
    }
}
