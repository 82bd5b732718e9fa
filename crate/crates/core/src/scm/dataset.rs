use std::collections::BTreeMap;
use std::io::{Read, Write};

use indexmap::IndexMap;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The part a column plays in an analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Treatment,
    Outcome,
    Covariate,
    Instrument,
    EnvId,
    Spurious,
    Causal,
}

/// Column-named numeric table with role annotations.
///
/// All columns have length `n`; at most one column is the outcome, and an
/// `env_id` column holds small non-negative integers.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    columns: IndexMap<String, Vec<f64>>,
    roles: BTreeMap<String, Role>,
}

impl Dataset {
    pub fn from_columns<I, S>(columns: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut map = IndexMap::new();
        let mut n = None;
        for (name, values) in columns {
            let name = name.into();
            match n {
                None => n = Some(values.len()),
                Some(len) if len != values.len() => {
                    return Err(Error::config(format!(
                        "column `{name}` has {} rows, expected {len}",
                        values.len()
                    )))
                }
                _ => {}
            }
            if map.insert(name.clone(), values).is_some() {
                return Err(Error::config(format!("duplicate column `{name}`")));
            }
        }
        Ok(Self {
            n: n.unwrap_or(0),
            columns: map,
            roles: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.keys().map(String::as_str)
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.columns.contains_key(name)
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.columns
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::config(format!("missing column `{name}`")))
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if !self.columns.is_empty() && values.len() != self.n {
            return Err(Error::config(format!(
                "column `{name}` has {} rows, expected {}",
                values.len(),
                self.n
            )));
        }
        if self.columns.contains_key(&name) {
            return Err(Error::config(format!("duplicate column `{name}`")));
        }
        self.n = values.len();
        self.columns.insert(name, values);
        Ok(())
    }

    /// Replaces the values of an existing column.
    pub fn replace_column(&mut self, name: &str, values: Vec<f64>) -> Result<()> {
        if values.len() != self.n {
            return Err(Error::config(format!(
                "column `{name}` has {} rows, expected {}",
                values.len(),
                self.n
            )));
        }
        let slot = self
            .columns
            .get_mut(name)
            .ok_or_else(|| Error::config(format!("missing column `{name}`")))?;
        *slot = values;
        Ok(())
    }

    pub fn role(&self, name: &str) -> Option<Role> {
        self.roles.get(name).copied()
    }

    pub fn roles(&self) -> &BTreeMap<String, Role> {
        &self.roles
    }

    pub fn set_role(&mut self, name: &str, role: Role) -> Result<()> {
        let values = self.column(name)?;
        if role == Role::Outcome {
            if let Some(other) = self
                .roles
                .iter()
                .find(|(k, r)| **r == Role::Outcome && k.as_str() != name)
            {
                return Err(Error::config(format!(
                    "`{}` is already the outcome; cannot also mark `{name}`",
                    other.0
                )));
            }
        }
        if role == Role::EnvId
            && values
                .iter()
                .any(|v| *v < 0.0 || v.fract() != 0.0 || *v > u16::MAX as f64)
        {
            return Err(Error::config(format!(
                "env_id column `{name}` must hold small non-negative integers"
            )));
        }
        self.roles.insert(name.to_string(), role);
        Ok(())
    }

    pub fn with_role(mut self, name: &str, role: Role) -> Result<Self> {
        self.set_role(name, role)?;
        Ok(self)
    }

    pub fn clear_role(&mut self, name: &str) {
        self.roles.remove(name);
    }

    /// Names of columns carrying `role`, in column order.
    pub fn names_with_role(&self, role: Role) -> Vec<&str> {
        self.columns
            .keys()
            .filter(|k| self.roles.get(k.as_str()) == Some(&role))
            .map(String::as_str)
            .collect()
    }

    pub fn outcome_name(&self) -> Result<&str> {
        self.names_with_role(Role::Outcome)
            .first()
            .copied()
            .ok_or_else(|| Error::config("dataset has no outcome column"))
    }

    pub fn single_with_role(&self, role: Role) -> Result<&str> {
        match self.names_with_role(role).as_slice() {
            [one] => Ok(one),
            [] => Err(Error::config(format!("dataset has no {role:?} column"))),
            many => Err(Error::config(format!(
                "expected exactly one {role:?} column, found {}",
                many.len()
            ))),
        }
    }

    /// Row-major n × k design matrix of the named columns.
    pub fn matrix(&self, names: &[impl AsRef<str>]) -> Result<DMatrix<f64>> {
        let cols = names
            .iter()
            .map(|c| self.column(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_fn(self.n, cols.len(), |i, j| cols[j][i]))
    }

    /// New dataset with the given rows, preserving columns and roles.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        let columns = self
            .columns
            .iter()
            .map(|(k, v)| (k.clone(), rows.iter().map(|&i| v[i]).collect()))
            .collect();
        Dataset {
            n: rows.len(),
            columns,
            roles: self.roles.clone(),
        }
    }

    /// Stacks datasets with identical schemas row-wise.
    pub fn concat(parts: &[Dataset]) -> Result<Dataset> {
        let first = parts
            .first()
            .ok_or_else(|| Error::config("nothing to concatenate"))?;
        let mut out = first.clone();
        for part in &parts[1..] {
            if !part.columns.keys().eq(first.columns.keys()) {
                return Err(Error::config("datasets have different columns"));
            }
            for (name, values) in out.columns.iter_mut() {
                values.extend_from_slice(&part.columns[name]);
            }
            out.n += part.n;
        }
        Ok(out)
    }

    /// Reads a header-first, comma-separated table of finite reals.
    pub fn read_csv<R: Read>(reader: R) -> Result<Dataset> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Parse(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
            return Err(Error::config("CSV has no header"));
        }
        let mut cols: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            for (j, field) in record.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| {
                    Error::Parse(format!(
                        "row {}, column `{}`: `{field}` is not a number",
                        line + 2,
                        headers[j]
                    ))
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse(format!(
                        "row {}, column `{}`: non-finite value",
                        line + 2,
                        headers[j]
                    )));
                }
                cols[j].push(v);
            }
        }
        if cols[0].is_empty() {
            return Err(Error::config("CSV has no data rows"));
        }
        Dataset::from_columns(headers.into_iter().zip(cols))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let map_err = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(self.columns.keys()).map_err(map_err)?;
        let cols: Vec<&Vec<f64>> = self.columns.values().collect();
        for i in 0..self.n {
            w.write_record(cols.iter().map(|c| c[i].to_string()))
                .map_err(map_err)?;
        }
        w.flush().map_err(|e| Error::io("csv output", e))?;
        Ok(())
    }
}
