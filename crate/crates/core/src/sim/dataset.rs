use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Declared support of the observations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Every value lies in `[0, 1]`.
    UnitCube,
    #[default]
    Unbounded,
}

/// An `n × d` table of real observations, stored column-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    domain: Domain,
}

impl Dataset {
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>, domain: Domain) -> Result<Dataset> {
        if names.len() != columns.len() {
            return Err(Error::Data(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        if columns.is_empty() {
            return Err(Error::Data("dataset has no columns".into()));
        }
        let n = columns[0].len();
        if n == 0 {
            return Err(Error::Data("dataset has no rows".into()));
        }
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::Data(format!("column {name} has {} rows, expected {n}", col.len())));
            }
            if let Some(bad) = col.iter().find(|v| !v.is_finite()) {
                return Err(Error::Data(format!("column {name} holds non-finite value {bad}")));
            }
            if domain == Domain::UnitCube && col.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::Data(format!("column {name} leaves the unit interval")));
            }
        }
        Ok(Dataset {
            names,
            columns,
            domain,
        })
    }

    /// Columns named `X1..Xd`.
    pub fn with_default_names(columns: Vec<Vec<f64>>, domain: Domain) -> Result<Dataset> {
        let names = default_names(columns.len());
        Dataset::new(names, columns, domain)
    }

    pub fn n_rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    pub fn mean(&self, j: usize) -> f64 {
        let c = &self.columns[j];
        c.iter().sum::<f64>() / c.len() as f64
    }

    /// Sample variance with denominator `n - 1`; zero for a single row.
    pub fn variance(&self, j: usize) -> f64 {
        let c = &self.columns[j];
        if c.len() < 2 {
            return 0.0;
        }
        let m = self.mean(j);
        c.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (c.len() - 1) as f64
    }

    /// CSV with a header row; values written with enough digits to round-trip.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.names)?;
        let mut record = Vec::with_capacity(self.n_cols());
        for i in 0..self.n_rows() {
            record.clear();
            record.extend(self.columns.iter().map(|c| format!("{:?}", c[i])));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }

    pub fn read_csv<R: Read>(input: R, domain: Domain) -> Result<Dataset> {
        let mut r = csv::Reader::from_reader(input);
        let names: Vec<String> = r.headers()?.iter().map(|s| s.trim().to_string()).collect();
        let mut columns = vec![Vec::new(); names.len()];
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            if rec.len() != names.len() {
                return Err(Error::Data(format!(
                    "row {} has {} fields, expected {}",
                    line + 1,
                    rec.len(),
                    names.len()
                )));
            }
            for (col, field) in columns.iter_mut().zip(rec.iter()) {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::Data(format!("row {}: cannot parse {field:?}", line + 1)))?;
                col.push(v);
            }
        }
        Dataset::new(names, columns, domain)
    }

    pub fn load(path: &Path, domain: Domain) -> Result<Dataset> {
        let f = std::fs::File::open(path)?;
        Dataset::read_csv(std::io::BufReader::new(f), domain)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f))
    }
}

pub fn default_names(d: usize) -> Vec<String> {
    (1..=d).map(|j| format!("X{j}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let cols = vec![vec![0.1, 1e-300, -2.5], vec![std::f64::consts::PI, 1.0 / 3.0, 7e22]];
        let ds = Dataset::with_default_names(cols, Domain::Unbounded).unwrap();
        let text = ds.to_csv_string();
        assert!(text.starts_with("X1,X2\n"));
        let back = Dataset::read_csv(text.as_bytes(), Domain::Unbounded).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(Dataset::with_default_names(vec![vec![1.0], vec![]], Domain::Unbounded).is_err());
        assert!(Dataset::with_default_names(vec![vec![1.5]], Domain::UnitCube).is_err());
        assert!(Dataset::with_default_names(vec![vec![f64::NAN]], Domain::Unbounded).is_err());
        assert!(Dataset::read_csv("a,b\n1,2\n3\n".as_bytes(), Domain::Unbounded).is_err());
        assert!(Dataset::read_csv("a\nfoo\n".as_bytes(), Domain::Unbounded).is_err());
    }

    #[test]
    fn moments() {
        let ds = Dataset::with_default_names(vec![vec![1.0, 2.0, 3.0, 4.0]], Domain::Unbounded).unwrap();
        assert_eq!(ds.mean(0), 2.5);
        assert!((ds.variance(0) - 5.0 / 3.0).abs() < 1e-15);
    }
}
