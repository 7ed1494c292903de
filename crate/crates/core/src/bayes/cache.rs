use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use super::dpm;
use super::evidence::{EvidenceBackend, EvidenceKey};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::sim::Dataset;

/// Memoized local evidence for one backend and one dataset.
///
/// The first value computed for a key is the one every later query sees.
#[derive(Debug)]
pub struct EvidenceCache {
    backend: EvidenceBackend,
    values: RwLock<HashMap<EvidenceKey, f64>>,
    /// Joint-set estimates shared between DPM evidence terms.
    joints: RwLock<HashMap<VertexSet, f64>>,
}

/// One persisted cache line; vertices are 1-based.
#[derive(Debug, Serialize, Deserialize)]
struct Record {
    node: usize,
    parents: Vec<usize>,
    backend: String,
    value: f64,
}

impl EvidenceCache {
    pub fn new(backend: EvidenceBackend) -> EvidenceCache {
        EvidenceCache {
            backend,
            values: RwLock::new(HashMap::new()),
            joints: RwLock::new(HashMap::new()),
        }
    }

    pub fn backend(&self) -> &EvidenceBackend {
        &self.backend
    }

    pub fn len(&self) -> usize {
        self.values.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: EvidenceKey) -> Option<f64> {
        self.values.read().expect("cache lock").get(&key).copied()
    }

    pub fn log_evidence(&self, data: &Dataset, key: EvidenceKey) -> Result<f64> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let value = match &self.backend {
            EvidenceBackend::Dpm(cfg) => {
                self.joint(data, key.parents.with(key.node), cfg)? - self.joint(data, key.parents, cfg)?
            }
            other => other.log_evidence(data, key)?,
        };
        Ok(*self.values.write().expect("cache lock").entry(key).or_insert(value))
    }

    fn joint(&self, data: &Dataset, set: VertexSet, cfg: &dpm::DpmConfig) -> Result<f64> {
        if let Some(v) = self.joints.read().expect("cache lock").get(&set) {
            return Ok(*v);
        }
        let v = dpm::log_joint(data, set, cfg)?;
        Ok(*self.joints.write().expect("cache lock").entry(set).or_insert(v))
    }

    /// Write all cached values as JSON lines, sorted by key.
    pub fn save<W: Write>(&self, mut out: W) -> Result<()> {
        let values = self.values.read().expect("cache lock");
        let mut keys: Vec<_> = values.keys().copied().collect();
        keys.sort();
        for key in keys {
            let rec = Record {
                node: key.node + 1,
                parents: key.parents.iter().map(|v| v + 1).collect(),
                backend: self.backend.name().to_string(),
                value: values[&key],
            };
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Load records written by [`EvidenceCache::save`]; existing entries win.
    /// Returns the number of records taken.
    pub fn load<R: BufRead>(&self, input: R) -> Result<usize> {
        let mut taken = 0;
        let mut values = self.values.write().expect("cache lock");
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line)?;
            if rec.backend != self.backend.name() {
                return Err(Error::Config(format!(
                    "cache line {} is for backend {}, expected {}",
                    i + 1,
                    rec.backend,
                    self.backend.name()
                )));
            }
            if rec.node == 0 || rec.parents.contains(&0) {
                return Err(Error::Config(format!("cache line {}: vertices are 1-based", i + 1)));
            }
            let parents: VertexSet = rec.parents.iter().map(|v| v - 1).collect();
            let key = EvidenceKey::new(rec.node - 1, parents)?;
            if let std::collections::hash_map::Entry::Vacant(e) = values.entry(key) {
                e.insert(rec.value);
                taken += 1;
            }
        }
        Ok(taken)
    }
}
