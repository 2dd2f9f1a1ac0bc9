//! Problem instances: cell dimensions plus the flow matrix, with file I/O
//! and a seeded random generator.
//!
//! The on-disk format is JSON with fields `name`, `n`, `cells` (list of
//! `{id, s, t}`) and `flows` (an `n×n` array with zero diagonal). Saving and
//! re-loading an instance reproduces it exactly.

use std::fs;
use std::io;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout::RectangleSpec;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("failed to parse {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid instance: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct InstanceFile {
    name: String,
    n: usize,
    cells: Vec<RectangleSpec>,
    flows: Vec<Vec<f64>>,
}

/// A named problem: cell specs and the `n×n` flow matrix. Serializes as the
/// instance file schema (`name`, `n`, `cells`, `flows`) and re-validates on
/// deserialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct Instance {
    pub name: String,
    pub specs: Vec<RectangleSpec>,
    pub flows: Vec<Vec<f64>>,
}

impl TryFrom<InstanceFile> for Instance {
    type Error = String;

    fn try_from(file: InstanceFile) -> Result<Self, Self::Error> {
        if file.cells.len() != file.n {
            return Err(format!(
                "cells: expected {} entries per field `n`, found {}",
                file.n,
                file.cells.len()
            ));
        }
        Instance::from_parts(&file.name, file.cells, file.flows).map_err(|e| e.to_string())
    }
}

impl From<Instance> for InstanceFile {
    fn from(inst: Instance) -> Self {
        InstanceFile {
            name: inst.name,
            n: inst.specs.len(),
            cells: inst.specs,
            flows: inst.flows,
        }
    }
}

impl Instance {
    pub fn from_parts(
        name: &str,
        specs: Vec<RectangleSpec>,
        flows: Vec<Vec<f64>>,
    ) -> Result<Self, InstanceError> {
        let inst = Instance {
            name: name.to_string(),
            specs,
            flows,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    fn validate(&self) -> Result<(), InstanceError> {
        let n = self.specs.len();
        if n == 0 {
            return Err(InstanceError::Validation("instance has no cells".into()));
        }
        for (i, c) in self.specs.iter().enumerate() {
            if c.id != i {
                return Err(InstanceError::Validation(format!(
                    "cells[{i}]: id {} out of order (expected {i})",
                    c.id
                )));
            }
            if !(c.s > 0.0 && c.s.is_finite() && c.t > 0.0 && c.t.is_finite()) {
                return Err(InstanceError::Validation(format!(
                    "cells[{i}]: dimensions must be positive and finite (s={}, t={})",
                    c.s, c.t
                )));
            }
        }
        if self.flows.len() != n {
            return Err(InstanceError::Validation(format!(
                "flows: expected {n} rows, found {}",
                self.flows.len()
            )));
        }
        for (i, row) in self.flows.iter().enumerate() {
            if row.len() != n {
                return Err(InstanceError::Validation(format!(
                    "flows[{i}]: expected {n} entries, found {}",
                    row.len()
                )));
            }
            for (j, &f) in row.iter().enumerate() {
                if !(f >= 0.0 && f.is_finite()) {
                    return Err(InstanceError::Validation(format!(
                        "flows[{i}][{j}]: must be non-negative and finite, found {f}"
                    )));
                }
                if i == j && f != 0.0 {
                    return Err(InstanceError::Validation(format!(
                        "flows[{i}][{i}]: diagonal must be zero, found {f}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Characteristic length of the instance: the sum of the larger cell
    /// dimensions (an upper bound on how far the decoder can spread a layout
    /// along one axis), floored at 1. All relative tolerances hang off this.
    pub fn scale(&self) -> f64 {
        self.specs
            .iter()
            .map(|c| c.s.max(c.t))
            .sum::<f64>()
            .max(1.0)
    }

    /// Diagonal of the square bounding region implied by [`Instance::scale`].
    pub fn bbox_diagonal(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.scale()
    }

    /// Overlap tolerance used by the decoder and the validator.
    pub fn overlap_tol(&self) -> f64 {
        1e-9 * self.scale()
    }

    /// Deterministic random instance: dimensions uniform in `dim_range`,
    /// each off-diagonal flow nonzero with probability `flow_density` and
    /// magnitude uniform in `flow_range`.
    pub fn generate(
        n: usize,
        seed: u64,
        dim_range: (f64, f64),
        flow_density: f64,
        flow_range: (f64, f64),
    ) -> Instance {
        assert!(n >= 1, "instance needs at least one cell");
        assert!(dim_range.0 > 0.0 && dim_range.1 >= dim_range.0);
        assert!(flow_range.0 >= 0.0 && flow_range.1 >= flow_range.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let specs: Vec<RectangleSpec> = (0..n)
            .map(|id| {
                let s = rng.gen_range(dim_range.0..=dim_range.1);
                let t = rng.gen_range(dim_range.0..=dim_range.1);
                RectangleSpec::new(id, s, t)
            })
            .collect();
        let mut flows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if rng.gen::<f64>() < flow_density {
                    flows[i][j] = rng.gen_range(flow_range.0..=flow_range.1);
                }
            }
        }
        Instance {
            name: format!("gen-n{n}-s{seed}"),
            specs,
            flows,
        }
    }

    pub fn load(path: &Path) -> Result<Instance, InstanceError> {
        let text = fs::read_to_string(path).map_err(|source| InstanceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| InstanceError::Parse {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), InstanceError> {
        let text = serde_json::to_string_pretty(self).expect("instance serializes");
        fs::write(path, text).map_err(|source| InstanceError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}
