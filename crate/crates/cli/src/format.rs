//! JSON file formats.
//!
//! - matrix: `{"rows": r, "cols": c, "data": [[re, im], …]}`, row-major
//! - Kraus set: `{"dim": n, "operators": [matrix, …]}`
//! - ensemble: `{"members": [{"p": x, "state": [[re, im], …]}, …]}`
//! - density matrix and observable: a single matrix object

use std::fs;
use std::path::Path;

use kraus_core::gatecount::TwoLevelGate;
use kraus_core::{ComplexMatrix, ComplexVector, KrausSet, PureStateEnsemble, C64, STATE_TOL};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrausJson {
    pub dim: usize,
    pub operators: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberJson {
    pub p: f64,
    pub state: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleJson {
    pub members: Vec<MemberJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateJson {
    pub i: usize,
    pub j: usize,
    pub block: MatrixJson,
}

fn to_complex(data: &[[f64; 2]]) -> Vec<C64> {
    data.iter().map(|[re, im]| C64::new(*re, *im)).collect()
}

fn from_complex(data: &[C64]) -> Vec<[f64; 2]> {
    data.iter().map(|z| [z.re, z.im]).collect()
}

impl MatrixJson {
    pub fn to_matrix(&self) -> CliResult<ComplexMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(CliError::parse(
                "matrix",
                format!(
                    "{}x{} matrix needs {} entries, found {}",
                    self.rows,
                    self.cols,
                    self.rows * self.cols,
                    self.data.len()
                ),
            ));
        }
        ComplexMatrix::new(self.rows, self.cols, to_complex(&self.data))
            .map_err(|e| CliError::parse("matrix", e))
    }
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            data: from_complex(m.as_slice()),
        }
    }
}

impl KrausJson {
    pub fn to_kraus(&self) -> CliResult<KrausSet> {
        let ops = self
            .operators
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<CliResult<Vec<_>>>()?;
        if let Some(bad) = ops
            .iter()
            .find(|m| m.rows() != self.dim || m.cols() != self.dim)
        {
            return Err(CliError::parse(
                "kraus set",
                format!(
                    "operator is {}x{}, declared dim is {}",
                    bad.rows(),
                    bad.cols(),
                    self.dim
                ),
            ));
        }
        KrausSet::new(ops).map_err(|e| CliError::parse("kraus set", e))
    }
}

impl From<&KrausSet> for KrausJson {
    fn from(ks: &KrausSet) -> Self {
        KrausJson {
            dim: ks.dim(),
            operators: ks.operators().iter().map(MatrixJson::from).collect(),
        }
    }
}

impl EnsembleJson {
    pub fn to_ensemble(&self) -> CliResult<PureStateEnsemble> {
        let members = self
            .members
            .iter()
            .map(|m| {
                let v = ComplexVector::new(to_complex(&m.state))
                    .map_err(|e| CliError::parse("ensemble", e))?;
                Ok((m.p, v))
            })
            .collect::<CliResult<Vec<_>>>()?;
        if let Some(first) = members.first() {
            if members.iter().any(|(_, v)| v.dim() != first.1.dim()) {
                return Err(CliError::parse(
                    "ensemble",
                    "member states have different lengths",
                ));
            }
        }
        Ok(PureStateEnsemble::new(members, STATE_TOL)?)
    }
}

impl From<&PureStateEnsemble> for EnsembleJson {
    fn from(e: &PureStateEnsemble) -> Self {
        EnsembleJson {
            members: e
                .members()
                .iter()
                .map(|(p, v)| MemberJson {
                    p: *p,
                    state: from_complex(v.as_slice()),
                })
                .collect(),
        }
    }
}

impl From<&TwoLevelGate> for GateJson {
    fn from(g: &TwoLevelGate) -> Self {
        GateJson {
            i: g.i,
            j: g.j,
            block: MatrixJson::from(&g.block),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(path.display().to_string(), e))
}

pub fn load_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    read_json::<MatrixJson>(path)?.to_matrix()
}

pub fn load_kraus(path: &Path) -> CliResult<KrausSet> {
    read_json::<KrausJson>(path)?.to_kraus()
}

pub fn load_ensemble(path: &Path) -> CliResult<PureStateEnsemble> {
    read_json::<EnsembleJson>(path)?.to_ensemble()
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}
