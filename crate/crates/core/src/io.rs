//! Matrix/state file format and the JSON writer used for every report.
//!
//! A single format carries both gates and states:
//!
//! ```json
//! {"m": 2, "n": 2, "data": [[1.0, 0.0], [0.0, 0.0], ...]}
//! ```
//!
//! `data` is row-major `[re, im]` pairs: `(mn)²` of them for a gate, `mn` for
//! a state. Floats are written with 17 significant digits so every `f64`
//! survives a write/read cycle bit for bit.

use std::fs;
use std::io;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{ComplexMatrix, ComplexVector, LinalgError, C64};
use crate::overlap::{OverlapError, UnitaryGate};
use crate::states::{BipartiteDims, PureState, StateError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("data has {found} entries; expected {gate} for a gate or {state} for a state")]
    Length { found: usize, gate: usize, state: usize },
    #[error("file holds a {found}, expected a {expected}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("matrix is not unitary: max |U†U - I| = {defect:e} (tolerance 1e-10)")]
    NotUnitary { defect: f64 },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Overlap(OverlapError),
}

impl From<OverlapError> for FormatError {
    fn from(e: OverlapError) -> Self {
        match e {
            OverlapError::NotUnitary { defect } => FormatError::NotUnitary { defect },
            other => FormatError::Overlap(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Gate,
    State,
}

impl FileKind {
    fn name(self) -> &'static str {
        match self {
            FileKind::Gate => "gate",
            FileKind::State => "state",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitaryFile {
    pub m: usize,
    pub n: usize,
    pub data: Vec<[f64; 2]>,
}

impl UnitaryFile {
    pub fn dims(&self) -> Result<BipartiteDims, FormatError> {
        Ok(BipartiteDims::new(self.m, self.n)?)
    }

    /// Gate when `data` has `(mn)²` entries, state when it has `mn`.
    /// For `m = n = 1` both readings coincide and the file is a gate.
    pub fn kind(&self) -> Result<FileKind, FormatError> {
        let k = self.m * self.n;
        match self.data.len() {
            len if len == k * k => Ok(FileKind::Gate),
            len if len == k => Ok(FileKind::State),
            found => Err(FormatError::Length {
                found,
                gate: k * k,
                state: k,
            }),
        }
    }

    fn entries(&self) -> Vec<C64> {
        self.data.iter().map(|&[re, im]| C64::new(re, im)).collect()
    }

    pub fn from_gate(gate: &UnitaryGate) -> Self {
        let dims = gate.dims();
        Self {
            m: dims.m(),
            n: dims.n(),
            data: gate.matrix().as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_state(state: &PureState) -> Self {
        let dims = state.dims();
        Self {
            m: dims.m(),
            n: dims.n(),
            data: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_gate(&self) -> Result<UnitaryGate, FormatError> {
        let dims = self.dims()?;
        match self.kind()? {
            FileKind::Gate => {}
            other => {
                return Err(FormatError::WrongKind {
                    expected: "gate",
                    found: other.name(),
                })
            }
        }
        let k = dims.composite();
        let matrix = ComplexMatrix::new(k, k, self.entries())?;
        Ok(UnitaryGate::new(matrix, dims)?)
    }

    pub fn to_state(&self) -> Result<PureState, FormatError> {
        let dims = self.dims()?;
        let k = dims.composite();
        if self.data.len() != k {
            return Err(FormatError::WrongKind {
                expected: "state",
                found: self.kind()?.name(),
            });
        }
        Ok(PureState::new(ComplexVector::new(self.entries())?, dims)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FormatError> {
        read_json(path)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), FormatError> {
        write_json(path, self)
    }
}

impl From<UnitaryGate> for UnitaryFile {
    fn from(gate: UnitaryGate) -> Self {
        Self::from_gate(&gate)
    }
}

impl TryFrom<UnitaryFile> for UnitaryGate {
    type Error = FormatError;

    fn try_from(file: UnitaryFile) -> Result<Self, Self::Error> {
        file.to_gate()
    }
}

/// Compact JSON with every float printed as `d.dddddddddddddddde±x`.
struct PreciseFormatter;

impl serde_json::ser::Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, FormatError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<(), FormatError> {
    let path = path.as_ref();
    fs::write(path, to_json_string(value)?).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T, FormatError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_json_str(&text)
}
