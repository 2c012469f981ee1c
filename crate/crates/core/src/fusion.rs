//! Fusion data: sector labels, the distinguished sector ι, and the matrix of
//! right multiplication by ρ.
//!
//! Convention: `matrix[i][j]` is the multiplicity of sector `i` inside
//! `sector_j ∘ ρ`. Columns are sources, rows are targets, so a directed edge
//! `j → i` of the fusion graph exists whenever `matrix[i][j] > 0`, and
//! `(Nⁿ)[i][ι]` counts paths of length `n` from ι to `i`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// Name of an irreducible sector. Non-empty, unique within one [`FusionData`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SectorLabel(String);

impl SectorLabel {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SectorLabel {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

/// Raw fusion data as read from input. Use [`validate`] (or
/// [`FusionData::ensure_valid`]) before handing it to anything else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionData {
    pub sectors: Vec<SectorLabel>,
    pub iota: usize,
    pub matrix: Vec<Vec<i64>>,
}

/// A violated [`FusionData`] invariant, with its location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Defect {
    NoSectors,
    EmptyName { index: usize },
    DuplicateName { name: String, first: usize, second: usize },
    RowCount { rows: usize, sectors: usize },
    RowLength { row: usize, len: usize, expected: usize },
    IotaOutOfRange { iota: usize, sectors: usize },
    NegativeMultiplicity { row: usize, col: usize, value: i64 },
    Unreachable { index: usize, name: String },
    /// Column of zeros: `σ∘ρ` would have no subsectors.
    EmptyProduct { index: usize, name: String },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::NoSectors => write!(f, "no sectors"),
            Defect::EmptyName { index } => write!(f, "sector {index} has an empty name"),
            Defect::DuplicateName { name, first, second } => {
                write!(f, "duplicate sector name `{name}` at {first} and {second}")
            }
            Defect::RowCount { rows, sectors } => {
                write!(f, "matrix has {rows} rows but there are {sectors} sectors")
            }
            Defect::RowLength { row, len, expected } => {
                write!(f, "matrix row {row} has length {len}, expected {expected}")
            }
            Defect::IotaOutOfRange { iota, sectors } => {
                write!(f, "iota index {iota} out of range for {sectors} sectors")
            }
            Defect::NegativeMultiplicity { row, col, value } => {
                write!(f, "negative multiplicity {value} at ({row},{col})")
            }
            Defect::Unreachable { name, .. } => write!(f, "sector {name} unreachable from ι"),
            Defect::EmptyProduct { name, .. } => write!(f, "sector {name} has no outgoing fusion channel"),
        }
    }
}

/// Result of [`validate`]: either clean or a list of defects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Ok,
    Defects(Vec<Defect>),
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        matches!(self, Validation::Ok)
    }

    pub fn defects(&self) -> &[Defect] {
        match self {
            Validation::Ok => &[],
            Validation::Defects(d) => d,
        }
    }
}

/// Checks every [`FusionData`] invariant and reports all violations at once.
pub fn validate(data: &FusionData) -> Validation {
    let mut defects = Vec::new();
    let s = data.sectors.len();
    if s == 0 {
        defects.push(Defect::NoSectors);
    }
    let mut seen = std::collections::HashMap::new();
    for (i, label) in data.sectors.iter().enumerate() {
        if label.as_str().is_empty() {
            defects.push(Defect::EmptyName { index: i });
        } else if let Some(&first) = seen.get(label.as_str()) {
            defects.push(Defect::DuplicateName { name: label.0.clone(), first, second: i });
        } else {
            seen.insert(label.as_str(), i);
        }
    }
    let mut shape_ok = s > 0;
    if data.matrix.len() != s {
        defects.push(Defect::RowCount { rows: data.matrix.len(), sectors: s });
        shape_ok = false;
    }
    for (i, row) in data.matrix.iter().enumerate() {
        if row.len() != s {
            defects.push(Defect::RowLength { row: i, len: row.len(), expected: s });
            shape_ok = false;
        }
        for (j, &v) in row.iter().enumerate() {
            if v < 0 {
                defects.push(Defect::NegativeMultiplicity { row: i, col: j, value: v });
            }
        }
    }
    if data.iota >= s {
        defects.push(Defect::IotaOutOfRange { iota: data.iota, sectors: s });
        shape_ok = false;
    }
    if shape_ok {
        let reach = reachable_sectors(data);
        for i in (0..s).filter(|i| !reach.contains(i)) {
            defects.push(Defect::Unreachable { index: i, name: data.sectors[i].0.clone() });
        }
        for j in (0..s).filter(|&j| data.matrix.iter().all(|row| row[j] == 0)) {
            defects.push(Defect::EmptyProduct { index: j, name: data.sectors[j].0.clone() });
        }
    }
    if defects.is_empty() {
        Validation::Ok
    } else {
        Validation::Defects(defects)
    }
}

/// Sectors reachable from ι by directed steps `j → i` with `N[i][j] > 0`.
/// Breadth-first closure; always contains ι. Requires a square matrix and a
/// valid ι, otherwise only ι is returned.
pub fn reachable_sectors(data: &FusionData) -> BTreeSet<usize> {
    let s = data.matrix.len();
    let mut seen = BTreeSet::new();
    if data.iota >= s {
        return seen;
    }
    let mut queue = VecDeque::from([data.iota]);
    seen.insert(data.iota);
    while let Some(j) = queue.pop_front() {
        for i in 0..s {
            let edge = data.matrix.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0);
            if edge > 0 && seen.insert(i) {
                queue.push_back(i);
            }
        }
    }
    seen
}

impl FusionData {
    pub fn new(sectors: Vec<SectorLabel>, iota: usize, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let data = Self { sectors, iota, matrix };
        data.ensure_valid()?;
        Ok(data)
    }

    /// Convenience constructor with string labels; ι given by name.
    pub fn from_labels(names: &[&str], iota: &str, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let sectors: Vec<SectorLabel> = names.iter().map(|n| SectorLabel::new(*n)).collect();
        let iota = sectors
            .iter()
            .position(|l| l.as_str() == iota)
            .ok_or_else(|| Error::Input(format!("iota label `{iota}` is not a sector")))?;
        Self::new(sectors, iota, matrix)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match validate(self) {
            Validation::Ok => Ok(()),
            Validation::Defects(d) => Err(Error::InvalidFusion(d)),
        }
    }

    pub fn size(&self) -> usize {
        self.sectors.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn int_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.matrix)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.sectors.iter().position(|l| l.as_str() == name)
    }

    /// Strongly connected: every sector also leads back to ι. True for genuine
    /// fusion graphs (conjugates exist) but not required by [`validate`].
    pub fn is_strongly_connected(&self) -> bool {
        let s = self.size();
        let mut seen = HashSet::from([self.iota]);
        let mut queue = VecDeque::from([self.iota]);
        // reverse edges: from i back to j whenever N[i][j] > 0
        while let Some(i) = queue.pop_front() {
            for j in 0..s {
                if self.matrix[i][j] > 0 && seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        seen.len() == s && reachable_sectors(self).len() == s
    }
}

/// `QNQ`: the fusion matrix with the ι row and ι column zeroed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedFusion {
    pub matrix: Vec<Vec<i64>>,
    pub iota: usize,
}

impl ReducedFusion {
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    pub fn int_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.matrix)
    }

    /// Masks the ι row and column again. Reducing is idempotent.
    pub fn reduce(&self) -> ReducedFusion {
        mask(&self.matrix, self.iota)
    }
}

fn mask(matrix: &[Vec<i64>], iota: usize) -> ReducedFusion {
    let matrix = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| if i == iota || j == iota { 0 } else { v })
                .collect()
        })
        .collect();
    ReducedFusion { matrix, iota }
}

pub fn reduced_matrix(data: &FusionData) -> Result<ReducedFusion> {
    data.ensure_valid()?;
    Ok(mask(&data.matrix, data.iota))
}

/// Frobenius dimensions normalized so the ι entry is exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumDimensions {
    pub values: Vec<f64>,
    pub tolerance: f64,
}

impl QuantumDimensions {
    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
