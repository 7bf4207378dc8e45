//! Flat binary dumps of the grid mask and eigenvectors with a JSON header.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{GridDomain, NodeStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpHeader {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    pub radius: f64,
    pub origin: [f64; 2],
    /// File holding one byte per node: 0 interior, 1 curve, 2 outer.
    pub mask_file: String,
    /// File holding `eigenvalues.len()` row-major `nx × ny` little-endian f64 arrays.
    pub vectors_file: String,
    pub eigenvalues: Vec<f64>,
}

fn status_byte(s: NodeStatus) -> u8 {
    match s {
        NodeStatus::Interior => 0,
        NodeStatus::DirichletCurve => 1,
        NodeStatus::DirichletOuter => 2,
    }
}

/// Writes `<stem>.json`, `<stem>_mask.bin` and `<stem>_vectors.bin` into `dir`.
pub fn write_dump(dir: &Path, stem: &str, grid: &GridDomain, eigenvalues: &[f64], vectors: &[Vec<f64>]) -> Result<DumpHeader> {
    fs::create_dir_all(dir)?;
    let header = DumpHeader {
        nx: grid.nx,
        ny: grid.ny,
        h: grid.h,
        radius: grid.radius,
        origin: grid.origin,
        mask_file: format!("{stem}_mask.bin"),
        vectors_file: format!("{stem}_vectors.bin"),
        eigenvalues: eigenvalues.to_vec(),
    };
    let mask: Vec<u8> = grid.mask.iter().map(|&s| status_byte(s)).collect();
    fs::write(dir.join(&header.mask_file), mask)?;

    let mut out = std::io::BufWriter::new(fs::File::create(dir.join(&header.vectors_file))?);
    for v in vectors {
        for slot in &grid.index {
            let value = slot.map_or(0.0, |k| v[k as usize]);
            out.write_all(&value.to_le_bytes())?;
        }
    }
    out.flush()?;
    fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&header)?)?;
    Ok(header)
}
