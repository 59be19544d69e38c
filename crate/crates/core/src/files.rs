//! Canonical JSON file formats for pure states and density matrices.
//!
//! Pure: `{"dims":[n1,n2,n3],"amplitudes":[[re,im],...]}` in composite-index
//! order (third party fastest). Density: `{"dims":[n1,n2,n3],
//! "matrix":[[[re,im],...],...]}` row-major. Parsers reject NaN/Inf.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, PureState};
use crate::C64;

#[derive(Serialize, Deserialize)]
struct PureStateFile {
    dims: [usize; 3],
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixFile {
    dims: [usize; 3],
    matrix: Vec<Vec<[f64; 2]>>,
}

pub fn pure_state_to_json(s: &PureState) -> String {
    let file = PureStateFile {
        dims: [s.dims().0, s.dims().1, s.dims().2],
        amplitudes: s.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string(&file).expect("pure-state serialization cannot fail")
}

pub fn pure_state_from_json(text: &str) -> Result<PureState> {
    let file: PureStateFile = serde_json::from_str(text)?;
    let amplitudes: Vec<C64> = file
        .amplitudes
        .iter()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    // PureState::new rejects NaN/Inf and dimension mismatches
    PureState::new((file.dims[0], file.dims[1], file.dims[2]), amplitudes)
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    let d = rho.total_dim();
    let m = rho.matrix();
    let rows = (0..d)
        .map(|i| (0..d).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    let file = DensityMatrixFile {
        dims: [rho.dims().0, rho.dims().1, rho.dims().2],
        matrix: rows,
    };
    serde_json::to_string(&file).expect("density serialization cannot fail")
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    let file: DensityMatrixFile = serde_json::from_str(text)?;
    let d = file.dims[0] * file.dims[1] * file.dims[2];
    if file.matrix.len() != d || file.matrix.iter().any(|row| row.len() != d) {
        return Err(Error::MatrixShape {
            rows: file.matrix.len(),
            cols: file.matrix.first().map_or(0, |r| r.len()),
            context: "density file",
        });
    }
    let m = DMatrix::from_fn(d, d, |i, j| {
        let [re, im] = file.matrix[i][j];
        C64::new(re, im)
    });
    DensityMatrix::new((file.dims[0], file.dims[1], file.dims[2]), m)
}

pub fn write_pure_state(path: &Path, s: &PureState) -> Result<()> {
    Ok(fs::write(path, pure_state_to_json(s))?)
}

pub fn read_pure_state(path: &Path) -> Result<PureState> {
    pure_state_from_json(&fs::read_to_string(path)?)
}

pub fn write_density(path: &Path, rho: &DensityMatrix) -> Result<()> {
    Ok(fs::write(path, density_to_json(rho))?)
}

pub fn read_density(path: &Path) -> Result<DensityMatrix> {
    density_from_json(&fs::read_to_string(path)?)
}
