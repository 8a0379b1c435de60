//! JSON state files: pure states as coefficient arrays, mixed states as
//! entry matrices, with separate real and imaginary parts (imaginary
//! optional, defaulting to zero).

use num_complex::Complex64;
use pairent::pairstate::{PairDensityMatrix, PurePairState};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateFile {
    Pure {
        dim: usize,
        coeffs_re: Vec<f64>,
        #[serde(default)]
        coeffs_im: Option<Vec<f64>>,
    },
    Mixed {
        dim: usize,
        entries_re: Vec<Vec<f64>>,
        #[serde(default)]
        entries_im: Option<Vec<Vec<f64>>>,
    },
}

pub enum LoadedState {
    Pure(PurePairState),
    Mixed(PairDensityMatrix),
}

impl StateFile {
    /// Validate through the state constructors.
    pub fn into_state(self) -> pairent::Result<LoadedState> {
        match self {
            StateFile::Pure {
                dim,
                coeffs_re,
                coeffs_im,
            } => {
                let im = coeffs_im.unwrap_or_else(|| vec![0.0; coeffs_re.len()]);
                if im.len() != coeffs_re.len() {
                    return Err(pairent::Error::DimensionMismatch {
                        expected: coeffs_re.len(),
                        got: im.len(),
                    });
                }
                let coeffs: Vec<Complex64> = coeffs_re
                    .iter()
                    .zip(&im)
                    .map(|(&re, &im)| Complex64::new(re, im))
                    .collect();
                Ok(LoadedState::Pure(PurePairState::new(dim, &coeffs)?))
            }
            StateFile::Mixed {
                dim,
                entries_re,
                entries_im,
            } => {
                let zeros = vec![vec![0.0; dim]; dim];
                let im = entries_im.unwrap_or(zeros);
                if entries_re.len() != dim || im.len() != dim {
                    return Err(pairent::Error::DimensionMismatch {
                        expected: dim,
                        got: entries_re.len(),
                    });
                }
                let mut entries = Vec::with_capacity(dim * dim);
                for (row_re, row_im) in entries_re.iter().zip(&im) {
                    if row_re.len() != dim || row_im.len() != dim {
                        return Err(pairent::Error::DimensionMismatch {
                            expected: dim,
                            got: row_re.len(),
                        });
                    }
                    for (&re, &imv) in row_re.iter().zip(row_im) {
                        entries.push(Complex64::new(re, imv));
                    }
                }
                Ok(LoadedState::Mixed(PairDensityMatrix::new(dim, &entries)?))
            }
        }
    }
}
