//! JSON transform documents.
//!
//! ```json
//! { "times": [0, 1], "transforms": [ {"matrix": [12 values]}, {"param": [12 values]} ] }
//! ```
//!
//! `matrix` is the 3×4 block row-major; `param` is `[l1 l2 l3 x4 x5 x6 y7 .. y12]`.
//! `times` is optional and only read by `interp`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use affparam::{phi, AffineParam12, Error as CoreError, HomAffine3};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Entry {
    Matrix(Vec<f64>),
    Param(Vec<f64>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    pub transforms: Vec<Entry>,
}

/// A loaded entry, remembering the form it was written in.
#[derive(Debug, Clone, Copy)]
pub enum Loaded {
    Matrix(HomAffine3),
    Param(AffineParam12),
}

impl Loaded {
    pub fn transform(&self) -> HomAffine3 {
        match self {
            Loaded::Matrix(a) => *a,
            // `load` already evaluated φ on this vector.
            Loaded::Param(p) => phi(p).expect("validated by load"),
        }
    }
}

fn twelve(values: &[f64], index: usize, field: &str) -> Result<[f64; 12], Failure> {
    let arr: [f64; 12] = values.try_into().map_err(|_| {
        Failure::Input(format!(
            "transform {index}: `{field}` needs 12 values, got {}",
            values.len()
        ))
    })?;
    if let Some(k) = arr.iter().position(|v| !v.is_finite()) {
        return Err(Failure::Input(format!(
            "transform {index}: `{field}` value {k} is not finite"
        )));
    }
    Ok(arr)
}

impl TransformFile {
    pub fn read(path: &Path) -> Result<Self, Failure> {
        let text = if path == Path::new("-") {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            s
        } else {
            fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        };
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    /// Validates every entry. Matrices must have a positive determinant.
    pub fn load(&self) -> Result<Vec<Loaded>, Failure> {
        self.transforms
            .iter()
            .enumerate()
            .map(|(i, e)| match e {
                Entry::Matrix(v) => {
                    let a = HomAffine3::from_rows_3x4(twelve(v, i, "matrix")?);
                    let det = a.det();
                    if det > 0.0 {
                        Ok(Loaded::Matrix(a))
                    } else {
                        Err(CoreError::NotOrientationPreserving { det }.at(i).into())
                    }
                }
                Entry::Param(v) => {
                    let p = AffineParam12::from_array(twelve(v, i, "param")?);
                    phi(&p).map_err(|e| e.at(i))?;
                    Ok(Loaded::Param(p))
                }
            })
            .collect()
    }

    pub fn transforms(&self) -> Result<Vec<HomAffine3>, Failure> {
        Ok(self.load()?.iter().map(Loaded::transform).collect())
    }

    pub fn of_matrices(ts: impl IntoIterator<Item = HomAffine3>) -> Self {
        Self {
            times: None,
            transforms: ts
                .into_iter()
                .map(|a| Entry::Matrix(a.to_rows_3x4().to_vec()))
                .collect(),
        }
    }

    pub fn of_params(ps: impl IntoIterator<Item = AffineParam12>) -> Self {
        Self {
            times: None,
            transforms: ps.into_iter().map(|p| Entry::Param(p.to_array().to_vec())).collect(),
        }
    }

    /// JSON with one transform per line. `serde_json` prints the shortest
    /// decimal that reads back to the same `f64`, so files round-trip bit
    /// for bit.
    pub fn write(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{{")?;
        if let Some(times) = &self.times {
            writeln!(out, "  \"times\": {},", serde_json::to_string(times)?)?;
        }
        writeln!(out, "  \"transforms\": [")?;
        for (i, e) in self.transforms.iter().enumerate() {
            let sep = if i + 1 < self.transforms.len() { "," } else { "" };
            writeln!(out, "    {}{sep}", serde_json::to_string(e)?)?;
        }
        writeln!(out, "  ]")?;
        writeln!(out, "}}")
    }
}
