//! JSON dump/load of model data.
//!
//! Floats are written with the shortest decimal that parses back to the
//! same `f64`, so a dump → load → dump cycle is bit-exact.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AnyonModel, Label, ModelKind, ModelParts};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FRecord {
    /// `[a, b, c, d, e, f]` for `(F^{abc}_d)_{ef}`.
    pub labels: [String; 6],
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RRecord {
    /// `[a, b, c]` for `R^{ab}_c`.
    pub labels: [String; 3],
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub kind: ModelKind,
    pub labels: Vec<String>,
    pub dual: Vec<String>,
    pub qdim: Vec<f64>,
    pub fusion: Vec<[String; 3]>,
    pub f_symbols: Vec<FRecord>,
    pub r_symbols: Vec<RRecord>,
    /// Row-major `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_matrix: Option<Vec<Vec<[f64; 2]>>>,
}

impl ModelDocument {
    pub fn from_model(model: &AnyonModel) -> ModelDocument {
        let name = |l: Label| model.name(l).to_string();
        let mut fusion = Vec::new();
        for a in model.labels() {
            for b in model.labels() {
                for c in model.outcomes(a, b) {
                    fusion.push([name(a), name(b), name(c)]);
                }
            }
        }
        let mut f_symbols = Vec::new();
        for (&[a, b, c, d], m) in model.f_symbols() {
            for (i, &e) in m.rows().iter().enumerate() {
                for (j, &f) in m.cols().iter().enumerate() {
                    let z = m.matrix()[(i, j)];
                    f_symbols.push(FRecord { labels: [a, b, c, d, e, f].map(name), re: z.re, im: z.im });
                }
            }
        }
        let r_symbols = model
            .r_symbols()
            .map(|(&[a, b, c], z)| RRecord { labels: [a, b, c].map(name), re: z.re, im: z.im })
            .collect();
        let s_matrix = model
            .s_matrix()
            .map(|s| (0..s.nrows()).map(|i| (0..s.ncols()).map(|j| [s[(i, j)].re, s[(i, j)].im]).collect()).collect());
        ModelDocument {
            kind: model.kind().clone(),
            labels: model.names().to_vec(),
            dual: model.labels().map(|a| name(model.dual(a))).collect(),
            qdim: model.qdims().to_vec(),
            fusion,
            f_symbols,
            r_symbols,
            s_matrix,
        }
    }

    pub fn into_model(self) -> Result<AnyonModel> {
        let index = |s: &str| -> Result<Label> {
            self.labels
                .iter()
                .position(|n| n == s)
                .map(|i| Label(i as u8))
                .ok_or_else(|| Error::Model(format!("unknown label '{s}'")))
        };
        let tuple = |names: &[String]| -> Result<Vec<Label>> { names.iter().map(|s| index(s)).collect() };

        let fusion = self.fusion.iter().map(|t| tuple(t).map(|v| [v[0], v[1], v[2]])).collect::<Result<Vec<_>>>()?;
        let f_entries = self
            .f_symbols
            .iter()
            .map(|r| tuple(&r.labels).map(|v| ([v[0], v[1], v[2], v[3], v[4], v[5]], Complex64::new(r.re, r.im))))
            .collect::<Result<Vec<_>>>()?;
        let r_entries = self
            .r_symbols
            .iter()
            .map(|r| tuple(&r.labels).map(|v| ([v[0], v[1], v[2]], Complex64::new(r.re, r.im))))
            .collect::<Result<Vec<_>>>()?;
        let n = self.labels.len();
        let s_matrix = match &self.s_matrix {
            Some(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Model("S-matrix has wrong shape".into()));
                }
                Some(DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
            }
            None => None,
        };
        let dual = self.dual.iter().map(|s| index(s)).collect::<Result<Vec<_>>>()?;
        AnyonModel::from_parts(ModelParts {
            kind: self.kind,
            names: self.labels,
            dual,
            fusion,
            qdim: self.qdim,
            f_entries,
            r_entries,
            s_matrix,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<ModelDocument> {
        Ok(serde_json::from_str(text)?)
    }
}

impl AnyonModel {
    pub fn to_json(&self) -> Result<String> {
        ModelDocument::from_model(self).to_json()
    }

    pub fn from_json(text: &str) -> Result<AnyonModel> {
        ModelDocument::from_json(text)?.into_model()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        for m in [AnyonModel::su2k(5), AnyonModel::fibonacci(), AnyonModel::abelian_zn(3).unwrap()] {
            let text = m.to_json().unwrap();
            let back = AnyonModel::from_json(&text).unwrap();
            assert_eq!(back.fingerprint(), m.fingerprint());
            assert_eq!(back.to_json().unwrap(), text);
            assert_eq!(back.s_matrix(), m.s_matrix());
        }
    }

    #[test]
    fn unknown_label_is_rejected() {
        let mut doc = ModelDocument::from_model(&AnyonModel::fibonacci());
        doc.fusion[0][2] = "sigma".into();
        assert!(doc.into_model().is_err());
    }
}
