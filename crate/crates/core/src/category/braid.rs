use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{AnyonModel, FMatrix, Label};
use crate::error::{Error, Result};

/// Exchange of the last two legs of a left-associated triple,
///
/// ```text
/// (B^{abc}_d)_{ef} = Σ_g (F^{acb}_d)_{eg} R^{cb}_g ((F^{abc}_d)^{-1})_{gf}
/// ```
///
/// Rows run over `e ∈ a⊗c`, columns over `f ∈ a⊗b`.
pub fn braid_matrix(model: &AnyonModel, a: Label, b: Label, c: Label, d: Label) -> Result<FMatrix> {
    if !model.has_braiding() {
        return Err(Error::Unsupported(format!("model {} has no braiding", model.kind().family())));
    }
    let missing = || Error::domain(format!("no admissible fusion tree for ({}, {}, {}) -> {}", a.0, b.0, c.0, d.0));
    let f_acb = model.f_matrix(a, c, b, d).ok_or_else(missing)?;
    let f_abc = model.f_matrix(a, b, c, d).ok_or_else(missing)?;
    let inv = f_abc.matrix().clone().try_inverse().ok_or_else(|| Error::Model("singular F-matrix".into()))?;
    let mut rot = DMatrix::<Complex64>::zeros(f_acb.cols().len(), f_abc.cols().len());
    for (i, &g) in f_acb.cols().iter().enumerate() {
        let k = f_abc.col_of(g).ok_or_else(missing)?;
        rot[(i, k)] = model.r(c, b, g);
    }
    let data = f_acb.matrix() * rot * inv;
    Ok(FMatrix::new(f_acb.rows().to_vec(), f_abc.rows().to_vec(), data))
}

/// Inverse of [`braid_matrix`]: rows over `f ∈ a⊗b`, columns over `e ∈ a⊗c`.
pub fn inverse_braid_matrix(model: &AnyonModel, a: Label, b: Label, c: Label, d: Label) -> Result<FMatrix> {
    let fwd = braid_matrix(model, a, b, c, d)?;
    let data = fwd.matrix().clone().try_inverse().ok_or_else(|| Error::Model("singular braid matrix".into()))?;
    Ok(FMatrix::new(fwd.cols().to_vec(), fwd.rows().to_vec(), data))
}
