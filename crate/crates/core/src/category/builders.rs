use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{AnyonModel, Label, ModelKind, ModelParts};
use crate::error::{Error, Result};

/// Every admissible F-entry set to one: the gauge used for the
/// pointed/abelian part of the builtin models.
fn unit_f_entries(model: &AnyonModel) -> Vec<([Label; 6], Complex64)> {
    let mut out = Vec::new();
    for (&[a, b, c, d], m) in model.f_symbols() {
        for &e in m.rows() {
            for &f in m.cols() {
                out.push(([a, b, c, d, e, f], Complex64::new(1.0, 0.0)));
            }
        }
    }
    out
}

pub(crate) fn fibonacci() -> AnyonModel {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let (v, t) = (Label(0), Label(1));
    let fusion = vec![[v, v, v], [v, t, t], [t, v, t], [t, t, v], [t, t, t]];
    let mut parts = ModelParts {
        kind: ModelKind::Fibonacci,
        names: vec!["0".into(), "tau".into()],
        dual: vec![v, t],
        fusion,
        qdim: vec![1.0, phi],
        f_entries: Vec::new(),
        r_entries: Vec::new(),
        s_matrix: None,
    };
    let skeleton = AnyonModel::from_parts(parts.clone()).expect("Fibonacci fusion rules");
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut f_entries = unit_f_entries(&skeleton);
    for (key, val) in f_entries.iter_mut() {
        if key[..4] == [t, t, t, t] {
            *val = match (key[4], key[5]) {
                (Label(0), Label(0)) => c(1.0 / phi),
                (Label(1), Label(1)) => c(-1.0 / phi),
                _ => c(1.0 / phi.sqrt()),
            };
        }
    }
    parts.f_entries = f_entries;
    parts.r_entries = vec![
        ([v, v, v], c(1.0)),
        ([v, t, t], c(1.0)),
        ([t, v, t], c(1.0)),
        ([t, t, v], Complex64::from_polar(1.0, -4.0 * PI / 5.0)),
        ([t, t, t], Complex64::from_polar(1.0, 3.0 * PI / 5.0)),
    ];
    let dtot = (2.0 + phi).sqrt();
    parts.s_matrix = Some(DMatrix::from_row_slice(2, 2, &[c(1.0), c(phi), c(phi), c(-1.0)]) / c(dtot));
    AnyonModel::from_parts(parts).expect("Fibonacci data")
}

pub(crate) fn abelian_zn(n: u32) -> Result<AnyonModel> {
    if !(2..=u8::MAX as u32).contains(&n) {
        return Err(Error::domain(format!("Z_n needs 2 <= n <= 255, got {n}")));
    }
    let l = |x: u32| Label(x as u8);
    let mut fusion = Vec::new();
    let mut r_entries = Vec::new();
    for a in 0..n {
        for b in 0..n {
            fusion.push([l(a), l(b), l((a + b) % n)]);
            let phase = 2.0 * PI * ((a * b) % n) as f64 / n as f64;
            r_entries.push(([l(a), l(b), l((a + b) % n)], Complex64::from_polar(1.0, phase)));
        }
    }
    let mut parts = ModelParts {
        kind: ModelKind::AbelianZn { n },
        names: (0..n).map(|a| a.to_string()).collect(),
        dual: (0..n).map(|a| l((n - a) % n)).collect(),
        fusion,
        qdim: vec![1.0; n as usize],
        f_entries: Vec::new(),
        r_entries,
        s_matrix: None,
    };
    let skeleton = AnyonModel::from_parts(parts.clone())?;
    parts.f_entries = unit_f_entries(&skeleton);
    let norm = (n as f64).sqrt();
    parts.s_matrix = Some(DMatrix::from_fn(n as usize, n as usize, |a, b| {
        Complex64::from_polar(1.0 / norm, -2.0 * PI * ((a * b) % n as usize) as f64 / n as f64)
    }));
    AnyonModel::from_parts(parts)
}
