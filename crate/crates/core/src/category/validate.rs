use num_complex::Complex64;
use serde::Serialize;

use super::{f_unitarity_residual, perron_eigenvalue, unitarity_residual, AnyonModel, Label};
use crate::tol;

/// Largest residual of each consistency condition. Conditions that do not
/// apply (no braiding, no S-matrix) are reported as `None`.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub pentagon: f64,
    pub hexagon: Option<f64>,
    pub hexagon_inverse: Option<f64>,
    pub f_unitarity: f64,
    pub r_unitarity: Option<f64>,
    pub qdim: f64,
    pub s_unitarity: Option<f64>,
    pub s_symmetry: Option<f64>,
    pub verlinde: Option<f64>,
    /// Verlinde values rounded to the nearest integer all reproduce `N_ab^c`.
    pub verlinde_exact: Option<bool>,
}

impl ValidationReport {
    /// All residuals below [`tol::ACCEPT`].
    pub fn is_valid(&self) -> bool {
        self.residuals().iter().all(|(_, r)| *r < tol::ACCEPT) && self.verlinde_exact != Some(false)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    /// Named residuals that apply to this model.
    pub fn residuals(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![("pentagon", self.pentagon), ("f_unitarity", self.f_unitarity), ("qdim", self.qdim)];
        let optional = [
            ("hexagon", self.hexagon),
            ("hexagon_inverse", self.hexagon_inverse),
            ("r_unitarity", self.r_unitarity),
            ("s_unitarity", self.s_unitarity),
            ("s_symmetry", self.s_symmetry),
            ("verlinde", self.verlinde),
        ];
        out.extend(optional.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))));
        out
    }
}

pub fn validate(model: &AnyonModel) -> ValidationReport {
    let braided = model.has_braiding();
    let (s_unitarity, s_symmetry, verlinde, verlinde_exact) = match model.s_matrix() {
        Some(s) => {
            let (res, exact) = verlinde_residual(model);
            let sym = (s - s.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            (Some(unitarity_residual(s)), Some(sym), Some(res), Some(exact))
        }
        None => (None, None, None, None),
    };
    ValidationReport {
        pentagon: pentagon_residual(model),
        hexagon: braided.then(|| hexagon_residual(model, false)),
        hexagon_inverse: braided.then(|| hexagon_residual(model, true)),
        f_unitarity: f_unitarity_residual(model),
        r_unitarity: braided.then(|| model.r_symbols().map(|(_, z)| (z.norm() - 1.0).abs()).fold(0.0, f64::max)),
        qdim: qdim_residual(model),
        s_unitarity,
        s_symmetry,
        verlinde,
        verlinde_exact,
    }
}

/// `F^{fcd}_e(g,l) F^{abl}_e(f,k) = Σ_h F^{abc}_g(f,h) F^{ahd}_e(g,k) F^{bcd}_k(h,l)`.
pub(crate) fn pentagon_residual(model: &AnyonModel) -> f64 {
    let mut worst = 0.0f64;
    let labels: Vec<Label> = model.labels().collect();
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                for &d in &labels {
                    for f in model.outcomes(a, b) {
                        for g in model.outcomes(f, c) {
                            for l in model.outcomes(c, d) {
                                for k in model.outcomes(b, l) {
                                    for e in model.outcomes(g, d).filter(|&e| model.admissible(a, k, e)) {
                                        let lhs = model.f(f, c, d, e, g, l) * model.f(a, b, l, e, f, k);
                                        let rhs: Complex64 = model
                                            .outcomes(b, c)
                                            .map(|h| {
                                                model.f(a, b, c, g, f, h)
                                                    * model.f(a, h, d, e, g, k)
                                                    * model.f(b, c, d, k, h, l)
                                            })
                                            .sum();
                                        worst = worst.max((lhs - rhs).norm());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

/// `R^{ca}_e F^{acb}_d(e,g) R^{cb}_g = Σ_f F^{cab}_d(e,f) R^{cf}_d F^{abc}_d(f,g)`,
/// or the same identity with every `R^{xy}_z` replaced by `(R^{yx}_z)^{-1}`.
pub(crate) fn hexagon_residual(model: &AnyonModel, inverse: bool) -> f64 {
    let r = |x: Label, y: Label, z: Label| {
        if inverse {
            model.r(y, x, z).inv()
        } else {
            model.r(x, y, z)
        }
    };
    let mut worst = 0.0f64;
    let labels: Vec<Label> = model.labels().collect();
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                for &d in &labels {
                    for e in model.outcomes(c, a).filter(|&e| model.admissible(e, b, d)) {
                        for g in model.outcomes(c, b).filter(|&g| model.admissible(a, g, d)) {
                            let lhs = r(c, a, e) * model.f(a, c, b, d, e, g) * r(c, b, g);
                            let rhs: Complex64 = model
                                .outcomes(a, b)
                                .map(|f| model.f(c, a, b, d, e, f) * r(c, f, d) * model.f(a, b, c, d, f, g))
                                .sum();
                            worst = worst.max((lhs - rhs).norm());
                        }
                    }
                }
            }
        }
    }
    worst
}

fn qdim_residual(model: &AnyonModel) -> f64 {
    let mut worst = 0.0f64;
    for a in model.labels() {
        worst = worst.max((perron_eigenvalue(model, a) - model.qdim(a)).abs());
        for b in model.labels() {
            let rhs: f64 = model.outcomes(a, b).map(|c| model.qdim(c)).sum();
            worst = worst.max((model.qdim(a) * model.qdim(b) - rhs).abs());
        }
    }
    worst
}

/// `N_ab^c = Σ_x S_ax S_bx S*_cx / S_0x`; returns the largest deviation and
/// whether rounding reproduces every coefficient.
pub(crate) fn verlinde_residual(model: &AnyonModel) -> (f64, bool) {
    let Some(s) = model.s_matrix() else {
        return (0.0, true);
    };
    let n = model.rank();
    let mut worst = 0.0f64;
    let mut exact = true;
    for a in model.labels() {
        for b in model.labels() {
            for c in model.labels() {
                let v: Complex64 =
                    (0..n).map(|x| s[(a.index(), x)] * s[(b.index(), x)] * s[(c.index(), x)].conj() / s[(0, x)]).sum();
                let target = model.fusion(a, b, c) as f64;
                worst = worst.max((v - Complex64::new(target, 0.0)).norm());
                exact &= v.re.round() == target;
            }
        }
    }
    (worst, exact)
}
