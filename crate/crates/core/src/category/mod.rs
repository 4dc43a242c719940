//! Unitary (pre)modular category data for multiplicity-free anyon models.
//!
//! An [`AnyonModel`] carries everything the rest of the crate needs: the
//! label set with duals, the fusion tensor `N_ab^c ∈ {0,1}`, quantum
//! dimensions, F-symbols `(F^{abc}_d)_{ef}` (with `e ∈ a⊗b`, `f ∈ b⊗c`),
//! R-symbols `R^{ab}_c` and, for modular models, the S-matrix.
//!
//! Models are immutable once built and can be shared freely across threads.

mod braid;
mod builders;
mod io;
mod su2k;
mod validate;

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use braid::{braid_matrix, inverse_braid_matrix};
pub use io::ModelDocument;
pub use validate::{validate, ValidationReport};

/// Index of a charge label inside its model. For SU(2)_k the index is the
/// doubled spin `2j`, so spin arithmetic stays in integers.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label(pub u8);

impl Label {
    pub const VACUUM: Label = Label(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelKind {
    Su2k { k: u32 },
    Fibonacci,
    AbelianZn { n: u32 },
    Custom { name: String },
}

impl ModelKind {
    /// Short family name used in CSV output.
    pub fn family(&self) -> &str {
        match self {
            ModelKind::Su2k { .. } => "su2k",
            ModelKind::Fibonacci => "fibonacci",
            ModelKind::AbelianZn { .. } => "zn",
            ModelKind::Custom { name } => name,
        }
    }

    /// Level / order parameter, if the family has one.
    pub fn parameter(&self) -> Option<u32> {
        match self {
            ModelKind::Su2k { k } => Some(*k),
            ModelKind::AbelianZn { n } => Some(*n),
            _ => None,
        }
    }
}

/// One F-matrix `F^{abc}_d`, rows indexed by `e ∈ a⊗b`, columns by `f ∈ b⊗c`.
#[derive(Clone, Debug, PartialEq)]
pub struct FMatrix {
    rows: Vec<Label>,
    cols: Vec<Label>,
    data: DMatrix<Complex64>,
}

impl FMatrix {
    pub(crate) fn new(rows: Vec<Label>, cols: Vec<Label>, data: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(data.nrows(), rows.len());
        debug_assert_eq!(data.ncols(), cols.len());
        FMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> &[Label] {
        &self.rows
    }

    pub fn cols(&self) -> &[Label] {
        &self.cols
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn row_of(&self, e: Label) -> Option<usize> {
        self.rows.iter().position(|&r| r == e)
    }

    pub fn col_of(&self, f: Label) -> Option<usize> {
        self.cols.iter().position(|&c| c == f)
    }

    /// `(F)_{ef}`, zero when either label is not admissible.
    pub fn entry(&self, e: Label, f: Label) -> Complex64 {
        match (self.row_of(e), self.col_of(f)) {
            (Some(i), Some(j)) => self.data[(i, j)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub(crate) fn data_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.data
    }
}

/// Full category data of a multiplicity-free anyon model.
#[derive(Clone, Debug)]
pub struct AnyonModel {
    kind: ModelKind,
    names: Vec<String>,
    dual: Vec<Label>,
    /// `fusion[(a * rank + b) * rank + c] = N_ab^c`.
    fusion: Vec<u8>,
    qdim: Vec<f64>,
    f_symbols: BTreeMap<[Label; 4], FMatrix>,
    r_symbols: BTreeMap<[Label; 3], Complex64>,
    s_matrix: Option<DMatrix<Complex64>>,
    fingerprint: u64,
}

/// Raw ingredients for [`AnyonModel::from_parts`].
#[derive(Clone, Debug)]
pub struct ModelParts {
    pub kind: ModelKind,
    pub names: Vec<String>,
    pub dual: Vec<Label>,
    pub fusion: Vec<[Label; 3]>,
    pub qdim: Vec<f64>,
    /// Entries `(a, b, c, d, e, f) -> (F^{abc}_d)_{ef}`.
    pub f_entries: Vec<([Label; 6], Complex64)>,
    pub r_entries: Vec<([Label; 3], Complex64)>,
    pub s_matrix: Option<DMatrix<Complex64>>,
}

impl AnyonModel {
    /// SU(2)_k anyons with labels `0, 1/2, …, k/2` (stored as doubled spins).
    pub fn su2k(k: u32) -> AnyonModel {
        su2k::build(k)
    }

    /// Fibonacci anyons `{0, τ}` with `τ⊗τ = 0⊕τ`.
    pub fn fibonacci() -> AnyonModel {
        builders::fibonacci()
    }

    /// Abelian Z_n anyons with trivial F-symbols and bicharacter braiding.
    pub fn abelian_zn(n: u32) -> Result<AnyonModel> {
        builders::abelian_zn(n)
    }

    /// Assemble a model from raw parts, checking structural consistency
    /// (label counts, unit object, duals, square F-matrices). Axioms such as
    /// the pentagon are left to [`validate`].
    pub fn from_parts(parts: ModelParts) -> Result<AnyonModel> {
        let rank = parts.names.len();
        if rank == 0 || rank > u8::MAX as usize {
            return Err(Error::Model(format!("unsupported label count {rank}")));
        }
        if parts.dual.len() != rank || parts.qdim.len() != rank {
            return Err(Error::Model("dual/qdim length does not match labels".into()));
        }
        let check = |l: Label| -> Result<()> {
            if l.index() < rank {
                Ok(())
            } else {
                Err(Error::Model(format!("label {} out of range", l.0)))
            }
        };
        let mut fusion = vec![0u8; rank * rank * rank];
        for [a, b, c] in &parts.fusion {
            check(*a)?;
            check(*b)?;
            check(*c)?;
            fusion[(a.index() * rank + b.index()) * rank + c.index()] = 1;
        }
        for a in 0..rank {
            check(parts.dual[a])?;
        }

        let mut model = AnyonModel {
            kind: parts.kind,
            names: parts.names,
            dual: parts.dual,
            fusion,
            qdim: parts.qdim,
            f_symbols: BTreeMap::new(),
            r_symbols: BTreeMap::new(),
            s_matrix: None,
            fingerprint: 0,
        };
        model.check_fusion_axioms()?;

        // Allocate every admissible F-matrix, then fill the supplied entries.
        model.f_symbols = model.empty_f_symbols();
        for ([a, b, c, d, e, f], v) in parts.f_entries {
            let m = model
                .f_symbols
                .get_mut(&[a, b, c, d])
                .ok_or_else(|| Error::Model(format!("F^{{{},{},{}}}_{} is not admissible", a.0, b.0, c.0, d.0)))?;
            let (i, j) = match (m.row_of(e), m.col_of(f)) {
                (Some(i), Some(j)) => (i, j),
                _ => {
                    return Err(Error::Model(format!(
                        "internal labels ({}, {}) inadmissible for F^{{{},{},{}}}_{}",
                        e.0, f.0, a.0, b.0, c.0, d.0
                    )))
                }
            };
            m.data_mut()[(i, j)] = v;
        }
        for ([a, b, c], v) in parts.r_entries {
            check(a)?;
            check(b)?;
            check(c)?;
            if !model.admissible(a, b, c) {
                return Err(Error::Model(format!("R^{{{},{}}}_{} is not admissible", a.0, b.0, c.0)));
            }
            model.r_symbols.insert([a, b, c], v);
        }
        if let Some(s) = &parts.s_matrix {
            if s.nrows() != rank || s.ncols() != rank {
                return Err(Error::Model("S-matrix has wrong shape".into()));
            }
        }
        model.s_matrix = parts.s_matrix;
        model.fingerprint = model.compute_fingerprint();
        Ok(model)
    }

    fn check_fusion_axioms(&self) -> Result<()> {
        for a in self.labels() {
            if !self.admissible(a, Label::VACUUM, a) || !self.admissible(Label::VACUUM, a, a) {
                return Err(Error::Model(format!("label {} does not fuse trivially with the vacuum", a.0)));
            }
            if !self.admissible(a, self.dual(a), Label::VACUUM) {
                return Err(Error::Model(format!("label {} does not annihilate with its dual", a.0)));
            }
            for b in self.labels() {
                for c in self.labels() {
                    if self.fusion(a, b, c) != self.fusion(b, a, c) {
                        return Err(Error::Model("fusion rules are not commutative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    fn empty_f_symbols(&self) -> BTreeMap<[Label; 4], FMatrix> {
        let mut out = BTreeMap::new();
        for a in self.labels() {
            for b in self.labels() {
                for c in self.labels() {
                    for d in self.labels() {
                        let rows: Vec<Label> =
                            self.labels().filter(|&e| self.admissible(a, b, e) && self.admissible(e, c, d)).collect();
                        if rows.is_empty() {
                            continue;
                        }
                        let cols: Vec<Label> =
                            self.labels().filter(|&f| self.admissible(b, c, f) && self.admissible(a, f, d)).collect();
                        let data = DMatrix::zeros(rows.len(), cols.len());
                        out.insert([a, b, c, d], FMatrix::new(rows, cols, data));
                    }
                }
            }
        }
        out
    }

    fn compute_fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.kind.hash(&mut h);
        self.names.hash(&mut h);
        self.fusion.hash(&mut h);
        for (key, m) in &self.f_symbols {
            key.hash(&mut h);
            for z in m.data.iter() {
                z.re.to_bits().hash(&mut h);
                z.im.to_bits().hash(&mut h);
            }
        }
        for (key, z) in &self.r_symbols {
            key.hash(&mut h);
            z.re.to_bits().hash(&mut h);
            z.im.to_bits().hash(&mut h);
        }
        h.finish()
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + Clone {
        (0..self.rank() as u8).map(Label)
    }

    pub fn vacuum(&self) -> Label {
        Label::VACUUM
    }

    pub fn name(&self, a: Label) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Look a label up by display name.
    pub fn label(&self, name: &str) -> Option<Label> {
        self.names.iter().position(|n| n == name).map(|i| Label(i as u8))
    }

    pub fn dual(&self, a: Label) -> Label {
        self.dual[a.index()]
    }

    /// `N_ab^c`.
    #[inline]
    pub fn fusion(&self, a: Label, b: Label, c: Label) -> u8 {
        let n = self.rank();
        self.fusion[(a.index() * n + b.index()) * n + c.index()]
    }

    #[inline]
    pub fn admissible(&self, a: Label, b: Label, c: Label) -> bool {
        self.fusion(a, b, c) != 0
    }

    /// Fusion channels `c` with `N_ab^c = 1`, in label order.
    pub fn outcomes(&self, a: Label, b: Label) -> impl Iterator<Item = Label> + '_ {
        self.labels().filter(move |&c| self.admissible(a, b, c))
    }

    /// A label is abelian when its fusion with every label is unique.
    pub fn is_abelian(&self, a: Label) -> bool {
        self.labels().all(|b| self.outcomes(a, b).count() == 1)
    }

    /// `(N_a)_{bc} = N_ab^c` as a real matrix.
    pub fn fusion_matrix(&self, a: Label) -> DMatrix<f64> {
        let n = self.rank();
        DMatrix::from_fn(n, n, |b, c| self.fusion(a, Label(b as u8), Label(c as u8)) as f64)
    }

    pub fn qdim(&self, a: Label) -> f64 {
        self.qdim[a.index()]
    }

    pub fn qdims(&self) -> &[f64] {
        &self.qdim
    }

    /// `𝒟 = sqrt(Σ_a d_a²)`.
    pub fn total_qdim(&self) -> f64 {
        self.qdim.iter().map(|d| d * d).sum::<f64>().sqrt()
    }

    pub fn f_matrix(&self, a: Label, b: Label, c: Label, d: Label) -> Option<&FMatrix> {
        self.f_symbols.get(&[a, b, c, d])
    }

    pub fn f_symbols(&self) -> impl Iterator<Item = (&[Label; 4], &FMatrix)> {
        self.f_symbols.iter()
    }

    /// `(F^{abc}_d)_{ef}`, zero for inadmissible label sets.
    pub fn f(&self, a: Label, b: Label, c: Label, d: Label, e: Label, f: Label) -> Complex64 {
        self.f_matrix(a, b, c, d).map(|m| m.entry(e, f)).unwrap_or_default()
    }

    pub fn has_braiding(&self) -> bool {
        !self.r_symbols.is_empty()
    }

    /// `R^{ab}_c`, zero for inadmissible label sets.
    pub fn r(&self, a: Label, b: Label, c: Label) -> Complex64 {
        self.r_symbols.get(&[a, b, c]).copied().unwrap_or_default()
    }

    pub fn r_symbols(&self) -> impl Iterator<Item = (&[Label; 3], &Complex64)> {
        self.r_symbols.iter()
    }

    pub fn s_matrix(&self) -> Option<&DMatrix<Complex64>> {
        self.s_matrix.as_ref()
    }

    pub fn is_modular(&self) -> bool {
        self.s_matrix.is_some()
    }

    pub(crate) fn require_s(&self, what: &str) -> Result<&DMatrix<Complex64>> {
        self.s_matrix.as_ref().ok_or_else(|| {
            Error::Unsupported(format!("{what} needs a modular model (no S-matrix on {})", self.kind.family()))
        })
    }

    /// Stable-within-process identity used to key caches.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// The mirror-image model: every R-symbol (and the S-matrix) conjugated.
    /// Braid-symmetrised observables must not change under this map.
    pub fn with_conjugate_braiding(&self) -> AnyonModel {
        let mut out = self.clone();
        for z in out.r_symbols.values_mut() {
            *z = z.conj();
        }
        if let Some(s) = out.s_matrix.as_mut() {
            s.iter_mut().for_each(|z| *z = z.conj());
        }
        out.fingerprint = out.compute_fingerprint();
        out
    }

    /// Copy of the model with a single F-entry replaced. Intended for
    /// exercising the validator; the result is generally not a valid model.
    pub fn with_f_entry(&self, key: [Label; 6], value: Complex64) -> Result<AnyonModel> {
        let [a, b, c, d, e, f] = key;
        let mut out = self.clone();
        let m = out.f_symbols.get_mut(&[a, b, c, d]).ok_or_else(|| Error::domain("F-matrix not admissible"))?;
        let (i, j) = m.row_of(e).zip(m.col_of(f)).ok_or_else(|| Error::domain("internal labels not admissible"))?;
        m.data_mut()[(i, j)] = value;
        out.fingerprint = out.compute_fingerprint();
        Ok(out)
    }

    /// Parse a label either by display name or, failing that, as a raw index.
    pub fn parse_label(&self, text: &str) -> Result<Label> {
        let t = text.trim();
        if let Some(l) = self.label(t) {
            return Ok(l);
        }
        // SU(2)_k also accepts decimal spins such as "0.5".
        if let ModelKind::Su2k { .. } = self.kind {
            if let Ok(x) = t.parse::<f64>() {
                let doubled = (2.0 * x).round();
                if (2.0 * x - doubled).abs() < 1e-9 && doubled >= 0.0 && (doubled as usize) < self.rank() {
                    return Ok(Label(doubled as u8));
                }
            }
        }
        if let ModelKind::Fibonacci = self.kind {
            if t == "1" {
                return Ok(Label(1));
            }
        }
        Err(Error::domain(format!("unknown label '{text}' for model {}", self.kind.family())))
    }
}

/// Largest `|F F† − 1|` entry over all F-matrices.
pub(crate) fn f_unitarity_residual(model: &AnyonModel) -> f64 {
    model.f_symbols.values().map(|m| unitarity_residual(&m.data)).fold(0.0, f64::max)
}

/// `max_ij |(M M†)_ij − δ_ij|`; infinite for non-square input.
pub fn unitarity_residual(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let prod = m * m.adjoint();
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Leading eigenvalue of the non-negative fusion matrix `N_a` (the
/// Perron–Frobenius eigenvalue). Fusion matrices are normal, so this is the
/// largest singular value, read off a symmetric eigensolve of `N_a N_aᵀ`.
pub fn perron_eigenvalue(model: &AnyonModel, a: Label) -> f64 {
    let n = model.fusion_matrix(a);
    let gram = &n * n.transpose();
    gram.symmetric_eigenvalues().iter().copied().fold(0.0, f64::max).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fusion_axioms_hold_for_builtin_models() {
        for model in [AnyonModel::su2k(4), AnyonModel::fibonacci(), AnyonModel::abelian_zn(5).unwrap()] {
            for a in model.labels() {
                assert_eq!(model.fusion(a, Label::VACUUM, a), 1);
                assert_eq!(model.fusion(a, model.dual(a), Label::VACUUM), 1);
                for b in model.labels() {
                    for c in model.labels() {
                        assert_eq!(model.fusion(a, b, c), model.fusion(b, a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn qdim_is_perron_eigenvalue() {
        for model in (0..=8).map(AnyonModel::su2k).chain([AnyonModel::fibonacci()]) {
            for a in model.labels() {
                let pf = perron_eigenvalue(&model, a);
                assert!((pf - model.qdim(a)).abs() < 1e-12, "{:?} {a}: {pf} vs {}", model.kind(), model.qdim(a));
            }
        }
    }

    #[test]
    fn qdim_product_decomposes_over_fusion() {
        let model = AnyonModel::su2k(6);
        for a in model.labels() {
            for b in model.labels() {
                let rhs: f64 = model.outcomes(a, b).map(|c| model.qdim(c)).sum();
                assert!((model.qdim(a) * model.qdim(b) - rhs).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn with_f_entry_rejects_inadmissible() {
        let fib = AnyonModel::fibonacci();
        let t = Label(1);
        let v = Label::VACUUM;
        assert!(fib.with_f_entry([t, t, t, v, v, v], Complex64::new(1.0, 0.0)).is_err());
        assert!(fib.with_f_entry([t, t, t, t, v, v], Complex64::new(1.0, 0.0)).is_ok());
    }

    #[test]
    fn parse_labels() {
        let m = AnyonModel::su2k(3);
        assert_eq!(m.parse_label("1/2").unwrap(), Label(1));
        assert_eq!(m.parse_label("0.5").unwrap(), Label(1));
        assert_eq!(m.parse_label("3/2").unwrap(), Label(3));
        assert!(m.parse_label("2").is_err());
        let f = AnyonModel::fibonacci();
        assert_eq!(f.parse_label("tau").unwrap(), Label(1));
        assert_eq!(f.parse_label("1").unwrap(), Label(1));
    }
}
