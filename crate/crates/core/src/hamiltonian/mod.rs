//! Open golden chain with a braided next-nearest-neighbour term,
//!
//! ```text
//! H = −Σ_{i=1}^{L−1} Π_0^{(i,i+1)} − λ Σ_{i=1}^{L−2} ½ (B_i Π_0^{(i+1,i+2)} B_i⁻¹ + B_i⁻¹ Π_0^{(i+1,i+2)} B_i),
//! ```
//!
//! assembled directly in one total-charge sector of the fusion-tree basis,
//! plus its reflection symmetry and the diagnostics built on the spectrum.
//!
//! Operators act on path labels: `Π_0^{(i,i+1)}` changes `x_i` given
//! `x_{i−1}, x_{i+1}`, and the braid `B_i` of sites `i, i+1` does the same.

mod eigenstate;
mod sparse;
mod spectrum;

use std::collections::HashMap;

use nalgebra::{ColPivQR, DMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::category::{braid_matrix, AnyonModel, Label};
use crate::error::{Error, Result};
use crate::fusion::{enumerate_basis, FusionBasis};
use crate::tol;

pub use eigenstate::{
    asymmetry_curve, default_window, eigenstate_aee_curve, mean_eigenstate_aee, mid_spectrum_states, AeeCurvePoint,
    AsymmetryPoint, MidSpectrum,
};
pub use sparse::CsrMatrix;
pub use spectrum::{
    diagonalize, finite_size_fit, level_spacing_ratios, reference_ratio_pdfs, FiniteSizeFit, LevelStats,
    PoissonVariant, RatioPdfs, SpectrumResult, HISTOGRAM_BINS,
};

/// Reflection sector `𝒫 = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn from_sign(s: i32) -> Result<Parity> {
        match s {
            1 => Ok(Parity::Even),
            -1 => Ok(Parity::Odd),
            _ => Err(Error::domain(format!("parity must be +1 or -1, got {s}"))),
        }
    }
}

/// One golden-chain run: length, coupling, sector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenChainSpec {
    pub l: usize,
    pub lambda: f64,
    pub total: Label,
    pub parity: Option<Parity>,
}

/// A chain of identical anyons `jext` from `model`. The golden chain is
/// Fibonacci with `jext = τ`.
#[derive(Clone, Debug)]
pub struct Chain {
    pub model: AnyonModel,
    pub jext: Label,
}

impl Chain {
    pub fn new(model: AnyonModel, jext: Label) -> Result<Chain> {
        if jext.index() >= model.rank() {
            return Err(Error::domain(format!("label {} out of range", jext.0)));
        }
        if !model.admissible(jext, jext, Label::VACUUM) {
            return Err(Error::domain("neighbouring anyons must be able to fuse to the vacuum"));
        }
        if !model.has_braiding() {
            return Err(Error::Unsupported("the chain Hamiltonian needs R-symbols".into()));
        }
        Ok(Chain { model, jext })
    }

    pub fn golden() -> Chain {
        Chain { model: AnyonModel::fibonacci(), jext: Label(1) }
    }

    pub fn basis(&self, spec: &GoldenChainSpec) -> Result<FusionBasis> {
        if spec.l < 2 {
            return Err(Error::domain("the chain needs at least two sites"));
        }
        let basis = enumerate_basis(&self.model, self.jext, spec.l, spec.total)?;
        if basis.is_empty() {
            return Err(Error::EmptySector(format!(
                "no states of total charge {} on {} sites",
                self.model.name(spec.total),
                spec.l
            )));
        }
        Ok(basis)
    }
}

/// Embed an operator acting on a window of consecutive path labels.
///
/// `window` is the first changed position and `width` the number of
/// changed labels. `local(boundary_left, boundary_right)` returns the
/// local basis (tuples of `width` labels) and the matrix in it; it is
/// evaluated once per boundary pair.
fn embed<F>(basis: &FusionBasis, window: usize, width: usize, mut local: F) -> Result<CsrMatrix<Complex64>>
where
    F: FnMut(Label, Label) -> Result<(Vec<Vec<Label>>, DMatrix<Complex64>)>,
{
    let mut cache: HashMap<(Label, Label), (Vec<Vec<Label>>, DMatrix<Complex64>)> = HashMap::new();
    let mut triplets = Vec::new();
    let mut scratch = Vec::new();
    for (col, path) in basis.paths().enumerate() {
        let key = (path[window - 1], path[window + width]);
        if !cache.contains_key(&key) {
            cache.insert(key, local(key.0, key.1)?);
        }
        let (states, m) = &cache[&key];
        let here = &path[window..window + width];
        let Some(j) = states.iter().position(|s| s.as_slice() == here) else {
            continue;
        };
        for (i, s) in states.iter().enumerate() {
            let v = m[(i, j)];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            scratch.clear();
            scratch.extend_from_slice(path);
            scratch[window..window + width].copy_from_slice(s);
            if let Some(row) = basis.index_of(&scratch) {
                triplets.push((row, col, v));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(basis.dim(), triplets))
}

fn check_site(i: usize, last: usize) -> Result<()> {
    if i == 0 || i > last {
        return Err(Error::domain(format!("site index {i} outside 1..={last}")));
    }
    Ok(())
}

/// Local projector onto the vacuum channel of the two anyons meeting at
/// `x` between `a` and `d`: rows/cols over `x ∈ a⊗j` with `x⊗j ∋ d`.
fn local_projector(model: &AnyonModel, j: Label, a: Label, d: Label) -> (Vec<Label>, DMatrix<Complex64>) {
    match model.f_matrix(a, j, j, d) {
        Some(f) => {
            let states = f.rows().to_vec();
            let m = match f.col_of(Label::VACUUM) {
                Some(c0) => DMatrix::from_fn(states.len(), states.len(), |r, c| {
                    f.matrix()[(r, c0)] * f.matrix()[(c, c0)].conj()
                }),
                None => DMatrix::zeros(states.len(), states.len()),
            };
            (states, m)
        }
        None => (Vec::new(), DMatrix::zeros(0, 0)),
    }
}

/// `Π_0^{(i,i+1)}` for `1 ≤ i ≤ L−1`.
pub fn build_nn_projector(chain: &Chain, basis: &FusionBasis, i: usize) -> Result<CsrMatrix<Complex64>> {
    check_site(i, basis.sites() - 1)?;
    embed(basis, i, 1, |a, d| {
        let (states, m) = local_projector(&chain.model, chain.jext, a, d);
        Ok((states.into_iter().map(|x| vec![x]).collect(), m))
    })
}

/// Which of `B`, `B⁻¹` is conjugated first. The symmetrised term is the
/// same for both; the choice exists so that this can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraidOrder {
    Direct,
    Inverse,
}

/// `½ (B_i Π_0^{(i+1,i+2)} B_i⁻¹ + B_i⁻¹ Π_0^{(i+1,i+2)} B_i)` for `1 ≤ i ≤ L−2`.
pub fn build_nnn_term(chain: &Chain, basis: &FusionBasis, i: usize) -> Result<CsrMatrix<Complex64>> {
    build_nnn_term_ordered(chain, basis, i, BraidOrder::Direct)
}

pub fn build_nnn_term_ordered(
    chain: &Chain,
    basis: &FusionBasis,
    i: usize,
    order: BraidOrder,
) -> Result<CsrMatrix<Complex64>> {
    check_site(i, basis.sites() - 2)?;
    let (model, j) = (&chain.model, chain.jext);
    embed(basis, i, 2, |a, d| {
        // Local states (u, v): a⊗j→u, u⊗j→v, v⊗j→d.
        let mut states = Vec::new();
        for u in model.outcomes(a, j) {
            for v in model.outcomes(u, j).filter(|&v| model.admissible(v, j, d)) {
                states.push(vec![u, v]);
            }
        }
        let n = states.len();
        let mut braid = DMatrix::<Complex64>::zeros(n, n);
        let mut proj = DMatrix::<Complex64>::zeros(n, n);
        for (c, s) in states.iter().enumerate() {
            let (u, v) = (s[0], s[1]);
            let b = braid_matrix(model, a, j, j, v)?;
            let (pu, pm) = local_projector(model, j, u, d);
            for (r, t) in states.iter().enumerate() {
                let (u2, v2) = (t[0], t[1]);
                // The braid acts on u with v fixed: O[u', u] = B[u, u'].
                if v2 == v {
                    if let (Some(bi), Some(bj)) = (b.row_of(u), b.col_of(u2)) {
                        braid[(r, c)] = b.matrix()[(bi, bj)];
                    }
                }
                // The projector acts on v with u fixed.
                if u2 == u {
                    if let (Some(pi), Some(pj)) = (pu.iter().position(|&x| x == v2), pu.iter().position(|&x| x == v)) {
                        proj[(r, c)] = pm[(pi, pj)];
                    }
                }
            }
        }
        let inv = braid.clone().try_inverse().ok_or_else(|| Error::Model("singular braid operator".into()))?;
        let (first, second) = match order {
            BraidOrder::Direct => (&braid, &inv),
            BraidOrder::Inverse => (&inv, &braid),
        };
        let m = (first * &proj * second + second * &proj * first) * Complex64::new(0.5, 0.0);
        Ok((states, m))
    })
}

/// Real part of an operator that must be real.
fn real_part(m: &CsrMatrix<Complex64>, what: &str) -> Result<CsrMatrix<f64>> {
    let worst = m.triplets().map(|(_, _, v)| v.im.abs()).fold(0.0, f64::max);
    if worst > tol::ACCEPT {
        return Err(Error::Precondition(format!("{what} has imaginary entries up to {worst:e}")));
    }
    Ok(m.map(|v| v.re))
}

/// The chain Hamiltonian in one total-charge sector together with its basis.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    pub spec: GoldenChainSpec,
    pub basis: FusionBasis,
    pub matrix: CsrMatrix<f64>,
}

pub fn build_hamiltonian(chain: &Chain, spec: &GoldenChainSpec) -> Result<Hamiltonian> {
    let basis = chain.basis(spec)?;
    let mut triplets = Vec::new();
    for i in 1..spec.l {
        let p = build_nn_projector(chain, &basis, i)?;
        triplets.extend(p.triplets().map(|(r, c, v)| (r, c, -v)));
    }
    if spec.lambda != 0.0 {
        for i in 1..spec.l - 1 {
            let t = build_nnn_term(chain, &basis, i)?;
            let s = Complex64::new(-spec.lambda, 0.0);
            triplets.extend(t.triplets().map(|(r, c, v)| (r, c, s * v)));
        }
    }
    let h = CsrMatrix::from_triplets(basis.dim(), triplets);
    let matrix = real_part(&h, "the Hamiltonian")?;
    Ok(Hamiltonian { spec: *spec, basis, matrix })
}

/// Reflection `i ↦ L+1−i` of the chain in the standard basis:
///
/// ```text
/// P[x', x] = Π_{i=0}^{L−1} conj((F^{x'_i 𝔧 x_{L−1−i}}_J)_{x'_{i+1}, x_{L−i}})
/// ```
///
/// Each factor moves one more anyon from the mirrored left comb into the
/// standard one.
pub fn parity_operator(chain: &Chain, basis: &FusionBasis) -> Result<DMatrix<f64>> {
    let model = &chain.model;
    let n = model.rank();
    let (j, total, l) = (chain.jext, basis.total(), basis.sites());
    // g[((a n + c) n + e) n + f] = F^{a j c}_J (e, f)
    let mut g = vec![Complex64::new(0.0, 0.0); n * n * n * n];
    for a in model.labels() {
        for c in model.labels() {
            if let Some(fm) = model.f_matrix(a, j, c, total) {
                for &e in fm.rows() {
                    for &f in fm.cols() {
                        g[((a.index() * n + c.index()) * n + e.index()) * n + f.index()] = fm.entry(e, f).conj();
                    }
                }
            }
        }
    }
    let d = basis.dim();
    let paths: Vec<&[Label]> = basis.paths().collect();
    let mut out = DMatrix::<f64>::zeros(d, d);
    let mut worst_im = 0.0f64;
    for (r, xp) in paths.iter().enumerate() {
        for (c, x) in paths.iter().enumerate() {
            let mut v = Complex64::new(1.0, 0.0);
            for i in 0..l {
                v *= g[((xp[i].index() * n + x[l - 1 - i].index()) * n + xp[i + 1].index()) * n + x[l - i].index()];
                if v.re == 0.0 && v.im == 0.0 {
                    break;
                }
            }
            worst_im = worst_im.max(v.im.abs());
            out[(r, c)] = v.re;
        }
    }
    if worst_im > tol::ACCEPT {
        return Err(Error::Unsupported("reflection operator is not real in this gauge".into()));
    }
    Ok(out)
}

/// Orthonormal basis (as columns) of the `±1` eigenspace of a reflection.
pub fn parity_sector_basis(parity: &DMatrix<f64>, sector: Parity) -> DMatrix<f64> {
    let d = parity.nrows();
    let proj = (DMatrix::identity(d, d) + parity * sector.sign()) * 0.5;
    let rank = proj.trace().round().max(0.0) as usize;
    let q = ColPivQR::new(proj).q();
    q.columns(0, rank).into_owned()
}

/// `H` restricted to a reflection sector, `Qᵀ H Q`.
pub fn restrict(h: &CsrMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    let hq = h.mul_dense(q);
    let mut out = q.transpose() * hq;
    // Symmetrise away rounding.
    let t = out.transpose();
    out += t;
    out * 0.5
}

/// Spectrum of the block selected by `spec`: the whole total-charge sector,
/// or one reflection sector of it.
pub fn solve(chain: &Chain, spec: &GoldenChainSpec, vectors: bool) -> Result<SpectrumResult> {
    let h = build_hamiltonian(chain, spec)?;
    match spec.parity {
        None => diagonalize(h.matrix.to_dense(), None, vectors),
        Some(sector) => {
            let q = parity_sector_basis(&parity_operator(chain, &h.basis)?, sector);
            if q.ncols() == 0 {
                return Err(Error::EmptySector(format!("reflection sector {sector:?} is empty")));
            }
            diagonalize(restrict(&h.matrix, &q), Some(&q), vectors)
        }
    }
}
