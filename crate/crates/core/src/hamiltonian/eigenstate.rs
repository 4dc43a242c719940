use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::{solve, Chain, GoldenChainSpec};
use crate::analytic::{asymptotic_aee, exact_average_aee, SectorDims};
use crate::error::{Error, Result};
use crate::fusion::bipartite_decomposition;

/// Default number of mid-spectrum states: `min(2000, ⌈dim/3⌉)`.
pub fn default_window(dim: usize) -> usize {
    2000.min(dim.div_ceil(3))
}

/// Eigenvectors from the centre of the spectrum, by energy rank.
#[derive(Clone, Debug)]
pub struct MidSpectrum {
    pub spec: GoldenChainSpec,
    /// Columns in the standard fusion-tree basis.
    pub vectors: DMatrix<f64>,
    pub energies: Vec<f64>,
    pub block_dim: usize,
    /// The requested window exceeded the block and was clipped.
    pub clipped: bool,
}

impl MidSpectrum {
    pub fn window(&self) -> usize {
        self.vectors.ncols()
    }
}

/// Diagonalise and keep the central `window` eigenvectors (default
/// [`default_window`]). A window larger than the block is clipped.
pub fn mid_spectrum_states(chain: &Chain, spec: &GoldenChainSpec, window: Option<usize>) -> Result<MidSpectrum> {
    let spectrum = solve(chain, spec, true)?;
    let n = spectrum.block_dim;
    let want = window.unwrap_or_else(|| default_window(n));
    if want == 0 {
        return Err(Error::domain("window must contain at least one state"));
    }
    let w = want.min(n);
    let start = (n - w) / 2;
    let all = spectrum.eigenvectors.expect("requested eigenvectors");
    Ok(MidSpectrum {
        spec: *spec,
        vectors: all.columns(start, w).into_owned(),
        energies: spectrum.eigenvalues[start..start + w].to_vec(),
        block_dim: n,
        clipped: want > n,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AeeCurvePoint {
    pub l_a: usize,
    pub f: f64,
    pub mean_aee: f64,
    pub n_states: usize,
    pub analytic_exact: f64,
    /// Undefined at `L_A = L`.
    pub analytic_asymptotic: Option<f64>,
}

/// Mean AEE of the mid-spectrum states for a cut after `L_A` sites.
pub fn mean_eigenstate_aee(chain: &Chain, states: &MidSpectrum, l_a: usize) -> Result<f64> {
    let spec = &states.spec;
    let d = bipartite_decomposition(&chain.model, chain.jext, spec.l, l_a, spec.total)?;
    let values: Vec<f64> = (0..states.window())
        .into_par_iter()
        .map(|k| {
            let v: Vec<f64> = states.vectors.column(k).iter().copied().collect();
            let blocks = d.blocks_real(&v)?;
            let qdims: Vec<f64> = d.sectors().iter().map(|s| d.qdim(s.alpha)).collect();
            crate::entropy::aee_of_blocks(&blocks, &qdims)
        })
        .collect::<Result<_>>()?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Mean eigenstate AEE per cut, alongside the Haar predictions.
pub fn eigenstate_aee_curve(chain: &Chain, states: &MidSpectrum, l_as: &[usize]) -> Result<Vec<AeeCurvePoint>> {
    let spec = &states.spec;
    l_as.iter()
        .map(|&l_a| {
            let f = l_a as f64 / spec.l as f64;
            let dims = SectorDims::new(&chain.model, chain.jext, spec.l, l_a, spec.total)?;
            let asym = if l_a < spec.l {
                Some(asymptotic_aee(&chain.model, chain.jext, spec.total, spec.l, f)?)
            } else {
                None
            };
            Ok(AeeCurvePoint {
                l_a,
                f,
                mean_aee: mean_eigenstate_aee(chain, states, l_a)?,
                n_states: states.window(),
                analytic_exact: exact_average_aee(&dims)?,
                analytic_asymptotic: asym,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymmetryPoint {
    pub l_a: usize,
    pub f: f64,
    pub delta: f64,
}

/// `Δ(f) = |⟨S̃_A⟩(f) − ⟨S̃_A⟩(1−f)|` over the mid-spectrum states, for
/// `1 ≤ L_A ≤ L−1`.
pub fn asymmetry_curve(chain: &Chain, states: &MidSpectrum, l_as: &[usize]) -> Result<Vec<AsymmetryPoint>> {
    let l = states.spec.l;
    l_as.iter()
        .map(|&l_a| {
            if l_a == 0 || l_a >= l {
                return Err(Error::domain(format!("asymmetry needs 1 ≤ L_A ≤ L−1, got {l_a}")));
            }
            let delta = if 2 * l_a == l {
                0.0
            } else {
                (mean_eigenstate_aee(chain, states, l_a)? - mean_eigenstate_aee(chain, states, l - l_a)?).abs()
            };
            Ok(AsymmetryPoint { l_a, f: l_a as f64 / l as f64, delta })
        })
        .collect()
}
