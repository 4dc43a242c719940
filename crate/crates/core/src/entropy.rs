//! States in a fixed total-charge sector and their anyonic entanglement.
//!
//! For a pure state with sector blocks `ψ_α` (rows over `A` paths, columns
//! over `B` states) the partial quantum trace gives weights
//! `p_α = ‖ψ_α‖²` and unit-trace blocks `R_α = ψ_α ψ_α† / p_α`, and
//!
//! ```text
//! S̃_A = H({p_α}) + Σ_α p_α (H(spec R_α) + log d_α).
//! ```

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::category::Label;
use crate::error::{Error, Result};
use crate::fusion::BipartiteDecomposition;
use crate::tol;

/// A pure state in one total-charge sector, held as bipartite blocks.
#[derive(Clone, Debug)]
pub struct SectorState {
    decomposition: Arc<BipartiteDecomposition>,
    blocks: Vec<DMatrix<Complex64>>,
}

impl SectorState {
    /// From amplitudes in the standard fusion-tree basis.
    pub fn from_standard(decomposition: Arc<BipartiteDecomposition>, psi: &[Complex64]) -> Result<SectorState> {
        let blocks = decomposition.blocks(psi)?;
        Ok(SectorState { decomposition, blocks })
    }

    /// From amplitudes already in the bipartite basis, one `m_α × n_α`
    /// block per sector.
    pub fn from_blocks(
        decomposition: Arc<BipartiteDecomposition>,
        blocks: Vec<DMatrix<Complex64>>,
    ) -> Result<SectorState> {
        let ok = blocks.len() == decomposition.sectors().len()
            && blocks.iter().zip(decomposition.sectors()).all(|(b, s)| b.nrows() == s.m && b.ncols() == s.n);
        if !ok {
            return Err(Error::domain("block shapes do not match the decomposition"));
        }
        Ok(SectorState { decomposition, blocks })
    }

    pub fn decomposition(&self) -> &BipartiteDecomposition {
        &self.decomposition
    }

    pub fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum()
    }

    pub fn to_standard(&self) -> Vec<Complex64> {
        self.decomposition.to_standard(&self.blocks).expect("blocks match their decomposition")
    }

    fn check_norm(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > tol::NORM {
            return Err(Error::Precondition(format!("state is not normalised (‖ψ‖² = {n})")));
        }
        Ok(())
    }
}

/// One non-empty charge sector of a reduced state.
#[derive(Clone, Debug)]
pub struct ReducedSector {
    pub charge: Label,
    pub weight: f64,
    /// Unit-trace Hermitian PSD block.
    pub rho: DMatrix<Complex64>,
    pub qdim: f64,
}

#[derive(Clone, Debug, Default)]
pub struct ReducedBlocks {
    pub sectors: Vec<ReducedSector>,
}

impl ReducedBlocks {
    pub fn total_weight(&self) -> f64 {
        self.sectors.iter().map(|s| s.weight).sum()
    }
}

/// Partial quantum trace over `B`.
pub fn reduce(state: &SectorState) -> Result<ReducedBlocks> {
    state.check_norm()?;
    let mut sectors = Vec::new();
    for (block, sec) in state.blocks.iter().zip(state.decomposition.sectors()) {
        let p = block.norm_squared();
        if p <= tol::ZERO_WEIGHT {
            continue;
        }
        sectors.push(ReducedSector {
            charge: sec.alpha,
            weight: p,
            rho: block * block.adjoint() / Complex64::new(p, 0.0),
            qdim: state.decomposition.qdim(sec.alpha),
        });
    }
    Ok(ReducedBlocks { sectors })
}

/// Rows `(α, x⃗)` and columns `y⃗` of the amplitude matrix with `B` charge `β`.
fn b_side_matrices(state: &SectorState) -> Vec<(Label, DMatrix<Complex64>)> {
    let d = &state.decomposition;
    let l_b = d.l_b();
    let mut by_beta: Vec<(Label, Vec<Vec<Complex64>>)> = Vec::new();
    for (block, sec) in state.blocks.iter().zip(d.sectors()) {
        let mut start = 0;
        while start < sec.n {
            let beta = sec.beta(start, l_b);
            let mut end = start;
            while end < sec.n && sec.beta(end, l_b) == beta {
                end += 1;
            }
            let slot = match by_beta.iter().position(|(b, _)| *b == beta) {
                Some(i) => i,
                None => {
                    by_beta.push((beta, Vec::new()));
                    by_beta.len() - 1
                }
            };
            for x in 0..sec.m {
                by_beta[slot].1.push((start..end).map(|y| block[(x, y)]).collect());
            }
            start = end;
        }
    }
    by_beta.sort_by_key(|(b, _)| *b);
    by_beta
        .into_iter()
        .map(|(beta, rows)| {
            let cols = rows.first().map_or(0, |r| r.len());
            (beta, DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
        })
        .collect()
}

/// Partial quantum trace over `A`; sectors are labelled by the `B` charge `β`.
pub fn reduce_b(state: &SectorState) -> Result<ReducedBlocks> {
    state.check_norm()?;
    let mut sectors = Vec::new();
    for (beta, m) in b_side_matrices(state) {
        let p = m.norm_squared();
        if p <= tol::ZERO_WEIGHT {
            continue;
        }
        sectors.push(ReducedSector {
            charge: beta,
            weight: p,
            rho: m.transpose() * m.map(|z| z.conj()) / Complex64::new(p, 0.0),
            qdim: state.decomposition.qdim(beta),
        });
    }
    Ok(ReducedBlocks { sectors })
}

fn shannon(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().filter(|&v| v > 0.0).map(|v| -v * v.ln()).sum()
}

/// Eigenvalues of a Hermitian PSD matrix with tiny negatives clipped.
fn psd_spectrum(m: DMatrix<Complex64>) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::new(m);
    eig.eigenvalues
        .iter()
        .map(|&v| {
            if v < -tol::EIGEN_CLIP {
                Err(Error::Precondition(format!("reduced block has negative eigenvalue {v}")))
            } else {
                Ok(v.max(0.0))
            }
        })
        .collect()
}

/// Combine per-sector weights, spectra and quantum dimensions.
fn combine(parts: &[(f64, Vec<f64>, f64)], topological: bool) -> f64 {
    let mut s = shannon(parts.iter().map(|(p, _, _)| *p));
    for (p, spec, d) in parts {
        s += p * shannon(spec.iter().copied());
        if topological {
            s += p * d.ln();
        }
    }
    s
}

fn spectra(blocks: &ReducedBlocks) -> Result<Vec<(f64, Vec<f64>, f64)>> {
    blocks.sectors.iter().map(|s| Ok((s.weight, psd_spectrum(s.rho.clone())?, s.qdim))).collect()
}

/// Anyonic entanglement entropy in nats.
pub fn aee(blocks: &ReducedBlocks) -> Result<f64> {
    Ok(combine(&spectra(blocks)?, true))
}

/// Von Neumann entropy: the AEE without the `Σ p_α log d_α` term.
pub fn vn_entropy(blocks: &ReducedBlocks) -> Result<f64> {
    Ok(combine(&spectra(blocks)?, false))
}

/// AEE of subsystem `A` straight from sector blocks, diagonalising the
/// smaller of `ψψ†` and `ψ†ψ` in each sector. `blocks` need not be
/// normalised; they are scaled to unit norm first.
pub fn aee_of_blocks(blocks: &[DMatrix<Complex64>], qdims: &[f64]) -> Result<f64> {
    let norm: f64 = blocks.iter().map(|b| b.norm_squared()).sum();
    if norm <= 0.0 {
        return Err(Error::Precondition("zero state".into()));
    }
    let mut parts = Vec::with_capacity(blocks.len());
    for (b, &d) in blocks.iter().zip(qdims) {
        let p = b.norm_squared() / norm;
        if p <= tol::ZERO_WEIGHT {
            continue;
        }
        let scale = Complex64::new(1.0 / (p * norm), 0.0);
        let gram = if b.nrows() <= b.ncols() { b * b.adjoint() } else { b.adjoint() * b };
        parts.push((p, psd_spectrum(gram * scale)?, d));
    }
    Ok(combine(&parts, true))
}

/// AEE of subsystem `A` for a state given in the standard basis.
pub fn state_aee(decomposition: &BipartiteDecomposition, psi: &[Complex64]) -> Result<f64> {
    let blocks = decomposition.blocks(psi)?;
    let qdims: Vec<f64> = decomposition.sectors().iter().map(|s| decomposition.qdim(s.alpha)).collect();
    aee_of_blocks(&blocks, &qdims)
}

/// `S̃_A + S̃_B − log d_J`.
pub fn mutual_information(state: &SectorState) -> Result<f64> {
    let d_j = state.decomposition.qdim(state.decomposition.total());
    Ok(aee(&reduce(state)?)? + aee(&reduce_b(state)?)? - d_j.ln())
}

/// Haar-random state from the sample stream `stream` of `seed`.
///
/// Amplitudes are i.i.d. standard complex Gaussians in the bipartite basis,
/// normalised afterwards. The bipartite transform is unitary, so this is the
/// Haar measure on the sector.
pub fn sample_haar_stream(decomposition: Arc<BipartiteDecomposition>, seed: u64, stream: u64) -> Result<SectorState> {
    if decomposition.is_empty() {
        return Err(Error::EmptySector(format!("total charge #{} has no states", decomposition.total().0)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut blocks: Vec<DMatrix<Complex64>> = decomposition
        .sectors()
        .iter()
        .map(|s| {
            DMatrix::from_row_iterator(
                s.m,
                s.n,
                (0..s.m * s.n).map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im)
                }),
            )
        })
        .collect();
    let norm = blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt();
    for b in &mut blocks {
        *b /= Complex64::new(norm, 0.0);
    }
    Ok(SectorState { decomposition, blocks })
}

/// Haar-random state, deterministic in `seed`.
pub fn sample_haar(decomposition: Arc<BipartiteDecomposition>, seed: u64) -> Result<SectorState> {
    sample_haar_stream(decomposition, seed, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloStats {
    pub n_samples: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub sample_variance: f64,
    pub standard_error: f64,
}

impl MonteCarloStats {
    pub fn from_samples(values: &[f64]) -> MonteCarloStats {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let sample_variance =
            if n > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
        MonteCarloStats { n_samples: n, mean, sample_variance, standard_error: (sample_variance / n as f64).sqrt() }
    }
}

/// AEE of sample `i` for `i in 0..n_samples`, each drawn from its own
/// stream so the values do not depend on how the work is scheduled.
pub fn monte_carlo_samples(
    decomposition: &Arc<BipartiteDecomposition>,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if decomposition.is_empty() {
        return Err(Error::EmptySector(format!("total charge #{} has no states", decomposition.total().0)));
    }
    let qdims: Vec<f64> = decomposition.sectors().iter().map(|s| decomposition.qdim(s.alpha)).collect();
    (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let state = sample_haar_stream(decomposition.clone(), seed, i)?;
            aee_of_blocks(&state.blocks, &qdims)
        })
        .collect()
}

/// Mean, variance and standard error of the AEE over Haar samples.
pub fn monte_carlo_aee(
    decomposition: &Arc<BipartiteDecomposition>,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloStats> {
    if n_samples < 2 {
        return Err(Error::Precondition("need at least two samples".into()));
    }
    Ok(MonteCarloStats::from_samples(&monte_carlo_samples(decomposition, n_samples, seed)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::AnyonModel;
    use crate::fusion::bipartite_decomposition;

    fn fib_decomp(l: usize, l_a: usize, j: u8) -> Arc<BipartiteDecomposition> {
        Arc::new(bipartite_decomposition(&AnyonModel::fibonacci(), Label(1), l, l_a, Label(j)).unwrap())
    }

    #[test]
    fn two_path_fibonacci_state() {
        let d = fib_decomp(4, 2, 0);
        let psi = vec![Complex64::new(0.5f64.sqrt(), 0.0); 2];
        let state = SectorState::from_standard(d, &psi).unwrap();
        let r = reduce(&state).unwrap();
        assert_eq!(r.sectors.len(), 2);
        for s in &r.sectors {
            assert!((s.weight - 0.5).abs() < 1e-12);
            assert_eq!(s.rho.nrows(), 1);
        }
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((aee(&r).unwrap() - (2f64.ln() + 0.5 * phi.ln())).abs() < 1e-12);
        assert!((vn_entropy(&r).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn unnormalised_state_is_rejected() {
        let d = fib_decomp(4, 2, 0);
        let state = SectorState::from_standard(d, &[Complex64::new(1.0, 0.0); 2]).unwrap();
        assert!(matches!(reduce(&state), Err(Error::Precondition(_))));
    }

    #[test]
    fn haar_is_normalised_and_deterministic() {
        let d = fib_decomp(8, 4, 0);
        let a = sample_haar(d.clone(), 7).unwrap();
        let b = sample_haar(d.clone(), 7).unwrap();
        let c = sample_haar(d, 8).unwrap();
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(a.blocks(), b.blocks());
        assert_ne!(a.blocks(), c.blocks());
    }

    #[test]
    fn fast_path_matches_reduce() {
        let d = fib_decomp(9, 4, 1);
        let state = sample_haar(d.clone(), 3).unwrap();
        let slow = aee(&reduce(&state).unwrap()).unwrap();
        let fast = state_aee(&d, &state.to_standard()).unwrap();
        assert!((slow - fast).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_needs_two_samples() {
        assert!(monte_carlo_aee(&fib_decomp(6, 3, 0), 1, 0).is_err());
    }

    #[test]
    fn trivial_cut_gives_log_dj() {
        let d = fib_decomp(7, 7, 1);
        let state = sample_haar(d, 11).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((aee(&reduce(&state).unwrap()).unwrap() - phi.ln()).abs() < 1e-12);
        assert!(aee(&reduce_b(&state).unwrap()).unwrap().abs() < 1e-12);
    }
}
