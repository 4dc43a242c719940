use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol;

/// Eigenvalues in ascending order and, optionally, eigenvectors as columns
/// in the basis `H` was given in (or mapped back through `sector`).
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<DMatrix<f64>>,
    /// Dimension of the diagonalised block.
    pub block_dim: usize,
}

impl SpectrumResult {
    /// `max_m ‖H v_m − E_m v_m‖` for a few eigenpairs spread over the
    /// spectrum, relative to the spectral width.
    pub fn spot_residual(&self, h: &DMatrix<f64>) -> Option<f64> {
        let v = self.eigenvectors.as_ref()?;
        if v.nrows() != h.nrows() {
            return None;
        }
        let n = self.eigenvalues.len();
        let width = (self.eigenvalues[n - 1] - self.eigenvalues[0]).abs().max(1.0);
        let picks = [0, n / 4, n / 2, 3 * n / 4, n - 1];
        let worst =
            picks.iter().map(|&m| (h * v.column(m) - v.column(m) * self.eigenvalues[m]).norm()).fold(0.0, f64::max);
        Some(worst / width)
    }
}

/// Full dense diagonalisation of a real symmetric block. With `sector`,
/// `h` is the block `Qᵀ H Q` and eigenvectors are mapped back by `Q`.
pub fn diagonalize(h: DMatrix<f64>, sector: Option<&DMatrix<f64>>, vectors: bool) -> Result<SpectrumResult> {
    let n = h.nrows();
    if n == 0 || h.ncols() != n {
        return Err(Error::domain("cannot diagonalise an empty or non-square block"));
    }
    if let Some(q) = sector {
        if q.ncols() != n {
            return Err(Error::domain("sector basis does not match the block"));
        }
    }
    if !vectors {
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        return Ok(SpectrumResult { eigenvalues: ev, eigenvectors: None, block_dim: n });
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = eig.eigenvectors.select_columns(&order);
    // Fix the sign so the largest-magnitude entry is positive.
    for mut col in vecs.column_iter_mut() {
        let k = col.iamax();
        if col[k] < 0.0 {
            col.neg_mut();
        }
    }
    let eigenvectors = Some(match sector {
        Some(q) => q * vecs,
        None => vecs,
    });
    Ok(SpectrumResult { eigenvalues, eigenvectors, block_dim: n })
}

/// Level-spacing ratio statistics.
#[derive(Clone, Debug, Serialize)]
pub struct LevelStats {
    /// `r_m` per level; `None` at the edges and next to degenerate spacings.
    pub per_level: Vec<Option<f64>>,
    pub ratios: Vec<f64>,
    pub mean: f64,
    /// Spacings below the degeneracy threshold.
    pub degenerate_spacings: usize,
    /// `(bin centre, density)` over `[0, 1]`.
    pub histogram: Vec<(f64, f64)>,
}

pub const HISTOGRAM_BINS: usize = 20;

/// `r_m = min(s_m/s_{m+1}, s_{m+1}/s_m)`, `s_m = E_m − E_{m−1}`, on
/// sorted eigenvalues. Spacings below `1e-12 ×` the spectral width are
/// treated as degenerate and excluded.
pub fn level_spacing_ratios(eigenvalues: &[f64]) -> Result<LevelStats> {
    let n = eigenvalues.len();
    if n < 3 {
        return Err(Error::TooFewLevels { needed: 3, got: n });
    }
    if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("eigenvalues must be sorted"));
    }
    let width = eigenvalues[n - 1] - eigenvalues[0];
    let thresh = tol::DEGENERATE_SPACING * width.max(f64::MIN_POSITIVE);
    let spacings: Vec<f64> = eigenvalues.windows(2).map(|w| w[1] - w[0]).collect();
    let degenerate_spacings = spacings.iter().filter(|&&s| s <= thresh).count();
    let mut per_level = vec![None; n];
    for m in 1..n - 1 {
        let (a, b) = (spacings[m - 1], spacings[m]);
        if a > thresh && b > thresh {
            per_level[m] = Some((a / b).min(b / a));
        }
    }
    let ratios: Vec<f64> = per_level.iter().flatten().copied().collect();
    if ratios.is_empty() {
        return Err(Error::TooFewLevels { needed: 3, got: n - degenerate_spacings });
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let mut counts = [0usize; HISTOGRAM_BINS];
    for &r in &ratios {
        counts[((r * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1)] += 1;
    }
    let w = 1.0 / HISTOGRAM_BINS as f64;
    let histogram =
        counts.iter().enumerate().map(|(i, &c)| ((i as f64 + 0.5) * w, c as f64 / (ratios.len() as f64 * w))).collect();
    Ok(LevelStats { per_level, ratios, mean, degenerate_spacings, histogram })
}

/// Which Poisson ratio density to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PoissonVariant {
    /// `2/(1+r)²`, the density of the min-ratio for uncorrelated levels.
    #[default]
    Standard,
    /// `2/(1+r²)`, an alternative normalisation kept for comparison.
    Caption,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioPdfs {
    pub goe: f64,
    pub poisson: f64,
}

/// `P_GOE(r) = (27/4)(r+r²)/(1+r+r²)^{5/2}` and the Poisson density.
pub fn reference_ratio_pdfs(r: f64, variant: PoissonVariant) -> Result<RatioPdfs> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("ratio must lie in [0, 1], got {r}")));
    }
    let goe = 27.0 / 4.0 * (r + r * r) / (1.0 + r + r * r).powf(2.5);
    let poisson = match variant {
        PoissonVariant::Standard => 2.0 / ((1.0 + r) * (1.0 + r)),
        PoissonVariant::Caption => 2.0 / (1.0 + r * r),
    };
    Ok(RatioPdfs { goe, poisson })
}

/// Least-squares fit `y ≈ 1 + a/L + b/L²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FiniteSizeFit {
    pub a: f64,
    pub b: f64,
    /// Root-mean-square residual.
    pub rms: f64,
}

pub fn finite_size_fit(points: &[(f64, f64)]) -> Result<FiniteSizeFit> {
    if points.len() < 2 {
        return Err(Error::domain("need at least two points for the fit"));
    }
    let x = DMatrix::from_fn(points.len(), 2, |i, k| points[i].0.powi(-(k as i32 + 1)));
    let y = DMatrix::from_fn(points.len(), 1, |i, _| points[i].1 - 1.0);
    let svd = x.clone().svd(true, true);
    let coef = svd.solve(&y, 1e-14).map_err(|e| Error::domain(e.to_string()))?;
    let resid = &x * &coef - &y;
    Ok(FiniteSizeFit { a: coef[0], b: coef[1], rms: (resid.norm_squared() / points.len() as f64).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equally_spaced_levels() {
        let ev: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
        let s = level_spacing_ratios(&ev).unwrap();
        assert!(s.ratios.iter().all(|&r| (r - 1.0).abs() < 1e-12));
        assert!((s.mean - 1.0).abs() < 1e-12);
        assert_eq!(s.per_level[0], None);
    }

    #[test]
    fn too_few_levels() {
        assert!(matches!(level_spacing_ratios(&[0.0, 1.0]), Err(Error::TooFewLevels { .. })));
    }

    #[test]
    fn degenerate_spacings_are_dropped() {
        let s = level_spacing_ratios(&[0.0, 1.0, 1.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.degenerate_spacings, 1);
        assert_eq!(s.ratios.len(), 1);
    }

    #[test]
    fn reference_densities() {
        let p = reference_ratio_pdfs(0.0, PoissonVariant::Standard).unwrap();
        assert_eq!(p.goe, 0.0);
        assert_eq!(p.poisson, 2.0);
        assert!(reference_ratio_pdfs(1.5, PoissonVariant::Standard).is_err());
        let c = reference_ratio_pdfs(1.0, PoissonVariant::Caption).unwrap();
        assert!((c.poisson - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonalize_sorts_and_checks() {
        let h = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, -1.0]);
        let s = diagonalize(h.clone(), None, true).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((s.eigenvalues.iter().sum::<f64>() - h.trace()).abs() < 1e-12);
        assert!(s.spot_residual(&h).unwrap() < 1e-12);
        assert!(diagonalize(DMatrix::zeros(0, 0), None, false).is_err());
    }

    #[test]
    fn fit_recovers_exact_coefficients() {
        let pts: Vec<(f64, f64)> =
            [8.0, 10.0, 12.0, 14.0].iter().map(|&l| (l, 1.0 + 2.0 / l - 3.0 / (l * l))).collect();
        let f = finite_size_fit(&pts).unwrap();
        assert!((f.a - 2.0).abs() < 1e-9 && (f.b + 3.0).abs() < 1e-8 && f.rms < 1e-12);
    }
}
