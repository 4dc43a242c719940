//! Closed-form Haar statistics of the anyonic entanglement entropy.
//!
//! For a cut with sectors `(α, m_α, n_α)` and `D_J = Σ m_α n_α`,
//!
//! ```text
//! ⟨S̃_A⟩ = Σ_α ϱ_α φ_α,   ϱ_α = m_α n_α / D_J,
//! φ_α   = Ψ(D_J+1) − Ψ(max(m_α,n_α)+1) − min((m_α−1)/2n_α, (n_α−1)/2m_α) + log d_α.
//! ```

use std::f64::consts::PI;

use serde::Serialize;

use crate::category::{AnyonModel, Label};
use crate::error::{Error, Result};
use crate::fusion::{dims_all, BipartiteDecomposition};
use crate::special::{digamma, trigamma, EULER_GAMMA};
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SectorDim {
    pub alpha: Label,
    pub m: u128,
    pub n: u128,
    pub qdim: f64,
}

/// Sector dimensions of one cut, without any basis data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorDims {
    pub sectors: Vec<SectorDim>,
    pub d_total: u128,
    pub d_j: f64,
    pub l: usize,
    pub l_a: usize,
}

impl SectorDims {
    /// Count `m_α = D_α(L_A)` and `n_α = Σ_{β: N_{αβ}^J=1} D_β(L_B)` for
    /// `1 ≤ L_A ≤ L`.
    pub fn new(model: &AnyonModel, jext: Label, l: usize, l_a: usize, total: Label) -> Result<SectorDims> {
        if l_a == 0 || l_a > l {
            return Err(Error::domain(format!("need 1 ≤ L_A ≤ L, got L_A = {l_a}, L = {l}")));
        }
        if total.index() >= model.rank() {
            return Err(Error::domain(format!("label {} out of range", total.0)));
        }
        let a = dims_all(model, jext, l_a)?;
        let b = dims_all(model, jext, l - l_a)?;
        let mut sectors = Vec::new();
        let mut d_total = 0u128;
        for alpha in model.labels() {
            let m = a[alpha.index()];
            let mut n = 0u128;
            for beta in model.labels().filter(|&b| model.admissible(alpha, b, total)) {
                n = n.checked_add(b[beta.index()]).ok_or(Error::Overflow("sector dimension"))?;
            }
            if m == 0 || n == 0 {
                continue;
            }
            let mn = m.checked_mul(n).ok_or(Error::Overflow("sector dimension"))?;
            d_total = d_total.checked_add(mn).ok_or(Error::Overflow("sector dimension"))?;
            sectors.push(SectorDim { alpha, m, n, qdim: model.qdim(alpha) });
        }
        Ok(SectorDims { sectors, d_total, d_j: model.qdim(total), l, l_a })
    }

    pub fn from_decomposition(d: &BipartiteDecomposition) -> SectorDims {
        let sectors: Vec<SectorDim> = d
            .sectors()
            .iter()
            .map(|s| SectorDim { alpha: s.alpha, m: s.m as u128, n: s.n as u128, qdim: d.qdim(s.alpha) })
            .collect();
        SectorDims {
            d_total: sectors.iter().map(|s| s.m * s.n).sum(),
            sectors,
            d_j: d.qdim(d.total()),
            l: d.sites(),
            l_a: d.l_a(),
        }
    }

    /// A single sector with the given sizes and quantum dimension.
    pub fn single(m: u128, n: u128, qdim: f64) -> SectorDims {
        SectorDims {
            sectors: vec![SectorDim { alpha: Label::VACUUM, m, n, qdim }],
            d_total: m * n,
            d_j: 1.0,
            l: 0,
            l_a: 0,
        }
    }

    pub fn fraction(&self) -> f64 {
        self.l_a as f64 / self.l as f64
    }

    /// The same cut seen from `B`: sectors are relabelled by the `B` charge
    /// `β`, with `m_β = D_β(L_B)` and `n_β = Σ_{α: N_{αβ}^J=1} D_α(L_A)`.
    pub fn b_side(model: &AnyonModel, jext: Label, l: usize, l_a: usize, total: Label) -> Result<SectorDims> {
        if l_a == 0 || l_a >= l {
            return Err(Error::domain(format!("need 1 ≤ L_A ≤ L−1, got L_A = {l_a}, L = {l}")));
        }
        SectorDims::new(model, jext, l, l - l_a, total)
    }

    fn check(&self) -> Result<()> {
        if self.d_total == 0 {
            Err(Error::EmptySector("D_J = 0".into()))
        } else {
            Ok(())
        }
    }
}

/// `min((m−1)/2n, (n−1)/2m)`, the rational part of Page's formula.
pub fn page_rational(m: f64, n: f64) -> f64 {
    ((m - 1.0) / (2.0 * n)).min((n - 1.0) / (2.0 * m))
}

/// `Ψ(D+1) − Ψ(max(m,n)+1) − min((m−1)/2n, (n−1)/2m)`: Page's average
/// entropy of an `m × n` block inside a `D`-dimensional state.
pub fn page_term(m: f64, n: f64, d_total: f64) -> f64 {
    digamma(d_total + 1.0) - digamma(m.max(n) + 1.0) - page_rational(m, n)
}

/// `φ_α` for one sector.
pub fn phi(s: &SectorDim, d_total: f64) -> f64 {
    page_term(s.m as f64, s.n as f64, d_total) + s.qdim.ln()
}

/// `χ_α`, written with the explicit `m ≤ n` / `m ≥ n` case split.
pub fn chi(m: f64, n: f64, d_total: f64) -> f64 {
    let tail = (d_total + 1.0) * trigamma(d_total + 1.0);
    if m <= n {
        (m + n) * trigamma(n + 1.0) - tail - (m - 1.0) * (m + 2.0 * n - 1.0) / (4.0 * n * n)
    } else {
        (m + n) * trigamma(m + 1.0) - tail - (n - 1.0) * (n + 2.0 * m - 1.0) / (4.0 * m * m)
    }
}

/// Same as [`chi`] through `max`/`min`.
pub fn chi_minmax(m: f64, n: f64, d_total: f64) -> f64 {
    (m + n) * trigamma(m.max(n) + 1.0)
        - (d_total + 1.0) * trigamma(d_total + 1.0)
        - ((m - 1.0) * (m + 2.0 * n - 1.0) / (4.0 * n * n)).min((n - 1.0) * (n + 2.0 * m - 1.0) / (4.0 * m * m))
}

/// Exact Haar average of the AEE.
pub fn exact_average_aee(dims: &SectorDims) -> Result<f64> {
    dims.check()?;
    let d = dims.d_total as f64;
    Ok(dims.sectors.iter().map(|s| (s.m as f64 * s.n as f64 / d) * phi(s, d)).sum())
}

/// Exact Haar variance of the AEE.
pub fn exact_variance(dims: &SectorDims) -> Result<f64> {
    let mean = exact_average_aee(dims)?;
    let d = dims.d_total as f64;
    let second: f64 = dims
        .sectors
        .iter()
        .map(|s| {
            let (m, n) = (s.m as f64, s.n as f64);
            let p = phi(s, d);
            (m * n / d) * (p * p + chi(m, n, d))
        })
        .sum();
    Ok((second - mean * mean) / (d + 1.0))
}

fn check_fraction(f: f64) -> Result<()> {
    if f > 0.0 && f < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("subsystem fraction must lie in (0, 1), got {f}")))
    }
}

fn is_half(f: f64) -> bool {
    (f - 0.5).abs() < tol::FRACTION
}

/// Leading large-`L` behaviour of the average AEE:
/// `fL log d_𝔧 − δ_{f,1/2}/(2d_J)` for `f ≤ 1/2` and
/// `(1−f)L log d_𝔧 + log d_J` above.
pub fn asymptotic_aee(model: &AnyonModel, jext: Label, total: Label, l: usize, f: f64) -> Result<f64> {
    check_fraction(f)?;
    let (dj, big) = (model.qdim(jext), model.qdim(total));
    let l = l as f64;
    if f <= 0.5 || is_half(f) {
        let page = if is_half(f) { 1.0 / (2.0 * big) } else { 0.0 };
        Ok(f * l * dj.ln() - page)
    } else {
        Ok((1.0 - f) * l * dj.ln() + big.ln())
    }
}

/// Average AEE in the double-scaling window `f = 1/2 + Λ/(2L^s)`.
pub fn resolved_crossover(model: &AnyonModel, jext: Label, total: Label, l: usize, lambda: f64, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::domain(format!("scaling exponent must be positive, got {s}")));
    }
    let (dj, big) = (model.qdim(jext), model.qdim(total));
    let lf = l as f64;
    let l_a = lf / 2.0 + lambda * lf.powf(1.0 - s) / 2.0;
    let l_b = lf - l_a;
    let v = if (s - 1.0).abs() < tol::FRACTION {
        let eta = lambda * dj.ln() - big.ln();
        l_a * dj.ln() - eta.max(0.0) - 0.5 * (-eta.abs()).exp()
    } else if s < 1.0 {
        if lambda <= 0.0 {
            l_a * dj.ln()
        } else {
            l_b * dj.ln() + big.ln()
        }
    } else {
        l_a * dj.ln() - 1.0 / (2.0 * big)
    };
    Ok(v)
}

/// Decay exponent of the variance, `log` of the proportionality in
/// `(ΔS̃_A)² ∝ d_𝔧^{…}`.
pub fn asymptotic_variance(model: &AnyonModel, jext: Label, l: usize, f: f64) -> Result<f64> {
    check_fraction(f)?;
    let rate = l as f64 * model.qdim(jext).ln();
    Ok(if is_half(f) {
        -rate
    } else if f < 0.5 {
        -2.0 * (1.0 - f) * rate
    } else {
        -2.0 * f * rate
    })
}

/// Which spins the subsystem charge `α` runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityCase {
    Integer,
    HalfInteger,
}

impl ParityCase {
    /// The class reached by `L_A` anyons of doubled spin `jext`.
    pub fn for_cut(jext: Label, l_a: usize) -> ParityCase {
        if (jext.0 as usize * l_a) % 2 == 0 {
            ParityCase::Integer
        } else {
            ParityCase::HalfInteger
        }
    }

    fn contains(self, doubled: u32) -> bool {
        match self {
            ParityCase::Integer => doubled % 2 == 0,
            ParityCase::HalfInteger => doubled % 2 == 1,
        }
    }
}

fn su2k_qdim(k: u32, doubled: u32) -> f64 {
    let theta = PI / (k as f64 + 2.0);
    ((doubled as f64 + 1.0) * theta).sin() / theta.sin()
}

fn check_su2k(k: u32, labels: &[Label]) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("q-SREE needs k ≥ 1"));
    }
    match labels.iter().find(|l| l.0 as u32 > k) {
        Some(l) => Err(Error::domain(format!("doubled spin {} exceeds k = {k}", l.0))),
        None => Ok(()),
    }
}

/// Volume and Page-correction part shared by the closed and summed forms,
/// plus the `log d_J` offset above `f = 1/2`.
fn sree_volume(k: u32, jext: Label, total: Label, l: usize, f: f64) -> f64 {
    let (dj, big) = (su2k_qdim(k, jext.0 as u32), su2k_qdim(k, total.0 as u32));
    let l = l as f64;
    if f <= 0.5 || is_half(f) {
        let page = if is_half(f) { 1.0 / (2.0 * big) } else { 0.0 };
        f * l * dj.ln() - page
    } else {
        (1.0 - f) * l * dj.ln() + big.ln()
    }
}

/// Average q-deformed symmetry-resolved von Neumann entropy for SU(2)_k,
/// closed form (labels are doubled spins).
pub fn q_sree(k: u32, jext: Label, total: Label, l: usize, f: f64, case: ParityCase) -> Result<f64> {
    check_su2k(k, &[jext, total])?;
    check_fraction(f)?;
    let kk = k as f64 + 2.0;
    let theta = PI / kk;
    let log2s = (2.0 * theta.sin()).ln();
    let cot = |x: f64| 1.0 / x.tan();
    let bracket = if k % 2 == 1 {
        kk * log2s + PI / 2.0 * cot(theta) + digamma(1.0 / kk) + EULER_GAMMA
    } else {
        match case {
            ParityCase::HalfInteger => kk * log2s + PI * cot(2.0 * theta) + 2.0 * digamma(2.0 / kk) + 2.0 * EULER_GAMMA,
            ParityCase::Integer => {
                kk * log2s + PI * (cot(theta) - cot(2.0 * theta)) + 2.0 * (digamma(1.0 / kk) - digamma(2.0 / kk))
            }
        }
    };
    Ok(sree_volume(k, jext, total, l, f) + bracket / kk)
}

/// `Σ_{α ∈ class} d_α² log d_α` by direct summation.
pub fn qdim_entropy_sum(k: u32, case: ParityCase) -> f64 {
    (0..=k)
        .filter(|&a| case.contains(a))
        .map(|a| {
            let d = su2k_qdim(k, a);
            d * d * d.ln()
        })
        .sum()
}

/// The same quantity as [`q_sree`] with the `α` sum done term by term:
/// `fL log d_𝔧 − (2/𝒟²) Σ_α d_α² log d_α − δ_{f,1/2}/(2d_J)`.
pub fn q_sree_direct(k: u32, jext: Label, total: Label, l: usize, f: f64, case: ParityCase) -> Result<f64> {
    check_su2k(k, &[jext, total])?;
    check_fraction(f)?;
    let dtot2: f64 = (0..=k).map(|a| su2k_qdim(k, a).powi(2)).sum();
    Ok(sree_volume(k, jext, total, l, f) - 2.0 / dtot2 * qdim_entropy_sum(k, case))
}

/// `Σ_{n=1}^{k+1} cos(2nθ) log sin(nθ)` by summation.
pub fn gauss_digamma_sum(k: u32) -> f64 {
    let theta = PI / (k as f64 + 2.0);
    (1..=k + 1).map(|n| (2.0 * n as f64 * theta).cos() * (n as f64 * theta).sin().ln()).sum()
}

/// Closed form of [`gauss_digamma_sum`]:
/// `log(k+2) + log 2 + (π/2) cot θ + Ψ(1/(k+2)) + γ_E`.
pub fn gauss_digamma_closed(k: u32) -> f64 {
    let kk = k as f64 + 2.0;
    let theta = PI / kk;
    kk.ln() + 2f64.ln() + PI / 2.0 / theta.tan() + digamma(1.0 / kk) + EULER_GAMMA
}
