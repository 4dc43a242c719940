//! Fusion-tree bases of `L` identical anyons, fusion-space dimensions and
//! the bipartite basis transform.
//!
//! A basis state of the standard (left-comb) tree is a path
//! `x_0 = 0, x_1 = 𝔧, x_2, …, x_L = J` with `N_{x_i 𝔧}^{x_{i+1}} = 1`.
//! Paths are stored in full, including both endpoints, and ordered
//! lexicographically.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::category::{unitarity_residual, AnyonModel, Label};
use crate::error::{Error, Result};

/// Refuse to materialise bases with more than this many paths.
pub const MAX_ENUMERATED: u128 = 50_000_000;

/// `ways[s][x]`: number of `s`-step paths from `x` to `target`.
fn ways_to(model: &AnyonModel, jext: Label, steps: usize, target: Label) -> Result<Vec<Vec<u128>>> {
    let n = model.rank();
    let mut ways = vec![vec![0u128; n]; steps + 1];
    ways[0][target.index()] = 1;
    for s in 1..=steps {
        for x in model.labels() {
            let mut acc = 0u128;
            for y in model.outcomes(x, jext) {
                acc = acc.checked_add(ways[s - 1][y.index()]).ok_or(Error::Overflow("fusion-space dimension"))?;
            }
            ways[s][x.index()] = acc;
        }
    }
    Ok(ways)
}

fn check_label(model: &AnyonModel, l: Label) -> Result<()> {
    if l.index() < model.rank() {
        Ok(())
    } else {
        Err(Error::domain(format!("label {} out of range for {}", l.0, model.kind().family())))
    }
}

/// Row of `N_𝔧^L` starting at `from`, by exact integer products.
fn dims_from(model: &AnyonModel, jext: Label, l: usize, from: Label) -> Result<Vec<u128>> {
    let n = model.rank();
    let mut v = vec![0u128; n];
    v[from.index()] = 1;
    for _ in 0..l {
        let mut next = vec![0u128; n];
        for x in model.labels() {
            if v[x.index()] == 0 {
                continue;
            }
            for y in model.outcomes(x, jext) {
                next[y.index()] =
                    next[y.index()].checked_add(v[x.index()]).ok_or(Error::Overflow("fusion-space dimension"))?;
            }
        }
        v = next;
    }
    Ok(v)
}

/// `D_J(L) = (N_𝔧^L)_{0J}` from exact integer matrix powers.
pub fn dim_bruteforce(model: &AnyonModel, jext: Label, l: usize, total: Label) -> Result<u128> {
    check_label(model, jext)?;
    check_label(model, total)?;
    if l == 0 {
        return Err(Error::domain("chain length must be at least 1"));
    }
    Ok(dims_from(model, jext, l, Label::VACUUM)?[total.index()])
}

/// All `D_J(L)` for fixed `L`, indexed by `J`.
pub fn dims_all(model: &AnyonModel, jext: Label, l: usize) -> Result<Vec<u128>> {
    check_label(model, jext)?;
    dims_from(model, jext, l, Label::VACUUM)
}

/// `D_J(L) = Σ_x S_0x S*_Jx (S_𝔧x / S_0x)^L`.
pub fn dim_verlinde(model: &AnyonModel, jext: Label, l: usize, total: Label) -> Result<f64> {
    check_label(model, jext)?;
    check_label(model, total)?;
    let s = model.require_s("the Verlinde dimension")?;
    let exp = i32::try_from(l).map_err(|_| Error::domain("chain too long"))?;
    let v: Complex64 = (0..model.rank())
        .map(|x| s[(0, x)] * s[(total.index(), x)].conj() * (s[(jext.index(), x)] / s[(0, x)]).powi(exp))
        .sum();
    Ok(v.re)
}

/// Fusion-space dimensions on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusDims {
    /// `tr(N_𝔧^L)` by exact integer products.
    pub total: u128,
    /// `Σ_x (S_𝔧x / S_0x)^L`.
    pub total_verlinde: f64,
    /// Length of the local subsystem `C`.
    pub l_c: usize,
    /// `(N_𝔧^{L_C})_{x₁γ}` indexed `[x₁][γ]`: the entering label `x₁` is
    /// free on the torus.
    pub subsystem: Vec<Vec<u128>>,
}

pub fn torus_dims(model: &AnyonModel, jext: Label, l: usize, l_c: usize) -> Result<TorusDims> {
    check_label(model, jext)?;
    let s = model.require_s("torus dimensions")?;
    if l == 0 || l_c > l {
        return Err(Error::domain("need L ≥ 1 and L_C ≤ L"));
    }
    let mut total = 0u128;
    for x in model.labels() {
        total =
            total.checked_add(dims_from(model, jext, l, x)?[x.index()]).ok_or(Error::Overflow("torus dimension"))?;
    }
    let exp = i32::try_from(l).map_err(|_| Error::domain("chain too long"))?;
    let total_verlinde: Complex64 = (0..model.rank()).map(|x| (s[(jext.index(), x)] / s[(0, x)]).powi(exp)).sum();
    let subsystem = model.labels().map(|x| dims_from(model, jext, l_c, x)).collect::<Result<Vec<_>>>()?;
    Ok(TorusDims { total, total_verlinde: total_verlinde.re, l_c, subsystem })
}

/// Standard fusion-tree basis for `L` anyons of charge `𝔧` with total `J`.
#[derive(Clone, Debug)]
pub struct FusionBasis {
    fingerprint: u64,
    jext: Label,
    len: usize,
    total: Label,
    /// Paths `x_0..=x_L` back to back, `len + 1` labels each.
    paths: Vec<Label>,
}

impl FusionBasis {
    pub fn jext(&self) -> Label {
        self.jext
    }

    /// Number of anyons `L`.
    pub fn sites(&self) -> usize {
        self.len
    }

    pub fn total(&self) -> Label {
        self.total
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn dim(&self) -> usize {
        self.paths.len() / (self.len + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Full path `x_0..=x_L` of basis state `i`.
    pub fn path(&self, i: usize) -> &[Label] {
        let w = self.len + 1;
        &self.paths[i * w..(i + 1) * w]
    }

    pub fn paths(&self) -> impl ExactSizeIterator<Item = &[Label]> {
        self.paths.chunks_exact(self.len + 1)
    }

    /// Index of a full path, if it is in the basis.
    pub fn index_of(&self, path: &[Label]) -> Option<usize> {
        if path.len() != self.len + 1 {
            return None;
        }
        let (mut lo, mut hi) = (0, self.dim());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.path(mid).cmp(path) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// Paths of `steps` fusions from `start` to `end`, in lexicographic order,
/// stored back to back with `steps + 1` labels each.
fn enumerate_paths(model: &AnyonModel, jext: Label, start: Label, steps: usize, end: Label) -> Result<Vec<Label>> {
    let ways = ways_to(model, jext, steps, end)?;
    let count = ways[steps][start.index()];
    if count > MAX_ENUMERATED {
        return Err(Error::domain(format!("{count} fusion paths are too many to enumerate")));
    }
    let mut out = Vec::with_capacity(count as usize * (steps + 1));
    let mut path = vec![start];
    fn rec(
        model: &AnyonModel,
        jext: Label,
        ways: &[Vec<u128>],
        steps: usize,
        path: &mut Vec<Label>,
        out: &mut Vec<Label>,
    ) {
        let done = path.len() - 1;
        if done == steps {
            out.extend_from_slice(path);
            return;
        }
        let last = *path.last().unwrap();
        for y in model.outcomes(last, jext) {
            if ways[steps - done - 1][y.index()] > 0 {
                path.push(y);
                rec(model, jext, ways, steps, path, out);
                path.pop();
            }
        }
    }
    if count > 0 {
        rec(model, jext, &ways, steps, &mut path, &mut out);
    }
    Ok(out)
}

/// All admissible paths in lexicographic order. A disallowed total charge
/// gives an empty basis.
pub fn enumerate_basis(model: &AnyonModel, jext: Label, l: usize, total: Label) -> Result<FusionBasis> {
    check_label(model, jext)?;
    check_label(model, total)?;
    if l == 0 {
        return Err(Error::domain("chain length must be at least 1"));
    }
    Ok(FusionBasis {
        fingerprint: model.fingerprint(),
        jext,
        len: l,
        total,
        paths: enumerate_paths(model, jext, Label::VACUUM, l, total)?,
    })
}

/// One charge sector `α` of subsystem `A`.
#[derive(Clone, Debug)]
pub struct Sector {
    pub alpha: Label,
    /// Number of `A`-side paths `0 → α` (`m_α`).
    pub m: usize,
    /// Number of `B`-side states `(y⃗, β)` with `N_{αβ}^J = 1` (`n_α`).
    pub n: usize,
    /// `A` paths `x_0..=x_{L_A}`, `L_A + 1` labels each.
    a_paths: Vec<Label>,
    /// `B` paths `y_0 = 0, y_1 = 𝔧, …, y_{L_B} = β`, grouped by `β`.
    b_paths: Vec<Label>,
    /// Standard-basis tails `α = z_0, …, z_{L_B} = J`.
    tails: Vec<Label>,
    /// `n × n`, rows over `B` paths, columns over tails.
    transform: DMatrix<Complex64>,
    /// Offset of this sector in the bipartite basis.
    pub offset: usize,
}

impl Sector {
    pub fn a_path(&self, i: usize, l_a: usize) -> &[Label] {
        &self.a_paths[i * (l_a + 1)..(i + 1) * (l_a + 1)]
    }

    pub fn b_path(&self, i: usize, l_b: usize) -> &[Label] {
        &self.b_paths[i * (l_b + 1)..(i + 1) * (l_b + 1)]
    }

    /// Outer charge `β` of `B`-state `i`.
    pub fn beta(&self, i: usize, l_b: usize) -> Label {
        self.b_paths[i * (l_b + 1) + l_b]
    }

    /// Block of the basis transform acting on the `B` index.
    pub fn transform(&self) -> &DMatrix<Complex64> {
        &self.transform
    }
}

/// Standard ↔ bipartite basis change for the cut `L = L_A + L_B`.
///
/// The bipartite basis fuses the `A` anyons into `α` and the `B` anyons into
/// `β` along their own left combs and then fuses `α ⊗ β → J`. Its states are
/// ordered by sector, then by `A` path, then by `(β, y⃗)`. The transform is
/// block diagonal in `α` and acts on the `B` index only.
#[derive(Clone, Debug)]
pub struct BipartiteDecomposition {
    basis: FusionBasis,
    l_a: usize,
    sectors: Vec<Sector>,
    /// Standard index → (sector, A index, tail index).
    locate: Vec<(u32, u32, u32)>,
    qdims: Vec<f64>,
}

impl BipartiteDecomposition {
    pub fn basis(&self) -> &FusionBasis {
        &self.basis
    }

    pub fn sites(&self) -> usize {
        self.basis.sites()
    }

    pub fn l_a(&self) -> usize {
        self.l_a
    }

    pub fn l_b(&self) -> usize {
        self.basis.sites() - self.l_a
    }

    pub fn total(&self) -> Label {
        self.basis.total()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn qdim(&self, a: Label) -> f64 {
        self.qdims[a.index()]
    }

    pub fn fingerprint(&self) -> u64 {
        self.basis.fingerprint()
    }

    /// `(α, m_α, n_α)` per sector.
    pub fn sector_dims(&self) -> Vec<(Label, usize, usize)> {
        self.sectors.iter().map(|s| (s.alpha, s.m, s.n)).collect()
    }

    /// Split a standard-basis vector into per-sector `m_α × n_α` blocks in
    /// the bipartite basis.
    pub fn blocks(&self, psi: &[Complex64]) -> Result<Vec<DMatrix<Complex64>>> {
        if psi.len() != self.dim() {
            return Err(Error::domain(format!("state has length {}, sector has dimension {}", psi.len(), self.dim())));
        }
        let mut raw: Vec<DMatrix<Complex64>> = self.sectors.iter().map(|s| DMatrix::zeros(s.m, s.n)).collect();
        for (amp, &(s, x, z)) in psi.iter().zip(&self.locate) {
            raw[s as usize][(x as usize, z as usize)] = *amp;
        }
        Ok(raw.into_iter().zip(&self.sectors).map(|(m, s)| m * s.transform.transpose()).collect())
    }

    /// Real-valued convenience wrapper of [`blocks`](Self::blocks).
    pub fn blocks_real(&self, psi: &[f64]) -> Result<Vec<DMatrix<Complex64>>> {
        let c: Vec<Complex64> = psi.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.blocks(&c)
    }

    /// Inverse of [`blocks`](Self::blocks).
    pub fn to_standard(&self, blocks: &[DMatrix<Complex64>]) -> Result<Vec<Complex64>> {
        if blocks.len() != self.sectors.len() {
            return Err(Error::domain("wrong number of sector blocks"));
        }
        let raw: Vec<DMatrix<Complex64>> =
            blocks.iter().zip(&self.sectors).map(|(b, s)| b * s.transform.map(|z| z.conj())).collect();
        Ok(self.locate.iter().map(|&(s, x, z)| raw[s as usize][(x as usize, z as usize)]).collect())
    }

    /// The full `D_J × D_J` transform, rows in the bipartite basis and
    /// columns in the standard basis.
    pub fn transform_dense(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        for (col, &(s, x, z)) in self.locate.iter().enumerate() {
            let sec = &self.sectors[s as usize];
            for y in 0..sec.n {
                out[(sec.offset + x as usize * sec.n + y, col)] = sec.transform[(y, z as usize)];
            }
        }
        out
    }

    /// Largest deviation of any sector block from unitarity.
    pub fn unitarity_residual(&self) -> f64 {
        self.sectors.iter().map(|s| unitarity_residual(&s.transform)).fold(0.0, f64::max)
    }
}

/// Build the bipartite decomposition for `1 ≤ L_A ≤ L`. `L_A = L` is the
/// trivial cut with an empty `B` (`β = 0`). An empty total-charge sector
/// gives an empty decomposition.
pub fn bipartite_decomposition(
    model: &AnyonModel,
    jext: Label,
    l: usize,
    l_a: usize,
    total: Label,
) -> Result<BipartiteDecomposition> {
    if l_a == 0 || l_a > l {
        return Err(Error::domain(format!("need 1 ≤ L_A ≤ L, got L_A = {l_a}, L = {l}")));
    }
    let basis = enumerate_basis(model, jext, l, total)?;
    let l_b = l - l_a;
    let mut sectors = Vec::new();
    let mut offset = 0;
    let mut sector_of = vec![usize::MAX; model.rank()];
    if !basis.is_empty() {
        for alpha in model.labels() {
            let a_paths = enumerate_paths(model, jext, Label::VACUUM, l_a, alpha)?;
            if a_paths.is_empty() {
                continue;
            }
            let mut b_paths = Vec::new();
            if l_b == 0 {
                if alpha == total {
                    b_paths.push(Label::VACUUM);
                }
            } else {
                for beta in model.labels().filter(|&b| model.admissible(alpha, b, total)) {
                    b_paths.extend(enumerate_paths(model, jext, Label::VACUUM, l_b, beta)?);
                }
            }
            let tails = enumerate_paths(model, jext, alpha, l_b, total)?;
            let n = tails.len() / (l_b + 1);
            debug_assert_eq!(n, b_paths.len() / (l_b + 1));
            if n == 0 {
                continue;
            }
            let m = a_paths.len() / (l_a + 1);
            let transform = sector_transform(model, jext, alpha, l_b, &b_paths, &tails);
            sector_of[alpha.index()] = sectors.len();
            sectors.push(Sector { alpha, m, n, a_paths, b_paths, tails, transform, offset });
            offset += m * n;
        }
    }
    debug_assert_eq!(offset, basis.dim());

    let mut locate = Vec::with_capacity(basis.dim());
    for path in basis.paths() {
        let s = sector_of[path[l_a].index()];
        let sec = &sectors[s];
        let x = find_chunk(&sec.a_paths, l_a + 1, &path[..=l_a]);
        let z = find_chunk(&sec.tails, l_b + 1, &path[l_a..]);
        locate.push((s as u32, x as u32, z as u32));
    }
    Ok(BipartiteDecomposition { basis, l_a, sectors, locate, qdims: model.qdims().to_vec() })
}

fn find_chunk(flat: &[Label], width: usize, key: &[Label]) -> usize {
    let chunks: Vec<&[Label]> = flat.chunks_exact(width).collect();
    chunks.binary_search(&key).expect("path belongs to its sector")
}

/// `T[y, z] = Π_{k=1}^{L_B−1} (F^{α y_k 𝔧}_{z_{k+1}})_{z_k, y_{k+1}}`.
fn sector_transform(
    model: &AnyonModel,
    jext: Label,
    alpha: Label,
    l_b: usize,
    b_paths: &[Label],
    tails: &[Label],
) -> DMatrix<Complex64> {
    let w = l_b + 1;
    let n = tails.len() / w;
    DMatrix::from_fn(n, n, |r, c| {
        let y = &b_paths[r * w..(r + 1) * w];
        let z = &tails[c * w..(c + 1) * w];
        let mut v = Complex64::new(1.0, 0.0);
        for k in 1..l_b {
            v *= model.f(alpha, y[k], jext, z[k + 1], z[k], y[k + 1]);
            if v == Complex64::new(0.0, 0.0) {
                break;
            }
        }
        v
    })
}

type CacheKey = (u64, Label, usize, usize, Label);

/// Memoises bipartite decompositions per model fingerprint and cut.
#[derive(Default)]
pub struct DecompositionCache {
    map: Mutex<HashMap<CacheKey, Arc<BipartiteDecomposition>>>,
}

impl DecompositionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(
        &self,
        model: &AnyonModel,
        jext: Label,
        l: usize,
        l_a: usize,
        total: Label,
    ) -> Result<Arc<BipartiteDecomposition>> {
        let key = (model.fingerprint(), jext, l, l_a, total);
        if let Some(hit) = self.map.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let built = Arc::new(bipartite_decomposition(model, jext, l, l_a, total)?);
        Ok(self.map.lock().unwrap().entry(key).or_insert(built).clone())
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
