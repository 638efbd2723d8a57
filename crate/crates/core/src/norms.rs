//! Tensor crossnorms, homogeneous Hölder norms of multiplicative
//! functionals, and the coordinate split used by time extension.
//!
//! Level norms come in three flavours. The Hilbert norm is the Euclidean
//! norm of the flattened block and is exact. The projective and injective
//! norms are exact at levels 1 and 2 (nuclear norm and largest singular
//! value). From level 3 on they are NP-hard, so we return one-sided bounds:
//! an upper bound for the projective norm from an explicit rank-one
//! decomposition, a lower bound for the injective norm from an explicit
//! product of unit vectors.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rough_path::MultiplicativeFunctional;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CrossnormKind {
    #[default]
    Hilbert,
    Projective,
    Injective,
}

impl std::str::FromStr for CrossnormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hilbert" => Ok(Self::Hilbert),
            "projective" => Ok(Self::Projective),
            "injective" => Ok(Self::Injective),
            other => Err(Error::Config(format!("unknown norm kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NormConfig {
    pub kind: CrossnormKind,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            kind: CrossnormKind::Hilbert,
            restarts: 32,
            seed: 0,
        }
    }
}

impl NormConfig {
    pub fn hilbert() -> Self {
        Self::default()
    }

    pub fn with_kind(kind: CrossnormKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }
}

/// Norm of a level-`k` block (`d^k` entries, `k >= 1`).
pub fn level_norm(block: &[f64], dim: usize, k: usize, cfg: &NormConfig) -> Result<f64> {
    if k == 0 {
        return Err(Error::ScalarLevel);
    }
    let expected = dim.pow(k as u32);
    if block.len() != expected {
        return Err(Error::BlockLength {
            level: k,
            expected,
            found: block.len(),
        });
    }
    let euclid = block.iter().map(|x| x * x).sum::<f64>().sqrt();
    if euclid == 0.0 {
        return Ok(0.0);
    }
    match (cfg.kind, k) {
        (CrossnormKind::Hilbert, _) | (_, 1) => Ok(euclid),
        (kind, 2) => {
            let m = DMatrix::from_row_slice(dim, dim, block);
            let sv = m.singular_values();
            Ok(match kind {
                CrossnormKind::Injective => sv.max(),
                _ => sv.sum(),
            })
        }
        (CrossnormKind::Injective, _) => Ok(injective_lower_bound(&canonical_modes(block, dim, k), dim, k, cfg)),
        (CrossnormKind::Projective, _) => Ok(projective_upper_bound(&canonical_modes(block, dim, k), dim, k, cfg)),
    }
}

/// The lexicographically smallest reordering of the tensor modes of `block`.
/// Both norms are invariant under mode permutations, so running the search
/// on this representative makes the bounds identical across each orbit.
fn canonical_modes(block: &[f64], dim: usize, k: usize) -> Vec<f64> {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for pos in 0..k {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    let mut best = block.to_vec();
    let mut digits = vec![0usize; k];
    for perm in perms(k) {
        let mut cand = vec![0.0; block.len()];
        for (idx, &c) in block.iter().enumerate() {
            let mut rest = idx;
            for p in (0..k).rev() {
                digits[p] = rest % dim;
                rest /= dim;
            }
            let target = perm.iter().fold(0, |acc, &p| acc * dim + digits[p]);
            cand[target] = c;
        }
        let smaller = cand
            .iter()
            .zip(&best)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .is_some_and(|o| o.is_lt());
        if smaller {
            best = cand;
        }
    }
    best
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// `sum_idx T[idx] prod_{j != mode} u_j[idx_j]`, one entry per letter of `mode`.
fn contract_except(block: &[f64], dim: usize, k: usize, factors: &[Vec<f64>], mode: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    let mut digits = vec![0usize; k];
    for (idx, &c) in block.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let mut rest = idx;
        for p in (0..k).rev() {
            digits[p] = rest % dim;
            rest /= dim;
        }
        let mut w = c;
        for (j, u) in factors.iter().enumerate() {
            if j != mode {
                w *= u[digits[j]];
            }
        }
        out[digits[mode]] += w;
    }
    out
}

fn multilinear_value(block: &[f64], dim: usize, k: usize, factors: &[Vec<f64>]) -> f64 {
    let partial = contract_except(block, dim, k, factors, k - 1);
    partial.iter().zip(&factors[k - 1]).map(|(a, b)| a * b).sum()
}

/// Alternating maximisation of `<T, u_1 ⊗ … ⊗ u_k>` over unit vectors.
fn best_rank_one(block: &[f64], dim: usize, k: usize, mut factors: Vec<Vec<f64>>) -> (f64, Vec<Vec<f64>>) {
    let mut value = multilinear_value(block, dim, k, &factors).abs();
    for _ in 0..500 {
        for mode in 0..k {
            let v = contract_except(block, dim, k, &factors, mode);
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n == 0.0 {
                return (value, factors);
            }
            factors[mode] = v.into_iter().map(|x| x / n).collect();
        }
        let next = multilinear_value(block, dim, k, &factors).abs();
        let done = next - value <= 1e-15 * next.max(1e-300);
        value = value.max(next);
        if done {
            break;
        }
    }
    (value, factors)
}

fn largest_entry_start(block: &[f64], dim: usize, k: usize) -> Vec<Vec<f64>> {
    let (idx, _) = block
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, &v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
    let mut rest = idx;
    let mut factors = vec![vec![0.0; dim]; k];
    for p in (0..k).rev() {
        factors[p][rest % dim] = 1.0;
        rest /= dim;
    }
    factors
}

fn injective_lower_bound(block: &[f64], dim: usize, k: usize, cfg: &NormConfig) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut best, _) = best_rank_one(block, dim, k, largest_entry_start(block, dim, k));
    for _ in 0..cfg.restarts {
        let start = (0..k).map(|_| random_unit(&mut rng, dim)).collect();
        best = best.max(best_rank_one(block, dim, k, start).0);
    }
    best
}

fn projective_upper_bound(block: &[f64], dim: usize, k: usize, cfg: &NormConfig) -> f64 {
    let l1 = |r: &[f64]| r.iter().map(|x| x.abs()).sum::<f64>();
    let mut best = l1(block);
    let scale = block.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_terms = 2 * dim.pow(k as u32 - 1);
    for restart in 0..=cfg.restarts {
        let mut residual = block.to_vec();
        let mut spent = 0.0;
        for term in 0..max_terms {
            let start = if restart == 0 && term == 0 {
                largest_entry_start(&residual, dim, k)
            } else {
                (0..k).map(|_| random_unit(&mut rng, dim)).collect()
            };
            let (_, factors) = best_rank_one(&residual, dim, k, start);
            let lambda = multilinear_value(&residual, dim, k, &factors);
            if lambda.abs() <= 1e-15 * scale {
                break;
            }
            // residual -= lambda u_1 ⊗ … ⊗ u_k
            for (idx, r) in residual.iter_mut().enumerate() {
                let mut rest = idx;
                let mut w = lambda;
                for p in (0..k).rev() {
                    w *= factors[p][rest % dim];
                    rest /= dim;
                }
                *r -= w;
            }
            spent += lambda.abs();
            best = best.min(spent + l1(&residual));
        }
    }
    best
}

/// Sum of per-level norms of `x^(1..=N)`, plus the absolute scalar part.
pub fn direct_sum_norm(x: &crate::tensor::TruncatedTensor, cfg: &NormConfig) -> Result<f64> {
    let shape = x.shape();
    let mut total = x.scalar().abs();
    for k in 1..=shape.depth() {
        total += level_norm(x.level(k), shape.dim(), k, cfg)?;
    }
    Ok(total)
}

/// Hölder exponent, horizon and the finite grid over which the supremum is taken.
#[derive(Debug, Clone, PartialEq)]
pub struct HoelderParams {
    alpha: f64,
    horizon: f64,
    grid: Vec<f64>,
}

impl HoelderParams {
    pub fn new(alpha: f64, horizon: f64, grid: Vec<f64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidHoelder(format!("alpha = {alpha} not in (0, 1]")));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidHoelder(format!("horizon = {horizon} must be positive")));
        }
        if grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidHoelder("grid must be strictly increasing".into()));
        }
        if grid[0] < 0.0 || grid[grid.len() - 1] > horizon {
            return Err(Error::InvalidHoelder("grid must lie in [0, T]".into()));
        }
        Ok(Self { alpha, horizon, grid })
    }

    /// `base` merged with the dyadic points `k T / 2^depth`.
    pub fn dyadic(alpha: f64, horizon: f64, base: &[f64], depth: usize) -> Result<Self> {
        let n = 1usize << depth;
        let mut grid: Vec<f64> = (0..=n).map(|k| horizon * k as f64 / n as f64).collect();
        grid.extend_from_slice(base);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        Self::new(alpha, horizon, grid)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
}

fn hoelder_over_grid(
    depth: usize,
    dim: usize,
    params: &HoelderParams,
    cfg: &NormConfig,
    mut row: impl FnMut(f64, &[f64]) -> Result<Vec<Vec<Vec<f64>>>>,
) -> Result<f64> {
    let grid = params.grid();
    if grid.len() < 2 {
        return Err(Error::EmptyGrid);
    }
    let mut best: f64 = 0.0;
    for (i, &u) in grid.iter().enumerate() {
        let tail = &grid[i + 1..];
        if tail.is_empty() {
            break;
        }
        let values = row(u, tail)?;
        for (&v, levels) in tail.iter().zip(values) {
            for (k, block) in levels.iter().enumerate().skip(1).take(depth) {
                let n = level_norm(block, dim, k, cfg)?;
                let ki = k as f64;
                let r = (n / (v - u).powf(ki * params.alpha)).powf(1.0 / ki);
                best = best.max(r);
            }
        }
    }
    Ok(best)
}

/// Homogeneous α-Hölder "norm" `max_i sup_{u<v} (‖x^(i)_{u,v}‖ / |v-u|^{iα})^{1/i}`
/// restricted to grid pairs.
pub fn hoelder_norm(
    x: &dyn MultiplicativeFunctional,
    params: &HoelderParams,
    cfg: &NormConfig,
) -> Result<f64> {
    let shape = x.shape();
    hoelder_over_grid(shape.depth(), shape.dim(), params, cfg, |u, tail| {
        Ok(x.eval_row(u, tail)?
            .into_iter()
            .map(|g| g.into_tensor().into_levels())
            .collect())
    })
}

/// Homogeneous α-Hölder distance built from level-wise differences.
pub fn hoelder_metric(
    x: &dyn MultiplicativeFunctional,
    y: &dyn MultiplicativeFunctional,
    params: &HoelderParams,
    cfg: &NormConfig,
) -> Result<f64> {
    let shape = x.shape();
    shape.ensure_same(&y.shape())?;
    hoelder_over_grid(shape.depth(), shape.dim(), params, cfg, |u, tail| {
        let xs = x.eval_row(u, tail)?;
        let ys = y.eval_row(u, tail)?;
        xs.into_iter()
            .zip(ys)
            .map(|(a, b)| Ok(a.tensor_sub(&b)?.into_levels()))
            .collect()
    })
}

/// Classical α-Hölder coefficient `sup ‖x_u - x_v‖ / |v-u|^α` over sample pairs,
/// Euclidean norm on values.
pub fn hoelder_coefficient(times: &[f64], values: &[Vec<f64>], alpha: f64) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..times.len() {
        for j in i + 1..times.len() {
            let dist = values[i]
                .iter()
                .zip(&values[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            best = best.max(dist / (times[j] - times[i]).abs().powf(alpha));
        }
    }
    best
}

/// Image of a level-2 block over `R ⊕ R^d` under
/// `j((t,x) ⊗ (s,y)) = (ts, ty, sx, x ⊗ y)`; coordinate 0 is time.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSplit {
    pub time_time: f64,
    /// Entries `(0, j)`: the `t·y` component.
    pub time_space: Vec<f64>,
    /// Entries `(i, 0)`: the `s·x` component.
    pub space_time: Vec<f64>,
    /// Entries `(i, j)`, row-major `d × d`.
    pub space_space: Vec<f64>,
}

impl TimeSplit {
    pub fn dim(&self) -> usize {
        self.time_space.len()
    }

    /// Inverse of [`time_extension_iso`].
    pub fn assemble(&self) -> Vec<f64> {
        let d = self.dim();
        let n = d + 1;
        let mut block = vec![0.0; n * n];
        block[0] = self.time_time;
        for j in 0..d {
            block[j + 1] = self.time_space[j];
            block[(j + 1) * n] = self.space_time[j];
        }
        for i in 0..d {
            for j in 0..d {
                block[(i + 1) * n + j + 1] = self.space_space[i * d + j];
            }
        }
        block
    }
}

pub fn time_extension_iso(block: &[f64]) -> Result<TimeSplit> {
    let n = (block.len() as f64).sqrt().round() as usize;
    if n < 2 || n * n != block.len() {
        return Err(Error::InvalidShape(format!(
            "{} entries is not a level-2 block over R^(1+d)",
            block.len()
        )));
    }
    let d = n - 1;
    let mut space_space = Vec::with_capacity(d * d);
    for i in 1..n {
        space_space.extend_from_slice(&block[i * n + 1..(i + 1) * n]);
    }
    Ok(TimeSplit {
        time_time: block[0],
        time_space: block[1..n].to_vec(),
        space_time: (1..n).map(|i| block[i * n]).collect(),
        space_space,
    })
}

/// Norms from the counterexample showing that compatible norms on `R ⊕ E`
/// need not be strongly uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub phi_norm: f64,
    #[serde(rename = "A_norm")]
    pub a_norm: f64,
    pub image_norm: f64,
}

// ⦀(t,x,y)⦀ = |t| + max(|x|,|y|)
fn ext_norm(v: [i64; 3]) -> i64 {
    v[0].abs() + v[1].abs().max(v[2].abs())
}

// ⦀A⦀₂ = |A11| + max(|A12|,|A13|) + max(|A21|,|A31|) + max(|A22|,|A23|,|A32|,|A33|)
fn ext_norm2(a: [[i64; 3]; 3]) -> i64 {
    a[0][0].abs()
        + a[0][1].abs().max(a[0][2].abs())
        + a[1][0].abs().max(a[2][0].abs())
        + a[1][1]
            .abs()
            .max(a[1][2].abs())
            .max(a[2][1].abs())
            .max(a[2][2].abs())
}

pub fn strong_uniformity_counterexample() -> CounterexampleReport {
    // φ(t,x,y) = (x+y, x-y, x-y); columns are φ(e_1), φ(e_2), φ(e_3).
    let phi = |v: [i64; 3]| [v[1] + v[2], v[1] - v[2], v[1] - v[2]];
    let cols = [phi([1, 0, 0]), phi([0, 1, 0]), phi([0, 0, 1])];

    // The unit ball of |t| + max(|x|,|y|) is the hull of (±1,0,0) and (0,±1,±1);
    // a convex function attains its maximum over it at a vertex.
    let vertices = [
        [1, 0, 0],
        [-1, 0, 0],
        [0, 1, 1],
        [0, 1, -1],
        [0, -1, 1],
        [0, -1, -1],
    ];
    let phi_norm = vertices.iter().map(|&v| ext_norm(phi(v))).max().unwrap_or(0);

    // A = e22 + e23 + e32 - e33
    let mut a = [[0i64; 3]; 3];
    a[1][1] = 1;
    a[1][2] = 1;
    a[2][1] = 1;
    a[2][2] = -1;

    // (φ⊗φ)A = sum_ij A_ij φ(e_i) φ(e_j)^T
    let mut image = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            if a[i][j] == 0 {
                continue;
            }
            for r in 0..3 {
                for c in 0..3 {
                    image[r][c] += a[i][j] * cols[i][r] * cols[j][c];
                }
            }
        }
    }

    CounterexampleReport {
        phi_norm: phi_norm as f64,
        a_norm: ext_norm2(a) as f64,
        image_norm: ext_norm2(image) as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rough_path::{ExactSignature, PiecewiseLinearPath};
    use crate::tensor::{Permutation, TensorShape, TruncatedTensor};
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn outer(vs: &[&[f64]]) -> Vec<f64> {
        vs.iter().fold(vec![1.0], |acc, v| {
            acc.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
        })
    }

    fn random_block(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn rank_one_blocks_are_multiplicative_for_all_kinds() {
        let v = [0.3, -1.1, 0.7];
        let w = [2.0, 0.5, -0.25];
        let u = [-0.6, 0.1, 0.9];
        let nv = 1.3379088160259651_f64; // ‖v‖
        let nw = (4.0f64 + 0.25 + 0.0625).sqrt();
        let nu = (0.36f64 + 0.01 + 0.81).sqrt();
        assert_abs_diff_eq!(nv, (0.09f64 + 1.21 + 0.49).sqrt(), epsilon = 1e-15);
        for kind in [CrossnormKind::Hilbert, CrossnormKind::Projective, CrossnormKind::Injective] {
            let cfg = NormConfig::with_kind(kind);
            let two = level_norm(&outer(&[&v, &w]), 3, 2, &cfg).unwrap();
            assert_abs_diff_eq!(two, nv * nw, epsilon = 1e-12);
            let three = level_norm(&outer(&[&v, &w, &u]), 3, 3, &cfg).unwrap();
            assert_abs_diff_eq!(three, nv * nw * nu, epsilon = 1e-10);
        }
    }

    #[test]
    fn strong_crossnorm_across_levels() {
        let x1 = outer(&[&[0.5, 1.0], &[-2.0, 0.25]]);
        let x2 = [0.75, -0.5];
        let cfg = NormConfig::hilbert();
        let joint = outer(&[&x1, &x2]);
        let lhs = level_norm(&joint, 2, 3, &cfg).unwrap();
        let rhs = level_norm(&x1, 2, 2, &cfg).unwrap() * level_norm(&x2, 2, 1, &cfg).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-14);
    }

    #[test]
    fn zero_and_scalar_blocks() {
        let cfg = NormConfig::with_kind(CrossnormKind::Projective);
        assert_eq!(level_norm(&[0.0; 8], 2, 3, &cfg).unwrap(), 0.0);
        assert!(matches!(level_norm(&[1.0], 2, 0, &cfg), Err(Error::ScalarLevel)));
    }

    #[test]
    fn antisymmetric_block() {
        let block = [0.0, 1.0, -1.0, 0.0];
        let h = level_norm(&block, 2, 2, &NormConfig::hilbert()).unwrap();
        assert_abs_diff_eq!(h, 2f64.sqrt(), epsilon = 1e-15);
        let i = level_norm(&block, 2, 2, &NormConfig::with_kind(CrossnormKind::Injective)).unwrap();
        assert_abs_diff_eq!(i, 1.0, epsilon = 1e-14);
        let p = level_norm(&block, 2, 2, &NormConfig::with_kind(CrossnormKind::Projective)).unwrap();
        assert_abs_diff_eq!(p, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn bounds_are_ordered_and_permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let inj = NormConfig::with_kind(CrossnormKind::Injective);
        let proj = NormConfig::with_kind(CrossnormKind::Projective);
        let hil = NormConfig::hilbert();
        for (dim, k) in [(2usize, 2usize), (3, 2), (2, 3), (3, 3), (2, 4)] {
            for _ in 0..4 {
                let block = random_block(&mut rng, dim.pow(k as u32));
                let i = level_norm(&block, dim, k, &inj).unwrap();
                let h = level_norm(&block, dim, k, &hil).unwrap();
                let p = level_norm(&block, dim, k, &proj).unwrap();
                assert!(i <= h + 1e-12 && h <= p + 1e-12, "{i} {h} {p}");

                let sigma = Permutation::new((0..k).rev().collect()).unwrap();
                let permuted = crate::tensor::permute_block(&block, dim, &sigma);
                let hp = level_norm(&permuted, dim, k, &hil).unwrap();
                assert_abs_diff_eq!(h, hp, epsilon = 1e-15);
                let ip = level_norm(&permuted, dim, k, &inj).unwrap();
                assert_abs_diff_eq!(i, ip, epsilon = 1e-6);
                if k == 2 {
                    let pp = level_norm(&permuted, dim, k, &proj).unwrap();
                    assert_abs_diff_eq!(p, pp, epsilon = 1e-6);
                }
            }
        }
    }

    fn linear_path(v: &[f64]) -> Arc<PiecewiseLinearPath> {
        Arc::new(PiecewiseLinearPath::new(vec![0.0, 1.0], vec![vec![0.0; v.len()], v.to_vec()]).unwrap())
    }

    #[test]
    fn hoelder_norm_of_constant_and_linear_paths() {
        let shape_depth = 1;
        let params = HoelderParams::dyadic(0.5, 1.0, &[], 4).unwrap();
        let constant = ExactSignature::new(
            Arc::new(PiecewiseLinearPath::new(vec![0.0, 1.0], vec![vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap()),
            2,
        );
        assert_eq!(hoelder_norm(&constant, &params, &NormConfig::hilbert()).unwrap(), 0.0);

        let v = [3.0, 4.0];
        let x = ExactSignature::new(linear_path(&v), shape_depth);
        let n = hoelder_norm(&x, &params, &NormConfig::hilbert()).unwrap();
        assert_abs_diff_eq!(n, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn refining_the_grid_never_decreases_the_norm() {
        let path = Arc::new(
            PiecewiseLinearPath::new(
                vec![0.0, 0.3, 0.55, 1.0],
                vec![vec![0.0, 0.0], vec![1.0, -0.5], vec![0.2, 0.4], vec![-0.3, 1.0]],
            )
            .unwrap(),
        );
        let x = ExactSignature::new(path.clone(), 3);
        let cfg = NormConfig::hilbert();
        let mut last = 0.0;
        for depth in 0..5 {
            let params = HoelderParams::dyadic(0.4, 1.0, path.times(), depth).unwrap();
            let n = hoelder_norm(&x, &params, &cfg).unwrap();
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn hoelder_params_validation() {
        assert!(HoelderParams::new(0.0, 1.0, vec![0.0, 1.0]).is_err());
        assert!(HoelderParams::new(1.5, 1.0, vec![0.0, 1.0]).is_err());
        assert!(matches!(HoelderParams::new(0.5, 1.0, vec![]), Err(Error::EmptyGrid)));
        assert!(HoelderParams::new(0.5, 1.0, vec![0.0, 0.0]).is_err());
        assert!(HoelderParams::new(0.5, 1.0, vec![0.0, 2.0]).is_err());
    }

    #[test]
    fn metric_properties() {
        let a = ExactSignature::new(
            Arc::new(
                PiecewiseLinearPath::new(vec![0.0, 0.5, 1.0], vec![vec![0.0, 0.0], vec![1.0, 0.3], vec![0.4, -0.2]])
                    .unwrap(),
            ),
            2,
        );
        let b = ExactSignature::new(
            Arc::new(
                PiecewiseLinearPath::new(vec![0.0, 0.25, 1.0], vec![vec![0.0, 0.0], vec![-0.5, 0.6], vec![0.1, 0.9]])
                    .unwrap(),
            ),
            2,
        );
        let params = HoelderParams::dyadic(0.45, 1.0, &[0.25, 0.5], 3).unwrap();
        let cfg = NormConfig::hilbert();
        assert_eq!(hoelder_metric(&a, &a, &params, &cfg).unwrap(), 0.0);
        let ab = hoelder_metric(&a, &b, &params, &cfg).unwrap();
        let ba = hoelder_metric(&b, &a, &params, &cfg).unwrap();
        assert_abs_diff_eq!(ab, ba, epsilon = 1e-14);
        assert!(ab > 0.0);

        let c = ExactSignature::new(a.path().clone(), 1);
        let e = ExactSignature::new(b.path().clone(), 1);
        let level1 = hoelder_metric(&c, &e, &params, &cfg).unwrap();
        // classical Hölder coefficient of the difference path on the same grid
        let grid = params.grid();
        let diff: Vec<Vec<f64>> = grid
            .iter()
            .map(|&t| {
                let (p, q) = (c.path().value_at(t).unwrap(), e.path().value_at(t).unwrap());
                p.iter().zip(&q).map(|(x, y)| x - y).collect()
            })
            .collect();
        assert_abs_diff_eq!(level1, hoelder_coefficient(grid, &diff, 0.45), epsilon = 1e-12);
    }

    #[test]
    fn time_split_examples() {
        let split = time_extension_iso(&outer(&[&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]])).unwrap();
        assert_eq!(split.time_time, 1.0);
        assert!(split.time_space.iter().chain(&split.space_time).chain(&split.space_space).all(|&x| x == 0.0));

        let (v, w) = ([2.0, -1.0], [0.5, 3.0]);
        let block = outer(&[&[0.0, v[0], v[1]], &[0.0, w[0], w[1]]]);
        let split = time_extension_iso(&block).unwrap();
        assert_eq!(split.time_time, 0.0);
        assert_eq!(split.time_space, vec![0.0, 0.0]);
        assert_eq!(split.space_time, vec![0.0, 0.0]);
        assert_eq!(split.space_space, outer(&[&v, &w]));

        // (t,x) ⊗ (s,y) ↦ (ts, ty, sx, x⊗y)
        let (t, x, s, y) = (2.0, [1.0, -1.0], 3.0, [0.5, 0.25]);
        let block = outer(&[&[t, x[0], x[1]], &[s, y[0], y[1]]]);
        let split = time_extension_iso(&block).unwrap();
        assert_eq!(split.time_time, t * s);
        assert_eq!(split.time_space, vec![t * y[0], t * y[1]]);
        assert_eq!(split.space_time, vec![s * x[0], s * x[1]]);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 1..5 {
            let block = random_block(&mut rng, (d + 1) * (d + 1));
            let back = time_extension_iso(&block).unwrap().assemble();
            assert_eq!(back, block);
        }
        assert!(time_extension_iso(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn counterexample_values() {
        let r = strong_uniformity_counterexample();
        assert_eq!(r.phi_norm, 2.0);
        assert_eq!(r.a_norm, 1.0);
        assert_eq!(r.image_norm, 8.0);
        // not strongly uniform: ‖φ⊗φ‖ ≥ 8 > ‖φ‖² = 4
        assert!(r.image_norm / r.a_norm > r.phi_norm * r.phi_norm);
    }

    #[test]
    fn direct_sum_norm_sums_levels() {
        let shape = TensorShape::new(2, 2).unwrap();
        let t = TruncatedTensor::from_levels(shape, vec![vec![-2.0], vec![3.0, 4.0], vec![0.0, 1.0, -1.0, 0.0]]).unwrap();
        let n = direct_sum_norm(&t, &NormConfig::with_kind(CrossnormKind::Injective)).unwrap();
        assert_abs_diff_eq!(n, 2.0 + 5.0 + 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(t.hilbert_norm(), 2.0 + 5.0 + 2f64.sqrt(), epsilon = 1e-14);
    }
}
