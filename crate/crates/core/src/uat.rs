//! Linear regression on signature features of time-extended paths.
//!
//! Each path in a seeded, bounded family is augmented with running time and
//! summarised by its truncated signature over `[0,T]`. A continuous target is
//! then approximated by a linear functional of those features, fitted by
//! least squares, and the uniform error on held-out paths is reported per
//! truncation level.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{hoelder_norm, HoelderParams, NormConfig};
use crate::rough_path::{signature_pl, time_extend, PiecewiseLinearPath};
use crate::tensor::TensorShape;
use crate::words::{LinearFunctional, Word};

/// Dyadic refinement used when measuring family members' Hölder norms.
const MEMBERSHIP_GRID_DEPTH: usize = 3;

fn default_alpha() -> f64 {
    0.4
}

/// Seeded description of a family of piecewise linear paths in `R^d`.
///
/// Paths start at the origin and take `segments` equally spaced Gaussian
/// steps with standard deviation `amplitude * sqrt(T / segments)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFamilySpec {
    pub count: usize,
    pub d: usize,
    pub segments: usize,
    pub amplitude: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub seed: u64,
    /// Bound on the Hölder norm of the time-extended members.
    #[serde(rename = "R", default)]
    pub bound: Option<f64>,
    /// Hölder exponent used for the membership bound.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

impl PathFamilySpec {
    fn validate(&self) -> Result<()> {
        if self.count == 0 || self.d == 0 || self.segments == 0 {
            return Err(Error::Config("count, d and segments must be positive".into()));
        }
        if !(self.horizon > 0.0) || !(self.amplitude >= 0.0) {
            return Err(Error::Config("T must be positive and amplitude nonnegative".into()));
        }
        if !(self.alpha > 1.0 / 3.0 && self.alpha <= 0.5) {
            return Err(Error::Config(format!("alpha = {} must lie in (1/3, 1/2]", self.alpha)));
        }
        if self.bound.is_some_and(|r| !(r > 0.0)) {
            return Err(Error::Config("R must be positive".into()));
        }
        Ok(())
    }
}

/// Hölder norm of the level-2 time extension of `path`.
pub fn family_norm(path: &Arc<PiecewiseLinearPath>, alpha: f64) -> Result<f64> {
    let ext = time_extend(path.clone(), 2)?;
    let params = HoelderParams::dyadic(alpha, path.horizon(), path.times(), MEMBERSHIP_GRID_DEPTH)?;
    hoelder_norm(&ext, &params, &NormConfig::hilbert())
}

/// Realised members of a [`PathFamilySpec`].
#[derive(Debug, Clone)]
pub struct PathFamily {
    spec: PathFamilySpec,
    paths: Vec<Arc<PiecewiseLinearPath>>,
    norms: Vec<f64>,
    rejected: usize,
}

impl PathFamily {
    /// Draws members until `count` of them satisfy the norm bound.
    pub fn generate(spec: &PathFamilySpec) -> Result<Self> {
        spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let h = spec.horizon / spec.segments as f64;
        let sd = spec.amplitude * h.sqrt();
        let times: Vec<f64> = (0..=spec.segments)
            .map(|k| if k == spec.segments { spec.horizon } else { k as f64 * h })
            .collect();
        let max_attempts = 100 * spec.count;
        let mut paths = Vec::with_capacity(spec.count);
        let mut norms = Vec::with_capacity(spec.count);
        let mut rejected = 0;
        while paths.len() < spec.count {
            if paths.len() + rejected >= max_attempts {
                return Err(Error::Config(format!(
                    "only {} of {} draws satisfied the bound R",
                    paths.len(),
                    max_attempts
                )));
            }
            let mut points = vec![vec![0.0; spec.d]];
            for _ in 0..spec.segments {
                let last = points.last().unwrap();
                let next: Vec<f64> = last
                    .iter()
                    .map(|x| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        x + sd * z
                    })
                    .collect();
                points.push(next);
            }
            let path = Arc::new(PiecewiseLinearPath::new(times.clone(), points)?);
            let norm = family_norm(&path, spec.alpha)?;
            if spec.bound.is_some_and(|r| norm > r) {
                rejected += 1;
                continue;
            }
            paths.push(path);
            norms.push(norm);
        }
        Ok(Self {
            spec: spec.clone(),
            paths,
            norms,
            rejected,
        })
    }

    /// Wraps given paths, rejecting any whose norm exceeds `bound`.
    pub fn from_paths(spec: PathFamilySpec, paths: Vec<Arc<PiecewiseLinearPath>>) -> Result<Self> {
        let mut norms = Vec::with_capacity(paths.len());
        for (index, p) in paths.iter().enumerate() {
            let norm = family_norm(p, spec.alpha)?;
            if let Some(bound) = spec.bound.filter(|&r| norm > r) {
                return Err(Error::OutsideFamily { index, norm, bound });
            }
            norms.push(norm);
        }
        Ok(Self {
            spec,
            paths,
            norms,
            rejected: 0,
        })
    }

    /// Checks that `path` lies in the bounded set the family was drawn from.
    pub fn admit(&self, index: usize, path: &Arc<PiecewiseLinearPath>) -> Result<f64> {
        let norm = family_norm(path, self.spec.alpha)?;
        match self.spec.bound {
            Some(bound) if norm > bound => Err(Error::OutsideFamily { index, norm, bound }),
            _ => Ok(norm),
        }
    }

    pub fn spec(&self) -> &PathFamilySpec {
        &self.spec
    }

    pub fn paths(&self) -> &[Arc<PiecewiseLinearPath>] {
        &self.paths
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn rejected(&self) -> usize {
        self.rejected
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Functions of a path to be approximated.
#[derive(Clone)]
pub enum TargetFunctional {
    /// `<S(x̂), w>²`; linear in the signature at level `2|w|`.
    ShuffleSquare(Word),
    /// `sin(<x̂_T - x̂_0, φ>)` on the time-extended increment `(T, x_T - x_0)`.
    SmoothOfIncrement(Vec<f64>),
    /// `<S(x̂), w>`.
    TerminalCoordinate(Word),
    /// Euclidean norm of level `k` of the signature of `x` itself. Continuous
    /// in the rough path norm but not in the weak-* sense; a negative control.
    LevelNorm(usize),
    Custom(Arc<dyn Fn(&PiecewiseLinearPath) -> Result<f64> + Send + Sync>),
}

impl std::fmt::Debug for TargetFunctional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::ShuffleSquare(w) => write!(f, "ShuffleSquare({w})"),
            Self::SmoothOfIncrement(phi) => write!(f, "SmoothOfIncrement({phi:?})"),
            Self::TerminalCoordinate(w) => write!(f, "TerminalCoordinate({w})"),
            Self::LevelNorm(k) => write!(f, "LevelNorm({k})"),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Serializable target description; words use the time-extended alphabet
/// where letter 1 is time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum TargetSpec {
    ShuffleSquare { word: Vec<usize> },
    SmoothOfIncrement { phi: Vec<f64> },
    TerminalCoordinate { word: Vec<usize> },
    LevelNorm { level: usize },
}

impl From<&TargetSpec> for TargetFunctional {
    fn from(spec: &TargetSpec) -> Self {
        match spec {
            TargetSpec::ShuffleSquare { word } => Self::ShuffleSquare(Word::new(word.clone())),
            TargetSpec::SmoothOfIncrement { phi } => Self::SmoothOfIncrement(phi.clone()),
            TargetSpec::TerminalCoordinate { word } => Self::TerminalCoordinate(Word::new(word.clone())),
            TargetSpec::LevelNorm { level } => Self::LevelNorm(*level),
        }
    }
}

fn terminal_coordinate(path: &PiecewiseLinearPath, word: &Word) -> Result<f64> {
    let aug = path.time_augmented();
    let depth = word.len().max(1);
    word.validate(TensorShape::new(aug.dim(), depth)?)?;
    let sig = signature_pl(&aug, depth, 0.0, aug.horizon())?;
    sig.coordinate(word)
}

impl TargetFunctional {
    pub fn evaluate(&self, path: &PiecewiseLinearPath) -> Result<f64> {
        match self {
            Self::ShuffleSquare(w) => Ok(terminal_coordinate(path, w)?.powi(2)),
            Self::TerminalCoordinate(w) => terminal_coordinate(path, w),
            Self::SmoothOfIncrement(phi) => {
                if phi.len() != path.dim() + 1 {
                    return Err(Error::DimensionMismatch {
                        expected: path.dim() + 1,
                        found: phi.len(),
                    });
                }
                let start = &path.points()[0];
                let end = path.points().last().unwrap();
                let space: f64 = end.iter().zip(start).zip(&phi[1..]).map(|((b, a), p)| (b - a) * p).sum();
                Ok((phi[0] * path.horizon() + space).sin())
            }
            Self::LevelNorm(k) => {
                let sig = signature_pl(path, (*k).max(1), 0.0, path.horizon())?;
                Ok(sig.level(*k).iter().map(|x| x * x).sum::<f64>().sqrt())
            }
            Self::Custom(f) => f(path),
        }
    }
}

/// Signature coordinates `<S(x̂)_{0,T}, w>` for every word up to a level,
/// one row per path, columns in storage order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    shape: TensorShape,
    words: Vec<Word>,
    rows: Vec<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, word: &Word) -> Option<Vec<f64>> {
        let j = self.words.iter().position(|w| w == word)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Largest absolute entry per column; level-k columns shrink like 1/k!.
    pub fn column_scales(&self) -> Vec<f64> {
        (0..self.words.len())
            .map(|j| self.rows.iter().map(|r| r[j].abs()).fold(0.0, f64::max))
            .collect()
    }

    fn select(&self, idx: &[usize]) -> Self {
        Self {
            shape: self.shape,
            words: self.words.clone(),
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

/// Features of the time-extended members of `paths` at truncation `level`.
pub fn build_features(paths: &[Arc<PiecewiseLinearPath>], level: usize) -> Result<FeatureMatrix> {
    let dim = paths
        .first()
        .map(|p| p.dim() + 1)
        .ok_or_else(|| Error::Config("no paths".into()))?;
    let shape = TensorShape::new(dim, level)?;
    let rows = paths
        .par_iter()
        .map(|p| {
            if p.dim() + 1 != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim - 1,
                    found: p.dim(),
                });
            }
            let aug = p.time_augmented();
            let sig = signature_pl(&aug, level, 0.0, aug.horizon())?;
            Ok(sig.levels().concat())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureMatrix {
        shape,
        words: Word::all(shape),
        rows,
    })
}

/// Conditioning of a least-squares solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveDiagnostics {
    pub rank: usize,
    pub n_features: usize,
    pub largest_singular_value: f64,
    /// Smallest singular value kept in the solve.
    pub smallest_kept_singular_value: f64,
}

impl SolveDiagnostics {
    pub fn rank_deficient(&self) -> bool {
        self.rank < self.n_features
    }

    pub fn condition(&self) -> f64 {
        self.largest_singular_value / self.smallest_kept_singular_value
    }
}

/// Minimum-norm minimiser of `Σ (<l, S(x_i)> - y_i)² + λ ‖l‖²`.
///
/// Solved by SVD on the system stacked with `√λ I`; rank deficiency shows up in
/// the diagnostics rather than as an error.
pub fn fit_linear_functional(
    features: &FeatureMatrix,
    targets: &[f64],
    ridge: f64,
) -> Result<(LinearFunctional, SolveDiagnostics)> {
    let n_rows = features.rows.len();
    if n_rows == 0 {
        return Err(Error::Config("no training rows".into()));
    }
    if targets.len() != n_rows {
        return Err(Error::DimensionMismatch {
            expected: n_rows,
            found: targets.len(),
        });
    }
    if !(ridge >= 0.0) {
        return Err(Error::Config("ridge must be nonnegative".into()));
    }
    let n = features.words.len();
    let extra = if ridge > 0.0 { n } else { 0 };
    let sqrt_ridge = ridge.sqrt();
    let a = DMatrix::from_fn(n_rows + extra, n, |i, j| {
        if i < n_rows {
            features.rows[i][j]
        } else if i - n_rows == j {
            sqrt_ridge
        } else {
            0.0
        }
    });
    let b = DVector::from_fn(n_rows + extra, |i, _| if i < n_rows { targets[i] } else { 0.0 });
    let svd = a.svd(true, true);
    let largest = svd.singular_values.max();
    let cutoff = largest * (n_rows + extra).max(n) as f64 * f64::EPSILON;
    let kept: Vec<f64> = svd.singular_values.iter().copied().filter(|&s| s > cutoff).collect();
    let coeffs = svd
        .solve(&b, cutoff)
        .map_err(|e| Error::Config(format!("least-squares solve failed: {e}")))?;
    let functional = LinearFunctional::from_terms(
        features.shape,
        features
            .words
            .iter()
            .cloned()
            .zip(coeffs.iter().copied())
            .filter(|(_, c)| *c != 0.0),
    )?;
    let diag = SolveDiagnostics {
        rank: kept.len(),
        n_features: n,
        largest_singular_value: largest,
        smallest_kept_singular_value: kept.iter().copied().fold(f64::INFINITY, f64::min),
    };
    Ok((functional, diag))
}

/// Predictions `<l, S(x_i)>` for each feature row.
pub fn predict(features: &FeatureMatrix, l: &LinearFunctional) -> Vec<f64> {
    let coeffs: Vec<f64> = features.words.iter().map(|w| l.coeff(w)).collect();
    features
        .rows
        .iter()
        .map(|r| r.iter().zip(&coeffs).map(|(x, c)| x * c).sum())
        .collect()
}

fn sup_error(pred: &[f64], target: &[f64]) -> f64 {
    pred.iter().zip(target).map(|(p, t)| (p - t).abs()).fold(0.0, f64::max)
}

/// One truncation level of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub level: usize,
    pub train_sup_err: f64,
    pub test_sup_err: f64,
    pub n_features: usize,
    pub diagnostics: SolveDiagnostics,
    pub seconds: f64,
}

/// Errors per truncation level plus the fitted functionals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub rows: Vec<FitRow>,
    pub functionals: Vec<LinearFunctional>,
    pub n_train: usize,
    pub n_test: usize,
    /// The family's norm bound, if any, and the largest member norm.
    pub bound: Option<f64>,
    pub max_member_norm: f64,
    pub rejected: usize,
}

impl FitReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,train_sup_err,test_sup_err,n_features,seconds\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:e},{:e},{},{:.6}",
                r.level, r.train_sup_err, r.test_sup_err, r.n_features, r.seconds
            );
        }
        out
    }

    /// The report with timings zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        r.rows.iter_mut().for_each(|row| row.seconds = 0.0);
        r
    }
}

/// Sweep settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub levels: Vec<usize>,
    /// Fraction of the family held out for testing.
    pub holdout: f64,
    #[serde(default)]
    pub ridge: f64,
    /// Seed for the train/test split.
    #[serde(default)]
    pub seed: u64,
}

/// Fits the target at each level and measures errors on held-out members.
/// With no held-out members the test error is the training error.
pub fn uat_sweep(family: &PathFamily, target: &TargetFunctional, sweep: &SweepSpec) -> Result<FitReport> {
    if sweep.levels.is_empty() {
        return Err(Error::Config("no levels to sweep".into()));
    }
    if !(0.0..1.0).contains(&sweep.holdout) {
        return Err(Error::Config(format!("holdout {} not in [0,1)", sweep.holdout)));
    }
    let n = family.len();
    let n_test = ((n as f64) * sweep.holdout).round() as usize;
    let n_test = n_test.min(n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(sweep.seed));
    let (test_idx, train_idx) = order.split_at(n_test);

    let targets = family
        .paths()
        .par_iter()
        .map(|p| target.evaluate(p))
        .collect::<Result<Vec<f64>>>()?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| targets[i]).collect::<Vec<f64>>();
    let (train_y, test_y) = (pick(train_idx), pick(test_idx));

    let results = sweep
        .levels
        .par_iter()
        .map(|&level| {
            let start = Instant::now();
            let features = build_features(family.paths(), level)?;
            let train = features.select(train_idx);
            let (l, diagnostics) = fit_linear_functional(&train, &train_y, sweep.ridge)?;
            let train_sup_err = sup_error(&predict(&train, &l), &train_y);
            let test_sup_err = if test_idx.is_empty() {
                train_sup_err
            } else {
                sup_error(&predict(&features.select(test_idx), &l), &test_y)
            };
            let row = FitRow {
                level,
                train_sup_err,
                test_sup_err,
                n_features: features.words.len(),
                diagnostics,
                seconds: start.elapsed().as_secs_f64(),
            };
            Ok((row, l))
        })
        .collect::<Result<Vec<_>>>()?;
    let (rows, functionals) = results.into_iter().unzip();
    Ok(FitReport {
        rows,
        functionals,
        n_train: train_idx.len(),
        n_test,
        bound: family.spec().bound,
        max_member_norm: family.norms().iter().copied().fold(0.0, f64::max),
        rejected: family.rejected(),
    })
}

/// Experiment file: `[family]`, `[target]` and `[sweep]` tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: PathFamilySpec,
    pub target: TargetSpec,
    pub sweep: SweepSpec,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn run(&self) -> Result<FitReport> {
        let family = PathFamily::generate(&self.family)?;
        uat_sweep(&family, &TargetFunctional::from(&self.target), &self.sweep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(count: usize, seed: u64) -> PathFamilySpec {
        PathFamilySpec {
            count,
            d: 2,
            segments: 6,
            amplitude: 1.0,
            horizon: 1.0,
            seed,
            bound: Some(20.0),
            alpha: 0.4,
        }
    }

    #[test]
    fn family_is_seeded_and_bounded() {
        let a = PathFamily::generate(&spec(10, 3)).unwrap();
        let b = PathFamily::generate(&spec(10, 3)).unwrap();
        assert_eq!(a.paths(), b.paths());
        assert!(a.norms().iter().all(|&n| n <= 20.0));
        let tight = PathFamilySpec {
            bound: Some(1.5),
            ..spec(5, 3)
        };
        let t = PathFamily::generate(&tight).unwrap();
        assert!(t.rejected() > 0);
        let err = PathFamily::from_paths(tight.clone(), a.paths().to_vec());
        assert!(matches!(err, Err(Error::OutsideFamily { .. })));
    }

    #[test]
    fn feature_columns() {
        let fam = PathFamily::generate(&spec(8, 1)).unwrap();
        let f = build_features(fam.paths(), 3).unwrap();
        assert_eq!(f.words().len(), 1 + 3 + 9 + 27);
        assert!(f.column(&Word::empty()).unwrap().iter().all(|&x| x == 1.0));
        for x in f.column(&Word::letter(1)).unwrap() {
            assert_abs_diff_eq!(x, 1.0, epsilon = 1e-15);
        }
        // shuffle closure on the feature columns
        let (u, v) = (Word::new(vec![2]), Word::new(vec![1, 3]));
        let cu = f.column(&u).unwrap();
        let cv = f.column(&v).unwrap();
        let sh = crate::words::shuffle_words(&u, &v);
        for (i, row) in f.rows().iter().enumerate() {
            let rhs: f64 = sh.iter().map(|(w, c)| c * row[f.words().iter().position(|x| x == w).unwrap()]).sum();
            assert_abs_diff_eq!(cu[i] * cv[i], rhs, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_target_fits_zero_functional() {
        let fam = PathFamily::generate(&spec(12, 2)).unwrap();
        let f = build_features(fam.paths(), 2).unwrap();
        let (l, _) = fit_linear_functional(&f, &vec![0.0; 12], 0.0).unwrap();
        assert!(l.terms().is_empty());
    }

    #[test]
    fn existing_column_is_recovered() {
        let fam = PathFamily::generate(&spec(60, 4)).unwrap();
        let w = Word::new(vec![2, 3]);
        let target = TargetFunctional::TerminalCoordinate(w);
        let report = uat_sweep(
            &fam,
            &target,
            &SweepSpec {
                levels: vec![2, 3],
                holdout: 0.25,
                ridge: 0.0,
                seed: 0,
            },
        )
        .unwrap();
        for r in &report.rows {
            assert!(r.test_sup_err <= 1e-8, "{r:?}");
        }
    }

    #[test]
    fn single_path_interpolates() {
        let fam = PathFamily::generate(&spec(1, 5)).unwrap();
        let target = TargetFunctional::SmoothOfIncrement(vec![0.3, 1.0, -2.0]);
        let report = uat_sweep(
            &fam,
            &target,
            &SweepSpec {
                levels: vec![0, 1, 2, 3],
                holdout: 0.3,
                ridge: 0.0,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(report.n_test, 0);
        for r in &report.rows {
            assert!(r.test_sup_err <= 1e-14, "{r:?}");
        }
    }

    #[test]
    fn ridge_shrinks_coefficients() {
        let fam = PathFamily::generate(&spec(30, 6)).unwrap();
        let f = build_features(fam.paths(), 2).unwrap();
        let y: Vec<f64> = fam
            .paths()
            .iter()
            .map(|p| TargetFunctional::SmoothOfIncrement(vec![0.3, 1.0, 0.5]).evaluate(p).unwrap())
            .collect();
        let norm = |l: &LinearFunctional| l.terms().values().map(|c| c * c).sum::<f64>();
        let (plain, _) = fit_linear_functional(&f, &y, 0.0).unwrap();
        let (ridged, _) = fit_linear_functional(&f, &y, 1.0).unwrap();
        assert!(norm(&ridged) < norm(&plain));
    }

    #[test]
    fn config_round_trip() {
        let text = r#"
[family]
count = 20
d = 2
segments = 4
amplitude = 0.8
T = 1.0
seed = 9
R = 30.0

[target]
kind = "shuffle_square"
params = { word = [2] }

[sweep]
levels = [1, 2]
holdout = 0.25
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.target, TargetSpec::ShuffleSquare { word: vec![2] });
        assert_eq!(cfg.family.alpha, 0.4);
        let r = cfg.run().unwrap();
        assert!(r.rows[1].test_sup_err <= 1e-8);
        assert!(ExperimentConfig::from_toml("[family]\ncount = 1\n").is_err());
        assert!(r.to_csv().starts_with("level,train_sup_err,test_sup_err,n_features,seconds\n1,"));
    }
}
