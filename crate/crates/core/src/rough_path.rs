//! Paths, multiplicative functionals and their signatures.
//!
//! A piecewise linear path has a closed-form signature: on each linear piece
//! the signature is `exp` of the increment, and pieces are glued with Chen's
//! relation `x_{s,t} = x_{s,u} ⊗ x_{u,t}`. That exact value is the oracle for
//! the Lyons lift, which builds higher levels as a limit of partition
//! products of the lower-level functional padded with a zero top level.

use std::io::Read;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::{self, HoelderParams, NormConfig, TimeSplit};
use crate::tensor::{GroupElement, TensorShape, TruncatedTensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ExactPl,
    PureArea,
    Lifted,
    Custom,
}

/// A two-parameter map `(s,t) ↦ x_{s,t} ∈ T_1^(N)` satisfying Chen's relation.
pub trait MultiplicativeFunctional: Send + Sync {
    fn shape(&self) -> TensorShape;

    fn horizon(&self) -> f64;

    fn provenance(&self) -> Provenance;

    fn eval(&self, s: f64, t: f64) -> Result<GroupElement>;

    /// Times at which the functional is not smooth; partitions snap to them.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// `x_{s,t}` for each `t` in `ts`.
    fn eval_row(&self, s: f64, ts: &[f64]) -> Result<Vec<GroupElement>> {
        ts.iter().map(|&t| self.eval(s, t)).collect()
    }
}

fn check_time(t: f64, horizon: f64) -> Result<()> {
    if !(0.0..=horizon).contains(&t) {
        return Err(Error::TimeOutOfRange { time: t, horizon });
    }
    Ok(())
}

/// Ordered samples `(t_i, x_i)` joined by straight lines.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearPath {
    times: Vec<f64>,
    points: Vec<Vec<f64>>,
}

impl PiecewiseLinearPath {
    pub fn new(times: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidPath("need at least two samples".into()));
        }
        if times.len() != points.len() {
            return Err(Error::InvalidPath(format!(
                "{} times but {} points",
                times.len(),
                points.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidPath(format!("first time is {}, expected 0", times[0])));
        }
        if let Some(i) = times.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPath(format!("times not strictly increasing at sample {}", i + 1)));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidPath("points must have at least one coordinate".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidPath(format!("sample {i} has {} coordinates, expected {dim}", p.len())));
            }
            if p.iter().chain(std::iter::once(&times[i])).any(|x| !x.is_finite()) {
                return Err(Error::InvalidPath(format!("sample {i} is not finite")));
            }
        }
        Ok(Self { times, points })
    }

    /// Reads `t,x1,...,xd` CSV with a header row.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr
            .headers()
            .map_err(|e| Error::Parse {
                location: "header".into(),
                message: e.to_string(),
            })?
            .clone();
        let dim = header.len().saturating_sub(1);
        let expected: Vec<String> = std::iter::once("t".to_string())
            .chain((1..=dim).map(|i| format!("x{i}")))
            .collect();
        if dim == 0 || header.iter().ne(expected.iter().map(String::as_str)) {
            return Err(Error::Parse {
                location: "header".into(),
                message: format!("expected \"{}\"", expected.join(",")),
            });
        }
        let mut times = Vec::new();
        let mut points = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Parse {
                location: e
                    .position()
                    .map(|p| format!("line {}", p.line()))
                    .unwrap_or_else(|| "unknown line".into()),
                message: e.to_string(),
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let location = format!("line {line}");
            let values: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
            let values = values.map_err(|e| Error::Parse {
                location: location.clone(),
                message: e.to_string(),
            })?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse {
                    location,
                    message: "non-finite value".into(),
                });
            }
            if let Some(&prev) = times.last() {
                if values[0] <= prev {
                    return Err(Error::Parse {
                        location,
                        message: format!("time {} does not increase past {prev}", values[0]),
                    });
                }
            }
            times.push(values[0]);
            points.push(values[1..].to_vec());
        }
        Self::new(times, points).map_err(|e| Error::Parse {
            location: "file".into(),
            message: e.to_string(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 1..=self.dim() {
            out.push_str(&format!(",x{i}"));
        }
        out.push('\n');
        for (t, p) in self.times.iter().zip(&self.points) {
            out.push_str(&t.to_string());
            for x in p {
                out.push(',');
                out.push_str(&x.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn horizon(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn value_at(&self, t: f64) -> Result<Vec<f64>> {
        check_time(t, self.horizon())?;
        let i = self.segment_index(t);
        let (a, b) = (self.times[i], self.times[i + 1]);
        let w = (t - a) / (b - a);
        Ok(self.points[i]
            .iter()
            .zip(&self.points[i + 1])
            .map(|(p, q)| p + w * (q - p))
            .collect())
    }

    /// Index `i` of the segment `[t_i, t_{i+1}]` containing `t`.
    fn segment_index(&self, t: f64) -> usize {
        let n = self.times.len();
        match self.times.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// The path `t ↦ (t, x(t))` in `R^{1+d}`; the time coordinate is letter 1.
    pub fn time_augmented(&self) -> PiecewiseLinearPath {
        let points = self
            .times
            .iter()
            .zip(&self.points)
            .map(|(t, p)| std::iter::once(*t).chain(p.iter().copied()).collect())
            .collect();
        PiecewiseLinearPath {
            times: self.times.clone(),
            points,
        }
    }

    /// Knots of `[s,t]` (with `s <= t`): `s`, the interior sample times, `t`.
    fn knots(&self, s: f64, t: f64) -> Vec<f64> {
        let mut knots = vec![s];
        knots.extend(self.times.iter().copied().filter(|&u| u > s && u < t));
        knots.push(t);
        knots
    }

    fn extend_signature(&self, sig: &mut GroupElement, a: f64, b: f64) -> Result<()> {
        let shape = sig.shape();
        let knots = self.knots(a, b);
        let mut prev = self.value_at(a)?;
        for &u in &knots[1..] {
            let next = self.value_at(u)?;
            let inc: Vec<f64> = next.iter().zip(&prev).map(|(q, p)| q - p).collect();
            *sig = sig.mul_unchecked(&GroupElement::exp_vector(shape, &inc)?);
            prev = next;
        }
        Ok(())
    }
}

/// Exact signature of a piecewise linear path restricted to `[s,t]`.
/// For `s > t` this is the inverse of the signature over `[t,s]`.
pub fn signature_pl(path: &PiecewiseLinearPath, depth: usize, s: f64, t: f64) -> Result<GroupElement> {
    let shape = TensorShape::new(path.dim(), depth)?;
    check_time(s, path.horizon())?;
    check_time(t, path.horizon())?;
    if s > t {
        return Ok(signature_pl(path, depth, t, s)?.inverse());
    }
    let mut sig = GroupElement::unit(shape);
    if s < t {
        path.extend_signature(&mut sig, s, t)?;
    }
    Ok(sig)
}

/// The signature functional of a piecewise linear path.
#[derive(Debug, Clone)]
pub struct ExactSignature {
    path: Arc<PiecewiseLinearPath>,
    depth: usize,
}

impl ExactSignature {
    pub fn new(path: Arc<PiecewiseLinearPath>, depth: usize) -> Self {
        Self { path, depth }
    }

    pub fn path(&self) -> &Arc<PiecewiseLinearPath> {
        &self.path
    }
}

impl MultiplicativeFunctional for ExactSignature {
    fn shape(&self) -> TensorShape {
        TensorShape::new(self.path.dim(), self.depth).expect("path dimension is positive")
    }

    fn horizon(&self) -> f64 {
        self.path.horizon()
    }

    fn provenance(&self) -> Provenance {
        Provenance::ExactPl
    }

    fn eval(&self, s: f64, t: f64) -> Result<GroupElement> {
        signature_pl(&self.path, self.depth, s, t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.path.times().to_vec()
    }

    fn eval_row(&self, s: f64, ts: &[f64]) -> Result<Vec<GroupElement>> {
        if ts.first().is_some_and(|&t| t < s) || ts.windows(2).any(|w| w[0] > w[1]) {
            return ts.iter().map(|&t| self.eval(s, t)).collect();
        }
        check_time(s, self.horizon())?;
        let mut sig = GroupElement::unit(self.shape());
        let mut at = s;
        let mut out = Vec::with_capacity(ts.len());
        for &t in ts {
            check_time(t, self.horizon())?;
            if t > at {
                self.path.extend_signature(&mut sig, at, t)?;
                at = t;
            }
            out.push(sig.clone());
        }
        Ok(out)
    }
}

/// `x_{s,t} = (1, 0, (t-s) A)` for an antisymmetric `A`: pure Lévy area.
#[derive(Debug, Clone)]
pub struct PureArea {
    dim: usize,
    area: Vec<f64>,
    horizon: f64,
}

impl PureArea {
    pub fn new(dim: usize, area: Vec<f64>, horizon: f64) -> Result<Self> {
        if area.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: area.len(),
            });
        }
        for i in 0..dim {
            for j in 0..dim {
                if area[i * dim + j] != -area[j * dim + i] {
                    return Err(Error::InvalidPath("area matrix must be antisymmetric".into()));
                }
            }
        }
        if !(horizon > 0.0) {
            return Err(Error::InvalidPath("horizon must be positive".into()));
        }
        Ok(Self { dim, area, horizon })
    }

    pub fn area(&self) -> &[f64] {
        &self.area
    }
}

impl MultiplicativeFunctional for PureArea {
    fn shape(&self) -> TensorShape {
        TensorShape::new(self.dim, 2).expect("dimension is positive")
    }

    fn horizon(&self) -> f64 {
        self.horizon
    }

    fn provenance(&self) -> Provenance {
        Provenance::PureArea
    }

    fn eval(&self, s: f64, t: f64) -> Result<GroupElement> {
        check_time(s, self.horizon)?;
        check_time(t, self.horizon)?;
        let mut x = TruncatedTensor::unit(self.shape());
        for (dst, a) in x.level_mut(2).iter_mut().zip(&self.area) {
            *dst = (t - s) * a;
        }
        GroupElement::new(x)
    }
}

type Evaluator = dyn Fn(f64, f64) -> Result<GroupElement> + Send + Sync;

/// A functional given by an arbitrary evaluator.
pub struct FnFunctional {
    shape: TensorShape,
    horizon: f64,
    breakpoints: Vec<f64>,
    f: Box<Evaluator>,
}

impl FnFunctional {
    pub fn new(
        shape: TensorShape,
        horizon: f64,
        f: impl Fn(f64, f64) -> Result<GroupElement> + Send + Sync + 'static,
    ) -> Self {
        Self {
            shape,
            horizon,
            breakpoints: Vec::new(),
            f: Box::new(f),
        }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }
}

impl MultiplicativeFunctional for FnFunctional {
    fn shape(&self) -> TensorShape {
        self.shape
    }

    fn horizon(&self) -> f64 {
        self.horizon
    }

    fn provenance(&self) -> Provenance {
        Provenance::Custom
    }

    fn eval(&self, s: f64, t: f64) -> Result<GroupElement> {
        check_time(s, self.horizon)?;
        check_time(t, self.horizon)?;
        (self.f)(s, t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

/// Largest `‖x_{s,u} ⊗ x_{u,t} - x_{s,t}‖` over the given triples, measured in
/// the direct-sum Hilbert norm.
pub fn chen_check(x: &dyn MultiplicativeFunctional, triples: &[(f64, f64, f64)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(s, u, t) in triples {
        let left = x.eval(s, u)?.mul(&x.eval(u, t)?)?;
        let diff = left.tensor_sub(x.eval(s, t)?.as_tensor())?;
        worst = worst.max(diff.hilbert_norm());
    }
    Ok(worst)
}

/// Ordered triples `s <= u <= t` built from the breakpoints and a uniform grid.
pub fn default_triples(x: &dyn MultiplicativeFunctional, grid_points: usize) -> Vec<(f64, f64, f64)> {
    let horizon = x.horizon();
    let mut times: Vec<f64> = (0..=grid_points)
        .map(|k| horizon * k as f64 / grid_points.max(1) as f64)
        .chain(x.breakpoints())
        .filter(|t| (0.0..=horizon).contains(t))
        .collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let n = times.len();
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                if (i + 2 * j + 3 * k) % 5 == 0 || (i == 0 && k == n - 1) {
                    triples.push((times[i], times[j], times[k]));
                }
            }
        }
    }
    triples
}

/// Dyadic partition of `[s,t]` at `depth`, merged with the breakpoints inside it.
pub fn snapped_partition(s: f64, t: f64, depth: usize, breakpoints: &[f64]) -> Vec<f64> {
    let n = 1usize << depth;
    let len = t - s;
    let snap = 1e-12 * len.abs().max(f64::MIN_POSITIVE);
    let mut points: Vec<f64> = (0..=n).map(|k| s + len * k as f64 / n as f64).collect();
    points[n] = t;
    let inner: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > s && b < t).collect();
    if inner.is_empty() {
        return points;
    }
    // breakpoints win over nearby dyadic points
    points.retain(|p| *p == s || *p == t || inner.iter().all(|b| (b - p).abs() > snap));
    points.extend(inner);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// Options for building a Lyons lift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftOptions {
    /// Chen residual allowed in the input, relative to `1 + ‖x_{s,t}‖`.
    pub chen_tolerance: f64,
    /// Uniform grid size used to sample Chen triples from the input.
    pub chen_grid: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        Self {
            chen_tolerance: 1e-10,
            chen_grid: 6,
        }
    }
}

/// The Lyons extension of a multiplicative functional to a deeper truncation.
///
/// Level `k+1` at `(s,t)` is the product over a snapped dyadic partition of
/// `[s,t]` of the level-`k` values padded with a zero top level. Evaluation
/// uses the deepest configured mesh; [`LyonsLift::trace`] reports all of them.
#[derive(Clone)]
pub struct LyonsLift {
    inner: Arc<dyn MultiplicativeFunctional>,
    target: usize,
    mesh_depths: Vec<usize>,
    breakpoints: Vec<f64>,
}

/// Values of a lift at one `(s,t)` for each mesh depth.
#[derive(Debug, Clone)]
pub struct LiftTrace {
    pub depths: Vec<usize>,
    pub values: Vec<GroupElement>,
    /// Max coefficient change from the previous depth (`None` for the first).
    pub increments: Vec<Option<f64>>,
}

impl LyonsLift {
    pub fn new(
        inner: Arc<dyn MultiplicativeFunctional>,
        target: usize,
        mesh_depths: &[usize],
        options: LiftOptions,
    ) -> Result<Self> {
        let base = inner.shape().depth();
        if target < base {
            return Err(Error::LevelOutOfRange { level: target, depth: base });
        }
        if mesh_depths.is_empty() {
            return Err(Error::EmptyGrid);
        }
        let horizon = inner.horizon();
        for (s, u, t) in default_triples(inner.as_ref(), options.chen_grid) {
            let whole = inner.eval(s, t)?;
            let residual = inner.eval(s, u)?.mul(&inner.eval(u, t)?)?.tensor_sub(&whole)?.hilbert_norm();
            let tolerance = options.chen_tolerance * (1.0 + whole.hilbert_norm());
            if residual > tolerance {
                return Err(Error::NotMultiplicative { residual, tolerance });
            }
        }
        let mut mesh_depths = mesh_depths.to_vec();
        mesh_depths.sort_unstable();
        mesh_depths.dedup();
        let mut breakpoints = inner.breakpoints();
        breakpoints.retain(|b| (0.0..=horizon).contains(b));
        Ok(Self {
            inner,
            target,
            mesh_depths,
            breakpoints,
        })
    }

    pub fn mesh_depths(&self) -> &[usize] {
        &self.mesh_depths
    }

    fn value(&self, level: usize, s: f64, t: f64, mesh: usize) -> Result<GroupElement> {
        let base = self.inner.shape().depth();
        if level == base {
            return self.inner.eval(s, t);
        }
        if s > t {
            return Ok(self.value(level, t, s, mesh)?.inverse());
        }
        let shape = self.inner.shape().with_depth(level);
        if s == t {
            return Ok(GroupElement::unit(shape));
        }
        let points = snapped_partition(s, t, mesh, &self.breakpoints);
        let mut acc = GroupElement::unit(shape);
        for w in points.windows(2) {
            let piece = self.value(level - 1, w[0], w[1], mesh)?.pad_to_depth(level)?;
            acc = acc.mul_unchecked(&piece);
        }
        Ok(acc)
    }

    pub fn eval_at_depth(&self, s: f64, t: f64, mesh: usize) -> Result<GroupElement> {
        check_time(s, self.horizon())?;
        check_time(t, self.horizon())?;
        self.value(self.target, s, t, mesh)
    }

    pub fn trace(&self, s: f64, t: f64) -> Result<LiftTrace> {
        let mut values: Vec<GroupElement> = Vec::with_capacity(self.mesh_depths.len());
        let mut increments = Vec::with_capacity(self.mesh_depths.len());
        for &mesh in &self.mesh_depths {
            let v = self.eval_at_depth(s, t, mesh)?;
            increments.push(match values.last() {
                Some(prev) => Some(prev.max_abs_diff(&v)?),
                None => None,
            });
            values.push(v);
        }
        Ok(LiftTrace {
            depths: self.mesh_depths.clone(),
            values,
            increments,
        })
    }
}

impl MultiplicativeFunctional for LyonsLift {
    fn shape(&self) -> TensorShape {
        self.inner.shape().with_depth(self.target)
    }

    fn horizon(&self) -> f64 {
        self.inner.horizon()
    }

    fn provenance(&self) -> Provenance {
        Provenance::Lifted
    }

    fn eval(&self, s: f64, t: f64) -> Result<GroupElement> {
        let mesh = *self.mesh_depths.last().expect("at least one mesh depth");
        self.eval_at_depth(s, t, mesh)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

/// Builds the Lyons lift of `x` to truncation depth `target`.
pub fn lyons_lift(
    x: Arc<dyn MultiplicativeFunctional>,
    target: usize,
    mesh_depths: &[usize],
) -> Result<LyonsLift> {
    LyonsLift::new(x, target, mesh_depths, LiftOptions::default())
}

/// The level-2 rough path over `R ⊕ R^d` obtained by adjoining running time.
///
/// The mixed time/space entries are Young integrals, which on a linear piece
/// `[a,b]` with increment `Δ` are
/// `∫(u-s) dx_u = Δ ((b-s)² - (a-s)²) / (2(b-a))` and
/// `∫(x_u - x_s) du = (x_a - x_s)(b-a) + Δ (b-a)/2`.
#[derive(Debug, Clone)]
pub struct TimeExtendedPath {
    path: Arc<PiecewiseLinearPath>,
}

pub fn time_extend(path: Arc<PiecewiseLinearPath>, depth: usize) -> Result<TimeExtendedPath> {
    if depth != 2 {
        return Err(Error::TimeExtensionDepth(depth));
    }
    Ok(TimeExtendedPath { path })
}

impl TimeExtendedPath {
    pub fn path(&self) -> &Arc<PiecewiseLinearPath> {
        &self.path
    }

    fn forward(&self, s: f64, t: f64) -> Result<GroupElement> {
        let d = self.path.dim();
        let base = signature_pl(&self.path, 2, s, t)?;
        let xs = self.path.value_at(s)?;
        let mut time_space = vec![0.0; d];
        let mut space_time = vec![0.0; d];
        let knots = self.path.knots(s, t);
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let (xa, xb) = (self.path.value_at(a)?, self.path.value_at(b)?);
            let h = b - a;
            let weight = ((b - s) * (b - s) - (a - s) * (a - s)) / (2.0 * h);
            for i in 0..d {
                let inc = xb[i] - xa[i];
                time_space[i] += inc * weight;
                space_time[i] += (xa[i] - xs[i]) * h + inc * h / 2.0;
            }
        }
        let split = TimeSplit {
            time_time: 0.5 * (t - s) * (t - s),
            time_space,
            space_time,
            space_space: base.level(2).to_vec(),
        };
        let shape = TensorShape::new(d + 1, 2)?;
        let mut level1 = vec![t - s];
        level1.extend_from_slice(base.level(1));
        GroupElement::new(TruncatedTensor::from_levels(
            shape,
            vec![vec![1.0], level1, split.assemble()],
        )?)
    }
}

impl MultiplicativeFunctional for TimeExtendedPath {
    fn shape(&self) -> TensorShape {
        TensorShape::new(self.path.dim() + 1, 2).expect("dimension is positive")
    }

    fn horizon(&self) -> f64 {
        self.path.horizon()
    }

    fn provenance(&self) -> Provenance {
        Provenance::ExactPl
    }

    fn eval(&self, s: f64, t: f64) -> Result<GroupElement> {
        check_time(s, self.horizon())?;
        check_time(t, self.horizon())?;
        if s > t {
            return Ok(self.forward(t, s)?.inverse());
        }
        self.forward(s, t)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.path.times().to_vec()
    }
}

/// Hölder norms of a path's level-2 rough path and of its time extension,
/// with the measured constant `C = ‖x̂‖ / max(‖x‖, 1)` and the a priori one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeExtensionBound {
    pub base_norm: f64,
    pub extended_norm: f64,
    pub constant: f64,
    pub a_priori_constant: f64,
}

/// A constant `C(T, α)` with `‖x̂‖ <= C max(‖x‖, 1)` in the Hilbert level norms.
///
/// Level 1 gives `T^{1-α} + 1`. At level 2, `|∫(x_u - x_s) du| <= ‖x‖ |t-s|^{1+α} / (1+α)`,
/// and integration by parts bounds `∫(u-s) dx_u` by `‖x‖ |t-s|^{1+α} (1 + 1/(1+α))`,
/// so the fourth power of the level-2 root is at most
/// `T^{4-4α}/4 + K T^{2-2α} + 1` with `K = (1 + 1/(1+α))² + 1/(1+α)²`.
pub fn time_extension_constant(horizon: f64, alpha: f64) -> f64 {
    let r = 1.0 / (1.0 + alpha);
    let k = (1.0 + r).powi(2) + r * r;
    let level1 = horizon.powf(1.0 - alpha) + 1.0;
    let level2 = (horizon.powf(4.0 - 4.0 * alpha) / 4.0 + k * horizon.powf(2.0 - 2.0 * alpha) + 1.0).powf(0.25);
    level1.max(level2)
}

pub fn time_extension_bound(
    path: Arc<PiecewiseLinearPath>,
    alpha: f64,
    dyadic_depth: usize,
    cfg: &NormConfig,
) -> Result<TimeExtensionBound> {
    let params = HoelderParams::dyadic(alpha, path.horizon(), path.times(), dyadic_depth)?;
    let base = ExactSignature::new(path.clone(), 2);
    let ext = time_extend(path, 2)?;
    let base_norm = norms::hoelder_norm(&base, &params, cfg)?;
    let extended_norm = norms::hoelder_norm(&ext, &params, cfg)?;
    Ok(TimeExtensionBound {
        base_norm,
        extended_norm,
        constant: extended_norm / base_norm.max(1.0),
        a_priori_constant: time_extension_constant(params.horizon(), alpha),
    })
}

/// Pushes a level-`k` block forward along the linear map with rows `maps[i]`:
/// `out[i_1..i_k] = sum_w x[w] prod_p maps[i_p][w_p]`.
pub(crate) fn push_forward_block(block: &[f64], dim_in: usize, k: usize, maps: &[Vec<f64>]) -> Vec<f64> {
    let m = maps.len();
    let mut cur = block.to_vec();
    for p in 0..k {
        let left = m.pow(p as u32);
        let right = dim_in.pow((k - p - 1) as u32);
        let mut next = vec![0.0; left * m * right];
        for l in 0..left {
            for j in 0..dim_in {
                for r in 0..right {
                    let v = cur[(l * dim_in + j) * right + r];
                    if v == 0.0 {
                        continue;
                    }
                    for (i, row) in maps.iter().enumerate() {
                        next[(l * m + i) * right + r] += row[j] * v;
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

/// The finite-dimensional projection `π^y`:
/// `<π^y(x), e_{i_1} ⊗ … ⊗ e_{i_j}> = <x, y_{i_1} ⊗ … ⊗ y_{i_j}>`.
#[derive(Clone)]
pub struct Projected {
    inner: Arc<dyn MultiplicativeFunctional>,
    ys: Vec<Vec<f64>>,
}

pub fn project_pi_y(x: Arc<dyn MultiplicativeFunctional>, ys: Vec<Vec<f64>>) -> Result<Projected> {
    let shape = x.shape();
    if ys.len() != shape.depth() + 1 {
        return Err(Error::DimensionMismatch {
            expected: shape.depth() + 1,
            found: ys.len(),
        });
    }
    if let Some(y) = ys.iter().find(|y| y.len() != shape.dim()) {
        return Err(Error::DimensionMismatch {
            expected: shape.dim(),
            found: y.len(),
        });
    }
    Ok(Projected { inner: x, ys })
}

impl MultiplicativeFunctional for Projected {
    fn shape(&self) -> TensorShape {
        TensorShape::new(self.ys.len(), self.inner.shape().depth()).expect("at least one direction")
    }

    fn horizon(&self) -> f64 {
        self.inner.horizon()
    }

    fn provenance(&self) -> Provenance {
        Provenance::Custom
    }

    fn eval(&self, s: f64, t: f64) -> Result<GroupElement> {
        let x = self.inner.eval(s, t)?;
        let dim = x.shape().dim();
        let levels = (0..=x.shape().depth())
            .map(|k| push_forward_block(x.level(k), dim, k, &self.ys))
            .collect();
        let mut out = TruncatedTensor::from_levels(self.shape(), levels)?;
        out.level_mut(0)[0] = 1.0;
        GroupElement::new(out)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
}
