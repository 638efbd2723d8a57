//! Molecules, the Arens–Eells norm and its pairing with Hölder functions.
//!
//! A molecule is a finitely supported zero-sum map `m: [0,T] → R^p`; its norm
//! is the cheapest decomposition `m = Σ a_i (1_{t_i} - 1_{s_i}) y_i` with cost
//! `Σ |a_i| |t_i - s_i|^α`. For scalar molecules this is a transshipment
//! problem with cost `|t-s|^α`, which is a metric for `α <= 1`, so the optimum
//! over any candidate set containing the support is the true norm. The dual
//! potentials give a function of Hölder constant 1 whose pairing with `m`
//! is a matching lower bound.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::hoelder_coefficient;
use crate::transport::min_cost_transshipment;

const SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculePoint {
    pub t: f64,
    pub v: Vec<f64>,
}

/// A zero-sum, finitely supported `R^p`-valued function of time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<MoleculePoint>", into = "Vec<MoleculePoint>")]
pub struct Molecule {
    dim: usize,
    points: Vec<MoleculePoint>,
}

impl TryFrom<Vec<MoleculePoint>> for Molecule {
    type Error = Error;

    fn try_from(points: Vec<MoleculePoint>) -> Result<Self> {
        let dim = points.first().map(|p| p.v.len()).unwrap_or(1);
        Molecule::new(dim, points)
    }
}

impl From<Molecule> for Vec<MoleculePoint> {
    fn from(m: Molecule) -> Self {
        m.points
    }
}

impl Molecule {
    /// Validates and normalises: entries at equal times are merged and the
    /// support is sorted. Fails if the values do not sum to zero.
    pub fn new(dim: usize, points: Vec<MoleculePoint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMolecule("values must have at least one coordinate".into()));
        }
        let mut merged: Vec<MoleculePoint> = Vec::with_capacity(points.len());
        let mut sorted = points;
        for p in &sorted {
            if p.v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.v.len(),
                });
            }
            if !p.t.is_finite() || p.t < 0.0 || p.v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidMolecule(format!("bad entry at t = {}", p.t)));
            }
        }
        sorted.sort_by(|a, b| a.t.total_cmp(&b.t));
        for p in sorted {
            match merged.last_mut() {
                Some(last) if last.t == p.t => {
                    for (a, b) in last.v.iter_mut().zip(&p.v) {
                        *a += b;
                    }
                }
                _ => merged.push(p),
            }
        }
        let residual = (0..dim)
            .map(|k| merged.iter().map(|p| p.v[k]).sum::<f64>().abs())
            .fold(0.0, f64::max);
        if residual > SUM_TOLERANCE {
            return Err(Error::NonZeroSum { residual });
        }
        Ok(Self { dim, points: merged })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
        }
    }

    /// `(1_{t} - 1_{s}) y`.
    pub fn elementary(t: f64, s: f64, y: &[f64]) -> Result<Self> {
        Self::new(
            y.len(),
            vec![
                MoleculePoint { t, v: y.to_vec() },
                MoleculePoint {
                    t: s,
                    v: y.iter().map(|x| -x).collect(),
                },
            ],
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[MoleculePoint] {
        &self.points
    }

    pub fn support(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Self::new(self.dim, self.points.iter().chain(&other.points).cloned().collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            points: self
                .points
                .iter()
                .map(|p| MoleculePoint {
                    t: p.t,
                    v: p.v.iter().map(|x| c * x).collect(),
                })
                .collect(),
        }
    }
}

/// `m^y_{t,s} = (1_{t} - 1_{s}) y` with `‖y‖ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementaryMolecule {
    t: f64,
    s: f64,
    y: Vec<f64>,
}

impl ElementaryMolecule {
    pub fn new(t: f64, s: f64, y: Vec<f64>) -> Result<Self> {
        let norm = y.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMolecule(format!("direction has norm {norm}, expected 1")));
        }
        Ok(Self { t, s, y })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn to_molecule(&self) -> Result<Molecule> {
        Molecule::elementary(self.t, self.s, &self.y)
    }

    /// `u ↦ |u - s|^α y`, which has Hölder constant 1 and pairs with this
    /// molecule to `|t - s|^α`.
    pub fn dual_witness(&self, alpha: f64) -> impl Fn(f64) -> Vec<f64> + '_ {
        move |u| {
            let w = (u - self.s).abs().powf(alpha);
            self.y.iter().map(|y| w * y).collect()
        }
    }
}

/// One term `a (1_{t} - 1_{s}) y` of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionTerm {
    pub a: f64,
    pub t: f64,
    pub s: f64,
    pub y: Vec<f64>,
}

/// Bounds on the Arens–Eells norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AeNorm {
    /// Cost of `certificate`.
    pub upper: f64,
    /// Pairing with `witness`, a function of Hölder constant at most 1.
    pub lower: f64,
    pub certificate: Vec<DecompositionTerm>,
    /// Witness values at the candidate times.
    pub witness: Vec<MoleculePoint>,
}

struct ScalarSolution {
    upper: f64,
    lower: f64,
    terms: Vec<(f64, usize, usize)>,
    /// Hölder-1 dual function on candidates.
    witness: Vec<f64>,
}

fn solve_scalar(values: &[f64], candidates: &[f64], alpha: f64) -> ScalarSolution {
    let cost: Vec<Vec<f64>> = candidates
        .iter()
        .map(|a| candidates.iter().map(|b| (a - b).abs().powf(alpha)).collect())
        .collect();
    let sol = min_cost_transshipment(&cost, values);
    let mut witness = sol.duals;
    // rescale so the witness is exactly Hölder-1 on the candidates
    let pts: Vec<Vec<f64>> = witness.iter().map(|&u| vec![u]).collect();
    let coef = if candidates.len() > 1 {
        hoelder_coefficient(candidates, &pts, alpha)
    } else {
        0.0
    };
    if coef > 1.0 {
        witness.iter_mut().for_each(|u| *u /= coef);
    }
    let lower: f64 = values.iter().zip(&witness).map(|(b, u)| b * u).sum();
    ScalarSolution {
        upper: sol.cost,
        lower: lower.max(0.0),
        terms: sol.flows.into_iter().map(|(i, j, f)| (f, i, j)).collect(),
        witness,
    }
}

/// Decomposes `m` along orthonormal directions `dirs` (rows) and solves one
/// scalar problem per direction.
fn solve_along(
    values: &[Vec<f64>],
    dirs: &[Vec<f64>],
    candidates: &[f64],
    alpha: f64,
) -> (f64, f64, Vec<DecompositionTerm>, Vec<Vec<f64>>) {
    let p = values.first().map(Vec::len).unwrap_or(0);
    let mut upper = 0.0;
    let mut lowers = Vec::new();
    let mut terms = Vec::new();
    let mut witnesses = Vec::new();
    for dir in dirs {
        let coeffs: Vec<f64> = values
            .iter()
            .map(|v| v.iter().zip(dir).map(|(a, b)| a * b).sum())
            .collect();
        if coeffs.iter().all(|&c| c.abs() <= f64::EPSILON * 16.0) {
            continue;
        }
        let sol = solve_scalar(&coeffs, candidates, alpha);
        upper += sol.upper;
        lowers.push(sol.lower);
        for (a, i, j) in sol.terms {
            terms.push(DecompositionTerm {
                a,
                t: candidates[i],
                s: candidates[j],
                y: dir.clone(),
            });
        }
        witnesses.push((sol.lower, sol.witness, dir.clone()));
    }
    // combine witnesses with weights c_k = L_k / ‖L‖; orthonormal directions keep
    // the combined Hölder constant at most ‖c‖ = 1
    let lower = lowers.iter().map(|l| l * l).sum::<f64>().sqrt();
    let mut combined = vec![vec![0.0; p]; candidates.len()];
    if lower > 0.0 {
        for (l, w, dir) in &witnesses {
            let c = l / lower;
            for (row, &wv) in combined.iter_mut().zip(w) {
                for (x, d) in row.iter_mut().zip(dir) {
                    *x += c * wv * d;
                }
            }
        }
    }
    (upper, lower, terms, combined)
}

/// Arens–Eells norm of `m` with transport restricted to `candidates`.
///
/// Scalar molecules are solved exactly. For `p > 1` the molecule is split along
/// the coordinate axes and along its singular directions, and the cheaper
/// decomposition is returned; the lower bound comes from the better witness.
pub fn ae_norm(m: &Molecule, alpha: f64, candidates: &[f64]) -> Result<AeNorm> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidHoelder(format!("alpha = {alpha} not in (0,1]")));
    }
    let mut cands: Vec<f64> = candidates.to_vec();
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let p = m.dim();
    let mut values = vec![vec![0.0; p]; cands.len()];
    for pt in m.points() {
        let i = cands
            .binary_search_by(|c| c.total_cmp(&pt.t))
            .map_err(|_| Error::MissingCandidate(pt.t))?;
        values[i] = pt.v.clone();
    }
    if m.points().is_empty() {
        return Ok(AeNorm {
            upper: 0.0,
            lower: 0.0,
            certificate: Vec::new(),
            witness: cands.iter().map(|&t| MoleculePoint { t, v: vec![0.0; p] }).collect(),
        });
    }

    let axes: Vec<Vec<f64>> = (0..p)
        .map(|k| (0..p).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut best = solve_along(&values, &axes, &cands, alpha);
    if p > 1 {
        let mat = DMatrix::from_fn(p, cands.len(), |r, c| values[c][r]);
        let svd = mat.svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        let scale = svd.singular_values.max();
        let dirs: Vec<Vec<f64>> = (0..svd.singular_values.len())
            .filter(|&k| svd.singular_values[k] > 1e-14 * scale)
            .map(|k| u.column(k).iter().copied().collect())
            .collect();
        let svd_sol = solve_along(&values, &dirs, &cands, alpha);
        let lower = best.1.max(svd_sol.1);
        let witness = if svd_sol.1 > best.1 { svd_sol.3.clone() } else { best.3.clone() };
        if svd_sol.0 < best.0 {
            best = svd_sol;
        }
        best.1 = lower;
        best.3 = witness;
    }
    let (upper, lower, certificate, witness) = best;
    Ok(AeNorm {
        upper,
        lower: lower.min(upper),
        certificate,
        witness: cands
            .iter()
            .zip(witness)
            .map(|(&t, v)| MoleculePoint { t, v })
            .collect(),
    })
}

/// Support of `m` plus a uniform dyadic grid of `[0, horizon]` at `depth`.
pub fn candidate_times(m: &Molecule, horizon: f64, depth: usize) -> Vec<f64> {
    let n = 1usize << depth;
    let mut out: Vec<f64> = (0..=n).map(|k| horizon * k as f64 / n as f64).collect();
    out.extend(m.support());
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Samples `x(t_i) ∈ R^p` of a function on a finite set of times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl SampledFunction {
    pub fn new(times: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                found: values.len(),
            });
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPath("sample times must be strictly increasing".into()));
        }
        let p = values[0].len();
        if let Some(v) = values.iter().find(|v| v.len() != p) {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: v.len(),
            });
        }
        Ok(Self { times, values })
    }

    pub fn from_fn(times: Vec<f64>, mut f: impl FnMut(f64) -> Vec<f64>) -> Result<Self> {
        let values = times.iter().map(|&t| f(t)).collect();
        Self::new(times, values)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    pub fn value_at(&self, t: f64) -> Result<&[f64]> {
        self.times
            .binary_search_by(|s| s.total_cmp(&t))
            .map(|i| self.values[i].as_slice())
            .map_err(|_| Error::MissingSample(t))
    }

    /// Hölder coefficient over all pairs of sample times.
    pub fn hoelder_coefficient(&self, alpha: f64) -> f64 {
        if self.times.len() < 2 {
            return 0.0;
        }
        hoelder_coefficient(&self.times, &self.values, alpha)
    }
}

/// `<x, m> = Σ_t <x(t), m(t)>`.
pub fn pairing(x: &SampledFunction, m: &Molecule) -> Result<f64> {
    if m.points().is_empty() {
        return Ok(0.0);
    }
    if x.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: x.dim(),
        });
    }
    let mut acc = 0.0;
    for p in m.points() {
        let v = x.value_at(p.t)?;
        acc += v.iter().zip(&p.v).map(|(a, b)| a * b).sum::<f64>();
    }
    Ok(acc)
}

/// Lower bound `max |<x,m>| / ‖m‖_AE` on the Hölder coefficient of `x`.
/// Norms of the probes are computed over their own supports.
pub fn dual_norm_via_molecules(x: &SampledFunction, probes: &[Molecule], alpha: f64) -> Result<f64> {
    let mut best: f64 = 0.0;
    for m in probes {
        let norm = ae_norm(m, alpha, &m.support())?.upper;
        if norm > 0.0 {
            best = best.max(pairing(x, m)?.abs() / norm);
        }
    }
    Ok(best)
}

/// Elementary molecules `m^y_{t,s}` for every pair of sample times of `x`,
/// with `y` the unit vector along `x(t) - x(s)`.
pub fn aligned_elementary_probes(x: &SampledFunction) -> Vec<Molecule> {
    let mut probes = Vec::new();
    let (times, values) = (x.times(), x.values());
    for i in 0..times.len() {
        for j in i + 1..times.len() {
            let diff: Vec<f64> = values[j].iter().zip(&values[i]).map(|(a, b)| a - b).collect();
            let norm = diff.iter().map(|d| d * d).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let y: Vec<f64> = diff.iter().map(|d| d / norm).collect();
            probes.push(Molecule::elementary(times[j], times[i], &y).expect("elementary molecules sum to zero"));
        }
    }
    probes
}

/// Pairing gaps `|<x_n - x, m>|` of a family against a limit, with norm data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakStarReport {
    /// Largest Hölder coefficient in the family.
    pub norm_bound: f64,
    pub member_norms: Vec<f64>,
    pub limit_norm: f64,
    /// Per member, the largest gap over the probes.
    pub max_pairing_gap_trace: Vec<f64>,
    /// False when some member exceeds the supplied bound.
    pub bounded: bool,
    /// `limit_norm <= min over the second half of member_norms + 1e-9`.
    pub lower_semicontinuous: bool,
}

pub fn weakstar_convergence_check(
    family: &[SampledFunction],
    limit: &SampledFunction,
    probes: &[Molecule],
    alpha: f64,
    bound: Option<f64>,
) -> Result<WeakStarReport> {
    let member_norms: Vec<f64> = family.iter().map(|x| x.hoelder_coefficient(alpha)).collect();
    let limit_norm = limit.hoelder_coefficient(alpha);
    let mut trace = Vec::with_capacity(family.len());
    for x in family {
        let mut worst: f64 = 0.0;
        for m in probes {
            worst = worst.max((pairing(x, m)? - pairing(limit, m)?).abs());
        }
        trace.push(worst);
    }
    let norm_bound = member_norms.iter().copied().fold(0.0, f64::max);
    let tail_min = member_norms[member_norms.len() / 2..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(WeakStarReport {
        norm_bound,
        bounded: bound.is_none_or(|b| norm_bound <= b),
        lower_semicontinuous: limit_norm <= tail_min + 1e-9,
        member_norms,
        limit_norm,
        max_pairing_gap_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn scalar(pts: &[(f64, f64)]) -> Molecule {
        Molecule::new(1, pts.iter().map(|&(t, v)| MoleculePoint { t, v: vec![v] }).collect()).unwrap()
    }

    #[test]
    fn molecule_validation_and_json() {
        let err = Molecule::new(
            1,
            vec![
                MoleculePoint { t: 0.0, v: vec![1.0] },
                MoleculePoint { t: 1.0, v: vec![-0.5] },
            ],
        );
        assert!(matches!(err, Err(Error::NonZeroSum { .. })));
        let m: Molecule = serde_json::from_str(r#"[{"t":0.5,"v":[1.0,2.0]},{"t":0.1,"v":[-1.0,-2.0]}]"#).unwrap();
        assert_eq!(m.support(), vec![0.1, 0.5]);
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"[{"t":0.1,"v":[-1.0,-2.0]},{"t":0.5,"v":[1.0,2.0]}]"#
        );
        assert!(serde_json::from_str::<Molecule>(r#"[{"t":0.5,"v":[1.0]},{"t":0.1,"v":[-0.9]}]"#).is_err());
        assert!(ElementaryMolecule::new(0.0, 1.0, vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn elementary_norm_and_witness() {
        let alpha = 0.4;
        let y = vec![0.6, 0.8];
        let e = ElementaryMolecule::new(0.7, 0.2, y.clone()).unwrap();
        let m = e.to_molecule().unwrap();
        let r = ae_norm(&m, alpha, &candidate_times(&m, 1.0, 4)).unwrap();
        let exact = 0.5f64.powf(alpha);
        assert_abs_diff_eq!(r.upper, exact, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lower, exact, epsilon = 1e-12);

        let grid: Vec<f64> = (0..=64).map(|k| k as f64 / 64.0).chain([0.7, 0.2]).collect::<Vec<_>>();
        let mut grid = grid;
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let w = SampledFunction::from_fn(grid, e.dual_witness(alpha)).unwrap();
        assert!(w.hoelder_coefficient(alpha) <= 1.0 + 1e-12);
        assert_abs_diff_eq!(pairing(&w, &m).unwrap(), exact, epsilon = 1e-12);
    }

    #[test]
    fn zero_molecule() {
        let r = ae_norm(&Molecule::zero(2), 0.5, &[0.0, 1.0]).unwrap();
        assert_eq!((r.upper, r.lower), (0.0, 0.0));
    }

    #[test]
    fn chained_molecule_takes_cheaper_route() {
        // m_{t,s} + m_{s,r} = m_{t,r}; compare both routes by enumeration
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let alpha = rng.random_range(0.1..1.0);
            let (t, s, r) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
            let m = Molecule::elementary(t, s, &[1.0])
                .unwrap()
                .add(&Molecule::elementary(s, r, &[1.0]).unwrap())
                .unwrap();
            let two_hop = (t - s).abs().powf(alpha) + (s - r).abs().powf(alpha);
            let direct = (t - r).abs().powf(alpha);
            let res = ae_norm(&m, alpha, &[t, s, r]).unwrap();
            assert_abs_diff_eq!(res.upper, two_hop.min(direct), epsilon = 1e-12);
        }
    }

    #[test]
    fn missing_candidate_is_an_error() {
        let m = scalar(&[(0.3, 1.0), (0.6, -1.0)]);
        assert!(matches!(ae_norm(&m, 0.5, &[0.0, 0.3, 1.0]), Err(Error::MissingCandidate(_))));
    }

    #[test]
    fn certificate_reconstructs_molecule() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for p in [1usize, 3] {
            let mut pts: Vec<MoleculePoint> = (0..5)
                .map(|_| MoleculePoint {
                    t: rng.random_range(0.0..1.0),
                    v: (0..p).map(|_| rng.random_range(-1.0..1.0)).collect(),
                })
                .collect();
            let sum: Vec<f64> = (0..p).map(|k| pts.iter().map(|q| q.v[k]).sum()).collect();
            pts.push(MoleculePoint {
                t: 0.999,
                v: sum.iter().map(|s| -s).collect(),
            });
            let m = Molecule::new(p, pts).unwrap();
            let r = ae_norm(&m, 0.6, &candidate_times(&m, 1.0, 3)).unwrap();
            let rebuilt = r
                .certificate
                .iter()
                .map(|c| Molecule::elementary(c.t, c.s, &c.y.iter().map(|y| c.a * y).collect::<Vec<_>>()).unwrap())
                .fold(Molecule::zero(p), |acc, e| acc.add(&e).unwrap());
            let diff = rebuilt.add(&m.scale(-1.0)).unwrap();
            assert!(diff.points().iter().all(|q| q.v.iter().all(|x| x.abs() <= 1e-12)));
            let cost: f64 = r.certificate.iter().map(|c| c.a.abs() * (c.t - c.s).abs().powf(0.6)).sum();
            assert_abs_diff_eq!(cost, r.upper, epsilon = 1e-12);
            assert!(r.lower <= r.upper + 1e-12);
            if p == 1 {
                assert_abs_diff_eq!(r.lower, r.upper, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn rank_one_vector_molecule_is_exact() {
        let y = [0.3, -0.4, 1.2];
        let scalar_part = scalar(&[(0.1, 2.0), (0.4, -0.5), (0.8, -1.5)]);
        let m = Molecule::new(
            3,
            scalar_part
                .points()
                .iter()
                .map(|p| MoleculePoint {
                    t: p.t,
                    v: y.iter().map(|c| c * p.v[0]).collect(),
                })
                .collect(),
        )
        .unwrap();
        let s = ae_norm(&scalar_part, 0.5, &scalar_part.support()).unwrap();
        let r = ae_norm(&m, 0.5, &m.support()).unwrap();
        let ynorm = y.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert_abs_diff_eq!(r.upper, ynorm * s.upper, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lower, r.upper, epsilon = 1e-10);
    }

    #[test]
    fn pairing_examples() {
        let x = SampledFunction::from_fn(vec![0.0, 0.25, 0.5, 1.0], |_| vec![3.0]).unwrap();
        let m = scalar(&[(0.25, 1.0), (1.0, -1.0)]);
        assert_eq!(pairing(&x, &m).unwrap(), 0.0);
        let id = SampledFunction::from_fn(vec![0.0, 0.25, 0.5, 1.0], |u| vec![u]).unwrap();
        assert_abs_diff_eq!(pairing(&id, &scalar(&[(1.0, 1.0), (0.25, -1.0)])).unwrap(), 0.75);
        assert!(matches!(
            pairing(&id, &scalar(&[(0.3, 1.0), (0.25, -1.0)])),
            Err(Error::MissingSample(_))
        ));
    }

    #[test]
    fn duality_sandwich_and_norm_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let grid: Vec<f64> = (0..=16).map(|k| k as f64 / 16.0).collect();
        for _ in 0..100 {
            let alpha = rng.random_range(0.2..1.0);
            let p = rng.random_range(1..=3);
            let x = SampledFunction::from_fn(grid.clone(), |_| (0..p).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
            let random_molecule = |rng: &mut ChaCha8Rng| {
                let mut pts: Vec<MoleculePoint> = (0..4)
                    .map(|_| MoleculePoint {
                        t: grid[rng.random_range(0..grid.len())],
                        v: (0..p).map(|_| rng.random_range(-1.0..1.0)).collect(),
                    })
                    .collect();
                let sum: Vec<f64> = (0..p).map(|k| pts.iter().map(|q| q.v[k]).sum()).collect();
                pts.push(MoleculePoint {
                    t: grid[rng.random_range(0..grid.len())],
                    v: sum.iter().map(|s| -s).collect(),
                });
                Molecule::new(p, pts).unwrap()
            };
            let m1 = random_molecule(&mut rng);
            let m2 = random_molecule(&mut rng);
            let n1 = ae_norm(&m1, alpha, &grid).unwrap().upper;
            let n2 = ae_norm(&m2, alpha, &grid).unwrap().upper;
            let coef = x.hoelder_coefficient(alpha);
            assert!(pairing(&x, &m1).unwrap().abs() <= coef * n1 * (1.0 + 1e-12) + 1e-12);
            if p == 1 {
                let sum = ae_norm(&m1.add(&m2).unwrap(), alpha, &grid).unwrap().upper;
                assert!(sum <= n1 + n2 + 1e-9);
                let c = rng.random_range(-3.0..3.0);
                let scaled = ae_norm(&m1.scale(c), alpha, &grid).unwrap().upper;
                assert_abs_diff_eq!(scaled, c.abs() * n1, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn elementary_probes_recover_grid_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let grid: Vec<f64> = (0..=12).map(|k| k as f64 / 12.0).collect();
        let x = SampledFunction::from_fn(grid, |_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).unwrap();
        let probes = aligned_elementary_probes(&x);
        let lower = dual_norm_via_molecules(&x, &probes, 0.5).unwrap();
        assert_abs_diff_eq!(lower, x.hoelder_coefficient(0.5), epsilon = 1e-12);
        let zero = SampledFunction::from_fn(x.times().to_vec(), |_| vec![0.0, 0.0]).unwrap();
        assert_eq!(dual_norm_via_molecules(&zero, &probes, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn constant_family_has_no_gaps() {
        let grid: Vec<f64> = (0..=8).map(|k| k as f64 / 8.0).collect();
        let x = SampledFunction::from_fn(grid.clone(), |u| vec![u.sin()]).unwrap();
        let probes = aligned_elementary_probes(&x);
        let rep = weakstar_convergence_check(&vec![x.clone(); 5], &x, &probes, 0.5, Some(1.0)).unwrap();
        assert!(rep.max_pairing_gap_trace.iter().all(|&g| g == 0.0));
        assert!(rep.bounded && rep.lower_semicontinuous);
        let rep = weakstar_convergence_check(&[x.clone()], &x, &probes, 0.5, Some(0.1)).unwrap();
        assert!(!rep.bounded);
    }
}
