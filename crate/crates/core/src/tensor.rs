//! Truncated tensor algebra `T^(N)(R^d)`.
//!
//! An element is stored as `N + 1` dense blocks; block `k` holds the `d^k`
//! coefficients of the level-`k` tensor, indexed lexicographically by words
//! of length `k` (the first letter is the most significant digit). Products
//! are truncated Cauchy products, so every series used here (inverse,
//! exponential, logarithm) is a finite sum and is evaluated exactly.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alphabet size `d` and truncation depth `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorShape {
    dim: usize,
    depth: usize,
}

impl TensorShape {
    pub fn new(dim: usize, depth: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidShape("dimension must be at least 1".into()));
        }
        // d^N must fit comfortably in memory; desk-scale shapes are tiny.
        if (dim as f64).powi(depth as i32) > 1.0e8 {
            return Err(Error::InvalidShape(format!(
                "{dim}^{depth} coefficients is too large"
            )));
        }
        Ok(Self { dim, depth })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of coefficients in the level-`k` block, `d^k`.
    pub fn level_len(&self, k: usize) -> usize {
        self.dim.pow(k as u32)
    }

    /// Total coefficient count `sum_k d^k` for `k = 0..=N`.
    pub fn total_len(&self) -> usize {
        (0..=self.depth).map(|k| self.level_len(k)).sum()
    }

    pub fn with_depth(&self, depth: usize) -> Self {
        Self {
            dim: self.dim,
            depth,
        }
    }

    pub(crate) fn ensure_same(&self, other: &TensorShape) -> Result<()> {
        if self != other {
            return Err(Error::ShapeMismatch {
                left: *self,
                right: *other,
            });
        }
        Ok(())
    }
}

/// An element of `T^(N)(R^d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorJson", into = "TensorJson")]
pub struct TruncatedTensor {
    shape: TensorShape,
    levels: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    d: usize,
    #[serde(rename = "N")]
    depth: usize,
    levels: Vec<Vec<f64>>,
}

impl TryFrom<TensorJson> for TruncatedTensor {
    type Error = Error;

    fn try_from(json: TensorJson) -> Result<Self> {
        let shape = TensorShape::new(json.d, json.depth)?;
        TruncatedTensor::from_levels(shape, json.levels)
    }
}

impl From<TruncatedTensor> for TensorJson {
    fn from(t: TruncatedTensor) -> Self {
        TensorJson {
            d: t.shape.dim,
            depth: t.shape.depth,
            levels: t.levels,
        }
    }
}

impl TruncatedTensor {
    pub fn zeros(shape: TensorShape) -> Self {
        let levels = (0..=shape.depth)
            .map(|k| vec![0.0; shape.level_len(k)])
            .collect();
        Self { shape, levels }
    }

    /// The unit `1 = (1, 0, ..., 0)`.
    pub fn unit(shape: TensorShape) -> Self {
        let mut t = Self::zeros(shape);
        t.levels[0][0] = 1.0;
        t
    }

    /// `(0, v, 0, ..., 0)` for a vector `v` of length `d`.
    pub fn from_vector(shape: TensorShape, v: &[f64]) -> Result<Self> {
        if v.len() != shape.dim {
            return Err(Error::DimensionMismatch {
                expected: shape.dim,
                found: v.len(),
            });
        }
        let mut t = Self::zeros(shape);
        if shape.depth >= 1 {
            t.levels[1].copy_from_slice(v);
        }
        Ok(t)
    }

    pub fn from_levels(shape: TensorShape, levels: Vec<Vec<f64>>) -> Result<Self> {
        if levels.len() != shape.depth + 1 {
            return Err(Error::InvalidShape(format!(
                "expected {} levels, found {}",
                shape.depth + 1,
                levels.len()
            )));
        }
        for (k, block) in levels.iter().enumerate() {
            if block.len() != shape.level_len(k) {
                return Err(Error::BlockLength {
                    level: k,
                    expected: shape.level_len(k),
                    found: block.len(),
                });
            }
            if block.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { level: k });
            }
        }
        Ok(Self { shape, levels })
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn into_levels(self) -> Vec<Vec<f64>> {
        self.levels
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k]
    }

    pub fn level_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.levels[k]
    }

    pub fn scalar(&self) -> f64 {
        self.levels[0][0]
    }

    pub fn tensor_add(&self, other: &Self) -> Result<Self> {
        self.shape.ensure_same(&other.shape)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn tensor_sub(&self, other: &Self) -> Result<Self> {
        self.shape.ensure_same(&other.shape)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            shape: self.shape,
            levels: self
                .levels
                .iter()
                .map(|b| b.iter().map(|x| c * x).collect())
                .collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            shape: self.shape,
            levels: self
                .levels
                .iter()
                .zip(&other.levels)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect())
                .collect(),
        }
    }

    /// Truncated product: `c^(k) = sum_{i+j=k} a^(i) ⊗ b^(j)`.
    pub fn tensor_mul(&self, other: &Self) -> Result<Self> {
        self.shape.ensure_same(&other.shape)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.shape);
        for k in 0..=self.shape.depth {
            let target = &mut out.levels[k];
            for i in 0..=k {
                let a = &self.levels[i];
                let b = &other.levels[k - i];
                let width = b.len();
                for (ia, &av) in a.iter().enumerate() {
                    if av == 0.0 {
                        continue;
                    }
                    let row = &mut target[ia * width..(ia + 1) * width];
                    for (r, &bv) in row.iter_mut().zip(b) {
                        *r += av * bv;
                    }
                }
            }
        }
        out
    }

    /// Largest absolute coefficient difference across all levels.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.shape.ensure_same(&other.shape)?;
        Ok(self
            .levels
            .iter()
            .flatten()
            .zip(other.levels.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Direct-sum norm `|a^(0)| + sum_k ||a^(k)||_2` with Euclidean level norms.
    pub fn hilbert_norm(&self) -> f64 {
        self.levels[0][0].abs()
            + self.levels[1..]
                .iter()
                .map(|b| b.iter().map(|x| x * x).sum::<f64>().sqrt())
                .sum::<f64>()
    }

    /// Exponential `sum_{k<=N} a^k / k!` of an element with zero scalar part.
    pub fn exp(&self) -> Result<GroupElement> {
        if self.scalar() != 0.0 {
            return Err(Error::LevelZero {
                expected: 0.0,
                found: self.scalar(),
            });
        }
        let n = self.shape.depth;
        let mut acc = Self::unit(self.shape);
        for k in (1..=n).rev() {
            acc = self.mul_unchecked(&acc).scale(1.0 / k as f64);
            acc.levels[0][0] += 1.0;
        }
        // Horner accumulation leaves the scalar at exactly 1.
        acc.levels[0][0] = 1.0;
        Ok(GroupElement(acc))
    }

    /// Keep levels `0..=m`.
    pub fn project_level(&self, m: usize) -> Result<Self> {
        if m > self.shape.depth {
            return Err(Error::LevelOutOfRange {
                level: m,
                depth: self.shape.depth,
            });
        }
        Ok(Self {
            shape: self.shape.with_depth(m),
            levels: self.levels[..=m].to_vec(),
        })
    }

    /// Embed into a deeper truncation, filling the new levels with zeros.
    pub fn pad_to_depth(&self, depth: usize) -> Result<Self> {
        if depth < self.shape.depth {
            return Err(Error::LevelOutOfRange {
                level: depth,
                depth: self.shape.depth,
            });
        }
        let shape = self.shape.with_depth(depth);
        let mut levels = self.levels.clone();
        for k in self.shape.depth + 1..=depth {
            levels.push(vec![0.0; shape.level_len(k)]);
        }
        Ok(Self { shape, levels })
    }

    /// Reindex the level-`k` block by a permutation of word positions:
    /// `P_σ(v_1 ⊗ … ⊗ v_k) = v_σ(1) ⊗ … ⊗ v_σ(k)`.
    pub fn permute(&self, k: usize, sigma: &Permutation) -> Result<Self> {
        if k > self.shape.depth {
            return Err(Error::LevelOutOfRange {
                level: k,
                depth: self.shape.depth,
            });
        }
        if sigma.len() != k {
            return Err(Error::NotAPermutation(sigma.images().to_vec()));
        }
        let mut out = self.clone();
        out.levels[k] = permute_block(&self.levels[k], self.shape.dim, sigma);
        Ok(out)
    }
}

/// Applies `P_σ` to a flat level-`k` block over an alphabet of size `dim`.
pub(crate) fn permute_block(block: &[f64], dim: usize, sigma: &Permutation) -> Vec<f64> {
    let k = sigma.len();
    let mut out = vec![0.0; block.len()];
    let mut digits = vec![0usize; k];
    for (idx, &c) in block.iter().enumerate() {
        let mut rest = idx;
        for p in (0..k).rev() {
            digits[p] = rest % dim;
            rest /= dim;
        }
        // P_σ e_w = e_{w∘σ}
        let target = sigma
            .images()
            .iter()
            .fold(0usize, |acc, &q| acc * dim + digits[q]);
        out[target] += c;
    }
    out
}

/// An element of `T_1^(N)`: level-0 coefficient exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GroupElement(TruncatedTensor);

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let t = TruncatedTensor::deserialize(de)?;
        GroupElement::new(t).map_err(serde::de::Error::custom)
    }
}

impl Deref for GroupElement {
    type Target = TruncatedTensor;

    fn deref(&self) -> &TruncatedTensor {
        &self.0
    }
}

impl GroupElement {
    pub fn new(t: TruncatedTensor) -> Result<Self> {
        if t.scalar() != 1.0 {
            return Err(Error::LevelZero {
                expected: 1.0,
                found: t.scalar(),
            });
        }
        Ok(Self(t))
    }

    pub fn unit(shape: TensorShape) -> Self {
        Self(TruncatedTensor::unit(shape))
    }

    /// `exp(v)` for a level-1 vector, computed as `v^{⊗k} / k!` directly.
    pub fn exp_vector(shape: TensorShape, v: &[f64]) -> Result<Self> {
        if v.len() != shape.dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.dim(),
                found: v.len(),
            });
        }
        let mut levels = Vec::with_capacity(shape.depth() + 1);
        levels.push(vec![1.0]);
        for k in 1..=shape.depth() {
            let prev: &Vec<f64> = &levels[k - 1];
            let inv = 1.0 / k as f64;
            let mut next = Vec::with_capacity(prev.len() * v.len());
            for &p in prev {
                next.extend(v.iter().map(|x| p * x * inv));
            }
            levels.push(next);
        }
        Ok(Self(TruncatedTensor { shape, levels }))
    }

    pub fn as_tensor(&self) -> &TruncatedTensor {
        &self.0
    }

    pub fn into_tensor(self) -> TruncatedTensor {
        self.0
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.0.shape.ensure_same(&other.0.shape)?;
        let mut out = self.0.mul_unchecked(&other.0);
        out.levels[0][0] = 1.0;
        Ok(Self(out))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = self.0.mul_unchecked(&other.0);
        out.levels[0][0] = 1.0;
        Self(out)
    }

    /// `a^{-1} = sum_{i=0}^{N} (1 - a)^i`.
    pub fn inverse(&self) -> Self {
        let shape = self.0.shape;
        let mut b = self.0.scale(-1.0);
        b.levels[0][0] = 0.0;
        let mut acc = TruncatedTensor::unit(shape);
        for _ in 0..shape.depth {
            acc = b.mul_unchecked(&acc);
            acc.levels[0][0] += 1.0;
        }
        acc.levels[0][0] = 1.0;
        Self(acc)
    }

    /// `log(1 + a) = sum_{n>=1} (-1)^{n+1} a^n / n`, truncated after `N` terms.
    pub fn log(&self) -> TruncatedTensor {
        let shape = self.0.shape;
        let n = shape.depth;
        let mut a = self.0.clone();
        a.levels[0][0] = 0.0;
        if n == 0 {
            return a;
        }
        // Horner: a (1 - a (1/2 - a (1/3 - ...)))
        let mut acc = TruncatedTensor::unit(shape).scale(1.0 / n as f64);
        for k in (1..n).rev() {
            acc = a.mul_unchecked(&acc).scale(-1.0);
            acc.levels[0][0] += 1.0 / k as f64;
        }
        let mut out = a.mul_unchecked(&acc);
        out.levels[0][0] = 0.0;
        out
    }

    pub fn project_level(&self, m: usize) -> Result<Self> {
        Ok(Self(self.0.project_level(m)?))
    }

    pub fn pad_to_depth(&self, depth: usize) -> Result<Self> {
        Ok(Self(self.0.pad_to_depth(depth)?))
    }
}

/// A bijection of word positions, stored as zero-based images:
/// `images[p] = σ(p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::NotAPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            images: (0..k).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, p: usize) -> usize {
        self.images[p]
    }

    /// `(self ∘ other)(p) = self(other(p))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::NotAPermutation(other.images.clone()));
        }
        Ok(Self {
            images: other.images.iter().map(|&q| self.images[q]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (p, &q) in self.images.iter().enumerate() {
            images[q] = p;
        }
        Self { images }
    }
}
