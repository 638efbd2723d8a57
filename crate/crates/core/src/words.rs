//! Words over `{1..d}`, linear functionals on the truncated tensor algebra,
//! and the shuffle product.
//!
//! Letters are one-based throughout, matching the file formats. A word of
//! length `k` addresses one coefficient of the level-`k` block; the dual
//! pairing of a tensor with a functional reads those coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{GroupElement, TensorShape, TruncatedTensor};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Self(letters)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn letter(l: usize) -> Self {
        Self(vec![l])
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, shape: TensorShape) -> Result<()> {
        if self.len() > shape.depth() {
            return Err(Error::WordTooLong {
                len: self.len(),
                depth: shape.depth(),
            });
        }
        for &l in &self.0 {
            if l == 0 || l > shape.dim() {
                return Err(Error::LetterOutOfRange {
                    letter: l,
                    dim: shape.dim(),
                });
            }
        }
        Ok(())
    }

    /// Lexicographic index inside the level block.
    pub fn index(&self, dim: usize) -> usize {
        self.0.iter().fold(0, |acc, &l| acc * dim + (l - 1))
    }

    pub fn from_index(mut index: usize, len: usize, dim: usize) -> Self {
        let mut letters = vec![0; len];
        for p in (0..len).rev() {
            letters[p] = index % dim + 1;
            index /= dim;
        }
        Self(letters)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Self(letters)
    }

    /// All words of length `0..=depth`, in storage order.
    pub fn all(shape: TensorShape) -> Vec<Word> {
        (0..=shape.depth())
            .flat_map(|k| (0..shape.level_len(k)).map(move |i| Word::from_index(i, k, shape.dim())))
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl TruncatedTensor {
    pub fn coordinate(&self, word: &Word) -> Result<f64> {
        word.validate(self.shape())?;
        Ok(self.level(word.len())[word.index(self.shape().dim())])
    }
}

/// Shuffles of two words, as a multiset of merged words.
///
/// Uses `(u a) ⧢ (v b) = ((u a) ⧢ v) b + (u ⧢ (v b)) a`.
pub fn shuffle_words(u: &Word, v: &Word) -> BTreeMap<Word, f64> {
    let mut out = BTreeMap::new();
    shuffle_rec(u.letters(), v.letters(), &mut Vec::new(), &mut out);
    out
}

fn shuffle_rec(u: &[usize], v: &[usize], suffix: &mut Vec<usize>, out: &mut BTreeMap<Word, f64>) {
    if u.is_empty() || v.is_empty() {
        let mut w: Vec<usize> = u.iter().chain(v).copied().collect();
        w.extend(suffix.iter().rev());
        *out.entry(Word(w)).or_insert(0.0) += 1.0;
        return;
    }
    suffix.push(v[v.len() - 1]);
    shuffle_rec(u, &v[..v.len() - 1], suffix, out);
    suffix.pop();
    suffix.push(u[u.len() - 1]);
    shuffle_rec(&u[..u.len() - 1], v, suffix, out);
    suffix.pop();
}

/// Sparse element of the algebraic dual, acting on signatures by pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionalJson", into = "FunctionalJson")]
pub struct LinearFunctional {
    shape: TensorShape,
    terms: BTreeMap<Word, f64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: Word,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct FunctionalJson {
    d: usize,
    #[serde(rename = "N")]
    depth: usize,
    terms: Vec<TermJson>,
}

impl TryFrom<FunctionalJson> for LinearFunctional {
    type Error = Error;

    fn try_from(json: FunctionalJson) -> Result<Self> {
        let mut l = LinearFunctional::zero(TensorShape::new(json.d, json.depth)?);
        for t in json.terms {
            l.add_term(t.word, t.coeff)?;
        }
        Ok(l)
    }
}

impl From<LinearFunctional> for FunctionalJson {
    fn from(l: LinearFunctional) -> Self {
        FunctionalJson {
            d: l.shape.dim(),
            depth: l.shape.depth(),
            terms: l
                .terms
                .into_iter()
                .map(|(word, coeff)| TermJson { word, coeff })
                .collect(),
        }
    }
}

/// Result of a truncated shuffle product.
#[derive(Debug, Clone, PartialEq)]
pub struct ShuffleProduct {
    pub value: LinearFunctional,
    /// Set when terms longer than the truncation depth were discarded.
    pub truncated: bool,
}

impl LinearFunctional {
    pub fn zero(shape: TensorShape) -> Self {
        Self {
            shape,
            terms: BTreeMap::new(),
        }
    }

    /// The functional `1`, reading the scalar coefficient.
    pub fn one(shape: TensorShape) -> Self {
        Self::from_word(shape, Word::empty(), 1.0).expect("empty word is always valid")
    }

    pub fn from_word(shape: TensorShape, word: Word, coeff: f64) -> Result<Self> {
        let mut l = Self::zero(shape);
        l.add_term(word, coeff)?;
        Ok(l)
    }

    pub fn from_terms(shape: TensorShape, terms: impl IntoIterator<Item = (Word, f64)>) -> Result<Self> {
        let mut l = Self::zero(shape);
        for (w, c) in terms {
            l.add_term(w, c)?;
        }
        Ok(l)
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn terms(&self) -> &BTreeMap<Word, f64> {
        &self.terms
    }

    pub fn coeff(&self, word: &Word) -> f64 {
        self.terms.get(word).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, word: Word, coeff: f64) -> Result<()> {
        word.validate(self.shape)?;
        *self.terms.entry(word).or_insert(0.0) += coeff;
        Ok(())
    }

    /// Length of the longest word with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|(_, c)| **c != 0.0)
            .map(|(w, _)| w.len())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.shape.ensure_same(&other.shape)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            *out.terms.entry(w.clone()).or_insert(0.0) += c;
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            shape: self.shape,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), c * v)).collect(),
        }
    }

    /// Bilinear shuffle product, dropping terms beyond the truncation depth.
    pub fn shuffle(&self, other: &Self) -> Result<ShuffleProduct> {
        self.shape.ensure_same(&other.shape)?;
        let depth = self.shape.depth();
        let mut terms = BTreeMap::new();
        let mut truncated = false;
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                if u.len() + v.len() > depth {
                    truncated |= *cu != 0.0 && *cv != 0.0;
                    continue;
                }
                for (w, n) in shuffle_words(u, v) {
                    *terms.entry(w).or_insert(0.0) += cu * cv * n;
                }
            }
        }
        Ok(ShuffleProduct {
            value: Self {
                shape: self.shape,
                terms,
            },
            truncated,
        })
    }

    /// `<x, l> = sum_w l_w x_w`.
    pub fn pair(&self, x: &TruncatedTensor) -> Result<f64> {
        self.shape.ensure_same(&x.shape())?;
        let dim = self.shape.dim();
        Ok(self
            .terms
            .iter()
            .map(|(w, c)| c * x.level(w.len())[w.index(dim)])
            .sum())
    }
}

/// `|<x,y><x,y'> - <x, y ⧢ y'>|`; zero for every group-like `x`.
pub fn shuffle_closure_check(x: &GroupElement, y: &LinearFunctional, y2: &LinearFunctional) -> Result<f64> {
    let degree = y.degree() + y2.degree();
    if degree > x.shape().depth() {
        return Err(Error::DegreeOverflow {
            degree,
            depth: x.shape().depth(),
        });
    }
    let prod = y.shuffle(y2)?;
    let lhs = y.pair(x)? * y2.pair(x)?;
    let rhs = prod.value.pair(x)?;
    Ok((lhs - rhs).abs())
}
