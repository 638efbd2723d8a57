//! Membership tests for the group of group-like elements.
//!
//! In finite dimensions three characterisations agree: pairings respect the
//! shuffle product, the levels satisfy `x^(m) ⊗ x^(l) = Σ_{σ ∈ Sh(m,l)} P_σ x^(m+l)`,
//! and the logarithm is a Lie series. Each test returns a residual that
//! vanishes exactly on group-like input.

use serde::Serialize;

use crate::tensor::{permute_block, GroupElement, Permutation, TruncatedTensor};
use crate::words::{shuffle_words, Word};

/// Largest `|<x,u><x,v> - <x,u ⧢ v>|` over nonempty words with `|u|+|v| <= N`.
pub fn weakly_grouplike_test(x: &GroupElement) -> f64 {
    let shape = x.shape();
    let (dim, depth) = (shape.dim(), shape.depth());
    let mut worst: f64 = 0.0;
    for m in 1..depth {
        for l in m..=depth - m {
            for ui in 0..shape.level_len(m) {
                let u = Word::from_index(ui, m, dim);
                let xu = x.level(m)[ui];
                let start = if l == m { ui } else { 0 };
                for vi in start..shape.level_len(l) {
                    let v = Word::from_index(vi, l, dim);
                    let lhs = xu * x.level(l)[vi];
                    let rhs: f64 = shuffle_words(&u, &v)
                        .iter()
                        .map(|(w, c)| c * x.level(w.len())[w.index(dim)])
                        .sum();
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
    }
    worst
}

/// The `(m,l)`-shuffles: permutations of `0..m+l` increasing on `0..m` and on `m..m+l`.
pub fn shuffles(m: usize, l: usize) -> Vec<Permutation> {
    let n = m + l;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(m);
    fn rec(start: usize, n: usize, m: usize, chosen: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if chosen.len() == m {
            let rest = (0..n).filter(|p| !chosen.contains(p));
            let images: Vec<usize> = chosen.iter().copied().chain(rest).collect();
            out.push(Permutation::new(images).expect("shuffle is a permutation"));
            return;
        }
        for p in start..n {
            chosen.push(p);
            rec(p + 1, n, m, chosen, out);
            chosen.pop();
        }
    }
    rec(0, n, m, &mut chosen, &mut out);
    out
}

fn outer(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest Euclidean residual of `x^(m) ⊗ x^(l) - Σ_{σ ∈ Sh(m,l)} P_σ x^(m+l)`
/// over `m, l >= 1` with `m + l <= N`.
pub fn geng_primal_test(x: &GroupElement) -> f64 {
    let shape = x.shape();
    let (dim, depth) = (shape.dim(), shape.depth());
    let mut worst: f64 = 0.0;
    for m in 1..depth {
        for l in 1..=depth - m {
            let mut diff = outer(x.level(m), x.level(l));
            for sigma in shuffles(m, l) {
                let p = permute_block(x.level(m + l), dim, &sigma);
                for (d, v) in diff.iter_mut().zip(p) {
                    *d -= v;
                }
            }
            worst = worst.max(euclid(&diff));
        }
    }
    worst
}

/// Right-nested bracketing `w_1…w_m ↦ [w_1,[w_2,…,w_m]]` on a level-`m` block.
pub fn dynkin_map(block: &[f64], dim: usize, m: usize) -> Vec<f64> {
    if m <= 1 {
        return block.to_vec();
    }
    let tail_len = dim.pow((m - 1) as u32);
    let mut out = vec![0.0; block.len()];
    for a in 0..dim {
        let tail = &block[a * tail_len..(a + 1) * tail_len];
        if tail.iter().all(|&c| c == 0.0) {
            continue;
        }
        let inner = dynkin_map(tail, dim, m - 1);
        for (i, &c) in inner.iter().enumerate() {
            // e_a ⊗ D(tail) - D(tail) ⊗ e_a
            out[a * tail_len + i] += c;
            out[i * dim + a] -= c;
        }
    }
    out
}

/// Per-level residual `‖D(x^(m)) - m x^(m)‖` for `m = 1..=N`; entry `m-1` is level `m`.
/// Level 0 is ignored.
pub fn lie_membership(x: &TruncatedTensor) -> Vec<f64> {
    let dim = x.shape().dim();
    (1..=x.shape().depth())
        .map(|m| {
            let block = x.level(m);
            let d = dynkin_map(block, dim, m);
            let diff: Vec<f64> = d.iter().zip(block).map(|(a, b)| a - m as f64 * b).collect();
            euclid(&diff)
        })
        .collect()
}

/// Largest Lie-membership residual of `log x`.
pub fn grouplike_roundtrip(x: &GroupElement) -> f64 {
    lie_membership(&x.log()).into_iter().fold(0.0, f64::max)
}

/// All three residuals for one element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrouplikeReport {
    pub weakly_grouplike: f64,
    pub primal: f64,
    pub lie_of_log: f64,
}

pub fn grouplike_report(x: &GroupElement) -> GrouplikeReport {
    GrouplikeReport {
        weakly_grouplike: weakly_grouplike_test(x),
        primal: geng_primal_test(x),
        lie_of_log: grouplike_roundtrip(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::TensorShape;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn letter(shape: TensorShape, a: usize) -> TruncatedTensor {
        let mut t = TruncatedTensor::zeros(shape);
        t.level_mut(1)[a] = 1.0;
        t
    }

    fn bracket(x: &TruncatedTensor, y: &TruncatedTensor) -> TruncatedTensor {
        x.tensor_mul(y).unwrap().tensor_sub(&y.tensor_mul(x).unwrap()).unwrap()
    }

    /// Random combination of letters and right-nested brackets of them.
    fn random_lie(rng: &mut ChaCha8Rng, shape: TensorShape, scale: f64) -> TruncatedTensor {
        let d = shape.dim();
        let mut acc = TruncatedTensor::zeros(shape);
        for _ in 0..6 {
            let len = rng.random_range(1..=shape.depth());
            let mut term = letter(shape, rng.random_range(0..d));
            for _ in 1..len {
                term = bracket(&letter(shape, rng.random_range(0..d)), &term);
            }
            acc = acc.tensor_add(&term.scale(rng.random_range(-scale..scale))).unwrap();
        }
        acc
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(1, 1).len(), 2);
        assert_eq!(shuffles(2, 2).len(), 6);
        assert_eq!(shuffles(2, 3).len(), 10);
        assert_eq!(shuffles(1, 2)[0].images(), &[0, 1, 2]);
    }

    #[test]
    fn unit_passes_everything() {
        let g = GroupElement::unit(TensorShape::new(3, 4).unwrap());
        let r = grouplike_report(&g);
        assert_eq!((r.weakly_grouplike, r.primal, r.lie_of_log), (0.0, 0.0, 0.0));
    }

    #[test]
    fn exp_of_letter_is_grouplike() {
        let g = GroupElement::exp_vector(TensorShape::new(2, 5).unwrap(), &[0.0, 1.3]).unwrap();
        assert!(weakly_grouplike_test(&g) <= 1e-12);
        assert!(geng_primal_test(&g) <= 1e-12);
        assert!(grouplike_roundtrip(&g) <= 1e-12);
    }

    #[test]
    fn exp_of_lie_element_is_grouplike() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let shape = TensorShape::new(3, 4).unwrap();
        for _ in 0..10 {
            let lie = random_lie(&mut rng, shape, 0.5);
            assert!(lie_membership(&lie).iter().all(|&r| r <= 1e-12));
            let g = lie.exp().unwrap();
            assert!(geng_primal_test(&g) <= 1e-12);
            assert!(weakly_grouplike_test(&g) <= 1e-12);
            assert!(grouplike_roundtrip(&g) <= 1e-12);
        }
    }

    #[test]
    fn level_two_perturbation_residual() {
        // only the (1,1) pair sees e1⊗e1: <x,e1>² = 0 but <x, e1 ⧢ e1> = 2ε
        let shape = TensorShape::new(2, 2).unwrap();
        let eps = 0.125;
        let mut t = TruncatedTensor::unit(shape);
        t.level_mut(2)[0] = eps;
        let g = GroupElement::new(t).unwrap();
        assert_abs_diff_eq!(weakly_grouplike_test(&g), 2.0 * eps, epsilon = 1e-15);
        assert_abs_diff_eq!(geng_primal_test(&g), 2.0 * eps, epsilon = 1e-15);
        assert!(grouplike_roundtrip(&g) > 0.1);
    }

    #[test]
    fn lie_membership_examples() {
        let shape = TensorShape::new(2, 2).unwrap();
        assert_eq!(lie_membership(&letter(shape, 1)), vec![0.0, 0.0]);

        let e1 = letter(shape, 0);
        let e2 = letter(shape, 1);
        let br = bracket(&e1, &e2);
        assert_eq!(br.level(2), &[0.0, 1.0, -1.0, 0.0]);
        assert_eq!(lie_membership(&br), vec![0.0, 0.0]);

        let sym = e1.tensor_mul(&e2).unwrap().tensor_add(&e2.tensor_mul(&e1).unwrap()).unwrap();
        let r = lie_membership(&sym);
        assert_abs_diff_eq!(r[1], 2.0 * 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn dynkin_on_bracket_doubles_it() {
        // D([a,b]) = [a,b] - [b,a] = 2[a,b]
        let v = [0.0, 1.0, -1.0, 0.0];
        assert_eq!(dynkin_map(&v, 2, 2), vec![0.0, 2.0, -2.0, 0.0]);
    }

    #[test]
    fn three_way_agreement_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..60 {
            let d = rng.random_range(1..=3);
            let n = rng.random_range(2..=4);
            let shape = TensorShape::new(d, n).unwrap();
            let mut g = random_lie(&mut rng, shape, 0.7).exp().unwrap().into_tensor();
            let perturbed = trial % 2 == 1;
            if perturbed {
                let k = rng.random_range(2..=n);
                let i = rng.random_range(0..shape.level_len(k));
                g.level_mut(k)[i] += rng.random_range(0.1..0.5);
            }
            let r = grouplike_report(&GroupElement::new(g).unwrap());
            let verdicts = [r.weakly_grouplike <= 1e-10, r.primal <= 1e-10, r.lie_of_log <= 1e-8];
            assert!(verdicts.iter().all(|&v| v == !perturbed), "trial {trial}: {r:?}");
        }
    }

    #[test]
    fn products_stay_grouplike() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let shape = TensorShape::new(2, 4).unwrap();
        let a = random_lie(&mut rng, shape, 0.6).exp().unwrap();
        let b = random_lie(&mut rng, shape, 0.6).exp().unwrap();
        let r = grouplike_report(&a.mul(&b).unwrap());
        assert!(r.weakly_grouplike <= 1e-12 && r.primal <= 1e-12 && r.lie_of_log <= 1e-12);
    }
}
