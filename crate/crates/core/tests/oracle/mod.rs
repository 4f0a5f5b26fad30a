//! Independent reference evaluators. Nothing here calls into the crate's
//! matrix or protocol code; machines are described by raw nested vectors.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;

pub type CMat = Vec<Vec<Complex64>>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { c(1.0) } else { c(0.0) }).collect())
        .collect()
}

pub fn mul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut out = vec![vec![c(0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Repeated multiplication, deliberately naive.
pub fn power(u: &CMat, p: usize) -> CMat {
    (0..p).fold(identity(u.len()), |acc, _| mul(&acc, u))
}

pub fn projector(n: usize, block: &[usize]) -> CMat {
    let mut m = vec![vec![c(0.0); n]; n];
    for &i in block {
        m[i][i] = c(1.0);
    }
    m
}

fn row_times(v: &[Complex64], m: &CMat) -> Vec<Complex64> {
    let n = v.len();
    (0..n).map(|j| (0..n).map(|i| v[i] * m[i][j]).sum()).collect()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// The per-symbol operators `U^p P(y)`.
pub fn step_operators(u: &CMat, blocks: &[Vec<usize>], p: usize) -> Vec<CMat> {
    let n = u.len();
    let up = power(u, p);
    blocks.iter().map(|b| mul(&up, &projector(n, b))).collect()
}

/// Probability of `word` from `psi0`: `‖ψ0 · Π_i U^p P(y_i)‖²`, with the
/// full operator product formed first.
pub fn brute_force_probability(steps: &[CMat], psi0: &[Complex64], word: &[usize]) -> f64 {
    let op = word
        .iter()
        .fold(identity(psi0.len()), |acc, &y| mul(&acc, &steps[y]));
    norm_sqr(&row_times(psi0, &op))
}

/// All words up to `max_len` with their probabilities, by depth-first walk
/// of the outcome tree. Keys are symbol-index strings ("0110").
pub fn tree_walk(
    u: &CMat,
    blocks: &[Vec<usize>],
    psi0: &[Complex64],
    p: usize,
    max_len: usize,
) -> BTreeMap<String, f64> {
    let steps = step_operators(u, blocks, p);
    let mut out = BTreeMap::new();
    fn walk(
        steps: &[CMat],
        v: Vec<Complex64>,
        word: String,
        max_len: usize,
        out: &mut BTreeMap<String, f64>,
    ) {
        if word.len() == max_len {
            return;
        }
        for (y, m) in steps.iter().enumerate() {
            let next = row_times(&v, m);
            let prob = norm_sqr(&next);
            if prob <= 1e-15 {
                continue;
            }
            let w = format!("{word}{y}");
            out.insert(w.clone(), prob);
            walk(steps, next, w, max_len, out);
        }
    }
    walk(&steps, psi0.to_vec(), String::new(), max_len, &mut out);
    out
}

pub fn basis(n: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0); n];
    v[i] = c(1.0);
    v
}

pub fn uniform(n: usize) -> Vec<Complex64> {
    vec![c(1.0 / (n as f64).sqrt()); n]
}

/// Every word over `k` symbols of length `len`, as index vectors.
pub fn all_words(k: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                (0..k).map(move |y| {
                    let mut w = w.clone();
                    w.push(y);
                    w
                })
            })
            .collect()
    })
}

pub fn word_key(word: &[usize]) -> String {
    word.iter().map(|y| y.to_string()).collect()
}

/// Random 2–4 state machine: a permutation, or Hadamard blocks with random
/// row phases composed with a permutation. `complete` gives every state its
/// own symbol; otherwise states are split over 1..=n symbols at random.
pub fn random_qdg(rng: &mut StdRng, complete: bool) -> (CMat, Vec<Vec<usize>>) {
    let n = rng.gen_range(2..=4);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut perm = vec![vec![c(0.0); n]; n];
    for (i, &j) in order.iter().enumerate() {
        perm[i][j] = c(1.0);
    }
    let u = if rng.gen_bool(0.5) {
        perm
    } else {
        // Hadamard blocks on shuffled pairs, with random phases, then permuted
        let mut states: Vec<usize> = (0..n).collect();
        states.shuffle(rng);
        let mut b = identity(n);
        for pair in states.chunks(2).filter(|p| p.len() == 2 && rng.gen_bool(0.8)) {
            let (i, j) = (pair[0], pair[1]);
            let s = FRAC_1_SQRT_2;
            b[i][i] = c(s);
            b[i][j] = c(s);
            b[j][i] = c(s);
            b[j][j] = c(-s);
        }
        for row in b.iter_mut() {
            let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            for z in row.iter_mut() {
                *z *= phase;
            }
        }
        mul(&b, &perm)
    };
    let k = if complete { n } else { rng.gen_range(1..=n) };
    let mut states: Vec<usize> = (0..n).collect();
    states.shuffle(rng);
    let mut blocks = vec![Vec::new(); k];
    for (idx, &s) in states.iter().enumerate() {
        let y = if idx < k { idx } else { rng.gen_range(0..k) };
        blocks[y].push(s);
    }
    (u, blocks)
}
