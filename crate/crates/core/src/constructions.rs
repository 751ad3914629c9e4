//! Random GF(2) constructions of dense layer sets.
//!
//! Vertex version: pick `v_1..v_n` in `F_2^{b'}` and keep the strings of
//! `L_{a',b'}` whose ones index a basis. Edge version: pick `v_0..v_n` in
//! `F_2^{b'+1}` and keep the starred strings of `L'_{a',b'}` for which both
//! `v_0` and the starred vector complete the ones to a basis.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embeddings::EmbeddingMap;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::multigraph::Multigraph;
use crate::patterns::{layer_words, x_pattern, Kind, Pattern, Word};

/// Vectors over GF(2), bit `k` of each `u64` being coordinate `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Vectors {
    pub dim: usize,
    pub vectors: Vec<u64>,
    pub seed: Option<u64>,
}

impl F2Vectors {
    pub fn new(dim: usize, vectors: Vec<u64>) -> Result<F2Vectors> {
        if dim == 0 || dim > 64 {
            return Err(Error::InvalidParameters(format!("dimension {dim} outside 1..=64")));
        }
        if dim < 64 && vectors.iter().any(|v| v >> dim != 0) {
            return Err(Error::InvalidParameters(format!("vector outside F_2^{dim}")));
        }
        Ok(F2Vectors { dim, vectors, seed: None })
    }

    pub fn random(dim: usize, count: usize, seed: u64) -> Result<F2Vectors> {
        let mut v = F2Vectors::new(dim, Vec::new())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = if dim == 64 { u64::MAX } else { (1u64 << dim) - 1 };
        v.vectors = (0..count).map(|_| rng.gen::<u64>() & mask).collect();
        v.seed = Some(seed);
        Ok(v)
    }

    /// Rank of the vectors selected by `mask`.
    pub fn rank_of(&self, mask: u64) -> usize {
        rank((0..self.vectors.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.vectors[i]))
    }
}

/// Rank over GF(2) by elimination against a basis kept by leading bit.
pub fn rank(vectors: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = [0u64; 64];
    let mut r = 0;
    for mut v in vectors {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                r += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    r
}

fn check_dims(zeros: usize, ones: usize) -> Result<()> {
    if ones == 0 {
        return Err(Error::InvalidParameters("the construction needs b' >= 1".into()));
    }
    if zeros + ones > 63 {
        return Err(Error::SizeGuard("strings too long".into()));
    }
    Ok(())
}

/// Strings of `L_{a',b'}` whose ones index a basis of `F_2^{b'}`.
pub fn vertex_set_from(v: &F2Vectors, zeros: usize, ones: usize) -> Result<Pattern> {
    check_dims(zeros, ones)?;
    if v.dim != ones || v.vectors.len() != zeros + ones {
        return Err(Error::InvalidParameters(format!(
            "need {} vectors in F_2^{ones}, got {} in F_2^{}",
            zeros + ones,
            v.vectors.len(),
            v.dim
        )));
    }
    let words = layer_words(Kind::Vertex, zeros, ones)?.into_iter().filter(|w| v.rank_of(w.ones()) == ones);
    Pattern::new(Kind::Vertex, zeros, ones, words)
}

/// Starred strings of `L'_{a',b'}`; vector `0` is `v_0`, vector `k + 1` is
/// the one for coordinate `k`.
pub fn edge_set_from(v: &F2Vectors, zeros: usize, ones: usize) -> Result<Pattern> {
    check_dims(zeros, ones)?;
    let n = zeros + ones + 1;
    if v.dim != ones + 1 || v.vectors.len() != n + 1 {
        return Err(Error::InvalidParameters(format!(
            "need {} vectors in F_2^{}, got {} in F_2^{}",
            n + 1,
            ones + 1,
            v.vectors.len(),
            v.dim
        )));
    }
    let words = layer_words(Kind::Edge, zeros, ones)?.into_iter().filter(|w| {
        let base = w.ones() << 1;
        let star = 1u64 << (w.star().unwrap() + 1);
        v.rank_of(base | 1) == ones + 1 && v.rank_of(base | star) == ones + 1
    });
    Pattern::new(Kind::Edge, zeros, ones, words)
}

pub fn f2_vertex_set(zeros: usize, ones: usize, seed: u64) -> Result<Pattern> {
    check_dims(zeros, ones)?;
    vertex_set_from(&F2Vectors::random(ones, zeros + ones, seed)?, zeros, ones)
}

pub fn f2_edge_set(zeros: usize, ones: usize, seed: u64) -> Result<Pattern> {
    check_dims(zeros, ones)?;
    edge_set_from(&F2Vectors::random(ones + 1, zeros + ones + 2, seed)?, zeros, ones)
}

/// `prod_{i=1}^{b'} (1 - 2^{-i})`, the chance that `b'` random vectors form a basis.
pub fn density_lower_bound(ones: usize) -> BigRational {
    (1..=ones).fold(BigRational::from_integer(BigInt::from(1)), |acc, i| {
        let den = BigInt::from(1) << i;
        acc * BigRational::new(&den - 1, den)
    })
}

/// `1/4 prod_{i=1}^{b'} (1 - 2^{-i-1})`.
pub fn edge_density_lower_bound(ones: usize) -> BigRational {
    (1..=ones).fold(BigRational::new(BigInt::from(1), BigInt::from(4)), |acc, i| {
        let den = BigInt::from(1) << (i + 1);
        acc * BigRational::new(&den - 1, den)
    })
}

/// Mean density of the vertex construction over seeds `first..first + trials`.
pub fn mean_vertex_density(zeros: usize, ones: usize, first: u64, trials: usize, exec: Exec) -> Result<f64> {
    let total = layer_words(Kind::Vertex, zeros, ones)?.len() as f64;
    let sizes = exec.map_range(trials, |k| f2_vertex_set(zeros, ones, first + k as u64).map(|p| p.len()));
    let sizes = sizes.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(sizes.iter().map(|&s| s as f64 / total).sum::<f64>() / trials.max(1) as f64)
}

pub fn mean_edge_density(zeros: usize, ones: usize, first: u64, trials: usize, exec: Exec) -> Result<f64> {
    let total = layer_words(Kind::Edge, zeros, ones)?.len() as f64;
    let sizes = exec.map_range(trials, |k| f2_edge_set(zeros, ones, first + k as u64).map(|p| p.len()));
    let sizes = sizes.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(sizes.iter().map(|&s| s as f64 / total).sum::<f64>() / trials.max(1) as f64)
}

/// Splits the slots of `map` by the class of their vector modulo the span
/// of the constant-one vectors. Needs `b' - b = dim - 2` so the quotient is
/// `F_2^2`. Returns `[I_0, I_1, I_2, I_3]`, `I_0` holding the slots whose
/// vector lies in the span.
pub fn quotient_classes(v: &F2Vectors, map: &EmbeddingMap) -> Result<[Vec<usize>; 4]> {
    let consts: Vec<u64> =
        (0..map.out_len()).filter(|&k| map.constant_ones() >> k & 1 == 1).map(|k| v.vectors[k]).collect();
    let r = rank(consts.iter().copied());
    if r + 2 != v.dim {
        return Err(Error::InvalidParameters("constants do not span a codimension-2 subspace".into()));
    }
    // Reduce by the span of the constants, then name the nonzero classes in
    // order of first appearance.
    let mut basis = [0u64; 64];
    for mut c in consts {
        while c != 0 {
            let top = 63 - c.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = c;
                break;
            }
            c ^= basis[top];
        }
    }
    let reduce = |mut x: u64| {
        for top in (0..64).rev() {
            if x >> top & 1 == 1 && basis[top] != 0 {
                x ^= basis[top];
            }
        }
        x
    };
    let mut seen: Vec<u64> = Vec::new();
    let mut classes: [Vec<usize>; 4] = Default::default();
    for (j, &p) in map.positions().iter().enumerate() {
        let r = reduce(v.vectors[p]);
        if r == 0 {
            classes[0].push(j);
            continue;
        }
        let c = match seen.iter().position(|&s| s == r) {
            Some(c) => c,
            None => {
                seen.push(r);
                seen.len() - 1
            }
        };
        classes[c + 1].push(j);
    }
    Ok(classes)
}

/// The 3-vertex graph with parallel classes `I_1, I_2, I_3` on its sides
/// and loops for `I_0`; edge `j` is slot `j`.
pub fn quotient_graph(classes: &[Vec<usize>; 4]) -> Multigraph {
    let n = classes.iter().map(Vec::len).sum();
    let ends = [(0, 0), (0, 1), (1, 2), (2, 0)];
    let mut edges = vec![(0, 0); n];
    for (c, slots) in classes.iter().enumerate() {
        for &j in slots {
            edges[j] = ends[c];
        }
    }
    Multigraph::new(3, edges).expect("three vertices")
}

/// Checks that a pattern with `b = 2` embedded into the vertex construction
/// through `map` lies inside `X(G)` of its quotient graph.
pub fn check_quotient_containment(v: &F2Vectors, map: &EmbeddingMap, x: &Pattern) -> Result<bool> {
    let classes = quotient_classes(v, map)?;
    let g = quotient_graph(&classes);
    if !g.is_connected() {
        return Ok(x.is_empty());
    }
    let xg = x_pattern(&g)?;
    Ok(x.words().iter().all(|w: &Word| xg.contains(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embeddings::contains_pattern;

    #[test]
    fn rank_examples() {
        assert_eq!(rank([0b01, 0b10, 0b11]), 2);
        assert_eq!(rank([0, 0]), 0);
        assert_eq!(rank([0b101, 0b101]), 1);
    }

    #[test]
    fn explicit_vectors() {
        let ones = F2Vectors::new(1, vec![1, 1, 1]).unwrap();
        assert_eq!(vertex_set_from(&ones, 2, 1).unwrap(), Pattern::full_layer(Kind::Vertex, 2, 1).unwrap());
        let v = F2Vectors::new(2, vec![0b01, 0b10, 0b01, 0b10]).unwrap();
        let s: Vec<String> = vertex_set_from(&v, 2, 2).unwrap().words().iter().map(|w| w.to_string()).collect();
        assert_eq!(s, vec!["0011", "0110", "1001", "1100"]);
        let zero = F2Vectors::new(2, vec![0; 5]).unwrap();
        assert!(edge_set_from(&zero, 2, 1).unwrap().is_empty());
    }

    #[test]
    fn bounds() {
        assert_eq!(density_lower_bound(1), BigRational::new(1.into(), 2.into()));
        assert_eq!(density_lower_bound(2), BigRational::new(3.into(), 8.into()));
        assert_eq!(density_lower_bound(4), BigRational::new(315.into(), 1024.into()));
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(f2_vertex_set(4, 4, 7).unwrap(), f2_vertex_set(4, 4, 7).unwrap());
        assert_eq!(f2_edge_set(3, 3, 7).unwrap(), f2_edge_set(3, 3, 7).unwrap());
        assert!(f2_vertex_set(3, 0, 1).is_err());
    }

    #[test]
    fn quotient_spot_check() {
        let x = x_pattern(&Multigraph::cycle(3)).unwrap();
        let mut checked = 0;
        for seed in 0..20 {
            let v = F2Vectors::random(3, 6, seed).unwrap();
            let s = vertex_set_from(&v, 3, 3).unwrap();
            if let Some(map) = contains_pattern(&s, &x).unwrap() {
                assert!(check_quotient_containment(&v, &map, &x).unwrap());
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
}
