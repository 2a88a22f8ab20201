//! Symmetric-group combinatorics in the one-line convention.
//!
//! A permutation `σ ∈ S_n` is stored as the sequence
//! `(σ⁻¹(1), …, σ⁻¹(n))` (values are 1-based). Products are composition of
//! functions, `(στ)(x) = σ(τ(x))`, so `S_n` acts on the right of operad
//! components by `(θ∗σ)∗τ = θ∗(στ)`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{OperadError, Result};

/// An element of `S_n` in sequence convention.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    seq: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = OperadError;

    fn try_from(seq: Vec<usize>) -> Result<Self> {
        Permutation::from_seq(seq)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.seq
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.seq.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Permutation {
    /// Builds a permutation from its sequence `(σ⁻¹(1), …, σ⁻¹(n))`.
    pub fn from_seq(seq: Vec<usize>) -> Result<Self> {
        let n = seq.len();
        let mut seen = vec![false; n];
        for &v in &seq {
            if v == 0 || v > n || seen[v - 1] {
                return Err(OperadError::InvalidPermutation(format!("{seq:?}")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { seq })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            seq: (1..=n).collect(),
        }
    }

    /// The adjacent transposition `s_k = (k, k+1)` in `S_n`, `1 ≤ k < n`.
    pub fn transposition(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(OperadError::InvalidPermutation(format!(
                "adjacent transposition s_{k} in S_{n}"
            )));
        }
        let mut seq: Vec<usize> = (1..=n).collect();
        seq.swap(k - 1, k);
        Ok(Permutation { seq })
    }

    /// Parses cycle notation such as `(14)(235)` or `(1,4)(2,3,5)`.
    /// Cycles are read as functions: `(a b c)` sends `a ↦ b ↦ c ↦ a`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut image: Vec<usize> = (1..=n).collect();
        let mut touched = vec![false; n + 1];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a == 0 || a > n || touched[a] {
                    return Err(OperadError::InvalidPermutation(format!("{cycles:?}")));
                }
                touched[a] = true;
                image[a - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(&image)
    }

    /// Parses a textual cycle decomposition, e.g. `"(14)(235)"`. Single digit
    /// entries may be juxtaposed; use commas for arities above 9.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        for chunk in text.split('(').skip(1) {
            let body = chunk
                .split(')')
                .next()
                .ok_or_else(|| OperadError::InvalidPermutation(text.to_string()))?;
            let entries: Vec<usize> = if body.contains(',') {
                body.split(',')
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| OperadError::InvalidPermutation(text.to_string()))?
            } else {
                body.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| c.to_digit(10).map(|d| d as usize))
                    .collect::<Option<_>>()
                    .ok_or_else(|| OperadError::InvalidPermutation(text.to_string()))?
            };
            if !entries.is_empty() {
                cycles.push(entries);
            }
        }
        Self::from_cycles(n, &cycles)
    }

    /// Builds `σ` from its image list `(σ(1), …, σ(n))`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let inv = Permutation::from_seq(images.to_vec())?;
        Ok(inv.inverse())
    }

    pub fn arity(&self) -> usize {
        self.seq.len()
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    /// `σ(i)` for `1 ≤ i ≤ n`.
    pub fn apply(&self, i: usize) -> usize {
        self.seq.iter().position(|&v| v == i).map(|p| p + 1).expect("point in range")
    }

    /// `σ⁻¹(j)`.
    pub fn apply_inverse(&self, j: usize) -> usize {
        self.seq[j - 1]
    }

    /// `(σ(1), …, σ(n))`.
    pub fn images(&self) -> Vec<usize> {
        let mut img = vec![0; self.seq.len()];
        for (pos, &v) in self.seq.iter().enumerate() {
            img[v - 1] = pos + 1;
        }
        img
    }

    pub fn is_identity(&self) -> bool {
        self.seq.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// The product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.arity() != other.arity() {
            return Err(OperadError::ArityMismatch {
                expected: self.arity(),
                found: other.arity(),
            });
        }
        // (στ)⁻¹(j) = τ⁻¹(σ⁻¹(j))
        let seq = self.seq.iter().map(|&v| other.seq[v - 1]).collect();
        Ok(Permutation { seq })
    }

    pub fn inverse(&self) -> Permutation {
        Permutation { seq: self.images() }
    }

    pub fn sign(&self) -> i32 {
        let n = self.arity();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.seq[x] - 1;
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// A word `[k₁, …, k_r]` with `σ = s_{k₁} ⋯ s_{k_r}` of minimal length.
    pub fn adjacent_word(&self) -> Vec<usize> {
        let mut images = self.images();
        let mut word = Vec::new();
        // Peel right descents: if w(i) > w(i+1) then w = (w s_i) s_i.
        loop {
            let Some(i) = (0..images.len().saturating_sub(1)).find(|&i| images[i] > images[i + 1])
            else {
                break;
            };
            images.swap(i, i + 1);
            word.push(i + 1);
        }
        word.reverse();
        word
    }

    /// Number of inversions (Coxeter length).
    pub fn length(&self) -> usize {
        let s = &self.seq;
        let mut count = 0;
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                if s[a] > s[b] {
                    count += 1;
                }
            }
        }
        count
    }

    /// The image `σ(I)` of a subset.
    pub fn image_of_set(&self, subset: &[usize]) -> Vec<usize> {
        let img = self.images();
        let mut out: Vec<usize> = subset.iter().map(|&i| img[i - 1]).collect();
        out.sort_unstable();
        out
    }

    /// Lexicographic rank of the sequence among all of `S_n`.
    pub fn lex_rank(&self) -> usize {
        let n = self.seq.len();
        let mut rank = 0;
        let mut used = vec![false; n + 1];
        for (pos, &v) in self.seq.iter().enumerate() {
            let smaller = (1..v).filter(|&u| !used[u]).count();
            rank += smaller * factorial(n - pos - 1);
            used[v] = true;
        }
        rank
    }

    /// Inverse of [`Permutation::lex_rank`].
    pub fn from_lex_rank(n: usize, mut rank: usize) -> Permutation {
        let mut avail: Vec<usize> = (1..=n).collect();
        let mut seq = Vec::with_capacity(n);
        for pos in 0..n {
            let f = factorial(n - pos - 1);
            let idx = rank / f;
            rank %= f;
            seq.push(avail.remove(idx));
        }
        Permutation { seq }
    }

    /// All of `S_n` in lexicographic order of sequences.
    pub fn all(n: usize) -> Vec<Permutation> {
        (0..factorial(n)).map(|r| Permutation::from_lex_rank(n, r)).collect()
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
        Permutation::from_lex_rank(n, rng.gen_range(0..factorial(n)))
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// The block permutation `ϑ_{n;k₁,…,k_n}(σ, σ₁, …, σ_n) ∈ S_{k₁+⋯+k_n}`.
///
/// In sequence form the result is the concatenation of the shifted blocks
/// `m_j + seq(σ_j)` taken in the order `j = σ⁻¹(1), …, σ⁻¹(n)`.
pub fn block_permutation(sigma: &Permutation, blocks: &[Permutation]) -> Result<Permutation> {
    let n = sigma.arity();
    if blocks.len() != n {
        return Err(OperadError::ArityMismatch {
            expected: n,
            found: blocks.len(),
        });
    }
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0;
    for b in blocks {
        offsets.push(total);
        total += b.arity();
    }
    let mut seq = Vec::with_capacity(total);
    for &j in sigma.seq() {
        let off = offsets[j - 1];
        seq.extend(blocks[j - 1].seq().iter().map(|&v| v + off));
    }
    Ok(Permutation { seq })
}

/// `ϑ` with the identity in every slot except slot `i`.
pub fn block_embedding(arities: &[usize], i: usize, sigma_i: &Permutation) -> Result<Permutation> {
    if i == 0 || i > arities.len() || arities[i - 1] != sigma_i.arity() {
        return Err(OperadError::InvalidSubset(format!(
            "block {i} of arities {arities:?} cannot hold {sigma_i}"
        )));
    }
    let blocks: Vec<Permutation> = arities
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            if k + 1 == i {
                sigma_i.clone()
            } else {
                Permutation::identity(a)
            }
        })
        .collect();
    block_permutation(&Permutation::identity(arities.len()), &blocks)
}

/// Validates that `subset` is a strictly increasing list inside `[n]`.
pub fn check_subset(n: usize, subset: &[usize]) -> Result<()> {
    let ok = subset.iter().all(|&i| i >= 1 && i <= n) && subset.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(OperadError::InvalidSubset(format!("{subset:?} in [{n}]")))
    }
}

pub fn complement(n: usize, subset: &[usize]) -> Vec<usize> {
    (1..=n).filter(|i| !subset.contains(i)).collect()
}

/// `c_I`: sequence listing the complement of `I` ascending, then `I` ascending.
pub fn c_of(n: usize, subset: &[usize]) -> Result<Permutation> {
    check_subset(n, subset)?;
    let mut seq = complement(n, subset);
    seq.extend_from_slice(subset);
    Ok(Permutation { seq })
}

/// Restriction of `σ` to the positions `I`: delete the letters outside `I`
/// from the sequence and relabel the survivors order-preservingly. This is
/// `π^I(σ)` computed inside the associative operad.
pub fn perm_restrict(sigma: &Permutation, subset: &[usize]) -> Result<Permutation> {
    check_subset(sigma.arity(), subset)?;
    let seq = sigma
        .seq()
        .iter()
        .filter_map(|v| subset.iter().position(|s| s == v).map(|p| p + 1))
        .collect();
    Ok(Permutation { seq })
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < n - (k - 1 - pos) {
                cur[pos] += 1;
                for q in pos + 1..k {
                    cur[q] = cur[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All subsets of `[n]`, ordered by size and then lexicographically.
pub fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (0..=n).flat_map(|k| subsets_of_size(n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(seq: &[usize]) -> Permutation {
        Permutation::from_seq(seq.to_vec()).unwrap()
    }

    #[test]
    fn identity_and_sign() {
        let s = p(&[2, 3, 1]);
        assert_eq!(Permutation::identity(3).compose(&s).unwrap(), s);
        assert_eq!(Permutation::transposition(2, 1).unwrap().sign(), -1);
        assert_eq!(p(&[2, 3, 1]).sign(), 1);
    }

    #[test]
    fn inverse_of_312() {
        let s = p(&[3, 1, 2]);
        let inv = s.inverse();
        assert_eq!(inv, p(&[2, 3, 1]));
        assert!(s.compose(&inv).unwrap().is_identity());
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(Permutation::from_seq(vec![1, 1]).is_err());
        assert!(Permutation::from_seq(vec![0, 1]).is_err());
        assert!(p(&[1, 2]).compose(&p(&[1])).is_err());
    }

    #[test]
    fn cycle_parsing_matches_sequence() {
        // σ = (14)(235): σ(1)=4, σ(2)=3, σ(3)=5, σ(4)=1, σ(5)=2
        let s = Permutation::parse_cycles(5, "(14)(235)").unwrap();
        assert_eq!(s.seq(), &[4, 5, 2, 1, 3]);
        assert_eq!(s.apply(3), 5);
    }

    #[test]
    fn block_permutation_examples() {
        let swap = Permutation::transposition(2, 1).unwrap();
        let id2 = Permutation::identity(2);
        let r = block_permutation(&swap, &[id2.clone(), id2.clone()]).unwrap();
        assert_eq!(r.seq(), &[3, 4, 1, 2]);
        let r = block_permutation(&Permutation::identity(3), &[id2.clone(), Permutation::identity(0), id2])
            .unwrap();
        assert!(r.is_identity());
        assert_eq!(r.arity(), 4);
    }

    #[test]
    fn c_of_examples() {
        assert_eq!(c_of(5, &[2, 4]).unwrap().seq(), &[1, 3, 5, 2, 4]);
        assert!(c_of(4, &[]).unwrap().is_identity());
        assert!(c_of(4, &[1, 2, 3, 4]).unwrap().is_identity());
        assert!(c_of(3, &[4]).is_err());
    }

    #[test]
    fn restriction_example() {
        let s = Permutation::parse_cycles(5, "(14)(235)").unwrap();
        let r = perm_restrict(&s, &[2, 4]).unwrap();
        assert_eq!(r, Permutation::transposition(2, 1).unwrap());
        assert_eq!(perm_restrict(&s, &[1, 2, 3, 4, 5]).unwrap(), s);
        assert!(perm_restrict(&Permutation::identity(5), &[1, 3, 4]).unwrap().is_identity());
        // the contraction Γ^{2,4} = π^{1,3,5} gives the 3-cycle (123)
        let g = perm_restrict(&s, &[1, 3, 5]).unwrap();
        assert_eq!(g, Permutation::parse_cycles(3, "(123)").unwrap());
    }

    #[test]
    fn words_and_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..7 {
            for _ in 0..20 {
                let s = Permutation::random(n, &mut rng);
                let word = s.adjacent_word();
                assert_eq!(word.len(), s.length());
                let mut acc = Permutation::identity(n);
                for k in word {
                    acc = acc.compose(&Permutation::transposition(n, k).unwrap()).unwrap();
                }
                assert_eq!(acc, s);
                assert_eq!(Permutation::from_lex_rank(n, s.lex_rank()), s);
            }
        }
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets_of_size(4, 2).len(), 6);
        assert_eq!(subsets_of_size(4, 2)[0], vec![1, 2]);
        assert_eq!(subsets_of_size(4, 2)[5], vec![3, 4]);
        assert_eq!(subsets_of_size(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets_of_size(2, 3).is_empty());
        assert_eq!(all_subsets(3).len(), 8);
    }
}
