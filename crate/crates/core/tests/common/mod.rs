//! Independent reference implementations used as oracles by the integration
//! tests. Apart from the basis indexing in `to_element`/`from_element` (itself
//! checked against `words` in the permutation tests), nothing here calls into
//! the library. `identities` is different: it phrases operator identities as
//! equalities between two library computations.

#![allow(dead_code)]

pub mod identities;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use operad_core::{Element, Permutation};

pub type Word = Vec<usize>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// All permutations of `1..=n` as words, in lexicographic order.
pub fn words(n: usize) -> Vec<Word> {
    fn rec(prefix: &mut Word, left: &mut Vec<usize>, out: &mut Vec<Word>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..left.len() {
            let x = left.remove(k);
            prefix.push(x);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(k, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (1..=n).collect(), &mut out);
    out
}

/// Substitution of words: letter `i` of `mu` is replaced by `nu` shifted by
/// `i-1`; larger letters move up by `|nu| - 1`.
pub fn word_compose(mu: &[usize], i: usize, nu: &[usize]) -> Word {
    let n = nu.len();
    let mut out = Vec::new();
    for &x in mu {
        if x < i {
            out.push(x);
        } else if x == i {
            out.extend(nu.iter().map(|y| y + i - 1));
        } else {
            out.push(x + n - 1);
        }
    }
    out
}

/// Right action on words: letter `x` becomes `sigma[x-1]`.
pub fn word_act(w: &[usize], sigma: &[usize]) -> Word {
    w.iter().map(|&x| sigma[x - 1]).collect()
}

/// Keep only the letters in `subset`, relabelled order-preservingly.
pub fn word_restrict(w: &[usize], subset: &[usize]) -> Word {
    w.iter()
        .filter_map(|x| subset.iter().position(|s| s == x).map(|p| p + 1))
        .collect()
}

pub fn word_inverse(w: &[usize]) -> Word {
    let mut inv = vec![0; w.len()];
    for (pos, &x) in w.iter().enumerate() {
        inv[x - 1] = pos + 1;
    }
    inv
}

/// Sign by counting inversions.
pub fn word_sign(w: &[usize]) -> i64 {
    let mut inv = 0;
    for a in 0..w.len() {
        for b in a + 1..w.len() {
            if w[a] > w[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A linear combination of words.
pub type Combo = BTreeMap<Word, BigRational>;

pub fn combo(terms: &[(&[usize], i64)]) -> Combo {
    let mut c = Combo::new();
    for (w, k) in terms {
        add_term(&mut c, w.to_vec(), q(*k));
    }
    c
}

pub fn add_term(c: &mut Combo, w: Word, k: BigRational) {
    let e = c.entry(w.clone()).or_insert_with(BigRational::zero);
    *e += k;
    if e.is_zero() {
        c.remove(&w);
    }
}

pub fn combo_compose(x: &Combo, i: usize, y: &Combo) -> Combo {
    let mut out = Combo::new();
    for (a, ca) in x {
        for (b, cb) in y {
            add_term(&mut out, word_compose(a, i, b), ca * cb);
        }
    }
    out
}

pub fn combo_act(x: &Combo, sigma: &[usize]) -> Combo {
    let mut out = Combo::new();
    for (a, c) in x {
        add_term(&mut out, word_act(a, sigma), c.clone());
    }
    out
}

/// `π^I` in the associative operad: delete the letters outside `I`.
pub fn combo_restrict(x: &Combo, subset: &[usize]) -> Combo {
    let mut out = Combo::new();
    for (a, c) in x {
        add_term(&mut out, word_restrict(a, subset), c.clone());
    }
    out
}

pub fn identity_word(n: usize) -> Word {
    (1..=n).collect()
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![1usize; row.len() + 1];
        for j in 1..row.len() {
            next[j] = row[j - 1] + row[j];
        }
        row = next;
    }
    row[k]
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// `D(0) = 1, D(1) = 0, D(n) = (n-1)(D(n-1) + D(n-2))`.
pub fn derangements(n: usize) -> Vec<usize> {
    let mut d = vec![1usize, 0];
    for k in 2..=n {
        d.push((k - 1) * (d[k - 1] + d[k - 2]));
    }
    d.truncate(n + 1);
    d
}

pub fn one() -> BigRational {
    BigRational::one()
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for k in 0..m.len() {
            if k != r && !m[k][c].is_zero() {
                let f = &m[k][c] / &piv;
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[k][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Coordinates of a word combination in the basis of `As(n)`.
pub fn to_element(n: usize, c: &Combo) -> Element {
    let mut coords = vec![BigRational::zero(); factorial(n)];
    for (w, k) in c {
        assert_eq!(w.len(), n);
        coords[Permutation::from_seq(w.clone()).unwrap().lex_rank()] = k.clone();
    }
    Element { arity: n, coords }
}

pub fn from_element(e: &Element) -> Combo {
    let mut c = Combo::new();
    for (r, k) in e.coords.iter().enumerate() {
        if !k.is_zero() {
            c.insert(Permutation::from_lex_rank(e.arity, r).seq().to_vec(), k.clone());
        }
    }
    c
}
