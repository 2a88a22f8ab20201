//! Constructions of concrete operads.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OperadError, Result};
use crate::linalg::{self, q, RMatrix, SRow, Subspace, Q};
use crate::operad::{GrowthCertificate, OperadRule, TableRule, TruncatedOperad};
use crate::perm::{self, binomial, factorial, Permutation};

fn e0() -> SRow {
    vec![(0, Q::one())]
}

// ----- associative operad ---------------------------------------------------

/// `As(n) = kS_n`; basis ordered lexicographically by sequence.
struct AsRule {
    horizon: usize,
}

impl OperadRule for AsRule {
    fn name(&self) -> String {
        "As".into()
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn dim(&self, n: usize) -> usize {
        factorial(n)
    }
    fn label(&self, n: usize, b: usize) -> String {
        Permutation::from_lex_rank(n, b).to_string()
    }
    fn compose_basis(&self, m: usize, i: usize, a: usize, n: usize, b: usize) -> SRow {
        let s = Permutation::from_lex_rank(m, a);
        let t = Permutation::from_lex_rank(n, b);
        let mut seq = Vec::with_capacity(m + n - 1);
        for &j in s.seq() {
            if j < i {
                seq.push(j);
            } else if j == i {
                seq.extend(t.seq().iter().map(|&v| v + i - 1));
            } else {
                seq.push(j + n - 1);
            }
        }
        let r = Permutation::from_seq(seq).expect("block substitution is a permutation");
        vec![(r.lex_rank(), Q::one())]
    }
    fn act_generator(&self, n: usize, k: usize, a: usize) -> SRow {
        let s = Permutation::from_lex_rank(n, a);
        let t = Permutation::transposition(n, k).expect("valid generator");
        vec![(s.compose(&t).expect("same arity").lex_rank(), Q::one())]
    }
    fn act_perm(&self, _n: usize, sigma: &Permutation, a: usize) -> Option<SRow> {
        let s = Permutation::from_lex_rank(sigma.arity(), a);
        Some(vec![(s.compose(sigma).ok()?.lex_rank(), Q::one())])
    }
    fn unit(&self) -> SRow {
        e0()
    }
    fn zero_unit(&self) -> Option<SRow> {
        Some(e0())
    }
}

/// The associative operad with its 2-unit `1₂ = id ∈ S_2`.
pub fn build_as(horizon: usize) -> Result<TruncatedOperad> {
    check_horizon(horizon)?;
    let p = TruncatedOperad::new(AsRule { horizon });
    designate_if_possible(p)
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        return Err(OperadError::InvalidInput("horizon must be at least 1".into()));
    }
    if horizon > 12 {
        return Err(OperadError::InvalidInput(format!("horizon {horizon} is too large")));
    }
    Ok(())
}

fn designate_if_possible(p: TruncatedOperad) -> Result<TruncatedOperad> {
    if p.horizon() >= 2 && p.is_unitary() {
        match p.designate_two_unit() {
            Ok(q) => Ok(q),
            Err(OperadError::NoTwoUnit(_)) => Ok(p),
            Err(e) => Err(e),
        }
    } else {
        Ok(p)
    }
}

/// The element `Φ_n = Σ sgn(σ) σ` of `As(n)`.
pub fn phi(as_operad: &TruncatedOperad, n: usize) -> Result<crate::operad::Element> {
    as_operad.check_arity(n)?;
    if as_operad.dim(n) != factorial(n) {
        return Err(OperadError::InvalidInput(format!(
            "{} is not the associative operad",
            as_operad.name()
        )));
    }
    let coords = Permutation::all(n)
        .iter()
        .map(|s| q(s.sign() as i64))
        .collect();
    as_operad.element(n, coords)
}

// ----- commutative and unit operads -----------------------------------------

struct ComRule {
    horizon: usize,
}

impl OperadRule for ComRule {
    fn name(&self) -> String {
        "Com".into()
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn dim(&self, _n: usize) -> usize {
        1
    }
    fn label(&self, n: usize, _b: usize) -> String {
        format!("1_{n}")
    }
    fn compose_basis(&self, _m: usize, _i: usize, _a: usize, _n: usize, _b: usize) -> SRow {
        e0()
    }
    fn act_generator(&self, _n: usize, _k: usize, _a: usize) -> SRow {
        e0()
    }
    fn unit(&self) -> SRow {
        e0()
    }
    fn zero_unit(&self) -> Option<SRow> {
        Some(e0())
    }
}

pub fn build_com(horizon: usize) -> Result<TruncatedOperad> {
    check_horizon(horizon)?;
    let p = TruncatedOperad::new(ComRule { horizon })
        .with_certificate(Some(GrowthCertificate::TruncationVanishes { from: 1 }));
    designate_if_possible(p)
}

struct UniRule {
    horizon: usize,
}

impl OperadRule for UniRule {
    fn name(&self) -> String {
        "Uni".into()
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn dim(&self, n: usize) -> usize {
        usize::from(n <= 1)
    }
    fn label(&self, n: usize, _b: usize) -> String {
        format!("1_{n}")
    }
    fn compose_basis(&self, _m: usize, _i: usize, _a: usize, _n: usize, _b: usize) -> SRow {
        e0()
    }
    fn act_generator(&self, _n: usize, _k: usize, _a: usize) -> SRow {
        e0()
    }
    fn unit(&self) -> SRow {
        e0()
    }
    fn zero_unit(&self) -> Option<SRow> {
        Some(e0())
    }
}

/// The initial unitary operad: `Uni(0) = Uni(1) = k`, zero above.
pub fn build_uni(horizon: usize) -> Result<TruncatedOperad> {
    check_horizon(horizon)?;
    Ok(TruncatedOperad::new(UniRule { horizon }).with_certificate(Some(GrowthCertificate::FiniteSupport)))
}

// ----- augmented algebras and D_A ---------------------------------------------

/// An augmented associative algebra `A = k1 ⊕ Ā` with basis `δ_1, …, δ_d` of
/// `Ā`; `omega[i][j][k]` is the coefficient of `δ_k` in `δ_i δ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedAlgebra {
    pub d: usize,
    pub omega: Vec<Vec<Vec<Q>>>,
}

impl AugmentedAlgebra {
    pub fn new(d: usize, omega: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        let a = AugmentedAlgebra { d, omega };
        a.validate()?;
        Ok(a)
    }

    pub fn zero(d: usize) -> Self {
        AugmentedAlgebra {
            d,
            omega: vec![vec![linalg::zeros(d); d]; d],
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.d;
        if self.omega.len() != d
            || self.omega.iter().any(|r| r.len() != d || r.iter().any(|c| c.len() != d))
        {
            return Err(OperadError::Schema(format!("omega must be a {d}×{d}×{d} array")));
        }
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    let left = self.mul(&self.mul(&basis_vec(d, i), &basis_vec(d, j)), &basis_vec(d, l));
                    let right = self.mul(&basis_vec(d, i), &self.mul(&basis_vec(d, j), &basis_vec(d, l)));
                    if left != right {
                        return Err(OperadError::NotAssociative(format!(
                            "(δ{}δ{})δ{} ≠ δ{}(δ{}δ{})",
                            i + 1,
                            j + 1,
                            l + 1,
                            i + 1,
                            j + 1,
                            l + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Product in `Ā` of coordinate vectors.
    pub fn mul(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = linalg::zeros(self.d);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, o) in self.omega[i][j].iter().enumerate() {
                    if !o.is_zero() {
                        out[k] += &c * o;
                    }
                }
            }
        }
        out
    }

    /// A pseudo-random associative algebra: a nilpotent model algebra in a
    /// random integral basis. Deterministic in `seed`.
    pub fn random(d: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = if d >= 3 && rng.gen_bool(0.5) {
            upper_triangular_plus_truncated(d)
        } else {
            truncated_polynomial(d)
        };
        loop {
            let p: Vec<Vec<Q>> = (0..d)
                .map(|_| (0..d).map(|_| q(rng.gen_range(-2..=2))).collect())
                .collect();
            if let Some(pinv) = invert(&p) {
                return base.change_basis(&p, &pinv);
            }
        }
    }

    /// New basis `b_i = Σ_a p[i][a] δ_a`.
    fn change_basis(&self, p: &[Vec<Q>], pinv: &[Vec<Q>]) -> Self {
        let d = self.d;
        let mut omega = vec![vec![linalg::zeros(d); d]; d];
        for i in 0..d {
            for j in 0..d {
                let prod = self.mul(&p[i], &p[j]);
                // express prod (in δ coordinates) in b coordinates: c = prod · pinv
                for k in 0..d {
                    let mut c = Q::zero();
                    for a in 0..d {
                        c += &prod[a] * &pinv[a][k];
                    }
                    omega[i][j][k] = c;
                }
            }
        }
        AugmentedAlgebra { d, omega }
    }
}

fn basis_vec(d: usize, i: usize) -> Vec<Q> {
    linalg::unit_vector(d, i)
}

/// `x k[x]/(x^{d+1})` with basis `x, …, x^d`.
fn truncated_polynomial(d: usize) -> AugmentedAlgebra {
    let mut a = AugmentedAlgebra::zero(d);
    for i in 0..d {
        for j in 0..d {
            if i + j + 1 < d {
                a.omega[i][j][i + j + 1] = Q::one();
            }
        }
    }
    a
}

/// Strictly upper triangular 3×3 matrices, times a truncated polynomial
/// algebra on the remaining basis vectors.
fn upper_triangular_plus_truncated(d: usize) -> AugmentedAlgebra {
    let mut a = AugmentedAlgebra::zero(d);
    // δ1 = E12, δ2 = E23, δ3 = E13 with E12·E23 = E13
    a.omega[0][1][2] = Q::one();
    let rest = truncated_polynomial(d - 3);
    for i in 0..d - 3 {
        for j in 0..d - 3 {
            for k in 0..d - 3 {
                a.omega[i + 3][j + 3][k + 3] = rest.omega[i][j][k].clone();
            }
        }
    }
    a
}

/// Inverse of a square matrix, if invertible.
pub fn invert(p: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let d = p.len();
    let mut aug: Vec<Vec<Q>> = p
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend(linalg::unit_vector(d, i));
            r
        })
        .collect();
    for c in 0..d {
        let piv = (c..d).find(|&r| !aug[r][c].is_zero())?;
        aug.swap(c, piv);
        let inv = aug[c][c].recip();
        for x in aug[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..d {
            if r != c && !aug[r][c].is_zero() {
                let f = aug[r][c].clone();
                let row_c = aug[c].clone();
                for (x, y) in aug[r].iter_mut().zip(row_c) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// `D_A`: `D(n)` has basis `1_n` and `δ^n_{(i)j}` (1 ≤ i ≤ n, 1 ≤ j ≤ d).
struct DRule {
    horizon: usize,
    alg: AugmentedAlgebra,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DBasis {
    One,
    Delta(usize, usize),
}

impl DRule {
    fn decode(&self, n: usize, a: usize) -> DBasis {
        if a == 0 {
            DBasis::One
        } else {
            let _ = n;
            let k = a - 1;
            DBasis::Delta(k / self.alg.d + 1, k % self.alg.d + 1)
        }
    }
    fn encode(&self, x: DBasis) -> usize {
        match x {
            DBasis::One => 0,
            DBasis::Delta(i, j) => 1 + (i - 1) * self.alg.d + (j - 1),
        }
    }
}

impl OperadRule for DRule {
    fn name(&self) -> String {
        format!("D_A(d={})", self.alg.d)
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn dim(&self, n: usize) -> usize {
        1 + n * self.alg.d
    }
    fn label(&self, n: usize, b: usize) -> String {
        match self.decode(n, b) {
            DBasis::One => format!("1_{n}"),
            DBasis::Delta(i, j) => format!("d^{n}_({i}){j}"),
        }
    }
    fn compose_basis(&self, m: usize, i: usize, a: usize, n: usize, b: usize) -> SRow {
        use DBasis::*;
        let x = self.decode(m, a);
        let y = self.decode(n, b);
        match (x, y) {
            (One, One) => e0(),
            (One, Delta(k, l)) => vec![(self.encode(Delta(k + i - 1, l)), Q::one())],
            (Delta(s, t), One) => {
                if s < i {
                    vec![(self.encode(Delta(s, t)), Q::one())]
                } else if s == i {
                    (i..i + n).map(|h| (self.encode(Delta(h, t)), Q::one())).collect()
                } else {
                    vec![(self.encode(Delta(s + n - 1, t)), Q::one())]
                }
            }
            (Delta(s, t), Delta(k, l)) => {
                if s != i {
                    return Vec::new();
                }
                self.alg.omega[t - 1][l - 1]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(v, c)| (self.encode(Delta(i + k - 1, v + 1)), c.clone()))
                    .collect()
            }
        }
    }
    fn act_generator(&self, n: usize, k: usize, a: usize) -> SRow {
        match self.decode(n, a) {
            DBasis::One => e0(),
            DBasis::Delta(i, j) => {
                let i2 = if i == k {
                    k + 1
                } else if i == k + 1 {
                    k
                } else {
                    i
                };
                vec![(self.encode(DBasis::Delta(i2, j)), Q::one())]
            }
        }
    }
    fn unit(&self) -> SRow {
        e0()
    }
    fn zero_unit(&self) -> Option<SRow> {
        Some(e0())
    }
}

/// The operad `D_A` of an augmented algebra.
pub fn build_d(alg: &AugmentedAlgebra, horizon: usize) -> Result<TruncatedOperad> {
    check_horizon(horizon)?;
    alg.validate()?;
    let from = if alg.d == 0 { 1 } else { 2 };
    let p = TruncatedOperad::new(DRule {
        horizon,
        alg: alg.clone(),
    })
    .with_certificate(Some(GrowthCertificate::TruncationVanishes { from }));
    designate_if_possible(p)
}

/// `D^𝓘_A` for a descending chain of ideals `I_α = span{δ_j : j ∈ T_α}`,
/// `α ≥ 2`. `chain[0]` is `T_2`; a short chain repeats its last entry.
pub fn build_d_chain(alg: &AugmentedAlgebra, chain: &[Vec<usize>], horizon: usize) -> Result<TruncatedOperad> {
    check_horizon(horizon)?;
    alg.validate()?;
    if chain.is_empty() {
        return Err(OperadError::InvalidChain("the chain must contain at least T_2".into()));
    }
    let d = alg.d;
    let t_of = |alpha: usize| -> &Vec<usize> { &chain[(alpha - 2).min(chain.len() - 1)] };
    for t in chain {
        perm::check_subset(d, t).map_err(|e| OperadError::InvalidChain(e.to_string()))?;
    }
    let in_span = |v: &[Q], t: &[usize]| v.iter().enumerate().all(|(k, c)| c.is_zero() || t.contains(&(k + 1)));
    for alpha in 2..=horizon.max(2) {
        let t = t_of(alpha);
        if alpha > 2 && !t.iter().all(|j| t_of(alpha - 1).contains(j)) {
            return Err(OperadError::InvalidChain(format!("T_{alpha} ⊄ T_{}", alpha - 1)));
        }
        for &j in t {
            for s in 1..=d {
                if !in_span(&alg.omega[s - 1][j - 1], t) || !in_span(&alg.omega[j - 1][s - 1], t) {
                    return Err(OperadError::InvalidChain(format!(
                        "I_{alpha} is not an ideal: δ{s}·δ{j} or δ{j}·δ{s} leaves it"
                    )));
                }
            }
        }
        for beta in 2..=horizon {
            if alpha + beta - 1 > horizon {
                break;
            }
            let target = t_of(alpha + beta - 1);
            for &j in t {
                for &l in t_of(beta) {
                    if !in_span(&alg.omega[j - 1][l - 1], target) {
                        return Err(OperadError::InvalidChain(format!(
                            "I_{alpha}·I_{beta} ⊄ I_{}",
                            alpha + beta - 1
                        )));
                    }
                }
            }
        }
    }
    let parent = DRule {
        horizon,
        alg: alg.clone(),
    };
    // chosen parent basis indices per arity
    let chosen: Vec<Vec<usize>> = (0..=horizon)
        .map(|n| match n {
            0 => vec![0],
            1 => (0..parent.dim(1)).collect(),
            _ => {
                let t = t_of(n);
                (1..=n)
                    .flat_map(|i| t.iter().map(move |&j| (i, j)))
                    .map(|(i, j)| parent.encode(DBasis::Delta(i, j)))
                    .collect()
            }
        })
        .collect();
    let name = format!("D^I_A(d={d})");
    let table = restrict_rule(&parent, &chosen, name)?;
    Ok(TruncatedOperad::new(table)
        .with_certificate(Some(GrowthCertificate::TruncationVanishes { from: 2 })))
}

/// Restricts a rule to the span of chosen basis vectors in each arity; fails
/// if the span is not closed.
fn restrict_rule(parent: &dyn OperadRule, chosen: &[Vec<usize>], name: String) -> Result<TableRule> {
    let index: Vec<HashMap<usize, usize>> = chosen
        .iter()
        .map(|c| c.iter().enumerate().map(|(k, &a)| (a, k)).collect())
        .collect();
    let remap = |n: usize, r: SRow| -> Result<SRow> {
        r.into_iter()
            .map(|(a, c)| {
                index[n]
                    .get(&a)
                    .map(|&k| (k, c))
                    .ok_or_else(|| OperadError::InvalidChain(format!("arity {n} is not closed")))
            })
            .collect()
    };
    let dims: Vec<usize> = chosen.iter().map(Vec::len).collect();
    let labels = chosen
        .iter()
        .enumerate()
        .map(|(n, c)| c.iter().map(|&a| parent.label(n, a)).collect())
        .collect();
    let failure = std::sync::Mutex::new(None);
    let table = TableRule::build(
        name,
        dims,
        labels,
        |m, i, a, n, b| {
            let r = parent.compose_basis(m, i, chosen[m][a], n, chosen[n][b]);
            remap(m + n - 1, r).unwrap_or_else(|e| {
                *failure.lock().expect("lock") = Some(e);
                Vec::new()
            })
        },
        |n, k, a| {
            let r = parent.act_generator(n, k, chosen[n][a]);
            remap(n, r).unwrap_or_else(|e| {
                *failure.lock().expect("lock") = Some(e);
                Vec::new()
            })
        },
        remap(1, parent.unit())?,
        match parent.zero_unit() {
            Some(z) => Some(remap(0, z)?),
            None => None,
        },
    );
    if let Some(e) = failure.into_inner().expect("lock") {
        return Err(e);
    }
    Ok(table)
}

// ----- S_w-modules and signature operads -----------------------------------

/// A finite-dimensional right `S_w`-module, given by the matrices of the
/// adjacent transpositions `s_1, …, s_{w-1}` (column convention).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwModule {
    pub w: usize,
    pub d: usize,
    pub generators: Vec<RMatrix>,
}

impl SwModule {
    pub fn new(w: usize, d: usize, generators: Vec<RMatrix>) -> Result<Self> {
        let m = SwModule { w, d, generators };
        m.validate()?;
        Ok(m)
    }

    pub fn trivial(w: usize, d: usize) -> Self {
        SwModule {
            w,
            d,
            generators: (1..w).map(|_| RMatrix::identity(d)).collect(),
        }
    }

    /// The sign representation tensored `d` times.
    pub fn sign(w: usize, d: usize) -> Self {
        let mut neg = RMatrix::identity(d);
        for row in &mut neg.data {
            for e in row.iter_mut() {
                e.1 = -e.1.clone();
            }
        }
        SwModule {
            w,
            d,
            generators: (1..w).map(|_| neg.clone()).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.w == 0 {
            return Err(OperadError::InvalidInput("w must be at least 1".into()));
        }
        if self.generators.len() != self.w - 1 {
            return Err(OperadError::Schema(format!(
                "an S_{}-module needs {} generator matrices",
                self.w,
                self.w - 1
            )));
        }
        for g in &self.generators {
            if g.rows != self.d || g.cols != self.d {
                return Err(OperadError::DimensionMismatch {
                    expected: self.d,
                    found: g.rows.max(g.cols),
                });
            }
        }
        check_coxeter(&self.generators, self.d)
            .map_err(|e| OperadError::InvalidInput(format!("not an S_{}-module: {e}", self.w)))
    }

    /// `v ∗ τ` for `τ ∈ S_w` on a coordinate vector.
    pub fn act(&self, v: &[(usize, Q)], tau: &Permutation) -> SRow {
        let mut cur = v.to_vec();
        for k in tau.adjacent_word() {
            cur = self.generators[k - 1].apply_sparse(&cur);
        }
        cur
    }
}

/// Checks the Coxeter presentation on matrices of `s_1, …, s_{w-1}`.
pub fn check_coxeter(gens: &[RMatrix], d: usize) -> std::result::Result<(), String> {
    let id = RMatrix::identity(d);
    for (k, g) in gens.iter().enumerate() {
        if g.mul(g).map_err(|e| e.to_string())? != id {
            return Err(format!("s_{}² ≠ 1", k + 1));
        }
        if k + 1 < gens.len() {
            let h = &gens[k + 1];
            let ghg = g.mul(h).and_then(|x| x.mul(g)).map_err(|e| e.to_string())?;
            let hgh = h.mul(g).and_then(|x| x.mul(h)).map_err(|e| e.to_string())?;
            if ghg != hgh {
                return Err(format!("braid relation fails for s_{}, s_{}", k + 1, k + 2));
            }
        }
        for (l, h) in gens.iter().enumerate().skip(k + 2) {
            let gh = g.mul(h).map_err(|e| e.to_string())?;
            let hg = h.mul(g).map_err(|e| e.to_string())?;
            if gh != hg {
                return Err(format!("s_{} and s_{} do not commute", k + 1, l + 1));
            }
        }
    }
    Ok(())
}

/// The operad with `P(n) = k1_n ⊕ C^n_w(V)`: `C^n_w(V)` has basis pairs
/// `(δ_j, I)` with `|I| = n - w`, the slots of `I` being passive.
struct SignatureRule {
    horizon: usize,
    module: SwModule,
    subsets: Vec<Vec<Vec<usize>>>,
    subset_index: Vec<HashMap<Vec<usize>, usize>>,
}

impl SignatureRule {
    fn new(module: SwModule, horizon: usize) -> Self {
        let w = module.w;
        let subsets: Vec<Vec<Vec<usize>>> = (0..=horizon)
            .map(|n| if n >= w { perm::subsets_of_size(n, n - w) } else { Vec::new() })
            .collect();
        let subset_index = subsets
            .iter()
            .map(|s| s.iter().enumerate().map(|(k, i)| (i.clone(), k)).collect())
            .collect();
        SignatureRule {
            horizon,
            module,
            subsets,
            subset_index,
        }
    }

    fn decode(&self, n: usize, a: usize) -> Option<(usize, &Vec<usize>)> {
        if a == 0 {
            return None;
        }
        let c = self.subsets[n].len();
        let k = a - 1;
        Some((k / c, &self.subsets[n][k % c]))
    }

    fn encode(&self, n: usize, j: usize, subset: &[usize]) -> usize {
        1 + j * self.subsets[n].len() + self.subset_index[n][subset]
    }
}

impl OperadRule for SignatureRule {
    fn name(&self) -> String {
        format!("Sig(w={},d={})", self.module.w, self.module.d)
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn dim(&self, n: usize) -> usize {
        1 + self.module.d * self.subsets[n].len()
    }
    fn label(&self, n: usize, b: usize) -> String {
        match self.decode(n, b) {
            None => format!("1_{n}"),
            Some((j, i)) => format!("(d{},{:?})", j + 1, i),
        }
    }
    fn compose_basis(&self, m: usize, s: usize, a: usize, n: usize, b: usize) -> SRow {
        let target = m + n - 1;
        match (self.decode(m, a), self.decode(n, b)) {
            (None, None) => e0(),
            (None, Some((j, inner))) => {
                let mut subset: Vec<usize> = (1..s).collect();
                subset.extend(inner.iter().map(|&x| x + s - 1));
                subset.extend(n + s..=n + m - 1);
                vec![(self.encode(target, j, &subset), Q::one())]
            }
            (Some((j, outer)), None) => {
                let below: Vec<usize> = outer.iter().copied().filter(|&x| x < s).collect();
                let above: Vec<usize> = outer.iter().filter(|&&x| x > s).map(|&x| x + n - 1).collect();
                let block: Vec<usize> = (s..s + n).collect();
                let assemble = |mid: &[usize]| -> Vec<usize> {
                    let mut v = below.clone();
                    v.extend_from_slice(mid);
                    v.extend_from_slice(&above);
                    v
                };
                if outer.contains(&s) {
                    vec![(self.encode(target, j, &assemble(&block)), Q::one())]
                } else {
                    // Leibniz rule: one of the new slots stays active
                    (0..n)
                        .map(|u| {
                            let mid: Vec<usize> =
                                block.iter().copied().filter(|&x| x != s + u).collect();
                            (self.encode(target, j, &assemble(&mid)), Q::one())
                        })
                        .collect::<BTreeMap<usize, Q>>()
                        .into_iter()
                        .collect()
                }
            }
            (Some(_), Some(_)) => Vec::new(),
        }
    }
    fn act_generator(&self, n: usize, k: usize, a: usize) -> SRow {
        let Some((j, subset)) = self.decode(n, a) else {
            return e0();
        };
        let sigma = Permutation::transposition(n, k).expect("valid generator");
        // σ⁻¹(I) = σ(I) for an involution
        let moved = sigma.image_of_set(subset);
        let active = perm::complement(n, &moved);
        let tau = perm::perm_restrict(&sigma, &active).expect("subset of [n]");
        let v = self.module.act(&[(j, Q::one())], &tau);
        let mut out: SRow = v
            .into_iter()
            .map(|(l, c)| (self.encode(n, l, &moved), c))
            .collect();
        out.sort_by_key(|e| e.0);
        out
    }
    fn unit(&self) -> SRow {
        e0()
    }
    fn zero_unit(&self) -> Option<SRow> {
        Some(e0())
    }
}

/// The 2-unitary operad with a single nonzero signature entry `f(w) = dim V`.
pub fn build_signature_operad(
    w: usize,
    module: &SwModule,
    horizon: usize,
    products: Option<&AugmentedAlgebra>,
) -> Result<TruncatedOperad> {
    check_horizon(horizon)?;
    module.validate()?;
    if w != module.w {
        return Err(OperadError::InvalidInput(format!(
            "module is an S_{}-module, expected S_{w}",
            module.w
        )));
    }
    if let Some(alg) = products {
        let nonzero = alg.omega.iter().flatten().flatten().any(|c| !c.is_zero());
        if nonzero {
            return Err(OperadError::InvalidInput(if w == 1 {
                "for w = 1 the module must carry the zero multiplication; use build_d for other products"
                    .into()
            } else {
                format!("an S_{w}-module carries no products for w = {w}")
            }));
        }
    }
    let p = TruncatedOperad::new(SignatureRule::new(module.clone(), horizon))
        .with_certificate(Some(GrowthCertificate::TruncationVanishes { from: w + 1 }));
    designate_if_possible(p)
}

// ----- sums ------------------------------------------------------------------

struct Summand {
    op: TruncatedOperad,
    ones: Vec<SRow>,
    aug: Vec<Subspace>,
}

impl Summand {
    /// Splits `x ∈ P(n)` as `α 1_n + u`; returns `(α, coordinates of u)`.
    fn split(&self, n: usize, x: &SRow) -> (Q, Vec<Q>) {
        let alpha = if n == 0 {
            x.first().map(|e| e.1.clone()).unwrap_or_else(Q::zero)
        } else {
            // π^∅(x) = α·1_0 since ^1U = ker π^∅ and π^∅(1_n) = 1_0
            let mut cur = x.clone();
            let z = self.op.rule().zero_unit().expect("unitary");
            for (ar, j) in (1..=n).rev().map(|j| (j, j)) {
                cur = self.op.compose_sparse(ar, j, &cur, 0, &z);
            }
            cur.first().map(|e| e.1.clone()).unwrap_or_else(Q::zero)
        };
        let u = linalg::axpy(x, &-alpha.clone(), &self.ones[n]);
        let coords = self.aug[n].coordinates(&u).expect("u lies in the augmentation ideal");
        (alpha, coords)
    }
}

struct ComSumRule {
    name: String,
    horizon: usize,
    parts: Vec<Summand>,
    offsets: Vec<Vec<usize>>,
}

impl ComSumRule {
    fn locate(&self, n: usize, a: usize) -> Option<(usize, usize)> {
        if a == 0 {
            return None;
        }
        let offs = &self.offsets[n];
        let s = (0..self.parts.len()).rev().find(|&s| offs[s] <= a).expect("index in range");
        Some((s, a - offs[s]))
    }

    fn lift(&self, n: usize, a: usize) -> (usize, SRow) {
        match self.locate(n, a) {
            None => (usize::MAX, Vec::new()),
            Some((s, r)) => (s, self.parts[s].aug[n].rows()[r].clone()),
        }
    }

    fn embed(&self, s: usize, n: usize, x: &SRow) -> SRow {
        let (alpha, coords) = self.parts[s].split(n, x);
        let mut out = Vec::new();
        if !alpha.is_zero() {
            out.push((0, alpha));
        }
        for (k, c) in coords.into_iter().enumerate() {
            if !c.is_zero() {
                out.push((self.offsets[n][s] + k, c));
            }
        }
        out
    }
}

impl OperadRule for ComSumRule {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn dim(&self, n: usize) -> usize {
        1 + self.parts.iter().map(|p| p.aug[n].dim()).sum::<usize>()
    }
    fn label(&self, n: usize, b: usize) -> String {
        match self.locate(n, b) {
            None => format!("1_{n}"),
            Some((s, r)) => format!("u[{s}].{r}"),
        }
    }
    fn compose_basis(&self, m: usize, i: usize, a: usize, n: usize, b: usize) -> SRow {
        let t = m + n - 1;
        let (sa, xa) = self.lift(m, a);
        let (sb, xb) = self.lift(n, b);
        match (a == 0, b == 0) {
            (true, true) => e0(),
            (true, false) => {
                let p = &self.parts[sb];
                self.embed(sb, t, &p.op.compose_sparse(m, i, &p.ones[m], n, &xb))
            }
            (false, true) => {
                let p = &self.parts[sa];
                self.embed(sa, t, &p.op.compose_sparse(m, i, &xa, n, &p.ones[n]))
            }
            (false, false) => {
                if sa != sb {
                    return Vec::new();
                }
                let p = &self.parts[sa];
                self.embed(sa, t, &p.op.compose_sparse(m, i, &xa, n, &xb))
            }
        }
    }
    fn act_generator(&self, n: usize, k: usize, a: usize) -> SRow {
        if a == 0 {
            return e0();
        }
        let (s, x) = self.lift(n, a);
        let p = &self.parts[s];
        let sigma = Permutation::transposition(n, k).expect("valid generator");
        self.embed(s, n, &p.op.act_sparse(n, &x, &sigma))
    }
    fn unit(&self) -> SRow {
        e0()
    }
    fn zero_unit(&self) -> Option<SRow> {
        Some(e0())
    }
}

/// Checks that `1_n` spans a trivial `S_n`-submodule and that `n ↦ 1_n` is a
/// morphism from `Com`.
pub fn check_com_augmented(p: &TruncatedOperad) -> Result<TruncatedOperad> {
    let p = if p.two_unit().is_some() {
        p.clone()
    } else {
        p.designate_two_unit()
            .map_err(|e| OperadError::NotComAugmented(format!("{}: {e}", p.name())))?
    };
    let n_max = p.horizon();
    let ones: Vec<_> = (0..=n_max).map(|n| p.one_n(n)).collect::<Result<_>>()?;
    for n in 2..=n_max {
        for k in 1..n {
            let t = Permutation::transposition(n, k)?;
            if p.act(&ones[n], &t)? != ones[n] {
                return Err(OperadError::NotComAugmented(format!(
                    "{}: 1_{n} ∗ s_{k} ≠ 1_{n}",
                    p.name()
                )));
            }
        }
    }
    for m in 1..=n_max {
        for n in 0..=n_max + 1 - m {
            for i in 1..=m {
                if p.partial_compose(&ones[m], i, &ones[n])? != ones[m + n - 1] {
                    return Err(OperadError::NotComAugmented(format!(
                        "{}: 1_{m} ∘_{i} 1_{n} ≠ 1_{}",
                        p.name(),
                        m + n - 1
                    )));
                }
            }
        }
    }
    Ok(p)
}

/// `Com`-augmented sum `P₁ ⊕_Com ⋯ ⊕_Com P_r`.
pub fn com_augmented_sum(parts: &[TruncatedOperad]) -> Result<TruncatedOperad> {
    let Some(first) = parts.first() else {
        return Err(OperadError::InvalidInput("empty sum".into()));
    };
    let horizon = first.horizon();
    let mut summands = Vec::new();
    let mut certificate_from = Some(1usize);
    for p in parts {
        if p.horizon() != horizon {
            return Err(OperadError::InvalidInput(format!(
                "horizon mismatch: {} vs {}",
                horizon,
                p.horizon()
            )));
        }
        let p = check_com_augmented(p)?;
        certificate_from = match (certificate_from, p.certificate()) {
            (Some(a), Some(GrowthCertificate::TruncationVanishes { from })) => Some(a.max(from)),
            _ => None,
        };
        let ones: Vec<SRow> = (0..=horizon)
            .map(|n| p.one_n(n).map(|x| x.sparse()))
            .collect::<Result<_>>()?;
        let aug: Vec<Subspace> = (0..=horizon)
            .map(|n| {
                let pi = p.pi_matrix(n, &[])?;
                Ok(linalg::kernel(&pi))
            })
            .collect::<Result<_>>()?;
        summands.push(Summand { op: p, ones, aug });
    }
    let offsets = (0..=horizon)
        .map(|n| {
            let mut acc = 1;
            summands
                .iter()
                .map(|s| {
                    let o = acc;
                    acc += s.aug[n].dim();
                    o
                })
                .collect()
        })
        .collect();
    let name = format!(
        "Sum({})",
        summands.iter().map(|s| s.op.name()).collect::<Vec<_>>().join(",")
    );
    let rule = ComSumRule {
        name,
        horizon,
        parts: summands,
        offsets,
    };
    let table = TableRule::from_operad(&TruncatedOperad::new(rule));
    let p = TruncatedOperad::new(table).with_certificate(
        certificate_from.map(|from| GrowthCertificate::TruncationVanishes { from }),
    );
    designate_if_possible(p)
}

/// A 2-unitary operad with prescribed signature `(f(1), f(2), …)`, built as
/// the `Com`-augmented sum of single-signature blocks with trivial modules.
pub fn build_from_signature(signature: &[usize], horizon: usize) -> Result<TruncatedOperad> {
    check_horizon(horizon)?;
    if signature.len() > horizon {
        return Err(OperadError::HorizonExceeded {
            arity: signature.len(),
            horizon,
        });
    }
    let mut blocks = Vec::new();
    for (k, &d) in signature.iter().enumerate() {
        if d > 0 {
            let w = k + 1;
            blocks.push(build_signature_operad(w, &SwModule::trivial(w, d), horizon, None)?);
        }
    }
    if blocks.is_empty() {
        return build_com(horizon);
    }
    let mut p = com_augmented_sum(&blocks)?;
    let name = format!(
        "FromSignature({})",
        signature.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    );
    let mut table = p.materialize();
    table.name = name;
    let cert = p.certificate();
    let two = p.two_unit().map(|x| x.sparse());
    p = TruncatedOperad::new(table).with_certificate(cert);
    p.set_two_unit_unchecked(two);
    Ok(p)
}

/// The suboperad of `P` spanned by `spaces[n] ⊆ P(n)`; coordinates follow the
/// canonical bases of the subspaces. Fails if the family is not closed.
pub fn suboperad(p: &TruncatedOperad, spaces: &[Subspace], name: String) -> Result<TruncatedOperad> {
    if spaces.len() != p.horizon() + 1 {
        return Err(OperadError::InvalidInput("one subspace per arity is required".into()));
    }
    let coords = |n: usize, x: &SRow| -> Result<SRow> {
        spaces[n]
            .coordinates(x)
            .map(|c| linalg::to_sparse(&c))
            .ok_or_else(|| OperadError::NotSubmodule(format!("the family is not closed in arity {n}")))
    };
    let dims: Vec<usize> = spaces.iter().map(Subspace::dim).collect();
    let labels = dims
        .iter()
        .enumerate()
        .map(|(n, &d)| (0..d).map(|k| format!("b{n}.{k}")).collect())
        .collect();
    let failure = std::sync::Mutex::new(None);
    let record = |e: OperadError| {
        *failure.lock().expect("lock") = Some(e);
        Vec::new()
    };
    let table = TableRule::build(
        name,
        dims,
        labels,
        |m, i, a, n, b| {
            let r = p.compose_sparse(m, i, &spaces[m].rows()[a], n, &spaces[n].rows()[b]);
            coords(m + n - 1, &r).unwrap_or_else(record)
        },
        |n, k, a| {
            let s = Permutation::transposition(n, k).expect("valid generator");
            let r = p.act_sparse(n, &spaces[n].rows()[a], &s);
            coords(n, &r).unwrap_or_else(record)
        },
        coords(1, &p.rule().unit())?,
        match p.rule().zero_unit() {
            Some(z) if spaces[0].contains_sparse(&z) => Some(coords(0, &z)?),
            _ => None,
        },
    );
    if let Some(e) = failure.into_inner().expect("lock") {
        return Err(e);
    }
    Ok(TruncatedOperad::new(table))
}

/// The unitary operad `k1₁ ⊕ ⨁_k ^kU_Q(k)` for `Q = build_from_signature(d)`;
/// its generating function is `1 + (d₁+1)t + Σ d_i t^i`.
pub fn unitary_from_signature(signature: &[usize], horizon: usize) -> Result<TruncatedOperad> {
    let qop = build_from_signature(signature, horizon)?;
    let mut spaces = Vec::new();
    for n in 0..=horizon {
        let s = if n <= 1 {
            Subspace::full(qop.dim(n))
        } else {
            crate::truncation::trunc_ideal(&qop, n)?.component(n).clone()
        };
        spaces.push(s);
    }
    let name = format!(
        "UnitaryFromSignature({})",
        signature.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(suboperad(&qop, &spaces, name)?.with_certificate(Some(GrowthCertificate::FiniteSupport)))
}

/// Hadamard (arity-wise tensor) product.
pub fn hadamard(p: &TruncatedOperad, r: &TruncatedOperad) -> Result<TruncatedOperad> {
    if p.horizon() != r.horizon() {
        return Err(OperadError::InvalidInput(format!(
            "horizon mismatch: {} vs {}",
            p.horizon(),
            r.horizon()
        )));
    }
    let horizon = p.horizon();
    let dims: Vec<usize> = (0..=horizon).map(|n| p.dim(n) * r.dim(n)).collect();
    let labels = (0..=horizon)
        .map(|n| {
            let lp = p.labels(n);
            let lr = r.labels(n);
            lp.iter()
                .flat_map(|a| lr.iter().map(move |b| format!("{a}⊗{b}")))
                .collect()
        })
        .collect();
    let tensor = |dr: usize, x: &SRow, y: &SRow| -> SRow {
        let mut out: SRow = x
            .iter()
            .flat_map(|(a, ca)| y.iter().map(move |(b, cb)| (a * dr + b, ca * cb)))
            .collect();
        out.sort_by_key(|e| e.0);
        out
    };
    let (pr, rr) = (p.rule().clone(), r.rule().clone());
    let table = TableRule::build(
        format!("{}⊗{}", p.name(), r.name()),
        dims,
        labels,
        |m, i, a, n, b| {
            let (dm, dn) = (r.dim(m), r.dim(n));
            let x = pr.compose_basis(m, i, a / dm, n, b / dn);
            let y = rr.compose_basis(m, i, a % dm, n, b % dn);
            tensor(r.dim(m + n - 1), &x, &y)
        },
        |n, k, a| {
            let dn = r.dim(n);
            let x = pr.act_generator(n, k, a / dn);
            let y = rr.act_generator(n, k, a % dn);
            tensor(dn, &x, &y)
        },
        tensor(r.dim(1), &pr.unit(), &rr.unit()),
        match (pr.zero_unit(), rr.zero_unit()) {
            (Some(x), Some(y)) => Some(tensor(r.dim(0), &x, &y)),
            _ => None,
        },
    );
    designate_if_possible(TruncatedOperad::new(table))
}

/// An `S`-module with `M(0) = 0`, given arity-wise by generator matrices.
#[derive(Clone, Debug)]
pub struct SModuleSpec {
    pub dims: Vec<usize>,
    pub generators: Vec<Vec<RMatrix>>,
}

impl SModuleSpec {
    /// Trivial modules of the given dimensions.
    pub fn trivial(dims: Vec<usize>) -> Self {
        let generators = dims
            .iter()
            .enumerate()
            .map(|(n, &d)| (1..n).map(|_| RMatrix::identity(d)).collect())
            .collect();
        SModuleSpec { dims, generators }
    }
}

/// `Uni ⊕ M` with all compositions among elements of `M` equal to zero.
pub fn build_uni_plus_m(m: &SModuleSpec) -> Result<TruncatedOperad> {
    if m.dims.is_empty() || m.dims[0] != 0 {
        return Err(OperadError::InvalidInput("M(0) must vanish".into()));
    }
    let horizon = m.dims.len() - 1;
    check_horizon(horizon)?;
    for (n, g) in m.generators.iter().enumerate() {
        if g.len() != n.saturating_sub(1) {
            return Err(OperadError::Schema(format!("arity {n} needs {} generators", n.saturating_sub(1))));
        }
        check_coxeter(g, m.dims[n]).map_err(|e| OperadError::InvalidInput(format!("arity {n}: {e}")))?;
    }
    // P(1) = k1₁ ⊕ M(1): index 0 is 1₁; elsewhere M(n) directly (P(0) = k1₀).
    let off = |n: usize| usize::from(n <= 1);
    let dims: Vec<usize> = (0..=horizon).map(|n| m.dims[n] + off(n)).collect();
    let labels = (0..=horizon)
        .map(|n| {
            (0..dims[n])
                .map(|b| if b < off(n) { format!("1_{n}") } else { format!("m{n}.{}", b - off(n)) })
                .collect()
        })
        .collect();
    let table = TableRule::build(
        "Uni+M".into(),
        dims,
        labels,
        |mm, i, a, n, b| {
            let t = mm + n - 1;
            let a_unit = mm <= 1 && a == 0;
            let b_unit = n <= 1 && b == 0;
            match (a_unit, b_unit) {
                // 1₁∘1₁, 1₁∘1₀
                (true, true) => e0(),
                // 1₁ ∘ θ = θ
                (true, false) => vec![(b, Q::one())],
                (false, true) => {
                    if n == 1 {
                        vec![(a, Q::one())]
                    } else {
                        Vec::new()
                    }
                }
                (false, false) => {
                    let _ = (i, t);
                    Vec::new()
                }
            }
        },
        |n, k, a| {
            let o = off(n);
            let r = m.generators[n][k - 1].column(a - o);
            r.into_iter().map(|(x, c)| (x + o, c)).collect()
        },
        e0(),
        Some(e0()),
    );
    Ok(TruncatedOperad::new(table).with_certificate(Some(GrowthCertificate::FiniteSupport)))
}

/// Convenience: the quotient `As/^kU` style constructions live in
/// [`crate::ideal`]; this returns all the named builtins at a horizon.
pub fn builtin(name: &str, horizon: usize) -> Result<TruncatedOperad> {
    match name {
        "as" | "As" => build_as(horizon),
        "com" | "Com" => build_com(horizon),
        "uni" | "Uni" => build_uni(horizon),
        other => Err(OperadError::InvalidInput(format!("unknown builtin operad {other:?}"))),
    }
}

pub fn binomial_dims(signature: &[usize], n: usize) -> usize {
    1 + signature
        .iter()
        .enumerate()
        .map(|(k, &f)| f * binomial(n, k + 1))
        .sum::<usize>()
}
