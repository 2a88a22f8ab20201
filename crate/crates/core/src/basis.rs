//! The maps `Λ^n_I`, the basis theorem, the codimension recursion and the
//! induced-module functor `C^n_k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builders::{check_coxeter, SwModule};
use crate::error::{OperadError, Result};
use crate::linalg::{self, Echelon, RMatrix, SRow, Subspace, Q};
use crate::operad::{Element, TruncatedOperad};
use crate::perm::{self, binomial, Permutation};
use crate::truncation::{Ladder, SubSModule};

/// `Λ^n_I(θ)` for `θ ∈ ^kU(k)`; checks membership and the orthogonality
/// `Γ^{I'}(Λ^n_I(θ)) = δ_{I,I'} θ`.
pub fn lambda_map(p: &TruncatedOperad, ladder: &Ladder, theta: &Element, n: usize, subset: &[usize]) -> Result<Element> {
    let k = theta.arity;
    if !ladder.get(k, k).contains(&theta.coords) {
        return Err(OperadError::InvalidInput(format!("θ is not in ^{k}U({k})")));
    }
    let x = p.lambda(theta, n, subset)?;
    for other in perm::subsets_of_size(n, n - k) {
        let g = p.gamma(&other, &x)?;
        let expected = if other == subset { theta.clone() } else { p.zero_element(k) };
        if g != expected {
            return Err(OperadError::AxiomViolation(format!(
                "Γ^{other:?}(Λ^{n}_{subset:?}(θ)) has the wrong value"
            )));
        }
    }
    Ok(x)
}

/// `B_k(n)` for `k = 0..n`, ordered by (θ-index, `I` lexicographic).
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub n: usize,
    pub blocks: Vec<Vec<Element>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub n: usize,
    pub block_sizes: Vec<usize>,
    pub expected_sizes: Vec<usize>,
    pub independent_and_spanning: bool,
    pub filtration_ok: bool,
}

impl BasisReport {
    pub fn passed(&self) -> bool {
        self.independent_and_spanning && self.filtration_ok && self.block_sizes == self.expected_sizes
    }
}

pub fn verify_basis_theorem(p: &TruncatedOperad, ladder: &Ladder, n: usize) -> Result<(GradedBasis, BasisReport)> {
    if p.two_unit().is_none() {
        return Err(OperadError::NoTwoUnit(p.name()));
    }
    p.check_arity(n)?;
    let mut blocks = Vec::new();
    for k in 0..=n {
        let mut block = Vec::new();
        for row in ladder.get(k, k).rows() {
            let theta = Element::from_sparse(k, p.dim(k), row);
            for subset in perm::subsets_of_size(n, n - k) {
                block.push(p.lambda(&theta, n, &subset)?);
            }
        }
        blocks.push(block);
    }
    let d = p.dim(n);
    let total: usize = blocks.iter().map(Vec::len).sum();
    let mut ech = Echelon::new(d);
    for b in blocks.iter().flatten() {
        ech.insert(&b.sparse());
    }
    let independent_and_spanning = total == d && ech.rank() == d;
    let mut filtration_ok = true;
    for k in 0..=n {
        let span = Subspace::span_sparse(d, blocks[k..].iter().flatten().map(Element::sparse));
        if &span != ladder.get(k, n) {
            filtration_ok = false;
        }
    }
    let report = BasisReport {
        n,
        block_sizes: blocks.iter().map(Vec::len).collect(),
        expected_sizes: (0..=n).map(|k| ladder.get(k, k).dim() * binomial(n, k)).collect(),
        independent_and_spanning,
        filtration_ok,
    };
    Ok((GradedBasis { n, blocks }, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    /// `f_I(k) = dim (^kU ∩ I)(k)`.
    pub f: Vec<usize>,
    /// `d^k_I(n)` indexed `[k][n]`.
    pub codims: Vec<Vec<usize>>,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `d^{k+1}_I(n) = d^k_I(n) + f_I(k)·C(n,k)` for all `k, n ≤ N`;
/// `ideal = None` means `I = P`.
pub fn recursion_check(p: &TruncatedOperad, ladder: &Ladder, ideal: Option<&SubSModule>) -> Result<RecursionReport> {
    let n_max = p.horizon();
    let full = SubSModule::full(p);
    let ideal = ideal.unwrap_or(&full);
    let mut inter = Vec::new();
    for k in 0..=n_max + 1 {
        let row: Vec<usize> = (0..=n_max)
            .map(|n| ladder.get(k, n).intersect(ideal.component(n)).map(|s| s.dim()))
            .collect::<Result<_>>()?;
        inter.push(row);
    }
    let codims: Vec<Vec<usize>> = inter
        .iter()
        .map(|row| row.iter().enumerate().map(|(n, d)| ideal.component(n).dim() - d).collect())
        .collect();
    let f: Vec<usize> = (0..=n_max).map(|k| inter[k][k]).collect();
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 0..=n_max {
        for n in 0..=n_max {
            checked += 1;
            let lhs = codims[k + 1][n];
            let rhs = codims[k][n] + f[k] * binomial(n, k);
            if lhs != rhs {
                failures.push(format!("d^{}(n={n}) = {lhs} ≠ d^{k}(n) + f({k})C(n,{k}) = {rhs}", k + 1));
            }
        }
    }
    Ok(RecursionReport {
        f,
        codims,
        checked,
        failures,
    })
}

/// `C^n_k(M)`: basis pairs `(m_j, I)` with `|I| = n-k`, ordered by `(j, I)`,
/// and `(m, I) ∗ σ = (m ∗ Γ^{σ⁻¹(I)}(σ), σ⁻¹(I))`.
pub fn induced_module(m: &SwModule, n: usize) -> Result<SwModule> {
    m.validate()?;
    let k = m.w;
    if k > n {
        return Err(OperadError::InvalidInput(format!("k = {k} exceeds n = {n}")));
    }
    let subsets = perm::subsets_of_size(n, n - k);
    let c = subsets.len();
    let d = m.d * c;
    let act = |j: usize, s: usize, sigma: &Permutation| -> SRow {
        let moved = sigma.inverse().image_of_set(&subsets[s]);
        let tau = perm::perm_restrict(sigma, &perm::complement(n, &moved)).expect("subset");
        let t = subsets.iter().position(|x| *x == moved).expect("same size");
        let mut out: SRow = m
            .act(&[(j, Q::from_integer(1.into()))], &tau)
            .into_iter()
            .map(|(l, v)| (l * c + t, v))
            .collect();
        out.sort_by_key(|e| e.0);
        out
    };
    let generators: Vec<RMatrix> = (1..n)
        .map(|g| {
            let s = Permutation::transposition(n, g).expect("generator");
            let cols: Vec<SRow> = (0..d).map(|x| act(x / c, x % c, &s)).collect();
            RMatrix::from_columns(d, &cols)
        })
        .collect();
    check_coxeter(&generators, d).map_err(|e| OperadError::AxiomViolation(format!("C^{n}_{k}: {e}")))?;
    // right-action law on sample pairs, using the direct formula
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..8 {
        if d == 0 {
            break;
        }
        let s = Permutation::random(n, &mut rng);
        let t = Permutation::random(n, &mut rng);
        let x = rng.gen_range(0..d);
        let st = s.compose(&t)?;
        let lhs: SRow = {
            let mut acc = std::collections::BTreeMap::new();
            for (y, v) in act(x / c, x % c, &s) {
                linalg::accumulate(&mut acc, &v, &act(y / c, y % c, &t));
            }
            linalg::map_to_row(acc)
        };
        if lhs != act(x / c, x % c, &st) {
            return Err(OperadError::AxiomViolation(format!(
                "C^{n}_{k}: ((m,I)∗σ)∗τ ≠ (m,I)∗(στ) for σ={s}, τ={t}"
            )));
        }
    }
    Ok(SwModule {
        w: n,
        d,
        generators,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma49Report {
    pub k: usize,
    pub samples: usize,
    pub failures: Vec<String>,
}

/// Checks `Λ^n_I(θ) ∗ σ ≡ Λ^n_{σ⁻¹(I)}(θ ∗ Γ^{σ⁻¹(I)}(σ))` modulo `^{k+1}U(n)`
/// on random `θ ∈ ^kU(k)`, `σ`, `I`.
pub fn lemma49_check(p: &TruncatedOperad, ladder: &Ladder, k: usize, samples: usize, seed: u64) -> Result<Lemma49Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = ladder.get(k, k);
    let mut failures = Vec::new();
    let mut done = 0;
    if top.is_zero() {
        return Ok(Lemma49Report { k, samples: 0, failures });
    }
    for _ in 0..samples {
        let mut theta = p.zero_element(k);
        for row in top.rows() {
            let c = Q::from_integer(rng.gen_range(-3i64..=3).into());
            theta = theta.combine(&Element::from_sparse(k, p.dim(k), row), &c)?;
        }
        let n = rng.gen_range(k..=p.horizon());
        let sigma = Permutation::random(n, &mut rng);
        let subsets = perm::subsets_of_size(n, n - k);
        let subset = &subsets[rng.gen_range(0..subsets.len())];
        let lhs = p.act(&p.lambda(&theta, n, subset)?, &sigma)?;
        let moved = sigma.inverse().image_of_set(subset);
        let tau = perm::perm_restrict(&sigma, &perm::complement(n, &moved))?;
        let rhs = p.lambda(&p.act(&theta, &tau)?, n, &moved)?;
        let diff = lhs.sub(&rhs)?;
        done += 1;
        if !ladder.get(k + 1, n).contains(&diff.coords) {
            failures.push(format!("n={n}, σ={sigma}, I={subset:?}"));
        }
    }
    Ok(Lemma49Report {
        k,
        samples: done,
        failures,
    })
}
