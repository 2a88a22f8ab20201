//! Arity-truncated symmetric operads with exact rational structure constants.
//!
//! An operad is given by an [`OperadRule`]: a basis of each component `P(n)`
//! for `n ≤ N`, the partial compositions `∘_i` on basis elements, and the
//! action of the adjacent transpositions. Builtin operads implement the rule
//! in closed form; derived operads (quotients, sums, tensor products,
//! associated graded objects, files) are materialized as [`TableRule`]s.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{OperadError, Result};
use crate::linalg::{self, accumulate, map_to_row, RMatrix, SRow, Q};
use crate::perm::{self, Permutation};

pub trait OperadRule: Send + Sync {
    fn name(&self) -> String;
    /// Largest arity `N` that is represented.
    fn horizon(&self) -> usize;
    fn dim(&self, n: usize) -> usize;
    fn label(&self, _n: usize, b: usize) -> String {
        format!("e{b}")
    }
    /// `e_a ∘_i e_b` for `e_a ∈ P(m)`, `e_b ∈ P(n)`, `m ≥ 1`, `m+n-1 ≤ N`.
    fn compose_basis(&self, m: usize, i: usize, a: usize, n: usize, b: usize) -> SRow;
    /// `e_a ∗ s_k` for the adjacent transposition `s_k ∈ S_n`.
    fn act_generator(&self, n: usize, k: usize, a: usize) -> SRow;
    /// Optional direct formula for `e_a ∗ σ`.
    fn act_perm(&self, _n: usize, _sigma: &Permutation, _a: usize) -> Option<SRow> {
        None
    }
    /// The identity `1 ∈ P(1)`.
    fn unit(&self) -> SRow;
    /// The basis element `1_0` of a unitary operad.
    fn zero_unit(&self) -> Option<SRow>;
}

/// Certificate from a builder about the growth of the operad beyond its
/// horizon, used to report the Gelfand–Kirillov dimension as exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthCertificate {
    /// `^kU(n) = 0` for all `k ≥ from` and all arities.
    TruncationVanishes { from: usize },
    /// `P(n) = 0` for all sufficiently large `n`.
    FiniteSupport,
}

/// An element of `P(n)` in coordinates over the basis of `P(n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    pub arity: usize,
    pub coords: Vec<Q>,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{}](", self.arity)?;
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{}·e{}", linalg::format_q(c), k)?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl Element {
    pub fn zero(arity: usize, dim: usize) -> Self {
        Element {
            arity,
            coords: linalg::zeros(dim),
        }
    }

    pub fn from_sparse(arity: usize, dim: usize, v: &[(usize, Q)]) -> Self {
        Element {
            arity,
            coords: linalg::to_dense(dim, v),
        }
    }

    pub fn sparse(&self) -> SRow {
        linalg::to_sparse(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.combine(other, &Q::one())
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.combine(other, &-Q::one())
    }

    /// `self + c·other`.
    pub fn combine(&self, other: &Element, c: &Q) -> Result<Element> {
        if self.arity != other.arity {
            return Err(OperadError::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        if self.dim() != other.dim() {
            return Err(OperadError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Element {
            arity: self.arity,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + c * b).collect(),
        })
    }

    pub fn scale(&self, c: &Q) -> Element {
        Element {
            arity: self.arity,
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }
}

/// An operad truncated at a finite horizon, with optional annotations.
#[derive(Clone)]
pub struct TruncatedOperad {
    rule: Arc<dyn OperadRule>,
    two_unit: Option<SRow>,
    certificate: Option<GrowthCertificate>,
}

impl fmt::Debug for TruncatedOperad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedOperad({}, N={}, dims={:?})", self.name(), self.horizon(), self.dims())
    }
}

impl TruncatedOperad {
    pub fn new<R: OperadRule + 'static>(rule: R) -> Self {
        TruncatedOperad {
            rule: Arc::new(rule),
            two_unit: None,
            certificate: None,
        }
    }

    pub fn from_arc(rule: Arc<dyn OperadRule>) -> Self {
        TruncatedOperad {
            rule,
            two_unit: None,
            certificate: None,
        }
    }

    pub fn rule(&self) -> &Arc<dyn OperadRule> {
        &self.rule
    }

    pub fn with_certificate(mut self, c: Option<GrowthCertificate>) -> Self {
        self.certificate = c;
        self
    }

    pub fn certificate(&self) -> Option<GrowthCertificate> {
        self.certificate
    }

    pub fn name(&self) -> String {
        self.rule.name()
    }

    pub fn horizon(&self) -> usize {
        self.rule.horizon()
    }

    pub fn dim(&self, n: usize) -> usize {
        if n > self.horizon() {
            0
        } else {
            self.rule.dim(n)
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.horizon()).map(|n| self.rule.dim(n)).collect()
    }

    pub fn labels(&self, n: usize) -> Vec<String> {
        (0..self.dim(n)).map(|b| self.rule.label(n, b)).collect()
    }

    pub fn check_arity(&self, n: usize) -> Result<()> {
        if n > self.horizon() {
            Err(OperadError::HorizonExceeded {
                arity: n,
                horizon: self.horizon(),
            })
        } else {
            Ok(())
        }
    }

    fn check_element(&self, x: &Element) -> Result<()> {
        self.check_arity(x.arity)?;
        if x.dim() != self.dim(x.arity) {
            return Err(OperadError::DimensionMismatch {
                expected: self.dim(x.arity),
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub fn basis_element(&self, n: usize, b: usize) -> Result<Element> {
        self.check_arity(n)?;
        if b >= self.dim(n) {
            return Err(OperadError::InvalidInput(format!(
                "basis index {b} out of range for P({n}) of dimension {}",
                self.dim(n)
            )));
        }
        Ok(Element::from_sparse(n, self.dim(n), &[(b, Q::one())]))
    }

    pub fn element(&self, n: usize, coords: Vec<Q>) -> Result<Element> {
        let x = Element { arity: n, coords };
        self.check_element(&x)?;
        Ok(x)
    }

    pub fn zero_element(&self, n: usize) -> Element {
        Element::zero(n, self.dim(n))
    }

    pub fn unit(&self) -> Element {
        Element::from_sparse(1, self.dim(1), &self.rule.unit())
    }

    pub fn zero_unit(&self) -> Option<Element> {
        self.rule.zero_unit().map(|v| Element::from_sparse(0, self.dim(0), &v))
    }

    /// Unitary: `P(0)` is one-dimensional, spanned by the designated `1_0`.
    pub fn is_unitary(&self) -> bool {
        self.dim(0) == 1 && self.rule.zero_unit().is_some()
    }

    fn require_zero_unit(&self) -> Result<Element> {
        self.zero_unit()
            .ok_or_else(|| OperadError::NotUnitary(format!("{} has no designated 1_0", self.name())))
    }

    /// Sparse bilinear partial composition.
    pub fn compose_sparse(&self, m: usize, i: usize, x: &[(usize, Q)], n: usize, y: &[(usize, Q)]) -> SRow {
        let mut acc = BTreeMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                let r = self.rule.compose_basis(m, i, *a, n, *b);
                accumulate(&mut acc, &(ca * cb), &r);
            }
        }
        map_to_row(acc)
    }

    /// `μ ∘_i ν`.
    pub fn partial_compose(&self, mu: &Element, i: usize, nu: &Element) -> Result<Element> {
        self.check_element(mu)?;
        self.check_element(nu)?;
        let (m, n) = (mu.arity, nu.arity);
        if i == 0 || i > m {
            return Err(OperadError::PositionOutOfRange { position: i, arity: m });
        }
        let target = m + n - 1;
        self.check_arity(target)?;
        let r = self.compose_sparse(m, i, &mu.sparse(), n, &nu.sparse());
        Ok(Element::from_sparse(target, self.dim(target), &r))
    }

    /// `θ ∘ (ν₁, …, ν_n)`.
    pub fn full_compose(&self, theta: &Element, nus: &[Element]) -> Result<Element> {
        self.check_element(theta)?;
        if nus.len() != theta.arity {
            return Err(OperadError::ArityMismatch {
                expected: theta.arity,
                found: nus.len(),
            });
        }
        let total: usize = nus.iter().map(|x| x.arity).sum();
        self.check_arity(total)?;
        // Contract the arity-0 inputs first so that intermediate arities
        // never exceed the final one.
        let mut cur = theta.clone();
        let mut remaining: Vec<&Element> = Vec::new();
        for (j, nu) in nus.iter().enumerate().rev() {
            if nu.arity == 0 {
                cur = self.partial_compose(&cur, j + 1, nu)?;
            }
        }
        for nu in nus {
            if nu.arity > 0 {
                remaining.push(nu);
            }
        }
        for (j, nu) in remaining.iter().enumerate().rev() {
            cur = self.partial_compose(&cur, j + 1, nu)?;
        }
        Ok(cur)
    }

    fn act_basis(&self, n: usize, sigma: &Permutation, a: usize) -> SRow {
        if let Some(r) = self.rule.act_perm(n, sigma, a) {
            return r;
        }
        let mut cur: SRow = vec![(a, Q::one())];
        for k in sigma.adjacent_word() {
            let mut acc = BTreeMap::new();
            for (b, c) in &cur {
                accumulate(&mut acc, c, &self.rule.act_generator(n, k, *b));
            }
            cur = map_to_row(acc);
        }
        cur
    }

    pub fn act_sparse(&self, n: usize, x: &[(usize, Q)], sigma: &Permutation) -> SRow {
        let mut acc = BTreeMap::new();
        for (a, c) in x {
            accumulate(&mut acc, c, &self.act_basis(n, sigma, *a));
        }
        map_to_row(acc)
    }

    /// `θ ∗ σ`.
    pub fn act(&self, theta: &Element, sigma: &Permutation) -> Result<Element> {
        self.check_element(theta)?;
        if sigma.arity() != theta.arity {
            return Err(OperadError::ArityMismatch {
                expected: theta.arity,
                found: sigma.arity(),
            });
        }
        let r = self.act_sparse(theta.arity, &theta.sparse(), sigma);
        Ok(Element::from_sparse(theta.arity, theta.dim(), &r))
    }

    /// Matrix of `x ↦ x ∗ s_k` on `P(n)` (column convention).
    pub fn generator_matrix(&self, n: usize, k: usize) -> RMatrix {
        let d = self.dim(n);
        let cols: Vec<SRow> = (0..d).map(|a| self.rule.act_generator(n, k, a)).collect();
        RMatrix::from_columns(d, &cols)
    }

    pub fn action_generators(&self, n: usize) -> Vec<RMatrix> {
        (1..n).map(|k| self.generator_matrix(n, k)).collect()
    }

    /// Matrix of a linear map `P(src) → P(dst)` given on basis vectors.
    pub fn linear_map<F>(&self, src: usize, dst: usize, f: F) -> Result<RMatrix>
    where
        F: Fn(&Element) -> Result<Element> + Sync,
    {
        self.check_arity(src)?;
        self.check_arity(dst)?;
        let cols: Vec<SRow> = (0..self.dim(src))
            .into_par_iter()
            .map(|b| {
                let y = f(&self.basis_element(src, b)?)?;
                if y.arity != dst {
                    return Err(OperadError::ArityMismatch {
                        expected: dst,
                        found: y.arity,
                    });
                }
                Ok(y.sparse())
            })
            .collect::<Result<_>>()?;
        Ok(RMatrix::from_columns(self.dim(dst), &cols))
    }

    // ----- elementary operators -------------------------------------------

    /// `π^I(θ) = θ ∘ (1_{χ_I(1)}, …, 1_{χ_I(n)})`: contract the slots outside `I`.
    pub fn pi(&self, subset: &[usize], theta: &Element) -> Result<Element> {
        self.check_element(theta)?;
        perm::check_subset(theta.arity, subset)?;
        let z = self.require_zero_unit()?;
        let mut cur = theta.clone();
        for j in (1..=theta.arity).rev() {
            if !subset.contains(&j) {
                cur = self.partial_compose(&cur, j, &z)?;
            }
        }
        Ok(cur)
    }

    /// `Γ^I = π^{[n]∖I}`: contract the slots in `I`.
    pub fn gamma(&self, subset: &[usize], theta: &Element) -> Result<Element> {
        perm::check_subset(theta.arity, subset)?;
        self.pi(&perm::complement(theta.arity, subset), theta)
    }

    pub fn pi_matrix(&self, n: usize, subset: &[usize]) -> Result<RMatrix> {
        perm::check_subset(n, subset)?;
        self.require_zero_unit()?;
        self.contraction_matrix(n, subset)
    }

    /// Fast matrix of `π^I` built directly from basis compositions.
    fn contraction_matrix(&self, n: usize, subset: &[usize]) -> Result<RMatrix> {
        let z = self.rule.zero_unit().ok_or_else(|| OperadError::NotUnitary(self.name()))?;
        let d = self.dim(n);
        let cols: Vec<SRow> = (0..d)
            .into_par_iter()
            .map(|a| {
                let mut cur: SRow = vec![(a, Q::one())];
                let mut arity = n;
                for j in (1..=n).rev() {
                    if !subset.contains(&j) {
                        cur = self.compose_sparse(arity, j, &cur, 0, &z);
                        arity -= 1;
                    }
                }
                cur
            })
            .collect();
        Ok(RMatrix::from_columns(self.dim(subset.len()), &cols))
    }

    pub fn two_unit(&self) -> Option<Element> {
        self.two_unit
            .as_ref()
            .map(|v| Element::from_sparse(2, self.dim(2), v))
    }

    fn require_two_unit(&self) -> Result<Element> {
        self.two_unit()
            .ok_or_else(|| OperadError::NoTwoUnit(format!("{} has no designated 2-unit", self.name())))
    }

    /// Solves `π^{{1}}(x) = π^{{2}}(x) = 1₁` in `P(2)`; the least-pivot
    /// solution is returned.
    pub fn find_two_unit(&self) -> Result<Element> {
        if !self.is_unitary() {
            return Err(OperadError::NotUnitary(self.name()));
        }
        if self.horizon() < 2 {
            return Err(OperadError::HorizonExceeded {
                arity: 2,
                horizon: self.horizon(),
            });
        }
        let p1 = self.pi_matrix(2, &[1])?;
        let p2 = self.pi_matrix(2, &[2])?;
        let a = RMatrix::vstack(self.dim(2), &[p1, p2])?;
        let u = self.unit().coords;
        let b: Vec<Q> = u.iter().chain(u.iter()).cloned().collect();
        match linalg::solve(&a, &b)? {
            Some(x) => Ok(Element { arity: 2, coords: x }),
            None => Err(OperadError::NoTwoUnit(format!(
                "the system π^{{1}}(x) = π^{{2}}(x) = 1 has no solution in {}(2)",
                self.name()
            ))),
        }
    }

    pub fn is_two_unit(&self, x: &Element) -> Result<bool> {
        self.check_element(x)?;
        if x.arity != 2 {
            return Ok(false);
        }
        let u = self.unit();
        Ok(self.pi(&[1], x)? == u && self.pi(&[2], x)? == u)
    }

    /// Designates `x` as the 2-unit.
    pub fn with_two_unit(&self, x: &Element) -> Result<Self> {
        if !self.is_two_unit(x)? {
            return Err(OperadError::NoTwoUnit(format!("{x:?} is not a 2-unit")));
        }
        let mut out = self.clone();
        out.two_unit = Some(x.sparse());
        Ok(out)
    }

    /// Designates the canonical solution of [`Self::find_two_unit`].
    pub fn designate_two_unit(&self) -> Result<Self> {
        let x = self.find_two_unit()?;
        self.with_two_unit(&x)
    }

    pub(crate) fn set_two_unit_unchecked(&mut self, x: Option<SRow>) {
        self.two_unit = x;
    }

    /// `1_n` from the recursion `1_n = 1₂ ∘ (1_{n-1}, 1₁)`.
    pub fn one_n(&self, n: usize) -> Result<Element> {
        self.check_arity(n)?;
        match n {
            0 => self.require_zero_unit(),
            1 => Ok(self.unit()),
            _ => {
                let u2 = self.require_two_unit()?;
                let prev = self.one_n(n - 1)?;
                self.partial_compose(&u2, 1, &prev)
            }
        }
    }

    /// `1'_n = 1₂ ∘ (1₁, 1'_{n-1})`.
    pub fn one_prime_n(&self, n: usize) -> Result<Element> {
        self.check_arity(n)?;
        match n {
            0 => self.require_zero_unit(),
            1 => Ok(self.unit()),
            _ => {
                let u2 = self.require_two_unit()?;
                let prev = self.one_prime_n(n - 1)?;
                self.partial_compose(&u2, 2, &prev)
            }
        }
    }

    /// 2a-unitality: `1₂ ∘ (1₂, 1₁) = 1₂ ∘ (1₁, 1₂)`.
    pub fn check_2a(&self) -> Result<bool> {
        let u2 = self.require_two_unit()?;
        self.check_arity(3)?;
        Ok(self.partial_compose(&u2, 1, &u2)? == self.partial_compose(&u2, 2, &u2)?)
    }

    /// `Δ_I(θ) = θ ∘ (1_{χ_I(1)+1}, …)`: insert the 2-unit in the slots of `I`.
    pub fn delta(&self, subset: &[usize], theta: &Element) -> Result<Element> {
        self.check_element(theta)?;
        perm::check_subset(theta.arity, subset)?;
        let u2 = self.require_two_unit()?;
        let mut cur = theta.clone();
        for &j in subset.iter().rev() {
            cur = self.partial_compose(&cur, j, &u2)?;
        }
        Ok(cur)
    }

    /// `ι^l_r(θ) = 1₃ ∘ (1_l, θ, 1_r)`.
    pub fn iota(&self, l: usize, r: usize, theta: &Element) -> Result<Element> {
        self.check_element(theta)?;
        let one3 = self.one_n(3)?;
        let left = self.one_n(l)?;
        let right = self.one_n(r)?;
        self.full_compose(&one3, &[left, theta.clone(), right])
    }

    /// `Λ^n_I(θ) = 1₂ ∘ (θ, 1_{n-k}) ∗ c_I` for `θ ∈ P(k)`, `|I| = n-k`.
    pub fn lambda(&self, theta: &Element, n: usize, subset: &[usize]) -> Result<Element> {
        self.check_element(theta)?;
        perm::check_subset(n, subset)?;
        let k = theta.arity;
        if k + subset.len() != n {
            return Err(OperadError::InvalidSubset(format!(
                "|I| = {} but n - k = {} - {}",
                subset.len(),
                n,
                k
            )));
        }
        let u2 = self.require_two_unit()?;
        let rest = self.one_n(n - k)?;
        let x = self.full_compose(&u2, &[theta.clone(), rest])?;
        self.act(&x, &perm::c_of(n, subset)?)
    }

    /// `Φ`-style alternating sum `Σ sgn(σ) x ∗ σ` over `S_n`.
    pub fn antisymmetrize(&self, x: &Element) -> Result<Element> {
        let mut acc = self.zero_element(x.arity);
        for s in Permutation::all(x.arity) {
            let y = self.act(x, &s)?;
            acc = acc.combine(&y, &Q::from_integer(s.sign().into()))?;
        }
        Ok(acc)
    }

    /// Materializes every structure constant into a table.
    pub fn materialize(&self) -> TableRule {
        TableRule::from_operad(self)
    }
}

/// Fully tabulated operad.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRule {
    pub name: String,
    pub horizon: usize,
    pub dims: Vec<usize>,
    pub labels: Vec<Vec<String>>,
    /// `actions[n][k-1][a] = e_a ∗ s_k`.
    pub actions: Vec<Vec<Vec<SRow>>>,
    /// `(m, i, n) ↦ [a][b] = e_a ∘_i e_b`.
    pub comps: HashMap<(usize, usize, usize), Vec<Vec<SRow>>>,
    pub unit: SRow,
    pub zero_unit: Option<SRow>,
}

/// All `(m, i, n)` with `m ≥ 1`, `1 ≤ i ≤ m`, `m + n - 1 ≤ N`.
pub fn composition_keys(horizon: usize) -> Vec<(usize, usize, usize)> {
    let mut keys = Vec::new();
    for m in 1..=horizon {
        for n in 0..=horizon + 1 - m {
            for i in 1..=m {
                keys.push((m, i, n));
            }
        }
    }
    keys
}

impl TableRule {
    pub fn build<C, A>(
        name: String,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
        compose: C,
        act: A,
        unit: SRow,
        zero_unit: Option<SRow>,
    ) -> TableRule
    where
        C: Fn(usize, usize, usize, usize, usize) -> SRow + Sync,
        A: Fn(usize, usize, usize) -> SRow + Sync,
    {
        let horizon = dims.len() - 1;
        let actions = (0..=horizon)
            .map(|n| {
                (1..n)
                    .map(|k| (0..dims[n]).map(|a| act(n, k, a)).collect())
                    .collect()
            })
            .collect();
        let comps = composition_keys(horizon)
            .into_par_iter()
            .map(|(m, i, n)| {
                let table = (0..dims[m])
                    .map(|a| (0..dims[n]).map(|b| compose(m, i, a, n, b)).collect())
                    .collect();
                ((m, i, n), table)
            })
            .collect();
        TableRule {
            name,
            horizon,
            dims,
            labels,
            actions,
            comps,
            unit,
            zero_unit,
        }
    }

    pub fn from_operad(p: &TruncatedOperad) -> TableRule {
        let dims = p.dims();
        let labels = (0..=p.horizon()).map(|n| p.labels(n)).collect();
        let rule = p.rule.clone();
        let rule2 = p.rule.clone();
        TableRule::build(
            p.name(),
            dims,
            labels,
            move |m, i, a, n, b| rule.compose_basis(m, i, a, n, b),
            move |n, k, a| rule2.act_generator(n, k, a),
            p.rule.unit(),
            p.rule.zero_unit(),
        )
    }
}

impl OperadRule for TableRule {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn horizon(&self) -> usize {
        self.horizon
    }
    fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }
    fn label(&self, n: usize, b: usize) -> String {
        self.labels[n][b].clone()
    }
    fn compose_basis(&self, m: usize, i: usize, a: usize, n: usize, b: usize) -> SRow {
        self.comps[&(m, i, n)][a][b].clone()
    }
    fn act_generator(&self, n: usize, k: usize, a: usize) -> SRow {
        self.actions[n][k - 1][a].clone()
    }
    fn unit(&self) -> SRow {
        self.unit.clone()
    }
    fn zero_unit(&self) -> Option<SRow> {
        self.zero_unit.clone()
    }
}

