//! Truncation ideals `^kU(n) = ⋂_{|I|=k-1} ker π^I` and the signature.

use num_traits::One;
use rayon::prelude::*;

use crate::error::{OperadError, Result};
use crate::linalg::{self, kernel_of_rows, RMatrix, SRow, Subspace};
use crate::operad::TruncatedOperad;
use crate::perm::{self, Permutation};

/// A family of subspaces `S(n) ⊆ P(n)`, `0 ≤ n ≤ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubSModule {
    spaces: Vec<Subspace>,
}

impl SubSModule {
    pub fn new(spaces: Vec<Subspace>) -> Self {
        SubSModule { spaces }
    }

    pub fn zero(p: &TruncatedOperad) -> Self {
        SubSModule {
            spaces: (0..=p.horizon()).map(|n| Subspace::zero(p.dim(n))).collect(),
        }
    }

    pub fn full(p: &TruncatedOperad) -> Self {
        SubSModule {
            spaces: (0..=p.horizon()).map(|n| Subspace::full(p.dim(n))).collect(),
        }
    }

    pub fn component(&self, n: usize) -> &Subspace {
        &self.spaces[n]
    }

    pub fn components(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn horizon(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    pub fn contains(&self, other: &SubSModule) -> bool {
        self.spaces.len() == other.spaces.len()
            && self.spaces.iter().zip(&other.spaces).all(|(a, b)| a.contains_subspace(b))
    }

    pub fn sum(&self, other: &SubSModule) -> Result<SubSModule> {
        Ok(SubSModule {
            spaces: self
                .spaces
                .iter()
                .zip(&other.spaces)
                .map(|(a, b)| a.sum(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn intersect(&self, other: &SubSModule) -> Result<SubSModule> {
        Ok(SubSModule {
            spaces: self
                .spaces
                .par_iter()
                .zip(&other.spaces)
                .map(|(a, b)| a.intersect(b))
                .collect::<Result<_>>()?,
        })
    }

    /// Checks `S_n`-stability in every arity.
    pub fn is_smodule(&self, p: &TruncatedOperad) -> bool {
        (0..self.spaces.len()).all(|n| is_stable(p, n, &self.spaces[n]))
    }
}

/// `S_n`-stability of a subspace of `P(n)`.
pub fn is_stable(p: &TruncatedOperad, n: usize, s: &Subspace) -> bool {
    (1..n).all(|k| {
        let t = Permutation::transposition(n, k).expect("generator");
        s.rows().iter().all(|r| s.contains_sparse(&p.act_sparse(n, r, &t)))
    })
}

fn require_unitary(p: &TruncatedOperad) -> Result<()> {
    if p.is_unitary() {
        Ok(())
    } else {
        Err(OperadError::NotUnitary(format!(
            "{}: truncation needs P(0) = k·1_0",
            p.name()
        )))
    }
}

/// Constraint rows of all `π^I`, `|I| = size`, on `P(n)`.
fn contraction_rows(p: &TruncatedOperad, n: usize, size: usize) -> Result<Vec<SRow>> {
    let subsets = perm::subsets_of_size(n, size);
    let blocks: Vec<RMatrix> = subsets
        .par_iter()
        .map(|i| p.pi_matrix(n, i))
        .collect::<Result<_>>()?;
    Ok(blocks.into_iter().flat_map(|b| b.data).collect())
}

/// `^kU(n)`.
pub fn trunc_component(p: &TruncatedOperad, k: usize, n: usize) -> Result<Subspace> {
    require_unitary(p)?;
    p.check_arity(n)?;
    let d = p.dim(n);
    if k == 0 {
        return Ok(Subspace::full(d));
    }
    if n < k {
        return Ok(Subspace::zero(d));
    }
    let rows = contraction_rows(p, n, k - 1)?;
    Ok(kernel_of_rows(d, &rows))
}

/// The truncation ideal `^kU` at every arity up to the horizon.
pub fn trunc_ideal(p: &TruncatedOperad, k: usize) -> Result<SubSModule> {
    require_unitary(p)?;
    let spaces = (0..=p.horizon())
        .into_par_iter()
        .map(|n| trunc_component(p, k, n))
        .collect::<Result<_>>()?;
    Ok(SubSModule { spaces })
}

/// All truncation ideals `^0U ⊇ ^1U ⊇ ⋯ ⊇ ^{N+1}U = 0` up to the horizon.
#[derive(Clone, Debug)]
pub struct Ladder {
    /// `levels[k][n] = ^kU(n)`.
    levels: Vec<Vec<Subspace>>,
}

impl Ladder {
    pub fn compute(p: &TruncatedOperad) -> Result<Ladder> {
        require_unitary(p)?;
        let n_max = p.horizon();
        let jobs: Vec<(usize, usize)> = (0..=n_max + 1)
            .flat_map(|k| (0..=n_max).map(move |n| (k, n)))
            .collect();
        let spaces: Vec<Subspace> = jobs
            .par_iter()
            .map(|&(k, n)| trunc_component(p, k, n))
            .collect::<Result<_>>()?;
        let mut levels = vec![Vec::new(); n_max + 2];
        for ((k, _), s) in jobs.into_iter().zip(spaces) {
            levels[k].push(s);
        }
        Ok(Ladder { levels })
    }

    pub fn get(&self, k: usize, n: usize) -> &Subspace {
        let k = k.min(self.levels.len() - 1);
        &self.levels[k][n]
    }

    pub fn ideal(&self, k: usize) -> SubSModule {
        SubSModule::new(self.levels[k.min(self.levels.len() - 1)].clone())
    }

    pub fn horizon(&self) -> usize {
        self.levels[0].len() - 1
    }

    /// `f(k) = dim ^kU(k)` for `k = 1, …, N`.
    pub fn signature(&self) -> Vec<usize> {
        (1..=self.horizon()).map(|k| self.get(k, k).dim()).collect()
    }

    /// `dim ^kU(n)` table indexed `[k][n]`.
    pub fn dim_table(&self) -> Vec<Vec<usize>> {
        self.levels
            .iter()
            .map(|l| l.iter().map(Subspace::dim).collect())
            .collect()
    }
}

/// The signature `(dim ^1U(1), …, dim ^NU(N))`.
pub fn signature(p: &TruncatedOperad) -> Result<Vec<usize>> {
    require_unitary(p)?;
    (1..=p.horizon())
        .into_par_iter()
        .map(|k| trunc_component(p, k, k).map(|s| s.dim()))
        .collect()
}

/// `^kU^M(n) = {μ ∈ ^kU(n) : π^I(μ) ∈ M for all |I| = k}` for an
/// `S_k`-submodule `M ⊆ ^kU(k)`.
pub fn trunc_ideal_m(p: &TruncatedOperad, k: usize, m: &Subspace) -> Result<SubSModule> {
    require_unitary(p)?;
    p.check_arity(k)?;
    if k == 0 {
        return Err(OperadError::InvalidInput("k must be at least 1".into()));
    }
    let top = trunc_component(p, k, k)?;
    if m.ambient() != p.dim(k) || !top.contains_subspace(m) {
        return Err(OperadError::NotSubmodule(format!("M is not contained in ^{k}U({k})")));
    }
    if !is_stable(p, k, m) {
        return Err(OperadError::NotSubmodule(format!("M is not S_{k}-stable")));
    }
    let ann = m.annihilator();
    let spaces = (0..=p.horizon())
        .into_par_iter()
        .map(|n| {
            let d = p.dim(n);
            if n < k {
                return Ok(Subspace::zero(d));
            }
            let mut rows = contraction_rows(p, n, k - 1)?;
            for i in perm::subsets_of_size(n, k) {
                let pi = p.pi_matrix(n, &i)?;
                for a in ann.rows() {
                    // row a·π^I as a functional on P(n)
                    let mut acc = std::collections::BTreeMap::new();
                    for (r, c) in a {
                        linalg::accumulate(&mut acc, c, &pi.data[*r]);
                    }
                    rows.push(linalg::map_to_row(acc));
                }
            }
            Ok(kernel_of_rows(d, &rows))
        })
        .collect::<Result<_>>()?;
    Ok(SubSModule::new(spaces))
}

/// Dimensions of the subspaces of `M ⊆ P(n)` on which `S_n` acts trivially,
/// respectively by the sign.
pub fn one_dim_submodules(p: &TruncatedOperad, n: usize, m: &Subspace) -> Result<(usize, usize)> {
    let (fix, sgn) = isotypic_lines(p, n, m)?;
    Ok((fix.dim(), sgn.dim()))
}

/// The trivial and sign isotypic parts of `M ⊆ P(n)`.
pub fn isotypic_lines(p: &TruncatedOperad, n: usize, m: &Subspace) -> Result<(Subspace, Subspace)> {
    p.check_arity(n)?;
    if m.ambient() != p.dim(n) {
        return Err(OperadError::DimensionMismatch {
            expected: p.dim(n),
            found: m.ambient(),
        });
    }
    let d = p.dim(n);
    let id = RMatrix::identity(d);
    let mut fix_rows = Vec::new();
    let mut sgn_rows = Vec::new();
    for g in p.action_generators(n) {
        fix_rows.extend(g.sub(&id)?.data);
        let neg = RMatrix {
            rows: d,
            cols: d,
            data: id.data.iter().map(|r| linalg::scale_row(&-num_rational::BigRational::one(), r)).collect(),
        };
        sgn_rows.extend(g.sub(&neg)?.data);
    }
    let fix = kernel_of_rows(d, &fix_rows).intersect(m)?;
    let sgn = kernel_of_rows(d, &sgn_rows).intersect(m)?;
    Ok((fix, sgn))
}

/// Whether `^kU ≠ ^{k+1}U` somewhere within the horizon.
pub fn is_strict_step(ladder: &Ladder, k: usize) -> bool {
    (0..=ladder.horizon()).any(|n| ladder.get(k, n) != ladder.get(k + 1, n))
}

