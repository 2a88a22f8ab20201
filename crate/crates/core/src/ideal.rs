//! Operad ideals: membership, generation, products and quotients.

use std::collections::HashMap;

use num_traits::One;

use crate::error::{OperadError, Result};
use crate::linalg::{Echelon, SRow, Subspace, Q};
use crate::operad::{Element, GrowthCertificate, TableRule, TruncatedOperad};
use crate::perm::{self, Permutation};
use crate::truncation::{self, SubSModule};

fn one(a: usize) -> SRow {
    vec![(a, Q::one())]
}

/// Checks that `S` is an `S`-submodule closed under composition with `P` on
/// both sides (within the horizon); reports the first failure.
pub fn check_ideal(p: &TruncatedOperad, s: &SubSModule) -> Result<()> {
    let n_max = p.horizon();
    if s.horizon() != n_max {
        return Err(OperadError::NotAnIdeal("horizon mismatch".into()));
    }
    for n in 0..=n_max {
        if s.component(n).ambient() != p.dim(n) {
            return Err(OperadError::DimensionMismatch {
                expected: p.dim(n),
                found: s.component(n).ambient(),
            });
        }
        if !truncation::is_stable(p, n, s.component(n)) {
            return Err(OperadError::NotAnIdeal(format!("component {n} is not S_{n}-stable")));
        }
    }
    for m in 1..=n_max {
        for n in 0..=n_max + 1 - m {
            let t = m + n - 1;
            let target = s.component(t);
            for i in 1..=m {
                for x in s.component(m).rows() {
                    for b in 0..p.dim(n) {
                        if !target.contains_sparse(&p.compose_sparse(m, i, x, n, &one(b))) {
                            return Err(OperadError::NotAnIdeal(format!(
                                "S({m}) ∘_{i} P({n}) ⊄ S({t})"
                            )));
                        }
                    }
                }
                for a in 0..p.dim(m) {
                    for y in s.component(n).rows() {
                        if !target.contains_sparse(&p.compose_sparse(m, i, &one(a), n, y)) {
                            return Err(OperadError::NotAnIdeal(format!(
                                "P({m}) ∘_{i} S({n}) ⊄ S({t})"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn is_ideal(p: &TruncatedOperad, s: &SubSModule) -> bool {
    check_ideal(p, s).is_ok()
}

/// Saturates `seed` under the symmetric group actions and, when `two_sided`,
/// under composition with arbitrary elements of `P` on either side; otherwise
/// only compositions among members (suboperad generation).
fn saturate(p: &TruncatedOperad, seed: Vec<Vec<SRow>>, two_sided: bool) -> SubSModule {
    let n_max = p.horizon();
    let mut ech: Vec<Echelon> = (0..=n_max).map(|n| Echelon::new(p.dim(n))).collect();
    let mut members: Vec<Vec<SRow>> = vec![Vec::new(); n_max + 1];
    let mut queue: Vec<(usize, SRow)> = Vec::new();
    for (n, vs) in seed.into_iter().enumerate() {
        for v in vs {
            if ech[n].insert(&v) {
                queue.push((n, v));
            }
        }
    }
    let push = |ech: &mut Vec<Echelon>, queue: &mut Vec<(usize, SRow)>, n: usize, v: SRow| {
        if !v.is_empty() && ech[n].insert(&v) {
            queue.push((n, v));
        }
    };
    while let Some((m, v)) = queue.pop() {
        members[m].push(v.clone());
        for k in 1..m {
            let t = Permutation::transposition(m, k).expect("generator");
            let w = p.act_sparse(m, &v, &t);
            push(&mut ech, &mut queue, m, w);
        }
        if two_sided {
            if m >= 1 {
                for n in 0..=n_max + 1 - m {
                    for b in 0..p.dim(n) {
                        for i in 1..=m {
                            let w = p.compose_sparse(m, i, &v, n, &one(b));
                            push(&mut ech, &mut queue, m + n - 1, w);
                        }
                    }
                }
            }
            for l in 1..=n_max {
                if l + m > n_max + 1 {
                    break;
                }
                for a in 0..p.dim(l) {
                    for i in 1..=l {
                        let w = p.compose_sparse(l, i, &one(a), m, &v);
                        push(&mut ech, &mut queue, l + m - 1, w);
                    }
                }
            }
        } else {
            // compose with all previously found members, in both orders
            let others: Vec<(usize, SRow)> = members
                .iter()
                .enumerate()
                .flat_map(|(n, vs)| vs.iter().map(move |x| (n, x.clone())))
                .collect();
            for (n, x) in others {
                if m >= 1 && m + n <= n_max + 1 {
                    for i in 1..=m {
                        let w = p.compose_sparse(m, i, &v, n, &x);
                        push(&mut ech, &mut queue, m + n - 1, w);
                    }
                }
                if n >= 1 && m + n <= n_max + 1 {
                    for i in 1..=n {
                        let w = p.compose_sparse(n, i, &x, m, &v);
                        push(&mut ech, &mut queue, m + n - 1, w);
                    }
                }
            }
        }
    }
    SubSModule::new(ech.into_iter().map(Echelon::into_subspace).collect())
}

fn seeds_by_arity(p: &TruncatedOperad, gens: &[Element]) -> Result<Vec<Vec<SRow>>> {
    let mut seed = vec![Vec::new(); p.horizon() + 1];
    for g in gens {
        p.check_arity(g.arity)?;
        if g.dim() != p.dim(g.arity) {
            return Err(OperadError::DimensionMismatch {
                expected: p.dim(g.arity),
                found: g.dim(),
            });
        }
        seed[g.arity].push(g.sparse());
    }
    Ok(seed)
}

/// The ideal generated by the given elements (truncated at the horizon).
pub fn generate_ideal(p: &TruncatedOperad, gens: &[Element]) -> Result<SubSModule> {
    Ok(saturate(p, seeds_by_arity(p, gens)?, true))
}

/// The ideal generated by an `S`-submodule family.
pub fn generate_ideal_from(p: &TruncatedOperad, s: &SubSModule) -> Result<SubSModule> {
    let seed = s.components().iter().map(|c| c.rows().to_vec()).collect();
    Ok(saturate(p, seed, true))
}

/// The suboperad generated by the given elements together with `1`.
pub fn generate_suboperad(p: &TruncatedOperad, gens: &[Element]) -> Result<SubSModule> {
    let mut seed = seeds_by_arity(p, gens)?;
    seed[1].push(p.rule().unit());
    Ok(saturate(p, seed, false))
}

/// The `S`-module spanned by all `μ ∘_i ν`, `μ ∈ I`, `ν ∈ J`.
pub fn ideal_product(p: &TruncatedOperad, a: &SubSModule, b: &SubSModule) -> Result<SubSModule> {
    let n_max = p.horizon();
    let mut seed: Vec<Vec<SRow>> = vec![Vec::new(); n_max + 1];
    for m in 1..=n_max {
        for n in 0..=n_max + 1 - m {
            for x in a.component(m).rows() {
                for y in b.component(n).rows() {
                    for i in 1..=m {
                        seed[m + n - 1].push(p.compose_sparse(m, i, x, n, y));
                    }
                }
            }
        }
    }
    let spaces = (0..=n_max)
        .map(|n| {
            let s = Subspace::span_sparse(p.dim(n), seed[n].drain(..));
            crate::linalg::smodule_closure(&s, &p.action_generators(n))
        })
        .collect::<Result<_>>()?;
    Ok(SubSModule::new(spaces))
}

/// Quotient data: the complement coordinates of each `I(n)`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    ideal: SubSModule,
    kept: Vec<Vec<usize>>,
    index: Vec<HashMap<usize, usize>>,
}

impl QuotientMap {
    pub fn new(ideal: SubSModule) -> Self {
        let kept: Vec<Vec<usize>> = ideal
            .components()
            .iter()
            .map(|s| {
                let piv: std::collections::BTreeSet<usize> = s.pivots().iter().copied().collect();
                (0..s.ambient()).filter(|c| !piv.contains(c)).collect()
            })
            .collect();
        let index = kept
            .iter()
            .map(|k| k.iter().enumerate().map(|(j, &c)| (c, j)).collect())
            .collect();
        QuotientMap { ideal, kept, index }
    }

    /// Image of a parent vector in quotient coordinates.
    pub fn project(&self, n: usize, v: &[(usize, Q)]) -> SRow {
        self.ideal
            .component(n)
            .reduce_sparse(v)
            .into_iter()
            .map(|(c, x)| (self.index[n][&c], x))
            .collect()
    }

    /// Canonical lift (a parent basis vector) of a quotient basis vector.
    pub fn lift(&self, n: usize, a: usize) -> SRow {
        one(self.kept[n][a])
    }

    pub fn ideal(&self) -> &SubSModule {
        &self.ideal
    }

    pub fn project_element(&self, q: &TruncatedOperad, x: &Element) -> Element {
        Element::from_sparse(x.arity, q.dim(x.arity), &self.project(x.arity, &x.sparse()))
    }
}

/// `P/I` as a materialized operad, with the projection.
pub fn quotient_with_map(p: &TruncatedOperad, ideal: &SubSModule) -> Result<(TruncatedOperad, QuotientMap)> {
    check_ideal(p, ideal)?;
    let map = QuotientMap::new(ideal.clone());
    let dims: Vec<usize> = map.kept.iter().map(Vec::len).collect();
    let labels = map
        .kept
        .iter()
        .enumerate()
        .map(|(n, k)| k.iter().map(|&c| p.rule().label(n, c)).collect())
        .collect();
    let zero_unit = p
        .rule()
        .zero_unit()
        .map(|z| map.project(0, &z))
        .filter(|z| !z.is_empty());
    let table = TableRule::build(
        format!("{}/I", p.name()),
        dims,
        labels,
        |m, i, a, n, b| {
            let r = p.compose_sparse(m, i, &map.lift(m, a), n, &map.lift(n, b));
            map.project(m + n - 1, &r)
        },
        |n, k, a| {
            let t = Permutation::transposition(n, k).expect("generator");
            map.project(n, &p.act_sparse(n, &map.lift(n, a), &t))
        },
        map.project(1, &p.rule().unit()),
        zero_unit,
    );
    let mut q = TruncatedOperad::new(table);
    if let Some(u2) = p.two_unit() {
        let proj = map.project(2, &u2.sparse());
        let cand = Element::from_sparse(2, q.dim(2), &proj);
        if q.is_unitary() && q.is_two_unit(&cand)? {
            q = q.with_two_unit(&cand)?;
        }
    }
    Ok((q, map))
}

pub fn quotient(p: &TruncatedOperad, ideal: &SubSModule) -> Result<TruncatedOperad> {
    Ok(quotient_with_map(p, ideal)?.0)
}

/// `P/^kU`; its truncation ladder vanishes from level `k` on.
pub fn quotient_by_truncation(p: &TruncatedOperad, k: usize) -> Result<TruncatedOperad> {
    let ideal = truncation::trunc_ideal(p, k)?;
    let (q, _) = quotient_with_map(p, &ideal)?;
    let mut table = q.materialize();
    table.name = format!("{}/^{k}U", p.name());
    let two = q.two_unit();
    let mut out = TruncatedOperad::new(table)
        .with_certificate(Some(GrowthCertificate::TruncationVanishes { from: k }));
    if let Some(u2) = two {
        out = out.with_two_unit(&u2)?;
    }
    Ok(out)
}

/// The span of `ι^l_r Δ_{j₁} ⋯ Δ_{j_s} π^I(x)`, `x ∈ M ⊆ P(k)`, in each arity,
/// closed under the symmetric groups.
pub fn elementary_closure(p: &TruncatedOperad, k: usize, m: &Subspace) -> Result<SubSModule> {
    let n_max = p.horizon();
    if p.two_unit().is_none() {
        return Err(OperadError::NoTwoUnit(p.name()));
    }
    // A[a] = span π^I(M), |I| = a
    let mut stage: Vec<Echelon> = (0..=n_max).map(|n| Echelon::new(p.dim(n))).collect();
    for a in 0..=k {
        for i in perm::subsets_of_size(k, a) {
            let pi = p.pi_matrix(k, &i)?;
            for x in m.rows() {
                stage[a].insert(&pi.apply_sparse(x));
            }
        }
    }
    // Δ-closure: B[b] = A[b] + Σ_j Δ_j(B[b-1])
    for b in 2..=n_max {
        let prev = stage[b - 1].clone().into_subspace();
        for x in prev.rows() {
            let xe = Element::from_sparse(b - 1, p.dim(b - 1), x);
            for j in 1..b {
                let y = p.delta(&[j], &xe)?;
                stage[b].insert(&y.sparse());
            }
        }
    }
    let b_spaces: Vec<Subspace> = stage.into_iter().map(Echelon::into_subspace).collect();
    let mut out: Vec<Echelon> = (0..=n_max).map(|n| Echelon::new(p.dim(n))).collect();
    for (b, sp) in b_spaces.iter().enumerate() {
        for x in sp.rows() {
            let xe = Element::from_sparse(b, p.dim(b), x);
            for n in b..=n_max {
                for l in 0..=n - b {
                    let r = n - b - l;
                    let y = p.iota(l, r, &xe)?;
                    out[n].insert(&y.sparse());
                }
            }
        }
    }
    let spaces = out
        .into_iter()
        .enumerate()
        .map(|(n, e)| crate::linalg::smodule_closure(&e.into_subspace(), &p.action_generators(n)))
        .collect::<Result<_>>()?;
    Ok(SubSModule::new(spaces))
}
