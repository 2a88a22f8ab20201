//! Exhaustive verification of the operad axioms on basis elements.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::builders::check_coxeter;
use crate::linalg::SRow;
use crate::operad::TruncatedOperad;
use crate::perm::{self, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub instance: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.instance)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn lbl(p: &TruncatedOperad, n: usize, a: usize) -> String {
    format!("{}∈P({n})", p.rule().label(n, a))
}

fn one(a: usize) -> SRow {
    vec![(a, num_rational::BigRational::from_integer(1.into()))]
}

/// Checks the Coxeter relations, unit laws, both associativity laws and
/// equivariance (on adjacent transpositions) on all basis elements within
/// the horizon. Every failing instance is reported.
pub fn verify_axioms(p: &TruncatedOperad) -> AxiomReport {
    let n_max = p.horizon();
    let rule = p.rule();
    let mut report = AxiomReport::default();

    for n in 2..=n_max {
        report.checked += 1;
        if let Err(e) = check_coxeter(&p.action_generators(n), p.dim(n)) {
            report.violations.push(Violation {
                axiom: "symmetric group relations".into(),
                instance: format!("arity {n}: {e}"),
            });
        }
    }

    let unit = rule.unit();
    for m in 1..=n_max {
        for a in 0..p.dim(m) {
            for i in 1..=m {
                report.checked += 1;
                if p.compose_sparse(m, i, &one(a), 1, &unit) != one(a) {
                    report.violations.push(Violation {
                        axiom: "right unit".into(),
                        instance: format!("{} ∘_{i} 1 ≠ itself", lbl(p, m, a)),
                    });
                }
            }
        }
    }
    for n in 0..=n_max {
        for b in 0..p.dim(n) {
            report.checked += 1;
            if p.compose_sparse(1, 1, &unit, n, &one(b)) != one(b) {
                report.violations.push(Violation {
                    axiom: "left unit".into(),
                    instance: format!("1 ∘_1 {} ≠ itself", lbl(p, n, b)),
                });
            }
        }
    }

    // (l, m, n) triples whose compositions stay inside the horizon
    let mut triples = Vec::new();
    for l in 1..=n_max {
        for m in 0..=n_max {
            for n in 0..=n_max {
                if l + m <= n_max + 1 && m + n <= n_max + 1 && l + m + n <= n_max + 2 {
                    triples.push((l, m, n));
                }
            }
        }
    }

    let results: Vec<(usize, Vec<Violation>)> = triples
        .par_iter()
        .flat_map(|&(l, m, n)| (0..p.dim(l)).into_par_iter().map(move |a| (l, m, n, a)))
        .map(|(l, m, n, a)| {
            let mut checked = 0;
            let mut bad = Vec::new();
            let la = one(a);
            for b in 0..p.dim(m) {
                let mb = one(b);
                for c in 0..p.dim(n) {
                    let nc = one(c);
                    // sequential: (λ∘_i μ)∘_{i-1+j} ν = λ∘_i (μ∘_j ν)
                    if m >= 1 {
                        for i in 1..=l {
                            let lm = p.compose_sparse(l, i, &la, m, &mb);
                            for j in 1..=m {
                                checked += 1;
                                let lhs = p.compose_sparse(l + m - 1, i - 1 + j, &lm, n, &nc);
                                let mn = p.compose_sparse(m, j, &mb, n, &nc);
                                let rhs = p.compose_sparse(l, i, &la, m + n - 1, &mn);
                                if lhs != rhs {
                                    bad.push(Violation {
                                        axiom: "sequential associativity".into(),
                                        instance: format!(
                                            "(λ ∘_{i} μ) ∘_{} ν ≠ λ ∘_{i} (μ ∘_{j} ν) for λ={}, μ={}, ν={}",
                                            i - 1 + j,
                                            lbl(p, l, a),
                                            lbl(p, m, b),
                                            lbl(p, n, c)
                                        ),
                                    });
                                }
                            }
                        }
                    }
                    // parallel: (λ∘_i μ)∘_{k-1+m} ν = (λ∘_k ν)∘_i μ, i < k
                    if l + n <= n_max + 1 {
                        for i in 1..=l {
                            for k in i + 1..=l {
                                checked += 1;
                                let lm = p.compose_sparse(l, i, &la, m, &mb);
                                let lhs = p.compose_sparse(l + m - 1, k - 1 + m, &lm, n, &nc);
                                let ln = p.compose_sparse(l, k, &la, n, &nc);
                                let rhs = p.compose_sparse(l + n - 1, i, &ln, m, &mb);
                                if lhs != rhs {
                                    bad.push(Violation {
                                        axiom: "parallel associativity".into(),
                                        instance: format!(
                                            "(λ ∘_{i} μ) ∘_{} ν ≠ (λ ∘_{k} ν) ∘_{i} μ for λ={}, μ={}, ν={}",
                                            k - 1 + m,
                                            lbl(p, l, a),
                                            lbl(p, m, b),
                                            lbl(p, n, c)
                                        ),
                                    });
                                }
                            }
                        }
                    }
                }
            }
            (checked, bad)
        })
        .collect();
    for (c, v) in results {
        report.checked += c;
        report.violations.extend(v);
    }

    // equivariance on generators
    let mut pairs = Vec::new();
    for m in 1..=n_max {
        for n in 0..=n_max + 1 - m {
            pairs.push((m, n));
        }
    }
    let results: Vec<(usize, Vec<Violation>)> = pairs
        .par_iter()
        .map(|&(m, n)| {
            let mut checked = 0;
            let mut bad = Vec::new();
            let t = m + n - 1;
            for i in 1..=m {
                let mut arities = vec![1; m];
                arities[i - 1] = n;
                for a in 0..p.dim(m) {
                    for b in 0..p.dim(n) {
                        // μ ∘_i (ν ∗ τ) = (μ ∘_i ν) ∗ τ'
                        for k in 1..n {
                            checked += 1;
                            let tau = Permutation::transposition(n, k).expect("generator");
                            let lhs = p.compose_sparse(m, i, &one(a), n, &p.act_sparse(n, &one(b), &tau));
                            let tau2 = perm::block_embedding(&arities, i, &tau).expect("block");
                            let rhs = p.act_sparse(t, &p.compose_sparse(m, i, &one(a), n, &one(b)), &tau2);
                            if lhs != rhs {
                                bad.push(Violation {
                                    axiom: "equivariance in the inner input".into(),
                                    instance: format!(
                                        "μ ∘_{i} (ν ∗ s_{k}) ≠ (μ ∘_{i} ν) ∗ {tau2} for μ={}, ν={}",
                                        lbl(p, m, a),
                                        lbl(p, n, b)
                                    ),
                                });
                            }
                        }
                        // (μ ∗ σ) ∘_i ν = (μ ∘_{σ(i)} ν) ∗ σ''
                        for k in 1..m {
                            checked += 1;
                            let sigma = Permutation::transposition(m, k).expect("generator");
                            let lhs = p.compose_sparse(m, i, &p.act_sparse(m, &one(a), &sigma), n, &one(b));
                            let si = sigma.apply(i);
                            let mut blocks: Vec<Permutation> = (0..m).map(|_| Permutation::identity(1)).collect();
                            blocks[i - 1] = Permutation::identity(n);
                            let s2 = perm::block_permutation(&sigma, &blocks).expect("block");
                            let rhs = p.act_sparse(t, &p.compose_sparse(m, si, &one(a), n, &one(b)), &s2);
                            if lhs != rhs {
                                bad.push(Violation {
                                    axiom: "equivariance in the outer input".into(),
                                    instance: format!(
                                        "(μ ∗ s_{k}) ∘_{i} ν ≠ (μ ∘_{si} ν) ∗ {s2} for μ={}, ν={}",
                                        lbl(p, m, a),
                                        lbl(p, n, b)
                                    ),
                                });
                            }
                        }
                    }
                }
            }
            (checked, bad)
        })
        .collect();
    for (c, v) in results {
        report.checked += c;
        report.violations.extend(v);
    }
    report
}
