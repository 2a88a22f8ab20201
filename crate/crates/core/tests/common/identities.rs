//! The elementary-operator identities as matrix equations, collected as a
//! list of violations instead of panicking.

use operad_core::perm::{self, c_of, perm_restrict, subsets_of_size};
use operad_core::truncation::Ladder;
use operad_core::{Element, Permutation, RMatrix, Result, TruncatedOperad};

pub struct Tally {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            violations: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

fn mat<F>(p: &TruncatedOperad, src: usize, dst: usize, f: F) -> Option<RMatrix>
where
    F: Fn(&Element) -> Result<Element> + Sync,
{
    p.linear_map(src, dst, f).ok()
}

fn g1(p: &TruncatedOperad, i: usize, x: &Element) -> Result<Element> {
    p.gamma(&[i], x)
}

fn d1(p: &TruncatedOperad, i: usize, x: &Element) -> Result<Element> {
    p.delta(&[i], x)
}

/// All tuples of non-negative integers of length `n` with sum at most `cap`.
pub fn tuples(n: usize, cap: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in 0..=cap {
        for mut rest in tuples(n - 1, cap - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

/// `ι` formulas: `ι^l_r = ι_r ι^l`, and the one-sided `ι` as compositions with
/// the 2-unit.
pub fn iota_identities(p: &TruncatedOperad, t: &mut Tally) {
    let n_max = p.horizon();
    let u2 = p.two_unit().expect("2-unitary");
    for n in 0..=n_max {
        for l in 0..=n_max - n {
            for r in 0..=n_max - n - l {
                let a = mat(p, n, n + l + r, |x| p.iota(l, r, x));
                let b = mat(p, n, n + l + r, |x| p.iota(0, r, &p.iota(l, 0, x)?));
                t.check(a.is_some() && a == b, || format!("{}: ι^{l}_{r} ≠ ι_{r}ι^{l} on P({n})", p.name()));
            }
            if l > 0 || n > 0 {
                let a = mat(p, n, n + l, |x| p.iota(l, 0, x));
                let b = mat(p, n, n + l, |x| p.full_compose(&u2, &[p.one_n(l)?, x.clone()]));
                t.check(a.is_some() && a == b, || format!("{}: ι^{l} on P({n})", p.name()));
                let a = mat(p, n, n + l, |x| p.iota(0, l, x));
                let b = mat(p, n, n + l, |x| p.full_compose(&u2, &[x.clone(), p.one_n(l)?]));
                t.check(a.is_some() && a == b, || format!("{}: ι_{l} on P({n})", p.name()));
            }
        }
    }
}

/// Factorizations of `Δ_I`, `Γ^I`, the splittings `Γ Δ = id`, and the
/// exchange rule between `Δ_j` and `Γ^i`.
pub fn delta_gamma_identities(p: &TruncatedOperad, t: &mut Tally) {
    let n_max = p.horizon();
    for n in 1..=n_max {
        for subset in perm::all_subsets(n).into_iter().filter(|s| !s.is_empty()) {
            let s = subset.len();
            if n + s <= n_max {
                let a = mat(p, n, n + s, |x| p.delta(&subset, x));
                let b = mat(p, n, n + s, |x| {
                    let mut y = x.clone();
                    for &i in subset.iter().rev() {
                        y = d1(p, i, &y)?;
                    }
                    Ok(y)
                });
                t.check(a.is_some() && a == b, || format!("{}: Δ_{subset:?} on P({n})", p.name()));
            }
            let a = mat(p, n, n - s, |x| p.gamma(&subset, x));
            let b = mat(p, n, n - s, |x| {
                let mut y = x.clone();
                for &i in subset.iter().rev() {
                    y = g1(p, i, &y)?;
                }
                Ok(y)
            });
            t.check(a.is_some() && a == b, || format!("{}: Γ^{subset:?} on P({n})", p.name()));
        }
        if n < n_max {
            let id = Some(RMatrix::identity(p.dim(n)));
            for i in 1..=n {
                let a = mat(p, n, n, |x| g1(p, i + 1, &d1(p, i, x)?));
                t.check(a == id, || format!("{}: Γ^{}Δ_{i} ≠ id on P({n})", p.name(), i + 1));
                let a = mat(p, n, n, |x| g1(p, i, &d1(p, i, x)?));
                t.check(a == id, || format!("{}: Γ^{i}Δ_{i} ≠ id on P({n})", p.name()));
            }
        }
        if (2..n_max).contains(&n) {
            for i in 1..=n {
                for j in 1..n {
                    let lhs = mat(p, n, n, |x| d1(p, j, &g1(p, i, x)?));
                    let rhs = if i <= j {
                        mat(p, n, n, |x| g1(p, i, &d1(p, j + 1, x)?))
                    } else {
                        mat(p, n, n, |x| g1(p, i + 1, &d1(p, j, x)?))
                    };
                    t.check(lhs.is_some() && lhs == rhs, || format!("{}: Δ_{j}Γ^{i} on P({n})", p.name()));
                }
            }
        }
    }
}

/// `θ∘(1_{k₁},…,1_{k_n})` as a word in `Γ` and `Δ`, and `ι` commuting with
/// both.
pub fn unit_composition_identities(p: &TruncatedOperad, t: &mut Tally) {
    let n_max = p.horizon();
    for n in 1..=n_max {
        for ks in tuples(n, n_max) {
            let total: usize = ks.iter().sum();
            let mut arity = n as isize;
            let mut peak = arity;
            for &k in ks.iter().rev() {
                arity += k as isize - 1;
                peak = peak.max(arity);
            }
            if peak > n_max as isize {
                continue;
            }
            let a = mat(p, n, total, |x| {
                let units = ks.iter().map(|&k| p.one_n(k)).collect::<Result<Vec<_>>>()?;
                p.full_compose(x, &units)
            });
            let b = mat(p, n, total, |x| {
                let mut y = x.clone();
                for (slot, &k) in ks.iter().enumerate().rev() {
                    let i = slot + 1;
                    if k == 0 {
                        y = g1(p, i, &y)?;
                    }
                    for _ in 1..k.max(1) {
                        y = d1(p, i, &y)?;
                    }
                }
                Ok(y)
            });
            t.check(a.is_some() && a == b, || format!("{}: θ∘(1_k) for k = {ks:?}", p.name()));
        }
        for l in 0..=n_max - n {
            for r in 0..=n_max - n - l {
                for i in 1..=n {
                    let a = mat(p, n, n + l + r - 1, |x| g1(p, l + i, &p.iota(l, r, x)?));
                    let b = mat(p, n, n + l + r - 1, |x| p.iota(l, r, &g1(p, i, x)?));
                    t.check(a.is_some() && a == b, || format!("{}: Γι^{l}_{r}, i={i}, n={n}", p.name()));
                    if n + l + r < n_max {
                        let a = mat(p, n, n + l + r + 1, |x| d1(p, l + i, &p.iota(l, r, x)?));
                        let b = mat(p, n, n + l + r + 1, |x| p.iota(l, r, &d1(p, i, x)?));
                        t.check(a.is_some() && a == b, || format!("{}: Δι^{l}_{r}, i={i}, n={n}", p.name()));
                    }
                }
            }
        }
    }
}

/// Equivariance of `π^I` and its behaviour on partial compositions.
pub fn restriction_identities(p: &TruncatedOperad, t: &mut Tally) {
    let n_max = p.horizon();
    for n in 1..=n_max {
        let sigmas: Vec<Permutation> = if n <= 4 {
            Permutation::all(n)
        } else {
            Permutation::all(n).into_iter().step_by(11).collect()
        };
        for sigma in &sigmas {
            for subset in perm::all_subsets(n) {
                let moved = sigma.image_of_set(&subset);
                let restricted = perm_restrict(sigma, &subset).unwrap();
                let a = mat(p, n, subset.len(), |x| p.pi(&subset, &p.act(x, sigma)?));
                let b = mat(p, n, subset.len(), |x| p.act(&p.pi(&moved, x)?, &restricted));
                t.check(a.is_some() && a == b, || format!("{}: π^{subset:?}(θ∗{sigma})", p.name()));
            }
        }
    }
    for m in 1..=n_max {
        for n in 0..=n_max + 1 - m {
            let tot = m + n - 1;
            for i in 1..=m {
                for subset in perm::all_subsets(tot) {
                    let before: Vec<usize> = subset.iter().copied().filter(|&x| x < i).collect();
                    let inside: Vec<usize> = subset.iter().filter(|&&x| x >= i && x < i + n).map(|x| x - (i - 1)).collect();
                    let after: Vec<usize> = subset.iter().filter(|&&x| x >= i + n).map(|x| x + 1 - n).collect();
                    let mut big_j = before.clone();
                    big_j.push(i);
                    big_j.extend(after);
                    let j = before.len() + 1;
                    let mut ok = true;
                    for a in 0..p.dim(m) {
                        let mu = p.basis_element(m, a).unwrap();
                        for b in 0..p.dim(n) {
                            let nu = p.basis_element(n, b).unwrap();
                            let lhs = p.pi(&subset, &p.partial_compose(&mu, i, &nu).unwrap()).unwrap();
                            let rhs = p
                                .partial_compose(&p.pi(&big_j, &mu).unwrap(), j, &p.pi(&inside, &nu).unwrap())
                                .unwrap();
                            ok &= lhs == rhs;
                        }
                    }
                    t.check(ok, || format!("{}: π^{subset:?}(μ∘_{i}ν), m={m}, n={n}", p.name()));
                }
            }
        }
    }
}

/// `Γ^{I'}(Λ^n_I(θ)) = δ_{I,I'} θ` for `θ ∈ ^kU(k)`.
pub fn lambda_orthogonality(p: &TruncatedOperad, t: &mut Tally) {
    let n_max = p.horizon();
    let ladder = Ladder::compute(p).unwrap();
    let u2 = p.two_unit().expect("2-unitary");
    for k in 0..=n_max {
        for row in ladder.get(k, k).rows() {
            let theta = Element::from_sparse(k, p.dim(k), row);
            for n in k..=n_max {
                let s = n - k;
                let base = p.full_compose(&u2, &[theta.clone(), p.one_n(s).unwrap()]).unwrap();
                for subset in subsets_of_size(n, s) {
                    let x = p.act(&base, &c_of(n, &subset).unwrap()).unwrap();
                    for other in subsets_of_size(n, s) {
                        let g = p.gamma(&other, &x).unwrap();
                        let ok = if other == subset { g == theta } else { g.is_zero() };
                        t.check(ok, || format!("{}: Γ^{other:?}Λ^{n}_{subset:?}, k={k}", p.name()));
                    }
                }
            }
        }
    }
}

pub fn all_identities(p: &TruncatedOperad) -> Tally {
    let mut t = Tally::new();
    iota_identities(p, &mut t);
    delta_gamma_identities(p, &mut t);
    unit_composition_identities(p, &mut t);
    restriction_identities(p, &mut t);
    lambda_orthogonality(p, &mut t);
    t
}
