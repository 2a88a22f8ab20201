//! The associated truncatified operad `trc(P) = ⊕_i ^iU/^{i+1}U`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{OperadError, Result};
use crate::ideal;
use crate::linalg::{CoordinateSystem, SRow, Subspace, Q};
use crate::operad::{Element, TableRule, TruncatedOperad};
use crate::perm::Permutation;
use crate::truncation::{is_stable, Ladder};

/// Degree of every basis coordinate, arity by arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grading {
    pub degrees: Vec<Vec<usize>>,
}

impl Grading {
    /// `[start, end)` coordinate ranges for each degree `0..=n` (requires
    /// coordinates sorted by degree).
    pub fn ranges(&self, n: usize) -> Option<Vec<(usize, usize)>> {
        let d = &self.degrees[n];
        if d.windows(2).any(|w| w[0] > w[1]) {
            return None;
        }
        let top = d.last().copied().unwrap_or(0).max(n);
        Some(
            (0..=top)
                .map(|i| {
                    let s = d.iter().position(|&x| x >= i).unwrap_or(d.len());
                    let e = d.iter().position(|&x| x > i).unwrap_or(d.len());
                    (s, e)
                })
                .collect(),
        )
    }

    pub fn piece_dims(&self, n: usize) -> Vec<usize> {
        let top = self.degrees[n].iter().copied().max().unwrap_or(0).max(n);
        (0..=top)
            .map(|i| self.degrees[n].iter().filter(|&&x| x == i).count())
            .collect()
    }
}

struct Source {
    op: TruncatedOperad,
    coords: Vec<CoordinateSystem>,
    degrees: Vec<Vec<usize>>,
}

impl Source {
    /// Degree-`g` component, in adapted coordinates, of `x ∈ ^gU(n)`.
    fn symbol(&self, n: usize, g: usize, x: &SRow) -> SRow {
        let c = self.coords[n].coordinates(x).expect("adapted basis spans P(n)");
        c.into_iter()
            .enumerate()
            .filter(|(k, v)| self.degrees[n][*k] == g && !v.is_zero())
            .collect()
    }
}

pub struct TruncatifiedOperad {
    pub operad: TruncatedOperad,
    pub grading: Grading,
    source: Option<Source>,
}

impl TruncatifiedOperad {
    /// Wraps an operad with a claimed grading (no source data).
    pub fn with_grading(operad: TruncatedOperad, grading: Grading) -> Result<Self> {
        if grading.degrees.len() != operad.horizon() + 1
            || grading.degrees.iter().enumerate().any(|(n, d)| d.len() != operad.dim(n))
        {
            return Err(OperadError::Schema("grading does not match the dimensions".into()));
        }
        Ok(TruncatifiedOperad {
            operad,
            grading,
            source: None,
        })
    }

    /// The class in `^gU(n)/^{g+1}U(n)` of a source element `x ∈ ^gU(n)`.
    pub fn symbol(&self, g: usize, x: &Element) -> Result<Element> {
        let src = self
            .source
            .as_ref()
            .ok_or_else(|| OperadError::InvalidInput("no source operad recorded".into()))?;
        let n = x.arity;
        Ok(Element::from_sparse(n, self.operad.dim(n), &src.symbol(n, g, &x.sparse())))
    }

    pub fn source(&self) -> Option<&TruncatedOperad> {
        self.source.as_ref().map(|s| &s.op)
    }
}

fn target_degree(i: usize, j: usize) -> usize {
    if i >= 1 && j >= 1 {
        i + j - 1
    } else {
        i + j
    }
}

/// Builds `trc(P)` on the adapted basis: in arity `n`, degree `i` is spanned by
/// the rows of the canonical form of `^iU(n)` whose pivots are not pivots of
/// `^{i+1}U(n)`.
pub fn truncatify(p: &TruncatedOperad) -> Result<TruncatifiedOperad> {
    let ladder = Ladder::compute(p)?;
    truncatify_with(p, &ladder)
}

pub fn truncatify_with(p: &TruncatedOperad, ladder: &Ladder) -> Result<TruncatifiedOperad> {
    let n_max = p.horizon();
    let mut reps: Vec<Vec<SRow>> = Vec::new();
    let mut degrees: Vec<Vec<usize>> = Vec::new();
    for n in 0..=n_max {
        let mut r = Vec::new();
        let mut d = Vec::new();
        for i in 0..=n {
            let upper: &Subspace = ladder.get(i, n);
            let lower = ladder.get(i + 1, n);
            for (row, piv) in upper.rows().iter().zip(upper.pivots()) {
                if !lower.pivots().contains(piv) {
                    r.push(row.clone());
                    d.push(i);
                }
            }
        }
        if r.len() != p.dim(n) {
            return Err(OperadError::InvalidInput(format!(
                "the truncation ladder of {} does not exhaust arity {n}",
                p.name()
            )));
        }
        reps.push(r);
        degrees.push(d);
    }
    let coords: Vec<CoordinateSystem> = reps
        .iter()
        .enumerate()
        .map(|(n, r)| CoordinateSystem::new(p.dim(n), r))
        .collect::<Result<_>>()?;
    let src = Source {
        op: p.clone(),
        coords,
        degrees: degrees.clone(),
    };
    let labels = degrees
        .iter()
        .enumerate()
        .map(|(n, d)| d.iter().enumerate().map(|(k, g)| format!("[{g}]b{n}.{k}")).collect())
        .collect();
    let table = TableRule::build(
        format!("trc({})", p.name()),
        p.dims(),
        labels,
        |m, i, a, n, b| {
            let t = target_degree(src.degrees[m][a], src.degrees[n][b]);
            let z = p.compose_sparse(m, i, &reps[m][a], n, &reps[n][b]);
            src.symbol(m + n - 1, t, &z)
        },
        |n, k, a| {
            let s = Permutation::transposition(n, k).expect("generator");
            src.symbol(n, src.degrees[n][a], &p.act_sparse(n, &reps[n][a], &s))
        },
        src.symbol(1, 0, &p.rule().unit()),
        p.rule().zero_unit().map(|z| src.symbol(0, 0, &z)),
    );
    let mut op = TruncatedOperad::new(table).with_certificate(p.certificate());
    if let Some(u2) = p.two_unit() {
        let cand = Element::from_sparse(2, p.dim(2), &src.symbol(2, 0, &u2.sparse()));
        if op.is_two_unit(&cand)? {
            op = op.with_two_unit(&cand)?;
        }
    }
    Ok(TruncatifiedOperad {
        operad: op,
        grading: Grading { degrees },
        source: Some(src),
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TruncatifiedReport {
    pub stable_pieces: bool,
    pub ladder_matches: bool,
    pub degree_rules: bool,
    pub failures: Vec<String>,
}

impl TruncatifiedReport {
    pub fn passed(&self) -> bool {
        self.stable_pieces && self.ladder_matches && self.degree_rules
    }
}

fn piece(dim: usize, degrees: &[usize], pred: impl Fn(usize) -> bool) -> Subspace {
    Subspace::span_sparse(
        dim,
        degrees
            .iter()
            .enumerate()
            .filter(|(_, &g)| pred(g))
            .map(|(k, _)| vec![(k, Q::from_integer(1.into()))]),
    )
}

/// Checks the three defining conditions of a truncatified operad.
pub fn is_truncatified(t: &TruncatifiedOperad) -> Result<TruncatifiedReport> {
    let p = &t.operad;
    let n_max = p.horizon();
    let degs = &t.grading.degrees;
    let mut rep = TruncatifiedReport {
        stable_pieces: true,
        ladder_matches: true,
        degree_rules: true,
        failures: Vec::new(),
    };
    for n in 0..=n_max {
        let top = degs[n].iter().copied().max().unwrap_or(0);
        for i in 0..=top {
            if !is_stable(p, n, &piece(p.dim(n), &degs[n], |g| g == i)) {
                rep.stable_pieces = false;
                rep.failures.push(format!("P({n})_{i} is not S_{n}-stable"));
            }
        }
    }
    let ladder = Ladder::compute(p)?;
    for k in 0..=n_max + 1 {
        for n in 0..=n_max {
            if &piece(p.dim(n), &degs[n], |g| g >= k) != ladder.get(k, n) {
                rep.ladder_matches = false;
                rep.failures.push(format!("^{k}U({n}) ≠ ⊕_{{i≥{k}}} P({n})_i"));
            }
        }
    }
    for (m, i, n) in crate::operad::composition_keys(n_max) {
        let t_ar = m + n - 1;
        for a in 0..p.dim(m) {
            for b in 0..p.dim(n) {
                let tdeg = target_degree(degs[m][a], degs[n][b]);
                let r = p.rule().compose_basis(m, i, a, n, b);
                if r.iter().any(|(c, _)| degs[t_ar][*c] != tdeg) {
                    rep.degree_rules = false;
                    rep.failures.push(format!(
                        "P({m})_{} ∘_{i} P({n})_{} ⊄ P({t_ar})_{tdeg}",
                        degs[m][a], degs[n][b]
                    ));
                }
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PoissonReport {
    pub symmetric_product: bool,
    pub antisymmetric_bracket: bool,
    pub associativity: bool,
    pub leibniz: bool,
    pub jacobi: bool,
    pub unit_actions: bool,
    pub generation: bool,
    pub generated_dims: Vec<usize>,
    pub top_degree_dims: Vec<usize>,
}

impl PoissonReport {
    pub fn passed(&self) -> bool {
        self.symmetric_product
            && self.antisymmetric_bracket
            && self.associativity
            && self.leibniz
            && self.jacobi
            && self.unit_actions
            && self.generation
    }
}

/// Identifies `trc(As)` through the Poisson relations satisfied by the
/// classes of `1₂` (degree 0) and `Φ₂ = 1₂ - 1₂∗(21)` (degree 2).
pub fn poisson_check(t: &TruncatifiedOperad) -> Result<PoissonReport> {
    let p = &t.operad;
    let n_max = p.horizon();
    let is_as = n_max >= 3 && (0..=n_max).all(|n| p.dim(n) == crate::perm::factorial(n));
    let wrong = || {
        OperadError::InvalidInput(format!(
            "poisson_check expects trc(As) with horizon ≥ 3, got {}",
            p.name()
        ))
    };
    if !is_as {
        return Err(wrong());
    }
    let swap = Permutation::transposition(2, 1)?;
    let (one, br) = match t.source() {
        Some(src) => {
            let u2 = src.two_unit().ok_or_else(wrong)?;
            let phi = u2.sub(&src.act(&u2, &swap)?)?;
            (t.symbol(0, &u2)?, t.symbol(2, &phi)?)
        }
        // from the grading alone: 1̄₂ is the 2-unit, Φ̄₂ spans the grade-2 piece of arity 2
        None => {
            let one = p.two_unit().ok_or_else(wrong)?;
            let top: Vec<usize> = (0..p.dim(2)).filter(|&k| t.grading.degrees[2][k] == 2).collect();
            if top.len() != 1 || one.sparse().iter().any(|(k, _)| t.grading.degrees[2][*k] != 0) {
                return Err(wrong());
            }
            (one, p.basis_element(2, top[0])?)
        }
    };
    let s213 = Permutation::from_seq(vec![2, 1, 3])?;

    let mut rep = PoissonReport {
        symmetric_product: p.act(&one, &swap)? == one,
        antisymmetric_bracket: p.act(&br, &swap)? == br.scale(&Q::from_integer((-1).into())),
        associativity: p.partial_compose(&one, 1, &one)? == p.partial_compose(&one, 2, &one)?,
        ..Default::default()
    };
    let x = p.partial_compose(&one, 2, &br)?;
    rep.leibniz = p.partial_compose(&br, 1, &one)? == x.add(&p.act(&x, &s213)?)?;
    let y = p.partial_compose(&br, 2, &br)?;
    rep.jacobi = y == p.partial_compose(&br, 1, &br)?.add(&p.act(&y, &s213)?)?;
    let z = p.zero_unit().ok_or_else(|| OperadError::NotUnitary(p.name()))?;
    rep.unit_actions = (1..=2).all(|i| {
        p.partial_compose(&one, i, &z).ok() == Some(p.unit())
            && p.partial_compose(&br, i, &z).map(|e| e.is_zero()).unwrap_or(false)
    });
    let gen = ideal::generate_suboperad(p, &[one, br])?;
    rep.generated_dims = gen.dims();
    rep.generation = (1..=n_max).all(|n| gen.component(n).dim() == p.dim(n));
    rep.top_degree_dims = (0..=n_max)
        .map(|n| t.grading.degrees[n].iter().filter(|&&g| g == n).count())
        .collect();
    Ok(rep)
}
