//! Executable checks of the small-GK-dimension classification results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::builders::{self, AugmentedAlgebra};
use crate::error::{OperadError, Result};
use crate::ideal;
use crate::linalg::{self, CoordinateSystem, RMatrix, SRow, Subspace, Q};
use crate::operad::{composition_keys, Element, GrowthCertificate, TruncatedOperad};
use crate::perm::{binomial, Permutation};
use crate::series::{self, GkStatus};
use crate::truncation::{self, Ladder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub claim: String,
    pub status: CheckStatus,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl ClassificationReport {
    fn new(subject: impl Into<String>) -> Self {
        ClassificationReport {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    fn push(&mut self, claim: &str, ok: bool, witness: Value) {
        self.checks.push(Check {
            claim: claim.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            witness,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn status_of(&self, claim: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.claim == claim).map(|c| c.status)
    }
}

/// If `gkdim P < 2` then `P ≅ Com`: all components one-dimensional with
/// trivial action.
pub fn check_prop05(p: &TruncatedOperad) -> Result<ClassificationReport> {
    if p.two_unit().is_none() {
        return Err(OperadError::NoTwoUnit(p.name()));
    }
    let ladder = Ladder::compute(p)?;
    let gk = series::gkdim_report(p, &ladder)?;
    let sig = ladder.signature();
    let mut rep = ClassificationReport::new(p.name());
    if sig.iter().all(|&f| f == 0) && gk.status == GkStatus::Exact && gk.value == 1 {
        let dims = p.dims();
        let trivial = (2..=p.horizon())
            .all(|n| p.action_generators(n).iter().all(|g| *g == RMatrix::identity(p.dim(n))));
        rep.push(
            "prop05",
            dims.iter().all(|&d| d == 1) && trivial,
            json!({ "dims": dims, "trivial_action": trivial, "gkdim": gk.value }),
        );
    } else {
        rep.checks.push(Check {
            claim: "prop05".into(),
            status: CheckStatus::NotApplicable,
            witness: json!({ "signature": sig, "gkdim": gk.value, "status": gk.status }),
        });
    }
    Ok(rep)
}

/// `A = P(1)` with augmentation ideal `^1U(1)`, in the canonical basis of
/// `^1U(1)`. Returns the algebra and the basis vectors `δ_j ∈ P(1)`.
pub fn extract_algebra(p: &TruncatedOperad) -> Result<(AugmentedAlgebra, Vec<SRow>)> {
    let aug = truncation::trunc_component(p, 1, 1)?;
    let basis: Vec<SRow> = aug.rows().to_vec();
    let d = basis.len();
    let cs = CoordinateSystem::new(p.dim(1), &basis)?;
    let mut omega = vec![vec![linalg::zeros(d); d]; d];
    for a in 0..d {
        for b in 0..d {
            let prod = p.compose_sparse(1, 1, &basis[a], 1, &basis[b]);
            omega[a][b] = cs
                .coordinates(&prod)
                .ok_or_else(|| OperadError::NotAnIdeal("^1U(1) is not closed under ∘₁".into()))?;
        }
    }
    Ok((AugmentedAlgebra::new(d, omega)?, basis))
}

/// `1_n` followed by `1_n ∘_i δ_j` in the order `1 + (i-1)d + (j-1)`.
fn step1_basis(p: &TruncatedOperad, n: usize, deltas: &[SRow]) -> Result<Vec<SRow>> {
    let one = p.one_n(n)?;
    let mut out = vec![one.sparse()];
    for i in 1..=n {
        for dj in deltas {
            out.push(p.compose_sparse(n, i, &one.sparse(), 1, dj));
        }
    }
    Ok(out)
}

/// Compares the structure of `p` in the given bases with the tables of `d`;
/// returns the number of comparisons and the mismatches.
fn compare_tables(p: &TruncatedOperad, bases: &[Vec<SRow>], d: &TruncatedOperad) -> Result<(usize, Vec<String>)> {
    let n_max = p.horizon();
    let cs: Vec<CoordinateSystem> = bases
        .iter()
        .enumerate()
        .map(|(n, b)| CoordinateSystem::new(p.dim(n), b))
        .collect::<Result<_>>()?;
    let coords = |n: usize, v: &SRow| -> Option<SRow> { cs[n].coordinates(v).map(|c| linalg::to_sparse(&c)) };
    let mut checked = 0;
    let mut bad = Vec::new();
    for (m, i, n) in composition_keys(n_max) {
        for a in 0..bases[m].len() {
            for b in 0..bases[n].len() {
                checked += 1;
                let z = p.compose_sparse(m, i, &bases[m][a], n, &bases[n][b]);
                if coords(m + n - 1, &z) != Some(d.rule().compose_basis(m, i, a, n, b)) {
                    bad.push(format!("∘_{i} on ({m}:{a}, {n}:{b})"));
                }
            }
        }
    }
    for n in 2..=n_max {
        for k in 1..n {
            let s = Permutation::transposition(n, k)?;
            for a in 0..bases[n].len() {
                checked += 1;
                if coords(n, &p.act_sparse(n, &bases[n][a], &s)) != Some(d.rule().act_generator(n, k, a)) {
                    bad.push(format!("s_{k} on {n}:{a}"));
                }
            }
        }
    }
    checked += 2;
    if coords(1, &p.rule().unit()) != Some(d.rule().unit()) {
        bad.push("unit".into());
    }
    if p.rule().zero_unit().and_then(|z| coords(0, &z)) != d.rule().zero_unit() {
        bad.push("zero unit".into());
    }
    Ok((checked, bad))
}

/// `G∘F` on an algebra: build `D_A`, extract the arity-one algebra and compare
/// structure constants; for `d = 0` also compare with `Com`.
pub fn equivalence_roundtrip_algebra(a: &AugmentedAlgebra, horizon: usize) -> Result<ClassificationReport> {
    let p = builders::build_d(a, horizon)?;
    let (back, _) = extract_algebra(&p)?;
    let mut rep = ClassificationReport::new(p.name());
    rep.push(
        "G(F(A)) = A",
        back == *a,
        json!({ "d": a.d, "omega": omega_strings(&back) }),
    );
    if a.d == 0 {
        let com = builders::build_com(horizon)?;
        let bases: Vec<Vec<SRow>> = (0..=horizon).map(|_| vec![vec![(0, Q::from_integer(1.into()))]]).collect();
        let (checked, bad) = compare_tables(&com, &bases, &p)?;
        rep.push("D_k = Com", bad.is_empty(), json!({ "checked": checked, "mismatches": bad }));
    }
    Ok(rep)
}

/// `F∘G` on an operad with `^2U = 0`: extract `A = P(1)`, rebuild `D_A` and
/// compare all tables in the basis `1_n, 1_n ∘_i δ_j`.
pub fn equivalence_roundtrip_operad(p: &TruncatedOperad) -> Result<ClassificationReport> {
    if p.two_unit().is_none() {
        return Err(OperadError::NoTwoUnit(p.name()));
    }
    let ladder = Ladder::compute(p)?;
    if (0..=p.horizon()).any(|n| !ladder.get(2, n).is_zero()) {
        return Err(OperadError::InvalidInput(format!("^2U({}) ≠ 0", p.name())));
    }
    let (alg, deltas) = extract_algebra(p)?;
    let d = builders::build_d(&alg, p.horizon())?;
    let mut rep = ClassificationReport::new(p.name());
    let bases: Vec<Vec<SRow>> = (0..=p.horizon())
        .map(|n| step1_basis(p, n, &deltas))
        .collect::<Result<_>>()?;
    let dims_ok = (0..=p.horizon()).all(|n| p.dim(n) == d.dim(n) && bases[n].len() == d.dim(n));
    rep.push("dims", dims_ok, json!({ "P": p.dims(), "D_A": d.dims() }));
    if !dims_ok {
        return Ok(rep);
    }
    match compare_tables(p, &bases, &d) {
        Ok((checked, bad)) => rep.push(
            "F(G(P)) ≅ P",
            bad.is_empty(),
            json!({ "d": alg.d, "checked": checked, "mismatches": bad }),
        ),
        Err(e) => rep.push("F(G(P)) ≅ P", false, json!({ "error": e.to_string() })),
    }
    Ok(rep)
}

fn omega_strings(a: &AugmentedAlgebra) -> Value {
    json!(a
        .omega
        .iter()
        .map(|r| r.iter().map(|c| c.iter().map(linalg::format_q).collect::<Vec<_>>()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

/// The two vectors spanning `^3U_As(3)` in the sequence notation.
pub fn displayed_u3_vectors() -> Vec<Vec<(Vec<usize>, i64)>> {
    vec![
        vec![(vec![1, 2, 3], 1), (vec![2, 1, 3], -1), (vec![3, 1, 2], -1), (vec![3, 2, 1], 1)],
        vec![(vec![1, 3, 2], 1), (vec![2, 1, 3], -1), (vec![3, 1, 2], -1), (vec![2, 3, 1], 1)],
    ]
}

fn as_vector(terms: &[(Vec<usize>, i64)]) -> Result<SRow> {
    let mut acc = std::collections::BTreeMap::new();
    for (seq, c) in terms {
        let r = Permutation::from_seq(seq.clone())?.lex_rank();
        linalg::accumulate(&mut acc, &Q::from_integer((*c).into()), &[(r, Q::from_integer(1.into()))]);
    }
    Ok(linalg::map_to_row(acc))
}

/// A proper nonzero `S_k`-submodule of `^kU(k)`: trivial or sign lines first,
/// then closures of random vectors.
pub fn find_proper_submodule(p: &TruncatedOperad, top: &Subspace, k: usize, seed: u64) -> Result<Option<(Subspace, String)>> {
    let gens = p.action_generators(k);
    let (fix, sgn) = truncation::isotypic_lines(p, k, top)?;
    for (space, how) in [(fix, "trivial line"), (sgn, "sign line")] {
        if let Some(row) = space.rows().first() {
            let m = linalg::smodule_closure(&Subspace::span_sparse(top.ambient(), [row.clone()]), &gens)?;
            if !m.is_zero() && m.dim() < top.dim() {
                return Ok(Some((m, how.into())));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..64 {
        let mut v = linalg::zeros(top.ambient());
        for row in top.rows() {
            let c = Q::from_integer(rng.gen_range(-3i64..=3).into());
            for (j, x) in row {
                v[*j] += &c * x;
            }
        }
        if linalg::is_zero_vec(&v) {
            continue;
        }
        let m = linalg::smodule_closure(&Subspace::span(top.ambient(), &[v])?, &gens)?;
        if m.dim() < top.dim() {
            return Ok(Some((m, format!("closure of random vector (seed {seed}, attempt {attempt})"))));
        }
    }
    Ok(None)
}

/// Small-arity classification of unitary operads at horizon `N ≥ 5`: the gap at 2, `^3U(3)` simple of
/// dimension 2, `As/^4U` dimensions, and two distinct GK-5 quotients.
pub fn check_thm07(horizon: usize, seed: u64) -> Result<ClassificationReport> {
    if horizon < 5 {
        return Err(OperadError::InvalidInput(format!(
            "check_thm07 needs horizon ≥ 5, got {horizon}"
        )));
    }
    let as_op = builders::build_as(horizon)?;
    let ladder = Ladder::compute(&as_op)?;
    let mut rep = ClassificationReport::new(as_op.name());

    let f1 = ladder.get(1, 1).dim();
    rep.push(
        "gap: f(1) = 0",
        f1 == 0,
        json!({ "f1": f1, "consequence": "quotients of As have gkdim 1 or ≥ 3" }),
    );

    let u3 = ladder.get(3, 3);
    let displayed: Vec<SRow> = displayed_u3_vectors().iter().map(|t| as_vector(t)).collect::<Result<_>>()?;
    let members = displayed.iter().all(|v| u3.contains_sparse(v));
    let lines = truncation::one_dim_submodules(&as_op, 3, u3)?;
    rep.push(
        "^3U(3) simple of dim 2",
        u3.dim() == 2 && members && lines == (0, 0),
        json!({ "dim": u3.dim(), "displayed_vectors_members": members, "one_dim_submodules": [lines.0, lines.1] }),
    );

    let q4 = ideal::quotient_by_truncation(&as_op, 4)?;
    let expected: Vec<usize> = (0..=horizon).map(|n| 1 + binomial(n, 2) + 2 * binomial(n, 3)).collect();
    rep.push(
        "dim As/^4U(n) = 1 + C(n,2) + 2C(n,3)",
        q4.dims() == expected,
        json!({ "dims": q4.dims() }),
    );

    let u4 = ladder.get(4, 4);
    rep.push(
        "dim ^4U(4) = 9, dim As/^4U(4) = 15",
        u4.dim() == 9 && q4.dim(4) == 15,
        json!({ "u4": u4.dim(), "quotient": q4.dim(4) }),
    );

    let Some((m, how)) = find_proper_submodule(&as_op, u4, 4, seed)? else {
        rep.push("proper submodule M ⊊ ^4U(4)", false, json!({ "seed": seed }));
        return Ok(rep);
    };
    let m_basis: Vec<Vec<String>> = m
        .rows()
        .iter()
        .map(|r| linalg::to_dense(m.ambient(), r).iter().map(linalg::format_q).collect())
        .collect();
    rep.push(
        "proper submodule M ⊊ ^4U(4)",
        !m.is_zero() && m.dim() < u4.dim(),
        json!({ "dim": m.dim(), "found_by": how, "basis": m_basis }),
    );

    let u5 = ladder.ideal(5);
    let u4m = truncation::trunc_ideal_m(&as_op, 4, &m)?;
    let u4_full = ladder.ideal(4);
    let is_ideal = ideal::is_ideal(&as_op, &u4m);
    let strict_lo = u4m.contains(&u5) && u4m != u5;
    let strict_hi = u4_full.contains(&u4m) && u4m != u4_full;
    rep.push(
        "^5U ⊊ ^4U^M ⊊ ^4U",
        is_ideal && strict_lo && strict_hi,
        json!({ "ideal": is_ideal, "dims_5U": u5.dims(), "dims_4UM": u4m.dims(), "dims_4U": u4_full.dims() }),
    );

    let a5 = ideal::quotient_by_truncation(&as_op, 5)?;
    // ^5U ⊆ ^4U^M, so the quotient's ladder also vanishes from 5 on
    let am = ideal::quotient(&as_op, &u4m)?.with_certificate(Some(GrowthCertificate::TruncationVanishes { from: 5 }));
    let l5 = Ladder::compute(&a5)?;
    let lm = Ladder::compute(&am)?;
    let g5 = series::gkdim_report(&a5, &l5)?;
    let gm = series::gkdim_report(&am, &lm)?;
    let s5 = series::full_signature(&l5);
    let sm = series::full_signature(&lm);
    rep.push(
        "As/^5U and As/^4U^M: gkdim 5, distinct Hilbert series",
        g5.value == 5 && gm.value == 5 && g5.status == GkStatus::Exact && gm.status == GkStatus::Exact && s5 != sm,
        json!({
            "dims_As/^5U": a5.dims(),
            "dims_As/^4U^M": am.dims(),
            "hilbert_As/^5U": series::hilbert_rational(&series::to_big(&s5), horizon, true).display,
            "hilbert_As/^4U^M": series::hilbert_rational(&series::to_big(&sm), horizon, true).display,
        }),
    );
    Ok(rep)
}

/// Elements of `As(3)` from the displayed vectors (for callers and tests).
pub fn displayed_u3_elements(as_op: &TruncatedOperad) -> Result<Vec<Element>> {
    displayed_u3_vectors()
        .iter()
        .map(|t| Ok(Element::from_sparse(3, as_op.dim(3), &as_vector(t)?)))
        .collect()
}
