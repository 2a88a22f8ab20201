//! Dimension sequences, binomial transforms, Hilbert series and
//! Gelfand–Kirillov dimension certificates.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{OperadError, Result};
use crate::operad::{GrowthCertificate, TruncatedOperad};
use crate::truncation::Ladder;

fn binom_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `b_i = Σ_k a_k (-1)^{i-k} C(i,k)`.
pub fn binomial_transform(a: &[BigInt]) -> Vec<BigInt> {
    (0..a.len())
        .map(|i| {
            (0..=i).fold(BigInt::zero(), |acc, k| {
                let term = &a[k] * binom_big(i, k);
                if (i - k) % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect()
}

/// `a_i = Σ_k b_k C(i,k)`.
pub fn inverse_binomial_transform(b: &[BigInt]) -> Vec<BigInt> {
    (0..b.len())
        .map(|i| (0..=i).fold(BigInt::zero(), |acc, k| acc + &b[k] * binom_big(i, k)))
        .collect()
}

pub fn to_big(v: &[usize]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `G(t) = Σ_k f(k) t^k / (1-t)^{k+1}`, together with its expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalHilbert {
    /// `(f(k), k)` for the nonzero coefficients.
    pub terms: Vec<(String, usize)>,
    pub expansion: Vec<String>,
    pub display: String,
    pub caveat: Option<String>,
}

pub fn hilbert_rational(f: &[BigInt], horizon: usize, finite_support: bool) -> RationalHilbert {
    let terms: Vec<(String, usize)> = f
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (c.to_string(), k))
        .collect();
    let expansion = (0..=horizon)
        .map(|n| {
            f.iter()
                .enumerate()
                .fold(BigInt::zero(), |acc, (k, c)| acc + c * binom_big(n, k))
                .to_string()
        })
        .collect();
    let display = if terms.is_empty() {
        "0".to_string()
    } else {
        terms
            .iter()
            .map(|(c, k)| {
                let coef = if c == "1" { String::new() } else { format!("{c}·") };
                match k {
                    0 => format!("{}1/(1-t)", coef),
                    1 => format!("{coef}t/(1-t)^2"),
                    _ => format!("{coef}t^{k}/(1-t)^{}", k + 1),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    RationalHilbert {
        terms,
        expansion,
        display,
        caveat: (!finite_support).then(|| {
            format!("coefficients beyond the horizon {horizon} are unknown; the series is truncated")
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GkStatus {
    Exact,
    LowerBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GkCertificate {
    pub value: usize,
    pub status: GkStatus,
    pub horizon: usize,
    pub message: String,
    /// For 2-unitary operads: whether `dim P(n) = Σ f(k) C(n,k)` at every arity.
    pub rationality_witness: Option<bool>,
}

/// `(f(0), f(1), …, f(N))` with `f(0) = dim P(0)`.
pub fn full_signature(ladder: &Ladder) -> Vec<usize> {
    (0..=ladder.horizon()).map(|k| ladder.get(k, k).dim()).collect()
}

pub fn gkdim_report(p: &TruncatedOperad, ladder: &Ladder) -> Result<GkCertificate> {
    if !p.is_unitary() {
        return Err(OperadError::NotUnitary(p.name()));
    }
    let n_max = p.horizon();
    let f = full_signature(ladder);
    let two_unitary = p.two_unit().is_some();
    let rationality_witness = two_unitary.then(|| {
        (0..=n_max).all(|n| {
            p.dim(n)
                == f.iter()
                    .enumerate()
                    .map(|(k, &c)| c * crate::perm::binomial(n, k))
                    .sum::<usize>()
        })
    });
    let v = f.iter().rposition(|&c| c != 0).map_or(0, |k| k + 1);
    let cert = match p.certificate() {
        Some(GrowthCertificate::FiniteSupport) => GkCertificate {
            value: 0,
            status: GkStatus::Exact,
            horizon: n_max,
            message: "components vanish in large arity".into(),
            rationality_witness,
        },
        Some(GrowthCertificate::TruncationVanishes { from }) if from <= n_max + 1 && two_unitary => {
            GkCertificate {
                value: v,
                status: GkStatus::Exact,
                horizon: n_max,
                message: format!("^kU = 0 for k ≥ {from}; gkdim = max{{k : f(k) ≠ 0}} + 1"),
                rationality_witness,
            }
        }
        _ => GkCertificate {
            value: v,
            status: GkStatus::LowerBound,
            horizon: n_max,
            message: format!("gkdim ≥ {v} within horizon {n_max}"),
            rationality_witness,
        },
    };
    Ok(cert)
}

/// `(n, a_n^{1/n})` for `n ≥ 1`; finite samples only, not the limit.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentSamples {
    pub samples: Vec<(usize, f64)>,
    pub caveat: String,
}

pub fn exponent_samples(dims: &[usize]) -> ExponentSamples {
    ExponentSamples {
        samples: dims
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &a)| (n, (a as f64).powf(1.0 / n as f64)))
            .collect(),
        caveat: "NOT A LIMIT: finitely many samples of (dim P(n))^(1/n)".into(),
    }
}

/// Upper bound `g - 1 + v` for the GK dimension of a `P`-algebra generated by
/// `g` elements, given `gkdim P = v`.
pub fn algebra_gk_bound(g: usize, cert: &GkCertificate) -> Result<usize> {
    if g == 0 {
        return Err(OperadError::InvalidInput("g must be at least 1".into()));
    }
    if cert.status != GkStatus::Exact {
        return Err(OperadError::InvalidInput(
            "the bound needs an exact GK dimension certificate".into(),
        ));
    }
    Ok(g - 1 + cert.value)
}

pub fn to_usize(v: &[BigInt]) -> Option<Vec<usize>> {
    v.iter().map(|x| x.to_usize()).collect()
}
