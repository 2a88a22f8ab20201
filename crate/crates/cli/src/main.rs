//! `operad`: build, truncate, inspect and verify truncated operads.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use operad_core::builders::{self, AugmentedAlgebra};
use operad_core::io::{self, Manifest};
use operad_core::truncation::Ladder;
use operad_core::{basis, classify, ideal, series, truncatify, OperadError, TruncatedOperad};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "operad", version, about = "Exact computations with arity-truncated symmetric operads")]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true, env = "OPERAD_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an operad: as, com, uni, d, from-signature, unitary-from-signature, signature-operad.
    Build(BuildArgs),
    /// Truncation ideal ^kU: dims and canonical bases; optionally write P/^kU.
    Truncate {
        input: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        /// Write the quotient operad P/^kU here.
        #[arg(long)]
        quotient: Option<PathBuf>,
    },
    /// Print the signature f(1), …, f(N).
    Signature { input: PathBuf },
    /// Dimension sequence, binomial transform, Hilbert series and GK certificate.
    Series {
        input: PathBuf,
        #[arg(long)]
        binomial: bool,
        #[arg(long)]
        rational: bool,
    },
    /// Run verification suites; exit status 1 if any fails.
    Verify(VerifyArgs),
    /// Write the associated truncatified operad.
    Truncatify {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Classification checks.
    Classify(ClassifyArgs),
    /// Build D_A from an augmented algebra file {d, omega}.
    AlgebraToOperad {
        input: PathBuf,
        #[arg(short = 'N', long = "max-arity")]
        horizon: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Summary of an operad file.
    Info { input: PathBuf },
}

#[derive(Args)]
struct BuildArgs {
    name: String,
    #[arg(short = 'N', long = "max-arity")]
    horizon: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Augmented algebra file for `d`.
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Dimension of a random augmented algebra for `d` (uses --seed).
    #[arg(long)]
    dim: Option<usize>,
    /// Comma-separated signature for the signature constructions.
    #[arg(long, value_delimiter = ',')]
    signature: Vec<usize>,
    /// S_w-module file {w, d, generators} for `signature-operad`.
    #[arg(long)]
    module: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    #[arg(long)]
    axioms: bool,
    #[arg(long)]
    basis_theorem: bool,
    #[arg(long)]
    recursion: bool,
    #[arg(long)]
    truncatified: bool,
    #[arg(long)]
    poisson: bool,
    /// Largest arity for the basis theorem.
    #[arg(long)]
    max_arity: Option<usize>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    thm07: bool,
    #[arg(short = 'N', long = "max-arity", default_value_t = 5)]
    horizon: usize,
    /// Check that GK dimension < 2 forces Com.
    #[arg(long)]
    prop05: Option<PathBuf>,
    /// Operad with ^2U = 0: rebuild it from its arity-one algebra.
    #[arg(long)]
    roundtrip: Option<PathBuf>,
    /// Augmented algebra: extract it back from D_A.
    #[arg(long)]
    roundtrip_algebra: Option<PathBuf>,
}

/// Exit status with a message.
struct Failure {
    code: u8,
    msg: String,
}

impl From<OperadError> for Failure {
    fn from(e: OperadError) -> Self {
        let code = match e {
            OperadError::AxiomViolation(_) => 1,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

type CliResult = Result<bool, Failure>;

struct Ctx {
    manifest: Manifest,
    started: Instant,
}

impl Ctx {
    fn load(&mut self, path: &Path) -> Result<io::OperadDocument, Failure> {
        self.manifest.add_input(path)?;
        let doc = io::load_operad(path)?;
        self.manifest.horizon = Some(doc.operad.horizon());
        Ok(doc)
    }

    fn finish(&mut self) -> Value {
        self.manifest
            .timings_ms
            .push(("total".into(), self.started.elapsed().as_millis()));
        serde_json::to_value(&self.manifest).expect("serializable")
    }

    fn emit(&mut self, mut v: Value) {
        let m = self.finish();
        v.as_object_mut().expect("reports are objects").insert("manifest".into(), m);
        println!("{}", io::to_canonical_string(&v));
    }

    fn write(&mut self, p: &TruncatedOperad, grading: Option<&truncatify::Grading>, out: Option<&Path>) -> Result<(), Failure> {
        self.manifest.horizon = Some(p.horizon());
        let m = self.finish();
        let manifest: Manifest = serde_json::from_value(m).expect("roundtrip");
        match out {
            Some(path) => io::save_operad(p, grading, Some(&manifest), path)?,
            None => println!("{}", io::to_canonical_string(&io::operad_to_json(p, grading, Some(&manifest)))),
        }
        Ok(())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn build(ctx: &mut Ctx, a: &BuildArgs, seed: u64) -> Result<TruncatedOperad, Failure> {
    let n = a.horizon;
    Ok(match a.name.as_str() {
        "d" | "D" => {
            let alg = match (&a.algebra, a.dim) {
                (Some(path), _) => {
                    ctx.manifest.add_input(path)?;
                    io::algebra_from_json(&io::read_json(path)?)?
                }
                (None, Some(d)) => AugmentedAlgebra::random(d, seed),
                (None, None) => return Err(usage("build d needs --algebra FILE or --dim D")),
            };
            builders::build_d(&alg, n)?
        }
        "from-signature" => builders::build_from_signature(&a.signature, n)?,
        "unitary-from-signature" => builders::unitary_from_signature(&a.signature, n)?,
        "signature-operad" => {
            let path = a.module.as_ref().ok_or_else(|| usage("signature-operad needs --module FILE"))?;
            ctx.manifest.add_input(path)?;
            let m = io::module_from_json(&io::read_json(path)?)?;
            builders::build_signature_operad(m.w, &m, n, None)?
        }
        other => builders::builtin(other, n)?,
    })
}

fn run(cli: Cli) -> CliResult {
    let mut ctx = Ctx {
        manifest: Manifest::new(std::env::args().collect(), cli.seed),
        started: Instant::now(),
    };
    match cli.cmd {
        Cmd::Build(a) => {
            let p = build(&mut ctx, &a, cli.seed)?;
            ctx.write(&p, None, a.output.as_deref())?;
            Ok(true)
        }
        Cmd::Truncate { input, k, quotient } => {
            let p = ctx.load(&input)?.operad;
            let u = operad_core::truncation::trunc_ideal(&p, k)?;
            let bases: serde_json::Map<String, Value> = (0..=p.horizon())
                .map(|n| {
                    let c = u.component(n);
                    let rows: Vec<Vec<String>> = c
                        .rows()
                        .iter()
                        .map(|r| operad_core::linalg::to_dense(c.ambient(), r).iter().map(operad_core::linalg::format_q).collect())
                        .collect();
                    (n.to_string(), json!(rows))
                })
                .collect();
            if let Some(q) = quotient {
                let qp = ideal::quotient_by_truncation(&p, k)?;
                ctx.write(&qp, None, Some(&q))?;
            }
            ctx.emit(json!({ "k": k, "dims": u.dims(), "bases": bases }));
            Ok(true)
        }
        Cmd::Signature { input } => {
            let p = ctx.load(&input)?.operad;
            let s = operad_core::truncation::signature(&p)?;
            println!("{}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            Ok(true)
        }
        Cmd::Series { input, binomial, rational } => {
            let p = ctx.load(&input)?.operad;
            let ladder = Ladder::compute(&p)?;
            let dims = p.dims();
            let transform = series::binomial_transform(&series::to_big(&dims));
            let f = series::full_signature(&ladder);
            let gk = series::gkdim_report(&p, &ladder)?;
            let exact = gk.status == series::GkStatus::Exact;
            let h = series::hilbert_rational(&series::to_big(&f), p.horizon(), exact);
            let mut out = json!({
                "dims": dims,
                "gk": gk,
                "exponent_samples": series::exponent_samples(&dims),
            });
            let all = !binomial && !rational;
            if binomial || all {
                out["transform"] = json!(transform.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            }
            if rational || all {
                out["rational_terms"] = json!(h);
            }
            ctx.emit(out);
            Ok(true)
        }
        Cmd::Verify(v) => verify(&mut ctx, v),
        Cmd::Truncatify { input, output } => {
            let p = ctx.load(&input)?.operad;
            let t = truncatify::truncatify(&p)?;
            ctx.write(&t.operad, Some(&t.grading), Some(&output))?;
            Ok(true)
        }
        Cmd::Classify(c) => {
            let mut reports = Vec::new();
            if c.thm07 {
                reports.push(classify::check_thm07(c.horizon, cli.seed)?);
            }
            if let Some(path) = &c.prop05 {
                reports.push(classify::check_prop05(&ctx.load(path)?.operad)?);
            }
            if let Some(path) = &c.roundtrip {
                reports.push(classify::equivalence_roundtrip_operad(&ctx.load(path)?.operad)?);
            }
            if let Some(path) = &c.roundtrip_algebra {
                ctx.manifest.add_input(path)?;
                let a = io::algebra_from_json(&io::read_json(path)?)?;
                reports.push(classify::equivalence_roundtrip_algebra(&a, c.horizon)?);
            }
            if reports.is_empty() {
                return Err(usage("classify needs --thm07, --prop05, --roundtrip or --roundtrip-algebra"));
            }
            let ok = reports.iter().all(|r| r.passed());
            ctx.emit(json!({ "passed": ok, "reports": reports }));
            Ok(ok)
        }
        Cmd::AlgebraToOperad { input, horizon, output } => {
            ctx.manifest.add_input(&input)?;
            let a = io::algebra_from_json(&io::read_json(&input)?)?;
            let p = builders::build_d(&a, horizon)?;
            ctx.write(&p, None, output.as_deref())?;
            Ok(true)
        }
        Cmd::Info { input } => {
            let doc = ctx.load(&input)?;
            let p = &doc.operad;
            ctx.emit(json!({
                "name": p.name(),
                "max_arity": p.horizon(),
                "dims": p.dims(),
                "unitary": p.is_unitary(),
                "two_unit": p.two_unit().is_some(),
                "growth_certificate": p.certificate(),
                "graded": doc.grading.is_some(),
                "source_manifest": doc.manifest,
            }));
            Ok(true)
        }
    }
}

fn verify(ctx: &mut Ctx, v: VerifyArgs) -> CliResult {
    ctx.manifest.add_input(&v.input)?;
    let doc = io::operad_from_json_unchecked(&io::read_json(&v.input)?)?;
    let p = &doc.operad;
    let any = v.basis_theorem || v.recursion || v.truncatified || v.poisson;
    let mut results = serde_json::Map::new();
    let mut ok = true;
    if v.axioms || !any {
        let r = operad_core::axioms::verify_axioms(p);
        ok &= r.passed();
        results.insert("axioms".into(), json!(r));
    }
    if any && !operad_core::axioms::verify_axioms(p).passed() {
        return Err(usage("the operad fails its axioms; run verify --axioms for details"));
    }
    if v.basis_theorem || v.recursion {
        let ladder = Ladder::compute(p)?;
        if v.basis_theorem {
            let top = v.max_arity.unwrap_or(p.horizon()).min(p.horizon());
            let reports = (0..=top)
                .map(|n| basis::verify_basis_theorem(p, &ladder, n).map(|r| r.1))
                .collect::<Result<Vec<_>, _>>()?;
            ok &= reports.iter().all(|r| r.passed());
            results.insert("basis_theorem".into(), json!(reports));
        }
        if v.recursion {
            let r = basis::recursion_check(p, &ladder, None)?;
            ok &= r.passed();
            results.insert("recursion".into(), json!(r));
        }
    }
    if v.truncatified || v.poisson {
        let grading = doc
            .grading
            .clone()
            .ok_or_else(|| usage("the file has no \"grading\"; produce it with `operad truncatify`"))?;
        let t = truncatify::TruncatifiedOperad::with_grading(p.clone(), grading)?;
        if v.truncatified {
            let r = truncatify::is_truncatified(&t)?;
            ok &= r.passed();
            results.insert("truncatified".into(), json!(r));
        }
        if v.poisson {
            let r = truncatify::poisson_check(&t)?;
            ok &= r.passed();
            results.insert("poisson".into(), json!(r));
        }
    }
    results.insert("passed".into(), json!(ok));
    ctx.emit(Value::Object(results));
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
