//! Command-line front end. `run` parses arguments, dispatches, and returns
//! the process exit status: 0 on success, 1 on a verification failure,
//! 2 on bad input or usage.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::chains::{self, build_graph, check_stationary, ChainKind};
use crate::corpus;
use crate::extensions::{count_extensions, ExtensionIndex};
use crate::linform::{char_poly, format_rational, LinearForm, RationalAssignment};
use crate::monoid::{rtrivial_spectrum, PromotionMonoid, SuppDes, DEFAULT_CAP};
use crate::poset::{Poset, PosetSpec};
use crate::sampler::{
    chi_square_999, chi_square_uniform, counts, iterate_distribution, kernel_for, sample_walk,
    WalkConfig,
};
use crate::spectral::{
    chain_count_by_extensions, chains_sign_finding, check_forest_spectrum, nonlinear_factor_degree,
    predict_spectrum_chains, predict_spectrum_forest, DerangementTable, UpperSetLattice,
};
use crate::{verify, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "linext",
    version,
    about = "Exact Markov chains on linear extensions of finite posets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the linear extensions, one per line, lexicographic order.
    Extensions { poset: PathBuf },
    /// Print the transition graph as an edge list or DOT.
    Graph {
        poset: PathBuf,
        #[command(flatten)]
        kind: KindArg,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
        /// Include self-loops.
        #[arg(long)]
        loops: bool,
    },
    /// Print the symbolic generator matrix.
    Matrix {
        poset: PathBuf,
        #[command(flatten)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Closed-form stationary weights, optionally evaluated and checked.
    Stationary {
        poset: PathBuf,
        #[command(flatten)]
        kind: KindArg,
        /// Rational assignment such as 1/10,2/10,3/10,4/10.
        #[arg(long)]
        at: Option<String>,
    },
    /// Eigenvalues of the promotion generator as linear forms.
    Spectrum {
        poset: PathBuf,
        /// Compare against the characteristic polynomial at this assignment.
        #[arg(long)]
        check_at: Option<String>,
    },
    /// The promotion monoid generated by the hat-promotion operators.
    Monoid {
        poset: PathBuf,
        /// Abort closure beyond this many elements.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Seeded random walk, or the exact TV trace with --tv.
    Sample {
        poset: PathBuf,
        /// Probabilities x_1..x_n summing to 1.
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        burnin: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Kind::UniformPromotion)]
        kind: Kind,
        /// Emit the exact TV-to-uniform trace for `steps` steps instead.
        #[arg(long)]
        tv: bool,
    },
    /// Run the invariant suite over the bundled corpus or a corpus file.
    Verify { corpus: Option<PathBuf> },
    /// Map named elements onto a naturally labeled poset JSON.
    Relabel { input: PathBuf },
}

#[derive(Args, Debug)]
pub struct KindArg {
    #[arg(long, value_enum)]
    pub kind: Kind,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    UniformTransposition,
    Transposition,
    UniformPromotion,
    Promotion,
}

impl From<Kind> for ChainKind {
    fn from(k: Kind) -> ChainKind {
        match k {
            Kind::UniformTransposition => ChainKind::UniformTransposition,
            Kind::Transposition => ChainKind::Transposition,
            Kind::UniformPromotion => ChainKind::UniformPromotion,
            Kind::Promotion => ChainKind::Promotion,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// A failure carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn bad(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.to_string(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        bad(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        bad(format!("io: {e}"))
    }
}

/// Parse `args` (including the program name) and run, writing to `out` and
/// `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Extensions { poset } => extensions(&load_poset(poset)?, out),
        Command::Graph {
            poset,
            kind,
            dot,
            loops,
        } => graph(&load_poset(poset)?, kind.kind.into(), *dot, *loops, out),
        Command::Matrix {
            poset,
            kind,
            format,
        } => matrix(&load_poset(poset)?, kind.kind.into(), *format, out),
        Command::Stationary { poset, kind, at } => {
            stationary(&load_poset(poset)?, kind.kind.into(), at.as_deref(), out)
        }
        Command::Spectrum { poset, check_at } => {
            spectrum(&load_poset(poset)?, check_at.as_deref(), out)
        }
        Command::Monoid { poset, cap } => monoid(&load_poset(poset)?, *cap, out),
        Command::Sample {
            poset,
            x,
            steps,
            burnin,
            seed,
            kind,
            tv,
        } => {
            let p = load_poset(poset)?;
            let probs = parse_assignment(x, p.len())?;
            sample(&p, (*kind).into(), &probs, *steps, *burnin, *seed, *tv, out)
        }
        Command::Verify { corpus } => verify_corpus(corpus.as_deref(), out),
        Command::Relabel { input } => relabel(input, out),
    }
}

pub fn load_poset(path: &Path) -> Result<Poset, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| bad(format!("io: {}: {e}", path.display())))?;
    let poset = Poset::from_json(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    poset.require_natural()?;
    Ok(poset)
}

pub fn parse_assignment(text: &str, n: usize) -> Result<RationalAssignment, Failure> {
    let v = RationalAssignment::parse(text)?;
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        }
        .into());
    }
    Ok(v)
}

fn word_string(w: &[usize], sep: &str) -> String {
    w.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn compact(w: &[usize]) -> String {
    word_string(w, if w.len() > 9 { "." } else { "" })
}

fn extensions(p: &Poset, out: &mut dyn Write) -> Result<i32, Failure> {
    crate::extensions::for_each_extension(p, |w| {
        let _ = writeln!(out, "{}", word_string(w, " "));
    });
    Ok(EXIT_OK)
}

fn graph(
    p: &Poset,
    kind: ChainKind,
    dot: bool,
    loops: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let g = build_graph(p, kind)?;
    if dot {
        out.write_all(g.to_dot(loops).as_bytes())?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "from,to,operator,weight")?;
    for e in g.edges.iter().filter(|e| loops || !e.is_loop()) {
        writeln!(
            out,
            "{},{},{},{}",
            compact(g.vertices.word(e.from)),
            compact(g.vertices.word(e.to)),
            e.operator,
            e.weight
        )?;
    }
    Ok(EXIT_OK)
}

fn matrix(p: &Poset, kind: ChainKind, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = build_graph(p, kind)?;
    let m = g.generator_matrix();
    match format {
        Format::Csv => out.write_all(m.to_csv().as_bytes())?,
        Format::Json => {
            let mut v = m.to_json();
            v["kind"] = kind.name().into();
            v["extensions"] = g
                .vertices
                .words()
                .iter()
                .map(|w| compact(w))
                .collect::<Vec<_>>()
                .into();
            v["rendered"] = serde_json::to_value(m.rendered()).expect("strings serialize");
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&v).expect("json value serializes")
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn stationary(
    p: &Poset,
    kind: ChainKind,
    at: Option<&str>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let index = ExtensionIndex::new(p)?;
    let weights = chains::stationary_closed_form(p, kind)?;
    let Some(at) = at else {
        for (w, f) in index.words().iter().zip(&weights) {
            writeln!(out, "{} {f}", compact(w))?;
        }
        return Ok(EXIT_OK);
    };
    let v = parse_assignment(at, p.len())?;
    let values = weights
        .iter()
        .map(|f| f.evaluate(&v))
        .collect::<crate::Result<Vec<_>>>()?;
    let probs = chains::normalize(values);
    for ((w, f), q) in index.words().iter().zip(&weights).zip(&probs) {
        writeln!(out, "{} {f} {}", compact(w), format_rational(q))?;
    }
    let c = check_stationary(p, kind, &v)?;
    writeln!(out, "kernel check: {}", verdict(c.passed()))?;
    Ok(if c.passed() { EXIT_OK } else { EXIT_VERIFY })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn spectrum(p: &Poset, check_at: Option<&str>, out: &mut dyn Write) -> Result<i32, Failure> {
    let n = p.len();
    let v = check_at.map(|t| parse_assignment(t, n)).transpose()?;
    let mut ok = true;
    let lattice = UpperSetLattice::new(p);
    let dp_ok = lattice
        .elements()
        .iter()
        .all(|&s| lattice.chain_count(s) == Some(chain_count_by_extensions(p, s) as u128));
    ok &= dp_ok;
    if p.is_rooted_forest() {
        let spec = predict_spectrum_forest(p)?
            .shifted(&LinearForm::total(n).neg())
            .normalized();
        writeln!(out, "eigenvalue,multiplicity")?;
        for (f, m) in &spec.entries {
            writeln!(out, "{f},{m}")?;
        }
        let table = DerangementTable::new(p);
        let d_ok = table.all_nonnegative() && table.total() == count_extensions(p) as i128;
        writeln!(
            out,
            "chain counts by lattice recursion = by extensions: {}",
            verdict(dp_ok)
        )?;
        writeln!(
            out,
            "derangement numbers nonnegative, sum |L(P)|: {}",
            verdict(d_ok)
        )?;
        ok &= d_ok;
        if p.is_consecutive_chain_union() {
            let dfrak = table.dfrak.as_ref().expect("consecutive chains");
            let routes = dfrak
                .iter()
                .all(|&(s, c)| table.d_of(s.complement(n)) == Some(c as i128));
            let chains_form = predict_spectrum_chains(p)?.normalized() == spec;
            writeln!(
                out,
                "lattice and poset derangement counts agree: {}",
                verdict(routes)
            )?;
            writeln!(
                out,
                "eigenvalues are -x_S over lower sets: {}",
                verdict(chains_form)
            )?;
            ok &= routes && chains_form;
        }
        if let Some(v) = &v {
            let cp = check_forest_spectrum(p, v)?;
            writeln!(out, "characteristic polynomial at {v}: {}", verdict(cp))?;
            ok &= cp;
            if p.is_consecutive_chain_union() {
                let s = chains_sign_finding(p, v)?;
                let says = |b: bool| if b { "matches" } else { "does not match" };
                writeln!(
                    out,
                    "sign at {v}: -x_S {}, +x_S {}",
                    says(s.minus_matches),
                    says(s.plus_matches)
                )?;
                ok &= s.minus_matches;
            }
        }
    } else {
        writeln!(out, "not a rooted forest: no closed-form spectrum")?;
        writeln!(
            out,
            "chain counts by lattice recursion = by extensions: {}",
            verdict(dp_ok)
        )?;
        if let Some(v) = &v {
            let m = build_graph(p, ChainKind::Promotion)?
                .generator_matrix()
                .evaluate(v)?;
            let cp = char_poly(&m);
            writeln!(out, "characteristic polynomial at {v}: {cp}")?;
            writeln!(
                out,
                "degree not split into rational roots: {}",
                nonlinear_factor_degree(&m)
            )?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn monoid(p: &Poset, cap: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    let m = PromotionMonoid::generate(p, cap)?;
    writeln!(out, "elements: {}", m.len())?;
    let r = m.is_r_trivial();
    match r.witness {
        None => writeln!(out, "R-trivial: yes")?,
        Some((a, b)) => {
            writeln!(
                out,
                "R-trivial: no, {} and {} generate the same right ideal",
                m.describe(a),
                m.describe(b)
            )?;
        }
    }
    let idempotents = (0..m.len()).filter(|&k| m.is_idempotent(k)).count();
    writeln!(out, "idempotents: {idempotents}")?;
    if let Some((k, index, period)) = m.aperiodicity_witness() {
        writeln!(
            out,
            "aperiodic: no, {} has x^{index} = x^{} with period {period}",
            m.describe(k),
            index + period
        )?;
    } else {
        writeln!(out, "aperiodic: yes")?;
    }
    if !r.trivial {
        return Ok(EXIT_OK);
    }
    let sd = SuppDes::new(&m)?;
    writeln!(out, "L^M: {}", verify::render_sets(&sd.lattice))?;
    writeln!(out, "element,supp,des")?;
    for k in 0..m.len() {
        writeln!(out, "{},{},{}", word_name(&m, k), sd.supp[k], sd.des[k])?;
    }
    let spec = rtrivial_spectrum(&m, &sd)?;
    writeln!(out, "eigenvalue,multiplicity")?;
    for (f, d) in &spec.entries {
        writeln!(out, "{f},{d}")?;
    }
    Ok(EXIT_OK)
}

fn word_name(m: &PromotionMonoid, k: usize) -> String {
    let w = m.word(k);
    if w.is_empty() {
        "1".into()
    } else {
        w.iter().map(|i| format!("G{i}")).collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn sample(
    p: &Poset,
    kind: ChainKind,
    probs: &RationalAssignment,
    steps: usize,
    burnin: usize,
    seed: u64,
    tv: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let kernel = kernel_for(p, kind, probs)?;
    if tv {
        writeln!(
            out,
            "# kind={} x={probs} start={}",
            kind.name(),
            compact(kernel.extensions.word(0))
        )?;
        let trace = iterate_distribution(&kernel, 0, steps)?;
        out.write_all(trace.to_csv().as_bytes())?;
        return Ok(EXIT_OK);
    }
    let cfg = WalkConfig {
        probabilities: probs.clone(),
        steps,
        burnin,
        seed,
        start: 0,
    };
    let samples = sample_walk(&kernel, &cfg)?;
    let c = counts(&samples, kernel.len());
    writeln!(
        out,
        "# kind={} x={probs} steps={steps} burnin={burnin} seed={seed} rng=chacha8",
        kind.name()
    )?;
    writeln!(out, "extension,count")?;
    for (k, count) in c.iter().enumerate() {
        writeln!(out, "{},{count}", compact(kernel.extensions.word(k)))?;
    }
    if kind.is_uniform() && kernel.len() > 1 {
        let df = kernel.len() - 1;
        writeln!(
            out,
            "# chi2 vs uniform = {:.4}, df = {df}, 0.999 quantile = {:.3}",
            chi_square_uniform(&c),
            chi_square_999(df)
        )?;
    }
    Ok(EXIT_OK)
}

fn verify_corpus(path: Option<&Path>, out: &mut dyn Write) -> Result<i32, Failure> {
    let entries = match path {
        None => corpus::bundled(),
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| bad(format!("io: {}: {e}", p.display())))?;
            corpus::parse(&text).map_err(bad)?
        }
    };
    writeln!(out, "corpus: {} posets", entries.len())?;
    let mut failed = 0;
    for o in verify::run(&entries) {
        match &o.failure {
            None => writeln!(
                out,
                "PASS {} ({} cases): {}",
                o.name, o.checked, o.invariant
            )?,
            Some(f) => {
                failed += 1;
                writeln!(out, "FAIL {}: {}", o.name, o.invariant)?;
                writeln!(out, "  counterexample: {f}")?;
            }
        }
    }
    writeln!(
        out,
        "{}",
        if failed == 0 {
            "all checks passed".to_string()
        } else {
            format!("{failed} checks failed")
        }
    )?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
}

/// Input of `relabel`: named elements and relations `[a, b]` meaning a ⪯ b.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedPoset {
    elements: Vec<String>,
    relations: Vec<[String; 2]>,
}

/// Output of `relabel`: poset JSON plus the name carried by each label.
#[derive(Serialize)]
struct Relabeled {
    #[serde(flatten)]
    spec: PosetSpec,
    labels: Vec<String>,
}

fn relabel(path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| bad(format!("io: {}: {e}", path.display())))?;
    let named: NamedPoset =
        serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let rel: Vec<(String, String)> = named.relations.into_iter().map(|[a, b]| (a, b)).collect();
    let (poset, labels) = Poset::relabel_natural(&named.elements, &rel)?;
    let v = Relabeled {
        spec: poset.to_spec(),
        labels,
    };
    writeln!(
        out,
        "{}",
        serde_json::to_string(&v).expect("relabeled poset serializes")
    )?;
    Ok(EXIT_OK)
}
