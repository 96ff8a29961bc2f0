//! `pgcodes`: batch front end for building incidence codes, making words,
//! applying the maps and running the verification suites.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pgcodes::analysis::{self, classify_small_weight, LemmaSchedule, Report};
use pgcodes::codespace::{build_code, min_weight, spectrum, Code, CodeKind, DEFAULT_WORD_CAP};
use pgcodes::constructions::{self, detect_pull_back, FieldReduction};
use pgcodes::geometry::{incidence_matrix, set_subspace_cap, Chart, ProjectiveSpace, Subspace, DEFAULT_SUBSPACE_CAP};
use pgcodes::io::{self, WordFile};
use pgcodes::{maps, Error};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "pgcodes", version, about = "Codes of subspaces in finite projective spaces")]
struct Cli {
    /// Seed for every randomized sample.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest number of subspaces that may be enumerated.
    #[arg(long, global = true, env = "PGCODES_SUBSPACE_CAP", default_value_t = DEFAULT_SUBSPACE_CAP)]
    subspace_cap: u128,
    /// Largest number of codewords an exhaustive scan may visit.
    #[arg(long, global = true, env = "PGCODES_WORD_CAP", default_value_t = DEFAULT_WORD_CAP)]
    word_cap: u128,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    #[command(subcommand)]
    Geometry(GeometryCmd),
    #[command(subcommand)]
    Code(CodeCmd),
    #[command(subcommand)]
    Word(WordCmd),
    #[command(subcommand)]
    Map(MapCmd),
    Verify(VerifyArgs),
}

#[derive(Args, Clone, Copy)]
struct SpaceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u32,
}

impl SpaceArgs {
    fn space(self) -> Result<Arc<ProjectiveSpace>, Error> {
        ProjectiveSpace::shared(self.n, self.q)
    }
}

#[derive(Subcommand)]
enum GeometryCmd {
    /// List the subspaces of one dimension in canonical order.
    Enum {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        dim: isize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Incidence matrix of `k`-spaces against `j`-spaces.
    Matrix {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        k: isize,
        #[arg(long)]
        j: isize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Primal,
    Dual,
    Hull,
    Span,
}

impl From<KindArg> for CodeKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Primal => CodeKind::Primal,
            KindArg::Dual => CodeKind::Dual,
            KindArg::Hull => CodeKind::Hull,
            KindArg::Span => CodeKind::Span,
        }
    }
}

#[derive(Subcommand)]
enum CodeCmd {
    Build {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        j: isize,
        #[arg(long)]
        k: isize,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        out: PathBuf,
    },
    Dim { file: PathBuf },
    /// Minimum weight; exits 3 if the search could not be completed.
    Minweight {
        file: PathBuf,
        #[arg(long)]
        exhaustive_cap: Option<u128>,
    },
    Spectrum {
        file: PathBuf,
        #[arg(long)]
        max_weight: usize,
    },
}

#[derive(Subcommand)]
enum WordCmd {
    #[command(subcommand)]
    Make(MakeCmd),
    /// Membership, weight, classification and pull-back detection.
    Check {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        word: PathBuf,
    },
}

#[derive(Subcommand)]
enum MakeCmd {
    /// Standard word from `iota`, `pi`, `rho`, or the `index`-th one in
    /// canonical order when they are omitted.
    Standard {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        j: isize,
        #[arg(long)]
        k: isize,
        #[arg(long)]
        iota: Option<String>,
        #[arg(long)]
        pi: Option<String>,
        #[arg(long)]
        rho: Option<String>,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lift a point word of `PG(n-j, q)` through a `(j-1)`-space.
    Pullback {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        iota: String,
        /// Defaults to the standard complement of `iota`.
        #[arg(long)]
        pi: Option<String>,
        #[arg(long)]
        k: isize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Place a word of `PG(dim pi, q)` on the subspace `pi`.
    Embed {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        pi: String,
        #[arg(long)]
        k: isize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cone over a plane word with vertex `tau`, vertex removed.
    Cone {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        pi: String,
        #[arg(long)]
        tau: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Push a point word of `PG((n+1)e-1, q)` down to `PG(n, q^e)`.
    Fieldred {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        e: u32,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct MapIo {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum MapCmd {
    Proj {
        #[arg(long)]
        r: String,
        #[arg(long)]
        pi: String,
        #[command(flatten)]
        io: MapIo,
    },
    Pa {
        #[arg(long)]
        iota: String,
        /// Defaults to the standard complement of `iota`.
        #[arg(long)]
        pi: Option<String>,
        #[command(flatten)]
        io: MapIo,
    },
    La {
        #[arg(long)]
        i: isize,
        #[command(flatten)]
        io: MapIo,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Smallweight,
    Dual,
    Hull,
    Cyclic,
    Lemmas,
    Span,
    Secants,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, default_value_t = 0)]
    j: isize,
    #[arg(long)]
    k: isize,
    /// Weight bound for the small-weight and secant suites.
    #[arg(long)]
    bound: Option<u64>,
    /// Random samples per randomized property.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// JSON-lines report destination.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// What a command produced: text for stdout and whether its claims held.
struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    set_subspace_cap(u64::try_from(cli.subspace_cap).unwrap_or(u64::MAX));
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("pgcodes: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("pgcodes: {e}");
            ExitCode::from(if e.is_cap() { EXIT_CAP } else { EXIT_USAGE })
        }
    }
}

type Res<T> = Result<T, Error>;

fn run(cli: &Cli) -> Res<Outcome> {
    match &cli.cmd {
        Cmd::Geometry(g) => geometry(g),
        Cmd::Code(c) => code(cli, c),
        Cmd::Word(WordCmd::Make(m)) => make(m),
        Cmd::Word(WordCmd::Check { code, word }) => check(code, word),
        Cmd::Map(m) => map(m),
        Cmd::Verify(v) => verify(cli, v),
    }
}

/// Writes `text` to `out`, or returns it for stdout.
fn emit(out: Option<&Path>, text: String) -> Res<String> {
    match out {
        Some(p) => io::write_file(p, &text).map(|_| String::new()),
        None => Ok(text),
    }
}

/// Subspaces on the command line use `_` or spaces between basis vectors.
fn subspace_arg(space: &ProjectiveSpace, s: &str) -> Res<Subspace> {
    io::parse_subspace(space, &s.replace('_', " "))
}

fn chart(space: &Arc<ProjectiveSpace>, pi: &Subspace) -> Res<Chart> {
    space.chart(pi, &space.sibling(pi.dim().max(0) as usize))
}

fn geometry(g: &GeometryCmd) -> Res<Outcome> {
    match g {
        GeometryCmd::Enum { space, dim, out } => {
            let s = space.space()?;
            let list = s.index(*dim)?;
            let text = io::write_subspaces(list.iter());
            Ok(Outcome::ok(emit(out.as_deref(), text)?))
        }
        GeometryCmd::Matrix { space, k, j, out } => {
            let m = incidence_matrix(&space.space()?, *k, *j)?;
            io::write_file(out, &m.to_text())?;
            Ok(Outcome::ok(format!("{} x {} with {} ones\n", m.rows, m.cols, m.entries.len())))
        }
    }
}

fn load_code(path: &Path) -> Res<Code> {
    io::read_code(&io::read_file(path)?)
}

fn load_word(path: &Path) -> Res<WordFile> {
    io::read_word(&io::read_file(path)?)
}

fn code(cli: &Cli, c: &CodeCmd) -> Res<Outcome> {
    match c {
        CodeCmd::Build { space, j, k, kind, out } => {
            let code = build_code(&space.space()?, *j, *k, (*kind).into())?;
            io::write_file(out, &io::write_code(&code))?;
            Ok(Outcome::ok(format!("{} dim {}\n", code.params().label(), code.dim())))
        }
        CodeCmd::Dim { file } => Ok(Outcome::ok(format!("{}\n", load_code(file)?.dim()))),
        CodeCmd::Minweight { file, exhaustive_cap } => {
            let code = load_code(file)?;
            let r = min_weight(&code, exhaustive_cap.unwrap_or(cli.word_cap), cli.seed);
            let stdout = format!("weight {}\nexhaustive {}\n", r.weight, r.exhaustive);
            Ok(Outcome { stdout, code: if r.exhaustive { 0 } else { EXIT_CAP } })
        }
        CodeCmd::Spectrum { file, max_weight } => {
            let code = load_code(file)?;
            let s = spectrum(&code, *max_weight, cli.word_cap)?;
            let mut out = String::new();
            for (w, n) in &s.counts {
                let _ = writeln!(out, "{w} {n}");
            }
            let _ = writeln!(out, "exhaustive {}", s.exhaustive);
            Ok(Outcome { stdout: out, code: if s.exhaustive { 0 } else { EXIT_CAP } })
        }
    }
}

fn line(s: &Subspace) -> String {
    io::subspace_line(s)
}

fn save_word(out: &Path, w: WordFile) -> Res<Outcome> {
    let weight = w.word.weight();
    io::write_file(out, &io::write_word(&w))?;
    Ok(Outcome::ok(format!("weight {weight}\n")))
}

fn make(m: &MakeCmd) -> Res<Outcome> {
    match m {
        MakeCmd::Standard { space, j, k, iota, pi, rho, index, out } => {
            let s = space.space()?;
            let word = match (iota, pi, rho) {
                (Some(i), Some(a), Some(b)) => {
                    constructions::standard_word(&s, &subspace_arg(&s, i)?, &subspace_arg(&s, a)?, &subspace_arg(&s, b)?)?
                }
                (None, None, None) => {
                    let all = constructions::standard_words(&s, *j, *k)?;
                    let count = all.len();
                    all.into_iter().nth(*index).ok_or_else(|| {
                        Error::InvalidParameters(format!("index {index} out of range; there are {count} standard words"))
                    })?
                }
                _ => return Err(Error::InvalidParameters("give all of --iota, --pi, --rho or none".into())),
            };
            if word.j() != *j {
                return Err(Error::InvalidParameters(format!("iota gives j = {}, not {j}", word.j())));
            }
            save_word(out, WordFile::new(word).with("construction", "standard").with("k", k))
        }
        MakeCmd::Pullback { space, iota, pi, k, input, out } => {
            let s = space.space()?;
            let iota = subspace_arg(&s, iota)?;
            let pi = match pi {
                Some(p) => subspace_arg(&s, p)?,
                None => s.complement(&iota)?,
            };
            let c = load_word(input)?.word;
            let word = constructions::pull_back(&chart(&s, &pi)?, &iota, *k, &c)?;
            let f = WordFile::new(word).with("construction", "pullback").with("k", k).with("iota", line(&iota)).with("pi", line(&pi));
            save_word(out, f)
        }
        MakeCmd::Embed { space, pi, k, input, out } => {
            let s = space.space()?;
            let pi = subspace_arg(&s, pi)?;
            let c = load_word(input)?.word;
            let word = constructions::embed(&chart(&s, &pi)?, *k, &c)?;
            save_word(out, WordFile::new(word).with("construction", "embed").with("k", k).with("pi", line(&pi)))
        }
        MakeCmd::Cone { space, pi, tau, input, out } => {
            let s = space.space()?;
            let pi = subspace_arg(&s, pi)?;
            let tau = subspace_arg(&s, tau)?;
            let c = load_word(input)?.word;
            let word = constructions::truncated_cone(&chart(&s, &pi)?, &tau, &c)?;
            let f = WordFile::new(word).with("construction", "cone").with("pi", line(&pi)).with("tau", line(&tau));
            save_word(out, f)
        }
        MakeCmd::Fieldred { space, e, input, out } => {
            let fr = FieldReduction::new(space.n, space.q, *e)?;
            let c = load_word(input)?.word;
            if c.n() != fr.small().n() || c.space().field() != fr.small().field() {
                return Err(Error::InvalidParameters(format!("the input word must live on PG({}, {})", fr.small().n(), space.q)));
            }
            let word = fr.reduce_word(&c)?;
            save_word(out, WordFile::new(word).with("construction", "fieldred").with("e", e))
        }
    }
}

fn check(code_path: &Path, word_path: &Path) -> Res<Outcome> {
    let code = load_code(code_path)?;
    let w = load_word(word_path)?.word;
    let params = code.params();
    if w.n() != params.n || w.q() != params.q || w.j() != params.j {
        return Err(Error::MixedGeometry);
    }
    let member = code.contains(&w)?;
    let mut out = String::new();
    let _ = writeln!(out, "code {}", params.label());
    let _ = writeln!(out, "member {member}");
    let _ = writeln!(out, "weight {}", w.weight());
    if member && params.kind == CodeKind::Primal {
        let c = classify_small_weight(&w, &code)?;
        let _ = writeln!(out, "class {}", c.kind);
        for (s, a) in &c.spaces {
            let _ = writeln!(out, "  {a} * {}", line(s));
        }
    }
    if params.j >= 1 {
        match detect_pull_back(&w)? {
            Some(pb) => {
                let _ = writeln!(out, "pullback yes iota={}", line(&pb.iota));
            }
            None => {
                let _ = writeln!(out, "pullback no");
            }
        }
    }
    Ok(Outcome { stdout: out, code: if member { 0 } else { EXIT_FAIL } })
}

fn map(m: &MapCmd) -> Res<Outcome> {
    let io_of = |m: &MapCmd| match m {
        MapCmd::Proj { io, .. } | MapCmd::Pa { io, .. } | MapCmd::La { io, .. } => (io.input.clone(), io.out.clone()),
    };
    let (input, out) = io_of(m);
    let v = load_word(&input)?.word;
    let s = Arc::clone(v.space());
    let f = match m {
        MapCmd::Proj { r, pi, .. } => {
            let (r, pi) = (subspace_arg(&s, r)?, subspace_arg(&s, pi)?);
            let w = maps::proj(&r, &pi, &v)?;
            WordFile::new(w).with("map", "proj").with("r", line(&r)).with("pi", line(&pi))
        }
        MapCmd::Pa { iota, pi, .. } => {
            let iota = subspace_arg(&s, iota)?;
            let pi = match pi {
                Some(p) => subspace_arg(&s, p)?,
                None => s.complement(&iota)?,
            };
            let w = maps::pa(&iota, &pi, &v)?;
            WordFile::new(w).with("map", "pa").with("iota", line(&iota)).with("pi", line(&pi))
        }
        MapCmd::La { i, .. } => WordFile::new(maps::la(*i, &v)?).with("map", "la").with("i", i),
    };
    save_word(&out, f)
}

fn verify(cli: &Cli, v: &VerifyArgs) -> Res<Outcome> {
    let SpaceArgs { n, q } = v.space;
    let (j, k, cap) = (v.j, v.k, cli.word_cap);
    let report: Report = match v.suite {
        Suite::Smallweight => analysis::verify_small_weight_theorem(n, q, j, k, v.bound, cap)?,
        Suite::Dual => analysis::verify_dual_reduction(n, q, j, k, cap)?,
        Suite::Hull => analysis::verify_hull(n, q, j, k, cap)?,
        Suite::Cyclic => analysis::verify_cyclicity(n, q, j, k)?,
        Suite::Lemmas => {
            let schedule = LemmaSchedule { seed: cli.seed, samples: v.samples, ..LemmaSchedule::default() };
            analysis::verify_map_lemmas(n, q, j, k, &schedule)?
        }
        Suite::Span => analysis::verify_span_lemma(n, q, j, k, cap, cli.seed, v.samples)?,
        Suite::Secants => analysis::verify_secants(n, q, k, v.bound, cap)?,
    };
    if let Some(path) = &v.report {
        io::write_file(path, &report.to_jsonl())?;
    }
    let code = if report.passed() { 0 } else { EXIT_FAIL };
    Ok(Outcome { stdout: report.table(), code })
}
