//! `powerfree`: counts, statistics, generating functions, morphisms and
//! bounds for powerfree words.

mod commands;
mod output;

use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "powerfree", version, about = "Computations on powerfree words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of powerfree words of each length, `n,count`.
    Count(CountArgs),
    /// Distribution of the letter-0 count over binary powerfree words.
    Dist(DistArgs),
    /// Series or exact rational generating function of a length-p language.
    Genfun(GenfunArgs),
    /// Entropy h_p of length-p languages from the transfer system.
    Hp(HpArgs),
    /// All poles of the exact generating function, `re,im,multiplicity`.
    Poles(PolesArgs),
    /// Decide whether a morphism is k-powerfree.
    VerifyMorphism(VerifyArgs),
    /// Uniform k-powerfree morphisms given by their sets of images.
    SearchMorphisms(SearchArgs),
    /// Size and length profile of the test-set for uniform morphisms.
    Testset(TestsetArgs),
    /// Entropy bounds as JSON objects.
    Bounds(BoundsArgs),
    /// Letter frequencies of a morphism's fixed points, or letter-count
    /// ranges of powerfree words.
    Freq(FreqArgs),
    /// Bounded check of a Brinkhuis set and its entropy bound.
    Brinkhuis(BrinkhuisArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Language {
    /// Exponent of the forbidden powers.
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Alphabet size.
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Run {
    /// Output format [default: csv; json for search-morphisms, bounds and
    /// brinkhuis; a frequency line for freq].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads [default: available cores].
    #[arg(long)]
    pub workers: Option<usize>,
    /// Largest number of search-tree nodes an enumeration may visit.
    #[arg(long, env = "POWERFREE_NODE_BUDGET")]
    pub budget: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub lang: Language,
    /// Only forbid powers of period at most p.
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub max_n: usize,
    /// `n,count` file used beyond the node budget [default: bundled binary
    /// cubefree counts to n = 80].
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DistOutput {
    /// `n,n0,count`
    Joint,
    /// `n,variance,min,max`
    Stats,
    /// `x,g` with x = (n0 - n/2)/sqrt(n) and g = sqrt(n) b(n,n0)/b(n)
    Scaled,
    /// `n,e,p,gaussian`: probabilities against a Gaussian of equal variance
    Gaussian,
    /// `n_min,n_max,slope`: least-squares slope of the variance
    Slope,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Exponent of the forbidden powers.
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Single length.
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    pub n: Option<usize>,
    #[arg(long, requires = "n_max")]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = DistOutput::Stats)]
    pub output: DistOutput,
    /// `n,n0,count` file used beyond the node budget [default: bundled
    /// binary cubefree table at n = 80].
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Clone, Args)]
pub struct Exact {
    /// Bound on max(deg num, deg den) [default: published degrees, else the
    /// state count].
    #[arg(long)]
    pub degree_bound: Option<usize>,
    /// Allow the exact computation beyond the default period limit.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct GenfunArgs {
    #[command(flatten)]
    pub lang: Language,
    /// Longest forbidden period.
    #[arg(long)]
    pub p: usize,
    /// Print the exact rational function instead of the series.
    #[arg(long)]
    pub exact: bool,
    /// Human-readable polynomials with --exact.
    #[arg(long, requires = "exact")]
    pub pretty: bool,
    /// Last series coefficient.
    #[arg(long, default_value_t = 40)]
    pub max_n: usize,
    #[command(flatten)]
    pub exact_opts: Exact,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Args)]
pub struct HpArgs {
    #[command(flatten)]
    pub lang: Language,
    /// Single period.
    #[arg(long, conflicts_with = "p_max")]
    pub p: Option<usize>,
    /// Every period 0..=p_max.
    #[arg(long, default_value_t = 10)]
    pub p_max: usize,
    /// Convergence tolerance of the power iteration.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Add the degrees of the exact generating function and h from its
    /// dominant pole (periods up to the exact limit).
    #[arg(long)]
    pub degrees: bool,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Args)]
pub struct PolesArgs {
    #[command(flatten)]
    pub lang: Language,
    #[arg(long)]
    pub p: usize,
    /// Relative residual every reported root must meet.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub exact_opts: Exact,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Morphism JSON, e.g. {"k":3,"images":{"0":"01","1":"10"}}.
    #[arg(long)]
    pub morphism: PathBuf,
    /// Exponent [default: from the file, else 3].
    #[arg(long)]
    pub k: Option<u32>,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// Source alphabet size.
    #[arg(long)]
    pub source: usize,
    /// Target alphabet size.
    #[arg(long, default_value_t = 2)]
    pub target: usize,
    /// Image length.
    #[arg(long)]
    pub length: usize,
    /// Report sets meeting the sufficient criterion instead of the exact test.
    #[arg(long)]
    pub bean: bool,
    /// Stop after this many sets.
    #[arg(long)]
    pub limit: Option<usize>,
    /// Refuse searches with more candidate images than this.
    #[arg(long, default_value_t = 4096)]
    pub max_candidates: usize,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Args)]
pub struct TestsetArgs {
    #[command(flatten)]
    pub lang: Language,
    /// Print every word, one per line, in lexicographic order.
    #[arg(long)]
    pub list: bool,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LanguageName {
    BinaryCubefree,
    TernarySquarefree,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum, default_value_t = LanguageName::BinaryCubefree)]
    pub language: LanguageName,
    /// Published entropy bounds (the default when nothing else is asked).
    #[arg(long)]
    pub reference: bool,
    /// Upper bound ln c(n)/n; repeatable.
    #[arg(long = "count-n")]
    pub count_n: Vec<usize>,
    /// Lower bound ln r/(l-1) from a verified uniform morphism.
    #[arg(long, requires = "r")]
    pub morphism: Option<PathBuf>,
    /// Images per target letter of --morphism.
    #[arg(long)]
    pub r: Option<usize>,
    /// Lower bound ln r/(l-1) for a Brinkhuis set, given as `r:l`; repeatable.
    #[arg(long, value_parser = parse_pair)]
    pub brinkhuis: Vec<(usize, usize)>,
    /// Count-based bounds may use the bundled fixture beyond the budget.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    #[command(flatten)]
    pub run: Run,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected r:l, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad r in {s:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad l in {s:?}"))?;
    Ok((a, b))
}

#[derive(Debug, Args)]
pub struct FreqArgs {
    /// Morphism JSON whose fixed-point letter frequencies are printed.
    #[arg(long, required_unless_present = "n")]
    pub morphism: Option<PathBuf>,
    /// Letter-count range over powerfree words of this length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Letter for --n.
    #[arg(long, default_value_t = 0)]
    pub letter: u8,
    #[command(flatten)]
    pub lang: Language,
    #[command(flatten)]
    pub run: Run,
}

#[derive(Debug, Args)]
pub struct BrinkhuisArgs {
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 3)]
    pub alphabet: usize,
    /// One comma-separated set per letter, sets separated by `;`.
    #[arg(
        long,
        conflicts_with = "morphism",
        required_unless_present = "morphism"
    )]
    pub sets: Option<String>,
    /// Morphism JSON whose images are grouped r at a time.
    #[arg(long, requires = "r")]
    pub morphism: Option<PathBuf>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Longest preimage word checked.
    #[arg(long, default_value_t = 10)]
    pub max_len: usize,
    #[command(flatten)]
    pub run: Run,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = commands::dispatch(cli.command, &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(commands::Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
