use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::verify::Verifier;

#[derive(Debug, Parser)]
#[command(
    name = "qthreshold",
    version,
    about = "Decoding-success curves and finite-length threshold checks for linear codes over F_q",
    long_about = "Decoding-success curves and finite-length threshold checks for linear codes over F_q.\n\n\
        Codes are given either as a builtin spec (rep:q:n, hamming:7:4, random:q:n:k:seed, \
        augment-e1:<spec>) or as a generator-matrix file whose first line is the header \
        \"q n k\" followed by k rows of n field elements.\n\n\
        Exit status: 0 success, 1 an inequality was violated (a witness JSON is written), \
        2 usage or input error, 3 resource cap or i/o error.\n\n\
        Every subcommand accepts --config FILE, a flat key=value file whose keys are flag \
        names; flags given on the command line take precedence."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Success probability g(p) of maximum-likelihood decoding over a noise
    /// grid, as CSV.
    ///
    /// g(p) is the probability that a p-noisy error word (each coordinate
    /// nonzero with probability p, uniformly among the q-1 nonzero symbols)
    /// is decoded back to the transmitted codeword. Exact mode enumerates
    /// F_q^n once; mc mode samples with a Hoeffding half-width.
    #[command(args_override_self = true)]
    Threshold(ThresholdArgs),

    /// Run the inequality verifiers over a corpus of small codes and
    /// monotone functions, as a JSON report.
    ///
    /// talagrand: E[sqrt h] >= (1-p)/2 * E[f](1-E[f]).
    /// iso: E[h] >= (1-p)/2 * sqrt(Delta) * E[f](1-E[f]).
    /// russo: -dE[f]/dp >= E[h]/(q-1).
    /// delta-bound: least positive boundary value of the decoding region is at
    /// least d/q - 3.
    /// gbound: g(p1)(1-g(p0)) <= exp(-((1-p1)/4) * sqrt(d)/q^1.5 * (p1-p0))
    /// for codes with d >= 4q.
    /// largesupport: |supp(c) minus supp(z)| >= d/q - d(z,c) + d(z,C) for
    /// nonzero codewords c with d(z,0) <= d(z,c).
    /// symmetry: z decodes to 0 iff z+c decodes to c, and the decoding region
    /// is monotone.
    /// appendix-b: after adjoining e_1 to a code, the decoding error
    /// probability is at least p.
    #[command(args_override_self = true, verbatim_doc_comment)]
    Verify(VerifyArgs),

    /// Check g(p1)(1-g(p0)) <= exp(-((1-p1)/4) * sqrt(d)/q^1.5 * (p1-p0)) for one
    /// code and one pair p0 <= p1. Needs minimum distance d >= 4q.
    #[command(name = "gbound", args_override_self = true)]
    GBound(GBoundArgs),

    /// Check that success at p - n^(-1/4) - shift is at least
    /// 1 - 2L exp(-((1-p)/4) * sqrt(d)/q^1.5 * shift).
    ///
    /// Premises, checked first: every Hamming ball of radius floor(pn) holds
    /// at most L codewords (exhaustive scan), d >= 4q, and the shifted noise
    /// level is nonnegative. Also reports the list-decoding step: at
    /// p - n^(-1/4) maximum-likelihood success is at least the success of
    /// the uniform list decoder, which is at least 1/(2L).
    #[command(name = "main-bound", args_override_self = true)]
    MainBound(MainBoundArgs),

    /// Probability that erasure decoding is ambiguous: some other codeword
    /// agrees with the sent one on every unerased coordinate.
    #[command(args_override_self = true)]
    Erasure(ErasureArgs),

    /// Adjoin e_1 to a code and check that its maximum-likelihood error
    /// probability is at least p at every grid point, in exact rational
    /// arithmetic, while the base code stays list-decodable.
    #[command(name = "appendix-b", args_override_self = true)]
    AppendixB(AppendixBArgs),

    /// Whether every Hamming ball of the given radius holds at most L
    /// codewords.
    #[command(name = "list-decodable", args_override_self = true)]
    ListDecodable(ListDecodableArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunOpts {
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses one per core. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat key=value file supplying defaults for these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct CodeArgs {
    /// Builtin code: rep:q:n, hamming:7:4, random:q:n:k:seed or
    /// augment-e1:<spec>.
    #[arg(long)]
    pub code: Option<String>,
    /// Generator-matrix file: header "q n k", then k rows of n elements.
    #[arg(long)]
    pub code_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Args)]
pub struct EstimatorArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Monte Carlo sample count; required by mc mode, rejected by exact mode.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Confidence parameter of the Hoeffding half-width.
    #[arg(long, default_value_t = 1e-6)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Noise grid as start:stop:step or a comma-separated list. Defaults to
    /// 0, 0.01, ... up to (q-1)/q.
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    #[command(flatten)]
    pub run: RunOpts,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run every verifier.
    #[arg(long, conflicts_with = "verifier")]
    pub all: bool,
    /// Verifiers to run.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub verifier: Vec<Verifier>,
    /// Alphabet sizes of the corpus.
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub q: Vec<u32>,
    /// Largest block length in the corpus.
    #[arg(long, default_value_t = 6)]
    pub nmax: usize,
    /// Random codes per alphabet size.
    #[arg(long, default_value_t = 10)]
    pub codes: usize,
    /// Total random received words for largesupport.
    #[arg(long, default_value_t = 1000)]
    pub instances: u64,
    /// Monotonicity direction checked by the symmetry verifier.
    #[arg(long, value_enum, default_value_t = DirectionArg::ZeroingNeverDecreases)]
    pub direction: DirectionArg,
    /// Where to write violations; defaults to <out>.witness.json, or standard
    /// error without --out.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    /// Setting a zero coordinate to a nonzero value never increases f.
    ZeroingNeverDecreases,
    /// Setting a zero coordinate to a nonzero value never decreases f.
    ZeroingNeverIncreases,
}

#[derive(Debug, Args)]
pub struct GBoundArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long)]
    pub p0: f64,
    #[arg(long)]
    pub p1: f64,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunOpts,
}

#[derive(Debug, Args)]
pub struct MainBoundArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Noise level defining the list-decoding radius floor(pn).
    #[arg(long)]
    pub p: f64,
    /// List size L.
    #[arg(long)]
    pub list_size: usize,
    /// Extra noise shift; success is evaluated at p - n^(-1/4) - shift.
    #[arg(long)]
    pub shift: f64,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunOpts,
}

#[derive(Debug, Args)]
pub struct ErasureArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Sent codeword as comma-separated symbols; defaults to the zero word.
    #[arg(long)]
    pub codeword: Option<String>,
    /// Erasure probabilities, as start:stop:step or a comma-separated list.
    #[arg(long, default_value = "0.1,0.3,0.5")]
    pub grid: String,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
    #[command(flatten)]
    pub run: RunOpts,
}

#[derive(Debug, Args)]
pub struct AppendixBArgs {
    /// The base code, before e_1 is adjoined.
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value = "0.05:0.5:0.05")]
    pub grid: String,
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ListModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args)]
pub struct ListDecodableArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long)]
    pub radius: usize,
    #[arg(long)]
    pub list_size: usize,
    #[arg(long, value_enum, default_value_t = ListModeArg::Exhaustive)]
    pub list_mode: ListModeArg,
    /// Centers to try in sampled mode.
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
    #[command(flatten)]
    pub run: RunOpts,
}
