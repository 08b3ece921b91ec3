use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockcert::operators::OperatorParams;
use fockcert::scalar::parse_rational;
use num_complex::Complex;
use num_rational::BigRational;

pub fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s.trim()).ok_or_else(|| format!("expected an integer or p/q rational, got {s:?}"))
}

#[derive(Parser, Debug, Clone)]
#[command(name = "fockcert", version, about = "Exact identities, least-norm solves and bound certificates for α∂^k∂̄^k + β∂̄^k + γ∂^k + c on L²(ℂ, e^{-|z|²})")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Run the exact identity suites on seeded random φ.
    #[command(after_help = VERIFY_HELP)]
    Verify(VerifyArgs),
    /// Least-norm solve of Hu = f for a polynomial f read from --f.
    #[command(after_help = SOLVE_HELP)]
    Solve(SolveArgs),
    /// Coercivity constant and right-inverse norm against the closed-form bound.
    #[command(after_help = CERTIFY_HELP)]
    Certify(CertifyArgs),
    /// Ratio, cross-term and scaling tables over a parameter grid.
    #[command(after_help = SWEEP_HELP)]
    Sweep(SweepArgs),
    /// Cross-validation of closed forms against quadrature.
    #[command(after_help = ORACLE_HELP)]
    Oracle(OracleArgs),
}

const VERIFY_HELP: &str = "Artifacts: identities.json, identities.csv\n\
identities.csv columns: identity_id,k,deg_phi,passed\n\
Exit 0 iff every exact check has zero discrepancy, 1 otherwise.";

const SOLVE_HELP: &str = "Artifacts: solve.json, u.json (ZPoly JSON), trace.csv\n\
trace.csv columns: buffer,norm_u_sq\n\
With --radius the bounded-domain estimate is evaluated on the disc centred at z0 instead (domain.csv columns: case,radius,factor,lhs,rhs).\n\
With --lambda or --z0 the weight e^{-λ|z-z0|²} is used.\n\
Exit 1 when an unconditional bound is exceeded.";

const CERTIFY_HELP: &str = "Artifacts: certify.json, certify.csv\n\
certify.csv columns: quantity,computed,bound,holds\n\
Exit 1 when a pure-case bound fails.";

const SWEEP_HELP: &str = "Artifacts: sweep.json, sweep.csv, cross_terms.csv, scaling.csv\n\
sweep.csv columns: k,alpha,beta,gamma,c_re,c_im,f_index,N,buffer,ratio,residual,status\n\
cross_terms.csv columns: k,alpha,beta,gamma,phi_index,l,gamma_pairing,beta_pairing,combination,vanishes (pairings are exact multiples of π, written re+im i)\n\
scaling.csv columns: case,lambda,z0_re,z0_im,k,ratio\n\
Rows are sorted by grid key. Ratios of mixed operators are reported, not asserted.";

const ORACLE_HELP: &str = "Artifacts: oracle.json, oracle.csv\n\
oracle.csv columns: index,k,alpha,beta,gamma,c_re,c_im,weak_residual\n\
Exit 1 when an inner product or weak residual misses its tolerance.";

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact unless the operator is pure with c ≠ 0, whose least-norm solution is not a polynomial.
    Auto,
    Exact,
    Float,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Pure,
    Mixed,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Directory receiving the artifacts.
    #[arg(long, default_value = "fockcert-out")]
    pub out: PathBuf,
    /// What to print on stdout: the JSON artifact or the main CSV table.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct OperatorArgs {
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value = "0", value_parser = rational)]
    pub alpha: BigRational,
    #[arg(long, default_value = "0", value_parser = rational)]
    pub beta: BigRational,
    #[arg(long, default_value = "0", value_parser = rational)]
    pub gamma: BigRational,
    #[arg(long = "c-re", default_value = "0", value_parser = rational)]
    pub c_re: BigRational,
    #[arg(long = "c-im", default_value = "0", value_parser = rational)]
    pub c_im: BigRational,
}

impl OperatorArgs {
    pub fn params(&self) -> fockcert::Result<OperatorParams> {
        OperatorParams::new(
            self.k,
            self.alpha.clone(),
            self.beta.clone(),
            self.gamma.clone(),
            Complex::new(self.c_re.clone(), self.c_im.clone()),
        )
    }
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    #[arg(long = "radial-nodes", default_value_t = 64)]
    pub radial_nodes: usize,
    #[arg(long = "angular-nodes", default_value_t = 128)]
    pub angular_nodes: usize,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Operator order; all of 1, 2, 3 when omitted.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random φ per order.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Total degree bound of φ.
    #[arg(long, default_value_t = 6)]
    pub degree: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    /// Path to f in ZPoly JSON form.
    #[arg(long = "f")]
    pub f: PathBuf,
    /// Per-variable degree of the f-space; defaults to the degree of f.
    #[arg(long = "N")]
    pub n: Option<u32>,
    /// Final buffer; the trace also solves at k and 2k below it.
    #[arg(long)]
    pub buffer: Option<u32>,
    #[arg(long, default_value = "1", value_parser = rational)]
    pub lambda: BigRational,
    #[arg(long = "z0-re", default_value = "0", value_parser = rational)]
    pub z0_re: BigRational,
    #[arg(long = "z0-im", default_value = "0", value_parser = rational)]
    pub z0_im: BigRational,
    /// Disc radius for the bounded-domain estimate (disc centred at z0).
    #[arg(long, value_parser = rational)]
    pub radius: Option<BigRational>,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    /// Per-variable degree for the coercivity constant.
    #[arg(long = "N", default_value_t = 8)]
    pub n: u32,
    /// Per-variable degree of the f-space of the materialized right inverse.
    #[arg(long = "inverse-n", default_value_t = 6)]
    pub inverse_n: u32,
    /// Buffer of the right inverse; defaults to 2k.
    #[arg(long)]
    pub buffer: Option<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Largest operator order.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = Family::All)]
    pub family: Family,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random f per grid point.
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    /// Total degree bound of f.
    #[arg(long, default_value_t = 4)]
    pub degree: u32,
    /// Comma-separated λ values for the scaling table.
    #[arg(long, value_delimiter = ',', default_value = "1/2,1,2", value_parser = rational)]
    pub lambda: Vec<BigRational>,
    #[arg(long = "z0-re", default_value = "0", value_parser = rational)]
    pub z0_re: BigRational,
    #[arg(long = "z0-im", default_value = "0", value_parser = rational)]
    pub z0_im: BigRational,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    /// Largest monomial degree in the inner-product check.
    #[arg(long, default_value_t = 32)]
    pub degree: u32,
    /// Seeded (u, f = Hu) pairs for the weak residual.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
