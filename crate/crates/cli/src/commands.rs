//! Subcommands. Each one parses its inputs, makes a single library call and
//! renders the result; no state survives between invocations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pseudopivot::{
    block_group_inverse, block_group_inverse_complementary, both_theorems_instance, check_hypotheses,
    complementary_schur, cpppt, group_inverse, pppt, pseudo_schur, theorem1_candidate, theorem1_instance,
    theorem1_violating_instance, theorem2_candidate, theorem2_instance, theorem2_violating_instance,
    verify_group_inverse, Error, Hypothesis, HypothesisReport, InstanceSpec, Matrix, Tolerance, Verification,
};
use serde::Serialize;

use crate::format::{self, FormatError};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    InputError = 1,
    NoGroupInverse = 2,
    HypothesisViolated = 3,
    VerificationFailed = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub enum Failure {
    Format(FormatError),
    Core(Error),
    Usage(String),
    Verification,
}

impl Failure {
    pub fn exit(&self) -> Exit {
        match self {
            Failure::Core(Error::NoGroupInverse { .. }) => Exit::NoGroupInverse,
            Failure::Core(Error::HypothesisViolated(_)) => Exit::HypothesisViolated,
            Failure::Verification => Exit::VerificationFailed,
            _ => Exit::InputError,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Format(e) => write!(f, "{e}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(s) => f.write_str(s),
            Failure::Verification => f.write_str("verification failed"),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Format(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Format(FormatError::Io(e))
    }
}

#[derive(Debug, Parser)]
#[command(name = "pseudopivot", version, about = "Group inverses of block matrices and pseudo principal pivot transforms")]
pub struct Cli {
    #[command(flatten)]
    pub tol: TolArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Relative singular-value cutoff for rank decisions [default: max(rows, cols) * eps]
    #[arg(long = "tol-rank", global = true)]
    pub rank: Option<f64>,
    /// Absolute residual floor for approximate equality
    #[arg(long = "tol-atol", global = true, default_value = "1e-10")]
    pub atol: f64,
    /// Relative residual scale for approximate equality
    #[arg(long = "tol-rtol", global = true, default_value = "1e-8")]
    pub rtol: f64,
}

impl TolArgs {
    pub fn tolerance(&self) -> Result<Tolerance, Failure> {
        Ok(Tolerance::new(self.rank, self.atol, self.rtol)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Theorem1,
    Theorem2,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group inverse of a square matrix file
    Ginv {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Group inverse of a block matrix via the pseudo Schur complement formulas
    Blockginv {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Theorem1)]
        variant: Variant,
        /// Apply the formula even when a range inclusion fails and report its residuals
        #[arg(long)]
        unchecked: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the hypothesis report [default: stderr]
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Pseudo principal pivot transform relative to A
    Ppt {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Complementary pseudo principal pivot transform relative to D
    Cppt {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pseudo Schur complement K = D - C A^# B
    Schur {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Complementary Schur complement L = A - B D^# C
    Cschur {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the three group-inverse equations for (M, X); exit 4 when they fail
    Verify { matrix: PathBuf, candidate: PathBuf },
    /// Generate a seeded block instance
    Gen {
        /// Size of the square block A
        #[arg(long)]
        p: usize,
        /// Size of the square block D
        #[arg(long)]
        q: usize,
        /// Rank of the pivot block (A, or D with --variant theorem2)
        #[arg(long = "rank-a")]
        rank_a: usize,
        /// Rank of the complement (K, or L with --variant theorem2; D with --variant both)
        #[arg(long = "rank-k")]
        rank_k: usize,
        #[arg(long)]
        seed: u64,
        /// Inclusion to break, e.g. incl_BA, or "none"
        #[arg(long)]
        violate: Option<String>,
        #[arg(long, value_enum, default_value_t = Variant::Theorem1)]
        variant: Variant,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Runs one parsed command, writing results and diagnostics to the given
/// streams, and returns the exit status.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Exit {
    match dispatch(cli, stdout, stderr) {
        Ok(exit) => exit,
        Err(f) => {
            let _ = writeln!(stderr, "error: {f}");
            f.exit()
        }
    }
}

fn emit(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Exit, Failure> {
    let tol = cli.tol.tolerance()?;
    match &cli.command {
        Command::Ginv { input, output } => {
            let a = format::read_matrix(input)?;
            let g = group_inverse(&a, &tol)?;
            emit(&format::render_matrix(&g.inverse), output.as_deref(), stdout)?;
        }
        Command::Blockginv {
            input,
            variant,
            unchecked,
            output,
            report,
        } => {
            let m = format::read_block(input)?;
            let (x, body) = blockginv(&m, *variant, *unchecked, &tol)?;
            let text = serde_json::to_string_pretty(&body).expect("report serializes") + "\n";
            match report {
                Some(p) => fs::write(p, &text)?,
                None => stderr.write_all(text.as_bytes())?,
            }
            emit(&format::render_matrix(&x?), output.as_deref(), stdout)?;
        }
        Command::Ppt { input, output } => {
            let m = format::read_block(input)?;
            emit(&format::render_block(&pppt(&m, &tol)?), output.as_deref(), stdout)?;
        }
        Command::Cppt { input, output } => {
            let m = format::read_block(input)?;
            emit(&format::render_block(&cpppt(&m, &tol)?), output.as_deref(), stdout)?;
        }
        Command::Schur { input, output } => {
            let m = format::read_block(input)?;
            emit(&format::render_matrix(&pseudo_schur(&m, &tol)?), output.as_deref(), stdout)?;
        }
        Command::Cschur { input, output } => {
            let m = format::read_block(input)?;
            emit(&format::render_matrix(&complementary_schur(&m, &tol)?), output.as_deref(), stdout)?;
        }
        Command::Verify { matrix, candidate } => {
            let m = format::read_matrix(matrix)?;
            let x = format::read_matrix(candidate)?;
            let v = verify_group_inverse(&m, &x, &tol)?;
            let text = serde_json::to_string_pretty(&VerifyReport::from(&v)).expect("report serializes") + "\n";
            stdout.write_all(text.as_bytes())?;
            if !v.verdict {
                return Err(Failure::Verification);
            }
        }
        Command::Gen {
            p,
            q,
            rank_a,
            rank_k,
            seed,
            violate,
            variant,
            output,
        } => {
            let violate = match violate.as_deref() {
                None | Some("none") => None,
                Some(name) => Some(name.parse::<Hypothesis>()?),
            };
            let spec = InstanceSpec {
                p: *p,
                q: *q,
                rank_a: *rank_a,
                rank_k: *rank_k,
                seed: *seed,
                violate,
            };
            let m = generate(&spec, *variant)?;
            emit(&format::render_block(&m), output.as_deref(), stdout)?;
        }
    }
    Ok(Exit::Success)
}

fn generate(spec: &InstanceSpec, variant: Variant) -> Result<pseudopivot::BlockMatrix, Failure> {
    let m = match (variant, spec.violate) {
        (Variant::Theorem1, None) => theorem1_instance(spec)?,
        (Variant::Theorem1, Some(_)) => theorem1_violating_instance(spec)?,
        (Variant::Theorem2, None) => theorem2_instance(spec)?,
        (Variant::Theorem2, Some(_)) => theorem2_violating_instance(spec)?,
        (Variant::Both, None) => both_theorems_instance(spec)?,
        (Variant::Both, Some(_)) => {
            return Err(Failure::Usage("--violate cannot be combined with --variant both".into()));
        }
    };
    Ok(m)
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub residuals: [f64; 3],
    pub max_residual: f64,
    pub verdict: bool,
}

impl From<&Verification> for VerifyReport {
    fn from(v: &Verification) -> Self {
        VerifyReport {
            residuals: v.residuals,
            max_residual: v.max_residual(),
            verdict: v.verdict,
        }
    }
}

/// Hypothesis verdicts keyed by their canonical names.
#[derive(Debug, Serialize)]
pub struct HypothesisJson {
    pub a_index1: bool,
    pub k_defined: bool,
    pub k_index1: bool,
    pub d_index1: bool,
    pub l_defined: bool,
    pub l_index1: bool,
    #[serde(rename = "incl_CstarAstar")]
    pub incl_cstar_astar: bool,
    #[serde(rename = "incl_BA")]
    pub incl_b_a: bool,
    #[serde(rename = "incl_CK")]
    pub incl_c_k: bool,
    #[serde(rename = "incl_BstarKstar")]
    pub incl_bstar_kstar: bool,
    #[serde(rename = "incl_BstarDstar")]
    pub incl_bstar_dstar: bool,
    #[serde(rename = "incl_CD")]
    pub incl_c_d: bool,
    #[serde(rename = "incl_BL")]
    pub incl_b_l: bool,
    #[serde(rename = "incl_CstarLstar")]
    pub incl_cstar_lstar: bool,
}

impl From<&HypothesisReport> for HypothesisJson {
    fn from(r: &HypothesisReport) -> Self {
        HypothesisJson {
            a_index1: r.a_index1,
            k_defined: r.k_defined,
            k_index1: r.k_index1,
            d_index1: r.d_index1,
            l_defined: r.l_defined,
            l_index1: r.l_index1,
            incl_cstar_astar: r.incl_cstar_astar,
            incl_b_a: r.incl_b_a,
            incl_c_k: r.incl_c_k,
            incl_bstar_kstar: r.incl_bstar_kstar,
            incl_bstar_dstar: r.incl_bstar_dstar,
            incl_c_d: r.incl_c_d,
            incl_b_l: r.incl_b_l,
            incl_cstar_lstar: r.incl_cstar_lstar,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BlockReport {
    pub variant: &'static str,
    pub unchecked: bool,
    pub hypotheses: HypothesisJson,
    /// First failed inclusion of the selected variant(s), if any.
    pub violated: Option<&'static str>,
    pub verification: Option<VerifyReport>,
    /// `‖X1 − X2‖_F` between the two formulas, for `--variant both`.
    pub agreement: Option<f64>,
}

type BlockOutcome = (Result<Matrix, Error>, BlockReport);

fn blockginv(m: &pseudopivot::BlockMatrix, variant: Variant, unchecked: bool, tol: &Tolerance) -> Result<BlockOutcome, Failure> {
    let report = check_hypotheses(m, tol);
    let mut body = BlockReport {
        variant: match variant {
            Variant::Theorem1 => "theorem1",
            Variant::Theorem2 => "theorem2",
            Variant::Both => "both",
        },
        unchecked,
        hypotheses: HypothesisJson::from(&report),
        violated: None,
        verification: None,
        agreement: None,
    };
    let failed = match variant {
        Variant::Theorem1 => report.failed(&Hypothesis::THEOREM1),
        Variant::Theorem2 => report.failed(&Hypothesis::THEOREM2),
        Variant::Both => report
            .failed(&Hypothesis::THEOREM1)
            .or(report.failed(&Hypothesis::THEOREM2)),
    };
    body.violated = failed.map(Hypothesis::name);

    let result = if unchecked {
        match variant {
            Variant::Theorem1 => theorem1_candidate(m, tol),
            Variant::Theorem2 => theorem2_candidate(m, tol),
            Variant::Both => theorem1_candidate(m, tol).and_then(|x1| {
                let x2 = theorem2_candidate(m, tol)?;
                body.agreement = Some((&x1 - &x2).frobenius_norm());
                Ok(x1)
            }),
        }
    } else {
        match variant {
            Variant::Theorem1 => block_group_inverse(m, tol),
            Variant::Theorem2 => block_group_inverse_complementary(m, tol),
            Variant::Both => block_group_inverse(m, tol).and_then(|x1| {
                let x2 = block_group_inverse_complementary(m, tol)?;
                body.agreement = Some((&x1 - &x2).frobenius_norm());
                Ok(x1)
            }),
        }
    };
    if let Ok(x) = &result {
        body.verification = Some(VerifyReport::from(&verify_group_inverse(&m.assemble(), x, tol)?));
    }
    Ok((result, body))
}
