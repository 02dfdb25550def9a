use core::fmt;

use crate::block::Hypothesis;

/// Which matrix a group-inverse existence failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operand {
    /// A plain square input.
    Input,
    /// Top-left block `A`.
    A,
    /// Bottom-right block `D`.
    D,
    /// Pseudo Schur complement `K = D - C A^# B`.
    K,
    /// Complementary Schur complement `L = A - B D^# C`.
    L,
}

impl Operand {
    pub fn symbol(self) -> &'static str {
        match self {
            Operand::Input => "A",
            Operand::A => "A",
            Operand::D => "D",
            Operand::K => "K",
            Operand::L => "L",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Entry count does not match `rows * cols`, or a dimension is zero.
    InvalidShape { rows: usize, cols: usize, len: usize },
    /// An entry is NaN or infinite.
    NonFinite { row: usize, col: usize },
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    NotSquare { rows: usize, cols: usize },
    /// `rank(X) != rank(X^2)`: the operand has index greater than one.
    NoGroupInverse {
        operand: Operand,
        rank: usize,
        rank_squared: usize,
    },
    HypothesisViolated(Hypothesis),
    /// The requested hypothesis cannot be broken for this shape/rank combination.
    InfeasibleViolation(Hypothesis),
    GenerationFailed { attempts: usize },
    InvalidTolerance,
    InvalidSpec(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidShape { rows, cols, len } => write!(
                f,
                "invalid matrix shape {rows}x{cols} with {len} entries"
            ),
            Error::NonFinite { row, col } => {
                write!(f, "non-finite entry at ({row}, {col})")
            }
            Error::DimensionMismatch { op, left, right } => write!(
                f,
                "dimension mismatch in {op}: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::NotSquare { rows, cols } => {
                write!(f, "expected a square matrix, got {rows}x{cols}")
            }
            Error::NoGroupInverse {
                operand,
                rank,
                rank_squared,
            } => {
                let s = operand.symbol();
                write!(
                    f,
                    "{s} has no group inverse: rank({s})={rank}, rank({s}^2)={rank_squared}"
                )
            }
            Error::HypothesisViolated(h) => {
                write!(f, "hypothesis violated: {} ({})", h.name(), h.statement())
            }
            Error::InfeasibleViolation(h) => write!(
                f,
                "cannot violate {} for the requested block sizes and ranks",
                h.name()
            ),
            Error::GenerationFailed { attempts } => {
                write!(f, "instance generation failed after {attempts} attempts")
            }
            Error::InvalidTolerance => {
                f.write_str("tolerances must be finite and nonnegative")
            }
            Error::InvalidSpec(why) => write!(f, "invalid instance spec: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
