//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("unknown derivation `{0}`")]
    UnknownDerivation(String),

    #[error("minimal polynomial is not monic")]
    NotMonic,

    #[error("minimal polynomial is not separable: gcd(p, p') has positive degree")]
    NotSeparable,

    #[error("invalid algebra table: {invariant} violated at {witness}")]
    InvalidAlgebra { invariant: String, witness: String },

    #[error("element is not invertible")]
    NotInvertible,

    #[error("index out of range: {0}")]
    IndexOutOfRange(usize),

    #[error("unassigned variable `{0}`")]
    UnassignedVariable(String),

    #[error("syntax error at {line}:{col}: {msg}")]
    SyntaxError { line: u32, col: u32, msg: String },

    #[error("unknown identifier `{name}` at {line}:{col}")]
    UnknownIdentifier { name: String, line: u32, col: u32 },

    #[error("exponent at {line}:{col} is not an integer literal")]
    NonIntegerExponent { line: u32, col: u32 },

    #[error("division by an expression containing system variables")]
    DivisionByVariable,

    #[error("declared derivations do not commute: {0}")]
    NonCommutingDerivations(String),

    #[error("Lie bracket is not expressible in the declared derivation family: {0}")]
    BracketNotInFamily(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
