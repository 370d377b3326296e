use thiserror::Error;

/// Errors raised by the jet-space layer.
#[derive(Debug, Clone, Error)]
pub enum JetError {
    /// A total derivative would push some jet variable past the configured
    /// truncation order.
    #[error("jet truncation exceeded: {var} would reach order {order}, cap is {cap}")]
    TruncationExceeded { var: String, order: usize, cap: usize },

    /// Divergence extraction was asked for a density with a nonzero Euler
    /// image; the offending field and residual are reported.
    #[error("not a total divergence: Euler image w.r.t. `{field}` is {residual}")]
    NotDivergence { field: String, residual: String },

    /// Divergence extraction rejects densities with a nonzero constant term.
    #[error("degenerate input: constant term {constant} is not a divergence")]
    ConstantTerm { constant: String },

    /// Gradient integration failed the mixed-partial symmetry test.
    #[error("non-integrable gradient: d/d{var_a} of partial[{var_b}] != d/d{var_b} of partial[{var_a}]")]
    NonIntegrable { var_a: String, var_b: String },

    /// Evaluation was missing an assignment for a jet variable.
    #[error("missing assignment for jet variable {var}")]
    MissingAssignment { var: String },

    /// Two operands were built over different field sets.
    #[error("field set mismatch: {context}")]
    FieldSetMismatch { context: String },

    /// A direction index was out of range for the field set's dimension.
    #[error("direction {dir} out of range for dimension {dim}")]
    BadDirection { dir: usize, dim: usize },

    /// A field name or index was not present in the field set.
    #[error("unknown field: {name}")]
    UnknownField { name: String },
}
