use thiserror::Error;

/// Errors surfaced by the exact layers of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GhostError {
    #[error("singular matrix")]
    SingularMatrix,

    #[error("invalid theta signature: {0}")]
    InvalidSignature(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("edge does not belong to the polygon")]
    ForeignEdge,

    #[error("configuration must have rank >= 1")]
    EmptyConfiguration,

    #[error("non-generic configuration: all geodesics coincide up to orientation")]
    NonGeneric,

    #[error("phantom geodesic has no well-defined pole")]
    PhantomGeodesic,

    #[error("barycenter solver did not converge after {iterations} iterations (grad norm {grad_norm:e})")]
    NoConvergence { iterations: usize, grad_norm: f64 },

    #[error("division by the zero pair ({0}, {0})")]
    ZeroPairDivision(String),

    #[error("map is only defined for projective (single-label) elements; found label {0}")]
    NonProjective(usize),

    #[error("malformed permutation: {0}")]
    BadPermutation(String),

    #[error("transversality failure between flags at {0} and {1}")]
    Transversality(String, String),

    #[error("element contains a logarithm generator and has no evaluation")]
    LogarithmNotEvaluable,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("label {label} out of range for signature with {labels} labels")]
    LabelOutOfRange { label: usize, labels: usize },

    #[error("{0}")]
    Other(String),
}
