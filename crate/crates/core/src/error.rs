use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed rational {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("negative weight {value} at step ({i}, {j})")]
    NegativeWeight { i: i8, j: i8, value: String },

    #[error("weights sum to {sum}, expected exactly 1 (pass --normalize to rescale)")]
    SumNotOne { sum: String },

    #[error("all mass sits on the stay step p(0,0); the walk never moves")]
    AllMassAtOrigin,

    #[error("kernel is not biquadratic: {0} vanishes identically")]
    NotBiquadratic(&'static str),

    #[error("Eisenstein invariants of the two partial discriminants disagree ({which})")]
    InvariantMismatch { which: &'static str },

    #[error("curve is singular (discriminant zero); no group law")]
    SingularCurve,

    #[error("point ({x}, {y}) is not on the curve")]
    NotOnCurve { x: String, y: String },

    #[error("even-index division polynomial requested at a point with y = 0")]
    DivisionByZeroY,

    #[error("division-polynomial order {division:?} disagrees with repeated-addition order {addition:?}")]
    MethodDisagreement {
        division: Option<u32>,
        addition: Option<u32>,
    },

    #[error("point of order {0} contradicts the rational torsion classification")]
    MazurViolation(u32),

    #[error("order {0} lies outside the rational torsion range 1..=12")]
    OutOfMazurRange(u32),

    #[error("QRT iteration hit a pole (denominator {0:e})")]
    NearPole(f64),

    #[error("every seed of the orbit estimate degenerated")]
    AllSeedsDegenerate,

    #[error("invalid support mask {0:?}: expected 8 characters of '0'/'1'")]
    BadSupport(String),

    #[error("scan space too large to index")]
    ScanTooLarge,
}
