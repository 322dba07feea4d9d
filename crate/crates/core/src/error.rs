use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ball off grid")]
    BallOffGrid,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("type violation at (x={x:?}, s={s}, t={t})")]
    TypeViolation { x: Vec<f64>, s: f64, t: f64 },

    #[error("complementary diverges at s={0}")]
    ComplementaryDiverges(f64),

    #[error("luxembourg bracket")]
    LuxembourgBracket,

    #[error("LP stall after {0} pivots")]
    LpStall(usize),

    #[error("LP infeasible")]
    LpInfeasible,

    #[error("LP unbounded")]
    LpUnbounded,

    #[error("scale t={t} below grid spacing h={h}")]
    ScaleBelowSpacing { t: f64, h: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
