use thiserror::Error;

use crate::lattice::ModeIndex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the zero mode (0,0) has no weight; it is excluded from every sum")]
    ZeroMode,

    #[error("truncation window [{m}, {n}] is too small: at least 3 modes are required")]
    WindowTooSmall { m: i64, n: i64 },

    #[error("window [{m}, {n}] does not cover the interior offsets {offsets:?} of class {class}")]
    WindowDoesNotCover {
        m: i64,
        n: i64,
        class: ModeIndex,
        offsets: Vec<i64>,
    },

    #[error("eigensolver did not converge (matrix size {size}{})", window_suffix(.window))]
    NoConvergence {
        size: usize,
        window: Option<(i64, i64)>,
    },

    #[error("mode {0} lies outside the truncation lattice")]
    ModeOutsideLattice(ModeIndex),

    #[error("time step must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("matrix representation check failed: {0}")]
    Representation(String),
}

fn window_suffix(window: &Option<(i64, i64)>) -> String {
    match window {
        Some((m, n)) => format!(", window [{m}, {n}]"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
