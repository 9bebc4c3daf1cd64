//! Alice's winning strategies for rectangles.

mod bounding;
mod fast_square;
mod stab;

use thiserror::Error;

pub use bounding::{choose_n, choose_n_holds, BoundingPhase, BoundingPlan};
pub use fast_square::{FastBranch, FastCase, FastSquarePlan};
pub use stab::{bounded_rectangle_move, bounded_rectangle_move_in, helly_cell, stab_sets, stab_sets_in, StabCopy, StabState};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AliceError {
    #[error("strategy needs a rectangular animal, got {0}")]
    NotRectangle(String),
    #[error("strategy needs a square animal, got {0}")]
    NotSquare(String),
    #[error("strategy needs a bounded board")]
    NeedsBoundedBoard,
    #[error("strategy needs an infinite board")]
    NeedsInfiniteBoard,
    /// No Bob-free copy is left in the region.
    #[error("no target: every copy in the region holds a Bob cell")]
    NoTarget,
    #[error("the stabbing copies share no cell")]
    EmptyIntersection,
    /// The position left the case analysis the strategy relies on.
    #[error("case not covered: {0}")]
    CaseNotCovered(String),
}

/// `(n, m)` of an `R(n, m)` animal.
pub(crate) fn rectangle_dims(animal: &crate::animal::Animal) -> Result<(i32, i32), AliceError> {
    match *animal.spec() {
        crate::animal::AnimalSpec::Rect { n, m } => Ok((n, m)),
        ref other => {
            // Explicit cell lists can still be full rectangles.
            let s = animal.shape();
            if s.len() == (s.width() * s.height()) as usize {
                Ok((s.width(), s.height()))
            } else {
                Err(AliceError::NotRectangle(other.to_string()))
            }
        }
    }
}
