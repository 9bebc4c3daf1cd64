//! Polyominoes ("animals"), their symmetries, and the named families.

mod geometry;
mod polyomino;
mod punch;
mod spec;

use thiserror::Error;

pub use geometry::{transform_cells, BoardFrame, Cell, D4Element, Placement, Rect};
pub use polyomino::{is_connected, Orientation, Polyomino};
pub use punch::{classify_piece, outer_witness, punch, PieceClass};
pub use spec::{format_cell_list, make_animal, parse_cell_list, size_witnesses, Animal, AnimalSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnimalError {
    #[error("animal descriptor: {0}")]
    Parse(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("an animal needs at least one cell")]
    Empty,
    #[error("cells are not 4-connected")]
    Disconnected,
    #[error("removed cell {0} is not an interior cell of the square")]
    RemovedNotInterior(Cell),
    #[error("removing the listed cells disconnects the square")]
    RemovalDisconnects,
    #[error("the removed piece is empty")]
    EmptyPiece,
    #[error("cell {0} is not part of the animal")]
    NotSubset(Cell),
    #[error("removing the piece leaves nothing")]
    NothingLeft,
    #[error("the remainder after removing the piece is disconnected")]
    DisconnectedResult,
}

/// Applies a placement to a canonical polyomino.
pub fn transform(p: &Polyomino, pl: Placement) -> Vec<Cell> {
    p.place(pl)
}

/// Distinct images of `p` under the eight symmetries, in element order.
pub fn orientations(p: &Polyomino) -> Vec<Polyomino> {
    p.orientations().into_iter().map(|o| o.shape).collect()
}
