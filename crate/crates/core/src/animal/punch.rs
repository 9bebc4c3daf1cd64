//! Removing pieces from an animal and telling inner pieces from outer ones.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::geometry::Cell;
use super::polyomino::{is_connected, Polyomino};
use super::AnimalError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceClass {
    /// No copy of the remainder disjoint from it can reach the removed cells.
    Inner,
    /// Some disjoint copy of the remainder overlaps the removed cells.
    Outer,
}

impl std::fmt::Display for PieceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PieceClass::Inner => "inner",
            PieceClass::Outer => "outer",
        })
    }
}

fn remainder(a: &Polyomino, piece: &[Cell]) -> Result<Vec<Cell>, AnimalError> {
    if piece.is_empty() {
        return Err(AnimalError::EmptyPiece);
    }
    if let Some(c) = piece.iter().find(|c| !a.contains(**c)) {
        return Err(AnimalError::NotSubset(*c));
    }
    let rest: Vec<Cell> = a.cells().iter().copied().filter(|c| !piece.contains(c)).collect();
    if rest.is_empty() {
        return Err(AnimalError::NothingLeft);
    }
    if !is_connected(&rest) {
        return Err(AnimalError::DisconnectedResult);
    }
    Ok(rest)
}

/// `A \ C`, canonicalized. Only defined when the remainder stays connected.
pub fn punch(a: &Polyomino, piece: &[Cell]) -> Result<Polyomino, AnimalError> {
    Ok(Polyomino::normalized(remainder(a, piece)?))
}

/// A copy of `A \ C` that avoids `A \ C` (held fixed in `A`'s frame) and
/// covers at least one cell of `C`, if there is one.
///
/// Every copy meeting `C` puts some shape cell on some cell of `C`, so trying
/// each (orientation, shape cell, piece cell) pairing is exhaustive.
pub fn outer_witness(a: &Polyomino, piece: &[Cell]) -> Result<Option<Vec<Cell>>, AnimalError> {
    let rest = remainder(a, piece)?;
    let fixed: HashSet<Cell> = rest.iter().copied().collect();
    let shape = Polyomino::normalized(rest);
    for o in shape.orientations() {
        for &target in piece {
            for &anchor_cell in o.shape.cells() {
                let corner = target - anchor_cell;
                if o.cells_at(corner).all(|c| !fixed.contains(&c)) {
                    return Ok(Some(o.cells_at(corner).collect()));
                }
            }
        }
    }
    Ok(None)
}

pub fn classify_piece(a: &Polyomino, piece: &[Cell]) -> Result<PieceClass, AnimalError> {
    Ok(match outer_witness(a, piece)? {
        Some(_) => PieceClass::Outer,
        None => PieceClass::Inner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::animal::{Animal, Rect};

    fn shape(d: &str) -> Polyomino {
        Animal::parse(d).unwrap().shape().clone()
    }

    #[test]
    fn punch_examples() {
        let ring = punch(&shape("R 3 3"), &[Cell::new(1, 1)]).unwrap();
        assert_eq!(ring.len(), 8);
        assert!(!ring.contains(Cell::new(1, 1)));

        let domino = punch(&shape("EL"), &[Cell::new(0, 0)]);
        assert!(domino.is_err(), "removing the bend disconnects El");
        let domino = punch(&shape("EL"), &[Cell::new(0, 1)]).unwrap();
        assert_eq!(domino, shape("R 2 1"));

        assert_eq!(
            punch(&shape("R 2 2"), &[Cell::new(0, 0), Cell::new(1, 1)]),
            Err(AnimalError::DisconnectedResult)
        );
        assert_eq!(punch(&shape("R 2 2"), &[]), Err(AnimalError::EmptyPiece));
        assert_eq!(
            punch(&shape("R 2 2"), &[Cell::new(5, 5)]),
            Err(AnimalError::NotSubset(Cell::new(5, 5)))
        );
        let all: Vec<Cell> = Rect::new(0, 1, 0, 1).cells().collect();
        assert_eq!(punch(&shape("R 2 2"), &all), Err(AnimalError::NothingLeft));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_piece(&shape("R 3 3"), &[Cell::new(1, 1)]).unwrap(), PieceClass::Inner);
        // El is {(0,0),(1,0),(0,1)}; (1,0) and (0,1) are its end cells.
        assert_eq!(classify_piece(&shape("EL"), &[Cell::new(1, 0)]).unwrap(), PieceClass::Outer);
        assert_eq!(classify_piece(&shape("EL"), &[Cell::new(0, 1)]).unwrap(), PieceClass::Outer);
    }

    #[test]
    fn witness_is_disjoint_and_covers_piece() {
        let a = shape("R 1 4");
        let piece = [Cell::new(0, 3)];
        let w = outer_witness(&a, &piece).unwrap().unwrap();
        assert!(w.contains(&Cell::new(0, 3)));
        assert!(w.iter().all(|c| !(c.x == 0 && (0..3).contains(&c.y))));
    }
}
