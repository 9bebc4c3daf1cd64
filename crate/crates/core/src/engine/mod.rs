//! Game state and rule enforcement.
//!
//! Alice moves first and claims one free cell per turn. Bob claims one free,
//! in-bounds copy of the animal per turn. Nothing is ever removed. Alice wins
//! as soon as her cells contain a copy of the animal. On a bounded board Bob
//! passes when no copy fits, and a full board without an Alice copy is a Bob
//! win.

mod record;

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::animal::{Animal, Cell, D4Element, Placement, Rect};

pub use record::{decode_record, encode_record, GameRecord, RecordError, RECORD_MAGIC};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alice,
    Bob,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Alice => Side::Bob,
            Side::Bob => Side::Alice,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Alice => "alice",
            Side::Bob => "bob",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoardBounds {
    Infinite,
    Rect(Rect),
}

impl BoardBounds {
    /// `W × H` board with its bottom-left cell at the origin.
    pub fn board(width: i32, height: i32) -> BoardBounds {
        BoardBounds::Rect(Rect::new(0, width - 1, 0, height - 1))
    }

    pub fn contains(&self, c: Cell) -> bool {
        match self {
            BoardBounds::Infinite => true,
            BoardBounds::Rect(r) => r.contains(c),
        }
    }

    pub fn rect(&self) -> Option<Rect> {
        match self {
            BoardBounds::Infinite => None,
            BoardBounds::Rect(r) => Some(*r),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, BoardBounds::Rect(_))
    }
}

impl fmt::Display for BoardBounds {
    /// `infinite`, `WxH` for an origin-anchored board, else the rectangle.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoardBounds::Infinite => f.write_str("infinite"),
            BoardBounds::Rect(r) if r.bottom_left() == Cell::ORIGIN => write!(f, "{}x{}", r.width(), r.height()),
            BoardBounds::Rect(r) => write!(f, "{r}"),
        }
    }
}

impl std::str::FromStr for BoardBounds {
    type Err = String;

    /// `infinite` or `WxH`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("infinite") {
            return Ok(BoardBounds::Infinite);
        }
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("bad board {s:?}: expected WxH or infinite"))?;
        match (w.trim().parse::<i32>(), h.trim().parse::<i32>()) {
            (Ok(w), Ok(h)) if w > 0 && h > 0 => Ok(BoardBounds::board(w, h)),
            _ => Err(format!("bad board {s:?}: expected positive WxH")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Occupant {
    /// Claimed by Alice at the given ply.
    Alice(u32),
    /// Part of Bob's copy played at the given ply.
    Bob(u32),
}

impl Occupant {
    pub fn side(self) -> Side {
        match self {
            Occupant::Alice(_) => Side::Alice,
            Occupant::Bob(_) => Side::Bob,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    Alice(Cell),
    Bob(Placement),
    BobPass,
}

impl Move {
    pub fn mover(self) -> Side {
        match self {
            Move::Alice(_) => Side::Alice,
            Move::Bob(_) | Move::BobPass => Side::Bob,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Alice(c) => write!(f, "A {} {}", c.x, c.y),
            Move::Bob(p) => write!(f, "B {} {} {}", p.orientation.index(), p.offset.x, p.offset.y),
            Move::BobPass => f.write_str("BPASS"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BobWinReason {
    BoardFull,
    MoveBudget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Ongoing,
    AliceWon,
    BobWon(BobWinReason),
}

impl Status {
    pub fn winner(self) -> Option<Side> {
        match self {
            Status::Ongoing => None,
            Status::AliceWon => Some(Side::Alice),
            Status::BobWon(_) => Some(Side::Bob),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ongoing => "ongoing",
            Status::AliceWon => "alice_won",
            Status::BobWon(BobWinReason::BoardFull) => "bob_won:board_full",
            Status::BobWon(BobWinReason::MoveBudget) => "bob_won:move_budget",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("it is {0}'s turn")]
    NotYourTurn(Side),
    #[error("cell {0} is already occupied")]
    CellOccupied(Cell),
    #[error("the copy overlaps occupied cell {0}")]
    OverlapsOccupied(Cell),
    #[error("cell {0} is outside the board")]
    OutOfBounds(Cell),
    #[error("the game is over ({0})")]
    GameOver(Status),
    #[error("Bob may only pass on a bounded board with no legal placement")]
    PassNotAllowed,
    #[error("no copy of the animal fits on the board")]
    AnimalDoesNotFit,
}

impl EngineError {
    /// Stable machine-readable reason tag.
    pub fn reason(&self) -> &'static str {
        match self {
            EngineError::NotYourTurn(_) => "NotYourTurn",
            EngineError::CellOccupied(_) => "CellOccupied",
            EngineError::OverlapsOccupied(_) => "OverlapsOccupied",
            EngineError::OutOfBounds(_) => "OutOfBounds",
            EngineError::GameOver(_) => "GameOver",
            EngineError::PassNotAllowed => "PassNotAllowed",
            EngineError::AnimalDoesNotFit => "AnimalDoesNotFit",
        }
    }
}

/// A game in progress. Moves are validated completely before any cell is
/// written, so a failed move leaves the state untouched.
#[derive(Clone, Debug)]
pub struct GameState {
    animal: Animal,
    bounds: BoardBounds,
    occupancy: FxHashMap<Cell, Occupant>,
    alice_cells: Vec<Cell>,
    bob_copies: Vec<Placement>,
    to_move: Side,
    history: Vec<Move>,
    status: Status,
    bob_pass_count: u32,
    move_budget: Option<usize>,
}

impl GameState {
    pub fn new(animal: Animal, bounds: BoardBounds) -> Result<Self, EngineError> {
        if let BoardBounds::Rect(r) = bounds {
            if r.is_empty() {
                return Err(EngineError::AnimalDoesNotFit);
            }
            let fits = animal
                .orientations()
                .iter()
                .any(|o| o.shape.width() <= r.width() && o.shape.height() <= r.height());
            if !fits {
                return Err(EngineError::AnimalDoesNotFit);
            }
        }
        Ok(GameState {
            animal,
            bounds,
            occupancy: FxHashMap::default(),
            alice_cells: Vec::new(),
            bob_copies: Vec::new(),
            to_move: Side::Alice,
            history: Vec::new(),
            status: Status::Ongoing,
            bob_pass_count: 0,
            move_budget: None,
        })
    }

    /// Total plies after which an unfinished game is scored as a Bob win.
    pub fn with_move_budget(mut self, budget: Option<usize>) -> Self {
        self.move_budget = budget;
        self.check_budget();
        self
    }

    pub fn animal(&self) -> &Animal {
        &self.animal
    }

    pub fn bounds(&self) -> BoardBounds {
        self.bounds
    }

    pub fn to_move(&self) -> Side {
        self.to_move
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_over(&self) -> bool {
        self.status != Status::Ongoing
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn ply(&self) -> usize {
        self.history.len()
    }

    pub fn move_budget(&self) -> Option<usize> {
        self.move_budget
    }

    pub fn bob_pass_count(&self) -> u32 {
        self.bob_pass_count
    }

    /// Alice's cells in the order she claimed them.
    pub fn alice_cells(&self) -> &[Cell] {
        &self.alice_cells
    }

    pub fn alice_move_count(&self) -> usize {
        self.alice_cells.len()
    }

    /// Bob's copies in the order he placed them.
    pub fn bob_copies(&self) -> &[Placement] {
        &self.bob_copies
    }

    pub fn last_alice_cell(&self) -> Option<Cell> {
        self.alice_cells.last().copied()
    }

    pub fn occupant(&self, c: Cell) -> Option<Occupant> {
        self.occupancy.get(&c).copied()
    }

    pub fn occupancy(&self) -> impl Iterator<Item = (Cell, Occupant)> + '_ {
        self.occupancy.iter().map(|(c, o)| (*c, *o))
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.len()
    }

    pub fn is_free(&self, c: Cell) -> bool {
        self.bounds.contains(c) && !self.occupancy.contains_key(&c)
    }

    pub fn is_alice(&self, c: Cell) -> bool {
        matches!(self.occupancy.get(&c), Some(Occupant::Alice(_)))
    }

    pub fn is_bob(&self, c: Cell) -> bool {
        matches!(self.occupancy.get(&c), Some(Occupant::Bob(_)))
    }

    /// Bounding box of every occupied cell.
    pub fn occupied_extent(&self) -> Option<Rect> {
        Rect::bounding(self.occupancy.keys().copied())
    }

    pub fn is_board_full(&self) -> bool {
        match self.bounds {
            BoardBounds::Infinite => false,
            BoardBounds::Rect(r) => self.occupancy.len() >= r.area(),
        }
    }

    fn expect_turn(&self, side: Side) -> Result<(), EngineError> {
        if self.status != Status::Ongoing {
            return Err(EngineError::GameOver(self.status));
        }
        if self.to_move != side {
            return Err(EngineError::NotYourTurn(self.to_move));
        }
        Ok(())
    }

    fn check_budget(&mut self) {
        if self.status == Status::Ongoing {
            if let Some(b) = self.move_budget {
                if self.history.len() >= b {
                    self.status = Status::BobWon(BobWinReason::MoveBudget);
                }
            }
        }
    }

    pub fn apply_alice(&mut self, cell: Cell) -> Result<(), EngineError> {
        self.expect_turn(Side::Alice)?;
        if !self.bounds.contains(cell) {
            return Err(EngineError::OutOfBounds(cell));
        }
        if self.occupancy.contains_key(&cell) {
            return Err(EngineError::CellOccupied(cell));
        }
        let ply = self.history.len() as u32;
        self.occupancy.insert(cell, Occupant::Alice(ply));
        self.alice_cells.push(cell);
        self.history.push(Move::Alice(cell));
        self.to_move = Side::Bob;
        if self.alice_has_won() {
            self.status = Status::AliceWon;
        } else if self.is_board_full() {
            self.status = Status::BobWon(BobWinReason::BoardFull);
        }
        self.check_budget();
        Ok(())
    }

    /// The cells a Bob copy would occupy, or the first reason it is illegal.
    pub fn check_bob(&self, pl: Placement) -> Result<Vec<Cell>, EngineError> {
        let cells = self.animal.shape().place(pl);
        for &c in &cells {
            if !self.bounds.contains(c) {
                return Err(EngineError::OutOfBounds(c));
            }
            if self.occupancy.contains_key(&c) {
                return Err(EngineError::OverlapsOccupied(c));
            }
        }
        Ok(cells)
    }

    pub fn apply_bob(&mut self, pl: Placement) -> Result<(), EngineError> {
        self.expect_turn(Side::Bob)?;
        let cells = self.check_bob(pl)?;
        let ply = self.history.len() as u32;
        for c in cells {
            self.occupancy.insert(c, Occupant::Bob(ply));
        }
        self.bob_copies.push(pl);
        self.history.push(Move::Bob(pl));
        self.to_move = Side::Alice;
        if self.is_board_full() {
            self.status = Status::BobWon(BobWinReason::BoardFull);
        }
        self.check_budget();
        Ok(())
    }

    /// Bob's turn on a bounded board where no copy fits.
    pub fn apply_bob_pass(&mut self) -> Result<(), EngineError> {
        self.expect_turn(Side::Bob)?;
        if !self.bounds.is_bounded() || self.bob_has_legal_placement() {
            return Err(EngineError::PassNotAllowed);
        }
        self.bob_pass_count += 1;
        self.history.push(Move::BobPass);
        self.to_move = Side::Alice;
        self.check_budget();
        Ok(())
    }

    pub fn apply(&mut self, mv: Move) -> Result<(), EngineError> {
        match mv {
            Move::Alice(c) => self.apply_alice(c),
            Move::Bob(p) => self.apply_bob(p),
            Move::BobPass => self.apply_bob_pass(),
        }
    }

    /// Does some copy through Alice's most recent cell lie inside her cells?
    /// Earlier cells were checked when they were played.
    pub fn alice_has_won(&self) -> bool {
        let Some(last) = self.last_alice_cell() else {
            return false;
        };
        self.animal.orientations().iter().any(|o| {
            o.shape.cells().iter().any(|&s| {
                let corner = last - s;
                o.cells_at(corner).all(|c| self.is_alice(c))
            })
        })
    }

    /// From-scratch scan over every orientation and every anchor inside the
    /// bounding box of Alice's cells.
    pub fn alice_has_won_full_scan(&self) -> bool {
        let Some(bb) = Rect::bounding(self.alice_cells.iter().copied()) else {
            return false;
        };
        self.animal.orientations().iter().any(|o| {
            let (w, h) = (o.shape.width(), o.shape.height());
            (bb.x_min..=bb.x_max - w + 1).any(|x| {
                (bb.y_min..=bb.y_max - h + 1)
                    .any(|y| o.cells_at(Cell::new(x, y)).all(|c| self.is_alice(c)))
            })
        })
    }

    /// Every legal Bob placement whose copy meets `region`, ordered by
    /// (orientation, dx, dy).
    pub fn bob_placements_in_region(&self, region: Rect) -> Vec<Placement> {
        let mut out = Vec::new();
        for o in self.animal.orientations() {
            let (w, h) = (o.shape.width(), o.shape.height());
            let mut anchors = Rect::new(region.x_min - w + 1, region.x_max, region.y_min - h + 1, region.y_max);
            if let BoardBounds::Rect(b) = self.bounds {
                anchors = anchors.intersection(&Rect::new(b.x_min, b.x_max - w + 1, b.y_min, b.y_max - h + 1));
            }
            if anchors.is_empty() {
                continue;
            }
            for dx in anchors.x_min..=anchors.x_max {
                for dy in anchors.y_min..=anchors.y_max {
                    let corner = Cell::new(dx, dy);
                    let mut meets = false;
                    let mut legal = true;
                    for c in o.cells_at(corner) {
                        if self.occupancy.contains_key(&c) || !self.bounds.contains(c) {
                            legal = false;
                            break;
                        }
                        meets |= region.contains(c);
                    }
                    if legal && meets {
                        out.push(o.placement_at(corner));
                    }
                }
            }
        }
        out
    }

    /// All legal placements on a bounded board; on an infinite board, those
    /// meeting the occupied extent grown by the animal's diameter.
    pub fn bob_placements(&self) -> Vec<Placement> {
        let region = match self.bounds {
            BoardBounds::Rect(r) => r,
            BoardBounds::Infinite => self
                .occupied_extent()
                .unwrap_or(Rect::new(0, 0, 0, 0))
                .inflate(self.animal.diameter()),
        };
        self.bob_placements_in_region(region)
    }

    pub fn bob_has_legal_placement(&self) -> bool {
        match self.bounds {
            BoardBounds::Infinite => true,
            BoardBounds::Rect(_) => !self.bob_placements().is_empty(),
        }
    }

    /// Cells of the copy at `pl`, whether or not it is legal.
    pub fn copy_cells(&self, pl: Placement) -> Vec<Cell> {
        self.animal.shape().place(pl)
    }

    pub fn all_orientation_elements(&self) -> Vec<D4Element> {
        self.animal.orientations().iter().map(|o| o.element).collect()
    }

    /// Text rendering of `window` (top row first): `A`, `B`, `.`, or ` ` off-board.
    pub fn render(&self, window: Rect) -> String {
        let mut s = String::new();
        for y in (window.y_min..=window.y_max).rev() {
            for x in window.x_min..=window.x_max {
                let c = Cell::new(x, y);
                s.push(match self.occupant(c) {
                    Some(Occupant::Alice(_)) => 'A',
                    Some(Occupant::Bob(_)) => 'B',
                    None if self.bounds.contains(c) => '.',
                    None => ' ',
                });
            }
            s.push('\n');
        }
        s
    }
}
