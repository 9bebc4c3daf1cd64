//! The fast square strategy. All reasoning happens in a normalized frame in
//! which Alice's first cell is the origin and Bob's first copy lies in
//! `x < 0`; cells are mapped back to the board before they are played.

use std::fmt;

use super::AliceError;
use crate::animal::{AnimalSpec, BoardFrame, Cell, D4Element, Rect};
use crate::engine::{BoardBounds, GameState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FastCase {
    Undetermined,
    TwoOccupied,
    ThreeOccupied,
    FourOccupied,
}

/// The line of play that secured the target square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FastBranch {
    /// `n = 1`.
    Immediate,
    /// Bob's copy at `(2n, 0)` sits flush with row 0.
    TwoFlush,
    /// Bob's copy at `(2n, 0)` hangs below row 0; Alice takes the upper square.
    TwoUpper,
    /// As above, but the lower square is the free one.
    TwoLower,
    ThreeOccupied,
    /// All four anchors claimed, one half-strip free of Bob.
    FourEmptyHalf,
    /// All four anchors claimed, a single Bob copy in the chosen half-strip.
    FourLone,
}

impl FastBranch {
    pub const ALL: [FastBranch; 7] = [
        FastBranch::Immediate,
        FastBranch::TwoFlush,
        FastBranch::TwoUpper,
        FastBranch::TwoLower,
        FastBranch::ThreeOccupied,
        FastBranch::FourEmptyHalf,
        FastBranch::FourLone,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FastBranch::Immediate => "immediate",
            FastBranch::TwoFlush => "two-occupied:flush",
            FastBranch::TwoUpper => "two-occupied:upper",
            FastBranch::TwoLower => "two-occupied:lower",
            FastBranch::ThreeOccupied => "three-occupied",
            FastBranch::FourEmptyHalf => "four-occupied:empty-half",
            FastBranch::FourLone => "four-occupied:lone-copy",
        }
    }

    pub fn from_label(s: &str) -> Option<FastBranch> {
        FastBranch::ALL.into_iter().find(|b| b.label() == s)
    }

    /// Most Alice moves a win along this branch can take.
    pub fn move_bound(self, n: i32) -> usize {
        let sq = (n * n) as usize;
        match self {
            FastBranch::Immediate => 1,
            FastBranch::TwoFlush | FastBranch::TwoUpper => sq + 1,
            FastBranch::TwoLower | FastBranch::ThreeOccupied => sq + 2,
            FastBranch::FourEmptyHalf | FastBranch::FourLone => sq + 3,
        }
    }
}

impl fmt::Display for FastBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug)]
pub struct FastSquarePlan {
    n: i32,
    frame: BoardFrame,
    case: FastCase,
    /// Bottom-left corner of the Bob copy the current case reacts to.
    bob_anchor: Option<Cell>,
    /// Four-occupied with an empty half-strip: continue as three-occupied.
    empty_half: bool,
    target: Option<Rect>,
    target_checked: bool,
    branch: Option<FastBranch>,
}

fn square(n: i32, x: i32, y: i32) -> Rect {
    Rect::with_size(Cell::new(x, y), n, n)
}

fn uncovered(msg: impl Into<String>) -> AliceError {
    AliceError::CaseNotCovered(msg.into())
}

impl FastSquarePlan {
    pub fn new(spec: &AnimalSpec) -> Result<Self, AliceError> {
        let n = spec.square_side().ok_or_else(|| AliceError::NotSquare(spec.to_string()))?;
        Ok(FastSquarePlan {
            n,
            frame: BoardFrame::default(),
            case: FastCase::Undetermined,
            bob_anchor: None,
            empty_half: false,
            target: None,
            target_checked: false,
            branch: None,
        })
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn case(&self) -> FastCase {
        self.case
    }

    pub fn branch(&self) -> Option<FastBranch> {
        self.branch
    }

    pub fn bob_anchor(&self) -> Option<Cell> {
        self.bob_anchor
    }

    /// The four anchor cells, in normalized coordinates.
    pub fn anchors(&self) -> [Cell; 4] {
        let n = self.n;
        [Cell::new(0, 0), Cell::new(n, 0), Cell::new(2 * n, 0), Cell::new(3 * n, 0)]
    }

    pub fn frame(&self) -> BoardFrame {
        self.frame
    }

    /// Bounding boxes of Bob's copies in normalized coordinates.
    fn local_copies(&self, state: &GameState) -> Vec<Rect> {
        state
            .bob_copies()
            .iter()
            .map(|&pl| {
                Rect::bounding(state.copy_cells(pl).into_iter().map(|c| self.frame.to_local(c))).expect("nonempty copy")
            })
            .collect()
    }

    fn is_free(&self, state: &GameState, c: Cell) -> bool {
        state.is_free(self.frame.to_board(c))
    }

    fn bob_free(&self, state: &GameState, r: Rect) -> bool {
        r.cells().all(|c| !state.is_bob(self.frame.to_board(c)))
    }

    fn to_board_rect(&self, r: Rect) -> Rect {
        Rect::bounding([self.frame.to_board(r.bottom_left()), self.frame.to_board(Cell::new(r.x_max, r.y_max))])
            .expect("two corners")
    }

    fn play(&self, state: &GameState, c: Cell) -> Result<Cell, AliceError> {
        if !self.is_free(state, c) {
            return Err(uncovered(format!("planned cell {c} (normalized) is occupied")));
        }
        Ok(self.frame.to_board(c))
    }

    fn secure(&mut self, target: Rect, branch: FastBranch) {
        self.target = Some(target);
        self.branch = Some(branch);
    }

    /// Alice's next cell, in board coordinates.
    pub fn next_move(&mut self, state: &GameState) -> Result<Cell, AliceError> {
        if state.bounds() != BoardBounds::Infinite {
            return Err(AliceError::NeedsInfiniteBoard);
        }
        if self.target.is_some() {
            return self.fill(state);
        }
        let n = self.n;
        let k = state.alice_move_count();
        match k {
            0 => {
                if n == 1 {
                    self.secure(square(1, 0, 0), FastBranch::Immediate);
                }
                self.play(state, Cell::ORIGIN)
            }
            1 => {
                let first = *state.bob_copies().first().ok_or_else(|| uncovered("Bob has no first copy"))?;
                let cells = state.copy_cells(first);
                let g = D4Element::all()
                    .find(|g| cells.iter().all(|&c| g.apply(c).x < 0))
                    .ok_or_else(|| uncovered("Bob's first copy meets every half-plane"))?;
                self.frame = BoardFrame { element: g, offset: Cell::ORIGIN };
                self.play(state, Cell::new(n, 0))
            }
            2 => {
                if self.is_free(state, Cell::new(2 * n, 0)) {
                    return self.play(state, Cell::new(2 * n, 0));
                }
                let b = self.copy_covering(state, Cell::new(2 * n, 0))?;
                if !(n + 1..=2 * n).contains(&b.x) || !(-n + 1..=0).contains(&b.y) {
                    return Err(uncovered(format!("Bob copy at {b} covers (2n,0) from outside the expected range")));
                }
                self.case = FastCase::TwoOccupied;
                self.bob_anchor = Some(b);
                if b.y == 0 {
                    self.secure(square(n, b.x - n, 0), FastBranch::TwoFlush);
                }
                self.play(state, Cell::new(b.x - n, n - 1))
            }
            3 if self.case == FastCase::TwoOccupied => {
                let b = self.bob_anchor.expect("recorded in move 3");
                let upper = Rect::new(b.x - n, b.x - 1, b.y + n, n - 1);
                let lower = Rect::new(b.x - n, b.x - 1, b.y, -1);
                if self.bob_free(state, upper) {
                    self.secure(square(n, b.x - n, 0), FastBranch::TwoUpper);
                    self.play(state, Cell::new(b.x - 1, n - 1))
                } else if self.bob_free(state, lower) {
                    self.secure(square(n, b.x - n, b.y), FastBranch::TwoLower);
                    self.play(state, Cell::new(b.x - n, b.y))
                } else {
                    Err(uncovered("both squares beside Bob's copy are blocked"))
                }
            }
            3 => {
                if self.is_free(state, Cell::new(3 * n, 0)) {
                    return self.play(state, Cell::new(3 * n, 0));
                }
                let b = self.copy_covering(state, Cell::new(3 * n, 0))?;
                self.case = FastCase::ThreeOccupied;
                self.bob_anchor = Some(b);
                self.orient_free_half(state, Rect::new(0, 2 * n, 1, n - 1))?;
                self.play(state, Cell::new(n, n - 1))
            }
            4 if self.case == FastCase::ThreeOccupied => self.finish_three(state, FastBranch::ThreeOccupied),
            4 => {
                self.case = FastCase::FourOccupied;
                let upper = Rect::new(0, 3 * n, 1, n - 1);
                let lower = Rect::new(0, 3 * n, -(n - 1), -1);
                let copies = self.local_copies(state);
                let cu = copies.iter().filter(|r| r.intersects(&upper)).count();
                let cl = copies.iter().filter(|r| r.intersects(&lower)).count();
                if cl < cu {
                    self.frame = self.frame.then(D4Element::MIRROR_Y, Cell::ORIGIN);
                }
                let hits: Vec<Rect> = self.local_copies(state).into_iter().filter(|r| r.intersects(&upper)).collect();
                match hits.as_slice() {
                    [] => {
                        self.empty_half = true;
                        self.play(state, Cell::new(n, n - 1))
                    }
                    [lone] => {
                        let mut bx = lone.x_min;
                        if bx < n {
                            self.frame = self.frame.then(D4Element::MIRROR_X, Cell::new(3 * n, 0));
                            bx = 3 * n - lone.x_max;
                        }
                        self.bob_anchor = Some(Cell::new(bx, lone.y_min));
                        self.secure(square(n, bx - n, 0), FastBranch::FourLone);
                        self.play(state, Cell::new(bx - n, n - 1))
                    }
                    _ => Err(uncovered(format!("{cu} Bob copies above and {cl} below the anchors"))),
                }
            }
            5 if self.empty_half => self.finish_three(state, FastBranch::FourEmptyHalf),
            _ => Err(uncovered(format!("no plan for Alice move {} in case {:?}", k + 1, self.case))),
        }
    }

    fn copy_covering(&self, state: &GameState, c: Cell) -> Result<Cell, AliceError> {
        self.local_copies(state)
            .into_iter()
            .find(|r| r.contains(c))
            .map(|r| r.bottom_left())
            .ok_or_else(|| uncovered(format!("{c} is taken but not by Bob")))
    }

    /// Flip vertically if needed so that `half` is free of Bob.
    fn orient_free_half(&mut self, state: &GameState, half: Rect) -> Result<(), AliceError> {
        if !self.bob_free(state, half) {
            self.frame = self.frame.then(D4Element::MIRROR_Y, Cell::ORIGIN);
            if !self.bob_free(state, half) {
                return Err(uncovered("Bob occupies both sides of the anchor row"));
            }
        }
        Ok(())
    }

    /// After `(n, n−1)`: take the left square through `(1, n−1)` or the right
    /// one through `(2n−1, n−1)`, whichever Bob left alone.
    fn finish_three(&mut self, state: &GameState, branch: FastBranch) -> Result<Cell, AliceError> {
        let n = self.n;
        let left = square(n, 1, 0);
        let right = square(n, n, 0);
        if self.bob_free(state, left) && self.is_free(state, Cell::new(1, n - 1)) {
            self.secure(left, branch);
            self.play(state, Cell::new(1, n - 1))
        } else if self.bob_free(state, right) && self.is_free(state, Cell::new(2 * n - 1, n - 1)) {
            self.secure(right, branch);
            self.play(state, Cell::new(2 * n - 1, n - 1))
        } else {
            Err(uncovered("Bob reached both squares beside the anchor column"))
        }
    }

    /// Fill the secured target row by row.
    fn fill(&mut self, state: &GameState) -> Result<Cell, AliceError> {
        let target = self.target.expect("fill needs a target");
        if !self.target_checked {
            if !state.bob_placements_in_region(self.to_board_rect(target)).is_empty() {
                return Err(uncovered(format!("target {target} is still reachable by Bob")));
            }
            self.target_checked = true;
        }
        for c in target.cells() {
            let b = self.frame.to_board(c);
            if state.is_bob(b) {
                return Err(uncovered(format!("Bob holds {c} (normalized) inside the target")));
            }
            if state.is_free(b) {
                return Ok(b);
            }
        }
        Err(uncovered("target complete but the game is not over"))
    }
}
