//! Grid cells, rectangles and the dihedral group acting on them.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

/// A grid cell. `x` grows to the right, `y` grows upward.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const ORIGIN: Cell = Cell { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    pub fn neighbors(self) -> [Cell; 4] {
        [
            Cell::new(self.x + 1, self.y),
            Cell::new(self.x - 1, self.y),
            Cell::new(self.x, self.y + 1),
            Cell::new(self.x, self.y - 1),
        ]
    }

    /// Sort key for "row-major" orderings: `y` first, then `x`.
    pub fn row_major_key(self) -> (i32, i32) {
        (self.y, self.x)
    }
}

impl Add for Cell {
    type Output = Cell;
    fn add(self, rhs: Cell) -> Cell {
        Cell::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Cell {
    type Output = Cell;
    fn sub(self, rhs: Cell) -> Cell {
        Cell::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Closed cell rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: i32,
    pub x_max: i32,
    pub y_min: i32,
    pub y_max: i32,
}

impl Rect {
    pub const fn new(x_min: i32, x_max: i32, y_min: i32, y_max: i32) -> Self {
        Rect { x_min, x_max, y_min, y_max }
    }

    /// The `w × h` rectangle with bottom-left cell `corner`.
    pub fn with_size(corner: Cell, w: i32, h: i32) -> Self {
        Rect::new(corner.x, corner.x + w - 1, corner.y, corner.y + h - 1)
    }

    pub fn is_empty(&self) -> bool {
        self.x_min > self.x_max || self.y_min > self.y_max
    }

    pub fn width(&self) -> i32 {
        self.x_max - self.x_min + 1
    }

    pub fn height(&self) -> i32 {
        self.y_max - self.y_min + 1
    }

    pub fn area(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.width() as usize * self.height() as usize
        }
    }

    pub fn bottom_left(&self) -> Cell {
        Cell::new(self.x_min, self.y_min)
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x >= self.x_min && c.x <= self.x_max && c.y >= self.y_min && c.y <= self.y_max
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.x_min >= self.x_min
            && other.x_max <= self.x_max
            && other.y_min >= self.y_min
            && other.y_max <= self.y_max
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        !self.intersection(other).is_empty()
    }

    pub fn intersection(&self, other: &Rect) -> Rect {
        Rect::new(
            self.x_min.max(other.x_min),
            self.x_max.min(other.x_max),
            self.y_min.max(other.y_min),
            self.y_max.min(other.y_max),
        )
    }

    pub fn inflate(&self, by: i32) -> Rect {
        Rect::new(self.x_min - by, self.x_max + by, self.y_min - by, self.y_max + by)
    }

    /// Smallest rectangle containing every cell, `None` for an empty input.
    pub fn bounding<I: IntoIterator<Item = Cell>>(cells: I) -> Option<Rect> {
        let mut it = cells.into_iter();
        let first = it.next()?;
        let mut r = Rect::new(first.x, first.x, first.y, first.y);
        for c in it {
            r.x_min = r.x_min.min(c.x);
            r.x_max = r.x_max.max(c.x);
            r.y_min = r.y_min.min(c.y);
            r.y_max = r.y_max.max(c.y);
        }
        Some(r)
    }

    /// Cells in row-major order (bottom row first, left to right).
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let (x0, x1) = (self.x_min, self.x_max);
        (self.y_min..=self.y_max).flat_map(move |y| (x0..=x1).map(move |x| Cell::new(x, y)))
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]x[{},{}]", self.x_min, self.x_max, self.y_min, self.y_max)
    }
}

/// One of the eight symmetries of the square.
///
/// Index `i` encodes `i % 4` counter-clockwise quarter turns applied after an
/// optional mirror `x -> -x` (present when `i >= 4`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct D4Element(u8);

impl D4Element {
    pub const IDENTITY: D4Element = D4Element(0);
    pub const ROT90: D4Element = D4Element(1);
    pub const ROT180: D4Element = D4Element(2);
    pub const ROT270: D4Element = D4Element(3);
    /// `x -> -x`.
    pub const MIRROR_X: D4Element = D4Element(4);
    /// `y -> -y`.
    pub const MIRROR_Y: D4Element = D4Element(6);

    pub fn new(index: u8) -> Option<Self> {
        (index < 8).then_some(D4Element(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = D4Element> {
        (0..8).map(D4Element)
    }

    pub fn is_reflection(self) -> bool {
        self.0 >= 4
    }

    pub fn apply(self, c: Cell) -> Cell {
        let (mut x, mut y) = (c.x, c.y);
        if self.is_reflection() {
            x = -x;
        }
        for _ in 0..(self.0 % 4) {
            (x, y) = (-y, x);
        }
        Cell::new(x, y)
    }

    fn matrix(self) -> [i32; 4] {
        let e1 = self.apply(Cell::new(1, 0));
        let e2 = self.apply(Cell::new(0, 1));
        [e1.x, e2.x, e1.y, e2.y]
    }

    fn from_matrix(m: [i32; 4]) -> D4Element {
        D4Element::all()
            .find(|g| g.matrix() == m)
            .expect("D4 is closed under composition")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: D4Element) -> D4Element {
        let a = self.matrix();
        let b = other.matrix();
        D4Element::from_matrix([
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ])
    }

    pub fn inverse(self) -> D4Element {
        D4Element::all()
            .find(|g| g.compose(self) == D4Element::IDENTITY)
            .expect("every D4 element is invertible")
    }

    /// True when the element turns a `w × h` box into an `h × w` one.
    pub fn swaps_axes(self) -> bool {
        self.0 % 2 == 1
    }
}

impl fmt::Display for D4Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A copy of a shape: orient it, re-anchor its bounding box at the origin,
/// then translate by `offset`. `offset` is therefore the bottom-left corner of
/// the copy's bounding box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub orientation: D4Element,
    pub offset: Cell,
}

impl Placement {
    pub fn new(orientation: D4Element, dx: i32, dy: i32) -> Self {
        Placement { orientation, offset: Cell::new(dx, dy) }
    }

    pub fn identity() -> Self {
        Placement::new(D4Element::IDENTITY, 0, 0)
    }

    /// Brings a copy made by `self` from a canonical shape back onto it.
    pub fn inverse(self) -> Placement {
        Placement { orientation: self.orientation.inverse(), offset: Cell::ORIGIN }
    }
}

/// Applies `pl` to an arbitrary cell set: orient, re-anchor at the origin, translate.
pub fn transform_cells(cells: &[Cell], pl: Placement) -> Vec<Cell> {
    let oriented: Vec<Cell> = cells.iter().map(|&c| pl.orientation.apply(c)).collect();
    let Some(bb) = Rect::bounding(oriented.iter().copied()) else {
        return Vec::new();
    };
    let shift = pl.offset - bb.bottom_left();
    let mut out: Vec<Cell> = oriented.into_iter().map(|c| c + shift).collect();
    out.sort_unstable();
    out
}

/// Rigid motion of the board: `cell -> element(cell) + offset`.
///
/// Strategies that reason "without loss of generality" work in a normalized
/// frame and map their answers back with [`BoardFrame::to_board`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoardFrame {
    pub element: D4Element,
    pub offset: Cell,
}

impl Default for BoardFrame {
    fn default() -> Self {
        BoardFrame { element: D4Element::IDENTITY, offset: Cell::ORIGIN }
    }
}

impl BoardFrame {
    /// Board coordinates to normalized coordinates.
    pub fn to_local(&self, c: Cell) -> Cell {
        self.element.apply(c) + self.offset
    }

    /// Normalized coordinates back to board coordinates.
    pub fn to_board(&self, c: Cell) -> Cell {
        self.element.inverse().apply(c - self.offset)
    }

    /// Follow `self` by the motion `cell -> element(cell) + offset`.
    pub fn then(&self, element: D4Element, offset: Cell) -> BoardFrame {
        BoardFrame {
            element: element.compose(self.element),
            offset: element.apply(self.offset) + offset,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_table_is_closed_with_inverses() {
        for a in D4Element::all() {
            assert_eq!(a.compose(a.inverse()), D4Element::IDENTITY);
            for b in D4Element::all() {
                let ab = a.compose(b);
                let p = Cell::new(3, -7);
                assert_eq!(ab.apply(p), a.apply(b.apply(p)));
            }
        }
        assert_eq!(D4Element::MIRROR_Y.apply(Cell::new(2, 5)), Cell::new(2, -5));
        assert_eq!(D4Element::MIRROR_X.apply(Cell::new(2, 5)), Cell::new(-2, 5));
    }

    #[test]
    fn frame_round_trips() {
        let f = BoardFrame::default()
            .then(D4Element::ROT90, Cell::new(4, -1))
            .then(D4Element::MIRROR_Y, Cell::new(0, 3));
        for c in Rect::new(-3, 3, -2, 2).cells() {
            assert_eq!(f.to_board(f.to_local(c)), c);
        }
        let g = BoardFrame::default().then(D4Element::ROT90, Cell::new(4, -1));
        let c = Cell::new(1, 2);
        assert_eq!(
            f.to_local(c),
            D4Element::MIRROR_Y.apply(g.to_local(c)) + Cell::new(0, 3)
        );
    }

    #[test]
    fn rect_cells_are_row_major() {
        let r = Rect::new(0, 1, 0, 1);
        let v: Vec<_> = r.cells().collect();
        assert_eq!(v, vec![Cell::new(0, 0), Cell::new(1, 0), Cell::new(0, 1), Cell::new(1, 1)]);
        assert_eq!(r.area(), 4);
    }
}
