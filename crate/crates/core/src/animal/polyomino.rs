use std::collections::HashSet;
use std::fmt;

use super::geometry::{transform_cells, Cell, D4Element, Placement, Rect};
use super::AnimalError;

/// A finite, nonempty, 4-connected set of cells, stored translated so that
/// its minimal `x` and minimal `y` are both zero and sorted by `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyomino {
    cells: Vec<Cell>,
    width: i32,
    height: i32,
}

impl Polyomino {
    pub fn from_cells<I: IntoIterator<Item = Cell>>(cells: I) -> Result<Self, AnimalError> {
        let mut cells: Vec<Cell> = cells.into_iter().collect();
        cells.sort_unstable();
        cells.dedup();
        if cells.is_empty() {
            return Err(AnimalError::Empty);
        }
        if !is_connected(&cells) {
            return Err(AnimalError::Disconnected);
        }
        Ok(Self::normalized(cells))
    }

    /// Caller guarantees `cells` is nonempty and connected.
    pub(crate) fn normalized(cells: Vec<Cell>) -> Self {
        let bb = Rect::bounding(cells.iter().copied()).expect("nonempty");
        let corner = bb.bottom_left();
        let mut cells: Vec<Cell> = cells.into_iter().map(|c| c - corner).collect();
        cells.sort_unstable();
        Polyomino { cells, width: bb.width(), height: bb.height() }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    /// Largest side of the bounding box.
    pub fn diameter(&self) -> i32 {
        self.width.max(self.height)
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    /// Image under `g`, re-anchored at the origin.
    pub fn oriented(&self, g: D4Element) -> Polyomino {
        Polyomino::normalized(transform_cells(&self.cells, Placement::new(g, 0, 0)))
    }

    /// The cells covered by the copy `pl`.
    pub fn place(&self, pl: Placement) -> Vec<Cell> {
        transform_cells(&self.cells, pl)
    }

    /// Representative of the congruence class: the lexicographically smallest
    /// sorted cell list over all eight images.
    pub fn free_canonical(&self) -> Polyomino {
        D4Element::all()
            .map(|g| self.oriented(g))
            .min_by(|a, b| a.cells.cmp(&b.cells))
            .expect("eight images")
    }

    pub fn is_congruent(&self, other: &Polyomino) -> bool {
        self.len() == other.len() && self.free_canonical() == other.free_canonical()
    }

    /// Distinct images under D4, each tagged with the first element (by index)
    /// producing it.
    pub fn orientations(&self) -> Vec<Orientation> {
        let mut out: Vec<Orientation> = Vec::with_capacity(8);
        for g in D4Element::all() {
            let shape = self.oriented(g);
            if !out.iter().any(|o| o.shape == shape) {
                out.push(Orientation { element: g, shape });
            }
        }
        out
    }
}

impl fmt::Display for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for y in (0..self.height).rev() {
            for x in 0..self.width {
                let ch = if self.contains(Cell::new(x, y)) { '#' } else { '.' };
                write!(f, "{ch}")?;
            }
            if y > 0 {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// One distinct orientation of a shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub element: D4Element,
    pub shape: Polyomino,
}

impl Orientation {
    pub fn placement_at(&self, corner: Cell) -> Placement {
        Placement { orientation: self.element, offset: corner }
    }

    pub fn cells_at(&self, corner: Cell) -> impl Iterator<Item = Cell> + '_ {
        self.shape.cells().iter().map(move |&c| c + corner)
    }

    pub fn bbox_at(&self, corner: Cell) -> Rect {
        Rect::with_size(corner, self.shape.width(), self.shape.height())
    }
}

/// One 4-neighbour component? An empty set has none.
pub fn is_connected(cells: &[Cell]) -> bool {
    let Some(&start) = cells.first() else {
        return false;
    };
    let set: HashSet<Cell> = cells.iter().copied().collect();
    let mut seen = HashSet::with_capacity(set.len());
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(c) = stack.pop() {
        for n in c.neighbors() {
            if set.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len() == set.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(w: i32, h: i32) -> Polyomino {
        Polyomino::from_cells(Rect::new(0, w - 1, 0, h - 1).cells()).unwrap()
    }

    fn el() -> Polyomino {
        Polyomino::from_cells([Cell::new(0, 0), Cell::new(1, 0), Cell::new(0, 1)]).unwrap()
    }

    #[test]
    fn orientation_counts() {
        assert_eq!(rect(3, 3).orientations().len(), 1);
        assert_eq!(rect(2, 3).orientations().len(), 2);
        assert_eq!(el().orientations().len(), 4);
    }

    #[test]
    fn el_orientation_count_matches_enumeration() {
        // Brute force: collect the eight images as sorted cell sets.
        let base = [(0, 0), (1, 0), (0, 1)];
        let mut seen: Vec<Vec<(i32, i32)>> = Vec::new();
        for rot in 0..4 {
            for mirror in [false, true] {
                let mut img: Vec<(i32, i32)> = base
                    .iter()
                    .map(|&(x, y)| {
                        let (mut x, mut y) = if mirror { (-x, y) } else { (x, y) };
                        for _ in 0..rot {
                            (x, y) = (-y, x);
                        }
                        (x, y)
                    })
                    .collect();
                let mx = img.iter().map(|p| p.0).min().unwrap();
                let my = img.iter().map(|p| p.1).min().unwrap();
                for p in &mut img {
                    *p = (p.0 - mx, p.1 - my);
                }
                img.sort();
                if !seen.contains(&img) {
                    seen.push(img);
                }
            }
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn rotation_swaps_rectangle_sides() {
        let p = rect(2, 3);
        let rotated = p.place(Placement::new(D4Element::ROT90, 0, 0));
        assert_eq!(Polyomino::from_cells(rotated).unwrap(), rect(3, 2));
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&[Cell::new(0, 0)]));
        assert!(!is_connected(&[Cell::new(0, 0), Cell::new(1, 1)]));
        assert!(!is_connected(&[]));
        assert_eq!(
            Polyomino::from_cells([Cell::new(0, 0), Cell::new(2, 0)]),
            Err(AnimalError::Disconnected)
        );
    }

    #[test]
    fn display_draws_top_row_first() {
        assert_eq!(el().to_string(), "#.\n##");
    }
}
