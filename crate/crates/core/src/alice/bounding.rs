use super::{bounded_rectangle_move_in, rectangle_dims, AliceError};
use crate::animal::{Animal, Cell, Rect};
use crate::engine::GameState;

/// `(N − n + 1)(N − m + 1) > 4N(n² + m² + 6nm)`, in wide arithmetic.
pub fn choose_n_holds(n: i64, m: i64, big_n: i64) -> bool {
    let lhs = (big_n - n + 1) as i128 * (big_n - m + 1) as i128;
    let rhs = 4 * big_n as i128 * (n * n + m * m + 6 * n * m) as i128;
    big_n >= n.max(m) && lhs > rhs
}

/// Smallest square side for which the bounding count works out.
pub fn choose_n(n: i32, m: i32) -> i32 {
    assert!(n >= 1 && m >= 1, "rectangle sides are positive");
    let (n, m) = (n as i64, m as i64);
    let mut big_n = n.max(m);
    while !choose_n_holds(n, m, big_n) {
        big_n += 1;
    }
    big_n as i32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundingPhase {
    Surrounding,
    Interior,
}

/// Alice walls off an `N × N` square, then plays the stab-set strategy in
/// its interior.
#[derive(Clone, Debug)]
pub struct BoundingPlan {
    pub size: i32,
    pub square: Rect,
    /// Boundary minus the corners, clockwise from the cell above the
    /// bottom-left corner.
    pub boundary_cells: Vec<Cell>,
    cursor: usize,
    pub phase: BoundingPhase,
}

impl BoundingPlan {
    pub fn new(animal: &Animal, corner: Cell) -> Result<Self, AliceError> {
        let (n, m) = rectangle_dims(animal)?;
        let size = choose_n(n, m);
        let square = Rect::with_size(corner, size, size);
        let (x0, x1, y0, y1) = (square.x_min, square.x_max, square.y_min, square.y_max);
        let mut boundary_cells = Vec::with_capacity(4 * (size as usize - 2));
        boundary_cells.extend((y0 + 1..y1).map(|y| Cell::new(x0, y)));
        boundary_cells.extend((x0 + 1..x1).map(|x| Cell::new(x, y1)));
        boundary_cells.extend((y0 + 1..y1).rev().map(|y| Cell::new(x1, y)));
        boundary_cells.extend((x0 + 1..x1).rev().map(|x| Cell::new(x, y0)));
        Ok(BoundingPlan { size, square, boundary_cells, cursor: 0, phase: BoundingPhase::Surrounding })
    }

    pub fn interior(&self) -> Rect {
        self.square.inflate(-1)
    }

    /// A boundary cell Bob already holds is left as it is: a Bob cell stops
    /// copies from crossing just as well as an Alice cell does.
    pub fn next_move(&mut self, state: &GameState) -> Result<Cell, AliceError> {
        if self.phase == BoundingPhase::Surrounding {
            while let Some(&c) = self.boundary_cells.get(self.cursor) {
                if state.is_free(c) {
                    return Ok(c);
                }
                self.cursor += 1;
            }
            self.phase = BoundingPhase::Interior;
        }
        bounded_rectangle_move_in(state, self.interior())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::BoardBounds;

    #[test]
    fn choose_n_values() {
        assert_eq!(choose_n(1, 1), 33);
        for n in 1..=6 {
            for m in 1..=6 {
                let big = choose_n(n, m);
                assert_eq!(big, choose_n(m, n));
                assert!(choose_n_holds(n as i64, m as i64, big as i64));
                assert!(!choose_n_holds(n as i64, m as i64, big as i64 - 1));
            }
        }
        let big = choose_n(2, 2) as i64;
        assert!((big - 1) * (big - 1) > 128 * big);
        assert!((big - 2) * (big - 2) <= 128 * (big - 1));
    }

    #[test]
    fn boundary_order_and_count() {
        let a = Animal::parse("R 1 1").unwrap();
        let plan = BoundingPlan::new(&a, Cell::ORIGIN).unwrap();
        assert_eq!(plan.size, 33);
        assert_eq!(plan.boundary_cells.len(), 4 * 31);
        assert_eq!(plan.boundary_cells[0], Cell::new(0, 1));
        assert_eq!(plan.boundary_cells[31], Cell::new(1, 32));
        let mut uniq = plan.boundary_cells.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), plan.boundary_cells.len());
        for c in &plan.boundary_cells {
            let on_x = c.x == 0 || c.x == 32;
            let on_y = c.y == 0 || c.y == 32;
            assert!(on_x ^ on_y, "{c} must be an edge cell but not a corner");
        }
    }

    #[test]
    fn first_move_is_above_corner() {
        let a = Animal::parse("R 2 2").unwrap();
        let g = GameState::new(a.clone(), BoardBounds::Infinite).unwrap();
        let mut plan = BoundingPlan::new(&a, Cell::ORIGIN).unwrap();
        assert_eq!(plan.next_move(&g).unwrap(), Cell::new(0, 1));
    }
}
