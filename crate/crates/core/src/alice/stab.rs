use super::{rectangle_dims, AliceError};
use crate::animal::{Cell, Placement, Rect};
use crate::engine::GameState;

/// One Bob-free copy of the rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabCopy {
    pub placement: Placement,
    pub rect: Rect,
}

#[derive(Clone, Debug, Default)]
pub struct StabState {
    /// Copies inside the region holding no Bob cell (Alice cells allowed),
    /// ordered by bottom-left cell in (y, x) order, then orientation.
    pub s: Vec<StabCopy>,
    /// The members of `s` meeting every member of `s`.
    pub s_prime: Vec<StabCopy>,
}

/// Bob-cell counts over `region` as 2D prefix sums.
struct BobPrefix {
    region: Rect,
    sums: Vec<u32>,
}

impl BobPrefix {
    fn new(state: &GameState, region: Rect) -> Self {
        let (w, h) = (region.width() as usize, region.height() as usize);
        let mut sums = vec![0u32; (w + 1) * (h + 1)];
        for y in 0..h {
            for x in 0..w {
                let c = Cell::new(region.x_min + x as i32, region.y_min + y as i32);
                let v = u32::from(state.is_bob(c));
                sums[(y + 1) * (w + 1) + x + 1] =
                    v + sums[y * (w + 1) + x + 1] + sums[(y + 1) * (w + 1) + x] - sums[y * (w + 1) + x];
            }
        }
        BobPrefix { region, sums }
    }

    fn count(&self, r: Rect) -> u32 {
        let w = self.region.width() as usize + 1;
        let x0 = (r.x_min - self.region.x_min) as usize;
        let x1 = (r.x_max - self.region.x_min) as usize + 1;
        let y0 = (r.y_min - self.region.y_min) as usize;
        let y1 = (r.y_max - self.region.y_min) as usize + 1;
        self.sums[y1 * w + x1] + self.sums[y0 * w + x0] - self.sums[y0 * w + x1] - self.sums[y1 * w + x0]
    }
}

/// Stab sets over the whole bounded board.
pub fn stab_sets(state: &GameState) -> Result<StabState, AliceError> {
    let board = state.bounds().rect().ok_or(AliceError::NeedsBoundedBoard)?;
    stab_sets_in(state, board)
}

/// Stab sets for copies lying inside `region`.
pub fn stab_sets_in(state: &GameState, region: Rect) -> Result<StabState, AliceError> {
    rectangle_dims(state.animal())?;
    let prefix = BobPrefix::new(state, region);
    let mut s = Vec::new();
    for y in region.y_min..=region.y_max {
        for x in region.x_min..=region.x_max {
            for o in state.animal().orientations() {
                let rect = o.bbox_at(Cell::new(x, y));
                if region.contains_rect(&rect) && prefix.count(rect) == 0 {
                    s.push(StabCopy { placement: o.placement_at(Cell::new(x, y)), rect });
                }
            }
        }
    }
    // Meeting every member is the same as overlapping every member's x-range
    // and every member's y-range, which only depends on four extremes.
    let s_prime = match (
        s.iter().map(|c| c.rect.x_max).min(),
        s.iter().map(|c| c.rect.x_min).max(),
        s.iter().map(|c| c.rect.y_max).min(),
        s.iter().map(|c| c.rect.y_min).max(),
    ) {
        (Some(min_xmax), Some(max_xmin), Some(min_ymax), Some(max_ymin)) => s
            .iter()
            .filter(|c| {
                c.rect.x_min <= min_xmax && c.rect.x_max >= max_xmin && c.rect.y_min <= min_ymax && c.rect.y_max >= max_ymin
            })
            .copied()
            .collect(),
        _ => Vec::new(),
    };
    Ok(StabState { s, s_prime })
}

/// Bottom-left cell of the common intersection of `rects`.
pub fn helly_cell(rects: &[Rect]) -> Result<Cell, AliceError> {
    let first = rects.first().ok_or(AliceError::NoTarget)?;
    let common = rects.iter().skip(1).fold(*first, |acc, r| acc.intersection(r));
    if common.is_empty() {
        return Err(AliceError::EmptyIntersection);
    }
    Ok(common.bottom_left())
}

pub fn bounded_rectangle_move(state: &GameState) -> Result<Cell, AliceError> {
    let board = state.bounds().rect().ok_or(AliceError::NeedsBoundedBoard)?;
    bounded_rectangle_move_in(state, board)
}

/// The stab-set move restricted to copies inside `region`.
pub fn bounded_rectangle_move_in(state: &GameState, region: Rect) -> Result<Cell, AliceError> {
    let st = stab_sets_in(state, region)?;
    if st.s.is_empty() {
        return Err(AliceError::NoTarget);
    }
    if !st.s_prime.is_empty() {
        let rects: Vec<Rect> = st.s_prime.iter().map(|c| c.rect).collect();
        let h = helly_cell(&rects)?;
        if state.is_free(h) {
            return Ok(h);
        }
        // Otherwise h is already Alice's and blocks every member of S'.
    }
    st.s
        .iter()
        .find_map(|c| c.rect.cells().find(|&x| state.is_free(x)))
        .ok_or(AliceError::NoTarget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::animal::{Animal, D4Element};
    use crate::engine::BoardBounds;

    fn g(desc: &str, w: i32, h: i32) -> GameState {
        GameState::new(Animal::parse(desc).unwrap(), BoardBounds::board(w, h)).unwrap()
    }

    #[test]
    fn stab_examples() {
        let mut st = g("R 2 2", 3, 3);
        assert_eq!(stab_sets(&st).unwrap().s.len(), 4);
        assert_eq!(bounded_rectangle_move(&st).unwrap(), Cell::new(1, 1));
        st.apply_alice(Cell::new(1, 1)).unwrap();
        assert_eq!(stab_sets(&st).unwrap().s.len(), 4, "Alice cells do not remove copies");

        let mut bob_only = g("R 2 1", 2, 2);
        bob_only.apply_alice(Cell::new(0, 0)).unwrap();
        bob_only.apply_bob(Placement::new(D4Element::IDENTITY, 0, 1)).unwrap();
        let st = stab_sets(&bob_only).unwrap();
        // Bob's row kills both vertical copies.
        assert_eq!(st.s.len(), 1);

        let one = g("R 3 3", 3, 3);
        let st = stab_sets(&one).unwrap();
        assert_eq!(st.s.len(), 1);
        assert_eq!(st.s_prime, st.s);
    }

    #[test]
    fn helly_examples() {
        assert_eq!(helly_cell(&[Rect::new(0, 2, 0, 2)]).unwrap(), Cell::new(0, 0));
        assert_eq!(helly_cell(&[Rect::new(0, 2, 0, 2), Rect::new(2, 4, 2, 4)]).unwrap(), Cell::new(2, 2));
        assert_eq!(
            helly_cell(&[Rect::new(0, 3, 0, 1), Rect::new(1, 4, 0, 1), Rect::new(2, 5, 0, 1)]).unwrap(),
            Cell::new(2, 0)
        );
        assert_eq!(helly_cell(&[Rect::new(0, 0, 0, 0), Rect::new(1, 1, 0, 0)]), Err(AliceError::EmptyIntersection));
        assert_eq!(helly_cell(&[]), Err(AliceError::NoTarget));
    }

    #[test]
    fn s_prime_matches_pairwise_definition() {
        let mut st = g("R 2 1", 5, 4);
        st.apply_alice(Cell::new(2, 2)).unwrap();
        st.apply_bob(Placement::new(D4Element::IDENTITY, 0, 0)).unwrap();
        st.apply_alice(Cell::new(4, 3)).unwrap();
        st.apply_bob(Placement::new(D4Element::ROT90, 3, 1)).unwrap();
        let s = stab_sets(&st).unwrap();
        let naive: Vec<StabCopy> =
            s.s.iter().filter(|a| s.s.iter().all(|b| a.rect.intersects(&b.rect))).copied().collect();
        assert_eq!(naive, s.s_prime);
    }

    #[test]
    fn fallback_uses_first_copy_row_major() {
        let st = g("R 2 1", 5, 1);
        // Copies [0,1],[1,2],[2,3],[3,4] have no common cell.
        assert!(stab_sets(&st).unwrap().s_prime.is_empty());
        assert_eq!(bounded_rectangle_move(&st).unwrap(), Cell::new(0, 0));
    }
}
