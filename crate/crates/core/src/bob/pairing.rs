use rustc_hash::{FxHashMap, FxHashSet};

use super::{BlockIndex, BlockPartition, BobError};
use crate::animal::{Animal, Cell, Placement, Rect};
use crate::engine::{BoardBounds, GameState, Move};

/// First copy of the animal inside `block` that avoids every occupied cell
/// and stays on the board, scanning (orientation, dx, dy) lexicographically.
pub fn canonical_placement(block: Rect, animal: &Animal, state: &GameState) -> Option<Placement> {
    for o in animal.orientations() {
        let (w, h) = (o.shape.width(), o.shape.height());
        for dx in 0..=block.width() - w {
            for dy in 0..=block.height() - h {
                let corner = Cell::new(block.x_min + dx, block.y_min + dy);
                if o.cells_at(corner).all(|c| state.is_free(c)) {
                    return Some(o.placement_at(corner));
                }
            }
        }
    }
    None
}

/// The `k`-th block of an outward square spiral around `(0,0)`: ring `r`
/// holds the `8r` blocks with `max(|i|,|j|) = r`.
pub fn spiral_block(k: u64) -> BlockIndex {
    if k == 0 {
        return (0, 0);
    }
    let mut r: u64 = ((((k + 1) as f64).sqrt() - 1.0) / 2.0).floor() as u64;
    while (2 * r + 1) * (2 * r + 1) <= k {
        r += 1;
    }
    while r > 0 && (2 * r - 1) * (2 * r - 1) > k {
        r -= 1;
    }
    let idx = (k - (2 * r - 1) * (2 * r - 1)) as i64;
    let r = r as i64;
    let side = 2 * r;
    let (i, j) = match idx / side {
        0 => (r, -r + 1 + idx),
        1 => (r - 1 - (idx - side), r),
        2 => (-r, r - 1 - (idx - 2 * side)),
        _ => (-r + 1 + (idx - 3 * side), -r),
    };
    (i as i32, j as i32)
}

/// Bob's pairing strategy. Must see the game from its first move.
#[derive(Clone, Debug)]
pub struct PairingBob {
    partition: BlockPartition,
    /// Blocks containing at least one Bob cell.
    touched: FxHashSet<BlockIndex>,
    alice_per_block: FxHashMap<BlockIndex, u32>,
    alice_seen: usize,
    bob_seen: usize,
    spiral_cursor: u64,
    violations: Vec<String>,
}

impl PairingBob {
    pub fn new(partition: BlockPartition) -> Self {
        PairingBob {
            partition,
            touched: FxHashSet::default(),
            alice_per_block: FxHashMap::default(),
            alice_seen: 0,
            bob_seen: 0,
            spiral_cursor: 0,
            violations: Vec::new(),
        }
    }

    pub fn for_animal(animal: &Animal) -> Result<Self, BobError> {
        Ok(PairingBob::new(super::partition_for(animal)?))
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    pub fn blocks_played(&self) -> &FxHashSet<BlockIndex> {
        &self.touched
    }

    /// Invariant breaches noticed so far, drained.
    pub fn take_violations(&mut self) -> Vec<String> {
        std::mem::take(&mut self.violations)
    }

    fn sync(&mut self, state: &GameState) {
        for &c in &state.alice_cells()[self.alice_seen..] {
            *self.alice_per_block.entry(self.partition.block_of(c)).or_default() += 1;
        }
        self.alice_seen = state.alice_cells().len();
        for &pl in &state.bob_copies()[self.bob_seen..] {
            for c in state.copy_cells(pl) {
                self.touched.insert(self.partition.block_of(c));
            }
        }
        self.bob_seen = state.bob_copies().len();
    }

    fn in_bounds(bounds: BoardBounds, r: Rect) -> bool {
        match bounds {
            BoardBounds::Infinite => true,
            BoardBounds::Rect(b) => b.contains_rect(&r),
        }
    }

    pub fn next_move(&mut self, state: &GameState) -> Result<Move, BobError> {
        self.sync(state);
        let animal = state.animal();
        if let Some(cell) = state.last_alice_cell() {
            let b = self.partition.block_of(cell);
            if !self.touched.contains(&b) {
                let rect = self.partition.block(b);
                let count = self.alice_per_block.get(&b).copied().unwrap_or(0);
                if count > 1 {
                    self.violations.push(format!("fresh-block: block {b:?} holds {count} Alice cells"));
                }
                match canonical_placement(rect, animal, state) {
                    Some(pl) => return Ok(self.commit(state, pl)),
                    None if Self::in_bounds(state.bounds(), rect) => {
                        return Err(BobError::StrategyFalsified { block: b, cell });
                    }
                    None => {}
                }
            }
        }
        if let Some(pl) = self.spiral_pick(state) {
            return Ok(self.commit(state, pl));
        }
        // Bounded board with no usable block: any legal copy, else pass.
        match state.bob_placements().first() {
            Some(&pl) => Ok(self.commit(state, pl)),
            None => Ok(Move::BobPass),
        }
    }

    fn commit(&mut self, state: &GameState, pl: Placement) -> Move {
        for c in state.copy_cells(pl) {
            self.touched.insert(self.partition.block_of(c));
        }
        self.bob_seen = state.bob_copies().len() + 1;
        Move::Bob(pl)
    }

    fn spiral_pick(&mut self, state: &GameState) -> Option<Placement> {
        let limit = match state.bounds() {
            BoardBounds::Infinite => None,
            BoardBounds::Rect(r) => {
                let reach = self
                    .partition
                    .blocks_meeting(r)
                    .into_iter()
                    .map(|(i, j)| i.unsigned_abs().max(j.unsigned_abs()) as u64)
                    .max()
                    .unwrap_or(0);
                Some((2 * reach + 1) * (2 * reach + 1))
            }
        };
        // Blocks skipped here never become usable again, so the cursor only
        // moves forward.
        loop {
            if limit.is_some_and(|l| self.spiral_cursor >= l) {
                return None;
            }
            let b = spiral_block(self.spiral_cursor);
            if !self.touched.contains(&b) {
                if let Some(pl) = canonical_placement(self.partition.block(b), state.animal(), state) {
                    return Some(pl);
                }
            }
            self.spiral_cursor += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bob::partition_for;

    #[test]
    fn spiral_visits_rings_in_order() {
        let mut seen = FxHashSet::default();
        for k in 0..(11 * 11) {
            let (i, j) = spiral_block(k);
            let ring = i.abs().max(j.abs()) as u64;
            assert!((2 * ring + 1).pow(2) > k && (ring == 0 || (2 * ring - 1).pow(2) <= k));
            assert!(seen.insert((i, j)));
        }
        assert_eq!(seen.len(), 121);
        assert_eq!(spiral_block(1), (1, 0));
    }

    #[test]
    fn empty_block_gets_origin_anchor() {
        let a = Animal::parse("O 4 6 1").unwrap();
        let g = GameState::new(a.clone(), BoardBounds::Infinite).unwrap();
        let p = partition_for(&a).unwrap();
        let pl = canonical_placement(p.block((0, 0)), &a, &g).unwrap();
        assert_eq!(pl.offset, Cell::ORIGIN);
    }

    #[test]
    fn l2_notch_forces_reflection() {
        let a = Animal::parse("L 2").unwrap();
        let p = partition_for(&a).unwrap();
        let mut g = GameState::new(a.clone(), BoardBounds::Infinite).unwrap();
        // The identity copy would start on Alice's cell.
        g.apply_alice(Cell::new(0, 0)).unwrap();
        let pl = canonical_placement(p.block((0, 0)), &a, &g).unwrap();
        assert!(g.check_bob(pl).is_ok());
        assert_ne!(pl.orientation, crate::animal::D4Element::IDENTITY);
    }

    #[test]
    fn pairing_answers_in_alice_block_then_spiral() {
        let a = Animal::parse("O 4 6 1").unwrap();
        let mut bob = PairingBob::for_animal(&a).unwrap();
        let mut g = GameState::new(a, BoardBounds::Infinite).unwrap();
        g.apply_alice(Cell::new(12, 3)).unwrap();
        let Move::Bob(pl) = bob.next_move(&g).unwrap() else { panic!() };
        let block = bob.partition().block(bob.partition().block_of(Cell::new(12, 3)));
        assert!(g.copy_cells(pl).iter().all(|c| block.contains(*c)));
        g.apply_bob(pl).unwrap();
        // Alice plays again in the same, now filled, block.
        let free = block.cells().find(|c| g.is_free(*c)).unwrap();
        g.apply_alice(free).unwrap();
        let Move::Bob(pl) = bob.next_move(&g).unwrap() else { panic!() };
        let origin_block = bob.partition().block((0, 0));
        assert!(g.copy_cells(pl).iter().all(|c| origin_block.contains(*c)));
        assert!(bob.take_violations().is_empty());
    }

    #[test]
    fn bounded_board_passes_when_full() {
        let a = Animal::parse("O 4 6 1").unwrap();
        let mut bob = PairingBob::for_animal(&a).unwrap();
        let mut g = GameState::new(a, BoardBounds::board(4, 6)).unwrap();
        g.apply_alice(Cell::new(0, 0)).unwrap();
        let mv = bob.next_move(&g).unwrap();
        assert_eq!(mv, Move::BobPass);
    }
}
