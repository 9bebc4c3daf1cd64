use std::cmp::Reverse;
use std::collections::BTreeSet;

use rand::Rng as _;
use rustc_hash::FxHashMap;

use super::{Rng, Strategy, StrategyError, StrategySpec};
use crate::alice::{bounded_rectangle_move, AliceError, BoundingPlan, FastSquarePlan};
use crate::animal::{Animal, Cell, Placement, Rect};
use crate::bob::PairingBob;
use crate::engine::{BoardBounds, GameState, Move};
use crate::solver::{SolveConfig, Solver};

/// Where random strategies may move: the board itself, or on the infinite
/// board the square of radius `10 · diameter` around the origin.
pub fn random_window(animal: &Animal, bounds: BoardBounds) -> Rect {
    match bounds {
        BoardBounds::Rect(r) => r,
        BoardBounds::Infinite => Rect::new(0, 0, 0, 0).inflate(10 * animal.diameter()),
    }
}

const SAMPLE_TRIES: usize = 64;

pub(super) fn build(spec: &StrategySpec, animal: &Animal, bounds: BoardBounds) -> Result<Box<dyn Strategy>, StrategyError> {
    use StrategySpec::*;
    Ok(match spec {
        AliceRandom => Box::new(RandomAlice::new(animal, bounds)),
        AliceGreedy => Box::new(GreedyAlice::new(animal, bounds)),
        AliceFastSquare => {
            if bounds.is_bounded() {
                return Err(AliceError::NeedsInfiniteBoard.into());
            }
            Box::new(FastSquare(FastSquarePlan::new(animal.spec())?))
        }
        AliceBounding => Box::new(Bounding(BoundingPlan::new(animal, Cell::ORIGIN)?)),
        AliceBoundedHelly => {
            if !bounds.is_bounded() {
                return Err(AliceError::NeedsBoundedBoard.into());
            }
            crate::alice::rectangle_dims(animal)?;
            Box::new(BoundedHelly)
        }
        AliceSolver | BobSolver => Box::new(SolverPlayer::new(animal, bounds)?),
        BobPairing => Box::new(Pairing(PairingBob::for_animal(animal)?)),
        BobRandom => Box::new(RandomBob::new(animal, bounds)),
        BobLocalRandom => Box::new(LocalRandomBob(RandomBob::new(animal, bounds))),
        BobAdjacentBlocker => Box::new(AdjacentBlockerBob(RandomBob::new(animal, bounds))),
        BobScripted(moves) => Box::new(ScriptedBob::new(moves.clone(), RandomBob::new(animal, bounds))),
    })
}

/// Uniform free cell of the window; the window doubles if it fills up.
pub struct RandomAlice {
    window: Rect,
    bounded: bool,
}

impl RandomAlice {
    pub fn new(animal: &Animal, bounds: BoardBounds) -> Self {
        RandomAlice { window: random_window(animal, bounds), bounded: bounds.is_bounded() }
    }

    pub fn pick(&mut self, state: &GameState, rng: &mut Rng) -> Option<Cell> {
        loop {
            let w = self.window;
            for _ in 0..SAMPLE_TRIES {
                let c = Cell::new(rng.random_range(w.x_min..=w.x_max), rng.random_range(w.y_min..=w.y_max));
                if state.is_free(c) {
                    return Some(c);
                }
            }
            let free: Vec<Cell> = w.cells().filter(|&c| state.is_free(c)).collect();
            if !free.is_empty() {
                return Some(free[rng.random_range(0..free.len())]);
            }
            if self.bounded {
                return None;
            }
            self.window = w.inflate(w.width().max(1));
        }
    }
}

impl Strategy for RandomAlice {
    fn next_move(&mut self, state: &GameState, rng: &mut Rng) -> Result<Move, StrategyError> {
        self.pick(state, rng)
            .map(Move::Alice)
            .ok_or_else(|| StrategyError::Unsupported("no free cell left".into()))
    }
}

/// Extends the live copy holding the most Alice cells. Counts are kept
/// incrementally: a copy enters when Alice first plays into it and leaves
/// for good once Bob touches it.
pub struct GreedyAlice {
    animal: Animal,
    bounds: BoardBounds,
    fallback: RandomAlice,
    counts: FxHashMap<Placement, (u32, u32)>,
    ranked: BTreeSet<(Reverse<u32>, u32, Placement)>,
    alice_seen: usize,
    bob_seen: usize,
}

impl GreedyAlice {
    pub fn new(animal: &Animal, bounds: BoardBounds) -> Self {
        GreedyAlice {
            animal: animal.clone(),
            bounds,
            fallback: RandomAlice::new(animal, bounds),
            counts: FxHashMap::default(),
            ranked: BTreeSet::new(),
            alice_seen: 0,
            bob_seen: 0,
        }
    }

    /// Every placement whose copy covers `c`.
    fn through(&self, c: Cell) -> impl Iterator<Item = Placement> + '_ {
        self.animal
            .orientations()
            .iter()
            .flat_map(move |o| o.shape.cells().iter().map(move |&s| o.placement_at(c - s)))
    }

    fn sync(&mut self, state: &GameState, rng: &mut Rng) {
        for i in self.alice_seen..state.alice_cells().len() {
            let c = state.alice_cells()[i];
            let placements: Vec<Placement> = self.through(c).collect();
            for pl in placements {
                let entry = match self.counts.get(&pl) {
                    Some(&e) => e,
                    None => {
                        let cells = state.copy_cells(pl);
                        if cells.iter().any(|&x| state.is_bob(x) || !self.bounds.contains(x)) {
                            continue;
                        }
                        (0, rng.random())
                    }
                };
                self.ranked.remove(&(Reverse(entry.0), entry.1, pl));
                let next = (entry.0 + 1, entry.1);
                self.counts.insert(pl, next);
                self.ranked.insert((Reverse(next.0), next.1, pl));
            }
        }
        self.alice_seen = state.alice_cells().len();
        for i in self.bob_seen..state.bob_copies().len() {
            for b in state.copy_cells(state.bob_copies()[i]) {
                let placements: Vec<Placement> = self.through(b).collect();
                for pl in placements {
                    if let Some((n, t)) = self.counts.remove(&pl) {
                        self.ranked.remove(&(Reverse(n), t, pl));
                    }
                }
            }
        }
        self.bob_seen = state.bob_copies().len();
    }
}

impl Strategy for GreedyAlice {
    fn next_move(&mut self, state: &GameState, rng: &mut Rng) -> Result<Move, StrategyError> {
        self.sync(state, rng);
        if let Some(&(_, _, pl)) = self.ranked.first() {
            let free: Vec<Cell> = state.copy_cells(pl).into_iter().filter(|&c| state.is_free(c)).collect();
            if !free.is_empty() {
                return Ok(Move::Alice(free[rng.random_range(0..free.len())]));
            }
        }
        self.fallback.next_move(state, rng)
    }
}

struct FastSquare(FastSquarePlan);

impl Strategy for FastSquare {
    fn next_move(&mut self, state: &GameState, _: &mut Rng) -> Result<Move, StrategyError> {
        Ok(Move::Alice(self.0.next_move(state)?))
    }

    fn branch(&self) -> Option<String> {
        self.0.branch().map(|b| b.label().to_owned())
    }
}

struct Bounding(BoundingPlan);

impl Strategy for Bounding {
    fn next_move(&mut self, state: &GameState, _: &mut Rng) -> Result<Move, StrategyError> {
        Ok(Move::Alice(self.0.next_move(state)?))
    }
}

struct BoundedHelly;

impl Strategy for BoundedHelly {
    fn next_move(&mut self, state: &GameState, _: &mut Rng) -> Result<Move, StrategyError> {
        Ok(Move::Alice(bounded_rectangle_move(state)?))
    }
}

struct Pairing(PairingBob);

impl Strategy for Pairing {
    fn next_move(&mut self, state: &GameState, _: &mut Rng) -> Result<Move, StrategyError> {
        Ok(self.0.next_move(state)?)
    }

    fn take_violations(&mut self) -> Vec<String> {
        self.0.take_violations()
    }
}

/// Perfect play from the exact solver, for either side.
struct SolverPlayer {
    animal: Animal,
    board: Rect,
    solver: Option<(Option<usize>, Solver)>,
}

impl SolverPlayer {
    fn new(animal: &Animal, bounds: BoardBounds) -> Result<Self, StrategyError> {
        let board = bounds.rect().ok_or(AliceError::NeedsBoundedBoard)?;
        // Fails early on boards the solver cannot represent.
        Solver::new(SolveConfig::new(animal.clone(), board))?;
        Ok(SolverPlayer { animal: animal.clone(), board, solver: None })
    }
}

impl Strategy for SolverPlayer {
    fn next_move(&mut self, state: &GameState, _: &mut Rng) -> Result<Move, StrategyError> {
        let budget = state.move_budget();
        if self.solver.as_ref().is_none_or(|(b, _)| *b != budget) {
            let mut cfg = SolveConfig::new(self.animal.clone(), self.board);
            cfg.move_budget = budget;
            self.solver = Some((budget, Solver::new(cfg)?));
        }
        let (_, solver) = self.solver.as_ref().expect("just built");
        Ok(solver.best_move(state)?)
    }
}

/// Uniform legal copy. On the infinite board copies lie in the random
/// window, which doubles if no copy fits; on a bounded board Bob passes when
/// nothing fits.
pub struct RandomBob {
    window: Rect,
    bounded: bool,
}

impl RandomBob {
    pub fn new(animal: &Animal, bounds: BoardBounds) -> Self {
        RandomBob { window: random_window(animal, bounds), bounded: bounds.is_bounded() }
    }

    pub fn pick(&mut self, state: &GameState, rng: &mut Rng) -> Move {
        let orientations = state.animal().orientations();
        loop {
            let w = self.window;
            for _ in 0..SAMPLE_TRIES {
                let o = &orientations[rng.random_range(0..orientations.len())];
                let (ow, oh) = (o.shape.width(), o.shape.height());
                if ow > w.width() || oh > w.height() {
                    continue;
                }
                let corner =
                    Cell::new(rng.random_range(w.x_min..=w.x_max - ow + 1), rng.random_range(w.y_min..=w.y_max - oh + 1));
                let pl = o.placement_at(corner);
                if state.check_bob(pl).is_ok() {
                    return Move::Bob(pl);
                }
            }
            let inside: Vec<Placement> = state
                .bob_placements_in_region(w)
                .into_iter()
                .filter(|&pl| state.copy_cells(pl).iter().all(|&c| w.contains(c)))
                .collect();
            if !inside.is_empty() {
                return Move::Bob(inside[rng.random_range(0..inside.len())]);
            }
            if self.bounded {
                return Move::BobPass;
            }
            self.window = w.inflate(w.width().max(1));
        }
    }
}

impl Strategy for RandomBob {
    fn next_move(&mut self, state: &GameState, rng: &mut Rng) -> Result<Move, StrategyError> {
        Ok(self.pick(state, rng))
    }
}

/// Uniform legal copy within one diameter of Alice's last cell.
struct LocalRandomBob(RandomBob);

impl Strategy for LocalRandomBob {
    fn next_move(&mut self, state: &GameState, rng: &mut Rng) -> Result<Move, StrategyError> {
        if let Some(last) = state.last_alice_cell() {
            let near = Rect::new(last.x, last.x, last.y, last.y).inflate(state.animal().diameter());
            let options = state.bob_placements_in_region(near);
            if !options.is_empty() {
                return Ok(Move::Bob(options[rng.random_range(0..options.len())]));
            }
        }
        Ok(self.0.pick(state, rng))
    }
}

/// Among copies next to Alice's last cell, the one covering the most free
/// cells adjacent to Alice; ties go to the first in placement order.
pub struct AdjacentBlockerBob(RandomBob);

impl AdjacentBlockerBob {
    pub fn new(animal: &Animal, bounds: BoardBounds) -> Self {
        AdjacentBlockerBob(RandomBob::new(animal, bounds))
    }
}

impl Strategy for AdjacentBlockerBob {
    fn next_move(&mut self, state: &GameState, rng: &mut Rng) -> Result<Move, StrategyError> {
        if let Some(last) = state.last_alice_cell() {
            let ring = Rect::new(last.x, last.x, last.y, last.y).inflate(1);
            let score = |pl: Placement| {
                state
                    .copy_cells(pl)
                    .into_iter()
                    .filter(|c| c.neighbors().iter().any(|&nb| state.is_alice(nb)))
                    .count()
            };
            let mut best: Option<(usize, Placement)> = None;
            for pl in state.bob_placements_in_region(ring) {
                let s = score(pl);
                if best.is_none_or(|(b, _)| s > b) {
                    best = Some((s, pl));
                }
            }
            if let Some((_, pl)) = best {
                return Ok(Move::Bob(pl));
            }
        }
        Ok(self.0.pick(state, rng))
    }
}

/// Plays a fixed list of Bob moves, then random copies. A scripted move
/// that is illegal when its turn comes is replaced by a random one and
/// reported as a violation.
pub struct ScriptedBob {
    script: Vec<Move>,
    fallback: RandomBob,
    violations: Vec<String>,
}

impl ScriptedBob {
    pub fn new(script: Vec<Move>, fallback: RandomBob) -> Self {
        ScriptedBob { script, fallback, violations: Vec::new() }
    }
}

impl Strategy for ScriptedBob {
    fn next_move(&mut self, state: &GameState, rng: &mut Rng) -> Result<Move, StrategyError> {
        let turn = state.history().len() / 2;
        if let Some(&mv) = self.script.get(turn) {
            let legal = match mv {
                Move::Bob(pl) => state.check_bob(pl).is_ok(),
                Move::BobPass => state.bounds().is_bounded() && !state.bob_has_legal_placement(),
                Move::Alice(_) => false,
            };
            if legal {
                return Ok(mv);
            }
            self.violations.push(format!("scripted: move {} ({mv}) is illegal, playing random", turn + 1));
        }
        Ok(self.fallback.pick(state, rng))
    }

    fn take_violations(&mut self) -> Vec<String> {
        std::mem::take(&mut self.violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng() -> Rng {
        Rng::seed_from_u64(3)
    }

    #[test]
    fn random_moves_stay_in_window() {
        let a = Animal::parse("R 2 1").unwrap();
        let mut g = GameState::new(a.clone(), BoardBounds::Infinite).unwrap();
        let w = random_window(&a, BoardBounds::Infinite);
        assert_eq!(w, Rect::new(-20, 20, -20, 20));
        let (mut alice, mut bob, mut r) = (RandomAlice::new(&a, g.bounds()), RandomBob::new(&a, g.bounds()), rng());
        for _ in 0..100 {
            let m = alice.next_move(&g, &mut r).unwrap();
            g.apply(m).unwrap();
            if g.is_over() {
                break;
            }
            let m = bob.next_move(&g, &mut r).unwrap();
            g.apply(m).unwrap();
        }
        assert!(g.occupancy().all(|(c, _)| w.contains(c)));
    }

    #[test]
    fn random_bob_passes_when_full() {
        let a = Animal::parse("R 2 1").unwrap();
        let mut g = GameState::new(a.clone(), BoardBounds::board(3, 1)).unwrap();
        g.apply_alice(Cell::new(1, 0)).unwrap();
        let mut bob = RandomBob::new(&a, g.bounds());
        assert_eq!(bob.next_move(&g, &mut rng()).unwrap(), Move::BobPass);
    }

    #[test]
    fn greedy_extends_its_best_copy() {
        let a = Animal::parse("R 3 1").unwrap();
        let mut g = GameState::new(a.clone(), BoardBounds::Infinite).unwrap();
        let mut greedy = GreedyAlice::new(&a, g.bounds());
        let mut r = rng();
        g.apply_alice(Cell::new(0, 0)).unwrap();
        g.apply_bob(Placement::new(crate::animal::D4Element::IDENTITY, 5, 5)).unwrap();
        g.apply_alice(Cell::new(1, 0)).unwrap();
        g.apply_bob(Placement::new(crate::animal::D4Element::IDENTITY, -3, 0)).unwrap();
        // Only [0,2]x{0} still holds two Alice cells and no Bob cell.
        assert_eq!(greedy.next_move(&g, &mut r).unwrap(), Move::Alice(Cell::new(2, 0)));
    }

    #[test]
    fn adjacent_blocker_hugs_alice() {
        let a = Animal::parse("R 2 1").unwrap();
        let mut g = GameState::new(a.clone(), BoardBounds::Infinite).unwrap();
        g.apply_alice(Cell::ORIGIN).unwrap();
        let mut bob = AdjacentBlockerBob::new(&a, g.bounds());
        let Move::Bob(pl) = bob.next_move(&g, &mut rng()).unwrap() else { panic!() };
        let cells = g.copy_cells(pl);
        assert!(cells.iter().any(|c| c.neighbors().contains(&Cell::ORIGIN)));
    }

    #[test]
    fn scripted_bob_replays_then_falls_back() {
        let a = Animal::parse("R 1 1").unwrap();
        let script = vec![Move::Bob(Placement::new(crate::animal::D4Element::IDENTITY, 4, 4))];
        let mut bob = ScriptedBob::new(script.clone(), RandomBob::new(&a, BoardBounds::Infinite));
        // R 1 1 finishes at once, so use a bigger animal for the live game.
        let a = Animal::parse("R 2 1").unwrap();
        let mut g = GameState::new(a, BoardBounds::Infinite).unwrap();
        g.apply_alice(Cell::new(4, 4)).unwrap();
        let mut r = rng();
        let m = bob.next_move(&g, &mut r).unwrap();
        assert_ne!(m, script[0]);
        assert_eq!(bob.take_violations().len(), 1);
        g.apply(m).unwrap();
        g.apply_alice(Cell::new(9, 9)).unwrap();
        assert!(matches!(bob.next_move(&g, &mut r).unwrap(), Move::Bob(_)));
        assert!(bob.take_violations().is_empty());
    }
}
