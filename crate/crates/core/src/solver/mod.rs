//! Exact search for small bounded boards.
//!
//! Positions are pairs of bitmasks over the board (at most 64 cells). The
//! search answers "can Alice win within `d` more plies?" and iterates `d`
//! upward. Memo entries record the largest `d` proven a failure and the
//! smallest `d` proven a win for a position; those are facts about the
//! position, so parallel and sequential runs reach the same answers.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;
use thiserror::Error;

use crate::animal::{Animal, Cell, D4Element, Placement, Rect};
use crate::engine::{BoardBounds, EngineError, GameState, Move, Side, Status};

pub const DEFAULT_MEMO_LIMIT: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("memo overflow after {nodes} nodes ({entries} entries)")]
    MemoOverflow { nodes: u64, entries: usize },
    #[error("board has {0} cells; the solver handles at most 64")]
    BoardTooLarge(usize),
    #[error("the game is already over")]
    GameOver,
    #[error("position is not on the solver's board")]
    WrongBoard,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub animal: Animal,
    pub bounds: Rect,
    /// Total plies from the empty board before the game counts as a Bob win.
    pub move_budget: Option<usize>,
    pub memo_limit: usize,
    pub threads: usize,
}

impl SolveConfig {
    pub fn new(animal: Animal, bounds: Rect) -> Self {
        SolveConfig { animal, bounds, move_budget: None, memo_limit: DEFAULT_MEMO_LIMIT, threads: 1 }
    }

    pub fn budget(&self) -> usize {
        self.move_budget.unwrap_or(2 * self.bounds.area())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub winner: Side,
    /// Plies from the solved position to Alice's winning move, counting it.
    pub ply_to_win: Option<usize>,
    /// Alice's total move count at the moment she wins under perfect play.
    pub alice_moves_to_win: Option<usize>,
    pub principal_variation: Vec<Move>,
    pub nodes: u64,
    pub memo_entries: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Key {
    alice: u64,
    bob: u64,
    alice_to_move: bool,
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    /// Largest depth known not to suffice, or -1.
    failed: i32,
    /// Smallest depth known to suffice, or `i32::MAX`.
    won: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    alice: u64,
    bob: u64,
    alice_to_move: bool,
    /// Index of Alice's latest cell, for move ordering.
    last: Option<u8>,
}

/// Exact solver for one animal on one board. The memo persists across calls.
pub struct Solver {
    config: SolveConfig,
    width: i32,
    cells: usize,
    full: u64,
    placements: Vec<(Placement, u64)>,
    /// Per cell, a bitmask of neighbouring cells within the animal's diameter.
    near: Vec<u64>,
    symmetries: Vec<Vec<u8>>,
    memo: DashMap<Key, Entry, FxBuildHasher>,
    nodes: AtomicU64,
    overflow: AtomicBool,
    use_memo: bool,
}

impl Solver {
    pub fn new(config: SolveConfig) -> Result<Self, SolverError> {
        let b = config.bounds;
        let cells = b.area();
        if cells > 64 {
            return Err(SolverError::BoardTooLarge(cells));
        }
        let probe = GameState::new(config.animal.clone(), BoardBounds::Rect(b))?;
        let width = b.width();
        let bit = |c: Cell| ((c.y - b.y_min) * width + (c.x - b.x_min)) as u32;
        let placements: Vec<(Placement, u64)> = probe
            .bob_placements_in_region(b)
            .into_iter()
            .map(|pl| (pl, probe.copy_cells(pl).into_iter().fold(0u64, |m, c| m | 1 << bit(c))))
            .collect();
        let full = if cells == 64 { u64::MAX } else { (1u64 << cells) - 1 };
        let d = config.animal.diameter();
        let near = b
            .cells()
            .map(|c| {
                b.cells()
                    .filter(|o| (o.x - c.x).abs().max((o.y - c.y).abs()) <= d)
                    .fold(0u64, |m, o| m | 1 << bit(o))
            })
            .collect();
        let mut symmetries = vec![(0..cells as u8).collect::<Vec<u8>>()];
        if b.width() == b.height() {
            let n = b.width();
            for g in D4Element::all().skip(1) {
                // Rotate about the board's centre: apply g, then shift back into [0, n).
                let img: Vec<Cell> = (0..n * n).map(|i| g.apply(Cell::new(i % n, i / n))).collect();
                let min_x = img.iter().map(|c| c.x).min().unwrap_or(0);
                let min_y = img.iter().map(|c| c.y).min().unwrap_or(0);
                symmetries.push(img.iter().map(|c| ((c.y - min_y) * n + (c.x - min_x)) as u8).collect());
            }
        }
        Ok(Solver {
            config,
            width,
            cells,
            full,
            placements,
            near,
            symmetries,
            memo: DashMap::with_hasher(FxBuildHasher),
            nodes: AtomicU64::new(0),
            overflow: AtomicBool::new(false),
            use_memo: true,
        })
    }

    /// Turns the transposition table off, for cross-checks.
    pub fn without_memo(mut self) -> Self {
        self.use_memo = false;
        self
    }

    pub fn config(&self) -> &SolveConfig {
        &self.config
    }

    pub fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub fn memo_entries(&self) -> usize {
        self.memo.len()
    }

    fn bit(&self, c: Cell) -> u32 {
        let b = self.config.bounds;
        ((c.y - b.y_min) * self.width + (c.x - b.x_min)) as u32
    }

    fn cell(&self, i: u32) -> Cell {
        let b = self.config.bounds;
        Cell::new(b.x_min + i as i32 % self.width, b.y_min + i as i32 / self.width)
    }

    fn check_state(&self, state: &GameState) -> Result<Pos, SolverError> {
        if state.bounds() != BoardBounds::Rect(self.config.bounds) || state.animal() != &self.config.animal {
            return Err(SolverError::WrongBoard);
        }
        if state.is_over() {
            return Err(SolverError::GameOver);
        }
        let mut alice = 0u64;
        let mut bob = 0u64;
        for (c, o) in state.occupancy() {
            match o.side() {
                Side::Alice => alice |= 1 << self.bit(c),
                Side::Bob => bob |= 1 << self.bit(c),
            }
        }
        Ok(Pos {
            alice,
            bob,
            alice_to_move: state.to_move() == Side::Alice,
            last: state.last_alice_cell().map(|c| self.bit(c) as u8),
        })
    }

    fn remaining(&self, state: &GameState) -> usize {
        self.config.budget().saturating_sub(state.ply())
    }

    fn key(&self, p: &Pos) -> Key {
        let mut best = (p.alice, p.bob);
        for perm in &self.symmetries[1..] {
            let map = |m: u64| {
                let mut out = 0u64;
                let mut rest = m;
                while rest != 0 {
                    let i = rest.trailing_zeros();
                    rest &= rest - 1;
                    out |= 1 << perm[i as usize];
                }
                out
            };
            let cand = (map(p.alice), map(p.bob));
            if cand < best {
                best = cand;
            }
        }
        Key { alice: best.0, bob: best.1, alice_to_move: p.alice_to_move }
    }

    fn alice_complete(&self, alice: u64) -> bool {
        self.placements.iter().any(|&(_, m)| m & alice == m)
    }

    /// Fewest plies Alice could possibly need, or `None` when every copy
    /// already holds a Bob cell.
    fn lower_bound(&self, p: &Pos) -> Option<i32> {
        let missing = self
            .placements
            .iter()
            .filter(|&&(_, m)| m & p.bob == 0)
            .map(|&(_, m)| (m & !p.alice).count_ones() as i32)
            .min()?;
        Some(if p.alice_to_move { 2 * missing - 1 } else { 2 * missing })
    }

    /// Free cells, most promising first: cells on more live copies first.
    fn alice_moves(&self, p: &Pos) -> Vec<u32> {
        let free = self.full & !(p.alice | p.bob);
        let mut score = [0u32; 64];
        for &(_, m) in &self.placements {
            if m & p.bob == 0 {
                let mut rest = m & free;
                while rest != 0 {
                    let i = rest.trailing_zeros();
                    rest &= rest - 1;
                    score[i as usize] += 1;
                }
            }
        }
        let mut out: Vec<u32> = (0..self.cells as u32).filter(|&i| free >> i & 1 == 1).collect();
        out.sort_by_key(|&i| (std::cmp::Reverse(score[i as usize]), i));
        out
    }

    /// Legal placements, those near Alice's latest cell first.
    fn bob_moves(&self, p: &Pos) -> Vec<usize> {
        let occ = p.alice | p.bob;
        let near = p.last.map_or(0, |i| self.near[i as usize]);
        let mut out: Vec<usize> = (0..self.placements.len()).filter(|&i| self.placements[i].1 & occ == 0).collect();
        out.sort_by_key(|&i| (self.placements[i].1 & near == 0, i));
        out
    }

    fn after_alice(&self, p: &Pos, i: u32) -> Pos {
        Pos { alice: p.alice | 1 << i, bob: p.bob, alice_to_move: false, last: Some(i as u8) }
    }

    fn after_bob(&self, p: &Pos, m: u64) -> Pos {
        Pos { alice: p.alice, bob: p.bob | m, alice_to_move: true, last: p.last }
    }

    fn store(&self, key: Key, d: i32, won: bool) {
        if !self.use_memo {
            return;
        }
        if self.memo.len() >= self.config.memo_limit {
            self.overflow.store(true, Ordering::Relaxed);
            return;
        }
        let mut e = self.memo.entry(key).or_insert(Entry { failed: -1, won: i32::MAX });
        if won {
            e.won = e.won.min(d);
        } else {
            e.failed = e.failed.max(d);
        }
    }

    /// Can Alice force a win within `d` plies?
    fn win_within(&self, p: &Pos, d: i32) -> bool {
        if d <= 0 || self.overflow.load(Ordering::Relaxed) {
            return false;
        }
        self.nodes.fetch_add(1, Ordering::Relaxed);
        match self.lower_bound(p) {
            None => return false,
            Some(lb) if lb > d => return false,
            _ => {}
        }
        let key = self.key(p);
        if self.use_memo {
            if let Some(e) = self.memo.get(&key) {
                if d >= e.won {
                    return true;
                }
                if d <= e.failed {
                    return false;
                }
            }
        }
        let result = if p.alice_to_move {
            self.alice_moves(p).into_iter().any(|i| {
                let c = self.after_alice(p, i);
                if self.alice_complete(c.alice) {
                    return true;
                }
                if c.alice | c.bob == self.full {
                    return false;
                }
                self.win_within(&c, d - 1)
            })
        } else {
            let moves = self.bob_moves(p);
            if moves.is_empty() {
                let c = Pos { alice_to_move: true, ..*p };
                self.win_within(&c, d - 1)
            } else {
                moves.into_iter().all(|i| {
                    let c = self.after_bob(p, self.placements[i].1);
                    c.alice | c.bob != self.full && self.win_within(&c, d - 1)
                })
            }
        };
        self.store(key, d, result);
        result
    }

    /// Fewest plies in which Alice forces a win, within `limit`.
    fn distance(&self, p: &Pos, limit: i32) -> Option<i32> {
        let start = self.lower_bound(p)?.max(1);
        (start..=limit).find(|&d| self.win_within(p, d))
    }

    fn overflow_check(&self) -> Result<(), SolverError> {
        if self.overflow.load(Ordering::Relaxed) {
            return Err(SolverError::MemoOverflow { nodes: self.nodes(), entries: self.memo.len() });
        }
        Ok(())
    }

    fn pool(&self) -> Option<rayon::ThreadPool> {
        (self.config.threads > 1)
            .then(|| rayon::ThreadPoolBuilder::new().num_threads(self.config.threads).build().ok())
            .flatten()
    }

    /// Distance from `state`, searching root children in parallel when threads > 1.
    fn root_distance(&self, state: &GameState) -> Result<Option<i32>, SolverError> {
        let p = self.check_state(state)?;
        let limit = self.remaining(state) as i32;
        let result = match self.pool() {
            Some(pool) => {
                // Warm the memo with every root child in parallel; the final
                // answer still comes from the sequential deepening below.
                let children = self.children(&p);
                pool.install(|| {
                    children.par_iter().for_each(|c| {
                        if let Some(c) = c {
                            self.distance(c, limit - 1);
                        }
                    })
                });
                self.distance(&p, limit)
            }
            None => self.distance(&p, limit),
        };
        self.overflow_check()?;
        Ok(result)
    }

    /// Child positions of `p`; `None` marks a child that ends the game.
    fn children(&self, p: &Pos) -> Vec<Option<Pos>> {
        if p.alice_to_move {
            self.alice_moves(p)
                .into_iter()
                .map(|i| {
                    let c = self.after_alice(p, i);
                    (!self.alice_complete(c.alice) && c.alice | c.bob != self.full).then_some(c)
                })
                .collect()
        } else {
            let moves = self.bob_moves(p);
            if moves.is_empty() {
                return vec![Some(Pos { alice_to_move: true, ..*p })];
            }
            moves
                .into_iter()
                .map(|i| {
                    let c = self.after_bob(p, self.placements[i].1);
                    (c.alice | c.bob != self.full).then_some(c)
                })
                .collect()
        }
    }

    /// A move on an optimal line. Alice takes a fastest win, ties broken by
    /// (y, x); Bob takes the first placement that stops Alice within the
    /// budget, otherwise one that delays her longest.
    pub fn best_move(&self, state: &GameState) -> Result<Move, SolverError> {
        let p = self.check_state(state)?;
        let limit = self.remaining(state) as i32;
        if limit <= 0 {
            return Err(SolverError::GameOver);
        }
        let mv = if p.alice_to_move {
            let mut cells: Vec<u32> = (0..self.cells as u32).filter(|&i| (p.alice | p.bob) >> i & 1 == 0).collect();
            cells.sort_by_key(|&i| self.cell(i).row_major_key());
            let mut best: Option<(i32, u32)> = None;
            for &i in &cells {
                let c = self.after_alice(&p, i);
                let d = if self.alice_complete(c.alice) {
                    Some(0)
                } else if c.alice | c.bob == self.full {
                    None
                } else {
                    let cap = best.map_or(limit - 1, |(b, _)| (b - 1).min(limit - 1));
                    self.distance(&c, cap)
                };
                if let Some(d) = d {
                    if best.is_none_or(|(b, _)| d < b) {
                        best = Some((d, i));
                    }
                }
            }
            Move::Alice(self.cell(best.map_or(cells[0], |(_, i)| i)))
        } else {
            let moves: Vec<usize> =
                (0..self.placements.len()).filter(|&i| self.placements[i].1 & (p.alice | p.bob) == 0).collect();
            if moves.is_empty() {
                Move::BobPass
            } else {
                let mut best: Option<(i32, usize)> = None;
                let mut pick = None;
                for &i in &moves {
                    let c = self.after_bob(&p, self.placements[i].1);
                    if c.alice | c.bob == self.full {
                        pick = Some(i);
                        break;
                    }
                    match self.distance(&c, limit - 1) {
                        None => {
                            pick = Some(i);
                            break;
                        }
                        Some(d) => {
                            if best.is_none_or(|(b, _)| d > b) {
                                best = Some((d, i));
                            }
                        }
                    }
                }
                let i = pick.or(best.map(|(_, i)| i)).expect("nonempty move list");
                Move::Bob(self.placements[i].0)
            }
        };
        self.overflow_check()?;
        Ok(mv)
    }

    /// Value of `state` plus a principal variation.
    pub fn solve_from(&self, state: &GameState) -> Result<Outcome, SolverError> {
        let dist = self.root_distance(state)?;
        let mut pv = Vec::new();
        let mut g = state.clone();
        while !g.is_over() && self.remaining(&g) > 0 {
            let mv = self.best_move(&g)?;
            g.apply(mv)?;
            pv.push(mv);
        }
        let winner = if dist.is_some() { Side::Alice } else { Side::Bob };
        debug_assert_eq!(winner == Side::Alice, g.status() == Status::AliceWon, "PV must realize the value");
        let ply = dist.map(|d| d as usize);
        Ok(Outcome {
            winner,
            ply_to_win: ply,
            alice_moves_to_win: ply.map(|_| g.alice_move_count()),
            principal_variation: pv,
            nodes: self.nodes(),
            memo_entries: self.memo.len(),
        })
    }

    pub fn solve(&self) -> Result<Outcome, SolverError> {
        let start = GameState::new(self.config.animal.clone(), BoardBounds::Rect(self.config.bounds))?
            .with_move_budget(Some(self.config.budget()));
        self.solve_from(&start)
    }
}

pub fn solve(config: SolveConfig) -> Result<Outcome, SolverError> {
    Solver::new(config)?.solve()
}

pub fn best_move(state: &GameState, config: SolveConfig) -> Result<Move, SolverError> {
    Solver::new(config)?.best_move(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: &str, w: i32, h: i32) -> SolveConfig {
        SolveConfig::new(Animal::parse(d).unwrap(), Rect::new(0, w - 1, 0, h - 1))
    }

    #[test]
    fn solver_examples() {
        let o = solve(cfg("R 1 1", 1, 1)).unwrap();
        assert_eq!((o.winner, o.ply_to_win), (Side::Alice, Some(1)));
        let o = solve(cfg("R 1 2", 2, 2)).unwrap();
        assert_eq!((o.winner, o.ply_to_win, o.alice_moves_to_win), (Side::Alice, Some(3), Some(2)));
        assert_eq!(solve(cfg("EL", 3, 3)).unwrap().winner, Side::Alice);
        let o = solve(cfg("R 2 2", 2, 2)).unwrap();
        assert_eq!(o.winner, Side::Alice);
        assert_eq!(o.alice_moves_to_win, Some(4));
    }

    #[test]
    fn pv_replays_to_outcome() {
        let c = cfg("R 1 3", 3, 3);
        let o = solve(c.clone()).unwrap();
        let mut g = GameState::new(c.animal.clone(), BoardBounds::Rect(c.bounds)).unwrap();
        for &m in &o.principal_variation {
            g.apply(m).unwrap();
        }
        assert_eq!(g.status().winner(), Some(o.winner));
    }

    #[test]
    fn bob_win_when_animal_cannot_be_completed() {
        // A 2x2 square on a 2x3 board: Bob's first copy always breaks it.
        let o = solve(cfg("R 2 2", 2, 3)).unwrap();
        let again = Solver::new(cfg("R 2 2", 2, 3)).unwrap().without_memo().solve().unwrap();
        assert_eq!(o.winner, again.winner);
    }

    #[test]
    fn best_move_examples() {
        let c = cfg("R 1 1", 1, 1);
        let g = GameState::new(c.animal.clone(), BoardBounds::Rect(c.bounds)).unwrap();
        assert_eq!(best_move(&g, c).unwrap(), Move::Alice(Cell::new(0, 0)));

        let c = cfg("R 1 2", 3, 1);
        let mut g = GameState::new(c.animal.clone(), BoardBounds::Rect(c.bounds)).unwrap();
        g.apply_alice(Cell::new(0, 0)).unwrap();
        // Bob's only copy is the lying domino (1,0)-(2,0).
        assert_eq!(best_move(&g, c).unwrap(), Move::Bob(Placement::new(D4Element::ROT90, 1, 0)));

        let c = cfg("R 1 2", 3, 2);
        let mut g = GameState::new(c.animal.clone(), BoardBounds::Rect(c.bounds)).unwrap();
        g.apply_alice(Cell::new(0, 0)).unwrap();
        g.apply_bob(Placement::new(D4Element::IDENTITY, 1, 0)).unwrap();
        assert_eq!(best_move(&g, c).unwrap(), Move::Alice(Cell::new(0, 1)));
    }

    #[test]
    fn parallel_matches_sequential() {
        let mut c = cfg("EL", 4, 4);
        let seq = solve(c.clone()).unwrap();
        c.threads = 4;
        let par = solve(c).unwrap();
        assert_eq!(seq.winner, par.winner);
        assert_eq!(seq.ply_to_win, par.ply_to_win);
        assert_eq!(seq.principal_variation, par.principal_variation);
    }

    #[test]
    fn memo_overflow_is_reported() {
        let mut c = cfg("R 2 2", 4, 4);
        c.memo_limit = 1;
        assert!(matches!(solve(c), Err(SolverError::MemoOverflow { .. })));
    }
}
