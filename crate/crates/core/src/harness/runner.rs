use std::collections::BTreeMap;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Rng, Strategy, StrategyError, StrategySpec, RNG_ALGORITHM};
use crate::alice::{stab_sets, FastBranch};
use crate::animal::{Animal, Cell};
use crate::engine::{BoardBounds, GameRecord, GameState, Move, Occupant, Side, Status};

#[derive(Clone, Debug)]
pub struct MatchConfig {
    pub alice: StrategySpec,
    pub bob: StrategySpec,
    pub animal: Animal,
    pub bounds: BoardBounds,
    pub move_budget: Option<usize>,
    /// Compare the incremental win check with a full scan after every Alice
    /// move.
    pub full_scan_check: bool,
}

type Players = (Box<dyn Strategy>, Box<dyn Strategy>);

impl MatchConfig {
    pub fn new(alice: StrategySpec, bob: StrategySpec, animal: Animal, bounds: BoardBounds) -> Self {
        MatchConfig { alice, bob, animal, bounds, move_budget: None, full_scan_check: false }
    }

    pub fn with_budget(mut self, budget: Option<usize>) -> Self {
        self.move_budget = budget;
        self
    }

    fn players(&self) -> Result<Players, StrategyError> {
        self.alice.expect_side(Side::Alice)?;
        self.bob.expect_side(Side::Bob)?;
        Ok((self.alice.build(&self.animal, self.bounds)?, self.bob.build(&self.animal, self.bounds)?))
    }
}

/// A strategy error that ended the game early.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub side: Side,
    pub kind: String,
    pub message: String,
    pub falsification: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchReport {
    /// `None` when a strategy failed before the game ended.
    pub winner: Option<Side>,
    pub status: String,
    pub alice_move_count: usize,
    pub total_ply: usize,
    pub seed: u64,
    pub record: String,
    pub invariant_violations: Vec<String>,
    pub failure: Option<Failure>,
    pub branch: Option<String>,
}

impl MatchReport {
    /// One summary line: `winner`, `moves` (Alice's), `ply`, `seed`,
    /// `violations`, plus `failure` and `branch` when present.
    pub fn summary_line(&self, game: usize) -> String {
        let mut v = serde_json::json!({
            "game": game,
            "seed": self.seed,
            "winner": self.winner,
            "status": self.status,
            "moves": self.alice_move_count,
            "ply": self.total_ply,
            "violations": self.invariant_violations,
        });
        if let Some(f) = &self.failure {
            v["failure"] = serde_json::to_value(f).expect("plain struct");
        }
        if let Some(b) = &self.branch {
            v["branch"] = b.clone().into();
        }
        v.to_string()
    }

    pub fn is_clean(&self) -> bool {
        self.failure.is_none() && self.invariant_violations.is_empty()
    }
}

/// Plays one game. Setup problems (unknown or unsupported strategies) are
/// errors; anything that goes wrong during play is part of the report.
pub fn run_match(cfg: &MatchConfig, seed: u64) -> Result<MatchReport, StrategyError> {
    let (mut alice, mut bob) = cfg.players()?;
    let mut state = GameState::new(cfg.animal.clone(), cfg.bounds)?.with_move_budget(cfg.move_budget);
    let mut rng = Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut failure = None;
    let helly = cfg.alice == StrategySpec::AliceBoundedHelly;

    while !state.is_over() {
        let side = state.to_move();
        let player = match side {
            Side::Alice => &mut alice,
            Side::Bob => &mut bob,
        };
        let mv = match player.next_move(&state, &mut rng) {
            Ok(mv) => mv,
            Err(e) => {
                failure = Some(Failure {
                    side,
                    kind: e.kind().to_owned(),
                    message: e.to_string(),
                    falsification: e.is_falsification(),
                });
                break;
            }
        };
        violations.extend(player.take_violations().into_iter().map(|v| format!("ply {}: {v}", state.ply())));
        if let Err(e) = state.apply(mv) {
            let e = StrategyError::Illegal(e);
            failure = Some(Failure { side, kind: e.kind().to_owned(), message: e.to_string(), falsification: false });
            break;
        }
        match mv {
            Move::Alice(c) if cfg.full_scan_check => {
                let full = state.alice_has_won_full_scan();
                if full != (state.status() == Status::AliceWon) {
                    violations.push(format!("ply {}: win check disagrees with full scan after {c}", state.ply()));
                }
            }
            Move::Bob(_) | Move::BobPass
                if helly && !state.is_over() && stab_sets(&state).map(|s| s.s.is_empty()).unwrap_or(true) =>
            {
                violations.push(format!("ply {}: stab set S is empty", state.ply()));
            }
            _ => {}
        }
    }

    if state.status() == Status::AliceWon && cfg.bob == StrategySpec::BobPairing {
        violations.push("pairing: Alice won against the pairing strategy".to_owned());
    }
    let branch = alice.branch();
    if cfg.alice == StrategySpec::AliceFastSquare {
        if let Some(n) = cfg.animal.spec().square_side() {
            check_fast_square(&state, n, branch.as_deref(), &mut violations);
        }
    }

    let record = GameRecord::from_state(&state).with_seed(Some(seed), Some(RNG_ALGORITHM)).encode();
    match crate::engine::decode_record(&record) {
        Ok(replayed) => {
            let a: BTreeMap<Cell, Occupant> = state.occupancy().collect();
            let b: BTreeMap<Cell, Occupant> = replayed.occupancy().collect();
            if a != b || (failure.is_none() && replayed.status() != state.status()) {
                violations.push("record: replay differs from the played game".to_owned());
            }
        }
        Err(e) => violations.push(format!("record: {e}")),
    }

    Ok(MatchReport {
        winner: if failure.is_some() { None } else { state.status().winner() },
        status: state.status().to_string(),
        alice_move_count: state.alice_move_count(),
        total_ply: state.ply(),
        seed,
        record,
        invariant_violations: violations,
        failure,
        branch,
    })
}

fn check_fast_square(state: &GameState, n: i32, branch: Option<&str>, violations: &mut Vec<String>) {
    let moves = state.alice_move_count();
    if state.status() != Status::AliceWon {
        if state.is_over() {
            violations.push(format!("fast-square: Alice did not win ({})", state.status()));
        }
        return;
    }
    let overall = (n * n + 3) as usize;
    if moves > overall {
        violations.push(format!("fast-square: {moves} Alice moves exceeds {overall}"));
    }
    match branch.and_then(FastBranch::from_label) {
        Some(b) if moves > b.move_bound(n) => {
            violations.push(format!("fast-square: branch {b} took {moves} moves, bound {}", b.move_bound(n)));
        }
        Some(_) => {}
        None => violations.push("fast-square: won without recording a branch".to_owned()),
    }
}

/// Aggregate of a series; merging is associative and commutative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub games: usize,
    pub alice_wins: usize,
    pub bob_wins: usize,
    /// Games ended by a strategy failure.
    pub aborted: usize,
    pub falsifications: usize,
    pub games_with_violations: usize,
    pub max_alice_moves_in_win: usize,
    pub total_ply: usize,
    /// Games and worst Alice move count per recorded branch.
    pub branches: BTreeMap<String, (usize, usize)>,
    /// `(game index, message)` for the first few failures and violations.
    pub problems: Vec<(usize, String)>,
}

const KEPT_PROBLEMS: usize = 20;

impl SeriesStats {
    pub fn of(game: usize, r: &MatchReport) -> Self {
        let mut s = SeriesStats { games: 1, total_ply: r.total_ply, ..Default::default() };
        match r.winner {
            Some(Side::Alice) => {
                s.alice_wins = 1;
                s.max_alice_moves_in_win = r.alice_move_count;
            }
            Some(Side::Bob) => s.bob_wins = 1,
            None => s.aborted = 1,
        }
        if let Some(f) = &r.failure {
            s.falsifications = usize::from(f.falsification);
            s.problems.push((game, format!("seed {}: {}: {}", r.seed, f.kind, f.message)));
        }
        if !r.invariant_violations.is_empty() {
            s.games_with_violations = 1;
            s.problems.extend(r.invariant_violations.iter().map(|v| (game, format!("seed {}: {v}", r.seed))));
        }
        if let Some(b) = &r.branch {
            s.branches.insert(b.clone(), (1, r.alice_move_count));
        }
        s.problems.truncate(KEPT_PROBLEMS);
        s
    }

    pub fn merge(mut self, other: SeriesStats) -> Self {
        self.games += other.games;
        self.alice_wins += other.alice_wins;
        self.bob_wins += other.bob_wins;
        self.aborted += other.aborted;
        self.falsifications += other.falsifications;
        self.games_with_violations += other.games_with_violations;
        self.max_alice_moves_in_win = self.max_alice_moves_in_win.max(other.max_alice_moves_in_win);
        self.total_ply += other.total_ply;
        for (b, (g, m)) in other.branches {
            let e = self.branches.entry(b).or_default();
            e.0 += g;
            e.1 = e.1.max(m);
        }
        self.problems.extend(other.problems);
        self.problems.sort();
        self.problems.truncate(KEPT_PROBLEMS);
        self
    }

    pub fn is_clean(&self) -> bool {
        self.aborted == 0 && self.games_with_violations == 0
    }
}

fn game_seed(seed_base: u64, i: usize) -> u64 {
    seed_base.wrapping_add(i as u64)
}

/// `games` matches with seeds `seed_base, seed_base + 1, …`, run in parallel.
pub fn run_series(cfg: &MatchConfig, games: usize, seed_base: u64) -> Result<SeriesStats, StrategyError> {
    cfg.players()?;
    (0..games)
        .into_par_iter()
        .map(|i| run_match(cfg, game_seed(seed_base, i)).map(|r| SeriesStats::of(i, &r)))
        .try_reduce(SeriesStats::default, |a, b| Ok(a.merge(b)))
}

/// Like [`run_series`] but keeps every report, in game order.
pub fn run_series_reports(cfg: &MatchConfig, games: usize, seed_base: u64) -> Result<Vec<MatchReport>, StrategyError> {
    cfg.players()?;
    (0..games).into_par_iter().map(|i| run_match(cfg, game_seed(seed_base, i))).collect()
}
