//! `cannibal` command line.
//!
//! Data goes to stdout, diagnostics to stderr. Exit status: 0 success,
//! 1 other failure, 2 usage error, 3 a strategy's correctness claim failed
//! in play (StrategyFalsified, CaseNotCovered).

use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use serde_json::json;

use cannibal::animal::{classify_piece, parse_cell_list, size_witnesses, Animal, Cell, Rect};
use cannibal::bob::{candidate_partition, find_crack, partition_for, verify_partition_static, BobError, DEFAULT_WINDOW_BLOCKS};
use cannibal::engine::{decode_record, BoardBounds, GameRecord, GameState, Move, Side};
use cannibal::harness::{run_series_reports, MatchConfig, Rng, SeriesStats, StrategySpec, RNG_ALGORITHM};
use cannibal::solver::{SolveConfig, Solver};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FALSIFIED: u8 = 3;

#[derive(Parser)]
#[command(name = "cannibal", version, about = "Cannibal animal game engine, strategies and solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn animal_arg(s: &str) -> Result<Animal, String> {
    Animal::parse(s).map_err(|e| e.to_string())
}

fn board_arg(s: &str) -> Result<BoardBounds, String> {
    s.parse()
}

fn strategy_arg(s: &str) -> Result<StrategySpec, String> {
    s.parse().map_err(|e: cannibal::harness::StrategyError| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Exact solve of the empty position on a bounded board.
    Solve {
        #[arg(long, value_parser = animal_arg)]
        animal: Animal,
        /// `WxH`.
        #[arg(long, value_parser = board_arg)]
        board: BoardBounds,
        /// Total plies before the game counts as a Bob win (default 2 × area).
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        memo_limit: Option<usize>,
    },
    /// Seeded strategy-vs-strategy games.
    Simulate {
        #[arg(long, value_parser = strategy_arg)]
        alice: StrategySpec,
        #[arg(long, value_parser = strategy_arg)]
        bob: StrategySpec,
        #[arg(long, value_parser = animal_arg)]
        animal: Animal,
        /// `WxH`; the board is infinite when omitted.
        #[arg(long, value_parser = board_arg)]
        board: Option<BoardBounds>,
        #[arg(long, default_value_t = 1)]
        games: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ply budget per game.
        #[arg(long)]
        budget: Option<usize>,
        /// Also check the incremental win test against a full scan.
        #[arg(long)]
        full_scan: bool,
        /// Folder for `game-NNNNNN.record` files and `summary.jsonl`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Static crack check of a block partition on a square window of blocks.
    VerifyPartition {
        #[arg(long, value_parser = animal_arg)]
        animal: Animal,
        /// Row shift; overrides the family's default partition.
        #[arg(long)]
        shift: Option<i32>,
        /// Window side in blocks.
        #[arg(long, default_value_t = DEFAULT_WINDOW_BLOCKS)]
        window: i32,
    },
    /// Is a removed piece inner or outer?
    ClassifyPiece {
        #[arg(long, value_parser = animal_arg)]
        animal: Animal,
        /// Cells of the piece, e.g. `(1,1);(1,2)`.
        #[arg(long)]
        remove: String,
    },
    /// Side of Alice's bounding square for R(n, m).
    ChooseN { n: i32, m: i32 },
    /// A cannibal and a non-cannibal animal of `n` cells.
    Witnesses { n: i32 },
    /// Play against a strategy in the terminal.
    Play {
        #[arg(long, value_parser = animal_arg)]
        animal: Animal,
        #[arg(long, value_parser = board_arg)]
        board: Option<BoardBounds>,
        /// `alice` or `bob`.
        #[arg(long, default_value = "alice")]
        human: String,
        #[arg(long, value_parser = strategy_arg)]
        engine: StrategySpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Start the HTTP session service.
    Serve {
        /// Overrides the port of the bind address in CANNIBAL_ADDR.
        #[arg(long)]
        port: Option<u16>,
        /// Persist sessions as record files here and restore them at start.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Replay a game record and print its outcome.
    Replay {
        file: PathBuf,
        /// Also print the final board.
        #[arg(long)]
        render: bool,
    },
}

struct Failure(u8, String);

impl Failure {
    fn other(msg: impl ToString) -> Self {
        Failure(EXIT_FAILURE, msg.to_string())
    }

    fn usage(msg: impl ToString) -> Self {
        Failure(EXIT_USAGE, msg.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Solve { animal, board, budget, threads, memo_limit } => solve(animal, board, budget, threads, memo_limit),
        Command::Simulate { alice, bob, animal, board, games, seed, budget, full_scan, out } => {
            let mut cfg = MatchConfig::new(alice, bob, animal, board.unwrap_or(BoardBounds::Infinite)).with_budget(budget);
            cfg.full_scan_check = full_scan;
            simulate(&cfg, games, seed, out)
        }
        Command::VerifyPartition { animal, shift, window } => verify_partition(&animal, shift, window),
        Command::ClassifyPiece { animal, remove } => {
            let piece = parse_cell_list(&remove).map_err(Failure::usage)?;
            let class = classify_piece(animal.shape(), &piece).map_err(Failure::usage)?;
            println!("{class}");
            Ok(())
        }
        Command::ChooseN { n, m } => {
            if n < 1 || m < 1 {
                return Err(Failure::usage("rectangle sides must be positive"));
            }
            println!("{}", cannibal::alice::choose_n(n, m));
            Ok(())
        }
        Command::Witnesses { n } => {
            let (cannibal, winner) = size_witnesses(n).map_err(Failure::usage)?;
            println!("{}", json!({ "n": n, "cannibal": cannibal.spec().to_string(), "non_cannibal": winner.spec().to_string() }));
            Ok(())
        }
        Command::Play { animal, board, human, engine, seed } => {
            let human = match human.as_str() {
                "alice" => Side::Alice,
                "bob" => Side::Bob,
                other => return Err(Failure::usage(format!("--human must be alice or bob, got {other:?}"))),
            };
            play(animal, board.unwrap_or(BoardBounds::Infinite), human, engine, seed)
        }
        Command::Serve { port, records } => serve(port, records),
        Command::Replay { file, render } => replay(file, render),
    }
}

fn solve(animal: Animal, board: BoardBounds, budget: Option<usize>, threads: usize, memo_limit: Option<usize>) -> CmdResult {
    let rect = board.rect().ok_or_else(|| Failure::usage("solve needs a bounded --board WxH"))?;
    let mut cfg = SolveConfig::new(animal, rect);
    cfg.move_budget = budget;
    cfg.threads = threads.max(1);
    if let Some(m) = memo_limit {
        cfg.memo_limit = m;
    }
    let budget = cfg.budget();
    let out = Solver::new(cfg).and_then(|s| s.solve()).map_err(Failure::other)?;
    let pv: Vec<String> = out.principal_variation.iter().map(Move::to_string).collect();
    println!(
        "{}",
        json!({
            "winner": out.winner,
            "ply_to_win": out.ply_to_win,
            "alice_moves_to_win": out.alice_moves_to_win,
            "principal_variation": pv,
            "nodes": out.nodes,
            "memo_entries": out.memo_entries,
            "budget": budget,
            "scope": "bounded, budgeted",
        })
    );
    Ok(())
}

fn simulate(cfg: &MatchConfig, games: usize, seed: u64, out: Option<PathBuf>) -> CmdResult {
    let reports = run_series_reports(cfg, games, seed).map_err(|e| Failure::usage(e.to_string()))?;
    let mut stats = SeriesStats::default();
    for (i, r) in reports.iter().enumerate() {
        stats = stats.merge(SeriesStats::of(i, r));
    }
    if let Some(dir) = &out {
        std::fs::create_dir_all(dir).map_err(Failure::other)?;
        let mut summary = String::new();
        for (i, r) in reports.iter().enumerate() {
            std::fs::write(dir.join(format!("game-{i:06}.record")), &r.record).map_err(Failure::other)?;
            summary.push_str(&r.summary_line(i));
            summary.push('\n');
        }
        std::fs::write(dir.join("summary.jsonl"), summary).map_err(Failure::other)?;
    }
    println!(
        "{}",
        json!({
            "alice": cfg.alice.to_string(),
            "bob": cfg.bob.to_string(),
            "animal": cfg.animal.spec().to_string(),
            "board": cfg.bounds.to_string(),
            "seed_base": seed,
            "rng": RNG_ALGORITHM,
            "stats": stats,
        })
    );
    for (_, p) in &stats.problems {
        eprintln!("{p}");
    }
    if stats.falsifications > 0 {
        return Err(Failure(EXIT_FALSIFIED, format!("{} games ended in a falsified strategy", stats.falsifications)));
    }
    Ok(())
}

fn verify_partition(animal: &Animal, shift: Option<i32>, window: i32) -> CmdResult {
    let partition = match shift {
        Some(_) => candidate_partition(animal.spec(), shift)
            .ok_or_else(|| Failure::usage(format!("no block family for {}", animal.spec())))?,
        None => partition_for(animal).map_err(Failure::usage)?,
    };
    let ok = verify_partition_static(animal, &partition, window).map_err(|e| match e {
        BobError::WindowTooSmall(_) => Failure::usage(e),
        other => Failure::other(other),
    })?;
    println!("{partition}");
    if ok {
        println!("NO CRACK");
    } else {
        println!("CRACK FOUND");
        let (bw, bh) = (partition.block_w, partition.block_h);
        let o = partition.origin;
        let region = Rect::new(o.x, o.x + window * bw - 1, o.y, o.y + window * bh - 1);
        if let Ok(Some(cells)) = find_crack(animal, &partition, region) {
            println!("crack {}", cannibal::animal::format_cell_list(&cells));
        }
    }
    Ok(())
}

fn serve(port: Option<u16>, records: Option<PathBuf>) -> CmdResult {
    let addr = cannibal::service::bind_addr(port).map_err(Failure::usage)?;
    let app = match records {
        Some(dir) => cannibal::service::AppState::with_records_dir(dir).map_err(Failure::other)?,
        None => cannibal::service::AppState::in_memory(),
    };
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build().map_err(Failure::other)?;
    rt.block_on(cannibal::service::serve(addr, app)).map_err(Failure::other)
}

fn replay(file: PathBuf, render: bool) -> CmdResult {
    let text = std::fs::read_to_string(&file).map_err(|e| Failure::other(format!("{}: {e}", file.display())))?;
    let state = decode_record(&text).map_err(Failure::other)?;
    println!(
        "{}",
        json!({
            "status": state.status().to_string(),
            "winner": state.status().winner(),
            "ply": state.ply(),
            "alice_move_count": state.alice_move_count(),
            "animal": state.animal().spec().to_string(),
            "board": state.bounds().to_string(),
        })
    );
    if render {
        print!("{}", state.render(view(&state)));
    }
    Ok(())
}

/// The whole bounded board, or the occupied extent plus a margin.
fn view(state: &GameState) -> Rect {
    state
        .bounds()
        .rect()
        .unwrap_or_else(|| state.occupied_extent().unwrap_or(Rect::new(0, 0, 0, 0)).inflate(2))
}

/// Reads one move per line: `x y` or `A x y` for Alice, `o dx dy`,
/// `B o dx dy` or `BPASS` for Bob. Prompts and boards go to stderr; the
/// final record goes to stdout.
fn play(animal: Animal, bounds: BoardBounds, human: Side, engine_spec: StrategySpec, seed: u64) -> CmdResult {
    engine_spec.expect_side(human.other()).map_err(Failure::usage)?;
    let mut engine = engine_spec.build(&animal, bounds).map_err(Failure::usage)?;
    let mut state = GameState::new(animal, bounds).map_err(Failure::usage)?;
    let mut rng = Rng::seed_from_u64(seed);
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut falsified = None;
    while !state.is_over() {
        if state.to_move() == human {
            eprint!("{}", state.render(view(&state)));
            eprint!("{human} to move> ");
            io::stderr().flush().ok();
            let Some(line) = lines.next() else {
                eprintln!();
                break;
            };
            let line = line.map_err(Failure::other)?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "quit" {
                break;
            }
            let mv = match parse_human_move(line, human) {
                Some(mv) => mv,
                None => {
                    eprintln!("cannot read move {line:?}");
                    continue;
                }
            };
            if let Err(e) = state.apply(mv) {
                eprintln!("{}: {e}", e.reason());
            }
        } else {
            match engine.next_move(&state, &mut rng) {
                Ok(mv) => {
                    state.apply(mv).map_err(|e| Failure::other(format!("engine played an illegal move: {e}")))?;
                    eprintln!("engine: {mv}");
                }
                Err(e) => {
                    if e.is_falsification() {
                        falsified = Some(e.to_string());
                    } else {
                        eprintln!("engine failed: {e}");
                    }
                    break;
                }
            }
        }
    }
    eprint!("{}", state.render(view(&state)));
    eprintln!("{}", state.status());
    print!("{}", GameRecord::from_state(&state).with_seed(Some(seed), Some(RNG_ALGORITHM)).encode());
    match falsified {
        Some(msg) => Err(Failure(EXIT_FALSIFIED, msg)),
        None => Ok(()),
    }
}

fn parse_human_move(line: &str, human: Side) -> Option<Move> {
    if let Ok(mv) = line.parse::<Move>() {
        return Some(mv);
    }
    let nums: Vec<i32> = line.split([' ', ',', '(', ')']).filter(|t| !t.is_empty()).map(|t| t.parse().ok()).collect::<Option<_>>()?;
    match (human, nums.as_slice()) {
        (Side::Alice, [x, y]) => Some(Move::Alice(Cell::new(*x, *y))),
        (Side::Bob, [o, dx, dy]) => format!("B {o} {dx} {dy}").parse().ok(),
        _ => None,
    }
}
