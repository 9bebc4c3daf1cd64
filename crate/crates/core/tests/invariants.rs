use std::collections::HashSet;

use proptest::prelude::*;

use cannibal::animal::{transform_cells, Animal, Cell, D4Element, Placement, Rect};
use cannibal::bob::{partition_for, PairingBob};
use cannibal::engine::{decode_record, encode_record, BoardBounds, GameState, Move, Side};
use cannibal::harness::{run_match, seeded_rng, MatchConfig, RandomAlice, RandomBob};

fn d4() -> impl Strategy<Value = D4Element> {
    (0u8..8).prop_map(|i| D4Element::new(i).unwrap())
}

fn cell(r: i32) -> impl Strategy<Value = Cell> {
    (-r..=r, -r..=r).prop_map(|(x, y)| Cell::new(x, y))
}

const ANIMALS: [&str; 7] = ["R 1 1", "R 2 1", "EL", "R 2 2", "L 2", "U 2 3 1", "O 4 6 1"];

proptest! {
    #[test]
    fn d4_is_a_group(a in d4(), b in d4(), c in cell(50)) {
        prop_assert_eq!(a.compose(b).apply(c), a.apply(b.apply(c)));
        prop_assert_eq!(a.inverse().apply(a.apply(c)), c);
        prop_assert_eq!(a.is_reflection() != b.is_reflection(), a.compose(b).is_reflection());
    }

    #[test]
    fn placement_offset_is_bbox_corner(i in 0..ANIMALS.len(), g in d4(), off in cell(30)) {
        let a = Animal::parse(ANIMALS[i]).unwrap();
        let pl = Placement { orientation: g, offset: off };
        let cells = a.shape().place(pl);
        prop_assert_eq!(Rect::bounding(cells.iter().copied()).unwrap().bottom_left(), off);
        prop_assert_eq!(cells.iter().collect::<HashSet<_>>().len(), a.len());
        let mut back = transform_cells(&cells, pl.inverse());
        back.sort();
        prop_assert_eq!(back.as_slice(), a.shape().cells());
    }

    #[test]
    fn random_games_keep_engine_invariants(i in 0..ANIMALS.len(), seed in any::<u64>(), w in 3i32..8, h in 3i32..8, bounded in any::<bool>()) {
        let a = Animal::parse(ANIMALS[i]).unwrap();
        let bounds = if bounded { BoardBounds::board(w, h) } else { BoardBounds::Infinite };
        let Ok(g) = GameState::new(a.clone(), bounds) else { return Ok(()) };
        let mut g = g.with_move_budget(Some(120));
        let mut rng = seeded_rng(seed);
        let (mut alice, mut bob) = (RandomAlice::new(&a, bounds), RandomBob::new(&a, bounds));
        while !g.is_over() {
            let before = g.occupied_count();
            let mv = match g.to_move() {
                Side::Alice => Move::Alice(alice.pick(&g, &mut rng).unwrap()),
                Side::Bob => bob.pick(&g, &mut rng),
            };
            g.apply(mv).unwrap();
            let grown = g.occupied_count() - before;
            match mv {
                Move::Alice(c) => prop_assert!(grown == 1 && g.is_alice(c) && bounds.contains(c)),
                Move::Bob(pl) => {
                    prop_assert_eq!(grown, a.len());
                    prop_assert!(g.copy_cells(pl).iter().all(|&c| g.is_bob(c) && bounds.contains(c)));
                }
                Move::BobPass => prop_assert!(grown == 0 && bounded),
            }
            prop_assert_eq!(g.alice_has_won(), g.alice_has_won_full_scan());
            prop_assert_eq!(g.ply(), g.history().len());
        }
        let back = decode_record(&encode_record(&g, Some(seed))).unwrap();
        prop_assert_eq!(back.history(), g.history());
        prop_assert_eq!(back.status(), g.status());
    }

    #[test]
    fn illegal_moves_leave_state_untouched(seed in any::<u64>(), c in cell(4), g4 in d4(), off in cell(4)) {
        let a = Animal::parse("R 2 3").unwrap();
        let mut g = GameState::new(a.clone(), BoardBounds::board(5, 5)).unwrap();
        let mut rng = seeded_rng(seed);
        let mut bob = RandomBob::new(&a, g.bounds());
        g.apply_alice(Cell::new(2, 2)).unwrap();
        g.apply(bob.pick(&g, &mut rng)).unwrap();
        let snapshot = encode_record(&g, None);
        if g.apply_bob(Placement { orientation: g4, offset: off }).is_ok() {
            prop_assert!(false, "Bob moved out of turn");
        }
        if !g.is_free(c) || !g.bounds().contains(c) {
            prop_assert!(g.apply_alice(c).is_err());
            prop_assert_eq!(encode_record(&g, None), snapshot);
        }
    }

    /// Whatever Alice does near the origin, Bob's pairing answer lies in the
    /// block of her cell whenever that block is still Bob-free.
    #[test]
    fn pairing_answers_in_alice_block(i in 0..6usize, cells in prop::collection::vec(cell(12), 1..40)) {
        let d = ["O 4 6 1", "O 5 5 2", "L 2", "L 3", "U 2 3 1", "PUNCHED 5 REMOVED (2,2)"][i];
        let a = Animal::parse(d).unwrap();
        let p = partition_for(&a).unwrap();
        let mut bob = PairingBob::for_animal(&a).unwrap();
        let mut g = GameState::new(a.clone(), BoardBounds::Infinite).unwrap();
        for c in cells {
            if !g.is_free(c) {
                continue;
            }
            let block = p.block(p.block_of(c));
            let fresh = block.cells().all(|x| !g.is_bob(x));
            g.apply_alice(c).unwrap();
            prop_assert!(!g.is_over(), "Alice won against pairing on {}", d);
            let mv = bob.next_move(&g).unwrap();
            prop_assert!(bob.take_violations().is_empty());
            if let (true, Move::Bob(pl)) = (fresh, mv) {
                prop_assert!(g.copy_cells(pl).iter().all(|&x| block.contains(x)));
            }
            g.apply(mv).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn helly_keeps_a_stab_point(n in 1i32..=3, m in 1i32..=3, w in 3i32..=7, h in 3i32..=7, seed in any::<u64>()) {
        let a = Animal::parse(&format!("R {n} {m}")).unwrap();
        let bounds = BoardBounds::board(w, h);
        let cfg = MatchConfig::new("alice:bounded-helly".parse().unwrap(), "bob:random".parse().unwrap(), a, bounds);
        let Ok(r) = run_match(&cfg, seed) else { return Ok(()) };
        prop_assert!(r.is_clean(), "{:?}", r);
        prop_assert_eq!(r.winner, Some(Side::Alice));
    }
}
