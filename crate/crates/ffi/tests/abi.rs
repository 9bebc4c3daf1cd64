use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use cannibal_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cannibal_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn game_lifecycle_and_error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(cannibal_game_new(c("R 2 1").as_ptr(), 0, 0, &mut g), CannibalStatus::Ok);
        assert_eq!(cannibal_game_play_alice(g, 0, 0), CannibalStatus::Ok);
        assert_eq!(cannibal_game_play_alice(g, 1, 0), CannibalStatus::NotYourTurn);
        assert!(last_error().contains("turn"));
        assert_eq!(cannibal_game_play_bob(g, 0, 0, 0), CannibalStatus::OverlapsOccupied);
        assert_eq!(cannibal_game_play_bob(g, 9, 5, 5), CannibalStatus::InvalidArgument);
        let pass = CannibalMove { kind: CannibalMoveKind::BobPass, x: 0, y: 0, orientation: 0 };
        assert_eq!(cannibal_game_play(g, &pass), CannibalStatus::PassNotAllowed);
        assert_eq!(cannibal_game_play_bob(g, 0, 3, 3), CannibalStatus::Ok);
        assert_eq!(last_error(), "");
        let (mut ply, mut alice) = (0u32, 0i32);
        assert_eq!(cannibal_game_progress(g, &mut ply, &mut alice), CannibalStatus::Ok);
        assert_eq!((ply, alice), (2, 1));
        assert_eq!(cannibal_game_play_alice(g, 1, 0), CannibalStatus::Ok);
        let mut status = -1;
        assert_eq!(cannibal_game_status(g, &mut status), CannibalStatus::Ok);
        assert_eq!(status, CANNIBAL_ALICE_WON);
        assert_eq!(cannibal_game_play_bob(g, 0, 8, 8), CannibalStatus::GameOver);

        let mut rec = ptr::null_mut();
        assert_eq!(cannibal_game_record(g, &mut rec), CannibalStatus::Ok);
        let text = CStr::from_ptr(rec).to_str().unwrap().to_owned();
        assert!(text.starts_with("CANNIBAL-RECORD 1"));
        cannibal_string_free(rec);
        cannibal_game_free(g);
    }
}

#[test]
fn bad_inputs() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(cannibal_game_new(ptr::null(), 3, 3, &mut g), CannibalStatus::NullPointer);
        assert_eq!(cannibal_game_new(c("nonsense").as_ptr(), 3, 3, &mut g), CannibalStatus::InvalidArgument);
        assert_eq!(cannibal_game_new(c("R 3 3").as_ptr(), 2, 2, &mut g), CannibalStatus::AnimalDoesNotFit);
        assert_eq!(cannibal_game_play_alice(ptr::null_mut(), 0, 0), CannibalStatus::NullPointer);
        assert_eq!(cannibal_game_from_record(c("garbage").as_ptr(), &mut g), CannibalStatus::BadRecord);
        assert!(g.is_null());
        assert_eq!(cannibal_choose_n(0, 1), -1);
        assert_eq!(cannibal_solve(c("R 1 1").as_ptr(), 0, 0, ptr::null_mut(), ptr::null_mut()), CannibalStatus::InvalidArgument);

        assert_eq!(cannibal_game_new(c("U 2 4 1").as_ptr(), 0, 0, &mut g), CannibalStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(cannibal_strategy_new(g, c("bob:pairing").as_ptr(), 0, &mut s), CannibalStatus::InvalidArgument);
        assert!(last_error().contains("(2,4)"));
        cannibal_game_free(g);
    }
}

#[test]
fn strategies_play_through_handles() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(cannibal_game_new(c("R 3 3").as_ptr(), 0, 0, &mut g), CannibalStatus::Ok);
        let (mut alice, mut bob) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(cannibal_strategy_new(g, c("alice:fast-square").as_ptr(), 0, &mut alice), CannibalStatus::Ok);
        assert_eq!(cannibal_strategy_new(g, c("bob:random").as_ptr(), 7, &mut bob), CannibalStatus::Ok);
        let mut status = CANNIBAL_ONGOING;
        let mut mv = CannibalMove { kind: CannibalMoveKind::BobPass, x: 0, y: 0, orientation: 0 };
        let mut alice_moves = 0;
        while status == CANNIBAL_ONGOING {
            assert_eq!(cannibal_strategy_play(alice, g, &mut mv), CannibalStatus::Ok, "{}", last_error());
            assert_eq!(mv.kind, CannibalMoveKind::Alice);
            alice_moves += 1;
            cannibal_game_status(g, &mut status);
            if status == CANNIBAL_ONGOING {
                assert_eq!(cannibal_strategy_play(bob, g, ptr::null_mut()), CannibalStatus::Ok);
            }
        }
        assert_eq!(status, CANNIBAL_ALICE_WON);
        assert!(alice_moves <= 12);
        cannibal_strategy_free(alice);
        cannibal_strategy_free(bob);
        cannibal_game_free(g);
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok_and(|o| o.status.success())
}

#[test]
fn header_is_generated_and_valid_c() {
    let header = crate_dir().join("include/cannibal.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["cannibal_game_new", "cannibal_strategy_play", "CANNIBAL_STATUS_OVERLAPS_OCCUPIED", "typedef struct CannibalGame CannibalGame"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    if !have_cc() {
        eprintln!("cc not found, skipping compile check");
        return;
    }
    let o = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

/// Links the C smoke program against the static library when cargo has
/// built it next to this test.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libcannibal_ffi.a");
    if !have_cc() || !lib.exists() {
        eprintln!("skipping: cc or {} not available", lib.display());
        return;
    }
    let out = tempfile_path("cannibal_smoke");
    let o = Command::new("cc")
        .args(["-std=c99", "-I"])
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "exit {:?}: {}", run.status.code(), String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}

fn tempfile_path(stem: &str) -> PathBuf {
    std::env::temp_dir().join(format!("{stem}-{}", std::process::id()))
}
