//! One PASS/FAIL line per acceptance criterion.  Time limits are pinned
//! below; exact criteria have no numeric tolerance.

use std::process::Command;
use std::time::{Duration, Instant};

use artinalg::selftest::{run_criterion, SelftestConfig, TITLES};
use serde_json::Value;

const LIMITS: [u64; 10] = [5, 5, 30, 300, 600, 300, 600, 60, 60, 600];

fn artinalg(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_artinalg"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8"),
    )
}

fn json_lines(s: &str) -> Vec<Value> {
    s.lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

/// `profile --depth 3` on the cross fixture through the binary.
fn profile_via_cli() -> (bool, String) {
    let (code, out) = artinalg(&["--fixture", "cross", "profile", "--depth", "3", "--json"]);
    let rows = json_lines(&out);
    let fd = |side: &str| -> Vec<String> {
        rows.iter()
            .filter(|r| r["side"] == side)
            .map(|r| r["fd"].as_str().unwrap_or("?").to_string())
            .collect()
    };
    let (l, r) = (fd("Λ"), fd("Λ^op"));
    let want = ["1", "1", "2"];
    (
        code == 0 && l == want && r == want,
        format!("Λ {l:?}, Λ^op {r:?}"),
    )
}

/// Two full selftest runs with one seed are byte-identical, and runs at
/// p = 2 and p = 101 agree on every verdict.
fn determinism_via_cli() -> (bool, String) {
    let args = ["selftest", "--json", "--seed", "7", "--cases", "50"];
    let (c1, a) = artinalg(&args);
    let (c2, b) = artinalg(&args);
    let (c3, c) = artinalg(&[
        "selftest", "--json", "--seed", "7", "--cases", "50", "--p", "101",
    ]);
    let verdicts = |s: &str| -> Vec<(Value, Value)> {
        json_lines(s)
            .into_iter()
            .filter(|r| r.get("criterion").is_some())
            .map(|r| (r["criterion"].clone(), r["pass"].clone()))
            .collect()
    };
    let identical = a == b;
    let agree = verdicts(&a) == verdicts(&c) && verdicts(&a).len() == 10;
    let lib = run_criterion(10, &SelftestConfig::default());
    (
        identical && agree && lib.pass && c1 == 0 && c2 == 0 && c3 == 0,
        format!(
            "byte-identical {identical}, p=2/p=101 agree {agree}, fixture verdict digests {}",
            lib.detail
        ),
    )
}

fn main() {
    let cfg = SelftestConfig::default();
    let mut failed = 0;
    for id in 1..=10 {
        let start = Instant::now();
        let (pass, detail) = match id {
            1 => {
                let (a, d) = profile_via_cli();
                let b = run_criterion(1, &cfg);
                (a && b.pass, d)
            }
            10 => determinism_via_cli(),
            _ => {
                let r = run_criterion(id, &cfg);
                (r.pass, r.detail.to_string())
            }
        };
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(LIMITS[id - 1]);
        let ok = pass && in_time;
        if !ok {
            failed += 1;
        }
        let mut detail = detail;
        if detail.len() > 160 {
            detail.truncate(
                detail
                    .char_indices()
                    .take_while(|(i, _)| *i < 160)
                    .last()
                    .map_or(0, |(i, c)| i + c.len_utf8()),
            );
            detail.push_str("...");
        }
        println!(
            "{} criterion {id}: {} ({:.2}s, limit {}s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            TITLES[id - 1],
            took.as_secs_f64(),
            LIMITS[id - 1],
        );
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
