use std::process::Command;

use hypsolve::quotient::{verify_solution, Pullback};
use hypsolve_cli::{batch_command, parse_operator, solution_from_json, solution_json, solve_command, Mode, Options, Status};

const CORPUS: &str = include_str!("data/corpus.txt");

fn corpus() -> Vec<String> {
    hypsolve_cli::commands::batch_entries(CORPUS).into_iter().map(|(_, s)| s).collect()
}

fn with_mode(mode: Mode) -> Options {
    Options { mode, ..Options::default() }
}

#[test]
fn render_then_parse_is_identity() {
    for text in corpus() {
        let l = parse_operator(&text).unwrap();
        assert_eq!(parse_operator(&l.render()).unwrap(), l, "{}", l.render());
    }
}

#[test]
fn rational_example_solves() {
    let r = solve_command(&corpus()[0], &Options::default());
    assert_eq!(r.status, Status::Solved);
    assert_eq!(r.solutions.len(), 1);
    let v = r.to_json();
    assert_eq!(v["status"], "solved");
    assert_eq!(v["solutions"][0]["pullback"]["expr"], "4*x/(x+1)^2");
    assert_eq!(v["solutions"][0]["params"], serde_json::json!(["5/42", "11/42", "2/3"]));
    assert!(r.to_text().contains("(x+1)^(-5/21) * 2F1(5/42, 11/42; 2/3; 4*x/(x+1)^2)"));
}

#[test]
fn gauge_example_needs_auto_mode() {
    let text = &corpus()[2];
    let direct = solve_command(text, &with_mode(Mode::Find2f1));
    assert_eq!(direct.status, Status::NoSolutionFound);
    assert!(direct.solutions.is_empty());
    let auto = solve_command(text, &Options::default());
    assert_eq!(auto.status, Status::Solved);
    assert!(!auto.to_json()["solutions"][0]["gauge"].is_null());
    let gauge = solve_command(text, &with_mode(Mode::Gauge));
    assert_eq!(gauge.status, Status::Solved);
}

#[test]
fn json_round_trip_recertifies() {
    for text in corpus() {
        let l = parse_operator(&text).unwrap();
        let r = solve_command(&text, &Options::default());
        assert_eq!(r.status, Status::Solved, "{text}");
        for s in &r.solutions {
            let v: serde_json::Value = serde_json::from_str(&solution_json(s).to_string()).unwrap();
            let back = solution_from_json(&v).unwrap();
            assert_eq!(back.params, s.params);
            assert_eq!(back.gauge, s.gauge);
            if let (Pullback::Rational(a), Pullback::Rational(b)) = (&back.pullback, &s.pullback) {
                assert_eq!(a, b);
            }
            assert!(verify_solution(&l, &back), "{text}");
        }
    }
}

#[test]
fn validation_statuses() {
    let o = Options::default();
    assert_eq!(solve_command("x*Dx^2 - 1", &o).status, Status::InvalidInput);
    assert_eq!(solve_command("x^2*Dx^2 - 2", &o).status, Status::InvalidInput);
    assert_eq!(solve_command("x*Dx + 1", &o).status, Status::InvalidInput);
    assert_eq!(solve_command("Dx^3", &o).status, Status::InvalidInput);
    let r = solve_command("Dx^2 + (x", &o);
    assert_eq!(r.status, Status::InvalidInput);
    assert!(r.messages[0].contains("column"));
}

#[test]
fn batch_counts_and_isolation() {
    let mut lines = Vec::new();
    let s = batch_command(CORPUS, &Options::default(), |l, r| lines.push((l, r.status)));
    assert_eq!(s.solved, 3);
    assert_eq!(lines.iter().map(|p| p.0).collect::<Vec<_>>(), vec![2, 4, 6]);

    let s = batch_command("", &Options::default(), |_, _| panic!("no entries"));
    assert_eq!(s.total(), 0);

    let mixed = format!("{}\nDx^2 + * x\n# note\n\nx^2*Dx^2 + x*Dx - 1/4 # comment\n", corpus()[0]);
    let mut seen = Vec::new();
    let s = batch_command(&mixed, &Options::default(), |l, r| seen.push((l, r.status)));
    assert_eq!(s.total(), 3);
    assert_eq!(s.invalid_input, 2);
    assert_eq!(seen[0], (1, Status::Solved));
    assert_eq!(seen[1], (2, Status::InvalidInput));
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hypsolve")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn exit_codes_match_status() {
    let (code, out) = run(&["solve", &corpus()[0], "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "solved");

    let (code, out) = run(&["solve", &corpus()[2], "--mode", "find2f1"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("status: no-solution-found"));

    assert_eq!(run(&["solve", "x*Dx^2 - 1"]).0, 3);
    assert_eq!(run(&["solve", "Dx^2", "--prime", "4100"]).0, 3);

    let dir = std::env::temp_dir().join(format!("hypsolve-batch-{}", std::process::id()));
    std::fs::write(&dir, format!("{}\nnot an operator\n", corpus()[0])).unwrap();
    let (code, out) = run(&["batch", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).unwrap();
    assert_eq!(code, 3);
    assert!(out.contains("line 1: solved"));
    assert!(out.contains("line 2: invalid-input"));
}
