//! The solve and batch drivers.

use std::time::Instant;

use hypsolve::diffop::{exponential_right_factor, QOp};
use hypsolve::frobenius::is_regular_singular;
use hypsolve::intbasis::{gauge_search, hypergeometricsols};
use hypsolve::quotient::{find_2f1, SolveConfig, SolveError, SolveReport};

use crate::parse::parse_operator;
use crate::render::factored;
use crate::report::{Report, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Mode {
    /// Direct pullbacks first, then gauge transformations.
    #[default]
    Auto,
    /// Direct pullbacks only.
    Find2f1,
    /// Gauge transformations only.
    Gauge,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub cfg: SolveConfig,
    pub mode: Mode,
}

/// Why `l` is outside the solver's domain, if it is.
fn validate(l: &QOp) -> Option<String> {
    if l.order() != 2 {
        return Some(format!("operator has order {}; only order 2 is supported", l.order()));
    }
    if !is_regular_singular(l) {
        return Some("operator is not regular singular".into());
    }
    if let Some(u) = exponential_right_factor(l) {
        return Some(format!(
            "operator is reducible with right factor Dx - ({}); solve it with a Liouvillian (Kovacic-style) method",
            factored(&u)
        ));
    }
    None
}

fn run(l: &QOp, opts: &Options) -> Result<SolveReport, SolveError> {
    match opts.mode {
        Mode::Auto => hypergeometricsols(l, &opts.cfg),
        Mode::Find2f1 => find_2f1(l, &opts.cfg),
        Mode::Gauge => gauge_search(l, &opts.cfg),
    }
}

pub fn solve_command(text: &str, opts: &Options) -> Report {
    let start = Instant::now();
    let mut report = Report {
        status: Status::InvalidInput,
        operator: None,
        solutions: Vec::new(),
        messages: Vec::new(),
        elapsed_ms: 0,
    };
    let done = |mut r: Report| {
        r.elapsed_ms = start.elapsed().as_millis();
        r
    };
    let l = match parse_operator(text) {
        Ok(l) => l,
        Err(e) => {
            report.messages.push(e.to_string());
            return done(report);
        }
    };
    report.operator = Some(l.render());
    if let Some(why) = validate(&l) {
        report.messages.push(why);
        return done(report);
    }
    match run(&l, opts) {
        Ok(r) => {
            report.messages.extend(r.diagnostics);
            let (good, bad): (Vec<_>, Vec<_>) = r.solutions.into_iter().partition(|s| s.certified);
            if !bad.is_empty() {
                report.messages.push(format!("{} uncertified solution(s) dropped", bad.len()));
            }
            report.status = if good.is_empty() { Status::NoSolutionFound } else { Status::Solved };
            report.solutions = good;
        }
        Err(e) => {
            report.status = match e {
                SolveError::NotOrderTwo | SolveError::NotRegularSingular => Status::InvalidInput,
                SolveError::Unsupported | SolveError::DiffOp(_) => Status::Unsupported,
            };
            report.messages.push(e.to_string());
        }
    }
    done(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub solved: usize,
    pub no_solution_found: usize,
    pub unsupported: usize,
    pub invalid_input: usize,
}

impl Summary {
    pub fn add(&mut self, s: Status) {
        match s {
            Status::Solved => self.solved += 1,
            Status::NoSolutionFound => self.no_solution_found += 1,
            Status::Unsupported => self.unsupported += 1,
            Status::InvalidInput => self.invalid_input += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.solved + self.no_solution_found + self.unsupported + self.invalid_input
    }

    pub fn to_text(&self) -> String {
        format!(
            "{:<18} {:>5}\n{:<18} {:>5}\n{:<18} {:>5}\n{:<18} {:>5}\n{:<18} {:>5}\n",
            "solved", self.solved,
            "no-solution-found", self.no_solution_found,
            "unsupported", self.unsupported,
            "invalid-input", self.invalid_input,
            "total", self.total(),
        )
    }
}

/// Operator lines of a batch file with their 1-based line numbers.
pub fn batch_entries(content: &str) -> Vec<(usize, String)> {
    content
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("").trim().to_string()))
        .filter(|(_, s)| !s.is_empty())
        .collect()
}

/// Solve each entry in turn; `each` sees every report as soon as it is done.
pub fn batch_command(content: &str, opts: &Options, mut each: impl FnMut(usize, &Report)) -> Summary {
    let mut summary = Summary::default();
    for (line, text) in batch_entries(content) {
        let r = solve_command(&text, opts);
        summary.add(r.status);
        each(line, &r);
    }
    summary
}
