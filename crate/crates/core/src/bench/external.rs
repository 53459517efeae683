//! Adapter for third-party solvers run as child processes.
//!
//! The command template is split on whitespace; every occurrence of `{cnf}`
//! is replaced by the path of a temporary DIMACS file. The result is read
//! from the exit code (10 satisfiable, 20 unsatisfiable) or, failing that,
//! from an `s SATISFIABLE` / `s UNSATISFIABLE` line. The decision count is
//! the first capture group of the decision pattern, searched in stdout then
//! stderr.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use regex::Regex;
use thiserror::Error;

use super::BenchError;
use crate::ref_solver::{SolveLimits, SolveStatus};
use crate::sat_core::{write_dimacs, Instance};

pub const CNF_PLACEHOLDER: &str = "{cnf}";

const POLL_INTERVAL: Duration = Duration::from_millis(2);

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("could not write the CNF file: {0}")]
    TempFile(#[source] std::io::Error),
    #[error("could not launch `{program}`: {source}")]
    Launch {
        program: String,
        #[source]
        source: std::io::Error,
    },
    #[error("waiting for `{program}` failed: {source}")]
    Wait {
        program: String,
        #[source]
        source: std::io::Error,
    },
    #[error("`{program}` exited with {code:?} and printed no result line; CNF kept at {}", cnf.display())]
    NoResult {
        program: String,
        code: Option<i32>,
        cnf: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalResult {
    pub status: SolveStatus,
    pub decisions: Option<u64>,
    /// Set when the output could not be fully interpreted.
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ExternalSolver {
    program: String,
    args: Vec<String>,
    decision_regex: Regex,
}

impl ExternalSolver {
    pub fn new(template: &str, decision_regex: &str) -> Result<ExternalSolver, BenchError> {
        let mut parts = template.split_whitespace().map(str::to_string);
        let program = parts
            .next()
            .ok_or_else(|| BenchError::BadTemplate(template.to_string()))?;
        let args: Vec<String> = parts.collect();
        if !program.contains(CNF_PLACEHOLDER) && !args.iter().any(|a| a.contains(CNF_PLACEHOLDER)) {
            return Err(BenchError::BadTemplate(template.to_string()));
        }
        Ok(ExternalSolver {
            program,
            args,
            decision_regex: Regex::new(decision_regex)?,
        })
    }

    pub fn program(&self) -> &str {
        &self.program
    }

    /// Solves `instance` in a child process. Only the wall-clock limit
    /// applies; on expiry the child is killed.
    pub fn run(
        &self,
        instance: &Instance,
        limits: SolveLimits,
    ) -> Result<ExternalResult, ExternalError> {
        let mut file = tempfile::Builder::new()
            .prefix("trisat-")
            .suffix(".cnf")
            .tempfile()
            .map_err(ExternalError::TempFile)?;
        file.write_all(write_dimacs(instance).as_bytes())
            .and_then(|_| file.flush())
            .map_err(ExternalError::TempFile)?;
        let path = file.path().to_string_lossy().into_owned();
        let args: Vec<String> = self
            .args
            .iter()
            .map(|a| a.replace(CNF_PLACEHOLDER, &path))
            .collect();

        let mut child = Command::new(&self.program)
            .args(&args)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|source| ExternalError::Launch {
                program: self.program.clone(),
                source,
            })?;
        let stdout = drain(child.stdout.take());
        let stderr = drain(child.stderr.take());

        let deadline = limits.max_wall_time.map(|t| Instant::now() + t);
        let wait_err = |source| ExternalError::Wait {
            program: self.program.clone(),
            source,
        };
        let exit = loop {
            if let Some(status) = child.try_wait().map_err(wait_err)? {
                break Some(status);
            }
            if deadline.is_some_and(|d| Instant::now() >= d) {
                let _ = child.kill();
                child.wait().map_err(wait_err)?;
                break None;
            }
            thread::sleep(POLL_INTERVAL);
        };
        let Some(exit) = exit else {
            // Readers are left detached: a grandchild may still hold the pipes.
            return Ok(ExternalResult {
                status: SolveStatus::LimitExceeded,
                decisions: None,
                note: None,
            });
        };
        let stdout = stdout.join().unwrap_or_default();
        let stderr = stderr.join().unwrap_or_default();
        let status = match exit.code() {
            Some(10) => Some(SolveStatus::Sat),
            Some(20) => Some(SolveStatus::Unsat),
            _ => status_line(&stdout),
        };
        let Some(status) = status else {
            let (_, cnf) = file.keep().map_err(|e| ExternalError::TempFile(e.error))?;
            return Err(ExternalError::NoResult {
                program: self.program.clone(),
                code: exit.code(),
                cnf,
            });
        };
        let decisions = [&stdout, &stderr].into_iter().find_map(|text| {
            self.decision_regex
                .captures(text)
                .and_then(|c| c.get(1))
                .and_then(|g| g.as_str().parse().ok())
        });
        let note = if decisions.is_none() {
            let kept = file
                .keep()
                .map(|(_, p)| format!("; CNF kept at {}", p.display()))
                .unwrap_or_default();
            Some(format!(
                "decision pattern did not match the solver output{kept}"
            ))
        } else {
            None
        };
        Ok(ExternalResult {
            status,
            decisions,
            note,
        })
    }
}

fn drain<R: Read + Send + 'static>(pipe: Option<R>) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut pipe) = pipe {
            let _ = pipe.read_to_end(&mut buf);
        }
        String::from_utf8_lossy(&buf).into_owned()
    })
}

fn status_line(output: &str) -> Option<SolveStatus> {
    output.lines().find_map(|line| match line.trim() {
        "s SATISFIABLE" => Some(SolveStatus::Sat),
        "s UNSATISFIABLE" => Some(SolveStatus::Unsat),
        _ => None,
    })
}

#[cfg(all(test, unix))]
mod tests {
    use super::*;
    use crate::sat_core::Clause;

    fn tiny() -> Instance {
        Instance::new(2, vec![Clause::from_dimacs(&[1, 2])]).unwrap()
    }

    fn sh(script: &str) -> ExternalSolver {
        // The script sees the CNF path as $0.
        let solver = ExternalSolver::new("sh -c {cnf}", r"decisions\s*:\s*(\d+)").unwrap();
        ExternalSolver {
            args: vec!["-c".into(), script.into(), CNF_PLACEHOLDER.into()],
            ..solver
        }
    }

    #[test]
    fn template_needs_placeholder() {
        assert!(matches!(
            ExternalSolver::new("minisat", "(\\d+)"),
            Err(BenchError::BadTemplate(_))
        ));
        assert!(matches!(
            ExternalSolver::new("   ", "(\\d+)"),
            Err(BenchError::BadTemplate(_))
        ));
        assert!(matches!(
            ExternalSolver::new("x {cnf}", "("),
            Err(BenchError::BadRegex(_))
        ));
    }

    #[test]
    fn exit_code_and_decisions() {
        let r = sh("echo 'c decisions: 42'; exit 10")
            .run(&tiny(), SolveLimits::unlimited())
            .unwrap();
        assert_eq!(
            r,
            ExternalResult {
                status: SolveStatus::Sat,
                decisions: Some(42),
                note: None
            }
        );
        let r = sh("echo 'decisions : 7' >&2; exit 20")
            .run(&tiny(), SolveLimits::unlimited())
            .unwrap();
        assert_eq!(r.status, SolveStatus::Unsat);
        assert_eq!(r.decisions, Some(7));
    }

    #[test]
    fn status_line_without_exit_code() {
        let r = sh("echo 's UNSATISFIABLE'; echo 'decisions: 3'")
            .run(&tiny(), SolveLimits::unlimited())
            .unwrap();
        assert_eq!(r.status, SolveStatus::Unsat);
    }

    #[test]
    fn solver_reads_the_instance() {
        let r = sh("grep -q '^p cnf 2 1$' \"$0\" && echo 'decisions: 1' && exit 10")
            .run(&tiny(), SolveLimits::unlimited())
            .unwrap();
        assert_eq!(r.status, SolveStatus::Sat);
    }

    #[test]
    fn unmatched_decisions_keep_status() {
        let r = sh("exit 10")
            .run(&tiny(), SolveLimits::unlimited())
            .unwrap();
        assert_eq!(r.status, SolveStatus::Sat);
        assert_eq!(r.decisions, None);
        let note = r.note.unwrap();
        let path = note.rsplit("kept at ").next().unwrap();
        assert!(std::path::Path::new(path).exists());
        std::fs::remove_file(path).unwrap();
    }

    #[test]
    fn no_result_is_an_error() {
        let err = sh("echo hello; exit 3")
            .run(&tiny(), SolveLimits::unlimited())
            .unwrap_err();
        match err {
            ExternalError::NoResult { code, cnf, .. } => {
                assert_eq!(code, Some(3));
                assert!(cnf.exists());
                std::fs::remove_file(cnf).unwrap();
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn missing_binary_is_a_launch_error() {
        let solver = ExternalSolver::new("/nonexistent/solver {cnf}", "(\\d+)").unwrap();
        let err = solver.run(&tiny(), SolveLimits::unlimited()).unwrap_err();
        assert!(matches!(err, ExternalError::Launch { .. }));
    }

    #[test]
    fn timeout_kills_the_child() {
        let limits = SolveLimits {
            max_decisions: None,
            max_wall_time: Some(Duration::from_millis(100)),
        };
        let start = Instant::now();
        let r = sh("sleep 20").run(&tiny(), limits).unwrap();
        assert_eq!(r.status, SolveStatus::LimitExceeded);
        assert!(start.elapsed() < Duration::from_secs(10));
    }
}
