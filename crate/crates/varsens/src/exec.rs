//! External models: a shell command reads design rows as CSV on stdin and
//! writes one response per line on stdout.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;

use varsens_core::Matrix;

use crate::error::{CliError, Result};
use crate::io::{matrix_csv, parse_float};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalModel {
    pub command: String,
    /// Number of processes the rows are split across.
    pub jobs: usize,
}

impl ExternalModel {
    pub fn new(command: impl Into<String>, jobs: usize) -> Self {
        Self { command: command.into(), jobs: jobs.max(1) }
    }

    /// Responses for every row of `x`, in row order.
    pub fn evaluate(&self, names: &[String], x: &Matrix) -> Result<Vec<f64>> {
        let n = x.rows();
        if n == 0 {
            return Ok(Vec::new());
        }
        let jobs = self.jobs.min(n);
        let chunk = n.div_ceil(jobs);
        let parts: Vec<(usize, Matrix)> = (0..n)
            .step_by(chunk)
            .map(|start| {
                let rows: Vec<usize> = (start..(start + chunk).min(n)).collect();
                let cols: Vec<usize> = (0..x.cols()).collect();
                (start, x.select(&rows, &cols))
            })
            .collect();
        if parts.len() == 1 {
            return self.run_chunk(names, &parts[0].1, 0);
        }
        let results: Vec<Result<Vec<f64>>> = thread::scope(|s| {
            let handles: Vec<_> =
                parts.iter().map(|(start, part)| s.spawn(move || self.run_chunk(names, part, *start))).collect();
            handles.into_iter().map(|h| h.join().expect("evaluation thread panicked")).collect()
        });
        let mut y = Vec::with_capacity(n);
        for r in results {
            y.extend(r?);
        }
        Ok(y)
    }

    fn run_chunk(&self, names: &[String], x: &Matrix, first_row: usize) -> Result<Vec<f64>> {
        let input = matrix_csv(names, x);
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| CliError::External(format!("cannot start `{}`: {e}", self.command)))?;
        let mut stdin = child.stdin.take().expect("stdin is piped");
        let mut stdout = child.stdout.take().expect("stdout is piped");
        let (write, output) = thread::scope(|s| {
            // a command that never reads its input gets a broken pipe; its
            // exit status and output decide the outcome
            let writer = s.spawn(move || stdin.write_all(&input));
            let mut out = String::new();
            let read = stdout.read_to_string(&mut out).map(|_| out);
            (writer.join().expect("writer thread panicked"), read)
        });
        let status = child.wait().map_err(|e| CliError::External(format!("`{}`: {e}", self.command)))?;
        if !status.success() {
            return Err(CliError::External(format!("`{}` exited with {status}", self.command)));
        }
        if let Err(e) = write {
            if e.kind() != std::io::ErrorKind::BrokenPipe {
                return Err(CliError::External(format!("writing to `{}`: {e}", self.command)));
            }
        }
        let output = output.map_err(|e| CliError::External(format!("reading from `{}`: {e}", self.command)))?;
        parse_output(&output, x.rows(), first_row)
    }
}

fn parse_output(text: &str, expected: usize, first_row: usize) -> Result<Vec<f64>> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() != expected {
        return Err(CliError::External(format!(
            "expected {expected} responses for rows {}..{}, got {}",
            first_row + 1,
            first_row + expected,
            lines.len()
        )));
    }
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| match parse_float(l) {
            Some(v) if v.is_finite() => Ok(v),
            _ => Err(CliError::External(format!("row {}: malformed response `{}`", first_row + i + 1, l.trim()))),
        })
        .collect()
}
