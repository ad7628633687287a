use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use schelling_core::report::Document;
use schelling_core::theory::{self, Curve};

use crate::config::{config_error, set, set_some, TheoryConfig};
use crate::output;

#[derive(Debug, Args)]
pub struct TheoryArgs {
    /// One of f, a, b, pu, pradical.
    #[arg(long)]
    curve: Option<String>,
    #[arg(long)]
    tau_from: Option<f64>,
    #[arg(long)]
    tau_to: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// Neighborhood size (an odd square) for the finite-N column.
    #[arg(long = "N")]
    big_n: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Added to f(tau) when choosing eps'.
    #[arg(long)]
    slack: Option<f64>,
    /// CSV output (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

impl TheoryArgs {
    fn apply(self, c: &mut TheoryConfig) {
        set!(c.curve, self.curve);
        set!(c.tau_from, self.tau_from);
        set!(c.tau_to, self.tau_to);
        set!(c.step, self.step);
        set!(c.big_n, self.big_n);
        set!(c.eps, self.eps);
        set!(c.slack, self.slack);
        set_some!(c.out, self.out);
        set_some!(c.report_out, self.report_out);
    }
}

/// Horizon `w` with `(2w+1)² = big_n`.
fn horizon(big_n: usize) -> anyhow::Result<usize> {
    let side = (big_n as f64).sqrt().round() as usize;
    if side * side != big_n || side.is_multiple_of(2) || side < 3 {
        return Err(config_error(format!("N = {big_n} is not (2w+1)² for any w >= 1")));
    }
    Ok((side - 1) / 2)
}

#[derive(Serialize)]
struct TheoryResult {
    points: usize,
    tau1: f64,
    tau2: f64,
}

pub fn execute(mut cfg: TheoryConfig, args: TheoryArgs) -> anyhow::Result<()> {
    args.apply(&mut cfg);
    let kind: Curve = cfg.curve.parse().map_err(|e: schelling_core::Error| config_error(e.to_string()))?;
    let w = horizon(cfg.big_n)?;
    let taus = theory::tau_grid(cfg.tau_from, cfg.tau_to, cfg.step)?;
    let points = theory::curve(kind, &taus, w, cfg.eps, cfg.slack)?;
    let mut csv = String::from("tau,value,finite_N_value\n");
    for p in &points {
        writeln!(csv, "{},{},{}", p.tau, p.value, p.finite_n_value).unwrap();
    }
    output::emit(cfg.out.as_deref(), &csv)?;
    let result = TheoryResult { points: points.len(), tau1: theory::tau1(), tau2: theory::tau2() };
    let (report_out, out) = (cfg.report_out.clone(), cfg.out.clone());
    output::emit_sidecar(&Document::new(cfg, 0, result), report_out.as_deref(), out.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_from_n() {
        assert_eq!(horizon(9).unwrap(), 1);
        assert_eq!(horizon(441).unwrap(), 10);
        assert!(horizon(16).is_err());
        assert!(horizon(1).is_err());
        assert!(horizon(440).is_err());
    }
}
