use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;

use schelling_core::report::Document;
use schelling_core::stats::{self, Conditioning};

use crate::config::{config_error, set, set_some, StatsConfig};
use crate::output;

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// prop1, lemma-a1, pu-match or fig2-trend.
    test: Option<String>,
    /// Neighborhood size for prop1 and lemma-a1.
    #[arg(long = "N")]
    big_n: Option<usize>,
    /// Sub-neighborhood fraction for prop1.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Pass floor for the observed frequency.
    #[arg(long)]
    floor: Option<f64>,
    /// rejection or exact (prop1).
    #[arg(long)]
    conditioning: Option<String>,
    /// Draw budget of rejection sampling.
    #[arg(long)]
    max_draws: Option<u64>,
    /// Grid side for pu-match.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    sigmas: Option<f64>,
    /// Sweep CSV for fig2-trend.
    #[arg(long)]
    csv_in: Option<PathBuf>,
    /// Significance level for fig2-trend.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

impl StatsArgs {
    fn apply(self, c: &mut StatsConfig) {
        set!(c.test, self.test);
        set!(c.big_n, self.big_n);
        set!(c.gamma, self.gamma);
        set!(c.tau, self.tau);
        set!(c.c, self.c);
        set!(c.eps, self.eps);
        set!(c.samples, self.samples);
        set!(c.seed, self.seed);
        set_some!(c.floor, self.floor);
        set!(c.conditioning, self.conditioning);
        set!(c.max_draws, self.max_draws);
        set!(c.n, self.n);
        set!(c.w, self.w);
        set!(c.sigmas, self.sigmas);
        set_some!(c.csv_in, self.csv_in);
        set!(c.alpha, self.alpha);
        set_some!(c.report_out, self.report_out);
    }
}

/// `tau_tilde` and `mean_M` columns of a sweep CSV.
fn read_trend(path: &Path) -> anyhow::Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let col = |name: &str| {
        header.iter().position(|h| *h == name).ok_or_else(|| config_error(format!("{} has no {name} column", path.display())))
    };
    let (ti, mi) = (col("tau_tilde")?, col("mean_M")?);
    let (mut taus, mut ms) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.is_empty()) {
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |j: usize| {
            fields.get(j).and_then(|f| f.parse::<f64>().ok()).ok_or_else(|| {
                config_error(format!("{} line {}: bad numeric field", path.display(), i + 2))
            })
        };
        taus.push(parse(ti)?);
        ms.push(parse(mi)?);
    }
    Ok((taus, ms))
}

pub fn execute(mut cfg: StatsConfig, args: StatsArgs) -> anyhow::Result<()> {
    args.apply(&mut cfg);
    let report = match cfg.test.as_str() {
        "prop1" => {
            let conditioning = match cfg.conditioning.as_str() {
                "rejection" => Conditioning::Rejection { max_draws: cfg.max_draws },
                "exact" => Conditioning::Exact,
                other => return Err(config_error(format!("unknown conditioning {other:?}"))),
            };
            let floor = *cfg.floor.get_or_insert(0.99);
            stats::prop1_test(cfg.big_n, cfg.gamma, cfg.tau, cfg.c, cfg.eps, cfg.samples, cfg.seed, conditioning, floor)?
        }
        "lemma-a1" => {
            let floor = *cfg.floor.get_or_insert(0.999);
            stats::lemma_a1_test(cfg.big_n, cfg.c, cfg.eps, cfg.samples, cfg.seed, floor)
        }
        "pu-match" => stats::pu_match_test(cfg.n, cfg.w, cfg.tau, cfg.seed, cfg.sigmas)?,
        "fig2-trend" => {
            let path = cfg.csv_in.as_ref().ok_or_else(|| config_error("fig2-trend needs --csv-in"))?;
            let (taus, ms) = read_trend(path)?;
            stats::fig2_trend_test(&taus, &ms, cfg.alpha)?
        }
        other => return Err(config_error(format!("unknown test {other:?}"))),
    };
    let seed = cfg.seed;
    let out = cfg.report_out.clone();
    output::emit(out.as_deref(), &Document::new(cfg, seed, report).to_json())
}
