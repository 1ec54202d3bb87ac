//! `hermite-mixnorm`: runs the verification suites and the probe experiments,
//! writing JSON reports and CSV tables.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hermite_mixnorm::analysis::{apply_spectral, operator_norm_probe, riesz_conjecture_window, riesz_scan};
use hermite_mixnorm::operators::{check_multiplier_condition, MultiplierSpec};
use hermite_mixnorm::suites::{gfun_summary, probe_trials, riesz_trials, run_suite_timed};
use hermite_mixnorm::{Error, RunConfig, Suite};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "hermite-mixnorm",
    version,
    about = "Numerical checks for Hermite expansions in mixed norm spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write report.json.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
    /// Lower bounds for the Riesz means S_R^delta over a (delta, p, R) grid.
    RieszScan {
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.0])]
        delta: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.5, 2.0, 4.0])]
        p: Vec<f64>,
        #[arg(long = "radius", value_delimiter = ',', default_values_t = [4.0, 8.0, 16.0, 32.0, 64.0, 128.0])]
        radii: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Difference condition and norm probes for a multiplier from a TOML or JSON file.
    Multiplier {
        /// File holding `n`, `family` and the family's parameters.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [2.0, 4.0])]
        p: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        k_scan: usize,
        #[arg(long, default_value_t = 4)]
        j_max: usize,
        /// Highest level of the probe trial functions.
        #[arg(long, default_value_t = 24)]
        probe_levels: usize,
        /// Exit 1 when the difference condition fails.
        #[arg(long)]
        require_condition: bool,
        #[command(flatten)]
        common: Common,
    },
    /// L2 ratio and mixed-norm brackets of g_k.
    Gfun {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1.5, 3.0])]
        p: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        functions: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Tolerance for the error-type checks.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    radial_nodes: Option<usize>,
    #[arg(long)]
    sphere_order: Option<usize>,
    /// TOML file with `RunConfig` keys; its values take precedence over flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Failure kinds mapped to exit codes.
enum Fail {
    Usage(String),
    Checks(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Usage(e.to_string())
    }
}

impl Common {
    fn config(&self) -> Result<RunConfig, Fail> {
        let mut cfg = RunConfig::default();
        if self.n.is_some() {
            cfg.n = self.n;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.tol.is_some() {
            cfg.tol = self.tol;
        }
        if let Some(v) = self.m_max {
            cfg.m_max = v;
        }
        if let Some(v) = self.k_max {
            cfg.k_max = v;
        }
        if let Some(v) = self.radial_nodes {
            cfg.radial_nodes = v;
        }
        if let Some(v) = self.sphere_order {
            cfg.sphere_order = v;
        }
        if let Some(path) = &self.config {
            cfg = merge_config_file(&cfg, path)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn out_file(&self, name: &str) -> Result<PathBuf, Fail> {
        fs::create_dir_all(&self.out).map_err(|e| Fail::Usage(format!("cannot create {}: {e}", self.out.display())))?;
        Ok(self.out.join(name))
    }
}

fn merge_config_file(cfg: &RunConfig, path: &Path) -> Result<RunConfig, Fail> {
    let bad = |e: String| Fail::Usage(format!("{}: {e}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let file: toml::Table = toml::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let mut merged = toml::Table::try_from(cfg).map_err(|e| bad(e.to_string()))?;
    merged.extend(file);
    merged.try_into().map_err(|e: toml::de::Error| bad(e.to_string()))
}

fn write(path: &Path, contents: &str) -> Result<(), Fail> {
    fs::write(path, contents).map_err(|e| Fail::Usage(format!("cannot write {}: {e}", path.display())))
}

fn json_string<T: serde::Serialize>(v: &T) -> Result<String, Fail> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Fail::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, Fail> {
    csv::Writer::from_path(path).map_err(|e| Fail::Usage(format!("cannot write {}: {e}", path.display())))
}

fn csv_err(e: csv::Error) -> Fail {
    Fail::Usage(e.to_string())
}

fn verify(suite: Suite, common: &Common) -> Result<(), Fail> {
    let cfg = common.config()?;
    let (report, timings) = run_suite_timed(suite, &cfg)?;
    let path = common.out_file("report.json")?;
    write(&path, &report.to_json()?)?;
    for (s, d) in &timings {
        eprintln!("timing {s} {:.3}", d.as_secs_f64());
    }
    for c in &report.checks {
        eprintln!("{} {}", if c.pass { "pass" } else { "FAIL" }, c.id);
    }
    let failed = report.failures().count();
    if failed > 0 {
        return Err(Fail::Checks(format!(
            "{failed} of {} checks failed; see {}",
            report.checks.len(),
            path.display()
        )));
    }
    eprintln!("{} checks passed; report in {}", report.checks.len(), path.display());
    Ok(())
}

fn check_list(name: &str, v: &[f64], ok: impl Fn(f64) -> bool) -> Result<(), Fail> {
    if v.is_empty() {
        return Err(Fail::Usage(format!("--{name} needs at least one value")));
    }
    if let Some(bad) = v.iter().find(|x| !ok(**x)) {
        return Err(Fail::Usage(format!("--{name} value {bad} out of range")));
    }
    Ok(())
}

fn riesz_cmd(deltas: &[f64], ps: &[f64], radii: &[f64], common: &Common) -> Result<(), Fail> {
    check_list("delta", deltas, |d| d >= 0.0 && d.is_finite())?;
    check_list("p", ps, |p| p >= 1.0 && p.is_finite())?;
    check_list("radius", radii, |r| r > 0.0 && r.is_finite())?;
    let cfg = common.config()?;
    let n = cfg.n.unwrap_or(2);
    let trials = riesz_trials(&cfg, n, radii)?;
    let rows = riesz_scan(&trials, deltas, ps, radii)?;
    let path = common.out_file("riesz_scan.csv")?;
    let mut w = csv_writer(&path)?;
    w.write_record(["n", "delta", "p", "R", "norm_lower_bound", "trial_id_of_max"])
        .map_err(csv_err)?;
    for r in &rows {
        w.write_record([
            r.n.to_string(),
            r.delta.to_string(),
            r.p.to_string(),
            r.radius.to_string(),
            r.norm_lower_bound.to_string(),
            r.trial_id.clone(),
        ])
        .map_err(csv_err)?;
    }
    // window rows: p holds the boundary, R and the bound are empty
    for &d in deltas {
        let (lo, hi) = riesz_conjecture_window(n, d);
        for (p, tag) in [(lo, "conjecture_window_lower"), (hi, "conjecture_window_upper")] {
            w.write_record([
                n.to_string(),
                d.to_string(),
                p.to_string(),
                String::new(),
                String::new(),
                tag.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| Fail::Usage(e.to_string()))?;
    eprintln!("{} rows from {} trials; table in {}", rows.len(), trials.len(), path.display());
    Ok(())
}

fn read_spec(path: &Path) -> Result<MultiplierSpec, Fail> {
    let bad = |e: String| Fail::Usage(format!("{}: {e}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| bad(e.to_string()))
    } else {
        toml::from_str(&text).map_err(|e| bad(e.to_string()))
    }
}

struct MultiplierArgs<'a> {
    spec: &'a Path,
    ps: &'a [f64],
    k_scan: usize,
    j_max: usize,
    probe_levels: usize,
    require_condition: bool,
}

fn multiplier_cmd(a: MultiplierArgs<'_>, common: &Common) -> Result<(), Fail> {
    check_list("p", a.ps, |p| p >= 1.0 && p.is_finite())?;
    let spec = read_spec(a.spec)?;
    let cfg = common.config()?;
    if cfg.n.is_some_and(|n| n != spec.n) {
        return Err(Fail::Usage(format!("--n disagrees with the spec file (n = {})", spec.n)));
    }
    if !(2..=3).contains(&spec.n) {
        return Err(Fail::Usage(format!("probes support n = 2 or 3, spec has n = {}", spec.n)));
    }
    let cond = check_multiplier_condition(&spec, a.k_scan, a.j_max, None)?;
    let trials = probe_trials(&cfg, spec.n, a.probe_levels)?;
    let probes =
        a.ps.iter()
            .map(|&p| operator_norm_probe(|t| apply_spectral(&spec, t), p, &trials))
            .collect::<Result<Vec<_>, _>>()?;

    let csv_path = common.out_file("multiplier_probes.csv")?;
    let mut w = csv_writer(&csv_path)?;
    w.write_record(["p", "trial_id", "ratio"]).map_err(csv_err)?;
    for pr in &probes {
        for (id, r) in &pr.ratios {
            w.write_record([pr.p.to_string(), id.clone(), r.to_string()]).map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| Fail::Usage(e.to_string()))?;

    let summary = json!({
        "version": hermite_mixnorm::report::REPORT_VERSION,
        "spec": spec,
        "config_echo": cfg,
        "condition": cond,
        "probes": probes.iter().map(|p| json!({"p": p.p, "max_ratio": p.max_ratio, "argmax": p.argmax})).collect::<Vec<_>>(),
    });
    let path = common.out_file("multiplier.json")?;
    write(&path, &json_string(&summary)?)?;
    for pr in &probes {
        eprintln!("p = {}: max ratio {} ({})", pr.p, pr.max_ratio, pr.argmax);
    }
    eprintln!("condition constants {:?}, failed orders {:?}", cond.constants, cond.failed_orders);
    if a.require_condition && !cond.pass {
        return Err(Fail::Checks(format!(
            "difference condition fails at orders {:?}",
            cond.failed_orders
        )));
    }
    Ok(())
}

fn gfun_cmd(k: usize, ps: &[f64], functions: usize, common: &Common) -> Result<(), Fail> {
    if k == 0 {
        return Err(Fail::Usage("--k must be at least 1".into()));
    }
    if !ps.is_empty() {
        check_list("p", ps, |p| p >= 1.0 && p.is_finite())?;
    }
    let cfg = common.config()?;
    let dims = match cfg.n {
        Some(n @ (2 | 3)) => vec![n],
        Some(n) => return Err(Fail::Usage(format!("gfun supports n = 2 or 3, got {n}"))),
        None => vec![2, 3],
    };
    let summaries = dims
        .iter()
        .map(|&n| gfun_summary(&cfg, n, k, ps, functions))
        .collect::<Result<Vec<_>, _>>()?;
    let path = common.out_file("gfun.json")?;
    let out = json!({"version": hermite_mixnorm::report::REPORT_VERSION, "config_echo": cfg, "results": summaries});
    write(&path, &json_string(&out)?)?;
    for s in &summaries {
        eprintln!(
            "n = {}: ||g_{k} f||/||f|| in [{}, {}], constant {}",
            s.n, s.l2_ratio_min, s.l2_ratio_max, s.constant
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Verify { suite, common } => verify(*suite, common),
        Command::RieszScan { delta, p, radii, common } => riesz_cmd(delta, p, radii, common),
        Command::Multiplier {
            spec,
            p,
            k_scan,
            j_max,
            probe_levels,
            require_condition,
            common,
        } => multiplier_cmd(
            MultiplierArgs {
                spec,
                ps: p,
                k_scan: *k_scan,
                j_max: *j_max,
                probe_levels: *probe_levels,
                require_condition: *require_condition,
            },
            common,
        ),
        Command::Gfun { k, p, functions, common } => gfun_cmd(*k, p, *functions, common),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Checks(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
