use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use endpoint_core::density::{self, grid, symmetric_grid, EndpointTable, JointDensityTable, NumericsConfig};
use endpoint_core::format::sig17;
use endpoint_core::lppsim::{self, LppConfig};
use endpoint_core::stats;
use serde::Serialize;

use crate::manifest::{sibling, Run};
use crate::{svg, verify, Failure, Level, NumericsArgs};

/// KS threshold for `lpp` to exit 0.
pub const LPP_KS_THRESHOLD: f64 = 0.08;

fn numerics_config(args: &NumericsArgs) -> Result<NumericsConfig> {
    let cfg = NumericsConfig::default()
        .with_nodes(args.nodes)
        .with_cutoff_floor(args.cutoff);
    cfg.validate()?;
    init_threads(args.threads)?;
    Ok(cfg)
}

fn init_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow!("configuring thread pool: {e}"))?;
    }
    Ok(())
}

pub fn fgoe(min: f64, max: f64, step: f64, out: &Path, want_svg: bool, args: &NumericsArgs) -> Result<(), Failure> {
    let cfg = numerics_config(args)?;
    if !(min <= max) || !(step > 0.0) {
        return Err(anyhow!("empty range: --min {min} --max {max} --step {step}").into());
    }
    let ss = grid(min, max, step).map_err(anyhow::Error::from)?;

    #[derive(Serialize)]
    struct Config {
        min: f64,
        max: f64,
        step: f64,
        numerics: NumericsConfig,
    }
    let mut run = Run::start("fgoe", Config { min, max, step, numerics: cfg })?;

    use rayon::prelude::*;
    let values: Vec<f64> = ss
        .par_iter()
        .map(|&s| density::f_goe(s, &cfg))
        .collect::<Result<_, _>>()
        .map_err(anyhow::Error::from)?;

    let mut csv = String::from("s,F_GOE\n");
    for (s, f) in ss.iter().zip(&values) {
        let _ = writeln!(csv, "{},{}", sig17(*s), sig17(*f));
    }
    run.write(out, csv.as_bytes())?;
    if want_svg {
        let pts: Vec<(f64, f64)> = ss.iter().copied().zip(values.iter().copied()).collect();
        let plot = svg::line_plot(&pts, "F_GOE(s)", "s", "F_GOE");
        run.write(&sibling(out, "svg"), plot.as_bytes())?;
    }
    run.finish(out)?;
    Ok(())
}

pub fn joint(out: &Path, step: f64, want_svg: bool, args: &NumericsArgs) -> Result<(), Failure> {
    let cfg = numerics_config(args)?;
    let ts = symmetric_grid(2.5, step).map_err(anyhow::Error::from)?;
    let ms = grid(-3.0, 1.5, step).map_err(anyhow::Error::from)?;

    #[derive(Serialize)]
    struct Config {
        t_range: (f64, f64),
        m_range: (f64, f64),
        step: f64,
        numerics: NumericsConfig,
    }
    let mut run = Run::start(
        "joint",
        Config {
            t_range: (-2.5, 2.5),
            m_range: (-3.0, 1.5),
            step,
            numerics: cfg,
        },
    )?;
    let table = JointDensityTable::compute(ts, ms, &cfg).map_err(anyhow::Error::from)?;

    let mut csv = String::with_capacity(table.values.len() * 64);
    csv.push_str("t,m,f\n");
    for (i, t) in table.t_grid.iter().enumerate() {
        for (j, m) in table.m_grid.iter().enumerate() {
            let _ = writeln!(csv, "{},{},{}", sig17(*t), sig17(*m), sig17(table.get(i, j)));
        }
    }
    run.write(out, csv.as_bytes())?;
    if want_svg {
        let plot = svg::contour_map(
            &table.t_grid,
            &table.m_grid,
            &table.values,
            "joint density f(t, m)",
            "t",
            "m",
        );
        run.write(&sibling(out, "svg"), plot.as_bytes())?;
    }
    run.finish(out)?;
    Ok(())
}

pub fn endpoint(out: &Path, half_width: f64, step: f64, want_svg: bool, args: &NumericsArgs) -> Result<(), Failure> {
    let mut cfg = numerics_config(args)?;
    if !(half_width > 0.0) || !(step > 0.0) || step > half_width {
        return Err(anyhow!("empty range: --max {half_width} --step {step}").into());
    }
    cfg.t_max = half_width;
    cfg.dt = step;
    let mut run = Run::start("endpoint", cfg)?;
    let table = EndpointTable::default_grid(&cfg).map_err(anyhow::Error::from)?;
    let summary = stats::moments(&table).map_err(anyhow::Error::from)?;

    run.write(out, endpoint_csv(&table).as_bytes())?;
    let json = serde_json::to_string_pretty(&summary)? + "\n";
    run.write(&sibling(out, "moments.json"), json.as_bytes())?;
    if want_svg {
        let pts: Vec<(f64, f64)> = table.t_grid.iter().copied().zip(table.values.iter().copied()).collect();
        let plot = svg::line_plot(&pts, "endpoint density f_end(t)", "t", "f_end");
        run.write(&sibling(out, "svg"), plot.as_bytes())?;
    }
    run.finish(out)?;
    Ok(())
}

fn endpoint_csv(table: &EndpointTable) -> String {
    let mut csv = String::from("t,f_end\n");
    for (t, f) in table.t_grid.iter().zip(&table.values) {
        let _ = writeln!(csv, "{},{}", sig17(*t), sig17(*f));
    }
    csv
}

fn read_endpoint_csv(path: &Path, cfg: NumericsConfig) -> Result<EndpointTable> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next() != Some("t,f_end") {
        bail!("{} is not an endpoint table", path.display());
    }
    let (mut ts, mut fs_) = (Vec::new(), Vec::new());
    for line in lines {
        let (t, f) = line.split_once(',').context("malformed row")?;
        ts.push(t.parse()?);
        fs_.push(f.parse()?);
    }
    Ok(EndpointTable::from_values(ts, fs_, cfg)?)
}

pub fn verify(
    level: Level,
    only: Option<&str>,
    out: Option<&Path>,
    threads: Option<usize>,
    mutate_aip_sign: bool,
) -> Result<(), Failure> {
    init_threads(threads)?;
    let mut run = Run::start("verify", level)?;
    let checks = verify::run(level, only, mutate_aip_sign, |c| println!("{c}"))?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    println!(
        "{} checks, {} passed, {} failed",
        checks.len(),
        checks.len() - failed.len(),
        failed.len()
    );
    if let Some(out) = out {
        let json = serde_json::to_string_pretty(&checks)? + "\n";
        run.write(out, json.as_bytes())?;
        run.finish(out)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join(", ")))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn lpp(
    q: f64,
    n: usize,
    samples: usize,
    seed: u64,
    out: &Path,
    c3: Option<f64>,
    want_svg: bool,
    args: &NumericsArgs,
) -> Result<(), Failure> {
    let lpp_cfg = LppConfig { q, n, samples, seed };
    lpp_cfg.validate().map_err(anyhow::Error::from)?;
    let cfg = numerics_config(args)?;

    #[derive(Serialize)]
    struct Config {
        lpp: LppConfig,
        numerics: NumericsConfig,
        c3: Option<f64>,
    }
    let mut run = Run::start("lpp", Config { lpp: lpp_cfg, numerics: cfg, c3 })?;

    // The reference table is cached next to the outputs, keyed by node count and cutoff.
    let cache = out.with_file_name(format!(
        "endpoint_reference_n{}_L{}.csv",
        cfg.nodes, cfg.cutoff_floor
    ));
    let reference = match read_endpoint_csv(&cache, cfg) {
        Ok(t) => t,
        Err(_) => {
            let t = EndpointTable::default_grid(&cfg).map_err(anyhow::Error::from)?;
            run.write(&cache, endpoint_csv(&t).as_bytes())?;
            t
        }
    };
    let reference_moments = stats::moments(&reference).map_err(anyhow::Error::from)?;

    let batch = lppsim::sample_endpoints(&lpp_cfg).map_err(anyhow::Error::from)?;
    let ks = lppsim::ks_distance(&batch, &reference).map_err(anyhow::Error::from)?;
    let m = batch.moments().map_err(anyhow::Error::from)?;

    #[derive(Serialize)]
    struct Report {
        ks: f64,
        ks_threshold: f64,
        kurtosis: f64,
        variance: f64,
        mean: f64,
        reference_kurtosis: f64,
        reference_variance: f64,
        variance_airy_units: Option<f64>,
        samples: usize,
    }
    let report = Report {
        ks,
        ks_threshold: LPP_KS_THRESHOLD,
        kurtosis: m.excess_kurtosis,
        variance: m.variance,
        mean: m.mean,
        reference_kurtosis: reference_moments.excess_kurtosis,
        reference_variance: reference_moments.variance,
        variance_airy_units: c3.map(|c| c * c * m.variance),
        samples,
    };

    let mut csv = Vec::new();
    batch.write_csv(&mut csv)?;
    run.write(out, &csv)?;
    let json = serde_json::to_string_pretty(&report)? + "\n";
    run.write(&sibling(out, "report.json"), json.as_bytes())?;
    if want_svg {
        let plot = svg::line_plot(&histogram(&batch.rescaled, 60), "rescaled endpoint histogram", "y n^(-2/3)", "density");
        run.write(&sibling(out, "svg"), plot.as_bytes())?;
    }
    run.finish(out)?;
    println!("ks = {ks:.6} (threshold {LPP_KS_THRESHOLD}), excess kurtosis = {:.4}", m.excess_kurtosis);
    if ks < LPP_KS_THRESHOLD {
        Ok(())
    } else {
        Err(Failure::Check(format!("KS distance {ks} >= {LPP_KS_THRESHOLD}")))
    }
}

/// Normalized histogram as `(bin centre, density)` points.
fn histogram(xs: &[f64], bins: usize) -> Vec<(f64, f64)> {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = ((hi - lo) / bins as f64).max(f64::MIN_POSITIVE);
    let mut counts = vec![0usize; bins];
    for &x in xs {
        let k = (((x - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let norm = xs.len() as f64 * width;
    counts
        .iter()
        .enumerate()
        .map(|(k, &c)| (lo + (k as f64 + 0.5) * width, c as f64 / norm))
        .collect()
}
