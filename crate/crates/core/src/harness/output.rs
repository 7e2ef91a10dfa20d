use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::metrics::{average_by_load, StabilityRecord};

use super::config::{ExperimentConfig, Prepared};
use super::runner::JobResult;
use super::HarnessError;

/// File-name stem for each policy, unique within the experiment.
pub fn policy_slugs(prep: &Prepared) -> Vec<String> {
    let base: Vec<String> = prep
        .policies
        .iter()
        .map(|p| {
            p.to_string()
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
                .collect()
        })
        .collect();
    let mut count: HashMap<&str, usize> = HashMap::new();
    for b in &base {
        *count.entry(b).or_default() += 1;
    }
    base.iter()
        .enumerate()
        .map(|(i, b)| if count[b.as_str()] > 1 { format!("{b}_{i}") } else { b.clone() })
        .collect()
}

fn stability_records(results: &[JobResult], frame_idx: usize) -> Vec<StabilityRecord> {
    results
        .iter()
        .filter(|r| r.job.frame_idx == frame_idx)
        .map(|r| StabilityRecord {
            policy: r.policy.to_string(),
            lambda: r.lambda,
            run: r.job.run,
            end_total_queue: r.output.end_total,
        })
        .collect()
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, HarnessError> {
    Ok(csv::Writer::from_path(path)?)
}

/// Writes every artifact the configuration asks for and returns their paths.
pub fn write_outputs(
    cfg: &ExperimentConfig,
    prep: &Prepared,
    results: &[JobResult],
    out_dir: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let sweep = prep.frame_lens.len() > 1;

    let path = out_dir.join("config.toml");
    fs::write(&path, cfg.to_toml_string())?;
    written.push(path);

    if cfg.output.stability {
        let path = out_dir.join(if sweep { "frame_sweep.csv" } else { "stability.csv" });
        let mut w = csv_writer(&path)?;
        if sweep {
            w.write_record(["policy", "frame_len", "lambda", "run", "end_total_queue"])?;
        } else {
            w.write_record(["policy", "lambda", "run", "end_total_queue"])?;
        }
        for r in results {
            let policy = r.policy.to_string();
            let lambda = r.lambda.to_string();
            let run = r.job.run.to_string();
            let q = r.output.end_total.to_string();
            if sweep {
                w.write_record([policy, r.frame_len.to_string(), lambda, run, q])?;
            } else {
                w.write_record([policy, lambda, run, q])?;
            }
        }
        w.flush()?;
        written.push(path);
    }

    if cfg.output.regret {
        let slugs = policy_slugs(prep);
        let multi_lambda = cfg.traffic.lambda.len() > 1;
        let mut files: Vec<((usize, usize, usize), csv::Writer<fs::File>)> = Vec::new();
        for r in results {
            let key = (r.job.policy_idx, r.job.lambda_idx, r.job.frame_idx);
            let idx = match files.iter().position(|(k, _)| *k == key) {
                Some(i) => i,
                None => {
                    let mut name = format!("regret_{}", slugs[r.job.policy_idx]);
                    if multi_lambda {
                        write!(name, "_lambda{}", r.job.lambda_idx).expect("string write");
                    }
                    if sweep {
                        write!(name, "_T{}", r.frame_len).expect("string write");
                    }
                    let path = out_dir.join(format!("{name}.csv"));
                    let mut w = csv_writer(&path)?;
                    w.write_record(["run", "frame", "t", "regret", "alpha_regret", "normalized_regret"])?;
                    written.push(path);
                    files.push((key, w));
                    files.len() - 1
                }
            };
            let w = &mut files[idx].1;
            for p in &r.output.regret {
                w.write_record([
                    r.job.run.to_string(),
                    p.frame.to_string(),
                    p.sample.t.to_string(),
                    p.sample.regret.to_string(),
                    p.sample.alpha_regret.to_string(),
                    p.sample.normalized_regret.to_string(),
                ])?;
            }
        }
        for (_, mut w) in files {
            w.flush()?;
        }
    }

    if cfg.output.queue_trace_every > 0 {
        let path = out_dir.join("queue_trace.csv");
        let mut w = csv_writer(&path)?;
        if sweep {
            w.write_record(["policy", "frame_len", "lambda", "run", "slot", "total_queue"])?;
        } else {
            w.write_record(["policy", "lambda", "run", "slot", "total_queue"])?;
        }
        for r in results {
            for &(slot, total) in &r.output.trace {
                let mut rec = vec![r.policy.to_string()];
                if sweep {
                    rec.push(r.frame_len.to_string());
                }
                rec.extend([r.lambda.to_string(), r.job.run.to_string(), slot.to_string(), total.to_string()]);
                w.write_record(rec)?;
            }
        }
        w.flush()?;
        written.push(path);
    }

    let path = out_dir.join("summary.txt");
    fs::write(&path, summary_table(cfg, prep, results))?;
    written.push(path);
    Ok(written)
}

/// Human-readable digest: mean end-of-run queue per policy and load, and the
/// mean final normalized regret when regret is recorded.
pub fn summary_table(cfg: &ExperimentConfig, prep: &Prepared, results: &[JobResult]) -> String {
    let mut s = String::new();
    writeln!(s, "experiment {} ({} runs, seed {})", cfg.name, cfg.runs, cfg.seed).expect("string write");
    for (fi, &t) in prep.frame_lens.iter().enumerate() {
        writeln!(s, "\nT = {t}, horizon = {} slots", prep.horizon(cfg, t)).expect("string write");
        writeln!(s, "{:<12} {:>10} {:>16} {:>14}", "policy", "lambda", "mean_end_queue", "max_end_queue").expect("string write");
        for row in average_by_load(&stability_records(results, fi)) {
            writeln!(
                s,
                "{:<12} {:>10.5} {:>16.1} {:>14}",
                row.policy, row.lambda, row.mean_end_total, row.max_end_total
            )
            .expect("string write");
        }
    }
    if cfg.output.regret {
        writeln!(s, "\n{:<12} {:>10} {:>8} {:>22}", "policy", "lambda", "T", "final_normalized_regret").expect("string write");
        let mut groups: Vec<((usize, usize, usize), Vec<f64>)> = Vec::new();
        for r in results {
            let key = (r.job.frame_idx, r.job.lambda_idx, r.job.policy_idx);
            let Some(last) = r.output.regret.last() else { continue };
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push(last.sample.normalized_regret),
                None => groups.push((key, vec![last.sample.normalized_regret])),
            }
        }
        for ((fi, li, pi), v) in groups {
            writeln!(
                s,
                "{:<12} {:>10.5} {:>8} {:>22.3}",
                prep.policies[pi].to_string(),
                cfg.traffic.lambda[li],
                prep.frame_lens[fi],
                v.iter().sum::<f64>() / v.len() as f64
            )
            .expect("string write");
        }
    }
    s
}
