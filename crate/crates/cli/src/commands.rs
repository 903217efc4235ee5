use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use snbkit_core::{GraphSnapshot, QueryTemplateId};
use snbkit_curation::{curate_all, parameter_set, read_parameter_files, write_parameter_files, ParamFormat, PARAMS_DIR};
use snbkit_datagen::{compute_stats, generate, preset_persons, GenError, GeneratorConfig};
use snbkit_driver::{
    build_schedule, check_validity, frequencies_for, read_results_log, read_validation_set, run, validate_mode, validation_set,
    write_results_log, write_summary, write_validation_set, InProcessConnector, ValidityReport, WorkloadDefinition, RESULTS_LOG,
};
use snbkit_serializers::{load_dataset, read_streams, write_dataset, write_streams, CsvVariant, SerializeError, ROOT_DIR};

use crate::{Cli, Command};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_IO: u8 = 3;

/// A request that cannot be carried out as given.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() || matches!(e.downcast_ref::<GenError>(), Some(GenError::InvalidConfig(_))) {
        EXIT_USAGE
    } else if matches!(e.downcast_ref::<SerializeError>(), Some(SerializeError::Schema(_))) {
        EXIT_INVALID
    } else {
        EXIT_IO
    }
}

pub fn dispatch(cli: Cli) -> Result<u8> {
    let dir = cli.dir;
    match cli.command {
        Command::Generate { persons, scale, seed, dataset, workers, parts, params, delete_fraction, json_params } => {
            let num_persons = match persons {
                Some(n) => n,
                None => preset_persons(&scale)
                    .or_else(|| scale.parse().ok())
                    .ok_or_else(|| usage(format!("unknown scale {scale:?}")))?,
            };
            let cfg = GeneratorConfig { workers, delete_fraction, ..GeneratorConfig::with_persons(num_persons, seed) };
            generate_cmd(&dir, &cfg, dataset.format, parts, params, format_of(json_params))
        }
        Command::Curate { dataset, params, seed, json_params } => {
            let g = load(&dir, dataset.format)?;
            write_params(&dir, &g, &compute_stats(&g), params, seed, format_of(json_params))?;
            Ok(EXIT_OK)
        }
        Command::Write { dataset, to, out, parts } => {
            let g = load(&dir, dataset.format)?;
            let manifest = write_dataset(&g, to, &out, parts)?;
            println!("wrote {} files to {}", manifest.files.len(), out.display());
            Ok(EXIT_OK)
        }
        Command::Load { dataset } => {
            let g = load(&dir, dataset.format)?;
            print_counts(&g);
            Ok(EXIT_OK)
        }
        Command::Validate { dataset, set, create } => {
            let g = load(&dir, dataset.format)?;
            let path = set.unwrap_or_else(|| dir.join("validation").join("validation_set.jsonl"));
            if create || !path.exists() {
                let params = read_parameter_files(&dir)?;
                let queries: Vec<_> = params.into_values().flatten().collect();
                let records = validation_set(&g, &queries);
                if let Some(parent) = path.parent() {
                    fs::create_dir_all(parent).with_context(|| parent.display().to_string())?;
                }
                write_validation_set(&path, &records)?;
                println!("wrote {} expected results to {}", records.len(), path.display());
            }
            let records = read_validation_set(&path)?;
            let mismatches = validate_mode(&InProcessConnector::new(g), &records);
            for m in &mismatches {
                println!("{m}");
            }
            println!("{} of {} results match", records.len() - mismatches.len(), records.len());
            Ok(if mismatches.is_empty() { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Run { dataset, tcr, threads, seed, frequencies, warmup_ops, min_sim_span, results_dir } => {
            let frequencies = frequencies_for(&frequencies).ok_or_else(|| usage(format!("unknown frequency row {frequencies:?}")))?;
            let g = load(&dir, dataset.format)?;
            let streams = read_streams(&dir)?;
            let span = streams.properties.end_time - streams.properties.start_time;
            if let Some(min) = min_sim_span.filter(|m| span < *m) {
                eprintln!("warning: update stream spans {span} ms of simulation time, below {min} ms");
            }
            let params = read_parameter_files(&dir)?;
            let wd = WorkloadDefinition {
                frequencies,
                tcr,
                seed,
                update_interleave_ms: streams.properties.update_interleave,
                warmup_ops,
                ..WorkloadDefinition::default()
            };
            wd.validate().map_err(|e| usage(e.to_string()))?;
            let schedule = build_schedule(&streams.updates, &params, &wd)?;
            println!("running {} scheduled operations", schedule.len());
            let log = run(&schedule, &InProcessConnector::new(g), &wd, threads);
            let out = results_dir.unwrap_or_else(|| dir.join("results"));
            write_results_log(&out, &log)?;
            let report = check_validity(&log.scored(warmup_ops));
            write_summary(&out, &report)?;
            Ok(print_report(&report))
        }
        Command::Report { results_dir, warmup_ops } => {
            let out = results_dir.unwrap_or_else(|| dir.join("results"));
            let log = read_results_log(&out.join(RESULTS_LOG))?;
            Ok(print_report(&check_validity(&log.scored(warmup_ops))))
        }
    }
}

fn format_of(json: bool) -> ParamFormat {
    if json {
        ParamFormat::Json
    } else {
        ParamFormat::Pipe
    }
}

fn load(dir: &Path, variant: CsvVariant) -> Result<GraphSnapshot> {
    load_dataset(dir, variant).with_context(|| format!("loading {variant} dataset from {}", dir.display()))
}

/// Removes outputs of an earlier run so that stale part files do not linger.
fn clear(dir: &Path, sub: &str) -> Result<()> {
    let p: PathBuf = dir.join(sub);
    if p.is_dir() {
        fs::remove_dir_all(&p).with_context(|| format!("clearing {}", p.display()))?;
    }
    Ok(())
}

fn generate_cmd(dir: &Path, cfg: &GeneratorConfig, variant: CsvVariant, parts: usize, n: usize, format: ParamFormat) -> Result<u8> {
    let data = generate(cfg)?;
    clear(dir, ROOT_DIR)?;
    clear(dir, PARAMS_DIR)?;
    let dataset = write_dataset(&data.snapshot, variant, dir, parts)?;
    let streams = write_streams(dir, &data.snapshot, &data.updates, &data.deletes)?;
    println!("wrote {} {variant} files and {} stream files", dataset.files.len(), streams.files.len());
    write_params(dir, &data.snapshot, &data.stats, n, cfg.seed, format)?;
    Ok(EXIT_OK)
}

fn write_params(dir: &Path, g: &GraphSnapshot, stats: &snbkit_datagen::CurationStats, n: usize, seed: u64, format: ParamFormat) -> Result<()> {
    let curated = curate_all(g, stats, &QueryTemplateId::curated(), n, seed)?;
    for c in curated.iter().filter(|c| c.widened()) {
        eprintln!("note: {} bindings span a cost band of {:.2}", c.template, c.band);
    }
    let files = write_parameter_files(&parameter_set(&curated), dir, format)?;
    println!("wrote {} parameter files", files.len());
    Ok(())
}

fn print_counts(g: &GraphSnapshot) {
    let e = g.edges();
    println!("persons {}", g.persons().len());
    println!("forums {}", g.forums().len());
    println!("messages {}", g.messages().len());
    println!("knows {}", e.knows.len());
    println!("likes {}", e.likes.len());
    println!("members {}", e.members.len());
}

fn print_report(report: &ValidityReport) -> u8 {
    // A closed pipe on stdout must not turn the verdict into a panic.
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(report).expect("report serializes"));
    if report.valid {
        EXIT_OK
    } else {
        eprintln!(
            "run is not valid: {:.1}% of operations started on time, {:.0}% required",
            report.on_time_fraction * 100.0,
            snbkit_driver::ON_TIME_SHARE * 100.0
        );
        EXIT_INVALID
    }
}
