use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use fqh_core::analysis::{
    run_avalanche, run_collision, run_reliability, run_sensitivity, AnalysisConfig, CollisionMode, MeasurementMode,
};
use fqh_core::{generate_params, HashConfig, HashParams, Measurement};
use serde::Serialize;
use serde_json::json;

use crate::args::{
    Cli, Command, GenParamsArgs, HashArgs, InstanceArgs, OutputFormat, ReliabilityArgs, ReportArgs, SensitivityArgs,
    ShapeArgs, SweepArgs,
};
use crate::error::{CliError, CliResult};
use crate::params_file;

/// Lower bound on the mean avalanche percentage checked by `avalanche --check`.
pub const AVALANCHE_CHECK_MIN_MEAN: f64 = 50.0;

/// Runs a parsed command line. Results go to `out`, diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::GenParams(a) => gen_params(&a, out, err),
        Command::Hash(a) => hash(&a, out, err),
        Command::Sensitivity(a) => sensitivity(&a, out),
        Command::Collision(a) => collision(&a, out),
        Command::Avalanche(a) => avalanche(&a, out),
        Command::Reliability(a) => reliability(&a, out),
    }
}

fn shape_config(shape: &ShapeArgs) -> HashConfig {
    HashConfig::new(shape.qpos, shape.qanc, shape.ensemble.into(), shape.dim)
}

fn instance(args: &InstanceArgs, seed: u64) -> CliResult<HashParams> {
    match &args.params {
        Some(path) => params_file::load(path),
        None => Ok(generate_params(shape_config(&args.shape), seed)?),
    }
}

fn instance_config(args: &InstanceArgs) -> CliResult<HashConfig> {
    match &args.params {
        Some(path) => Ok(*params_file::load(path)?.config()),
        None => Ok(shape_config(&args.shape)),
    }
}

fn measurement_mode(shots: u64) -> MeasurementMode {
    match shots {
        0 => MeasurementMode::Exact,
        n => MeasurementMode::Shots(n),
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Output {
        path: "<stdout>".into(),
        source,
    })
}

fn gen_params(a: &GenParamsArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let params = generate_params::<f64>(shape_config(&a.shape), a.seed)?;
    let text = params_file::to_canonical(&params);
    let summary = format!(
        "L={} params_digest={}\n",
        params.hash_len(),
        params_file::digest(&params)
    );
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            emit(out, &summary)
        }
        None => {
            emit(out, &text)?;
            emit(err, &summary)
        }
    }
}

fn hash(a: &HashArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let params = instance(&a.instance, a.seed)?;
    let message = a.message.source().load()?;
    let measurement = match a.shots {
        0 => Measurement::Exact,
        shots => Measurement::Shots { shots, seed: a.seed },
    };
    let value = fqh_core::hash_message(&message, &params, measurement)?;
    let digest = params_file::digest(&params);
    let text = match a.format {
        OutputFormat::Hex => format!("{}\n", value.hex()),
        OutputFormat::Bits => format!("{}\n", value.bit_string()),
        OutputFormat::Json => {
            let doc = json!({
                "hex": value.hex(),
                "bits": value.bit_string(),
                "L": value.len(),
                "params_digest": digest,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
    };
    if a.format != OutputFormat::Json {
        emit(err, &format!("params_digest={digest}\n"))?;
    }
    if let Some(path) = &a.out {
        write_file(path, &text)?;
    }
    emit(out, &text)
}

#[derive(Serialize)]
struct Check {
    enabled: bool,
    criterion: String,
    passed: bool,
}

/// Everything an analysis subcommand produces.
struct Outcome<R> {
    command: &'static str,
    header: serde_json::Value,
    report: R,
    csv: String,
    summary: String,
    check: Check,
}

impl<R: Serialize> Outcome<R> {
    fn finish(self, args: &ReportArgs, out: &mut dyn Write) -> CliResult<()> {
        if let Some(path) = &args.out {
            let mut doc = self.header;
            doc["command"] = json!(self.command);
            doc["report"] = serde_json::to_value(&self.report).expect("report serializes");
            doc["check"] = serde_json::to_value(&self.check).expect("check serializes");
            write_file(
                path,
                &format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")),
            )?;
        }
        if let Some(path) = &args.csv {
            write_file(path, &self.csv)?;
        }
        emit(out, &format!("{}\n", self.summary))?;
        if self.check.enabled && !self.check.passed {
            return Err(CliError::CheckFailed(self.check.criterion));
        }
        Ok(())
    }
}

fn sensitivity(a: &SensitivityArgs, out: &mut dyn Write) -> CliResult<()> {
    let params = instance(&a.instance, a.seed)?;
    let message = a.message.source().load()?;
    let report = run_sensitivity(&message, &params, a.seed)?;
    if a.report.check {
        report.require_all_conditions()?;
    }
    let mut csv = String::from("condition,hex,hamming\n");
    for (i, e) in report.entries.iter().enumerate() {
        writeln!(csv, "{},{},{}", e.condition, e.hex, report.hamming[0][i]).unwrap();
    }
    let distinct = report.all_distinct();
    let mean = report.mean_pairwise_hamming();
    let summary = format!(
        "distinct={} conditions={} inapplicable={} mean_hamming={:.1} ({:.1}%)",
        distinct,
        report.entries.len(),
        report.inapplicable.len(),
        mean,
        mean / report.hash_len as f64 * 100.0
    );
    let header = json!({
        "seed": a.seed,
        "message": message.to_string(),
        "params_digest": params_file::digest(&params),
        "all_distinct": distinct,
        "mean_pairwise_hamming": mean,
    });
    let check = Check {
        enabled: a.report.check,
        criterion: "all conditions applicable and all hashes distinct".into(),
        passed: distinct && report.inapplicable.is_empty(),
    };
    Outcome {
        command: "sensitivity",
        header,
        report,
        csv,
        summary,
        check,
    }
    .finish(&a.report, out)
}

fn collision(a: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let config = AnalysisConfig::new(instance_config(&a.instance)?, a.collision_message_bits())
        .with_measurement(measurement_mode(a.shots));
    let report = run_collision::<f64>(a.trials, &config, a.seed, CollisionMode::FlipOneBit)?;
    let mut csv = String::from("trial,collision\n");
    for r in &report.records {
        writeln!(csv, "{},{}", r.trial, r.collision as u8).unwrap();
    }
    let summary = format!("collisions={} rate={:?}", report.collisions, report.rate);
    let header = json!({ "seed": a.seed, "config": config });
    let check = Check {
        enabled: a.report.check,
        criterion: "zero collisions".into(),
        passed: report.collisions == 0,
    };
    Outcome {
        command: "collision",
        header,
        report,
        csv,
        summary,
        check,
    }
    .finish(&a.report, out)
}

fn avalanche(a: &SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let config = AnalysisConfig::new(instance_config(&a.instance)?, a.avalanche_message_bits())
        .with_measurement(measurement_mode(a.shots));
    let report = run_avalanche::<f64>(a.trials, &config, a.seed)?;
    let mut csv = String::from("trial,avalanche_pct\n");
    for r in &report.records {
        writeln!(csv, "{},{}", r.trial, r.avalanche_pct).unwrap();
    }
    let summary = format!("mean={:.1} sem={:.2} max={:.1}", report.mean, report.sem, report.max);
    let header = json!({ "seed": a.seed, "config": config });
    let check = Check {
        enabled: a.report.check,
        criterion: format!("mean avalanche >= {AVALANCHE_CHECK_MIN_MEAN}%"),
        passed: report.mean >= AVALANCHE_CHECK_MIN_MEAN,
    };
    Outcome {
        command: "avalanche",
        header,
        report,
        csv,
        summary,
        check,
    }
    .finish(&a.report, out)
}

fn reliability(a: &ReliabilityArgs, out: &mut dyn Write) -> CliResult<()> {
    let config =
        AnalysisConfig::new(instance_config(&a.instance)?, a.message_bits).with_measurement(measurement_mode(a.shots));
    let report = run_reliability::<f64>(a.messages, a.regenerations, &config, a.seed)?;
    let summary = format!(
        "reliability={:?} identical={}/{}",
        report.reliability,
        report.identical,
        report.messages * report.regenerations
    );
    let csv = format!(
        "messages,regenerations,identical,reliability\n{},{},{},{}\n",
        report.messages, report.regenerations, report.identical, report.reliability
    );
    let header = json!({ "seed": a.seed, "config": config });
    let check = Check {
        enabled: a.report.check,
        criterion: "reliability = 1".into(),
        passed: report.reliability == 1.0,
    };
    Outcome {
        command: "reliability",
        header,
        report,
        csv,
        summary,
        check,
    }
    .finish(&a.report, out)
}
