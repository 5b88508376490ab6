use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use docdup_core::{DetectorConfig, IngestOptions, SeparatorSet, Threshold};

use docdup::pipeline::{self, PipelineConfig};
use docdup::{emit, DocdupError, Format};

#[derive(Debug, Parser)]
#[command(name = "docdup", version, about = "Find exact and near-duplicate text in documentation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect duplicate groups in one or more text files.
    Detect(DetectArgs),
}

#[derive(Debug, clap::Args)]
struct DetectArgs {
    /// Input files (UTF-8 text).
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    /// Minimum exact duplicate length in tokens.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    min_tokens: u64,
    /// Minimum number of occurrences per exact group.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    min_group: u64,
    /// Allowed share of variable text, as p/q.
    #[arg(long, default_value = "3/20")]
    threshold: Threshold,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Blank out markup tags before tokenizing (coordinates are preserved).
    #[arg(long)]
    strip_markup: bool,
    /// Punctuation symbols that separate tokens, replacing the default set.
    /// Whitespace always separates.
    #[arg(long)]
    separators: Option<String>,
    /// Write one report per input into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let Command::Detect(args) = cli.command;
    ExitCode::from(detect(args) as u8)
}

fn detect(args: DetectArgs) -> i32 {
    let config = PipelineConfig {
        ingest: IngestOptions {
            strip_markup: args.strip_markup,
            separators: args.separators.as_deref().map(SeparatorSet::with_punctuation).unwrap_or_default(),
        },
        detector: DetectorConfig::new(args.min_tokens as usize, args.min_group as usize),
        threshold: args.threshold,
    };
    if let Some(dir) = &args.out {
        if let Err(source) = fs::create_dir_all(dir) {
            return report_error(&DocdupError::Write { path: dir.clone(), source });
        }
    }

    let results = pipeline::run(&args.paths, &config, pipeline::threads_from_env());
    let mut used_names = BTreeSet::new();
    let mut status = 0;
    let stdout = io::stdout();
    for (path, result) in args.paths.iter().zip(results) {
        let outcome = result.and_then(|(doc, report)| {
            let bytes = emit(&report, args.format, &doc);
            match &args.out {
                Some(dir) => {
                    let target = dir.join(output_name(path, args.format, &mut used_names));
                    fs::write(&target, bytes).map_err(|source| DocdupError::Write { path: target, source })
                }
                None => stdout.lock().write_all(&bytes).map_err(|source| DocdupError::Write { path: "<stdout>".into(), source }),
            }
        });
        if let Err(DocdupError::Write { source, .. }) = &outcome {
            if source.kind() == io::ErrorKind::BrokenPipe {
                return status;
            }
        }
        if let Err(e) = outcome {
            status = status.max(report_error(&e));
        }
    }
    status
}

fn report_error(e: &DocdupError) -> i32 {
    eprintln!("docdup: {e}");
    e.exit_code()
}

/// `<file name>.<ext>`, with a numeric suffix when two inputs share a name.
fn output_name(path: &std::path::Path, format: Format, used: &mut BTreeSet<String>) -> String {
    let stem = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into());
    let mut name = format!("{stem}.{}", format.extension());
    let mut n = 2;
    while !used.insert(name.clone()) {
        name = format!("{stem}-{n}.{}", format.extension());
        n += 1;
    }
    name
}
