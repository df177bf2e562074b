//! Batch CLI for the unscientify annotation engine.
//!
//! Exit codes: 0 success, 2 bad flags (from clap), 3 input or parse
//! failures, 4 ruleset validation errors.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use unscientify::builtin::{builtin_compiled, builtin_ruleset, BUILTIN_RULES_JSON};
use unscientify::eval::{evaluate, render_report, GoldRecord};
use unscientify::ingest::{ingest, IngestConfig, IngestMode};
use unscientify::output::{
    records_for, render_html, render_tty, to_json, to_jsonl, SentenceRecord,
};
use unscientify::pipeline::{annotate_document, annotate_document_parallel};
use unscientify::rules::{
    compile_ruleset, parse_ruleset, validate_ruleset, CompiledRuleSet, Severity,
};
use unscientify::text::SuGroup;

/// Environment variable naming a rule file to use when `--ruleset` is not
/// given.
const RULESET_ENV: &str = "UNSCIENTIFY_RULESET";

#[derive(Parser)]
#[command(
    name = "unscientify",
    version,
    about = "Detect and explain scientific-uncertainty expressions, sentence by sentence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Annotate a document and emit per-sentence records.
    Annotate(AnnotateArgs),
    /// Score predictions against a gold JSONL corpus.
    Eval(EvalArgs),
    /// Inspect, validate, or export rule files.
    Rules {
        #[command(subcommand)]
        command: RulesCommand,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Text,
    Conllu,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Tty,
    Json,
    Jsonl,
    Html,
}

#[derive(Args)]
struct AnnotateArgs {
    /// Input file, or `-` for stdin.
    #[arg(long, short = 'i', default_value = "-")]
    input: String,
    /// How to interpret the input.
    #[arg(long, value_enum, default_value = "text")]
    input_format: InputFormat,
    /// Rule file path; defaults to the builtin ruleset (or $UNSCIENTIFY_RULESET).
    #[arg(long)]
    ruleset: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "tty")]
    output_format: OutputFormat,
    /// Output file; defaults to stdout.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    /// Annotate sentences on a thread pool (output is identical).
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Gold corpus: one JSON record per line.
    #[arg(long)]
    gold: PathBuf,
    /// Pre-computed predictions (annotate JSONL output).
    #[arg(long, conflicts_with = "annotate_with")]
    pred: Option<PathBuf>,
    /// Annotate the gold texts with this rule file ("builtin" for the
    /// shipped rules). Used when --pred is absent.
    #[arg(long, num_args = 0..=1, default_missing_value = "builtin")]
    annotate_with: Option<String>,
    /// Also emit the report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RulesCommand {
    /// Write the builtin ruleset in the rule file format.
    Export {
        /// Output file; defaults to stdout.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Validate a rule file and print its diagnostics.
    Validate { path: PathBuf },
    /// List patterns per group for a rule file.
    List { path: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("unscientify: {err:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Annotate(args) => cmd_annotate(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Rules { command } => cmd_rules(command),
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .context("writing stdout")?;
            stdout.flush().context("flushing stdout")
        }
    }
}

/// Load and compile the requested ruleset: explicit path, else the
/// `UNSCIENTIFY_RULESET` environment variable, else the builtin rules.
fn load_ruleset(path: Option<&Path>) -> Result<CompiledRuleSet> {
    let env_path = std::env::var_os(RULESET_ENV).map(PathBuf::from);
    let effective = path.or(env_path.as_deref());
    let ruleset = match effective {
        None => builtin_ruleset(),
        Some(p) => {
            let bytes = fs::read(p).with_context(|| format!("reading ruleset {}", p.display()))?;
            parse_ruleset(&bytes).with_context(|| format!("parsing ruleset {}", p.display()))?
        }
    };
    let errors: Vec<String> = validate_ruleset(&ruleset)
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .map(|d| d.to_string())
        .collect();
    if !errors.is_empty() {
        return Err(anyhow!(
            "ruleset has validation errors:\n{}",
            errors.join("\n")
        ));
    }
    compile_ruleset(&ruleset).context("compiling ruleset")
}

fn ruleset_from_spec(spec: &str) -> Result<CompiledRuleSet> {
    if spec == "builtin" {
        Ok(builtin_compiled().clone())
    } else {
        load_ruleset(Some(Path::new(spec)))
    }
}

fn annotate_to_records(
    content: &str,
    input_format: InputFormat,
    crs: &CompiledRuleSet,
    parallel: bool,
) -> Result<Vec<SentenceRecord>> {
    let config = match input_format {
        InputFormat::Text => IngestConfig::default(),
        InputFormat::Conllu => IngestConfig::conllu(),
    };
    // An empty plain-text input is a valid zero-sentence document.
    if config.mode == IngestMode::Plain && content.trim().is_empty() {
        return Ok(Vec::new());
    }
    let doc = ingest(content, &config)?;
    let report = if parallel {
        annotate_document_parallel(crs, &doc)
    } else {
        annotate_document(crs, &doc)
    };
    Ok(records_for(&report.annotations, &doc.sentences))
}

fn cmd_annotate(args: AnnotateArgs) -> Result<ExitCode> {
    let crs = load_ruleset(args.ruleset.as_deref())?;
    let content = read_input(&args.input)?;
    let records = annotate_to_records(&content, args.input_format, &crs, args.parallel)?;
    let rendered = match args.output_format {
        OutputFormat::Jsonl => to_jsonl(&records),
        OutputFormat::Json => to_json(&records),
        OutputFormat::Tty => {
            let color = args.output.is_none() && std::env::var_os("NO_COLOR").is_none();
            render_tty(&records, color)
        }
        OutputFormat::Html => render_html(&records, "unscientify report"),
    };
    write_output(args.output.as_deref(), &rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn read_gold(path: &Path) -> Result<Vec<GoldRecord>> {
    let content =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut records = Vec::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: GoldRecord = serde_json::from_str(line).with_context(|| {
            format!(
                "{}: malformed gold record on line {}",
                path.display(),
                i + 1
            )
        })?;
        records.push(record);
    }
    Ok(records)
}

fn read_predictions(path: &Path) -> Result<Vec<SentenceRecord>> {
    let content =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut records = Vec::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: SentenceRecord = serde_json::from_str(line).with_context(|| {
            format!(
                "{}: malformed prediction record on line {}",
                path.display(),
                i + 1
            )
        })?;
        records.push(record);
    }
    Ok(records)
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode> {
    let gold = read_gold(&args.gold)?;
    let predictions = match (&args.pred, &args.annotate_with) {
        (Some(path), _) => read_predictions(path)?,
        (None, spec) => {
            let crs = match spec {
                Some(s) => ruleset_from_spec(s)?,
                None => load_ruleset(None)?,
            };
            let mut records = Vec::with_capacity(gold.len());
            for (i, g) in gold.iter().enumerate() {
                let mut rec = annotate_to_records(&g.text, InputFormat::Text, &crs, false)?;
                if rec.len() != 1 {
                    return Err(anyhow!(
                        "gold record {} did not ingest as exactly one sentence: {:?}",
                        i + 1,
                        g.text
                    ));
                }
                let mut record = rec.remove(0);
                record.index = i;
                records.push(record);
            }
            records
        }
    };
    let report = evaluate(&gold, &predictions)?;
    print!("{}", render_report(&report));
    if let Some(path) = args.json {
        let mut body = serde_json::to_string_pretty(&report)?;
        body.push('\n');
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_rules(command: RulesCommand) -> Result<ExitCode> {
    match command {
        RulesCommand::Export { output } => {
            // The builtin resource is already in the rule file format.
            write_output(output.as_deref(), BUILTIN_RULES_JSON)?;
            Ok(ExitCode::SUCCESS)
        }
        RulesCommand::Validate { path } => {
            let bytes = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
            match parse_ruleset(&bytes) {
                Err(err) => {
                    eprintln!("error[{}]: {err}", err.code());
                    Ok(ExitCode::from(4))
                }
                Ok(ruleset) => {
                    let diags = validate_ruleset(&ruleset);
                    for d in &diags {
                        println!("{d}");
                    }
                    let has_errors = diags.iter().any(|d| d.severity == Severity::Error);
                    if has_errors {
                        Ok(ExitCode::from(4))
                    } else {
                        println!(
                            "{}: {} patterns, {} cancellations, no errors",
                            path.display(),
                            ruleset.patterns.len(),
                            ruleset.cancellations.len()
                        );
                        Ok(ExitCode::SUCCESS)
                    }
                }
            }
        }
        RulesCommand::List { path } => {
            let bytes = fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
            let ruleset = parse_ruleset(&bytes)?;
            for group in SuGroup::ALL {
                println!("{group}");
                for p in ruleset.patterns_in(group) {
                    let note = if p.note.is_empty() {
                        String::new()
                    } else {
                        format!("  - {}", p.note)
                    };
                    println!("  {} ({} constraints){}", p.id, p.constraints.len(), note);
                }
            }
            if !ruleset.cancellations.is_empty() {
                println!("Cancellations");
                for c in &ruleset.cancellations {
                    println!(
                        "  {} [{}] ({} constraints)",
                        c.id,
                        c.kind,
                        c.constraints.len()
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
