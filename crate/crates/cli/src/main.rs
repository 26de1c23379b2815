//! Command-line front end for the stylometry toolkit.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to
//! stderr; table output goes to stdout unless `--out` names a file.

use anyhow::{anyhow, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use std::path::PathBuf;
use std::process::ExitCode;
use stylometry::pipeline::{self, PipelineConfig};
use stylometry::report::{self, Measure, TableFormat};
use stylometry::tree::{self, SvgOptions};
use stylometry::{distance, lexicon};

const ENV_LEXICONS: &str = "STYLO_LEXICONS";
const ENV_COMPOSITES: &str = "STYLO_COMPOSITES";

#[derive(Parser)]
#[command(
    name = "stylo",
    version,
    about = "Corpus stylometry: style tables, intertextual distance, and distance trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Corpus overview per group: count, tokens, types, mean length
    Summarize(TableArgs),
    /// Complexity table: mean word length, big words, mean sentence length
    Complexity(TableArgs),
    /// Category percentage tables (pronoun and semantic wordlists)
    Categories(CategoriesArgs),
    /// Composite score table (Tone, Clout, Analytical, Authenticity)
    Composites(TableArgs),
    /// All-pairs intertextual distance matrix
    Distance(DistanceArgs),
    /// Neighbor-joining tree from the distance matrix
    Tree(TreeArgs),
    /// Full report bundle: every table, matrix, tree, and run manifest
    Report(ReportArgs),
    /// Check lexicon files and report malformed patterns
    ValidateLexicon(ValidateArgs),
}

#[derive(Args, Clone, Default)]
struct CommonOpts {
    /// Corpus manifest (CSV: id,author,year,source_label,path)
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Directory of .lex files (default: embedded pack, or $STYLO_LEXICONS)
    #[arg(long)]
    lexicons: Option<PathBuf>,
    /// Directory of .cmp files (default: embedded pack, or $STYLO_COMPOSITES)
    #[arg(long)]
    composites: Option<PathBuf>,
    /// Extra abbreviation stop-list entries (one per line)
    #[arg(long)]
    abbreviations: Option<PathBuf>,
    /// Significance level for dagger marks
    #[arg(long)]
    alpha: Option<f64>,
    /// Source label marking human-authored documents
    #[arg(long)]
    human_label: Option<String>,
    /// Source label tested against with a dagger
    #[arg(long)]
    baseline1: Option<String>,
    /// Source label tested against with a double dagger
    #[arg(long)]
    baseline2: Option<String>,
    /// Use the pooled-variance t-test instead of Welch
    #[arg(long)]
    pooled: bool,
    /// Optional TOML config; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Output format
    #[arg(long, value_parser = ["markdown", "csv"], default_value = "markdown")]
    format: String,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CategoriesArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Which category table to print
    #[arg(long, value_parser = ["pronouns", "semantic", "all"], default_value = "all")]
    set: String,
    #[arg(long, value_parser = ["markdown", "csv"], default_value = "markdown")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DistanceArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// matrix: labeled square CSV; pairs: long-form (a,b,distance) rows
    #[arg(long, value_parser = ["matrix", "pairs"], default_value = "matrix")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TreeArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[arg(long, value_parser = ["newick", "dot", "svg"], default_value = "newick")]
    format: String,
    /// Skip the internal-node dots in SVG output
    #[arg(long)]
    no_dots: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Bundle directory (created if missing)
    #[arg(long)]
    out: PathBuf,
    /// Skip the internal-node dots in SVG output
    #[arg(long)]
    no_dots: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Lexicon files to check
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

/// TOML config file; every field optional, flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    manifest: Option<PathBuf>,
    lexicons: Option<PathBuf>,
    composites: Option<PathBuf>,
    abbreviations: Option<PathBuf>,
    alpha: Option<f64>,
    human_label: Option<String>,
    baseline1: Option<String>,
    baseline2: Option<String>,
    pooled: Option<bool>,
}

fn resolve_config(common: &CommonOpts) -> Result<PipelineConfig> {
    let file: FileConfig = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("{}: cannot read config", path.display()))?;
            toml::from_str(&text)
                .with_context(|| format!("{}: malformed config", path.display()))?
        }
        None => FileConfig::default(),
    };
    let manifest = common
        .manifest
        .clone()
        .or(file.manifest)
        .ok_or_else(|| anyhow!("--manifest is required (or set it in --config)"))?;
    let mut config = PipelineConfig::new(manifest);
    config.lexicon_dir = common
        .lexicons
        .clone()
        .or(file.lexicons)
        .or_else(|| std::env::var_os(ENV_LEXICONS).map(PathBuf::from));
    config.composite_dir = common
        .composites
        .clone()
        .or(file.composites)
        .or_else(|| std::env::var_os(ENV_COMPOSITES).map(PathBuf::from));
    config.abbreviations = common.abbreviations.clone().or(file.abbreviations);
    if let Some(alpha) = common.alpha.or(file.alpha) {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(anyhow!("alpha must lie strictly between 0 and 1, got {alpha}"));
        }
        config.alpha = alpha;
    }
    if let Some(label) = common.human_label.clone().or(file.human_label) {
        config.human_label = label;
    }
    config.baseline1 = common.baseline1.clone().or(file.baseline1);
    config.baseline2 = common.baseline2.clone().or(file.baseline2);
    config.pooled_t_test = common.pooled || file.pooled.unwrap_or(false);
    Ok(config)
}

fn table_format(name: &str) -> TableFormat {
    match name {
        "csv" => TableFormat::Csv,
        _ => TableFormat::Markdown,
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            pipeline::write_atomic(path, content.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Summarize(args) => {
            let config = resolve_config(&args.common)?;
            let inputs = pipeline::load_inputs(&config)?;
            let rows = pipeline::summary_rows(&inputs.corpus, &config.human_label)?;
            let content = match table_format(&args.format) {
                TableFormat::Markdown => pipeline::render_summary_markdown(&rows),
                TableFormat::Csv => pipeline::render_summary_csv(&rows),
            };
            emit(&args.out, &content)
        }
        Command::Complexity(args) => {
            let config = resolve_config(&args.common)?;
            let mut inputs = pipeline::load_inputs(&config)?;
            inputs.composites.clear(); // not rendered here
            let rows = pipeline::style_rows(&inputs, &config)?;
            let columns = vec![
                Measure::MeanWordLength,
                Measure::BigWordPct,
                Measure::MeanSentenceLength,
            ];
            let table = pipeline::build_style_table(
                "Language complexity",
                &rows,
                &columns,
                config.alpha,
                config.t_variant(),
            )?;
            emit(
                &args.out,
                &report::render_table(&table, table_format(&args.format)),
            )
        }
        Command::Categories(args) => {
            let config = resolve_config(&args.common)?;
            let mut inputs = pipeline::load_inputs(&config)?;
            inputs.composites.clear(); // not rendered here
            let rows = pipeline::style_rows(&inputs, &config)?;
            let mut sections: Vec<(&str, Vec<Measure>)> = Vec::new();
            if args.set == "pronouns" || args.set == "all" {
                sections.push(("Pronoun categories", pipeline::pronoun_columns(&inputs.lexicons)));
            }
            if args.set == "semantic" || args.set == "all" {
                sections.push(("Semantic categories", pipeline::semantic_columns(&inputs.lexicons)));
            }
            let mut content = String::new();
            for (title, columns) in sections {
                if columns.is_empty() {
                    continue;
                }
                let table = pipeline::build_style_table(
                    title,
                    &rows,
                    &columns,
                    config.alpha,
                    config.t_variant(),
                )?;
                content.push_str(&report::render_table(&table, table_format(&args.format)));
                content.push('\n');
            }
            emit(&args.out, &content)
        }
        Command::Composites(args) => {
            let config = resolve_config(&args.common)?;
            let inputs = pipeline::load_inputs(&config)?;
            let rows = pipeline::style_rows(&inputs, &config)?;
            let columns = pipeline::composite_columns(&inputs.composites);
            let table = pipeline::build_style_table(
                "Composite measures",
                &rows,
                &columns,
                config.alpha,
                config.t_variant(),
            )?;
            emit(
                &args.out,
                &report::render_table(&table, table_format(&args.format)),
            )
        }
        Command::Distance(args) => {
            let config = resolve_config(&args.common)?;
            let inputs = pipeline::load_inputs(&config)?;
            let texts = pipeline::distance_texts(&inputs.corpus, &config.human_label);
            let matrix: distance::DistanceMatrix<f64> = distance::distance_matrix(&texts)?;
            let content = match args.format.as_str() {
                "pairs" => matrix.to_long_csv(),
                _ => matrix.to_csv(),
            };
            emit(&args.out, &content)
        }
        Command::Tree(args) => {
            let config = resolve_config(&args.common)?;
            let inputs = pipeline::load_inputs(&config)?;
            let texts = pipeline::distance_texts(&inputs.corpus, &config.human_label);
            let matrix: distance::DistanceMatrix<f64> = distance::distance_matrix(&texts)?;
            let nj = tree::neighbor_joining(&matrix)?;
            let content = match args.format.as_str() {
                "dot" => tree::to_dot(&nj),
                "svg" => {
                    let laid_out = tree::layout_equal_angle(nj);
                    let options = SvgOptions {
                        highlight_internal: !args.no_dots,
                        ..SvgOptions::default()
                    };
                    tree::to_svg(&laid_out, &options)?
                }
                _ => format!("{}\n", nj.to_newick()),
            };
            emit(&args.out, &content)
        }
        Command::Report(args) => {
            let mut config = resolve_config(&args.common)?;
            config.svg_highlight = !args.no_dots;
            let output = pipeline::run_pipeline(&config, &args.out)?;
            for note in &output.notes {
                eprintln!("note: {note}");
            }
            eprintln!(
                "wrote {} files to {}",
                output.files.len(),
                args.out.display()
            );
            Ok(())
        }
        Command::ValidateLexicon(args) => {
            let mut failures = 0usize;
            for path in &args.files {
                match lexicon::Lexicon::load(path) {
                    Ok(lex) => {
                        println!(
                            "{}: ok ({} literals, {} stems)",
                            path.display(),
                            lex.literal_count(),
                            lex.prefix_count()
                        );
                    }
                    Err(err) => {
                        eprintln!("{err}");
                        failures += 1;
                    }
                }
            }
            if failures > 0 {
                Err(anyhow!("{failures} lexicon file(s) failed validation"))
            } else {
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
