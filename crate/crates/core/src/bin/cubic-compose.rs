use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cubic_compose::report::{
    self, Command, EnumMode, EquivKind, Input, RunConfig, SplitCheck, SurfaceFilter, WordOp,
};
use cubic_compose::{Error, Result};

#[derive(Parser)]
#[command(name = "cubic-compose", version, about = "Composition laws on cubic curves and surfaces over finite fields")]
struct Cli {
    /// Field as `p,e` or `q`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Word-closure budget, or round cap for `generate`.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// RNG seed for sampled runs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cubic form as JSON.
    #[arg(long, global = true, conflicts_with = "corpus")]
    form: Option<PathBuf>,
    /// Named form: fermat-curve, fermat-surface, diagonal-a, diagonal:<c>, f2:<mask>.
    #[arg(long, global = true)]
    corpus: Option<String>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Diagonal,
    Sampled,
}

#[derive(Copy, Clone, ValueEnum)]
enum WordOpArg {
    Nf,
    Eq,
    Ord,
    Psi,
}

#[derive(Subcommand)]
enum Verb {
    /// List smooth cubic surfaces matching filters.
    EnumerateSurfaces {
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Required number of rational points.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        all_eckardt: Option<bool>,
        /// Required number of rational lines.
        #[arg(long)]
        lines: Option<usize>,
        #[arg(long, default_value_t = 5)]
        limit: usize,
    },
    /// The abstract cubic of rational points.
    Collinearity,
    /// Universal equivalence with its stage trace.
    Uequiv,
    U3,
    U2,
    /// Composition table of the universal quotient.
    Quotient,
    /// Word problem in the reflection group; words are comma-separated
    /// point indices, `-` for the empty word.
    Word {
        #[arg(value_enum)]
        op: WordOpArg,
        #[arg(allow_hyphen_values = true, required = true)]
        words: Vec<String>,
        #[arg(long)]
        letter: Option<usize>,
    },
    /// Closure of a set of points under composition.
    Generate {
        /// std, distinct, a:<i> or a:inf.
        #[arg(long, default_value = "std")]
        rule: String,
        /// Comma-separated point indices.
        #[arg(long)]
        points: String,
    },
    /// Split surfaces obtained by blowing up six points.
    Split {
        #[command(subcommand)]
        action: SplitVerb,
    },
}

#[derive(Subcommand)]
enum SplitVerb {
    Build {
        /// Base configuration JSON; searched when absent.
        #[arg(long)]
        base: Option<PathBuf>,
    },
    Check {
        /// 5.2, 5.3, 5.4, 5.7.6, 5.7.7 or group_law.
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        base: Option<PathBuf>,
    },
}

fn read_json(path: &PathBuf) -> Result<serde_json::Value> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let command = match &cli.verb {
        Verb::EnumerateSurfaces {
            mode,
            samples,
            points,
            all_eckardt,
            lines,
            limit,
        } => Command::EnumerateSurfaces {
            mode: match mode {
                ModeArg::Exhaustive => EnumMode::Exhaustive,
                ModeArg::Diagonal => EnumMode::Diagonal,
                ModeArg::Sampled => EnumMode::Sampled { samples: *samples },
            },
            filter: SurfaceFilter {
                point_count: *points,
                all_eckardt: *all_eckardt,
                line_count: *lines,
            },
            limit: *limit,
        },
        Verb::Collinearity => Command::Collinearity,
        Verb::Uequiv => Command::Equivalence { kind: EquivKind::Universal },
        Verb::U3 => Command::Equivalence { kind: EquivKind::U3 },
        Verb::U2 => Command::Equivalence { kind: EquivKind::U2 },
        Verb::Quotient => Command::Quotient,
        Verb::Word { op, words, letter } => Command::Word {
            op: match op {
                WordOpArg::Nf => WordOp::Nf,
                WordOpArg::Eq => WordOp::Eq,
                WordOpArg::Ord => WordOp::Ord,
                WordOpArg::Psi => WordOp::Psi,
            },
            words: words.iter().map(|w| report::parse_word(w)).collect::<Result<_>>()?,
            letter: *letter,
        },
        Verb::Generate { rule, points } => Command::Generate {
            rule: rule.parse()?,
            points: report::parse_points(points)?.into_iter().collect(),
        },
        Verb::Split { action } => match action {
            SplitVerb::Build { base } => Command::SplitBuild {
                base: base.as_ref().map(read_json).transpose()?,
            },
            SplitVerb::Check {
                theorem,
                samples,
                base,
            } => Command::SplitCheck {
                base: base.as_ref().map(read_json).transpose()?,
                check: theorem.parse::<SplitCheck>()?,
                samples: *samples,
            },
        },
    };
    let input = match (&cli.form, &cli.corpus) {
        (Some(path), _) => Some(Input::Form { form: read_json(path)? }),
        (None, Some(name)) => Some(Input::Corpus { name: name.clone() }),
        (None, None) => None,
    };
    Ok(RunConfig {
        command,
        field: cli.field.as_deref().map(report::parse_field).transpose()?,
        input,
        budget: cli.budget.unwrap_or(cubic_compose::words::DEFAULT_BUDGET),
        seed: cli.seed,
    })
}

fn execute(cli: &Cli) -> Result<()> {
    let report = report::run(&config(cli)?)?;
    let text = report.to_json_string();
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn fail(e: &Error) -> ExitCode {
    let msg = serde_json::json!({ "error": e.code(), "message": e.to_string() });
    eprintln!("{msg}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
