use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use termcat_core::{
    enumerate_iterates, functional_equation_residual, project_signature, render_exhibit,
    render_polish, structure_catalan, verify_theorem, Frequency, IncidenceMatrix, IterateGrammar,
    Limits, Signature, Tableau,
};

#[derive(Parser)]
#[command(
    name = "termcat",
    version,
    about = "Iterates of finitary-operation algebras: exact counts, substitution tableaux, \
             and incidence matrices of formally reducible identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Signature as SYM:ARITY[,SYM:ARITY...], e.g. V:2,W:2
    #[arg(long, value_name = "SPEC")]
    ops: String,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Cap on enumerated terms and tableau cells
    #[arg(long, default_value_t = 10_000_000)]
    cap: u64,

    /// Cap on incidence matrix bits
    #[arg(long, default_value_t = 100_000_000)]
    bit_cap: u64,
}

impl Common {
    fn signature(&self) -> Result<Signature, Failure> {
        self.ops.parse().map_err(Failure::from_core)
    }

    fn limits(&self) -> Limits {
        Limits {
            max_terms: self.cap,
            max_cells: self.cap,
            max_bits: self.bit_cap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Structure Catalan numbers S_0..S_n
    Catalan {
        #[command(flatten)]
        common: Common,
        /// Highest order to compute
        #[arg(long)]
        n: usize,
    },
    /// All iterates of order n
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// Iterate order
        #[arg(long)]
        n: usize,
    },
    /// Substitution tableau T_n: word grid, labels, multiplicity histogram
    Tableau {
        #[command(flatten)]
        common: Common,
        /// Tableau order (at least 1)
        #[arg(long)]
        n: usize,
    },
    /// Incidence matrix of formally reducible identities, row sums, I_n
    Incidence {
        #[command(flatten)]
        common: Common,
        /// Order (at least 2)
        #[arg(long)]
        n: usize,
    },
    /// Text exhibit of the incidence matrix with trailing sum and M columns
    Exhibit {
        #[command(flatten)]
        common: Common,
        /// Order (at least 2)
        #[arg(long)]
        n: usize,
    },
    /// Check every row sum against the multiplicity formula; exit 3 on mismatch
    Verify {
        #[command(flatten)]
        common: Common,
        /// Order (at least 2)
        #[arg(long)]
        n: usize,
    },
    /// Binary projections of every operation, with provenance
    Project {
        #[command(flatten)]
        common: Common,
    },
    /// Language levels from the word grammar plus an equality report
    Grammar {
        #[command(flatten)]
        common: Common,
        /// Highest level to generate and the level to compare
        #[arg(long)]
        n: usize,
    },
    /// Functional-equation residual coefficients through degree n
    Residual {
        #[command(flatten)]
        common: Common,
        /// Highest degree
        #[arg(long)]
        n: usize,
    },
}

/// Failure classes mapped onto exit codes: validation 1, resource cap 2,
/// verification mismatch 3.
enum Failure {
    Validation(String),
    Resource(String),
}

impl Failure {
    fn from_core(err: termcat_core::Error) -> Self {
        match err {
            termcat_core::Error::ResourceCap { .. } => Failure::Resource(err.to_string()),
            _ => Failure::Validation(err.to_string()),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Resource(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(msg) | Failure::Resource(msg) => msg,
        }
    }
}

struct Outcome {
    text: String,
    output: Option<PathBuf>,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(outcome) => {
            if let Some(path) = &outcome.output {
                if let Err(err) = std::fs::write(path, &outcome.text) {
                    eprintln!("error: cannot write {}: {err}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.exit)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Catalan { common, n } => render_catalan(common, n),
        Command::Enumerate { common, n } => render_enumerate(common, n),
        Command::Tableau { common, n } => render_tableau(common, n),
        Command::Incidence { common, n } => render_incidence(common, n),
        Command::Exhibit { common, n } => render_exhibit_cmd(common, n),
        Command::Verify { common, n } => render_verify(common, n),
        Command::Project { common } => render_project(common),
        Command::Grammar { common, n } => render_grammar(common, n),
        Command::Residual { common, n } => render_residual(common, n),
    }
}

fn json_line(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("values serialize");
    text.push('\n');
    text
}

fn render_catalan(common: Common, n: usize) -> Result<Outcome, Failure> {
    let sig = common.signature()?;
    let counts = structure_catalan(&sig, n);
    let digits = counts.to_digit_strings();
    let text = match common.format {
        Format::Text => format!("{}\n", digits.join(" ")),
        Format::Json => json_line(&json!(digits)),
        Format::Csv => {
            let mut out = String::from("n,count\n");
            for (i, value) in digits.iter().enumerate() {
                let _ = writeln!(out, "{i},{value}");
            }
            out
        }
    };
    Ok(Outcome {
        text,
        output: common.output,
        exit: 0,
    })
}

fn render_enumerate(common: Common, n: usize) -> Result<Outcome, Failure> {
    let sig = common.signature()?;
    let terms = enumerate_iterates(&sig, n, &common.limits()).map_err(Failure::from_core)?;
    let words: Vec<String> = terms.iter().map(|t| render_polish(t, &sig)).collect();
    let text = match common.format {
        Format::Text => {
            let mut out = String::new();
            for word in &words {
                let _ = writeln!(out, "{word}");
            }
            out
        }
        Format::Json => json_line(&json!(words)),
        Format::Csv => {
            let mut out = String::from("index,word\n");
            for (i, word) in words.iter().enumerate() {
                let _ = writeln!(out, "{},{word}", i + 1);
            }
            out
        }
    };
    Ok(Outcome {
        text,
        output: common.output,
        exit: 0,
    })
}

fn render_tableau(common: Common, n: usize) -> Result<Outcome, Failure> {
    let sig = common.signature()?;
    let tab = Tableau::build(&sig, n, &common.limits()).map_err(Failure::from_core)?;
    let labels = tab.canonical_labels();
    let mult = tab.multiplicity_table(&labels);
    let text = match common.format {
        Format::Text => tab.render_text(&labels, &mult),
        Format::Json => json_line(&tab.to_json(&labels, &mult)),
        Format::Csv => tab.to_csv(&labels),
    };
    Ok(Outcome {
        text,
        output: common.output,
        exit: 0,
    })
}

fn build_matrix(
    sig: &Signature,
    n: usize,
    limits: &Limits,
) -> Result<(IncidenceMatrix, termcat_core::MultiplicityTable, Frequency), Failure> {
    let tab = Tableau::build(sig, n, limits).map_err(Failure::from_core)?;
    let labels = tab.canonical_labels();
    let mult = tab.multiplicity_table(&labels);
    let matrix = IncidenceMatrix::build(&tab, &labels, limits).map_err(Failure::from_core)?;
    let s_n = structure_catalan(sig, n).get(n).clone();
    let frequency = Frequency::new(matrix.reducible_count(), &s_n * &s_n);
    Ok((matrix, mult, frequency))
}

fn render_incidence(common: Common, n: usize) -> Result<Outcome, Failure> {
    let sig = common.signature()?;
    let (matrix, _, frequency) = build_matrix(&sig, n, &common.limits())?;
    let text = match common.format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "incidence matrix: n={n}, ops={sig}, size={}",
                matrix.size()
            );
            let _ = writeln!(out, "I_{n} = {}", matrix.reducible_count());
            let _ = writeln!(out, "frequency = {frequency}");
            let sums: Vec<String> = matrix.row_sums().iter().map(u64::to_string).collect();
            let _ = writeln!(out, "row sums: {}", sums.join(" "));
            for i in 1..=matrix.size() {
                let row: String = (1..=matrix.size())
                    .map(|j| if matrix.delta(i, j) { '1' } else { '0' })
                    .collect();
                let _ = writeln!(out, "{row}");
            }
            out
        }
        Format::Json => json_line(&matrix.to_json(&frequency)),
        Format::Csv => matrix.to_csv(),
    };
    Ok(Outcome {
        text,
        output: common.output,
        exit: 0,
    })
}

fn render_exhibit_cmd(common: Common, n: usize) -> Result<Outcome, Failure> {
    if common.format != Format::Text {
        return Err(Failure::Validation(
            "exhibit output is text-only".to_string(),
        ));
    }
    let sig = common.signature()?;
    let (matrix, mult, frequency) = build_matrix(&sig, n, &common.limits())?;
    let mut text = render_exhibit(&matrix, &mult, &sig, n);
    text.push('\n');
    let _ = writeln!(text, "I_{n} = {}", matrix.reducible_count());
    let _ = writeln!(text, "frequency = {frequency}");
    Ok(Outcome {
        text,
        output: common.output,
        exit: 0,
    })
}

fn render_verify(common: Common, n: usize) -> Result<Outcome, Failure> {
    let sig = common.signature()?;
    let report = verify_theorem(&sig, n, &common.limits()).map_err(Failure::from_core)?;
    let text = match common.format {
        Format::Text => report.render_text(),
        Format::Json => json_line(&report.to_json()),
        Format::Csv => report.render_csv(),
    };
    Ok(Outcome {
        text,
        output: common.output,
        exit: if report.passed() { 0 } else { 3 },
    })
}

fn render_project(common: Common) -> Result<Outcome, Failure> {
    let sig = common.signature()?;
    let projected = project_signature(&sig).map_err(Failure::from_core)?;
    let text = match common.format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "projected signature: {}", projected.signature);
            for spec in &projected.specs {
                let _ = writeln!(
                    out,
                    "{} = {}  (from {}, i={} j={} k={})",
                    spec.derived_symbol,
                    termcat_core::render_projection(spec, &sig),
                    sig.symbol(spec.source_op),
                    spec.leading,
                    spec.middle,
                    spec.trailing
                );
            }
            out
        }
        Format::Json => json_line(&projected.to_json()),
        Format::Csv => {
            let mut out = String::from("derived,source,i,j,k,definition\n");
            for spec in &projected.specs {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    spec.derived_symbol,
                    sig.symbol(spec.source_op),
                    spec.leading,
                    spec.middle,
                    spec.trailing,
                    termcat_core::render_projection(spec, &sig)
                );
            }
            out
        }
    };
    Ok(Outcome {
        text,
        output: common.output,
        exit: 0,
    })
}

fn render_grammar(common: Common, n: usize) -> Result<Outcome, Failure> {
    let sig = common.signature()?;
    let limits = common.limits();
    let grammar = IterateGrammar::from_signature(&sig);
    let levels = grammar.generate(n, &limits).map_err(Failure::from_core)?;
    let comparison =
        termcat_core::language_equals_enumeration(&sig, n, &limits).map_err(Failure::from_core)?;
    let text = match common.format {
        Format::Text => {
            let mut out = String::new();
            for (order, level) in levels.iter().enumerate() {
                let noun = if level.len() == 1 { "word" } else { "words" };
                let _ = writeln!(out, "# order {order} ({} {noun})", level.len());
                for word in level {
                    let _ = writeln!(out, "{word}");
                }
            }
            let _ = writeln!(
                out,
                "# comparison at order {}: language {} words, enumeration {} words, equal: {}",
                n,
                comparison.language_count,
                comparison.enumeration_count,
                comparison.is_equal()
            );
            out
        }
        Format::Json => json_line(&json!({
            "levels": levels,
            "comparison": {
                "order": comparison.order,
                "languageCount": comparison.language_count,
                "enumerationCount": comparison.enumeration_count,
                "onlyInLanguage": comparison.only_in_language,
                "onlyInEnumeration": comparison.only_in_enumeration,
                "equal": comparison.is_equal(),
            },
        })),
        Format::Csv => {
            let mut out = String::from("order,word\n");
            for (order, level) in levels.iter().enumerate() {
                for word in level {
                    let _ = writeln!(out, "{order},{word}");
                }
            }
            out
        }
    };
    Ok(Outcome {
        text,
        output: common.output,
        exit: 0,
    })
}

fn render_residual(common: Common, n: usize) -> Result<Outcome, Failure> {
    let sig = common.signature()?;
    let residual = functional_equation_residual(&sig, n);
    let digits: Vec<String> = residual.iter().map(|c| c.to_string()).collect();
    let text = match common.format {
        Format::Text => format!("{}\n", digits.join(" ")),
        Format::Json => json_line(&json!(digits)),
        Format::Csv => {
            let mut out = String::from("degree,coefficient\n");
            for (degree, value) in digits.iter().enumerate() {
                let _ = writeln!(out, "{degree},{value}");
            }
            out
        }
    };
    Ok(Outcome {
        text,
        output: common.output,
        exit: 0,
    })
}
