//! `faultloc` — rank the statements of a buggy program by suspiciousness,
//! and evaluate localization techniques over corpora of known bugs.
//!
//! Exit codes: 0 on success; 3 when the requested suspiciousness formula is
//! registered but has no definition; 2 for every other error (unreadable or
//! malformed input, failed validation, bad flag combinations).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use faultloc::{
    approx_dynamic_slice, compare_report, comparison_to_json, comparison_to_tsv, evaluate_corpus,
    evaluation_to_json, evaluation_to_tsv, hybrid_ranking, rank, ranking_to_json, ranking_to_tsv,
    score_from_ranking, slice_ranking, suspiciousness_vector, CorpusManifest, CoverageSpectrum,
    DependenceGraph, EffectivenessScore, Error, EvaluationReport, FormulaId, Ranking, Result,
    SliceRequest, StatementId, SuspiciousnessVector, Technique, TechniqueOverrides, TechniqueSpec,
};

#[derive(Parser)]
#[command(
    name = "faultloc",
    version,
    about = "Statement-level fault localization and evaluation",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank one program's statements by suspiciousness
    Localize(LocalizeArgs),
    /// Run techniques over a corpus manifest and emit an evaluation report
    Evaluate(EvaluateArgs),
    /// Recompute the head-to-head statistics of two techniques from a report
    Compare(CompareArgs),
    /// Print the reference for all file formats
    Formats,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    /// Tab-separated table
    Tsv,
    /// Pretty-printed JSON
    Json,
}

#[derive(Args)]
struct LocalizeArgs {
    /// Coverage spectrum file (text; `.json` selects the JSON mirror)
    #[arg(long, value_name = "FILE")]
    spectrum: PathBuf,

    /// Dependence graph file (DOT; `.json` selects the JSON mirror).
    /// Required by the slice and hybrid techniques
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,

    /// Slicing criterion statement (`unit:line`).
    /// Required by the slice and hybrid techniques
    #[arg(long, value_name = "STMT")]
    criterion: Option<String>,

    /// Technique: a formula name, `formula`, `slice`, or `hybrid`
    /// (optionally parameterized, e.g. `hybrid:n=2:formula=tarantula`)
    #[arg(long, default_value = "formula")]
    technique: String,

    /// Formula used by the `formula` and `hybrid` techniques
    /// [default: kulczynski2]
    #[arg(long, value_name = "NAME")]
    formula: Option<String>,

    /// Head size used by the hybrid technique [default: 2]
    #[arg(long, value_name = "N")]
    n: Option<usize>,

    /// Known faulty statements (comma-separated `unit:line` list); appends
    /// effectiveness metrics to the output
    #[arg(long, value_name = "STMTS", value_delimiter = ',')]
    faulty: Vec<String>,

    /// Write the ranking to a file instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output encoding
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    format: OutputFormat,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Corpus manifest (JSON); case paths resolve against its directory
    #[arg(value_name = "MANIFEST")]
    manifest: PathBuf,

    /// Replace the manifest's technique list (repeat for several techniques)
    #[arg(long = "technique", value_name = "SPEC")]
    techniques: Vec<String>,

    /// Override deferred or pinned formula parameters
    #[arg(long, value_name = "NAME")]
    formula: Option<String>,

    /// Override deferred or pinned hybrid head sizes
    #[arg(long, value_name = "N")]
    n: Option<usize>,

    /// Write the report to a file instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output encoding
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct CompareArgs {
    /// Evaluation report (JSON), as produced by `faultloc evaluate`
    #[arg(value_name = "REPORT")]
    report: PathBuf,

    /// First technique label
    #[arg(value_name = "TECH_A")]
    technique_a: String,

    /// Second technique label
    #[arg(value_name = "TECH_B")]
    technique_b: String,

    /// Write the comparison to a file instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output encoding
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    format: OutputFormat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::FormulaUnavailable(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Localize(args) => localize(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Compare(args) => compare(args),
        Command::Formats => {
            print!("{FORMATS}");
            Ok(())
        }
    }
}

fn parse_formula_flag(flag: &Option<String>) -> Result<Option<FormulaId>> {
    flag.as_deref().map(str::parse).transpose()
}

fn localize(args: LocalizeArgs) -> Result<()> {
    let spec = TechniqueSpec::parse(&args.technique)?;
    let formula_flag = parse_formula_flag(&args.formula)?;
    // `--technique ochiai --formula tarantula` has no single meaning: the
    // technique already names its formula.
    if let (TechniqueSpec::Formula(Some(named)), Some(flagged)) = (&spec, formula_flag) {
        if *named != flagged {
            return Err(Error::Invalid(format!(
                "--technique names formula `{named}` but --formula asks for `{flagged}`; \
                 use `--technique formula --formula {flagged}` or drop one of the flags",
                named = named.name(),
                flagged = flagged.name()
            )));
        }
    }
    let technique = spec.resolve(&TechniqueOverrides {
        formula: formula_flag,
        n: args.n,
    });

    let spectrum = CoverageSpectrum::load(&args.spectrum)?;
    let faulty = args
        .faulty
        .iter()
        .map(|s| s.parse::<StatementId>())
        .collect::<Result<Vec<_>>>()?;

    let label = technique.label();
    let (ranking, vector): (Ranking, Option<SuspiciousnessVector>) = match technique {
        Technique::Formula(f) => {
            let vector = suspiciousness_vector(&spectrum, f)?;
            (rank(&vector), Some(vector))
        }
        Technique::Slice => {
            let (graph, criterion) = slice_inputs(&args)?;
            let request =
                SliceRequest::from_failing_run(&spectrum, &graph, &criterion, faulty.clone())?;
            let slice = approx_dynamic_slice(&graph, &request)?;
            (slice_ranking(&slice, spectrum.statements()), None)
        }
        Technique::Hybrid(config) => {
            let (graph, criterion) = slice_inputs(&args)?;
            let request =
                SliceRequest::from_failing_run(&spectrum, &graph, &criterion, faulty.clone())?;
            let vector = suspiciousness_vector(&spectrum, config.formula)?;
            let ranking = hybrid_ranking(&config, &spectrum, &graph, &request)?;
            (ranking, Some(vector))
        }
    };

    let effectiveness: Option<EffectivenessScore> = if faulty.is_empty() {
        None
    } else {
        Some(score_from_ranking(&ranking, &faulty)?)
    };

    let text = match args.format {
        OutputFormat::Tsv => ranking_to_tsv(&ranking, vector.as_ref(), effectiveness.as_ref()),
        OutputFormat::Json => {
            ranking_to_json(&label, &ranking, vector.as_ref(), effectiveness.as_ref())
        }
    };
    emit(&args.out, &text)
}

/// Loads the graph and parses the criterion, both mandatory for slicing.
fn slice_inputs(args: &LocalizeArgs) -> Result<(DependenceGraph, StatementId)> {
    let graph_path = args.graph.as_ref().ok_or_else(|| {
        Error::Invalid("this technique slices the program; pass --graph <FILE>".into())
    })?;
    let criterion = args.criterion.as_ref().ok_or_else(|| {
        Error::Invalid("this technique slices the program; pass --criterion <STMT>".into())
    })?;
    Ok((DependenceGraph::load(graph_path)?, criterion.parse()?))
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    let manifest = CorpusManifest::load(&args.manifest)?;
    let specs: Vec<TechniqueSpec> = if args.techniques.is_empty() {
        manifest.techniques.clone()
    } else {
        args.techniques
            .iter()
            .map(|s| TechniqueSpec::parse(s))
            .collect::<Result<Vec<_>>>()?
    };
    let overrides = TechniqueOverrides {
        formula: parse_formula_flag(&args.formula)?,
        n: args.n,
    };
    let report = evaluate_corpus(&manifest.cases, &specs, &overrides)?;
    let text = match args.format {
        OutputFormat::Json => evaluation_to_json(&report),
        OutputFormat::Tsv => evaluation_to_tsv(&report),
    };
    emit(&args.out, &text)
}

fn compare(args: CompareArgs) -> Result<()> {
    let report = EvaluationReport::load(&args.report)?;
    let stats = compare_report(&report, &args.technique_a, &args.technique_b)?;
    let text = match args.format {
        OutputFormat::Tsv => comparison_to_tsv(&args.technique_a, &args.technique_b, &stats),
        OutputFormat::Json => comparison_to_json(&args.technique_a, &args.technique_b, &stats),
    };
    emit(&args.out, &text)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

const FORMATS: &str = r#"faultloc file formats

All statements are written `unit:line`, where `unit` is a source-file label
without whitespace, `,`, `"`, or `#`, and `line` is a 1-based line number.
The last `:` separates unit from line, so units may themselves contain `:`.

COVERAGE SPECTRUM (text; any extension but `.json`)
    statements unit:line[,unit:line...]
    test <id> <PASS|FAIL> [unit:line[,unit:line...]]

  One `statements` header naming the whole universe, then one `test` line
  per test. The statement lists contain no spaces. A test that covered
  nothing omits its coverage field. `#` starts a comment; blank lines are
  ignored. Coverage is a set: duplicates collapse. Every covered statement
  must belong to the universe; test ids must be unique; verdicts other than
  PASS/FAIL are rejected.

COVERAGE SPECTRUM (JSON; `.json` extension)
    {
      "statements": ["m.c:3", "m.c:4"],
      "tests": [
        {"id": "t1", "verdict": "PASS", "covered": ["m.c:3"]}
      ]
    }

DEPENDENCE GRAPH (DOT subset; any extension but `.json`)
    digraph dependence {
      "m.c:15";
      "m.c:15" -> "m.c:3" [kind="data"];
    }

  An edge `s -> s'` means s depends on s': `data` when s reads a value s'
  produced, `control` when s' decides whether s runs. Node ids are always
  double-quoted; every edge endpoint must be declared as a node; each edge
  carries exactly one kind attribute (`data` or `control`); a statement may
  not control-depend on itself. `//` and `#` start comments; semicolons are
  optional.

DEPENDENCE GRAPH (JSON; `.json` extension)
    {
      "nodes": ["m.c:3", "m.c:15"],
      "edges": [ {"from": "m.c:15", "to": "m.c:3", "kind": "data"} ]
    }

CORPUS MANIFEST (JSON)
    {
      "techniques": ["tarantula", "slice", "hybrid:n=2:formula=tarantula"],
      "cases": [
        {
          "id": "middle-v1",
          "spectrum": "middle.spectrum",
          "graph": "middle.dot",
          "criterion": "middle.c:15",
          "faulty": [["middle.c:8"]],
          "error_type": "ARTIFICIAL",
          "fault_count": 1
        }
      ]
    }

  Relative `spectrum`/`graph` paths resolve against the manifest's
  directory. `faulty` lists fault groups: each inner list is one set of
  statements changed together to repair one error. `error_type` is REAL or
  ARTIFICIAL. `fault_count` defaults to the number of fault groups.
  Techniques are formula names, `formula`, `slice`, or
  `hybrid[:n=<int>][:formula=<name>]`.

RANKING OUTPUT
  TSV: `rank  unit  line  score` rows, best first; score is the formula
  value behind the position (six decimals; lexicographic pairs print as
  `(a,b)`), or `-` for score-less rankings. With --faulty, trailing
  `# inspected: <n>` and `# score: <s>` comment lines.
  JSON: technique, ranking policy, optional symptom statement, universe
  size, entries (rank/unit/line/score; pairs as two-element arrays, missing
  scores as null), optional effectiveness block.

EVALUATION REPORT
  JSON: resolved technique labels; one record per (case, technique) pair
  with status ok/failed, inspection counts and scores or an error message;
  aggregate statistics overall and stratified by error type and fault
  count — per-technique summaries (mean score, cumulative-frequency curve
  of inspection counts) and pairwise comparisons (win counts, smoothed odds
  ratio, rank-sum U and two-sided p-value).
  TSV: the same content as tab-separated tables with `#`-headed sections;
  scores use six decimals, percentages two (half-to-even).
"#;
