//! Command-line front end. The binary forwards to [`run`].

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bounds::relations::{check_relations, RelationRange};
use crate::bounds::{
    exact_max_code, load_records, render_table, save_record, BoundKey, Metric, Oracle, RecordDocument, SearchBudget,
    Variant,
};
use crate::codefile::{parse_word, CodeFile, WordFormat};
use crate::error::{Error, Result};
use crate::lexicode::{build_lexicode, verify_lexicode, CheckMode, LexicodeOptions, OrderedBasis};
use crate::metrics::{edit_distance, edit_distance_with_transcript, strand_hamming, CostModel};
use crate::property::PropertySpec;
use crate::tables;
use crate::z4::{phi, DnaStrand};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "DNALEX_OUT";
const DEFAULT_OUT: &str = "dnalex-out";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dnalex", version, about = "Linear DNA lexicodes over Z4 and small-instance code bounds")]
struct Cli {
    /// Print single-line JSON instead of text summaries.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a lexicode and write it as a code file.
    Construct(ConstructArgs),
    /// Reproduce a bundled reference table (1-4).
    Tables {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        which: u8,
    },
    /// Hamming or edit distance between two strands or Z4 words.
    Distance(DistanceArgs),
    /// Exact maximum code sizes and bound relations.
    Bounds(BoundsArgs),
    /// Convert a word or code file between Z4, DNA and FASTA forms.
    Convert {
        input: String,
        #[arg(long = "to", value_enum)]
        to: Target,
    },
    /// Re-verify a code file against a property.
    Verify {
        file: PathBuf,
        property: String,
        #[arg(long)]
        cost_file: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(short = 'n', long)]
    n: usize,
    /// `canonical`, `random` (uses --seed) or a file with one vector per line.
    #[arg(short = 'b', long, default_value = "canonical")]
    basis: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'P', long)]
    property: String,
    #[arg(long, default_value = "full-check")]
    mode: CheckMode,
    #[arg(long)]
    cost_file: Option<PathBuf>,
    /// Build even if the property fails the multiplicativity check.
    #[arg(long)]
    allow_non_multiplicative: bool,
    /// Output path; `-` for stdout. Defaults to `$DNALEX_OUT/code-n<n>.txt`.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long, conflicts_with = "fasta")]
    dna: bool,
    #[arg(long)]
    fasta: bool,
    /// Print the per-step selection log.
    #[arg(long)]
    log: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Hamming,
    Edit,
}

#[derive(Args, Debug)]
struct DistanceArgs {
    s: String,
    t: String,
    #[arg(long, value_enum, default_value = "edit")]
    metric: MetricArg,
    #[arg(long)]
    cost_file: Option<PathBuf>,
    #[arg(long)]
    transcript: bool,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct BoundsArgs {
    #[command(subcommand)]
    action: Option<BoundsAction>,
    /// Lengths, e.g. `3`, `1..4`, `1,2,5`.
    #[arg(short = 'n', long)]
    n: Option<String>,
    /// Distances; defaults to `all` (0..=n).
    #[arg(short = 'd', long, default_value = "all")]
    d: String,
    /// GC weights; defaults to `all` (0..=n).
    #[arg(short = 'w', long, default_value = "all")]
    w: String,
    #[arg(long, value_enum, default_value = "edit")]
    metric: MetricArg,
    #[arg(long)]
    cost_file: Option<PathBuf>,
    #[arg(long, default_value = "plain")]
    variant: Variant,
    /// Constrain distances to reversed images instead of requiring closure.
    #[arg(long)]
    cross_distance: bool,
    /// Report bounds with status `gap` instead of failing over budget.
    #[arg(long)]
    allow_gap: bool,
    #[arg(long, default_value_t = crate::bounds::DEFAULT_VERTEX_BUDGET)]
    budget: usize,
    #[arg(long)]
    check_relations: bool,
    /// Directory for record files. Defaults to `$DNALEX_OUT/bounds`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append per-key wall times to `timings.log` in the output directory.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum BoundsAction {
    /// Render saved records.
    Export {
        #[arg(long, required = true)]
        table: bool,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Z4,
    Dna,
    Fasta,
}

fn out_root() -> PathBuf {
    std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn cost_model(path: &Option<PathBuf>) -> Result<CostModel> {
    match path {
        Some(p) => CostModel::parse(&fs::read_to_string(p)?),
        None => Ok(CostModel::unit()),
    }
}

/// Parses `3`, `1..4` (inclusive), `1,2,5` or `all` (0..=`all_max`).
fn parse_range(text: &str, all_max: Option<usize>) -> Result<Vec<usize>> {
    let bad = || Error::InvalidKey(format!("bad range {text:?}"));
    if text == "all" {
        return all_max.map(|m| (0..=m).collect()).ok_or_else(bad);
    }
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OverBudget { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// Runs the CLI with `args` (program name first). Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let json = cli.json;
    match cli.command {
        Command::Construct(args) => construct(args, json, out),
        Command::Tables { which } => tables_cmd(which, json, out),
        Command::Distance(args) => distance(args, json, out),
        Command::Bounds(args) => bounds(args, json, out),
        Command::Convert { input, to } => convert(&input, to, json, out),
        Command::Verify { file, property, cost_file } => verify(&file, &property, &cost_file, json, out),
    }
}

fn construct(args: ConstructArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    let cm = cost_model(&args.cost_file)?;
    let p = PropertySpec::parse(&args.property, &cm)?;
    let basis = match args.basis.as_str() {
        "canonical" => OrderedBasis::canonical(args.n)?,
        "random" => OrderedBasis::random(args.n, &mut ChaCha8Rng::seed_from_u64(args.seed))?,
        path => {
            let b = OrderedBasis::parse(&fs::read_to_string(path)?)?;
            if b.len() != args.n {
                return Err(Error::InvalidBasis(format!("basis file has {} vectors, n = {}", b.len(), args.n)));
            }
            b
        }
    };
    let options = LexicodeOptions {
        mode: args.mode,
        allow_non_multiplicative: args.allow_non_multiplicative,
        ..LexicodeOptions::default()
    };
    let code = build_lexicode(&basis, &p, &options)?;
    let format = if args.fasta {
        WordFormat::Fasta
    } else if args.dna {
        WordFormat::Dna
    } else {
        WordFormat::Z4
    };
    let text = CodeFile::from_code(&code, &p.to_string(), &args.mode.to_string()).render(format);
    let target = args.output.unwrap_or_else(|| out_root().join(format!("code-n{}.txt", args.n)));
    let to_stdout = target == Path::new("-");
    if !to_stdout {
        if let Some(dir) = target.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(&target, &text)?;
    }
    let d = code.min_nonzero_weight();
    let report = code.report();
    if json {
        let line = json!({
            "n": args.n,
            "size": code.size(),
            "dH": d,
            "minGC": code.min_gc_weight(),
            "gens": code.generators().len(),
            "generators": code.generators(),
            "property": p.to_string(),
            "mode": args.mode,
            "linear": report.is_some_and(|r| r.is_linear()),
            "verified": report.is_some_and(|r| r.passes()),
        });
        writeln!(out, "{line}")?;
    } else {
        let d = d.map_or("-".to_string(), |d| d.to_string());
        writeln!(
            out,
            "n={} size={} dH={d} minGC={} gens={}",
            args.n,
            code.size(),
            code.min_gc_weight(),
            code.generators().len()
        )?;
        if let Some(r) = report.filter(|r| !r.passes()) {
            writeln!(out, "FINDING verification failed:\n{r}")?;
        }
        if args.log {
            for step in code.selection_log() {
                let accepted = step.accepted.map_or("none".to_string(), |a| a.to_string());
                writeln!(
                    out,
                    "step {}: tested {} accepted {accepted} rejections logged {} dropped {}",
                    step.step,
                    step.tested,
                    step.rejections.len(),
                    step.rejections_dropped
                )?;
            }
        }
    }
    if to_stdout {
        write!(out, "{text}")?;
    }
    Ok(EXIT_OK)
}

fn tables_cmd(which: u8, json: bool, out: &mut dyn Write) -> Result<i32> {
    tables::verify_checksums()?;
    let (text, value) = match which {
        1 => {
            let r = tables::reproduce_table1()?;
            (r.to_string(), serde_json::to_value(&r)?)
        }
        2 => {
            let r = tables::reproduce_table2()?;
            (r.to_string(), serde_json::to_value(&r)?)
        }
        3 => {
            let r = tables::reproduce_table3()?;
            (r.to_string(), serde_json::to_value(&r)?)
        }
        _ => {
            let r = tables::reproduce_table4()?;
            (r.to_string(), serde_json::to_value(&r)?)
        }
    };
    if json {
        writeln!(out, "{value}")?;
    } else {
        write!(out, "{text}")?;
    }
    Ok(EXIT_OK)
}

/// Reads a strand, or a Z4 digit string mapped to its strand.
fn strand_arg(text: &str) -> Result<DnaStrand> {
    if !text.is_empty() && text.chars().all(|c| c.is_ascii_digit()) {
        Ok(phi(&text.parse()?))
    } else {
        text.parse()
    }
}

fn distance(args: DistanceArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    let s = strand_arg(&args.s)?;
    let t = strand_arg(&args.t)?;
    let cm = cost_model(&args.cost_file)?;
    let (value, transcript) = match args.metric {
        MetricArg::Hamming => (strand_hamming(s.bases(), t.bases())? as f64, None),
        MetricArg::Edit if args.transcript => {
            let (v, tr) = edit_distance_with_transcript(s.bases(), t.bases(), &cm);
            (v, Some(tr))
        }
        MetricArg::Edit => (edit_distance(s.bases(), t.bases(), &cm), None),
    };
    let ops: Vec<String> = transcript.iter().flat_map(|tr| tr.ops.iter().map(|o| o.to_string())).collect();
    if json {
        let mut v = json!({ "s": s, "t": t, "distance": value });
        if transcript.is_some() {
            v["transcript"] = json!(ops);
        }
        writeln!(out, "{v}")?;
    } else {
        writeln!(out, "{value}")?;
        for op in ops {
            writeln!(out, "  {op}")?;
        }
    }
    Ok(EXIT_OK)
}

fn bounds(args: BoundsArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    if let Some(BoundsAction::Export { dir, .. }) = args.action {
        let dir = dir.or(args.out).unwrap_or_else(|| out_root().join("bounds"));
        let records = load_records(&dir)?;
        if json {
            for r in &records {
                writeln!(out, "{}", serde_json::to_string(&RecordDocument::from(r))?)?;
            }
        } else {
            write!(out, "{}", render_table(&records))?;
        }
        return Ok(EXIT_OK);
    }
    let ns = parse_range(args.n.as_deref().ok_or_else(|| Error::InvalidKey("-n is required".into()))?, None)?;
    let metric = match args.metric {
        MetricArg::Hamming => Metric::Hamming,
        MetricArg::Edit => Metric::Edit(cost_model(&args.cost_file)?),
    };
    let budget = SearchBudget { max_vertices: args.budget, allow_gap: args.allow_gap, ..SearchBudget::default() };
    let dir = args.out.clone().unwrap_or_else(|| out_root().join("bounds"));
    let mut timings = String::new();
    let mut status = EXIT_OK;
    'keys: for &n in &ns {
        for d in parse_range(&args.d, Some(n))? {
            for w in parse_range(&args.w, Some(n))? {
                if d > n || w > n {
                    continue;
                }
                let key = BoundKey { n, d, w: Some(w), metric: metric.clone(), variant: args.variant, cross_distance: args.cross_distance };
                let start = Instant::now();
                let record = match exact_max_code(&key, &budget) {
                    Ok(r) => r,
                    Err(e @ Error::OverBudget { .. }) => {
                        writeln!(out, "{key}: over budget ({e}); rerun with --allow-gap")?;
                        status = EXIT_BUDGET;
                        break 'keys;
                    }
                    Err(e) => return Err(e),
                };
                if args.timings {
                    timings.push_str(&format!("{key}\t{} ms\n", start.elapsed().as_millis()));
                }
                save_record(&record, &dir)?;
                if json {
                    writeln!(out, "{}", serde_json::to_string(&RecordDocument::from(&record))?)?;
                } else {
                    let value = match record.value() {
                        Some(v) => format!("{v} exact"),
                        None => format!("{}..{} gap", record.lower, record.upper),
                    };
                    writeln!(out, "{key} = {value} [{}]", record.method)?;
                }
            }
        }
    }
    if args.timings && !timings.is_empty() {
        fs::create_dir_all(&dir)?;
        let mut log = fs::OpenOptions::new().create(true).append(true).open(dir.join("timings.log"))?;
        log.write_all(timings.as_bytes())?;
    }
    if args.check_relations && status == EXIT_OK {
        let max_n = ns.iter().copied().max().unwrap_or(0);
        let range = RelationRange { max_n, metrics: vec![metric], cross_distance: args.cross_distance };
        let mut oracle = Oracle::new(SearchBudget { allow_gap: true, ..budget });
        let report = check_relations(&range, &mut oracle)?;
        if json {
            writeln!(out, "{}", serde_json::to_string(&report)?)?;
        } else {
            write!(out, "{report}")?;
        }
    }
    Ok(status)
}

fn convert(input: &str, to: Target, json: bool, out: &mut dyn Write) -> Result<i32> {
    let path = Path::new(input);
    let is_word = parse_word(input).is_ok();
    if !is_word && path.is_file() {
        let file = CodeFile::parse(&fs::read_to_string(path)?)?;
        let format = match to {
            Target::Z4 => WordFormat::Z4,
            Target::Dna => WordFormat::Dna,
            Target::Fasta => WordFormat::Fasta,
        };
        write!(out, "{}", file.render(format))?;
        return Ok(EXIT_OK);
    }
    let word = parse_word(input).map_err(|message| Error::CodeFile { line: 0, message })?;
    let output = match to {
        Target::Z4 => word.to_string(),
        Target::Dna => phi(&word).to_string(),
        Target::Fasta => format!(">cw0\n{}", phi(&word)),
    };
    if json {
        writeln!(out, "{}", json!({ "input": input, "output": output }))?;
    } else {
        writeln!(out, "{output}")?;
    }
    Ok(EXIT_OK)
}

fn verify(file: &Path, property: &str, cost_file: &Option<PathBuf>, json: bool, out: &mut dyn Write) -> Result<i32> {
    let cm = cost_model(cost_file)?;
    let p = PropertySpec::parse(property, &cm)?;
    let code = CodeFile::parse(&fs::read_to_string(file)?)?;
    if let Some(n) = code.n {
        p.validate(n)?;
    }
    let report = verify_lexicode(&code.codewords, &p);
    if json {
        let mut v = serde_json::to_value(&report)?;
        v["linear"] = json!(report.is_linear());
        v["passes"] = json!(report.passes());
        writeln!(out, "{v}")?;
    } else {
        writeln!(out, "{report}")?;
        writeln!(out, "verification: {}", if report.passes() { "PASS" } else { "FAIL" })?;
    }
    Ok(EXIT_OK)
}
