//! Command-line front end: argument parsing, the memory gate, CSV output and
//! gnuplot script generation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser};
use thiserror::Error;

use crate::bench::{
    check_admissible, model_peak_bytes, run_bench, BenchError, BenchId, BenchResult, BenchSpec,
    Inadmissible, ALLOWED_K,
};
use crate::block::validate_block_capacity;
use crate::sequence::StructureId;

/// Exact CSV header line, without the newline.
pub const CSV_HEADER: &str = "bench,impl,n,k,seed,repeats,min_ticks,checksum,model_bytes";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

const BYTES_PER_GB: f64 = 1e9;

#[derive(Debug, Parser)]
#[command(
    name = "seqbench",
    version,
    about = "Benchmark indexed sequence representations and emit CSV",
    group(ArgGroup::new("sizes").required(true).args(["n", "n_sweep"]))
)]
struct Args {
    /// Benchmarks to run (comma list); all when omitted.
    #[arg(long, value_delimiter = ',')]
    bench: Vec<BenchId>,

    /// Structures to run (comma list); all six when omitted.
    #[arg(long = "impl", value_delimiter = ',')]
    impls: Vec<StructureId>,

    /// Element counts (comma list).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,

    /// Geometric sweep `min:max:factor`.
    #[arg(long, value_name = "MIN:MAX:FACTOR")]
    n_sweep: Option<String>,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    #[arg(long, default_value_t = 5)]
    repeats: u32,

    /// Random-increment bounds for fairbench-rand (comma list of 32, 64, 128).
    #[arg(long, value_delimiter = ',', default_value = "32")]
    k: Vec<u64>,

    #[arg(long, default_value_t = crate::block::DEFAULT_BLOCK_CAPACITY)]
    block_capacity: usize,

    /// Largest modeled peak footprint allowed for a single run, in 10^9 bytes.
    #[arg(long, env = "SEQBENCH_MEM_LIMIT_GB", default_value_t = 4.0)]
    mem_limit_gb: f64,

    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write a gnuplot script for the results to this path.
    #[arg(long, value_name = "PATH")]
    emit_gnuplot: Option<PathBuf>,
}

/// A validated bench matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub benches: Vec<BenchId>,
    pub structures: Vec<StructureId>,
    pub ns: Vec<usize>,
    pub seed: u64,
    pub repeats: u32,
    pub ks: Vec<u64>,
    pub block_capacity: usize,
    pub mem_limit_bytes: u128,
    pub out: Option<PathBuf>,
    pub gnuplot: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("invalid value for {flag}: {message}")]
    Usage { flag: &'static str, message: String },
    #[error(transparent)]
    Inadmissible(#[from] Inadmissible),
    #[error(
        "{structure} at n = {n} needs a modeled {needed} bytes, over the {limit}-byte limit (--mem-limit-gb)"
    )]
    MemoryLimit {
        structure: StructureId,
        n: usize,
        needed: u128,
        limit: u128,
    },
    #[error("{bench}/{structure} at n = {n}: {source}")]
    Bench {
        bench: BenchId,
        structure: StructureId,
        n: usize,
        source: BenchError,
    },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("no results to write")]
    NoResults,
    #[error("CSV has no data rows; refusing to write a plot script")]
    EmptyCsv,
    #[error("malformed CSV at line {line}: {message}")]
    MalformedCsv { line: usize, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Usage { .. }
            | CliError::Inadmissible(_)
            | CliError::MemoryLimit { .. }
            | CliError::NoResults
            | CliError::EmptyCsv
            | CliError::MalformedCsv { .. } => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Bench { .. } => EXIT_FAILURE,
        }
    }
}

fn io_error(path: &Path, source: io::Error) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Parses `min:max:factor` into the geometric list `min, min*f, ...` up to `max`.
pub fn parse_sweep(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = |message: String| CliError::Usage {
        flag: "--n-sweep",
        message,
    };
    let parts: Vec<&str> = text.split(':').collect();
    let [min, max, factor] = parts[..] else {
        return Err(bad(format!("expected MIN:MAX:FACTOR, got `{text}`")));
    };
    let min: usize = min.parse().map_err(|_| bad(format!("bad MIN `{min}`")))?;
    let max: usize = max.parse().map_err(|_| bad(format!("bad MAX `{max}`")))?;
    let factor: f64 = factor
        .parse()
        .map_err(|_| bad(format!("bad FACTOR `{factor}`")))?;
    if min == 0 || min > max {
        return Err(bad(format!("need 0 < MIN <= MAX, got {min}:{max}")));
    }
    if !(factor.is_finite() && factor > 1.0) {
        return Err(bad(format!("FACTOR must exceed 1, got {factor}")));
    }
    let mut ns = Vec::new();
    let mut n = min;
    while n <= max {
        ns.push(n);
        let next = (n as f64 * factor).round();
        if next >= max as f64 + 1.0 {
            break;
        }
        n = (next as usize).max(n + 1);
    }
    Ok(ns)
}

impl RunConfig {
    fn from_args(args: Args) -> Result<Self, CliError> {
        let ns = match &args.n_sweep {
            Some(sweep) => parse_sweep(sweep)?,
            None => args.n.clone(),
        };
        if args.repeats == 0 {
            return Err(CliError::Usage {
                flag: "--repeats",
                message: "must be at least 1".into(),
            });
        }
        if let Some(&k) = args.k.iter().find(|k| !ALLOWED_K.contains(k)) {
            return Err(CliError::Usage {
                flag: "--k",
                message: format!("{k} is not one of 32, 64, 128"),
            });
        }
        if let Err(e) = validate_block_capacity(args.block_capacity) {
            return Err(CliError::Usage {
                flag: "--block-capacity",
                message: e.to_string(),
            });
        }
        if !(args.mem_limit_gb.is_finite() && args.mem_limit_gb > 0.0) {
            return Err(CliError::Usage {
                flag: "--mem-limit-gb",
                message: format!("must be a positive number, got {}", args.mem_limit_gb),
            });
        }

        let explicit = !args.bench.is_empty() && !args.impls.is_empty();
        let mut config = RunConfig {
            benches: if args.bench.is_empty() {
                BenchId::ALL.to_vec()
            } else {
                dedup(args.bench)
            },
            structures: if args.impls.is_empty() {
                StructureId::STUDIED.to_vec()
            } else {
                dedup(args.impls)
            },
            ns: dedup(ns),
            seed: args.seed,
            repeats: args.repeats,
            ks: dedup(args.k),
            block_capacity: args.block_capacity,
            mem_limit_bytes: (args.mem_limit_gb * BYTES_PER_GB) as u128,
            out: args.out,
            gnuplot: args.emit_gnuplot,
        };

        for &n in &config.ns {
            for &bench in &config.benches {
                if n < bench.min_n() {
                    return Err(CliError::Usage {
                        flag: "--n",
                        message: format!("{bench} needs n >= {}, got {n}", bench.min_n()),
                    });
                }
                // When either list was left to its default, hopeless pairings
                // are skipped instead of rejected.
                if explicit {
                    for &structure in &config.structures {
                        check_admissible(bench, structure, n)?;
                    }
                }
            }
        }
        if !explicit {
            let benches = config.benches.clone();
            config.structures.retain(|&s| {
                benches
                    .iter()
                    .any(|&b| config.ns.iter().any(|&n| check_admissible(b, s, n).is_ok()))
            });
        }
        if config.structures.is_empty() {
            return Err(CliError::Usage {
                flag: "--impl",
                message: "no structure is admitted for the requested benches and sizes".into(),
            });
        }
        for spec in config.specs() {
            let needed = model_peak_bytes(spec.structure, spec.n, spec.block_capacity);
            if needed > config.mem_limit_bytes {
                return Err(CliError::MemoryLimit {
                    structure: spec.structure,
                    n: spec.n,
                    needed,
                    limit: config.mem_limit_bytes,
                });
            }
        }
        Ok(config)
    }

    /// Every run in the matrix, skipping inadmissible pairings.
    pub fn specs(&self) -> Vec<BenchSpec> {
        let mut specs = Vec::new();
        for &bench in &self.benches {
            let ks: Vec<Option<u64>> = if bench.uses_k() {
                self.ks.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            for &structure in &self.structures {
                for &n in &self.ns {
                    if check_admissible(bench, structure, n).is_err() {
                        continue;
                    }
                    for &k in &ks {
                        specs.push(BenchSpec {
                            bench,
                            structure,
                            n,
                            k,
                            seed: self.seed,
                            repeats: self.repeats,
                            block_capacity: self.block_capacity,
                        });
                    }
                }
            }
        }
        specs
    }
}

fn dedup<T: PartialEq>(items: Vec<T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for item in items {
        if !out.contains(&item) {
            out.push(item);
        }
    }
    out
}

/// Parses a full argv (program name first) into a validated configuration.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    RunConfig::from_args(args)
}

/// Runs every spec of `config` in sequence.
pub fn run(config: &RunConfig) -> Result<Vec<BenchResult>, CliError> {
    config
        .specs()
        .into_iter()
        .map(|spec| {
            run_bench(&spec).map_err(|source| CliError::Bench {
                bench: spec.bench,
                structure: spec.structure,
                n: spec.n,
                source,
            })
        })
        .collect()
}

/// Renders results as CSV, sorted by (bench, impl, n, k, seed).
pub fn emit_csv(results: &[BenchResult]) -> Result<String, CliError> {
    if results.is_empty() {
        return Err(CliError::NoResults);
    }
    let mut rows: Vec<&BenchResult> = results.iter().collect();
    rows.sort_by_key(|r| {
        (
            r.spec.bench.as_str(),
            r.spec.structure.as_str(),
            r.spec.n,
            r.spec.k.unwrap_or(0),
            r.spec.seed,
        )
    });
    let mut text = String::with_capacity(64 * (rows.len() + 1));
    text.push_str(CSV_HEADER);
    text.push('\n');
    for r in rows {
        let s = &r.spec;
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{},{},{}",
            s.bench,
            s.structure,
            s.n,
            s.k.unwrap_or(0),
            s.seed,
            s.repeats,
            r.min_ticks,
            r.checksum,
            r.model_bytes
        );
    }
    Ok(text)
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| io_error(path, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| io_error(Path::new("<stdout>"), e))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CsvRow {
    bench: String,
    structure: String,
    n: u64,
    k: u64,
    min_ticks: u64,
}

fn parse_csv(text: &str) -> Result<Vec<CsvRow>, CliError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == CSV_HEADER => {}
        _ => {
            return Err(CliError::MalformedCsv {
                line: 1,
                message: format!("expected header `{CSV_HEADER}`"),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let malformed = |message: String| CliError::MalformedCsv {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(malformed(format!(
                "expected 9 fields, found {}",
                fields.len()
            )));
        }
        let num = |idx: usize| -> Result<u64, CliError> {
            fields[idx]
                .parse()
                .map_err(|_| malformed(format!("`{}` is not an unsigned integer", fields[idx])))
        };
        rows.push(CsvRow {
            bench: fields[0].to_string(),
            structure: fields[1].to_string(),
            n: num(2)?,
            k: num(3)?,
            min_ticks: num(6)?,
        });
    }
    if rows.is_empty() {
        return Err(CliError::EmptyCsv);
    }
    Ok(rows)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Builds a gnuplot script from CSV text: one PNG per (bench, k), ticks
/// against N on a log-scaled axis, one curve per structure. The data is
/// inlined, so the script does not depend on the CSV's location.
pub fn gnuplot_script(csv: &str) -> Result<String, CliError> {
    let rows = parse_csv(csv)?;
    // (bench, k) -> impl -> n -> fastest ticks
    let mut groups: BTreeMap<(String, u64), BTreeMap<String, BTreeMap<u64, u64>>> = BTreeMap::new();
    for row in rows {
        let ticks = groups
            .entry((row.bench, row.k))
            .or_default()
            .entry(row.structure)
            .or_default()
            .entry(row.n)
            .or_insert(u64::MAX);
        *ticks = (*ticks).min(row.min_ticks);
    }

    let mut s = String::new();
    s.push_str("set terminal pngcairo size 960,640\n");
    s.push_str("set logscale x\n");
    s.push_str("set xlabel \"N\"\n");
    s.push_str("set ylabel \"min ticks (ns)\"\n");
    s.push_str("set key left top\n");
    s.push_str("set grid\n");
    let mut block = 0usize;
    for ((bench, k), curves) in &groups {
        let (title, file) = if *k == 0 {
            (bench.clone(), format!("{bench}.png"))
        } else {
            (format!("{bench} k={k}"), format!("{bench}-k{k}.png"))
        };
        let mut plots = Vec::new();
        s.push('\n');
        for (structure, points) in curves {
            let _ = writeln!(s, "$d{block} << EOD");
            for (n, ticks) in points {
                let _ = writeln!(s, "{n} {ticks}");
            }
            s.push_str("EOD\n");
            plots.push(format!(
                "$d{block} using 1:2 with linespoints title {}",
                quote(structure)
            ));
            block += 1;
        }
        let _ = writeln!(s, "set title {}", quote(&title));
        let _ = writeln!(s, "set output {}", quote(&file));
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    }
    s.push_str("unset output\n");
    Ok(s)
}

/// Reads the CSV at `csv_path` and builds its gnuplot script.
pub fn emit_gnuplot(csv_path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(csv_path).map_err(|e| io_error(csv_path, e))?;
    gnuplot_script(&text)
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match try_main(argv) {
        Ok(()) => EXIT_OK,
        Err(CliError::Clap(e)) => {
            let code = e.exit_code();
            let _ = e.print();
            code
        }
        Err(e) => {
            eprintln!("seqbench: {e}");
            e.exit_code()
        }
    }
}

fn try_main<I, T>(argv: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = parse_args(argv)?;
    let results = run(&config)?;
    let csv = emit_csv(&results)?;
    write_text(config.out.as_deref(), &csv)?;
    if let Some(script_path) = &config.gnuplot {
        let script = match &config.out {
            Some(csv_path) => emit_gnuplot(csv_path)?,
            None => gnuplot_script(&csv)?,
        };
        std::fs::write(script_path, script).map_err(|e| io_error(script_path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &str) -> Result<RunConfig, CliError> {
        parse_args(std::iter::once("seqbench").chain(args.split_whitespace()))
    }

    #[test]
    fn valid_matrix() {
        let c = parse("--bench fairbench --impl linkedlist,arrayblock --n 1000000").unwrap();
        assert_eq!(c.benches, vec![BenchId::Fairbench]);
        assert_eq!(
            c.structures,
            vec![StructureId::LinkedList, StructureId::ArrayBlock]
        );
        assert_eq!(c.ns, vec![1_000_000]);
        assert_eq!((c.seed, c.repeats, c.block_capacity), (1, 5, 2048));
        assert_eq!(c.mem_limit_bytes, 4_000_000_000);
        assert_eq!(c.specs().len(), 2);
    }

    #[test]
    fn explicit_inadmissible_pair_is_rejected() {
        let e = parse("--impl singlelist --bench addlast --n 10").unwrap_err();
        assert!(matches!(e, CliError::Inadmissible(_)));
        assert_eq!(e.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn memory_gate_rejects_large_linked_list() {
        let e = parse("--n 300000000 --impl linkedlist --mem-limit-gb 4").unwrap_err();
        match e {
            CliError::MemoryLimit { needed, limit, .. } => {
                assert_eq!(needed, 24 * 300_000_000 + 40);
                assert_eq!(limit, 4_000_000_000);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn defaulted_lists_skip_hopeless_pairs() {
        let c = parse("--impl singlelist --n 100").unwrap();
        assert!(c.specs().iter().all(|s| s.bench != BenchId::AddLast));
        let c = parse("--bench stroustrup --n 100000").unwrap();
        assert!(!c.structures.contains(&StructureId::NoCacheList));
    }

    #[test]
    fn usage_errors_name_the_flag() {
        for (args, flag) in [
            ("--n 10 --k 48", "--k"),
            ("--n 10 --repeats 0", "--repeats"),
            ("--n 10 --block-capacity 100", "--block-capacity"),
            ("--n-sweep 10:5:2", "--n-sweep"),
            ("--n 10 --mem-limit-gb 0", "--mem-limit-gb"),
        ] {
            let e = parse(args).unwrap_err();
            assert_eq!(e.exit_code(), EXIT_USAGE, "{args}");
            assert!(e.to_string().contains(flag), "{args}: {e}");
        }
        let e = parse("--n 10 --bench quicksort").unwrap_err();
        assert!(e.to_string().contains("--bench"), "{e}");
        assert_eq!(
            parse("--n 10 --frobnicate").unwrap_err().exit_code(),
            EXIT_USAGE
        );
        assert_eq!(
            parse("--impl linkedlist").unwrap_err().exit_code(),
            EXIT_USAGE
        );
    }

    #[test]
    fn sweep_is_geometric() {
        assert_eq!(
            parse_sweep("1000:100000:10").unwrap(),
            vec![1000, 10_000, 100_000]
        );
        assert_eq!(parse_sweep("10:50:2").unwrap(), vec![10, 20, 40]);
        assert_eq!(parse_sweep("3:5:1.1").unwrap(), vec![3, 4, 5]);
        assert!(parse_sweep("10:20").is_err());
        assert!(parse_sweep("10:20:1").is_err());
    }

    #[test]
    fn k_only_multiplies_fairbench_rand() {
        let c =
            parse("--bench fairbench,fairbench-rand --impl arrayring --n 10 --k 32,128").unwrap();
        let ks: Vec<_> = c.specs().iter().map(|s| (s.bench, s.k)).collect();
        assert_eq!(
            ks,
            vec![
                (BenchId::Fairbench, None),
                (BenchId::FairbenchRand, Some(32)),
                (BenchId::FairbenchRand, Some(128)),
            ]
        );
    }

    fn result(bench: BenchId, structure: StructureId, n: usize, ticks: u64) -> BenchResult {
        BenchResult {
            spec: BenchSpec::new(bench, structure, n),
            min_ticks: ticks,
            checksum: 7,
            model_bytes: 99,
        }
    }

    #[test]
    fn csv_layout() {
        let one = emit_csv(&[result(BenchId::Fairbench, StructureId::LinkedList, 10, 5)]).unwrap();
        assert_eq!(
            one,
            format!("{CSV_HEADER}\nfairbench,linkedlist,10,0,1,5,5,7,99\n")
        );
        assert!(matches!(emit_csv(&[]), Err(CliError::NoResults)));

        let csv = emit_csv(&[
            result(BenchId::Stroustrup, StructureId::ArrayList, 10, 1),
            result(BenchId::Fairbench, StructureId::LinkedList, 100, 1),
            result(BenchId::Fairbench, StructureId::LinkedList, 20, 1),
            result(BenchId::Fairbench, StructureId::ArrayBlock, 100, 1),
        ])
        .unwrap();
        let keys: Vec<_> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').take(3).collect::<Vec<_>>().join(","))
            .collect();
        assert_eq!(
            keys,
            [
                "fairbench,arrayblock,100",
                "fairbench,linkedlist,20",
                "fairbench,linkedlist,100",
                "stroustrup,arraylist,10"
            ]
        );
    }

    #[test]
    fn gnuplot_one_curve_per_impl() {
        let mut results = Vec::new();
        for structure in [StructureId::LinkedList, StructureId::ArrayBlock] {
            for n in [10, 100, 1000, 10_000, 100_000] {
                results.push(result(BenchId::Fairbench, structure, n, n as u64));
            }
        }
        let script = gnuplot_script(&emit_csv(&results).unwrap()).unwrap();
        assert_eq!(script.matches("with linespoints").count(), 2);
        assert!(script.contains("set logscale x"));
        assert!(script.contains("title \"linkedlist\""));
        assert!(script.contains("set output \"fairbench.png\""));
    }

    #[test]
    fn gnuplot_refuses_empty_or_malformed() {
        assert!(matches!(
            gnuplot_script(&format!("{CSV_HEADER}\n")),
            Err(CliError::EmptyCsv)
        ));
        assert!(matches!(
            gnuplot_script("a,b\n"),
            Err(CliError::MalformedCsv { line: 1, .. })
        ));
        assert!(matches!(
            gnuplot_script(&format!("{CSV_HEADER}\nfairbench,x,1\n")),
            Err(CliError::MalformedCsv { line: 2, .. })
        ));
    }

    #[test]
    fn missing_csv_is_io_error() {
        let e = emit_gnuplot(Path::new("/nonexistent/results.csv")).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_IO);
    }
}
