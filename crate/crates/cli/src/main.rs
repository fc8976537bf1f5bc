//! Command-line interface for the matroid codec and its counting oracles.
//!
//! Every command writes one JSON document (or JSON lines, for streams) to
//! stdout; identical invocations produce byte-identical output.  Exit codes:
//! 0 success, 1 domain error (reported as JSON on stderr), 2 usage error.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use matroid_codec::bounds::{
    inequality_suite, mnr_log_upper, params, rank_profile, theorem1_log_bound, BoundParams,
    InequalitySuite, MnrBound, RankProfile, Theorem1Bound,
};
use matroid_codec::codec::{decode, encode, encode_diagnostic, Encoding};
use matroid_codec::enumerate::{count_report, enumerate_matroids, enumerate_sparse_paving};
use matroid_codec::johnson::{
    binomial, count_stable_sets, graham_sloane_partition, johnson_spectrum, max_stable_set,
    verify_spectrum_annihilation, RSubset, SubsetIndexer,
};
use matroid_codec::matroid::{
    basis_indicator_from_lists, validate_basis_family, validate_rank_axioms, Matroid, MatroidJson,
};
use matroid_codec::{Error, Limits};

/// Environment override for the enumeration budget (candidate-space bits).
const ENUM_BITS_VAR: &str = "MATROID_CODEC_ENUM_BITS";

#[derive(Parser)]
#[command(
    name = "matroid-codec",
    version,
    about = "Compressed matroid descriptions over Johnson graphs: codec, oracles, bounds"
)]
struct Cli {
    /// Cap on worker threads used by parallel enumeration.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// Read from this file instead of stdin.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run both matroid validators on a matroid JSON document.
    Validate(InputArg),
    /// Compress a matroid JSON document into an encoding.
    Encode(InputArg),
    /// Reconstruct a matroid from an encoding JSON document.
    Decode(InputArg),
    /// Exhaustively encode and decode every admissible matroid.
    Roundtrip {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Stream matroids as JSON lines.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
        /// Stream one sparse paving matroid per stable set instead.
        #[arg(long)]
        sparse_paving: bool,
    },
    /// Exact count tables for one ground-set size.
    Count {
        #[arg(long)]
        n: usize,
        /// Aligned plain-text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Stable-set computations on J(n, r).
    Stable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Report only the maximum stable set.
        #[arg(long)]
        max: bool,
        /// Report only the exact stable-set count.
        #[arg(long)]
        count: bool,
    },
    /// Bound parameters, count bounds, inequality suite and rank profile.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
        /// Plain-text tables instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Sum-residue stable partition with stability verdicts.
    Gs {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Johnson spectrum and exact annihilation verdict.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global();
    }
    let limits = limits_from_env();
    match run(cli.command, &limits) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let report = json!({ "error": { "kind": failure.kind, "message": failure.message } });
            eprintln!("{report}");
            ExitCode::from(1)
        }
    }
}

struct Failure {
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            kind: "io",
            message: e.to_string(),
        }
    }
}

fn limits_from_env() -> Limits {
    let mut limits = Limits::default();
    if let Ok(raw) = std::env::var(ENUM_BITS_VAR) {
        if let Ok(bits) = raw.trim().parse::<usize>() {
            limits.enum_bits = bits;
        }
    }
    limits
}

fn read_input(arg: &InputArg) -> Result<String, Failure> {
    match &arg.input {
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn run(command: Command, limits: &Limits) -> Result<(), Failure> {
    match command {
        Command::Validate(input) => cmd_validate(&read_input(&input)?),
        Command::Encode(input) => cmd_encode(&read_input(&input)?),
        Command::Decode(input) => cmd_decode(&read_input(&input)?),
        Command::Roundtrip { n, r } => cmd_roundtrip(n, r, limits),
        Command::Enumerate {
            n,
            r,
            sparse_paving,
        } => cmd_enumerate(n, r, sparse_paving, limits),
        Command::Count { n, table } => cmd_count(n, table, limits),
        Command::Stable { n, r, max, count } => cmd_stable(n, r, max, count, limits),
        Command::Bounds { n, r, table } => cmd_bounds(n, r, table, limits),
        Command::Gs { n, r } => cmd_gs(n, r),
        Command::Spectrum { n, r } => cmd_spectrum(n, r),
    }
}

fn cmd_validate(text: &str) -> Result<(), Failure> {
    let raw: MatroidJson = serde_json::from_str(text).map_err(|e| Failure {
        kind: "invalid_format",
        message: format!("matroid JSON: {e}"),
    })?;
    let bases = basis_indicator_from_lists(raw.n, raw.r, &raw.bases)?;
    let exchange = validate_basis_family(raw.n, raw.r, &bases)?;
    let rank_axioms = if raw.n <= 12 {
        Some(validate_rank_axioms(raw.n, raw.r, &bases)?)
    } else {
        None
    };
    let verdict = |violation: Option<String>| match violation {
        None => json!({ "ok": true }),
        Some(v) => json!({ "ok": false, "violation": v }),
    };
    let report = json!({
        "n": raw.n,
        "r": raw.r,
        "bases": bases.count_ones(),
        "exchange": verdict(exchange.map(|v| v.to_string())),
        "rank_axioms": match rank_axioms {
            Some(result) => verdict(result.map(|v| format!("{v:?}"))),
            None => json!({ "ok": serde_json::Value::Null, "skipped": "ground set above the rank-axiom budget" }),
        },
    });
    emit(&report);
    Ok(())
}

fn cmd_encode(text: &str) -> Result<(), Failure> {
    let matroid = Matroid::from_json_str(text)?;
    let (encoding, _) = encode(&matroid)?;
    println!("{}", encoding.to_json_string());
    Ok(())
}

fn cmd_decode(text: &str) -> Result<(), Failure> {
    let encoding = Encoding::from_json_str(text)?;
    let matroid = decode(&encoding)?;
    println!("{}", matroid.to_json_string());
    Ok(())
}

#[derive(Serialize)]
struct RoundtripRankReport {
    r: usize,
    matroids: usize,
    admissible: usize,
    mismatches: usize,
    max_selected: usize,
    max_cover: usize,
    max_available: usize,
    max_leftover_degree: usize,
    /// Smallest slack of the selected-set budget, `sigma_tilde*N - |selected|`.
    min_selected_margin: Option<f64>,
    /// Smallest slack of the available-set budget, `alpha*N - |available|`.
    min_available_margin: Option<f64>,
}

#[derive(Serialize)]
struct RoundtripReport {
    n: usize,
    ranks: Vec<RoundtripRankReport>,
    matroids: usize,
    admissible: usize,
    mismatches: usize,
}

fn cmd_roundtrip(n: usize, rank: Option<usize>, limits: &Limits) -> Result<(), Failure> {
    if n < 2 {
        return Err(Error::GroundSetSize { n, max: 63 }.into());
    }
    let ranks: Vec<usize> = match rank {
        Some(r) => {
            if r == 0 || r >= n {
                return Err(Error::DegenerateRank { r, n }.into());
            }
            vec![r]
        }
        None => (1..n).collect(),
    };
    let mut report = RoundtripReport {
        n,
        ranks: Vec::new(),
        matroids: 0,
        admissible: 0,
        mismatches: 0,
    };
    for r in ranks {
        let mut row = RoundtripRankReport {
            r,
            matroids: 0,
            admissible: 0,
            mismatches: 0,
            max_selected: 0,
            max_cover: 0,
            max_available: 0,
            max_leftover_degree: 0,
            min_selected_margin: None,
            min_available_margin: None,
        };
        for m in enumerate_matroids(n, r, limits)? {
            row.matroids += 1;
            let (loops, coloops) = m.loops_coloops();
            if loops != 0 || coloops != 0 {
                continue;
            }
            row.admissible += 1;
            let (enc, trace) = encode_diagnostic(&m)?;
            let back = decode(&enc)?;
            if back != m {
                row.mismatches += 1;
            }
            let rr = enc.working_rank();
            let p = params(n, rr)?;
            let vertices = binomial(n, rr) as f64;
            let selected_margin = p.sigma_tilde * vertices - trace.selected.len() as f64;
            let available_margin = vertices / p.alpha_den as f64 - trace.available.len() as f64;
            row.min_selected_margin = Some(match row.min_selected_margin {
                Some(v) => v.min(selected_margin),
                None => selected_margin,
            });
            row.min_available_margin = Some(match row.min_available_margin {
                Some(v) => v.min(available_margin),
                None => available_margin,
            });
            row.max_selected = row.max_selected.max(trace.selected.len());
            row.max_cover = row.max_cover.max(trace.cover.len());
            row.max_available = row.max_available.max(trace.available.len());
            let ix = SubsetIndexer::new(n, rr)?;
            for (a, &i) in trace.available.iter().enumerate() {
                let x = ix.unrank(i)?;
                let degree = trace
                    .available
                    .iter()
                    .enumerate()
                    .filter(|&(b, &j)| a != b && x.adjacent(ix.unrank(j).unwrap()))
                    .count();
                row.max_leftover_degree = row.max_leftover_degree.max(degree);
            }
        }
        report.matroids += row.matroids;
        report.admissible += row.admissible;
        report.mismatches += row.mismatches;
        report.ranks.push(row);
    }
    emit(&report);
    Ok(())
}

fn cmd_enumerate(
    n: usize,
    rank: Option<usize>,
    sparse_paving: bool,
    limits: &Limits,
) -> Result<(), Failure> {
    let ranks: Vec<usize> = match rank {
        Some(r) => vec![r],
        None if sparse_paving => (1..n).collect(),
        None => (0..=n).collect(),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for r in ranks {
        if sparse_paving {
            for m in enumerate_sparse_paving(n, r, limits)? {
                writeln!(out, "{}", m.to_json_string())?;
            }
        } else {
            for m in enumerate_matroids(n, r, limits)? {
                writeln!(out, "{}", m.to_json_string())?;
            }
        }
    }
    Ok(())
}

fn cmd_count(n: usize, table: bool, limits: &Limits) -> Result<(), Failure> {
    let report = count_report(n, limits)?;
    if table {
        println!("{}", report.to_text_table());
    } else {
        emit(&report.to_json());
    }
    Ok(())
}

fn cmd_stable(n: usize, r: usize, max: bool, count: bool, limits: &Limits) -> Result<(), Failure> {
    let want_both = !max && !count;
    let mut report = serde_json::Map::new();
    report.insert("n".into(), json!(n));
    report.insert("r".into(), json!(r));
    if count || want_both {
        report.insert(
            "count".into(),
            json!(count_stable_sets(n, r, limits)?.to_string()),
        );
    }
    if max || want_both {
        let (size, witness) = max_stable_set(n, r, limits)?;
        let ix = SubsetIndexer::new(n, r)?;
        let subsets: Vec<Vec<usize>> = witness
            .subsets(&ix)?
            .into_iter()
            .map(|s| s.elements())
            .collect();
        report.insert("max_size".into(), json!(size));
        report.insert("max_witness".into(), json!(subsets));
    }
    emit(&serde_json::Value::Object(report));
    Ok(())
}

#[derive(Serialize)]
struct SingleRankBounds {
    params: BoundParams,
    stable_count_bound: Theorem1Bound,
    matroid_count_bound: MnrBound,
}

#[derive(Serialize)]
struct FullBounds {
    n: usize,
    per_rank: Vec<SingleRankBounds>,
    inequality_suite: InequalitySuite,
    rank_profile: RankProfile,
}

fn single_rank_bounds(n: usize, r: usize) -> Result<SingleRankBounds, Failure> {
    let p = params(n, r)?;
    let stable_count_bound = theorem1_log_bound(n, r)?;
    let matroid_count_bound = mnr_log_upper(n, r, &stable_count_bound.log2)?;
    Ok(SingleRankBounds {
        params: p,
        stable_count_bound,
        matroid_count_bound,
    })
}

fn cmd_bounds(n: usize, rank: Option<usize>, table: bool, limits: &Limits) -> Result<(), Failure> {
    if let Some(r) = rank {
        let report = single_rank_bounds(n, r)?;
        if table {
            println!("{}", bounds_table_single(&report));
        } else {
            emit(&report);
        }
        return Ok(());
    }
    let per_rank: Result<Vec<SingleRankBounds>, Failure> =
        (1..=n / 2).map(|r| single_rank_bounds(n, r)).collect();
    let report = FullBounds {
        n,
        per_rank: per_rank?,
        inequality_suite: inequality_suite(n.min(30), limits)?,
        rank_profile: rank_profile(n, limits)?,
    };
    if table {
        println!("{}", bounds_table_full(&report));
    } else {
        emit(&report);
    }
    Ok(())
}

fn bounds_table_single(report: &SingleRankBounds) -> String {
    let p = &report.params;
    format!(
        "n={} r={}  N={}  d={}  lambda={}\n\
         alpha = {}/{} = {:.6}\nsigma = {:.6}\nsigma~ = {:.6}\nhoffman = {:.3}\n\
         log2 stable-count bound ({}) = {:.3}\n\
         log2 matroid-count bound ({}) = {:.3}\n\
         log2 matroid-count bound, closed form ({}) = {:.3}",
        p.n,
        p.r,
        p.vertex_count,
        p.degree,
        p.lambda,
        p.alpha_num,
        p.alpha_den,
        p.alpha,
        p.sigma,
        p.sigma_tilde,
        p.hoffman,
        report.stable_count_bound.tag,
        report.stable_count_bound.log2.log2,
        report.matroid_count_bound.tag,
        report.matroid_count_bound.log2_total.log2,
        report.matroid_count_bound.eq12_tag,
        report.matroid_count_bound.eq12_log2_total.log2,
    )
}

fn bounds_table_full(report: &FullBounds) -> String {
    let mut lines = vec![format!(
        "{:>3} {:>14} {:>14} {:>14}",
        "r", "log2-Thm1", "log2-Lemma-mnr", "log2-Eq12"
    )];
    for row in &report.per_rank {
        lines.push(format!(
            "{:>3} {:>14.2} {:>14.2} {:>14.2}",
            row.params.r,
            row.stable_count_bound.log2.log2,
            row.matroid_count_bound.log2_total.log2,
            row.matroid_count_bound.eq12_log2_total.log2
        ));
    }
    lines.push(format!(
        "inequality suite: {} rows, {} violations",
        report.inequality_suite.rows.len(),
        report.inequality_suite.violations
    ));
    lines.push(format!(
        "rank profile: total lower bound {:.2}",
        report.rank_profile.lower_log2_total
    ));
    for row in &report.rank_profile.rows {
        lines.push(format!(
            "  r={:<3} upper {:>14.2}  below-lower {}",
            row.r, row.upper_log2, row.below_total_lower
        ));
    }
    for tail in &report.rank_profile.tail_rows {
        lines.push(match (tail.max_rank, tail.tail_log2) {
            (Some(max_rank), Some(log2)) => format!(
                "  beta={:<5} ranks 1..={:<3} log2 tail mass <= {:.2}",
                tail.beta, max_rank, log2
            ),
            _ => format!("  beta={:<5} empty tail", tail.beta),
        });
    }
    lines.join("\n")
}

fn cmd_gs(n: usize, r: usize) -> Result<(), Failure> {
    let ix = SubsetIndexer::new(n, r)?;
    let classes = graham_sloane_partition(n, r)?;
    let mut covered = 0usize;
    let mut max_class = 0usize;
    let mut class_reports = Vec::with_capacity(classes.len());
    for (residue, class) in classes.iter().enumerate() {
        let stable = class.verify_stable(&ix).is_ok();
        covered += class.len();
        max_class = max_class.max(class.len());
        let subsets: Vec<Vec<usize>> = class
            .subsets(&ix)?
            .into_iter()
            .map(RSubset::elements)
            .collect();
        class_reports.push(json!({
            "residue": residue,
            "size": class.len(),
            "stable": stable,
            "subsets": subsets,
        }));
    }
    let vertex_count = binomial(n, r);
    let report = json!({
        "n": n,
        "r": r,
        "classes": class_reports,
        "partition_complete": covered as u64 == vertex_count,
        "max_class_size": max_class,
        "lower_bound_ok": max_class as u64 * n as u64 >= vertex_count,
    });
    emit(&report);
    Ok(())
}

fn cmd_spectrum(n: usize, r: usize) -> Result<(), Failure> {
    let eigenvalues = johnson_spectrum(n, r)?;
    let annihilation = if n <= 8 {
        json!(verify_spectrum_annihilation(n, r)?)
    } else {
        serde_json::Value::Null
    };
    let report = json!({
        "n": n,
        "r": r,
        "eigenvalues": eigenvalues,
        "annihilation": annihilation,
        "annihilation_skipped": n > 8,
    });
    emit(&report);
    Ok(())
}
