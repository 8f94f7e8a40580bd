//! Command-line front end. Every subcommand prints machine-readable JSON on
//! stdout (CSV where tabular output is requested); errors go to stderr as
//! JSON diagnostics with exit code 2 (argument), 3 (unsupported size), or
//! 4 (invalid pattern).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polar_rm::codec::zero_llr_propagate;
use polar_rm::domination::{
    check_posequence, count_posequences, enumerate_posequences, BitIndex, IndexSet, PosequenceError,
};
use polar_rm::error::Error;
use polar_rm::puncture::{psi_family, widely_equivalent_patterns};
use polar_rm::rate_match::{
    allocate_channels, load_posequence, load_reliability, ModeChoice, RateMode, Ratio, RmConfig,
};
use polar_rm::shorten::fixed_set;
use polar_rm::sim::{compare_patterns, simulate, SimSpecFile};

#[derive(Parser)]
#[command(
    name = "polar-rm",
    version,
    about = "Polar code rate matching: pattern analysis, buffer construction, link simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal puncturing patterns that silence input bit j
    Psi {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        j: u32,
    },
    /// Incapable input bits induced by a puncturing pattern, with the
    /// per-stage zero profile
    Incapable {
        #[arg(long)]
        n: u32,
        /// Punctured output positions, comma-separated
        #[arg(long, value_delimiter = ',', required = true)]
        puncture: Vec<u32>,
    },
    /// All puncturing patterns that induce the given incapable set
    Equivalent {
        #[arg(long)]
        n: u32,
        /// Target incapable positions, comma-separated (must be
        /// downward-closed under domination)
        #[arg(long, value_delimiter = ',', required = true)]
        incapable: Vec<u32>,
    },
    /// Output bits fixed to zero by
    /// a shortened input set
    Fixed {
        #[arg(long)]
        n: u32,
        /// Shortened input positions, comma-separated
        #[arg(long, value_delimiter = ',', required = true)]
        shorten: Vec<u32>,
    },
    /// Count, list, or validate domination-compatible buffer orders
    #[command(group(
        ArgGroup::new("action")
            .required(true)
            .args(["count", "list", "validate"])
    ))]
    Posequences {
        #[arg(long)]
        n: u32,
        /// Print the number of posequences
        #[arg(long)]
        count: bool,
        /// Stream every posequence, one JSON object per line
        #[arg(long)]
        list: bool,
        /// Validate a posequence file
        #[arg(long, value_name = "FILE")]
        validate: Option<PathBuf>,
    },
    /// Resolve a rate-matching configuration and report the allocation
    Ratematch {
        #[arg(long = "M")]
        m: u32,
        #[arg(long = "K")]
        k: u32,
        /// auto, puncture, shorten, or repeat
        #[arg(long, default_value = "auto", value_parser = parse_mode)]
        mode: ModeChoice,
        /// Posequence file for the buffer interleaver
        #[arg(long, value_name = "FILE")]
        poseq: Option<PathBuf>,
        /// Reliability sequence file, least reliable first
        #[arg(long, value_name = "FILE")]
        seq: Option<PathBuf>,
        /// Puncture/shorten rate boundary
        #[arg(long, default_value = "7/16", value_parser = parse_ratio)]
        threshold: Ratio,
        /// Design erasure probability for the reliability recursion
        #[arg(long, default_value_t = 0.5)]
        erasure: f64,
    },
    /// Run a Monte-Carlo link simulation from a spec file
    Simulate {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run two simulations under common random numbers and compare
    Compare {
        #[arg(long = "spec-a", value_name = "FILE")]
        spec_a: PathBuf,
        #[arg(long = "spec-b", value_name = "FILE")]
        spec_b: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn parse_mode(s: &str) -> Result<ModeChoice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ratio(s: &str) -> Result<Ratio, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn members(set: &IndexSet) -> Vec<u32> {
    set.members().to_vec()
}

fn emit(value: Value) {
    println!("{value}");
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn violation_json(err: &PosequenceError) -> Value {
    match err {
        PosequenceError::LengthMismatch { expected, actual } => json!({
            "kind": "length-mismatch", "expected": expected, "actual": actual,
        }),
        PosequenceError::OutOfRange { position, value } => json!({
            "kind": "out-of-range", "position": position, "value": value,
        }),
        PosequenceError::Duplicate { position, value } => json!({
            "kind": "duplicate", "position": position, "value": value,
        }),
        PosequenceError::OrderViolation {
            earlier_position,
            earlier_value,
            later_position,
            later_value,
        } => json!({
            "kind": "order-violation",
            "earlier_position": earlier_position,
            "earlier_value": earlier_value,
            "later_position": later_position,
            "later_value": later_value,
        }),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Psi { n, j } => {
            let family = psi_family(BitIndex::new(j, n)?)?;
            let patterns: Vec<Vec<u32>> = family.iter().map(members).collect();
            emit(json!({
                "n": n,
                "target": [j],
                "member_size": patterns.first().map_or(0, Vec::len),
                "family_size": patterns.len(),
                "patterns": patterns,
            }));
        }
        Command::Incapable { n, puncture } => {
            let punctured = IndexSet::new(n, puncture)?;
            let profile = zero_llr_propagate(&punctured);
            let per_stage: Vec<Vec<u32>> = profile.per_stage().iter().map(members).collect();
            emit(json!({
                "n": n,
                "punctured": members(&punctured),
                "incapable": members(profile.incapable()),
                "per_stage": per_stage,
            }));
        }
        Command::Equivalent { n, incapable } => {
            let target = IndexSet::new(n, incapable)?;
            let family = widely_equivalent_patterns(&target)?;
            let patterns: Vec<Vec<u32>> = family.iter().map(members).collect();
            emit(json!({
                "n": n,
                "target": members(&target),
                "family_size": patterns.len(),
                "patterns": patterns,
            }));
        }
        Command::Fixed { n, shorten } => {
            let shortened = IndexSet::new(n, shorten)?;
            let fixed = fixed_set(&shortened);
            emit(json!({
                "n": n,
                "shortened": members(&shortened),
                "fixed": members(&fixed),
            }));
        }
        Command::Posequences {
            n,
            count,
            list,
            validate,
        } => {
            if count {
                emit(json!({"n": n, "count": count_posequences(n)?}));
            } else if list {
                use std::io::Write;
                let stdout = std::io::stdout();
                let mut out = stdout.lock();
                for p in enumerate_posequences(n)? {
                    writeln!(out, "{}", serde_json::to_string(&p)?).map_err(Error::Io)?;
                }
            } else if let Some(path) = validate {
                let text = std::fs::read_to_string(&path)?;
                let raw: Value = serde_json::from_str(&text)?;
                let file_n = raw
                    .get("n")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::InvalidArgument("missing \"n\" field".into()))?
                    as u32;
                if file_n != n {
                    return Err(Error::OrderMismatch {
                        left: file_n,
                        right: n,
                    });
                }
                let order: Vec<u32> =
                    serde_json::from_value(raw.get("order").cloned().ok_or_else(|| {
                        Error::InvalidArgument("missing \"order\" field".into())
                    })?)?;
                match check_posequence(n, &order) {
                    Ok(()) => emit(json!({"n": n, "valid": true})),
                    Err(violation) => {
                        emit(json!({
                            "n": n,
                            "valid": false,
                            "violation": violation_json(&violation),
                        }));
                        return Err(violation.into());
                    }
                }
            }
        }
        Command::Ratematch {
            m,
            k,
            mode,
            poseq,
            seq,
            threshold,
            erasure,
        } => {
            let mut builder = RmConfig::builder(m, k)
                .rate_threshold(threshold)
                .design_erasure(erasure);
            if let Some(mode) = mode.fixed() {
                builder = builder.mode(mode);
            }
            if let Some(path) = poseq {
                builder = builder.posequence(load_posequence(&path)?);
            }
            if let Some(path) = seq {
                builder = builder.reliability(load_reliability(&path)?.order);
            }
            let cfg = builder.build()?;
            let alloc = allocate_channels(&cfg)?;
            let order = cfg.posequence().order();
            let mother = cfg.mother_len() as usize;
            let transmitted_count = (cfg.m() as usize).min(mother);
            let mut transmitted: Vec<u32> = order[..transmitted_count].to_vec();
            transmitted.sort_unstable();
            let mut untransmitted: Vec<u32> = order[transmitted_count..].to_vec();
            untransmitted.sort_unstable();
            let mut repeated: Vec<(u32, u32)> = Vec::new();
            if cfg.mode() == RateMode::Repeat {
                let mut copies = vec![1u32; mother];
                for i in mother..cfg.m() as usize {
                    copies[i % mother] += 1;
                }
                repeated = copies
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 1)
                    .map(|(slot, &c)| (order[slot], c))
                    .collect();
                repeated.sort_unstable();
            }
            emit(json!({
                "config": {
                    "M": cfg.m(),
                    "K": cfg.k(),
                    "N": cfg.mother_len(),
                    "mode": cfg.mode().to_string(),
                    "rate_threshold": cfg.rate_threshold().to_string(),
                    "design_erasure": cfg.design_erasure(),
                },
                "posequence": cfg.posequence().order(),
                "reliability": cfg.reliability(),
                "allocation": {
                    "info": members(&alloc.info),
                    "frozen": members(&alloc.frozen),
                    "zero_capacity": members(&alloc.zero_cap),
                },
                "transmitted": transmitted,
                "untransmitted": untransmitted,
                "repeated": repeated,
                "at_capacity": cfg.at_capacity(),
            }));
        }
        Command::Simulate { spec, format } => {
            let file = SimSpecFile::load(&spec)?;
            let resolved = file.resolve(&base_dir(&spec))?;
            let result = simulate(&resolved)?;
            match format {
                Format::Json => emit(serde_json::to_value(&result)?),
                Format::Csv => print!("{}", result.to_csv()),
            }
        }
        Command::Compare {
            spec_a,
            spec_b,
            format,
        } => {
            let a = SimSpecFile::load(&spec_a)?.resolve(&base_dir(&spec_a))?;
            let b = SimSpecFile::load(&spec_b)?.resolve(&base_dir(&spec_b))?;
            let result = compare_patterns(&a, &b)?;
            match format {
                Format::Json => emit(serde_json::to_value(&result)?),
                Format::Csv => print!("{}", result.to_csv()),
            }
        }
    }
    Ok(())
}

fn exit_for(err: &Error) -> u8 {
    match err.kind() {
        "unsupported-size" => 3,
        "invalid-pattern" => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if err.use_stderr() {
                eprintln!(
                    "{}",
                    json!({"error": {"kind": "argument", "message": err.to_string()}})
                );
                return ExitCode::from(2);
            }
            // --help / --version
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!(
                "{}",
                json!({"error": {"kind": err.kind(), "message": err.to_string()}})
            );
            ExitCode::from(exit_for(&err))
        }
    }
}
