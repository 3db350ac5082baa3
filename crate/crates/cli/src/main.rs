use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pgf_core::census::{self, CensusOptions, ReportFormat};
use pgf_core::claims::{self, VerifyOptions};
use pgf_core::family::{self, Cert};
use pgf_core::pc::{parse_pc_file, PcRecord};
use pgf_core::ramification;
use pgf_core::{ops, Limits, PermGroup};

const CERT_HELP: &str = "\
CERTIFICATES
  C(l,k)           cyclic group of order l^k, k >= 1
  D(a,b)           direct product a x b
  W(a,b)           regular wreath product a wr b (b permutes |b| copies of a)
  Q(a;w1,w2,...)   a / N, N the normal closure of the words; N must lie in
                   the Frattini subgroup of a. An empty list means N = 1.

  Words use the generators g1, g2, ... of the evaluated child (C has one;
  D and W list the first factor's generators, then the second's). A word is
  a product f1*f2*... of factors g<i>, [w,w] (commutator) or (w), each
  optionally raised to ^e or ^-e.

EXAMPLES
  pgf build 'W(C(2,1),C(2,1))'            order=8 rank=2 dl=2
  pgf semiabelian 'W(C(2,1),C(2,1))'      true, with a witness chain
  pgf semiabelian data/order64.pc#8       a group from a dataset
  pgf build 'D(C(2,2),W(C(3,1),C(3,1)))'  fails: mixes primes 2 and 3
  pgf build 'Q(W(C(2,1),C(2,1));[g1,g2])' order=4 rank=2 dl=1
  pgf verify                               the claim-by-claim table";

#[derive(Parser)]
#[command(name = "pgf", version, about = "Finite l-group computations: certificates, semiabelian decisions, censuses", after_long_help = CERT_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct LimitArgs {
    /// Largest group order enumerated element by element
    #[arg(long, default_value_t = Limits::default().enum_cap)]
    enum_cap: u128,
    /// Largest degree a wreath product may have
    #[arg(long, default_value_t = Limits::default().degree_cap)]
    degree_cap: usize,
    /// Largest order accepted by subgroup enumeration and the semiabelian search
    #[arg(long, default_value_t = Limits::default().census_order_cap)]
    order_cap: u128,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            enum_cap: self.enum_cap,
            degree_cap: self.degree_cap,
            census_order_cap: self.order_cap,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a certificate and print its order, rank and derived length
    #[command(after_long_help = CERT_HELP)]
    Build {
        cert: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Decide whether a group is semiabelian, with a witness chain
    #[command(after_long_help = CERT_HELP)]
    Semiabelian {
        /// A certificate, or <pcfile>#<index> for a dataset group
        group: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Classify every group of a pc dataset
    Census {
        pcfile: PathBuf,
        /// Directory for the resumable record cache
        #[arg(long, env = "PGF_CACHE")]
        cache: Option<PathBuf>,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the report here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write zero for all timings, so reruns produce identical reports
        #[arg(long)]
        no_timings: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Minimal number of ramified primes for a certificate-built group
    #[command(after_long_help = CERT_HELP)]
    Ramification {
        cert: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Compare rank with both readings of Plans' bound
    #[command(after_long_help = CERT_HELP)]
    Bounds {
        /// Certificates to compare
        certs: Vec<String>,
        /// Also include every certificate with at most this many D/W nodes
        #[arg(long)]
        corpus: Option<usize>,
        /// Primes for --corpus
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        /// Largest leaf exponent for --corpus
        #[arg(long, default_value_t = 1)]
        max_exp: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check the claims suite and print one line per claim
    Verify {
        /// Directory holding order<N>.pc datasets
        #[arg(long, default_value = "data")]
        data: PathBuf,
        /// Also run the order 128 and 729 censuses
        #[arg(long)]
        long: bool,
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

fn parse_cert(text: &str) -> anyhow::Result<Cert> {
    text.parse().with_context(|| format!("certificate {text:?}"))
}

/// A certificate, or `<file>#<index>` naming a dataset group.
fn resolve_group(spec: &str, limits: &Limits) -> anyhow::Result<(String, PermGroup, u64)> {
    if let Some((file, index)) = spec.rsplit_once('#') {
        if Path::new(file).exists() {
            let index: u32 = index.parse().with_context(|| format!("group index in {spec:?}"))?;
            let recs = read_dataset(Path::new(file))?;
            let rec = recs
                .iter()
                .find(|r| r.id.index == index)
                .ok_or_else(|| anyhow!("{file} has no group with index {index}"))?;
            let g = rec.presentation.to_perm_group(limits).with_context(|| format!("group {}", rec.id))?;
            let name = match &rec.provenance {
                Some(p) => format!("{} [{p}]", rec.id),
                None => rec.id.to_string(),
            };
            return Ok((name, g, rec.presentation.prime() as u64));
        }
    }
    let cert = parse_cert(spec)?;
    let e = family::eval_cert(&cert, limits).with_context(|| format!("certificate {cert}"))?;
    Ok((cert.to_string(), e.group, e.prime))
}

fn read_dataset(path: &Path) -> anyhow::Result<Vec<PcRecord>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_pc_file(&text).with_context(|| format!("parsing {}", path.display()))
}

fn gens_text(g: &PermGroup) -> String {
    let gens: Vec<String> = g.generators().iter().map(|p| p.to_string()).collect();
    if gens.is_empty() {
        "()".into()
    } else {
        gens.join(", ")
    }
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().write_all(bytes)?),
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Build { cert, limits } => {
            let cert = parse_cert(&cert)?;
            let e = family::eval_cert(&cert, &limits.limits()).with_context(|| format!("certificate {cert}"))?;
            let dl = ops::derived_length(&e.group)?.expect("l-groups are solvable");
            println!("order={} rank={} dl={}", e.group.order(), e.rank, dl);
            Ok(true)
        }
        Command::Semiabelian { group, format, limits } => {
            let limits = limits.limits();
            let (name, g, _) = resolve_group(&group, &limits)?;
            let v = family::is_semiabelian(&g, &limits).with_context(|| format!("group {name}"))?;
            if v.flag {
                family::validate_witness(&g, &v.witness, &limits)
                    .map_err(|e| anyhow!("group {name}: witness failed validation: {e}"))?;
            }
            match format {
                Format::Json => {
                    let steps: Vec<_> = v
                        .witness
                        .iter()
                        .map(|s| {
                            serde_json::json!({
                                "order": s.group.order().to_string(),
                                "a_order": s.abelian_normal.order().to_string(),
                                "a_generators": s.abelian_normal.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                                "h_order": s.complement.order().to_string(),
                                "h_generators": s.complement.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    let out = serde_json::json!({
                        "group": name,
                        "order": g.order().to_string(),
                        "semiabelian": v.flag,
                        "membership": { "member": v.flag, "label": family::MEMBERSHIP_LABEL },
                        "witness": steps,
                        "search": v.search,
                    });
                    println!("{}", serde_json::to_string_pretty(&out)?);
                }
                _ => {
                    println!("{name}: order {} semiabelian={}", g.order(), v.flag);
                    println!("{}: {}", family::MEMBERSHIP_LABEL, v.flag);
                    if v.flag {
                        for (i, s) in v.witness.iter().enumerate() {
                            println!(
                                "  G{i} (order {}) = A H with A (order {}) = <{}>, H (order {}) = <{}>",
                                s.group.order(),
                                s.abelian_normal.order(),
                                gens_text(s.abelian_normal.group()),
                                s.complement.order(),
                                gens_text(s.complement.group())
                            );
                        }
                    } else {
                        let s = v.search;
                        println!(
                            "  no decomposition: {} abelian normal subgroups x {} proper subgroup classes at the top, {} pairs tested, {} classes decided",
                            s.top_candidates_a, s.top_candidates_h, s.pairs_tested, s.classes_decided
                        );
                    }
                }
            }
            Ok(true)
        }
        Command::Census {
            pcfile,
            cache,
            jobs,
            format,
            output,
            no_timings,
            limits,
        } => {
            let data = read_dataset(&pcfile)?;
            let mut limits = limits.limits();
            // the dataset's own order is always accepted
            if let Some(first) = data.first() {
                limits.census_order_cap = limits.census_order_cap.max(first.id.order);
            }
            let out = census::run_census(
                &data,
                &CensusOptions {
                    limits,
                    jobs,
                    cache_dir: cache,
                },
            )
            .with_context(|| format!("census of {}", pcfile.display()))?;
            match format {
                Format::Json => emit(output.as_deref(), &census::emit_report(&out, ReportFormat::Json, !no_timings))?,
                Format::Csv => emit(output.as_deref(), &census::emit_report(&out, ReportFormat::Csv, !no_timings))?,
                Format::Text => {
                    let s = &out.summary;
                    let screened = out
                        .records
                        .iter()
                        .filter(|r| r.screen == family::Screen::DefinitelyNotMember)
                        .count();
                    let mut text = format!(
                        "order {}: {} groups, {} not semiabelian ({} with dl > rank), {} failures, {} from cache, {} ms\n",
                        s.order, s.total, s.non_semiabelian, screened, s.failures.len(), s.resumed, s.wall_time_ms
                    );
                    let bad: Vec<String> = out
                        .records
                        .iter()
                        .filter(|r| !r.semiabelian)
                        .map(|r| r.index.to_string())
                        .collect();
                    if !bad.is_empty() {
                        text += &format!("not semiabelian: {}\n", bad.join(" "));
                    }
                    emit(output.as_deref(), text.as_bytes())?;
                }
            }
            for f in &out.summary.failures {
                eprintln!("failure ({},{}): {}", f.order, f.index, f.error);
            }
            Ok(out.is_clean())
        }
        Command::Ramification { cert, format, limits } => {
            let cert = parse_cert(&cert)?;
            let r = ramification::min_ramified_primes(&cert, &limits.limits())
                .with_context(|| format!("certificate {cert}"))?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r)?),
                _ => {
                    println!("{}: order {} rank {}", r.descriptor, r.order, r.rank);
                    println!("lower bound: {}", r.rank_lower_bound_note);
                    println!("minimal number of tamely ramified primes over Q: {}", r.minimal_count_claim);
                    println!(
                        "Plans' bound: {} excluding the first factor, {} excluding the last",
                        r.plans_ex_first, r.plans_ex_last
                    );
                }
            }
            Ok(true)
        }
        Command::Bounds {
            certs,
            corpus,
            primes,
            max_exp,
            format,
            limits,
        } => {
            let limits = limits.limits();
            let mut list = certs.iter().map(|c| parse_cert(c)).collect::<anyhow::Result<Vec<_>>>()?;
            if let Some(k) = corpus {
                list.extend(family::certificate_corpus(&primes, max_exp, k, limits.degree_cap as u128, limits.enum_cap));
            }
            if list.is_empty() {
                bail!("no certificates given (pass some, or --corpus N)");
            }
            let (reports, table) = ramification::compare_bounds(&list, &limits)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
                _ => print!("{table}"),
            }
            Ok(true)
        }
        Command::Verify { data, long, jobs, limits } => {
            let results = claims::run_claims(&VerifyOptions {
                data_dir: Some(data),
                long,
                jobs,
                limits: limits.limits(),
            });
            for r in &results {
                println!("{r}");
            }
            Ok(claims::all_ok(&results))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
