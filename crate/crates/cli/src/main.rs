//! `kolmolab`: every library operation as a batch subcommand, emitting
//! deterministic CSV/JSON artifacts. Identical configurations produce
//! identical output bytes; measures print with nine fractional digits.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use kolmolab::algstats::{self, ModelFamily};
use kolmolab::bits::{BitReader, BitString};
use kolmolab::coding::{self, parse_rational};
use kolmolab::corpus;
use kolmolab::measures;
use kolmolab::numeric::rational_to_f64;
use kolmolab::probstats::{self, SequentialStatistic};
use kolmolab::ratedist::{self, BAQuery};
use kolmolab::report::{bits9, Csv};
use kolmolab::toyvm::{self, ComplexityOracle, ToyMachine};
use kolmolab::ucode;

#[derive(Parser)]
#[command(name = "kolmolab", version, about = "desk-scale information theory experiments")]
struct Cli {
    /// Worker threads for enumeration-heavy subcommands (results are
    /// independent of this setting).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format for tabular artifacts.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Kraft sum of a length multiset.
    Kraft(KraftArgs),
    /// Build the canonical prefix code for a length multiset.
    CodeFromLengths(KraftArgs),
    /// Shannon-Fano code for a distribution file.
    ShannonFano(DistArgs),
    /// Standard prefix code for the naturals.
    Natural(NaturalArgs),
    /// Entropy of a distribution file, in bits.
    Entropy(DistArgs),
    /// Mutual information of a joint distribution file.
    Mi(JointArgs),
    /// Kullback-Leibler divergence between two distribution files.
    Kl(KlArgs),
    /// Data-processing check for a joint and a deterministic map.
    Dpi(DpiArgs),
    /// Build (and cache) a complexity-oracle table.
    KolmoTable(KolmoTableArgs),
    /// Measured-slack experiment for an algorithmic identity.
    Slack(SlackArgs),
    /// Structure functions h, λ, β of one string against a family.
    Structfn(StructfnArgs),
    /// List the shipped model families with example models.
    Families,
    /// Sufficiency gap tables for a statistic over the Bernoulli grid.
    Suffstat(SuffstatArgs),
    /// Bridge experiment: algorithmic vs probabilistic sufficiency.
    Wiske(WiskeArgs),
    /// Rate-distortion computations.
    Rd(RdArgs),
    /// Universal two-part (binomial) coding.
    Ucode(UcodeArgs),
    /// Run the full invariant suite, one pass/fail line per property.
    Selftest,
}

#[derive(Args)]
struct KraftArgs {
    /// Comma-separated codeword lengths, e.g. 1,2,3,3
    #[arg(long)]
    lengths: String,
}

#[derive(Args)]
struct DistArgs {
    /// Distribution file: lines `symbol<TAB>p/q`.
    #[arg(long)]
    dist: PathBuf,
}

#[derive(Args)]
struct NaturalArgs {
    #[command(subcommand)]
    dir: NaturalDir,
}

#[derive(Subcommand)]
enum NaturalDir {
    /// Encode a natural number.
    Encode { value: u64 },
    /// Decode the leading codeword of a bit string.
    Decode { bits: String },
}

#[derive(Args)]
struct JointArgs {
    /// Joint distribution file: lines `x<TAB>y<TAB>p/q`.
    #[arg(long)]
    joint: PathBuf,
}

#[derive(Args)]
struct KlArgs {
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    g: PathBuf,
}

#[derive(Args)]
struct DpiArgs {
    #[arg(long)]
    joint: PathBuf,
    /// Map file: lines `y<TAB>t(y)`.
    #[arg(long)]
    map: PathBuf,
}

#[derive(Args)]
struct MachineArgs {
    /// Program-length budget in bits.
    #[arg(long, default_value_t = 20)]
    lmax: u32,
    /// Step budget per run.
    #[arg(long, default_value_t = 1000)]
    steps: u64,
}

#[derive(Args)]
struct KolmoTableArgs {
    #[command(flatten)]
    machine: MachineArgs,
    /// Conditions: `eps`, a bit string, or `upto:N` for {0,1}^{≤N}.
    /// Repeatable.
    #[arg(long)]
    cond: Vec<String>,
    /// Also write the binary table file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SlackArgs {
    #[command(flatten)]
    machine: MachineArgs,
    /// additivity | triangle | det-nonincrease | rand-nonincrease | k-of-k
    #[arg(long)]
    identity: String,
    /// Universe spec: `upto:N`.
    #[arg(long, default_value = "upto:2")]
    universe: String,
}

#[derive(Args)]
struct StructfnArgs {
    #[command(flatten)]
    machine: MachineArgs,
    /// The string under study, as ASCII bits.
    #[arg(long)]
    x: String,
    /// full | singletons | masks | typeclass | parity | hamming
    #[arg(long)]
    family: String,
    /// Also evaluate β (needs one conditional table per model).
    #[arg(long, default_value_t = false)]
    beta: bool,
}

#[derive(Args)]
struct SuffstatArgs {
    /// Only `bernoulli` is shipped.
    #[arg(long, default_value = "bernoulli")]
    family: String,
    /// ones | pairs | singleton | full
    #[arg(long)]
    stat: String,
    /// Sample length n (inclusive range start).
    #[arg(long)]
    n: usize,
    /// Optional inclusive range end (defaults to --n).
    #[arg(long)]
    n_max: Option<usize>,
}

#[derive(Args)]
struct WiskeArgs {
    #[command(flatten)]
    machine: MachineArgs,
    /// ones | pairs | singleton | full
    #[arg(long)]
    stat: String,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 6)]
    n_max: usize,
}

#[derive(Args)]
struct RdArgs {
    #[command(subcommand)]
    which: RdCommand,
}

#[derive(Subcommand)]
enum RdCommand {
    /// Exact brute-force D*_m(R).
    Brute {
        /// Instance file (alphabets, source, distortion matrix).
        #[arg(long, conflicts_with = "set_distortion")]
        instance: Option<PathBuf>,
        /// Use the uniform-source set-distortion instance at length N.
        #[arg(long)]
        set_distortion: Option<usize>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Rate in bits/outcome, as a rational p/q.
        #[arg(long)]
        rate: String,
    },
    /// Blahut-Arimoto point of the information rate-distortion curve.
    Ba {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, conflicts_with = "slope")]
        distortion: Option<f64>,
        #[arg(long)]
        slope: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 5000)]
        max_iter: usize,
    },
    /// Binary Shannon-Fano-distortion closed form.
    Sfbinary {
        /// Source bias p as a rational p/q.
        #[arg(long)]
        p: String,
        #[arg(long, conflicts_with = "distortion")]
        rate: Option<f64>,
        #[arg(long)]
        distortion: Option<f64>,
    },
    /// Expected-structure-function sandwich experiment.
    Expstruct {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Comma-separated integer rates.
        #[arg(long)]
        rates: String,
        /// Source distribution file over {0,1}^n (default uniform).
        #[arg(long)]
        source: Option<PathBuf>,
    },
}

#[derive(Args)]
struct UcodeArgs {
    #[command(subcommand)]
    which: UcodeCommand,
}

#[derive(Subcommand)]
enum UcodeCommand {
    /// Binomial-encode ASCII bits into a bitstream file.
    Encode {
        /// Input file of ASCII '0'/'1'.
        #[arg(long)]
        input: PathBuf,
    },
    /// Decode a bitstream file back to ASCII bits.
    Decode {
        #[arg(long)]
        input: PathBuf,
    },
    /// Redundancy report of the two-part code against a source family.
    Report {
        /// Family spec file (`bernoulli p/q` / `markov p1 p01 p11`
        /// lines); defaults to the Bernoulli grid.
        #[arg(long)]
        family: Option<PathBuf>,
        /// Corpus file: lines `label<TAB>bits`.
        #[arg(long, conflicts_with = "gen_bernoulli")]
        corpus: Option<PathBuf>,
        /// Generate a standard corpus: `p,n` Bernoulli parameters.
        #[arg(long, requires = "seed")]
        gen_bernoulli: Option<String>,
        /// Seed for generated corpora (mandatory with generation).
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// What a subcommand hands back for emission.
enum Artifact {
    Text(String),
    Table(Csv),
    Binary(Vec<u8>),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // ignore failure when a pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(artifact) => match emit(&cli, artifact) {
            Ok(code) => code,
            Err(e) => report_error(&e),
        },
        Err(e) => report_error(&e),
    }
}

fn report_error(e: &anyhow::Error) -> ExitCode {
    let payload = serde_json::json!({ "error": format!("{e:#}") });
    eprintln!("{payload}");
    ExitCode::FAILURE
}

fn emit(cli: &Cli, artifact: Artifact) -> Result<ExitCode> {
    let bytes: Vec<u8> = match artifact {
        Artifact::Binary(b) => b,
        Artifact::Text(t) => t.into_bytes(),
        Artifact::Table(csv) => match cli.format {
            Format::Csv => csv.render().into_bytes(),
            Format::Json => {
                let rendered = csv.render();
                let mut lines = rendered.lines();
                let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
                let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
                let mut out = serde_json::to_vec_pretty(&serde_json::json!({
                    "header": header,
                    "rows": rows,
                }))?;
                out.push(b'\n');
                out
            }
        },
    };
    match &cli.output {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {path:?}"))?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<Artifact> {
    match &cli.command {
        Command::Kraft(args) => {
            let lengths = parse_lengths(&args.lengths)?;
            let check = coding::kraft_check(&lengths);
            Ok(Artifact::Text(format!(
                "sum {} status {:?}\n",
                check.sum, check.status
            )))
        }
        Command::CodeFromLengths(args) => {
            let lengths = parse_lengths(&args.lengths)?;
            let code = coding::code_from_lengths(&lengths)?;
            Ok(Artifact::Text(code.dump()))
        }
        Command::ShannonFano(args) => {
            let dist = load_dist(&args.dist)?;
            let code = coding::shannon_fano(&dist)?;
            let expected = coding::expected_length(&dist, &code);
            let mut out = code.dump();
            out.push_str(&format!(
                "# expected_length {}/{} ({})\n# entropy {}\n",
                expected.numer(),
                expected.denom(),
                bits9(rational_to_f64(&expected)),
                bits9(dist.entropy())
            ));
            Ok(Artifact::Text(out))
        }
        Command::Natural(args) => match &args.dir {
            NaturalDir::Encode { value } => Ok(Artifact::Text(format!(
                "{}\n",
                coding::encode_natural(*value)
            ))),
            NaturalDir::Decode { bits } => {
                let bits: BitString = bits.parse()?;
                let mut reader = BitReader::new(&bits);
                let value = coding::decode_natural(&mut reader)?;
                Ok(Artifact::Text(format!(
                    "value {value} consumed {}\n",
                    reader.pos()
                )))
            }
        },
        Command::Entropy(args) => {
            let dist = load_dist(&args.dist)?;
            Ok(Artifact::Text(format!("{}\n", bits9(dist.entropy()))))
        }
        Command::Mi(args) => {
            let joint = load_joint(&args.joint)?;
            Ok(Artifact::Text(format!(
                "{}\n",
                bits9(measures::mutual_info(&joint))
            )))
        }
        Command::Kl(args) => {
            let f = load_dist(&args.f)?;
            let g = load_dist(&args.g)?;
            Ok(Artifact::Text(format!(
                "{}\n",
                bits9(measures::kl_divergence(&f, &g)?)
            )))
        }
        Command::Dpi(args) => {
            let joint = load_joint(&args.joint)?;
            let map = load_map(&args.map)?;
            let check = measures::data_processing_check(&joint, &map)?;
            Ok(Artifact::Text(format!(
                "lhs {} rhs {} holds {}\n",
                bits9(check.lhs),
                bits9(check.rhs),
                check.holds
            )))
        }
        Command::KolmoTable(args) => {
            let machine = ToyMachine::new(args.machine.lmax, args.machine.steps)?;
            let conditions = parse_conditions(&args.cond)?;
            let oracle = cached_oracle(machine, &conditions)?;
            if let Some(path) = &args.out {
                oracle.save(path)?;
            }
            let mut csv = Csv::new(&["condition", "outputs", "halting_programs", "kraft_sum"]);
            for cond in oracle.conditions() {
                let table = oracle.table(cond)?;
                let kraft = table.kraft_sum();
                csv.row(vec![
                    format!("\"{cond}\""),
                    table.len().to_string(),
                    table.halting_program_count().to_string(),
                    format!("{}/{}", kraft.numer(), kraft.denom()),
                ]);
            }
            Ok(Artifact::Table(csv))
        }
        Command::Slack(args) => {
            let identity = toyvm::SlackIdentity::parse(&args.identity)
                .ok_or_else(|| anyhow!("unknown identity {:?}", args.identity))?;
            let universe = parse_universe(&args.universe)?;
            let machine = ToyMachine::new(args.machine.lmax, args.machine.steps)?;
            let oracle = toyvm::prepare_slack_oracle(machine, &universe)?;
            let report = toyvm::slack_experiment(&oracle, identity, &universe)?;
            let mut csv = Csv::new(&["identity", "instance", "n", "gap"]);
            for inst in &report.instances {
                csv.row(vec![
                    report.identity.to_string(),
                    inst.label.clone(),
                    inst.n.to_string(),
                    bits9(inst.gap),
                ]);
            }
            csv.row(vec![
                report.identity.to_string(),
                "max".into(),
                "-".into(),
                bits9(report.max_gap),
            ]);
            Ok(Artifact::Table(csv))
        }
        Command::Structfn(args) => {
            let x: BitString = args.x.parse()?;
            let family = ModelFamily::parse(&args.family)
                .ok_or_else(|| anyhow!("unknown family {:?}", args.family))?;
            let machine = ToyMachine::new(args.machine.lmax, args.machine.steps)?;
            let conditions = if args.beta {
                algstats::listing_conditions(family, x.len(), Some(&x))
            } else {
                Vec::new()
            };
            let oracle = cached_oracle(machine, &conditions)?;
            let curve = algstats::structure_functions(&x, family, &oracle, args.beta)?;
            Ok(Artifact::Text(curve.to_csv()))
        }
        Command::Families => {
            let mut csv = Csv::new(&["family", "models_at_n4", "full_cost_n4", "max_cost_n4", "example"]);
            for family in ModelFamily::all() {
                let models = family.enumerate(4);
                csv.row(vec![
                    family.name().to_string(),
                    models.len().to_string(),
                    models[0].model_cost().to_string(),
                    family.max_cost(4).to_string(),
                    models.last().unwrap().label().to_string(),
                ]);
            }
            Ok(Artifact::Table(csv))
        }
        Command::Suffstat(args) => {
            if args.family != "bernoulli" {
                bail!("unknown parameter family {:?}", args.family);
            }
            let stat = parse_stat(&args.stat)?;
            let family = probstats::ParamFamily::default_bernoulli();
            let n_max = args.n_max.unwrap_or(args.n);
            let mut csv = Csv::new(&[
                "theta",
                "n",
                "exact_sufficient",
                "expectation_gap",
                "uniform_gap",
            ]);
            for n in args.n..=n_max {
                let exact = probstats::check_sufficiency_exact(&family, stat.as_ref(), n)?;
                let pooled = probstats::check_sufficiency_expectation(&family, stat.as_ref(), n)?;
                let uniform = probstats::near_sufficiency_gap(&family, stat.as_ref(), [n])?;
                for ((theta, gap), (_, _, ugap)) in pooled.iter().zip(&uniform) {
                    csv.row(vec![
                        format!("{}/{}", theta.numer(), theta.denom()),
                        n.to_string(),
                        exact.sufficient.to_string(),
                        bits9(*gap),
                        bits9(*ugap),
                    ]);
                }
            }
            Ok(Artifact::Table(csv))
        }
        Command::Wiske(args) => {
            let stat = parse_stat(&args.stat)?;
            let machine = ToyMachine::new(args.machine.lmax, args.machine.steps)?;
            let oracle = cached_oracle(machine, &[])?;
            let family = probstats::ParamFamily::default_bernoulli();
            let rows = probstats::wiske_experiment(
                stat.as_ref(),
                &family,
                oracle.epsilon_table(),
                args.n_min..=args.n_max,
            )?;
            let mut csv = Csv::new(&[
                "n",
                "alg_slack",
                "theta",
                "expectation_gap",
                "c_theta",
                "bounded",
            ]);
            for row in rows {
                for (theta, gap, c_theta) in row.per_theta {
                    csv.row(vec![
                        row.n.to_string(),
                        bits9(row.alg_slack),
                        format!("{}/{}", theta.numer(), theta.denom()),
                        bits9(gap),
                        bits9(c_theta),
                        (gap <= row.alg_slack + c_theta + 1e-9).to_string(),
                    ]);
                }
            }
            Ok(Artifact::Table(csv))
        }
        Command::Rd(args) => run_rd(args),
        Command::Ucode(args) => run_ucode(args),
        Command::Selftest => {
            let mut buf = Vec::new();
            let ok = kolmolab::selftest::run(&mut buf)?;
            if !ok {
                std::io::stdout().write_all(&buf)?;
                bail!("selftest failed");
            }
            Ok(Artifact::Text(String::from_utf8(buf)?))
        }
    }
}

fn run_rd(args: &RdArgs) -> Result<Artifact> {
    let mut csv = Csv::new(&["R", "D", "mechanism", "witness_size"]);
    match &args.which {
        RdCommand::Brute {
            instance,
            set_distortion,
            m,
            rate,
        } => {
            let instance = match (instance, set_distortion) {
                (Some(path), None) => ratedist::RDInstance::parse(&read_text(path)?)?,
                (None, Some(n)) => ratedist::RDInstance::uniform_set_distortion(*n)?,
                _ => bail!("provide exactly one of --instance / --set-distortion"),
            };
            if *m == 0 {
                bail!("--m must be at least 1");
            }
            let rate = parse_rational(rate)?;
            let got = ratedist::brute_force_d(&instance, *m, &rate)?;
            csv.row(vec![
                bits9(rational_to_f64(&rate)),
                bits9(rational_to_f64(&got.distortion)),
                format!("BruteForce{m}"),
                got.codebook.len().to_string(),
            ]);
        }
        RdCommand::Ba {
            instance,
            distortion,
            slope,
            tol,
            max_iter,
        } => {
            let instance = ratedist::RDInstance::parse(&read_text(instance)?)?;
            let query = match (distortion, slope) {
                (Some(d), None) => BAQuery::Distortion(*d),
                (None, Some(b)) => BAQuery::Slope(*b),
                _ => bail!("provide exactly one of --distortion / --slope"),
            };
            let point = ratedist::blahut_arimoto(&instance, query, *tol, *max_iter)?;
            csv.row(vec![
                bits9(point.rate),
                bits9(point.distortion),
                "BA".into(),
                point.iterations.to_string(),
            ]);
        }
        RdCommand::Sfbinary {
            p,
            rate,
            distortion,
        } => {
            let p = parse_rational(p)?;
            let (r, d) = match (rate, distortion) {
                (Some(r), None) => (*r, ratedist::shannon_fano_rd_binary_d_of_r(&p, *r)),
                (None, Some(d)) => (ratedist::shannon_fano_rd_binary_r_of_d(&p, *d), *d),
                _ => bail!("provide exactly one of --rate / --distortion"),
            };
            csv.row(vec![bits9(r), bits9(d), "ClosedForm".into(), "0".into()]);
        }
        RdCommand::Expstruct {
            n,
            m,
            rates,
            source,
        } => {
            let source = match source {
                Some(path) => load_dist(path)?,
                None => kolmolab::Dist::uniform(1 << n),
            };
            let rates: Vec<u64> = rates
                .split(',')
                .map(|t| t.trim().parse().context("bad rate"))
                .collect::<Result<_>>()?;
            let report = ratedist::expected_structfn_experiment(*n, *m, &source, &rates)?;
            let mut csv = Csv::new(&["R", "expected_h", "D", "measured_shift"]);
            let shift = report
                .measured_shift
                .map(|s| s.to_string())
                .unwrap_or_else(|| "unreachable".into());
            for row in report.rows {
                csv.row(vec![
                    row.rate.to_string(),
                    row.expected_h.map(bits9).unwrap_or_else(|| "inf".into()),
                    row.brute_distortion
                        .map(bits9)
                        .unwrap_or_else(|| "guard".into()),
                    shift.clone(),
                ]);
            }
            return Ok(Artifact::Table(csv));
        }
    }
    Ok(Artifact::Table(csv))
}

fn run_ucode(args: &UcodeArgs) -> Result<Artifact> {
    match &args.which {
        UcodeCommand::Encode { input } => {
            let bits: BitString = read_text(input)?.trim().parse()?;
            let code = ucode::binomial_encode(&bits);
            Ok(Artifact::Binary(ucode::bitstream_to_bytes(&code)))
        }
        UcodeCommand::Decode { input } => {
            let bytes = std::fs::read(input).with_context(|| format!("reading {input:?}"))?;
            let stream = ucode::bitstream_from_bytes(&bytes)?;
            let mut reader = BitReader::new(&stream);
            let decoded = ucode::binomial_decode(&mut reader)?;
            Ok(Artifact::Text(format!("{decoded}\n")))
        }
        UcodeCommand::Report {
            family,
            corpus,
            gen_bernoulli,
            seed,
        } => {
            let family = match family {
                Some(path) => ucode::SourceFamily::parse(&read_text(path)?)?,
                None => ucode::SourceFamily::bernoulli_grid(),
            };
            let corpus_set: Vec<(String, BitString)> = match (corpus, gen_bernoulli) {
                (Some(path), None) => read_text(path)?
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(|l| {
                        let (label, bits) = l
                            .split_once('\t')
                            .ok_or_else(|| anyhow!("corpus lines are label<TAB>bits"))?;
                        Ok((label.to_string(), bits.trim().parse()?))
                    })
                    .collect::<Result<_>>()?,
                (None, Some(spec)) => {
                    let seed =
                        seed.ok_or_else(|| anyhow!("--seed is mandatory for generation"))?;
                    let (p, n) = spec
                        .split_once(',')
                        .ok_or_else(|| anyhow!("--gen-bernoulli takes p,n"))?;
                    let p: f64 = p.trim().parse()?;
                    let n: usize = n.trim().parse()?;
                    let mut rng = corpus::rng(seed);
                    vec![
                        ("zeros".into(), BitString::zeros(n)),
                        ("alternating".into(), corpus::alternating_string(n)),
                        (
                            format!("bernoulli({p})"),
                            corpus::bernoulli_string(&mut rng, p, n),
                        ),
                    ]
                }
                _ => bail!("provide exactly one of --corpus / --gen-bernoulli"),
            };
            let report = ucode::redundancy_report(&family, &corpus_set)?;
            let mut csv = Csv::new(&["label", "n", "total_len", "k_star", "redundancy"]);
            for row in report.per_string {
                csv.row(vec![
                    row.label,
                    row.n.to_string(),
                    row.total_len.to_string(),
                    row.k_star.to_string(),
                    row.redundancy.to_string(),
                ]);
            }
            Ok(Artifact::Table(csv))
        }
    }
}

fn parse_lengths(spec: &str) -> Result<coding::Lengths> {
    let lengths: Vec<u32> = spec
        .split(',')
        .map(|t| t.trim().parse().context("bad length"))
        .collect::<Result<_>>()?;
    Ok(coding::Lengths::new(lengths)?)
}

fn parse_conditions(specs: &[String]) -> Result<Vec<BitString>> {
    let mut out = Vec::new();
    for spec in specs {
        if spec == "eps" {
            out.push(BitString::new());
        } else if let Some(n) = spec.strip_prefix("upto:") {
            out.extend(BitString::all_up_to_length(n.parse()?));
        } else {
            out.push(spec.parse()?);
        }
    }
    Ok(out)
}

fn parse_universe(spec: &str) -> Result<Vec<BitString>> {
    let n = spec
        .strip_prefix("upto:")
        .ok_or_else(|| anyhow!("universe spec is upto:N"))?;
    Ok(BitString::all_up_to_length(n.parse()?))
}

fn parse_stat(name: &str) -> Result<Box<dyn SequentialStatistic>> {
    Ok(match name {
        "ones" => Box::new(probstats::OnesStat),
        "pairs" => Box::new(probstats::PairsStat),
        "singleton" => Box::new(probstats::SingletonStat),
        "full" => Box::new(probstats::FullStat),
        other => bail!("unknown statistic {other:?}"),
    })
}

fn read_text(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {path:?}"))
}

fn load_dist(path: &PathBuf) -> Result<kolmolab::Dist> {
    Ok(kolmolab::Dist::parse(&read_text(path)?)?)
}

fn load_joint(path: &PathBuf) -> Result<measures::JointDist> {
    Ok(measures::JointDist::parse(&read_text(path)?)?)
}

fn load_map(path: &PathBuf) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for line in read_text(path)?.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (y, t) = line
            .split_once('\t')
            .ok_or_else(|| anyhow!("map lines are y<TAB>t"))?;
        map.insert(y.to_string(), t.to_string());
    }
    Ok(map)
}

/// Builds an oracle, reusing a binary table under `KOLMOLAB_CACHE` when
/// one exists for this exact machine and condition set.
fn cached_oracle(machine: ToyMachine, conditions: &[BitString]) -> Result<ComplexityOracle> {
    let cache_dir = std::env::var_os("KOLMOLAB_CACHE").map(PathBuf::from);
    let path = cache_dir.as_ref().map(|dir| {
        // FNV-1a over the machine identity and condition set
        let mut key: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                key ^= b as u64;
                key = key.wrapping_mul(0x100000001b3);
            }
        };
        eat(toyvm::MACHINE_VERSION.as_bytes());
        eat(&machine.lmax.to_le_bytes());
        eat(&machine.steps.to_le_bytes());
        let mut sorted = conditions.to_vec();
        sorted.sort();
        sorted.dedup();
        for c in &sorted {
            eat(c.to_string().as_bytes());
            eat(b"|");
        }
        dir.join(format!("kolmolab-{key:016x}.kolm"))
    });
    if let Some(path) = &path {
        if path.exists() {
            if let Ok(oracle) = ComplexityOracle::load(path) {
                if oracle.machine() == machine {
                    return Ok(oracle);
                }
            }
        }
    }
    let oracle = ComplexityOracle::build(machine, conditions)?;
    if let Some(path) = &path {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).ok();
        }
        oracle.save(path)?;
    }
    Ok(oracle)
}
