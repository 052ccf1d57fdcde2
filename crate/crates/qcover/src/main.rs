use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use qcover::config::ConfigFile;
use qcover::ensemble::StateFamily;
use qcover::experiments::{run_rq1, run_rq2, run_rq3, Report, Rq1Config, Rq3Config};
use qcover::output::{state_from_csv, state_to_csv, write_text};
use qcover::sweep::SweepConfig;
use qcover_core::scores::{score_state, BlockSpec};
use qcover_core::{Circuit, Entangler, GeneratorConfig, GeneratorKind, RngHandle, StateVector};

#[derive(Parser)]
#[command(name = "qcover", version, about = "Diversity scores and randomness tests for quantum test inputs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Qubit count (rq2 takes a comma-separated list).
    #[arg(long)]
    qubits: Option<String>,
    /// Samples per ensemble.
    #[arg(long)]
    samples: Option<usize>,
    /// Master seed, echoed into every output file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (experiments) or file (other commands).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key = value` file; command-line flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Score the reference state families against Haar states.
    Rq1 {
        #[command(flatten)]
        common: Common,
    },
    /// MMD randomness sweep over generator depth.
    Rq2 {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Score circuit-generated ensembles against Haar states.
    Rq3 {
        #[command(flatten)]
        common: Common,
    },
    /// Write one state as `index,re,im` CSV.
    GenState {
        #[command(flatten)]
        common: Common,
        /// hr, me, ua, p, ghz or w.
        #[arg(long)]
        family: Option<String>,
        /// Substream index of the sample.
        #[arg(long)]
        index: Option<u64>,
    },
    /// Write one generated circuit in the text format.
    GenCircuit {
        #[command(flatten)]
        common: Common,
        /// bc, rc, ucnot or iqft.
        #[arg(long)]
        kind: Option<String>,
        /// Layers (bc, ucnot) or elementary-gate budget (rc).
        #[arg(long)]
        depth: Option<usize>,
        /// cnot or cz (bc only).
        #[arg(long)]
        entangler: Option<String>,
    },
    /// Score a state file or the output state of a circuit file.
    Score {
        #[command(flatten)]
        common: Common,
        /// State CSV as written by gen-state.
        #[arg(long, conflicts_with = "circuit")]
        state: Option<PathBuf>,
        /// Circuit text file; scores C|0…0⟩.
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Rényi-2 blocks as `label=q,q;label=q,…`.
        #[arg(long)]
        blocks: Option<String>,
    },
}

#[derive(Args, Clone, Default)]
struct SweepArgs {
    /// Unitaries per ensemble in each MMD test.
    #[arg(long)]
    mmd_samples: Option<usize>,
    /// Permutations per MMD test
    #[arg(long)]
    permutations: Option<usize>,
    /// Independent MMD tests per depth; the median p is reported
    #[arg(long)]
    reps: Option<usize>,
    /// A depth passes when the median p exceeds this.
    #[arg(long)]
    threshold: Option<f64>,
    /// Comma-separated generator kinds.
    #[arg(long)]
    kinds: Option<String>,
    /// Deepest BC layer count
    #[arg(long)]
    bc_max_layers: Option<usize>,
    /// Deepest UCNOT layer count
    #[arg(long)]
    ucnot_max_layers: Option<usize>,
    /// RC gate-budget step
    #[arg(long)]
    rc_step: Option<usize>,
    /// Largest RC gate budget
    #[arg(long)]
    rc_max: Option<usize>,
    /// Stop each generator at its first passing depth (true/false).
    #[arg(long)]
    early_stop: Option<bool>,
    /// Haar-vs-Haar repetitions per qubit count; 0 skips the null check.
    #[arg(long)]
    null_reps: Option<usize>,
}

fn load_config(common: &Common) -> anyhow::Result<ConfigFile> {
    match &common.config {
        Some(p) => Ok(ConfigFile::load(p)?),
        None => Ok(ConfigFile::default()),
    }
}

fn list<T: std::str::FromStr>(raw: &Option<String>) -> anyhow::Result<Option<Vec<T>>>
where
    T::Err: std::fmt::Display,
{
    raw.as_ref()
        .map(|s| {
            s.split(',')
                .map(|x| x.trim().parse::<T>().map_err(|e| anyhow::anyhow!("`{x}`: {e}")))
                .collect()
        })
        .transpose()
}

fn single_qubits(common: &Common, cfg: &ConfigFile, default: usize) -> anyhow::Result<usize> {
    let cli = common
        .qubits
        .as_deref()
        .map(|s| s.trim().parse::<usize>())
        .transpose()
        .context("--qubits")?;
    Ok(cfg.resolve("qubits", cli, default)?)
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => write_text(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn finish(report: &Report, dir: &Path) -> anyhow::Result<()> {
    let files = report.write(dir)?;
    eprintln!("wrote {} files to {}", files.len(), dir.display());
    Ok(())
}

fn parse_blocks(spec: &str, n: usize) -> anyhow::Result<Vec<BlockSpec>> {
    spec.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            let (label, qubits) = part
                .split_once('=')
                .with_context(|| format!("block `{part}` is not `label=q,q`"))?;
            let qubits: Vec<usize> = qubits
                .split(',')
                .map(|q| q.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("block `{part}`"))?;
            if qubits.iter().any(|&q| q >= n) {
                bail!("block `{part}` names a qubit outside 0..{n}");
            }
            Ok(BlockSpec::new(label.trim(), qubits))
        })
        .collect()
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Rq1 { common } => {
            let cfg = load_config(&common)?;
            let rq = Rq1Config {
                n: single_qubits(&common, &cfg, 6)?,
                samples: cfg.resolve("samples", common.samples, 5000)?,
            };
            let seed = cfg.resolve("seed", common.seed, 0)?;
            let out = cfg.resolve("out", common.out.clone(), PathBuf::from("results/rq1"))?;
            finish(&run_rq1(&rq, seed)?, &out)
        }
        Command::Rq3 { common } => {
            let cfg = load_config(&common)?;
            let rq = Rq3Config::new(
                single_qubits(&common, &cfg, 5)?,
                cfg.resolve("samples", common.samples, 2000)?,
            );
            let seed = cfg.resolve("seed", common.seed, 0)?;
            let out = cfg.resolve("out", common.out.clone(), PathBuf::from("results/rq3"))?;
            finish(&run_rq3(&rq, seed)?, &out)
        }
        Command::Rq2 { common, sweep } => {
            let cfg = load_config(&common)?;
            let d = SweepConfig::default();
            let kinds: Option<Vec<String>> = list(&sweep.kinds)?;
            let kinds = cfg
                .resolve_list("kinds", kinds, d.kinds.iter().map(|k| k.as_str().to_string()).collect())?
                .iter()
                .map(|k| k.parse::<GeneratorKind>())
                .collect::<Result<Vec<_>, _>>()?;
            let rq = SweepConfig {
                qubits: cfg.resolve_list("qubits", list(&common.qubits)?, d.qubits.clone())?,
                kinds,
                m: cfg.resolve("mmd-samples", sweep.mmd_samples.or(common.samples), d.m)?,
                n_perm: cfg.resolve("permutations", sweep.permutations, d.n_perm)?,
                reps: cfg.resolve("reps", sweep.reps, d.reps)?,
                threshold: cfg.resolve("threshold", sweep.threshold, d.threshold)?,
                bc_max_layers: cfg.resolve("bc-max-layers", sweep.bc_max_layers, d.bc_max_layers)?,
                ucnot_max_layers: cfg.resolve("ucnot-max-layers", sweep.ucnot_max_layers, d.ucnot_max_layers)?,
                rc_step: cfg.resolve("rc-step", sweep.rc_step, d.rc_step)?,
                rc_max: cfg.resolve("rc-max", sweep.rc_max, d.rc_max)?,
                early_stop: cfg.resolve("early-stop", sweep.early_stop, d.early_stop)?,
            };
            let null_reps = cfg.resolve("null-reps", sweep.null_reps, 20)?;
            let seed = cfg.resolve("seed", common.seed, 0)?;
            let out = cfg.resolve("out", common.out.clone(), PathBuf::from("results/rq2"))?;
            let report = run_rq2(&rq, null_reps, seed, |line| eprintln!("{line}"))?;
            finish(&report, &out)
        }
        Command::GenState { common, family, index } => {
            let cfg = load_config(&common)?;
            let n = single_qubits(&common, &cfg, 3)?;
            let family: StateFamily = cfg.resolve("family", family, "hr".into())?.parse::<StateFamily>()?;
            let seed = cfg.resolve("seed", common.seed, 0)?;
            let index = cfg.resolve("index", index, 0)?;
            let psi = family.sample(n, &mut RngHandle::new(seed).derive_substream(index))?;
            let comment = format!("family={family} qubits={n} seed={seed} index={index}");
            let out = common.out.clone().or(cfg.get("out").map(PathBuf::from));
            emit(out.as_deref(), &state_to_csv(&psi, &comment))
        }
        Command::GenCircuit {
            common,
            kind,
            depth,
            entangler,
        } => {
            let cfg = load_config(&common)?;
            let n = single_qubits(&common, &cfg, 3)?;
            let kind: GeneratorKind = cfg.resolve("kind", kind, "bc".into())?.parse()?;
            let mut gen = GeneratorConfig::new(kind, n, cfg.resolve("depth", depth, 1)?);
            gen.entangler = cfg.resolve("entangler", entangler, "cnot".into())?.parse::<Entangler>()?;
            let seed = cfg.resolve("seed", common.seed, 0)?;
            let circuit = gen.generate(&mut RngHandle::new(seed))?;
            let text = format!(
                "# kind={kind} qubits={n} depth={} entangler={} seed={seed}\n# gate_count {}\n{circuit}",
                gen.depth,
                gen.entangler.as_str(),
                circuit.gate_count()
            );
            let out = common.out.clone().or(cfg.get("out").map(PathBuf::from));
            emit(out.as_deref(), &text)?;
            eprintln!("gate_count {}", circuit.gate_count());
            Ok(())
        }
        Command::Score {
            common,
            state,
            circuit,
            blocks,
        } => {
            let cfg = load_config(&common)?;
            let read = |p: &Path| std::fs::read_to_string(p).with_context(|| p.display().to_string());
            let psi: StateVector = match (state, circuit) {
                (Some(p), None) => state_from_csv(&read(&p)?, &p)?,
                (None, Some(p)) => Circuit::parse(&read(&p)?)
                    .with_context(|| p.display().to_string())?
                    .output_state(),
                _ => bail!("give exactly one of --state or --circuit"),
            };
            let blocks = match blocks.or(cfg.get("blocks").map(String::from)) {
                Some(spec) => parse_blocks(&spec, psi.num_qubits())?,
                None => Vec::new(),
            };
            let report = score_state(&psi, &blocks)?;
            let mut text = String::from("score,value\n");
            for (name, v) in report.values() {
                text.push_str(&format!("{name},{v}\n"));
            }
            for k in 0..psi.num_qubits() {
                text.push_str(&format!(
                    "ms_q{k},{}\nmcs_q{k},{}\nps_q{k},{}\npcs_q{k},{}\n",
                    report.ms[k], report.mcs[k], report.ps[k], report.pcs[k]
                ));
            }
            let out = common.out.clone().or(cfg.get("out").map(PathBuf::from));
            emit(out.as_deref(), &text)
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
