//! `treepack` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 negative result
//! (UNSAT, failed packing, verifier violations), 3 timeout.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treepack::constructive::{ConstructiveOptions, PackError, Preprocess};
use treepack::degree::{pack_avg_degree, pack_min_degree, AvgStrategy, DegreeError};
use treepack::graph::{complete_graph, mycielski, random_gnm, random_min_degree};
use treepack::search::{pack_exhaustive, SearchOptions, SearchOutcome, DEFAULT_SEARCH_BUDGET};
use treepack::sweep::{self, FamilyFilter, Host, SweepOptions, SweepReport};
use treepack::tree::{canonical_form, enumerate_free_trees, MAX_ENUMERATION_ORDER};
use treepack::{pack_constructive, verify_packing, ColoringError, Graph, Packing, TreeFamily};

const SUCCESS: u8 = 0;
const USAGE: u8 = 1;
const NEGATIVE: u8 = 2;
const TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "treepack",
    version,
    about = "Pack trees T_2..T_k edge-disjointly into host graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the non-isomorphic trees on n vertices.
    Trees {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = TreeFormat::Edges)]
        format: TreeFormat,
    },
    /// Write a generated host graph in edge-list format.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Vertex count (complete, gnm, mindeg) or k (mycielski).
        #[arg(long)]
        n: usize,
        /// Edge count for gnm, minimum degree for mindeg.
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pack a family into a host and write the packing as JSON.
    Pack {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// The k of the average-degree packer (defaults to 2s).
        #[arg(long)]
        k: Option<usize>,
        /// Constructive mode: take the host's chromatic number as given and
        /// skip the vertex-critical reduction.
        #[arg(long)]
        trust_chi: bool,
        #[arg(long, env = "TREEPACK_BUDGET_NODES", default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Check a packing against a host and family.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        packing: PathBuf,
    },
    /// Sweep small instances of a conjecture and write a JSONL report.
    Conjecture {
        #[arg(value_enum)]
        which: Which,
        /// tpc: sweep n = 2..=max-n.
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Suite::Mycielski)]
        suite: Suite,
        /// chromatic: only families with at most three non-stars.
        #[arg(long)]
        theorem_only: bool,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, env = "TREEPACK_BUDGET_NODES", default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add elapsed_ms to each record (makes reports run-dependent).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeFormat {
    Edges,
    Canon,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Complete,
    Mycielski,
    Gnm,
    Mindeg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Constructive,
    Search,
    Mindeg,
    Avgdeg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Tpc,
    Chromatic,
    Mindeg,
    Avgdeg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Mycielski,
    Complete,
    Both,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { SUCCESS });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Trees { n, format } => cmd_trees(n, format),
        Cmd::Gen {
            kind,
            n,
            m,
            seed,
            out,
        } => cmd_gen(kind, n, m, seed, out.as_deref()),
        Cmd::Pack {
            mode,
            graph,
            family,
            out,
            dot,
            k,
            trust_chi,
            budget,
        } => {
            let g = read_graph(&graph)?;
            let f = read_family(&family)?;
            cmd_pack(
                mode,
                &g,
                &f,
                k,
                trust_chi,
                budget,
                out.as_deref(),
                dot.as_deref(),
            )
        }
        Cmd::Verify {
            graph,
            family,
            packing,
        } => {
            let g = read_graph(&graph)?;
            let f = read_family(&family)?;
            let text = fs::read_to_string(&packing)
                .with_context(|| format!("reading {}", packing.display()))?;
            let p = Packing::from_json(&text)
                .with_context(|| format!("parsing {}", packing.display()))?;
            let report = verify_packing(&g, &f, &p);
            println!("{}", report.to_json());
            Ok(if report.ok { SUCCESS } else { NEGATIVE })
        }
        Cmd::Conjecture {
            which,
            max_n,
            k,
            suite,
            theorem_only,
            trials,
            seed,
            jobs,
            budget,
            out,
            timings,
        } => {
            let opts = SweepOptions {
                budget,
                jobs,
                timings,
            };
            cmd_conjecture(
                which,
                max_n,
                k,
                suite,
                theorem_only,
                trials,
                seed,
                &opts,
                out.as_deref(),
            )
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::parse_edge_list_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_family(path: &Path) -> Result<TreeFamily> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    TreeFamily::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_trees(n: usize, format: TreeFormat) -> Result<u8> {
    if !(1..=MAX_ENUMERATION_ORDER).contains(&n) {
        bail!("--n must lie in 1..={MAX_ENUMERATION_ORDER}, got {n}");
    }
    for t in enumerate_free_trees(n)? {
        match format {
            TreeFormat::Canon => println!("{}", canonical_form(&t)),
            TreeFormat::Edges => {
                let edges: Vec<[usize; 2]> = t.edges().iter().map(|e| [e.u, e.v]).collect();
                println!("{}", serde_json::to_string(&edges)?);
            }
        }
    }
    Ok(SUCCESS)
}

fn cmd_gen(kind: GenKind, n: usize, m: usize, seed: u64, out: Option<&Path>) -> Result<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = match kind {
        GenKind::Complete => complete_graph(n),
        GenKind::Mycielski => {
            if !(1..=7).contains(&n) {
                bail!("mycielski --n must lie in 1..=7, got {n}");
            }
            mycielski(n)
        }
        GenKind::Gnm => {
            if m > n * n.saturating_sub(1) / 2 {
                bail!("G({n},{m}) asks for more edges than K_{n} has");
            }
            random_gnm(n, m, &mut rng)
        }
        GenKind::Mindeg => {
            if m >= n {
                bail!("minimum degree {m} impossible on {n} vertices");
            }
            random_min_degree(n, m, &mut rng)
        }
    };
    write_or_print(out, &g.to_edge_list_text())?;
    Ok(SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_pack(
    mode: Mode,
    g: &Graph,
    f: &TreeFamily,
    k: Option<usize>,
    trust_chi: bool,
    budget: u64,
    out: Option<&Path>,
    dot: Option<&Path>,
) -> Result<u8> {
    let packing = match mode {
        Mode::Constructive => {
            let nonstars = f.non_star_count();
            if nonstars > 3 {
                bail!("constructive mode needs at most 3 non-stars, the family has {nonstars}");
            }
            let opts = ConstructiveOptions {
                preprocess: if trust_chi {
                    Preprocess::Core
                } else {
                    Preprocess::Critical
                },
                ..ConstructiveOptions::default()
            };
            match pack_constructive(g, f, &opts) {
                Ok(o) => o.packing,
                Err(PackError::Coloring(ColoringError::Timeout(n))) => {
                    eprintln!("coloring search exceeded {n} nodes");
                    return Ok(TIMEOUT);
                }
                Err(e @ (PackError::NotKChromatic { .. } | PackError::TooManyNonStars(_))) => {
                    bail!(e)
                }
                Err(e) => {
                    eprintln!("constructive packing failed: {e}");
                    return Ok(NEGATIVE);
                }
            }
        }
        Mode::Search => {
            let res = pack_exhaustive(
                g,
                f,
                &SearchOptions {
                    budget,
                    twin_pruning: false,
                },
            );
            match res.outcome {
                SearchOutcome::Sat(p) => p,
                SearchOutcome::Unsat => {
                    eprintln!("UNSAT after {} nodes", res.nodes);
                    return Ok(NEGATIVE);
                }
                SearchOutcome::Timeout => {
                    eprintln!("TIMEOUT after {} nodes", res.nodes);
                    return Ok(TIMEOUT);
                }
            }
        }
        Mode::Mindeg => match pack_min_degree(g, f, Some(budget)) {
            Ok(run) => {
                if let Some(why) = &run.fallback {
                    eprintln!("levelwise embedding failed ({why}); packed by exhaustive search");
                }
                run.packing
            }
            Err(e @ DegreeError::Precondition(_)) => bail!(e),
            Err(
                e @ DegreeError::Fallback {
                    outcome: "TIMEOUT", ..
                },
            ) => {
                eprintln!("{e}");
                return Ok(TIMEOUT);
            }
            Err(e) => {
                eprintln!("{e}");
                return Ok(NEGATIVE);
            }
        },
        Mode::Avgdeg => {
            let k = k.unwrap_or(2 * f.k());
            match pack_avg_degree(g, f, k, AvgStrategy::Peel) {
                Ok(run) => run.packing,
                Err(e @ DegreeError::Precondition(_)) => bail!(e),
                Err(e) => {
                    eprintln!("{e}");
                    return Ok(NEGATIVE);
                }
            }
        }
    };
    let report = verify_packing(g, f, &packing);
    if !report.ok {
        eprintln!("packing failed verification: {}", report.to_json());
        return Ok(NEGATIVE);
    }
    write_or_print(out, &format!("{}\n", packing.to_json()))?;
    if let Some(path) = dot {
        fs::write(path, packing.to_dot(g))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_conjecture(
    which: Which,
    max_n: usize,
    k: usize,
    suite: Suite,
    theorem_only: bool,
    trials: usize,
    seed: u64,
    opts: &SweepOptions,
    out: Option<&Path>,
) -> Result<u8> {
    let (name, reports) = match which {
        Which::Tpc => {
            if !(2..=8).contains(&max_n) {
                bail!("tpc --max-n must lie in 2..=8, got {max_n}");
            }
            let reports = (2..=max_n)
                .map(|n| sweep::sweep_tpc(n, opts))
                .collect::<Result<Vec<_>, _>>()?;
            ("tpc", reports)
        }
        Which::Chromatic => {
            if !(2..=7).contains(&k) {
                bail!("chromatic --k must lie in 2..=7, got {k}");
            }
            let mut hosts = Vec::new();
            if matches!(suite, Suite::Mycielski | Suite::Both) {
                hosts.push(Host::mycielski(k));
            }
            if matches!(suite, Suite::Complete | Suite::Both) {
                hosts.push(Host::complete(k));
            }
            let filter = if theorem_only {
                FamilyFilter::AtMostThreeNonStars
            } else {
                FamilyFilter::All
            };
            (
                "chromatic",
                vec![sweep::sweep_chromatic(k, &hosts, filter, opts)?],
            )
        }
        Which::Mindeg => {
            if !(2..=8).contains(&k) {
                bail!("mindeg --k must lie in 2..=8, got {k}");
            }
            (
                "mindeg",
                vec![sweep::sweep_min_degree(k, trials, seed, opts)?],
            )
        }
        Which::Avgdeg => {
            if !(4..=10).contains(&k) {
                bail!("avgdeg --k must lie in 4..=10, got {k}");
            }
            (
                "avgdeg",
                vec![sweep::sweep_avg_degree(k, trials, seed, opts)?],
            )
        }
    };
    let records = reports
        .iter()
        .flat_map(|r| r.records.iter().cloned())
        .collect();
    let merged = SweepReport::new(records);
    write_or_print(out, &merged.to_jsonl())?;
    let s = merged.summary;
    let line = format!(
        "conjecture {name}: total {} sat {} unsat {} timeout {} skipped {} failed {}",
        s.total, s.sat, s.unsat, s.timeout, s.skipped, s.failed
    );
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(if s.unsat > 0 || s.failed > 0 {
        NEGATIVE
    } else if s.timeout > 0 {
        TIMEOUT
    } else {
        SUCCESS
    })
}
