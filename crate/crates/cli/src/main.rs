//! `pairwalk`: simulate Laplacian quantum walks, check and search pair
//! state transfer, and build perturbed graphs with certified transfer.
//!
//! Exit codes: 0 on success / verdict true, 1 on verdict false, 2 on
//! usage or input errors.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use pairwalk::families::FamilySpec;
use pairwalk::graph::{Graph, PairState, Perturbation};
use pairwalk::json::{
    certificate_to_json, construction_to_json, fmt_g15, graph_to_json, parse_graph,
};
use pairwalk::spectral::verify_lemma1;
use pairwalk::transfer::{
    apply_lpst_preservation, apply_periodicity_to_lpst, apply_pgst_preservation, check_pair_lpst,
    construct_kn_minus_edge, construct_kn_minus_matching, scan_fidelity, search_pgst, SearchConfig,
    TransferCertificate,
};

#[derive(Parser)]
#[command(name = "pairwalk", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Graph input: a file path, or `-` for standard input.
#[derive(Args)]
struct GraphInput {
    /// Graph JSON file ("-" reads standard input)
    graph: String,
}

#[derive(Args)]
struct OutputOpt {
    /// Write the result here instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SearchOpts {
    /// Search window is [0, horizon]
    #[arg(long, default_value_t = 50.0)]
    horizon: f64,
    /// Grid samples over the window
    #[arg(long, default_value_t = 20001)]
    grid: usize,
    /// Golden-section refinement iterations
    #[arg(long, default_value_t = 60)]
    refine: usize,
    /// Target gap: verdict requires fidelity >= 1 - eps
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
}

impl SearchOpts {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            horizon: self.horizon,
            grid_points: self.grid,
            refine_iterations: self.refine,
            epsilon: self.eps,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List all twin pairs of a graph as a JSON array
    Twins {
        #[command(flatten)]
        graph: GraphInput,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Check perfect pair state transfer at a fixed time
    CheckPst {
        #[command(flatten)]
        graph: GraphInput,
        /// Source pair "a,b"
        #[arg(long, value_parser = parse_pair)]
        src: PairState,
        /// Target pair "c,d" (equal to src checks periodicity)
        #[arg(long, value_parser = parse_pair)]
        dst: PairState,
        /// Time; accepts "pi", "pi/2", "pi/4" or a decimal
        #[arg(long, value_parser = parse_time)]
        time: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Search [0, horizon] for pretty good pair state transfer
    Search {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, value_parser = parse_pair)]
        src: PairState,
        #[arg(long, value_parser = parse_pair)]
        dst: PairState,
        #[command(flatten)]
        search: SearchOpts,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Add alpha to the weight of the edge between a pair of vertices
    Perturb {
        #[command(flatten)]
        graph: GraphInput,
        /// Pair "a,b"
        #[arg(long, value_parser = parse_pair)]
        pair: PairState,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Generate a named graph family
    ///
    /// Examples: `family complete 6`, `family complete-bipartite 2 4`,
    /// `family circulant 8 1,3,4,5,7`, `family cycle 5`, `family path 4`,
    /// `family kn-minus-matching 8 "0,1;2,3;4,5;6,7"`.
    Family {
        tag: String,
        params: Vec<String>,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Sample the transfer fidelity over a time range as CSV
    Scan {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, value_parser = parse_pair)]
        src: PairState,
        #[arg(long, value_parser = parse_pair)]
        dst: PairState,
        #[arg(long, value_parser = parse_time, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, value_parser = parse_time, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Check the rank-1 factorization of the perturbed walk on a twin pair
    VerifyLemma1 {
        #[command(flatten)]
        graph: GraphInput,
        /// Twin pair "a,b"
        #[arg(long, value_parser = parse_pair)]
        pair: PairState,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, value_parser = parse_time)]
        time: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Build a perturbed graph together with re-verified certificates
    Construct {
        #[command(subcommand)]
        recipe: Recipe,
    },
}

#[derive(Subcommand)]
enum Recipe {
    /// Carry a verified transfer through a twin-pair perturbation
    Thm2b {
        #[command(flatten)]
        graph: GraphInput,
        /// Twin pair "a,b" to perturb
        #[arg(long, value_parser = parse_pair)]
        pair: PairState,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Known transfer: source pair
        #[arg(long, value_parser = parse_pair)]
        src: PairState,
        /// Known transfer: target pair
        #[arg(long, value_parser = parse_pair)]
        dst: PairState,
        #[arg(long, value_parser = parse_time)]
        time: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Turn a periodic pair into transfer across a twin perturbation
    Thm3b {
        #[command(flatten)]
        graph: GraphInput,
        /// Twin pair "a,b" to perturb
        #[arg(long, value_parser = parse_pair)]
        pair: PairState,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Partner vertices q (comma-separated); each {a,q} must be periodic
        #[arg(long, value_delimiter = ',')]
        q: Vec<usize>,
        #[arg(long, value_parser = parse_time)]
        time: f64,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Complete graph with one edge deleted (certificates at pi/2)
    Cor1 {
        #[arg(long)]
        n: usize,
        /// Edge "a,b" to delete
        #[arg(long, value_parser = parse_pair)]
        pair: PairState,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Complete graph minus a matching (certificates at pi/2)
    Cor2 {
        #[arg(long)]
        n: usize,
        /// Matching as "a,b;c,d;..."
        #[arg(long)]
        matching: String,
        /// Target edge "a,b" (must belong to the matching)
        #[arg(long, value_parser = parse_pair)]
        target: PairState,
        #[command(flatten)]
        out: OutputOpt,
    },
    /// Carry pretty good transfer through a twin perturbation and search
    Thm4 {
        #[command(flatten)]
        graph: GraphInput,
        /// Twin pair "a,b" to perturb
        #[arg(long, value_parser = parse_pair)]
        pair: PairState,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, value_parser = parse_pair)]
        src: PairState,
        #[arg(long, value_parser = parse_pair)]
        dst: PairState,
        #[command(flatten)]
        search: SearchOpts,
        #[command(flatten)]
        out: OutputOpt,
    },
}

fn parse_pair(s: &str) -> Result<PairState, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"a,b\", got \"{s}\""))?;
    let a: usize = a
        .trim()
        .parse()
        .map_err(|e| format!("bad vertex {a:?}: {e}"))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|e| format!("bad vertex {b:?}: {e}"))?;
    PairState::new(a, b).map_err(|e| e.to_string())
}

fn parse_time(s: &str) -> Result<f64, String> {
    match s {
        "pi" => Ok(std::f64::consts::PI),
        "pi/2" => Ok(std::f64::consts::FRAC_PI_2),
        "pi/4" => Ok(std::f64::consts::FRAC_PI_4),
        other => other
            .parse()
            .map_err(|e| format!("expected pi, pi/2, pi/4 or a decimal: {e}")),
    }
}

fn parse_matching(s: &str) -> Result<Vec<PairState>> {
    s.split(';')
        .map(|item| parse_pair(item.trim()).map_err(anyhow::Error::msg))
        .collect()
}

fn read_graph(input: &GraphInput) -> Result<Graph> {
    let text = if input.graph == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading graph from stdin")?;
        buf
    } else {
        std::fs::read_to_string(&input.graph).with_context(|| format!("reading {}", input.graph))?
    };
    Ok(parse_graph(&text)?)
}

fn emit(out: &OutputOpt, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn verdict_code(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn all_pass(certs: &[TransferCertificate]) -> bool {
    certs.iter().all(|c| c.verdict)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Twins { graph, out } => {
            let g = read_graph(&graph)?;
            let pairs: Vec<String> = g
                .all_twin_pairs()
                .iter()
                .map(|p| format!("[{},{}]", p.a(), p.b()))
                .collect();
            emit(&out, &format!("[{}]", pairs.join(",")))?;
            Ok(0)
        }
        Command::CheckPst {
            graph,
            src,
            dst,
            time,
            tol,
            out,
        } => {
            let g = read_graph(&graph)?;
            let cert = check_pair_lpst(&g, &src, &dst, time, tol)?;
            emit(&out, &certificate_to_json(&cert))?;
            Ok(verdict_code(cert.verdict))
        }
        Command::Search {
            graph,
            src,
            dst,
            search,
            out,
        } => {
            let g = read_graph(&graph)?;
            let cert = search_pgst(&g, &src, &dst, &search.config())?;
            emit(&out, &certificate_to_json(&cert))?;
            Ok(verdict_code(cert.verdict))
        }
        Command::Perturb {
            graph,
            pair,
            alpha,
            out,
        } => {
            let g = read_graph(&graph)?;
            let h = g.perturb(&Perturbation { pair, alpha })?;
            emit(&out, &graph_to_json(&h))?;
            Ok(0)
        }
        Command::Family { tag, params, out } => {
            let args: Vec<&str> = params.iter().map(String::as_str).collect();
            let g = FamilySpec::from_args(&tag, &args)?.build()?;
            emit(&out, &graph_to_json(&g))?;
            Ok(0)
        }
        Command::Scan {
            graph,
            src,
            dst,
            t0,
            t1,
            steps,
            out,
        } => {
            let g = read_graph(&graph)?;
            let rows = scan_fidelity(&g, &src, &dst, t0, t1, steps)?;
            let mut csv = String::from("t,fidelity\n");
            for (t, f) in rows {
                csv.push_str(&format!("{},{}\n", fmt_g15(t), fmt_g15(f)));
            }
            emit(&out, csv.trim_end())?;
            Ok(0)
        }
        Command::VerifyLemma1 {
            graph,
            pair,
            alpha,
            time,
            tol,
            out,
        } => {
            let g = read_graph(&graph)?;
            let check = verify_lemma1(&g, &Perturbation { pair, alpha }, time, tol)?;
            emit(
                &out,
                &format!(
                    "{{\"pair\":[{},{}],\"alpha\":{},\"time\":{},\"residual\":{},\"tolerance\":{},\"pass\":{}}}",
                    pair.a(),
                    pair.b(),
                    fmt_g15(alpha),
                    fmt_g15(time),
                    fmt_g15(check.residual),
                    fmt_g15(tol),
                    check.pass
                ),
            )?;
            Ok(verdict_code(check.pass))
        }
        Command::Construct { recipe } => run_construct(recipe),
    }
}

fn run_construct(recipe: Recipe) -> Result<u8> {
    match recipe {
        Recipe::Thm2b {
            graph,
            pair,
            alpha,
            src,
            dst,
            time,
            tol,
            out,
        } => {
            let g = read_graph(&graph)?;
            let known = check_pair_lpst(&g, &src, &dst, time, tol)?;
            let (h, cert) = apply_lpst_preservation(&g, &Perturbation { pair, alpha }, &known)?;
            emit(&out, &construction_to_json(&h, std::slice::from_ref(&cert)))?;
            Ok(verdict_code(cert.verdict))
        }
        Recipe::Thm3b {
            graph,
            pair,
            alpha,
            q,
            time,
            out,
        } => {
            let g = read_graph(&graph)?;
            anyhow::ensure!(!q.is_empty(), "at least one q is required");
            let p = Perturbation { pair, alpha };
            let mut perturbed = None;
            let mut certs = Vec::new();
            for qi in q {
                let periodic = PairState::new(pair.a(), qi)?;
                let (h, mut cs) = apply_periodicity_to_lpst(&g, &p, &periodic, time)?;
                perturbed = Some(h);
                certs.append(&mut cs);
            }
            let h = perturbed.expect("at least one q");
            let ok = all_pass(&certs);
            emit(&out, &construction_to_json(&h, &certs))?;
            Ok(verdict_code(ok))
        }
        Recipe::Cor1 { n, pair, out } => {
            let (h, certs) = construct_kn_minus_edge(n, pair.a(), pair.b())?;
            let ok = all_pass(&certs);
            emit(&out, &construction_to_json(&h, &certs))?;
            Ok(verdict_code(ok))
        }
        Recipe::Cor2 {
            n,
            matching,
            target,
            out,
        } => {
            let matching = parse_matching(&matching)?;
            let (h, certs) = construct_kn_minus_matching(n, &matching, &target)?;
            let ok = all_pass(&certs);
            emit(&out, &construction_to_json(&h, &certs))?;
            Ok(verdict_code(ok))
        }
        Recipe::Thm4 {
            graph,
            pair,
            alpha,
            src,
            dst,
            search,
            out,
        } => {
            let g = read_graph(&graph)?;
            let (h, cert) = apply_pgst_preservation(
                &g,
                &Perturbation { pair, alpha },
                &src,
                &dst,
                &search.config(),
            )?;
            emit(&out, &construction_to_json(&h, std::slice::from_ref(&cert)))?;
            Ok(verdict_code(cert.verdict))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
