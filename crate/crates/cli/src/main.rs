use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use satlab::constructions::Params;
use satlab::experiments::{run_construction, run_sweep, verify_cmd, write_csv, Construction, ExperimentSpec};
use satlab::hamming::run_probes;
use satlab::props::{chromatic_number, deleted_family, detect_ntriangle, detect_star, family_min_bipartite_side, optimal_colourings};
use satlab::saturation::exact_sat;
use satlab::{gen_gnp, parse_pattern, DeferredGnp, Family, Graph};

#[derive(Parser)]
#[command(name = "satlab", version, about = "Saturated subgraphs of G(n,p)")]
struct Cli {
    /// randomness key
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// write the main output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample G(n,p) as an edge list
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Build a saturated subgraph; prints the report, writes H to --out
    Construct {
        construction: Construction,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// also write the host graph
        #[arg(long)]
        host_out: Option<PathBuf>,
        /// append Hamming diagnostics (multipartite patterns only)
        #[arg(long)]
        diag: bool,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Check that SUB is PATTERN-saturated in HOST; exit 0 yes, 1 no, 2 error
    Verify {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[arg(long)]
        pattern: String,
    },
    /// Exact saturation number of a small host by exhaustive search
    SatExact {
        #[arg(long)]
        pattern: String,
        /// host edge list
        #[arg(long, conflicts_with = "complete")]
        host: Option<PathBuf>,
        /// use K_n as host
        #[arg(long)]
        complete: Option<usize>,
    },
    /// Structural properties of a pattern
    Props {
        #[arg(long)]
        pattern: String,
    },
    /// Run a grid of cells and write CSV
    Sweep {
        construction: Construction,
        #[arg(long)]
        pattern: String,
        /// comma list; `a..b` ranges allowed
        #[arg(long)]
        n: String,
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        p: Vec<f64>,
        /// comma list; `a..b` ranges allowed
        #[arg(long)]
        seeds: String,
        /// worker threads, 0 for all cores
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// A₂ size multiplier
    #[arg(long = "L")]
    l_mult: Option<f64>,
    #[arg(long)]
    c_ind: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    n_min: Option<usize>,
    /// full verification up to this n
    #[arg(long)]
    verify_guard: Option<usize>,
    /// ignore p-range guards
    #[arg(long)]
    force: bool,
}

impl ParamArgs {
    fn params(&self, seed: u64) -> Params {
        let d = Params::default();
        Params {
            eps: self.eps.unwrap_or(d.eps),
            gamma: self.gamma,
            l_mult: self.l_mult.unwrap_or(d.l_mult),
            c_ind: self.c_ind.unwrap_or(d.c_ind),
            delta: self.delta.unwrap_or(d.delta),
            seed,
            n_min: self.n_min,
            force: self.force,
            verify_guard: self.verify_guard.unwrap_or(d.verify_guard),
            ..d
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((a, b)) = tok.split_once("..") {
            let a: u64 = a.parse().ok().with_context(|| format!("bad range start in `{tok}`"))?;
            let b: u64 = b.parse().ok().with_context(|| format!("bad range end in `{tok}`"))?;
            out.extend(a..b);
        } else {
            out.push(tok.parse().ok().with_context(|| format!("bad list item `{tok}`"))?);
        }
    }
    Ok(out)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_graph(path: &PathBuf) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Graph::from_edge_list_str(&text)?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Gen { n, p } => emit(&cli.out, &gen_gnp(n, p, seed)?.to_edge_list_string())?,
        Cmd::Construct { construction, pattern, n, p, host_out, diag, params } => {
            let f = parse_pattern(&pattern)?;
            let params = params.params(seed);
            let g = DeferredGnp::new(n, p, seed)?;
            let (h, mut rep) = run_construction(construction, &g, &f, &params)?;
            if diag {
                let parts = satlab::experiments::multipartite_parts(&f).context("--diag needs a multipartite pattern")?;
                let dg = DeferredGnp::new(n, p, seed)?;
                run_probes(&dg, &parts, 300, params.probe_trials, &params)?.record(&mut rep);
            }
            if let Some(path) = &host_out {
                fs::write(path, g.materialize().to_edge_list_string())?;
            }
            if let Some(path) = &cli.out {
                fs::write(path, h.to_edge_list_string())?;
            }
            print!("{}", rep.to_kv());
        }
        Cmd::Verify { host, sub, pattern } => {
            let v = verify_cmd(&host, &sub, &pattern);
            emit(&cli.out, &format!("{}\n", v.message))?;
            return Ok(ExitCode::from(v.code as u8));
        }
        Cmd::SatExact { pattern, host, complete } => {
            let f = parse_pattern(&pattern)?;
            let g = match (host, complete) {
                (Some(p), _) => read_graph(&p)?,
                (None, Some(n)) => Graph::complete(n),
                (None, None) => bail!("give --host or --complete"),
            };
            emit(&cli.out, &format!("{}\n", exact_sat(&g, &f)?))?;
        }
        Cmd::Props { pattern } => {
            let f = parse_pattern(&pattern)?;
            let w = optimal_colourings(&f);
            let mut s = String::new();
            s += &format!("pattern={}\nvertices={}\nedges={}\n", f.name(), f.k(), f.edge_count());
            s += &format!("chi={}\ns_star={}\n", chromatic_number(&f), w.s_star);
            s += &format!("optimal_colourings={}\n", w.partitions.len());
            match detect_ntriangle(&f) {
                Some(x) => s += &format!("ntriangle=yes\nntriangle.i_max={:?}\nntriangle.v={}\n", x.i_max, x.v),
                None => s += "ntriangle=no\n",
            }
            match detect_star(&f) {
                Some(x) => s += &format!("star=yes\nstar.edge={} {}\n", x.u, x.v),
                None => s += "star=no\n",
            }
            match family_min_bipartite_side(&Family::single(f.clone())) {
                Some((l, _)) => s += &format!("bipartite_side={l}\n"),
                None => s += "bipartite_side=none\n",
            }
            s += &format!("deleted_family={}\n", deleted_family(&Family::single(f)).len());
            emit(&cli.out, &s)?;
        }
        Cmd::Sweep { construction, pattern, n, p, seeds, threads, params } => {
            let mut spec = ExperimentSpec::new(construction, &pattern);
            spec.ns = parse_list(&n)?.into_iter().map(|x| x as usize).collect();
            spec.ps = p;
            spec.seeds = parse_list(&seeds)?;
            spec.params = params.params(seed);
            spec.threads = threads;
            let rows = run_sweep(&spec)?;
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows)?;
            emit(&cli.out, std::str::from_utf8(&buf)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
