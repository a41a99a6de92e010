//! Sweeps over `(n, p, seed)` cells and the CSV they produce.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::constructions::{
    construct_bipartite_family, construct_greedy, construct_inductive, construct_multipartite, construct_ntriangle,
    construct_star, ConstructionReport, Params,
};
use crate::error::{Result, SatError};
use crate::gnp::DeferredGnp;
use crate::graph::Graph;
use crate::pattern::{parse_pattern, Family, Pattern};
use crate::saturation::is_saturated;

pub const CSV_HEADER: [&str; 11] = [
    "construction",
    "pattern",
    "n",
    "p",
    "seed",
    "edges_before_patch",
    "patch_added",
    "edges_final",
    "uncompleted_before_patch",
    "verified",
    "runtime_ms",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Bipartite,
    Ntriangle,
    Inductive,
    Star,
    Multipartite,
    Greedy,
}

impl Construction {
    pub const ALL: [Construction; 6] = [
        Construction::Bipartite,
        Construction::Ntriangle,
        Construction::Inductive,
        Construction::Star,
        Construction::Multipartite,
        Construction::Greedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Bipartite => "bipartite",
            Construction::Ntriangle => "ntriangle",
            Construction::Inductive => "inductive",
            Construction::Star => "star",
            Construction::Multipartite => "multipartite",
            Construction::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = SatError;

    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| SatError::Parse(format!("unknown construction `{s}`")))
    }
}

/// Part sizes of `f` when it is complete multipartite.
pub fn multipartite_parts(f: &Pattern) -> Option<Vec<usize>> {
    let k = f.k();
    let mut part = vec![usize::MAX; k];
    let mut sizes = Vec::new();
    for v in 0..k {
        if part[v] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut size = 0;
        for u in v..k {
            if part[u] == usize::MAX && (u == v || !f.has_edge(u, v)) {
                part[u] = id;
                size += 1;
            }
        }
        sizes.push(size);
    }
    for u in 0..k {
        for v in u + 1..k {
            if f.has_edge(u, v) != (part[u] != part[v]) {
                return None;
            }
        }
    }
    sizes.sort_unstable();
    Some(sizes)
}

/// Runs one construction on `g`.
pub fn run_construction(kind: Construction, g: &DeferredGnp, f: &Pattern, params: &Params) -> Result<(Graph, ConstructionReport)> {
    let fam = || Family::single(f.clone());
    match kind {
        Construction::Bipartite => construct_bipartite_family(g, &fam(), params),
        Construction::Ntriangle => construct_ntriangle(g, f, params),
        Construction::Inductive => construct_inductive(g, &fam(), params),
        Construction::Star => construct_star(g, f, params),
        Construction::Multipartite => {
            let parts = multipartite_parts(f)
                .filter(|s| s.len() >= 3)
                .ok_or_else(|| SatError::Applicability(format!("{} is not complete multipartite with 3+ parts", f.name())))?;
            construct_multipartite(g, &parts, params)
        }
        Construction::Greedy => construct_greedy(g, &fam(), params),
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub construction: Construction,
    pub pattern: String,
    pub ps: Vec<f64>,
    pub ns: Vec<usize>,
    pub seeds: Vec<u64>,
    /// `seed` is overwritten per cell
    pub params: Params,
    pub out: Option<PathBuf>,
    /// worker threads; 0 lets rayon decide
    pub threads: usize,
}

impl ExperimentSpec {
    pub fn new(construction: Construction, pattern: &str) -> Self {
        ExperimentSpec {
            construction,
            pattern: pattern.to_string(),
            ps: vec![0.5],
            ns: Vec::new(),
            seeds: Vec::new(),
            params: Params::default(),
            out: None,
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<Pattern> {
        if self.ns.is_empty() || self.ps.is_empty() || self.seeds.is_empty() {
            return Err(SatError::Parameter("n, p and seed lists must be nonempty".into()));
        }
        if let Some(&p) = self.ps.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
            return Err(SatError::Parameter(format!("p = {p} is not a probability")));
        }
        parse_pattern(&self.pattern)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub construction: String,
    pub pattern: String,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub edges_before_patch: Option<usize>,
    pub patch_added: Option<usize>,
    pub edges_final: Option<usize>,
    pub uncompleted_before_patch: Option<usize>,
    /// `true`, `false`, `sampled`, or `error:<kind>`
    pub verified: String,
    pub runtime_ms: u128,
}

impl ResultRow {
    pub fn from_report(r: &ConstructionReport, construction: Construction, pattern: &str) -> Self {
        ResultRow {
            construction: construction.name().into(),
            pattern: pattern.into(),
            n: r.n,
            p: r.p,
            seed: r.seed,
            edges_before_patch: Some(r.edges_before_patch),
            patch_added: Some(r.patch_added),
            edges_final: Some(r.edges_final),
            uncompleted_before_patch: Some(r.uncompleted_before_patch),
            verified: r.verified.to_string(),
            runtime_ms: r.runtime_ms,
        }
    }

    pub fn is_error(&self) -> bool {
        self.verified.starts_with("error")
    }

    fn record(&self) -> [String; 11] {
        let opt = |x: Option<usize>| x.map_or(String::new(), |v| v.to_string());
        [
            self.construction.clone(),
            self.pattern.clone(),
            self.n.to_string(),
            self.p.to_string(),
            self.seed.to_string(),
            opt(self.edges_before_patch),
            opt(self.patch_added),
            opt(self.edges_final),
            opt(self.uncompleted_before_patch),
            self.verified.clone(),
            self.runtime_ms.to_string(),
        ]
    }
}

fn error_tag(e: &SatError) -> String {
    let kind = match e {
        SatError::Applicability(_) => "applicability",
        SatError::Size(_) => "size",
        SatError::Range(_) => "range",
        SatError::ConstructionFailure(_) => "construction",
        SatError::Parameter(_) => "parameter",
        SatError::Coupling(..) => "coupling",
        _ => "other",
    };
    format!("error:{kind}")
}

pub fn run_cell(spec: &ExperimentSpec, f: &Pattern, n: usize, p: f64, seed: u64) -> ResultRow {
    let params = Params { seed, ..spec.params.clone() };
    let out = DeferredGnp::new(n, p, seed).and_then(|g| run_construction(spec.construction, &g, f, &params));
    match out {
        Ok((_, r)) => ResultRow::from_report(&r, spec.construction, &spec.pattern),
        Err(e) => ResultRow {
            construction: spec.construction.name().into(),
            pattern: spec.pattern.clone(),
            n,
            p,
            seed,
            edges_before_patch: None,
            patch_added: None,
            edges_final: None,
            uncompleted_before_patch: None,
            verified: error_tag(&e),
            runtime_ms: 0,
        },
    }
}

/// One row per cell, sorted by `(n, p, seed)`. Writes the CSV when `spec.out` is set.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let f = spec.validate()?;
    let mut cells = Vec::new();
    for &n in &spec.ns {
        for &p in &spec.ps {
            for &seed in &spec.seeds {
                cells.push((n, p, seed));
            }
        }
    }
    cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.threads)
        .build()
        .map_err(|e| SatError::Parameter(e.to_string()))?;
    let rows: Vec<ResultRow> = pool.install(|| cells.par_iter().map(|&(n, p, s)| run_cell(spec, &f, n, p, s)).collect());
    if let Some(path) = &spec.out {
        write_csv_file(path, &rows)?;
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(out: W, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| SatError::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record(r.record()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, rows: &[ResultRow]) -> Result<()> {
    write_csv(std::fs::File::create(path)?, rows)
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let bad = |e: csv::Error| SatError::Parse(e.to_string());
    let header: Vec<String> = rd.headers().map_err(bad)?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(SatError::Parse(format!("unexpected header {header:?}")));
    }
    let num = |s: &str, what: &str| s.parse::<u128>().map_err(|_| SatError::Parse(format!("bad {what} `{s}`")));
    let opt = |s: &str| if s.is_empty() { Ok(None) } else { s.parse().map(Some).map_err(|_| SatError::Parse(format!("bad count `{s}`"))) };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(bad)?;
        rows.push(ResultRow {
            construction: rec[0].to_string(),
            pattern: rec[1].to_string(),
            n: num(&rec[2], "n")? as usize,
            p: rec[3].parse().map_err(|_| SatError::Parse(format!("bad p `{}`", &rec[3])))?,
            seed: num(&rec[4], "seed")? as u64,
            edges_before_patch: opt(&rec[5])?,
            patch_added: opt(&rec[6])?,
            edges_final: opt(&rec[7])?,
            uncompleted_before_patch: opt(&rec[8])?,
            verified: rec[9].to_string(),
            runtime_ms: num(&rec[10], "runtime_ms")?,
        });
    }
    Ok(rows)
}

/// CSV text with the runtime column blanked, for reproducibility checks.
pub fn strip_runtime(csv_text: &str) -> String {
    csv_text
        .lines()
        .map(|l| match l.rfind(',') {
            Some(i) => &l[..i],
            None => l,
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    /// 0 saturated, 1 not saturated, 2 error
    pub code: i32,
    pub message: String,
}

/// Loads both edge lists and checks saturation. A blank `sub` file is the
/// edgeless graph on the host's vertices.
pub fn verify_cmd(host: &Path, sub: &Path, pattern: &str) -> VerifyOutcome {
    let run = || -> Result<VerifyOutcome> {
        let f = parse_pattern(pattern)?;
        let g = Graph::read_edge_list(std::io::BufReader::new(std::fs::File::open(host)?))?;
        let sub_text = std::fs::read_to_string(sub)?;
        let h = if sub_text.trim().is_empty() { Graph::new(g.n()) } else { Graph::from_edge_list_str(&sub_text)? };
        let v = is_saturated(&g, &h, &Family::single(f))?;
        let (code, verdict) = if v.saturated() { (0, "saturated") } else { (1, "not saturated") };
        let mut message = verdict.to_string();
        if let Some(x) = v.violation {
            message.push_str(&format!(": {x}"));
        }
        Ok(VerifyOutcome { code, message })
    };
    run().unwrap_or_else(|e| VerifyOutcome { code: 2, message: format!("error: {e}") })
}
