//! Saturated subgraphs of `G(n,p)` built phase by phase.
//!
//! Each construction places its reserved sets at the lowest vertex ids, builds a
//! free subgraph `H` of the host, and finishes with the lexicographic patch-up.
//! The report records the edges each phase contributed.

mod bipartite;
mod inductive;
mod sharp;

use std::fmt::Write as _;
use std::time::Instant;

pub use bipartite::{construct_bipartite_family, construct_ntriangle};
pub use inductive::construct_inductive;
pub use sharp::{
    build_dense_free, build_h_b1, construct_multipartite, construct_star, greedy_colouring, ks2_factor,
    DenseFreeReport, HB1Output, SharpSizes,
};

use crate::embed::Matcher;
use crate::error::{Result, SatError};
use crate::gnp::DeferredGnp;
use crate::graph::Graph;
use crate::pattern::Family;
use crate::saturation::{patch_up_known, verify_sampled, Verified, VERIFY_GUARD, VERIFY_SAMPLES};

#[derive(Clone, Debug)]
pub struct Params {
    pub eps: f64,
    /// `None` means `min(0.05, 1/(32·s_max))`
    pub gamma: Option<f64>,
    /// multiplier of `log_ρ n` for the size of `A₂`
    pub l_mult: f64,
    /// constant in the `C·ln n` reserved set of the inductive construction
    pub c_ind: f64,
    /// dense-free probes sample subsets of `|V|^{-delta}·|V|` vertices
    pub delta: f64,
    pub probe_trials: usize,
    pub seed: u64,
    pub n_min: Option<usize>,
    pub force: bool,
    pub verify_guard: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            eps: 0.1,
            gamma: None,
            l_mult: 0.35,
            c_ind: 2.0,
            delta: 0.25,
            probe_trials: 50,
            seed: 0,
            n_min: None,
            force: false,
            verify_guard: VERIFY_GUARD,
        }
    }
}

impl Params {
    pub fn gamma_for(&self, s_max: usize) -> f64 {
        self.gamma.unwrap_or_else(|| 0.05f64.min(1.0 / (32.0 * s_max.max(1) as f64)))
    }

    pub(crate) fn check_n(&self, n: usize) -> Result<()> {
        if let Some(m) = self.n_min {
            if n < m {
                return Err(SatError::Size(format!("n = {n} below n_min = {m}")));
            }
        }
        Ok(())
    }

    pub(crate) fn check_basic(&self) -> Result<()> {
        if !(self.eps > 0.0) || self.l_mult <= 0.0 || self.c_ind <= 0.0 || self.delta <= 0.0 {
            return Err(SatError::Parameter("eps, L, C_ind and delta must be positive".into()));
        }
        Ok(())
    }
}

/// `ln n / ln(1/(1-p))`.
pub fn log_rho(n: usize, p: f64) -> f64 {
    (n as f64).ln() / (1.0 / (1.0 - p)).ln()
}

#[derive(Clone, Debug)]
pub struct ConstructionReport {
    pub construction: String,
    pub pattern: String,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    /// edges contributed by each phase, in order; the last one is the patch-up
    pub phases: Vec<(String, usize)>,
    /// derived sizes and diagnostics as ordered key/value pairs
    pub info: Vec<(String, String)>,
    pub warnings: Vec<String>,
    pub edges_before_patch: usize,
    pub patch_added: usize,
    pub edges_final: usize,
    pub uncompleted_before_patch: usize,
    pub verified: Verified,
    pub runtime_ms: u128,
}

impl ConstructionReport {
    pub fn new(construction: &str, pattern: &str, n: usize, p: f64, seed: u64) -> Self {
        ConstructionReport {
            construction: construction.into(),
            pattern: pattern.into(),
            n,
            p,
            seed,
            phases: Vec::new(),
            info: Vec::new(),
            warnings: Vec::new(),
            edges_before_patch: 0,
            patch_added: 0,
            edges_final: 0,
            uncompleted_before_patch: 0,
            verified: Verified::False,
            runtime_ms: 0,
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.info.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.info.push((key.to_string(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.info.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(|v| v.parse().ok())
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn phase_sum(&self) -> usize {
        self.phases.iter().map(|(_, c)| c).sum()
    }

    /// One `key=value` per line.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "construction={}", self.construction);
        let _ = writeln!(s, "pattern={}", self.pattern);
        let _ = writeln!(s, "n={}", self.n);
        let _ = writeln!(s, "p={}", self.p);
        let _ = writeln!(s, "seed={}", self.seed);
        for (k, v) in &self.phases {
            let _ = writeln!(s, "phase.{k}={v}");
        }
        for (k, v) in &self.info {
            let _ = writeln!(s, "{k}={v}");
        }
        for (i, w) in self.warnings.iter().enumerate() {
            let _ = writeln!(s, "warning.{i}={w}");
        }
        let _ = writeln!(s, "edges_before_patch={}", self.edges_before_patch);
        let _ = writeln!(s, "patch_added={}", self.patch_added);
        let _ = writeln!(s, "edges_final={}", self.edges_final);
        let _ = writeln!(s, "uncompleted_before_patch={}", self.uncompleted_before_patch);
        let _ = writeln!(s, "verified={}", self.verified);
        let _ = writeln!(s, "runtime_ms={}", self.runtime_ms);
        s
    }
}

/// Accumulates `H` while attributing each new edge to the current phase.
pub(crate) struct Builder {
    pub h: Graph,
    pub report: ConstructionReport,
    started: Instant,
    /// pairs seen completed by gated additions; completion only grows with `h`
    known: Option<Graph>,
}

impl Builder {
    pub fn new(n: usize, report: ConstructionReport) -> Self {
        Builder { h: Graph::new(n), report, started: Instant::now(), known: None }
    }

    pub fn track_completed(&mut self) {
        self.known = Some(Graph::new(self.h.n()));
    }

    pub fn known_completed(&self, u: usize, v: usize) -> bool {
        self.known.as_ref().is_some_and(|k| k.has_edge(u, v))
    }

    pub fn phase(&mut self, name: &str) {
        self.report.phases.push((name.to_string(), 0));
    }

    #[inline]
    pub fn add(&mut self, u: usize, v: usize) -> bool {
        let fresh = self.h.add_edge(u, v);
        if fresh {
            self.report.phases.last_mut().expect("phase opened").1 += 1;
        }
        fresh
    }

    /// Adds `uv` unless `H` already completes it; keeps `H` free.
    #[inline]
    pub fn add_gated(&mut self, m: &Matcher, u: usize, v: usize) -> bool {
        if self.h.has_edge(u, v) || self.known_completed(u, v) {
            return false;
        }
        let c = m.completes(&self.h, u, v);
        if let Some(k) = self.known.as_mut() {
            if c {
                k.add_edge(u, v);
            }
        }
        if c {
            return false;
        }
        self.add(u, v)
    }

    pub fn add_graph(&mut self, other: &Graph) {
        for (u, v) in other.edges() {
            self.add(u, v);
        }
    }

    /// Patch-up and verification; consumes the builder.
    pub fn finish(self, g: &Graph, fam: &Family, m: &Matcher, guard: usize) -> Result<(Graph, ConstructionReport)> {
        self.finish_with(g, fam, m, guard, true)
    }

    pub fn finish_with(
        mut self,
        g: &Graph,
        fam: &Family,
        m: &Matcher,
        guard: usize,
        verify: bool,
    ) -> Result<(Graph, ConstructionReport)> {
        let before = self.h.edge_count();
        let outcome = patch_up_known(g, &self.h, m, self.known.as_ref());
        self.report.phases.push(("patch".into(), outcome.added));
        self.report.edges_before_patch = before;
        self.report.patch_added = outcome.added;
        self.report.uncompleted_before_patch = outcome.uncompleted_before;
        self.report.edges_final = outcome.graph.edge_count();
        debug_assert_eq!(self.report.phase_sum(), self.report.edges_final);
        if verify {
            self.report.verified = verify_final(g, &outcome.graph, fam, m, guard, self.report.seed)?;
        }
        self.report.runtime_ms = self.started.elapsed().as_millis();
        Ok((outcome.graph, self.report))
    }
}

/// Lexicographic greedy saturation from the empty graph.
pub fn construct_greedy(g: &DeferredGnp, fam: &Family, params: &Params) -> Result<(Graph, ConstructionReport)> {
    params.check_basic()?;
    params.check_n(g.n())?;
    let gm = g.materialize();
    let m = Matcher::new(fam);
    let bld = Builder::new(g.n(), ConstructionReport::new("greedy", &fam.name(), g.n(), g.p(), params.seed));
    bld.finish(&gm, fam, &m, params.verify_guard)
}

fn verify_final(g: &Graph, h: &Graph, fam: &Family, m: &Matcher, guard: usize, seed: u64) -> Result<Verified> {
    if g.n() <= guard {
        let v = crate::saturation::is_saturated(g, h, fam)?;
        return Ok(if v.saturated() { Verified::True } else { Verified::False });
    }
    let s = verify_sampled(g, h, m, VERIFY_SAMPLES, seed ^ 0x5eed);
    Ok(if s.passed() { Verified::Sampled } else { Verified::False })
}

/// Direct freeness check for small hosts, sampled anchored search otherwise.
/// Returns (free, how).
pub(crate) fn prepatch_freeness(h: &Graph, m: &Matcher, seed: u64) -> (bool, &'static str) {
    if h.n() <= 120 {
        (m.is_free(h), "direct")
    } else {
        let s = verify_sampled(&Graph::new(h.n()), h, m, VERIFY_SAMPLES, seed ^ 0xf4ee);
        (s.copies_found == 0, "sampled")
    }
}
