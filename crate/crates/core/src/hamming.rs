//! Diagnostics for the Hamming-space coupling behind `H_B1`.
//!
//! Points are `A₁`-neighbourhoods of `B₁` vertices. Only the images of actual
//! vertices are ever instantiated.

use std::collections::{BTreeMap, HashMap};

use rand::seq::{IteratorRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::VertexSet;
use crate::constructions::{build_h_b1, log_rho, ConstructionReport, Params, SharpSizes};
use crate::error::{Result, SatError};
use crate::gnp::DeferredGnp;
use crate::graph::Graph;

/// Largest class size still counted as bounded by [`phi_classes`].
pub const BOUNDED_CLASS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Bounded,
    Polynomial,
    Boundary,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Bounded => "bounded",
            Regime::Polynomial => "polynomial",
            Regime::Boundary => "boundary",
        }
    }
}

/// A subset of `A₁`, stored over the host's vertex range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingPoint {
    pub set: VertexSet,
}

impl HammingPoint {
    pub fn size(&self) -> usize {
        self.set.len()
    }
}

/// `γ` used by the probes when the caller leaves it unset (the `s₂ = 2` default).
fn gamma(params: &Params) -> f64 {
    params.gamma_for(2)
}

/// Co-degree threshold of `Γ`: `(1+(1−6γ)ε)·log_ρ n`.
pub fn edge_threshold(n: usize, p: f64, params: &Params) -> f64 {
    (1.0 + (1.0 - 6.0 * gamma(params)) * params.eps) * log_rho(n, p)
}

/// Ball radius threshold: `(1+(1−γ)ε)·log_ρ n`.
pub fn ball_threshold(n: usize, p: f64, params: &Params) -> f64 {
    (1.0 + (1.0 - gamma(params)) * params.eps) * log_rho(n, p)
}

pub fn phi(g: &Graph, v: usize, a1: &VertexSet) -> HammingPoint {
    let mut set = g.neighbor_set(v);
    set.intersect_with(a1);
    HammingPoint { set }
}

#[derive(Clone, Debug)]
pub struct GwSample {
    /// `sources[i]` is the first sampled `B₁` vertex with image `points[i]`
    pub sources: Vec<usize>,
    pub points: Vec<HammingPoint>,
    /// adjacency on point indices
    pub graph: Graph,
    pub threshold: f64,
}

impl GwSample {
    pub fn density(&self) -> f64 {
        let k = self.points.len();
        if k < 2 {
            return 0.0;
        }
        self.graph.edge_count() as f64 / (k * (k - 1) / 2) as f64
    }
}

/// The auxiliary graph on the images of `sample` random vertices of `b1`.
/// Equal images collapse into one point.
pub fn build_gw_sample(g: &Graph, b1: &VertexSet, a1: &VertexSet, sample: usize, seed: u64, p: f64, params: &Params) -> GwSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = b1.iter().choose_multiple(&mut rng, sample.min(b1.len()));
    picked.sort_unstable();
    let mut sources = Vec::new();
    let mut points: Vec<HammingPoint> = Vec::new();
    for v in picked {
        let x = phi(g, v, a1);
        if !points.contains(&x) {
            sources.push(v);
            points.push(x);
        }
    }
    let threshold = edge_threshold(g.n(), p, params);
    let mut graph = Graph::new(points.len());
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].set.intersection_len(&points[j].set) as f64 >= threshold {
                graph.add_edge(i, j);
            }
        }
    }
    GwSample { sources, points, graph, threshold }
}

#[derive(Clone, Debug, Default)]
pub struct BallCoverReport {
    pub points: usize,
    pub covered: usize,
    /// `None` when there are no points
    pub coverage: Option<f64>,
    pub ball_threshold: f64,
    pub edge_threshold: f64,
    /// nonempty `Y_i` groups, keyed by the covering vertex
    pub groups: usize,
    pub clique_checks: usize,
    pub clique_passed: usize,
    /// edges among covered points
    pub edges: usize,
    /// `0.25·n·log_ρ n` scaled quadratically from `n/log_ρ n` points to the sample
    pub edge_bound: f64,
}

impl BallCoverReport {
    pub fn all_cliques(&self) -> bool {
        self.clique_passed == self.clique_checks
    }

    pub fn record(&self, rep: &mut ConstructionReport) {
        rep.set("diag.ball.points", self.points);
        rep.set("diag.ball.covered", self.covered);
        rep.set("diag.ball.coverage", self.coverage.map_or("none".into(), |c| format!("{c:.4}")));
        rep.set("diag.ball.groups", self.groups);
        rep.set("diag.ball.cliques", format!("{}/{}", self.clique_passed, self.clique_checks));
        rep.set("diag.ball.edges", self.edges);
        rep.set("diag.ball.edge_bound", format!("{:.2}", self.edge_bound));
    }
}

/// For each point, looks for `v ∈ bprime` with `d(v|x)` at least the ball
/// threshold. Covered points are grouped by their lowest covering vertex and
/// every group is checked to be a clique of `G_W`.
pub fn ball_cover_probe(
    g: &Graph,
    a1: &VertexSet,
    bprime: &VertexSet,
    points: &[HammingPoint],
    p: f64,
    params: &Params,
) -> BallCoverReport {
    let n = g.n();
    let bt = ball_threshold(n, p, params);
    let et = edge_threshold(n, p, params);
    let rows: Vec<(usize, VertexSet)> = bprime.iter().map(|v| (v, phi(g, v, a1).set)).collect();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, x) in points.iter().enumerate() {
        let hit = rows.iter().find(|(_, nv)| nv.intersection_len(&x.set) as f64 >= bt);
        if let Some((v, _)) = hit {
            groups.entry(*v).or_default().push(i);
        }
    }
    let mut rep = BallCoverReport {
        points: points.len(),
        coverage: None,
        ball_threshold: bt,
        edge_threshold: et,
        groups: groups.len(),
        ..Default::default()
    };
    let mut covered = Vec::new();
    for ys in groups.values() {
        rep.clique_checks += 1;
        let clique = ys.iter().enumerate().all(|(k, &i)| {
            ys[k + 1..]
                .iter()
                .all(|&j| points[i].set.intersection_len(&points[j].set) as f64 >= et)
        });
        if clique {
            rep.clique_passed += 1;
        }
        covered.extend_from_slice(ys);
    }
    covered.sort_unstable();
    rep.covered = covered.len();
    if !points.is_empty() {
        rep.coverage = Some(covered.len() as f64 / points.len() as f64);
    }
    for (k, &i) in covered.iter().enumerate() {
        for &j in &covered[k + 1..] {
            if points[i].set.intersection_len(&points[j].set) as f64 >= et {
                rep.edges += 1;
            }
        }
    }
    let lam = log_rho(n, p);
    let m = n as f64 / lam;
    rep.edge_bound = 0.25 * n as f64 * lam * (points.len() as f64 / m).powi(2);
    rep
}

#[derive(Clone, Debug)]
pub struct IndependenceReport {
    pub best: Vec<usize>,
    pub target: usize,
    pub restarts: usize,
    /// a set of size `>= target` was found
    pub red_flag: bool,
}

/// Randomised greedy plus (1,2)-swap local search; keeps the largest
/// independent set over `effort` restarts.
pub fn independence_probe(gi: &Graph, target: usize, effort: usize, seed: u64) -> IndependenceReport {
    let n = gi.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..effort.max(1) {
        order.shuffle(&mut rng);
        // tight[v] = number of set members adjacent to v
        let mut in_set = vec![false; n];
        let mut tight = vec![0usize; n];
        let insert = |v: usize, in_set: &mut Vec<bool>, tight: &mut Vec<usize>| {
            in_set[v] = true;
            for u in gi.neighbors(v) {
                tight[u] += 1;
            }
        };
        for &v in &order {
            if !in_set[v] && tight[v] == 0 {
                insert(v, &mut in_set, &mut tight);
            }
        }
        let mut improved = true;
        while improved {
            improved = false;
            for x in 0..n {
                if !in_set[x] {
                    continue;
                }
                let cand: Vec<usize> = gi.neighbors(x).filter(|&u| tight[u] == 1).collect();
                let pair = cand.iter().enumerate().find_map(|(i, &a)| {
                    cand[i + 1..].iter().find(|&&b| !gi.has_edge(a, b)).map(|&b| (a, b))
                });
                if let Some((a, b)) = pair {
                    in_set[x] = false;
                    for u in gi.neighbors(x) {
                        tight[u] -= 1;
                    }
                    insert(a, &mut in_set, &mut tight);
                    insert(b, &mut in_set, &mut tight);
                    for &v in &order {
                        if !in_set[v] && tight[v] == 0 {
                            insert(v, &mut in_set, &mut tight);
                        }
                    }
                    improved = true;
                }
            }
        }
        let set: Vec<usize> = (0..n).filter(|&v| in_set[v]).collect();
        if set.len() > best.len() {
            best = set;
        }
    }
    IndependenceReport { red_flag: best.len() >= target && target > 0, best, target, restarts: effort.max(1) }
}

#[derive(Clone, Debug)]
pub struct PhiClasses {
    /// classes in order of their smallest vertex
    pub classes: Vec<Vec<usize>>,
    /// class size -> number of classes
    pub histogram: BTreeMap<usize, usize>,
    pub regime: Regime,
}

/// Partition of `b1` by `A₁`-neighbourhood. All classes of size at most
/// [`BOUNDED_CLASS`] is `bounded`, all larger is `polynomial`, a mix is
/// `boundary`.
pub fn phi_classes(g: &Graph, b1: &VertexSet, a1: &VertexSet) -> PhiClasses {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in b1.iter() {
        let key = phi(g, v, a1).set.words().to_vec();
        let i = *index.entry(key).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[i].push(v);
    }
    let mut histogram = BTreeMap::new();
    for c in &classes {
        *histogram.entry(c.len()).or_insert(0) += 1;
    }
    let regime = if classes.iter().all(|c| c.len() <= BOUNDED_CLASS) {
        Regime::Bounded
    } else if classes.iter().all(|c| c.len() > BOUNDED_CLASS) {
        Regime::Polynomial
    } else {
        Regime::Boundary
    };
    PhiClasses { classes, histogram, regime }
}

/// `f(x) = 2 − log_{1−x} x − 1/x`.
pub fn regime_f(x: f64) -> f64 {
    2.0 - x.ln() / (1.0 - x).ln() - 1.0 / x
}

pub fn classify_regime(p: f64) -> Result<Regime> {
    if !(p > 0.0 && p < 1.0) {
        return Err(SatError::Range(p));
    }
    let f = regime_f(p);
    Ok(if f.abs() < 1e-9 {
        Regime::Boundary
    } else if f < 0.0 {
        Regime::Bounded
    } else {
        Regime::Polynomial
    })
}

/// Everything the probes measure for one `(n, p, s, seed)`.
#[derive(Clone, Debug)]
pub struct HammingRun {
    pub sizes: SharpSizes,
    pub b1: usize,
    pub classes: PhiClasses,
    pub sample: GwSample,
    pub bprime: usize,
    pub ball: BallCoverReport,
    pub round1_vertices: usize,
    pub independence: IndependenceReport,
}

impl HammingRun {
    pub fn record(&self, rep: &mut ConstructionReport) {
        rep.set("diag.B1", self.b1);
        rep.set("diag.phi.classes", self.classes.classes.len());
        rep.set("diag.phi.regime", self.classes.regime.as_str());
        rep.set("diag.gw.points", self.sample.points.len());
        rep.set("diag.gw.density", format!("{:.4}", self.sample.density()));
        rep.set("diag.bprime", self.bprime);
        self.ball.record(rep);
        rep.set("diag.indep.best", self.independence.best.len());
        rep.set("diag.indep.target", self.independence.target);
        rep.set("diag.indep.red_flag", self.independence.red_flag);
    }
}

/// Sets up `A₁` and `B₁` exactly as the multipartite construction does, then
/// runs every probe. `points` vertices of `B₁` become Hamming points; `B'` is
/// the lowest `⌈n/ln³ n⌉` vertices of `B` outside that sample.
pub fn run_probes(g: &DeferredGnp, s: &[usize], points: usize, effort: usize, params: &Params) -> Result<HammingRun> {
    let mut s = s.to_vec();
    s.sort_unstable();
    if s.len() < 2 || s[0] == 0 {
        return Err(SatError::Parameter("need at least two positive part sizes".into()));
    }
    let (s1, s2) = (s[0], s[1]);
    let n = g.n();
    let p = g.p();
    let sizes = SharpSizes::new(n, p, *s.last().expect("nonempty"), params)?;
    let params = Params { gamma: Some(sizes.gamma), ..params.clone() };
    let a1 = sizes.a1_set();
    for a in 0..sizes.a1 {
        for b in sizes.b_range() {
            g.expose_pair(a, b)?;
        }
    }
    let gm = g.materialize();
    let (b1, _) = sizes.good_split(&gm);
    let classes = phi_classes(&gm, &b1, &a1);
    let sample = build_gw_sample(&gm, &b1, &a1, points, params.seed ^ 0x9a3b, p, &params);
    let mut bprime = VertexSet::new(n);
    let want = (n as f64 / (n as f64).ln().powi(3)).ceil() as usize;
    for v in sizes.b_range() {
        if bprime.len() >= want {
            break;
        }
        if !sample.sources.contains(&v) {
            bprime.insert(v);
        }
    }
    let ball = ball_cover_probe(&gm, &a1, &bprime, &sample.points, p, &params);

    let target = (n as f64 / (n as f64).log2()).floor() as usize;
    let (round1_vertices, independence) = if s2 >= 2 {
        let out = build_h_b1(g, &b1, &a1, s1, s2, &params)?;
        let bl = b1.to_vec();
        let mut local = vec![usize::MAX; n];
        for (i, &b) in bl.iter().enumerate() {
            local[b] = i;
        }
        let mut gi = Graph::new(bl.len());
        for &(u, v) in &out.rounds[0] {
            gi.add_edge(local[u], local[v]);
        }
        (bl.len(), independence_probe(&gi, target, effort, params.seed ^ 0x1d))
    } else {
        (0, independence_probe(&Graph::new(0), target, effort, params.seed))
    };
    Ok(HammingRun {
        b1: b1.len(),
        sizes,
        classes,
        sample,
        bprime: bprime.len(),
        ball,
        round1_vertices,
        independence,
    })
}
