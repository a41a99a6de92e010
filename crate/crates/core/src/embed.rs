//! Subgraph containment, completion of non-edges, and the density probe.
//!
//! Search is plain backtracking over pattern vertices in a fixed order. The
//! candidates for the next vertex are the word-wise AND of the host rows of its
//! already-placed pattern neighbours, filtered by degree.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::VertexSet;
use crate::error::{Result, SatError};
use crate::graph::Graph;
use crate::pattern::{Family, Pattern, MAX_PATTERN};

// ---------------------------------------------------------------------------
// pattern-in-pattern search (isomorphism, automorphism orbits)

/// Injective edge-preserving map `f -> host` with the pairs in `fixed` preassigned.
pub(crate) fn find_in_pattern(host: &Pattern, f: &Pattern, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
    let k = f.k();
    if k > host.k() {
        return None;
    }
    let mut map = vec![usize::MAX; k];
    let mut used: u16 = 0;
    for &(a, x) in fixed {
        if map[a] != usize::MAX || used >> x & 1 == 1 {
            return None;
        }
        map[a] = x;
        used |= 1 << x;
    }
    for &(a, x) in fixed {
        for &(b, y) in fixed {
            if f.has_edge(a, b) && !host.has_edge(x, y) {
                return None;
            }
        }
    }
    let order: Vec<usize> = connectivity_order(f, &fixed.iter().map(|p| p.0).collect::<Vec<_>>(), 0);
    fn rec(host: &Pattern, f: &Pattern, order: &[usize], i: usize, map: &mut [usize], used: &mut u16) -> bool {
        if i == order.len() {
            return true;
        }
        let a = order[i];
        if map[a] != usize::MAX {
            return rec(host, f, order, i + 1, map, used);
        }
        let mut cand = host.full_mask() & !*used;
        for b in 0..f.k() {
            if f.has_edge(a, b) && map[b] != usize::MAX {
                cand &= host.adj(map[b]);
            }
        }
        while cand != 0 {
            let x = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if host.degree(x) < f.degree(a) {
                continue;
            }
            map[a] = x;
            *used |= 1 << x;
            if rec(host, f, order, i + 1, map, used) {
                return true;
            }
            *used &= !(1 << x);
            map[a] = usize::MAX;
        }
        false
    }
    if rec(host, f, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Vertex order: `first` as given, then repeatedly the unplaced vertex with the
/// most placed neighbours, ties by degree (descending) then index.
/// `ignore` masks out one edge `(a, b)` packed as bits when nonzero.
fn connectivity_order(f: &Pattern, first: &[usize], ignore: u32) -> Vec<usize> {
    let k = f.k();
    let adj = |v: usize| -> u16 {
        let mut m = f.adj(v);
        if ignore != 0 {
            let (a, b) = ((ignore & 0xff) as usize, (ignore >> 8 & 0xff) as usize);
            if v == a {
                m &= !(1 << b);
            } else if v == b {
                m &= !(1 << a);
            }
        }
        m
    };
    let mut order: Vec<usize> = first.to_vec();
    let mut placed: u16 = first.iter().fold(0, |m, &v| m | 1 << v);
    while order.len() < k {
        let next = (0..k)
            .filter(|&v| placed >> v & 1 == 0)
            .max_by_key(|&v| ((adj(v) & placed).count_ones(), adj(v).count_ones(), std::cmp::Reverse(v)))
            .expect("unplaced vertex");
        order.push(next);
        placed |= 1 << next;
    }
    order
}

// ---------------------------------------------------------------------------
// host search

#[derive(Clone, Debug)]
struct Plan {
    /// pattern vertex at each position
    order: Vec<usize>,
    /// earlier positions that must be host-adjacent
    back: Vec<Vec<u8>>,
    /// earlier positions that must be host-non-adjacent (induced mode only)
    nonback: Vec<Vec<u8>>,
    /// minimum host degree at each position
    deg: Vec<u32>,
    /// leading positions that are preassigned
    fixed: usize,
    /// pattern adjacency with the skipped edge removed
    adj: Vec<u16>,
    /// minimum host degree per pattern vertex
    need: Vec<u32>,
    induced: bool,
}

impl Plan {
    fn build(f: &Pattern, first: &[usize], skip_edge: Option<(usize, usize)>, induced: bool) -> Plan {
        let ignore = skip_edge.map_or(0, |(a, b)| (a as u32) | (b as u32) << 8 | 1 << 16);
        let order = connectivity_order(f, first, ignore);
        let skip = |a: usize, b: usize| skip_edge.is_some_and(|(x, y)| (a, b) == (x, y) || (a, b) == (y, x));
        let mut back = Vec::new();
        let mut nonback = Vec::new();
        let mut deg = Vec::new();
        for (i, &v) in order.iter().enumerate() {
            let mut bk = Vec::new();
            let mut nb = Vec::new();
            for (j, &u) in order.iter().enumerate().take(i) {
                if f.has_edge(u, v) {
                    if !skip(u, v) {
                        bk.push(j as u8);
                    }
                } else if induced {
                    nb.push(j as u8);
                }
            }
            back.push(bk);
            nonback.push(nb);
            let d = f.degree(v) - usize::from(skip_edge.is_some_and(|(a, b)| v == a || v == b));
            deg.push(d as u32);
        }
        let adj: Vec<u16> = (0..f.k())
            .map(|v| {
                let mut m = f.adj(v);
                if let Some((a, b)) = skip_edge {
                    if v == a {
                        m &= !(1 << b);
                    } else if v == b {
                        m &= !(1 << a);
                    }
                }
                m
            })
            .collect();
        let need = adj.iter().map(|m| m.count_ones()).collect();
        Plan { order, back, nonback, deg, fixed: first.len(), adj, need, induced }
    }
}

struct Search<'a> {
    h: &'a Graph,
    plan: &'a Plan,
    mask: Option<&'a [u64]>,
    map: [usize; MAX_PATTERN],
}

impl Search<'_> {
    fn run(&mut self, i: usize) -> bool {
        let plan = self.plan;
        if i == plan.order.len() {
            return true;
        }
        let h = self.h;
        let w = h.row_words();
        let back = &plan.back[i];
        let nonback = &plan.nonback[i];
        let need = plan.deg[i] as usize;
        let mut rows: [&[u64]; MAX_PATTERN] = [&[]; MAX_PATTERN];
        for (slot, &j) in rows.iter_mut().zip(back) {
            *slot = h.row(self.map[j as usize]);
        }
        let rows = &rows[..back.len()];
        for wi in 0..w {
            let mut word = match rows.first() {
                Some(r) => r[wi],
                None => {
                    if wi + 1 == w && h.n() % 64 != 0 {
                        (1u64 << (h.n() % 64)) - 1
                    } else {
                        !0
                    }
                }
            };
            for r in rows.iter().skip(1) {
                word &= r[wi];
                if word == 0 {
                    break;
                }
            }
            if word == 0 {
                continue;
            }
            if let Some(m) = self.mask {
                word &= m[wi];
            }
            for &j in nonback {
                word &= !h.row(self.map[j as usize])[wi];
            }
            while word != 0 {
                let x = wi * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                if h.degree(x) < need || self.map[..i].contains(&x) {
                    continue;
                }
                self.map[i] = x;
                if self.run(i + 1) {
                    return true;
                }
            }
        }
        false
    }

    fn result(&self) -> Vec<usize> {
        let mut out = vec![0; self.plan.order.len()];
        for (i, &v) in self.plan.order.iter().enumerate() {
            out[v] = self.map[i];
        }
        out
    }
}

fn run_plan(h: &Graph, plan: &Plan, pre: &[usize], mask: Option<&[u64]>) -> Option<Vec<usize>> {
    debug_assert_eq!(pre.len(), plan.fixed);
    let mut s = Search { h, plan, mask, map: [usize::MAX; MAX_PATTERN] };
    for (i, &x) in pre.iter().enumerate() {
        if x >= h.n() || h.degree(x) < plan.deg[i] as usize || s.map[..i].contains(&x) {
            return None;
        }
        if let Some(m) = mask {
            if m[x / 64] >> (x % 64) & 1 == 0 {
                return None;
            }
        }
        for &j in &plan.back[i] {
            if !h.has_edge(s.map[j as usize], x) {
                return None;
            }
        }
        for &j in &plan.nonback[i] {
            if h.has_edge(s.map[j as usize], x) {
                return None;
            }
        }
        s.map[i] = x;
    }
    if !plan.induced {
        let k = plan.adj.len();
        let mut d = Dyn { h, plan, mask, w: h.row_words(), map: [usize::MAX; MAX_PATTERN], placed: 0 };
        for (i, &x) in pre.iter().enumerate() {
            d.map[plan.order[i]] = x;
            d.placed |= 1 << plan.order[i];
        }
        return d.go().then(|| d.map[..k].to_vec());
    }
    if s.run(pre.len()) {
        Some(s.result())
    } else {
        None
    }
}

/// Non-induced search with the branching vertex chosen at each node.
struct Dyn<'a> {
    h: &'a Graph,
    plan: &'a Plan,
    mask: Option<&'a [u64]>,
    w: usize,
    /// host vertex per pattern vertex
    map: [usize; MAX_PATTERN],
    placed: u16,
}

impl Dyn<'_> {
    fn go(&mut self) -> bool {
        let k = self.plan.adj.len();
        let full: u16 = if k == 16 { !0 } else { (1u16 << k) - 1 };
        if self.placed == full {
            return true;
        }
        let w = self.w;
        let h = self.h;
        let mut frontier = 0u16;
        for v in 0..k {
            if self.placed >> v & 1 == 1 {
                frontier |= self.plan.adj[v];
            }
        }
        frontier &= !self.placed;
        if frontier == 0 {
            let free = full & !self.placed;
            frontier = free & free.wrapping_neg();
        }
        // branch on the frontier vertex whose tightest placed neighbour has the
        // smallest host degree; more placed neighbours break ties
        let mut best = (usize::MAX, 0u32, 0usize);
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            let nb = self.plan.adj[v] & self.placed;
            let mut est = h.n();
            let mut m = nb;
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                est = est.min(h.degree(self.map[u]));
            }
            if est < best.0 || (est == best.0 && nb.count_ones() > best.1) {
                best = (est, nb.count_ones(), v);
            }
        }
        let v = best.2;
        let need = self.plan.need[v] as usize;
        let mut rows: [&[u64]; MAX_PATTERN] = [&[]; MAX_PATTERN];
        let mut nr = 0;
        let mut pivot = usize::MAX;
        let mut m = self.plan.adj[v] & self.placed;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            m &= m - 1;
            let x = self.map[u];
            if pivot == usize::MAX || h.degree(x) < h.degree(pivot) {
                pivot = x;
            }
            rows[nr] = h.row(x);
            nr += 1;
        }
        let rows = &rows[..nr];
        self.placed |= 1 << v;
        let found = if pivot == usize::MAX {
            let tail = if h.n() % 64 == 0 { !0 } else { (1u64 << (h.n() % 64)) - 1 };
            (0..w).any(|wi| self.try_word(v, need, rows, wi, if wi + 1 == w { tail } else { !0 }))
        } else {
            let summary = h.row_summary(pivot);
            let mut hit = false;
            'outer: for (si, &sword) in summary.iter().enumerate() {
                let mut sword = sword;
                while sword != 0 {
                    let wi = si * 64 + sword.trailing_zeros() as usize;
                    sword &= sword - 1;
                    if self.try_word(v, need, rows, wi, !0) {
                        hit = true;
                        break 'outer;
                    }
                }
            }
            hit
        };
        if found {
            return true;
        }
        self.placed &= !(1 << v);
        self.map[v] = usize::MAX;
        false
    }

    /// Tries every candidate for pattern vertex `v` inside word `wi`.
    fn try_word(&mut self, v: usize, need: usize, rows: &[&[u64]], wi: usize, init: u64) -> bool {
        let h = self.h;
        let k = self.plan.adj.len();
        let mut word = init;
        for r in rows {
            word &= r[wi];
            if word == 0 {
                return false;
            }
        }
        if let Some(mk) = self.mask {
            word &= mk[wi];
        }
        while word != 0 {
            let x = wi * 64 + word.trailing_zeros() as usize;
            word &= word - 1;
            if h.degree(x) < need || self.map[..k].contains(&x) {
                continue;
            }
            self.map[v] = x;
            if self.go() {
                return true;
            }
            self.map[v] = usize::MAX;
        }
        false
    }
}

/// One representative arc `(a, b)` per orbit of ordered edges under automorphisms.
fn arc_orbit_reps(f: &Pattern) -> Vec<(usize, usize)> {
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for (u, v) in f.edges() {
        for arc in [(u, v), (v, u)] {
            let known = reps
                .iter()
                .any(|&(a, b)| find_in_pattern(f, f, &[(a, arc.0), (b, arc.1)]).is_some());
            if !known {
                reps.push(arc);
            }
        }
    }
    reps
}

struct MemberPlans {
    full: Plan,
    anchored: Vec<Plan>,
}

/// Precomputed search plans for every member of a family.
pub struct Matcher {
    members: Vec<Pattern>,
    plans: Vec<MemberPlans>,
}

impl Matcher {
    pub fn new(fam: &Family) -> Self {
        Self::from_patterns(fam.members())
    }

    pub fn from_patterns(members: &[Pattern]) -> Self {
        let plans = members
            .iter()
            .map(|f| MemberPlans {
                full: Plan::build(f, &[], None, false),
                anchored: arc_orbit_reps(f)
                    .into_iter()
                    .map(|(a, b)| Plan::build(f, &[a, b], Some((a, b)), false))
                    .collect(),
            })
            .collect();
        Matcher { members: members.to_vec(), plans }
    }

    pub fn members(&self) -> &[Pattern] {
        &self.members
    }

    /// First member with a copy in `h` (restricted to `mask` if given).
    pub fn find(&self, h: &Graph, mask: Option<&VertexSet>) -> Option<(usize, Vec<usize>)> {
        let m = mask.map(|s| s.words());
        self.plans
            .iter()
            .enumerate()
            .find_map(|(i, p)| run_plan(h, &p.full, &[], m).map(|e| (i, e)))
    }

    pub fn is_free(&self, h: &Graph) -> bool {
        self.find(h, None).is_none()
    }

    /// A copy of a member in `h + uv` whose image uses the pair `uv`.
    ///
    /// The pair itself is never tested against `h`, so this also finds copies
    /// through an existing edge `uv`.
    pub fn anchored(&self, h: &Graph, u: usize, v: usize) -> Option<(usize, Vec<usize>)> {
        for (i, p) in self.plans.iter().enumerate() {
            for plan in &p.anchored {
                if let Some(e) = run_plan(h, plan, &[u, v], None) {
                    return Some((i, e));
                }
            }
        }
        None
    }

    #[inline]
    pub fn completes(&self, h: &Graph, u: usize, v: usize) -> bool {
        self.anchored(h, u, v).is_some()
    }
}

fn guard(f: &Pattern) -> Result<()> {
    if f.k() > MAX_PATTERN {
        return Err(SatError::PatternTooLarge { got: f.k(), max: MAX_PATTERN });
    }
    Ok(())
}

/// Some embedding of `f` into `h` as a (not necessarily induced) subgraph.
/// `result[i]` is the host vertex of pattern vertex `i`.
pub fn contains_copy(h: &Graph, f: &Pattern) -> Result<Option<Vec<usize>>> {
    guard(f)?;
    Ok(run_plan(h, &Plan::build(f, &[], None, false), &[], None))
}

/// Embedding restricted to vertices of `within`.
pub fn contains_copy_within(h: &Graph, f: &Pattern, within: &VertexSet) -> Result<Option<Vec<usize>>> {
    guard(f)?;
    Ok(run_plan(h, &Plan::build(f, &[], None, false), &[], Some(within.words())))
}

/// Embedding whose image induces exactly `f`, restricted to `within`.
pub fn induced_copy_within(h: &Graph, f: &Pattern, within: &VertexSet) -> Result<Option<Vec<usize>>> {
    guard(f)?;
    Ok(run_plan(h, &Plan::build(f, &[], None, true), &[], Some(within.words())))
}

pub fn is_family_free(h: &Graph, fam: &Family) -> bool {
    Matcher::new(fam).is_free(h)
}

/// Whether adding the non-edge `e` to `h` creates a copy of a family member through `e`.
pub fn completes(h: &Graph, e: (usize, usize), fam: &Family) -> Result<bool> {
    let (u, v) = e;
    h.check_pair(u, v)?;
    if h.has_edge(u, v) {
        return Err(SatError::EdgePresent(u.min(v), u.max(v)));
    }
    Ok(Matcher::new(fam).completes(h, u, v))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub subset_size: usize,
    pub trials: usize,
    pub hits: usize,
    pub hit_fraction: f64,
    pub first_miss: Option<Vec<usize>>,
}

/// Fraction of random `⌈eps·n⌉`-subsets whose induced subgraph contains `a`.
pub fn density_probe(h: &Graph, a: &Pattern, eps: f64, trials: usize, seed: u64) -> Result<DensityReport> {
    guard(a)?;
    if !(eps > 0.0 && eps <= 1.0) || trials == 0 {
        return Err(SatError::Parameter(format!("density probe needs 0 < eps <= 1 and trials >= 1 (eps={eps})")));
    }
    let size = (eps * h.n() as f64).ceil() as usize;
    if size < a.k() {
        return Err(SatError::Parameter(format!("subset size {size} is below the target order {}", a.k())));
    }
    let plan = Plan::build(a, &[], None, false);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    let mut first_miss = None;
    for _ in 0..trials {
        let pick = sample(&mut rng, h.n(), size.min(h.n()));
        let set = VertexSet::from_iter(h.n(), pick.iter());
        if run_plan(h, &plan, &[], Some(set.words())).is_some() {
            hits += 1;
        } else if first_miss.is_none() {
            let mut v = set.to_vec();
            v.sort_unstable();
            first_miss = Some(v);
        }
    }
    Ok(DensityReport { subset_size: size, trials, hits, hit_fraction: hits as f64 / trials as f64, first_miss })
}
