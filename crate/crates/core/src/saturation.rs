//! Saturation checks, greedy saturation, patch-up and the exhaustive oracle.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::embed::Matcher;
use crate::error::{Result, SatError};
use crate::graph::Graph;
use crate::pattern::{Family, Pattern};

/// Largest host edge count `exact_sat` accepts.
pub const EXACT_GUARD: usize = 22;
/// Hosts above this order are verified by sampling.
pub const VERIFY_GUARD: usize = 3000;
pub const VERIFY_SAMPLES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// a copy of family member `member` with the given vertex map
    Copy { member: String, map: Vec<usize> },
    /// a host edge whose addition completes nothing
    Addable(usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Copy { member, map } => write!(f, "copy of {member} at {map:?}"),
            Violation::Addable(u, v) => write!(f, "edge {u} {v} can be added"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationVerdict {
    pub free: bool,
    pub maximal: bool,
    pub violation: Option<Violation>,
}

impl SaturationVerdict {
    pub fn saturated(&self) -> bool {
        self.free && self.maximal
    }
}

fn check_containment(g: &Graph, h: &Graph) -> Result<()> {
    if g.n() != h.n() {
        return Err(SatError::Parameter(format!("host has {} vertices, subgraph {}", g.n(), h.n())));
    }
    if let Some((u, v)) = h.first_edge_outside(g) {
        return Err(SatError::Containment(u, v));
    }
    Ok(())
}

/// Host edges missing from `h` that `h` does not complete, in lexicographic order.
pub fn uncompleted_pairs(g: &Graph, h: &Graph, m: &Matcher) -> Vec<(usize, usize)> {
    uncompleted_pairs_except(g, h, m, None)
}

/// As `uncompleted_pairs`, skipping pairs of `known`, which the caller has
/// already seen completed by a subgraph of `h`.
pub(crate) fn uncompleted_pairs_except(g: &Graph, h: &Graph, m: &Matcher, known: Option<&Graph>) -> Vec<(usize, usize)> {
    (0..g.n())
        .into_par_iter()
        .flat_map_iter(|u| {
            let gr = g.row(u);
            let hr = h.row(u);
            let mut out = Vec::new();
            for wi in (u + 1) / 64..gr.len() {
                let mut word = gr[wi] & !hr[wi];
                if let Some(k) = known {
                    word &= !k.row(u)[wi];
                }
                if wi == (u + 1) / 64 {
                    word &= !0u64 << ((u + 1) % 64);
                }
                while word != 0 {
                    let v = wi * 64 + word.trailing_zeros() as usize;
                    word &= word - 1;
                    if !m.completes(h, u, v) {
                        out.push((u, v));
                    }
                }
            }
            out
        })
        .collect()
}

fn first_uncompleted(g: &Graph, h: &Graph, m: &Matcher) -> Option<(usize, usize)> {
    (0..g.n()).into_par_iter().find_map_first(|u| {
        g.neighbors(u)
            .filter(|&v| v > u && !h.has_edge(u, v))
            .find(|&v| !m.completes(h, u, v))
            .map(|v| (u, v))
    })
}

pub fn is_saturated(g: &Graph, h: &Graph, fam: &Family) -> Result<SaturationVerdict> {
    check_containment(g, h)?;
    let m = Matcher::new(fam);
    if let Some((i, map)) = m.find(h, None) {
        let maximal = first_uncompleted(g, h, &m).is_none();
        return Ok(SaturationVerdict {
            free: false,
            maximal,
            violation: Some(Violation::Copy { member: fam.members()[i].name().to_string(), map }),
        });
    }
    let addable = first_uncompleted(g, h, &m);
    Ok(SaturationVerdict {
        free: true,
        maximal: addable.is_none(),
        violation: addable.map(|(u, v)| Violation::Addable(u, v)),
    })
}

/// Adds host edges in seeded random order whenever the result stays free.
pub fn greedy_saturate(g: &Graph, fam: &Family, seed: u64) -> Graph {
    let m = Matcher::new(fam);
    let mut edges = g.edge_vec();
    edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut h = Graph::new(g.n());
    for (u, v) in edges {
        if !m.completes(&h, u, v) {
            h.add_edge(u, v);
        }
    }
    h
}

#[derive(Clone, Debug)]
pub struct PatchOutcome {
    pub graph: Graph,
    pub added: usize,
    /// host non-edges of the input that it did not complete
    pub uncompleted_before: usize,
}

/// Lexicographic patch-up of a free `h`; the caller vouches for freeness.
///
/// Only pairs that the input leaves uncompleted can ever be added, since
/// completion is monotone in `h`, so one parallel scan finds them and a
/// sequential pass decides them in order.
pub fn patch_up_unchecked(g: &Graph, h: &Graph, m: &Matcher) -> PatchOutcome {
    patch_up_known(g, h, m, None)
}

pub(crate) fn patch_up_known(g: &Graph, h: &Graph, m: &Matcher, known: Option<&Graph>) -> PatchOutcome {
    let todo = uncompleted_pairs_except(g, h, m, known);
    let mut out = h.clone();
    let mut added = 0;
    for &(u, v) in &todo {
        if !m.completes(&out, u, v) {
            out.add_edge(u, v);
            added += 1;
        }
    }
    PatchOutcome { graph: out, added, uncompleted_before: todo.len() }
}

pub fn patch_up(g: &Graph, h: &Graph, fam: &Family) -> Result<(Graph, usize)> {
    check_containment(g, h)?;
    let m = Matcher::new(fam);
    if let Some((i, _)) = m.find(h, None) {
        return Err(SatError::Precondition(format!("input contains {}", fam.members()[i].name())));
    }
    let o = patch_up_unchecked(g, h, &m);
    Ok((o.graph, o.added))
}

/// Minimum edge count of an `f`-saturated subgraph of `g`, by exhaustive search.
pub fn exact_sat(g: &Graph, f: &Pattern) -> Result<usize> {
    let edges = g.edge_vec();
    let m = edges.len();
    if m > EXACT_GUARD {
        return Err(SatError::Size(format!("exact search needs at most {EXACT_GUARD} host edges, got {m}")));
    }
    let matcher = Matcher::from_patterns(std::slice::from_ref(f));
    for k in 0..=m {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut h = Graph::new(g.n());
            for &i in &idx {
                h.add_edge(edges[i].0, edges[i].1);
            }
            let saturated = matcher.is_free(&h)
                && edges.iter().all(|&(u, v)| h.has_edge(u, v) || matcher.completes(&h, u, v));
            if saturated {
                return Ok(k);
            }
            // next k-combination of 0..m
            let mut i = k;
            while i > 0 && idx[i - 1] == m - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    // the empty graph is free, so some maximal free subgraph always exists
    unreachable!("a maximal free subgraph exists")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledVerdict {
    pub nonedges_checked: usize,
    pub uncompleted_found: usize,
    pub edges_checked: usize,
    pub copies_found: usize,
    pub first_violation: Option<Violation>,
}

impl SampledVerdict {
    pub fn passed(&self) -> bool {
        self.uncompleted_found == 0 && self.copies_found == 0
    }
}

/// Random host non-edges checked for completion plus anchored freeness checks
/// at random edges of `h`.
pub fn verify_sampled(g: &Graph, h: &Graph, m: &Matcher, samples: usize, seed: u64) -> SampledVerdict {
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = SampledVerdict {
        nonedges_checked: 0,
        uncompleted_found: 0,
        edges_checked: 0,
        copies_found: 0,
        first_violation: None,
    };
    if n < 2 {
        return v;
    }
    let mut tries = 0usize;
    while v.nonedges_checked < samples && tries < 200 * samples {
        tries += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b || !g.has_edge(a, b) || h.has_edge(a, b) {
            continue;
        }
        v.nonedges_checked += 1;
        if !m.completes(h, a, b) {
            v.uncompleted_found += 1;
            v.first_violation.get_or_insert(Violation::Addable(a.min(b), a.max(b)));
        }
    }
    tries = 0;
    while h.edge_count() > 0 && v.edges_checked < samples && tries < 200 * samples {
        tries += 1;
        let a = rng.gen_range(0..n);
        let d = h.degree(a);
        if d == 0 {
            continue;
        }
        let b = h.neighbors(a).nth(rng.gen_range(0..d)).unwrap();
        v.edges_checked += 1;
        if let Some((i, map)) = m.anchored(h, a, b) {
            v.copies_found += 1;
            v.first_violation
                .get_or_insert(Violation::Copy { member: m.members()[i].name().to_string(), map });
        }
    }
    v
}

/// Outcome of the verification policy used by constructions and sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verified {
    True,
    False,
    Sampled,
}

impl fmt::Display for Verified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verified::True => "true",
            Verified::False => "false",
            Verified::Sampled => "sampled",
        })
    }
}

/// Full check up to `guard` vertices, sampled above it (a failed sample is `False`).
pub fn verify_policy(g: &Graph, h: &Graph, fam: &Family, guard: usize, seed: u64) -> Result<Verified> {
    if g.n() <= guard {
        return Ok(if is_saturated(g, h, fam)?.saturated() { Verified::True } else { Verified::False });
    }
    check_containment(g, h)?;
    let s = verify_sampled(g, h, &Matcher::new(fam), VERIFY_SAMPLES, seed);
    Ok(if s.passed() { Verified::Sampled } else { Verified::False })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnp::gen_gnp;
    use crate::pattern::catalog::*;

    fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    #[test]
    fn verdict_examples() {
        let tri = Family::single(complete(3));
        let k13 = g(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(is_saturated(&Graph::complete(4), &k13, &tri).unwrap().saturated());
        let v = is_saturated(&Graph::complete(3), &Graph::new(3), &tri).unwrap();
        assert!(v.free && !v.maximal);
        assert!(matches!(v.violation, Some(Violation::Addable(0, 1))));
        let v = is_saturated(&Graph::complete(4), &Graph::complete(4), &tri).unwrap();
        assert!(!v.free);
        assert!(matches!(is_saturated(&k13, &Graph::complete(4), &tri), Err(SatError::Containment(1, 2))));
    }

    #[test]
    fn greedy_examples() {
        let tri = Family::single(complete(3));
        for seed in 0..20 {
            let h = greedy_saturate(&Graph::complete(4), &tri, seed);
            assert!(h.edge_count() == 3 || h.edge_count() == 4);
            assert!(is_saturated(&Graph::complete(4), &h, &tri).unwrap().saturated());
        }
        assert_eq!(greedy_saturate(&Graph::new(5), &tri, 1).edge_count(), 0);
        let c5 = cycle(5).to_graph();
        assert_eq!(greedy_saturate(&c5, &tri, 3), c5);
    }

    #[test]
    fn patch_examples() {
        let tri = Family::single(complete(3));
        let k4 = Graph::complete(4);
        let (h, added) = patch_up(&k4, &g(4, &[(0, 1)]), &tri).unwrap();
        assert!(h.edge_count() <= 4 && added == h.edge_count() - 1);
        assert!(is_saturated(&k4, &h, &tri).unwrap().saturated());
        assert_eq!(patch_up(&k4, &h, &tri).unwrap().1, 0);
        let c4 = cycle(4).to_graph();
        let (h, added) = patch_up(&c4, &Graph::new(4), &tri).unwrap();
        assert_eq!((h.edge_count(), added), (4, 4));
        assert!(matches!(patch_up(&k4, &k4, &tri), Err(SatError::Precondition(_))));
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_sat(&Graph::complete(4), &complete(3)).unwrap(), 3);
        assert_eq!(exact_sat(&Graph::complete(5), &complete(3)).unwrap(), 4);
        assert_eq!(exact_sat(&Graph::complete(5), &complete(4)).unwrap(), 7);
        assert!(matches!(exact_sat(&Graph::complete(8), &complete(3)), Err(SatError::Size(_))));
    }

    #[test]
    fn exact_below_greedy() {
        for seed in 0..6 {
            let host = gen_gnp(8, 0.6, seed).unwrap();
            if host.edge_count() > EXACT_GUARD {
                continue;
            }
            for f in [complete(3), cycle(4)] {
                let best = exact_sat(&host, &f).unwrap();
                let greedy = greedy_saturate(&host, &Family::single(f.clone()), seed);
                assert!(best <= greedy.edge_count());
            }
        }
    }

    #[test]
    fn sampled_detects_problems() {
        let host = gen_gnp(200, 0.5, 1).unwrap();
        let tri = Family::single(complete(3));
        let m = Matcher::new(&tri);
        let h = greedy_saturate(&host, &tri, 1);
        assert!(verify_sampled(&host, &h, &m, 2000, 3).passed());
        assert!(!verify_sampled(&host, &Graph::new(200), &m, 100, 3).passed());
        assert!(!verify_sampled(&host, &host, &m, 100, 3).passed());
        assert_eq!(verify_policy(&host, &h, &tri, 100, 1).unwrap(), Verified::Sampled);
        assert_eq!(verify_policy(&host, &h, &tri, 1000, 1).unwrap(), Verified::True);
    }
}
