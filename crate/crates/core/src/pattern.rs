//! Small forbidden graphs, families of them, and the pattern grammar.

use std::fmt;
use std::path::Path;

use crate::embed;
use crate::error::{Result, SatError};
use crate::graph::Graph;

/// Vertex guard for patterns.
pub const MAX_PATTERN: usize = 12;

/// A graph on at most [`MAX_PATTERN`] vertices with adjacency bitmasks.
///
/// Patterns built with [`Pattern::new`] have no isolated vertices. Helper graphs
/// used as embedding targets (for instance a single vertex) come from
/// [`Pattern::loose`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    name: String,
    adj: Vec<u16>,
}

impl Pattern {
    pub fn new(name: impl Into<String>, k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let p = Self::loose(name, k, edges)?;
        if let Some(v) = (0..k).find(|&v| p.adj[v] == 0) {
            return Err(SatError::Parameter(format!("pattern {} has isolated vertex {v}", p.name)));
        }
        if k == 0 {
            return Err(SatError::Parameter("pattern without vertices".into()));
        }
        Ok(p)
    }

    pub fn loose(name: impl Into<String>, k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if k > MAX_PATTERN {
            return Err(SatError::PatternTooLarge { got: k, max: MAX_PATTERN });
        }
        let mut adj = vec![0u16; k];
        for &(u, v) in edges {
            if u >= k || v >= k {
                return Err(SatError::VertexRange { v: u.max(v), n: k });
            }
            if u == v {
                return Err(SatError::SelfLoop(u));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Pattern { name: name.into(), adj })
    }

    pub fn from_graph(name: impl Into<String>, g: &Graph) -> Result<Self> {
        Self::new(name, g.n(), &g.edge_vec())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn adj(&self, v: usize) -> u16 {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.k() {
            for v in u + 1..self.k() {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn full_mask(&self) -> u16 {
        ((1u32 << self.k()) - 1) as u16
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.k(), &self.edges()).expect("pattern edges are valid")
    }

    /// Subgraph induced by the vertices in `keep`, relabelled in increasing order.
    pub fn induced_mask(&self, keep: u16) -> Pattern {
        let vs: Vec<usize> = (0..self.k()).filter(|&v| keep >> v & 1 == 1).collect();
        let mut edges = Vec::new();
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    edges.push((i, j));
                }
            }
        }
        Pattern::loose(format!("{}[{:#x}]", self.name, keep), vs.len(), &edges).expect("sub-pattern")
    }

    /// Same graph with isolated vertices dropped.
    pub fn without_isolated(&self) -> Pattern {
        let keep = (0..self.k()).filter(|&v| self.adj[v] != 0).fold(0u16, |m, v| m | 1 << v);
        let mut p = self.induced_mask(keep);
        p.name = self.name.clone();
        p
    }

    pub fn is_independent(&self, mask: u16) -> bool {
        (0..self.k()).all(|v| mask >> v & 1 == 0 || self.adj[v] & mask == 0)
    }

    /// All independent sets as masks, the empty set first.
    pub fn independent_sets(&self) -> Vec<u16> {
        let mut out = Vec::new();
        fn rec(p: &Pattern, v: usize, cur: u16, out: &mut Vec<u16>) {
            if v == p.k() {
                out.push(cur);
                return;
            }
            rec(p, v + 1, cur, out);
            if p.adj[v] & cur == 0 {
                rec(p, v + 1, cur | 1 << v, out);
            }
        }
        rec(self, 0, 0, &mut out);
        out.sort_by_key(|m| (m.count_ones(), *m));
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.k() == 0 {
            return true;
        }
        let mut seen: u16 = 1;
        let mut frontier: u16 = 1;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[v] & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == self.full_mask()
    }

    pub fn is_isomorphic(&self, other: &Pattern) -> bool {
        if self.k() != other.k() || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut a: Vec<usize> = (0..self.k()).map(|v| self.degree(v)).collect();
        let mut b: Vec<usize> = (0..other.k()).map(|v| other.degree(v)).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b && embed::find_in_pattern(other, self, &[]).is_some()
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.name, self.edges())
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Nonempty list of pairwise non-isomorphic patterns.
#[derive(Clone, Debug)]
pub struct Family {
    members: Vec<Pattern>,
}

impl Family {
    pub fn new(patterns: Vec<Pattern>) -> Result<Self> {
        let mut members: Vec<Pattern> = Vec::new();
        for p in patterns {
            if !members.iter().any(|q| q.is_isomorphic(&p)) {
                members.push(p);
            }
        }
        if members.is_empty() {
            return Err(SatError::Parameter("empty family".into()));
        }
        Ok(Family { members })
    }

    pub fn single(p: Pattern) -> Self {
        Family { members: vec![p] }
    }

    pub fn members(&self) -> &[Pattern] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn max_order(&self) -> usize {
        self.members.iter().map(Pattern::k).max().unwrap_or(0)
    }

    pub fn name(&self) -> String {
        let names: Vec<&str> = self.members.iter().map(Pattern::name).collect();
        names.join("|")
    }
}

pub mod catalog {
    use super::*;

    pub fn complete(j: usize) -> Pattern {
        let mut e = Vec::new();
        for u in 0..j {
            for v in u + 1..j {
                e.push((u, v));
            }
        }
        Pattern::loose(format!("K{j}"), j, &e).expect("clique within guard")
    }

    pub fn cycle(j: usize) -> Pattern {
        assert!(j >= 3);
        let e: Vec<_> = (0..j).map(|i| (i, (i + 1) % j)).collect();
        Pattern::new(format!("C{j}"), j, &e).expect("cycle within guard")
    }

    pub fn path(j: usize) -> Pattern {
        assert!(j >= 2);
        let e: Vec<_> = (0..j - 1).map(|i| (i, i + 1)).collect();
        Pattern::new(format!("P{j}"), j, &e).expect("path within guard")
    }

    /// `K_{1,j}` with the centre at vertex 0.
    pub fn star(j: usize) -> Pattern {
        assert!(j >= 1);
        let e: Vec<_> = (1..=j).map(|i| (0, i)).collect();
        Pattern::new(format!("S{j}"), j + 1, &e).expect("star within guard")
    }

    /// Complete multipartite graph with consecutive parts. Parts of size 0 are skipped.
    pub fn multipartite(parts: &[usize]) -> Pattern {
        let parts: Vec<usize> = parts.iter().copied().filter(|&s| s > 0).collect();
        let mut e = Vec::new();
        let mut start = Vec::new();
        let mut acc = 0;
        for &s in &parts {
            start.push(acc);
            acc += s;
        }
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                for a in start[i]..start[i] + parts[i] {
                    for b in start[j]..start[j] + parts[j] {
                        e.push((a, b));
                    }
                }
            }
        }
        let name = format!("M:{}", parts.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
        Pattern::loose(name, acc, &e).expect("multipartite within guard")
    }

    pub fn petersen() -> Pattern {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Pattern::new("Petersen", 10, &e).expect("petersen")
    }
}

/// Parses `K<j>`, `C<j>`, `P<j>`, `S<j>`, `M:a,b,...` or `@<edge-list path>`.
pub fn parse_pattern(spec: &str) -> Result<Pattern> {
    let spec = spec.trim();
    let bad = |why: &str| SatError::Parse(format!("pattern `{spec}`: {why}"));
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(Path::new(path))?;
        let g = Graph::from_edge_list_str(&text)?;
        if g.n() > MAX_PATTERN {
            return Err(SatError::PatternTooLarge { got: g.n(), max: MAX_PATTERN });
        }
        return Pattern::from_graph(spec, &g);
    }
    if let Some(rest) = spec.strip_prefix("M:") {
        let parts: Vec<usize> = rest
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("parts must be positive integers"))?;
        if parts.len() < 2 || parts.contains(&0) {
            return Err(bad("need at least two positive parts"));
        }
        let total: usize = parts.iter().sum();
        if total > MAX_PATTERN {
            return Err(SatError::PatternTooLarge { got: total, max: MAX_PATTERN });
        }
        return Ok(catalog::multipartite(&parts));
    }
    let mut chars = spec.chars();
    let kind = chars.next().ok_or_else(|| bad("empty"))?;
    let j: usize = chars.as_str().parse().map_err(|_| bad("expected a size after the letter"))?;
    let (min, verts) = match kind {
        'K' => (2, j),
        'C' => (3, j),
        'P' => (2, j),
        'S' => (1, j + 1),
        _ => return Err(bad("unknown kind")),
    };
    if j < min {
        return Err(bad(&format!("size must be at least {min}")));
    }
    if verts > MAX_PATTERN {
        return Err(SatError::PatternTooLarge { got: verts, max: MAX_PATTERN });
    }
    Ok(match kind {
        'K' => catalog::complete(j),
        'C' => catalog::cycle(j),
        'P' => catalog::path(j),
        _ => catalog::star(j),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        let k3 = parse_pattern("K3").unwrap();
        assert_eq!((k3.k(), k3.edge_count()), (3, 3));
        let m = parse_pattern("M:1,1,2").unwrap();
        assert_eq!((m.k(), m.edge_count()), (4, 5));
        let c4 = parse_pattern("C4").unwrap();
        assert!(c4.is_isomorphic(&parse_pattern("M:2,2").unwrap()));
        assert_eq!(parse_pattern("S3").unwrap().k(), 4);
        assert_eq!(parse_pattern("P4").unwrap().edge_count(), 3);
    }

    #[test]
    fn grammar_errors() {
        for s in ["", "K", "K1", "C2", "P1", "S0", "X4", "M:1", "M:1,0", "M:a,b", "K13", "C3x"] {
            assert!(parse_pattern(s).is_err(), "{s} should fail");
        }
        assert!(matches!(parse_pattern("K13"), Err(SatError::PatternTooLarge { .. })));
        assert!(parse_pattern("@/nonexistent/file").is_err());
    }

    #[test]
    fn strict_rejects_isolated() {
        assert!(Pattern::new("x", 3, &[(0, 1)]).is_err());
        assert!(Pattern::loose("x", 3, &[(0, 1)]).is_ok());
    }

    #[test]
    fn family_dedups_isomorphic() {
        let fam = Family::new(vec![catalog::cycle(4), catalog::multipartite(&[2, 2]), catalog::complete(3)]).unwrap();
        assert_eq!(fam.len(), 2);
        assert!(Family::new(vec![]).is_err());
    }

    #[test]
    fn independent_sets_of_c4() {
        let c4 = catalog::cycle(4);
        let sets = c4.independent_sets();
        // empty, four singletons, two diagonals
        assert_eq!(sets.len(), 7);
        assert_eq!(sets[0], 0);
    }

    #[test]
    fn petersen_shape() {
        let p = catalog::petersen();
        assert_eq!(p.edge_count(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
        assert!(p.is_connected());
    }
}
