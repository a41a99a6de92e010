//! Simple undirected graphs with bit-parallel adjacency rows.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::bits::{and_count, words_for, BitIter, VertexSet};
use crate::error::{Result, SatError};

/// Simple undirected graph on `0..n`.
///
/// Row `v` is a bitset of the neighbours of `v`; all rows live in one flat buffer.
/// A second, much smaller bitset per row marks its nonzero words.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    w: usize,
    rows: Vec<u64>,
    sw: usize,
    nz: Vec<u64>,
    deg: Vec<u32>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let w = words_for(n);
        let sw = words_for(w);
        Graph { n, w, rows: vec![0; n * w], sw, nz: vec![0; n * sw], deg: vec![0; n], m: 0 }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Builds from full adjacency rows; caller guarantees symmetry and no loops.
    pub(crate) fn from_rows(n: usize, rows: Vec<u64>) -> Self {
        let w = words_for(n);
        assert_eq!(rows.len(), n * w);
        let deg: Vec<u32> = rows.chunks(w.max(1)).take(n).map(|r| r.iter().map(|x| x.count_ones()).sum()).collect();
        let m = deg.iter().map(|&d| d as usize).sum::<usize>() / 2;
        let sw = words_for(w);
        let mut nz = vec![0u64; n * sw];
        for v in 0..n {
            for (i, &x) in rows[v * w..(v + 1) * w].iter().enumerate() {
                if x != 0 {
                    nz[v * sw + i / 64] |= 1 << (i % 64);
                }
            }
        }
        Graph { n, w, rows, sw, nz, deg, m }
    }

    /// Builds a graph from an edge list, rejecting loops and out-of-range ids.
    /// Repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n {
            return Err(SatError::VertexRange { v: u, n: self.n });
        }
        if v >= self.n {
            return Err(SatError::VertexRange { v, n: self.n });
        }
        if u == v {
            return Err(SatError::SelfLoop(u));
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Number of 64-bit words per adjacency row.
    #[inline]
    pub fn row_words(&self) -> usize {
        self.w
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.w..(v + 1) * self.w]
    }

    /// Bitset over word indices of row `v`: bit `i` set iff word `i` is nonzero.
    #[inline]
    pub fn row_summary(&self, v: usize) -> &[u64] {
        &self.nz[v * self.sw..(v + 1) * self.sw]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.deg[v] as usize
    }

    pub fn max_degree(&self) -> usize {
        self.deg.iter().copied().max().unwrap_or(0) as usize
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.rows[u * self.w + v / 64] >> (v % 64) & 1 == 1
    }

    /// Adds `{u, v}`; returns false if it was already present.
    /// Panics on a loop or out-of-range vertex.
    #[inline]
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v && u < self.n && v < self.n, "bad pair ({u}, {v})");
        if self.has_edge(u, v) {
            return false;
        }
        self.rows[u * self.w + v / 64] |= 1 << (v % 64);
        self.rows[v * self.w + u / 64] |= 1 << (u % 64);
        self.nz[u * self.sw + v / 4096] |= 1 << (v / 64 % 64);
        self.nz[v * self.sw + u / 4096] |= 1 << (u / 64 % 64);
        self.deg[u] += 1;
        self.deg[v] += 1;
        self.m += 1;
        true
    }

    #[inline]
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || !self.has_edge(u, v) {
            return false;
        }
        self.rows[u * self.w + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.w + u / 64] &= !(1 << (u % 64));
        if self.rows[u * self.w + v / 64] == 0 {
            self.nz[u * self.sw + v / 4096] &= !(1 << (v / 64 % 64));
        }
        if self.rows[v * self.w + u / 64] == 0 {
            self.nz[v * self.sw + u / 4096] &= !(1 << (u / 64 % 64));
        }
        self.deg[u] -= 1;
        self.deg[v] -= 1;
        self.m -= 1;
        true
    }

    pub fn neighbors(&self, v: usize) -> BitIter<'_> {
        BitIter::new(self.row(v))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            let row = self.row(u);
            let start = (u + 1) / 64;
            let first = if start < row.len() { row[start] & (!0u64 << ((u + 1) % 64)) } else { 0 };
            WordTail { row, idx: start, cur: first }.map(move |v| (u, v))
        })
    }

    pub fn edge_vec(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    /// `|N(v) ∩ s|`.
    pub fn degree_into(&self, v: usize, s: &VertexSet) -> usize {
        and_count(self.row(v), s.words())
    }

    /// `|N(u) ∩ N(v) ∩ s|`.
    pub fn codegree_into(&self, u: usize, v: usize, s: &VertexSet) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .zip(s.words())
            .map(|((a, b), c)| (a & b & c).count_ones() as usize)
            .sum()
    }

    /// Common neighbourhood of every vertex of `s`, restricted to `a`.
    pub fn common_neighbors(&self, s: &VertexSet, a: &VertexSet) -> Result<VertexSet> {
        if s.is_empty() {
            return Err(SatError::Parameter("common_neighbors needs a nonempty vertex set".into()));
        }
        if s.capacity() != self.n || a.capacity() != self.n {
            return Err(SatError::Parameter("vertex set capacity differs from graph order".into()));
        }
        let mut out = a.words().to_vec();
        for v in s.iter() {
            for (o, r) in out.iter_mut().zip(self.row(v)) {
                *o &= r;
            }
        }
        Ok(VertexSet::from_words(self.n, out))
    }

    /// Induced subgraph on `vs`, relabelled so that `vs[i]` becomes `i`.
    pub fn induced(&self, vs: &[usize]) -> Graph {
        let mut h = Graph::new(vs.len());
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if self.has_edge(vs[i], vs[j]) {
                    h.add_edge(i, j);
                }
            }
        }
        h
    }

    /// Some edge of `self` missing from `host`, if any.
    pub fn first_edge_outside(&self, host: &Graph) -> Option<(usize, usize)> {
        if self.n != host.n {
            return self.edges().next();
        }
        for u in 0..self.n {
            let extra = self
                .row(u)
                .iter()
                .zip(host.row(u))
                .enumerate()
                .find(|(_, (a, b))| *a & !*b != 0);
            if let Some((i, (a, b))) = extra {
                let v = i * 64 + (a & !b).trailing_zeros() as usize;
                return Some((u.min(v), u.max(v)));
            }
        }
        None
    }

    pub fn is_subgraph_of(&self, host: &Graph) -> bool {
        self.n == host.n && self.first_edge_outside(host).is_none()
    }

    /// Union of edge sets on the same vertex set.
    pub fn union_with(&mut self, other: &Graph) {
        assert_eq!(self.n, other.n);
        for (u, v) in other.edges() {
            self.add_edge(u, v);
        }
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        let mut s = String::new();
        writeln!(s, "{} {}", self.n, self.m).unwrap();
        for (u, v) in self.edges() {
            writeln!(s, "{u} {v}").unwrap();
        }
        out.write_all(s.as_bytes())?;
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("write to vec");
        String::from_utf8(buf).expect("ascii")
    }

    /// Reads the `n m` header format; `#` lines are skipped.
    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
        let mut lines = input.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(l) if l.trim().is_empty() || l.trim_start().starts_with('#') => None,
            other => Some((i + 1, other)),
        });
        let (ln, header) = lines.next().ok_or_else(|| SatError::Parse("missing `n m` header".into()))?;
        let header = header?;
        let (n, m) = parse_two(&header, ln)?;
        let mut g = Graph::new(n);
        let mut seen = 0usize;
        for (ln, line) in lines {
            let line = line?;
            let (u, v) = parse_two(&line, ln)?;
            g.check_pair(u, v).map_err(|e| SatError::Parse(format!("line {ln}: {e}")))?;
            if !g.add_edge(u, v) {
                return Err(SatError::Parse(format!("line {ln}: duplicate edge {u} {v}")));
            }
            seen += 1;
        }
        if seen != m {
            return Err(SatError::Parse(format!("header promises {m} edges, found {seen}")));
        }
        Ok(g)
    }

    pub fn from_edge_list_str(s: &str) -> Result<Graph> {
        Self::read_edge_list(s.as_bytes())
    }

    pub fn check_invariants(&self) -> bool {
        let mut sum = 0usize;
        for v in 0..self.n {
            if self.has_edge(v, v) {
                return false;
            }
            let d = self.neighbors(v).count();
            if d != self.degree(v) {
                return false;
            }
            if self.neighbors(v).any(|u| u >= self.n || !self.has_edge(u, v)) {
                return false;
            }
            sum += d;
            for (i, &x) in self.row(v).iter().enumerate() {
                if (x != 0) != (self.row_summary(v)[i / 64] >> (i % 64) & 1 == 1) {
                    return false;
                }
            }
        }
        sum == 2 * self.m
    }
}

fn parse_two(line: &str, ln: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| SatError::Parse(format!("line {ln}: expected two integers")))?
            .parse::<usize>()
            .map_err(|e| SatError::Parse(format!("line {ln}: {e}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(SatError::Parse(format!("line {ln}: trailing tokens")));
    }
    Ok((a, b))
}

struct WordTail<'a> {
    row: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for WordTail<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + t);
            }
            self.idx += 1;
            if self.idx >= self.row.len() {
                return None;
            }
            self.cur = self.row[self.idx];
        }
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}, {:?})", self.n, self.m, self.edge_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn complete_graph_counts() {
        let g = Graph::complete(5);
        assert_eq!(g.edge_count(), 10);
        assert!(g.check_invariants());
        assert_eq!(g.edges().count(), 10);
    }

    #[test]
    fn edges_sorted_across_word_boundary() {
        let g = Graph::from_edges(200, &[(70, 150), (3, 64), (0, 199), (63, 64)]).unwrap();
        assert_eq!(g.edge_vec(), vec![(0, 199), (3, 64), (63, 64), (70, 150)]);
    }

    #[test]
    fn common_neighbors_examples() {
        let k4 = Graph::complete(4);
        let s = VertexSet::from_iter(4, [0]);
        let a = VertexSet::from_iter(4, [1, 2, 3]);
        assert_eq!(k4.common_neighbors(&s, &a).unwrap().to_vec(), vec![1, 2, 3]);

        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let s = VertexSet::from_iter(3, [0, 2]);
        assert_eq!(path.common_neighbors(&s, &VertexSet::full(3)).unwrap().to_vec(), vec![1]);

        let c5 = cycle(5);
        let s = VertexSet::from_iter(5, [0, 2]);
        assert_eq!(c5.common_neighbors(&s, &VertexSet::full(5)).unwrap().to_vec(), vec![1]);

        assert!(matches!(
            c5.common_neighbors(&VertexSet::new(5), &VertexSet::full(5)),
            Err(SatError::Parameter(_))
        ));
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = cycle(6);
        let s = g.to_edge_list_string();
        assert!(s.starts_with("6 6\n0 1\n0 5\n1 2\n"));
        let h = Graph::from_edge_list_str(&format!("# comment\n{s}")).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn edge_list_rejects_bad_input() {
        assert!(Graph::from_edge_list_str("3 1\n0 0\n").is_err());
        assert!(Graph::from_edge_list_str("3 1\n0 3\n").is_err());
        assert!(Graph::from_edge_list_str("3 2\n0 1\n").is_err());
        assert!(Graph::from_edge_list_str("").is_err());
        assert!(Graph::from_edge_list_str("3 1\n0 x\n").is_err());
    }

    #[test]
    fn subgraph_check() {
        let k4 = Graph::complete(4);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(star.is_subgraph_of(&k4));
        assert!(!k4.is_subgraph_of(&star));
        assert_eq!(k4.first_edge_outside(&star), Some((1, 2)));
    }

    #[test]
    fn remove_keeps_invariants() {
        let mut g = Graph::complete(6);
        assert!(g.remove_edge(2, 4));
        assert!(!g.remove_edge(2, 4));
        assert_eq!(g.edge_count(), 14);
        assert!(g.check_invariants());
    }
}
