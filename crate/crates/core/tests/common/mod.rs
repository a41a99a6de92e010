//! Independent oracles: plain enumeration, no pruning, no shared code with the
//! library's search kernels.
#![allow(dead_code)]

use satlab::{Graph, Pattern};

/// Pattern as a plain edge list.
pub fn pedges(f: &Pattern) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for u in 0..f.k() {
        for v in u + 1..f.k() {
            if f.has_edge(u, v) {
                e.push((u, v));
            }
        }
    }
    e
}

/// Calls `visit` on every injective map `0..k -> 0..n`; stops when it returns true.
fn injective(k: usize, n: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(map: &mut Vec<usize>, used: &mut Vec<bool>, k: usize, n: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if map.len() == k {
            return visit(map);
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                map.push(x);
                let hit = rec(map, used, k, n, visit);
                map.pop();
                used[x] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }
    if k > n {
        return false;
    }
    rec(&mut Vec::new(), &mut vec![false; n], k, n, visit)
}

/// Some copy of `f` in `h`, possibly non-induced.
pub fn brute_contains(h: &Graph, f: &Pattern) -> bool {
    let e = pedges(f);
    injective(f.k(), h.n(), &mut |m| e.iter().all(|&(a, b)| h.has_edge(m[a], m[b])))
}

/// Adding `uv` to `h` creates a copy of `f` through `uv`.
pub fn brute_completes(h: &Graph, f: &Pattern, u: usize, v: usize) -> bool {
    let e = pedges(f);
    let has = |x: usize, y: usize| h.has_edge(x, y) || (x == u && y == v) || (x == v && y == u);
    injective(f.k(), h.n(), &mut |m| {
        e.iter().all(|&(a, b)| has(m[a], m[b]))
            && e.iter().any(|&(a, b)| (m[a] == u && m[b] == v) || (m[a] == v && m[b] == u))
    })
}

pub fn brute_saturated(g: &Graph, h: &Graph, fams: &[Pattern]) -> bool {
    if fams.iter().any(|f| brute_contains(h, f)) {
        return false;
    }
    g.edges()
        .filter(|&(u, v)| !h.has_edge(u, v))
        .all(|(u, v)| fams.iter().any(|f| brute_completes(h, f, u, v)))
}

/// Minimum edges of an `f`-saturated subgraph of `g` by trying every edge subset.
pub fn brute_sat_number(g: &Graph, f: &Pattern) -> usize {
    let e = g.edge_vec();
    assert!(e.len() <= 20);
    let mut best = usize::MAX;
    for mask in 0u32..1 << e.len() {
        let k = mask.count_ones() as usize;
        if k >= best {
            continue;
        }
        let chosen: Vec<(usize, usize)> = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
        let h = Graph::from_edges(g.n(), &chosen).unwrap();
        if brute_saturated(g, &h, std::slice::from_ref(f)) {
            best = k;
        }
    }
    best
}

/// Adjacency bitmasks of a small graph.
pub type Small = Vec<u16>;

pub fn small_from_pattern(f: &Pattern) -> Small {
    (0..f.k()).map(|v| f.adj(v)).collect()
}

fn small_has(g: &Small, u: usize, v: usize) -> bool {
    g[u] >> v & 1 == 1
}

fn small_edges(g: &Small) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for u in 0..g.len() {
        for v in u + 1..g.len() {
            if small_has(g, u, v) {
                e.push((u, v));
            }
        }
    }
    e
}

/// Some injective map of `a`'s vertices into `b` keeping edges.
fn small_embeds(a: &Small, b: &Small) -> bool {
    let e = small_edges(a);
    injective(a.len(), b.len(), &mut |m| e.iter().all(|&(x, y)| small_has(b, m[x], m[y])))
}

/// Connected, at least two vertices, and no vertex whose removal disconnects it.
fn two_connected(vs: &[usize], edges: &[(usize, usize)]) -> bool {
    if vs.len() < 2 {
        return false;
    }
    let connected_without = |skip: Option<usize>| {
        let keep: Vec<usize> = vs.iter().copied().filter(|&x| Some(x) != skip).collect();
        if keep.len() <= 1 {
            return true;
        }
        let mut seen = vec![keep[0]];
        let mut i = 0;
        while i < seen.len() {
            let x = seen[i];
            i += 1;
            for &(a, b) in edges {
                for (p, q) in [(a, b), (b, a)] {
                    if p == x && Some(q) != skip && !seen.contains(&q) {
                        seen.push(q);
                    }
                }
            }
        }
        seen.len() == keep.len()
    };
    connected_without(None) && (vs.len() == 2 || vs.iter().all(|&x| connected_without(Some(x))))
}

/// Edge-subset masks over `m` edges, largest subsets first.
fn masks_by_size(m: usize) -> impl Iterator<Item = u32> {
    (1..=m as u32).rev().flat_map(move |k| {
        // Gosper's hack over k-subsets of m bits
        let mut cur = Some((1u32 << k) - 1);
        std::iter::from_fn(move || {
            let x = cur?;
            let c = x & x.wrapping_neg();
            let r = x + c;
            let next = (((r ^ x) >> 2) / c) | r;
            cur = (next < 1 << m && r != 0).then_some(next);
            Some(x)
        })
    })
}

/// Every two-connected subgraph of `b` (any edge subset) embeds in `a`.
pub fn naive_degenerate(b: &Small, a: &Small) -> bool {
    let e = small_edges(b);
    for mask in masks_by_size(e.len()) {
        let sub: Vec<(usize, usize)> = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
        let mut vs: Vec<usize> = sub.iter().flat_map(|&(x, y)| [x, y]).collect();
        vs.sort_unstable();
        vs.dedup();
        if !two_connected(&vs, &sub) {
            continue;
        }
        if vs.len() > a.len() {
            return false;
        }
        let idx = |x: usize| vs.iter().position(|&y| y == x).unwrap();
        let mut s: Small = vec![0; vs.len()];
        for &(x, y) in &sub {
            s[idx(x)] |= 1 << idx(y);
            s[idx(y)] |= 1 << idx(x);
        }
        if !small_embeds(&s, a) {
            return false;
        }
    }
    true
}

fn induced_small(g: &Small, keep: &[usize]) -> Small {
    keep.iter()
        .map(|&x| keep.iter().enumerate().filter(|&(_, &y)| small_has(g, x, y)).fold(0u16, |m, (j, _)| m | 1 << j))
        .collect()
}

/// Property (★) straight from the definition, over all two-connected subgraphs.
pub fn naive_has_star(g: &Small) -> bool {
    let k = g.len();
    let indep: Vec<u32> = (0u32..1 << k)
        .filter(|&i| small_edges(g).iter().all(|&(x, y)| !(i >> x & 1 == 1 && i >> y & 1 == 1)))
        .collect();
    small_edges(g).into_iter().any(|(u, v)| {
        let rest: Vec<usize> = (0..k).filter(|&x| x != u && x != v).collect();
        let a = induced_small(g, &rest);
        indep.iter().all(|&i| {
            let keep: Vec<usize> = (0..k).filter(|&x| i >> x & 1 == 0).collect();
            !naive_degenerate(&induced_small(g, &keep), &a)
        })
    })
}

/// Lexicographically smallest upper-triangle bit string over all relabellings.
fn canon(g: &Small) -> u64 {
    let k = g.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = u64::MAX;
    loop {
        let mut code = 0u64;
        let mut bit = 0;
        for a in 0..k {
            for b in a + 1..k {
                if small_has(g, perm[a], perm[b]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(code);
        // next permutation
        let mut i = k;
        while i > 1 && perm[i - 2] >= perm[i - 1] {
            i -= 1;
        }
        if i <= 1 {
            break;
        }
        let mut j = k - 1;
        while perm[j] <= perm[i - 2] {
            j -= 1;
        }
        perm.swap(i - 2, j);
        perm[i - 1..].reverse();
    }
    best
}

/// One representative per isomorphism class of graphs on exactly `k` vertices.
pub fn all_graphs(k: usize) -> Vec<Small> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for base in all_graphs(k - 1) {
        for nb in 0u16..1 << (k - 1) {
            let mut g = base.clone();
            g.push(nb);
            for (x, row) in g.iter_mut().enumerate().take(k - 1) {
                if nb >> x & 1 == 1 {
                    *row |= 1 << (k - 1);
                }
            }
            if seen.insert(canon(&g)) {
                out.push(g);
            }
        }
    }
    out
}

/// Graphs on 2..=k vertices without isolated vertices, as patterns.
pub fn all_patterns(k: usize) -> Vec<Pattern> {
    let mut out = Vec::new();
    for j in 2..=k {
        for g in all_graphs(j) {
            if g.iter().all(|&r| r != 0) {
                out.push(Pattern::new(format!("g{j}_{}", out.len()), j, &small_edges(&g)).unwrap());
            }
        }
    }
    out
}

/// Proper colouring count check by trying every colour assignment.
pub fn brute_chromatic(f: &Pattern) -> usize {
    let k = f.k();
    let e = pedges(f);
    for c in 1..=k {
        let mut col = vec![0usize; k];
        loop {
            if e.iter().all(|&(a, b)| col[a] != col[b]) {
                return c;
            }
            let mut i = 0;
            while i < k && col[i] == c - 1 {
                col[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
            col[i] += 1;
        }
    }
    k
}
