//! Exact structural data of small patterns.

use crate::embed::find_in_pattern;
use crate::graph::Graph;
use crate::pattern::{Family, Pattern, MAX_PATTERN};

/// All optimal colourings of a pattern, as unlabelled partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouringWitness {
    pub chi: usize,
    /// each partition is a list of class bitmasks
    pub partitions: Vec<Vec<u16>>,
    /// largest class size over every optimal colouring
    pub s_star: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NtriangleWitness {
    pub i_max: Vec<usize>,
    pub v: usize,
    /// the colouring the class was taken from
    pub partition: Vec<u16>,
}

impl NtriangleWitness {
    pub fn i_max_mask(&self) -> u16 {
        self.i_max.iter().fold(0, |m, &x| m | 1 << x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarWitness {
    pub u: usize,
    pub v: usize,
}

pub fn chromatic_number(f: &Pattern) -> usize {
    let k = f.k();
    if k == 0 {
        return 0;
    }
    if f.edge_count() == 0 {
        return 1;
    }
    let mut colour = vec![usize::MAX; k];
    // k colours always suffice; search for strictly fewer
    let mut best = k;
    dsatur(f, &mut colour, 0, 0, &mut best);
    best
}

fn dsatur(f: &Pattern, colour: &mut [usize], coloured: usize, used: usize, best: &mut usize) {
    let k = f.k();
    if coloured == k {
        *best = (*best).min(used);
        return;
    }
    if used >= *best {
        return;
    }
    // uncoloured vertex with most distinct neighbour colours, then highest degree
    let sat = |v: usize| -> (u32, u32) {
        let mut seen: u32 = 0;
        let mut adj = f.adj(v);
        while adj != 0 {
            let u = adj.trailing_zeros() as usize;
            adj &= adj - 1;
            if colour[u] != usize::MAX {
                seen |= 1 << colour[u];
            }
        }
        (seen.count_ones(), f.degree(v) as u32)
    };
    let v = (0..k).filter(|&v| colour[v] == usize::MAX).max_by_key(|&v| sat(v)).unwrap();
    for c in 0..=used {
        if used.max(c + 1) >= *best {
            continue;
        }
        let clash = (0..k).any(|u| f.has_edge(u, v) && colour[u] == c);
        if clash {
            continue;
        }
        colour[v] = c;
        dsatur(f, colour, coloured + 1, used.max(c + 1), best);
        colour[v] = usize::MAX;
        if used >= *best {
            return;
        }
    }
}

pub fn optimal_colourings(f: &Pattern) -> ColouringWitness {
    let chi = chromatic_number(f);
    let mut partitions = Vec::new();
    let mut classes: Vec<u16> = Vec::new();
    fn rec(f: &Pattern, v: usize, chi: usize, classes: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if v == f.k() {
            if classes.len() == chi {
                out.push(classes.clone());
            }
            return;
        }
        // not enough vertices left to open the missing classes
        if chi - classes.len() > f.k() - v {
            return;
        }
        for c in 0..classes.len() {
            if f.adj(v) & classes[c] == 0 {
                classes[c] |= 1 << v;
                rec(f, v + 1, chi, classes, out);
                classes[c] &= !(1 << v);
            }
        }
        if classes.len() < chi {
            classes.push(1 << v);
            rec(f, v + 1, chi, classes, out);
            classes.pop();
        }
    }
    rec(f, 0, chi, &mut classes, &mut partitions);
    let s_star = partitions
        .iter()
        .flat_map(|p| p.iter().map(|c| c.count_ones() as usize))
        .max()
        .unwrap_or(0);
    ColouringWitness { chi, partitions, s_star }
}

pub fn detect_ntriangle(f: &Pattern) -> Option<NtriangleWitness> {
    let w = optimal_colourings(f);
    for part in &w.partitions {
        for &class in part {
            if class.count_ones() as usize != w.s_star {
                continue;
            }
            for v in 0..f.k() {
                if class >> v & 1 == 0 && f.adj(v) != 0 && f.adj(v) & !class == 0 {
                    let i_max = (0..f.k()).filter(|&x| class >> x & 1 == 1).collect();
                    return Some(NtriangleWitness { i_max, v, partition: part.clone() });
                }
            }
        }
    }
    None
}

/// Block decomposition; each block is its sorted edge list. Bridges are `K2` blocks.
pub fn blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut out = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX || g.degree(root) == 0 {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // frames: (vertex, parent, neighbour list, next index)
        let mut stack: Vec<(usize, usize, Vec<usize>, usize)> =
            vec![(root, usize::MAX, g.neighbors(root).collect(), 0)];
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if top.3 < top.2.len() {
                let w = top.2[top.3];
                top.3 += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, g.neighbors(w).collect(), 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(up) = stack.last() {
                    let u = up.0;
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push((e.0.min(e.1), e.0.max(e.1)));
                            if e == (u, v) {
                                break;
                            }
                        }
                        block.sort_unstable();
                        out.push(block);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Relabels an edge list on its own vertex set; `None` if it has too many vertices.
fn edges_to_pattern(edges: &[(usize, usize)]) -> Option<Pattern> {
    let mut vs: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    vs.sort_unstable();
    vs.dedup();
    if vs.len() > MAX_PATTERN {
        return None;
    }
    let idx = |x: usize| vs.binary_search(&x).unwrap();
    let e: Vec<_> = edges.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    Pattern::loose("block", vs.len(), &e).ok()
}

/// Every block of `b` is a subgraph of `a`.
pub fn is_degenerate(b: &Graph, a: &Pattern) -> bool {
    blocks(b).iter().all(|blk| match edges_to_pattern(blk) {
        Some(p) => p.k() <= a.k() && find_in_pattern(a, &p, &[]).is_some(),
        None => false,
    })
}

pub fn detect_star(f: &Pattern) -> Option<StarWitness> {
    let indep = f.independent_sets();
    f.edges().into_iter().find_map(|(u, v)| {
        let rest = f.induced_mask(f.full_mask() & !(1 << u) & !(1 << v));
        let ok = indep
            .iter()
            .all(|&i| !is_degenerate(&f.induced_mask(f.full_mask() & !i).to_graph(), &rest));
        ok.then_some(StarWitness { u, v })
    })
}

/// Smallest colour class over 2-colourings of bipartite members, with the member.
pub fn family_min_bipartite_side(fam: &Family) -> Option<(usize, Pattern)> {
    let mut best: Option<(usize, Pattern)> = None;
    for f in fam.members() {
        let w = optimal_colourings(f);
        if w.chi != 2 {
            continue;
        }
        let side = w
            .partitions
            .iter()
            .flat_map(|p| p.iter().map(|c| c.count_ones() as usize))
            .min()
            .unwrap();
        if best.as_ref().is_none_or(|(s, _)| side < *s) {
            best = Some((side, f.clone()));
        }
    }
    best
}

/// Minimum chromatic number over the family.
pub fn family_chromatic_number(fam: &Family) -> usize {
    fam.members().iter().map(chromatic_number).min().unwrap_or(0)
}

/// `{F \ I : F in fam, I independent in F}`, isolated vertices dropped.
pub fn deleted_family(fam: &Family) -> Vec<Pattern> {
    let mut out = Vec::new();
    for f in fam.members() {
        for i in f.independent_sets() {
            let p = f.induced_mask(f.full_mask() & !i).without_isolated();
            if p.edge_count() > 0 {
                let name = if i == 0 { f.name().to_string() } else { format!("{}-{:#x}", f.name(), i) };
                out.push(p.with_name(name));
            }
        }
    }
    out
}
