//! Linear-size constructions for families with a bipartite member and for
//! patterns with property (▷).

use super::{Builder, ConstructionReport, Params};
use crate::bits::VertexSet;
use crate::embed::{induced_copy_within, Matcher};
use crate::error::{Result, SatError};
use crate::gnp::DeferredGnp;
use crate::graph::Graph;
use crate::pattern::{Family, Pattern};
use crate::props::{detect_ntriangle, family_min_bipartite_side};

/// Smallest `t` with `(1 - p^a)^t · n <= n^{2/5}`.
pub(crate) fn tau(n: usize, p: f64, a: usize) -> usize {
    let nf = n as f64;
    let goal = nf.powf(0.4) * (1.0 + 1e-12);
    let q = 1.0 - p.powi(a as i32);
    let mut t = 0;
    let mut lhs = nf;
    while lhs > goal && t < n {
        lhs *= q;
        t += 1;
    }
    t
}

pub fn construct_bipartite_family(g: &DeferredGnp, fam: &Family, params: &Params) -> Result<(Graph, ConstructionReport)> {
    let gm = g.materialize();
    bipartite_on(&gm, g.p(), fam, params, true)
}

pub(crate) fn bipartite_on(gm: &Graph, p: f64, fam: &Family, params: &Params, verify: bool) -> Result<(Graph, ConstructionReport)> {
    params.check_basic()?;
    let n = gm.n();
    params.check_n(n)?;
    let (l, f0) = family_min_bipartite_side(fam)
        .ok_or_else(|| SatError::Applicability(format!("{} has no bipartite member", fam.name())))?;
    let m = Matcher::new(fam);
    let mut rep = ConstructionReport::new("bipartite", &fam.name(), n, p, params.seed);
    rep.set("l", l);
    rep.set("F0", f0.name());
    if l == 1 {
        // a star member: plain lexicographic greedy from the empty graph
        let mut bld = Builder::new(n, rep);
        bld.report.set("path", "greedy");
        return bld.finish_with(gm, fam, &m, params.verify_guard, verify);
    }
    if p <= 0.0 {
        return Err(SatError::Range(p));
    }
    let t = tau(n, p, l - 1);
    if 2 * t * (l - 1) > n {
        return Err(SatError::Size(format!("tau*(l-1) = {} exceeds n/2 for n = {n}", t * (l - 1))));
    }
    rep.set("tau", t);
    let a_sets: Vec<Vec<usize>> = (0..t).map(|i| (i * (l - 1)..(i + 1) * (l - 1)).collect()).collect();
    let reserved = VertexSet::from_iter(n, 0..t * (l - 1));
    let cap = f0.k() - l - 1;
    let bld = Builder::new(n, rep);
    core_body(bld, gm, fam, &m, &a_sets, &reserved, cap, params, verify)
}

pub fn construct_ntriangle(g: &DeferredGnp, f: &Pattern, params: &Params) -> Result<(Graph, ConstructionReport)> {
    params.check_basic()?;
    let n = g.n();
    params.check_n(n)?;
    let w = detect_ntriangle(f)
        .ok_or_else(|| SatError::Applicability(format!("{} lacks property (▷)", f.name())))?;
    let rest = f.induced_mask(f.full_mask() & !w.i_max_mask() & !(1 << w.v));
    let fam = Family::single(f.clone());
    let gm = g.materialize();
    if rest.k() == 0 {
        let (h, mut rep) = bipartite_on(&gm, g.p(), &fam, params, true)?;
        rep.construction = "ntriangle".into();
        rep.set("remainder", "empty");
        return Ok((h, rep));
    }
    let p = g.p();
    if p <= 0.0 {
        return Err(SatError::Range(p));
    }
    let t = tau(n, p, rest.k());
    let pool = ((n as f64).powf(params.eps).ceil() as usize).max(2 * f.k() * t).min(n / 4);
    let mut rep = ConstructionReport::new("ntriangle", f.name(), n, p, params.seed);
    rep.set("i_max", format!("{:?}", w.i_max));
    rep.set("v", w.v);
    rep.set("remainder", rest.name());
    rep.set("remainder_order", rest.k());
    rep.set("tau", t);
    rep.set("pool", pool);

    let mut free = VertexSet::from_iter(n, 0..pool);
    let mut a_sets = Vec::new();
    while a_sets.len() < t {
        match induced_copy_within(&gm, &rest, &free)? {
            Some(map) => {
                for &x in &map {
                    free.remove(x);
                }
                a_sets.push(map);
            }
            None => break,
        }
    }
    rep.set("copies", a_sets.len());
    if a_sets.is_empty() {
        return Err(SatError::ConstructionFailure(format!(
            "no induced copy of {} inside the pool of {pool} vertices",
            rest.name()
        )));
    }
    if a_sets.len() < t {
        rep.warn(format!("pool held {} of {t} copies", a_sets.len()));
    }
    let reserved = VertexSet::from_iter(n, 0..pool);
    let cap = w.i_max.len() - 1;
    let m = Matcher::new(&fam);
    core_body(Builder::new(n, rep), &gm, &fam, &m, &a_sets, &reserved, cap, params, true)
}

/// Shared tail: common neighbourhoods, gated additions, patch-up.
#[allow(clippy::too_many_arguments)]
fn core_body(
    mut bld: Builder,
    gm: &Graph,
    fam: &Family,
    m: &Matcher,
    a_sets: &[Vec<usize>],
    reserved: &VertexSet,
    cap: usize,
    params: &Params,
    verify: bool,
) -> Result<(Graph, ConstructionReport)> {
    let n = gm.n();
    bld.track_completed();
    bld.report.set("cap", cap);
    let mut in_a = VertexSet::new(n);
    for a in a_sets {
        for &x in a {
            in_a.insert(x);
        }
    }
    let mut taken = reserved.clone();
    taken.union_with(&in_a);
    let mut avail = VertexSet::full(n);
    avail.difference_with(&taken);

    bld.phase("A-B");
    let mut bs: Vec<VertexSet> = Vec::with_capacity(a_sets.len());
    for a in a_sets {
        let b = gm.common_neighbors(&VertexSet::from_iter(n, a.iter().copied()), &avail)?;
        avail.difference_with(&b);
        for x in b.iter() {
            for &y in a {
                bld.add(x, y);
            }
        }
        bs.push(b);
    }
    let sizes: Vec<String> = bs.iter().map(|b| b.len().to_string()).collect();
    bld.report.set("B_sizes", sizes.join(","));
    bld.report.set("leftover", avail.len());

    bld.phase("B-internal");
    let mut inner_deg = vec![0usize; n];
    for b in &bs {
        for x in b.iter() {
            let mut nb = gm.neighbor_set(x);
            nb.intersect_with(b);
            for y in nb.iter().filter(|&y| y > x) {
                if inner_deg[x] < cap && inner_deg[y] < cap && bld.add_gated(m, x, y) {
                    inner_deg[x] += 1;
                    inner_deg[y] += 1;
                }
            }
        }
    }

    bld.phase("cross");
    let mut upto = VertexSet::new(n);
    for b in &bs {
        upto.union_with(b);
        for x in b.iter() {
            let mut nb = gm.neighbor_set(x);
            nb.difference_with(&upto);
            for y in nb.iter() {
                bld.add_gated(m, x, y);
            }
        }
    }

    bld.phase("outside-A");
    for (x, y) in gm.edges() {
        if !in_a.contains(x) && !in_a.contains(y) {
            bld.add_gated(m, x, y);
        }
    }
    bld.finish_with(gm, fam, m, params.verify_guard, verify)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::catalog::*;
    use crate::saturation::Verified;

    #[test]
    fn tau_examples() {
        assert_eq!(tau(1024, 0.5, 1), 6);
        assert_eq!(tau(1, 0.5, 1), 0);
        assert_eq!(tau(100, 1.0, 2), 1);
    }

    #[test]
    fn c4_cap_and_tau() {
        let g = DeferredGnp::new(1024, 0.5, 1).unwrap();
        let (h, r) = construct_bipartite_family(&g, &Family::single(cycle(4)), &Params::default()).unwrap();
        assert_eq!(r.get("tau"), Some("6"));
        assert_eq!(r.get("cap"), Some("1"));
        assert_eq!(r.verified, Verified::True);
        assert_eq!(r.phase_sum(), h.edge_count());
    }

    #[test]
    fn ntriangle_witness_use() {
        let g = DeferredGnp::new(200, 0.5, 2).unwrap();
        let (_, r) = construct_ntriangle(&g, &cycle(5), &Params::default()).unwrap();
        assert_eq!(r.get("remainder_order"), Some("2"));
        assert_eq!(r.verified, Verified::True);
        assert!(matches!(construct_ntriangle(&g, &complete(3), &Params::default()), Err(SatError::Applicability(_))));
    }

    #[test]
    fn applicability() {
        let g = DeferredGnp::new(50, 0.5, 2).unwrap();
        let fam = Family::single(complete(3));
        assert!(matches!(construct_bipartite_family(&g, &fam, &Params::default()), Err(SatError::Applicability(_))));
        let pr = Params { n_min: Some(100), ..Params::default() };
        assert!(matches!(
            construct_bipartite_family(&g, &Family::single(cycle(4)), &pr),
            Err(SatError::Size(_))
        ));
    }
}
