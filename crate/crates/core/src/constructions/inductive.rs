//! `O(n ln n)` construction for families of chromatic number at least 3, by
//! recursion on the family with one independent set deleted.

use super::bipartite::bipartite_on;
use super::{Builder, ConstructionReport, Params};
use crate::embed::Matcher;
use crate::error::{Result, SatError};
use crate::gnp::DeferredGnp;
use crate::graph::Graph;
use crate::pattern::Family;
use crate::props::{deleted_family, family_chromatic_number};

pub fn construct_inductive(g: &DeferredGnp, fam: &Family, params: &Params) -> Result<(Graph, ConstructionReport)> {
    params.check_basic()?;
    params.check_n(g.n())?;
    let gm = g.materialize();
    let (h, mut rep) = level(&gm, g.p(), fam, params, 0)?;
    rep.construction = "inductive".into();
    rep.pattern = fam.name();
    Ok((h, rep))
}

fn level(gm: &Graph, p: f64, fam: &Family, params: &Params, depth: usize) -> Result<(Graph, ConstructionReport)> {
    let top = depth == 0;
    let chi = family_chromatic_number(fam);
    if chi <= 2 {
        let (h, mut rep) = bipartite_on(gm, p, fam, params, top)?;
        rep.set("depth", depth);
        return Ok((h, rep));
    }
    let fhat = deleted_family(fam);
    if fhat.is_empty() {
        return Err(SatError::Applicability(format!("deleting independent sets from {} leaves nothing", fam.name())));
    }
    let fhat = Family::new(fhat)?;
    let n = gm.n();
    let a = (params.c_ind * (n as f64).ln()).ceil().max(1.0) as usize;
    if 2 * a > n {
        return Err(SatError::Size(format!("reserved set of {a} vertices exceeds n/2 for n = {n}")));
    }
    let rest: Vec<usize> = (a..n).collect();
    let (inner, sub) = level(&gm.induced(&rest), p, &fhat, params, depth + 1)?;

    let mut rep = ConstructionReport::new("inductive", &fam.name(), n, p, params.seed);
    rep.set(&format!("level{depth}.A"), a);
    rep.set(&format!("level{depth}.chi"), chi);
    rep.set(&format!("level{depth}.family"), fhat.name());
    for (k, v) in &sub.info {
        rep.set(k, v);
    }
    rep.set(&format!("level{}.patch_added", depth + 1), sub.patch_added);
    rep.warnings.extend(sub.warnings.iter().cloned());

    let mut bld = Builder::new(n, rep);
    bld.phase("recursive");
    for (u, v) in inner.edges() {
        bld.add(u + a, v + a);
    }
    bld.phase("A-rest");
    for x in 0..a {
        for y in gm.neighbors(x).filter(|&y| y >= a) {
            bld.add(x, y);
        }
    }
    let m = Matcher::new(fam);
    let (h, mut rep) = bld.finish_with(gm, fam, &m, params.verify_guard, top)?;
    rep.set(&format!("level{depth}.patch_added"), rep.patch_added);
    Ok((h, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::catalog::*;
    use crate::saturation::Verified;

    #[test]
    fn bipartite_base_matches() {
        let g = DeferredGnp::new(300, 0.5, 4).unwrap();
        let fam = Family::single(cycle(4));
        let (h1, _) = construct_inductive(&g, &fam, &Params::default()).unwrap();
        let (h2, _) = super::super::construct_bipartite_family(&g, &fam, &Params::default()).unwrap();
        assert_eq!(h1.edge_vec(), h2.edge_vec());
    }

    #[test]
    fn triangle_and_k4() {
        for (f, n) in [(complete(3), 200), (complete(4), 120)] {
            let g = DeferredGnp::new(n, 0.5, 9).unwrap();
            let (h, r) = construct_inductive(&g, &Family::single(f), &Params::default()).unwrap();
            assert_eq!(r.verified, Verified::True, "{}", r.to_kv());
            assert_eq!(r.phase_sum(), h.edge_count());
        }
    }
}
