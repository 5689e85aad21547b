//! Chromatic lower bounds from heights of Hom complexes, the sphere-count
//! oracle for Hom between complete graphs, and the clique baseline.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::complex::{build_hom, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{chromatic_number_exact, make_named_graph, ChromaticNumber, Graph};
use crate::sw::{height, induced_action, HeightResult, DEFAULT_BD_BUDGET};

/// Tag for bounds derived from an arbitrary test graph.
pub const TAG_TEST_GRAPH: &str = "stiefel-whitney-test-graph";
/// Tag for bounds derived from a complete test graph with analytic references.
pub const TAG_COMPLETE: &str = "complete-graph-test";

/// A graph with an involution that flips at least one edge.
#[derive(Clone, Debug)]
pub struct TestGraphSpec {
    name: String,
    graph: Graph,
    involution: Vec<usize>,
}

impl TestGraphSpec {
    pub fn new(name: impl Into<String>, graph: Graph, involution: Vec<usize>) -> Result<Self> {
        let n = graph.vertex_count();
        if involution.len() != n || !graph.is_automorphism(&involution) {
            return Err(Error::Validation("involution is not an automorphism".into()));
        }
        if (0..n).any(|v| involution[involution[v]] != v) {
            return Err(Error::Validation("involution does not square to the identity".into()));
        }
        if !(0..n).any(|v| graph.has_edge(v, involution[v])) {
            return Err(Error::Validation("involution flips no edge".into()));
        }
        Ok(TestGraphSpec {
            name: name.into(),
            graph,
            involution,
        })
    }

    /// Parses `base[+action]` where `base` is a named graph and `action` is
    /// `transposition` (swap vertices 0 and 1) or `reflection` (cycles only).
    /// Complete graphs default to the transposition, cycles to the
    /// reflection.
    pub fn parse(spec: &str) -> Result<Self> {
        let (base, action) = match spec.split_once('+') {
            Some((b, a)) => (b.trim(), Some(a.trim())),
            None => (spec.trim(), None),
        };
        let graph = make_named_graph(base)?;
        let kind = base.split(':').next().unwrap_or("");
        let n = graph.vertex_count();
        let action = match (action, kind) {
            (Some(a), _) => a,
            (None, "complete") => "transposition",
            (None, "cycle") => "reflection",
            (None, _) => {
                return Err(Error::Parameter(format!(
                    "test graph '{spec}' needs an involution suffix (+transposition or +reflection)"
                )))
            }
        };
        let involution = match action {
            "transposition" | "flip" => {
                if n < 2 {
                    return Err(Error::Parameter("transposition needs two vertices".into()));
                }
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(0, 1);
                p
            }
            "reflection" if kind == "cycle" => cycle_reflection(n),
            other => return Err(Error::Parameter(format!("unknown involution '{other}' for '{base}'"))),
        };
        let name = match (kind, action) {
            ("complete", "transposition" | "flip") => base.to_string(),
            (_, "flip") => format!("{base}+transposition"),
            _ => format!("{base}+{action}"),
        };
        TestGraphSpec::new(name, graph, involution)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }
}

/// Reflection of `C_m` flipping an edge: `x ↦ -x` for odd `m`, `x ↦ 1 - x`
/// for even `m`.
pub fn cycle_reflection(m: usize) -> Vec<usize> {
    let shift = if m % 2 == 1 { 0 } else { 1 };
    (0..m).map(|x| (m + shift - x) % m).collect()
}

/// Reference heights keyed by test graph name and target size.
pub trait HeightCache {
    fn get(&mut self, test: &str, m: usize) -> Option<i64>;
    fn put(&mut self, test: &str, m: usize, h: i64);
}

#[derive(Clone, Debug, Default)]
pub struct MemoryCache {
    map: HashMap<(String, usize), i64>,
}

impl MemoryCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl HeightCache for MemoryCache {
    fn get(&mut self, test: &str, m: usize) -> Option<i64> {
        self.map.get(&(test.to_string(), m)).copied()
    }

    fn put(&mut self, test: &str, m: usize, h: i64) {
        self.map.insert((test.to_string(), m), h);
    }
}

/// Cache that stores nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoCache;

impl HeightCache for NoCache {
    fn get(&mut self, _: &str, _: usize) -> Option<i64> {
        None
    }

    fn put(&mut self, _: &str, _: usize, _: i64) {}
}

#[derive(Clone, Debug)]
pub struct BoundOptions {
    pub m_cap: usize,
    pub cell_budget: usize,
    pub bd_budget: usize,
    /// Power cap for the height of `Hom(T,G)`; references are always exact.
    pub k_max: Option<usize>,
    /// Also compute the exact chromatic number up to this many colors.
    pub exact_cap: Option<usize>,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions {
            m_cap: 8,
            cell_budget: DEFAULT_CELL_BUDGET,
            bd_budget: DEFAULT_BD_BUDGET,
            k_max: None,
            exact_cap: None,
        }
    }
}

/// Stage at which a budget ran out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialStage {
    pub stage: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub graph: String,
    pub test: String,
    #[serde(rename = "h_G")]
    pub h_g: Option<i64>,
    pub refs: Vec<(usize, i64)>,
    pub bound: usize,
    pub theorem: &'static str,
    pub clique: usize,
    pub chi_exact: Option<usize>,
    pub m_cap: usize,
    /// The reference search hit `m_cap`, so the bound may understate.
    pub may_understate: bool,
    pub partial: Option<PartialStage>,
}

impl BoundReport {
    fn new(graph: &str, test: &str, g: &Graph, opts: &BoundOptions, theorem: &'static str) -> Self {
        let chi_exact = opts.exact_cap.and_then(|cap| match chromatic_number_exact(g, cap) {
            ChromaticNumber::Exact(k) => Some(k),
            _ => None,
        });
        BoundReport {
            graph: graph.to_string(),
            test: test.to_string(),
            h_g: None,
            refs: Vec::new(),
            bound: 1,
            theorem,
            clique: clique_bound(g),
            chi_exact,
            m_cap: opts.m_cap,
            may_understate: false,
            partial: None,
        }
    }

    fn fail(&mut self, stage: String, e: Error) -> Result<()> {
        if e.is_budget() {
            self.partial = Some(PartialStage {
                stage,
                message: e.to_string(),
            });
            Ok(())
        } else {
            Err(e)
        }
    }

    pub fn is_partial(&self) -> bool {
        self.partial.is_some()
    }
}

/// Height of `Hom(T,G)` under the test involution and the identity on `G`.
pub fn hom_height(
    spec: &TestGraphSpec,
    g: &Graph,
    cell_budget: usize,
    bd_budget: usize,
    k_max: Option<usize>,
) -> Result<HeightResult> {
    let x = build_hom(spec.graph(), g, cell_budget)?;
    let ident: Vec<usize> = (0..g.vertex_count()).collect();
    let a = induced_action(&x, spec.involution(), &ident)?;
    height(&x, &a, k_max, bd_budget)
}

/// `h(Hom(T,K_m))`, consulting the cache first.
pub fn reference_height(
    spec: &TestGraphSpec,
    m: usize,
    opts: &BoundOptions,
    cache: &mut dyn HeightCache,
) -> Result<i64> {
    if let Some(h) = cache.get(spec.name(), m) {
        return Ok(h);
    }
    let r = hom_height(spec, &Graph::complete(m), opts.cell_budget, opts.bd_budget, None)?;
    if r.capped {
        return Err(Error::Defect("reference height search was capped".into()));
    }
    cache.put(spec.name(), m, r.h);
    Ok(r.h)
}

/// `max{m+1 : h(Hom(T,K_m)) < h(Hom(T,G))}`, at least 1. References are
/// computed in increasing `m` and the search stops once they reach `h_G`.
/// Budget exhaustion yields a partial report keeping the bound reached so
/// far.
pub fn chrom_lower_bound(
    spec: &TestGraphSpec,
    g: &Graph,
    graph_name: &str,
    opts: &BoundOptions,
    cache: &mut dyn HeightCache,
) -> Result<BoundReport> {
    if g.has_loops() {
        return Err(Error::Parameter("graph has loops".into()));
    }
    let mut rep = BoundReport::new(graph_name, spec.name(), g, opts, TAG_TEST_GRAPH);
    let h_g = match hom_height(spec, g, opts.cell_budget, opts.bd_budget, opts.k_max) {
        Ok(r) => r.h,
        Err(e) => {
            rep.fail(format!("height of Hom({}, {graph_name})", spec.name()), e)?;
            return Ok(rep);
        }
    };
    rep.h_g = Some(h_g);
    for m in 1..=opts.m_cap {
        let h = match reference_height(spec, m, opts, cache) {
            Ok(h) => h,
            Err(e) => {
                rep.fail(format!("reference height at m={m}"), e)?;
                return Ok(rep);
            }
        };
        rep.refs.push((m, h));
        if h >= h_g {
            return Ok(rep);
        }
        rep.bound = m + 1;
    }
    rep.may_understate = true;
    Ok(rep)
}

/// `h(Hom(K_n,K_m))`: the complex is a wedge of `(m-n)`-spheres.
pub fn complete_reference_height(n: usize, m: usize) -> i64 {
    if m < n {
        -1
    } else {
        (m - n) as i64
    }
}

/// `n + h(Hom(K_n,G))` under the transposition of vertices 0 and 1, or 1
/// when `G` has no `n`-clique.
pub fn complete_graph_bound(n: usize, g: &Graph, graph_name: &str, opts: &BoundOptions) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::Parameter("complete test graph needs n >= 2".into()));
    }
    if g.has_loops() {
        return Err(Error::Parameter("graph has loops".into()));
    }
    let spec = TestGraphSpec::parse(&format!("complete:{n}"))?;
    let mut rep = BoundReport::new(graph_name, spec.name(), g, opts, TAG_COMPLETE);
    let h_g = match hom_height(&spec, g, opts.cell_budget, opts.bd_budget, opts.k_max) {
        Ok(r) => r.h,
        Err(e) => {
            rep.fail(format!("height of Hom({}, {graph_name})", spec.name()), e)?;
            return Ok(rep);
        }
    };
    rep.h_g = Some(h_g);
    let mut m = 1;
    loop {
        let h = complete_reference_height(n, m);
        rep.refs.push((m, h));
        if h >= h_g {
            break;
        }
        m += 1;
    }
    rep.bound = if h_g >= 0 { n + h_g as usize } else { 1 };
    Ok(rep)
}

/// Number of spheres in `Hom(K_m,K_n)` by the recurrence
/// `f(m,n) = m f(m-1,n-1) + (m-1) f(m,n-1)`.
pub fn f_oracle(m: usize, n: usize) -> BigInt {
    if m == 0 || n == 0 || m > n {
        return BigInt::zero();
    }
    // table[i][j] = f(i, j) for i <= m, j <= n
    let mut table = vec![vec![BigInt::zero(); n + 1]; m + 1];
    for j in 1..=n {
        for i in 1..=m.min(j) {
            table[i][j] = if i == 1 {
                BigInt::zero()
            } else if i == j {
                (1..=i).fold(BigInt::one(), |acc, k| acc * k) - 1
            } else {
                &table[i - 1][j - 1] * i + &table[i][j - 1] * (i - 1)
            };
        }
    }
    table[m][n].clone()
}

/// `Σ_{k=1}^{m-1} (-1)^{m+k+1} C(m,k+1) k^n`, valid for `m <= n`.
pub fn f_closed_form(m: usize, n: usize) -> BigInt {
    let mut total = BigInt::zero();
    for k in 1..m {
        let term = binomial(m, k + 1) * BigInt::from(k).pow(n as u32);
        if (m + k + 1) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Clique number by branch and bound. Loops are ignored.
pub fn clique_bound(g: &Graph) -> usize {
    fn grow(g: &Graph, size: usize, cand: &[usize], best: &mut usize) {
        if cand.is_empty() {
            *best = (*best).max(size);
            return;
        }
        for (i, &v) in cand.iter().enumerate() {
            if size + cand.len() - i <= *best {
                return;
            }
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&u| g.has_edge(u, v)).collect();
            grow(g, size + 1, &next, best);
        }
    }
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut best = 0;
    grow(g, 0, &order, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_hom;
    use crate::homology::betti_gf2;

    fn named(s: &str) -> Graph {
        make_named_graph(s).unwrap()
    }

    fn bound(test: &str, g: &str) -> BoundReport {
        let spec = TestGraphSpec::parse(test).unwrap();
        chrom_lower_bound(&spec, &named(g), g, &BoundOptions::default(), &mut MemoryCache::new()).unwrap()
    }

    #[test]
    fn parse_specs() {
        let s = TestGraphSpec::parse("complete:3").unwrap();
        assert_eq!((s.name(), s.involution()), ("complete:3", &[1, 0, 2][..]));
        let c = TestGraphSpec::parse("cycle:5+reflection").unwrap();
        assert_eq!(c.involution(), &[0, 4, 3, 2, 1]);
        assert_eq!(TestGraphSpec::parse("cycle:5").unwrap().name(), "cycle:5+reflection");
        assert_eq!(
            TestGraphSpec::parse("cycle:6").unwrap().involution(),
            &[1, 0, 5, 4, 3, 2]
        );
        assert!(TestGraphSpec::parse("petersen").is_err());
        assert!(TestGraphSpec::parse("path:3+reflection").is_err());
        assert!(TestGraphSpec::new("p3", Graph::path(3), vec![2, 1, 0]).is_err());
    }

    #[test]
    fn complete_five_via_edge() {
        let r = bound("complete:2", "complete:5");
        assert_eq!(r.h_g, Some(3));
        assert_eq!(r.refs, vec![(1, -1), (2, 0), (3, 1), (4, 2), (5, 3)]);
        assert_eq!(r.bound, 5);
        assert!(r.partial.is_none() && !r.may_understate);
    }

    #[test]
    fn pentagon_and_petersen() {
        let r = bound("complete:2", "cycle:5");
        assert_eq!((r.h_g, r.bound), (Some(1), 3));
        assert_eq!(bound("complete:2", "petersen").bound, 3);
        assert_eq!(bound("complete:2", "kneser:5,2").bound, 3);
    }

    #[test]
    fn complete_graph_examples() {
        let o = BoundOptions::default();
        let r = complete_graph_bound(2, &Graph::complete(4), "k4", &o).unwrap();
        assert_eq!(r.bound, 4);
        let r = complete_graph_bound(2, &Graph::cycle(4), "c4", &o).unwrap();
        assert_eq!((r.h_g, r.bound), (Some(0), 2));
        let r = complete_graph_bound(3, &Graph::complete(5), "k5", &o).unwrap();
        assert_eq!(r.bound, 3 + r.h_g.unwrap() as usize);
        assert_eq!(r.bound, 5);
        let r = complete_graph_bound(3, &Graph::cycle(5), "c5", &o).unwrap();
        assert_eq!((r.h_g, r.bound), (Some(-1), 1));
    }

    #[test]
    fn analytic_references_match() {
        for n in 2..=3 {
            let spec = TestGraphSpec::parse(&format!("complete:{n}")).unwrap();
            for m in 1..=5 {
                let h = reference_height(&spec, m, &BoundOptions::default(), &mut NoCache).unwrap();
                assert_eq!(h, complete_reference_height(n, m), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn kneser_tightness() {
        for n in [4, 5] {
            let g = named(&format!("kneser:{n},2"));
            let r = complete_graph_bound(2, &g, "kneser", &BoundOptions::default()).unwrap();
            assert_eq!(r.bound, n - 2);
        }
    }

    #[test]
    fn cache_is_used() {
        let spec = TestGraphSpec::parse("complete:2").unwrap();
        let mut cache = MemoryCache::new();
        let o = BoundOptions::default();
        let a = chrom_lower_bound(&spec, &Graph::complete(4), "k4", &o, &mut cache).unwrap();
        assert_eq!(cache.len(), 4);
        cache.put("complete:2", 3, 99);
        let b = chrom_lower_bound(&spec, &Graph::complete(4), "k4", &o, &mut cache).unwrap();
        assert_eq!(a.bound, 4);
        assert_eq!(b.refs[2], (3, 99));
    }

    #[test]
    fn budget_gives_partial() {
        let spec = TestGraphSpec::parse("complete:2").unwrap();
        let o = BoundOptions {
            bd_budget: 200,
            ..BoundOptions::default()
        };
        let r = chrom_lower_bound(&spec, &Graph::complete(5), "k5", &o, &mut NoCache).unwrap();
        assert!(r.is_partial());
        assert!(r.bound <= 5);
    }

    #[test]
    fn understated_at_cap() {
        let spec = TestGraphSpec::parse("complete:2").unwrap();
        let o = BoundOptions {
            m_cap: 3,
            ..BoundOptions::default()
        };
        let r = chrom_lower_bound(&spec, &Graph::complete(5), "k5", &o, &mut NoCache).unwrap();
        assert_eq!(r.bound, 4);
        assert!(r.may_understate);
    }

    #[test]
    fn soundness_small() {
        let o = BoundOptions {
            exact_cap: Some(8),
            ..BoundOptions::default()
        };
        for g in ["cycle:5", "cycle:6", "complete:4", "petersen", "wheel:5", "path:4"] {
            for t in ["complete:2", "complete:3", "cycle:5+reflection"] {
                let spec = TestGraphSpec::parse(t).unwrap();
                let r = chrom_lower_bound(&spec, &named(g), g, &o, &mut NoCache).unwrap();
                assert!(r.bound <= r.chi_exact.unwrap(), "{g} {t} {r:?}");
            }
        }
    }

    #[test]
    fn f_values() {
        assert_eq!(f_oracle(3, 4), BigInt::from(13));
        assert_eq!(f_oracle(4, 5), BigInt::from(121));
        assert_eq!(f_oracle(5, 5), BigInt::from(119));
        assert_eq!(f_oracle(3, 5), BigInt::from(29));
        assert_eq!(f_oracle(6, 5), BigInt::zero());
        for m in 1..=12 {
            for n in m..=12 {
                assert_eq!(f_oracle(m, n), f_closed_form(m, n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn wedge_betti() {
        for m in 2..=4 {
            for n in m..=5 {
                let x = build_hom(&Graph::complete(m), &Graph::complete(n), 1_000_000).unwrap();
                let b = betti_gf2(&x).unwrap();
                let top = n - m;
                let f = f_oracle(m, n);
                let mut want = vec![0usize; top + 1];
                want[0] += 1;
                want[top] += usize::try_from(&f).unwrap();
                assert!(b.same_as(&want), "m={m} n={n} {b}");
            }
        }
    }

    #[test]
    fn cliques() {
        assert_eq!(clique_bound(&Graph::complete(5)), 5);
        assert_eq!(clique_bound(&named("petersen")), 2);
        assert_eq!(clique_bound(&Graph::cycle(5)), 2);
        assert_eq!(clique_bound(&Graph::empty(3)), 1);
        assert_eq!(clique_bound(&Graph::empty(0)), 0);
    }
}
