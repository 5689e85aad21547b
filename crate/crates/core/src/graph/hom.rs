use serde::Serialize;

use super::named::circular;
use super::{make_named_graph, Graph};
use crate::error::{Error, Result};

/// A vertex map between two graphs. Construction only checks the shape of the
/// map; use [`is_homomorphism`] to test the edge condition.
#[derive(Clone, Debug)]
pub struct GraphHom<'a> {
    pub source: &'a Graph,
    pub target: &'a Graph,
    pub map: Vec<usize>,
}

impl<'a> GraphHom<'a> {
    pub fn new(source: &'a Graph, target: &'a Graph, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.vertex_count() {
            return Err(Error::Shape(format!(
                "map has {} entries, source has {} vertices",
                map.len(),
                source.vertex_count()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(Error::Shape(format!(
                "map entry {bad} out of range for {} target vertices",
                target.vertex_count()
            )));
        }
        Ok(GraphHom { source, target, map })
    }
}

/// True iff every edge of the source, loops included, lands on an edge.
pub fn is_homomorphism(h: &GraphHom<'_>) -> bool {
    h.source.edges().all(|(x, y)| h.target.has_edge(h.map[x], h.map[y]))
}

/// Result of a (possibly truncated) homomorphism enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomList {
    pub maps: Vec<Vec<usize>>,
    /// Set when the enumeration stopped at the limit with more maps remaining.
    pub partial: bool,
}

/// Depth-first search over vertex maps `T -> G` in lexicographic order.
/// `visit` returns `false` to stop early.
fn search_homs(t: &Graph, g: &Graph, mut visit: impl FnMut(&[usize]) -> bool) {
    let nt = t.vertex_count();
    let w = g.words();
    let ng = g.vertex_count();
    if nt == 0 {
        visit(&[]);
        return;
    }
    if ng == 0 {
        return;
    }
    // domains[x] is the packed set of admissible images of x
    let mut full = vec![u64::MAX; w];
    if ng % 64 != 0 {
        full[w - 1] = (1u64 << (ng % 64)) - 1;
    }
    for word in full.iter_mut().skip(ng.div_ceil(64)) {
        *word = 0;
    }
    let mut domains: Vec<u64> = Vec::with_capacity(nt * w);
    for x in 0..nt {
        if t.has_loop(x) {
            for i in 0..w {
                let mut word = 0u64;
                for b in 0..64 {
                    let v = i * 64 + b;
                    if v < ng && g.has_loop(v) {
                        word |= 1 << b;
                    }
                }
                domains.push(word);
            }
        } else {
            domains.extend_from_slice(&full);
        }
    }
    let mut map = vec![0usize; nt];
    let mut stack: Vec<Vec<u64>> = Vec::with_capacity(nt);
    fn rec(
        x: usize,
        t: &Graph,
        g: &Graph,
        w: usize,
        domains: &mut Vec<u64>,
        stack: &mut Vec<Vec<u64>>,
        map: &mut [usize],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let nt = t.vertex_count();
        if x == nt {
            return visit(map);
        }
        let dom: Vec<u64> = domains[x * w..(x + 1) * w].to_vec();
        for (i, &word) in dom.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let v = i * 64 + b;
                map[x] = v;
                // forward check on later neighbors
                stack.push(domains.clone());
                let row = g.row(v);
                let mut ok = true;
                for &y in t.neighbors(x) {
                    if y <= x {
                        continue;
                    }
                    let d = &mut domains[y * w..(y + 1) * w];
                    let mut any = 0u64;
                    for (dw, rw) in d.iter_mut().zip(row) {
                        *dw &= rw;
                        any |= *dw;
                    }
                    if any == 0 {
                        ok = false;
                        break;
                    }
                }
                let keep_going = !ok || rec(x + 1, t, g, w, domains, stack, map, visit);
                *domains = stack.pop().expect("stack balanced");
                if !keep_going {
                    return false;
                }
            }
        }
        true
    }
    rec(0, t, g, w, &mut domains, &mut stack, &mut map, &mut visit);
}

/// All homomorphisms `T -> G` in lexicographic order of the map, optionally
/// truncated to `limit` maps.
pub fn enumerate_homs(t: &Graph, g: &Graph, limit: Option<usize>) -> HomList {
    let mut maps = Vec::new();
    let mut partial = false;
    search_homs(t, g, |m| {
        if let Some(l) = limit {
            if maps.len() == l {
                partial = true;
                return false;
            }
        }
        maps.push(m.to_vec());
        true
    });
    HomList { maps, partial }
}

/// `|Hom_0(T, G)|` without materializing the maps.
pub fn count_homs(t: &Graph, g: &Graph) -> u64 {
    let mut count = 0u64;
    search_homs(t, g, |_| {
        count += 1;
        true
    });
    count
}

fn first_hom(t: &Graph, g: &Graph) -> Option<Vec<usize>> {
    let mut found = None;
    search_homs(t, g, |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum ChromaticNumber {
    Exact(usize),
    ExceedsCap,
    Infinite,
}

/// Smallest `k <= cap` admitting a proper `k`-coloring. Looped graphs have
/// infinite chromatic number.
pub fn chromatic_number_exact(g: &Graph, cap: usize) -> ChromaticNumber {
    if g.has_loops() {
        return ChromaticNumber::Infinite;
    }
    let n = g.vertex_count();
    if n == 0 {
        return if cap >= 1 {
            ChromaticNumber::Exact(1)
        } else {
            ChromaticNumber::ExceedsCap
        };
    }
    // color high-degree vertices first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for k in 1..=cap {
        let mut colors = vec![usize::MAX; n];
        if color_rec(g, &order, 0, k, 0, &mut colors) {
            return ChromaticNumber::Exact(k);
        }
    }
    ChromaticNumber::ExceedsCap
}

fn color_rec(g: &Graph, order: &[usize], i: usize, k: usize, used: usize, colors: &mut [usize]) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    // a fresh color is only tried once (color symmetry)
    for c in 0..k.min(used + 1) {
        if g.neighbors(v).iter().all(|&u| colors[u] != c) {
            colors[v] = c;
            if color_rec(g, order, i + 1, k, used.max(c + 1), colors) {
                return true;
            }
            colors[v] = usize::MAX;
        }
    }
    false
}

/// Which state-graph family a rational search maps into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateFamily {
    /// Kneser graphs `K_{n,k}`.
    Fractional,
    /// Circular graphs `R_{n,k}`.
    Circular,
}

/// Best ratio `n/k` found by exhaustive search up to a cap. This is an upper
/// approximation of the infimum, never the infimum itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalBound {
    pub n: usize,
    pub k: usize,
    /// `n/k` in lowest terms.
    pub reduced: (usize, usize),
    pub witness: Vec<usize>,
    pub cap: usize,
    pub capped: bool,
}

/// Searches all `(n, k)` with `2k <= n <= cap` for a homomorphism into the
/// state graph and returns the smallest ratio found; ties go to the pair seen
/// first (smallest `n`, then smallest `k`).
pub fn rational_chromatic_search(g: &Graph, family: StateFamily, cap: usize) -> Result<RationalBound> {
    if g.has_loops() {
        return Err(Error::Parameter("rational search requires a loopfree graph".into()));
    }
    if cap < 2 {
        return Err(Error::Parameter("cap must be at least 2".into()));
    }
    let mut best: Option<RationalBound> = None;
    for n in 2..=cap {
        for k in 1..=n / 2 {
            if let Some(b) = &best {
                // n/k >= b.n/b.k: cannot improve
                if n * b.k >= b.n * k {
                    continue;
                }
            }
            let state = match family {
                StateFamily::Circular => circular(n, k),
                StateFamily::Fractional => make_named_graph(&format!("kneser:{n},{k}"))?,
            };
            if let Some(witness) = first_hom(g, &state) {
                let d = num_integer::gcd(n, k);
                best = Some(RationalBound {
                    n,
                    k,
                    reduced: (n / d, k / d),
                    witness,
                    cap,
                    capped: true,
                });
            }
        }
    }
    best.ok_or_else(|| Error::Validation(format!("no witness under cap {cap}")))
}

/// Signed number of turns a homomorphism `C_m -> K_3` makes around the
/// triangle. A step `a -> b` counts +1 when `b - a ≡ 1 (mod 3)` and -1 otherwise.
pub fn winding_number(h: &GraphHom<'_>) -> Result<i64> {
    let m = h.source.vertex_count();
    if m < 3 || *h.source != Graph::cycle(m) {
        return Err(Error::Shape("winding number needs a cycle C_m as source".into()));
    }
    if *h.target != Graph::complete(3) {
        return Err(Error::Shape("winding number needs K_3 as target".into()));
    }
    if !is_homomorphism(h) {
        return Err(Error::Shape("map is not a homomorphism".into()));
    }
    let mut total: i64 = 0;
    for i in 0..m {
        let a = h.map[i];
        let b = h.map[(i + 1) % m];
        total += if (b + 3 - a) % 3 == 1 { 1 } else { -1 };
    }
    debug_assert_eq!(total % 3, 0);
    Ok(total / 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all `|G|^|T|` vertex maps.
    fn brute_force_homs(t: &Graph, g: &Graph) -> Vec<Vec<usize>> {
        let nt = t.vertex_count();
        let ng = g.vertex_count();
        let total = ng.pow(nt as u32);
        let mut out = Vec::new();
        for mut idx in 0..total {
            let mut m = vec![0; nt];
            for slot in m.iter_mut().rev() {
                *slot = idx % ng;
                idx /= ng;
            }
            if t.edges().all(|(x, y)| g.has_edge(m[x], m[y])) {
                out.push(m);
            }
        }
        out
    }

    #[test]
    fn is_homomorphism_examples() {
        let k3 = Graph::complete(3);
        assert!(is_homomorphism(&GraphHom::new(&k3, &k3, vec![0, 1, 2]).unwrap()));
        let c5 = Graph::cycle(5);
        let pt = Graph::looped_point();
        assert!(is_homomorphism(&GraphHom::new(&c5, &pt, vec![0; 5]).unwrap()));
        let k2 = Graph::complete(2);
        let k1 = Graph::complete(1);
        assert!(!is_homomorphism(&GraphHom::new(&k2, &k1, vec![0, 0]).unwrap()));
        assert!(GraphHom::new(&k2, &k1, vec![0]).is_err());
        assert!(GraphHom::new(&k2, &k1, vec![0, 1]).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let c5 = Graph::cycle(5);
        let k3 = Graph::complete(3);
        let homs = enumerate_homs(&c5, &k3, None);
        assert_eq!(homs.maps.len(), 30);
        assert_eq!(homs.maps, brute_force_homs(&c5, &k3));
        assert!(!homs.partial);

        let perms = enumerate_homs(&k3, &k3, None);
        assert_eq!(perms.maps.len(), 6);
        assert_eq!(perms.maps, brute_force_homs(&k3, &k3));

        let terminal = enumerate_homs(&Graph::complete(2), &Graph::looped_point(), None);
        assert_eq!(terminal.maps, vec![vec![0, 0]]);
    }

    #[test]
    fn enumeration_with_loops_in_source() {
        let t = Graph::from_edges(2, &[(0, 0), (0, 1)]).unwrap();
        let g = Graph::from_edges(3, &[(0, 0), (0, 1), (1, 2), (2, 2)]).unwrap();
        assert_eq!(enumerate_homs(&t, &g, None).maps, brute_force_homs(&t, &g));
    }

    #[test]
    fn limit_flags_partial() {
        let c5 = Graph::cycle(5);
        let k3 = Graph::complete(3);
        let homs = enumerate_homs(&c5, &k3, Some(4));
        assert_eq!(homs.maps.len(), 4);
        assert!(homs.partial);
        let all = enumerate_homs(&c5, &k3, Some(30));
        assert!(!all.partial);
        assert_eq!(count_homs(&c5, &k3), 30);
    }

    #[test]
    fn chromatic_examples() {
        let petersen = make_named_graph("kneser:5,2").unwrap();
        assert_eq!(chromatic_number_exact(&petersen, 10), ChromaticNumber::Exact(3));
        assert_eq!(chromatic_number_exact(&Graph::cycle(5), 10), ChromaticNumber::Exact(3));
        assert_eq!(
            chromatic_number_exact(&Graph::looped_point(), 10),
            ChromaticNumber::Infinite
        );
        assert_eq!(
            chromatic_number_exact(&Graph::complete(5), 4),
            ChromaticNumber::ExceedsCap
        );
        assert_eq!(chromatic_number_exact(&Graph::empty(3), 4), ChromaticNumber::Exact(1));
    }

    #[test]
    fn kneser_chromatic_numbers() {
        for (n, k) in [(4, 2), (5, 2), (6, 2), (7, 3)] {
            let g = make_named_graph(&format!("kneser:{n},{k}")).unwrap();
            assert_eq!(
                chromatic_number_exact(&g, 10),
                ChromaticNumber::Exact(n - 2 * k + 2),
                "K_{n},{k}"
            );
        }
    }

    #[test]
    fn circular_search_examples() {
        let c5 = Graph::cycle(5);
        let b = rational_chromatic_search(&c5, StateFamily::Circular, 5).unwrap();
        assert_eq!((b.n, b.k), (5, 2));
        let r52 = circular(5, 2);
        assert!(is_homomorphism(&GraphHom::new(&c5, &r52, b.witness.clone()).unwrap()));

        let k2 = Graph::complete(2);
        let b = rational_chromatic_search(&k2, StateFamily::Circular, 4).unwrap();
        assert_eq!(b.reduced, (2, 1));

        let k3 = Graph::complete(3);
        let b = rational_chromatic_search(&k3, StateFamily::Fractional, 3).unwrap();
        assert_eq!((b.n, b.k), (3, 1));
    }

    #[test]
    fn rational_search_errors() {
        assert!(rational_chromatic_search(&Graph::looped_point(), StateFamily::Circular, 4).is_err());
        let err = rational_chromatic_search(&Graph::complete(4), StateFamily::Circular, 3).unwrap_err();
        assert!(err.to_string().contains("no witness under cap"));
    }

    #[test]
    fn winding_examples() {
        let k3 = Graph::complete(3);
        let c5 = Graph::cycle(5);
        let c6 = Graph::cycle(6);
        let c3 = Graph::cycle(3);
        let w = |c: &Graph, m: Vec<usize>| winding_number(&GraphHom::new(c, &k3, m).unwrap());
        assert_eq!(w(&c5, vec![0, 1, 2, 0, 1]).unwrap(), 1);
        assert_eq!(w(&c6, vec![0, 1, 0, 1, 0, 2]).unwrap(), 0);
        assert_eq!(w(&c3, vec![0, 1, 2]).unwrap(), 1);
        assert_eq!(w(&c3, vec![0, 2, 1]).unwrap(), -1);
    }

    #[test]
    fn winding_rejects_wrong_shapes() {
        let k3 = Graph::complete(3);
        let p = Graph::path(3);
        assert!(winding_number(&GraphHom::new(&p, &k3, vec![0, 1, 0]).unwrap()).is_err());
        let k4 = Graph::complete(4);
        let c3 = Graph::cycle(3);
        assert!(winding_number(&GraphHom::new(&c3, &k4, vec![0, 1, 2]).unwrap()).is_err());
    }

    #[test]
    fn winding_rotation_and_reflection() {
        let k3 = Graph::complete(3);
        for m in [5usize, 7, 9] {
            let c = Graph::cycle(m);
            for h in enumerate_homs(&c, &k3, None).maps {
                let base = winding_number(&GraphHom::new(&c, &k3, h.clone()).unwrap()).unwrap();
                assert_eq!(base.rem_euclid(2), 1, "odd cycles wind an odd number of times");
                assert!(base.unsigned_abs() as usize * 3 <= m);
                for r in 1..m {
                    let rot: Vec<usize> = (0..m).map(|i| h[(i + r) % m]).collect();
                    let w = winding_number(&GraphHom::new(&c, &k3, rot).unwrap()).unwrap();
                    assert_eq!(w, base);
                }
                let refl: Vec<usize> = (0..m).map(|i| h[(m - i) % m]).collect();
                let w = winding_number(&GraphHom::new(&c, &k3, refl).unwrap()).unwrap();
                assert_eq!(w, -base);
            }
        }
    }
}
