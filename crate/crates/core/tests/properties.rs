//! Randomized checks of the structural laws across modules.

use homcolor_core::algebra::{rank_gf2, smith_normal_form, solve_gf2, BitVec, IntSparseMatrix, SparseBitMatrix};
use homcolor_core::complex::{
    barycentric, build_hom, build_hom_plus, build_independence, build_neighborhood, skeleton_determination_check,
    ComplexKind, ProdComplex, SimplicialComplex,
};
use homcolor_core::graph::{
    apex_plus, count_homs, direct_product, disjoint_union, enumerate_homs, fold_reduce, power_graph, strong_complement,
    winding_number, GraphHom,
};
use homcolor_core::homology::{
    betti_gf2, chain_complex_gf2, euler_characteristic, integer_boundary, integer_homology, BettiVector,
};
use homcolor_core::Graph;
use num_traits::Zero;
use proptest::prelude::*;

const BUDGET: usize = 2_000_000;

fn graph_strategy(max_n: usize, loops: bool) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(any::<bool>(), n * (n + 1) / 2).prop_map(move |bits| {
            let mut k = 0;
            let mut adj = vec![vec![false; n]; n];
            for u in 0..n {
                for v in u..n {
                    adj[u][v] = bits[k] && (loops || u != v);
                    adj[v][u] = adj[u][v];
                    k += 1;
                }
            }
            Graph::from_fn(n, |u, v| adj[u][v])
        })
    })
}

fn tree_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<prop::sample::Index>(), n - 1).prop_map(move |parents| {
            let edges: Vec<(usize, usize)> = parents
                .iter()
                .enumerate()
                .map(|(i, p)| (i + 1, p.index(i + 1)))
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn symmetric(g: &Graph) -> bool {
    let n = g.vertex_count();
    (0..n).all(|u| (0..n).all(|v| g.has_edge(u, v) == g.has_edge(v, u)))
}

fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn betti(x: &ProdComplex) -> BettiVector {
    betti_gf2(x).unwrap()
}

fn sphere(d: usize) -> Vec<usize> {
    let mut v = vec![0; d + 1];
    v[0] += 1;
    v[d] += 1;
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructions_stay_symmetric(g in graph_strategy(5, true), h in graph_strategy(3, true)) {
        prop_assert!(symmetric(&disjoint_union(&g, &h)));
        prop_assert!(symmetric(&direct_product(&g, &h)));
        prop_assert!(symmetric(&strong_complement(&g)));
        prop_assert!(symmetric(&apex_plus(&g)));
        prop_assert!(symmetric(&power_graph(&g, &h, 10_000).unwrap()));
    }

    #[test]
    fn coproduct_counts_multiply(g in graph_strategy(4, false), h in graph_strategy(3, false), k in 1usize..4) {
        let k = Graph::complete(k);
        prop_assert_eq!(count_homs(&disjoint_union(&g, &h), &k), count_homs(&g, &k) * count_homs(&h, &k));
    }

    #[test]
    fn adjunction(g in graph_strategy(3, false), h in graph_strategy(2, true), k in graph_strategy(3, true)) {
        let kh = power_graph(&k, &h, 10_000).unwrap();
        prop_assert_eq!(count_homs(&direct_product(&g, &h), &k), count_homs(&g, &kh));
    }

    #[test]
    fn fold_replays(g in graph_strategy(7, false)) {
        let trace = fold_reduce(&g);
        prop_assert_eq!(trace.replay(&g).unwrap(), trace.result.clone());
    }

    #[test]
    fn fold_preserves_betti_in_both_arguments(g in graph_strategy(5, false)) {
        let r = fold_reduce(&g).result;
        let k3 = Graph::complete(3);
        prop_assert!(betti(&build_hom(&g, &k3, BUDGET).unwrap())
            .same_as(&betti(&build_hom(&r, &k3, BUDGET).unwrap()).0));
        let h = Graph::complete(2);
        prop_assert!(betti(&build_hom(&h, &g, BUDGET).unwrap())
            .same_as(&betti(&build_hom(&h, &r, BUDGET).unwrap()).0));
    }

    #[test]
    fn winding_symmetries(m in 3usize..10, pick in any::<prop::sample::Index>(), shift in 0usize..10) {
        let c = Graph::cycle(m);
        let k3 = Graph::complete(3);
        let homs = enumerate_homs(&c, &k3, None).maps;
        prop_assume!(!homs.is_empty());
        let f = pick.get(&homs).clone();
        let w = winding_number(&GraphHom::new(&c, &k3, f.clone()).unwrap()).unwrap();
        let rotated: Vec<usize> = (0..m).map(|x| f[(x + shift) % m]).collect();
        let reflected: Vec<usize> = (0..m).map(|x| f[(m - x) % m]).collect();
        prop_assert_eq!(winding_number(&GraphHom::new(&c, &k3, rotated).unwrap()).unwrap(), w);
        prop_assert_eq!(winding_number(&GraphHom::new(&c, &k3, reflected).unwrap()).unwrap(), -w);
    }

    #[test]
    fn hom_complex_structure(t in graph_strategy(4, false), g in graph_strategy(4, true)) {
        let x = build_hom(&t, &g, BUDGET).unwrap();
        prop_assert!(skeleton_determination_check(&x));
        for id in 0..x.len() {
            for f in x.faces(id) {
                prop_assert!(f < id && x.dim_of(f) + 1 == x.dim_of(id));
            }
        }
        let mut zero: Vec<Vec<usize>> = x.ids_of_dim(0).map(|id| x.vertex_map(id)).collect();
        let mut homs = enumerate_homs(&t, &g, None).maps;
        zero.sort();
        homs.sort();
        prop_assert_eq!(zero, homs);
        let plus = build_hom_plus(&t, &g, BUDGET).unwrap();
        prop_assert!(skeleton_determination_check(&plus));
        prop_assert_eq!(plus.kind(), ComplexKind::HomPlus);
    }

    #[test]
    fn subdivision_keeps_euler_and_betti(t in graph_strategy(3, false), g in graph_strategy(3, true)) {
        let x = build_hom(&t, &g, BUDGET).unwrap();
        prop_assume!(x.len() < 2_000);
        let bd = barycentric(&x, BUDGET).unwrap();
        prop_assert_eq!(euler_characteristic(&x), euler_characteristic(&bd));
        prop_assert!(betti(&x).same_as(&betti_gf2(&bd).unwrap().0));
        let chi: i64 = integer_homology(&bd).unwrap().iter().enumerate()
            .map(|(d, h)| if d % 2 == 0 { h.rank as i64 } else { -(h.rank as i64) }).sum();
        prop_assert_eq!(chi, betti_gf2(&bd).unwrap().euler());
    }

    #[test]
    fn boundaries_square_to_zero(facets in proptest::collection::vec(proptest::collection::btree_set(0usize..7, 1..5), 1..7)) {
        let facets: Vec<Vec<usize>> = facets.into_iter().map(|s| s.into_iter().collect()).collect();
        let y = SimplicialComplex::from_facets(7, &facets);
        prop_assert!(chain_complex_gf2(&y).is_ok());
        for d in 2..=y.dim().max(0) as usize {
            let a = integer_boundary(&y, d).unwrap();
            let b = integer_boundary(&y, d - 1).unwrap();
            for i in 0..a.rows() {
                for k in 0..b.cols() {
                    let s: num_bigint::BigInt = (0..a.cols()).map(|j| a.get(i, j) * b.get(j, k)).sum();
                    prop_assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn rank_and_solve(rows in 1usize..30, cols in 1usize..30, bits in proptest::collection::vec(any::<bool>(), 900), x in proptest::collection::vec(any::<bool>(), 30)) {
        let dense: Vec<BitVec> = (0..rows)
            .map(|i| BitVec::from_bools(&bits[i * 30..i * 30 + cols]))
            .collect();
        let m = SparseBitMatrix::from_dense(&dense, cols);
        prop_assert_eq!(rank_gf2(&m), rank_gf2(&m.transpose()));
        let b = m.mul_vec(&BitVec::from_bools(&x[..cols])).unwrap();
        let sol = solve_gf2(&m, &b).unwrap().expect("planted system is consistent");
        prop_assert_eq!(m.mul_vec(&sol).unwrap(), b);
    }

    #[test]
    fn snf_chain(entries in proptest::collection::vec(-6i64..7, 16)) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(|r| r.to_vec()).collect();
        let f = smith_normal_form(&IntSparseMatrix::from_dense(&rows));
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn coproduct_betti_convolves(g in graph_strategy(3, false), h in graph_strategy(3, false)) {
        let k = Graph::complete(3);
        let a = betti(&build_hom(&g, &k, BUDGET).unwrap());
        let b = betti(&build_hom(&h, &k, BUDGET).unwrap());
        let ab = betti(&build_hom(&disjoint_union(&g, &h), &k, BUDGET).unwrap());
        prop_assert!(ab.same_as(&convolve(&a.0, &b.0)));
    }

    #[test]
    fn trees_give_spheres(t in tree_strategy(5), n in 2usize..5) {
        let x = build_hom(&t, &Graph::complete(n), BUDGET).unwrap();
        prop_assert!(betti(&x).same_as(&sphere(n - 2)));
    }

    #[test]
    fn neighborhood_agrees(g in graph_strategy(6, false)) {
        let a = betti_gf2(&build_neighborhood(&g)).unwrap();
        let b = betti(&build_hom(&Graph::complete(2), &g, BUDGET).unwrap());
        prop_assert!(a.same_as(&b.0), "{} vs {}", a, b);
    }
}

/// Homotopy type of the independence complex of `C_t` as a wedge of equal
/// spheres: `(count, dim)`.
fn ind_cycle(t: usize) -> (usize, usize) {
    match t % 3 {
        0 => (2, t / 3 - 1),
        1 => (1, t / 3 - 1),
        _ => (1, t / 3),
    }
}

#[test]
fn independence_of_cycles() {
    for t in 4..=9 {
        let (count, d) = ind_cycle(t);
        let mut want = vec![0; d + 1];
        want[0] += 1;
        want[d] += count;
        if d == 0 {
            want[0] = count + 1;
        }
        assert!(
            betti_gf2(&build_independence(&Graph::cycle(t))).unwrap().same_as(&want),
            "t={t}"
        );
    }
}

#[test]
fn hom_plus_of_cycles_is_a_join() {
    for (t, n) in [(4, 2), (5, 2), (6, 2), (7, 2), (5, 3)] {
        let (count, d) = ind_cycle(t);
        let top = n * (d + 1) - 1;
        let mut want = vec![0; top + 1];
        want[0] = 1;
        want[top] += count.pow(n as u32);
        let x = build_hom_plus(&Graph::cycle(t), &Graph::complete(n), BUDGET).unwrap();
        assert!(betti(&x).same_as(&want), "t={t} n={n} {}", betti(&x));
    }
}

#[test]
fn hom_plus_is_an_independence_complex() {
    // Hom₊(T,G) ≅ Ind(T × ∁G): compare face counts
    let t = Graph::cycle(5);
    let g = Graph::complete(3);
    let x = build_hom_plus(&t, &g, BUDGET).unwrap();
    let y = build_independence(&direct_product(&t, &strong_complement(&g)));
    assert_eq!(x.f_vector(), y.f_vector());
}
