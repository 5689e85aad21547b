use super::Graph;
use crate::error::{Error, Result};

/// Builds a graph from a `name:params` spec such as `kneser:5,2`, `cycle:7`,
/// `complete:4`, `path:5`, `circular:8,3` or `stable-kneser:6,2`.
///
/// Set-valued vertices (Kneser families) are the `k`-subsets of `{1..n}` in
/// lexicographic order; their labels spell out the subset.
pub fn make_named_graph(spec: &str) -> Result<Graph> {
    let spec = spec.trim();
    let (name, params) = match spec.split_once(':') {
        Some((name, rest)) => (name, parse_params(rest)?),
        None => (spec, Vec::new()),
    };
    let want = |count: usize| -> Result<()> {
        if params.len() == count {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "`{name}` takes {count} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match name {
        "complete" => {
            want(1)?;
            require(params[0] >= 1, "complete:n requires n >= 1")?;
            Ok(Graph::complete(params[0]))
        }
        "cycle" => {
            want(1)?;
            require(params[0] >= 3, "cycle:m requires m >= 3")?;
            Ok(Graph::cycle(params[0]))
        }
        "path" => {
            want(1)?;
            require(params[0] >= 1, "path:n requires n >= 1")?;
            Ok(Graph::path(params[0]))
        }
        "empty" => {
            want(1)?;
            Ok(Graph::empty(params[0]))
        }
        "loops" => {
            want(1)?;
            Ok(Graph::from_fn(params[0], |u, v| u == v))
        }
        "star" => {
            want(1)?;
            require(params[0] >= 1, "star:n requires n >= 1")?;
            Ok(Graph::from_fn(params[0] + 1, |u, v| u == 0 && v > 0))
        }
        "wheel" => {
            want(1)?;
            let m = params[0];
            require(m >= 3, "wheel:m requires m >= 3")?;
            Ok(Graph::from_fn(m + 1, |u, v| {
                (u == m && v != m)
                    || (v == m && u != m)
                    || (u < m && v < m && ((v + m - u) % m == 1 || (u + m - v) % m == 1))
            }))
        }
        "complete-bipartite" => {
            want(2)?;
            let (a, b) = (params[0], params[1]);
            Ok(Graph::from_fn(a + b, |u, v| (u < a) != (v < a)))
        }
        "kneser" => {
            want(2)?;
            let (n, k) = (params[0], params[1]);
            require(k >= 1 && n >= 2 * k, "kneser:n,k requires n >= 2k >= 2")?;
            Ok(kneser_like(n, k, |_| true))
        }
        "stable-kneser" => {
            want(2)?;
            let (n, k) = (params[0], params[1]);
            require(k >= 1 && n >= 2 * k, "stable-kneser:n,k requires n >= 2k >= 2")?;
            Ok(kneser_like(n, k, |s| is_stable(s, n)))
        }
        "circular" => {
            want(2)?;
            let (n, k) = (params[0], params[1]);
            require(k >= 1 && n >= 2 * k, "circular:n,k requires n >= 2k >= 2")?;
            Ok(circular(n, k))
        }
        "petersen" => {
            want(0)?;
            Ok(kneser_like(5, 2, |_| true))
        }
        "grotzsch" => {
            want(0)?;
            Ok(mycielski(&Graph::cycle(5)))
        }
        other => Err(Error::Parameter(format!("unknown graph family `{other}`"))),
    }
}

fn parse_params(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parameter(format!("bad integer parameter `{p}`")))
        })
        .collect()
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Parameter(msg.to_string()))
    }
}

/// `R_{n,k}`: `x ~ y` iff `k <= |x - y| <= n - k`.
pub(crate) fn circular(n: usize, k: usize) -> Graph {
    Graph::from_fn(n, |u, v| {
        let d = u.abs_diff(v);
        k <= d && d <= n - k
    })
}

/// `k`-subsets of `{1..n}` as sorted vectors, lexicographic order.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

fn is_stable(s: &[usize], n: usize) -> bool {
    s.windows(2).all(|w| w[1] != w[0] + 1) && !(s.contains(&1) && s.contains(&n) && n > 1)
}

fn kneser_like(n: usize, k: usize, keep: impl Fn(&[usize]) -> bool) -> Graph {
    let verts: Vec<Vec<usize>> = k_subsets(n, k).into_iter().filter(|s| keep(s)).collect();
    let g = Graph::from_fn(verts.len(), |a, b| verts[a].iter().all(|x| !verts[b].contains(x)));
    let labels = verts
        .iter()
        .map(|s| {
            let inner: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect();
    g.with_labels(labels)
}

/// Mycielski construction: vertices `V`, shadows `V'`, apex `w`.
fn mycielski(g: &Graph) -> Graph {
    let n = g.vertex_count();
    Graph::from_fn(2 * n + 1, |u, v| {
        let (u, v) = (u.min(v), u.max(v));
        if v == 2 * n {
            u >= n && u < 2 * n
        } else if v < n {
            g.has_edge(u, v)
        } else if u < n {
            g.has_edge(u, v - n)
        } else {
            false
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_four() {
        let g = make_named_graph("complete:4").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert!(!g.has_loops());
    }

    #[test]
    fn petersen_from_kneser() {
        let g = make_named_graph("kneser:5,2").unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
        assert_eq!(g.label(0), "{1,2}");
        assert_eq!(g.label(9), "{4,5}");
        assert_eq!(g, make_named_graph("petersen").unwrap());
    }

    #[test]
    fn circular_odd_is_cycle() {
        let g = make_named_graph("circular:7,3").unwrap();
        assert_eq!(g.edge_count(), 7);
        assert!((0..7).all(|v| g.degree(v) == 2));
        // connected single cycle: walk it
        let mut prev = 0;
        let mut cur = g.neighbors(0)[0];
        let mut steps = 1;
        while cur != 0 {
            let next = *g.neighbors(cur).iter().find(|&&w| w != prev).unwrap();
            prev = cur;
            cur = next;
            steps += 1;
        }
        assert_eq!(steps, 7);
    }

    #[test]
    fn circular_even_is_matching() {
        let g = make_named_graph("circular:8,4").unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!((0..8).all(|v| g.degree(v) == 1));
        assert_eq!(make_named_graph("circular:5,1").unwrap(), Graph::complete(5));
    }

    #[test]
    fn stable_kneser_sizes() {
        // stable 2-subsets of [6]: 15 - 6 cyclically consecutive pairs
        let g = make_named_graph("stable-kneser:6,2").unwrap();
        assert_eq!(g.vertex_count(), 9);
        // K_{2k+1,k}^stab is an odd cycle... for k=2: C5
        let c = make_named_graph("stable-kneser:5,2").unwrap();
        assert_eq!(c.vertex_count(), 5);
        assert!((0..5).all(|v| c.degree(v) == 2));
    }

    #[test]
    fn parameter_errors_name_the_constraint() {
        for bad in [
            "kneser:3,2",
            "cycle:2",
            "complete:0",
            "circular:3,2",
            "nosuch:1",
            "cycle:x",
        ] {
            match make_named_graph(bad) {
                Err(Error::Parameter(msg)) => assert!(!msg.is_empty()),
                other => panic!("{bad}: {other:?}"),
            }
        }
        let Err(Error::Parameter(msg)) = make_named_graph("kneser:3,2") else {
            unreachable!()
        };
        assert!(msg.contains("n >= 2k"));
    }

    #[test]
    fn grotzsch_shape() {
        let g = make_named_graph("grotzsch").unwrap();
        assert_eq!(g.vertex_count(), 11);
        assert_eq!(g.edge_count(), 20);
    }
}
