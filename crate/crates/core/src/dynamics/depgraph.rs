use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use super::FiniteDynamicalSystem;

/// A strongly connected component of the dependency graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongComponent {
    /// 0-based variable indices, ascending.
    pub vertices: Vec<usize>,
    /// gcd of the loop lengths; `None` for a single vertex without a self-loop.
    pub loop_number: Option<u64>,
}

impl StrongComponent {
    pub fn is_trivial(&self) -> bool {
        self.loop_number.is_none()
    }
}

/// Edge `x_i -> x_j` iff `x_i` occurs in the reduced form of `f_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    components: Vec<StrongComponent>,
}

impl DependencyGraph {
    /// Build from explicit edges over `n` vertices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> DependencyGraph {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            adjacency[u].push(v);
        }
        for a in &mut adjacency {
            a.sort_unstable();
            a.dedup();
        }
        let components = strong_components(&adjacency);
        DependencyGraph {
            n,
            adjacency,
            components,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    /// Strongly connected components, ordered by smallest vertex.
    pub fn components(&self) -> &[StrongComponent] {
        &self.components
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dependency {\n");
        for u in 0..self.n {
            writeln!(s, "  x{};", u + 1).expect("write to String");
        }
        for (u, v) in self.edges() {
            writeln!(s, "  x{} -> x{};", u + 1, v + 1).expect("write to String");
        }
        for (i, c) in self.components.iter().enumerate() {
            let names: Vec<String> = c.vertices.iter().map(|v| format!("x{}", v + 1)).collect();
            let ln = c
                .loop_number
                .map_or_else(|| "none".to_string(), |l| l.to_string());
            writeln!(s, "  // scc {i}: {{{}}} loop number {ln}", names.join(", "))
                .expect("write to String");
        }
        s.push_str("}\n");
        s
    }
}

pub fn dependency_graph(fds: &FiniteDynamicalSystem) -> DependencyGraph {
    let mut edges = Vec::new();
    for (j, f) in fds.coordinates().iter().enumerate() {
        for i in f.variables() {
            edges.push((i, j));
        }
    }
    DependencyGraph::from_edges(fds.nvars(), &edges)
}

/// Iterative Tarjan, then loop numbers from BFS layers inside each component.
fn strong_components(adj: &[Vec<usize>]) -> Vec<StrongComponent> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut comp_id = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, position in its adjacency list)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let u = top.0;
            if top.1 < adj[u].len() {
                let v = adj[u][top.1];
                top.1 += 1;
                if index[v] == usize::MAX {
                    index[v] = next;
                    low[v] = next;
                    next += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    let mut group = Vec::new();
                    loop {
                        let w = stack.pop().expect("stack holds the component");
                        on_stack[w] = false;
                        comp_id[w] = groups.len();
                        group.push(w);
                        if w == u {
                            break;
                        }
                    }
                    group.sort_unstable();
                    groups.push(group);
                }
            }
        }
    }

    let mut out: Vec<StrongComponent> = groups
        .iter()
        .enumerate()
        .map(|(id, vs)| StrongComponent {
            vertices: vs.clone(),
            loop_number: loop_number(adj, vs, &comp_id, id),
        })
        .collect();
    out.sort_by_key(|c| c.vertices[0]);
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn loop_number(adj: &[Vec<usize>], vertices: &[usize], comp_id: &[usize], id: usize) -> Option<u64> {
    let root = vertices[0];
    let mut level = vec![usize::MAX; adj.len()];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if comp_id[v] == id && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0u64;
    let mut any_edge = false;
    for &u in vertices {
        for &v in &adj[u] {
            if comp_id[v] == id {
                any_edge = true;
                g = gcd(g, (level[u] as i64 + 1 - level[v] as i64).unsigned_abs());
            }
        }
    }
    any_edge.then_some(g)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{example1, system};
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn example_one_edges() {
        let g = dependency_graph(&example1());
        assert_eq!(g.edges(), vec![(0, 0), (1, 0), (1, 1)]);
        let dot = g.to_dot();
        assert!(dot.contains("x2 -> x1;"));
    }

    #[test]
    fn swap_has_loop_number_two() {
        let g = dependency_graph(&system(2, &["x2", "x1"]));
        assert!(g.is_strongly_connected());
        assert_eq!(g.components()[0].loop_number, Some(2));
    }

    #[test]
    fn self_loop_gives_one() {
        let g = dependency_graph(&system(2, &["x1*x2", "x1"]));
        assert!(g.is_strongly_connected());
        assert_eq!(g.components()[0].loop_number, Some(1));
    }

    #[test]
    fn trivial_components_have_no_loop_number() {
        let g = dependency_graph(&system(2, &["x2", "1"]));
        assert_eq!(g.components().len(), 2);
        assert!(g.components().iter().all(StrongComponent::is_trivial));
    }

    /// gcd of simple cycle lengths, by exhaustive DFS over simple paths.
    fn brute_force_loop_number(adj: &[Vec<usize>], vertices: &[usize]) -> Option<u64> {
        fn dfs(adj: &[Vec<usize>], inside: &[bool], start: usize, u: usize, len: u64, seen: &mut Vec<bool>, g: &mut u64, any: &mut bool) {
            for &v in &adj[u] {
                if !inside[v] {
                    continue;
                }
                if v == start {
                    *g = gcd(*g, len + 1);
                    *any = true;
                } else if !seen[v] && v > start {
                    seen[v] = true;
                    dfs(adj, inside, start, v, len + 1, seen, g, any);
                    seen[v] = false;
                }
            }
        }
        let mut inside = vec![false; adj.len()];
        for &v in vertices {
            inside[v] = true;
        }
        let mut g = 0;
        let mut any = false;
        for &s in vertices {
            let mut seen = vec![false; adj.len()];
            seen[s] = true;
            dfs(adj, &inside, s, s, 0, &mut seen, &mut g, &mut any);
        }
        any.then_some(g)
    }

    proptest! {
        #[test]
        fn layer_gcd_matches_cycle_enumeration(n in 1usize..=6, bits in prop::collection::vec(any::<bool>(), 36)) {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| bits[u * 6 + v])
                .collect();
            let g = DependencyGraph::from_edges(n, &edges);
            let covered: usize = g.components().iter().map(|c| c.vertices.len()).sum();
            prop_assert_eq!(covered, n);
            for c in g.components() {
                prop_assert_eq!(c.loop_number, brute_force_loop_number(&g.adjacency, &c.vertices));
            }
        }
    }
}
