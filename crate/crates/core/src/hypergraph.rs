//! Uniform hypergraphs with a canonical edge encoding, the named families we
//! certify, and the structural predicates the certificates rely on.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// An `r`-uniform hypergraph on vertices `0..n`.
///
/// Edges are strictly increasing vertex lists and the edge list is sorted
/// lexicographically without duplicates. Isolated vertices are allowed, so a
/// subgraph keeps the vertex set of its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph")]
pub struct Hypergraph {
    r: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawHypergraph {
    r: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = crate::Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        let h = Hypergraph::new(raw.r, raw.n, raw.edges.clone())?;
        if h.edges != raw.edges {
            return invalid("edges are not in canonical order");
        }
        Ok(h)
    }
}

/// Result of a shortest Berge cycle search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthReport {
    /// Number of edges in a shortest Berge cycle.
    pub girth: usize,
    /// Number of shortest Berge cycles, as unordered cycles.
    pub shortest_cycle_count: u64,
    /// False if some shortest Berge cycle is not a loose cycle; the two
    /// notions coincide for every family shipped here.
    pub all_shortest_loose: bool,
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge and the edge list.
    pub fn new(r: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if r < 2 {
            return invalid(format!("uniformity must be at least 2, got {r}"));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.len() != r {
                return invalid(format!("edge {e:?} does not have {r} vertices"));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return invalid(format!("edge {e:?} repeats a vertex"));
            }
            if e[r - 1] >= n {
                return invalid(format!("edge {e:?} uses a vertex outside 0..{n}"));
            }
            canon.push(e);
        }
        canon.sort();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return invalid("duplicate edge");
        }
        Ok(Hypergraph { r, n, edges: canon })
    }

    pub fn empty(r: usize, n: usize) -> Result<Self> {
        Self::new(r, n, Vec::new())
    }

    pub fn single_edge(r: usize) -> Result<Self> {
        Self::new(r, r, vec![(0..r).collect()])
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &[usize] {
        &self.edges[i]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypergraph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::Error::InvalidInput(e.to_string()))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }

    /// For each vertex, the indices of the edges containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    pub fn has_degree_one_vertex(&self) -> bool {
        self.degrees().contains(&1)
    }

    /// Subgraph on the same vertex set keeping the edges whose bit is set.
    pub fn edge_subgraph(&self, mask: u64) -> Hypergraph {
        assert!(self.edges.len() <= 64);
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.clone())
            .collect();
        Hypergraph {
            r: self.r,
            n: self.n,
            edges,
        }
    }

    pub fn edge_subgraph_indices(&self, idx: &[usize]) -> Hypergraph {
        let mut edges: Vec<_> = idx.iter().map(|&i| self.edges[i].clone()).collect();
        edges.sort();
        edges.dedup();
        Hypergraph {
            r: self.r,
            n: self.n,
            edges,
        }
    }

    /// Drops isolated vertices and relabels the rest densely, preserving order.
    pub fn without_isolated(&self) -> Hypergraph {
        let deg = self.degrees();
        let mut relabel = vec![usize::MAX; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if deg[v] > 0 {
                relabel[v] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| relabel[v]).collect())
            .collect();
        Hypergraph::new(self.r, next, edges).expect("relabelling preserves validity")
    }

    pub fn remove_edge(&self, index: usize) -> Result<Hypergraph> {
        if index >= self.edges.len() {
            return invalid(format!(
                "edge index {index} out of range for {} edges",
                self.edges.len()
            ));
        }
        let mut edges = self.edges.clone();
        edges.remove(index);
        Ok(Hypergraph {
            r: self.r,
            n: self.n,
            edges,
        })
    }

    pub fn add_edge(&self, edge: Vec<usize>) -> Result<Hypergraph> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Hypergraph::new(self.r, self.n, edges)
    }

    pub fn disjoint_union(parts: &[Hypergraph]) -> Result<Hypergraph> {
        let Some(first) = parts.first() else {
            return invalid("disjoint union of no parts");
        };
        let r = first.r;
        let mut n = 0;
        let mut edges = Vec::new();
        for p in parts {
            if p.r != r {
                return invalid(format!("mixed uniformity {} and {}", r, p.r));
            }
            edges.extend(p.edges.iter().map(|e| e.iter().map(|v| v + n).collect()));
            n += p.n;
        }
        Hypergraph::new(r, n, edges)
    }

    /// Bipartite incidence graph: vertices `0..n` are the vertices of `self`,
    /// `n..n+e` its edges.
    pub fn levi_graph(&self) -> Hypergraph {
        let n = self.n;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(i, e)| e.iter().map(move |&v| vec![v, n + i]))
            .collect();
        Hypergraph::new(2, n + self.edges.len(), edges).expect("levi graph is simple")
    }

    /// Replaces every edge by all of its `s`-subsets and merges duplicates.
    pub fn skeleton(&self, s: usize) -> Result<Hypergraph> {
        if s < 2 || s > self.r {
            return invalid(format!("skeleton size {s} outside 2..={}", self.r));
        }
        let mut set = BTreeSet::new();
        for e in &self.edges {
            for sub in k_subsets(e, s) {
                set.insert(sub);
            }
        }
        Hypergraph::new(s, self.n, set.into_iter().collect())
    }

    pub fn is_linear(&self) -> bool {
        self.edges.iter().enumerate().all(|(i, a)| {
            self.edges[i + 1..]
                .iter()
                .all(|b| a.iter().filter(|v| b.binary_search(v).is_ok()).count() <= 1)
        })
    }

    /// Shortest Berge cycle of a linear hypergraph, found as a shortest cycle
    /// in the Levi graph (a Berge cycle with `g` edges is a `2g`-cycle there).
    pub fn berge_girth(&self) -> Result<GirthReport> {
        if !self.is_linear() {
            return invalid("berge girth requires a linear hypergraph");
        }
        let levi = self.levi_graph();
        let adj = levi.adjacency();
        let Some(len) = shortest_cycle_length(&adj) else {
            return invalid("hypergraph has no cycle");
        };
        let cycles = enumerate_cycles(&adj, len);
        let n = self.n;
        let all_loose = cycles.iter().all(|c| {
            let edge_ids: Vec<usize> = c.iter().filter(|&&x| x >= n).map(|x| x - n).collect();
            is_loose_cycle(self, &edge_ids)
        });
        Ok(GirthReport {
            girth: len / 2,
            shortest_cycle_count: cycles.len() as u64,
            all_shortest_loose: all_loose,
        })
    }

    /// 2-connectivity: of the graph itself when `r = 2`, of the Levi graph
    /// otherwise.
    pub fn is_two_connected(&self) -> bool {
        if self.r == 2 {
            is_biconnected(&self.adjacency())
        } else {
            is_biconnected(&self.levi_graph().adjacency())
        }
    }

    /// Adjacency lists of a 2-graph; for `r > 2` two vertices are adjacent
    /// when they share an edge.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![BTreeSet::new(); self.n];
        for e in &self.edges {
            for &a in e {
                for &b in e {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Brute-force isomorphism test with degree pruning; meant for small
    /// fixtures (at most 12 vertices).
    pub fn is_isomorphic(&self, other: &Hypergraph) -> Option<bool> {
        if self.n > 12 || other.n > 12 {
            return None;
        }
        if self.r != other.r || self.n != other.n || self.edges.len() != other.edges.len() {
            return Some(false);
        }
        let da = self.degrees();
        let db = other.degrees();
        let mut sa = da.clone();
        let mut sb = db.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return Some(false);
        }
        let target: HashSet<Vec<usize>> = other.edges.iter().cloned().collect();
        let inc = self.incidence();
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        Some(iso_extend(
            self, &inc, &da, &db, &target, 0, &mut map, &mut used,
        ))
    }
}

#[allow(clippy::too_many_arguments)]
fn iso_extend(
    a: &Hypergraph,
    inc: &[Vec<usize>],
    da: &[usize],
    db: &[usize],
    target: &HashSet<Vec<usize>>,
    v: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if v == a.n {
        return true;
    }
    for w in 0..a.n {
        if used[w] || db[w] != da[v] {
            continue;
        }
        map[v] = w;
        used[w] = true;
        let ok = inc[v].iter().all(|&ei| {
            let e = &a.edges[ei];
            if e.iter().any(|&x| x > v) {
                return true;
            }
            let mut img: Vec<usize> = e.iter().map(|&x| map[x]).collect();
            img.sort_unstable();
            target.contains(&img)
        });
        if ok && iso_extend(a, inc, da, db, target, v + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

pub(crate) fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

fn is_loose_cycle(h: &Hypergraph, edge_ids: &[usize]) -> bool {
    let g = edge_ids.len();
    let shared = |i: usize, j: usize| {
        let (a, b) = (h.edge(edge_ids[i]), h.edge(edge_ids[j]));
        a.iter().filter(|v| b.binary_search(v).is_ok()).count()
    };
    (0..g).all(|i| {
        (i + 1..g).all(|j| {
            let consecutive = j == i + 1 || (i == 0 && j == g - 1);
            let s = shared(i, j);
            if consecutive {
                s == 1
            } else {
                s == 0
            }
        })
    })
}

fn shortest_cycle_length(adj: &[Vec<usize>]) -> Option<usize> {
    let n = adj.len();
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|b| len < b) {
                        best = Some(len);
                    }
                }
            }
        }
    }
    best
}

/// All simple cycles of exactly `len` vertices, each reported once as the
/// vertex sequence starting at its smallest vertex.
fn enumerate_cycles(adj: &[Vec<usize>], len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = adj.len();
    let mut path = Vec::with_capacity(len);
    let mut on_path = vec![false; n];
    fn dfs(
        adj: &[Vec<usize>],
        len: usize,
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let u = *path.last().unwrap();
        for &w in &adj[u] {
            if w == start && path.len() == len {
                // each cycle is seen in both directions; keep one
                if path[1] < path[len - 1] {
                    out.push(path.clone());
                }
            } else if w > start && !on_path[w] && path.len() < len {
                on_path[w] = true;
                path.push(w);
                dfs(adj, len, start, path, on_path, out);
                path.pop();
                on_path[w] = false;
            }
        }
    }
    for s in 0..n {
        path.push(s);
        on_path[s] = true;
        dfs(adj, len, s, &mut path, &mut on_path, &mut out);
        on_path[s] = false;
        path.pop();
    }
    out
}

fn is_biconnected(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    if n < 3 {
        return false;
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut has_cut = false;
    fn visit(
        u: usize,
        parent: usize,
        adj: &[Vec<usize>],
        disc: &mut [usize],
        low: &mut [usize],
        timer: &mut usize,
        has_cut: &mut bool,
    ) {
        disc[u] = *timer;
        low[u] = *timer;
        *timer += 1;
        let mut children = 0;
        for &w in &adj[u] {
            if disc[w] == usize::MAX {
                children += 1;
                visit(w, u, adj, disc, low, timer, has_cut);
                low[u] = low[u].min(low[w]);
                if parent != usize::MAX && low[w] >= disc[u] {
                    *has_cut = true;
                }
            } else if w != parent {
                low[u] = low[u].min(disc[w]);
            }
        }
        if parent == usize::MAX && children > 1 {
            *has_cut = true;
        }
    }
    visit(
        0,
        usize::MAX,
        adj,
        &mut disc,
        &mut low,
        &mut timer,
        &mut has_cut,
    );
    timer == n && !has_cut
}

/// Tight cycle `C_ell^(r)`: edge `i` is `{i, ..., i+r-1} mod ell`.
pub fn tight_cycle(ell: usize, r: usize) -> Result<Hypergraph> {
    if r < 2 {
        return invalid("tight cycle needs r >= 2");
    }
    if ell <= r {
        return invalid(format!("tight cycle needs ell > r, got ell={ell}, r={r}"));
    }
    Hypergraph::new(r, ell, tight_cycle_edges(ell, r))
}

pub(crate) fn tight_cycle_edges(ell: usize, r: usize) -> Vec<Vec<usize>> {
    (0..ell)
        .map(|i| (0..r).map(|j| (i + j) % ell).collect())
        .collect()
}

/// Tight cycle with the edge starting at vertex `start` removed. Because the
/// hypergraph stores edges canonically, the removed window is addressed by its
/// starting vertex rather than by its position in the sorted list.
pub fn tight_cycle_minus_window(ell: usize, r: usize, start: usize) -> Result<Hypergraph> {
    let c = tight_cycle(ell, r)?;
    if start >= ell {
        return invalid(format!("window start {start} out of range"));
    }
    let mut win: Vec<usize> = (0..r).map(|j| (start + j) % ell).collect();
    win.sort_unstable();
    let idx = c
        .edges
        .iter()
        .position(|e| *e == win)
        .expect("window is an edge");
    c.remove_edge(idx)
}

/// Loose cycle with `g` edges: consecutive edges share exactly one vertex.
pub fn loose_cycle(g: usize, r: usize) -> Result<Hypergraph> {
    if g < 3 {
        return invalid(format!("loose cycle needs at least 3 edges, got {g}"));
    }
    if r < 2 {
        return invalid("loose cycle needs r >= 2");
    }
    let n = g * (r - 1);
    let edges = (0..g)
        .map(|i| (0..r).map(|j| (i * (r - 1) + j) % n).collect())
        .collect();
    Hypergraph::new(r, n, edges)
}

pub fn loose_triangle(r: usize) -> Result<Hypergraph> {
    loose_cycle(3, r)
}

/// The `r x r` grid: vertex `(i, j)` is `i*r + j`; edges are rows and columns.
pub fn grid(r: usize) -> Result<Hypergraph> {
    if r < 2 {
        return invalid("grid needs r >= 2");
    }
    let mut edges = Vec::with_capacity(2 * r);
    for i in 0..r {
        edges.push((0..r).map(|j| i * r + j).collect());
        edges.push((0..r).map(|j| j * r + i).collect());
    }
    Hypergraph::new(r, r * r, edges)
}

/// The half-octahedron (Pasch configuration).
pub fn half_octahedron() -> Hypergraph {
    Hypergraph::new(
        3,
        6,
        vec![vec![0, 2, 4], vec![0, 3, 5], vec![1, 2, 5], vec![1, 3, 4]],
    )
    .expect("fixed configuration is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tight_cycle_six_three() {
        let c = tight_cycle(6, 3).unwrap();
        assert_eq!(c.vertex_count(), 6);
        assert_eq!(
            c.edges(),
            &[
                vec![0, 1, 2],
                vec![0, 1, 5],
                vec![0, 4, 5],
                vec![1, 2, 3],
                vec![2, 3, 4],
                vec![3, 4, 5]
            ]
        );
        let k4 = tight_cycle(4, 3).unwrap();
        assert_eq!(k4.edge_count(), 4);
        assert!(tight_cycle(3, 3).is_err());
    }

    #[test]
    fn loose_cycles() {
        let t = loose_cycle(3, 3).unwrap();
        assert_eq!(t.edges(), &[vec![0, 1, 2], vec![0, 4, 5], vec![2, 3, 4]]);
        let tri = loose_cycle(3, 2).unwrap();
        assert_eq!(tri.edges(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        let c4 = loose_cycle(4, 3).unwrap();
        assert_eq!((c4.vertex_count(), c4.edge_count()), (8, 4));
        assert!(c4.is_linear());
        assert!(c4.degrees().iter().all(|&d| d == 1 || d == 2));
        assert!(loose_cycle(2, 3).is_err());
    }

    #[test]
    fn grids() {
        let g3 = grid(3).unwrap();
        assert_eq!((g3.vertex_count(), g3.edge_count()), (9, 6));
        assert!(g3.is_linear());
        let c4 = grid(2).unwrap();
        assert!(c4.is_isomorphic(&loose_cycle(4, 2).unwrap()).unwrap());
        let g5 = grid(5).unwrap();
        assert_eq!((g5.vertex_count(), g5.edge_count()), (25, 10));
        assert!(g5.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn half_octahedron_structure() {
        let h = half_octahedron();
        assert!(h.degrees().iter().all(|&d| d == 2));
        assert!(h.is_linear());
        let l = h.levi_graph();
        assert_eq!((l.vertex_count(), l.edge_count()), (10, 12));
        assert!(h.is_two_connected());
    }

    #[test]
    fn remove_and_union() {
        let c9 = tight_cycle(9, 3).unwrap();
        let m = c9.remove_edge(0).unwrap();
        assert_eq!((m.vertex_count(), m.edge_count()), (9, 8));
        let k = Hypergraph::single_edge(4).unwrap().remove_edge(0).unwrap();
        assert_eq!((k.vertex_count(), k.edge_count()), (4, 0));
        assert!(c9.remove_edge(9).is_err());

        let e = Hypergraph::single_edge(3).unwrap();
        let u = Hypergraph::disjoint_union(&[e.clone(), e.clone()]).unwrap();
        assert_eq!(u.edges(), &[vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(Hypergraph::disjoint_union(std::slice::from_ref(&c9)).unwrap(), c9);
        assert!(Hypergraph::disjoint_union(&[e, tight_cycle(5, 2).unwrap()]).is_err());
    }

    #[test]
    fn remove_edge_from_tight_cycle_is_isomorphic_for_every_index() {
        let c6 = tight_cycle(6, 3).unwrap();
        let base = c6.remove_edge(0).unwrap();
        for i in 1..6 {
            assert!(base.is_isomorphic(&c6.remove_edge(i).unwrap()).unwrap());
        }
    }

    #[test]
    fn levi_and_skeleton() {
        let star = Hypergraph::single_edge(4).unwrap().levi_graph();
        assert_eq!(star.degrees(), vec![1, 1, 1, 1, 4]);
        let c6 = tight_cycle(6, 3).unwrap().levi_graph();
        assert_eq!((c6.vertex_count(), c6.edge_count()), (12, 18));
        assert!(c6.degrees()[6..].iter().all(|&d| d == 3));

        let t = loose_triangle(3).unwrap().skeleton(2).unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (6, 9));
        let k3 = Hypergraph::single_edge(3).unwrap().skeleton(2).unwrap();
        assert_eq!(k3.edge_count(), 3);
        let k4 = tight_cycle(4, 3).unwrap().skeleton(2).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.skeleton(3).is_err());
    }

    #[test]
    fn linearity() {
        assert!(loose_triangle(3).unwrap().is_linear());
        assert!(!tight_cycle(6, 3).unwrap().is_linear());
        assert!(grid(4).unwrap().is_linear());
    }

    #[test]
    fn girth_reports() {
        let t = loose_triangle(3).unwrap().berge_girth().unwrap();
        assert_eq!((t.girth, t.shortest_cycle_count), (3, 1));
        assert!(t.all_shortest_loose);
        let g = grid(3).unwrap().berge_girth().unwrap();
        assert_eq!(g.girth, 4);
        assert_eq!(g.shortest_cycle_count, 9);
        let c5 = loose_cycle(5, 3).unwrap().berge_girth().unwrap();
        assert_eq!((c5.girth, c5.shortest_cycle_count), (5, 1));
        assert!(Hypergraph::single_edge(3).unwrap().berge_girth().is_err());
        assert!(tight_cycle(6, 3).unwrap().berge_girth().is_err());
    }

    #[test]
    fn two_connectivity() {
        assert!(tight_cycle(6, 3).unwrap().is_two_connected());
        let e = Hypergraph::single_edge(3).unwrap();
        assert!(!Hypergraph::disjoint_union(&[e.clone(), e])
            .unwrap()
            .is_two_connected());
        assert!(loose_cycle(5, 2).unwrap().is_two_connected());
        let path = Hypergraph::new(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(!path.is_two_connected());
    }

    #[test]
    fn json_reader_rejects_non_canonical() {
        let h = tight_cycle(6, 3).unwrap();
        assert_eq!(Hypergraph::from_json(&h.to_json()).unwrap(), h);
        assert!(Hypergraph::from_json(r#"{"r":3,"n":4,"edges":[[1,2,3],[0,1,2]]}"#).is_err());
        assert!(Hypergraph::from_json(r#"{"r":3,"n":3,"edges":[[0,1,3]]}"#).is_err());
        assert!(Hypergraph::from_json(r#"{"r":3,"n":4,"edges":[[0,1,2],[0,1,2]]}"#).is_err());
    }
}
