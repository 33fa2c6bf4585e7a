//! Finite simple graphs, optionally with loops, and the graph operations the
//! folding machinery builds on: boundaries, balls, graph folds, greedy
//! dismantling and brute-force automorphism groups.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::invalid;
use crate::{Error, Label, Result};

/// Largest graph for which the automorphism group is computed by brute force.
pub const MAX_AUT_VERTICES: usize = 12;

/// A finite graph. Vertices are indexed by declaration order.
///
/// Loops are only meaningful for homomorphism targets; domain graphs of
/// configuration spaces must be loop-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<Label>,
    adj: Vec<Vec<usize>>,
    loop_flags: Vec<bool>,
    edges: Vec<(usize, usize)>,
    loops: Vec<usize>,
}

/// Two-colouring of a bipartite graph. In every connected component the
/// smallest vertex is placed on side 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<u8>,
}

impl Bipartition {
    pub fn side(&self, v: usize) -> u8 {
        self.side[v]
    }

    /// Vertices on side 0.
    pub fn first_part(&self) -> Vec<usize> {
        (0..self.side.len()).filter(|&v| self.side[v] == 0).collect()
    }

    pub fn second_part(&self) -> Vec<usize> {
        (0..self.side.len()).filter(|&v| self.side[v] == 1).collect()
    }
}

impl Graph {
    /// Loop-free graph from labels and index pairs.
    pub fn new(labels: Vec<Label>, edges: &[(usize, usize)]) -> Result<Self> {
        Self::with_loops(labels, edges, &[])
    }

    /// Graph that may carry loops, e.g. a homomorphism target.
    pub fn with_loops(labels: Vec<Label>, edges: &[(usize, usize)], loops: &[usize]) -> Result<Self> {
        let n = labels.len();
        let distinct: BTreeSet<&Label> = labels.iter().collect();
        if distinct.len() != n {
            return Err(invalid!("duplicate vertex identifier"));
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid!("edge ({u}, {v}) refers to a missing vertex"));
            }
            if u == v {
                return Err(invalid!("edge ({u}, {v}) is a loop; list loops separately"));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(invalid!("duplicate edge between {} and {}", labels[u], labels[v]));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut loop_flags = vec![false; n];
        for &v in loops {
            if v >= n {
                return Err(invalid!("loop at missing vertex {v}"));
            }
            if loop_flags[v] {
                return Err(invalid!("duplicate loop at {}", labels[v]));
            }
            loop_flags[v] = true;
        }
        Ok(Graph { labels, adj, loop_flags, edges: edges.to_vec(), loops: loops.to_vec() })
    }

    /// Build from labelled edges; convenient for file formats.
    pub fn from_labels(labels: Vec<Label>, edges: &[(Label, Label)], loops: &[Label]) -> Result<Self> {
        let index: BTreeMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let find = |l: &Label| index.get(l).copied().ok_or_else(|| invalid!("unknown vertex {l}"));
        let mut e = Vec::with_capacity(edges.len());
        let mut lp = Vec::new();
        for (a, b) in edges {
            let (u, v) = (find(a)?, find(b)?);
            if u == v {
                lp.push(u);
            } else {
                e.push((u, v));
            }
        }
        for l in loops {
            lp.push(find(l)?);
        }
        Self::with_loops(labels.clone(), &e, &lp)
    }

    fn int_labels(range: core::ops::Range<i64>) -> Vec<Label> {
        range.map(Label::Int).collect()
    }

    /// Path on `n` vertices labelled `0..n`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(Self::int_labels(0..n as i64), &edges).expect("valid path")
    }

    /// Cycle on `n >= 3` vertices labelled `0..n`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Self::new(Self::int_labels(0..n as i64), &edges).expect("valid cycle")
    }

    /// `rows x cols` grid, vertex `r * cols + c` at row `r`, column `c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self::new(Self::int_labels(0..(rows * cols) as i64), &edges).expect("valid grid")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::new(Self::int_labels(0..n as i64), &edges).expect("valid complete graph")
    }

    /// Single edge `0 - 1`.
    pub fn edge() -> Self {
        Self::path(2)
    }

    /// Vertices `1..=n`, `i ~ j` iff `|i - j| <= m`. Every vertex carries a loop.
    pub fn path_power(n: usize, m: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if j - i <= m {
                    edges.push((i, j));
                }
            }
        }
        let loops: Vec<usize> = (0..n).collect();
        Self::with_loops(Self::int_labels(1..n as i64 + 1), &edges, &loops).expect("valid path power")
    }

    /// The same graph with vertices redeclared in `order` (a permutation of the indices).
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut pos = vec![usize::MAX; n];
        if order.len() != n {
            return Err(invalid!("order has wrong length"));
        }
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(invalid!("order is not a permutation"));
            }
            pos[v] = i;
        }
        let labels = order.iter().map(|&v| self.labels[v].clone()).collect();
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (pos[u], pos[v])).collect();
        let loops: Vec<_> = self.loops.iter().map(|&v| pos[v]).collect();
        Self::with_loops(labels, &edges, &loops)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &Label {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Edges in declaration order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Vertices carrying a loop, in declaration order.
    pub fn loops(&self) -> &[usize] {
        &self.loops
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loop_flags[v]
    }

    pub fn is_loop_free(&self) -> bool {
        self.loops.is_empty()
    }

    /// Neighbours of `v` other than `v` itself, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// `N(v)`, which contains `v` exactly when `v` carries a loop.
    pub fn neighbourhood(&self, v: usize) -> Vec<usize> {
        let mut out = self.adj[v].clone();
        if self.loop_flags[v] {
            let pos = out.binary_search(&v).unwrap_err();
            out.insert(pos, v);
        }
        out
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        if u == v {
            self.loop_flags[u]
        } else {
            self.adj[u].binary_search(&v).is_ok()
        }
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, sorted.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        e.sort_unstable();
        e
    }

    /// Breadth-first distances from `v`; `usize::MAX` marks unreachable vertices.
    pub fn distances(&self, v: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::new();
        dist[v] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(invalid!("vertex index {v} out of range"))
        }
    }

    /// `D_n(v)`: vertices at distance at most `n`, ascending.
    pub fn ball(&self, v: usize, n: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        let d = self.distances(v);
        Ok((0..self.len()).filter(|&u| d[u] <= n).collect())
    }

    /// Vertices at distance exactly `n` from `v`.
    pub fn sphere(&self, v: usize, n: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        let d = self.distances(v);
        Ok((0..self.len()).filter(|&u| d[u] == n).collect())
    }

    /// `∂F`: vertices outside `subset` adjacent to some vertex of it, ascending.
    pub fn boundary(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let mut inside = vec![false; self.len()];
        for &v in subset {
            self.check_vertex(v)?;
            inside[v] = true;
        }
        let mut out = vec![false; self.len()];
        for &v in subset {
            for &w in &self.adj[v] {
                if !inside[w] {
                    out[w] = true;
                }
            }
        }
        Ok((0..self.len()).filter(|&v| out[v]).collect())
    }

    /// Two-colouring, or `None` if the graph has an odd cycle or a loop.
    pub fn bipartition(&self) -> Option<Bipartition> {
        if !self.is_loop_free() {
            return None;
        }
        let n = self.len();
        let mut side = vec![u8::MAX; n];
        for start in 0..n {
            if side[start] != u8::MAX {
                continue;
            }
            side[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(Bipartition { side })
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    fn folds_among(&self, alive: &[bool]) -> Vec<(usize, usize)> {
        let hood: Vec<Vec<usize>> = (0..self.len())
            .map(|v| self.neighbourhood(v).into_iter().filter(|&w| alive[w]).collect())
            .collect();
        let mut out = Vec::new();
        for a in (0..self.len()).filter(|&a| alive[a]) {
            for b in (0..self.len()).filter(|&b| alive[b] && b != a) {
                if hood[a].iter().all(|w| hood[b].binary_search(w).is_ok()) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// All pairs `(a, b)` with `a != b` and `N(a) ⊆ N(b)`, sorted.
    pub fn graph_folds(&self) -> Vec<(usize, usize)> {
        self.folds_among(&vec![true; self.len()])
    }

    /// Greedy dismantling: repeatedly apply the least available fold,
    /// backtracking when a choice leads to a dead end. Returns the fold
    /// sequence down to a single vertex, or `None` if the graph is not
    /// dismantlable.
    pub fn dismantle(&self) -> Option<Vec<(usize, usize)>> {
        if self.is_empty() {
            return None;
        }
        let mut alive = vec![true; self.len()];
        let mut failed = BTreeSet::new();
        let mut seq = Vec::new();
        if self.dismantle_from(&mut alive, &mut failed, &mut seq) {
            Some(seq)
        } else {
            None
        }
    }

    fn dismantle_from(
        &self,
        alive: &mut Vec<bool>,
        failed: &mut BTreeSet<Vec<bool>>,
        seq: &mut Vec<(usize, usize)>,
    ) -> bool {
        if alive.iter().filter(|&&x| x).count() == 1 {
            return true;
        }
        if failed.contains(alive) {
            return false;
        }
        for (a, b) in self.folds_among(alive) {
            alive[a] = false;
            seq.push((a, b));
            if self.dismantle_from(alive, failed, seq) {
                return true;
            }
            seq.pop();
            alive[a] = true;
        }
        failed.insert(alive.clone());
        false
    }

    /// Full automorphism group by brute force (at most [`MAX_AUT_VERTICES`] vertices).
    pub fn automorphisms(&self) -> Result<AutSubgroup> {
        let n = self.len();
        if n > MAX_AUT_VERTICES {
            return Err(Error::Capacity(alloc::format!(
                "automorphism search is limited to {MAX_AUT_VERTICES} vertices, graph has {n}"
            )));
        }
        let mut elements = Vec::new();
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_automorphism(0, &mut image, &mut used, &mut elements);
        elements.sort();
        Ok(AutSubgroup { n, elements })
    }

    fn extend_automorphism(&self, i: usize, image: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = self.len();
        if i == n {
            out.push(image.clone());
            return;
        }
        for j in 0..n {
            if used[j] || self.adj[j].len() != self.adj[i].len() || self.loop_flags[j] != self.loop_flags[i] {
                continue;
            }
            if (0..i).any(|k| self.is_adjacent(i, k) != self.is_adjacent(j, image[k])) {
                continue;
            }
            image[i] = j;
            used[j] = true;
            self.extend_automorphism(i + 1, image, used, out);
            used[j] = false;
        }
        image[i] = usize::MAX;
    }

    /// Whether the permutation `perm` (vertex `v` maps to `perm[v]`) preserves adjacency and loops.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if !is_permutation(perm, self.len()) {
            return false;
        }
        (0..self.len()).all(|v| self.loop_flags[v] == self.loop_flags[perm[v]])
            && self.edges.iter().all(|&(u, v)| self.is_adjacent(perm[u], perm[v]))
    }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// A finite group of graph automorphisms, listed element by element.
/// Elements are sorted, so the identity comes first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutSubgroup {
    n: usize,
    elements: Vec<Vec<usize>>,
}

impl AutSubgroup {
    pub fn trivial(n: usize) -> Self {
        AutSubgroup { n, elements: vec![(0..n).collect()] }
    }

    /// Validate an explicit element list: automorphisms, containing the
    /// identity, closed under composition.
    pub fn new(graph: &Graph, elements: Vec<Vec<usize>>) -> Result<Self> {
        let n = graph.len();
        for g in &elements {
            if !graph.is_automorphism(g) {
                return Err(invalid!("{g:?} is not an automorphism of the graph"));
            }
        }
        let set: BTreeSet<Vec<usize>> = elements.into_iter().collect();
        let identity: Vec<usize> = (0..n).collect();
        if !set.contains(&identity) {
            return Err(invalid!("group does not contain the identity"));
        }
        for g in &set {
            for h in &set {
                if !set.contains(&compose(g, h)) {
                    return Err(invalid!("element list is not closed under composition"));
                }
            }
        }
        Ok(AutSubgroup { n, elements: set.into_iter().collect() })
    }

    /// Subgroup generated by `generators`.
    pub fn generated_by(graph: &Graph, generators: &[Vec<usize>]) -> Result<Self> {
        let n = graph.len();
        for g in generators {
            if !graph.is_automorphism(g) {
                return Err(invalid!("{g:?} is not an automorphism of the graph"));
            }
        }
        let identity: Vec<usize> = (0..n).collect();
        let mut set = BTreeSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = compose(g, &x);
                if set.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(AutSubgroup { n, elements: set.into_iter().collect() })
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// `g ∘ h`: first `h`, then `g`.
pub fn compose(g: &[usize], h: &[usize]) -> Vec<usize> {
    h.iter().map(|&v| g[v]).collect()
}

pub fn inverse(g: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; g.len()];
    for (v, &gv) in g.iter().enumerate() {
        inv[gv] = v;
    }
    inv
}
