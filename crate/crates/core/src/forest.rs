//! Dynamic forests and k-forests of a host graph.
//!
//! [`LinkCutForest`] represents every forest edge as its own node between its
//! two endpoints, so paths alternate vertex and edge nodes and the `i`-th edge
//! on a path is found by order statistics in the splay tree.

use crate::error::{Error, Result};
use crate::graph::{DisjointSets, Graph};

/// A forest over vertices `0..n` with edges named by host edge id.
pub trait DynamicForest {
    fn num_vertices(&self) -> usize;

    /// Adds edge `edge = {u, v}`; `u` and `v` must be in different trees.
    fn link(&mut self, u: usize, v: usize, edge: usize) -> Result<()>;

    /// Removes a forest edge.
    fn cut(&mut self, edge: usize) -> Result<()>;

    fn connected(&mut self, u: usize, v: usize) -> bool;

    /// Number of edges on the path from `u` to `v`, if connected.
    fn path_len(&mut self, u: usize, v: usize) -> Option<usize>;

    /// The `i`-th edge (from `u`) on the path from `u` to `v`.
    fn path_edge_at(&mut self, u: usize, v: usize, i: usize) -> Option<usize>;

    /// The edges of the path from `u` to `v`, in order from `u`.
    fn path_edges(&mut self, u: usize, v: usize) -> Option<Vec<usize>> {
        let len = self.path_len(u, v)?;
        (0..len).map(|i| self.path_edge_at(u, v, i)).collect()
    }
}

const NIL: usize = usize::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    ch: [usize; 2],
    parent: usize,
    flip: bool,
    size: usize,
}

/// Link-cut trees with amortized logarithmic operations.
#[derive(Debug, Clone)]
pub struct LinkCutForest {
    n: usize,
    nodes: Vec<Node>,
    ends: Vec<Option<(usize, usize)>>,
    stack: Vec<usize>,
}

impl LinkCutForest {
    /// A forest with no edges over `n` vertices, accepting edge ids below
    /// `edge_ids`.
    pub fn new(n: usize, edge_ids: usize) -> Self {
        let node = Node { ch: [NIL; 2], parent: NIL, flip: false, size: 1 };
        LinkCutForest { n, nodes: vec![node; n + edge_ids], ends: vec![None; edge_ids], stack: Vec::new() }
    }

    fn is_root(&self, x: usize) -> bool {
        let p = self.nodes[x].parent;
        p == NIL || (self.nodes[p].ch[0] != x && self.nodes[p].ch[1] != x)
    }

    fn size(&self, x: usize) -> usize {
        if x == NIL {
            0
        } else {
            self.nodes[x].size
        }
    }

    fn update(&mut self, x: usize) {
        let [l, r] = self.nodes[x].ch;
        self.nodes[x].size = 1 + self.size(l) + self.size(r);
    }

    fn push(&mut self, x: usize) {
        if self.nodes[x].flip {
            self.nodes[x].flip = false;
            self.nodes[x].ch.swap(0, 1);
            for c in self.nodes[x].ch {
                if c != NIL {
                    self.nodes[c].flip ^= true;
                }
            }
        }
    }

    fn rotate(&mut self, x: usize) {
        let p = self.nodes[x].parent;
        let g = self.nodes[p].parent;
        let dir = usize::from(self.nodes[p].ch[1] == x);
        let b = self.nodes[x].ch[1 - dir];
        if !self.is_root(p) {
            let pd = usize::from(self.nodes[g].ch[1] == p);
            self.nodes[g].ch[pd] = x;
        }
        self.nodes[x].parent = g;
        self.nodes[x].ch[1 - dir] = p;
        self.nodes[p].parent = x;
        self.nodes[p].ch[dir] = b;
        if b != NIL {
            self.nodes[b].parent = p;
        }
        self.update(p);
        self.update(x);
    }

    fn splay(&mut self, x: usize) {
        let mut path = std::mem::take(&mut self.stack);
        path.push(x);
        let mut y = x;
        while !self.is_root(y) {
            y = self.nodes[y].parent;
            path.push(y);
        }
        while let Some(z) = path.pop() {
            self.push(z);
        }
        self.stack = path;
        while !self.is_root(x) {
            let p = self.nodes[x].parent;
            if !self.is_root(p) {
                let g = self.nodes[p].parent;
                let zigzig = (self.nodes[g].ch[1] == p) == (self.nodes[p].ch[1] == x);
                self.rotate(if zigzig { p } else { x });
            }
            self.rotate(x);
        }
    }

    fn access(&mut self, x: usize) {
        let mut last = NIL;
        let mut y = x;
        while y != NIL {
            self.splay(y);
            self.nodes[y].ch[1] = last;
            self.update(y);
            last = y;
            y = self.nodes[y].parent;
        }
        self.splay(x);
    }

    fn evert(&mut self, x: usize) {
        self.access(x);
        self.nodes[x].flip ^= true;
        self.push(x);
    }

    fn find_root(&mut self, x: usize) -> usize {
        self.access(x);
        let mut y = x;
        loop {
            self.push(y);
            match self.nodes[y].ch[0] {
                NIL => break,
                l => y = l,
            }
        }
        self.splay(y);
        y
    }

    fn link_nodes(&mut self, x: usize, y: usize) {
        self.evert(x);
        self.nodes[x].parent = y;
    }

    fn cut_nodes(&mut self, x: usize, y: usize) {
        self.evert(x);
        self.access(y);
        debug_assert_eq!(self.nodes[y].ch[0], x);
        self.nodes[y].ch[0] = NIL;
        self.nodes[x].parent = NIL;
        self.update(y);
    }

    /// Splays the `u`..`v` path so it is exactly the splay tree at `v`,
    /// in order from `u`.
    fn expose_path(&mut self, u: usize, v: usize) -> bool {
        if !self.connected(u, v) {
            return false;
        }
        self.evert(u);
        self.access(v);
        true
    }

    /// The node at in-order position `i` of the splay tree rooted at `x`.
    fn kth(&mut self, mut x: usize, mut i: usize) -> usize {
        loop {
            self.push(x);
            let l = self.nodes[x].ch[0];
            let ls = self.size(l);
            if i < ls {
                x = l;
            } else if i == ls {
                return x;
            } else {
                i -= ls + 1;
                x = self.nodes[x].ch[1];
            }
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::ForestPrecondition(format!("vertex {v} out of range")));
        }
        Ok(())
    }
}

impl DynamicForest for LinkCutForest {
    fn num_vertices(&self) -> usize {
        self.n
    }

    fn link(&mut self, u: usize, v: usize, edge: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        match self.ends.get(edge) {
            None => return Err(Error::ForestPrecondition(format!("edge id {edge} out of range"))),
            Some(Some(_)) => return Err(Error::ForestPrecondition(format!("edge {edge} is already present"))),
            Some(None) => {}
        }
        if self.connected(u, v) {
            return Err(Error::ForestPrecondition(format!("{u} and {v} are already connected")));
        }
        let w = self.n + edge;
        self.link_nodes(u, w);
        self.link_nodes(w, v);
        self.ends[edge] = Some((u, v));
        Ok(())
    }

    fn cut(&mut self, edge: usize) -> Result<()> {
        let (u, v) = self
            .ends
            .get(edge)
            .copied()
            .flatten()
            .ok_or_else(|| Error::ForestPrecondition(format!("edge {edge} is not in the forest")))?;
        let w = self.n + edge;
        self.cut_nodes(u, w);
        self.cut_nodes(w, v);
        self.ends[edge] = None;
        Ok(())
    }

    fn connected(&mut self, u: usize, v: usize) -> bool {
        u == v || self.find_root(u) == self.find_root(v)
    }

    fn path_len(&mut self, u: usize, v: usize) -> Option<usize> {
        if !self.expose_path(u, v) {
            return None;
        }
        Some((self.nodes[v].size - 1) / 2)
    }

    fn path_edge_at(&mut self, u: usize, v: usize, i: usize) -> Option<usize> {
        let len = self.path_len(u, v)?;
        if i >= len {
            return None;
        }
        let node = self.kth(v, 2 * i + 1);
        debug_assert!(node >= self.n);
        Some(node - self.n)
    }

    fn path_edges(&mut self, u: usize, v: usize) -> Option<Vec<usize>> {
        let len = self.path_len(u, v)?;
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let node = self.kth(v, 2 * i + 1);
            out.push(node - self.n);
        }
        Some(out)
    }
}

/// Adjacency-list forest answering every query by traversal. Reference
/// implementation for [`LinkCutForest`].
#[derive(Debug, Clone)]
pub struct NaiveForest {
    adj: Vec<Vec<(usize, usize)>>,
    ends: Vec<Option<(usize, usize)>>,
}

impl NaiveForest {
    pub fn new(n: usize, edge_ids: usize) -> Self {
        NaiveForest { adj: vec![Vec::new(); n], ends: vec![None; edge_ids] }
    }

    /// Edge ids on the path from `u` to `v`, by breadth-first search.
    fn path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let n = self.adj.len();
        let mut prev = vec![(NIL, NIL); n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([u]);
        seen[u] = true;
        while let Some(x) = queue.pop_front() {
            if x == v {
                let mut out = Vec::new();
                let mut y = v;
                while y != u {
                    let (p, e) = prev[y];
                    out.push(e);
                    y = p;
                }
                out.reverse();
                return Some(out);
            }
            for &(y, e) in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = (x, e);
                    queue.push_back(y);
                }
            }
        }
        None
    }
}

impl DynamicForest for NaiveForest {
    fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    fn link(&mut self, u: usize, v: usize, edge: usize) -> Result<()> {
        let n = self.adj.len();
        if u >= n || v >= n {
            return Err(Error::ForestPrecondition("vertex out of range".into()));
        }
        match self.ends.get(edge) {
            Some(None) => {}
            _ => return Err(Error::ForestPrecondition(format!("edge {edge} cannot be linked"))),
        }
        if self.path(u, v).is_some() {
            return Err(Error::ForestPrecondition(format!("{u} and {v} are already connected")));
        }
        self.adj[u].push((v, edge));
        self.adj[v].push((u, edge));
        self.ends[edge] = Some((u, v));
        Ok(())
    }

    fn cut(&mut self, edge: usize) -> Result<()> {
        let (u, v) = self
            .ends
            .get(edge)
            .copied()
            .flatten()
            .ok_or_else(|| Error::ForestPrecondition(format!("edge {edge} is not in the forest")))?;
        self.adj[u].retain(|&(_, e)| e != edge);
        self.adj[v].retain(|&(_, e)| e != edge);
        self.ends[edge] = None;
        Ok(())
    }

    fn connected(&mut self, u: usize, v: usize) -> bool {
        self.path(u, v).is_some()
    }

    fn path_len(&mut self, u: usize, v: usize) -> Option<usize> {
        self.path(u, v).map(|p| p.len())
    }

    fn path_edge_at(&mut self, u: usize, v: usize, i: usize) -> Option<usize> {
        self.path(u, v).and_then(|p| p.get(i).copied())
    }

    fn path_edges(&mut self, u: usize, v: usize) -> Option<Vec<usize>> {
        self.path(u, v)
    }
}

/// A spanning forest of a host graph with exactly `k` components.
///
/// Forest and non-forest edges are kept in indexed lists so a uniform edge
/// of either kind is one draw.
#[derive(Debug, Clone)]
pub struct KForest {
    host: Graph,
    k: usize,
    in_forest: Vec<bool>,
    pos: Vec<usize>,
    forest: Vec<usize>,
    others: Vec<usize>,
}

impl KForest {
    pub fn new(host: &Graph, edges: &[usize]) -> Result<Self> {
        let n = host.num_vertices();
        let mut in_forest = vec![false; host.num_edges()];
        let mut ds = DisjointSets::new(n);
        for &e in edges {
            if e >= host.num_edges() || in_forest[e] {
                return Err(Error::ForestPrecondition(format!("bad forest edge {e}")));
            }
            let (u, v) = host.endpoints(e);
            if !ds.union(u, v) {
                return Err(Error::ForestPrecondition(format!("edge {e} closes a cycle")));
            }
            in_forest[e] = true;
        }
        let mut f = KForest {
            host: host.clone(),
            k: n - edges.len(),
            in_forest,
            pos: vec![0; host.num_edges()],
            forest: Vec::new(),
            others: Vec::new(),
        };
        for e in 0..host.num_edges() {
            let list = if f.in_forest[e] { &mut f.forest } else { &mut f.others };
            f.pos[e] = list.len();
            list.push(e);
        }
        Ok(f)
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn contains(&self, e: usize) -> bool {
        self.in_forest[e]
    }

    /// Forest edge ids in no particular order.
    pub fn edges(&self) -> &[usize] {
        &self.forest
    }

    pub fn non_edges(&self) -> &[usize] {
        &self.others
    }

    pub fn sorted_edges(&self) -> Vec<usize> {
        let mut e = self.forest.clone();
        e.sort_unstable();
        e
    }

    /// Component label per vertex (labels ordered by smallest vertex) and
    /// component sizes.
    pub fn components(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.host.num_vertices();
        let mut ds = DisjointSets::new(n);
        for &e in &self.forest {
            let (u, v) = self.host.endpoints(e);
            ds.union(u, v);
        }
        let mut label = vec![usize::MAX; n];
        let mut root_label = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        for v in 0..n {
            let r = ds.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = sizes.len();
                sizes.push(0);
            }
            label[v] = root_label[r];
            sizes[label[v]] += 1;
        }
        (label, sizes)
    }

    pub fn is_balanced(&self) -> bool {
        let (_, sizes) = self.components();
        sizes.windows(2).all(|w| w[0] == w[1])
    }

    /// Swaps a non-forest edge in and a forest edge out.
    pub(crate) fn exchange(&mut self, added: usize, removed: usize) {
        debug_assert!(!self.in_forest[added] && self.in_forest[removed]);
        let (pa, pr) = (self.pos[added], self.pos[removed]);
        self.others[pa] = removed;
        self.forest[pr] = added;
        self.pos[removed] = pa;
        self.pos[added] = pr;
        self.in_forest[added] = true;
        self.in_forest[removed] = false;
    }

    /// A dynamic forest holding exactly this forest's edges.
    pub fn to_dynamic<D: DynamicForest>(&self, mut make: impl FnMut(usize, usize) -> D) -> Result<D> {
        let mut d = make(self.host.num_vertices(), self.host.num_edges());
        for &e in &self.forest {
            let (u, v) = self.host.endpoints(e);
            d.link(u, v, e)?;
        }
        Ok(d)
    }
}
