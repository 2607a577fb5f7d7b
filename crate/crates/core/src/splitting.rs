//! Cutting trees into `k` components: exactly balanced, within a
//! multiplicative tolerance, or as balanced as possible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DisjointSets;
use crate::tree::{RootedTree, SpanningTree};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    /// Tree edge ids, ascending.
    pub cut_edges: Vec<usize>,
    /// Component orders, ascending.
    pub component_sizes: Vec<usize>,
    pub imbalance: usize,
}

impl SplitResult {
    fn from_cut(t: &SpanningTree, mut cut_edges: Vec<usize>) -> Self {
        cut_edges.sort_unstable();
        let component_sizes = component_sizes(t, &cut_edges).expect("cut edges come from the tree");
        let imbalance = component_sizes.last().unwrap() - component_sizes[0];
        SplitResult { cut_edges, component_sizes, imbalance }
    }
}

/// Orders of the components of `t` minus `cut`, ascending.
pub fn component_sizes(t: &SpanningTree, cut: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = cut.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter("repeated cut edge".into()));
    }
    if let Some(&e) = sorted.iter().find(|&&e| !t.contains_edge(e)) {
        return Err(Error::EdgeNotInTree(e));
    }
    let n = t.num_vertices();
    let mut ds = DisjointSets::new(n);
    for e in t.edges() {
        if sorted.binary_search(&e.id).is_err() {
            ds.union(e.u, e.v);
        }
    }
    let mut sizes = Vec::with_capacity(cut.len() + 1);
    for v in 0..n {
        if ds.find(v) == v {
            sizes.push(ds.set_size(v));
        }
    }
    sizes.sort_unstable();
    Ok(sizes)
}

fn check_k(t: &SpanningTree, k: usize) -> Result<()> {
    if k == 0 || k > t.num_vertices() {
        return Err(Error::InvalidParameter(format!("k = {k} for a tree on {} vertices", t.num_vertices())));
    }
    Ok(())
}

/// The balanced split of `t` into `k` components of order `N/k`, if any.
/// When it exists it is unique.
///
/// One bottom-up pass: a vertex whose pending subtree reaches exactly `N/k`
/// is cut from its parent and contributes nothing further up.
pub fn find_balanced_split(t: &SpanningTree, k: usize) -> Result<Option<SplitResult>> {
    check_k(t, k)?;
    let n = t.num_vertices();
    if !n.is_multiple_of(k) {
        return Err(Error::NotDivisible { k, n });
    }
    Ok(balanced_cut(&t.rooted(0), t, n / k).map(|cut| SplitResult::from_cut(t, cut)))
}

/// Greedy peel; returns the cut edge ids or `None`.
pub(crate) fn balanced_cut(r: &RootedTree, t: &SpanningTree, part: usize) -> Option<Vec<usize>> {
    let n = t.num_vertices();
    let mut pending = vec![1usize; n];
    let mut cut = Vec::new();
    for &v in r.order.iter().rev() {
        if pending[v] > part {
            return None;
        }
        let p = r.parent[v];
        if p == usize::MAX {
            return (pending[v] == part).then_some(cut);
        }
        if pending[v] == part {
            cut.push(t.edges()[r.parent_edge[v]].id);
        } else {
            pending[p] += pending[v];
        }
    }
    unreachable!("preorder ends at the root")
}

/// Size window `[lo, hi]` for tolerance `epsilon`; rounding absorbs
/// floating-point noise at exact boundaries.
pub fn approx_bounds(n: usize, k: usize, epsilon: f64) -> (usize, usize) {
    let target = n as f64 / k as f64;
    let lo = ((1.0 - epsilon) * target - 1e-9).ceil().max(1.0) as usize;
    let hi = ((1.0 + epsilon) * target + 1e-9).floor().max(0.0) as usize;
    (lo, hi)
}

/// A split into `k` components whose orders all lie within
/// `(1 +- epsilon) N / k`, if any.
pub fn find_approx_split(t: &SpanningTree, k: usize, epsilon: f64) -> Result<Option<SplitResult>> {
    check_k(t, k)?;
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon}")));
    }
    let (lo, hi) = approx_bounds(t.num_vertices(), k, epsilon);
    let r = t.rooted(0);
    let forced = vec![Force::Free; t.edges().len()];
    Ok(WindowDp::new(t, &r, k, lo, hi, &forced).witness().map(|cut| SplitResult::from_cut(t, cut)))
}

/// A split into `k` components minimizing max order minus min order; ties go
/// to the lexicographically smallest set of cut edge ids.
pub fn find_min_imbalance_split(t: &SpanningTree, k: usize) -> Result<SplitResult> {
    check_k(t, k)?;
    let n = t.num_vertices();
    if k == 1 {
        return Ok(SplitResult::from_cut(t, Vec::new()));
    }
    let r = t.rooted(0);
    if k == 2 {
        let sizes = r.subtree_sizes();
        let (_, id) = r
            .order
            .iter()
            .filter(|&&v| v != r.root)
            .map(|&v| (n.abs_diff(2 * sizes[v]), t.edges()[r.parent_edge[v]].id))
            .min()
            .expect("k <= N so the tree has an edge");
        return Ok(SplitResult::from_cut(t, vec![id]));
    }

    let free = vec![Force::Free; t.edges().len()];
    let feasible = |lo: usize, hi: usize| WindowDp::new(t, &r, k, lo, hi, &free).feasible();
    // For each lower bound, the smallest feasible upper bound is monotone in
    // the lower bound, so one sweep finds every optimal window.
    let mut windows = Vec::new();
    let mut best = usize::MAX;
    let mut hi = 1;
    for lo in 1..=n / k {
        hi = hi.max(lo);
        while hi <= n && !feasible(lo, hi) {
            hi += 1;
        }
        if hi > n {
            break;
        }
        match (hi - lo).cmp(&best) {
            std::cmp::Ordering::Less => {
                best = hi - lo;
                windows = vec![(lo, hi)];
            }
            std::cmp::Ordering::Equal => windows.push((lo, hi)),
            std::cmp::Ordering::Greater => {}
        }
    }
    let cut = windows
        .into_iter()
        .map(|(lo, hi)| lexicographic_cut(t, &r, k, lo, hi))
        .min()
        .expect("a window with hi = N is always feasible");
    Ok(SplitResult::from_cut(t, cut))
}

/// Smallest cut (as a sorted id list) with all components in `[lo, hi]`,
/// fixing edges one at a time in id order.
fn lexicographic_cut(t: &SpanningTree, r: &RootedTree, k: usize, lo: usize, hi: usize) -> Vec<usize> {
    let mut forced = vec![Force::Free; t.edges().len()];
    let mut chosen = 0;
    for slot in 0..forced.len() {
        if chosen == k - 1 {
            forced[slot] = Force::Keep;
            continue;
        }
        forced[slot] = Force::Cut;
        if WindowDp::new(t, r, k, lo, hi, &forced).feasible() {
            chosen += 1;
        } else {
            forced[slot] = Force::Keep;
        }
    }
    let cut: Vec<usize> = (0..forced.len()).filter(|&s| forced[s] == Force::Cut).map(|s| t.edges()[s].id).collect();
    debug_assert_eq!(cut.len(), k - 1);
    cut
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Force {
    Free,
    Cut,
    Keep,
}

/// Fixed-width bitset over component orders `0..=cap`.
#[derive(Debug, Clone)]
struct Bits {
    words: Vec<u64>,
    cap: usize,
}

impl Bits {
    fn new(cap: usize) -> Self {
        Bits { words: vec![0; cap / 64 + 1], cap }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        i <= self.cap && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn any_in(&self, lo: usize, hi: usize) -> bool {
        self.ones().any(|i| i >= lo && i <= hi)
    }

    /// `self |= other`.
    fn or(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        self.trim();
    }

    /// `self |= other << shift`, truncated to `cap`.
    fn or_shifted(&mut self, other: &Bits, shift: usize) {
        let (ws, bs) = (shift / 64, shift % 64);
        for (i, &w) in other.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let j = i + ws;
            if j >= self.words.len() {
                break;
            }
            self.words[j] |= w << bs;
            if bs != 0 && j + 1 < self.words.len() {
                self.words[j + 1] |= w >> (64 - bs);
            }
        }
        self.trim();
    }

    fn trim(&mut self) {
        let extra = self.cap % 64 + 1;
        if extra < 64 {
            *self.words.last_mut().unwrap() &= (1u64 << extra) - 1;
        }
    }
}

/// Per vertex and per number of completed components, the set of possible
/// orders of the component still containing the vertex.
type Table = Vec<Bits>;

/// Tree DP deciding whether `k - 1` cuts can leave every component with an
/// order in `[lo, hi]`. Partial tables after each child are kept for witness
/// extraction.
struct WindowDp<'a> {
    t: &'a SpanningTree,
    r: &'a RootedTree,
    k: usize,
    lo: usize,
    hi: usize,
    forced: &'a [Force],
    /// `partials[v][i]`: table of `v` after merging its first `i` children.
    partials: Vec<Vec<Table>>,
}

impl<'a> WindowDp<'a> {
    fn new(t: &'a SpanningTree, r: &'a RootedTree, k: usize, lo: usize, hi: usize, forced: &'a [Force]) -> Self {
        let mut dp = WindowDp { t, r, k, lo, hi, forced, partials: vec![Vec::new(); t.num_vertices()] };
        dp.run();
        dp
    }

    fn run(&mut self) {
        let n = self.t.num_vertices();
        let k = self.k;
        for &v in self.r.order.iter().rev() {
            let mut cur: Table = (0..k).map(|_| Bits::new(1.min(self.hi))).collect();
            if self.hi >= 1 {
                cur[0].set(1);
            }
            let mut partial = Vec::with_capacity(self.r.children[v].len() + 1);
            let mut cap = 1;
            for &w in &self.r.children[v] {
                let child = self.partials[w].last().unwrap();
                let force = self.forced[self.r.parent_edge[w]];
                let child_cap = child[0].cap;
                let new_cap = (cap + child_cap).min(self.hi).min(n);
                let mut next: Table = (0..k).map(|_| Bits::new(new_cap)).collect();
                for ca in 0..k {
                    if cur[ca].is_empty() {
                        continue;
                    }
                    for cw in 0..k - ca {
                        if child[cw].is_empty() {
                            continue;
                        }
                        if force != Force::Cut {
                            for rw in child[cw].ones() {
                                next[ca + cw].or_shifted(&cur[ca], rw);
                            }
                        }
                        if force != Force::Keep && ca + cw + 1 < k && child[cw].any_in(self.lo, self.hi) {
                            let mut widened = Bits::new(new_cap);
                            widened.or(&cur[ca]);
                            next[ca + cw + 1].or(&widened);
                        }
                    }
                }
                partial.push(std::mem::replace(&mut cur, next));
                cap = new_cap;
            }
            partial.push(cur);
            self.partials[v] = partial;
        }
    }

    fn root_table(&self) -> &Table {
        self.partials[self.r.root].last().unwrap()
    }

    fn feasible(&self) -> bool {
        self.root_table()[self.k - 1].any_in(self.lo, self.hi)
    }

    fn witness(&self) -> Option<Vec<usize>> {
        let rr = self.root_table()[self.k - 1].ones().find(|&x| x >= self.lo && x <= self.hi)?;
        let mut cut = Vec::new();
        let mut stack = vec![(self.r.root, self.k - 1, rr)];
        while let Some((v, c, size)) = stack.pop() {
            self.unwind(v, c, size, &mut cut, &mut stack);
        }
        Some(cut)
    }

    /// Walks back through `v`'s children from last to first, picking for each
    /// a child state and cut decision consistent with the earlier partial
    /// table, and queues the child states.
    #[allow(clippy::mut_range_bound)]
    fn unwind(
        &self,
        v: usize,
        mut c: usize,
        mut size: usize,
        cut: &mut Vec<usize>,
        stack: &mut Vec<(usize, usize, usize)>,
    ) {
        let children = &self.r.children[v];
        let partial = &self.partials[v];
        'child: for (i, &w) in children.iter().enumerate().rev() {
            let before = &partial[i];
            let child = self.partials[w].last().unwrap();
            let force = self.forced[self.r.parent_edge[w]];
            for cw in 0..=c {
                if child[cw].is_empty() {
                    continue;
                }
                if force != Force::Cut {
                    for rw in child[cw].ones() {
                        if rw < size && before[c - cw].get(size - rw) {
                            stack.push((w, cw, rw));
                            c -= cw;
                            size -= rw;
                            continue 'child;
                        }
                    }
                }
                if force != Force::Keep && cw < c && before[c - cw - 1].get(size) {
                    if let Some(rw) = child[cw].ones().find(|&x| x >= self.lo && x <= self.hi) {
                        stack.push((w, cw, rw));
                        cut.push(self.t.edges()[self.r.parent_edge[w]].id);
                        c -= cw + 1;
                        continue 'child;
                    }
                }
            }
            unreachable!("partial tables are consistent");
        }
        debug_assert!(c == 0 && size == 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use proptest::prelude::*;

    fn path(n: usize) -> SpanningTree {
        let g = Graph::new(n, (0..n - 1).map(|i| (i, i + 1)).collect()).unwrap();
        SpanningTree::from_host_edges(&g, 0..n - 1).unwrap()
    }

    fn star(leaves: usize) -> SpanningTree {
        let g = Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i)).collect()).unwrap();
        SpanningTree::from_host_edges(&g, 0..leaves).unwrap()
    }

    /// Random labelled tree: vertex `i` attaches to a uniform earlier vertex,
    /// then labels are shuffled.
    fn random_tree(n: usize, seed: u64) -> SpanningTree {
        use rand::seq::SliceRandom;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut label: Vec<usize> = (0..n).collect();
        label.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (label[rng.gen_range(0..i)], label[i])).collect();
        edges.shuffle(&mut rng);
        let g = Graph::new(n, edges).unwrap();
        SpanningTree::from_host_edges(&g, 0..n - 1).unwrap()
    }

    fn subsets(ids: &[usize], size: usize) -> Vec<Vec<usize>> {
        if size == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in 0..ids.len() {
            for mut rest in subsets(&ids[i + 1..], size - 1) {
                rest.insert(0, ids[i]);
                out.push(rest);
            }
        }
        out
    }

    /// Every (k-1)-subset of tree edges with its component sizes.
    fn brute(t: &SpanningTree, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let ids: Vec<usize> = t.edge_ids().collect();
        subsets(&ids, k - 1)
            .into_iter()
            .map(|s| {
                let sizes = component_sizes(t, &s).unwrap();
                (s, sizes)
            })
            .collect()
    }

    #[test]
    fn small_examples() {
        let p4 = find_balanced_split(&path(4), 2).unwrap().unwrap();
        assert_eq!((p4.cut_edges, p4.component_sizes), (vec![1], vec![2, 2]));
        assert!(find_balanced_split(&star(3), 2).unwrap().is_none());
        assert!(matches!(find_balanced_split(&path(5), 2), Err(Error::NotDivisible { .. })));

        let a = find_approx_split(&path(5), 2, 0.25).unwrap().unwrap();
        assert_eq!(a.component_sizes, vec![2, 3]);
        assert!(find_approx_split(&path(5), 2, 0.1).unwrap().is_none());

        assert_eq!(find_min_imbalance_split(&path(5), 2).unwrap().imbalance, 1);
        assert_eq!(find_min_imbalance_split(&star(3), 2).unwrap().imbalance, 2);
    }

    #[test]
    fn component_size_examples() {
        assert_eq!(component_sizes(&path(4), &[1]).unwrap(), vec![2, 2]);
        assert_eq!(component_sizes(&path(4), &[]).unwrap(), vec![4]);
        assert_eq!(component_sizes(&path(6), &[1, 3]).unwrap(), vec![2, 2, 2]);
        assert!(matches!(component_sizes(&path(4), &[9]), Err(Error::EdgeNotInTree(9))));
    }

    #[test]
    fn agrees_with_brute_force() {
        for seed in 0..300 {
            let n = 2 + (seed as usize % 13);
            let t = random_tree(n, seed);
            for k in [2usize, 3] {
                if k > n {
                    continue;
                }
                let all = brute(&t, k);
                if n.is_multiple_of(k) {
                    let balanced: Vec<_> = all.iter().filter(|(_, s)| s.iter().all(|&x| x == n / k)).collect();
                    assert!(balanced.len() <= 1);
                    let got = find_balanced_split(&t, k).unwrap();
                    assert_eq!(got.map(|r| r.cut_edges), balanced.first().map(|b| b.0.clone()));
                }
                for eps in [0.05, 0.2, 0.5] {
                    let (lo, hi) = approx_bounds(n, k, eps);
                    let exists = all.iter().any(|(_, s)| s.iter().all(|&x| x >= lo && x <= hi));
                    let got = find_approx_split(&t, k, eps).unwrap();
                    assert_eq!(got.is_some(), exists, "seed {seed} k {k} eps {eps}");
                    if let Some(r) = got {
                        assert!(r.component_sizes.iter().all(|&x| x >= lo && x <= hi));
                        assert_eq!(component_sizes(&t, &r.cut_edges).unwrap(), r.component_sizes);
                    }
                }
                let best = all.iter().map(|(c, s)| (s.last().unwrap() - s[0], c.clone())).min().unwrap();
                let got = find_min_imbalance_split(&t, k).unwrap();
                assert_eq!((got.imbalance, got.cut_edges), best, "seed {seed} k {k}");
            }
        }
    }

    proptest! {
        #[test]
        fn approx_is_monotone_in_epsilon(seed in 0u64..10_000, n in 3usize..40, k in 2usize..5, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
            prop_assume!(k <= n);
            let t = random_tree(n, seed);
            let (small, large) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            if find_approx_split(&t, k, large).unwrap().is_none() {
                prop_assert!(find_approx_split(&t, k, small).unwrap().is_none());
            }
        }

        #[test]
        fn zero_imbalance_iff_balanced(seed in 0u64..10_000, parts in 1usize..5, size in 1usize..8) {
            let n = parts * size;
            prop_assume!(n >= 2);
            let t = random_tree(n, seed);
            let min = find_min_imbalance_split(&t, parts).unwrap();
            let bal = find_balanced_split(&t, parts).unwrap();
            prop_assert_eq!(min.imbalance == 0, bal.is_some());
            prop_assert_eq!(component_sizes(&t, &min.cut_edges).unwrap(), min.component_sizes);
        }
    }
}
