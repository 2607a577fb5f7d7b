//! Whether a partition of a lattice region follows the faces of a drawing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::stats::{run_trials, Estimate};
use crate::geometry::{point_polygon_distance, Point};
use crate::lattice::drawing::PlaneGraphD;
use crate::lattice::region::{build_lattice_region, LatticeKind, LatticeRegion};
use crate::rng::RngStream;
use crate::tree::SpanningTree;
use crate::walks::DualWilson;

/// Largest number of faces matched by exhaustive search.
pub const MAX_FACES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Compatibility {
    pub compatible: bool,
    /// Face assigned to each class.
    pub assignment: Vec<usize>,
    /// Per class, the largest vertex distance to its assigned face.
    pub max_distance: Vec<f64>,
}

/// Distance from each vertex to each inner face of `d`, `[vertex][face]`.
pub fn face_distances(points: &[Point], d: &PlaneGraphD) -> Vec<Vec<f64>> {
    points.iter().map(|&p| (0..d.num_faces()).map(|f| point_polygon_distance(p, d.face_polygon(f))).collect()).collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    fn heap(n: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n <= 1 {
            out.push(perm.clone());
            return;
        }
        for i in 0..n {
            heap(n - 1, perm, out);
            let j = if n.is_multiple_of(2) { i } else { 0 };
            perm.swap(j, n - 1);
        }
    }
    heap(k, &mut perm, &mut out);
    out.sort();
    out
}

/// Checks every vertex of class `i` is within `epsilon` of the face matched
/// to it.
///
/// Classes are matched to faces by trying every bijection and keeping the
/// one whose worst class distance is smallest, with ties going to the
/// smallest total vertex-to-face distance. The partition is compatible
/// exactly when some bijection works.
pub fn epsilon_compatible(
    region: &LatticeRegion,
    classes: &[Vec<usize>],
    d: &PlaneGraphD,
    epsilon: f64,
) -> Result<Compatibility> {
    let k = d.num_faces();
    if classes.len() != k {
        return Err(Error::FaceCountMismatch { classes: classes.len(), faces: k });
    }
    if k > MAX_FACES {
        return Err(Error::InvalidParameter(format!("{k} faces exceed the matching limit {MAX_FACES}")));
    }
    let pos = region.embedding.positions();
    // worst[i][f], total[i][f] over the vertices of class i.
    let mut worst = vec![vec![0.0f64; k]; k];
    let mut total = vec![vec![0.0f64; k]; k];
    for (i, class) in classes.iter().enumerate() {
        for &v in class {
            let p = *pos.get(v).ok_or_else(|| Error::InvalidPartition(format!("vertex {v} out of range")))?;
            for f in 0..k {
                let dist = point_polygon_distance(p, d.face_polygon(f));
                worst[i][f] = worst[i][f].max(dist);
                total[i][f] += dist;
            }
        }
    }
    let best = permutations(k)
        .into_iter()
        .map(|perm| {
            let w = (0..k).map(|i| worst[i][perm[i]]).fold(0.0, f64::max);
            let t: f64 = (0..k).map(|i| total[i][perm[i]]).sum();
            (w, t, perm)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)))
        .expect("at least one face");
    let assignment = best.2;
    let max_distance: Vec<f64> = (0..k).map(|i| worst[i][assignment[i]]).collect();
    Ok(Compatibility { compatible: best.0 <= epsilon, assignment, max_distance })
}

/// Decides whether some `k - 1` edges of `tree` split it into components
/// that can be matched one-to-one with the faces so every vertex is within
/// reach of its component's face. `allowed[v]` is the bitmask of faces
/// vertex `v` may belong to.
///
/// Tree DP: for a vertex and each label of its open component, the set of
/// label sets already used by closed components below it, as a bitmask
/// over subsets.
pub fn has_compatible_split(tree: &SpanningTree, allowed: &[u8], k: usize) -> bool {
    assert!((1..=6).contains(&k), "compatible split search supports 1..=6 faces");
    let r = tree.rooted(0);
    let n = tree.num_vertices();
    let full = (1u32 << k) - 1;
    // table[v][f]: bitset over used-label masks.
    let mut table = vec![[0u64; 6]; n];
    for &v in r.order.iter().rev() {
        let mut cur = [0u64; 6];
        for (f, slot) in cur.iter_mut().enumerate().take(k) {
            if allowed[v] >> f & 1 == 1 {
                *slot = 1; // only the empty mask
            }
        }
        for &w in &r.children[v] {
            let child = table[w];
            // Labels the child's subtree can close with: any open label f_w
            // together with its used set, as masks including f_w.
            let mut closed = 0u64;
            for (fw, &sets) in child.iter().enumerate().take(k) {
                for s in ones(sets) {
                    if s >> fw & 1 == 0 {
                        closed |= 1 << (s | 1 << fw);
                    }
                }
            }
            let mut next = [0u64; 6];
            for f in 0..k {
                if cur[f] == 0 {
                    continue;
                }
                for sa in ones(cur[f]) {
                    // Keep the edge: the child's open component joins ours.
                    for sw in ones(child[f]) {
                        if sa & sw == 0 && (sa | sw) >> f & 1 == 0 {
                            next[f] |= 1 << (sa | sw);
                        }
                    }
                    // Cut the edge: the child's component closes.
                    for sc in ones(closed) {
                        if sa & sc == 0 && sc >> f & 1 == 0 {
                            next[f] |= 1 << (sa | sc);
                        }
                    }
                }
            }
            cur = next;
        }
        table[v] = cur;
    }
    let root = table[r.root];
    (0..k).any(|f| ones(root[f]).any(|s| s | 1 << f == full))
}

fn ones(mut w: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if w == 0 {
            return None;
        }
        let b = w.trailing_zeros();
        w &= w - 1;
        Some(b)
    })
}

/// Per-vertex bitmask of faces within `epsilon`.
pub fn allowed_faces(distances: &[Vec<f64>], epsilon: f64) -> Vec<u8> {
    distances
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, &x)| x <= epsilon).fold(0u8, |m, (f, _)| m | 1 << f))
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompatibilityRun {
    pub kind: LatticeKind,
    pub n: usize,
    pub epsilon: f64,
    pub vertices: usize,
    pub boundary_distance: f64,
    pub estimate: Estimate,
}

/// Frequency with which a uniform spanning tree of the region (wired
/// boundary) has `k - 1` edges whose removal leaves components compatible
/// with the faces of `d`. Trial `t` uses stream `(seed, t)`.
#[allow(clippy::too_many_arguments)]
pub fn compatibility_experiment(
    kind: LatticeKind,
    n: usize,
    d: &PlaneGraphD,
    delta: f64,
    epsilon: f64,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<CompatibilityRun> {
    if d.num_faces() > 6 {
        return Err(Error::InvalidParameter("at most 6 faces are supported".into()));
    }
    let region = build_lattice_region(kind, n, d, delta)?;
    let allowed = allowed_faces(&face_distances(region.embedding.positions(), d), epsilon);
    let k = d.num_faces();
    let successes = run_trials(
        trials,
        workers,
        || DualWilson::new(&region.dual),
        || 0u64,
        |walker, t, hits| {
            let mut rng = RngStream::new(seed, t);
            let tree = walker.sample(&[], &mut rng)?.tree;
            *hits += u64::from(has_compatible_split(&tree, &allowed, k));
            Ok(())
        },
    )?;
    Ok(CompatibilityRun {
        kind,
        n,
        epsilon,
        vertices: region.embedding.num_vertices(),
        boundary_distance: region.boundary_distance,
        estimate: Estimate::new(successes, trials),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::lattice::drawing::vertical_strips;
    use crate::splitting::component_sizes;

    fn halves() -> PlaneGraphD {
        vertical_strips(2, 1.0, 1.0).unwrap()
    }

    fn region10() -> LatticeRegion {
        build_lattice_region(LatticeKind::Square, 10, &halves(), 0.1).unwrap()
    }

    #[test]
    fn column_split_is_compatible() {
        let r = region10();
        let pos = r.embedding.positions();
        let (left, right): (Vec<usize>, Vec<usize>) = (0..100).partition(|&v| pos[v].x < 0.5);
        let c = epsilon_compatible(&r, &[right.clone(), left.clone()], &halves(), 0.15).unwrap();
        assert!(c.compatible);
        assert_eq!(c.assignment, vec![1, 0]);
        assert!(epsilon_compatible(&r, &[left, right], &halves(), 2f64.sqrt()).unwrap().compatible);
    }

    #[test]
    fn whole_region_is_not_one_face() {
        let r = region10();
        let single = vertical_strips(1, 1.0, 1.0).unwrap();
        let all: Vec<usize> = (0..100).collect();
        assert!(epsilon_compatible(&r, std::slice::from_ref(&all), &single, 0.01).unwrap().compatible);
        assert!(matches!(epsilon_compatible(&r, &[all], &halves(), 0.01), Err(Error::FaceCountMismatch { .. })));
        let top: Vec<usize> = (0..50).collect();
        let bottom: Vec<usize> = (50..100).collect();
        assert!(!epsilon_compatible(&r, &[top, bottom], &halves(), 0.1).unwrap().compatible);
    }

    #[test]
    fn split_search_matches_brute_force() {
        // Random trees with random allowed masks against trying every cut.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(2..10);
            let k = rng.gen_range(1..=3usize.min(n));
            let edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
            let g = Graph::new(n, edges).unwrap();
            let t = SpanningTree::from_host_edges(&g, 0..n - 1).unwrap();
            let allowed: Vec<u8> = (0..n).map(|_| rng.gen_range(0..1u8 << k)).collect();
            let mut brute = false;
            for mask in 0u32..1 << (n - 1) {
                if mask.count_ones() as usize != k - 1 {
                    continue;
                }
                let cut: Vec<usize> = (0..n - 1).filter(|&e| mask >> e & 1 == 1).collect();
                let _ = component_sizes(&t, &cut).unwrap();
                let mut ds = crate::graph::DisjointSets::new(n);
                for e in t.edges() {
                    if !cut.contains(&e.id) {
                        ds.union(e.u, e.v);
                    }
                }
                let roots: Vec<usize> = {
                    let mut r: Vec<usize> = (0..n).map(|v| ds.find(v)).collect();
                    r.sort();
                    r.dedup();
                    r
                };
                let masks: Vec<u8> = roots
                    .iter()
                    .map(|&root| (0..n).filter(|&v| ds.find(v) == root).fold((1u8 << k) - 1, |m, v| m & allowed[v]))
                    .collect();
                if permutations(k).iter().any(|p| (0..k).all(|i| masks[i] >> p[i] & 1 == 1)) {
                    brute = true;
                    break;
                }
            }
            assert_eq!(has_compatible_split(&t, &allowed, k), brute);
        }
    }

    #[test]
    fn trivial_experiments_always_succeed() {
        let single = vertical_strips(1, 1.0, 1.0).unwrap();
        let run = compatibility_experiment(LatticeKind::Square, 6, &single, 0.2, 0.01, 50, 1, 1).unwrap();
        assert_eq!(run.estimate.successes, 50);
        let d = halves();
        let run = compatibility_experiment(LatticeKind::Square, 6, &d, 0.2, d.diameter(), 50, 1, 1).unwrap();
        assert_eq!(run.estimate.successes, 50);
    }
}
