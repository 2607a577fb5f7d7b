use std::collections::HashMap;

use treesplit::enumerate::enumerate_spanning_trees;
use treesplit::experiments::splittability;
use treesplit::experiments::stats::total_variation;
use treesplit::*;

/// Exact law of balanced 2-partitions, keyed by the class holding vertex 0,
/// with weight the product of the classes' spanning tree counts.
fn halving_law(g: &Graph) -> HashMap<Vec<usize>, f64> {
    let n = g.num_vertices();
    let mut law = HashMap::new();
    for mask in (1u32..1 << n).step_by(2) {
        if mask.count_ones() as usize != n / 2 {
            continue;
        }
        let a: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let b: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 0).collect();
        let w = enumerate_spanning_trees(&g.induced(&a).0).unwrap().len()
            * enumerate_spanning_trees(&g.induced(&b).0).unwrap().len();
        if w > 0 {
            law.insert(a, w as f64);
        }
    }
    let total: f64 = law.values().sum();
    law.values_mut().for_each(|w| *w /= total);
    law
}

#[test]
fn updown_matches_the_tree_weighted_law() {
    let g = build_grid(3, 4).unwrap();
    let law = halving_law(g.graph());
    let keys: Vec<&Vec<usize>> = law.keys().collect();
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    let mut rng = RngStream::new(12, 0);
    let mut sampler = UpDownSampler::new(g.graph(), 2, 2.0, &mut rng).unwrap();
    let samples = 4000;
    for _ in 0..samples {
        let (p, _) = sampler.sample(&mut rng).unwrap();
        let class = p.classes()[0].clone();
        assert!(law.contains_key(&class), "{class:?}");
        *counts.entry(class).or_default() += 1;
    }
    let observed: Vec<f64> = keys.iter().map(|k| *counts.get(*k).unwrap_or(&0) as f64 / samples as f64).collect();
    let expected: Vec<f64> = keys.iter().map(|k| law[*k]).collect();
    let tv = total_variation(&observed, &expected);
    assert!(tv <= 0.08, "TV {tv}");
}

#[test]
fn perfect_samples_are_connected_halves() {
    let g = build_grid(4, 4).unwrap();
    let perfect = PerfectSampler::new(&g, 2).unwrap();
    for t in 0..50 {
        let (p, report) = perfect.sample(&mut RngStream::new(13, t)).unwrap();
        assert_eq!(report.accepted, 1);
        assert!(p.classes().iter().all(|c| c.len() == 8));
        assert!(p.classes().iter().all(|c| g.graph().induced(c).0.is_connected()));
    }
}

#[test]
fn three_parts_of_six_by_six() {
    // Only positivity is checked; the constants in the k >= 3 bounds are unknown.
    let est = splittability(6, 6, 3, 20_000, 14, 2).unwrap();
    assert!(est.successes > 0);
    let g = build_grid(6, 6).unwrap();
    let (p, _) = perfect_balanced_sample(&g, 3, &mut RngStream::new(15, 0)).unwrap();
    assert_eq!(p.classes().len(), 3);
    assert!(p.classes().iter().all(|c| c.len() == 12 && g.graph().induced(c).0.is_connected()));
}
