//! W-random hypergraphs and Monte-Carlo density estimates.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{DenseKernel, Strategy};
use crate::error::{invalid, Result};
use crate::hypergraph::{k_subsets, Hypergraph};
use crate::kernel::{KernelRange, SymmetricKernel};
use crate::rational::{int, to_f64};

/// Generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn check_probabilities(w: &SymmetricKernel) -> Result<()> {
    let one = int(1);
    for (_, v) in w.entries() {
        if v < int(0) || v > one {
            return invalid(format!("weight {v} is not a probability"));
        }
    }
    Ok(())
}

/// Draws `n` atoms by mass, then keeps each `r`-subset of `0..n` as an edge
/// with probability equal to its weight.
pub fn sample_hypergraph(w: &SymmetricKernel, n: usize, seed: u64) -> Result<Hypergraph> {
    check_probabilities(w)?;
    sample_with(w, n, &mut trial_rng(seed, 0))
}

fn sample_with(w: &SymmetricKernel, n: usize, rng: &mut ChaCha8Rng) -> Result<Hypergraph> {
    let r = w.arity();
    if n < r {
        return invalid(format!("need n >= r, got n={n}, r={r}"));
    }
    let masses: Vec<f64> = w.masses().iter().map(to_f64).collect();
    let pick =
        WeightedIndex::new(&masses).map_err(|e| crate::Error::InvalidInput(e.to_string()))?;
    let atoms: Vec<usize> = (0..n).map(|_| pick.sample(rng)).collect();
    let table: Vec<f64> = w.dense_table()?.iter().map(to_f64).collect();
    let a = w.atom_count();
    let vertices: Vec<usize> = (0..n).collect();
    let mut edges = Vec::new();
    let mut tuple = vec![0; r];
    for e in k_subsets(&vertices, r) {
        for (t, &v) in tuple.iter_mut().zip(&e) {
            *t = atoms[v];
        }
        let p = table[crate::kernel::index_of(&tuple, a)];
        if p >= 1.0 || (p > 0.0 && rng.gen_bool(p)) {
            edges.push(e);
        }
    }
    Hypergraph::new(r, n, edges)
}

/// Uniform kernel on the vertices of `g`: weight 1 on edges, 0 elsewhere
/// (including tuples with a repeated vertex).
pub fn hypergraph_kernel(g: &Hypergraph) -> Result<SymmetricKernel> {
    let entries: Vec<_> = g.edges().iter().map(|e| (e.clone(), int(1))).collect();
    SymmetricKernel::from_entries(
        g.uniformity(),
        SymmetricKernel::uniform_masses(g.vertex_count()),
        &entries,
        KernelRange::Nonnegative,
    )
}

fn hypergraph_kernel_f64(g: &Hypergraph) -> Result<DenseKernel<f64>> {
    let (n, r) = (g.vertex_count(), g.uniformity());
    let len = n
        .checked_pow(r as u32)
        .filter(|&l| l as u128 <= crate::density::FACTOR_BUDGET)
        .ok_or_else(|| crate::Error::Resource(format!("{n}^{r} adjacency table is too large")))?;
    let mut table = vec![0.0; len];
    for e in g.edges() {
        for_each_permutation(e, |p| table[crate::kernel::index_of(p, n)] = 1.0);
    }
    Ok(DenseKernel {
        arity: r,
        masses: vec![1.0 / n as f64; n],
        table,
    })
}

fn for_each_permutation(items: &[usize], mut visit: impl FnMut(&[usize])) {
    fn rec(k: usize, xs: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if k == xs.len() {
            visit(xs);
            return;
        }
        for i in k..xs.len() {
            xs.swap(k, i);
            rec(k + 1, xs, visit);
            xs.swap(k, i);
        }
    }
    rec(0, &mut items.to_vec(), &mut visit);
}

/// Injective density of `H` in a 0/1 kernel that vanishes on repeated
/// vertices, by Möbius inversion over the partitions of `V(H)`: merging two
/// vertices of a common edge gives zero, so only partitions whose blocks are
/// independent in the 2-shadow are visited.
pub fn injective_density(h: &Hypergraph, g: &DenseKernel<f64>) -> Result<f64> {
    let v = h.vertex_count();
    let n = g.atom_count();
    if n < v {
        return Ok(0.0);
    }
    let shadow = h.adjacency();
    let mut labels = vec![0usize; v];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut total = 0.0;
    let mut err = None;
    partitions(0, &shadow, &mut labels, &mut blocks, &mut |labels, blocks| {
        let mut mu = 1.0;
        for b in blocks.iter() {
            // (-1)^(|B|-1) (|B|-1)!
            for j in 1..b.len() {
                mu *= -(j as f64);
            }
        }
        match quotient(h, labels, blocks.len()).and_then(|q| g.density(&q, Strategy::Auto)) {
            Ok(t) => total += mu * t * (n as f64).powi(blocks.len() as i32),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let falling: f64 = (0..v).map(|i| (n - i) as f64).product();
    Ok(total / falling)
}

type Visit<'a> = dyn FnMut(&[usize], &[Vec<usize>]) + 'a;

fn partitions(
    u: usize,
    shadow: &[Vec<usize>],
    labels: &mut Vec<usize>,
    blocks: &mut Vec<Vec<usize>>,
    visit: &mut Visit,
) {
    if u == labels.len() {
        visit(labels, blocks);
        return;
    }
    for b in 0..blocks.len() {
        if blocks[b].iter().all(|x| !shadow[u].contains(x)) {
            blocks[b].push(u);
            labels[u] = b;
            partitions(u + 1, shadow, labels, blocks, visit);
            blocks[b].pop();
        }
    }
    blocks.push(vec![u]);
    labels[u] = blocks.len() - 1;
    partitions(u + 1, shadow, labels, blocks, visit);
    blocks.pop();
}

/// `H` with vertex `u` renamed `labels[u]`; edges that coincide are kept once,
/// which is harmless against a 0/1 kernel.
fn quotient(h: &Hypergraph, labels: &[usize], count: usize) -> Result<Hypergraph> {
    let mut edges: Vec<Vec<usize>> = h
        .edges()
        .iter()
        .map(|e| {
            let mut q: Vec<usize> = e.iter().map(|&x| labels[x]).collect();
            q.sort_unstable();
            q
        })
        .collect();
    edges.sort();
    edges.dedup();
    Hypergraph::new(h.uniformity(), count, edges)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
    pub n: usize,
    pub seed: u64,
}

/// Which density of the sample is averaged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    /// All maps `V(H) -> V(G_n)`; biased by `O(1/n)` through maps that repeat
    /// a vertex.
    Homomorphism,
    /// Injective maps only; its expectation is exactly `t_H(W)`.
    Injective,
}

/// Mean of `t_H(G_n)` over independent samples `G_n` of `W`; trial `i` uses
/// stream `i` of the seeded generator, so results do not depend on
/// scheduling.
pub fn estimate_density(
    h: &Hypergraph,
    w: &SymmetricKernel,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<DensityEstimate> {
    estimate_density_with(h, w, n, trials, seed, DensityKind::Homomorphism)
}

pub fn estimate_density_with(
    h: &Hypergraph,
    w: &SymmetricKernel,
    n: usize,
    trials: usize,
    seed: u64,
    kind: DensityKind,
) -> Result<DensityEstimate> {
    check_probabilities(w)?;
    if trials == 0 {
        return invalid("need at least one trial");
    }
    if h.uniformity() != w.arity() {
        return invalid("kernel arity does not match uniformity");
    }
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let g = sample_with(w, n, &mut trial_rng(seed, i as u64))?;
            let k = hypergraph_kernel_f64(&g)?;
            match kind {
                DensityKind::Homomorphism => k.density(h, Strategy::Auto),
                DensityKind::Injective => injective_density(h, &k),
            }
        })
        .collect::<Result<_>>()?;
    let mean = values.iter().sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    Ok(DensityEstimate {
        mean,
        std_error: (var / trials as f64).sqrt(),
        trials,
        n,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn constant_kernels_give_complete_and_empty() {
        let full = sample_hypergraph(&SymmetricKernel::constant(3, int(1)).unwrap(), 7, 1).unwrap();
        assert_eq!(full.edge_count(), 35);
        let none = sample_hypergraph(&SymmetricKernel::constant(3, int(0)).unwrap(), 7, 1).unwrap();
        assert_eq!(none.edge_count(), 0);
    }

    #[test]
    fn sampling_is_reproducible() {
        let w = SymmetricKernel::constant(3, rat(1, 2)).unwrap();
        assert_eq!(
            sample_hypergraph(&w, 20, 9).unwrap(),
            sample_hypergraph(&w, 20, 9).unwrap()
        );
        assert_ne!(
            sample_hypergraph(&w, 20, 9).unwrap(),
            sample_hypergraph(&w, 20, 10).unwrap()
        );
    }

    #[test]
    fn rejects_non_probabilities() {
        let w = SymmetricKernel::constant(3, rat(3, 2)).unwrap();
        assert!(sample_hypergraph(&w, 5, 0).is_err());
        assert!(sample_hypergraph(&SymmetricKernel::constant(3, int(1)).unwrap(), 2, 0).is_err());
    }

    #[test]
    fn half_density_sample() {
        let w = SymmetricKernel::constant(3, rat(1, 2)).unwrap();
        let g = sample_hypergraph(&w, 200, 3).unwrap();
        let total = 200.0 * 199.0 * 198.0 / 6.0;
        let p = g.edge_count() as f64 / total;
        let sigma = (0.25 / total).sqrt();
        assert!((p - 0.5).abs() < 5.0 * sigma, "density {p}");
    }

    #[test]
    fn injective_density_matches_direct_count() {
        let g = crate::hypergraph::tight_cycle(6, 3).unwrap();
        let k = hypergraph_kernel_f64(&g).unwrap();
        // injective copies of a single edge: 3! orderings of each of 6 edges
        let e = Hypergraph::single_edge(3).unwrap();
        let want = 36.0 / (6.0 * 5.0 * 4.0);
        assert!((injective_density(&e, &k).unwrap() - want).abs() < 1e-12);
        // injective maps of the loose triangle into C_6^(3), by brute force
        let lt = crate::hypergraph::loose_triangle(3).unwrap();
        let mut count = 0u64;
        let mut map = vec![0usize; 6];
        fn rec(i: usize, map: &mut Vec<usize>, used: u32, lt: &Hypergraph, g: &Hypergraph, count: &mut u64) {
            if i == 6 {
                let hit = lt.edges().iter().all(|e| {
                    let mut img: Vec<usize> = e.iter().map(|&x| map[x]).collect();
                    img.sort_unstable();
                    g.edges().contains(&img)
                });
                *count += hit as u64;
                return;
            }
            for x in 0..6 {
                if used & (1 << x) == 0 {
                    map[i] = x;
                    rec(i + 1, map, used | 1 << x, lt, g, count);
                }
            }
        }
        rec(0, &mut map, 0, &lt, &g, &mut count);
        let want = count as f64 / 720.0;
        assert!((injective_density(&lt, &k).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn injective_estimate_is_unbiased_for_an_edge() {
        let w = SymmetricKernel::constant(3, rat(1, 2)).unwrap();
        let e = Hypergraph::single_edge(3).unwrap();
        let est = estimate_density_with(&e, &w, 40, 20, 5, DensityKind::Injective).unwrap();
        assert!((est.mean - 0.5).abs() < 5.0 * est.std_error);
        let hom = estimate_density(&e, &w, 40, 20, 5).unwrap();
        assert!(hom.mean < est.mean);
    }

    #[test]
    fn graph_kernel_counts_labelled_homomorphisms() {
        let g = crate::hypergraph::tight_cycle(5, 2).unwrap();
        let k = hypergraph_kernel(&g).unwrap();
        let e = Hypergraph::single_edge(2).unwrap();
        assert_eq!(
            crate::density::t_density(&e, &k, Strategy::Auto).unwrap(),
            rat(10, 25)
        );
        let f = hypergraph_kernel_f64(&g)
            .unwrap()
            .density(&e, Strategy::Auto)
            .unwrap();
        assert!((f - 0.4).abs() < 1e-12);
    }
}
