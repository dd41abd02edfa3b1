//! Randomised searches for signed kernels with negative homomorphism
//! densities. Floating point only guides the search: every returned witness
//! has been re-evaluated exactly after rounding to denominators of 2^16.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{bipartite_model, t_density, t_levi, DenseKernel, Strategy};
use crate::error::{invalid, Result};
use crate::hypergraph::Hypergraph;
use crate::kernel::{index_of, multisets, BipartiteKernel, KernelRange, SymmetricKernel};
use crate::rational::{round_to_denominator, Rational};
use crate::sampling::trial_rng;

/// Denominator used when rounding float candidates.
pub const ROUNDING_DENOMINATOR: u64 = 1 << 16;
/// Default number of independent restarts.
pub const DEFAULT_RESTARTS: usize = 8;

const LINE_POINTS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub atom_count: usize,
    /// Coordinate-descent sweeps per restart.
    pub iterations: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Project every candidate onto zero-averaging kernels.
    pub zero_averaging: bool,
}

impl SearchOptions {
    pub fn new(atom_count: usize, iterations: usize, seed: u64) -> Self {
        SearchOptions {
            atom_count,
            iterations,
            seed,
            restarts: DEFAULT_RESTARTS,
            zero_averaging: false,
        }
    }
}

/// A kernel with an exactly verified negative objective.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchWitness {
    pub kernel: SymmetricKernel,
    /// Exact sum of the target densities.
    pub value: Rational,
    pub restart: usize,
}

/// Searches for `f` with values in `[-1, 1]` and `t_G(f) < 0`. `None` means
/// nothing was found, not that `G` is positive.
pub fn negativity_search(
    g: &Hypergraph,
    atom_count: usize,
    iterations: usize,
    seed: u64,
) -> Result<Option<SearchWitness>> {
    search_negative_sum(
        std::slice::from_ref(g),
        &SearchOptions::new(atom_count, iterations, seed),
    )
}

/// Searches for `f` with `sum_i t_{G_i}(f) < 0`; all `G_i` share one
/// uniformity. Restarts run in parallel and the lowest successful restart
/// index wins.
pub fn search_negative_sum(
    gs: &[Hypergraph],
    opts: &SearchOptions,
) -> Result<Option<SearchWitness>> {
    let r = check_targets(gs)?;
    if !(2..=4).contains(&opts.atom_count) {
        return invalid(format!(
            "atom_count must be in 2..=4, got {}",
            opts.atom_count
        ));
    }
    let a = opts.atom_count;
    let cells = multisets(a, r);
    let results: Vec<Option<SearchWitness>> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut rng = trial_rng(opts.seed, restart as u64);
            let start: Vec<f64> = cells.iter().map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let objective = |u: &[f64]| -> f64 {
                let k = float_kernel(r, a, &cells, u, opts.zero_averaging);
                gs.iter()
                    .map(|g| k.density(g, Strategy::Auto).unwrap_or(f64::INFINITY))
                    .sum()
            };
            let (best, val) = coordinate_descent(start, opts.iterations, &objective);
            if val >= 0.0 {
                return None;
            }
            exact_candidate(gs, r, a, &cells, &best, opts.zero_averaging)
                .ok()
                .flatten()
                .map(|(kernel, value)| SearchWitness {
                    kernel,
                    value,
                    restart,
                })
        })
        .collect();
    Ok(results.into_iter().flatten().next())
}

fn check_targets(gs: &[Hypergraph]) -> Result<usize> {
    let r = match gs.first() {
        Some(g) => g.uniformity(),
        None => return invalid("no target hypergraphs"),
    };
    if gs.iter().any(|g| g.uniformity() != r) {
        return invalid("target hypergraphs have different uniformities");
    }
    Ok(r)
}

/// Minimises `objective` one coordinate at a time over a grid of `[-1, 1]`.
fn coordinate_descent(
    mut x: Vec<f64>,
    sweeps: usize,
    objective: &dyn Fn(&[f64]) -> f64,
) -> (Vec<f64>, f64) {
    let mut best = objective(&x);
    for _ in 0..sweeps {
        let before = best;
        for i in 0..x.len() {
            let keep = x[i];
            let mut arg = keep;
            for step in 0..=LINE_POINTS {
                x[i] = -1.0 + 2.0 * step as f64 / LINE_POINTS as f64;
                let v = objective(&x);
                if v < best {
                    best = v;
                    arg = x[i];
                }
            }
            x[i] = arg;
        }
        if best >= before {
            break;
        }
    }
    (x, best)
}

fn float_kernel(
    r: usize,
    a: usize,
    cells: &[Vec<usize>],
    u: &[f64],
    zero_avg: bool,
) -> DenseKernel<f64> {
    let mut table = symmetric_table(r, a, cells, u);
    let masses = vec![1.0 / a as f64; a];
    if zero_avg {
        project_zero_averaging(r, a, &masses, &mut table);
        let scale = 0.5f64.powi(r as i32);
        table.iter_mut().for_each(|t| *t *= scale);
    }
    DenseKernel {
        arity: r,
        masses,
        table,
    }
}

fn symmetric_table<T: Clone + Default>(
    r: usize,
    a: usize,
    cells: &[Vec<usize>],
    u: &[T],
) -> Vec<T> {
    let mut table = vec![T::default(); a.pow(r as u32)];
    let mut tuple = vec![0; r];
    for (idx, slot) in table.iter_mut().enumerate() {
        let mut rest = idx;
        for t in tuple.iter_mut() {
            *t = rest % a;
            rest /= a;
        }
        let mut sorted = tuple.clone();
        sorted.sort_unstable();
        let pos = cells.binary_search(&sorted).expect("multiset cell exists");
        *slot = u[pos].clone();
    }
    table
}

/// Applies `prod_i (I - E_i)` where `E_i` averages coordinate `i`; the result
/// is zero-averaging in every coordinate and stays symmetric.
pub(crate) fn project_zero_averaging<T>(r: usize, a: usize, masses: &[T], table: &mut [T])
where
    T: Clone
        + std::ops::Sub<Output = T>
        + std::ops::Add<Output = T>
        + for<'x> std::ops::Mul<&'x T, Output = T>,
{
    let zero = table[0].clone() - table[0].clone();
    for coord in 0..r {
        let stride = a.pow(coord as u32);
        for idx in 0..table.len() {
            if !(idx / stride).is_multiple_of(a) {
                continue;
            }
            let mut avg = zero.clone();
            for x in 0..a {
                avg = avg + table[idx + x * stride].clone() * &masses[x];
            }
            for x in 0..a {
                table[idx + x * stride] = table[idx + x * stride].clone() - avg.clone();
            }
        }
    }
}

fn exact_candidate(
    gs: &[Hypergraph],
    r: usize,
    a: usize,
    cells: &[Vec<usize>],
    u: &[f64],
    zero_avg: bool,
) -> Result<Option<(SymmetricKernel, Rational)>> {
    let rounded: Vec<Rational> = u
        .iter()
        .map(|&x| round_to_denominator(x.clamp(-1.0, 1.0), ROUNDING_DENOMINATOR))
        .collect();
    let masses = SymmetricKernel::uniform_masses(a);
    let kernel = if zero_avg {
        let mut table = symmetric_table(r, a, cells, &rounded);
        project_zero_averaging(r, a, &masses, &mut table);
        let scale = Rational::new(1.into(), (1i64 << r).into());
        SymmetricKernel::from_fn(r, masses, KernelRange::SignedUnit, |m| {
            &table[index_of(m, a)] * &scale
        })?
    } else {
        SymmetricKernel::from_fn(r, masses, KernelRange::SignedUnit, |m| {
            rounded[cells.binary_search(&m.to_vec()).expect("cell")].clone()
        })?
    };
    let mut value = Rational::from_integer(0.into());
    for g in gs {
        value += t_density(g, &kernel, Strategy::Auto)?;
    }
    Ok((value < Rational::from_integer(0.into())).then_some((kernel, value)))
}

/// A two-variable kernel with an exactly verified negative objective.
#[derive(Clone, Debug, PartialEq)]
pub struct LeviWitness {
    pub f: BipartiteKernel,
    /// Exact `sum_i t_{L(H_i)}(f)`.
    pub value: Rational,
    pub restart: usize,
}

/// Searches for `f(x, y) = (u(x, y) - sum_x' m(x') u(x', y)) / 2` with
/// `sum_i t_{L(H_i)}(f) < 0`. Such `f` average to zero over `x` for every
/// `y`, so its transfer to `r`-variable kernels is zero-averaging.
pub fn levi_negativity_search(
    hs: &[Hypergraph],
    left_atoms: usize,
    right_atoms: usize,
    iterations: usize,
    seed: u64,
    restarts: usize,
) -> Result<Option<LeviWitness>> {
    check_targets(hs)?;
    if !(2..=4).contains(&left_atoms) || !(1..=4).contains(&right_atoms) {
        return invalid("atom counts must be at most 4 (and at least 2 on the left)");
    }
    let levis: Vec<(Hypergraph, usize)> = hs
        .iter()
        .map(|h| (h.levi_graph(), h.vertex_count()))
        .collect();
    let (la, ra) = (left_atoms, right_atoms);
    let results: Vec<Option<LeviWitness>> = (0..restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut rng = trial_rng(seed, restart as u64);
            let start: Vec<f64> = (0..la * ra).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let objective = |u: &[f64]| -> f64 {
                let f = centred_f64(u, la, ra);
                levis
                    .iter()
                    .map(|(g, left)| {
                        bipartite_model(
                            g,
                            *left,
                            vec![1.0 / la as f64; la],
                            vec![1.0 / ra as f64; ra],
                            |x, y| f[x][y],
                        )
                        .and_then(|m| m.variable_elimination())
                        .unwrap_or(f64::INFINITY)
                    })
                    .sum()
            };
            let (best, val) = coordinate_descent(start, iterations, &objective);
            if val >= 0.0 {
                return None;
            }
            let f = centred_exact(&best, la, ra).ok()?;
            let mut value = Rational::from_integer(0.into());
            for h in hs {
                value += t_levi(h, &f).ok()?;
            }
            (value < Rational::from_integer(0.into())).then_some(LeviWitness { f, value, restart })
        })
        .collect();
    Ok(results.into_iter().flatten().next())
}

fn centred_f64(u: &[f64], la: usize, ra: usize) -> Vec<Vec<f64>> {
    let mut f = vec![vec![0.0; ra]; la];
    for y in 0..ra {
        let mean = (0..la).map(|x| u[x * ra + y]).sum::<f64>() / la as f64;
        for x in 0..la {
            f[x][y] = (u[x * ra + y] - mean) / 2.0;
        }
    }
    f
}

fn centred_exact(u: &[f64], la: usize, ra: usize) -> Result<BipartiteKernel> {
    let q: Vec<Rational> = u
        .iter()
        .map(|&x| round_to_denominator(x.clamp(-1.0, 1.0), ROUNDING_DENOMINATOR))
        .collect();
    let two = Rational::from_integer(2.into());
    let lan = Rational::from_integer((la as i64).into());
    let mut values = vec![vec![Rational::from_integer(0.into()); ra]; la];
    for y in 0..ra {
        let mean: Rational = (0..la).map(|x| q[x * ra + y].clone()).sum::<Rational>() / &lan;
        for x in 0..la {
            values[x][y] = (&q[x * ra + y] - &mean) / &two;
        }
    }
    BipartiteKernel::new(
        SymmetricKernel::uniform_masses(la),
        SymmetricKernel::uniform_masses(ra),
        values,
    )
}
