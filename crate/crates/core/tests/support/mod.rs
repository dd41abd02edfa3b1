#![allow(dead_code)]

use hypersid::hypergraph::{tight_cycle, Hypergraph};
use hypersid::kernel::{KernelRange, SymmetricKernel};
use hypersid::rational::{rat, Rational};
use proptest::prelude::*;

pub fn r_subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

pub fn masses(raw: &[u8]) -> Vec<Rational> {
    let total: i64 = raw.iter().map(|&m| m as i64 + 1).sum();
    raw.iter().map(|&m| rat(m as i64 + 1, total)).collect()
}

/// A kernel whose weight on a multiset is read from `values` by a fixed hash.
pub fn kernel_from(r: usize, mass_raw: &[u8], values: &[i8]) -> SymmetricKernel {
    let a = mass_raw.len();
    SymmetricKernel::from_fn(r, masses(mass_raw), KernelRange::Unrestricted, |m| {
        let idx = m.iter().fold(0usize, |acc, &x| acc * a + x) % values.len();
        rat(values[idx] as i64, 4)
    })
    .unwrap()
}

/// `sum_k lambda_k phi_k(x_1) ... phi_k(x_r)` with every `phi_k` of mean zero.
pub fn zero_averaging_from(r: usize, mass_raw: &[u8], phis: &[(i8, Vec<i8>)]) -> SymmetricKernel {
    let m = masses(mass_raw);
    let a = m.len();
    let centred: Vec<(Rational, Vec<Rational>)> = phis
        .iter()
        .map(|(lambda, psi)| {
            let psi: Vec<Rational> = (0..a).map(|x| rat(psi[x % psi.len()] as i64, 3)).collect();
            let mean: Rational = psi.iter().zip(&m).map(|(p, q)| p * q).sum();
            (rat(*lambda as i64, 2), psi.iter().map(|p| p - &mean).collect())
        })
        .collect();
    SymmetricKernel::from_fn(r, m, KernelRange::Unrestricted, |xs| {
        centred
            .iter()
            .map(|(lambda, phi)| xs.iter().fold(lambda.clone(), |acc, &x| acc * &phi[x]))
            .sum()
    })
    .unwrap()
}

pub fn arb_kernel(r: usize, max_atoms: usize) -> impl Strategy<Value = SymmetricKernel> {
    (
        prop::collection::vec(0u8..4, 1..=max_atoms),
        prop::collection::vec(-4i8..=4, 1..24),
    )
        .prop_map(move |(m, v)| kernel_from(r, &m, &v))
}

pub fn arb_zero_averaging(r: usize, max_atoms: usize) -> impl Strategy<Value = SymmetricKernel> {
    (
        prop::collection::vec(0u8..4, 2..=max_atoms),
        prop::collection::vec((-3i8..=3, prop::collection::vec(-3i8..=3, 1..4)), 1..3),
    )
        .prop_map(move |(m, phis)| zero_averaging_from(r, &m, &phis))
}

/// A hypergraph on `n` vertices with at least one edge.
pub fn arb_hypergraph(r: usize, n_max: usize, e_max: usize) -> impl Strategy<Value = Hypergraph> {
    (r + 1..=n_max)
        .prop_flat_map(move |n| {
            let all = r_subsets(n, r);
            let len = all.len();
            (Just(n), Just(all), prop::collection::btree_set(0..len, 1..=e_max.min(len)))
        })
        .prop_map(move |(n, all, pick)| {
            Hypergraph::new(r, n, pick.into_iter().map(|i| all[i].clone()).collect()).unwrap()
        })
}

/// A nonempty edge subset of `C_ell^(r)`, kept on all `ell` vertices.
pub fn arb_tight_subgraph(r: usize, ell_max: usize) -> impl Strategy<Value = Hypergraph> {
    (r + 1..=ell_max)
        .prop_flat_map(|ell| (Just(ell), 1u64..(1u64 << ell)))
        .prop_map(move |(ell, mask)| tight_cycle(ell, r).unwrap().edge_subgraph(mask))
}
