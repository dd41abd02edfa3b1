use hypersid::hypergraph::{tight_cycle, tight_cycle_minus_window};
use hypersid::kappa::{kappa_poly_bruteforce, kappa_tight_cycle_dp};
use hypersid::rational::{int, rat, Rational};
use num_bigint::BigUint;
use rayon::prelude::*;

#[test]
fn transfer_matrix_matches_bruteforce_with_every_deletion() {
    let cells: Vec<(usize, usize)> = [3usize, 4, 5]
        .iter()
        .flat_map(|&r| (r + 1..=18).map(move |ell| (ell, r)))
        .collect();
    cells.par_iter().for_each(|&(ell, r)| {
        let full = tight_cycle(ell, r).unwrap();
        assert_eq!(
            kappa_tight_cycle_dp(ell, r, &[]).unwrap(),
            kappa_poly_bruteforce(&full).unwrap(),
            "C_{ell}^({r})"
        );
        for start in 0..ell {
            let h = tight_cycle_minus_window(ell, r, start).unwrap();
            assert_eq!(
                kappa_tight_cycle_dp(ell, r, &[start]).unwrap(),
                kappa_poly_bruteforce(&h).unwrap(),
                "C_{ell}^({r}) minus window {start}"
            );
        }
    });
}

#[test]
fn deleting_a_window_scales_each_coefficient() {
    for r in [3usize, 5] {
        for k in 2..=6 {
            let ell = k * r;
            let full = kappa_tight_cycle_dp(ell, r, &[]).unwrap();
            let minus = kappa_tight_cycle_dp(ell, r, &[0]).unwrap();
            for i in 1..=ell {
                // kappa_i(C - e) * ell == kappa_i(C) * (ell - i)
                assert_eq!(
                    minus.kappa(i) * BigUint::from(ell),
                    full.kappa(i) * BigUint::from(ell - i),
                    "k={k} r={r} i={i}"
                );
            }
        }
    }
}

fn lemma_ratio(k: i64, i: i64) -> Rational {
    rat((k + 2 * i + 1) * (k + 2 * i) * (k - i), 1) / int((3 * i + 3) * (3 * i + 2) * (3 * i + 1))
}

#[test]
fn binomial_ratio_bounds() {
    for k in 2..=200i64 {
        let cap = rat(k * k * k + k * k, 60);
        for i in 1..k {
            assert!(lemma_ratio(k, i) <= cap, "k={k} i={i}");
        }
    }
    // the deleted-edge variant: (k+2i+1)(k+2i)(k-i-1) / ((3i+3)(3i+2)(3i+1))
    for k in 3..=200i64 {
        let cap = rat(7 * (k * k * k - k), 600);
        for i in 1..k {
            let ratio = rat((k + 2 * i + 1) * (k + 2 * i) * (k - i - 1), 1)
                / int((3 * i + 3) * (3 * i + 2) * (3 * i + 1));
            assert!(ratio <= cap, "k={k} i={i}");
        }
    }
}
