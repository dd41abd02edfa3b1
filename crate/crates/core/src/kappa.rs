//! The census polynomial `P_H(x) = sum_i kappa_i(H) x^i`, where `kappa_i`
//! counts `i`-edge subgraphs (on the full vertex set) with no vertex of degree
//! exactly one.
//!
//! Three independent routes are provided: pruned subset enumeration for any
//! hypergraph, closed forms for the tight-cycle families, and a cyclic
//! transfer-matrix count for edge subsets of tight cycles.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, resource, Result};
use crate::hypergraph::Hypergraph;
use crate::rational::{self, int, Rational};

/// Largest edge count accepted by the enumeration routes.
pub const ENUMERATION_EDGE_BUDGET: usize = 34;

/// Coefficients `kappa_1, ..., kappa_E` of the census polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaPolynomial {
    #[serde(with = "biguint_strings")]
    coefficients: Vec<BigUint>,
}

mod biguint_strings {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigUint>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| s.parse::<BigUint>().map_err(serde::de::Error::custom))
            .collect()
    }
}

impl KappaPolynomial {
    /// `coefficients[i - 1]` is `kappa_i`.
    pub fn new(coefficients: Vec<BigUint>) -> Self {
        KappaPolynomial { coefficients }
    }

    pub fn from_u64(coefficients: &[u64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[BigUint] {
        &self.coefficients
    }

    /// `kappa_i`, zero outside `1..=E`.
    pub fn kappa(&self, i: usize) -> BigUint {
        if i == 0 {
            return BigUint::zero();
        }
        self.coefficients.get(i - 1).cloned().unwrap_or_default()
    }

    pub fn edge_count(&self) -> usize {
        self.coefficients.len()
    }

    pub fn decimal_strings(&self) -> Vec<String> {
        self.coefficients.iter().map(|c| c.to_string()).collect()
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        eval_poly(self, x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for c in self.coefficients.iter().rev() {
            acc = (acc + c.to_f64().unwrap_or(f64::INFINITY)) * x;
        }
        acc
    }
}

pub fn eval_poly(p: &KappaPolynomial, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.coefficients.iter().rev() {
        acc = (acc + Rational::from_integer(c.clone().into())) * x;
    }
    acc
}

/// Visits every edge subset with no vertex of degree exactly one, as a bit
/// mask over edge indices. Vertices are checked as soon as their last
/// incident edge has been decided, which prunes whole subtrees.
pub(crate) fn for_each_degree_one_free<F: FnMut(u64, usize)>(
    h: &Hypergraph,
    size: Option<usize>,
    mut visit: F,
) -> Result<()> {
    let e = h.edge_count();
    if e > ENUMERATION_EDGE_BUDGET {
        return resource(format!(
            "enumeration over {e} edges exceeds the budget of {ENUMERATION_EDGE_BUDGET}"
        ));
    }
    let mut last_edge = vec![usize::MAX; h.vertex_count()];
    for (i, edge) in h.edges().iter().enumerate() {
        for &v in edge {
            last_edge[v] = i;
        }
    }
    let mut finalized: Vec<Vec<usize>> = vec![Vec::new(); e];
    for (v, &le) in last_edge.iter().enumerate() {
        if le != usize::MAX {
            finalized[le].push(v);
        }
    }
    let mut deg = vec![0u32; h.vertex_count()];

    struct Walk<'a, F> {
        h: &'a Hypergraph,
        finalized: Vec<Vec<usize>>,
        size: Option<usize>,
        visit: F,
    }

    fn rec<F: FnMut(u64, usize)>(
        w: &mut Walk<'_, F>,
        deg: &mut [u32],
        i: usize,
        mask: u64,
        chosen: usize,
    ) {
        let e = w.h.edge_count();
        if let Some(m) = w.size {
            if chosen > m || chosen + (e - i) < m {
                return;
            }
        }
        if i == e {
            (w.visit)(mask, chosen);
            return;
        }
        for take in [false, true] {
            if take {
                for &v in w.h.edge(i) {
                    deg[v] += 1;
                }
            }
            if w.finalized[i].iter().all(|&v| deg[v] != 1) {
                let next_mask = if take { mask | 1 << i } else { mask };
                rec(w, deg, i + 1, next_mask, chosen + take as usize);
            }
            if take {
                for &v in w.h.edge(i) {
                    deg[v] -= 1;
                }
            }
        }
    }

    let mut walk = Walk {
        h,
        finalized,
        size,
        visit: &mut visit,
    };
    rec(&mut walk, &mut deg, 0, 0, 0);
    Ok(())
}

/// `kappa_m(H)` by enumeration.
pub fn kappa_bruteforce(h: &Hypergraph, m: usize) -> Result<BigUint> {
    if m == 0 || m > h.edge_count() {
        return invalid(format!("m = {m} outside 1..={}", h.edge_count()));
    }
    let mut count: u128 = 0;
    for_each_degree_one_free(h, Some(m), |_, _| count += 1)?;
    Ok(BigUint::from(count))
}

/// All of `kappa_1..kappa_E` in a single enumeration pass.
pub fn kappa_poly_bruteforce(h: &Hypergraph) -> Result<KappaPolynomial> {
    let e = h.edge_count();
    let mut counts = vec![0u128; e + 1];
    for_each_degree_one_free(h, None, |_, k| counts[k] += 1)?;
    Ok(KappaPolynomial::new(
        counts[1..].iter().map(|&c| BigUint::from(c)).collect(),
    ))
}

pub fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from((n - i) as u64) / BigUint::from((i + 1) as u64);
    }
    acc
}

/// Closed form for `C_{3k}^(3)`: `kappa_{2k+i} = 3k/(k+2i) * C(k+2i, 3i)`.
pub fn kappa_closed_c3k(k: usize) -> Result<KappaPolynomial> {
    if k < 2 {
        return invalid(format!("closed form for C_3k needs k >= 2, got {k}"));
    }
    let k = k as i64;
    let mut coeffs = vec![BigUint::zero(); 3 * k as usize];
    for i in 0..=k {
        let num = BigUint::from((3 * k) as u64) * binomial(k + 2 * i, 3 * i);
        let den = BigUint::from((k + 2 * i) as u64);
        debug_assert!((&num % &den).is_zero());
        coeffs[(2 * k + i - 1) as usize] = num / den;
    }
    Ok(KappaPolynomial::new(coeffs))
}

/// Closed form for `C_{3k}^(3) - e`: `kappa_{2k+i} = C(k+2i-1, 3i)`.
pub fn kappa_closed_c3k_minus_e(k: usize) -> Result<KappaPolynomial> {
    if k < 2 {
        return invalid(format!("closed form for C_3k - e needs k >= 2, got {k}"));
    }
    let k = k as i64;
    let mut coeffs = vec![BigUint::zero(); (3 * k - 1) as usize];
    for i in 0..k {
        coeffs[(2 * k + i - 1) as usize] = binomial(k + 2 * i - 1, 3 * i);
    }
    Ok(KappaPolynomial::new(coeffs))
}

/// Closed form for `C_{2r}^(r)`: `kappa_i = C(2r, i) - 2r(i-2) C(r, i-1)` for
/// `4 <= i <= 2r`, zero below.
pub fn kappa_closed_c2r(r: usize) -> Result<KappaPolynomial> {
    if r < 3 {
        return invalid(format!("closed form for C_2r needs r >= 3, got {r}"));
    }
    let r = r as i64;
    let mut coeffs = vec![BigUint::zero(); (2 * r) as usize];
    for i in 4..=2 * r {
        let total = binomial(2 * r, i);
        let bad = BigUint::from((2 * r * (i - 2)) as u64) * binomial(r, i - 1);
        coeffs[(i - 1) as usize] = total - bad;
    }
    Ok(KappaPolynomial::new(coeffs))
}

/// Counts `m`-subsets of `Z_{2r}` with at least one bad element, where an
/// element is good when the gap between its cyclic neighbours lies in
/// `{2, ..., r}`. Plain enumeration.
pub fn count_bad_subsets(r: usize, m: usize) -> Result<BigUint> {
    if r < 3 {
        return invalid(format!("r must be at least 3, got {r}"));
    }
    if m < 4 || m > 2 * r {
        return invalid(format!("m must lie in 4..={}, got {m}", 2 * r));
    }
    let n = 2 * r;
    let mut count: u64 = 0;
    let all: Vec<usize> = (0..n).collect();
    for a in crate::hypergraph::k_subsets(&all, m) {
        let bad = (0..m).any(|i| {
            let prev = a[(i + m - 1) % m];
            let next = a[(i + 1) % m];
            let gap = (next + n - prev) % n;
            !(2..=r).contains(&gap)
        });
        if bad {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// Largest window size accepted by [`kappa_tight_cycle_dp`].
pub const DP_MAX_R: usize = 32;
/// Largest cycle length accepted by [`kappa_tight_cycle_dp`].
pub const DP_MAX_ELL: usize = 64;

/// Census polynomial of `C_ell^(r)` minus the windows listed in `skip`, by a
/// cyclic transfer-matrix count.
///
/// Edge `i` covers vertices `i..i+r-1`, so vertex `v` is covered by edges
/// `v-r+1..=v` and is finalized as soon as edge `v` is decided. Its degree is
/// the number of chosen edges in that window, and "degree is exactly one" only
/// depends on the ages of the two most recently chosen edges still inside the
/// window. The state is that pair of ages, which keeps the automaton at
/// `O(r^2)` states. The cyclic count is the trace of the product of the
/// per-edge transfer matrices: for every start state we run the chain once
/// around the cycle and keep the walks that return to it.
pub fn kappa_tight_cycle_dp(ell: usize, r: usize, skip: &[usize]) -> Result<KappaPolynomial> {
    if r < 2 || ell <= r {
        return invalid(format!(
            "tight cycle needs r >= 2 and ell > r (ell={ell}, r={r})"
        ));
    }
    if r > DP_MAX_R || ell > DP_MAX_ELL {
        return resource(format!(
            "transfer-matrix budget is r <= {DP_MAX_R}, ell <= {DP_MAX_ELL} (got r={r}, ell={ell})"
        ));
    }
    let mut skipped = vec![false; ell];
    for &s in skip {
        if s >= ell {
            return invalid(format!("skipped window {s} out of range"));
        }
        skipped[s] = true;
    }
    let edges = ell - skipped.iter().filter(|&&s| s).count();

    // Ages are measured from the last decided edge; `r - 1` means "absent".
    let none = (r - 1) as u8;
    let mut states: Vec<(u8, u8)> = vec![(none, none)];
    for a in 0..none {
        states.push((a, none));
        for b in a + 1..none {
            states.push((a, b));
        }
    }
    let mut index = vec![usize::MAX; r * r];
    for (i, &(a1, a2)) in states.iter().enumerate() {
        index[a1 as usize * r + a2 as usize] = i;
    }
    let transitions = build_transitions(&states, r, &index);
    let s_count = states.len();
    let mut total = vec![0u128; edges + 1];
    for start in 0..s_count {
        let mut cur = vec![vec![0u128; edges + 1]; s_count];
        cur[start][0] = 1;
        for &skip_v in &skipped {
            let mut next = vec![vec![0u128; edges + 1]; s_count];
            for (s, counts) in cur.iter().enumerate() {
                if counts.iter().all(|&c| c == 0) {
                    continue;
                }
                for take in [false, true] {
                    if take && skip_v {
                        continue;
                    }
                    let Some(t) = transitions[s][take as usize] else {
                        continue;
                    };
                    let shift = take as usize;
                    for (k, &c) in counts.iter().enumerate() {
                        if c != 0 {
                            next[t][k + shift] += c;
                        }
                    }
                }
            }
            cur = next;
        }
        for (k, &c) in cur[start].iter().enumerate() {
            total[k] += c;
        }
    }
    Ok(KappaPolynomial::new(
        total[1..].iter().map(|&c| BigUint::from(c)).collect(),
    ))
}

fn build_transitions(states: &[(u8, u8)], r: usize, index: &[usize]) -> Vec<[Option<usize>; 2]> {
    let none = (r - 1) as u8;
    states
        .iter()
        .map(|&(a1, a2)| {
            let mut out = [None, None];
            for take in [false, true] {
                // ages of chosen edges relative to the edge being decided
                let mut ages: Vec<u8> = Vec::with_capacity(3);
                if take {
                    ages.push(0);
                }
                for a in [a1, a2] {
                    if a != none {
                        ages.push(a + 1);
                    }
                }
                ages.truncate(2);
                // every age is now <= r - 1: all lie in the finalized vertex's window
                if ages.len() == 1 {
                    continue;
                }
                let kept: Vec<u8> = ages.into_iter().filter(|&a| a < none).collect();
                let next = (
                    kept.first().copied().unwrap_or(none),
                    kept.get(1).copied().unwrap_or(none),
                );
                out[take as usize] = Some(index[next.0 as usize * r + next.1 as usize]);
            }
            out
        })
        .collect()
}

/// Recognises `h` as an edge subset of the tight cycle on its own vertex
/// order, returning `(ell, r, skipped window starts)`.
pub fn as_tight_cycle_subgraph(h: &Hypergraph) -> Option<(usize, usize, Vec<usize>)> {
    let (n, r) = (h.vertex_count(), h.uniformity());
    if n <= r {
        return None;
    }
    let windows = crate::hypergraph::tight_cycle_edges(n, r);
    let mut present = vec![false; n];
    for e in h.edges() {
        let start = (0..n).find(|&s| {
            let mut w = windows[s].clone();
            w.sort_unstable();
            w == *e
        })?;
        present[start] = true;
    }
    let skip = (0..n).filter(|&s| !present[s]).collect();
    Some((n, r, skip))
}

/// A point of `[-1, 0]` where the census polynomial is negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativityCertificate {
    #[serde(with = "rational")]
    pub point: Rational,
    #[serde(with = "rational")]
    pub value: Rational,
    pub provenance: String,
}

/// A probe point together with where it comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub point: Rational,
    pub label: String,
}

/// Default probe points for `C_{kr}^(r)` and `C_{kr}^(r) - e`; points outside
/// `[-1, 0]` are dropped.
pub fn probe_catalogue(k: usize, r: usize) -> Vec<Probe> {
    let (k, r) = (k as i64, r as i64);
    let mut out = vec![Probe {
        point: crate::rational::rat(-2, 3),
        label: "-2/3".into(),
    }];
    if k >= 2 {
        out.push(Probe {
            point: crate::rational::rat(-30, k * k * k + k * k),
            label: "-30/(k^3+k^2)".into(),
        });
        out.push(Probe {
            point: crate::rational::rat(-300, 7 * (k * k * k - k)),
            label: "-300/(7(k^3-k))".into(),
        });
    }
    if r >= 16 {
        out.push(Probe {
            point: crate::rational::rat(-1, r),
            label: "-1/r".into(),
        });
    } else {
        out.push(Probe {
            point: crate::rational::rat(-2, r),
            label: "-2/r".into(),
        });
    }
    let lo = int(-1);
    out.retain(|p| p.point >= lo && p.point <= Rational::zero());
    let mut seen = Vec::new();
    out.retain(|p| {
        if seen.contains(&p.point) {
            false
        } else {
            seen.push(p.point.clone());
            true
        }
    });
    out
}

fn candidates(probes: &[Probe], grid_n: usize) -> impl Iterator<Item = (Rational, String)> + '_ {
    let probe_iter = probes
        .iter()
        .map(|p| (p.point.clone(), format!("probe {}", p.label)));
    let grid_iter = (1..=grid_n).map(move |j| {
        (
            crate::rational::rat(-(j as i64), grid_n as i64),
            format!("grid {j}/{grid_n}"),
        )
    });
    probe_iter.chain(grid_iter)
}

/// First probe, then first grid point `-j/grid_n`, at which `P` is negative.
/// `None` is inconclusive: it does not prove `P >= 0` on `[-1, 0]`.
pub fn find_negative_point(
    p: &KappaPolynomial,
    probes: &[Probe],
    grid_n: usize,
) -> Option<NegativityCertificate> {
    candidates(probes, grid_n.max(1)).find_map(|(x, provenance)| {
        let value = p.eval(&x);
        value.is_negative().then_some(NegativityCertificate {
            point: x,
            value,
            provenance,
        })
    })
}

/// The probe or grid point with the most negative value of `P`.
pub fn best_negative_point(
    p: &KappaPolynomial,
    probes: &[Probe],
    grid_n: usize,
) -> Option<NegativityCertificate> {
    let mut best: Option<NegativityCertificate> = None;
    for (x, provenance) in candidates(probes, grid_n.max(1)) {
        let value = p.eval(&x);
        if value.is_negative() && best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(NegativityCertificate {
                point: x,
                value,
                provenance,
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{grid, tight_cycle, tight_cycle_minus_window, Hypergraph};
    use crate::rational::rat;

    fn u(xs: &[u64]) -> KappaPolynomial {
        KappaPolynomial::from_u64(xs)
    }

    #[test]
    fn bruteforce_matches_known_polynomials() {
        let c6 = tight_cycle(6, 3).unwrap();
        assert_eq!(kappa_bruteforce(&c6, 4).unwrap(), BigUint::from(3u32));
        assert_eq!(kappa_bruteforce(&c6, 3).unwrap(), BigUint::zero());
        assert_eq!(kappa_poly_bruteforce(&c6).unwrap(), u(&[0, 0, 0, 3, 6, 1]));
        let g3 = grid(3).unwrap();
        assert_eq!(kappa_bruteforce(&g3, 5).unwrap(), BigUint::zero());
        assert_eq!(kappa_bruteforce(&g3, 6).unwrap(), BigUint::one());
        let e = Hypergraph::single_edge(4).unwrap();
        assert_eq!(kappa_poly_bruteforce(&e).unwrap(), u(&[0]));
        let c9e = tight_cycle(9, 3).unwrap().remove_edge(0).unwrap();
        assert_eq!(
            kappa_poly_bruteforce(&c9e).unwrap(),
            u(&[0, 0, 0, 0, 0, 1, 4, 1])
        );
        assert!(kappa_bruteforce(&c6, 0).is_err());
        assert!(kappa_bruteforce(&c6, 7).is_err());
    }

    #[test]
    fn enumeration_budget_is_enforced() {
        let big = tight_cycle(35, 3).unwrap();
        assert!(matches!(
            kappa_poly_bruteforce(&big),
            Err(crate::Error::Resource(_))
        ));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(kappa_closed_c3k(2).unwrap(), u(&[0, 0, 0, 3, 6, 1]));
        for k in 2..12 {
            assert_eq!(
                kappa_closed_c3k(k).unwrap().kappa(2 * k),
                BigUint::from(3u32)
            );
        }
        assert_eq!(
            kappa_closed_c3k_minus_e(3).unwrap(),
            u(&[0, 0, 0, 0, 0, 1, 4, 1])
        );
        assert_eq!(kappa_closed_c3k_minus_e(2).unwrap(), u(&[0, 0, 0, 1, 1]));
        let c6e = tight_cycle(6, 3).unwrap().remove_edge(0).unwrap();
        assert_eq!(kappa_poly_bruteforce(&c6e).unwrap(), u(&[0, 0, 0, 1, 1]));
        assert_eq!(kappa_closed_c2r(3).unwrap(), kappa_closed_c3k(2).unwrap());
        assert_eq!(kappa_closed_c2r(5).unwrap().kappa(4), BigUint::from(10u32));
        assert_eq!(kappa_closed_c2r(3).unwrap().kappa(5), BigUint::from(6u32));
        assert!(kappa_closed_c3k(1).is_err());
        assert!(kappa_closed_c3k_minus_e(1).is_err());
        assert!(kappa_closed_c2r(2).is_err());
    }

    #[test]
    fn closed_c3k_minus_e_matches_scaling_identity() {
        let k = 4;
        let full = kappa_closed_c3k(k).unwrap();
        let minus = kappa_closed_c3k_minus_e(k).unwrap();
        for i in 1..=3 * k {
            let lhs = minus.kappa(i) * BigUint::from(3 * k as u64);
            let rhs = full.kappa(i) * BigUint::from((3 * k - i) as u64);
            assert_eq!(lhs, rhs, "i = {i}");
        }
    }

    #[test]
    fn bad_subsets() {
        assert_eq!(count_bad_subsets(3, 4).unwrap(), BigUint::from(12u32));
        assert_eq!(count_bad_subsets(5, 4).unwrap(), BigUint::from(200u32));
        for r in 3..7 {
            for m in r + 2..=2 * r {
                assert!(count_bad_subsets(r, m).unwrap().is_zero());
            }
        }
        assert!(count_bad_subsets(3, 3).is_err());
        assert!(count_bad_subsets(3, 7).is_err());
    }

    #[test]
    fn transfer_matrix_examples() {
        assert_eq!(
            kappa_tight_cycle_dp(6, 3, &[]).unwrap(),
            u(&[0, 0, 0, 3, 6, 1])
        );
        assert_eq!(
            kappa_tight_cycle_dp(9, 3, &[0]).unwrap(),
            u(&[0, 0, 0, 0, 0, 1, 4, 1])
        );
        let c12 = tight_cycle(12, 3).unwrap();
        assert_eq!(
            kappa_tight_cycle_dp(12, 3, &[]).unwrap(),
            kappa_poly_bruteforce(&c12).unwrap()
        );
        assert!(kappa_tight_cycle_dp(3, 3, &[]).is_err());
        assert!(kappa_tight_cycle_dp(6, 3, &[6]).is_err());
    }

    #[test]
    fn transfer_matrix_handles_many_skips() {
        for (ell, r) in [(7, 3), (8, 4), (10, 5), (5, 2)] {
            let c = tight_cycle(ell, r).unwrap();
            for mask in [0b1u64, 0b101, 0b10011, 0b110] {
                let skip: Vec<usize> = (0..ell).filter(|i| mask >> i & 1 == 1).collect();
                let mut h = c.clone();
                for &s in skip.iter().rev() {
                    let mut w: Vec<usize> = (0..r).map(|j| (s + j) % ell).collect();
                    w.sort_unstable();
                    let idx = h.edges().iter().position(|e| *e == w).unwrap();
                    h = h.remove_edge(idx).unwrap();
                }
                assert_eq!(
                    kappa_tight_cycle_dp(ell, r, &skip).unwrap(),
                    kappa_poly_bruteforce(&h).unwrap(),
                    "ell={ell} r={r} skip={skip:?}"
                );
            }
        }
    }

    #[test]
    fn recognises_tight_cycle_subgraphs() {
        let h = tight_cycle_minus_window(9, 3, 4).unwrap();
        assert_eq!(as_tight_cycle_subgraph(&h), Some((9, 3, vec![4])));
        assert_eq!(as_tight_cycle_subgraph(&grid(3).unwrap()), None);
    }

    #[test]
    fn exact_evaluation() {
        let c6 = u(&[0, 0, 0, 3, 6, 1]);
        assert_eq!(c6.eval(&rat(-2, 3)), rat(-80, 729));
        let c9e = u(&[0, 0, 0, 0, 0, 1, 4, 1]);
        assert_eq!(c9e.eval(&rat(-2, 3)), rat(-704, 6561));
        assert_eq!(c6.eval(&rat(0, 1)), rat(0, 1));
    }

    #[test]
    fn negative_point_search() {
        let c6 = u(&[0, 0, 0, 3, 6, 1]);
        let probes = vec![Probe {
            point: rat(-2, 3),
            label: "-2/3".into(),
        }];
        let cert = find_negative_point(&c6, &probes, 10).unwrap();
        assert_eq!(cert.point, rat(-2, 3));
        assert_eq!(cert.value, rat(-80, 729));

        let cube = u(&[0, 0, 1]);
        let cert = find_negative_point(&cube, &[], 10).unwrap();
        assert_eq!(cert.point, rat(-1, 10));

        let square = u(&[0, 1]);
        assert!(find_negative_point(&square, &[], 100).is_none());

        for k in 3..=8 {
            let p = kappa_closed_c3k(k).unwrap();
            let probes = vec![Probe {
                point: rat(-30, (k * k * k + k * k) as i64),
                label: "thm".into(),
            }];
            assert!(find_negative_point(&p, &probes, 1).is_some(), "k = {k}");
        }
    }

    #[test]
    fn catalogue_drops_out_of_range_points() {
        let cat = probe_catalogue(2, 3);
        assert!(cat.iter().all(|p| p.point >= rat(-1, 1)));
        assert_eq!(cat[0].point, rat(-2, 3));
        let cat = probe_catalogue(2, 17);
        assert!(cat.iter().any(|p| p.point == rat(-1, 17)));
    }
}
