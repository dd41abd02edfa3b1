//! The commonness deficit, its even-subgraph expansion, witness combination
//! and the Levi transfer.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{t_density, Strategy};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::kappa::for_each_degree_one_free;
use crate::kernel::{BipartiteKernel, KernelRange, SymmetricKernel};
use crate::rational::{self, int, pow, rat, Rational};

/// Largest edge count for the full even-subgraph cross-check.
pub const CROSS_CHECK_EDGE_LIMIT: usize = 20;
/// Largest edge count accepted by the even-subgraph classification.
pub const CLASSIFY_EDGE_LIMIT: usize = 24;
/// Largest vertex count for isomorphism grouping.
pub const ISOMORPHISM_VERTEX_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommonVerdict {
    NotCommon,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommonnessReport {
    /// `t_H(1 + eps f) + t_H(1 - eps f) - 2`
    #[serde(with = "rational")]
    pub deficit: Rational,
    /// Sum of `t_G(eps f)` over nonempty even-size edge subsets `G`; absent
    /// when the expansion was skipped.
    #[serde(with = "rational::opt")]
    pub even_sum: Option<Rational>,
    #[serde(with = "rational")]
    pub eps: Rational,
    pub verdict: CommonVerdict,
    pub notes: Vec<String>,
}

fn check_signed_unit(f: &SymmetricKernel) -> Result<()> {
    if f.max_abs_weight() > int(1) {
        return invalid("f must take values in [-1, 1]");
    }
    Ok(())
}

/// Sum of `t_G(f)` over every nonempty edge subset `G` of even size, on the
/// full vertex set of `H`.
pub fn even_subgraph_sum(h: &Hypergraph, f: &SymmetricKernel) -> Result<Rational> {
    let e = h.edge_count();
    if e > CROSS_CHECK_EDGE_LIMIT {
        return Err(Error::Resource(format!(
            "even-subgraph expansion over 2^{e} subsets exceeds the limit of 2^{CROSS_CHECK_EDGE_LIMIT}"
        )));
    }
    let terms: Vec<Rational> = (1u64..1 << e)
        .into_par_iter()
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| t_density(&h.edge_subgraph(m), f, Strategy::Auto))
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().sum())
}

/// Exact `t_H(1+f) + t_H(1-f) - 2`, cross-checked against twice the
/// even-subgraph sum when `e(H) <= 20`.
pub fn common_deficit(h: &Hypergraph, f: &SymmetricKernel) -> Result<CommonnessReport> {
    check_signed_unit(f)?;
    let deficit = raw_deficit(h, f)?;
    let mut notes = Vec::new();
    let even_sum = if h.edge_count() <= CROSS_CHECK_EDGE_LIMIT {
        let s = even_subgraph_sum(h, f)?;
        if deficit != int(2) * &s {
            return Err(Error::Verification(format!(
                "deficit {deficit} differs from twice the even-subgraph sum {s}"
            )));
        }
        Some(s)
    } else {
        notes.push(format!(
            "even-subgraph cross-check skipped: e(H) = {} > {CROSS_CHECK_EDGE_LIMIT}",
            h.edge_count()
        ));
        None
    };
    let verdict = if deficit.is_negative() {
        CommonVerdict::NotCommon
    } else {
        CommonVerdict::Inconclusive
    };
    Ok(CommonnessReport {
        deficit,
        even_sum,
        eps: int(1),
        verdict,
        notes,
    })
}

fn raw_deficit(h: &Hypergraph, f: &SymmetricKernel) -> Result<Rational> {
    let one = int(1);
    let plus = f.affine(&one, &one, KernelRange::Unrestricted)?;
    let minus = f.affine(&one, &int(-1), KernelRange::Unrestricted)?;
    Ok(t_density(h, &plus, Strategy::Auto)? + t_density(h, &minus, Strategy::Auto)? - int(2))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvenCandidate {
    /// Edge indices into `H`.
    pub edges: Vec<usize>,
    pub two_connected: bool,
    /// Index of the isomorphism class among the candidates, when computed.
    pub iso_class: Option<usize>,
    /// Reference to a stored kernel with negative density, if one is known.
    pub negativity_witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvenSubgraphClassification {
    /// Smallest even size with a subgraph free of degree-one vertices.
    pub two_m: Option<usize>,
    pub candidates: Vec<EvenCandidate>,
    pub smaller_even_sizes_all_degenerate: bool,
}

impl EvenSubgraphClassification {
    pub fn candidate_graphs(&self, h: &Hypergraph) -> Vec<Hypergraph> {
        self.candidates
            .iter()
            .map(|c| h.edge_subgraph_indices(&c.edges))
            .collect()
    }
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Scans even sizes 2, 4, ... for edge subsets without a degree-one vertex
/// and lists all of them at the first size where any exist.
pub fn classify_even_subgraphs(h: &Hypergraph) -> Result<EvenSubgraphClassification> {
    let e = h.edge_count();
    if e > CLASSIFY_EDGE_LIMIT {
        return Err(Error::Resource(format!(
            "classification needs e(H) <= {CLASSIFY_EDGE_LIMIT}, got {e}"
        )));
    }
    for size in (2..=e).step_by(2) {
        let mut masks = Vec::new();
        for_each_degree_one_free(h, Some(size), |m, _| masks.push(m))?;
        if masks.is_empty() {
            continue;
        }
        masks.sort_unstable();
        let graphs: Vec<Hypergraph> = masks.iter().map(|&m| h.edge_subgraph(m)).collect();
        let mut classes: Vec<usize> = Vec::new();
        let mut iso_class = vec![None; graphs.len()];
        if h.vertex_count() <= ISOMORPHISM_VERTEX_LIMIT {
            for (i, g) in graphs.iter().enumerate() {
                let found = classes
                    .iter()
                    .position(|&rep| graphs[rep].is_isomorphic(g) == Some(true));
                iso_class[i] = Some(found.unwrap_or_else(|| {
                    classes.push(i);
                    classes.len() - 1
                }));
            }
        }
        let candidates = masks
            .iter()
            .zip(&graphs)
            .zip(iso_class)
            .map(|((&m, g), iso)| EvenCandidate {
                edges: mask_indices(m),
                two_connected: g.without_isolated().is_two_connected(),
                iso_class: iso,
                negativity_witness: None,
            })
            .collect();
        return Ok(EvenSubgraphClassification {
            two_m: Some(size),
            candidates,
            smaller_even_sizes_all_degenerate: true,
        });
    }
    Ok(EvenSubgraphClassification {
        two_m: None,
        candidates: Vec::new(),
        smaller_even_sizes_all_degenerate: true,
    })
}

/// `h(x_1..x_r) = sum_y m(y) prod_i f(x_i, y)` on the left atom space of `f`.
pub fn levi_transfer(f: &BipartiteKernel, r: usize) -> Result<SymmetricKernel> {
    if r < 2 {
        return invalid("arity must be at least 2");
    }
    let bounded = (0..f.left_masses().len())
        .all(|x| (0..f.right_masses().len()).all(|y| f.value(x, y).abs() <= int(1)));
    let range = if bounded {
        KernelRange::SignedUnit
    } else {
        KernelRange::Unrestricted
    };
    SymmetricKernel::from_fn(r, f.left_masses().to_vec(), range, |m| {
        f.right_masses()
            .iter()
            .enumerate()
            .map(|(y, my)| {
                let mut p = my.clone();
                for &x in m {
                    p *= f.value(x, y);
                }
                p
            })
            .sum()
    })
}

/// Given `f_j` with `t_{G_i}(f_j) < 0` for all `i != j` and
/// `t_{G_j}(f_j) != 0`, builds one kernel negative on every `G_i`. For odd
/// `k` with every `t_{G_j}(f_j) > 0`, `f0` must be negative on the disjoint
/// union of the `G_i`.
pub fn combine_negativity_witnesses(
    gs: &[Hypergraph],
    fs: &[SymmetricKernel],
    f0: Option<&SymmetricKernel>,
) -> Result<SymmetricKernel> {
    let k = gs.len();
    if k == 0 || fs.len() != k {
        return invalid("need one kernel per hypergraph");
    }
    let t = |i: usize, f: &SymmetricKernel| t_density(&gs[i], f, Strategy::Auto);
    let mut own = Vec::with_capacity(k);
    for (j, f) in fs.iter().enumerate() {
        for i in (0..k).filter(|&i| i != j) {
            if !t(i, f)?.is_negative() {
                return Err(Error::Verification(format!("t_G{i}(f{j}) is not negative")));
            }
        }
        let tj = t(j, f)?;
        if tj.is_zero() {
            return Err(Error::Verification(format!("t_G{j}(f{j}) is zero")));
        }
        own.push(tj);
    }
    let combined = if let Some(j) = own.iter().position(|v| v.is_negative()) {
        fs[j].clone()
    } else if k.is_multiple_of(2) {
        tensor_all(fs.iter())?
    } else {
        let f0 = f0.ok_or_else(|| {
            Error::InvalidInput(
                "odd_case_requires_union_witness: k is odd and every t_Gj(fj) > 0".into(),
            )
        })?;
        let mut positive = Vec::new();
        for i in 0..k {
            let v = t(i, f0)?;
            if v.is_zero() {
                return Err(Error::Verification(format!("t_G{i}(f0) is zero")));
            }
            if v.is_positive() {
                positive.push(i);
            }
        }
        if positive.len() % 2 == 1 {
            return Err(Error::Verification(
                "f0 is not negative on the disjoint union".into(),
            ));
        }
        tensor_all(std::iter::once(f0).chain(positive.iter().map(|&i| &fs[i])))?
    };
    for i in 0..k {
        if !t(i, &combined)?.is_negative() {
            return Err(Error::Verification(format!(
                "combined kernel is not negative on G{i}"
            )));
        }
    }
    Ok(combined)
}

fn tensor_all<'a>(mut fs: impl Iterator<Item = &'a SymmetricKernel>) -> Result<SymmetricKernel> {
    let first = fs.next().expect("at least one kernel").clone();
    fs.try_fold(first, |acc, f| acc.tensor_product(f))
}

/// Coefficients `T_m = sum over degree-one-free m-edge subsets of t_G(f)` for
/// even `m >= 2`, indexed by `m`.
fn even_coefficients(h: &Hypergraph, f: &SymmetricKernel) -> Result<Vec<Rational>> {
    let mut masks = Vec::new();
    for_each_degree_one_free(h, None, |m, c| {
        if c > 0 && c % 2 == 0 {
            masks.push(m);
        }
    })?;
    let values: Vec<(usize, Rational)> = masks
        .into_par_iter()
        .map(|m| {
            Ok((
                m.count_ones() as usize,
                t_density(&h.edge_subgraph(m), f, Strategy::Auto)?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut coeffs = vec![Rational::zero(); h.edge_count() + 1];
    for (m, v) in values {
        coeffs[m] += v;
    }
    Ok(coeffs)
}

/// Halves `eps` from 1/2 until the even-subgraph sum at `eps f` is negative,
/// then confirms the deficit directly. `f` must be zero-averaging, so only
/// subgraphs without degree-one vertices contribute.
pub fn check_noncommon(
    h: &Hypergraph,
    f: &SymmetricKernel,
    classification: &EvenSubgraphClassification,
) -> Result<CommonnessReport> {
    check_signed_unit(f)?;
    if !f.is_zero_averaging() {
        return invalid("f must be zero-averaging");
    }
    if *classification != classify_even_subgraphs(h)? {
        return invalid("classification does not belong to this hypergraph");
    }
    let two_m = classification.two_m.ok_or_else(|| {
        Error::Inconclusive("no even subgraph without degree-one vertices".into())
    })?;
    let mut leading = Rational::zero();
    for g in classification.candidate_graphs(h) {
        leading += t_density(&g, f, Strategy::Auto)?;
    }
    if !leading.is_negative() {
        return Err(Error::Inconclusive(format!(
            "leading_term_nonnegative: sum of candidate densities is {}",
            rational::format_rational(&leading)
        )));
    }
    let coeffs = even_coefficients(h, f)?;
    debug_assert_eq!(coeffs[two_m], leading);
    let mut eps = rat(1, 2);
    for _ in 0..=crate::witness::MAX_HALVINGS {
        let even_sum: Rational = coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * pow(&eps, m))
            .sum();
        if even_sum.is_negative() {
            let scaled = f.scaled(&eps)?;
            let deficit = raw_deficit(h, &scaled)?;
            if deficit != int(2) * &even_sum {
                return Err(Error::Verification(format!(
                    "deficit {deficit} differs from twice the even-subgraph sum {even_sum}"
                )));
            }
            return Ok(CommonnessReport {
                deficit,
                even_sum: Some(even_sum),
                eps,
                verdict: CommonVerdict::NotCommon,
                notes: vec![format!(
                    "leading term at {two_m} edges: {}",
                    rational::format_rational(&leading)
                )],
            });
        }
        eps /= int(2);
    }
    Err(Error::Inconclusive(
        "epsilon_search_exhausted: even-subgraph sum never became negative".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{grid, half_octahedron, loose_triangle, tight_cycle};

    fn signed(r: usize, a: usize, w: impl Fn(&[usize]) -> Rational) -> SymmetricKernel {
        SymmetricKernel::from_fn(
            r,
            SymmetricKernel::uniform_masses(a),
            KernelRange::SignedUnit,
            w,
        )
        .unwrap()
    }

    #[test]
    fn zero_kernel_has_zero_deficit() {
        let h = tight_cycle(6, 3).unwrap();
        let rep = common_deficit(&h, &SymmetricKernel::constant(3, int(0)).unwrap()).unwrap();
        assert!(rep.deficit.is_zero());
        assert_eq!(rep.verdict, CommonVerdict::Inconclusive);
    }

    #[test]
    fn single_edge_mean_zero() {
        let f = signed(3, 2, |m| {
            if m.iter().sum::<usize>() % 2 == 0 {
                int(1)
            } else {
                int(-1)
            }
        });
        let rep = common_deficit(&Hypergraph::single_edge(3).unwrap(), &f).unwrap();
        assert!(rep.deficit.is_zero());
    }

    #[test]
    fn deficit_matches_even_sum() {
        let f = signed(3, 3, |m| rat((m[0] * 3 + m[1] * 2 + m[2]) as i64 - 4, 8));
        for h in [
            loose_triangle(3).unwrap(),
            tight_cycle(6, 3).unwrap(),
            half_octahedron(),
        ] {
            let rep = common_deficit(&h, &f).unwrap();
            assert_eq!(rep.deficit, int(2) * rep.even_sum.unwrap());
        }
    }

    #[test]
    fn classify_grid() {
        let c = classify_even_subgraphs(&grid(3).unwrap()).unwrap();
        assert_eq!(c.two_m, Some(6));
        assert_eq!(c.candidates.len(), 1);
        assert_eq!(c.candidates[0].edges, vec![0, 1, 2, 3, 4, 5]);
        assert!(c.candidates[0].two_connected);
    }

    #[test]
    fn classify_half_octahedron_with_pendant() {
        let mut edges = half_octahedron().edges().to_vec();
        edges.push(vec![0, 6, 7]);
        let h = Hypergraph::new(3, 8, edges).unwrap();
        let c = classify_even_subgraphs(&h).unwrap();
        assert_eq!(c.two_m, Some(4));
        assert_eq!(c.candidates.len(), 1);
        for g in c.candidate_graphs(&h) {
            let octa = Hypergraph::new(3, 8, half_octahedron().edges().to_vec()).unwrap();
            assert_eq!(g.is_isomorphic(&octa), Some(true));
        }
    }

    #[test]
    fn classify_loose_triangle_is_empty() {
        let c = classify_even_subgraphs(&loose_triangle(3).unwrap()).unwrap();
        assert_eq!(c.two_m, None);
        assert!(c.candidates.is_empty());
    }

    #[test]
    fn levi_transfer_of_zero() {
        let f = BipartiteKernel::new(
            SymmetricKernel::uniform_masses(2),
            SymmetricKernel::uniform_masses(2),
            vec![vec![int(0); 2]; 2],
        )
        .unwrap();
        let h = levi_transfer(&f, 3).unwrap();
        assert!(h.entries().is_empty());
    }

    #[test]
    fn levi_transfer_identity_and_averaging() {
        let f = BipartiteKernel::new(
            SymmetricKernel::uniform_masses(2),
            vec![rat(1, 3), rat(2, 3)],
            vec![vec![rat(1, 2), rat(-1, 3)], vec![rat(-1, 2), rat(1, 3)]],
        )
        .unwrap();
        assert!(f.is_left_zero_averaging());
        let h = levi_transfer(&f, 3).unwrap();
        assert!(h.is_zero_averaging());
        for g in [
            loose_triangle(3).unwrap(),
            half_octahedron(),
            tight_cycle(5, 3).unwrap(),
        ] {
            assert_eq!(
                t_density(&g, &h, Strategy::Auto).unwrap(),
                crate::density::t_levi(&g, &f).unwrap()
            );
        }
    }

    fn k2() -> Hypergraph {
        Hypergraph::single_edge(2).unwrap()
    }

    fn k3() -> Hypergraph {
        tight_cycle(3, 2).unwrap()
    }

    fn c5() -> Hypergraph {
        tight_cycle(5, 2).unwrap()
    }

    fn two_by_two(diag: Rational, off: Rational) -> SymmetricKernel {
        signed(2, 2, |m| {
            if m[0] == m[1] {
                diag.clone()
            } else {
                off.clone()
            }
        })
    }

    // sign patterns on (K2, K3, C5), read off the spectra
    fn pos_neg_neg() -> SymmetricKernel {
        two_by_two(rat(-2, 7), int(1))
    }

    fn neg_pos_pos() -> SymmetricKernel {
        two_by_two(rat(9, 10), int(-1))
    }

    fn neg_pos_neg() -> SymmetricKernel {
        // 0.8 I - 0.6 J: spectrum 0.8, 0.8, -1
        signed(2, 3, |m| if m[0] == m[1] { rat(1, 5) } else { rat(-3, 5) })
    }

    fn signs(f: &SymmetricKernel) -> Vec<bool> {
        [k2(), k3(), c5()]
            .iter()
            .map(|g| t_density(g, f, Strategy::Auto).unwrap().is_positive())
            .collect()
    }

    #[test]
    fn fixture_sign_patterns() {
        assert_eq!(signs(&pos_neg_neg()), [true, false, false]);
        assert_eq!(signs(&neg_pos_pos()), [false, true, true]);
        assert_eq!(signs(&neg_pos_neg()), [false, true, false]);
    }

    #[test]
    fn combine_even_case() {
        let gs = [k2(), k3()];
        let f = combine_negativity_witnesses(&gs, &[pos_neg_neg(), neg_pos_pos()], None).unwrap();
        for g in &gs {
            assert!(t_density(g, &f, Strategy::Auto).unwrap().is_negative());
        }
    }

    #[test]
    fn combine_single() {
        let f = two_by_two(int(-1), int(-1));
        let out = combine_negativity_witnesses(&[k3()], std::slice::from_ref(&f), None).unwrap();
        assert_eq!(out, f);
    }

    fn odd_inputs() -> (Vec<Hypergraph>, Vec<SymmetricKernel>) {
        let f3 = neg_pos_neg().tensor_product(&pos_neg_neg()).unwrap();
        assert_eq!(signs(&f3), [false, false, true]);
        (
            vec![k2(), k3(), c5()],
            vec![pos_neg_neg(), neg_pos_neg(), f3],
        )
    }

    #[test]
    fn combine_odd_case() {
        let (gs, fs) = odd_inputs();
        let err = combine_negativity_witnesses(&gs, &fs, None).unwrap_err();
        assert!(err.to_string().contains("odd_case_requires_union_witness"));
        // f0 already negative everywhere
        let minus = SymmetricKernel::constant(2, int(-1)).unwrap();
        assert_eq!(
            combine_negativity_witnesses(&gs, &fs, Some(&minus)).unwrap(),
            minus
        );
        // f0 positive on K2 and K3, negative on C5
        let f0 = neg_pos_pos().tensor_product(&neg_pos_neg()).unwrap();
        let f = combine_negativity_witnesses(&gs, &fs, Some(&f0)).unwrap();
        assert_eq!(f.atom_count(), f0.atom_count() * 2 * 3);
        assert_eq!(signs(&f), [false, false, false]);
    }

    #[test]
    fn combine_rejects_bad_inputs() {
        let f1 = neg_pos_pos();
        assert!(matches!(
            combine_negativity_witnesses(&[k2(), k3()], &[f1.clone(), f1], None),
            Err(Error::Verification(_))
        ));
        // no f0 can be negative on K2 + K3 + (K2 + K3)
        let g3 = Hypergraph::disjoint_union(&[k2(), k3()]).unwrap();
        let gs = [k2(), k3(), g3];
        let minus = SymmetricKernel::constant(2, int(-1)).unwrap();
        let fs = [pos_neg_neg(), neg_pos_pos(), minus.clone()];
        assert!(combine_negativity_witnesses(&gs, &fs, None).is_err());
        assert!(matches!(
            combine_negativity_witnesses(&gs, &fs, Some(&minus)),
            Err(Error::Verification(_))
        ));
    }
}
