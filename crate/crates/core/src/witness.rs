//! Counterexample kernels, exact non-Sidorenko certificates, the ε-search for
//! tight cycles and the deletion-method exponent.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{t_density, Strategy};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{tight_cycle, Hypergraph};
use crate::kappa::{
    as_tight_cycle_subgraph, best_negative_point, binomial, kappa_tight_cycle_dp, probe_catalogue,
    KappaPolynomial, NegativityCertificate, Probe,
};
use crate::kernel::{KernelFile, KernelRange, SymmetricKernel};
use crate::rational::{self, format_rational, int, ln_rational, pow, rat, Rational};

/// Grid resolution used after the probe points: `-j/1000` for `j = 1..=1000`.
pub const NEGATIVITY_GRID: usize = 1000;
/// Maximum number of ε-halvings.
pub const MAX_HALVINGS: usize = 60;

fn sign_of(atom: usize) -> i64 {
    if atom == 0 {
        1
    } else {
        -1
    }
}

/// Elementary symmetric polynomial `e_s` of a ±1 vector with `j` entries
/// equal to -1 and the rest +1.
fn elementary_pm1(r: usize, j: usize, s: usize) -> Rational {
    let mut total = num_bigint::BigInt::zero();
    for i in 0..=s.min(j) {
        let term = num_bigint::BigInt::from(binomial(j as i64, i as i64))
            * num_bigint::BigInt::from(binomial((r - j) as i64, (s - i) as i64));
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Rational::from_integer(total)
}

/// `1 - c * e_s(x)` on `{+1, -1}^r`, atoms of mass 1/2; atom 0 is +1.
pub fn s_parity_kernel(r: usize, s: usize, c: &Rational) -> Result<SymmetricKernel> {
    if r < 2 || s < 2 || s > r {
        return invalid(format!("need 2 <= s <= r, got r={r}, s={s}"));
    }
    let cap = Rational::new(1.into(), binomial(r as i64, s as i64).into());
    if !c.is_positive() || *c > cap {
        return invalid(format!(
            "c must lie in (0, {}], got {c}",
            format_rational(&cap)
        ));
    }
    SymmetricKernel::from_fn(
        r,
        SymmetricKernel::uniform_masses(2),
        KernelRange::Nonnegative,
        |m| {
            let j = m.iter().filter(|&&x| sign_of(x) < 0).count();
            int(1) - c * elementary_pm1(r, j, s)
        },
    )
}

/// `1 - c * sum_{i<j} x_i x_j` on `{+1, -1}^r`.
pub fn linear_girth_kernel(r: usize, c: &Rational) -> Result<SymmetricKernel> {
    s_parity_kernel(r, 2, c)
}

/// The two-valued zero-mean function: value `eps` with mass `1/(1+eps)` and
/// value `-1` with mass `eps/(1+eps)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FepsAtoms {
    pub values: [Rational; 2],
    pub masses: [Rational; 2],
}

impl FepsAtoms {
    /// `sum mass * value^d`
    pub fn moment(&self, d: usize) -> Rational {
        self.values
            .iter()
            .zip(&self.masses)
            .map(|(v, m)| m * pow(v, d))
            .sum()
    }
}

pub fn feps_atoms(eps: &Rational) -> Result<FepsAtoms> {
    if !eps.is_positive() || *eps >= int(1) {
        return invalid(format!("eps must lie in (0, 1), got {eps}"));
    }
    let denom = int(1) + eps;
    Ok(FepsAtoms {
        values: [eps.clone(), int(-1)],
        masses: [int(1) / &denom, eps / &denom],
    })
}

/// `g(x_1..x_r) = prod f_eps(x_i)` on the two-atom space of `feps_atoms`.
pub fn g_kernel(r: usize, eps: &Rational) -> Result<SymmetricKernel> {
    let f = feps_atoms(eps)?;
    SymmetricKernel::from_fn(r, f.masses.to_vec(), KernelRange::SignedUnit, |m| {
        m.iter().map(|&x| f.values[x].clone()).product()
    })
}

/// `t_G(g_eps)`: the product kernel factorises over vertices, giving
/// `prod_v E[f_eps^{d(v)}]`.
pub fn g_density(g: &Hypergraph, eps: &Rational) -> Result<Rational> {
    let f = feps_atoms(eps)?;
    Ok(g.degrees().into_iter().map(|d| f.moment(d)).product())
}

/// `1 + c * g_eps`; weight with `j` copies of the `-1` atom is
/// `1 + c (-1)^j eps^(r-j)`. Nonnegativity is checked on every weight.
pub fn h_kernel(r: usize, eps: &Rational, c: &Rational) -> Result<SymmetricKernel> {
    let f = feps_atoms(eps)?;
    if !c.is_positive() || *c > int(1) {
        return invalid(format!("c must lie in (0, 1], got {c}"));
    }
    SymmetricKernel::from_fn(r, f.masses.to_vec(), KernelRange::Unrestricted, |m| {
        let j = m.iter().filter(|&&x| x == 1).count();
        let g = pow(eps, r - j) * int(if j % 2 == 0 { 1 } else { -1 });
        int(1) + c * g
    })?
    .with_range(KernelRange::Nonnegative)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SidorenkoVerdict {
    NotSidorenko,
    InconclusiveWitness,
}

/// How the witness kernel is described: explicitly, or by the parameters of
/// the `h` family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KernelDescriptor {
    Family {
        family: String,
        r: usize,
        #[serde(with = "rational")]
        eps: Rational,
        #[serde(with = "rational")]
        c: Rational,
    },
    Explicit(KernelFile),
}

impl KernelDescriptor {
    pub fn h(r: usize, eps: Rational, c: Rational) -> Self {
        KernelDescriptor::Family {
            family: "h".into(),
            r,
            eps,
            c,
        }
    }

    pub fn build(&self) -> Result<SymmetricKernel> {
        match self {
            KernelDescriptor::Family { family, r, eps, c } if family == "h" => h_kernel(*r, eps, c),
            KernelDescriptor::Family { family, .. } => {
                invalid(format!("unknown kernel family {family:?}"))
            }
            KernelDescriptor::Explicit(f) => SymmetricKernel::from_file(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidorenkoCertificate {
    #[serde(rename = "H")]
    pub h: Hypergraph,
    pub kernel: KernelDescriptor,
    #[serde(rename = "t_H", with = "rational")]
    pub t_h: Rational,
    #[serde(with = "rational")]
    pub edge_density: Rational,
    #[serde(with = "rational")]
    pub rhs: Rational,
    #[serde(with = "rational")]
    pub margin: Rational,
    pub verdict: SidorenkoVerdict,
}

impl SidorenkoCertificate {
    /// Recomputes every number from the stored hypergraph and kernel.
    pub fn verify(&self) -> Result<()> {
        let w = self.kernel.build()?;
        let again = certify_with(&self.h, &w, self.kernel.clone(), Strategy::Auto)?;
        if again != *self {
            return Err(Error::Verification(format!(
                "recomputed margin {} and verdict {:?} differ from stored {} and {:?}",
                format_rational(&again.margin),
                again.verdict,
                format_rational(&self.margin),
                self.verdict
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

/// Compares `t_H(W)` with `t_{K_r}(W)^{e(H)}` exactly.
pub fn certify_non_sidorenko(h: &Hypergraph, w: &SymmetricKernel) -> Result<SidorenkoCertificate> {
    certify_with(
        h,
        w,
        KernelDescriptor::Explicit(w.to_file()),
        Strategy::Auto,
    )
}

pub fn certify_with(
    h: &Hypergraph,
    w: &SymmetricKernel,
    descriptor: KernelDescriptor,
    strategy: Strategy,
) -> Result<SidorenkoCertificate> {
    if w.range() != KernelRange::Nonnegative {
        return invalid("a Sidorenko witness must be declared nonnegative");
    }
    let t_h = t_density(h, w, strategy)?;
    let edge_density = w.edge_density();
    let rhs = pow(&edge_density, h.edge_count());
    let margin = &rhs - &t_h;
    let verdict = if margin.is_positive() {
        SidorenkoVerdict::NotSidorenko
    } else {
        SidorenkoVerdict::InconclusiveWitness
    };
    Ok(SidorenkoCertificate {
        h: h.clone(),
        kernel: descriptor,
        t_h,
        edge_density,
        rhs,
        margin,
        verdict,
    })
}

/// Outcome of the ε-search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutoWitness {
    pub certificate: SidorenkoCertificate,
    pub negative_point: NegativityCertificate,
    #[serde(with = "rational")]
    pub c: Rational,
    #[serde(with = "rational")]
    pub eps: Rational,
    pub halvings: usize,
    /// The certificate still holds at `eps / 2`.
    pub stable: bool,
}

/// The point known to work for the family, if there is one: `C_6` and
/// `C_9 - e` at -2/3, `C_{3k}` at `-30/(k^3+k^2)`, `C_{3k} - e` at
/// `-300/(7(k^3-k))`, and `C_{2r}` at `-2/r` (or `-1/r` from `r = 16`).
pub fn family_probe(ell: usize, r: usize, missing: usize) -> Option<Probe> {
    let k = ell.is_multiple_of(r).then_some((ell / r) as i64)?;
    let probe = |point: Rational, label: &str| Probe {
        point,
        label: label.to_string(),
    };
    match (r, missing) {
        (3, 0) if k == 2 => Some(probe(rat(-2, 3), "-2/3")),
        (3, 0) => Some(probe(rat(-30, k * k * k + k * k), "-30/(k^3+k^2)")),
        (3, 1) if k <= 3 => Some(probe(rat(-2, 3), "-2/3")),
        (3, 1) => Some(probe(rat(-300, 7 * (k * k * k - k)), "-300/(7(k^3-k))")),
        (_, 0) if k == 2 && r >= 16 => Some(probe(rat(-1, r as i64), "-1/r")),
        (_, 0) if k == 2 => Some(probe(rat(-2, r as i64), "-2/r")),
        _ => None,
    }
}

/// The family point when `P` is negative there, otherwise the most negative
/// point of the probe catalogue and the grid.
pub fn choose_negative_point(
    p: &KappaPolynomial,
    ell: usize,
    r: usize,
    missing: usize,
) -> Option<NegativityCertificate> {
    if let Some(fp) = family_probe(ell, r, missing) {
        let value = p.eval(&fp.point);
        if value.is_negative() {
            return Some(NegativityCertificate {
                point: fp.point,
                value,
                provenance: format!("family probe {}", fp.label),
            });
        }
    }
    let k = if ell.is_multiple_of(r) { ell / r } else { 0 };
    best_negative_point(p, &probe_catalogue(k, r), NEGATIVITY_GRID)
}

/// For odd `r` and `H` an edge subset of a tight cycle: take `c = -x*` for a
/// negative point `x*` of `P_H` (see [`choose_negative_point`]), then halve
/// `eps` from 1/2 until `h_{eps,c}` certifies exactly.
pub fn auto_witness_tight_cycle(h: &Hypergraph) -> Result<AutoWitness> {
    let r = h.uniformity();
    if r.is_multiple_of(2) {
        return invalid(format!("uniformity must be odd, got {r}"));
    }
    let (ell, _, skip) = as_tight_cycle_subgraph(h).ok_or_else(|| {
        Error::InvalidInput("hypergraph is not an edge subset of a tight cycle".into())
    })?;
    let p = kappa_tight_cycle_dp(ell, r, &skip)?;
    let neg = choose_negative_point(&p, ell, r, skip.len()).ok_or_else(|| {
        Error::Inconclusive(
            "criterion_inconclusive: no probe or grid point makes P_H negative".into(),
        )
    })?;
    let c = -neg.point.clone();
    let mut eps = rat(1, 2);
    for halvings in 0..=MAX_HALVINGS {
        let cert = certify_with(
            h,
            &h_kernel(r, &eps, &c)?,
            KernelDescriptor::h(r, eps.clone(), c.clone()),
            Strategy::Auto,
        )?;
        if cert.verdict == SidorenkoVerdict::NotSidorenko {
            let half = &eps / int(2);
            let stable = certify_with(
                h,
                &h_kernel(r, &half, &c)?,
                KernelDescriptor::h(r, half.clone(), c.clone()),
                Strategy::Auto,
            )?
            .verdict
                == SidorenkoVerdict::NotSidorenko;
            return Ok(AutoWitness {
                certificate: cert,
                negative_point: neg,
                c,
                eps,
                halvings,
                stable,
            });
        }
        eps /= int(2);
    }
    Err(Error::Inconclusive(format!(
        "epsilon_search_exhausted: no certificate after {MAX_HALVINGS} halvings with c = {}",
        format_rational(&c)
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeletionVerdict {
    Gain,
    NoGain,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeletionBoundReport {
    #[serde(with = "rational")]
    pub alpha0: Rational,
    #[serde(with = "rational")]
    pub beta0: Rational,
    pub v_g: usize,
    pub e_h: usize,
    pub v_h: usize,
    pub r: usize,
    /// `c'` as a closed expression over the exact inputs.
    pub c_prime_expression: String,
    pub c_prime: f64,
    pub c: f64,
    pub baseline_exponent: f64,
    pub improved_exponent: f64,
    pub size_condition_met: bool,
    /// Relation fixing the sparsification probability `p` at `n = v(G)^N`.
    pub p_relation: String,
    pub verdict: DeletionVerdict,
    pub notes: Vec<String>,
}

/// Exponent bookkeeping for the deletion method from exact `alpha0 =
/// t_{K_r}(G)`, `beta0 = t_H(G)` and `v(G)`.
pub fn deletion_bound_from_densities(
    h: &Hypergraph,
    alpha0: Rational,
    beta0: Rational,
    v_g: usize,
) -> Result<DeletionBoundReport> {
    let (r, e_h, v_h) = (h.uniformity(), h.edge_count(), h.vertex_count());
    if e_h < 2 {
        return invalid("the exponent needs e(H) >= 2");
    }
    if v_g < 2 {
        return invalid("the exponent needs v(G) >= 2");
    }
    if !alpha0.is_positive() || !beta0.is_positive() {
        return invalid("alpha0 and beta0 must be positive");
    }
    let rhs = pow(&alpha0, e_h);
    let c_prime = if beta0 == rhs {
        0.0
    } else {
        (e_h as f64 * ln_rational(&alpha0) - ln_rational(&beta0)) / (v_g as f64).ln()
    };
    let verdict = if beta0 < rhs {
        DeletionVerdict::Gain
    } else {
        DeletionVerdict::NoGain
    };
    let c = c_prime / (e_h - 1) as f64;
    let baseline = r as f64 - (v_h as f64 - r as f64) / (e_h - 1) as f64;
    // beta0/alpha0 >= v(G)^(r - v(H)), compared exactly
    let ratio = &beta0 / &alpha0;
    let size_condition_met = if v_h >= r {
        ratio * pow(&int(v_g as i64), v_h - r) >= int(1)
    } else {
        ratio >= pow(&int(v_g as i64), r - v_h)
    };
    let mut notes = vec![
        "gamma is an absolute constant from the construction and is not computed".to_string(),
        "the exponent applies at n = v(G)^N; intermediate n need interpolation".to_string(),
    ];
    if !size_condition_met {
        notes.push("size condition fails: replace G by a blow-up with more atoms".to_string());
    }
    Ok(DeletionBoundReport {
        c_prime_expression: format!(
            "({e_h}*ln({}) - ln({}))/ln({v_g})",
            format_rational(&alpha0),
            format_rational(&beta0)
        ),
        alpha0,
        beta0,
        v_g,
        e_h,
        v_h,
        r,
        c_prime,
        c,
        baseline_exponent: baseline,
        improved_exponent: baseline + c,
        size_condition_met,
        p_relation: format!("(p*alpha0)^({}) = n^({r} + c' - {v_h}) / (2*{r}!)", e_h - 1),
        verdict,
        notes,
    })
}

/// Deletion exponent for a weighted `G`, with `v(G)` its atom count.
pub fn deletion_bound(h: &Hypergraph, g: &SymmetricKernel) -> Result<DeletionBoundReport> {
    let alpha0 = g.edge_density();
    let beta0 = t_density(h, g, Strategy::Auto)?;
    deletion_bound_from_densities(h, alpha0, beta0, g.atom_count())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertificateStatus {
    NotRequested,
    Certified {
        #[serde(with = "rational")]
        eps: Rational,
        #[serde(with = "rational")]
        margin: Rational,
    },
    SkippedBudget,
    Failed {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub k: usize,
    pub r: usize,
    #[serde(with = "rational::opt")]
    pub x_star: Option<Rational>,
    #[serde(with = "rational::opt")]
    pub p_at_x_star: Option<Rational>,
    pub provenance: Option<String>,
    pub certificate: CertificateStatus,
}

/// Band-DP operations allowed per certificate evaluation in a scan.
pub const SCAN_CERTIFICATE_BUDGET: u128 = 10_000_000;

/// Every odd `r >= 3` and `k >= 2` with `kr <= max_vertices`: census
/// polynomial of `C_{kr}^(r)` by transfer matrix, its most negative probe or
/// grid point, and optionally an ε-certificate when the band DP is cheap.
pub fn scan_tight_cycles(max_vertices: usize, certify: bool) -> Result<Vec<ScanRow>> {
    if max_vertices > 42 {
        return invalid(format!("max_vertices is capped at 42, got {max_vertices}"));
    }
    let mut cells = Vec::new();
    for r in (3..=max_vertices / 2).step_by(2) {
        for k in 2..=max_vertices / r {
            cells.push((k, r));
        }
    }
    Ok(cells
        .into_par_iter()
        .map(|(k, r)| scan_row(k, r, certify))
        .collect())
}

fn scan_row(k: usize, r: usize, certify: bool) -> ScanRow {
    let ell = k * r;
    let found = kappa_tight_cycle_dp(ell, r, &[])
        .ok()
        .and_then(|p| choose_negative_point(&p, ell, r, 0));
    let certificate = if !certify {
        CertificateStatus::NotRequested
    } else if band_ops(ell, r) > SCAN_CERTIFICATE_BUDGET {
        CertificateStatus::SkippedBudget
    } else {
        match tight_cycle(ell, r).and_then(|h| auto_witness_tight_cycle(&h)) {
            Ok(w) => CertificateStatus::Certified {
                eps: w.eps,
                margin: w.certificate.margin,
            },
            Err(e) => CertificateStatus::Failed {
                reason: e.to_string(),
            },
        }
    };
    ScanRow {
        k,
        r,
        x_star: found.as_ref().map(|n| n.point.clone()),
        p_at_x_star: found.as_ref().map(|n| n.value.clone()),
        provenance: found.map(|n| n.provenance),
        certificate,
    }
}

fn band_ops(ell: usize, r: usize) -> u128 {
    let states = 1u128 << (r - 1);
    states * states * 2 * ell as u128
}
