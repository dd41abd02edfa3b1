//! Finite symmetric kernels: an atom space with exact rational masses and a
//! symmetric weight on `r`-tuples of atoms.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, resource, Result};
use crate::rational::{self, Rational};

/// Largest atom count a tensor power may produce.
pub const TENSOR_ATOM_BUDGET: usize = 4096;
/// Largest dense `atoms^r` table that is materialised eagerly.
pub const DENSE_TABLE_BUDGET: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelRange {
    Nonnegative,
    SignedUnit,
    Unrestricted,
}

impl KernelRange {
    pub fn admits(self, w: &Rational) -> bool {
        match self {
            KernelRange::Nonnegative => !w.is_negative(),
            KernelRange::SignedUnit => w.abs() <= Rational::one(),
            KernelRange::Unrestricted => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Weights {
    /// Full `atoms^r` table indexed by `sum_i x_i * atoms^i`.
    Dense(Vec<Rational>),
    /// Lazy tensor product: atom `x` decomposes in mixed radix over the
    /// factors (first factor most significant) and weights multiply.
    Tensor(Vec<SymmetricKernel>),
}

/// A symmetric kernel on a finite probability space.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricKernel {
    arity: usize,
    masses: Vec<Rational>,
    weights: Weights,
    range: KernelRange,
}

/// Non-decreasing `len`-tuples over `0..atoms`, in lexicographic order.
pub fn multisets(atoms: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(atoms: usize, len: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in min..atoms {
            cur.push(x);
            rec(atoms, len, x, cur, out);
            cur.pop();
        }
    }
    rec(atoms, len, 0, &mut cur, &mut out);
    out
}

fn check_masses(masses: &[Rational]) -> Result<()> {
    if masses.is_empty() {
        return invalid("kernel needs at least one atom");
    }
    if masses.iter().any(|m| !m.is_positive()) {
        return invalid("atom masses must be positive");
    }
    let total: Rational = masses.iter().cloned().sum();
    if !total.is_one() {
        return invalid(format!("atom masses sum to {total}, not 1"));
    }
    Ok(())
}

fn table_len(atoms: usize, arity: usize) -> Option<usize> {
    atoms.checked_pow(arity as u32)
}

impl SymmetricKernel {
    /// Builds a kernel by evaluating `weight` on every sorted multiset of
    /// atoms; the value is reused for all permutations.
    pub fn from_fn(
        arity: usize,
        masses: Vec<Rational>,
        range: KernelRange,
        weight: impl Fn(&[usize]) -> Rational,
    ) -> Result<Self> {
        if arity == 0 {
            return invalid("kernel arity must be positive");
        }
        check_masses(&masses)?;
        let a = masses.len();
        let len = match table_len(a, arity) {
            Some(l) if l <= DENSE_TABLE_BUDGET => l,
            _ => return resource(format!("dense table {a}^{arity} exceeds budget")),
        };
        let mut table = vec![Rational::zero(); len];
        let mut tuple = vec![0usize; arity];
        let mut sorted = vec![0usize; arity];
        for (idx, slot) in table.iter_mut().enumerate() {
            let mut rest = idx;
            for t in tuple.iter_mut() {
                *t = rest % a;
                rest /= a;
            }
            sorted.copy_from_slice(&tuple);
            sorted.sort_unstable();
            if sorted == tuple {
                *slot = weight(&sorted);
            }
        }
        // fill permutations from the sorted representative
        for idx in 0..len {
            let mut rest = idx;
            for t in tuple.iter_mut() {
                *t = rest % a;
                rest /= a;
            }
            sorted.copy_from_slice(&tuple);
            sorted.sort_unstable();
            if sorted != tuple {
                let canon = index_of(&sorted, a);
                table[idx] = table[canon].clone();
            }
        }
        for w in &table {
            if !range.admits(w) {
                return invalid(format!("weight {w} violates declared range {range:?}"));
            }
        }
        Ok(SymmetricKernel {
            arity,
            masses,
            weights: Weights::Dense(table),
            range,
        })
    }

    /// Builds a kernel from explicit multiset entries; omitted multisets are 0.
    pub fn from_entries(
        arity: usize,
        masses: Vec<Rational>,
        entries: &[(Vec<usize>, Rational)],
        range: KernelRange,
    ) -> Result<Self> {
        let a = masses.len();
        let mut map = std::collections::BTreeMap::new();
        for (atoms, value) in entries {
            if atoms.len() != arity {
                return invalid(format!("weight entry {atoms:?} has wrong arity"));
            }
            if atoms.iter().any(|&x| x >= a) {
                return invalid(format!("weight entry {atoms:?} refers to a missing atom"));
            }
            let mut key = atoms.clone();
            key.sort_unstable();
            if let Some(prev) = map.insert(key.clone(), value.clone()) {
                if prev != *value {
                    return invalid(format!("conflicting weights for multiset {key:?}"));
                }
            }
        }
        Self::from_fn(arity, masses, range, |m| {
            map.get(m).cloned().unwrap_or_else(Rational::zero)
        })
    }

    /// One atom of mass 1 carrying `value`.
    pub fn constant(arity: usize, value: Rational) -> Result<Self> {
        let range = if value.is_negative() {
            KernelRange::Unrestricted
        } else {
            KernelRange::Nonnegative
        };
        Self::from_fn(arity, vec![Rational::one()], range, |_| value.clone())
    }

    pub fn uniform_masses(atoms: usize) -> Vec<Rational> {
        vec![Rational::new(1.into(), (atoms as i64).into()); atoms]
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn atom_count(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn range(&self) -> KernelRange {
        self.range
    }

    /// Re-declares the range after checking every weight against it.
    pub fn with_range(mut self, range: KernelRange) -> Result<Self> {
        if let Some(w) = self
            .distinct_weights()
            .into_iter()
            .find(|w| !range.admits(w))
        {
            return invalid(format!("weight {w} violates declared range {range:?}"));
        }
        self.range = range;
        Ok(self)
    }

    /// Weight of a tuple of atoms, in any order.
    pub fn weight(&self, atoms: &[usize]) -> Rational {
        debug_assert_eq!(atoms.len(), self.arity);
        match &self.weights {
            Weights::Dense(t) => t[index_of(atoms, self.masses.len())].clone(),
            Weights::Tensor(parts) => {
                let mut acc = Rational::one();
                let mut rest: Vec<usize> = atoms.to_vec();
                for p in parts.iter().rev() {
                    let pa = p.atom_count();
                    let local: Vec<usize> = rest.iter().map(|x| x % pa).collect();
                    for x in rest.iter_mut() {
                        *x /= pa;
                    }
                    acc *= p.weight(&local);
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
        }
    }

    /// The full `atoms^r` table, indexed by `sum_i x_i * atoms^i`.
    pub fn dense_table(&self) -> Result<Vec<Rational>> {
        match &self.weights {
            Weights::Dense(t) => Ok(t.clone()),
            Weights::Tensor(_) => {
                let a = self.atom_count();
                let len = match table_len(a, self.arity) {
                    Some(l) if l <= DENSE_TABLE_BUDGET => l,
                    _ => return resource(format!("dense table {a}^{} exceeds budget", self.arity)),
                };
                let mut tuple = vec![0; self.arity];
                Ok((0..len)
                    .map(|idx| {
                        let mut rest = idx;
                        for t in tuple.iter_mut() {
                            *t = rest % a;
                            rest /= a;
                        }
                        self.weight(&tuple)
                    })
                    .collect())
            }
        }
    }

    /// Weights as `(sorted multiset, value)` for every nonzero entry.
    pub fn entries(&self) -> Vec<(Vec<usize>, Rational)> {
        multisets(self.atom_count(), self.arity)
            .into_iter()
            .map(|m| {
                let w = self.weight(&m);
                (m, w)
            })
            .filter(|(_, w)| !w.is_zero())
            .collect()
    }

    fn distinct_weights(&self) -> Vec<Rational> {
        let mut ws: Vec<Rational> = match &self.weights {
            Weights::Dense(t) => t.clone(),
            Weights::Tensor(_) => self.entries().into_iter().map(|(_, w)| w).collect(),
        };
        ws.sort();
        ws.dedup();
        ws
    }

    pub fn max_abs_weight(&self) -> Rational {
        self.distinct_weights()
            .into_iter()
            .map(|w| w.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `t_{K_r}`: the mass-weighted mean of the kernel.
    pub fn edge_density(&self) -> Rational {
        let a = self.atom_count();
        let mut total = Rational::zero();
        for m in multisets(a, self.arity) {
            let w = self.weight(&m);
            if w.is_zero() {
                continue;
            }
            let mut mass = Rational::one();
            for &x in &m {
                mass *= &self.masses[x];
            }
            total += w * mass * Rational::from_integer(multinomial(&m).into());
        }
        total
    }

    /// `(x1, y1), ..., (xr, yr) -> self(x) * other(y)` on the product space.
    pub fn tensor_product(&self, other: &SymmetricKernel) -> Result<SymmetricKernel> {
        if self.arity != other.arity {
            return invalid(format!("arity mismatch {} vs {}", self.arity, other.arity));
        }
        let mut parts = self.tensor_parts();
        parts.extend(other.tensor_parts());
        Self::from_parts(parts)
    }

    pub fn tensor_power(&self, n: usize) -> Result<SymmetricKernel> {
        if n == 0 {
            return invalid("tensor power needs N >= 1");
        }
        let atoms = (self.atom_count() as u128).checked_pow(n as u32);
        if atoms.is_none_or(|a| a > TENSOR_ATOM_BUDGET as u128) {
            return resource(format!(
                "tensor power would have {}^{n} atoms, budget is {TENSOR_ATOM_BUDGET}",
                self.atom_count()
            ));
        }
        let parts: Vec<SymmetricKernel> = (0..n).flat_map(|_| self.tensor_parts()).collect();
        Self::from_parts(parts)
    }

    fn tensor_parts(&self) -> Vec<SymmetricKernel> {
        match &self.weights {
            Weights::Tensor(p) => p.clone(),
            Weights::Dense(_) => vec![self.clone()],
        }
    }

    fn from_parts(parts: Vec<SymmetricKernel>) -> Result<SymmetricKernel> {
        if parts.len() == 1 {
            return Ok(parts.into_iter().next().unwrap());
        }
        let arity = parts[0].arity;
        let mut masses = vec![Rational::one()];
        for p in &parts {
            masses = masses
                .iter()
                .flat_map(|m| p.masses.iter().map(move |q| m * q))
                .collect();
        }
        let range = combine_ranges(parts.iter().map(|p| p.range));
        let lazy = SymmetricKernel {
            arity,
            masses,
            weights: Weights::Tensor(parts),
            range,
        };
        let dense_ok = table_len(lazy.atom_count(), arity).is_some_and(|l| l <= 1 << 16);
        if dense_ok {
            let table = lazy.dense_table()?;
            Ok(SymmetricKernel {
                weights: Weights::Dense(table),
                ..lazy
            })
        } else {
            Ok(lazy)
        }
    }

    /// Splits every atom into `t` atoms of equal mass with copied weights.
    pub fn blow_up(&self, t: usize) -> Result<SymmetricKernel> {
        if t == 0 {
            return invalid("blow-up factor must be at least 1");
        }
        let share = Rational::new(1.into(), (t as i64).into());
        let masses = self
            .masses
            .iter()
            .flat_map(|m| std::iter::repeat_n(m * &share, t))
            .collect();
        SymmetricKernel::from_fn(self.arity, masses, self.range, |m| {
            let orig: Vec<usize> = m.iter().map(|x| x / t).collect();
            self.weight(&orig)
        })
    }

    /// Averaging out the last coordinate gives zero for every choice of the
    /// other `r - 1` atoms.
    pub fn is_zero_averaging(&self) -> bool {
        let a = self.atom_count();
        multisets(a, self.arity - 1).into_iter().all(|m| {
            let mut tuple = m.clone();
            tuple.push(0);
            let mut acc = Rational::zero();
            for x in 0..a {
                tuple[self.arity - 1] = x;
                acc += &self.masses[x] * self.weight(&tuple);
            }
            acc.is_zero()
        })
    }

    /// `1 + s * self` pointwise, the substitution used by the commonness
    /// inequality.
    pub fn affine(
        &self,
        shift: &Rational,
        scale: &Rational,
        range: KernelRange,
    ) -> Result<SymmetricKernel> {
        SymmetricKernel::from_fn(self.arity, self.masses.clone(), range, |m| {
            shift + scale * self.weight(m)
        })
    }

    pub fn scaled(&self, scale: &Rational) -> Result<SymmetricKernel> {
        let range = if scale.abs() <= Rational::one() {
            self.range
        } else {
            KernelRange::Unrestricted
        };
        self.affine(&Rational::zero(), scale, range)
    }

    pub fn to_file(&self) -> KernelFile {
        KernelFile {
            r: self.arity,
            atoms: self
                .masses
                .iter()
                .map(|m| AtomEntry { mass: m.clone() })
                .collect(),
            weights: self
                .entries()
                .into_iter()
                .map(|(atoms, value)| WeightEntry { atoms, value })
                .collect(),
            range: self.range,
        }
    }

    pub fn from_file(f: &KernelFile) -> Result<Self> {
        let masses = f.atoms.iter().map(|a| a.mass.clone()).collect();
        let entries: Vec<_> = f
            .weights
            .iter()
            .map(|w| (w.atoms.clone(), w.value.clone()))
            .collect();
        Self::from_entries(f.r, masses, &entries, f.range)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("kernel serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: KernelFile =
            serde_json::from_str(s).map_err(|e| crate::Error::InvalidInput(e.to_string()))?;
        Self::from_file(&f)
    }
}

fn combine_ranges(rs: impl Iterator<Item = KernelRange>) -> KernelRange {
    let rs: Vec<_> = rs.collect();
    if rs.iter().all(|r| *r == KernelRange::Nonnegative) {
        KernelRange::Nonnegative
    } else if rs.iter().all(|r| *r != KernelRange::Unrestricted) {
        KernelRange::SignedUnit
    } else {
        KernelRange::Unrestricted
    }
}

pub(crate) fn index_of(atoms: &[usize], a: usize) -> usize {
    atoms.iter().rev().fold(0, |acc, &x| acc * a + x)
}

/// Number of distinct orderings of a sorted multiset.
fn multinomial(sorted: &[usize]) -> u128 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let mut run = 0;
    for i in 0..sorted.len() {
        num *= (i + 1) as u128;
        if i > 0 && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            run = 1;
        }
        den *= run as u128;
    }
    num / den
}

/// On-disk kernel format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelFile {
    pub r: usize,
    pub atoms: Vec<AtomEntry>,
    pub weights: Vec<WeightEntry>,
    pub range: KernelRange,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomEntry {
    #[serde(with = "rational")]
    pub mass: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub atoms: Vec<usize>,
    #[serde(with = "rational")]
    pub value: Rational,
}

/// A two-variable kernel `f(x, y)` with `x` ranging over a left atom space and
/// `y` over a right one; no symmetry is assumed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBipartite")]
pub struct BipartiteKernel {
    #[serde(with = "rational::vec")]
    left_masses: Vec<Rational>,
    #[serde(with = "rational::vec")]
    right_masses: Vec<Rational>,
    /// `values[x][y]`
    #[serde(with = "rational::table")]
    values: Vec<Vec<Rational>>,
}

#[derive(Deserialize)]
struct RawBipartite {
    #[serde(with = "rational::vec")]
    left_masses: Vec<Rational>,
    #[serde(with = "rational::vec")]
    right_masses: Vec<Rational>,
    #[serde(with = "rational::table")]
    values: Vec<Vec<Rational>>,
}

impl TryFrom<RawBipartite> for BipartiteKernel {
    type Error = crate::Error;

    fn try_from(raw: RawBipartite) -> Result<Self> {
        BipartiteKernel::new(raw.left_masses, raw.right_masses, raw.values)
    }
}

impl BipartiteKernel {
    pub fn new(
        left_masses: Vec<Rational>,
        right_masses: Vec<Rational>,
        values: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        check_masses(&left_masses)?;
        check_masses(&right_masses)?;
        if values.len() != left_masses.len()
            || values.iter().any(|row| row.len() != right_masses.len())
        {
            return invalid("bipartite kernel table does not match its atom spaces");
        }
        Ok(BipartiteKernel {
            left_masses,
            right_masses,
            values,
        })
    }

    pub fn left_masses(&self) -> &[Rational] {
        &self.left_masses
    }

    pub fn right_masses(&self) -> &[Rational] {
        &self.right_masses
    }

    pub fn value(&self, x: usize, y: usize) -> &Rational {
        &self.values[x][y]
    }

    /// `sum_x mass(x) f(x, y) = 0` for every `y`.
    pub fn is_left_zero_averaging(&self) -> bool {
        (0..self.right_masses.len()).all(|y| {
            self.left_masses
                .iter()
                .enumerate()
                .map(|(x, m)| m * &self.values[x][y])
                .sum::<Rational>()
                .is_zero()
        })
    }
}
