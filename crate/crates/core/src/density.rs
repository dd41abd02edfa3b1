//! Homomorphism densities over finite atom spaces.
//!
//! Every density is a sum over atom assignments of a product of factors, so a
//! small factor-graph engine does the work for exact rationals and for `f64`
//! alike: brute-force enumeration, variable elimination, and a band DP for
//! subgraphs of tight cycles.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, resource, Result};
use crate::hypergraph::Hypergraph;
use crate::kappa::as_tight_cycle_subgraph;
use crate::kernel::{BipartiteKernel, SymmetricKernel};
use crate::rational::Rational;

/// Weighted operations allowed for brute-force enumeration.
pub const BRUTEFORCE_BUDGET: u128 = 1_000_000_000;
/// Largest intermediate factor variable elimination may build.
pub const FACTOR_BUDGET: u128 = 10_000_000;
/// Weighted operations allowed for the band DP.
pub const BAND_BUDGET: u128 = 2_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Bruteforce,
    VariableElimination,
    BandDp,
    Auto,
}

impl std::str::FromStr for Strategy {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bruteforce" => Ok(Strategy::Bruteforce),
            "variable_elimination" | "ve" => Ok(Strategy::VariableElimination),
            "band_dp" | "band" => Ok(Strategy::BandDp),
            "auto" => Ok(Strategy::Auto),
            _ => invalid(format!("unknown strategy {s:?}")),
        }
    }
}

/// Arithmetic the engine needs; implemented for exact rationals and `f64`.
pub trait Scalar: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn add_to(&mut self, other: &Self);
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::from_integer(0.into())
    }
    fn one() -> Self {
        Rational::from_integer(1.into())
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        BigInt::from(0)
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
}

/// A table over the variables in `scope`; index is little-endian in scope
/// order.
#[derive(Clone, Debug)]
pub struct Factor<T> {
    scope: Vec<usize>,
    table: Vec<T>,
}

/// Variables with mass vectors plus factors; its value is the mass-weighted
/// sum of factor products.
#[derive(Clone, Debug)]
pub struct Model<T> {
    masses: Vec<Vec<T>>,
    factors: Vec<Factor<T>>,
}

impl<T: Scalar> Model<T> {
    pub fn new(masses: Vec<Vec<T>>) -> Self {
        Model {
            masses,
            factors: Vec::new(),
        }
    }

    pub fn add_factor(&mut self, scope: Vec<usize>, table: Vec<T>) {
        debug_assert_eq!(
            table.len(),
            scope
                .iter()
                .map(|&v| self.masses[v].len())
                .product::<usize>()
        );
        self.factors.push(Factor { scope, table });
    }

    fn dim(&self, v: usize) -> usize {
        self.masses[v].len()
    }

    pub fn bruteforce(&self) -> Result<T> {
        let n = self.masses.len();
        let states = self
            .masses
            .iter()
            .try_fold(1u128, |acc, m| acc.checked_mul(m.len() as u128));
        let ops = states.and_then(|s| s.checked_mul(self.factors.len().max(1) as u128));
        if ops.is_none_or(|o| o > BRUTEFORCE_BUDGET) {
            return resource(format!(
                "brute force over {n} variables exceeds {BRUTEFORCE_BUDGET} weighted operations"
            ));
        }
        // factors are applied as soon as their last variable is assigned
        let mut due: Vec<Vec<usize>> = vec![Vec::new(); n.max(1)];
        let mut constant = T::one();
        for (i, f) in self.factors.iter().enumerate() {
            match f.scope.iter().max() {
                Some(&v) => due[v].push(i),
                None => constant = constant.mul(&f.table[0]),
            }
        }
        let mut assignment = vec![0usize; n];
        let mut total = T::zero();
        self.dfs(0, &T::one(), &due, &mut assignment, &mut total);
        Ok(total.mul(&constant))
    }

    fn dfs(&self, v: usize, acc: &T, due: &[Vec<usize>], asg: &mut [usize], total: &mut T) {
        if v == self.masses.len() {
            total.add_to(acc);
            return;
        }
        for x in 0..self.dim(v) {
            asg[v] = x;
            let mut val = acc.mul(&self.masses[v][x]);
            for &fi in &due[v] {
                if val.is_zero() {
                    break;
                }
                let f = &self.factors[fi];
                val = val.mul(&f.table[self.factor_index(f, asg)]);
            }
            if !val.is_zero() {
                self.dfs(v + 1, &val, due, asg, total);
            }
        }
    }

    fn factor_index(&self, f: &Factor<T>, asg: &[usize]) -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for &v in &f.scope {
            idx += asg[v] * stride;
            stride *= self.dim(v);
        }
        idx
    }

    /// Elimination order chosen greedily by fill-in, ties by factor size then
    /// index; returns the order and the largest factor it builds.
    pub fn elimination_order(&self) -> (Vec<usize>, u128) {
        let n = self.masses.len();
        let mut adj = vec![vec![false; n]; n];
        for f in &self.factors {
            for &a in &f.scope {
                for &b in &f.scope {
                    if a != b {
                        adj[a][b] = true;
                    }
                }
            }
        }
        let mut alive = vec![true; n];
        let mut order = Vec::with_capacity(n);
        let mut widest = 1u128;
        for _ in 0..n {
            let mut best: Option<(usize, u128, usize)> = None;
            for v in (0..n).filter(|&v| alive[v]) {
                let nbrs: Vec<usize> = (0..n).filter(|&u| alive[u] && adj[v][u]).collect();
                let mut fill = 0;
                for (i, &a) in nbrs.iter().enumerate() {
                    for &b in &nbrs[i + 1..] {
                        if !adj[a][b] {
                            fill += 1;
                        }
                    }
                }
                let size = nbrs
                    .iter()
                    .fold(1u128, |acc, &u| acc.saturating_mul(self.dim(u) as u128));
                if best.is_none_or(|(bf, bs, _)| (fill, size) < (bf, bs)) {
                    best = Some((fill, size, v));
                }
            }
            let (_, size, v) = best.expect("a live variable remains");
            widest = widest.max(size);
            let nbrs: Vec<usize> = (0..n).filter(|&u| alive[u] && adj[v][u]).collect();
            for &a in &nbrs {
                for &b in &nbrs {
                    if a != b {
                        adj[a][b] = true;
                    }
                }
            }
            alive[v] = false;
            order.push(v);
        }
        (order, widest)
    }

    pub fn variable_elimination(&self) -> Result<T> {
        let (order, widest) = self.elimination_order();
        if widest > FACTOR_BUDGET {
            return resource(format!(
                "variable elimination needs a factor with {widest} entries, cap is {FACTOR_BUDGET}"
            ));
        }
        let mut pool: Vec<Factor<T>> = self.factors.clone();
        let mut result = T::one();
        for v in order {
            let (touching, rest): (Vec<_>, Vec<_>) =
                pool.into_iter().partition(|f| f.scope.contains(&v));
            pool = rest;
            if touching.is_empty() {
                let mut s = T::zero();
                for m in &self.masses[v] {
                    s.add_to(m);
                }
                result = result.mul(&s);
                continue;
            }
            pool.push(self.sum_out(v, &touching));
        }
        for f in pool {
            result = result.mul(&f.table[0]);
        }
        Ok(result)
    }

    fn sum_out(&self, v: usize, touching: &[Factor<T>]) -> Factor<T> {
        let mut scope: Vec<usize> = touching
            .iter()
            .flat_map(|f| f.scope.iter().copied())
            .filter(|&u| u != v)
            .collect();
        scope.sort_unstable();
        scope.dedup();
        let dims: Vec<usize> = scope.iter().map(|&u| self.dim(u)).collect();
        let size: usize = dims.iter().product();
        // per-factor strides for scope variables and for v
        let strides: Vec<(Vec<usize>, usize)> = touching
            .iter()
            .map(|f| {
                let mut s = vec![0; scope.len()];
                let mut sv = 0;
                let mut stride = 1;
                for &u in &f.scope {
                    if u == v {
                        sv = stride;
                    } else {
                        let pos = scope.binary_search(&u).expect("variable in union scope");
                        s[pos] = stride;
                    }
                    stride *= self.dim(u);
                }
                (s, sv)
            })
            .collect();
        let mut table = Vec::with_capacity(size);
        let mut asg = vec![0usize; scope.len()];
        let mut base = vec![0usize; touching.len()];
        for _ in 0..size {
            for (b, (s, _)) in base.iter_mut().zip(&strides) {
                *b = asg.iter().zip(s).map(|(x, st)| x * st).sum();
            }
            let mut acc = T::zero();
            for (x, m) in self.masses[v].iter().enumerate() {
                let mut term = m.clone();
                for (fi, f) in touching.iter().enumerate() {
                    if term.is_zero() {
                        break;
                    }
                    term = term.mul(&f.table[base[fi] + x * strides[fi].1]);
                }
                acc.add_to(&term);
            }
            table.push(acc);
            for (a, &d) in asg.iter_mut().zip(&dims) {
                *a += 1;
                if *a < d {
                    break;
                }
                *a = 0;
            }
        }
        Factor { scope, table }
    }
}

/// Dense view of a kernel in the engine's scalar type: masses and the full
/// `atoms^r` table indexed by `sum_i x_i * atoms^i`.
#[derive(Clone, Debug)]
pub struct DenseKernel<T> {
    pub arity: usize,
    pub masses: Vec<T>,
    pub table: Vec<T>,
}

impl DenseKernel<Rational> {
    pub fn from_kernel(w: &SymmetricKernel) -> Result<Self> {
        Ok(DenseKernel {
            arity: w.arity(),
            masses: w.masses().to_vec(),
            table: w.dense_table()?,
        })
    }
}

impl DenseKernel<f64> {
    pub fn from_kernel_f64(w: &SymmetricKernel) -> Result<Self> {
        let t = w.dense_table()?;
        Ok(DenseKernel {
            arity: w.arity(),
            masses: w.masses().iter().map(crate::rational::to_f64).collect(),
            table: t.iter().map(crate::rational::to_f64).collect(),
        })
    }
}

impl<T: Scalar> DenseKernel<T> {
    pub fn atom_count(&self) -> usize {
        self.masses.len()
    }

    fn model(&self, h: &Hypergraph) -> Model<T> {
        let mut m = Model::new(vec![self.masses.clone(); h.vertex_count()]);
        for e in h.edges() {
            m.add_factor(e.clone(), self.table.clone());
        }
        m
    }

    /// `t_H` of this kernel with the requested strategy.
    pub fn density(&self, h: &Hypergraph, strategy: Strategy) -> Result<T> {
        if h.uniformity() != self.arity {
            return invalid(format!(
                "kernel arity {} does not match uniformity {}",
                self.arity,
                h.uniformity()
            ));
        }
        match strategy {
            Strategy::Bruteforce => self.model(h).bruteforce(),
            Strategy::VariableElimination => self.model(h).variable_elimination(),
            Strategy::BandDp => match as_tight_cycle_subgraph(h) {
                Some((ell, r, skip)) => self.band_dp(ell, r, &skip),
                None => invalid("band DP needs a subgraph of a tight cycle on its vertex order"),
            },
            Strategy::Auto => {
                if let Some((ell, r, skip)) = as_tight_cycle_subgraph(h) {
                    if band_cost(ell, r, self.atom_count()) <= BAND_BUDGET {
                        return self.band_dp(ell, r, &skip);
                    }
                }
                let model = self.model(h);
                if model.elimination_order().1 <= FACTOR_BUDGET {
                    model.variable_elimination()
                } else {
                    model.bruteforce()
                }
            }
        }
    }

    /// Transfer along `C_ell^(r)` with the windows in `skip` absent. The state
    /// is the atoms of the last `r - 1` vertices; the first window is
    /// enumerated to close the cycle.
    pub fn band_dp(&self, ell: usize, r: usize, skip: &[usize]) -> Result<T> {
        let a = self.atom_count();
        if ell <= r || r < 2 {
            return invalid(format!("band DP needs ell > r >= 2, got ell={ell}, r={r}"));
        }
        if band_cost(ell, r, a) > BAND_BUDGET {
            return resource(format!(
                "band DP with {a} atoms and window {} exceeds {BAND_BUDGET} operations",
                r - 1
            ));
        }
        let w = r - 1;
        let states = a.pow(w as u32);
        let mut present = vec![true; ell];
        for &s in skip {
            present[s] = false;
        }
        // state digit j holds the vertex j steps back from the newest one
        let digit = |s: usize, j: usize| (s / a.pow(j as u32)) % a;
        let mut total = T::zero();
        let mut tuple = vec![0usize; r];
        for seed in 0..states {
            let mut start = T::one();
            for j in 0..w {
                start = start.mul(&self.masses[digit(seed, j)]);
            }
            if start.is_zero() {
                continue;
            }
            let mut cur = vec![T::zero(); states];
            cur[seed] = start;
            for v in w..ell {
                let mut next = vec![T::zero(); states];
                for (s, val) in cur.iter().enumerate() {
                    if val.is_zero() {
                        continue;
                    }
                    for x in 0..a {
                        let mut term = val.mul(&self.masses[x]);
                        if present[v - w] {
                            tuple[0] = x;
                            for j in 0..w {
                                tuple[j + 1] = digit(s, j);
                            }
                            term = term.mul(&self.table[crate::kernel::index_of(&tuple, a)]);
                        }
                        if !term.is_zero() {
                            next[(s * a + x) % states].add_to(&term);
                        }
                    }
                }
                cur = next;
            }
            // windows that wrap around: start i in ell-w..ell covers
            // i..ell-1 from the final state and 0..i+r-1-ell from the seed
            for (s, val) in cur.iter().enumerate() {
                if val.is_zero() {
                    continue;
                }
                let mut acc = val.clone();
                for (i, &here) in present.iter().enumerate().skip(ell - w) {
                    if !here {
                        continue;
                    }
                    for (slot, pos) in (i..i + r).enumerate() {
                        tuple[slot] = if pos < ell {
                            digit(s, ell - 1 - pos)
                        } else {
                            digit(seed, w - 1 - (pos - ell))
                        };
                    }
                    acc = acc.mul(&self.table[crate::kernel::index_of(&tuple, a)]);
                    if acc.is_zero() {
                        break;
                    }
                }
                total.add_to(&acc);
            }
        }
        Ok(total)
    }
}

fn band_cost(ell: usize, r: usize, a: usize) -> u128 {
    let states = (a as u128).saturating_pow((r - 1) as u32);
    states
        .saturating_mul(states)
        .saturating_mul(a as u128)
        .saturating_mul(ell as u128)
}

/// Exact `t_H(W)`.
pub fn t_density(h: &Hypergraph, w: &SymmetricKernel, strategy: Strategy) -> Result<Rational> {
    if h.uniformity() != w.arity() {
        return invalid(format!(
            "kernel arity {} does not match uniformity {}",
            w.arity(),
            h.uniformity()
        ));
    }
    let dense = DenseKernel::from_kernel(w)?;
    let (masses, dm) = clear_denominators(&dense.masses);
    let (table, dt) = clear_denominators(&dense.table);
    let num = DenseKernel {
        arity: dense.arity,
        masses,
        table,
    }
    .density(h, strategy)?;
    let den = num_traits::pow(dm, h.vertex_count()) * num_traits::pow(dt, h.edge_count());
    Ok(Rational::new(num, den))
}

/// Integers `x * d` for the least common denominator `d`. Every term of a
/// density uses one mass per vertex and one weight per edge, so the engine
/// can run on integers and divide once at the end.
fn clear_denominators(xs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let d = xs.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    (xs.iter().map(|x| x.numer() * (&d / x.denom())).collect(), d)
}

/// Exact density of a bipartite 2-graph whose vertices `0..left` sit on the
/// left side, e.g. a Levi graph.
pub fn t_bipartite(g: &Hypergraph, left: usize, f: &BipartiteKernel) -> Result<Rational> {
    let (lm, dl) = clear_denominators(f.left_masses());
    let (rm, dr) = clear_denominators(f.right_masses());
    let (la, ra) = (lm.len(), rm.len());
    let flat: Vec<Rational> = (0..la)
        .flat_map(|x| (0..ra).map(move |y| (x, y)))
        .map(|(x, y)| f.value(x, y).clone())
        .collect();
    let (vals, dt) = clear_denominators(&flat);
    let num = bipartite_model(g, left, lm, rm, |x, y| vals[x * ra + y].clone())?
        .variable_elimination()?;
    let right = g.vertex_count().saturating_sub(left);
    let den = num_traits::pow(dl, left.min(g.vertex_count()))
        * num_traits::pow(dr, right)
        * num_traits::pow(dt, g.edge_count());
    Ok(Rational::new(num, den))
}

/// `t_{L(H)}(f)` with vertices of `H` on the left and edges on the right.
pub fn t_levi(h: &Hypergraph, f: &BipartiteKernel) -> Result<Rational> {
    t_bipartite(&h.levi_graph(), h.vertex_count(), f)
}

pub(crate) fn bipartite_model<T: Scalar>(
    g: &Hypergraph,
    left: usize,
    left_masses: Vec<T>,
    right_masses: Vec<T>,
    value: impl Fn(usize, usize) -> T,
) -> Result<Model<T>> {
    if g.uniformity() != 2 {
        return invalid("bipartite density needs a 2-graph");
    }
    let (la, ra) = (left_masses.len(), right_masses.len());
    let masses = (0..g.vertex_count())
        .map(|v| {
            if v < left {
                left_masses.clone()
            } else {
                right_masses.clone()
            }
        })
        .collect();
    let mut m = Model::new(masses);
    // scope (u, w) with u on the left: index x + la * y
    let mut table = Vec::with_capacity(la * ra);
    for y in 0..ra {
        for x in 0..la {
            table.push(value(x, y));
        }
    }
    for e in g.edges() {
        let (u, w) = (e[0], e[1]);
        if !(u < left && w >= left) {
            return invalid(format!(
                "edge {e:?} does not cross the bipartition at {left}"
            ));
        }
        m.add_factor(vec![u, w], table.clone());
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{loose_triangle, tight_cycle, tight_cycle_minus_window};
    use crate::kernel::KernelRange;
    use crate::rational::{int, pow, rat};

    const ALL: [Strategy; 3] = [
        Strategy::Bruteforce,
        Strategy::VariableElimination,
        Strategy::Auto,
    ];

    fn linear_girth(c: Rational) -> SymmetricKernel {
        SymmetricKernel::from_fn(
            3,
            SymmetricKernel::uniform_masses(2),
            KernelRange::Nonnegative,
            |m| {
                let x: Vec<i64> = m.iter().map(|&a| if a == 0 { 1 } else { -1 }).collect();
                int(1) - &c * int(x[0] * x[1] + x[0] * x[2] + x[1] * x[2])
            },
        )
        .unwrap()
    }

    #[test]
    fn single_edge_constant() {
        let w = SymmetricKernel::constant(3, rat(1, 2)).unwrap();
        let h = Hypergraph::single_edge(3).unwrap();
        for s in ALL {
            assert_eq!(t_density(&h, &w, s).unwrap(), rat(1, 2));
        }
    }

    #[test]
    fn constant_kernel_on_tight_cycle() {
        let w = SymmetricKernel::constant(3, rat(2, 5)).unwrap();
        let h = tight_cycle(6, 3).unwrap();
        for s in [
            Strategy::Bruteforce,
            Strategy::VariableElimination,
            Strategy::BandDp,
        ] {
            assert_eq!(t_density(&h, &w, s).unwrap(), pow(&rat(2, 5), 6));
        }
    }

    #[test]
    fn loose_triangle_linear_girth() {
        let h = loose_triangle(3).unwrap();
        for s in ALL {
            assert_eq!(
                t_density(&h, &linear_girth(rat(1, 3)), s).unwrap(),
                rat(26, 27)
            );
        }
    }

    #[test]
    fn band_dp_agrees_on_skipped_windows() {
        let masses = vec![rat(1, 6), rat(1, 3), rat(1, 2)];
        let w = SymmetricKernel::from_fn(3, masses, KernelRange::Unrestricted, |m| {
            rat(m.iter().map(|&x| x as i64 + 1).product::<i64>() - 3, 4)
        })
        .unwrap();
        for start in 0..7 {
            let h = tight_cycle_minus_window(7, 3, start).unwrap();
            let bf = t_density(&h, &w, Strategy::Bruteforce).unwrap();
            assert_eq!(t_density(&h, &w, Strategy::BandDp).unwrap(), bf);
            assert_eq!(
                t_density(&h, &w, Strategy::VariableElimination).unwrap(),
                bf
            );
        }
    }

    #[test]
    fn band_dp_rejects_other_shapes() {
        let w = SymmetricKernel::constant(3, int(1)).unwrap();
        let h = crate::hypergraph::half_octahedron();
        assert!(t_density(&h, &w, Strategy::BandDp).is_err());
        // windows 0, 2, 4 of the tight 6-cycle
        assert_eq!(
            t_density(&loose_triangle(3).unwrap(), &w, Strategy::BandDp).unwrap(),
            int(1)
        );
    }

    #[test]
    fn arity_mismatch() {
        let w = SymmetricKernel::constant(2, int(1)).unwrap();
        assert!(t_density(&loose_triangle(3).unwrap(), &w, Strategy::Auto).is_err());
    }

    #[test]
    fn bruteforce_budget_is_enforced() {
        let w = SymmetricKernel::from_fn(
            2,
            SymmetricKernel::uniform_masses(20),
            KernelRange::Nonnegative,
            |_| int(1),
        )
        .unwrap();
        let h = crate::hypergraph::tight_cycle(9, 2).unwrap();
        let err = t_density(&h, &w, Strategy::Bruteforce).unwrap_err();
        assert!(matches!(err, crate::Error::Resource(_)));
        assert_eq!(
            t_density(&h, &w, Strategy::VariableElimination).unwrap(),
            int(1)
        );
    }

    #[test]
    fn levi_density_of_single_edge() {
        // f(x, y) = x*y with x, y = +-1: every vertex pairs with the edge atom
        let f = BipartiteKernel::new(
            SymmetricKernel::uniform_masses(2),
            SymmetricKernel::uniform_masses(2),
            vec![vec![int(1), int(-1)], vec![int(-1), int(1)]],
        )
        .unwrap();
        let h = Hypergraph::single_edge(2).unwrap();
        // sum_y m(y) (sum_x m(x) f(x,y))^2 = 0
        assert_eq!(t_levi(&h, &f).unwrap(), int(0));
    }

    #[test]
    fn float_engine_matches_exact() {
        let w = linear_girth(rat(1, 6));
        let h = loose_triangle(3).unwrap();
        let d = DenseKernel::from_kernel_f64(&w).unwrap();
        let exact = crate::rational::to_f64(&t_density(&h, &w, Strategy::Auto).unwrap());
        assert!((d.density(&h, Strategy::Auto).unwrap() - exact).abs() < 1e-12);
    }
}
