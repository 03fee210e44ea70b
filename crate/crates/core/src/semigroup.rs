//! The classifying combinatorics: admissible degree sets `Γ`, their
//! indecomposable generators and relation vectors, conductor-ideal
//! generators, and the order sets governing finite automorphism groups.
//!
//! For a fixed conductor exponent `m`, the degree set of an algebra is a
//! subset `Γ ⊆ {2, …, m-2}` with `Γ + Γ ⊆ Γ ∪ [m, ∞)`.  `S(m)` denotes the
//! collection of all such subsets (the empty set included).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{p_coprime_divisor, FieldSpec};
use crate::matrix::Matrix;

/// An exponent vector in `ℕ^s` over the indecomposables `ν_1 < … < ν_s`.
pub type ExpVec = Vec<u32>;

/// An admissible degree set for conductor exponent `m`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Gamma {
    m: usize,
    members: Vec<usize>,
}

impl Gamma {
    /// Validates membership range and additive closure below `m`.
    pub fn new<I: IntoIterator<Item = usize>>(m: usize, members: I) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("m must be >= 2, got {m}")));
        }
        let set: BTreeSet<usize> = members.into_iter().collect();
        for &g in &set {
            if g < 2 || g > m.saturating_sub(2) {
                return Err(Error::InvalidGamma(format!(
                    "element {g} outside {{2, …, {}}} for m = {m}",
                    m - 2
                )));
            }
        }
        let members: Vec<usize> = set.into_iter().collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i..] {
                let s = a + b;
                if s < m && !members.contains(&s) {
                    return Err(Error::InvalidGamma(format!(
                        "{a} + {b} = {s} < {m} is missing from the set"
                    )));
                }
            }
        }
        Ok(Gamma { m, members })
    }

    pub fn empty(m: usize) -> Result<Self> {
        Self::new(m, [])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// The complement `{2, …, m-1} \ Γ`.
    pub fn complement(&self) -> Vec<usize> {
        (2..self.m).filter(|d| !self.contains(*d)).collect()
    }

    fn check_cut(&self, i: usize) -> Result<()> {
        if !(2..=self.m - 1).contains(&i) {
            return Err(Error::InvalidParameter(format!(
                "cut point {i} outside 2..={} for m = {}",
                self.m - 1,
                self.m
            )));
        }
        Ok(())
    }

    /// `Γ(i) = {γ ∈ Γ : γ > i}`.
    pub fn gamma_after(&self, i: usize) -> Result<Vec<usize>> {
        self.check_cut(i)?;
        Ok(self.members.iter().copied().filter(|&g| g > i).collect())
    }

    /// `CΓ(i) = {δ ∉ Γ : i < δ ≤ m-1}`.
    pub fn c_gamma_after(&self, i: usize) -> Result<Vec<usize>> {
        self.check_cut(i)?;
        Ok((i + 1..self.m).filter(|&d| !self.contains(d)).collect())
    }

    /// `Γ(i, j) = {γ ∈ Γ : i < γ < j}`.
    pub fn gamma_between(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        self.check_cut(i)?;
        Ok(self
            .members
            .iter()
            .copied()
            .filter(|&g| g > i && g < j)
            .collect())
    }

    /// `CΓ(i, j) = {δ ∉ Γ : i < δ < j, δ ≤ m-1}`.
    pub fn c_gamma_between(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        self.check_cut(i)?;
        Ok((i + 1..self.m.min(j)).filter(|&d| !self.contains(d)).collect())
    }

    /// The order set `L(m, Γ)`: shifts `l` with `(l + Γ) ∩ CΓ ≠ ∅`, with
    /// multiples of a positive characteristic `p` removed.  Empty for `Γ = ∅`.
    pub fn order_set_l(&self, p: Option<u64>) -> Vec<usize> {
        (1..self.m)
            .filter(|&l| p.is_none_or(|p| l as u64 % p != 0))
            .filter(|&l| {
                self.members
                    .iter()
                    .any(|&g| g + l <= self.m - 1 && !self.contains(g + l))
            })
            .collect()
    }
}

/// All admissible degree sets for `m`, ordered by (cardinality, lexicographic).
///
/// Incremental subset search: candidates `2, …, m-2` are decided in
/// increasing order; an element that is a sum of two chosen elements is
/// forced in, and a branch dies when two chosen elements would sum to `m-1`.
pub fn enumerate_s(m: usize) -> Result<Vec<Gamma>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m must be >= 2, got {m}")));
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn step(e: usize, m: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if e > m.saturating_sub(2) {
            out.push(chosen.clone());
            return;
        }
        let forced = chosen
            .iter()
            .any(|&a| e >= a && e - a >= a && chosen.contains(&(e - a)));
        let conflict = 2 * e == m - 1 || chosen.contains(&(m - 1 - e));
        if !forced {
            step(e + 1, m, chosen, out);
        }
        if !conflict {
            chosen.push(e);
            step(e + 1, m, chosen, out);
            chosen.pop();
        }
    }
    step(2, m, &mut chosen, &mut out);
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out.into_iter().map(|members| Gamma::new(m, members)).collect()
}

/// Reference enumeration: filters all `2^{m-3}` subsets through the
/// closure validator.  Used to cross-check [`enumerate_s`].
pub fn enumerate_s_naive(m: usize) -> Result<Vec<Gamma>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m must be >= 2, got {m}")));
    }
    let pool: Vec<usize> = (2..=m.saturating_sub(2)).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pool.len()) {
        let members: Vec<usize> = pool
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &g)| g)
            .collect();
        if let Ok(g) = Gamma::new(m, members) {
            out.push(g);
        }
    }
    out.sort_by(|a, b| (a.len(), a.members()).cmp(&(b.len(), b.members())));
    Ok(out)
}

/// The arithmetic skeleton of a nonempty `Γ`: indecomposables, relation
/// vectors, and the distinguished decomposition choice `a(γ)`.
#[derive(Clone, Debug)]
pub struct GammaStructure {
    gamma: Gamma,
    nu: Vec<usize>,
    dec: Vec<usize>,
    dec_ge2: Vec<usize>,
    rel: BTreeMap<usize, Vec<ExpVec>>,
    a_choice: BTreeMap<usize, ExpVec>,
    basis: RelationBasis,
}

/// Bookkeeping for the irredundant first-kind relations: the surviving
/// relation vectors, the avoidable/non-avoidable split of their degrees,
/// and the final list `b_1, …, b_t` with degrees `μ_1 ≤ … ≤ μ_t`.
#[derive(Clone, Debug, Default)]
pub struct RelationBasis {
    /// `ℬ`: every relation vector of every γ with two or more of them.
    pub b_basis: Vec<ExpVec>,
    /// `ℬ' = ℬ \ ∪_i (e_i + ℬ)`.
    pub b_prime: Vec<ExpVec>,
    /// Degrees `b·ν` of `ℬ'` elements whose whole relation set avoids
    /// `∪_i (e_i + ℬ)`.
    pub avoidable: Vec<usize>,
    /// The remaining degrees of `ℬ'` elements.
    pub non_avoidable: Vec<usize>,
    /// `b_1, …, b_t`: `ℬ'` minus the chosen `a(μ)` of each avoidable `μ`.
    pub b_list: Vec<ExpVec>,
    /// `μ_i = b_i · ν`, ascending.
    pub mu_list: Vec<usize>,
    /// Number of irredundant first-kind relations.
    pub t: usize,
}

/// Computes the structure of a nonempty `Γ`.
pub fn structure(gamma: &Gamma) -> Result<GammaStructure> {
    if gamma.is_empty() {
        return Err(Error::InvalidGamma(
            "structure of the empty degree set is trivial; nothing to compute".into(),
        ));
    }
    let members = gamma.members();
    let decomposable: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&g| {
            members
                .iter()
                .any(|&a| a < g && gamma.contains(g - a))
        })
        .collect();
    let nu: Vec<usize> = members
        .iter()
        .copied()
        .filter(|g| !decomposable.contains(g))
        .collect();

    let mut rel = BTreeMap::new();
    for &g in members {
        rel.insert(g, rel_vectors(g, &nu));
    }
    for (i, &n) in nu.iter().enumerate() {
        // An indecomposable has exactly its own standard vector.
        debug_assert_eq!(rel[&n], vec![standard_vector(nu.len(), i)]);
    }
    let dec_ge2: Vec<usize> = decomposable
        .iter()
        .copied()
        .filter(|g| rel[g].len() >= 2)
        .collect();

    // ℬ, ℬ', and the avoidable/non-avoidable split; all independent of the
    // a-choice, which they constrain.
    let mut b_basis: Vec<ExpVec> = Vec::new();
    for &g in &dec_ge2 {
        b_basis.extend(rel[&g].iter().cloned());
    }
    let shifted: BTreeSet<ExpVec> = b_basis
        .iter()
        .flat_map(|b| {
            (0..nu.len()).map(move |i| {
                let mut v = b.clone();
                v[i] += 1;
                v
            })
        })
        .collect();
    let b_prime: Vec<ExpVec> = b_basis
        .iter()
        .filter(|b| !shifted.contains(*b))
        .cloned()
        .collect();
    let mu_values: BTreeSet<usize> = b_prime.iter().map(|b| nu_degree(b, &nu)).collect();
    let mut avoidable = Vec::new();
    let mut non_avoidable = Vec::new();
    for &mu in &mu_values {
        if rel[&mu].iter().any(|b| shifted.contains(b)) {
            non_avoidable.push(mu);
        } else {
            avoidable.push(mu);
        }
    }

    // a(γ): standard vector for indecomposables; otherwise lexicographically
    // smallest relation vector, except that a non-avoidable degree must take
    // its choice outside ℬ'.
    let mut a_choice = BTreeMap::new();
    for (i, &n) in nu.iter().enumerate() {
        a_choice.insert(n, standard_vector(nu.len(), i));
    }
    for &g in &decomposable {
        let candidates: Vec<&ExpVec> = if non_avoidable.contains(&g) {
            rel[&g].iter().filter(|b| !b_prime.contains(*b)).collect()
        } else {
            rel[&g].iter().collect()
        };
        let pick = candidates
            .into_iter()
            .min()
            .ok_or_else(|| Error::Internal(format!("no valid decomposition choice for {g}")))?;
        a_choice.insert(g, pick.clone());
    }

    let mut b_list: Vec<ExpVec> = b_prime
        .iter()
        .filter(|b| {
            let mu = nu_degree(b, &nu);
            !(avoidable.contains(&mu) && a_choice[&mu] == **b)
        })
        .cloned()
        .collect();
    b_list.sort_by_key(|b| (nu_degree(b, &nu), b.clone()));
    let mu_list: Vec<usize> = b_list.iter().map(|b| nu_degree(b, &nu)).collect();
    let t = b_list.len();
    if t != b_prime.len() - avoidable.len() {
        return Err(Error::Internal(
            "relation-count bookkeeping out of balance".into(),
        ));
    }

    Ok(GammaStructure {
        gamma: gamma.clone(),
        nu,
        dec: decomposable,
        dec_ge2,
        rel,
        a_choice,
        basis: RelationBasis {
            b_basis,
            b_prime,
            avoidable,
            non_avoidable,
            b_list,
            mu_list,
            t,
        },
    })
}

impl GammaStructure {
    pub fn gamma(&self) -> &Gamma {
        &self.gamma
    }

    pub fn m(&self) -> usize {
        self.gamma.m()
    }

    /// The indecomposables `ν_1 < … < ν_s`.
    pub fn nu(&self) -> &[usize] {
        &self.nu
    }

    pub fn s(&self) -> usize {
        self.nu.len()
    }

    pub fn dec(&self) -> &[usize] {
        &self.dec
    }

    /// Decomposables with at least two relation vectors.
    pub fn dec_ge2(&self) -> &[usize] {
        &self.dec_ge2
    }

    /// `Rel(γ) = {a ∈ ℕ^s : a·ν = γ}`, lexicographically sorted.
    pub fn rel(&self, g: usize) -> &[ExpVec] {
        &self.rel[&g]
    }

    /// The distinguished decomposition `a(γ)`.
    pub fn a_choice(&self, g: usize) -> &ExpVec {
        &self.a_choice[&g]
    }

    pub fn relation_basis(&self) -> &RelationBasis {
        &self.basis
    }

    /// `Σ a_i ν_i`.
    pub fn degree_of(&self, a: &[u32]) -> usize {
        nu_degree(a, &self.nu)
    }

    /// Minimal generators of the conductor exponent ideal
    /// `{c ∈ ℕ^s : c·ν ≥ m-1}`, in descending lexicographic order.
    pub fn conductor_ideal_generators(&self) -> Vec<ExpVec> {
        let m = self.m();
        let bounds: Vec<u32> = self
            .nu
            .iter()
            .map(|&n| ((m - 1).div_ceil(n)) as u32)
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nu.len()];
        self.collect_minimal(&mut cur, 0, &bounds, &mut out);
        out.sort();
        out.reverse();
        out
    }

    fn collect_minimal(
        &self,
        cur: &mut ExpVec,
        idx: usize,
        bounds: &[u32],
        out: &mut Vec<ExpVec>,
    ) {
        if idx == cur.len() {
            let m1 = self.m() - 1;
            if nu_degree(cur, &self.nu) < m1 {
                return;
            }
            let minimal = (0..cur.len()).all(|i| {
                cur[i] == 0 || nu_degree(cur, &self.nu) - self.nu[i] < m1
            });
            if minimal {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=bounds[idx] {
            cur[idx] = v;
            self.collect_minimal(cur, idx + 1, bounds, out);
        }
        cur[idx] = 0;
    }

    /// Rank of the lattice spanned by all differences of relation vectors
    /// of the same degree.  Zero exactly when no degree has two of them;
    /// at most `s - 1` always.
    pub fn relation_lattice_rank(&self) -> usize {
        let q = FieldSpec::rationals();
        let mut mat = Matrix::new(self.nu.len());
        for g in &self.dec_ge2 {
            let vs = &self.rel[g];
            for b in &vs[1..] {
                let row = b
                    .iter()
                    .zip(&vs[0])
                    .map(|(&x, &y)| q.integer(x as i64 - y as i64))
                    .collect();
                mat.push_row(row);
            }
        }
        mat.rank()
    }

    /// All of `ℕ^s` below the conductor ideal: `{a : a·ν ≤ m-2}`, sorted by
    /// (degree, lex).  The distinct degrees are exactly `{0} ∪ Γ`.
    pub fn residues_below_conductor(&self) -> Vec<ExpVec> {
        let m = self.m();
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nu.len()];
        fn walk(
            idx: usize,
            budget: usize,
            nu: &[usize],
            cur: &mut ExpVec,
            out: &mut Vec<ExpVec>,
        ) {
            if idx == nu.len() {
                out.push(cur.clone());
                return;
            }
            for v in 0..=(budget / nu[idx]) as u32 {
                cur[idx] = v;
                walk(idx + 1, budget - v as usize * nu[idx], nu, cur, out);
            }
            cur[idx] = 0;
        }
        walk(0, m - 2, &self.nu, &mut cur, &mut out);
        out.sort_by_key(|a| (nu_degree(a, &self.nu), a.clone()));
        out
    }
}

fn nu_degree(a: &[u32], nu: &[usize]) -> usize {
    a.iter()
        .zip(nu)
        .map(|(&c, &n)| c as usize * n)
        .sum()
}

fn standard_vector(s: usize, i: usize) -> ExpVec {
    let mut v = vec![0u32; s];
    v[i] = 1;
    v
}

/// All `a ∈ ℕ^s` with `a·ν = target`, lexicographically sorted.
fn rel_vectors(target: usize, nu: &[usize]) -> Vec<ExpVec> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nu.len()];
    fn walk(idx: usize, remaining: usize, nu: &[usize], cur: &mut ExpVec, out: &mut Vec<ExpVec>) {
        if idx == nu.len() {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..=(remaining / nu[idx]) as u32 {
            cur[idx] = v;
            walk(idx + 1, remaining - v as usize * nu[idx], nu, cur, out);
        }
        cur[idx] = 0;
    }
    walk(0, target, nu, &mut cur, &mut out);
    out.sort();
    out
}

/// The order tables for `m ≥ 4`: `L(m) = ∪_Γ L(m, Γ)`, its complement
/// `B(m)` in `{1, …, m-1}`, and the realized set `O(m)` over the field
/// (equal to `L(m)` in characteristic 0, and to the p-coprime parts of
/// `L(m)` in characteristic p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderTables {
    pub m: usize,
    pub l: Vec<usize>,
    pub b: Vec<usize>,
    pub o: Vec<u64>,
}

pub fn order_tables(m: usize, p: Option<u64>) -> Result<OrderTables> {
    if m < 4 {
        return Err(Error::InvalidParameter(format!(
            "order tables need m >= 4, got {m}"
        )));
    }
    let mut l: BTreeSet<usize> = BTreeSet::new();
    for gamma in enumerate_s(m)? {
        l.extend(gamma.order_set_l(None));
    }
    let b: Vec<usize> = (1..m).filter(|x| !l.contains(x)).collect();
    let o: BTreeSet<u64> = match p {
        None => l.iter().map(|&x| x as u64).collect(),
        Some(p) => l.iter().map(|&x| p_coprime_divisor(x as u64, p)).collect(),
    };
    Ok(OrderTables {
        m,
        l: l.into_iter().collect(),
        b,
        o: o.into_iter().collect(),
    })
}

/// The largest finite automorphism order among all algebras with conductor
/// exponent `m`: the maximum of `i` (characteristic 0) or of the p-coprime
/// part `i_p` (characteristic p) over all shifts `1 ≤ i ≤ m-3` admitting
/// some `j ≥ 2` with `i + j ≤ m-1`, `j ∤ m-1` and `j ∤ i`.
///
/// A shift `i` is realizable exactly when such a `j` exists: the value
/// semigroup generated by `j` alone is admissible precisely when
/// `j ∤ m-1`, and `j ∤ i` keeps `j + i` outside it; conversely any
/// witness degree in any admissible value set satisfies both conditions.
/// In characteristic 0 the maximum evaluates to `m-3` for even `m` and to
/// `m-4` for odd `m` with `3 ∤ m-1`; for odd `m` with `3 | m-1` (and in
/// scattered characteristic-p cases) no realizable shift attains those
/// bounds, so the shift criterion is evaluated directly.
pub fn max_finite_order(m: usize, p: Option<u64>) -> Result<u64> {
    if m < 4 {
        return Err(Error::InvalidParameter(format!(
            "maximal order needs m >= 4, got {m}"
        )));
    }
    let best = (1..=m - 3)
        .filter(|&i| (2..=m - 1 - i).any(|j| (m - 1) % j != 0 && i % j != 0))
        .map(|i| match p {
            None => i as u64,
            Some(p) => p_coprime_divisor(i as u64, p),
        })
        .max();
    best.ok_or_else(|| Error::Internal(format!("no admissible shift for m = {m}")))
}
