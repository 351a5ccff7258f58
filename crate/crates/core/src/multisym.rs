//! Sparse exact elements of the ring of k-multisymmetric functions.
//!
//! A [`MultiSym`] is a map from [`KTuplePartition`] to nonzero rationals,
//! tagged with its basis. Conversions are always explicit. The power-sum
//! basis is the hub: products and projections are trivial there.
//!
//! Change-of-basis routes:
//!
//! ```text
//!   m ── m̃ ── p ── e
//!        │
//!        r
//! ```
//!
//! `p → m̃` sums over set partitions of the parts, `m̃ → p` and `m̃ → r` are
//! triangular back-substitutions under the canonical partition order, and
//! `p → e` is a dense exact solve on each graded component.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::partitions::{
    enumerate_partitions, for_each_set_partition, merge_rgs, same_k, KTuple, KTuplePartition,
};
use crate::{check_limit, linalg, Error, Limits, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    /// Monomial.
    M,
    /// Augmented monomial: `m̃_λ = (∏_α n_α(λ)!) m_λ`.
    MTilde,
    /// Power sum.
    P,
    /// Elementary.
    E,
    /// Chromatic functions of complete multipartite graphs.
    R,
}

impl Basis {
    pub const ALL: [Basis; 5] = [Basis::M, Basis::MTilde, Basis::P, Basis::E, Basis::R];

    pub fn name(self) -> &'static str {
        match self {
            Basis::M => "m",
            Basis::MTilde => "mtilde",
            Basis::P => "p",
            Basis::E => "e",
            Basis::R => "r",
        }
    }

    pub fn from_name(name: &str) -> Option<Basis> {
        Basis::ALL.into_iter().find(|b| b.name() == name)
    }

    // Next basis on the (tree-shaped) conversion route towards `to`.
    fn next_hop(self, to: Basis) -> Basis {
        match self {
            Basis::M | Basis::R => Basis::MTilde,
            Basis::E => Basis::P,
            Basis::MTilde => match to {
                Basis::M | Basis::R => to,
                _ => Basis::P,
            },
            Basis::P => match to {
                Basis::E => Basis::E,
                _ => Basis::MTilde,
            },
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiSym {
    k: usize,
    basis: Basis,
    terms: BTreeMap<KTuplePartition, Rational>,
}

impl MultiSym {
    pub fn zero(k: usize, basis: Basis) -> Self {
        assert!(k > 0, "k must be positive");
        MultiSym { k, basis, terms: BTreeMap::new() }
    }

    pub fn basis_element(basis: Basis, index: KTuplePartition) -> Self {
        let mut f = MultiSym::zero(index.k(), basis);
        f.terms.insert(index, Rational::one());
        f
    }

    /// Collects terms, summing repeated indices and dropping zeros.
    pub fn from_terms(
        k: usize,
        basis: Basis,
        terms: impl IntoIterator<Item = (KTuplePartition, Rational)>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("k must be positive".into()));
        }
        let mut f = MultiSym::zero(k, basis);
        for (index, c) in terms {
            same_k(k, index.k())?;
            f.add_term(index, c);
        }
        Ok(f)
    }

    pub(crate) fn from_counts(k: usize, basis: Basis, counts: BTreeMap<KTuplePartition, i64>) -> Self {
        let terms = counts
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(index, c)| (index, Rational::from_integer(BigInt::from(c))))
            .collect();
        MultiSym { k, basis, terms }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeMap<KTuplePartition, Rational> {
        &self.terms
    }

    pub fn coeff(&self, index: &KTuplePartition) -> Rational {
        self.terms.get(index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, index: KTuplePartition, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &MultiSym) -> Result<()> {
        same_k(self.k, other.k)?;
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSym) -> Result<MultiSym> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (index, c) in &other.terms {
            out.add_term(index.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSym) -> Result<MultiSym> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> MultiSym {
        if c.is_zero() {
            return MultiSym::zero(self.k, self.basis);
        }
        MultiSym {
            k: self.k,
            basis: self.basis,
            terms: self.terms.iter().map(|(i, v)| (i.clone(), v * c)).collect(),
        }
    }

    /// Product in the power-sum basis: `p_λ · p_μ = p_{λ ⊎ μ}`.
    pub fn mul_p(&self, other: &MultiSym) -> Result<MultiSym> {
        self.check_compatible(other)?;
        if self.basis != Basis::P {
            return Err(Error::BasisMismatch);
        }
        let mut out = MultiSym::zero(self.k, Basis::P);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.union(b)?, ca * cb);
            }
        }
        Ok(out)
    }

    /// Express the same function in another basis.
    pub fn to_basis(&self, target: Basis, limits: &Limits) -> Result<MultiSym> {
        let mut f = self.clone();
        while f.basis != target {
            let hop = f.basis.next_hop(target);
            f = match (f.basis, hop) {
                (Basis::M, Basis::MTilde) | (Basis::MTilde, Basis::M) => mtilde_scaling(&f)?,
                (Basis::MTilde, Basis::P) => mtilde_to_p(&f, limits)?,
                (Basis::P, Basis::MTilde) => p_to_mtilde(&f, limits)?,
                (Basis::MTilde, Basis::R) => mtilde_to_r(&f, limits)?,
                (Basis::R, Basis::MTilde) => r_to_mtilde(&f, limits)?,
                (Basis::E, Basis::P) => e_to_p(&f, limits)?,
                (Basis::P, Basis::E) => p_to_e(&f, limits)?,
                (from, to) => unreachable!("no direct conversion {from} -> {to}"),
            };
        }
        Ok(f)
    }

    /// Identify the last two variable sets; the result is in the power-sum basis with `k - 1`.
    pub fn project(&self, limits: &Limits) -> Result<MultiSym> {
        if self.k < 2 {
            return Err(Error::Invalid("projection needs k >= 2".into()));
        }
        let p = self.to_basis(Basis::P, limits)?;
        let mut out = MultiSym::zero(self.k - 1, Basis::P);
        for (index, c) in &p.terms {
            out.add_term(index.fold_last()?, c.clone());
        }
        Ok(out)
    }

    /// Checks every elementary-basis coefficient for nonnegativity.
    pub fn is_e_positive(&self, limits: &Limits) -> Result<EPositivity> {
        let expansion = self.to_basis(Basis::E, limits)?;
        let witness = expansion
            .terms
            .iter()
            .find(|(_, c)| c.is_negative())
            .map(|(i, c)| (i.clone(), c.clone()));
        Ok(EPositivity { positive: witness.is_none(), witness, expansion })
    }
}

impl fmt::Debug for MultiSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 [{}; k={}]", self.basis, self.k);
        }
        for (i, (index, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·{}{index:?}", self.basis)?;
        }
        write!(f, " [k={}]", self.k)
    }
}

/// Outcome of [`MultiSym::is_e_positive`].
#[derive(Debug, Clone)]
pub struct EPositivity {
    pub positive: bool,
    /// First negative coefficient in canonical order.
    pub witness: Option<(KTuplePartition, Rational)>,
    pub expansion: MultiSym,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `∏_α n_α(λ)!`
fn multiplicity_factor(index: &KTuplePartition) -> BigInt {
    index
        .multiplicities()
        .into_iter()
        .fold(BigInt::one(), |acc, (_, n)| acc * factorial(n))
}

/// Switch between the `m` and `m̃` bases.
pub fn mtilde_scaling(f: &MultiSym) -> Result<MultiSym> {
    let (basis, multiply) = match f.basis {
        // m̃_λ = N m_λ, so a coefficient on m̃_λ becomes N times that on m_λ
        Basis::MTilde => (Basis::M, true),
        Basis::M => (Basis::MTilde, false),
        _ => return Err(Error::BasisMismatch),
    };
    let terms = f
        .terms
        .iter()
        .map(|(index, c)| {
            let n = Rational::from_integer(multiplicity_factor(index));
            (index.clone(), if multiply { c * n } else { c / n })
        })
        .collect();
    Ok(MultiSym { k: f.k, basis, terms })
}

/// `p_λ = Σ_π m̃_{merge(λ, π)}` over all set partitions π of the parts of λ.
fn p_expansion(index: &KTuplePartition, limits: &Limits) -> Result<BTreeMap<KTuplePartition, i64>> {
    check_limit("partition norm", index.norm() as u64, limits.partition_norm as u64)?;
    let mut counts = BTreeMap::new();
    let parts = index.parts();
    for_each_set_partition(parts.len(), |rgs, blocks| {
        *counts.entry(merge_rgs(parts, rgs, blocks, index.k())).or_insert(0) += 1;
    });
    Ok(counts)
}

pub fn p_to_mtilde(f: &MultiSym, limits: &Limits) -> Result<MultiSym> {
    if f.basis != Basis::P {
        return Err(Error::BasisMismatch);
    }
    let mut out = MultiSym::zero(f.k, Basis::MTilde);
    for (index, c) in &f.terms {
        for (mu, n) in p_expansion(index, limits)? {
            out.add_term(mu, c * Rational::from_integer(BigInt::from(n)));
        }
    }
    Ok(out)
}

/// Inverse of [`p_to_mtilde`]. Merging strictly shortens a partition, so the
/// longest remaining index always has its final coefficient.
pub fn mtilde_to_p(f: &MultiSym, limits: &Limits) -> Result<MultiSym> {
    if f.basis != Basis::MTilde {
        return Err(Error::BasisMismatch);
    }
    let mut rest = f.clone();
    let mut out = MultiSym::zero(f.k, Basis::P);
    while let Some((index, c)) = rest.terms.pop_last() {
        for (mu, n) in p_expansion(&index, limits)? {
            if mu != index {
                rest.add_term(mu, -(&c * Rational::from_integer(BigInt::from(n))));
            }
        }
        out.terms.insert(index, c);
    }
    Ok(out)
}

/// `e_α = m̃` of the partition with `α_j` copies of the unit tuple `ε_j`.
pub fn e_generator(alpha: &KTuple) -> MultiSym {
    let k = alpha.k();
    let mut parts = Vec::new();
    for (j, &a) in alpha.entries().iter().enumerate() {
        for _ in 0..a {
            parts.push(KTuple::unit(k, j));
        }
    }
    let index = KTuplePartition::new(k, parts).expect("unit tuples share k");
    MultiSym::basis_element(Basis::MTilde, index)
}

/// Expand `e_λ = ∏ e_{λ_i}` in the power-sum basis.
fn e_element_in_p(
    index: &KTuplePartition,
    cache: &mut BTreeMap<KTuple, MultiSym>,
    limits: &Limits,
) -> Result<MultiSym> {
    let mut acc = MultiSym::basis_element(Basis::P, KTuplePartition::empty(index.k()));
    for part in index.parts() {
        if !cache.contains_key(part) {
            let p = mtilde_to_p(&e_generator(part), limits)?;
            cache.insert(part.clone(), p);
        }
        acc = acc.mul_p(&cache[part])?;
    }
    Ok(acc)
}

pub fn e_to_p(f: &MultiSym, limits: &Limits) -> Result<MultiSym> {
    if f.basis != Basis::E {
        return Err(Error::BasisMismatch);
    }
    let mut cache = BTreeMap::new();
    let mut out = MultiSym::zero(f.k, Basis::P);
    for (index, c) in &f.terms {
        out = out.add(&e_element_in_p(index, &mut cache, limits)?.scale(c))?;
    }
    Ok(out)
}

/// Dense solve, one graded component at a time.
pub fn p_to_e(f: &MultiSym, limits: &Limits) -> Result<MultiSym> {
    if f.basis != Basis::P {
        return Err(Error::BasisMismatch);
    }
    let mut components: BTreeMap<Vec<u32>, Vec<(&KTuplePartition, &Rational)>> = BTreeMap::new();
    for (index, c) in &f.terms {
        components.entry(index.tuple_sum()).or_default().push((index, c));
    }
    let mut cache = BTreeMap::new();
    let mut out = MultiSym::zero(f.k, Basis::E);
    for (target, terms) in components {
        if target.iter().all(|&t| t == 0) {
            // constant term: e_∅ = p_∅
            for (index, c) in terms {
                out.add_term(index.clone(), c.clone());
            }
            continue;
        }
        let basis = enumerate_partitions(&target, limits.partition_norm)?;
        let position: BTreeMap<&KTuplePartition, usize> =
            basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let n = basis.len();
        let mut matrix = alloc::vec![alloc::vec![Rational::zero(); n]; n];
        for (col, mu) in basis.iter().enumerate() {
            for (lam, c) in e_element_in_p(mu, &mut cache, limits)?.terms {
                matrix[position[&lam]][col] = c;
            }
        }
        let mut rhs = alloc::vec![Rational::zero(); n];
        for (index, c) in terms {
            rhs[position[index]] = c.clone();
        }
        let x = linalg::solve(matrix, rhs)
            .ok_or_else(|| Error::Inconsistent("elementary change-of-basis matrix is singular".into()))?;
        for (mu, c) in basis.into_iter().zip(x) {
            out.add_term(mu, c);
        }
    }
    Ok(out)
}

/// Counts of refinement types of a single group `I^α` (α_j vertices of colour j).
fn group_refinements(alpha: &KTuple) -> BTreeMap<Vec<KTuple>, u64> {
    let k = alpha.k();
    let mut weights = Vec::new();
    for (j, &a) in alpha.entries().iter().enumerate() {
        for _ in 0..a {
            weights.push(KTuple::unit(k, j));
        }
    }
    let mut counts = BTreeMap::new();
    for_each_set_partition(weights.len(), |rgs, blocks| {
        let merged = merge_rgs(&weights, rgs, blocks, k);
        *counts.entry(merged.parts().to_vec()).or_insert(0) += 1;
    });
    counts
}

/// `r_λ` in the `m̃` basis: a sum over refinements of the groups of `I^λ`.
pub fn r_generator(index: &KTuplePartition, limits: &Limits) -> Result<MultiSym> {
    Ok(MultiSym::from_counts(index.k(), Basis::MTilde, r_counts(index, limits)?))
}

fn r_counts(index: &KTuplePartition, limits: &Limits) -> Result<BTreeMap<KTuplePartition, i64>> {
    check_limit("partition norm", index.norm() as u64, limits.partition_norm as u64)?;
    let mut acc: BTreeMap<Vec<KTuple>, u64> = BTreeMap::new();
    acc.insert(Vec::new(), 1);
    for (part, mult) in index.multiplicities() {
        let group = group_refinements(part);
        for _ in 0..mult {
            let mut next = BTreeMap::new();
            for (prefix, a) in &acc {
                for (refinement, b) in &group {
                    let mut joined = prefix.clone();
                    joined.extend(refinement.iter().cloned());
                    *next.entry(joined).or_insert(0) += a * b;
                }
            }
            acc = next;
        }
    }
    let mut out = BTreeMap::new();
    for (parts, n) in acc {
        let key = KTuplePartition::new(index.k(), parts)?;
        *out.entry(key).or_insert(0i64) += n as i64;
    }
    Ok(out)
}

pub fn r_to_mtilde(f: &MultiSym, limits: &Limits) -> Result<MultiSym> {
    if f.basis != Basis::R {
        return Err(Error::BasisMismatch);
    }
    let mut out = MultiSym::zero(f.k, Basis::MTilde);
    for (index, c) in &f.terms {
        for (mu, n) in r_counts(index, limits)? {
            out.add_term(mu, c * Rational::from_integer(BigInt::from(n)));
        }
    }
    Ok(out)
}

/// Inverse of [`r_to_mtilde`]: `r_λ = m̃_λ + (strictly longer terms)`, so the
/// shortest remaining index always has its final coefficient.
pub fn mtilde_to_r(f: &MultiSym, limits: &Limits) -> Result<MultiSym> {
    if f.basis != Basis::MTilde {
        return Err(Error::BasisMismatch);
    }
    let mut rest = f.clone();
    let mut out = MultiSym::zero(f.k, Basis::R);
    while let Some((index, c)) = rest.terms.pop_first() {
        for (mu, n) in r_counts(&index, limits)? {
            if mu != index {
                rest.add_term(mu, -(&c * Rational::from_integer(BigInt::from(n))));
            }
        }
        out.terms.insert(index, c);
    }
    Ok(out)
}
