use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Pattern, Poset};
use crate::csf::{csf, Algorithm};
use crate::graphs::LabelledGraph;
use crate::multisym::{Basis, MultiSym};
use crate::partitions::KTuple;
use crate::{check_limit, Error, Limits, Rational, Result};

/// Two disjoint antichains `v1`, `v2` of a poset, with `v1` never above `v2`.
/// Both lists hold positions in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPair {
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    /// Found by exhaustive search rather than greedy growth.
    pub exhaustive: bool,
}

/// One node of the reduction tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub poset: Poset,
    /// `(a, b, c, d)` with `a < c` and `b < d`.
    pub witness: [usize; 4],
    pub pair: HomogeneousPair,
    /// `|v1| > |v2|`, so the smaller side `v2` played the role of the joined side.
    pub swapped: bool,
    /// `c_0, …, c_m` with `m = min(|v1|, |v2|)`.
    pub coefficients: Vec<Rational>,
    /// `Q_k` for each `k`, including those with zero coefficient.
    pub children: Vec<Poset>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Positive coefficients summing to one, each with a (3+1)- and (2+2)-free poset.
    pub leaves: Vec<(Rational, Poset)>,
    /// Steps in depth-first order.
    pub steps: Vec<ReductionStep>,
}

fn is_antichain(p: &Poset, s: &[usize]) -> bool {
    s.iter().enumerate().all(|(i, &x)| s[i + 1..].iter().all(|&y| !p.comparable(x, y)))
}

fn induces_square(p: &Poset, q: [usize; 4]) -> bool {
    p.roles(q, Pattern::TwoPlusTwo).is_some()
}

/// Whether every split of `side` into two nonempty parts is crossed by an
/// induced (2+2) with one element in each part and two elements in `other`.
///
/// Equivalently, the graph on `side` joining `x, x'` whenever some `y, y'` of
/// `other` complete an induced (2+2) is connected.
pub fn is_square_connected(p: &Poset, side: &[usize], other: &[usize]) -> bool {
    if side.len() <= 1 {
        return true;
    }
    let linked = |x: usize, x2: usize| {
        other.iter().enumerate().any(|(j, &y)| other[j + 1..].iter().any(|&y2| induces_square(p, [x, x2, y, y2])))
    };
    let mut reached = vec![false; side.len()];
    let mut stack = vec![0];
    reached[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..side.len() {
            if !reached[j] && linked(side[i], side[j]) {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

/// Conditions (a) to (e): disjoint antichains, nothing of `v2` below `v1`, both
/// sides square-connected to each other.
fn admissible(p: &Poset, v1: &[usize], v2: &[usize]) -> bool {
    is_antichain(p, v1)
        && is_antichain(p, v2)
        && v1.iter().all(|&x| v2.iter().all(|&y| x != y && !p.less(y, x)))
        && is_square_connected(p, v1, v2)
        && is_square_connected(p, v2, v1)
}

/// Both sides are cliques in the incomparability graph and every other vertex is
/// complete or anticomplete to each side.
fn homogeneous(p: &Poset, v1: &[usize], v2: &[usize]) -> bool {
    let g = p.incomparability_graph();
    let rest: Vec<usize> = (0..p.len()).filter(|x| !v1.contains(x) && !v2.contains(x)).collect();
    is_antichain(p, v1) && is_antichain(p, v2) && g.homogeneity_violation(&[v1.to_vec(), v2.to_vec()], &rest).is_none()
}

fn check_witness(p: &Poset, w: [usize; 4]) -> Result<()> {
    p.require_three_plus_one_free()?;
    if w.iter().any(|&x| x >= p.len()) {
        return Err(Error::Invalid("witness position out of range".into()));
    }
    let [a, b, c, d] = w;
    if !(induces_square(p, w) && p.less(a, c) && p.less(b, d)) {
        return Err(Error::Hypothesis(format!(
            "{:?} do not induce a (2+2) with {:?} < {:?} and {:?} < {:?}",
            w.map(|i| p.id(i)),
            p.id(a),
            p.id(c),
            p.id(b),
            p.id(d)
        )));
    }
    Ok(())
}

fn with(s: &[usize], x: usize) -> Vec<usize> {
    let mut out = s.to_vec();
    let at = out.partition_point(|&y| y < x);
    out.insert(at, x);
    out
}

fn guard_sides(v1: &[usize], v2: &[usize], limits: &Limits) -> Result<()> {
    let side = v1.len().max(v2.len()) as u64;
    check_limit("homogeneous pair side", side, limits.pair_side as u64)
}

/// Grows `{a, b}`, `{c, d}` to a maximal pair of antichains satisfying the
/// homogeneous-pair conditions, then checks that the result is homogeneous.
///
/// Each pass tries every outside element in order, first into `v1` and then into
/// `v2`. When a pass adds nothing, a simultaneous addition of one element to
/// each side is tried. If the fixed point fails the homogeneity check, the
/// exhaustive search takes over.
pub fn grow_homogeneous_pair(p: &Poset, witness: [usize; 4], limits: &Limits) -> Result<HomogeneousPair> {
    check_witness(p, witness)?;
    let [a, b, c, d] = witness;
    let (mut v1, mut v2) = (with(&[a], b), with(&[c], d));
    loop {
        let outside = |v1: &[usize], v2: &[usize]| -> Vec<usize> {
            (0..p.len()).filter(|x| !v1.contains(x) && !v2.contains(x)).collect()
        };
        let mut changed = false;
        for x in outside(&v1, &v2) {
            if admissible(p, &with(&v1, x), &v2) {
                v1 = with(&v1, x);
                changed = true;
            } else if admissible(p, &v1, &with(&v2, x)) {
                v2 = with(&v2, x);
                changed = true;
            }
            guard_sides(&v1, &v2, limits)?;
        }
        if !changed {
            let rest = outside(&v1, &v2);
            let found = rest.iter().find_map(|&x| {
                rest.iter().find(|&&y| y != x && admissible(p, &with(&v1, x), &with(&v2, y))).map(|&y| (x, y))
            });
            match found {
                Some((x, y)) => {
                    v1 = with(&v1, x);
                    v2 = with(&v2, y);
                    guard_sides(&v1, &v2, limits)?;
                }
                None => break,
            }
        }
    }
    if homogeneous(p, &v1, &v2) {
        Ok(HomogeneousPair { v1, v2, exhaustive: false })
    } else {
        grow_homogeneous_pair_exhaustive(p, witness, limits)
    }
}

/// A largest pair satisfying the homogeneous-pair conditions among all
/// placements of the outside elements. Inclusion-maximal by construction.
pub fn grow_homogeneous_pair_exhaustive(p: &Poset, witness: [usize; 4], limits: &Limits) -> Result<HomogeneousPair> {
    check_witness(p, witness)?;
    let rest: Vec<usize> = (0..p.len()).filter(|x| !witness.contains(x)).collect();
    let total = 3u64.checked_pow(rest.len() as u32).unwrap_or(u64::MAX);
    check_limit("pair placements", total, limits.gp_maps)?;
    let [a, b, c, d] = witness;
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for code in 0..total {
        let (mut v1, mut v2) = (with(&[a], b), with(&[c], d));
        let mut z = code;
        for &x in &rest {
            match z % 3 {
                1 => v1 = with(&v1, x),
                2 => v2 = with(&v2, x),
                _ => {}
            }
            z /= 3;
        }
        let size = v1.len() + v2.len();
        if best.as_ref().is_some_and(|(b1, b2)| b1.len() + b2.len() >= size) || !admissible(p, &v1, &v2) {
            continue;
        }
        best = Some((v1, v2));
    }
    let (v1, v2) = best.expect("the witness itself is admissible");
    guard_sides(&v1, &v2, limits)?;
    if !homogeneous(p, &v1, &v2) {
        return Err(Error::Inconsistent(format!(
            "maximal pair {:?} / {:?} is not homogeneous",
            v1.iter().map(|&i| p.id(i)).collect::<Vec<_>>(),
            v2.iter().map(|&i| p.id(i)).collect::<Vec<_>>()
        )));
    }
    Ok(HomogeneousPair { v1, v2, exhaustive: true })
}

/// Cliques on `v1` and `v2` with the first `k` vertices of `v1` joined to all of `v2`.
pub fn build_gk(v1: &[&str], v2: &[&str], k: usize) -> Result<LabelledGraph> {
    let (m, n) = (v1.len(), v2.len());
    if k > m || m > n {
        return Err(Error::Invalid(format!("need k <= m <= n, got k = {k}, m = {m}, n = {n}")));
    }
    let mut edges = Vec::new();
    for i in 0..m + n {
        for j in i + 1..m + n {
            let cross = i < m && j >= m;
            if !cross || i < k {
                edges.push((i, j));
            }
        }
    }
    let one = KTuple::unit(1, 0);
    let ids = v1.iter().chain(v2).map(|&s| (String::from(s), one.clone())).collect();
    LabelledGraph::from_indices(1, ids, edges)
}

/// `c_k` is the probability that a uniformly random injection `L` from `v1` into
/// `v2` has exactly `k` edges of the form `x L(x)`.
///
/// Requires `|v1| <= |v2|` and both sides to be cliques.
pub fn gp_coefficients(g: &LabelledGraph, v1: &[usize], v2: &[usize], limits: &Limits) -> Result<Vec<Rational>> {
    let (m, n) = (v1.len(), v2.len());
    if m > n {
        return Err(Error::Invalid(format!("first side has {m} vertices, second has {n}")));
    }
    if v1.iter().chain(v2).any(|&x| x >= g.vertex_count()) {
        return Err(Error::Invalid("vertex position out of range".into()));
    }
    for side in [v1, v2] {
        let clique = side.iter().enumerate().all(|(i, &x)| side[i + 1..].iter().all(|&y| g.adjacent(x, y)));
        if !clique {
            return Err(Error::Hypothesis("sides must be cliques".into()));
        }
    }
    let maps = (n - m + 1..=n).try_fold(1u64, |acc, f| acc.checked_mul(f as u64)).unwrap_or(u64::MAX);
    check_limit("coefficient maps", maps, limits.gp_maps)?;

    fn tally(g: &LabelledGraph, v1: &[usize], v2: &[usize], used: &mut [bool], hits: usize, counts: &mut [u64]) {
        let Some((&x, tail)) = v1.split_first() else {
            counts[hits] += 1;
            return;
        };
        for (j, &y) in v2.iter().enumerate() {
            if !used[j] {
                used[j] = true;
                tally(g, tail, v2, used, hits + usize::from(g.adjacent(x, y)), counts);
                used[j] = false;
            }
        }
    }
    let mut counts = vec![0u64; m + 1];
    tally(g, v1, v2, &mut vec![false; n], 0, &mut counts);
    Ok(counts.into_iter().map(|c| Rational::new(BigInt::from(c), BigInt::from(maps))).collect())
}

/// `g` with its restriction to `v1 ⊔ v2` replaced by `G_k` on the same vertices.
/// Vertex order is kept; `v1` must be the smaller side.
pub fn build_hk(g: &LabelledGraph, v1: &[usize], v2: &[usize], k: usize) -> Result<LabelledGraph> {
    let ids = |s: &[usize]| -> Result<Vec<&str>> {
        s.iter()
            .map(|&x| (x < g.vertex_count()).then(|| g.id(x)).ok_or_else(|| Error::Invalid("position out of range".into())))
            .collect()
    };
    let gk = build_gk(&ids(v1)?, &ids(v2)?, k)?;
    let inside: BTreeSet<usize> = v1.iter().chain(v2).copied().collect();
    if inside.len() != v1.len() + v2.len() {
        return Err(Error::Invalid("the two sides overlap".into()));
    }
    let place: Vec<usize> = v1.iter().chain(v2).copied().collect();
    let mut edges: Vec<(usize, usize)> =
        g.edges().iter().copied().filter(|(a, b)| !(inside.contains(a) && inside.contains(b))).collect();
    edges.extend(gk.edges().iter().map(|&(a, b)| (place[a], place[b])));
    g.with_edges(edges)
}

/// The poset `Q_k` whose incomparability graph is `H_k`. Relations between the
/// two sides are dropped where `H_k` has an edge and set to `v1 < v2` elsewhere.
///
/// `k` counts vertices of the smaller side joined to the whole larger side.
pub fn build_q(p: &Poset, v1: &[usize], v2: &[usize], k: usize) -> Result<Poset> {
    let g = p.incomparability_graph();
    let hk = if v1.len() <= v2.len() { build_hk(&g, v1, v2, k)? } else { build_hk(&g, v2, v1, k)? };
    let mut less = p.less.clone();
    for &x in v1 {
        for &y in v2 {
            less[x][y] = !hk.adjacent(x, y);
            less[y][x] = false;
        }
    }
    let q = Poset::from_closed(p.elements.clone(), less)?;
    if q.incomparability_graph() != hk {
        return Err(Error::Inconsistent("the incomparability graph of Q differs from H_k".into()));
    }
    Ok(q)
}

struct Reducer<'a> {
    limits: &'a Limits,
    steps: Vec<ReductionStep>,
    leaves: Vec<(Rational, Poset)>,
}

impl Reducer<'_> {
    fn x(&self, p: &Poset) -> Result<MultiSym> {
        csf(&p.incomparability_graph(), Algorithm::Auto, self.limits)
    }

    fn step(&self, p: &Poset, witness: [usize; 4], pair: HomogeneousPair) -> Result<Option<ReductionStep>> {
        let swapped = pair.v1.len() > pair.v2.len();
        let (small, large) = if swapped { (&pair.v2, &pair.v1) } else { (&pair.v1, &pair.v2) };
        let g = p.incomparability_graph();
        let coefficients = gp_coefficients(&g, small, large, self.limits)?;
        let before = p.count_2plus2();
        let mut children = Vec::with_capacity(coefficients.len());
        let mut sum = MultiSym::zero(1, Basis::P);
        for (k, c) in coefficients.iter().enumerate() {
            let q = build_q(p, &pair.v1, &pair.v2, k)?;
            q.require_three_plus_one_free()
                .map_err(|e| Error::Inconsistent(format!("Q_{k} is not (3+1)-free: {e}")))?;
            if q.count_2plus2() >= before {
                return Ok(None);
            }
            if !c.is_zero() {
                sum = sum.add(&self.x(&q)?.scale(c))?;
            }
            children.push(q);
        }
        if sum != csf(&g, Algorithm::Auto, self.limits)? {
            return Err(Error::Inconsistent("the convex combination does not reproduce X_G".into()));
        }
        Ok(Some(ReductionStep { poset: p.clone(), witness, pair, swapped, coefficients, children }))
    }

    fn expand(&mut self, p: Poset, coeff: Rational) -> Result<()> {
        let Some(witness) = p.find_induced_pattern(Pattern::TwoPlusTwo) else {
            self.leaves.push((coeff, p));
            return Ok(());
        };
        let pair = grow_homogeneous_pair(&p, witness, self.limits)?;
        let step = match self.step(&p, witness, pair.clone())? {
            Some(step) => step,
            None if !pair.exhaustive => {
                let pair = grow_homogeneous_pair_exhaustive(&p, witness, self.limits)?;
                self.step(&p, witness, pair)?.ok_or_else(|| {
                    Error::Inconsistent("a child has at least as many induced (2+2) as its parent".into())
                })?
            }
            None => return Err(Error::Inconsistent("a child has at least as many induced (2+2) as its parent".into())),
        };
        let next: Vec<(Rational, Poset)> = step
            .coefficients
            .iter()
            .zip(&step.children)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, q)| (&coeff * c, q.clone()))
            .collect();
        self.steps.push(step);
        for (c, q) in next {
            self.expand(q, c)?;
        }
        Ok(())
    }
}

/// Writes the chromatic function of the incomparability graph of a (3+1)-free
/// poset as a convex combination of those of (3+1)- and (2+2)-free posets.
///
/// Every step and the final identity are checked by direct computation.
pub fn gp_reduce(p: &Poset, limits: &Limits) -> Result<Reduction> {
    p.require_three_plus_one_free()?;
    let mut r = Reducer { limits, steps: Vec::new(), leaves: Vec::new() };
    r.expand(p.clone(), Rational::one())?;

    let total = r.leaves.iter().fold(Rational::zero(), |acc, (c, _)| acc + c);
    if total != Rational::one() {
        return Err(Error::Inconsistent(format!("leaf coefficients sum to {total}")));
    }
    let mut sum = MultiSym::zero(1, Basis::P);
    for (c, q) in &r.leaves {
        if q.find_induced_pattern(Pattern::ThreePlusOne).is_some() || q.count_2plus2() > 0 {
            return Err(Error::Inconsistent("a leaf still contains a forbidden pattern".into()));
        }
        sum = sum.add(&r.x(q)?.scale(c))?;
    }
    if sum != r.x(p)? {
        return Err(Error::Inconsistent("the leaves do not reproduce the chromatic function".into()));
    }
    Ok(Reduction { leaves: r.leaves, steps: r.steps })
}
