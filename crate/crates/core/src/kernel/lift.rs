//! Lifting combinations to one more label class, and the Orellana-Scott
//! equality derived from it.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::vec::Vec;

use num_traits::One;

use super::{evaluate, project_to_csf, rewrite_to_r, GraphCombination, KernelCertificate};
use crate::csf::Algorithm;
use crate::graphs::{LabelPermutation, LabelledGraph};
use crate::partitions::KTuple;
use crate::{Error, Limits, Rational, Result};

/// `Lift(L; H*) = Σ c_i (H* ⊎ E(H_i))`.
///
/// `H*` must be an augmentation: a (k+1)-vertex-labelled graph containing every
/// vertex of `L` with its label unchanged, all other vertices carrying label `k+1`.
pub fn lift(l: &GraphCombination, h_star: &LabelledGraph) -> Result<GraphCombination> {
    let pos = augmentation_positions(l, h_star)?;
    let mut out = GraphCombination::zero(h_star)?;
    for (c, h) in l.terms() {
        let mut edges = h_star.edges().to_vec();
        edges.extend(h.edges().iter().map(|&(a, b)| (pos[a], pos[b])));
        out.push(c.clone(), &h_star.with_edges(edges)?)?;
    }
    Ok(out)
}

fn augmentation_positions(l: &GraphCombination, h_star: &LabelledGraph) -> Result<Vec<usize>> {
    let k = l.k();
    if h_star.k() != k + 1 {
        return Err(Error::Invalid(format!("an augmentation of a {k}-labelled combination needs k = {}", k + 1)));
    }
    let t = l.template();
    let mut pos = Vec::with_capacity(t.vertex_count());
    for v in t.vertices() {
        let j = h_star.index_of(&v.id).ok_or_else(|| Error::UnknownVertex(v.id.clone()))?;
        if h_star.weight(j) != &v.weight.widen() {
            return Err(Error::Invalid(format!("vertex {:?} changes label in the augmentation", v.id)));
        }
        pos.push(j);
    }
    let new_label = KTuple::unit(k + 1, k);
    for (j, v) in h_star.vertices().iter().enumerate() {
        if !pos.contains(&j) && v.weight != new_label {
            return Err(Error::Invalid(format!("new vertex {:?} must carry label {}", v.id, k + 1)));
        }
    }
    Ok(pos)
}

/// Why a lift is known to stay in the kernel, or the obstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftRoute {
    /// The old blocks form a homogeneous collection in `H*`, and the edges among
    /// them are fixed by every permutation preserving each old block.
    Homogeneous,
    /// `H*` is fixed by `σ'` (σ extended by the identity on the new block) for every σ in the sufficient set.
    FixedBySufficientSet,
    /// Every σ in the sufficient set extends to an automorphism of `H*` preserving the new block.
    FixedByExtension(Vec<LabelPermutation>),
    /// No sufficient condition holds; this σ moves `H*`.
    Moved(LabelPermutation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftCheck {
    /// A sufficient condition for `Lift(L; H*) ∈ Ker(X_{k+1})` holds.
    pub valid: bool,
    pub route: LiftRoute,
    pub homogeneous: bool,
    /// `Some` when a sufficient set was consulted.
    pub fixed_by_set: Option<bool>,
    /// `Some` in verification mode: whether the lifted combination evaluates to zero.
    pub evaluates_to_zero: Option<bool>,
}

/// Whether the homogeneity route applies to `H*` over a `k`-labelled template:
/// the old blocks are homogeneous with respect to the new block and every
/// permutation preserving each old block fixes `H*`.
pub fn lift_is_homogeneous(l: &GraphCombination, h_star: &LabelledGraph) -> Result<bool> {
    augmentation_positions(l, h_star)?;
    Ok(homogeneous_augmentation(l.k(), h_star))
}

fn homogeneous_augmentation(k: usize, h_star: &LabelledGraph) -> bool {
    let blocks = h_star.blocks().expect("validated augmentation");
    h_star.homogeneity_violation(&blocks[..k], &blocks[k]).is_none() && h_star.blocks_are_symmetric(&blocks[..k])
}

/// Decide whether `Lift(L; H*)` is guaranteed to lie in the kernel, assuming
/// `L` does and `sufficient_set` is a sufficient permutation set for it.
pub fn check_lift_valid(
    l: &GraphCombination,
    h_star: &LabelledGraph,
    sufficient_set: Option<&[LabelPermutation]>,
    verify: bool,
    limits: &Limits,
) -> Result<LiftCheck> {
    check_lift_valid_with_extensions(l, h_star, sufficient_set, &[], verify, limits)
}

/// As [`check_lift_valid`]; additionally accepts σ whose extension in
/// `extensions` (agreeing with σ on the old blocks and mapping the new block to
/// itself) is an automorphism of `H*`.
pub fn check_lift_valid_with_extensions(
    l: &GraphCombination,
    h_star: &LabelledGraph,
    sufficient_set: Option<&[LabelPermutation]>,
    extensions: &[LabelPermutation],
    verify: bool,
    limits: &Limits,
) -> Result<LiftCheck> {
    let pos = augmentation_positions(l, h_star)?;
    let homogeneous = homogeneous_augmentation(l.k(), h_star);

    let mut fixed_by_set = None;
    let mut route = LiftRoute::Homogeneous;
    if !homogeneous {
        let set = sufficient_set
            .ok_or_else(|| Error::Invalid("a sufficient set is required: H* is not homogeneous or not block-symmetric".into()))?;
        let mut used = Vec::new();
        let mut moved = None;
        for sigma in set {
            if h_star.permuted(sigma)? == *h_star {
                continue;
            }
            match extensions.iter().find(|tau| extends(tau, sigma, l, &pos, h_star)) {
                Some(tau) => used.push(tau.clone()),
                None => {
                    moved = Some(sigma.clone());
                    break;
                }
            }
        }
        route = match (moved, used.is_empty()) {
            (Some(sigma), _) => LiftRoute::Moved(sigma),
            (None, true) => LiftRoute::FixedBySufficientSet,
            (None, false) => LiftRoute::FixedByExtension(used),
        };
        fixed_by_set = Some(route == LiftRoute::FixedBySufficientSet);
    } else if let Some(set) = sufficient_set {
        let mut all = true;
        for sigma in set {
            all &= h_star.permuted(sigma)? == *h_star;
        }
        fixed_by_set = Some(all);
    }
    let valid = !matches!(route, LiftRoute::Moved(_));
    let evaluates_to_zero = if verify {
        let zero = evaluate(&lift(l, h_star)?, Algorithm::Auto, limits)?.is_zero();
        if valid && !zero {
            return Err(Error::Inconsistent("a valid lift does not evaluate to zero".into()));
        }
        Some(zero)
    } else {
        None
    };
    Ok(LiftCheck { valid, route, homogeneous, fixed_by_set, evaluates_to_zero })
}

fn extends(
    tau: &LabelPermutation,
    sigma: &LabelPermutation,
    l: &GraphCombination,
    pos: &[usize],
    h_star: &LabelledGraph,
) -> bool {
    let Ok(map) = tau.positions(h_star) else { return false };
    let agrees = l.template().vertices().iter().all(|v| tau.apply(&v.id) == sigma.apply(&v.id));
    let new_block_kept = (0..h_star.vertex_count()).filter(|j| !pos.contains(j)).all(|j| !pos.contains(&map[j]));
    agrees && new_block_kept && h_star.permuted(tau).map_or(false, |g| g == *h_star)
}

/// How [`orellana_scott_apply`] established the equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrellanaScottRoute {
    /// φ itself maps `G` onto `G - uw + vz`.
    Isomorphic,
    /// The four-vertex relation was certified and lifted.
    Lifted { certificate: KernelCertificate, check: LiftCheck },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrellanaScott {
    /// `G - (G - uw + vz)` as ordinary graphs.
    pub combination: GraphCombination,
    pub route: OrellanaScottRoute,
    /// The combination evaluates to zero.
    pub holds: bool,
}

/// For an ordinary graph `G` with `uz, uw, zw, vw ∈ E(G)`, `uv, zv ∉ E(G)` and an
/// automorphism φ of `G - wz - wu` exchanging `{u, w}` and `{v, z}`, show that
/// `G` and `G - uw + vz` have the same chromatic function.
pub fn orellana_scott_apply(
    g: &LabelledGraph,
    [u, v, w, z]: [&str; 4],
    phi: &LabelPermutation,
    limits: &Limits,
) -> Result<OrellanaScott> {
    let hyp = |msg: &str| Error::Hypothesis(msg.to_owned());
    if g.k() != 1 || g.vertices().iter().any(|x| x.weight != KTuple::unit(1, 0)) {
        return Err(hyp("G must be an ordinary graph with unit weights"));
    }
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let idx = |id: &str| g.index_of(id).ok_or_else(|| Error::UnknownVertex(id.to_owned()));
    let (iu, iv, iw, iz) = (idx(u)?, idx(v)?, idx(w)?, idx(z)?);
    let four = [iu, iv, iw, iz];
    if (1..4).any(|i| four[..i].contains(&four[i])) {
        return Err(hyp("u, v, w, z must be distinct"));
    }
    for (a, b, name) in [(iu, iz, "uz"), (iu, iw, "uw"), (iz, iw, "zw"), (iv, iw, "vw")] {
        if !g.adjacent(a, b) {
            return Err(hyp(&format!("edge {name} is required")));
        }
    }
    for (a, b, name) in [(iu, iv, "uv"), (iz, iv, "zv")] {
        if g.adjacent(a, b) {
            return Err(hyp(&format!("edge {name} must be absent")));
        }
    }
    let reduced = g.delete_edge(w, z)?.delete_edge(w, u)?;
    if reduced.permuted(phi).map_err(|_| hyp("φ is not a permutation of V(G)"))? != reduced {
        return Err(hyp("φ is not an automorphism of G - wz - wu"));
    }
    let pair = |a: &str, b: &str| {
        let mut s = [a.to_owned(), b.to_owned()];
        s.sort_unstable();
        s
    };
    let (uw, vz) = (pair(u, w), pair(v, z));
    let image = |s: &[alloc::string::String; 2]| pair(phi.apply(&s[0]), phi.apply(&s[1]));
    if image(&uw) != vz || image(&vz) != uw {
        return Err(hyp("φ must exchange {u, w} and {v, z}"));
    }

    let h = g.delete_edge(u, w)?.add_edge(v, z)?;
    let mut combination = GraphCombination::zero(g)?;
    combination.push(Rational::one(), g)?;
    combination.push(-Rational::one(), &h)?;

    if g.permuted(phi)? == h {
        let holds = evaluate(&combination, Algorithm::Auto, limits)?.is_zero();
        return Ok(OrellanaScott { combination, route: OrellanaScottRoute::Isomorphic, holds });
    }
    if !(phi.apply(u) == z && phi.apply(z) == u && phi.apply(v) == w && phi.apply(w) == v) {
        return Err(hyp("φ must exchange u with z and v with w, or u with v and w with z"));
    }

    // Relabel: V1 = {u, z}, V2 = {v, w}, V3 = the rest.
    let label = |x: &str| match x {
        _ if x == u || x == z => 0,
        _ if x == v || x == w => 1,
        _ => 2,
    };
    let weights3: Vec<KTuple> = g.vertices().iter().map(|x| KTuple::unit(3, label(&x.id))).collect();
    let g3 = g.with_weights(3, weights3.clone())?;
    let h3 = h.with_weights(3, weights3)?;

    let core2 = |x: &LabelledGraph| -> Result<LabelledGraph> {
        let sub = x.induced_subgraph(&[u, z, v, w])?;
        let ws = sub.vertices().iter().map(|y| KTuple::unit(2, label(&y.id))).collect();
        sub.with_weights(2, ws)
    };
    let mut l2 = GraphCombination::zero(&core2(&g3)?)?;
    l2.push(Rational::one(), &core2(&g3)?)?;
    l2.push(-Rational::one(), &core2(&h3)?)?;
    let certificate = rewrite_to_r(&l2, limits)?;
    if !certificate.residual_is_zero() {
        return Err(Error::Inconsistent("the four-vertex relation is not in the kernel".into()));
    }

    let inside = |a: usize, b: usize| four.contains(&a) && four.contains(&b);
    let h_star = g3.with_edges(g3.edges().iter().copied().filter(|&(a, b)| !inside(a, b)).collect())?;
    let lifted = lift(&l2, &h_star)?;
    let mut expected = GraphCombination::zero(&g3)?;
    expected.push(Rational::one(), &g3)?;
    expected.push(-Rational::one(), &h3)?;
    if !lifted.formally_equal(&expected) {
        return Err(Error::Inconsistent("the lift does not reproduce G - H".into()));
    }
    let check = check_lift_valid_with_extensions(
        &l2,
        &h_star,
        Some(&certificate.sufficient_set),
        core::slice::from_ref(phi),
        false,
        limits,
    )?;
    if !check.valid {
        return Err(Error::Inconsistent("no sufficient condition for the lift holds".into()));
    }
    let projected = project_to_csf(&lifted)?;
    if !projected.formally_equal(&combination) {
        return Err(Error::Inconsistent("projection does not recover G - H".into()));
    }
    let holds = evaluate(&combination, Algorithm::Auto, limits)?.is_zero();
    Ok(OrellanaScott { combination, route: OrellanaScottRoute::Lifted { certificate, check }, holds })
}
