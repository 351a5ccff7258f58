mod common;

use chromsym_core::csf::{csf, Algorithm};
use chromsym_core::graphs::LabelledGraph;
use chromsym_core::multisym::{Basis, MultiSym};
use chromsym_core::posets::{
    build_gk, build_hk, build_q, gp_coefficients, gp_reduce, grow_homogeneous_pair, grow_homogeneous_pair_exhaustive,
    Pattern, Poset,
};
use chromsym_core::{Limits, Rational};
use common::*;
use num_traits::{One, Zero};
use rand::Rng;

/// Comparable pairs among four elements, as `(lower, upper)`.
fn comparabilities(p: &Poset, q: [usize; 4]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if p.less(q[i], q[j]) {
                out.push((q[i], q[j]));
            }
        }
    }
    out
}

fn is_square(p: &Poset, q: [usize; 4]) -> bool {
    match comparabilities(p, q)[..] {
        [(a, c), (b, d)] => a != b && a != d && c != b && c != d,
        _ => false,
    }
}

fn is_claw(p: &Poset, q: [usize; 4]) -> bool {
    let rel = comparabilities(p, q);
    rel.len() == 3 && q.iter().any(|&x| rel.iter().all(|&(a, b)| a != x && b != x))
}

fn four_subsets(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

fn squares(p: &Poset) -> usize {
    four_subsets(p.len()).into_iter().filter(|&q| is_square(p, q)).count()
}

fn claws(p: &Poset) -> usize {
    four_subsets(p.len()).into_iter().filter(|&q| is_claw(p, q)).count()
}

/// Conditions (a) to (e), with square-connectivity checked over every split.
fn conditions_hold(p: &Poset, v1: &[usize], v2: &[usize]) -> bool {
    let antichain = |s: &[usize]| s.iter().all(|&x| s.iter().all(|&y| x == y || (!p.less(x, y) && !p.less(y, x))));
    let disjoint = v1.iter().all(|x| !v2.contains(x));
    let oriented = v1.iter().all(|&x| v2.iter().all(|&y| !p.less(y, x)));
    let connected = |side: &[usize], other: &[usize]| {
        (1..(1u32 << side.len()) - 1).all(|mask| {
            let a: Vec<usize> = side.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
            let b: Vec<usize> = side.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, &x)| x).collect();
            a.iter().any(|&x| {
                b.iter().any(|&x2| {
                    other.iter().any(|&y| other.iter().any(|&y2| y < y2 && is_square(p, [x, x2, y, y2])))
                })
            })
        })
    };
    disjoint && antichain(v1) && antichain(v2) && oriented && connected(v1, v2) && connected(v2, v1)
}

fn homogeneous_in_incomparability_graph(p: &Poset, v1: &[usize], v2: &[usize]) -> bool {
    let g = p.incomparability_graph();
    let ids = |s: &[usize]| s.iter().map(|&i| p.id(i)).collect::<Vec<_>>();
    let rest: Vec<usize> = (0..p.len()).filter(|x| !v1.contains(x) && !v2.contains(x)).collect();
    let clique = |s: &[usize]| s.iter().all(|&x| s.iter().all(|&y| x == y || g.adjacent(x, y)));
    clique(v1) && clique(v2) && g.verify_homogeneous_collection(&[ids(v1), ids(v2)], &ids(&rest)).unwrap().is_none()
}

fn x(g: &LabelledGraph) -> MultiSym {
    csf(g, Algorithm::Auto, &Limits::default()).unwrap()
}

fn unit_graph(ids: &[&str], edges: &[(&str, &str)]) -> LabelledGraph {
    LabelledGraph::unweighted(ids, edges).unwrap()
}

fn combination(terms: &[(Rational, &LabelledGraph)]) -> MultiSym {
    let mut sum = MultiSym::zero(1, Basis::P);
    for (c, g) in terms {
        sum = sum.add(&x(g).scale(c)).unwrap();
    }
    sum
}

#[test]
fn incomparability_encoding_is_exact() {
    let mut r = rng(51);
    for _ in 0..60 {
        let n = r.gen_range(1..=7);
        let density = r.gen_range(0.1..0.7);
        let p = random_poset(&mut r, n, density);
        let g = p.incomparability_graph();
        assert!(g.is_simple());
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    assert_eq!(g.adjacent(a, b), !p.less(a, b) && !p.less(b, a));
                }
            }
        }
    }
}

#[test]
fn pattern_search_matches_brute_force() {
    let mut r = rng(52);
    for _ in 0..100 {
        let n = r.gen_range(1..=7);
        let density = r.gen_range(0.1..0.7);
        let p = random_poset(&mut r, n, density);
        assert_eq!(p.count_2plus2(), squares(&p));
        assert_eq!(p.find_induced_pattern(Pattern::TwoPlusTwo).is_some(), squares(&p) > 0);
        assert_eq!(p.find_induced_pattern(Pattern::ThreePlusOne).is_some(), claws(&p) > 0);
        if let Some([a, b, c, d]) = p.find_induced_pattern(Pattern::ThreePlusOne) {
            assert!(p.less(a, b) && p.less(b, c));
            assert!([a, b, c].iter().all(|&y| !p.comparable(y, d)));
        }
    }
}

#[test]
fn grown_pairs_satisfy_every_condition() {
    let limits = Limits::default();
    let mut r = rng(53);
    let mut grown = 0;
    let mut matched_exhaustive = 0;
    while grown < 40 {
        let p = random_three_plus_one_free(&mut r, 8);
        let Some(w) = p.find_induced_pattern(Pattern::TwoPlusTwo) else { continue };
        grown += 1;
        let pair = grow_homogeneous_pair(&p, w, &limits).unwrap();
        assert!(conditions_hold(&p, &pair.v1, &pair.v2), "{p:?}: {pair:?}");
        assert!(homogeneous_in_incomparability_graph(&p, &pair.v1, &pair.v2));
        for x in (0..p.len()).filter(|x| !pair.v1.contains(x) && !pair.v2.contains(x)) {
            let add = |s: &[usize]| {
                let mut t = s.to_vec();
                t.push(x);
                t
            };
            assert!(!conditions_hold(&p, &add(&pair.v1), &pair.v2));
            assert!(!conditions_hold(&p, &pair.v1, &add(&pair.v2)));
        }

        let best = grow_homogeneous_pair_exhaustive(&p, w, &limits).unwrap();
        assert!(conditions_hold(&p, &best.v1, &best.v2));
        assert!(homogeneous_in_incomparability_graph(&p, &best.v1, &best.v2));
        let (g_size, e_size) = (pair.v1.len() + pair.v2.len(), best.v1.len() + best.v2.len());
        assert!(g_size <= e_size);
        matched_exhaustive += usize::from(g_size == e_size);
    }
    assert!(matched_exhaustive * 2 >= grown, "greedy reached the largest size in {matched_exhaustive} of {grown}");
}

/// Exhaustive count of injections with `k` matched edges, against the library.
#[test]
fn coefficients_form_a_distribution() {
    let limits = Limits::default();
    let mut r = rng(54);
    for _ in 0..40 {
        let m = r.gen_range(1..=3);
        let n = r.gen_range(m..=4);
        let v1: Vec<String> = (0..m).map(|i| format!("v{i}")).collect();
        let v2: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let mut edges: Vec<(&str, &str)> = Vec::new();
        for side in [&v1, &v2] {
            for i in 0..side.len() {
                for j in i + 1..side.len() {
                    edges.push((&side[i], &side[j]));
                }
            }
        }
        let mut cross = vec![vec![false; n]; m];
        for (i, row) in cross.iter_mut().enumerate() {
            for (j, hit) in row.iter_mut().enumerate() {
                *hit = r.gen_bool(0.5);
                if *hit {
                    edges.push((&v1[i], &v2[j]));
                }
            }
        }
        let ids: Vec<&str> = v1.iter().chain(&v2).map(String::as_str).collect();
        let g = unit_graph(&ids, &edges);
        let (p1, p2): (Vec<usize>, Vec<usize>) = ((0..m).collect(), (m..m + n).collect());
        let c = gp_coefficients(&g, &p1, &p2, &limits).unwrap();
        assert_eq!(c.iter().fold(Rational::zero(), |a, b| a + b), Rational::one());
        assert!(c.iter().all(|x| *x >= Rational::zero()));

        let mut counts = vec![0i64; m + 1];
        let mut total = 0;
        for code in 0..n.pow(m as u32) {
            let image: Vec<usize> = (0..m).map(|i| code / n.pow(i as u32) % n).collect();
            if (0..m).any(|i| image[i + 1..].contains(&image[i])) {
                continue;
            }
            total += 1;
            counts[(0..m).filter(|&i| cross[i][image[i]]).count()] += 1;
        }
        let oracle: Vec<Rational> = counts.iter().map(|&k| frac(k, total)).collect();
        assert_eq!(c, oracle);
    }
}

#[test]
fn extreme_cross_edges_concentrate_the_coefficients() {
    let limits = Limits::default();
    let all = build_gk(&["a", "b"], &["c", "d", "e"], 2).unwrap();
    assert_eq!(gp_coefficients(&all, &[0, 1], &[2, 3, 4], &limits).unwrap(), vec![int(0), int(0), int(1)]);
    let none = build_gk(&["a", "b"], &["c", "d", "e"], 0).unwrap();
    assert_eq!(gp_coefficients(&none, &[0, 1], &[2, 3, 4], &limits).unwrap(), vec![int(1), int(0), int(0)]);
}

/// The square identity checked through colour counts: `X(C4) = ½ X(2K2) + ½ X(K4)`.
#[test]
fn square_identity_by_colour_counting() {
    let ids = ["a", "b", "c", "d"];
    let c4 = unit_graph(&ids, &[("a", "b"), ("c", "d"), ("a", "d"), ("b", "c")]);
    let two_k2 = unit_graph(&ids, &[("a", "b"), ("c", "d")]);
    let paw = unit_graph(&ids, &[("a", "b"), ("c", "d"), ("a", "c"), ("a", "d")]);
    let k4 = unit_graph(&ids, &[("a", "b"), ("c", "d"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]);
    let m = |g: &LabelledGraph| colouring_oracle(g).to_basis(Basis::P, &Limits::default()).unwrap();
    let half = frac(1, 2);
    let rhs = m(&two_k2).scale(&half).add(&m(&k4).scale(&half)).unwrap();
    assert_eq!(m(&c4), rhs);
    assert_eq!(combination(&[(half.clone(), &two_k2), (half, &k4)]), x(&c4));

    // Weighting by all maps instead of injections gives (¼, ½, ¼), which misses.
    let quarter = frac(1, 4);
    let all_maps = combination(&[(quarter.clone(), &two_k2), (frac(1, 2), &paw), (quarter, &k4)]);
    assert_ne!(all_maps, x(&c4));
}

#[test]
fn children_match_their_graphs() {
    let limits = Limits::default();
    let mut r = rng(55);
    let mut seen = 0;
    while seen < 25 {
        let p = random_three_plus_one_free(&mut r, 7);
        let Some(w) = p.find_induced_pattern(Pattern::TwoPlusTwo) else { continue };
        seen += 1;
        let pair = grow_homogeneous_pair(&p, w, &limits).unwrap();
        let (small, large) =
            if pair.v1.len() <= pair.v2.len() { (&pair.v1, &pair.v2) } else { (&pair.v2, &pair.v1) };
        let g = p.incomparability_graph();
        let c = gp_coefficients(&g, small, large, &limits).unwrap();
        let mut sum = MultiSym::zero(1, Basis::P);
        for (k, ck) in c.iter().enumerate() {
            let h = build_hk(&g, small, large, k).unwrap();
            let q = build_q(&p, &pair.v1, &pair.v2, k).unwrap();
            assert_eq!(q.incomparability_graph(), h);
            assert_eq!(claws(&q), 0);
            sum = sum.add(&x(&h).scale(ck)).unwrap();
        }
        assert_eq!(sum, x(&g), "{p:?}");
    }
}

#[test]
fn reductions_satisfy_their_postconditions() {
    let limits = Limits::default();
    let mut r = rng(56);
    let (mut nontrivial, mut trivial) = (0, 0);
    while nontrivial < 30 {
        let p = random_three_plus_one_free(&mut r, 7);
        if squares(&p) == 0 && trivial >= 10 {
            continue;
        }
        let red = gp_reduce(&p, &limits).unwrap();
        let total = red.leaves.iter().fold(Rational::zero(), |a, (c, _)| a + c);
        assert_eq!(total, Rational::one());
        assert!(red.leaves.iter().all(|(c, _)| *c > Rational::zero()));
        for (_, leaf) in &red.leaves {
            assert_eq!(squares(leaf), 0);
            assert_eq!(claws(leaf), 0);
        }
        let graphs: Vec<(Rational, LabelledGraph)> =
            red.leaves.iter().map(|(c, q)| (c.clone(), q.incomparability_graph())).collect();
        let refs: Vec<(Rational, &LabelledGraph)> = graphs.iter().map(|(c, g)| (c.clone(), g)).collect();
        assert_eq!(combination(&refs), x(&p.incomparability_graph()), "{p:?}");
        for step in &red.steps {
            let before = squares(&step.poset);
            for (c, child) in step.coefficients.iter().zip(&step.children) {
                if !c.is_zero() {
                    assert!(squares(child) < before);
                }
            }
        }
        if red.steps.is_empty() {
            trivial += 1;
            assert_eq!(red.leaves.len(), 1);
            assert_eq!(red.leaves[0].1, p);
        } else {
            nontrivial += 1;
        }
    }
}
