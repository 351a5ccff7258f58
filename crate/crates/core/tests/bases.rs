mod common;

use chromsym_core::csf::{csf, Algorithm};
use chromsym_core::graphs::{complete_graph_k, edgeless, elementary_g, multipartite_i};
use chromsym_core::multisym::{mtilde_to_r, r_generator, Basis, MultiSym};
use chromsym_core::partitions::{enumerate_partitions, KTuplePartition};
use chromsym_core::Limits;
use common::*;
use num_traits::{One, Zero};
use rand::Rng;

fn random_element(r: &mut impl Rng, k: usize, basis: Basis) -> MultiSym {
    let terms = (0..r.gen_range(1..4)).map(|_| (random_partition(r, k, 5), frac(r.gen_range(-4..5), r.gen_range(1..4))));
    MultiSym::from_terms(k, basis, terms).unwrap()
}

#[test]
fn round_trips_between_all_bases() {
    let limits = Limits::default();
    let mut r = rng(11);
    for _ in 0..40 {
        let k = r.gen_range(1..=2);
        for from in Basis::ALL {
            let f = random_element(&mut r, k, from);
            for to in Basis::ALL {
                let back = f.to_basis(to, &limits).unwrap().to_basis(from, &limits).unwrap();
                assert_eq!(back, f, "{from:?} -> {to:?} -> {from:?}");
            }
        }
    }
}

#[test]
fn power_sum_products_are_disjoint_unions() {
    let limits = Limits::default();
    let mut r = rng(12);
    for _ in 0..20 {
        let k = r.gen_range(1..=3);
        let (a, b) = (random_partition(&mut r, k, 4), random_partition(&mut r, k, 4));
        let product = MultiSym::basis_element(Basis::P, a.clone())
            .mul_p(&MultiSym::basis_element(Basis::P, b.clone()))
            .unwrap();
        let union = edgeless(&a).disjoint_union(&edgeless(&b)).unwrap();
        let x = csf(&union, Algorithm::Colorings, &limits).unwrap();
        assert_eq!(product.to_basis(Basis::MTilde, &limits).unwrap(), x.to_basis(Basis::MTilde, &limits).unwrap());
    }
}

#[test]
fn generating_graphs_give_basis_elements() {
    let limits = Limits::default();
    let mut r = rng(13);
    for _ in 0..20 {
        let k = r.gen_range(1..=3);
        let l = random_partition(&mut r, k, 6);
        let mt = csf(&complete_graph_k(&l), Algorithm::Verify, &limits).unwrap();
        assert_eq!(mt.to_basis(Basis::MTilde, &limits).unwrap(), MultiSym::basis_element(Basis::MTilde, l.clone()));
        let p = csf(&edgeless(&l), Algorithm::Verify, &limits).unwrap();
        assert_eq!(p, MultiSym::basis_element(Basis::P, l.clone()));
        let rr = csf(&multipartite_i(&l), Algorithm::Auto, &limits).unwrap();
        assert_eq!(rr.to_basis(Basis::R, &limits).unwrap(), MultiSym::basis_element(Basis::R, l.clone()));
        let mut g = elementary_g(&l.parts()[0]);
        for part in &l.parts()[1..] {
            g = g.disjoint_union(&elementary_g(part)).unwrap();
        }
        let e = csf(&g, Algorithm::Auto, &limits).unwrap();
        assert_eq!(e.to_basis(Basis::E, &limits).unwrap(), MultiSym::basis_element(Basis::E, l));
    }
}

/// At k = 1 the elementary generator is `n!` times the classical `e_n`.
#[test]
fn elementary_scaling_at_k1() {
    let limits = Limits::default();
    let e3 = MultiSym::basis_element(Basis::E, KTuplePartition::from_rows(1, &[&[3]]).unwrap());
    let p = e3.to_basis(Basis::P, &limits).unwrap();
    // 6 e_3 = p_111 - 3 p_21 + 2 p_3
    let expect = MultiSym::from_terms(
        1,
        Basis::P,
        [
            (KTuplePartition::from_rows(1, &[&[1], &[1], &[1]]).unwrap(), int(1)),
            (KTuplePartition::from_rows(1, &[&[2], &[1]]).unwrap(), int(-3)),
            (KTuplePartition::from_rows(1, &[&[3]]).unwrap(), int(2)),
        ],
    )
    .unwrap();
    assert_eq!(p, expect);
}

#[test]
fn r_to_mtilde_is_unit_triangular() {
    let limits = Limits::default();
    for k in 1..=2 {
        let targets: Vec<Vec<u32>> = if k == 1 {
            (1..=6).map(|n| vec![n]).collect()
        } else {
            (0..=6).flat_map(|a| (0..=6 - a).map(move |b| vec![a, b])).filter(|t| t.iter().any(|&x| x > 0)).collect()
        };
        for target in targets {
            let basis = enumerate_partitions(&target, 12).unwrap();
            for (i, lambda) in basis.iter().enumerate() {
                let col = r_generator(lambda, &limits).unwrap();
                assert!(col.coeff(lambda).is_one(), "diagonal at {lambda:?}");
                for mu in &basis[..i] {
                    assert!(col.coeff(mu).is_zero(), "r_{lambda:?} has m̃_{mu:?} above the diagonal");
                }
                let back = mtilde_to_r(&col, &limits).unwrap();
                assert_eq!(back, MultiSym::basis_element(Basis::R, lambda.clone()));
            }
        }
    }
}

#[test]
fn projection_commutes_with_basis_changes() {
    let limits = Limits::default();
    let mut r = rng(14);
    for _ in 0..20 {
        let f = random_element(&mut r, 3, Basis::MTilde);
        let via_p = f.project(&limits).unwrap().to_basis(Basis::MTilde, &limits).unwrap();
        let f_r = f.to_basis(Basis::R, &limits).unwrap();
        let via_r = f_r.project(&limits).unwrap().to_basis(Basis::MTilde, &limits).unwrap();
        assert_eq!(via_p, via_r);
        assert_eq!(via_p.k(), 2);
    }
}

#[test]
fn zero_detection_is_structural() {
    let limits = Limits::default();
    let mut r = rng(15);
    for _ in 0..10 {
        let f = random_element(&mut r, 2, Basis::P);
        let g = f.to_basis(Basis::E, &limits).unwrap();
        let diff = g.to_basis(Basis::P, &limits).unwrap().sub(&f).unwrap();
        assert!(diff.is_zero());
        assert!(diff.terms().is_empty());
    }
}

#[test]
fn mixing_k_or_bases_is_rejected() {
    let a = MultiSym::basis_element(Basis::P, KTuplePartition::from_rows(1, &[&[1]]).unwrap());
    let b = MultiSym::basis_element(Basis::P, KTuplePartition::from_rows(2, &[&[1, 0]]).unwrap());
    assert!(a.add(&b).is_err());
    let c = MultiSym::basis_element(Basis::E, KTuplePartition::from_rows(1, &[&[1]]).unwrap());
    assert!(a.add(&c).is_err());
}
