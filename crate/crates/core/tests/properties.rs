use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use dezawl::group::subgroup_generated;
use dezawl::spectrum::exact_rank;
use dezawl::sring::{detect_wreath, is_sring};
use dezawl::wl::{arcs_are_union_of_classes, refine_round, verify_coherence, wl2, PairColoring};
use dezawl::{cayley_graph, wl_closure, Elem, Graph, Group, GroupRingElement, SRingPartition};

fn group(choice: usize) -> Group {
    match choice % 8 {
        0 => Group::cyclic(9).unwrap(),
        1 => Group::cyclic(16).unwrap(),
        2 => Group::dihedral(6).unwrap(),
        3 => Group::dihedral(10).unwrap(),
        4 => Group::symmetric(4).unwrap(),
        5 => Group::direct_product(&Group::cyclic(2).unwrap(), &Group::dihedral(4).unwrap()).unwrap(),
        6 => Group::dihedral_klein(3).unwrap(),
        _ => Group::dihedral_klein(4).unwrap(),
    }
}

fn subset(g: &Group, bits: &[bool]) -> BTreeSet<Elem> {
    g.elements().filter(|x| bits[x.index() % bits.len()]).collect()
}

fn symmetric_subset(g: &Group, bits: &[bool]) -> BTreeSet<Elem> {
    subset(g, bits).into_iter().filter(|&x| x != g.identity()).flat_map(|x| [x, g.inv(x)]).collect()
}

fn element<'g>(g: &'g Group, terms: &[(usize, i64)]) -> GroupRingElement<'g> {
    GroupRingElement::from_coeffs(g, terms.iter().map(|&(i, c)| (Elem::new(i % g.order()), c))).unwrap()
}

fn terms() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..64, -4i64..=4), 0..6)
}

fn bits() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 1..40)
}

/// Rank over the rationals by plain Gauss-Jordan elimination.
fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[rank][col];
                let pivot_row = m[rank].clone();
                for (x, p) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

#[test]
fn family_groups_are_associative() {
    for k in 3..=8 {
        assert_eq!(Group::dihedral_klein(k).unwrap().associativity_violation(), None, "k={k}");
    }
    let mut rng = StdRng::seed_from_u64(7);
    for k in [9, 12, 25] {
        let g = Group::dihedral_klein(k).unwrap();
        for _ in 0..2000 {
            let [x, y, z] = [0; 3].map(|_| Elem::new(rng.gen_range(0..g.order())));
            assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        }
    }
}

#[test]
fn broken_table_is_rejected() {
    let mut table: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| (i + j) % 4).collect()).collect();
    table[1].swap(2, 3);
    assert!(Group::from_table(table, None).is_err());
}

#[test]
fn exact_rank_matches_rational_elimination_on_family() {
    let m = dezawl::report::FamilyMember::new(3).unwrap();
    let rows = dezawl::spectrum::adjacency_rows(&m.graph);
    for t in -5..=9i64 {
        let shifted: Vec<Vec<i64>> = rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.iter().enumerate().map(|(j, &x)| x - if i == j { t } else { 0 }).collect())
            .collect();
        assert_eq!(exact_rank(&shifted), rational_rank(&shifted), "t={t}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_multiplication_is_associative_and_distributive(
        choice in 0usize..8, x in terms(), y in terms(), z in terms()
    ) {
        let g = group(choice);
        let (x, y, z) = (element(&g, &x), element(&g, &y), element(&g, &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
    }

    #[test]
    fn right_translation_in_the_ring(choice in 0usize..8, b in bits(), h in 0usize..64) {
        let g = group(choice);
        let x = subset(&g, &b);
        let h = Elem::new(h % g.order());
        let lhs = &GroupRingElement::simple_quantity(&g, x.iter().copied()) * &GroupRingElement::basis(&g, h);
        let rhs = GroupRingElement::simple_quantity(&g, g.right_translate(&x, h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fibers_partition_the_group(choice in 0usize..8, x in terms(), y in terms()) {
        let g = group(choice);
        let p = &element(&g, &x) * &element(&g, &y);
        let fibers = p.coefficient_fibers();
        let total: usize = fibers.values().map(BTreeSet::len).sum();
        prop_assert_eq!(total, g.order());
        let union: BTreeSet<Elem> = fibers.values().flatten().copied().collect();
        prop_assert_eq!(union.len(), g.order());
        for (&c, f) in &fibers {
            prop_assert!(f.iter().all(|&e| p.coefficient(e) == c));
        }
    }

    #[test]
    fn cosets_partition(choice in 0usize..8, gens in prop::collection::vec(0usize..64, 1..3)) {
        let g = group(choice);
        let gens: Vec<Elem> = gens.iter().map(|&i| Elem::new(i % g.order())).collect();
        let h = subgroup_generated(&g, &gens);
        let cosets = h.right_cosets(&g);
        prop_assert_eq!(cosets.len() * h.order(), g.order());
        prop_assert!(cosets.iter().all(|c| c.len() == h.order()));
        let union: BTreeSet<Elem> = cosets.iter().flatten().copied().collect();
        prop_assert_eq!(union.len(), g.order());
    }

    #[test]
    fn closure_is_minimal_monotone_and_idempotent(choice in 0usize..8, b1 in bits(), b2 in bits()) {
        let g = group(choice);
        let s = symmetric_subset(&g, &b1);
        let extra = subset(&g, &b2);
        let a = wl_closure(&g, std::slice::from_ref(&s));
        prop_assert_eq!(is_sring(&g, &a), Ok(()));
        prop_assert!(a.is_union_of_classes(&s));

        let both = wl_closure(&g, &[s.clone(), extra.clone()]);
        prop_assert_eq!(is_sring(&g, &both), Ok(()));
        prop_assert!(both.refines(&a));

        let seeded: Vec<BTreeSet<Elem>> = a.classes().iter().map(|c| c.iter().copied().collect()).collect();
        prop_assert_eq!(&wl_closure(&g, &seeded), &a);

        for w in detect_wreath(&g, &a).unwrap() {
            prop_assert!(w.rank_identity_holds());
        }
    }

    #[test]
    fn closure_rank_equals_wl_rank(choice in 0usize..8, b in bits()) {
        let g = group(choice);
        let s = symmetric_subset(&g, &b);
        let graph = cayley_graph(&g, &s).unwrap();
        let cc = wl2(&graph).unwrap();
        let closure = wl_closure(&g, &[s]);
        prop_assert_eq!(cc.rank, closure.rank());
        prop_assert!(cc.rank <= g.order());
    }

    #[test]
    fn wl2_output_is_coherent(n in 2usize..14, density in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_graph(n, density, seed);
        let cc = wl2(&g).unwrap();
        prop_assert_eq!(verify_coherence(&cc.coloring), Ok(()));
        prop_assert!(arcs_are_union_of_classes(&g, &cc.coloring));
        prop_assert!(cc.rank >= 2 && cc.rank <= n * n);
        // the transpose of a class is a class
        let mut transpose = vec![None; cc.rank];
        for u in 0..n {
            for v in 0..n {
                let t = cc.coloring.color(v, u);
                let slot = &mut transpose[cc.coloring.color(u, v) as usize];
                prop_assert!(slot.is_none() || *slot == Some(t));
                *slot = Some(t);
            }
        }
    }

    #[test]
    fn refinement_never_merges(n in 2usize..12, density in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_graph(n, density, seed);
        let mut c = PairColoring::initial(&g);
        for _ in 0..n {
            let next = refine_round(&c);
            prop_assert!(next.num_colors >= c.num_colors && next.num_colors <= n * n);
            for p in 0..n * n {
                for q in 0..n * n {
                    if next.colors[p] == next.colors[q] {
                        prop_assert_eq!(c.colors[p], c.colors[q]);
                    }
                }
            }
            c = next;
        }
    }

    #[test]
    fn exact_rank_matches_rational_elimination(
        rows in 1usize..7, cols in 1usize..7, entries in prop::collection::vec(-3i64..=3, 49)
    ) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| entries[i * 7..i * 7 + cols].to_vec()).collect();
        prop_assert_eq!(exact_rank(&m), rational_rank(&m));
    }

    #[test]
    fn singletons_and_rank_two_are_srings(choice in 0usize..8) {
        let g = group(choice);
        prop_assert_eq!(is_sring(&g, &SRingPartition::singletons(&g)), Ok(()));
        let rest: Vec<Elem> = g.elements().filter(|&x| x != g.identity()).collect();
        let p = SRingPartition::from_classes(&g, vec![vec![g.identity()], rest]).unwrap();
        prop_assert_eq!(is_sring(&g, &p), Ok(()));
        let complete = cayley_graph(&g, &g.elements().filter(|&x| x != g.identity()).collect()).unwrap();
        prop_assert_eq!(wl2(&complete).unwrap().rank, 2);
    }
}

#[test]
fn rational_oracle_sanity() {
    assert_eq!(rational_rank(&[vec![2, 4], vec![1, 2]]), 1);
    assert_eq!(rational_rank(&[vec![0, 3], vec![5, 0]]), 2);
}
