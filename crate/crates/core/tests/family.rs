//! Per-k invariants of the family over the full range k = 3..12.

use dezawl::graphs::{canonical_ddg_partition, ddg_check, deza_parameters, local_profile};
use dezawl::groupring::verify_family_square;
use dezawl::report::FamilyMember;
use dezawl::spectrum::{expected_family_spectrum, integral_spectrum};
use dezawl::sring::is_sring;
use dezawl::wl::{arcs_are_union_of_classes, wl2};
use dezawl::{grid_graph, wl_closure, Elem, GroupRingElement};

const KS: std::ops::RangeInclusive<usize> = 3..=12;

#[test]
fn group_has_distinct_normal_forms() {
    for k in KS {
        let m = FamilyMember::new(k).unwrap();
        assert_eq!(m.n(), 8 * k);
        let names: std::collections::BTreeSet<&str> = m.group.elements().map(|x| m.group.name(x)).collect();
        assert_eq!(names.len(), 8 * k);
        assert_eq!(m.connection_set.len(), 2 * (k + 1));
        assert!(m.connection_set.iter().all(|&s| m.connection_set.contains(&m.group.inv(s))));
    }
}

#[test]
fn square_identity_holds() {
    for k in KS {
        let m = FamilyMember::new(k).unwrap();
        assert!(verify_family_square(&m.group, k).unwrap().holds, "k={k}");
    }
}

#[test]
fn closure_matches_two_dimensional_wl() {
    for k in KS {
        let m = FamilyMember::new(k).unwrap();
        let closure = wl_closure(&m.group, std::slice::from_ref(&m.connection_set));
        assert_eq!(is_sring(&m.group, &closure), Ok(()), "k={k}");
        let cc = wl2(&m.graph).unwrap();
        assert!(arcs_are_union_of_classes(&m.graph, &cc.coloring));
        assert_eq!(cc.rank, closure.rank(), "k={k}");
        assert_eq!(cc.rank, m.expected_wl_rank(), "k={k}");
        assert!(cc.rank <= m.n());
    }
}

#[test]
fn common_neighbors_follow_square_coefficients() {
    for k in [3, 4, 7] {
        let m = FamilyMember::new(k).unwrap();
        let s_bar = GroupRingElement::simple_quantity(&m.group, m.connection_set.iter().copied());
        let square = s_bar.multiply(&s_bar).unwrap();
        let e = m.group.identity().index();
        for g in m.group.elements().filter(|&g| g != m.group.identity()) {
            let c = square.coefficient(g) as usize;
            assert_eq!(m.graph.common_neighbors(e, g.index()), c, "k={k}, g={}", m.group.name(g));
        }
        // and by translation the same holds from any base vertex
        let x = m.group.word(1, 1, 0, 1).unwrap();
        for g in m.group.elements().filter(|&g| g != m.group.identity()) {
            let y = m.group.mul(g, x);
            assert_eq!(m.graph.common_neighbors(x.index(), y.index()), square.coefficient(g) as usize);
        }
    }
}

#[test]
fn square_fibers() {
    let m = FamilyMember::new(3).unwrap();
    let s_bar = GroupRingElement::simple_quantity(&m.group, m.connection_set.iter().copied());
    let fibers = s_bar.multiply(&s_bar).unwrap().coefficient_fibers();
    let sizes: Vec<(i64, usize)> = fibers.iter().map(|(&c, x)| (c, x.len())).collect();
    assert_eq!(sizes, vec![(2, 18), (4, 5), (8, 1)]);

    let m = FamilyMember::new(5).unwrap();
    let s_bar = GroupRingElement::simple_quantity(&m.group, m.connection_set.iter().copied());
    let fibers = s_bar.multiply(&s_bar).unwrap().coefficient_fibers();
    assert_eq!(fibers[&2].len(), 30);
    assert_eq!(fibers[&12].iter().copied().collect::<Vec<Elem>>(), vec![m.group.identity()]);
}

#[test]
fn local_profiles_agree() {
    for k in [3, 6, 9] {
        let m = FamilyMember::new(k).unwrap();
        let first = local_profile(&m.graph, 0);
        for u in 1..m.n() {
            assert_eq!(local_profile(&m.graph, u), first, "k={k}, u={u}");
        }
    }
}

#[test]
fn divisible_design_for_all_k() {
    for k in KS {
        let m = FamilyMember::new(k).unwrap();
        let partition = canonical_ddg_partition(&m.group, k).unwrap();
        let d = ddg_check(&m.graph, &partition).unwrap();
        assert_eq!(d.tuple(), m.ddg_tuple(), "k={k}");
    }
}

#[test]
fn spectrum_for_all_k() {
    for k in KS {
        let m = FamilyMember::new(k).unwrap();
        let s = integral_spectrum(&m.graph).unwrap().unwrap();
        assert_eq!(s.eigenvalues(), expected_family_spectrum(k).unwrap(), "k={k}");
        assert!(s.trace_checks(&m.graph).all(), "k={k}");
    }
}

#[test]
fn grid_is_integral_with_same_deza_parameters() {
    for k in 3..=6 {
        let m = FamilyMember::new(k).unwrap();
        let grid = grid_graph(4, 2 * k).unwrap();
        assert_eq!(grid.regular_degree(), Some(2 * k + 2));
        assert_eq!(deza_parameters(&grid).unwrap().tuple(), m.deza_tuple());
        let s = integral_spectrum(&grid).unwrap().unwrap();
        // line graph of K_{4,2k}: eigenvalues 2k+2, 2k-2, 2, -2
        let ki = k as i64;
        assert_eq!(s.pairs, vec![(2 * ki + 2, 1), (2 * ki - 2, 3), (2, 2 * k - 1), (-2, 3 * (2 * k - 1))]);
    }
}

#[test]
fn removing_an_edge_breaks_the_certificates() {
    let m = FamilyMember::new(3).unwrap();
    let mut g = m.graph.clone();
    let (u, v) = g.edges()[0];
    assert!(g.remove_edge(u, v).unwrap());
    assert!(deza_parameters(&g).is_err());
    let broken = match integral_spectrum(&g).unwrap() {
        Ok(s) => s.eigenvalues() != expected_family_spectrum(3).unwrap(),
        Err(_) => true,
    };
    assert!(broken);
}
