//! Graphs on `0..n` with bitset adjacency rows, Cayley and grid
//! constructions, and common-neighbor parameter checks (Deza, strongly
//! regular, divisible design).

pub mod io;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, Group, Subgroup};
use crate::groupring::connection_set;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<FixedBitSet>,
    directed: bool,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph { n, rows: vec![FixedBitSet::with_capacity(n); n], directed: false, labels: None }
    }

    pub fn empty_directed(n: usize) -> Graph {
        Graph { directed: true, ..Graph::empty(n) }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("distinct vertices");
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n).expect("distinct vertices");
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u).expect("distinct vertices");
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Option<Vec<String>>) -> Result<()> {
        if let Some(l) = &labels {
            if l.len() != self.n {
                return Err(Error::InvalidInput(format!("{} labels for {} vertices", l.len(), self.n)));
            }
        }
        self.labels = labels;
        Ok(())
    }

    fn check_vertex(&self, u: usize) -> Result<()> {
        if u >= self.n {
            return Err(Error::InvalidInput(format!("vertex {u} out of range for n = {}", self.n)));
        }
        Ok(())
    }

    /// Adds the arc `u -> v`, and `v -> u` for undirected graphs.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidInput(format!("loop at vertex {u}")));
        }
        self.rows[u].insert(v);
        if !self.directed {
            self.rows[v].insert(u);
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let had = self.rows[u].contains(v);
        self.rows[u].set(v, false);
        if !self.directed {
            self.rows[v].set(u, false);
        }
        Ok(had)
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn row(&self, u: usize) -> &FixedBitSet {
        &self.rows[u]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[u].ones()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count_ones(..)
    }

    /// Number of arcs for digraphs, of edges for graphs.
    pub fn edge_count(&self) -> usize {
        let arcs: usize = (0..self.n).map(|u| self.degree(u)).sum();
        if self.directed {
            arcs
        } else {
            arcs / 2
        }
    }

    /// Edges `(u, v)` with `u < v` (arcs for digraphs), lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.rows[u].ones().map(move |v| (u, v)))
            .filter(|&(u, v)| self.directed || u < v)
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| self.rows[u].ones().all(|v| self.rows[v].contains(u)))
    }

    #[inline]
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.rows[u].intersection_count(&self.rows[v])
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|u| self.degree(u) == d).then_some(d)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for (u, row) in self.rows.iter().enumerate() {
            for v in row.ones() {
                rows[u].insert(v);
            }
        }
        for (u, row) in other.rows.iter().enumerate() {
            for v in row.ones() {
                rows[self.n + u].insert(self.n + v);
            }
        }
        Graph { n, rows, directed: self.directed || other.directed, labels: None }
    }

    /// Distances from `src`; `None` for unreachable vertices.
    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for v in self.rows[u].ones() {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// `Cay(G, S)`: vertex set `G`, arcs `g -> sg` for `s` in `S`.
pub fn cayley_graph(g: &Group, s: &BTreeSet<Elem>) -> Result<Graph> {
    if s.contains(&g.identity()) {
        return Err(Error::ConnectionSet("identity in connection set".into()));
    }
    let n = g.order();
    let directed = g.set_inverse(s) != *s;
    let mut graph = if directed { Graph::empty_directed(n) } else { Graph::empty(n) };
    for x in g.elements() {
        for &y in s {
            graph.rows[x.index()].insert(g.mul(y, x).index());
        }
    }
    graph.labels = Some(g.elements().map(|x| g.name(x).to_string()).collect());
    Ok(graph)
}

/// Line graph of `K_{l,m}`: `(i, j) ~ (i', j')` iff exactly one coordinate
/// agrees. Vertex `(i, j)` has index `i * m + j`.
pub fn grid_graph(l: usize, m: usize) -> Result<Graph> {
    if l == 0 || m == 0 {
        return Err(Error::InvalidParameter(format!("grid dimensions must be positive, got {l}x{m}")));
    }
    let mut g = Graph::empty(l * m);
    for u in 0..l * m {
        for v in u + 1..l * m {
            let (i1, j1, i2, j2) = (u / m, u % m, v / m, v % m);
            if (i1 == i2) != (j1 == j2) {
                g.add_edge(u, v)?;
            }
        }
    }
    g.labels = Some((0..l * m).map(|u| format!("({},{})", u / m, u % m)).collect());
    Ok(g)
}

/// Largest eccentricity; `None` when some vertex is unreachable.
pub fn diameter(g: &Graph) -> Option<usize> {
    let mut best = 0;
    for u in 0..g.n() {
        for d in g.bfs(u) {
            best = best.max(d?);
        }
    }
    Some(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DezaParameters {
    pub n: usize,
    pub k: usize,
    pub beta: usize,
    pub alpha: usize,
    /// Only one common-neighbor count occurs (`alpha == beta`).
    pub degenerate: bool,
    pub strongly_regular: bool,
    /// `None` when disconnected.
    pub diameter: Option<usize>,
    pub strictly: bool,
}

impl DezaParameters {
    pub fn tuple(&self) -> (usize, usize, usize, usize) {
        (self.n, self.k, self.beta, self.alpha)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NotDeza {
    Directed,
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    /// Three pairs with three distinct common-neighbor counts.
    TooManyValues {
        witnesses: [(usize, usize, usize); 3],
    },
}

impl fmt::Display for NotDeza {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotDeza::Directed => write!(f, "graph is directed"),
            NotDeza::NotRegular { vertex, degree, expected } => {
                write!(f, "not regular: vertex {vertex} has degree {degree}, expected {expected}")
            }
            NotDeza::TooManyValues { witnesses } => {
                let parts: Vec<String> = witnesses.iter().map(|(u, v, c)| format!("({u},{v}) has {c}")).collect();
                write!(f, "more than two common-neighbor counts: {}", parts.join(", "))
            }
        }
    }
}

impl std::error::Error for NotDeza {}

/// Exhaustive common-neighbor scan over all unordered pairs.
pub fn deza_parameters(g: &Graph) -> Result<DezaParameters, NotDeza> {
    if g.is_directed() {
        return Err(NotDeza::Directed);
    }
    let n = g.n();
    let k = if n == 0 { 0 } else { g.degree(0) };
    if let Some(u) = (0..n).find(|&u| g.degree(u) != k) {
        return Err(NotDeza::NotRegular { vertex: u, degree: g.degree(u), expected: k });
    }
    // (value, witness pair)
    let mut values: Vec<(usize, usize, usize)> = Vec::with_capacity(2);
    let mut adjacent_counts = BTreeSet::new();
    let mut nonadjacent_counts = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            let c = g.common_neighbors(u, v);
            if g.has_arc(u, v) {
                adjacent_counts.insert(c);
            } else {
                nonadjacent_counts.insert(c);
            }
            if values.iter().all(|&(x, _, _)| x != c) {
                if values.len() == 2 {
                    let w =
                        [(values[0].1, values[0].2, values[0].0), (values[1].1, values[1].2, values[1].0), (u, v, c)];
                    return Err(NotDeza::TooManyValues { witnesses: w });
                }
                values.push((c, u, v));
            }
        }
    }
    let (alpha, beta) = match values.as_slice() {
        [] => (0, 0),
        [(x, ..)] => (*x, *x),
        [(x, ..), (y, ..)] => (*x.min(y), *x.max(y)),
        _ => unreachable!(),
    };
    let strongly_regular = adjacent_counts.len() <= 1 && nonadjacent_counts.len() <= 1;
    let diam = diameter(g);
    Ok(DezaParameters {
        n,
        k,
        beta,
        alpha,
        degenerate: values.len() < 2,
        strongly_regular,
        diameter: diam,
        strictly: !strongly_regular && diam == Some(2),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdgParameters {
    pub n: usize,
    pub k: usize,
    /// Common neighbors inside a class; `None` when classes are singletons.
    pub alpha: Option<usize>,
    /// Common neighbors across classes; `None` when there is one class.
    pub beta: Option<usize>,
    pub m: usize,
    pub l: usize,
    pub partition: Vec<Vec<usize>>,
}

impl DdgParameters {
    pub fn tuple(&self) -> (usize, usize, Option<usize>, Option<usize>, usize, usize) {
        (self.n, self.k, self.alpha, self.beta, self.m, self.l)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DdgFailure {
    Directed,
    NotAPartition {
        vertex: usize,
    },
    UnequalClassSizes {
        class: usize,
        size: usize,
        expected: usize,
    },
    NotRegular {
        vertex: usize,
    },
    /// Pair `(u, v)` has `count` common neighbors where `expected` was set
    /// by an earlier pair of the same kind.
    Violation {
        u: usize,
        v: usize,
        same_class: bool,
        count: usize,
        expected: usize,
    },
}

impl fmt::Display for DdgFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DdgFailure::Directed => write!(f, "graph is directed"),
            DdgFailure::NotAPartition { vertex } => write!(f, "vertex {vertex} is missing or repeated"),
            DdgFailure::UnequalClassSizes { class, size, expected } => {
                write!(f, "class {class} has size {size}, expected {expected}")
            }
            DdgFailure::NotRegular { vertex } => write!(f, "graph is not regular at vertex {vertex}"),
            DdgFailure::Violation { u, v, same_class, count, expected } => write!(
                f,
                "pair ({u},{v}) {} has {count} common neighbors, expected {expected}",
                if *same_class { "in one class" } else { "across classes" }
            ),
        }
    }
}

impl std::error::Error for DdgFailure {}

/// Checks the divisible-design condition against `partition`.
pub fn ddg_check(g: &Graph, partition: &[Vec<usize>]) -> Result<DdgParameters, DdgFailure> {
    if g.is_directed() {
        return Err(DdgFailure::Directed);
    }
    let n = g.n();
    let mut class_of = vec![usize::MAX; n];
    for (id, class) in partition.iter().enumerate() {
        for &v in class {
            if v >= n || class_of[v] != usize::MAX {
                return Err(DdgFailure::NotAPartition { vertex: v });
            }
            class_of[v] = id;
        }
    }
    if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
        return Err(DdgFailure::NotAPartition { vertex: v });
    }
    let l = partition.first().map_or(0, |c| c.len());
    if let Some((id, c)) = partition.iter().enumerate().find(|(_, c)| c.len() != l) {
        return Err(DdgFailure::UnequalClassSizes { class: id, size: c.len(), expected: l });
    }
    let k = g
        .regular_degree()
        .ok_or_else(|| DdgFailure::NotRegular { vertex: (0..n).find(|&u| g.degree(u) != g.degree(0)).unwrap_or(0) })?;
    let mut alpha = None;
    let mut beta = None;
    for u in 0..n {
        for v in u + 1..n {
            let same = class_of[u] == class_of[v];
            let slot = if same { &mut alpha } else { &mut beta };
            let c = g.common_neighbors(u, v);
            match *slot {
                None => *slot = Some(c),
                Some(e) if e != c => {
                    return Err(DdgFailure::Violation { u, v, same_class: same, count: c, expected: e })
                }
                _ => {}
            }
        }
    }
    Ok(DdgParameters { n, k, alpha, beta, m: partition.len(), l, partition: partition.to_vec() })
}

/// The subgroup `A u cbA` of a dihedral-Klein group, itself dihedral of
/// order `2k`.
pub fn ddg_subgroup(g: &Group, k: usize) -> Result<Subgroup> {
    connection_set(g, k)?;
    let mut set = BTreeSet::new();
    for i in 0..k as i64 {
        set.insert(g.word(i, 0, 0, 0)?);
        set.insert(g.word(i, 1, 1, 0)?);
    }
    Subgroup::from_set(g, &set)
}

/// Right cosets of `A u cbA`, as vertex classes of the Cayley graph.
pub fn canonical_ddg_partition(g: &Group, k: usize) -> Result<Vec<Vec<usize>>> {
    let h = ddg_subgroup(g, k)?;
    Ok(h.right_cosets(g).into_iter().map(|c| c.into_iter().map(Elem::index).collect()).collect())
}

/// Degree and sorted common-neighbor counts with each neighbor; identical
/// across vertices of a vertex-transitive graph.
pub fn local_profile(g: &Graph, u: usize) -> (usize, Vec<usize>) {
    let mut counts: Vec<usize> = g.neighbors(u).map(|v| g.common_neighbors(u, v)).collect();
    counts.sort_unstable();
    (g.degree(u), counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family_graph(k: usize) -> (Group, Graph) {
        let g = Group::dihedral_klein(k).unwrap();
        let s = connection_set(&g, k).unwrap();
        let gamma = cayley_graph(&g, &s).unwrap();
        (g, gamma)
    }

    #[test]
    fn cayley_basics() {
        let (_, gamma) = family_graph(3);
        assert_eq!(gamma.n(), 24);
        assert!(!gamma.is_directed());
        assert!(gamma.is_symmetric());
        assert_eq!(gamma.regular_degree(), Some(8));
        assert_eq!(gamma.labels().unwrap()[0], "e");

        let g = Group::cyclic(6).unwrap();
        let all: BTreeSet<Elem> = g.elements().skip(1).collect();
        assert_eq!(cayley_graph(&g, &all).unwrap(), {
            let mut k6 = Graph::complete(6);
            k6.labels = Some(g.elements().map(|x| g.name(x).to_string()).collect());
            k6
        });
        assert_eq!(cayley_graph(&g, &BTreeSet::new()).unwrap().edge_count(), 0);
        let with_e = BTreeSet::from([g.identity()]);
        assert!(matches!(cayley_graph(&g, &with_e), Err(Error::ConnectionSet(_))));
    }

    #[test]
    fn cayley_arcs_are_left_multiplication() {
        let g = Group::symmetric(3).unwrap();
        let s = BTreeSet::from([Elem::new(1)]);
        let gamma = cayley_graph(&g, &s).unwrap();
        for x in g.elements() {
            assert!(gamma.has_arc(x.index(), g.mul(Elem::new(1), x).index()));
        }
        let s = BTreeSet::from([Elem::new(3)]);
        let directed = cayley_graph(&g, &s).unwrap();
        assert_eq!(directed.is_directed(), g.inv(Elem::new(3)) != Elem::new(3));
    }

    #[test]
    fn grids() {
        let g = grid_graph(4, 6).unwrap();
        assert_eq!(g.n(), 24);
        assert_eq!(g.regular_degree(), Some(8));
        let one = grid_graph(1, 1).unwrap();
        assert_eq!((one.n(), one.edge_count()), (1, 0));
        let sq = grid_graph(2, 2).unwrap();
        assert_eq!(sq.edge_count(), 4);
        assert_eq!(sq.regular_degree(), Some(2));
        assert_eq!(diameter(&sq), Some(2));
        assert!(grid_graph(0, 3).is_err());
    }

    #[test]
    fn deza_of_family() {
        let (_, gamma) = family_graph(3);
        let p = deza_parameters(&gamma).unwrap();
        assert_eq!(p.tuple(), (24, 8, 4, 2));
        assert!(p.strictly);
        assert!(!p.strongly_regular);
        assert_eq!(p.diameter, Some(2));
    }

    #[test]
    fn deza_of_grid() {
        // adjacent pairs in a row share 4, in a column 2: not strongly regular
        let p = deza_parameters(&grid_graph(4, 6).unwrap()).unwrap();
        assert_eq!(p.tuple(), (24, 8, 4, 2));
        assert!(!p.strongly_regular);
        let square = deza_parameters(&grid_graph(4, 4).unwrap()).unwrap();
        assert!(square.strongly_regular);
        assert!(!square.strictly);
    }

    #[test]
    fn deza_of_six_cycle() {
        let p = deza_parameters(&Graph::cycle(6)).unwrap();
        assert_eq!(p.tuple(), (6, 2, 1, 0));
        assert!(!p.strictly);
        assert_eq!(p.diameter, Some(3));
    }

    #[test]
    fn deza_degenerate_and_failures() {
        let p = deza_parameters(&Graph::complete(5)).unwrap();
        assert!(p.degenerate && p.strongly_regular);
        assert_eq!((p.alpha, p.beta), (3, 3));
        assert!(matches!(deza_parameters(&Graph::path(3)), Err(NotDeza::NotRegular { .. })));
        // C_4 + C_6 has common-neighbor counts 0, 1 and 2
        let g = Graph::cycle(4).disjoint_union(&Graph::cycle(6));
        assert!(matches!(deza_parameters(&g), Err(NotDeza::TooManyValues { .. })));
        assert!(matches!(deza_parameters(&Graph::empty_directed(3)), Err(NotDeza::Directed)));
    }

    #[test]
    fn diameters() {
        let (_, gamma) = family_graph(5);
        assert_eq!(diameter(&gamma), Some(2));
        assert_eq!(diameter(&Graph::complete(4)), Some(1));
        assert_eq!(diameter(&Graph::empty(2)), None);
        assert_eq!(diameter(&Graph::empty(1)), Some(0));
    }

    #[test]
    fn ddg_family() {
        let (g, gamma) = family_graph(3);
        let part = canonical_ddg_partition(&g, 3).unwrap();
        assert_eq!(part.len(), 4);
        assert!(part.iter().all(|c| c.len() == 6));
        let p = ddg_check(&gamma, &part).unwrap();
        assert_eq!(p.tuple(), (24, 8, Some(4), Some(2), 4, 6));

        let g4 = Group::dihedral_klein(4).unwrap();
        let part4 = canonical_ddg_partition(&g4, 4).unwrap();
        assert_eq!(part4.iter().map(Vec::len).collect::<Vec<_>>(), vec![8; 4]);
        for k in 3..=9 {
            let g = Group::dihedral_klein(k).unwrap();
            assert_eq!(ddg_subgroup(&g, k).unwrap().order(), 2 * k);
        }
    }

    #[test]
    fn ddg_complete_singletons() {
        let part: Vec<Vec<usize>> = (0..4).map(|v| vec![v]).collect();
        let p = ddg_check(&Graph::complete(4), &part).unwrap();
        assert_eq!(p.tuple(), (4, 3, None, Some(2), 4, 1));
    }

    #[test]
    fn ddg_rejects_bad_partitions() {
        let (_, gamma) = family_graph(3);
        // blocks of six consecutive indices
        let part: Vec<Vec<usize>> = (0..4).map(|i| (6 * i..6 * i + 6).collect()).collect();
        assert!(matches!(ddg_check(&gamma, &part), Err(DdgFailure::Violation { .. })));
        let uneven = vec![(0..10).collect(), (10..24).collect()];
        assert!(matches!(ddg_check(&gamma, &uneven), Err(DdgFailure::UnequalClassSizes { .. })));
        let short = vec![(0..12).collect::<Vec<_>>()];
        assert!(matches!(ddg_check(&gamma, &short), Err(DdgFailure::NotAPartition { .. })));
    }

    #[test]
    fn cayley_local_profiles_agree() {
        let (_, gamma) = family_graph(4);
        let first = local_profile(&gamma, 0);
        assert!((0..gamma.n()).all(|u| local_profile(&gamma, u) == first));
    }
}
