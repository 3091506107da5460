//! Weisfeiler-Leman refinement.
//!
//! [`wl1`] is color refinement on vertices; [`wl2`] refines colorings of
//! vertex pairs to the coherent configuration of a graph, whose number of
//! classes is the WL-rank. Both are round-based: every round recolors all
//! items at once from `(old color, sorted signature)`, with new ids assigned
//! in sorted key order so results do not depend on hashing.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexColoring {
    pub colors: Vec<usize>,
    pub num_colors: usize,
}

impl VertexColoring {
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_colors];
        for &c in &self.colors {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Assigns contiguous ids to `keys` in sorted key order.
fn canonical_ids<K: Ord>(keys: &[K]) -> (Vec<usize>, usize) {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ids = vec![0; keys.len()];
    let mut next = 0;
    for (pos, &i) in order.iter().enumerate() {
        if pos > 0 && keys[order[pos - 1]] != keys[i] {
            next += 1;
        }
        ids[i] = next;
    }
    let count = if keys.is_empty() { 0 } else { next + 1 };
    (ids, count)
}

/// Stable vertex coloring by color refinement.
pub fn wl1(g: &Graph) -> VertexColoring {
    let n = g.n();
    let mut colors = vec![0usize; n];
    let mut num = usize::from(n > 0);
    let preds: Vec<Vec<usize>> = if g.is_directed() {
        let mut p = vec![Vec::new(); n];
        for (u, v) in g.edges() {
            p[v].push(u);
        }
        p
    } else {
        Vec::new()
    };
    loop {
        let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|u| {
                let mut out: Vec<usize> = g.neighbors(u).map(|v| colors[v]).collect();
                out.sort_unstable();
                let mut inc: Vec<usize> = preds.get(u).map_or(Vec::new(), |p| p.iter().map(|&v| colors[v]).collect());
                inc.sort_unstable();
                (colors[u], out, inc)
            })
            .collect();
        let (next, count) = canonical_ids(&keys);
        colors = next;
        if count == num {
            return VertexColoring { colors, num_colors: count };
        }
        num = count;
    }
}

/// Runs color refinement on the disjoint union and compares how many
/// vertices of each graph receive each color.
pub fn wl1_distinguishes(g1: &Graph, g2: &Graph) -> bool {
    if g1.n() != g2.n() {
        return true;
    }
    let union = g1.disjoint_union(g2);
    let coloring = wl1(&union);
    let mut hist = vec![(0usize, 0usize); coloring.num_colors];
    for (v, &c) in coloring.colors.iter().enumerate() {
        if v < g1.n() {
            hist[c].0 += 1;
        } else {
            hist[c].1 += 1;
        }
    }
    hist.iter().any(|(a, b)| a != b)
}

/// A coloring of `V x V`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairColoring {
    pub n: usize,
    pub colors: Vec<u32>,
    pub num_colors: usize,
}

impl PairColoring {
    #[inline]
    pub fn color(&self, u: usize, v: usize) -> u32 {
        self.colors[u * self.n + v]
    }

    fn from_keys<K: Ord>(n: usize, keys: &[K]) -> PairColoring {
        let (ids, num_colors) = canonical_ids(keys);
        PairColoring { n, colors: ids.into_iter().map(|c| c as u32).collect(), num_colors }
    }

    /// Diagonal, arc, reverse arc, both, neither; unused kinds drop out.
    pub fn initial(g: &Graph) -> PairColoring {
        let n = g.n();
        let keys: Vec<u8> = (0..n * n)
            .map(|p| {
                let (u, v) = (p / n, p % n);
                if u == v {
                    0
                } else {
                    1 + 2 * u8::from(g.has_arc(u, v)) + u8::from(g.has_arc(v, u))
                }
            })
            .collect();
        Self::from_keys(n, &keys)
    }

    /// Run-length encoding of the row-major color matrix.
    pub fn run_lengths(&self) -> Vec<[u32; 2]> {
        let mut out: Vec<[u32; 2]> = Vec::new();
        for &c in &self.colors {
            match out.last_mut() {
                Some(last) if last[0] == c => last[1] += 1,
                _ => out.push([c, 1]),
            }
        }
        out
    }
}

/// One 2-WL round: `(u, v)` gets `(c(u, v), sorted {(c(u, w), c(w, v))})`.
pub fn refine_round(c: &PairColoring) -> PairColoring {
    let n = c.n;
    let mut transposed = vec![0u32; n * n];
    for u in 0..n {
        for v in 0..n {
            transposed[v * n + u] = c.colors[u * n + v];
        }
    }
    let mut signatures = vec![0u64; n * n * n];
    for u in 0..n {
        let row = &c.colors[u * n..(u + 1) * n];
        for v in 0..n {
            let col = &transposed[v * n..(v + 1) * n];
            let sig = &mut signatures[(u * n + v) * n..(u * n + v + 1) * n];
            for w in 0..n {
                sig[w] = (u64::from(row[w]) << 32) | u64::from(col[w]);
            }
            sig.sort_unstable();
        }
    }
    let keys: Vec<(u32, &[u64])> = (0..n * n).map(|p| (c.colors[p], &signatures[p * n..(p + 1) * n])).collect();
    PairColoring::from_keys(n, &keys)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherentConfiguration {
    pub coloring: PairColoring,
    pub rank: usize,
    pub rounds: usize,
}

impl CoherentConfiguration {
    pub fn to_json(&self, compact: bool) -> Result<String> {
        let value = if compact {
            serde_json::json!({
                "n": self.coloring.n,
                "rank": self.rank,
                "encoding": "run-length",
                "colors": self.coloring.run_lengths(),
            })
        } else {
            serde_json::json!({
                "n": self.coloring.n,
                "rank": self.rank,
                "encoding": "row-major",
                "colors": self.coloring.colors,
            })
        };
        Ok(serde_json::to_string(&value)? + "\n")
    }
}

/// Stabilizes the initial pair coloring of `g` under 2-WL refinement and
/// re-checks coherence before returning.
pub fn wl2(g: &Graph) -> Result<CoherentConfiguration> {
    let mut coloring = PairColoring::initial(g);
    let mut rounds = 0;
    loop {
        let next = refine_round(&coloring);
        rounds += 1;
        debug_assert!(next.num_colors >= coloring.num_colors);
        let done = next.num_colors == coloring.num_colors;
        coloring = next;
        if done {
            break;
        }
    }
    verify_coherence(&coloring).map_err(|w| Error::Internal(format!("2-WL output is not coherent: {w:?}")))?;
    Ok(CoherentConfiguration { rank: coloring.num_colors, coloring, rounds })
}

pub fn wl_rank(g: &Graph) -> Result<usize> {
    Ok(wl2(g)?.rank)
}

/// Whether the arc set of `g` is a union of color classes.
pub fn arcs_are_union_of_classes(g: &Graph, c: &PairColoring) -> bool {
    let mut kind: Vec<Option<bool>> = vec![None; c.num_colors];
    for u in 0..g.n() {
        for v in 0..g.n() {
            let slot = &mut kind[c.color(u, v) as usize];
            let arc = g.has_arc(u, v);
            match *slot {
                None => *slot = Some(arc),
                Some(x) if x != arc => return false,
                _ => {}
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CoherenceWitness {
    /// Color ids are not exactly `0..num_colors`.
    NonContiguous,
    /// A color occurs both on and off the diagonal.
    DiagonalMixed { color: u32 },
    /// Transposes of pairs of `color` fall into different colors.
    NotTransposeClosed { color: u32 },
    /// Two pairs of `color` see a different number of `w` with
    /// `c(u, w) = i` and `c(w, v) = j`.
    IntersectionNumber {
        color: u32,
        i: u32,
        j: u32,
        first: (usize, usize),
        second: (usize, usize),
        counts: (usize, usize),
    },
}

/// A pair `(u, v)` and its intersection counts `(c(u, w), c(w, v)) -> #w`.
type Reference = ((usize, usize), BTreeMap<(u32, u32), usize>);

/// Checks diagonal separation, transpose closure and constancy of
/// intersection numbers.
pub fn verify_coherence(c: &PairColoring) -> Result<(), CoherenceWitness> {
    let n = c.n;
    let mut seen = vec![false; c.num_colors];
    for &x in &c.colors {
        match seen.get_mut(x as usize) {
            Some(s) => *s = true,
            None => return Err(CoherenceWitness::NonContiguous),
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(CoherenceWitness::NonContiguous);
    }

    let mut on_diag: Vec<Option<bool>> = vec![None; c.num_colors];
    let mut transpose: Vec<Option<u32>> = vec![None; c.num_colors];
    for u in 0..n {
        for v in 0..n {
            let x = c.color(u, v);
            let d = &mut on_diag[x as usize];
            match *d {
                None => *d = Some(u == v),
                Some(flag) if flag != (u == v) => return Err(CoherenceWitness::DiagonalMixed { color: x }),
                _ => {}
            }
            let t = c.color(v, u);
            let tr = &mut transpose[x as usize];
            match *tr {
                None => *tr = Some(t),
                Some(y) if y != t => return Err(CoherenceWitness::NotTransposeClosed { color: x }),
                _ => {}
            }
        }
    }

    // first pair seen in each class
    let mut reference: Vec<Option<Reference>> = vec![None; c.num_colors];
    let mut counts: HashMap<(u32, u32), usize> = HashMap::new();
    for u in 0..n {
        for v in 0..n {
            counts.clear();
            for w in 0..n {
                *counts.entry((c.color(u, w), c.color(w, v))).or_insert(0) += 1;
            }
            let x = c.color(u, v) as usize;
            match &reference[x] {
                None => reference[x] = Some(((u, v), counts.iter().map(|(&k, &v)| (k, v)).collect())),
                Some((first, table)) => {
                    for (&(i, j), &cnt) in &counts {
                        let expected = table.get(&(i, j)).copied().unwrap_or(0);
                        if expected != cnt {
                            return Err(CoherenceWitness::IntersectionNumber {
                                color: x as u32,
                                i,
                                j,
                                first: *first,
                                second: (u, v),
                                counts: (expected, cnt),
                            });
                        }
                    }
                    // both sides sum to n, so matching on our support is enough
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cayley_graph, grid_graph};
    use crate::group::Group;
    use crate::groupring::connection_set;

    fn family_graph(k: usize) -> Graph {
        let g = Group::dihedral_klein(k).unwrap();
        cayley_graph(&g, &connection_set(&g, k).unwrap()).unwrap()
    }

    #[test]
    fn wl1_regular_is_one_class() {
        assert_eq!(wl1(&Graph::cycle(7)).num_colors, 1);
        assert_eq!(wl1(&family_graph(3)).num_colors, 1);
        assert_eq!(wl1(&Graph::path(3)).num_colors, 2);
    }

    #[test]
    fn wl1_distinguishing() {
        assert!(!wl1_distinguishes(&family_graph(3), &grid_graph(4, 6).unwrap()));
        assert!(wl1_distinguishes(&Graph::complete(4), &Graph::cycle(4)));
        let p = Graph::path(5);
        assert!(!wl1_distinguishes(&p, &p));
        // C_6 and two triangles: both 2-regular, 1-WL cannot tell
        let two_triangles = Graph::cycle(3).disjoint_union(&Graph::cycle(3));
        assert!(!wl1_distinguishes(&Graph::cycle(6), &two_triangles));
    }

    #[test]
    fn wl2_ranks() {
        assert_eq!(wl_rank(&Graph::complete(5)).unwrap(), 2);
        assert_eq!(wl_rank(&Graph::empty(5)).unwrap(), 2);
        assert_eq!(wl_rank(&Graph::empty(1)).unwrap(), 1);
        assert_eq!(wl_rank(&family_graph(3)).unwrap(), 24);
        assert_eq!(wl_rank(&grid_graph(4, 6).unwrap()).unwrap(), 4);
        for n in 3..=12 {
            assert_eq!(wl_rank(&Graph::cycle(n)).unwrap(), n / 2 + 1, "C_{n}");
        }
    }

    #[test]
    fn wl2_directed() {
        let mut g = Graph::empty_directed(5);
        for u in 0..5 {
            g.add_edge(u, (u + 1) % 5).unwrap();
        }
        // directed 5-cycle: one class per difference
        assert_eq!(wl_rank(&g).unwrap(), 5);
    }

    #[test]
    fn coherence_checks() {
        let g = family_graph(3);
        let cc = wl2(&g).unwrap();
        assert_eq!(verify_coherence(&cc.coloring), Ok(()));
        assert!(arcs_are_union_of_classes(&g, &cc.coloring));

        let initial = PairColoring::initial(&g);
        assert_eq!(initial.num_colors, 3);
        assert!(matches!(verify_coherence(&initial), Err(CoherenceWitness::IntersectionNumber { .. })));
        let trivial = PairColoring::initial(&Graph::complete(6));
        assert_eq!(verify_coherence(&trivial), Ok(()));
    }

    #[test]
    fn coherence_witness_kinds() {
        let c = PairColoring { n: 2, colors: vec![0, 1, 0, 0], num_colors: 2 };
        assert!(matches!(verify_coherence(&c), Err(CoherenceWitness::DiagonalMixed { .. })));
        // a single arc splits the diagonal in the coherent closure
        let c = PairColoring { n: 2, colors: vec![0, 1, 2, 0], num_colors: 3 };
        assert!(matches!(verify_coherence(&c), Err(CoherenceWitness::IntersectionNumber { .. })));
        let c = PairColoring { n: 2, colors: vec![0, 2, 2, 0], num_colors: 3 };
        assert_eq!(verify_coherence(&c), Err(CoherenceWitness::NonContiguous));
        let c = PairColoring { n: 3, colors: vec![0, 1, 1, 1, 0, 2, 2, 1, 0], num_colors: 3 };
        assert!(matches!(verify_coherence(&c), Err(CoherenceWitness::NotTransposeClosed { .. })));
    }

    #[test]
    fn json_encodings() {
        let cc = wl2(&Graph::complete(3)).unwrap();
        let full: serde_json::Value = serde_json::from_str(&cc.to_json(false).unwrap()).unwrap();
        assert_eq!(full["colors"].as_array().unwrap().len(), 9);
        let rle: serde_json::Value = serde_json::from_str(&cc.to_json(true).unwrap()).unwrap();
        assert_eq!(rle["rank"], 2);
        let total: u64 = rle["colors"].as_array().unwrap().iter().map(|r| r[1].as_u64().unwrap()).sum();
        assert_eq!(total, 9);
    }
}
