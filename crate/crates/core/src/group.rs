//! Finite groups given by explicit multiplication tables.
//!
//! Elements are dense indices into the table, so a product is a single
//! lookup. The family `D_{2k} x C_2 x C_2` is built from the normal form
//! `a^i b^j c^l d^m` with `0 <= i < k` and `j, l, m` in `{0, 1}`; elements are
//! ordered lexicographically on `(i, j, l, m)` so the identity is index 0.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Index of an element in its parent group's table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub fn new(index: usize) -> Self {
        Elem(u32::try_from(index).expect("group order exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Parameters of a group built by [`Group::dihedral_klein`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DihedralKlein {
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct Group {
    order: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    identity: Elem,
    names: Vec<String>,
    family: Option<DihedralKlein>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mult == other.mult
    }
}

impl Eq for Group {}

impl Group {
    /// Builds a group from a row-major multiplication table, validating the
    /// group axioms exhaustively.
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Group> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidParameter("group must be nonempty".into()));
        }
        let mut mult = Vec::with_capacity(order * order);
        for row in &table {
            if row.len() != order {
                return Err(Error::Structure("multiplication table is not square".into()));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::Structure(format!("table entry {v} out of range")));
                }
                mult.push(v as u32);
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mult[e * order + x] as usize == x && mult[x * order + e] as usize == x))
            .ok_or_else(|| Error::Structure("no two-sided identity".into()))?;
        let mut inv = vec![0u32; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| mult[x * order + y] as usize == identity && mult[y * order + x] as usize == identity)
                .ok_or_else(|| Error::Structure(format!("element {x} has no inverse")))?;
            inv[x] = y as u32;
        }
        let names = match names {
            Some(n) if n.len() == order => n,
            Some(_) => return Err(Error::Structure("name list has wrong length".into())),
            None => (0..order).map(|i| if i == identity { "e".to_string() } else { format!("g{i}") }).collect(),
        };
        let g = Group { order, mult, inv, identity: Elem::new(identity), names, family: None };
        if let Some((x, y, z)) = g.associativity_violation() {
            return Err(Error::Structure(format!("not associative at ({x}, {y}, {z})")));
        }
        Ok(g)
    }

    /// `D_{2k} x C_2 x C_2 = (<a> : <b>) x <c> x <d>` with `|a| = k`,
    /// `|b| = |c| = |d| = 2` and `bab = a^{-1}`.
    pub fn dihedral_klein(k: usize) -> Result<Group> {
        if k < 3 {
            return Err(Error::InvalidParameter(format!("k must be at least 3, got {k}")));
        }
        let order = 8 * k;
        let pack = |i: usize, j: usize, l: usize, m: usize| ((i * 2 + j) * 2 + l) * 2 + m;
        let unpack = |x: usize| (x / 8, (x / 4) % 2, (x / 2) % 2, x % 2);
        let mut mult = vec![0u32; order * order];
        let mut inv = vec![0u32; order];
        let mut names = Vec::with_capacity(order);
        for x in 0..order {
            let (i1, j1, l1, m1) = unpack(x);
            for y in 0..order {
                let (i2, j2, l2, m2) = unpack(y);
                let i = if j1 == 0 { (i1 + i2) % k } else { (i1 + k - i2) % k };
                mult[x * order + y] = pack(i, j1 ^ j2, l1 ^ l2, m1 ^ m2) as u32;
            }
            // a^i b is an involution; a^i alone inverts to a^{-i}
            let ii = if j1 == 0 { (k - i1) % k } else { i1 };
            inv[x] = pack(ii, j1, l1, m1) as u32;
            names.push(normal_form_name(i1, j1, l1, m1));
        }
        Ok(Group { order, mult, inv, identity: Elem(0), names, family: Some(DihedralKlein { k }) })
    }

    pub fn cyclic(n: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        let names = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        Group::from_table(table, Some(names))
    }

    /// Dihedral group of order `2m`, elements `r^i s^j`.
    pub fn dihedral(m: usize) -> Result<Group> {
        if m == 0 {
            return Err(Error::InvalidParameter("dihedral group needs m >= 1".into()));
        }
        let order = 2 * m;
        let table = (0..order)
            .map(|x| {
                let (i1, j1) = (x / 2, x % 2);
                (0..order)
                    .map(|y| {
                        let (i2, j2) = (y / 2, y % 2);
                        let i = if j1 == 0 { (i1 + i2) % m } else { (i1 + m - i2) % m };
                        i * 2 + (j1 ^ j2)
                    })
                    .collect()
            })
            .collect();
        let names = (0..order)
            .map(|x| {
                let (i, j) = (x / 2, x % 2);
                let mut s = match i {
                    0 => String::new(),
                    1 => "r".to_string(),
                    _ => format!("r^{i}"),
                };
                if j == 1 {
                    s.push('s');
                }
                if s.is_empty() {
                    s.push('e');
                }
                s
            })
            .collect();
        Group::from_table(table, Some(names))
    }

    /// Symmetric group on `m` points, elements in lexicographic order of
    /// their one-line notation; product is composition `(pq)(i) = p(q(i))`.
    pub fn symmetric(m: usize) -> Result<Group> {
        if m == 0 || m > 5 {
            return Err(Error::InvalidParameter(format!("symmetric group degree {m} unsupported")));
        }
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut cur: Vec<usize> = (0..m).collect();
        loop {
            perms.push(cur.clone());
            if !next_permutation(&mut cur) {
                break;
            }
        }
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let pq: Vec<usize> = (0..m).map(|i| p[q[i]]).collect();
                        index(&pq)
                    })
                    .collect()
            })
            .collect();
        let names = perms
            .iter()
            .enumerate()
            .map(|(i, p)| if i == 0 { "e".to_string() } else { p.iter().map(|v| v.to_string()).collect() })
            .collect();
        Group::from_table(table, Some(names))
    }

    pub fn direct_product(g: &Group, h: &Group) -> Result<Group> {
        let (n, m) = (g.order, h.order);
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| {
                        let p = g.mul_idx(x / m, y / m);
                        let q = h.mul_idx(x % m, y % m);
                        p * m + q
                    })
                    .collect()
            })
            .collect();
        let names = (0..n * m)
            .map(|x| {
                let (a, b) = (x / m, x % m);
                if a == g.identity.index() && b == h.identity.index() {
                    "e".to_string()
                } else {
                    format!("({},{})", g.names[a], h.names[b])
                }
            })
            .collect();
        Group::from_table(table, Some(names))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        Elem(self.mult[x.index() * self.order + y.index()])
    }

    #[inline]
    pub(crate) fn mul_idx(&self, x: usize, y: usize) -> usize {
        self.mult[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        Elem(self.inv[x.index()])
    }

    pub fn name(&self, x: Elem) -> &str {
        &self.names[x.index()]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(Elem::new)
    }

    pub fn family(&self) -> Option<DihedralKlein> {
        self.family
    }

    /// Looks an element up by display name.
    pub fn by_name(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name).map(Elem::new)
    }

    /// The element `a^i b^j c^l d^m` of a dihedral-Klein group; `i` is taken
    /// modulo `k` so negative exponents work.
    pub fn word(&self, i: i64, j: u8, l: u8, m: u8) -> Result<Elem> {
        let fam = self.family.ok_or_else(|| Error::InvalidInput("group was not built by dihedral_klein".into()))?;
        if j > 1 || l > 1 || m > 1 {
            return Err(Error::InvalidParameter("exponents of b, c, d must be 0 or 1".into()));
        }
        let i = i.rem_euclid(fam.k as i64) as usize;
        Ok(Elem::new(((i * 2 + j as usize) * 2 + l as usize) * 2 + m as usize))
    }

    /// The generators `a, b, c, d` of a dihedral-Klein group.
    pub fn generators(&self) -> Option<[Elem; 4]> {
        self.family?;
        Some([
            self.word(1, 0, 0, 0).ok()?,
            self.word(0, 1, 0, 0).ok()?,
            self.word(0, 0, 1, 0).ok()?,
            self.word(0, 0, 0, 1).ok()?,
        ])
    }

    /// Exhaustive associativity check; returns the first failing triple.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul_idx(x, y);
                for z in 0..n {
                    if self.mul_idx(xy, z) != self.mul_idx(x, self.mul_idx(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// `X g` for a set `X`.
    pub fn right_translate(&self, x: &BTreeSet<Elem>, g: Elem) -> BTreeSet<Elem> {
        x.iter().map(|&v| self.mul(v, g)).collect()
    }

    /// `g X` for a set `X`.
    pub fn left_translate(&self, g: Elem, x: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        x.iter().map(|&v| self.mul(g, v)).collect()
    }

    pub fn set_inverse(&self, x: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        x.iter().map(|&v| self.inv(v)).collect()
    }

    pub fn set_product(&self, x: &BTreeSet<Elem>, y: &BTreeSet<Elem>) -> BTreeSet<Elem> {
        let mut out = BTreeSet::new();
        for &u in x {
            for &v in y {
                out.insert(self.mul(u, v));
            }
        }
        out
    }

    pub fn format_set<'a>(&self, x: impl IntoIterator<Item = &'a Elem>) -> String {
        let parts: Vec<&str> = x.into_iter().map(|&e| self.name(e)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, self.elements().collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(self.order, vec![self.identity])
    }
}

fn normal_form_name(i: usize, j: usize, l: usize, m: usize) -> String {
    let mut s = match i {
        0 => String::new(),
        1 => "a".to_string(),
        _ => format!("a^{i}"),
    };
    for (flag, ch) in [(j, 'b'), (l, 'c'), (m, 'd')] {
        if flag == 1 {
            s.push(ch);
        }
    }
    if s.is_empty() {
        s.push('e');
    }
    s
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A subgroup as a sorted element list plus a membership bitmap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<Elem>,
    members: FixedBitSet,
}

impl Subgroup {
    fn from_sorted(group_order: usize, elements: Vec<Elem>) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(group_order);
        for e in &elements {
            members.insert(e.index());
        }
        Subgroup { elements, members }
    }

    /// Wraps a set after checking it is a subgroup of `g`.
    pub fn from_set(g: &Group, set: &BTreeSet<Elem>) -> Result<Subgroup> {
        let h = Subgroup::from_sorted(g.order(), set.iter().copied().collect());
        if !h.contains(g.identity()) {
            return Err(Error::Structure("set does not contain the identity".into()));
        }
        for &x in &h.elements {
            if !h.contains(g.inv(x)) {
                return Err(Error::Structure(format!("not closed under inverse at {}", g.name(x))));
            }
            for &y in &h.elements {
                if !h.contains(g.mul(x, y)) {
                    return Err(Error::Structure(format!("not closed under product {} * {}", g.name(x), g.name(y))));
                }
            }
        }
        Ok(h)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.members.contains(x.index())
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn to_set(&self) -> BTreeSet<Elem> {
        self.elements.iter().copied().collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Right coset `H g`.
    pub fn right_coset(&self, g: &Group, x: Elem) -> BTreeSet<Elem> {
        self.elements.iter().map(|&h| g.mul(h, x)).collect()
    }

    /// Right cosets ordered by their minimal element.
    pub fn right_cosets(&self, g: &Group) -> Vec<Vec<Elem>> {
        let mut seen = FixedBitSet::with_capacity(g.order());
        let mut out = Vec::new();
        for x in g.elements() {
            if seen.contains(x.index()) {
                continue;
            }
            let coset: Vec<Elem> = self.right_coset(g, x).into_iter().collect();
            for e in &coset {
                seen.insert(e.index());
            }
            out.push(coset);
        }
        out
    }
}

/// Smallest subgroup containing `gens`.
pub fn subgroup_generated(g: &Group, gens: &[Elem]) -> Subgroup {
    let mut members = FixedBitSet::with_capacity(g.order());
    let mut stack = vec![g.identity()];
    members.insert(g.identity().index());
    while let Some(x) = stack.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !members.contains(y.index()) {
                members.insert(y.index());
                stack.push(y);
            }
        }
    }
    let elements = members.ones().map(Elem::new).collect();
    Subgroup { elements, members }
}

/// Whether `h` is normalized by every element of `within`.
pub fn is_normal_in(g: &Group, h: &Subgroup, within: &Subgroup) -> bool {
    within.elements().iter().all(|&x| {
        let xi = g.inv(x);
        h.elements().iter().all(|&y| h.contains(g.mul(g.mul(x, y), xi)))
    })
}

/// `gH = Hg` for all `g` in the group.
pub fn is_normal(g: &Group, h: &Subgroup) -> bool {
    is_normal_in(g, h, &g.whole())
}

/// A section `U/L` with its quotient group and projection.
#[derive(Clone, Debug)]
pub struct Section {
    upper: Subgroup,
    lower: Subgroup,
    quotient: Group,
    projection: Vec<Option<Elem>>,
    representatives: Vec<Elem>,
}

impl Section {
    pub fn upper(&self) -> &Subgroup {
        &self.upper
    }

    pub fn lower(&self) -> &Subgroup {
        &self.lower
    }

    pub fn quotient(&self) -> &Group {
        &self.quotient
    }

    /// Image of `x` under `U -> U/L`; `None` outside `U`.
    pub fn project(&self, x: Elem) -> Option<Elem> {
        self.projection[x.index()]
    }

    /// Minimal representative of each coset, indexed by quotient element.
    pub fn representatives(&self) -> &[Elem] {
        &self.representatives
    }
}

/// Forms `U/L`; coset representatives are the minimal element of each coset.
pub fn make_section(g: &Group, upper: &Subgroup, lower: &Subgroup) -> Result<Section> {
    if !lower.is_subgroup_of(upper) {
        return Err(Error::Structure("lower subgroup is not contained in the upper one".into()));
    }
    if !is_normal_in(g, lower, upper) {
        return Err(Error::Structure("lower subgroup is not normal in the upper one".into()));
    }
    let mut projection: Vec<Option<Elem>> = vec![None; g.order()];
    let mut representatives = Vec::new();
    for &x in upper.elements() {
        if projection[x.index()].is_some() {
            continue;
        }
        let id = Elem::new(representatives.len());
        representatives.push(x);
        for &l in lower.elements() {
            projection[g.mul(l, x).index()] = Some(id);
        }
    }
    let q = representatives.len();
    let table: Vec<Vec<usize>> = representatives
        .iter()
        .map(|&x| {
            representatives.iter().map(|&y| projection[g.mul(x, y).index()].expect("upper is closed").index()).collect()
        })
        .collect();
    let names = representatives
        .iter()
        .enumerate()
        .map(|(i, &r)| if i == 0 { "e".to_string() } else { format!("[{}]", g.name(r)) })
        .collect();
    debug_assert_eq!(q * lower.order(), upper.order());
    let quotient = Group::from_table(table, Some(names))?;
    Ok(Section { upper: upper.clone(), lower: lower.clone(), quotient, projection, representatives })
}
