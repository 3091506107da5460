//! Schur rings over a finite group, represented by their partition into
//! basic sets.
//!
//! # Closure
//!
//! [`wl_closure`] computes the smallest S-ring in which given sets are unions
//! of basic sets. It starts from the common refinement of `{e}`, each marked
//! set and its inverse, then repeatedly refines:
//!
//! * by `X^{-1}` for every class `X`;
//! * by every coefficient level set of `X * Y` for every ordered pair of
//!   classes.
//!
//! Every split is forced: in any S-ring containing the marked sets, each
//! current class is a union of basic sets, inverses of such unions are again
//! unions, and the coefficient level sets of an element of the ring are
//! unions of basic sets (Schur-Wielandt). So the fixed point is refined by
//! every admissible S-ring. Conversely, at the fixed point the partition
//! contains `{e}`, is inverse-closed, and every product of class sums is
//! constant on classes, so the span of class sums is a ring. Hence the fixed
//! point is the minimum.
//!
//! Only pairs involving a class that changed need to be revisited: a product
//! constant on a class stays constant on its pieces. A final full pass over
//! all pairs confirms the fixed point.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{is_normal, make_section, subgroup_generated, Elem, Group, Section, Subgroup};
use crate::groupring::{connection_set, GroupRingElement};

/// A partition of a group into classes, candidate basic sets of an S-ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SRingPartition {
    class_of: Vec<usize>,
    classes: Vec<Vec<Elem>>,
}

impl SRingPartition {
    /// Validates that `classes` partition the group (nonempty, disjoint,
    /// covering) and renumbers them canonically.
    pub fn from_classes(g: &Group, classes: Vec<Vec<Elem>>) -> Result<SRingPartition> {
        let n = g.order();
        let mut class_of = vec![usize::MAX; n];
        for (id, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::Structure("empty class".into()));
            }
            for &x in class {
                if x.index() >= n {
                    return Err(Error::Structure(format!("element {x} outside the group")));
                }
                if class_of[x.index()] != usize::MAX {
                    return Err(Error::Structure(format!("{} lies in two classes", g.name(x))));
                }
                class_of[x.index()] = id;
            }
        }
        if let Some(x) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::Structure(format!("{} is not covered", g.name(Elem::new(x)))));
        }
        Ok(Self::canonical(n, classes))
    }

    pub fn singletons(g: &Group) -> SRingPartition {
        Self::canonical(g.order(), g.elements().map(|x| vec![x]).collect())
    }

    /// Classes sorted by (size, minimal element); members sorted.
    fn canonical(n: usize, mut classes: Vec<Vec<Elem>>) -> SRingPartition {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_by_key(|c| (c.len(), c[0]));
        let mut class_of = vec![0; n];
        for (id, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x.index()] = id;
            }
        }
        SRingPartition { class_of, classes }
    }

    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<Elem>] {
        &self.classes
    }

    pub fn class_of(&self, x: Elem) -> usize {
        self.class_of[x.index()]
    }

    pub fn class_containing(&self, x: Elem) -> &[Elem] {
        &self.classes[self.class_of(x)]
    }

    /// Whether `x` is a union of classes.
    pub fn is_union_of_classes(&self, x: &BTreeSet<Elem>) -> bool {
        x.iter().all(|&e| self.class_containing(e).iter().all(|y| x.contains(y)))
    }

    pub fn is_class(&self, x: &BTreeSet<Elem>) -> bool {
        match x.iter().next() {
            Some(&e) => {
                let c = self.class_containing(e);
                c.len() == x.len() && c.iter().all(|y| x.contains(y))
            }
            None => false,
        }
    }

    /// Every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &SRingPartition) -> bool {
        self.classes.iter().all(|c| {
            let target = coarser.class_of(c[0]);
            c.iter().all(|&x| coarser.class_of(x) == target)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomViolation {
    /// `{e}` is not a class.
    IdentityNotSingleton,
    /// The inverse of class `class` is not a class.
    NotInverseClosed { class: usize },
    /// The product of classes `left * right` takes two values on `class`.
    ProductNotConstant { left: usize, right: usize, class: usize },
}

/// Checks the three S-ring axioms for `p`; the product axiom via the
/// coefficient level sets of each pairwise product of class sums.
pub fn is_sring(g: &Group, p: &SRingPartition) -> Result<(), AxiomViolation> {
    if p.class_containing(g.identity()).len() != 1 {
        return Err(AxiomViolation::IdentityNotSingleton);
    }
    for (id, class) in p.classes().iter().enumerate() {
        let inv: BTreeSet<Elem> = class.iter().map(|&x| g.inv(x)).collect();
        if !p.is_class(&inv) {
            return Err(AxiomViolation::NotInverseClosed { class: id });
        }
    }
    for (i, x) in p.classes().iter().enumerate() {
        let xb = GroupRingElement::simple_quantity(g, x.iter().copied());
        for (j, y) in p.classes().iter().enumerate() {
            let yb = GroupRingElement::simple_quantity(g, y.iter().copied());
            let prod = xb.multiply(&yb).expect("class sums are small");
            for fiber in prod.coefficient_fibers().values() {
                if !p.is_union_of_classes(fiber) {
                    let bad = fiber
                        .iter()
                        .map(|&e| p.class_of(e))
                        .find(|&c| p.classes()[c].iter().any(|y| !fiber.contains(y)))
                        .expect("some class straddles the fiber");
                    return Err(AxiomViolation::ProductNotConstant { left: i, right: j, class: bad });
                }
            }
        }
    }
    Ok(())
}

struct Refiner<'g> {
    g: &'g Group,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    counts: Vec<u32>,
}

impl<'g> Refiner<'g> {
    fn new(g: &'g Group) -> Self {
        let n = g.order();
        Refiner {
            g,
            class_of: vec![0; n],
            classes: vec![(0..n).collect()],
            queue: VecDeque::new(),
            queued: vec![false],
            counts: vec![0; n],
        }
    }

    fn enqueue(&mut self, id: usize) {
        if !self.queued[id] {
            self.queued[id] = true;
            self.queue.push_back(id);
        }
    }

    /// Splits every class by `key`; changed classes and their new pieces are
    /// queued. Returns whether anything split.
    fn split_by<K: Ord + Copy>(&mut self, key: impl Fn(usize) -> K) -> bool {
        let mut changed = false;
        let count = self.classes.len();
        for id in 0..count {
            let class = &self.classes[id];
            let first = key(class[0]);
            if class.iter().all(|&x| key(x) == first) {
                continue;
            }
            let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
            for &x in class {
                groups.entry(key(x)).or_default().push(x);
            }
            let mut pieces = groups.into_values();
            self.classes[id] = pieces.next().expect("nonempty");
            self.enqueue(id);
            for piece in pieces {
                let nid = self.classes.len();
                for &x in &piece {
                    self.class_of[x] = nid;
                }
                self.classes.push(piece);
                self.queued.push(false);
                self.enqueue(nid);
            }
            changed = true;
        }
        changed
    }

    fn split_by_set(&mut self, members: &FixedBitSet) -> bool {
        self.split_by(|x| members.contains(x))
    }

    fn refine_by_inverse(&mut self, id: usize) -> bool {
        let mut inv = FixedBitSet::with_capacity(self.g.order());
        for &x in &self.classes[id] {
            inv.insert(self.g.inv(Elem::new(x)).index());
        }
        self.split_by_set(&inv)
    }

    /// Refines by the coefficient level sets of `X * Y`.
    fn refine_by_product(&mut self, x: usize, y: usize) -> bool {
        self.counts.iter_mut().for_each(|c| *c = 0);
        for &u in &self.classes[x] {
            for &v in &self.classes[y] {
                self.counts[self.g.mul_idx(u, v)] += 1;
            }
        }
        let counts = std::mem::take(&mut self.counts);
        let changed = self.split_by(|z| counts[z]);
        self.counts = counts;
        changed
    }

    fn run(&mut self) {
        loop {
            while let Some(x) = self.queue.pop_front() {
                self.queued[x] = false;
                self.refine_by_inverse(x);
                let mut y = 0;
                while y < self.classes.len() {
                    self.refine_by_product(x, y);
                    self.refine_by_product(y, x);
                    y += 1;
                }
            }
            if !self.full_pass() {
                break;
            }
        }
    }

    fn full_pass(&mut self) -> bool {
        let mut changed = false;
        let mut x = 0;
        while x < self.classes.len() {
            changed |= self.refine_by_inverse(x);
            let mut y = 0;
            while y < self.classes.len() {
                changed |= self.refine_by_product(x, y);
                y += 1;
            }
            x += 1;
        }
        changed
    }

    fn finish(self) -> SRingPartition {
        let classes = self.classes.into_iter().map(|c| c.into_iter().map(Elem::new).collect()).collect();
        SRingPartition::canonical(self.g.order(), classes)
    }
}

/// Smallest S-ring over `g` in which every marked set is a union of basic
/// sets.
pub fn wl_closure(g: &Group, marked: &[BTreeSet<Elem>]) -> SRingPartition {
    let mut r = Refiner::new(g);
    let n = g.order();
    let e = g.identity().index();
    r.split_by(|x| x == e);
    for set in marked {
        let mut m = FixedBitSet::with_capacity(n);
        let mut mi = FixedBitSet::with_capacity(n);
        for &x in set {
            m.insert(x.index());
            mi.insert(g.inv(x).index());
        }
        r.split_by_set(&m);
        r.split_by_set(&mi);
    }
    for id in 0..r.classes.len() {
        r.enqueue(id);
    }
    r.run();
    r.finish()
}

/// `rad(X) = {g : Xg = gX = X}`.
pub fn radical(g: &Group, x: &BTreeSet<Elem>) -> Subgroup {
    let stab: BTreeSet<Elem> =
        g.elements().filter(|&h| x.iter().all(|&v| x.contains(&g.mul(v, h)) && x.contains(&g.mul(h, v)))).collect();
    Subgroup::from_set(g, &stab).expect("two-sided stabilizers form a subgroup")
}

/// Subgroups of `g` that are unions of basic sets of `p`, ordered by
/// (order, elements).
pub fn a_subgroups(g: &Group, p: &SRingPartition) -> Vec<Subgroup> {
    // every A-subgroup is generated by the basic sets it contains, so joins
    // of the subgroups <X> for basic X give all of them
    let atoms: Vec<Vec<Elem>> = p.classes().to_vec();
    let mut found: BTreeMap<Vec<Elem>, Subgroup> = BTreeMap::new();
    let trivial = g.trivial_subgroup();
    found.insert(trivial.elements().to_vec(), trivial.clone());
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for atom in &atoms {
            if atom.iter().all(|&x| h.contains(x)) {
                continue;
            }
            let mut gens: Vec<Elem> = h.elements().to_vec();
            gens.extend(atom.iter().copied());
            let joined = subgroup_generated(g, &gens);
            if !found.contains_key(joined.elements()) {
                found.insert(joined.elements().to_vec(), joined.clone());
                frontier.push(joined);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_values().collect();
    out.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
    debug_assert!(out.iter().all(|h| p.is_union_of_classes(&h.to_set())));
    out
}

/// The S-ring induced on `U/L` by the basic sets inside `U`.
pub fn section_sring(p: &SRingPartition, s: &Section) -> Result<SRingPartition> {
    if !p.is_union_of_classes(&s.upper().to_set()) {
        return Err(Error::Structure("upper subgroup is not a union of basic sets".into()));
    }
    if !p.is_union_of_classes(&s.lower().to_set()) {
        return Err(Error::Structure("lower subgroup is not a union of basic sets".into()));
    }
    let q = s.quotient();
    let mut images: BTreeSet<Vec<Elem>> = BTreeSet::new();
    for class in p.classes() {
        if !s.upper().contains(class[0]) {
            continue;
        }
        let img: BTreeSet<Elem> = class.iter().map(|&x| s.project(x).expect("inside U")).collect();
        images.insert(img.into_iter().collect());
    }
    SRingPartition::from_classes(q, images.into_iter().collect())
        .map_err(|e| Error::Structure(format!("projected classes do not partition U/L: {e}")))
}

/// A generalized wreath decomposition `A = A_U wr_{U/L} A_{G/L}`.
#[derive(Clone, Debug)]
pub struct WreathDecomposition {
    pub section: Section,
    pub rank_total: usize,
    pub rank_u: usize,
    pub rank_quotient: usize,
    pub rank_section: usize,
}

impl WreathDecomposition {
    /// `rk(A) = rk(A_U) + rk(A_{G/L}) - rk(A_{U/L})`.
    pub fn rank_identity_holds(&self) -> bool {
        self.rank_u + self.rank_quotient == self.rank_total + self.rank_section
    }

    pub fn summary(&self, g: &Group) -> WreathSummary {
        WreathSummary {
            l_order: self.section.lower().order(),
            u_order: self.section.upper().order(),
            l_elements: self.section.lower().elements().iter().map(|&x| g.name(x).to_string()).collect(),
            rank_total: self.rank_total,
            rank_u: self.rank_u,
            rank_quotient: self.rank_quotient,
            rank_section: self.rank_section,
            rank_identity_holds: self.rank_identity_holds(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct WreathSummary {
    pub l_order: usize,
    pub u_order: usize,
    pub l_elements: Vec<String>,
    pub rank_total: usize,
    pub rank_u: usize,
    pub rank_quotient: usize,
    pub rank_section: usize,
    pub rank_identity_holds: bool,
}

/// All nontrivial `(U, L)` with `{e} < L <= U < G`, `L` normal in `G`, both
/// unions of basic sets, and `L <= rad(X)` for every basic set `X` outside
/// `U`.
pub fn detect_wreath(g: &Group, p: &SRingPartition) -> Result<Vec<WreathDecomposition>> {
    let subs = a_subgroups(g, p);
    let radicals: Vec<Subgroup> = p.classes().iter().map(|c| radical(g, &c.iter().copied().collect())).collect();
    let n = g.order();
    let mut out = Vec::new();
    for l in subs.iter().filter(|l| l.order() > 1 && l.order() < n && is_normal(g, l)) {
        for u in subs.iter().filter(|u| u.order() < n && l.is_subgroup_of(u)) {
            let ok = p
                .classes()
                .iter()
                .zip(&radicals)
                .filter(|(c, _)| !u.contains(c[0]))
                .all(|(_, rad)| l.is_subgroup_of(rad));
            if !ok {
                continue;
            }
            let section = make_section(g, u, l)?;
            let quotient_section = make_section(g, &g.whole(), l)?;
            let rank_u = p.classes().iter().filter(|c| u.contains(c[0])).count();
            let rank_quotient = section_sring(p, &quotient_section)?.rank();
            let rank_section = section_sring(p, &section)?.rank();
            out.push(WreathDecomposition { section, rank_total: p.rank(), rank_u, rank_quotient, rank_section });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct TraceAssertion {
    pub name: String,
    pub expected: Vec<String>,
    pub observed: Vec<String>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ClosureTrace {
    pub k: usize,
    pub rank: usize,
    pub assertions: Vec<TraceAssertion>,
}

impl ClosureTrace {
    pub fn all_hold(&self) -> bool {
        self.assertions.iter().all(|a| a.holds)
    }

    pub fn get(&self, name: &str) -> Option<&TraceAssertion> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

fn names(g: &Group, x: impl IntoIterator<Item = Elem>) -> Vec<String> {
    x.into_iter().map(|e| g.name(e).to_string()).collect()
}

/// Replays the derivation of the closure's structure against the computed
/// closure of `S`.
pub fn closure_trace(g: &Group, k: usize) -> Result<ClosureTrace> {
    let s = connection_set(g, k)?;
    let closure = wl_closure(g, std::slice::from_ref(&s));
    closure_trace_for(g, k, &closure)
}

/// As [`closure_trace`], reusing an already computed closure.
pub fn closure_trace_for(g: &Group, k: usize, closure: &SRingPartition) -> Result<ClosureTrace> {
    let s = connection_set(g, k)?;
    let w = |i: i64, j: u8, l: u8, m: u8| g.word(i, j, l, m);
    let cb = w(0, 1, 1, 0)?;
    let ca = w(1, 0, 1, 0)?;
    let da_inv = w(-1, 0, 0, 1)?;
    let a2 = w(2, 0, 0, 0)?;
    let da = w(1, 0, 0, 1)?;
    let [a, _, c, d] = g.generators().expect("family group");

    let mut assertions = Vec::new();
    let mut push_set = |name: &str, expected: &BTreeSet<Elem>, observed: &BTreeSet<Elem>| {
        assertions.push(TraceAssertion {
            name: name.to_string(),
            expected: names(g, expected.iter().copied()),
            observed: names(g, observed.iter().copied()),
            holds: expected == observed,
        });
    };

    // V = A# u cbA is the 2(k-1) level set of S^2
    let s_bar = GroupRingElement::simple_quantity(g, s.iter().copied());
    let sq = s_bar.multiply(&s_bar)?;
    let fibers = sq.coefficient_fibers();
    let v = fibers.get(&(2 * (k as i64 - 1))).cloned().unwrap_or_default();
    let v_cap_s: BTreeSet<Elem> = v.intersection(&s).copied().collect();
    push_set("V∩S", &BTreeSet::from([cb]), &v_cap_s);

    let cb_s = g.left_translate(cb, &s);
    let s_cb = g.right_translate(&s, cb);
    let diff: BTreeSet<Elem> = cb_s.difference(&s_cb).copied().collect();
    let s1: BTreeSet<Elem> = diff.intersection(&s).copied().collect();
    push_set("S1=(cbS∖Scb)∩S", &BTreeSet::from([ca]), &s1);
    let s2: BTreeSet<Elem> = diff.difference(&s1).copied().collect();
    push_set("S2=(cbS∖Scb)∖S1", &BTreeSet::from([da_inv]), &s2);
    let s1s1 = g.set_product(&s1, &s1);
    push_set("S1S1", &BTreeSet::from([a2]), &s1s1);

    for (name, x) in [("{cb}", cb), ("{ca}", ca), ("{da^-1}", da_inv), ("{a^2}", a2)] {
        let expected = BTreeSet::from([x]);
        let observed: BTreeSet<Elem> = closure.class_containing(x).iter().copied().collect();
        push_set(&format!("class {name}"), &expected, &observed);
    }

    let a1 = subgroup_generated(g, &[a2]);
    let a1_singletons: BTreeSet<Elem> =
        a1.elements().iter().copied().filter(|&x| closure.class_containing(x).len() == 1).collect();
    push_set("A1 elements are singleton classes", &a1.to_set(), &a1_singletons);

    if k % 2 == 1 {
        let singletons: BTreeSet<Elem> = closure.classes().iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
        push_set("all classes are singletons", &g.elements().collect(), &singletons);
    } else {
        let expected = BTreeSet::from([da]);
        let observed: BTreeSet<Elem> = closure.class_containing(da).iter().copied().collect();
        push_set("class {da}", &expected, &observed);

        let l = subgroup_generated(g, &[a2, cb]);
        for (name, rep) in [("Lc", c), ("La", a), ("Ld", d), ("Lcda", g.mul(g.mul(c, d), a))] {
            let coset = l.right_coset(g, rep);
            let observed: BTreeSet<Elem> = closure.class_containing(rep).iter().copied().collect();
            push_set(&format!("class {name}"), &coset, &observed);
        }
        let u = subgroup_generated(g, &[a2, cb, ca, da]);
        let s_minus_u: BTreeSet<Elem> = s.iter().copied().filter(|&x| !u.contains(x)).collect();
        push_set("S∖U=Lc", &l.right_coset(g, c), &s_minus_u);
    }

    Ok(ClosureTrace { k, rank: closure.rank(), assertions })
}
