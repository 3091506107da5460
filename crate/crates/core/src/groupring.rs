//! Integer group ring `ZG`: sparse formal sums with exact, overflow-checked
//! arithmetic, plus the family's connection set and its square identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{subgroup_generated, Elem, Group};

/// `sum c_g g` with no stored zero coefficients.
#[derive(Clone, Debug)]
pub struct GroupRingElement<'g> {
    group: &'g Group,
    coeffs: BTreeMap<Elem, i64>,
}

impl PartialEq for GroupRingElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.group, other.group) && self.coeffs == other.coeffs
    }
}

impl<'g> GroupRingElement<'g> {
    pub fn zero(group: &'g Group) -> Self {
        GroupRingElement { group, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(group: &'g Group, coeffs: impl IntoIterator<Item = (Elem, i64)>) -> Result<Self> {
        let mut out = Self::zero(group);
        for (g, c) in coeffs {
            out.add_term(g, c)?;
        }
        Ok(out)
    }

    /// The element `g` itself, coefficient one.
    pub fn basis(group: &'g Group, g: Elem) -> Self {
        Self::simple_quantity(group, [g])
    }

    /// `X` as an element of the ring: coefficient one on each member.
    pub fn simple_quantity(group: &'g Group, x: impl IntoIterator<Item = Elem>) -> Self {
        let coeffs = x.into_iter().map(|g| (g, 1)).collect();
        GroupRingElement { group, coeffs }
    }

    pub fn group(&self) -> &'g Group {
        self.group
    }

    pub fn coefficient(&self, g: Elem) -> i64 {
        self.coeffs.get(&g).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (Elem, i64)> + '_ {
        self.coeffs.iter().map(|(&g, &c)| (g, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, g: Elem, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let entry = self.coeffs.entry(g).or_insert(0);
        *entry = entry.checked_add(c).ok_or(Error::Overflow)?;
        if *entry == 0 {
            self.coeffs.remove(&g);
        }
        Ok(())
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.group, other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (&g, &c) in &other.coeffs {
            out.add_term(g, c)?;
        }
        Ok(out)
    }

    pub fn checked_scale(&self, s: i64) -> Result<Self> {
        let mut out = Self::zero(self.group);
        for (&g, &c) in &self.coeffs {
            out.add_term(g, c.checked_mul(s).ok_or(Error::Overflow)?)?;
        }
        Ok(out)
    }

    /// Convolution: the coefficient of `g` is `sum_{uv = g} x_u y_v`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let mut out = Self::zero(self.group);
        for (&u, &cu) in &self.coeffs {
            for (&v, &cv) in &other.coeffs {
                let c = cu.checked_mul(cv).ok_or(Error::Overflow)?;
                out.add_term(self.group.mul(u, v), c)?;
            }
        }
        Ok(out)
    }

    /// Level sets `{g : c_g = c}` over the whole group, including the zero
    /// level on the complement of the support.
    pub fn coefficient_fibers(&self) -> BTreeMap<i64, BTreeSet<Elem>> {
        let mut fibers: BTreeMap<i64, BTreeSet<Elem>> = BTreeMap::new();
        for g in self.group.elements() {
            fibers.entry(self.coefficient(g)).or_default().insert(g);
        }
        fibers
    }
}

impl<'g> Add for &GroupRingElement<'g> {
    type Output = GroupRingElement<'g>;

    fn add(self, rhs: Self) -> GroupRingElement<'g> {
        self.checked_add(rhs).expect("group ring addition")
    }
}

impl<'g> Mul for &GroupRingElement<'g> {
    type Output = GroupRingElement<'g>;

    fn mul(self, rhs: Self) -> GroupRingElement<'g> {
        self.multiply(rhs).expect("group ring multiplication")
    }
}

impl fmt::Display for GroupRingElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&g, &c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c == 1 {
                write!(f, "{}", self.group.name(g))?;
            } else {
                write!(f, "{}*{}", c, self.group.name(g))?;
            }
        }
        Ok(())
    }
}

fn require_family(g: &Group, k: usize) -> Result<()> {
    match g.family() {
        Some(f) if f.k == k => Ok(()),
        Some(f) => Err(Error::InvalidInput(format!("group was built for k = {}, not {k}", f.k))),
        None => Err(Error::InvalidInput("group was not built by dihedral_klein".into())),
    }
}

/// `S = b(A \ {a^{-1}}) u c(A u {b}) u {db, dcba^{-1}}`, `A = <a>`.
pub fn connection_set(g: &Group, k: usize) -> Result<BTreeSet<Elem>> {
    require_family(g, k)?;
    let k = k as i64;
    let mut s = BTreeSet::new();
    for i in 0..k {
        // b a^i = a^{-i} b
        if i != k - 1 {
            s.insert(g.word(-i, 1, 0, 0)?);
        }
        s.insert(g.word(i, 0, 1, 0)?);
    }
    s.insert(g.word(0, 1, 1, 0)?); // cb
    s.insert(g.word(0, 1, 0, 1)?); // db
    s.insert(g.word(1, 1, 1, 1)?); // dcba^{-1} = a d c b
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub element: String,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareIdentityReport {
    pub holds: bool,
    pub first_discrepancy: Option<Discrepancy>,
}

/// Right-hand side of the square identity, built from the subgroups
/// `A = <a>`, `C = <c>`, `H = <a, b>` without reference to `S`:
/// `2(k+1)e + 2(k-1)(A# + cbA) + 2(b+c)A + 2dCH`.
pub fn square_identity_rhs(g: &Group, k: usize) -> Result<GroupRingElement<'_>> {
    require_family(g, k)?;
    let [a, b, c, d] = g.generators().expect("family group");
    let k = k as i64;
    let a_sub = subgroup_generated(g, &[a]);
    let c_sub = subgroup_generated(g, &[c]);
    let h_sub = subgroup_generated(g, &[a, b]);
    let e = GroupRingElement::basis(g, g.identity());
    let a_bar = GroupRingElement::simple_quantity(g, a_sub.elements().iter().copied());
    let a_sharp = a_bar.checked_add(&e.checked_scale(-1)?)?;
    let cb = GroupRingElement::basis(g, g.mul(c, b));
    let b_plus_c = GroupRingElement::simple_quantity(g, [b, c]);
    let c_bar = GroupRingElement::simple_quantity(g, c_sub.elements().iter().copied());
    let h_bar = GroupRingElement::simple_quantity(g, h_sub.elements().iter().copied());
    let d_el = GroupRingElement::basis(g, d);

    let t1 = e.checked_scale(2 * (k + 1))?;
    let t2 = a_sharp.checked_add(&cb.multiply(&a_bar)?)?.checked_scale(2 * (k - 1))?;
    let t3 = b_plus_c.multiply(&a_bar)?.checked_scale(2)?;
    let t4 = d_el.multiply(&c_bar)?.multiply(&h_bar)?.checked_scale(2)?;
    t1.checked_add(&t2)?.checked_add(&t3)?.checked_add(&t4)
}

/// Compares `S * S` with [`square_identity_rhs`] for an arbitrary `S`.
pub fn verify_square_identity(g: &Group, k: usize, s: &BTreeSet<Elem>) -> Result<SquareIdentityReport> {
    let rhs = square_identity_rhs(g, k)?;
    let s_bar = GroupRingElement::simple_quantity(g, s.iter().copied());
    let lhs = s_bar.multiply(&s_bar)?;
    let first = g.elements().find(|&x| lhs.coefficient(x) != rhs.coefficient(x));
    Ok(SquareIdentityReport {
        holds: first.is_none(),
        first_discrepancy: first.map(|x| Discrepancy {
            element: g.name(x).to_string(),
            lhs: lhs.coefficient(x),
            rhs: rhs.coefficient(x),
        }),
    })
}

/// Checks `S^2 = 2(k+1)e + 2(k-1)(A# + cbA) + 2(b+c)A + 2dCH` exactly.
pub fn verify_family_square(g: &Group, k: usize) -> Result<SquareIdentityReport> {
    let s = connection_set(g, k)?;
    verify_square_identity(g, k, &s)
}
