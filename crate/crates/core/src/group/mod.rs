//! Finite groups stored as full Cayley tables.
//!
//! Every group carries its derived data (inverses, element orders, exponent and
//! conjugacy classes) so that downstream code can sum over elements and classes
//! without recomputing anything. Elements are plain indices `0..order`.

mod action;
mod named;

pub use action::{orbit_stabilizer, ActionTable, OrbitStabilizer};
pub use named::{named_group, NAMED_GROUPS};

use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use rayon::prelude::*;
use thiserror::Error;

/// Largest group order accepted anywhere in the crate.
pub const ORDER_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("index {value} out of range at {location} (order {order})")]
    IndexOutOfRange { location: String, value: usize, order: usize },
    #[error("table is not square: expected {expected} rows/columns")]
    Malformed { expected: usize },
    #[error("group order must be between 1 and {ORDER_CAP}, got {0}")]
    BadOrder(usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("multiplication is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("generator {0} is not a bijection on {1} points")]
    NotABijection(usize, usize),
    #[error("closure of the generators exceeds the order cap {ORDER_CAP}")]
    OrderCapExceeded,
    #[error("unknown named group {0:?}")]
    UnknownName(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("elements do not form a subgroup: {0}")]
    NotASubgroup(String),
}

/// A conjugacy class; `representative` is its smallest element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: usize,
    pub elements: Vec<usize>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Debug, Clone)]
pub struct Group {
    order: usize,
    mul: Vec<u32>,
    identity: usize,
    inv: Vec<usize>,
    element_order: Vec<usize>,
    exponent: usize,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
    name: Option<String>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Group {
    /// Builds a group from a full multiplication table, checking every axiom.
    pub fn from_table(order: usize, table: &[Vec<usize>]) -> Result<Self, GroupError> {
        if order == 0 || order > ORDER_CAP {
            return Err(GroupError::BadOrder(order));
        }
        if table.len() != order || table.iter().any(|row| row.len() != order) {
            return Err(GroupError::Malformed { expected: order });
        }
        for (a, row) in table.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(GroupError::IndexOutOfRange {
                        location: format!("table[{a}][{b}]"),
                        value: v,
                        order,
                    });
                }
            }
        }
        let mul: Vec<u32> = table.iter().flatten().map(|&v| v as u32).collect();
        let at = |a: usize, b: usize| mul[a * order + b] as usize;

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        for x in 0..order {
            if !(0..order).any(|y| at(x, y) == identity && at(y, x) == identity) {
                return Err(GroupError::NoInverse(x));
            }
        }
        let witness = (0..order).into_par_iter().find_map_first(|a| {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
            None
        });
        if let Some((a, b, c)) = witness {
            return Err(GroupError::NotAssociative(a, b, c));
        }
        Ok(Self::from_trusted(order, mul, identity))
    }

    /// Closes a set of permutations of `0..degree` under composition.
    ///
    /// Products compose left to right: `(a*b)[x] = b[a[x]]`. Element 0 is the
    /// identity permutation and the remaining elements appear in breadth-first
    /// order of discovery.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        let perms = permutation_closure(degree, generators)?;
        let order = perms.len();
        let index: HashMap<&[u32], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut mul = vec![0u32; order * order];
        let mut scratch = vec![0u32; degree];
        for a in 0..order {
            for b in 0..order {
                for x in 0..degree {
                    scratch[x] = perms[b][perms[a][x] as usize];
                }
                mul[a * order + b] = index[scratch.as_slice()] as u32;
            }
        }
        Ok(Self::from_trusted(order, mul, 0))
    }

    /// Trivial group of order 1.
    pub fn trivial() -> Self {
        Self::from_trusted(1, vec![0], 0)
    }

    /// Assumes `mul` is a valid group table with the given identity.
    pub(crate) fn from_trusted(order: usize, mul: Vec<u32>, identity: usize) -> Self {
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            if inv[x] != usize::MAX {
                continue;
            }
            let y = (0..order).find(|&y| at(x, y) == identity).expect("group has inverses");
            inv[x] = y;
            inv[y] = x;
        }

        let mut element_order = vec![0; order];
        for x in 0..order {
            let (mut k, mut p) = (1, x);
            while p != identity {
                p = at(p, x);
                k += 1;
            }
            element_order[x] = k;
        }
        let exponent = element_order.iter().fold(1usize, |e, &k| e.lcm(&k));

        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for x in 0..order {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut elements: Vec<usize> = (0..order).map(|g| at(at(inv[g], x), g)).collect();
            elements.sort_unstable();
            elements.dedup();
            for &y in &elements {
                class_of[y] = classes.len();
            }
            classes.push(ConjugacyClass { representative: x, elements });
        }

        Group { order, mul, identity, inv, element_order, exponent, classes, class_of, name: None }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// `g⁻¹ x g`
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv[g], x), g)
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        let k = k % self.element_order[x];
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    pub fn element_order(&self, x: usize) -> usize {
        self.element_order[x]
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn identity_class(&self) -> usize {
        self.class_of[self.identity]
    }

    pub fn centralizer_order(&self, x: usize) -> usize {
        self.order / self.classes[self.class_of[x]].size()
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }

    /// Multiplication table as nested rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Validates that `elements` form a subgroup and builds it.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup, GroupError> {
        let mut embedding = elements.to_vec();
        embedding.sort_unstable();
        embedding.dedup();
        if let Some(&bad) = embedding.iter().find(|&&x| x >= self.order) {
            return Err(GroupError::IndexOutOfRange {
                location: "subgroup".into(),
                value: bad,
                order: self.order,
            });
        }
        if !embedding.contains(&self.identity) {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        let mut local = vec![usize::MAX; self.order];
        for (i, &x) in embedding.iter().enumerate() {
            local[x] = i;
        }
        let n = embedding.len();
        let mut mul = Vec::with_capacity(n * n);
        for &a in &embedding {
            for &b in &embedding {
                let ab = local[self.mul(a, b)];
                if ab == usize::MAX {
                    return Err(GroupError::NotASubgroup(format!("{a}*{b} leaves the set")));
                }
                mul.push(ab as u32);
            }
        }
        let group = Group::from_trusted(n, mul, local[self.identity]);
        Ok(Subgroup { group, embedding, local })
    }
}

fn permutation_closure(degree: usize, generators: &[Vec<usize>]) -> Result<Vec<Vec<u32>>, GroupError> {
    let mut gens = Vec::with_capacity(generators.len());
    for (i, g) in generators.iter().enumerate() {
        let mut seen = vec![false; degree];
        if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
            return Err(GroupError::NotABijection(i, degree));
        }
        gens.push(g.iter().map(|&x| x as u32).collect::<Vec<u32>>());
    }
    let identity: Vec<u32> = (0..degree as u32).collect();
    let mut elements = vec![identity.clone()];
    let mut seen: HashSet<Vec<u32>> = HashSet::from([identity]);
    let mut head = 0;
    while head < elements.len() {
        for g in &gens {
            let next: Vec<u32> = elements[head].iter().map(|&x| g[x as usize]).collect();
            if !seen.contains(&next) {
                if elements.len() == ORDER_CAP {
                    return Err(GroupError::OrderCapExceeded);
                }
                seen.insert(next.clone());
                elements.push(next);
            }
        }
        head += 1;
    }
    Ok(elements)
}

/// A subgroup together with its own group structure.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: Group,
    /// Subgroup index -> parent index, ascending.
    pub embedding: Vec<usize>,
    /// Parent index -> subgroup index, or `usize::MAX` outside the subgroup.
    local: Vec<usize>,
}

impl Subgroup {
    pub fn contains(&self, parent_element: usize) -> bool {
        self.local[parent_element] != usize::MAX
    }

    pub fn local_index(&self, parent_element: usize) -> Option<usize> {
        let i = self.local[parent_element];
        (i != usize::MAX).then_some(i)
    }

    pub fn order(&self) -> usize {
        self.embedding.len()
    }
}
