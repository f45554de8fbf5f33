//! Explicit matrix realizations of the trivial, regular and vacuum objects,
//! their direct sums and tensor products, and the braiding between them.
//!
//! All matrices that arise here have integer entries, so they are stored as
//! sparse integer matrices.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::xchar::{CharacterTheory, XCharacter};
use crate::xmod::CrossedModule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObjectError {
    #[error("object axiom fails: {0}")]
    AxiomViolation(String),
    #[error("objects belong to different crossed modules")]
    MixedCrossedModules,
    #[error("braiding is not invertible")]
    NotInvertible,
    #[error("braiding is not an intertwiner: {0}")]
    NotIntertwiner(String),
}

/// Sparse square integer matrix; rows hold `(column, value)` sorted by column, no zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(n: usize) -> Self {
        SparseMatrix { n, rows: vec![Vec::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { n, rows: (0..n).map(|i| vec![(i, 1)]).collect() }
    }

    pub fn from_triplets(n: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
        for (i, j, v) in entries {
            rows[i].push((j, v));
        }
        for row in rows.iter_mut() {
            *row = normalize_row(std::mem::take(row));
        }
        SparseMatrix { n, rows }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i].binary_search_by_key(&j, |e| e.0).map_or(0, |k| self.rows[i][k].1)
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.n, other.n);
        let rows = self
            .rows
            .par_iter()
            .map(|row| {
                let mut acc = Vec::new();
                for &(k, a) in row {
                    for &(j, b) in &other.rows[k] {
                        acc.push((j, a * b));
                    }
                }
                normalize_row(acc)
            })
            .collect();
        SparseMatrix { n: self.n, rows }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.n, other.n);
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| normalize_row(a.iter().chain(b).copied().collect())).collect();
        SparseMatrix { n: self.n, rows }
    }

    /// Kronecker product, with index `i * other.n + j`.
    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let n = self.n * other.n;
        let mut rows = Vec::with_capacity(n);
        for ra in &self.rows {
            for rb in &other.rows {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for &(ja, a) in ra {
                    for &(jb, b) in rb {
                        row.push((ja * other.n + jb, a * b));
                    }
                }
                rows.push(row);
            }
        }
        SparseMatrix { n, rows }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|r| r.iter().map(|&(j, v)| (j + self.n, v)).collect()));
        SparseMatrix { n: self.n + other.n, rows }
    }

    /// Exact inverse when every row and column has a single ±1 entry.
    pub fn monomial_inverse(&self) -> Option<SparseMatrix> {
        let mut col_seen = vec![false; self.n];
        let mut entries = Vec::with_capacity(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            let [(j, v)] = row.as_slice() else { return None };
            if v.abs() != 1 || std::mem::replace(&mut col_seen[*j], true) {
                return None;
            }
            entries.push((*j, i, *v));
        }
        Some(SparseMatrix::from_triplets(self.n, entries))
    }

    /// Exact invertibility: monomial inverse, else a nonzero determinant
    /// modulo a large prime, else fraction-free elimination over the integers.
    pub fn is_invertible(&self) -> bool {
        if let Some(inv) = self.monomial_inverse() {
            return self.mul(&inv) == SparseMatrix::identity(self.n);
        }
        const P: i64 = 2_147_483_647;
        if self.rank_mod(P) == self.n {
            return true;
        }
        self.rank_exact() == self.n
    }

    fn dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.n]; self.n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d[i][j] = v;
            }
        }
        d
    }

    fn rank_mod(&self, p: i64) -> usize {
        let mut a: Vec<Vec<i64>> = self.dense().into_iter().map(|r| r.into_iter().map(|v| v.rem_euclid(p)).collect()).collect();
        let mut r = 0;
        for c in 0..self.n {
            let Some(k) = (r..self.n).find(|&k| a[k][c] != 0) else { continue };
            a.swap(r, k);
            let inv = pow_mod(a[r][c], p - 2, p);
            let pivot: Vec<i64> = a[r].iter().map(|&x| x * inv % p).collect();
            for row in a.iter_mut().skip(r + 1) {
                if row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x = (*x - f * y % p).rem_euclid(p);
                    }
                }
            }
            a[r] = pivot;
            r += 1;
        }
        r
    }

    fn rank_exact(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = self.dense().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        let mut r = 0;
        let mut prev = BigInt::from(1);
        for c in 0..self.n {
            let Some(k) = (r..self.n).find(|&k| !a[k][c].is_zero()) else { continue };
            a.swap(r, k);
            for i in r + 1..self.n {
                for j in c + 1..self.n {
                    let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn normalize_row(mut row: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    row.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(row.len());
    for (j, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += v,
            _ => out.push((j, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// An object (V, P, Q) of M(X) on a space of dimension `dim`.
#[derive(Debug, Clone)]
pub struct ExplicitObject {
    xmod: Arc<CrossedModule>,
    pub dim: usize,
    pub basis_labels: Vec<String>,
    /// Indexed by X2.
    pub p: Vec<SparseMatrix>,
    /// Indexed by X1.
    pub q: Vec<SparseMatrix>,
}

impl ExplicitObject {
    /// Builds an object with diagonal P from a basis labelling `lab(b) ∈ X2`
    /// and Q from a right action `b·g` on the basis: (Q(g)φ)(b) = φ(b·g).
    fn from_labels(
        xmod: &Arc<CrossedModule>,
        basis_labels: Vec<String>,
        lab: &[usize],
        shift: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, ObjectError> {
        let dim = lab.len();
        let p = (0..xmod.x2().order())
            .map(|m| SparseMatrix::from_triplets(dim, (0..dim).filter(|&b| lab[b] == m).map(|b| (b, b, 1))))
            .collect();
        let q = (0..xmod.x1().order()).map(|g| SparseMatrix::from_triplets(dim, (0..dim).map(|b| (b, shift(b, g), 1)))).collect();
        let o = ExplicitObject { xmod: Arc::clone(xmod), dim, basis_labels, p, q };
        o.check_axioms()?;
        Ok(o)
    }

    pub fn trivial(theory: &CharacterTheory) -> Result<Self, ObjectError> {
        let x = theory.xmod();
        Self::from_labels(x, vec!["1".into()], &[x.x2().identity()], |b, _| b)
    }

    /// Basis X1 × X2 with P(m)φ(x,y) = δ(m, y^x)φ(x,y) and Q(g)φ(x,y) = φ(xg, y).
    pub fn regular(theory: &CharacterTheory) -> Result<Self, ObjectError> {
        let x = theory.xmod();
        let (x1, n2) = (x.x1(), x.x2().order());
        let n1 = x1.order();
        let idx = |a: usize, y: usize| a * n2 + y;
        let mut labels = Vec::with_capacity(n1 * n2);
        let mut lab = Vec::with_capacity(n1 * n2);
        for a in 0..n1 {
            for y in 0..n2 {
                labels.push(format!("({a},{y})"));
                lab.push(x.act(y, a));
            }
        }
        Self::from_labels(x, labels, &lab, |b, g| idx(x1.mul(b / n2, g), b % n2))
    }

    /// Basis K × C with P(m)φ(x,Iy) = δ(m, x^y)φ(x,Iy) and Q(g)φ(x,Iy) = φ(x, Iyg).
    pub fn vacuum(theory: &CharacterTheory) -> Result<Self, ObjectError> {
        let x = theory.xmod();
        let x1 = x.x1();
        let e = theory.exactness();
        let nc = e.cosets.len();
        let mut labels = Vec::new();
        let mut lab = Vec::new();
        for &k in &e.kernel {
            for coset in &e.cosets {
                labels.push(format!("({k},I{})", coset.representative));
                lab.push(x.act(k, coset.representative));
            }
        }
        Self::from_labels(x, labels, &lab, |b, g| {
            let (ki, c) = (b / nc, b % nc);
            ki * nc + e.coset_of[x1.mul(e.cosets[c].representative, g)]
        })
    }

    fn same_xmod(&self, other: &ExplicitObject) -> Result<(), ObjectError> {
        if Arc::ptr_eq(&self.xmod, &other.xmod) {
            Ok(())
        } else {
            Err(ObjectError::MixedCrossedModules)
        }
    }

    pub fn direct_sum(&self, other: &ExplicitObject) -> Result<Self, ObjectError> {
        self.same_xmod(other)?;
        let o = ExplicitObject {
            xmod: Arc::clone(&self.xmod),
            dim: self.dim + other.dim,
            basis_labels: self
                .basis_labels
                .iter()
                .map(|l| format!("L{l}"))
                .chain(other.basis_labels.iter().map(|l| format!("R{l}")))
                .collect(),
            p: self.p.iter().zip(&other.p).map(|(a, b)| a.direct_sum(b)).collect(),
            q: self.q.iter().zip(&other.q).map(|(a, b)| a.direct_sum(b)).collect(),
        };
        o.check_axioms()?;
        Ok(o)
    }

    /// P12(m) = Σ_n P1(n) ⊗ P2(n⁻¹m), Q12(g) = Q1(g) ⊗ Q2(g).
    pub fn tensor(&self, other: &ExplicitObject) -> Result<Self, ObjectError> {
        self.same_xmod(other)?;
        let x2 = self.xmod.x2();
        let dim = self.dim * other.dim;
        let p = (0..x2.order())
            .into_par_iter()
            .map(|m| {
                (0..x2.order()).fold(SparseMatrix::zero(dim), |acc, n| {
                    let a = &self.p[n];
                    let b = &other.p[x2.mul(x2.inv(n), m)];
                    if a.nonzeros() == 0 || b.nonzeros() == 0 {
                        acc
                    } else {
                        acc.add(&a.kron(b))
                    }
                })
            })
            .collect();
        let q = self.q.par_iter().zip(&other.q).map(|(a, b)| a.kron(b)).collect();
        let basis_labels = self
            .basis_labels
            .iter()
            .flat_map(|a| other.basis_labels.iter().map(move |b| format!("{a}⊗{b}")))
            .collect();
        let o = ExplicitObject { xmod: Arc::clone(&self.xmod), dim, basis_labels, p, q };
        o.check_axioms()?;
        Ok(o)
    }

    /// Checks P(m)P(n) = δ(m,n)P(m), Σ_m P(m) = 1, Q(g)Q(h) = Q(gh) and
    /// P(m)Q(g) = Q(g)P(m^g).
    pub fn check_axioms(&self) -> Result<(), ObjectError> {
        let x = &self.xmod;
        let (x1, n2) = (x.x1(), x.x2().order());
        let zero = SparseMatrix::zero(self.dim);
        for m in 0..n2 {
            for n in 0..n2 {
                let prod = self.p[m].mul(&self.p[n]);
                let expect = if m == n { &self.p[m] } else { &zero };
                if &prod != expect {
                    return Err(ObjectError::AxiomViolation(format!("P({m})P({n})")));
                }
            }
        }
        let sum = self.p.iter().fold(SparseMatrix::zero(self.dim), |acc, p| acc.add(p));
        if sum != SparseMatrix::identity(self.dim) {
            return Err(ObjectError::AxiomViolation("sum of P(m) is not the identity".into()));
        }
        let qbad = (0..x1.order()).into_par_iter().find_map_first(|g| {
            (0..x1.order()).find(|&h| self.q[g].mul(&self.q[h]) != self.q[x1.mul(g, h)]).map(|h| (g, h))
        });
        if let Some((g, h)) = qbad {
            return Err(ObjectError::AxiomViolation(format!("Q({g})Q({h}) != Q({g}{h})")));
        }
        let pq = (0..n2).into_par_iter().find_map_first(|m| {
            (0..x1.order())
                .find(|&g| self.p[m].mul(&self.q[g]) != self.q[g].mul(&self.p[x.act(m, g)]))
                .map(|g| (m, g))
        });
        if let Some((m, g)) = pq {
            return Err(ObjectError::AxiomViolation(format!("P({m})Q({g}) != Q({g})P({m}^{g})")));
        }
        Ok(())
    }

    /// ψ(m,g) = Tr(P(m)Q(g)), on the theory's crossed module.
    pub fn character(&self, theory: &CharacterTheory) -> Result<XCharacter, ObjectError> {
        if !Arc::ptr_eq(&self.xmod, theory.xmod()) {
            return Err(ObjectError::MixedCrossedModules);
        }
        let n1 = self.xmod.x1().order();
        let traces: Vec<i64> = (0..self.xmod.x2().order() * n1)
            .into_par_iter()
            .map(|i| self.p[i / n1].mul(&self.q[i % n1]).trace())
            .collect();
        Ok(XCharacter::from_integers(theory.xmod(), theory.ring(), |m, g| traces[m * n1 + g]))
    }
}

/// R12: v1 ⊗ v2 ↦ Σ_m Q2(∂m)v2 ⊗ P1(m)v1, as a map V1⊗V2 → V2⊗V1. Checks
/// invertibility and that R12 intertwines the structures of O1⊗O2 and O2⊗O1.
pub fn braiding(o1: &ExplicitObject, o2: &ExplicitObject) -> Result<SparseMatrix, ObjectError> {
    o1.same_xmod(o2)?;
    let r = braiding_matrix(o1, o2);
    if !r.is_invertible() {
        return Err(ObjectError::NotInvertible);
    }
    let t12 = o1.tensor(o2)?;
    let t21 = o2.tensor(o1)?;
    let x = &o1.xmod;
    if let Some(m) = (0..x.x2().order()).find(|&m| r.mul(&t12.p[m]) != t21.p[m].mul(&r)) {
        return Err(ObjectError::NotIntertwiner(format!("P({m})")));
    }
    if let Some(g) = (0..x.x1().order()).find(|&g| r.mul(&t12.q[g]) != t21.q[g].mul(&r)) {
        return Err(ObjectError::NotIntertwiner(format!("Q({g})")));
    }
    Ok(r)
}

fn braiding_matrix(o1: &ExplicitObject, o2: &ExplicitObject) -> SparseMatrix {
    let (d1, d2) = (o1.dim, o2.dim);
    let flip = SparseMatrix::from_triplets(d1 * d2, (0..d1).flat_map(|i| (0..d2).map(move |j| (j * d1 + i, i * d2 + j, 1))));
    let x = &o1.xmod;
    let sum = (0..x.x2().order()).fold(SparseMatrix::zero(d1 * d2), |acc, m| {
        if o1.p[m].nonzeros() == 0 {
            acc
        } else {
            acc.add(&o2.q[x.boundary(m)].kron(&o1.p[m]))
        }
    });
    sum.mul(&flip)
}

/// Whether (R⊗1)(1⊗R)(R⊗1) = (1⊗R)(R⊗1)(1⊗R) for R = R_{O,O}; `None` when
/// O⊗O⊗O exceeds `limit` dimensions.
pub fn braid_relation(o: &ExplicitObject, limit: usize) -> Option<bool> {
    let d = o.dim;
    if d * d * d > limit {
        return None;
    }
    let r = braiding_matrix(o, o);
    let id = SparseMatrix::identity(d);
    let a = r.kron(&id);
    let b = id.kron(&r);
    Some(a.mul(&b).mul(&a) == b.mul(&a).mul(&b))
}

/// Outcome of the object-level checks on {𝟙, R, 0}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObjectChecks {
    pub axioms: bool,
    pub traces: bool,
    pub tensor_characters: bool,
    pub direct_sums: bool,
    pub braidings: bool,
    /// Braid relation per object (trivial, regular, vacuum); recorded, not asserted.
    pub braid_relation: Vec<Option<bool>>,
    pub failures: Vec<String>,
}

impl ObjectChecks {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_object_checks(theory: &CharacterTheory) -> ObjectChecks {
    let mut failures = Vec::new();
    let record = |ok: bool, what: String, failures: &mut Vec<String>| {
        if !ok {
            failures.push(what);
        }
        ok
    };
    let built = [
        ("trivial", ExplicitObject::trivial(theory), theory.char_trivial()),
        ("regular", ExplicitObject::regular(theory), theory.char_regular()),
        ("vacuum", ExplicitObject::vacuum(theory), theory.char_vacuum()),
    ];
    let mut objects = Vec::new();
    let mut axioms = true;
    let mut traces = true;
    for (name, obj, expect) in built {
        match obj {
            Ok(o) => {
                let ok = o.character(theory).map(|c| c == expect).unwrap_or(false);
                traces &= record(ok, format!("{name}: trace character differs"), &mut failures);
                objects.push((name, o));
            }
            Err(e) => {
                axioms &= record(false, format!("{name}: {e}"), &mut failures);
            }
        }
    }

    let mut tensor_characters = true;
    let mut direct_sums = true;
    let mut braidings = true;
    for (na, a) in &objects {
        for (nb, b) in &objects {
            let ca = a.character(theory).expect("same theory");
            let cb = b.character(theory).expect("same theory");
            match a.tensor(b) {
                Ok(t) => {
                    let expect = crate::xchar::tensor_character(&ca, &cb).expect("same theory");
                    let ok = t.character(theory).map(|c| c == expect).unwrap_or(false) && t.dim == a.dim * b.dim;
                    tensor_characters &= record(ok, format!("{na}⊗{nb}: character mismatch"), &mut failures);
                }
                Err(e) => axioms &= record(false, format!("{na}⊗{nb}: {e}"), &mut failures),
            }
            match a.direct_sum(b) {
                Ok(s) => {
                    let expect = ca.add(&cb).expect("same theory");
                    let ok = s.character(theory).map(|c| c == expect).unwrap_or(false);
                    direct_sums &= record(ok, format!("{na}⊕{nb}: character mismatch"), &mut failures);
                }
                Err(e) => axioms &= record(false, format!("{na}⊕{nb}: {e}"), &mut failures),
            }
            if let Err(e) = braiding(a, b) {
                braidings &= record(false, format!("R({na},{nb}): {e}"), &mut failures);
            }
        }
    }
    let braid_relation = objects.iter().map(|(_, o)| braid_relation(o, 4096)).collect();
    ObjectChecks { axioms, traces, tensor_characters, direct_sums, braidings, braid_relation, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xmod::library_xmod;

    fn theory(name: &str) -> CharacterTheory {
        CharacterTheory::new(library_xmod(name).unwrap()).unwrap()
    }

    #[test]
    fn dimensions() {
        let t = theory("Z4->Z2");
        assert_eq!(ExplicitObject::trivial(&t).unwrap().dim, 1);
        assert_eq!(ExplicitObject::regular(&t).unwrap().dim, 8);
        let v = ExplicitObject::vacuum(&t).unwrap();
        assert_eq!(v.dim, 2);
        assert_eq!(v.direct_sum(&v).unwrap().dim, 4);
    }

    #[test]
    fn canonical_identities() {
        let t = theory("RG(S3)");
        let r = ExplicitObject::regular(&t).unwrap().character(&t).unwrap();
        let v = ExplicitObject::vacuum(&t).unwrap().character(&t).unwrap();
        assert_eq!(r, v);
        let t = theory("DG(S3)");
        let v = ExplicitObject::vacuum(&t).unwrap();
        assert_eq!(v.dim, 1);
        assert_eq!(v.character(&t).unwrap(), t.char_trivial());
    }

    #[test]
    fn braiding_with_unit_is_a_permutation() {
        let t = theory("DG(S3)");
        let r = ExplicitObject::regular(&t).unwrap();
        let one = ExplicitObject::trivial(&t).unwrap();
        let b = braiding(&r, &one).unwrap();
        assert!(b.monomial_inverse().is_some());
        let t = theory("RG(S3)");
        let r = ExplicitObject::regular(&t).unwrap();
        let b = braiding(&r, &r).unwrap();
        let d = r.dim;
        let flip = SparseMatrix::from_triplets(d * d, (0..d).flat_map(|i| (0..d).map(move |j| (j * d + i, i * d + j, 1))));
        assert_eq!(b, flip);
    }

    #[test]
    fn object_suite() {
        for name in ["DG(Z2)", "Z4->Z2", "Z2/Z2-trivial", "RG(S3)"] {
            let c = run_object_checks(&theory(name));
            assert!(c.passed(), "{name}: {:?}", c.failures);
        }
    }

    #[test]
    fn exact_invertibility_fallbacks() {
        let m = SparseMatrix::from_triplets(2, [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1)]);
        assert!(m.monomial_inverse().is_none());
        assert!(m.is_invertible());
        let s = SparseMatrix::from_triplets(2, [(0, 0, 2), (0, 1, 4), (1, 0, 1), (1, 1, 2)]);
        assert!(!s.is_invertible());
        assert_eq!(s.rank_exact(), 1);
    }
}
