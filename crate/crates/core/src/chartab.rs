//! Ordinary character tables by Dixon's modular method.
//!
//! The common eigenvectors of the class matrices are found over a prime field
//! F_p with p ≡ 1 (mod exponent), and each character value is lifted to an exact
//! cyclotomic from its eigenvalue multiplicities.

use rayon::prelude::*;
use thiserror::Error;

use crate::cyclo::{CycRing, Cyclotomic};
use crate::group::{Group, Subgroup};

const PRIME_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartabError {
    #[error("no prime p = 1 mod {0} below {PRIME_CAP}")]
    NoSuitablePrime(usize),
    #[error("eigenspace splitting failed: {0}")]
    EigensplitFailure(String),
    #[error("character table failed verification: {0}")]
    VerificationFailure(String),
    #[error("not a subgroup of the table's group: {0}")]
    NotASubgroup(String),
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    group: Group,
    degrees: Vec<usize>,
    /// `values[i][c]` is χ_i on the representative of class c.
    values: Vec<Vec<Cyclotomic>>,
    /// `power_map[c][j]` is the class of g_c^j, for j < exponent.
    power_map: Vec<Vec<usize>>,
    prime: u64,
}

impl CharacterTable {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn irr_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn values(&self) -> &[Vec<Cyclotomic>] {
        &self.values
    }

    pub fn value(&self, irr: usize, class: usize) -> &Cyclotomic {
        &self.values[irr][class]
    }

    pub fn power_map(&self) -> &[Vec<usize>] {
        &self.power_map
    }

    /// The prime used for the modular computation.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Values as integral ring elements; `ring`'s conductor must be a multiple
    /// of the group exponent.
    pub fn ring_values(&self, ring: &CycRing) -> Vec<Vec<Vec<i64>>> {
        self.values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| ring.from_cyclotomic(v).expect("character values are integral in the ring"))
                    .collect()
            })
            .collect()
    }
}

/// Class maps of a subgroup: its own classes and their fusion into the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMap {
    /// Subgroup class of each subgroup element (local indices).
    pub local_class: Vec<usize>,
    /// Parent class containing each subgroup class.
    pub fusion: Vec<usize>,
}

pub fn restrict_and_index(table: &CharacterTable, h: &Subgroup) -> Result<ClassMap, ChartabError> {
    let g = &table.group;
    if h.embedding.iter().any(|&x| x >= g.order()) {
        return Err(ChartabError::NotASubgroup("element out of range".into()));
    }
    for (a, &x) in h.embedding.iter().enumerate() {
        for (b, &y) in h.embedding.iter().enumerate() {
            if h.embedding[h.group.mul(a, b)] != g.mul(x, y) {
                return Err(ChartabError::NotASubgroup(format!("product of {x} and {y} disagrees")));
            }
        }
    }
    let local_class = (0..h.order()).map(|x| h.group.class_of(x)).collect();
    let fusion = h.group.classes().iter().map(|c| g.class_of(h.embedding[c.representative])).collect();
    Ok(ClassMap { local_class, fusion })
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn choose_prime(order: usize, exponent: usize) -> Result<u64, ChartabError> {
    let e = exponent as u64;
    let bound = 2.0 * (order as f64).sqrt();
    let mut p = e + 1;
    while p <= PRIME_CAP {
        if p as f64 > bound && is_prime(p) {
            return Ok(p);
        }
        p += e;
    }
    Err(ChartabError::NoSuitablePrime(exponent))
}

/// Smallest generator of the multiplicative group mod p.
fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).unwrap_or(1)
}

/// Row-reduced basis of a subspace of F_p^n.
#[derive(Debug, Clone)]
struct Subspace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

fn rref(mut rows: Vec<Vec<u64>>, p: u64) -> Subspace {
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Subspace { rows, pivots }
}

/// Null space of a square matrix over F_p, as column vectors.
fn null_space(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let red = rref(a.to_vec(), p);
    let free: Vec<usize> = (0..n).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in red.rows.iter().zip(&red.pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial det(xI - A), low degree first, via Hessenberg reduction.
fn char_poly(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for c in 0..n.saturating_sub(2) {
        let Some(k) = (c + 1..n).find(|&k| h[k][c] != 0) else { continue };
        if k != c + 1 {
            h.swap(k, c + 1);
            for row in h.iter_mut() {
                row.swap(k, c + 1);
            }
        }
        let inv = inv_mod(h[c + 1][c], p);
        for r in c + 2..n {
            if h[r][c] == 0 {
                continue;
            }
            let f = h[r][c] * inv % p;
            for j in 0..n {
                let t = f * h[c + 1][j] % p;
                h[r][j] = (h[r][j] + p - t) % p;
            }
            for row in h.iter_mut() {
                let t = f * row[r] % p;
                row[c + 1] = (row[c + 1] + t) % p;
            }
        }
    }
    // polys[k] = char poly of the leading k x k block
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let m = k - 1;
        let mut next = vec![0u64; k + 1];
        for (i, &c) in polys[m].iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            next[i] = (next[i] + p - h[m][m] * c % p) % p;
        }
        let mut prod = 1u64;
        for i in (0..m).rev() {
            prod = prod * h[i + 1][i] % p;
            if prod == 0 {
                break;
            }
            let coef = prod * h[i][m] % p;
            for (j, &c) in polys[i].iter().enumerate() {
                next[j] = (next[j] + p - coef * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap_or_default()
}

fn eval_poly(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// `m[j][l]` = number of x in class i with x⁻¹ z_l in class j.
fn class_matrix(g: &Group, i: usize, p: u64) -> Vec<Vec<u64>> {
    let r = g.class_count();
    let mut m = vec![vec![0u64; r]; r];
    for (l, cl) in g.classes().iter().enumerate() {
        let z = cl.representative;
        for &x in &g.classes()[i].elements {
            let j = g.class_of(g.mul(g.inv(x), z));
            m[j][l] += 1;
        }
    }
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x %= p;
        }
    }
    m
}

fn split(space: Subspace, m: &[Vec<u64>], p: u64) -> Result<Vec<Subspace>, ChartabError> {
    let d = space.rows.len();
    // restricted[k'][k] = coordinate k' of M b_k
    let images: Vec<Vec<u64>> = space
        .rows
        .iter()
        .map(|b| m.iter().map(|row| row.iter().zip(b).fold(0, |acc, (&x, &y)| (acc + x * y) % p)).collect())
        .collect();
    let restricted: Vec<Vec<u64>> =
        (0..d).map(|kp| (0..d).map(|k| images[k][space.pivots[kp]]).collect()).collect();
    let poly = char_poly(&restricted, p);
    let mut roots = Vec::new();
    for lambda in 0..p {
        if eval_poly(&poly, lambda, p) == 0 {
            roots.push(lambda);
            if roots.len() == d {
                break;
            }
        }
    }
    let mut parts = Vec::new();
    let mut total = 0;
    for lambda in roots {
        let shifted: Vec<Vec<u64>> = restricted
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter().enumerate().map(|(c, &x)| if r == c { (x + p - lambda) % p } else { x }).collect()
            })
            .collect();
        let ns = null_space(&shifted, p);
        total += ns.len();
        let vectors: Vec<Vec<u64>> = ns
            .iter()
            .map(|coords| {
                let mut v = vec![0u64; m.len()];
                for (c, b) in coords.iter().zip(&space.rows) {
                    if *c != 0 {
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = (*x + c * y) % p;
                        }
                    }
                }
                v
            })
            .collect();
        if !vectors.is_empty() {
            parts.push(rref(vectors, p));
        }
    }
    if total != d {
        return Err(ChartabError::EigensplitFailure(format!("eigenspaces of dimension {total} in a space of dimension {d}")));
    }
    Ok(parts)
}

pub fn character_table(g: &Group) -> Result<CharacterTable, ChartabError> {
    let order = g.order();
    let e = g.exponent();
    let r = g.class_count();
    let p = choose_prime(order, e)?;
    let id_class = g.identity_class();

    let class_matrices: Vec<Vec<Vec<u64>>> = (0..r).into_par_iter().map(|i| class_matrix(g, i, p)).collect();

    let identity: Vec<Vec<u64>> = (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect();
    let mut done = Vec::new();
    let mut pending = vec![Subspace { rows: identity, pivots: (0..r).collect() }];
    for (i, m) in class_matrices.iter().enumerate() {
        if pending.is_empty() {
            break;
        }
        if i == id_class {
            continue;
        }
        let mut next = Vec::new();
        for s in pending {
            for part in split(s, m, p)? {
                if part.rows.len() == 1 {
                    done.push(part);
                } else {
                    next.push(part);
                }
            }
        }
        pending = next;
    }
    if let Some(s) = pending.iter().find(|s| s.rows.len() > 1) {
        return Err(ChartabError::EigensplitFailure(format!("common eigenspace of dimension {}", s.rows.len())));
    }
    done.extend(pending);
    if done.len() != r {
        return Err(ChartabError::EigensplitFailure(format!("found {} characters for {r} classes", done.len())));
    }

    let sizes: Vec<u64> = g.classes().iter().map(|c| c.size() as u64).collect();
    let inverse_class: Vec<usize> = g.classes().iter().map(|c| g.class_of(g.inv(c.representative))).collect();
    let power_map: Vec<Vec<usize>> = g
        .classes()
        .iter()
        .map(|c| (0..e).map(|j| g.class_of(g.pow(c.representative, j))).collect())
        .collect();
    let big_z = pow_mod(primitive_root(p), (p - 1) / e as u64, p);
    let ring = CycRing::new(e as u32);

    let mut rows: Vec<(usize, Vec<Cyclotomic>, Vec<Vec<i64>>)> = Vec::with_capacity(r);
    for s in &done {
        let w0 = &s.rows[0];
        let scale = inv_mod(w0[id_class], p);
        let w: Vec<u64> = w0.iter().map(|&x| x * scale % p).collect();
        let sum = (0..r).fold(0, |acc, l| (acc + w[l] * w[inverse_class[l]] % p * inv_mod(sizes[l] % p, p)) % p);
        if sum == 0 {
            return Err(ChartabError::EigensplitFailure("degenerate central character".into()));
        }
        let d2 = order as u64 % p * inv_mod(sum, p) % p;
        let degree = (1..=order as u64)
            .take_while(|d| d * d <= order as u64)
            .find(|d| d * d % p == d2)
            .ok_or_else(|| ChartabError::EigensplitFailure("no degree matches the central character".into()))?;
        let theta: Vec<u64> = (0..r).map(|l| w[l] * degree % p * inv_mod(sizes[l] % p, p) % p).collect();

        let mut ring_row = Vec::with_capacity(r);
        for (l, cl) in g.classes().iter().enumerate() {
            let o = g.element_order(cl.representative);
            let z = pow_mod(big_z, (e / o) as u64, p);
            let o_inv = inv_mod(o as u64 % p, p);
            let mut value = ring.zero();
            let mut count = 0u64;
            for s in 0..o {
                let zs = pow_mod(z, ((o - s) % o) as u64, p);
                let mut acc = 0u64;
                let mut zjs = 1u64;
                for j in 0..o {
                    acc = (acc + theta[power_map[l][j]] * zjs) % p;
                    zjs = zjs * zs % p;
                }
                let mult = acc * o_inv % p;
                if mult > degree {
                    return Err(ChartabError::VerificationFailure(format!(
                        "eigenvalue multiplicity {mult} exceeds degree {degree}"
                    )));
                }
                count += mult;
                if mult > 0 {
                    let root = ring.root((s * (e / o)) as i64);
                    for (v, x) in value.iter_mut().zip(root) {
                        *v += mult as i64 * x;
                    }
                }
            }
            if count != degree {
                return Err(ChartabError::VerificationFailure(format!(
                    "multiplicities sum to {count}, not the degree {degree}"
                )));
            }
            ring_row.push(value);
        }
        let exact = ring_row.iter().map(|v| ring.to_cyclotomic(v)).collect();
        rows.push((degree as usize, exact, ring_row));
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    verify(g, &ring, &rows.iter().map(|row| row.2.clone()).collect::<Vec<_>>())?;

    let degrees = rows.iter().map(|row| row.0).collect();
    let values = rows.into_iter().map(|row| row.1).collect();
    Ok(CharacterTable { group: g.clone(), degrees, values, power_map, prime: p })
}

fn verify(g: &Group, ring: &CycRing, rows: &[Vec<Vec<i64>>]) -> Result<(), ChartabError> {
    let r = rows.len();
    let order = g.order() as i64;
    let id_class = g.identity_class();
    let degree_squares: i64 = rows.iter().map(|row| row[id_class][0] * row[id_class][0]).sum();
    if degree_squares != order {
        return Err(ChartabError::VerificationFailure(format!("sum of squared degrees is {degree_squares}")));
    }
    let conj: Vec<Vec<Vec<i64>>> = rows.iter().map(|row| row.iter().map(|v| ring.conj(v)).collect()).collect();
    let sizes: Vec<i64> = g.classes().iter().map(|c| c.size() as i64).collect();
    for i in 0..r {
        for j in 0..r {
            let mut wide = ring.wide_zero();
            for l in 0..r {
                let mut a = rows[i][l].clone();
                CycRing::scale_assign(&mut a, sizes[l]);
                CycRing::mul_acc(&mut wide, &a, &conj[j][l]);
            }
            if ring.reduce(&wide) != ring.from_int(if i == j { order } else { 0 }) {
                return Err(ChartabError::VerificationFailure(format!("rows {i} and {j} are not orthogonal")));
            }
        }
    }
    for l in 0..r {
        for m in 0..r {
            let mut wide = ring.wide_zero();
            for i in 0..r {
                CycRing::mul_acc(&mut wide, &rows[i][l], &conj[i][m]);
            }
            let expect = if l == m { order / sizes[l] } else { 0 };
            if ring.reduce(&wide) != ring.from_int(expect) {
                return Err(ChartabError::VerificationFailure(format!("columns {l} and {m} are not orthogonal")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{named_group, NAMED_GROUPS};

    fn int(v: i64) -> Cyclotomic {
        Cyclotomic::from_integer(v)
    }

    #[test]
    fn z2() {
        let t = character_table(&named_group("Z2").unwrap()).unwrap();
        assert_eq!(t.degrees(), &[1, 1]);
        assert_eq!(t.values(), &[vec![int(1), int(1)], vec![int(1), int(-1)]]);
    }

    #[test]
    fn z3() {
        let t = character_table(&named_group("Z3").unwrap()).unwrap();
        let z = |k| Cyclotomic::root_of_unity(3, k);
        assert_eq!(t.degrees(), &[1, 1, 1]);
        assert_eq!(t.values(), &[vec![int(1); 3], vec![int(1), z(1), z(2)], vec![int(1), z(2), z(1)]]);
    }

    #[test]
    fn s3() {
        let g = named_group("S3").unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(t.degrees(), &[1, 1, 2]);
        for (c, cl) in g.classes().iter().enumerate() {
            let expect = match g.element_order(cl.representative) {
                1 => 2,
                2 => 0,
                _ => -1,
            };
            assert_eq!(t.value(2, c), &int(expect));
        }
    }

    #[test]
    fn cyclic_tables_match_dft() {
        for n in 1..=12usize {
            let g = named_group(&format!("Z{n}")).unwrap();
            let t = character_table(&g).unwrap();
            assert!(t.degrees().iter().all(|&d| d == 1));
            let mut rows: Vec<Vec<Cyclotomic>> = (0..n)
                .map(|k| (0..n).map(|x| Cyclotomic::root_of_unity(n as u32, (k * x) as i64)).collect())
                .collect();
            rows.sort();
            // cyclic group classes are singletons in element order
            assert_eq!(t.values(), rows.as_slice(), "Z{n}");
        }
    }

    #[test]
    fn library_tables_are_sound() {
        for name in NAMED_GROUPS {
            let g = named_group(name).unwrap();
            let t = character_table(&g).unwrap();
            assert_eq!(t.irr_count(), g.class_count());
            assert_eq!(t.degrees().iter().map(|d| d * d).sum::<usize>(), g.order());
            assert!(t.values()[0].iter().all(Cyclotomic::is_one), "{name}");
        }
    }

    #[test]
    fn deterministic() {
        let g = named_group("S4").unwrap();
        let a = character_table(&g).unwrap();
        let b = character_table(&g).unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(a.degrees(), &[1, 1, 2, 3, 3]);
    }

    #[test]
    fn class_maps() {
        let g = named_group("S3").unwrap();
        let t = character_table(&g).unwrap();
        let whole = g.subgroup(&(0..6).collect::<Vec<_>>()).unwrap();
        let m = restrict_and_index(&t, &whole).unwrap();
        assert_eq!(m.local_class, (0..6).map(|x| g.class_of(x)).collect::<Vec<_>>());
        let triv = g.subgroup(&[g.identity()]).unwrap();
        assert_eq!(restrict_and_index(&t, &triv).unwrap().local_class, vec![0]);
        let tr = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let h = g.subgroup(&[g.identity(), tr]).unwrap();
        let m = restrict_and_index(&t, &h).unwrap();
        assert_eq!(m.local_class, vec![0, 1]);
        assert_eq!(m.fusion, vec![g.identity_class(), g.class_of(tr)]);
        let other = named_group("Z3").unwrap().subgroup(&[0, 1, 2]).unwrap();
        let z2 = character_table(&named_group("Z2").unwrap()).unwrap();
        assert!(restrict_and_index(&z2, &other).is_err());
    }

    #[test]
    fn prime_choice() {
        assert_eq!(choose_prime(6, 6).unwrap(), 7);
        assert_eq!(choose_prime(24, 12).unwrap(), 13);
        assert_eq!(choose_prime(1, 1).unwrap(), 3);
    }
}
