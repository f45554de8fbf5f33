//! Per-conductor tables: the cyclotomic polynomial, reduced powers of ζ and
//! the data needed to recognise elements of maximal subfields.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) fn totient(n: u32) -> usize {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

pub(crate) fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest conductor describing the same field: Q(ζ_2k) = Q(ζ_k) for odd k.
pub(crate) fn normalize_conductor(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

/// A maximal proper subfield Q(ζ_m) ⊂ Q(ζ_n) together with a left inverse of
/// its embedding matrix.
#[derive(Debug)]
pub(crate) struct Subfield {
    pub m: u32,
    /// `embed[j]` is ζ_m^j written in the power basis of conductor n.
    pub embed: Vec<Vec<i64>>,
    pub pivots: Vec<usize>,
    /// Inverse of the square submatrix of `embed` on rows `pivots`;
    /// `solve[j][s]` is the weight of coordinate `pivots[s]` in coefficient j.
    pub solve: Vec<Vec<BigRational>>,
}

#[derive(Debug)]
pub(crate) struct ConductorData {
    pub n: u32,
    pub phi: usize,
    /// Φ_n, monic, low degree first.
    pub poly: Vec<i64>,
    /// `powers[k]` is ζ_n^k reduced to degree < φ(n), for k < n.
    pub powers: Vec<Vec<i64>>,
    pub subfields: Vec<Subfield>,
}

impl ConductorData {
    #[inline]
    pub fn power(&self, k: usize) -> &[i64] {
        &self.powers[k % self.n as usize]
    }
}

static CACHE: OnceLock<RwLock<HashMap<u32, Arc<ConductorData>>>> = OnceLock::new();

/// Cached tables for conductor `n`. Concurrent callers may both build the
/// tables; the first insert wins and the results are identical anyway.
pub(crate) fn conductor_data(n: u32) -> Arc<ConductorData> {
    assert!(n >= 1, "conductor must be positive");
    let cache = CACHE.get_or_init(Default::default);
    if let Some(d) = cache.read().expect("conductor cache poisoned").get(&n) {
        return Arc::clone(d);
    }
    let built = Arc::new(build(n));
    let mut w = cache.write().expect("conductor cache poisoned");
    Arc::clone(w.entry(n).or_insert(built))
}

/// Integer coefficients of Φ_n, by dividing x^n - 1 by Φ_d for every proper divisor d.
pub(crate) fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut num: Vec<i128> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div: Vec<i128> = cyclotomic_polynomial(d).into_iter().map(i128::from).collect();
            num = exact_div_monic(&num, &div);
        }
    }
    num.into_iter().map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow")).collect()
}

fn exact_div_monic(num: &[i128], div: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = div.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in div.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    q
}

fn build(n: u32) -> ConductorData {
    let poly = cyclotomic_polynomial(n);
    let phi = poly.len() - 1;
    debug_assert_eq!(phi, totient(n));

    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce by the monic Φ_n
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] = cur[i].checked_sub(top * poly[i]).expect("power table overflow");
            }
        }
    }

    let mut candidates: Vec<u32> =
        prime_divisors(n).into_iter().map(|p| normalize_conductor(n / p)).filter(|&m| m != n).collect();
    candidates.sort_unstable();
    candidates.dedup();
    let subfields = candidates.into_iter().map(|m| subfield(n, phi, &powers, m)).collect();

    ConductorData { n, phi, poly, powers, subfields }
}

fn subfield(n: u32, phi: usize, powers: &[Vec<i64>], m: u32) -> Subfield {
    let phi_m = totient(m);
    let step = (n / m) as usize;
    let embed: Vec<Vec<i64>> = (0..phi_m).map(|j| powers[(j * step) % n as usize].clone()).collect();

    // Pick independent rows of the phi x phi_m matrix by elimination.
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut rows: Vec<Vec<BigRational>> = (0..phi).map(|r| embed.iter().map(|col| q(col[r])).collect()).collect();
    let mut pivots = Vec::with_capacity(phi_m);
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut lead: Vec<usize> = Vec::new();
    for (r, row) in rows.iter_mut().enumerate() {
        for (b, &l) in basis.iter().zip(&lead) {
            if !row[l].is_zero() {
                let f = row[l].clone() / &b[l];
                for c in 0..phi_m {
                    let t = &f * &b[c];
                    row[c] -= t;
                }
            }
        }
        if let Some(l) = row.iter().position(|x| !x.is_zero()) {
            pivots.push(r);
            basis.push(row.clone());
            lead.push(l);
            if pivots.len() == phi_m {
                break;
            }
        }
    }
    assert_eq!(pivots.len(), phi_m, "subfield embedding is not injective");

    // Invert the square submatrix A[s][j] = embed[j][pivots[s]].
    let mut a: Vec<Vec<BigRational>> = pivots
        .iter()
        .map(|&r| {
            let mut row: Vec<BigRational> = embed.iter().map(|col| q(col[r])).collect();
            row.extend((0..phi_m).map(|_| BigRational::zero()));
            row
        })
        .collect();
    for (s, row) in a.iter_mut().enumerate() {
        row[phi_m + s] = BigRational::one();
    }
    for col in 0..phi_m {
        let p = (col..phi_m).find(|&r| !a[r][col].is_zero()).expect("singular subfield block");
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    // a = [I | A^-1]; A^-1[j][s] maps coordinates at pivots back to coefficients.
    let solve = (0..phi_m).map(|j| a[j][phi_m..].to_vec()).collect();
    Subfield { m, embed, pivots, solve }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // first cyclotomic polynomial with a coefficient outside {-1,0,1}
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn totients() {
        let expect = [(1, 1), (2, 1), (3, 2), (4, 2), (12, 4), (24, 8), (105, 48)];
        for (n, t) in expect {
            assert_eq!(totient(n), t);
        }
    }

    #[test]
    fn subfield_candidates() {
        let d = conductor_data(12);
        let ms: Vec<u32> = d.subfields.iter().map(|s| s.m).collect();
        assert_eq!(ms, vec![3, 4]);
        let d = conductor_data(6);
        let ms: Vec<u32> = d.subfields.iter().map(|s| s.m).collect();
        assert_eq!(ms, vec![1, 3]);
    }

    #[test]
    fn powers_wrap() {
        let d = conductor_data(4);
        assert_eq!(d.power(2), &[-1, 0]);
        assert_eq!(d.power(4), &[1, 0]);
    }
}
