//! Dense square matrices over Z[ζ_n] with `i128` coefficients, and exact rank
//! over the cyclotomic field.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::cyclo::{CycRing, Cyclotomic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMatrix {
    ring: CycRing,
    n: usize,
    /// entry (i, j) occupies `data[(i * n + j) * w ..][..w]`.
    data: Vec<i128>,
}

impl RingMatrix {
    pub fn zero(ring: &CycRing, n: usize) -> Self {
        RingMatrix { ring: ring.clone(), n, data: vec![0; n * n * ring.width()] }
    }

    pub fn from_fn(ring: &CycRing, n: usize, f: impl Fn(usize, usize) -> Vec<i64>) -> Self {
        let mut m = Self::zero(ring, n);
        for i in 0..n {
            for j in 0..n {
                let v = f(i, j);
                for (d, x) in m.entry_mut(i, j).iter_mut().zip(v) {
                    *d = i128::from(x);
                }
            }
        }
        m
    }

    pub fn identity(ring: &CycRing, n: usize) -> Self {
        Self::from_fn(ring, n, |i, j| ring.from_int(i64::from(i == j)))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &[i128] {
        let w = self.ring.width();
        let k = (i * self.n + j) * w;
        &self.data[k..k + w]
    }

    fn entry_mut(&mut self, i: usize, j: usize) -> &mut [i128] {
        let w = self.ring.width();
        let k = (i * self.n + j) * w;
        &mut self.data[k..k + w]
    }

    pub fn scaled(&self, k: i128) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|x| *x *= k);
        out
    }

    fn reduce(&self, wide: &[i128]) -> Vec<i128> {
        let w = self.ring.width();
        let mut out = wide[..w].to_vec();
        for (k, &c) in wide.iter().enumerate().skip(w) {
            if c != 0 {
                for (o, &p) in out.iter_mut().zip(self.ring.power(k)) {
                    *o += c * i128::from(p);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &RingMatrix) -> RingMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let w = self.ring.width();
        let rows: Vec<Vec<i128>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = Vec::with_capacity(n * w);
                for j in 0..n {
                    let mut wide = vec![0i128; 2 * w - 1];
                    for k in 0..n {
                        let (a, b) = (self.entry(i, k), other.entry(k, j));
                        for (s, &x) in a.iter().enumerate() {
                            if x != 0 {
                                for (t, &y) in b.iter().enumerate() {
                                    wide[s + t] += x * y;
                                }
                            }
                        }
                    }
                    row.extend(self.reduce(&wide));
                }
                row
            })
            .collect();
        RingMatrix { ring: self.ring.clone(), n, data: rows.concat() }
    }

    /// Entry (i, j) divided by `den`, as an exact cyclotomic.
    pub fn value(&self, i: usize, j: usize, den: &BigInt) -> Cyclotomic {
        let coeffs = self.entry(i, j).iter().map(|&c| BigRational::new(BigInt::from(c), den.clone())).collect();
        Cyclotomic::from_reduced(self.ring.conductor(), coeffs)
    }

    pub fn to_cyclotomic_rows(&self, den: &BigInt) -> Vec<Vec<Cyclotomic>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.value(i, j, den)).collect()).collect()
    }

    /// First (i, j) where the matrices differ.
    pub fn first_difference(&self, other: &RingMatrix) -> Option<(usize, usize)> {
        (0..self.n).flat_map(|i| (0..self.n).map(move |j| (i, j))).find(|&(i, j)| self.entry(i, j) != other.entry(i, j))
    }
}

/// Rank over the cyclotomic field by Gaussian elimination with exact inverses.
pub fn rank(rows: &[Vec<Cyclotomic>]) -> usize {
    let mut m: Vec<Vec<Cyclotomic>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        let pivot: Vec<Cyclotomic> = m[r].iter().map(|x| x * &inv).collect();
        let below: Vec<Vec<Cyclotomic>> = m[r + 1..]
            .par_iter()
            .map(|row| {
                if row[c].is_zero() {
                    return row.clone();
                }
                let f = row[c].clone();
                row.iter().zip(&pivot).map(|(x, y)| x - &(&f * y)).collect()
            })
            .collect();
        m.truncate(r + 1);
        m.extend(below);
        m[r] = pivot;
        r += 1;
    }
    r
}
