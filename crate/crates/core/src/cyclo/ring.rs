use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::conductor::{conductor_data, ConductorData};
use super::Cyclotomic;

/// Integral elements of Q(ζ_n) at a fixed conductor, as `i64` coefficient
/// vectors in the power basis. Arithmetic panics on overflow.
#[derive(Debug, Clone)]
pub struct CycRing {
    data: Arc<ConductorData>,
}

pub type RingElem = Vec<i64>;

impl CycRing {
    pub fn new(n: u32) -> Self {
        CycRing { data: conductor_data(n) }
    }

    pub fn conductor(&self) -> u32 {
        self.data.n
    }

    /// Number of coefficients, φ(n).
    pub fn width(&self) -> usize {
        self.data.phi
    }

    pub fn zero(&self) -> RingElem {
        vec![0; self.data.phi]
    }

    pub fn from_int(&self, v: i64) -> RingElem {
        let mut out = self.zero();
        out[0] = v;
        out
    }

    /// ζ_n^k.
    pub fn root(&self, k: i64) -> RingElem {
        self.data.power(k.rem_euclid(self.data.n as i64) as usize).to_vec()
    }

    /// ζ_n^k reduced to the power basis, for any k.
    pub fn power(&self, k: usize) -> &[i64] {
        self.data.power(k)
    }

    pub fn is_zero(a: &[i64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add_assign(a: &mut [i64], b: &[i64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x += y;
        }
    }

    pub fn sub_assign(a: &mut [i64], b: &[i64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x -= y;
        }
    }

    pub fn scale_assign(a: &mut [i64], k: i64) {
        for x in a.iter_mut() {
            *x *= k;
        }
    }

    /// Scratch buffer for [`CycRing::mul_acc`], of length 2φ − 1.
    pub fn wide_zero(&self) -> Vec<i64> {
        vec![0; 2 * self.data.phi - 1]
    }

    /// `wide += a·b` without reduction.
    #[inline]
    pub fn mul_acc(wide: &mut [i64], a: &[i64], b: &[i64]) {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (w, &y) in wide[i..].iter_mut().zip(b) {
                *w += x * y;
            }
        }
    }

    /// Reduces an exponent-indexed vector of any length.
    pub fn reduce(&self, wide: &[i64]) -> RingElem {
        let phi = self.data.phi;
        let n = self.data.n as usize;
        let mut out = self.zero();
        for (k, &c) in wide.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let kk = k % n;
            if kk < phi {
                out[kk] += c;
            } else {
                for (o, &p) in out.iter_mut().zip(&self.data.powers[kk]) {
                    *o += c * p;
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> RingElem {
        let mut wide = self.wide_zero();
        Self::mul_acc(&mut wide, a, b);
        self.reduce(&wide)
    }

    pub fn conj(&self, a: &[i64]) -> RingElem {
        let n = self.data.n as usize;
        let mut wide = vec![0i64; n];
        for (k, &c) in a.iter().enumerate() {
            if c != 0 {
                wide[(n - k) % n] += c;
            }
        }
        self.reduce(&wide)
    }

    /// Galois automorphism ζ ↦ ζ^s for `s` coprime to n.
    pub fn galois(&self, a: &[i64], s: i64) -> RingElem {
        let n = self.data.n as usize;
        let s = s.rem_euclid(n as i64) as usize;
        let mut wide = vec![0i64; n];
        for (k, &c) in a.iter().enumerate() {
            if c != 0 {
                wide[(k * s) % n] += c;
            }
        }
        self.reduce(&wide)
    }

    pub fn to_cyclotomic(&self, a: &[i64]) -> Cyclotomic {
        let coeffs = a.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        Cyclotomic::from_reduced(self.data.n, coeffs)
    }

    /// `a / d` as a canonical cyclotomic.
    pub fn to_cyclotomic_div(&self, a: &[i64], d: i64) -> Cyclotomic {
        assert!(d != 0, "division by zero");
        let d = BigInt::from(d);
        let coeffs = a.iter().map(|&c| BigRational::new(BigInt::from(c), d.clone())).collect();
        Cyclotomic::from_reduced(self.data.n, coeffs)
    }

    /// Coefficients of `x` at this conductor, if `x` lies in the field and is
    /// integral in the power basis.
    pub fn from_cyclotomic(&self, x: &Cyclotomic) -> Option<RingElem> {
        if !self.data.n.is_multiple_of(x.conductor()) {
            return None;
        }
        x.coeffs_at(self.data.n)
            .into_iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    /// Exact division by an integer, if every coefficient is divisible.
    pub fn div_exact(a: &[i64], d: i64) -> Option<RingElem> {
        a.iter().map(|&c| (c % d == 0).then(|| c / d)).collect()
    }

    pub fn is_rational(a: &[i64]) -> bool {
        a.iter().skip(1).all(|&c| c == 0)
    }
}

impl PartialEq for CycRing {
    fn eq(&self, other: &Self) -> bool {
        self.data.n == other.data.n
    }
}

impl Eq for CycRing {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_matches_field() {
        let r = CycRing::new(12);
        for a in 0..12 {
            for b in 0..12 {
                let p = r.mul(&r.root(a), &r.root(b));
                assert_eq!(r.to_cyclotomic(&p), Cyclotomic::root_of_unity(12, a + b));
            }
            assert_eq!(r.to_cyclotomic(&r.conj(&r.root(a))), Cyclotomic::root_of_unity(12, -a));
        }
    }

    #[test]
    fn round_trip() {
        let r = CycRing::new(24);
        let x = &Cyclotomic::root_of_unity(8, 3) + &Cyclotomic::root_of_unity(3, 1);
        let v = r.from_cyclotomic(&x).unwrap();
        assert_eq!(r.to_cyclotomic(&v), x);
        assert!(r.from_cyclotomic(&Cyclotomic::root_of_unity(5, 1)).is_none());
        assert_eq!(r.to_cyclotomic_div(&r.from_int(3), 6), Cyclotomic::from_rational(BigRational::new(1.into(), 2.into())));
    }
}
