//! Exact arithmetic in cyclotomic fields.
//!
//! A [`Cyclotomic`] is always stored in canonical form: its conductor is the
//! smallest `n` with the value in Q(ζ_n), and its coefficients are taken in the
//! power basis `1, ζ_n, …, ζ_n^(φ(n)-1)`. Two values are equal exactly when
//! their representations are identical, so `==` is structural.
//!
//! [`CycRing`] is the fast path used for character tables: integral values at
//! one fixed conductor, stored as `i64` coefficient vectors.

mod conductor;
mod ring;
mod serial;

pub use ring::CycRing;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use conductor::{conductor_data, normalize_conductor};
pub(crate) use conductor::totient;

pub type Rational = BigRational;

/// Coefficients of the n-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    conductor_data(n).poly.clone()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<Rational>,
}

fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Reduces a coefficient vector indexed by exponent (any length) into the
/// power basis of conductor n.
fn reduce_at(n: u32, wide: &[Rational]) -> Vec<Rational> {
    let data = conductor_data(n);
    let phi = data.phi;
    let mut out: Vec<Rational> = vec![Rational::zero(); phi];
    for (k, c) in wide.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let kk = k % n as usize;
        if kk < phi {
            out[kk] += c;
        } else {
            for (o, &p) in out.iter_mut().zip(data.power(kk)) {
                if p != 0 {
                    *o += c * q(p);
                }
            }
        }
    }
    out
}

fn embed_at(from: u32, coeffs: &[Rational], to: u32) -> Vec<Rational> {
    if from == to {
        return coeffs.to_vec();
    }
    debug_assert_eq!(to % from, 0);
    let step = (to / from) as usize;
    let data = conductor_data(to);
    let mut out = vec![Rational::zero(); data.phi];
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = (j * step) % to as usize;
        if k < data.phi {
            out[k] += c;
        } else {
            for (o, &p) in out.iter_mut().zip(data.power(k)) {
                if p != 0 {
                    *o += c * q(p);
                }
            }
        }
    }
    out
}

fn mul_at(n: u32, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut wide = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                wide[i + j] += x * y;
            }
        }
    }
    reduce_at(n, &wide)
}

/// Moves a reduced vector at conductor n down to the smallest subfield
/// containing it.
fn descend(mut n: u32, mut v: Vec<Rational>) -> Cyclotomic {
    'outer: loop {
        if v.iter().skip(1).all(Zero::is_zero) {
            v.truncate(1);
            return Cyclotomic { conductor: 1, coeffs: v };
        }
        let data = conductor_data(n);
        for sf in &data.subfields {
            let y: Vec<Rational> = sf
                .solve
                .iter()
                .map(|w| {
                    w.iter().zip(&sf.pivots).fold(Rational::zero(), |acc, (ws, &r)| {
                        if ws.is_zero() || v[r].is_zero() {
                            acc
                        } else {
                            acc + ws * &v[r]
                        }
                    })
                })
                .collect();
            let fits = (0..data.phi).all(|r| {
                let back = sf
                    .embed
                    .iter()
                    .zip(&y)
                    .filter(|(col, yj)| col[r] != 0 && !yj.is_zero())
                    .fold(Rational::zero(), |acc, (col, yj)| acc + yj * q(col[r]));
                back == v[r]
            });
            if fits {
                n = sf.m;
                v = y;
                continue 'outer;
            }
        }
        return Cyclotomic { conductor: n, coeffs: v };
    }
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![q(v)] }
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![Rational::from_integer(v)] }
    }

    pub fn from_rational(v: Rational) -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![v] }
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as usize;
        let mut wide = vec![Rational::zero(); k + 1];
        wide[k] = Rational::one();
        Self::from_coeffs(n, &wide)
    }

    pub fn zeta(n: u32) -> Self {
        Self::root_of_unity(n, 1)
    }

    /// Canonical form of `Σ coeffs[k] ζ_n^k`; `coeffs` may have any length.
    pub fn from_coeffs(n: u32, coeffs: &[Rational]) -> Self {
        assert!(n >= 1);
        descend(n, reduce_at(n, coeffs))
    }

    pub fn from_int_coeffs(n: u32, coeffs: &[i64]) -> Self {
        let c: Vec<Rational> = coeffs.iter().map(|&v| q(v)).collect();
        Self::from_coeffs(n, &c)
    }

    /// Coefficients indexed by exponent 0..conductor, slots φ(n) and above zero.
    pub fn full_coeffs(&self) -> Vec<Rational> {
        let mut v = self.coeffs.clone();
        v.resize(self.conductor as usize, Rational::zero());
        v
    }

    /// Power-basis coefficients at a conductor `n` already reduced mod Φ_n.
    pub(crate) fn from_reduced(n: u32, coeffs: Vec<Rational>) -> Self {
        debug_assert_eq!(coeffs.len(), totient(n));
        descend(n, coeffs)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coefficients in the power basis of the conductor, length φ(conductor).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Nonzero `(exponent, coefficient)` pairs, ascending by exponent.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|v| v.to_i64())
    }

    /// Coefficients at a multiple `m` of the conductor.
    pub(crate) fn coeffs_at(&self, m: u32) -> Vec<Rational> {
        embed_at(self.conductor, &self.coeffs, m)
    }

    fn common(a: &Self, b: &Self) -> u32 {
        normalize_conductor(a.conductor.lcm(&b.conductor))
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// The Galois automorphism ζ ↦ ζ^a, for `a` coprime to the conductor.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.conductor;
        if n == 1 {
            return self.clone();
        }
        let a = a.rem_euclid(n as i64) as usize;
        assert_eq!(a.gcd(&(n as usize)), 1, "galois exponent must be a unit");
        let mut wide = vec![Rational::zero(); n as usize];
        for (k, c) in self.terms() {
            wide[(k * a) % n as usize] += c;
        }
        // automorphisms preserve the minimal conductor
        Cyclotomic { conductor: n, coeffs: reduce_at(n, &wide) }
    }

    /// Product of all Galois conjugates; always rational.
    pub fn norm(&self) -> Rational {
        let n = self.conductor;
        let mut acc = self.coeffs.clone();
        for a in 2..n as i64 {
            if (a as u32).gcd(&n) == 1 {
                acc = mul_at(n, &acc, &self.galois(a).coeffs);
            }
        }
        let r = Cyclotomic::from_reduced(n, acc);
        r.as_rational().cloned().expect("norm of a cyclotomic must be rational")
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(r.recip()));
        }
        let n = self.conductor;
        let mut others = vec![Rational::zero(); self.coeffs.len()];
        others[0] = Rational::one();
        for a in 2..n as i64 {
            if (a as u32).gcd(&n) == 1 {
                others = mul_at(n, &others, &self.galois(a).coeffs);
            }
        }
        let norm = self.norm();
        let scaled: Vec<Rational> = others.into_iter().map(|c| c / &norm).collect();
        Some(Cyclotomic::from_reduced(n, scaled))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self * &i)
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclotomic::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Cyclotomic::zero();
        }
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&q(k))
    }

    /// Floating-point value; for display only.
    pub fn approx(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        self.terms().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * k as f64 / n;
            (re + c * t.cos(), im + c * t.sin())
        })
    }

    /// `(order, exponent)` with `self = ζ_order^exponent` in lowest terms.
    pub fn as_root_of_unity(&self) -> Option<(u32, u32)> {
        let l = self.conductor.lcm(&2);
        let (re, im) = self.approx();
        if ((re * re + im * im) - 1.0).abs() > 1e-6 {
            return None;
        }
        let angle = im.atan2(re).rem_euclid(std::f64::consts::TAU);
        let k = ((angle * l as f64 / std::f64::consts::TAU).round() as i64).rem_euclid(l as i64) as u32;
        if Cyclotomic::root_of_unity(l, k as i64) != *self {
            return None;
        }
        let g = k.gcd(&l);
        Some((l / g, k / g))
    }

    /// `Σ a_i b_i` with a single canonicalisation at the end.
    pub fn dot<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a Cyclotomic, &'a Cyclotomic)>,
    {
        let pairs: Vec<(&Cyclotomic, &Cyclotomic)> =
            pairs.into_iter().filter(|(a, b)| !a.is_zero() && !b.is_zero()).collect();
        let n = pairs.iter().fold(1u32, |n, (a, b)| normalize_conductor(n.lcm(&a.conductor).lcm(&b.conductor)));
        let phi = totient(n);
        let mut wide = vec![Rational::zero(); 2 * phi - 1];
        for (a, b) in pairs {
            let x = a.coeffs_at(n);
            let y = b.coeffs_at(n);
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, yj) in y.iter().enumerate() {
                    if !yj.is_zero() {
                        wide[i + j] += xi * yj;
                    }
                }
            }
        }
        descend(n, reduce_at(n, &wide))
    }

    /// `Σ k_i x_i` for integer weights, canonicalised once.
    pub fn weighted_sum<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, &'a Cyclotomic)>,
    {
        let terms: Vec<(i64, &Cyclotomic)> = terms.into_iter().filter(|(k, x)| *k != 0 && !x.is_zero()).collect();
        let n = terms.iter().fold(1u32, |n, (_, x)| normalize_conductor(n.lcm(&x.conductor)));
        let mut acc = vec![Rational::zero(); totient(n)];
        for (k, x) in terms {
            let k = q(k);
            for (a, c) in acc.iter_mut().zip(x.coeffs_at(n)) {
                if !c.is_zero() {
                    *a += &k * c;
                }
            }
        }
        descend(n, acc)
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Cyclotomic>>(items: I) -> Self {
        Self::weighted_sum(items.into_iter().map(|x| (1, x)))
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let n = Cyclotomic::common(self, rhs);
        let mut a = self.coeffs_at(n);
        for (x, y) in a.iter_mut().zip(rhs.coeffs_at(n)) {
            *x += y;
        }
        descend(n, a)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero();
        }
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        let n = Cyclotomic::common(self, rhs);
        descend(n, mul_at(n, &self.coeffs_at(n), &rhs.coeffs_at(n)))
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl From<i64> for Cyclotomic {
    fn from(v: i64) -> Self {
        Cyclotomic::from_integer(v)
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Cyclotomic::zero()
    }
}

/// A total order for deterministic sorting: by conductor, then by
/// coefficients with larger values first. Not a numeric order.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.conductor.cmp(&other.conductor).then_with(|| {
            for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
                match b.cmp(a) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// GAP-style notation, e.g. `-1/2 + 3*E(12)^5`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let root = match k {
                0 => None,
                1 => Some(format!("E({})", self.conductor)),
                _ => Some(format!("E({})^{}", self.conductor, k)),
            };
            match root {
                None => write!(f, "{mag}")?,
                Some(r) if mag.is_one() => write!(f, "{r}")?,
                Some(r) => write!(f, "{mag}*{r}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn vanishing_sum_of_roots() {
        let x = Cyclotomic::from_int_coeffs(3, &[1, 1, 1]);
        assert!(x.is_zero());
        assert_eq!(x.conductor(), 1);
    }

    #[test]
    fn i_squared() {
        let x = Cyclotomic::from_int_coeffs(4, &[0, 0, 1]);
        assert_eq!(x, Cyclotomic::from_integer(-1));
    }

    #[test]
    fn sixth_root_against_third_roots() {
        // ζ_6 = -ζ_3^2 = 1 + ζ_3
        let z6 = z(6, 1);
        assert_eq!(z6.conductor(), 3);
        let rhs = &Cyclotomic::one() + &z(3, 1);
        assert_eq!(z6, rhs);
        assert_eq!(z6, -z(3, 2));
        let (a, b) = (z6.approx(), rhs.approx());
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
        // same comparison after embedding both sides in conductor 12
        assert_eq!(z6.coeffs_at(12), rhs.coeffs_at(12));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&z(3, 1) + &z(3, 2), Cyclotomic::from_integer(-1));
        assert_eq!(&z(5, 1) * &z(5, 4), Cyclotomic::one());
        let i = z(4, 1);
        let one = Cyclotomic::one();
        assert_eq!(&(&one + &i) * &(&one - &i), Cyclotomic::from_integer(2));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(z(8, 1).conj(), z(8, 7));
        let h = Cyclotomic::from_rational(Rational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(h.conj(), h);
        let x = &z(3, 1) - &z(3, 2);
        assert_eq!(x.conj(), &z(3, 2) - &z(3, 1));
    }

    #[test]
    fn approximations() {
        assert_eq!(Cyclotomic::one().approx(), (1.0, 0.0));
        let (re, im) = z(4, 1).approx();
        assert!(re.abs() < 1e-15 && (im - 1.0).abs() < 1e-15);
        let (re, im) = z(3, 1).approx();
        assert!((re + 0.5).abs() < 1e-15 && (im - 0.8660254037844386).abs() < 1e-15);
    }

    #[test]
    fn root_of_unity_recognition() {
        assert_eq!(Cyclotomic::from_integer(-1).as_root_of_unity(), Some((2, 1)));
        assert_eq!(z(6, 2).as_root_of_unity(), Some((3, 1)));
        assert_eq!(Cyclotomic::one().as_root_of_unity(), Some((1, 0)));
        let half = Cyclotomic::from_rational(Rational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(half.as_root_of_unity(), None);
        assert_eq!(z(12, 5).as_root_of_unity(), Some((12, 5)));
        assert_eq!((-z(5, 1)).as_root_of_unity(), Some((10, 7)));
        // modulus one but not a root of unity: (3 + 4i)/5
        let w = Cyclotomic::from_coeffs(
            4,
            &[Rational::new(3.into(), 5.into()), Rational::new(4.into(), 5.into())],
        );
        assert_eq!(w.as_root_of_unity(), None);
    }

    #[test]
    fn inverses() {
        let x = &Cyclotomic::from_integer(2) + &z(12, 1);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(Cyclotomic::zero().inv().is_none());
        assert_eq!(z(7, 3).inv().unwrap(), z(7, 4));
    }

    #[test]
    fn ordering_puts_trivial_values_first() {
        let mut v = [Cyclotomic::from_integer(-1), Cyclotomic::one()];
        v.sort();
        assert!(v[0].is_one());
        let mut w = [z(3, 2), z(3, 1)];
        w.sort();
        assert_eq!(w[0], z(3, 1));
    }

    #[test]
    fn display() {
        assert_eq!(z(3, 2).to_string(), "-1 - E(3)");
        assert_eq!(Cyclotomic::from_int_coeffs(12, &[0, 0, 0, 2]).to_string(), "2*E(4)");
    }
}
