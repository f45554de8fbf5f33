//! Twists, S and T matrices, Frobenius–Schur indicators, the Verlinde-type
//! identities and the vacuum/transparency analysis of M(X).

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{CycRing, Cyclotomic};
use crate::linalg::{rank, RingMatrix};
use crate::xchar::{CharacterTheory, FusionTensor, SecondOrthogonality, XcharError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PremodularError {
    #[error("twist of irreducible {0} is {1}, not a root of unity of order dividing {2}")]
    NotRootOfUnity(usize, String, usize),
    #[error("twist relation fails for irreducible {p} at m={m}, g={g}")]
    OmeqViolation { p: usize, m: usize, g: usize },
    #[error("Frobenius-Schur indicator of irreducible {0} is {1}")]
    IndicatorOutOfRange(usize, String),
    #[error("S matrix assertion failed: {0}")]
    SMatrix(String),
    #[error("cross-check mismatch: {0}")]
    CrossCheckMismatch(String),
    #[error(transparent)]
    Xchar(#[from] XcharError),
}

/// Exact premodular data. `s_scaled` holds |X|·S, which is integral.
#[derive(Debug, Clone, Serialize)]
pub struct ModularData {
    pub omega: Vec<Cyclotomic>,
    pub smatrix: Vec<Vec<Cyclotomic>>,
    /// Diagonal of T.
    pub tmatrix: Vec<Cyclotomic>,
    pub global_order: usize,
    pub fs_indicators: Vec<i64>,
    pub identity_index: usize,
    pub dims: Vec<usize>,
    pub rank_s: usize,
    pub rank_s4: usize,
    #[serde(skip)]
    pub(crate) s_scaled: RingMatrix,
    #[serde(skip)]
    pub(crate) omega_ring: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Modular,
    ModularizablePremodular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VacuumReport {
    pub mu: Vec<u64>,
    pub vacuum_dim: usize,
    pub transparent: Vec<usize>,
    pub boundary_bijective: bool,
    pub s_rank: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_orthogonality: Option<SecondOrthogonality>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn to_ring(ring: &CycRing, x: &Cyclotomic) -> Vec<i64> {
    ring.from_cyclotomic(x).expect("value lies in the ring")
}

/// Order of the image of the boundary's exponent.
fn image_exponent(theory: &CharacterTheory) -> usize {
    let x1 = theory.xmod().x1();
    theory.exactness().image.iter().fold(1, |e, &i| e.lcm(&x1.element_order(i)))
}

/// ω_p = (1/d_p) Σ_m ψ_p(m, ∂m); also checks ψ_p(m, g∂m) = ω_p ψ_p(m, g).
pub fn omega(theory: &CharacterTheory, p: usize) -> Result<Cyclotomic, PremodularError> {
    let x = theory.xmod();
    let x1 = x.x1();
    let ring = theory.ring();
    let psi = &theory.irreducibles()[p];
    let mut acc = ring.zero();
    for m in 0..x.x2().order() {
        CycRing::add_assign(&mut acc, psi.entry(m, x.boundary(m)));
    }
    let d = theory.labels()[p].dim as i64;
    let w = ring.to_cyclotomic_div(&acc, d);
    let e = image_exponent(theory);
    match w.as_root_of_unity() {
        Some((order, _)) if e.is_multiple_of(order as usize) => {}
        _ => return Err(PremodularError::NotRootOfUnity(p, w.to_string(), e)),
    }
    let wr = to_ring(ring, &w);
    for m in 0..x.x2().order() {
        for g in 0..x1.order() {
            let lhs = psi.entry(m, x1.mul(g, x.boundary(m)));
            if lhs != ring.mul(&wr, psi.entry(m, g)).as_slice() {
                return Err(PremodularError::OmeqViolation { p, m, g });
            }
        }
    }
    Ok(w)
}

/// ν_p = (1/|X1|) Σ_{m,g} δ(m^g, m⁻¹) ψ_p(m, g²).
pub fn fs_indicator(theory: &CharacterTheory, p: usize) -> Result<i64, PremodularError> {
    let x = theory.xmod();
    let (x1, x2) = (x.x1(), x.x2());
    let ring = theory.ring();
    let psi = &theory.irreducibles()[p];
    let mut acc = ring.zero();
    for m in 0..x2.order() {
        let minv = x2.inv(m);
        for g in 0..x1.order() {
            if x.act(m, g) == minv {
                CycRing::add_assign(&mut acc, psi.entry(m, x1.mul(g, g)));
            }
        }
    }
    let nu = ring.to_cyclotomic_div(&acc, x1.order() as i64);
    match nu.as_i64() {
        Some(v) if (-1..=1).contains(&v) => Ok(v),
        _ => Err(PremodularError::IndicatorOutOfRange(p, nu.to_string())),
    }
}

/// |X|·S, with S_pq = (1/|X|) Σ_{m,n} conj(ψ_p(m,∂n) ψ_q(n,∂m)).
pub fn s_matrix_scaled(theory: &CharacterTheory) -> RingMatrix {
    let x = theory.xmod();
    let n2 = x.x2().order();
    let ring = theory.ring();
    let irr = theory.irreducibles();
    let n = irr.len();
    let entries: Vec<Vec<i64>> = (0..n * n)
        .into_par_iter()
        .map(|pq| {
            let (p, q) = (pq / n, pq % n);
            let mut wide = ring.wide_zero();
            for m in 0..n2 {
                for k in 0..n2 {
                    let a = irr[p].entry(m, x.boundary(k));
                    if CycRing::is_zero(a) {
                        continue;
                    }
                    let b = irr[q].entry(k, x.boundary(m));
                    if !CycRing::is_zero(b) {
                        CycRing::mul_acc(&mut wide, a, b);
                    }
                }
            }
            ring.conj(&ring.reduce(&wide))
        })
        .collect();
    RingMatrix::from_fn(ring, n, |p, q| entries[p * n + q].clone())
}

pub fn s_matrix(theory: &CharacterTheory) -> Vec<Vec<Cyclotomic>> {
    s_matrix_scaled(theory).to_cyclotomic_rows(&BigInt::from(theory.exactness().global_order))
}

impl ModularData {
    pub fn compute(theory: &CharacterTheory) -> Result<Self, PremodularError> {
        let n = theory.len();
        let ring = theory.ring();
        let global_order = theory.exactness().global_order;
        let omega: Vec<Cyclotomic> =
            (0..n).into_par_iter().map(|p| omega(theory, p)).collect::<Result<_, _>>()?;
        let fs_indicators: Vec<i64> =
            (0..n).into_par_iter().map(|p| fs_indicator(theory, p)).collect::<Result<_, _>>()?;
        let s_scaled = s_matrix_scaled(theory);
        let den = BigInt::from(global_order);
        let smatrix = s_scaled.to_cyclotomic_rows(&den);
        let identity_index = theory.unit_index();
        let dims = theory.dims();

        for p in 0..n {
            for q in 0..n {
                if smatrix[p][q] != smatrix[q][p] {
                    return Err(PremodularError::SMatrix(format!("not symmetric at ({p},{q})")));
                }
            }
            let expect = Cyclotomic::from_rational(num_rational::BigRational::new(dims[p].into(), den.clone()));
            if smatrix[identity_index][p] != expect {
                return Err(PremodularError::SMatrix(format!("S[1][{p}] != d_{p}/|X|")));
            }
        }

        let s4 = {
            let s2 = s_scaled.mul(&s_scaled);
            s2.mul(&s2)
        };
        let rank_s = rank(&smatrix);
        let rank_s4 = rank(&s4.to_cyclotomic_rows(&BigInt::from(1)));
        let omega_ring = omega.iter().map(|w| to_ring(ring, w)).collect();
        Ok(ModularData {
            tmatrix: omega.clone(),
            omega,
            smatrix,
            global_order,
            fs_indicators,
            identity_index,
            dims,
            rank_s,
            rank_s4,
            s_scaled,
            omega_ring,
        })
    }

    /// |X|·S as a ring matrix.
    pub fn s_scaled(&self) -> &RingMatrix {
        &self.s_scaled
    }
}

pub fn vacuum_analysis(theory: &CharacterTheory, data: &ModularData) -> Result<VacuumReport, PremodularError> {
    let n = theory.len();
    let e = theory.exactness();
    let x = theory.xmod();
    let ring = theory.ring();
    let vacuum_dim = e.cosets.len() * e.kernel.len();
    let mu = theory.decompose(&theory.char_vacuum())?;

    // μ_p = D [S²]_{𝟙p} = D Σ_r d_r (|X|S)_rp / |X|²
    let xo = data.global_order as i128;
    let s = &data.s_scaled;
    for p in 0..n {
        let mut acc = vec![0i128; ring.width()];
        for r in 0..n {
            for (a, &b) in acc.iter_mut().zip(s.entry(r, p)) {
                *a += data.dims[r] as i128 * b;
            }
        }
        let num: Vec<i128> = acc.iter().map(|&a| a * vacuum_dim as i128).collect();
        let ok = num[1..].iter().all(|&c| c == 0) && num[0] % (xo * xo) == 0 && num[0] / (xo * xo) == mu[p] as i128;
        if !ok {
            return Err(PremodularError::CrossCheckMismatch(format!(
                "vacuum multiplicity of {p}: decomposition gives {}, S^2 gives {:?}/{}",
                mu[p],
                num,
                xo * xo
            )));
        }
    }
    if mu[data.identity_index] != 1 {
        return Err(PremodularError::CrossCheckMismatch("unit does not occur once in the vacuum".into()));
    }
    let total: u64 = mu.iter().zip(&data.dims).map(|(&m, &d)| m * d as u64).sum();
    if total != vacuum_dim as u64 {
        return Err(PremodularError::CrossCheckMismatch(format!("vacuum dimension {total} != {vacuum_dim}")));
    }

    // α = S_p𝟙 / S_𝟙𝟙, then S_pq = α S_𝟙q for all q
    let one = data.identity_index;
    let mut transparent = Vec::new();
    for p in 0..n {
        let alpha = data.smatrix[p][one].checked_div(&data.smatrix[one][one]).expect("S_11 > 0");
        if (0..n).all(|q| data.smatrix[p][q] == &alpha * &data.smatrix[one][q]) {
            let d = Cyclotomic::from_integer(data.dims[p] as i64);
            if alpha != d || mu[p] != data.dims[p] as u64 {
                return Err(PremodularError::CrossCheckMismatch(format!("transparent {p} has α = {alpha}, μ = {}", mu[p])));
            }
            if !data.omega[p].is_one() {
                return Err(PremodularError::CrossCheckMismatch(format!("transparent {p} has nontrivial twist")));
            }
            transparent.push(p);
        }
    }
    let from_mu: Vec<usize> = (0..n).filter(|&p| mu[p] > 0).collect();
    if transparent != from_mu {
        return Err(PremodularError::CrossCheckMismatch(format!(
            "transparent set {transparent:?} differs from vacuum support {from_mu:?}"
        )));
    }

    let boundary_bijective = x.x1().order() == x.x2().order() && e.kernel.len() == 1;
    let modular = [boundary_bijective, transparent == [one], data.rank_s == n];
    if modular.iter().any(|&b| b != modular[0]) {
        return Err(PremodularError::CrossCheckMismatch(format!(
            "bijective boundary {}, trivial transparent set {}, invertible S {} disagree",
            modular[0], modular[1], modular[2]
        )));
    }
    let verdict = if boundary_bijective { Verdict::Modular } else { Verdict::ModularizablePremodular };
    Ok(VacuumReport { mu, vacuum_dim, transparent, boundary_bijective, s_rank: data.rank_s, verdict })
}

fn check(id: &str, name: &str, result: Result<(), String>) -> CheckResult {
    CheckResult { id: id.into(), name: name.into(), passed: result.is_ok(), counterexample: result.err() }
}

/// Evaluates the identities (a)–(h) and a few structural checks. With
/// `fast`, the full orthogonality sweeps in (h) are skipped.
pub fn verify_suite(theory: &CharacterTheory, data: &ModularData, fusion: &FusionTensor, fast: bool) -> VerificationReport {
    let n = theory.len();
    let ring = theory.ring();
    let e = theory.exactness();
    let x = theory.xmod();
    let (n1, n2) = (x.x1().order(), x.x2().order());
    let dims = &data.dims;
    let s = &data.s_scaled;
    let om = &data.omega_ring;
    let om_inv: Vec<Vec<i64>> = om.iter().map(|w| ring.conj(w)).collect();
    let xo = data.global_order as i64;
    let one = data.identity_index;
    let entry64 = |p: usize, q: usize| -> Vec<i64> {
        s.entry(p, q).iter().map(|&c| i64::try_from(c).expect("S entry fits in i64")).collect()
    };
    let s64: Vec<Vec<Vec<i64>>> = (0..n).map(|p| (0..n).map(|q| entry64(p, q)).collect()).collect();
    let mut checks = Vec::new();

    checks.push(check("a", "Burnside: sum of d^2 = |X1||X2|", {
        let total: usize = dims.iter().map(|d| d * d).sum();
        if total == n1 * n2 {
            Ok(())
        } else {
            Err(format!("sum is {total}, expected {}", n1 * n2))
        }
    }));

    checks.push(check("b", "sum of d^2 / omega = |X1||K|", {
        let mut acc = ring.zero();
        for p in 0..n {
            let mut t = om_inv[p].clone();
            CycRing::scale_assign(&mut t, (dims[p] * dims[p]) as i64);
            CycRing::add_assign(&mut acc, &t);
        }
        let expect = (n1 * e.kernel.len()) as i64;
        if acc == ring.from_int(expect) {
            Ok(())
        } else {
            Err(format!("sum is {}, expected {expect}", ring.to_cyclotomic(&acc)))
        }
    }));

    // d_s Σ_r N_pq^r (|X|S)_rs = (|X|S)_ps (|X|S)_qs
    checks.push(check("c", "Verlinde: sum_r N_pq^r S_rs = S_ps S_qs / S_1s", {
        let dims_ok = (0..n).all(|s_| !data.smatrix[one][s_].is_zero());
        if !dims_ok {
            Err("S_1s vanishes".into())
        } else {
            (0..n * n).into_par_iter().try_for_each(|pq| {
                let (p, q) = (pq / n, pq % n);
                for t in 0..n {
                    let mut lhs = ring.zero();
                    for r in 0..n {
                        let k = fusion.get(p, q, r) as i64;
                        if k != 0 {
                            let mut v = s64[r][t].clone();
                            CycRing::scale_assign(&mut v, k * dims[t] as i64);
                            CycRing::add_assign(&mut lhs, &v);
                        }
                    }
                    if lhs != ring.mul(&s64[p][t], &s64[q][t]) {
                        return Err(format!("p={p}, q={q}, s={t}"));
                    }
                }
                Ok(())
            })
        }
    }));

    // Σ_r N_pq^r d_r conj(ω_r) = conj(ω_p ω_q) (|X|S)_pq
    checks.push(check("d", "sum_r N_pq^r S_1r / omega_r = S_pq / (omega_p omega_q)", {
        (0..n * n).into_par_iter().try_for_each(|pq| {
            let (p, q) = (pq / n, pq % n);
            let mut lhs = ring.zero();
            for r in 0..n {
                let k = fusion.get(p, q, r) as i64;
                if k != 0 {
                    let mut v = om_inv[r].clone();
                    CycRing::scale_assign(&mut v, k * dims[r] as i64);
                    CycRing::add_assign(&mut lhs, &v);
                }
            }
            let rhs = ring.mul(&ring.mul(&om_inv[p], &om_inv[q]), &s64[p][q]);
            if lhs == rhs {
                Ok(())
            } else {
                Err(format!("p={p}, q={q}"))
            }
        })
    }));

    // Σ_r S_pr ω_r S_rq = |X| conj(ω_p ω_q) S_pq, all scaled by |X|²
    checks.push(check("e", "STS = T^-1 S T^-1", {
        (0..n * n).into_par_iter().try_for_each(|pq| {
            let (p, q) = (pq / n, pq % n);
            let mut wide = ring.wide_zero();
            for r in 0..n {
                CycRing::mul_acc(&mut wide, &ring.mul(&s64[p][r], &om[r]), &s64[r][q]);
            }
            let lhs = ring.reduce(&wide);
            let mut rhs = ring.mul(&ring.mul(&om_inv[p], &om_inv[q]), &s64[p][q]);
            CycRing::scale_assign(&mut rhs, xo);
            if lhs == rhs {
                Ok(())
            } else {
                Err(format!("p={p}, q={q}"))
            }
        })
    }));

    let s2 = s.mul(s);
    let s4 = s2.mul(&s2);
    let s8 = s4.mul(&s4);
    checks.push(check("f", "S^8 = S^4", {
        let x4 = (xo as i128).pow(4);
        match s8.first_difference(&s4.scaled(x4)) {
            None => Ok(()),
            Some((i, j)) => Err(format!("entry ({i},{j})")),
        }
    }));

    checks.push(check("g", "S symmetric", {
        match (0..n).flat_map(|p| (0..n).map(move |q| (p, q))).find(|&(p, q)| data.smatrix[p][q] != data.smatrix[q][p]) {
            None => Ok(()),
            Some((p, q)) => Err(format!("({p},{q})")),
        }
    }));

    let mut second = None;
    if fast {
        checks.push(CheckResult {
            id: "h".into(),
            name: "orthogonality sweeps (skipped)".into(),
            passed: true,
            counterexample: None,
        });
    } else {
        let gen = theory.generalized_orthogonality();
        let sec = theory.second_orthogonality();
        let result = match (gen, sec.holds()) {
            (Err(e), _) => Err(format!("generalized orthogonality {e}")),
            (Ok(()), false) => Err(format!("second orthogonality fails at {:?}", sec.first_domain_failure)),
            (Ok(()), true) => Ok(()),
        };
        checks.push(check("h", "generalized and second orthogonality", result));
        second = Some(sec);
    }

    checks.push(check("qdim", "S_1p = d_p/|X| > 0", {
        match (0..n).find(|&p| s64[one][p] != ring.from_int(dims[p] as i64) || dims[p] == 0) {
            None => Ok(()),
            Some(p) => Err(format!("p={p}")),
        }
    }));

    checks.push(check("fusion", "fusion unit, commutativity and dimension count", fusion.check(dims, one)));

    if x.x1().order() == x.x2().order() && e.kernel.len() == 1 {
        checks.push(check("s4", "S^4 = 1 for bijective boundary", {
            let id = RingMatrix::identity(ring, n).scaled((xo as i128).pow(4));
            match s4.first_difference(&id) {
                None => Ok(()),
                Some((i, j)) => Err(format!("entry ({i},{j})")),
            }
        }));
    }

    VerificationReport { checks, second_orthogonality: second }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xmod::library_xmod;

    fn setup(name: &str) -> (CharacterTheory, ModularData) {
        let t = CharacterTheory::new(library_xmod(name).unwrap()).unwrap();
        let d = ModularData::compute(&t).unwrap();
        (t, d)
    }

    #[test]
    fn unit_data() {
        for name in ["RG(S3)", "DG(S3)", "Z4->Z2", "Z2/Z2-trivial", "DG(Q8)"] {
            let (_, d) = setup(name);
            assert!(d.omega[d.identity_index].is_one());
            assert_eq!(d.fs_indicators[d.identity_index], 1);
        }
    }

    #[test]
    fn rg_is_rank_one_with_trivial_twists() {
        let (t, d) = setup("RG(S3)");
        assert!(d.omega.iter().all(Cyclotomic::is_one));
        assert_eq!(d.rank_s, 1);
        let v = vacuum_analysis(&t, &d).unwrap();
        assert_eq!(v.transparent, (0..t.len()).collect::<Vec<_>>());
        assert_eq!(v.verdict, Verdict::ModularizablePremodular);
    }

    #[test]
    fn suites_pass() {
        for name in ["RG(S3)", "DG(S3)", "Z4->Z2", "Z2/Z2-trivial", "DG(Z2)", "RG(Q8)"] {
            let (t, d) = setup(name);
            let f = t.fusion_tensor().unwrap();
            let r = verify_suite(&t, &d, &f, false);
            assert!(r.all_passed(), "{name}: {:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }

    #[test]
    fn dg_is_modular() {
        let (t, d) = setup("DG(S3)");
        let v = vacuum_analysis(&t, &d).unwrap();
        assert_eq!(v.verdict, Verdict::Modular);
        assert_eq!(v.transparent, vec![d.identity_index]);
        assert_eq!(d.rank_s, t.len());
    }
}
