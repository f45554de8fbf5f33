//! Characters of crossed modules: functions ψ(m, g) on X2 × X1 supported on
//! pairs with m^g = m and invariant under (m, g) ↦ (m^h, h⁻¹gh).

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chartab::{character_table, ChartabError};
use crate::cyclo::{CycRing, Cyclotomic};
use crate::group::orbit_stabilizer;
use crate::xmod::{CrossedModule, ExactnessData, XmodError};

/// Largest |X1|·|X2| for which irreducibles are re-evaluated with a second transversal.
const SECOND_TRANSVERSAL_LIMIT: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XcharError {
    #[error("found {found} irreducibles but there are {expected} class pairs")]
    CompletenessFailure { found: usize, expected: usize },
    #[error("irreducibles {0} and {1} are not orthonormal")]
    OrthogonalityFailure(usize, usize),
    #[error("characters belong to different crossed modules")]
    MixedCrossedModules,
    #[error("not a character: {0}")]
    NotACharacter(String),
    #[error("fusion coefficient N[{0}][{1}][{2}] is not a non-negative integer")]
    NonIntegralFusion(usize, usize, usize),
    #[error("not a class function: {0}")]
    NotAClassFunction(String),
    #[error(transparent)]
    Xmod(#[from] XmodError),
    #[error(transparent)]
    Chartab(#[from] ChartabError),
}

/// A character as a dense |X2| × |X1| table of ring elements.
#[derive(Clone)]
pub struct XCharacter {
    xmod: Arc<CrossedModule>,
    ring: CycRing,
    values: Vec<i64>,
}

impl std::fmt::Debug for XCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("XCharacter").field("dim", &self.dim()).field("support", &self.support().len()).finish()
    }
}

impl PartialEq for XCharacter {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.xmod, &other.xmod) && self.values == other.values
    }
}

impl XCharacter {
    fn zeroed(xmod: &Arc<CrossedModule>, ring: &CycRing) -> Self {
        let len = xmod.x2().order() * xmod.x1().order() * ring.width();
        XCharacter { xmod: Arc::clone(xmod), ring: ring.clone(), values: vec![0; len] }
    }

    /// Builds a character from integer values `f(m, g)`.
    pub fn from_integers(xmod: &Arc<CrossedModule>, ring: &CycRing, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut out = Self::zeroed(xmod, ring);
        let n1 = xmod.x1().order();
        for m in 0..xmod.x2().order() {
            for g in 0..n1 {
                let v = f(m, g);
                out.entry_mut(m, g)[0] = v;
            }
        }
        out
    }

    /// Builds a character from exact values; each must be integral at the ring's conductor.
    pub fn from_cyclotomics(
        xmod: &Arc<CrossedModule>,
        ring: &CycRing,
        f: impl Fn(usize, usize) -> Cyclotomic,
    ) -> Result<Self, XcharError> {
        let mut out = Self::zeroed(xmod, ring);
        for m in 0..xmod.x2().order() {
            for g in 0..xmod.x1().order() {
                let v = f(m, g);
                let r = ring
                    .from_cyclotomic(&v)
                    .ok_or_else(|| XcharError::NotACharacter(format!("value {v} at ({m},{g}) is not integral")))?;
                out.entry_mut(m, g).copy_from_slice(&r);
            }
        }
        Ok(out)
    }

    pub fn xmod(&self) -> &Arc<CrossedModule> {
        &self.xmod
    }

    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    #[inline]
    pub fn entry(&self, m: usize, g: usize) -> &[i64] {
        let w = self.ring.width();
        let i = (m * self.xmod.x1().order() + g) * w;
        &self.values[i..i + w]
    }

    #[inline]
    fn entry_mut(&mut self, m: usize, g: usize) -> &mut [i64] {
        let w = self.ring.width();
        let i = (m * self.xmod.x1().order() + g) * w;
        &mut self.values[i..i + w]
    }

    #[inline]
    pub fn is_zero_at(&self, m: usize, g: usize) -> bool {
        CycRing::is_zero(self.entry(m, g))
    }

    /// ψ(m, g) as an exact cyclotomic.
    pub fn value(&self, m: usize, g: usize) -> Cyclotomic {
        self.ring.to_cyclotomic(self.entry(m, g))
    }

    /// Pairs (m, g) with ψ(m, g) ≠ 0.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let n1 = self.xmod.x1().order();
        (0..self.xmod.x2().order())
            .flat_map(|m| (0..n1).map(move |g| (m, g)))
            .filter(|&(m, g)| !self.is_zero_at(m, g))
            .collect()
    }

    /// Σ_m ψ(m, 1), as an integer.
    pub fn dim(&self) -> i64 {
        let id = self.xmod.x1().identity();
        let mut acc = self.ring.zero();
        for m in 0..self.xmod.x2().order() {
            CycRing::add_assign(&mut acc, self.entry(m, id));
        }
        debug_assert!(CycRing::is_rational(&acc));
        acc[0]
    }

    fn same_xmod(&self, other: &XCharacter) -> Result<(), XcharError> {
        if Arc::ptr_eq(&self.xmod, &other.xmod) {
            Ok(())
        } else {
            Err(XcharError::MixedCrossedModules)
        }
    }

    /// First violation of the two class-function properties, if any.
    pub fn class_function_violation(&self) -> Option<String> {
        let x = &self.xmod;
        let (x1, n2) = (x.x1(), x.x2().order());
        (0..n2).into_par_iter().find_map_first(|m| {
            for g in 0..x1.order() {
                if x.act(m, g) != m {
                    if !self.is_zero_at(m, g) {
                        return Some(format!("nonzero at ({m},{g}) although m^g != m"));
                    }
                    continue;
                }
                for h in 0..x1.order() {
                    if self.entry(x.act(m, h), x1.conjugate(g, h)) != self.entry(m, g) {
                        return Some(format!("value at ({m},{g}) changes under {h}"));
                    }
                }
            }
            None
        })
    }

    pub fn scaled(&self, k: i64) -> XCharacter {
        let mut out = self.clone();
        CycRing::scale_assign(&mut out.values, k);
        out
    }

    pub fn add(&self, other: &XCharacter) -> Result<XCharacter, XcharError> {
        self.same_xmod(other)?;
        let mut out = self.clone();
        CycRing::add_assign(&mut out.values, &other.values);
        Ok(out)
    }

    /// The complex conjugate character (the character of the dual object).
    pub fn conj(&self) -> XCharacter {
        let mut out = self.clone();
        let w = self.ring.width();
        for chunk in out.values.chunks_mut(w) {
            if !CycRing::is_zero(chunk) {
                let c = self.ring.conj(chunk);
                chunk.copy_from_slice(&c);
            }
        }
        out
    }
}

/// ⟨ψ1, ψ2⟩ = (1/|X1|) Σ conj(ψ1(m,g)) ψ2(m,g).
pub fn inner_product(a: &XCharacter, b: &XCharacter) -> Result<Cyclotomic, XcharError> {
    a.same_xmod(b)?;
    let ring = &a.ring;
    let w = ring.width();
    let mut wide = ring.wide_zero();
    for (x, y) in a.values.chunks(w).zip(b.values.chunks(w)) {
        if !CycRing::is_zero(x) && !CycRing::is_zero(y) {
            CycRing::mul_acc(&mut wide, &ring.conj(x), y);
        }
    }
    Ok(ring.to_cyclotomic_div(&ring.reduce(&wide), a.xmod.x1().order() as i64))
}

/// ψ(m,g) = Σ_n ψA(n,g) ψB(n⁻¹m, g).
pub fn tensor_character(a: &XCharacter, b: &XCharacter) -> Result<XCharacter, XcharError> {
    a.same_xmod(b)?;
    let x = &a.xmod;
    let (x1, x2) = (x.x1(), x.x2());
    let ring = &a.ring;
    let w = ring.width();
    let n1 = x1.order();
    let rows: Vec<Vec<i64>> = (0..x2.order())
        .into_par_iter()
        .map(|m| {
            let mut row = vec![0i64; n1 * w];
            let mut wide = ring.wide_zero();
            for g in 0..n1 {
                wide.iter_mut().for_each(|v| *v = 0);
                for n in 0..x2.order() {
                    let (u, v) = (a.entry(n, g), b.entry(x2.mul(x2.inv(n), m), g));
                    if !CycRing::is_zero(u) && !CycRing::is_zero(v) {
                        CycRing::mul_acc(&mut wide, u, v);
                    }
                }
                row[g * w..(g + 1) * w].copy_from_slice(&ring.reduce(&wide));
            }
            row
        })
        .collect();
    Ok(XCharacter { xmod: Arc::clone(x), ring: ring.clone(), values: rows.concat() })
}

/// Number of X1-orbits on commuting pairs {(m,g) : m^g = m}.
pub fn class_pair_count(x: &CrossedModule) -> usize {
    let (x1, n2) = (x.x1(), x.x2().order());
    let n1 = x1.order();
    let mut seen = vec![false; n2 * n1];
    let mut count = 0;
    for m in 0..n2 {
        for g in 0..n1 {
            if x.act(m, g) != m || seen[m * n1 + g] {
                continue;
            }
            count += 1;
            for h in 0..n1 {
                seen[x.act(m, h) * n1 + x1.conjugate(g, h)] = true;
            }
        }
    }
    count
}

/// Label of an irreducible: an X1-orbit on X2 and an irreducible of the
/// stabilizer of its smallest point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibleLabel {
    pub orbit_rep: usize,
    pub stab_irr: usize,
    pub dim: usize,
    pub orbit_size: usize,
    pub stab_degree: usize,
}

/// N[p][q][r] stored flat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FusionTensor {
    pub n: usize,
    pub data: Vec<u64>,
}

impl FusionTensor {
    pub fn get(&self, p: usize, q: usize, r: usize) -> u64 {
        self.data[(p * self.n + q) * self.n + r]
    }

    /// Unit law, commutativity and dimension count; returns the first failure.
    pub fn check(&self, dims: &[usize], unit: usize) -> Result<(), String> {
        let n = self.n;
        for q in 0..n {
            for r in 0..n {
                if self.get(unit, q, r) != u64::from(q == r) {
                    return Err(format!("unit law fails at q={q}, r={r}"));
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    if self.get(p, q, r) != self.get(q, p, r) {
                        return Err(format!("not commutative at ({p},{q},{r})"));
                    }
                }
                let total: u64 = (0..n).map(|r| self.get(p, q, r) * dims[r] as u64).sum();
                if total != (dims[p] * dims[q]) as u64 {
                    return Err(format!("dimension count fails at ({p},{q})"));
                }
            }
        }
        Ok(())
    }

    /// Flat CSV with header `p,q,r,N`, nonzero entries only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,q,r,N\n");
        for p in 0..self.n {
            for q in 0..self.n {
                for r in 0..self.n {
                    let v = self.get(p, q, r);
                    if v != 0 {
                        out.push_str(&format!("{p},{q},{r},{v}\n"));
                    }
                }
            }
        }
        out
    }
}

/// The irreducible characters of a validated crossed module.
#[derive(Debug, Clone)]
pub struct CharacterTheory {
    xmod: Arc<CrossedModule>,
    ring: CycRing,
    exactness: ExactnessData,
    labels: Vec<IrreducibleLabel>,
    irreducibles: Vec<XCharacter>,
}

impl CharacterTheory {
    pub fn new(xmod: CrossedModule) -> Result<Self, XcharError> {
        xmod.ensure_valid()?;
        let exactness = xmod.exactness()?;
        let xmod = Arc::new(xmod);
        let ring = CycRing::new(xmod.conductor());
        let (x1, x2) = (xmod.x1(), xmod.x2());
        let action = xmod.action_table();

        let mut reps = Vec::new();
        let mut seen = vec![false; x2.order()];
        for m in 0..x2.order() {
            if !seen[m] {
                reps.push(m);
                for g in 0..x1.order() {
                    seen[xmod.act(m, g)] = true;
                }
            }
        }

        let check_twice = x1.order() * x2.order() <= SECOND_TRANSVERSAL_LIMIT;
        let per_orbit: Vec<Result<Vec<(IrreducibleLabel, XCharacter)>, XcharError>> = reps
            .par_iter()
            .map(|&m0| {
                let os = orbit_stabilizer(&action, x1, m0).map_err(XmodError::from)?;
                let h = &os.stabilizer;
                let table = character_table(&h.group)?;
                let values = table.ring_values(&ring);
                let last: Vec<usize> = if check_twice {
                    os.orbit
                        .iter()
                        .map(|&m| (0..x1.order()).rev().find(|&g| xmod.act(m0, g) == m).expect("orbit point"))
                        .collect()
                } else {
                    Vec::new()
                };
                let build = |row: usize, transversal: &[usize]| {
                    let mut psi = XCharacter::zeroed(&xmod, &ring);
                    for (&m, &t) in os.orbit.iter().zip(transversal) {
                        for g in 0..x1.order() {
                            if xmod.act(m, g) == m {
                                let inner = x1.mul(x1.mul(t, g), x1.inv(t));
                                let local = h.local_index(inner).expect("conjugate lies in the stabilizer");
                                psi.entry_mut(m, g).copy_from_slice(&values[row][h.group.class_of(local)]);
                            }
                        }
                    }
                    psi
                };
                (0..table.irr_count())
                    .map(|row| {
                        let psi = build(row, &os.transversal);
                        if check_twice && build(row, &last) != psi {
                            return Err(XcharError::NotAClassFunction(format!(
                                "irreducible ({m0},{row}) depends on the transversal"
                            )));
                        }
                        let degree = table.degrees()[row];
                        let label = IrreducibleLabel {
                            orbit_rep: m0,
                            stab_irr: row,
                            dim: os.orbit.len() * degree,
                            orbit_size: os.orbit.len(),
                            stab_degree: degree,
                        };
                        Ok((label, psi))
                    })
                    .collect()
            })
            .collect();

        let mut labels = Vec::new();
        let mut irreducibles = Vec::new();
        for part in per_orbit {
            for (l, psi) in part? {
                labels.push(l);
                irreducibles.push(psi);
            }
        }
        let theory = CharacterTheory { xmod, ring, exactness, labels, irreducibles };
        theory.check_postconditions()?;
        Ok(theory)
    }

    fn check_postconditions(&self) -> Result<(), XcharError> {
        let expected = class_pair_count(&self.xmod);
        if self.irreducibles.len() != expected {
            return Err(XcharError::CompletenessFailure { found: self.irreducibles.len(), expected });
        }
        let total: usize = self.labels.iter().map(|l| l.dim * l.dim).sum();
        if total != self.xmod.x1().order() * self.xmod.x2().order() {
            return Err(XcharError::CompletenessFailure { found: total, expected: self.xmod.x1().order() * self.xmod.x2().order() });
        }
        for (p, psi) in self.irreducibles.iter().enumerate() {
            if let Some(v) = psi.class_function_violation() {
                return Err(XcharError::NotAClassFunction(format!("irreducible {p}: {v}")));
            }
            if psi.dim() != self.labels[p].dim as i64 {
                return Err(XcharError::NotACharacter(format!("irreducible {p} has the wrong dimension")));
            }
        }
        let n = self.irreducibles.len();
        let bad = (0..n).into_par_iter().find_map_first(|p| {
            (0..n).find_map(|q| {
                let ip = inner_product(&self.irreducibles[p], &self.irreducibles[q]).expect("same crossed module");
                let ok = if p == q { ip.is_one() } else { ip.is_zero() };
                (!ok).then_some((p, q))
            })
        });
        match bad {
            Some((p, q)) => Err(XcharError::OrthogonalityFailure(p, q)),
            None => Ok(()),
        }
    }

    pub fn xmod(&self) -> &Arc<CrossedModule> {
        &self.xmod
    }

    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    pub fn exactness(&self) -> &ExactnessData {
        &self.exactness
    }

    pub fn labels(&self) -> &[IrreducibleLabel] {
        &self.labels
    }

    pub fn irreducibles(&self) -> &[XCharacter] {
        &self.irreducibles
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.dim).collect()
    }

    /// Index of the tensor unit (the irreducible with character δ(m,1)).
    pub fn unit_index(&self) -> usize {
        let triv = self.char_trivial();
        self.irreducibles.iter().position(|p| *p == triv).expect("the trivial character is irreducible")
    }

    /// ψ_𝟙(m,g) = δ(m,1).
    pub fn char_trivial(&self) -> XCharacter {
        let id = self.xmod.x2().identity();
        XCharacter::from_integers(&self.xmod, &self.ring, |m, _| i64::from(m == id))
    }

    /// ψ_R(m,g) = |X1| δ(g,1).
    pub fn char_regular(&self) -> XCharacter {
        let id = self.xmod.x1().identity();
        let n1 = self.xmod.x1().order() as i64;
        XCharacter::from_integers(&self.xmod, &self.ring, |_, g| if g == id { n1 } else { 0 })
    }

    /// ψ_0(m,g) = #{(x, Iy) ∈ K × C : x^y = m, Iyg = Iy}.
    pub fn char_vacuum(&self) -> XCharacter {
        let x = &self.xmod;
        let x1 = x.x1();
        let e = &self.exactness;
        let n1 = x1.order();
        let mut counts = vec![0i64; x.x2().order() * n1];
        for (c, coset) in e.cosets.iter().enumerate() {
            let y = coset.representative;
            for g in 0..n1 {
                if e.coset_of[x1.mul(y, g)] != c {
                    continue;
                }
                for &k in &e.kernel {
                    counts[x.act(k, y) * n1 + g] += 1;
                }
            }
        }
        XCharacter::from_integers(&self.xmod, &self.ring, |m, g| counts[m * n1 + g])
    }

    /// Multiplicities of the irreducibles in `psi`.
    pub fn decompose(&self, psi: &XCharacter) -> Result<Vec<u64>, XcharError> {
        let mut mult = Vec::with_capacity(self.len());
        for (p, irr) in self.irreducibles.iter().enumerate() {
            let ip = inner_product(irr, psi)?;
            match ip.as_i64() {
                Some(v) if v >= 0 => mult.push(v as u64),
                _ => return Err(XcharError::NotACharacter(format!("multiplicity of irreducible {p} is {ip}"))),
            }
        }
        let rebuilt = self.combine(&mult);
        if rebuilt.values != psi.values {
            return Err(XcharError::NotACharacter("multiplicities do not reproduce the character".into()));
        }
        Ok(mult)
    }

    /// Σ μ_p ψ_p.
    pub fn combine(&self, mult: &[u64]) -> XCharacter {
        let mut out = XCharacter::zeroed(&self.xmod, &self.ring);
        for (&k, irr) in mult.iter().zip(&self.irreducibles) {
            if k != 0 {
                for (o, v) in out.values.iter_mut().zip(&irr.values) {
                    *o += k as i64 * v;
                }
            }
        }
        out
    }

    /// N_pq^r = (1/|X1|) Σ_{m,n,g} ψ_p(m,g) ψ_q(n,g) conj ψ_r(mn,g), summed directly.
    pub fn fusion_tensor(&self) -> Result<FusionTensor, XcharError> {
        let x = &self.xmod;
        let (x1, x2) = (x.x1(), x.x2());
        let n = self.len();
        let ring = &self.ring;
        let fixed: Vec<Vec<usize>> =
            (0..x1.order()).map(|g| (0..x2.order()).filter(|&m| x.act(m, g) == m).collect()).collect();
        let conj: Vec<XCharacter> = self.irreducibles.iter().map(XCharacter::conj).collect();
        let blocks: Vec<Result<Vec<u64>, XcharError>> = (0..n)
            .into_par_iter()
            .map(|p| {
                let mut out = Vec::with_capacity(n * n);
                let mut wides = vec![ring.wide_zero(); n];
                for q in 0..n {
                    wides.iter_mut().for_each(|w| w.iter_mut().for_each(|v| *v = 0));
                    for (g, fix) in fixed.iter().enumerate() {
                        for &m in fix {
                            let a = self.irreducibles[p].entry(m, g);
                            if CycRing::is_zero(a) {
                                continue;
                            }
                            for &k in fix {
                                let b = self.irreducibles[q].entry(k, g);
                                if CycRing::is_zero(b) {
                                    continue;
                                }
                                let ab = ring.mul(a, b);
                                let mk = x2.mul(m, k);
                                for (r, wide) in wides.iter_mut().enumerate() {
                                    let c = conj[r].entry(mk, g);
                                    if !CycRing::is_zero(c) {
                                        CycRing::mul_acc(wide, &ab, c);
                                    }
                                }
                            }
                        }
                    }
                    for (r, wide) in wides.iter().enumerate() {
                        let v = ring.reduce(wide);
                        let d = x1.order() as i64;
                        let ok = CycRing::is_rational(&v) && v[0] >= 0 && v[0] % d == 0;
                        if !ok {
                            return Err(XcharError::NonIntegralFusion(p, q, r));
                        }
                        out.push((v[0] / d) as u64);
                    }
                }
                Ok(out)
            })
            .collect();
        let mut data = Vec::with_capacity(n * n * n);
        for b in blocks {
            data.extend(b?);
        }
        Ok(FusionTensor { n, data })
    }

    /// Fusion coefficients by decomposing each tensor character.
    pub fn fusion_by_decomposition(&self) -> Result<FusionTensor, XcharError> {
        let n = self.len();
        let rows: Vec<Result<Vec<u64>, XcharError>> = (0..n * n)
            .into_par_iter()
            .map(|pq| {
                let t = tensor_character(&self.irreducibles[pq / n], &self.irreducibles[pq % n])?;
                self.decompose(&t)
            })
            .collect();
        let mut data = Vec::with_capacity(n * n * n);
        for r in rows {
            data.extend(r?);
        }
        Ok(FusionTensor { n, data })
    }

    /// Checks (1/|X1|) Σ_h ψ_p(m,h) ψ_q(m,h⁻¹g) = δ_pq ψ_p(m,g) / d_p for all
    /// p, q, m, g; returns the first failure.
    pub fn generalized_orthogonality(&self) -> Result<(), String> {
        let x = &self.xmod;
        let (x1, x2) = (x.x1(), x.x2());
        let ring = &self.ring;
        let n = self.len();
        let n1 = x1.order() as i64;
        (0..x2.order()).into_par_iter().try_for_each(|m| {
            // only irreducibles whose orbit contains m are nonzero at m
            let live: Vec<usize> =
                (0..n).filter(|&p| (0..x1.order()).any(|g| !self.irreducibles[p].is_zero_at(m, g))).collect();
            for &p in &live {
                for &q in &live {
                    for g in 0..x1.order() {
                        let mut wide = ring.wide_zero();
                        for h in 0..x1.order() {
                            let a = self.irreducibles[p].entry(m, h);
                            let b = self.irreducibles[q].entry(m, x1.mul(x1.inv(h), g));
                            if !CycRing::is_zero(a) && !CycRing::is_zero(b) {
                                CycRing::mul_acc(&mut wide, a, b);
                            }
                        }
                        let mut lhs = ring.reduce(&wide);
                        CycRing::scale_assign(&mut lhs, self.labels[p].dim as i64);
                        let mut rhs = if p == q { self.irreducibles[p].entry(m, g).to_vec() } else { ring.zero() };
                        CycRing::scale_assign(&mut rhs, n1);
                        if lhs != rhs {
                            return Err(format!("fails at p={p}, q={q}, m={m}, g={g}"));
                        }
                    }
                }
            }
            Ok(())
        })
    }

    /// Σ_p ψ_p(m,g) ψ_p(n,h) against Σ_z δ(n, m^z) δ(h⁻¹, z⁻¹gz).
    pub fn second_orthogonality(&self) -> SecondOrthogonality {
        let x = &self.xmod;
        let (x1, x2) = (x.x1(), x.x2());
        let ring = &self.ring;
        let (n1, n2) = (x1.order(), x2.order());
        let pairs: Vec<(usize, usize)> = (0..n2).flat_map(|m| (0..n1).map(move |g| (m, g))).collect();
        let results: Vec<(bool, usize, usize)> = pairs
            .par_iter()
            .map(|&(m, g)| {
                let on_support = x.act(m, g) == m;
                let mut mismatches = 0;
                let mut first_failure = usize::MAX;
                for (idx, &(k, h)) in pairs.iter().enumerate() {
                    let mut wide = ring.wide_zero();
                    for psi in &self.irreducibles {
                        let (a, b) = (psi.entry(m, g), psi.entry(k, h));
                        if !CycRing::is_zero(a) && !CycRing::is_zero(b) {
                            CycRing::mul_acc(&mut wide, a, b);
                        }
                    }
                    let lhs = ring.reduce(&wide);
                    let hinv = x1.inv(h);
                    let rhs = (0..n1).filter(|&z| x.act(m, z) == k && x1.conjugate(g, z) == hinv).count() as i64;
                    if lhs != ring.from_int(rhs) {
                        mismatches += 1;
                        first_failure = first_failure.min(idx);
                    }
                }
                (on_support, mismatches, first_failure)
            })
            .collect();
        let mut report = SecondOrthogonality::default();
        for (&(m, g), (on_support, mismatches, first)) in pairs.iter().zip(results) {
            if on_support {
                report.domain_pairs += 1;
                report.domain_failures += mismatches;
                if mismatches > 0 && report.first_domain_failure.is_none() {
                    report.first_domain_failure = Some((m, g, pairs[first].0, pairs[first].1));
                }
            } else {
                report.off_domain_pairs += 1;
                report.off_domain_mismatches += mismatches;
            }
        }
        report.checked_against = pairs.len();
        report
    }
}

/// Outcome of the second orthogonality check. The identity is asserted on the
/// commuting pairs (m^g = m) against every (n, h); off that domain the
/// left side vanishes identically while the right side need not, so those
/// mismatches are only counted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SecondOrthogonality {
    pub domain_pairs: usize,
    pub checked_against: usize,
    pub domain_failures: usize,
    pub first_domain_failure: Option<(usize, usize, usize, usize)>,
    pub off_domain_pairs: usize,
    pub off_domain_mismatches: usize,
}

impl SecondOrthogonality {
    pub fn holds(&self) -> bool {
        self.domain_failures == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;
    use crate::xmod::{fixture_z4_to_z2, library_xmod, make_dg, make_rg};

    fn theory(name: &str) -> CharacterTheory {
        CharacterTheory::new(library_xmod(name).unwrap()).unwrap()
    }

    #[test]
    fn class_pair_counts() {
        let s3 = named_group("S3").unwrap();
        assert_eq!(class_pair_count(&make_rg(&s3)), 3);
        assert_eq!(class_pair_count(&make_dg(&named_group("Z2").unwrap())), 4);
        assert_eq!(class_pair_count(&make_dg(&s3)), 8);
    }

    #[test]
    fn dg_s3_dimensions() {
        let t = theory("DG(S3)");
        let mut dims = t.dims();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn z4_to_z2_irreducibles() {
        let t = CharacterTheory::new(fixture_z4_to_z2()).unwrap();
        assert_eq!(t.len(), 8);
        assert!(t.dims().iter().all(|&d| d == 1));
    }

    #[test]
    fn rg_irreducibles_are_group_characters() {
        let g = named_group("Q8").unwrap();
        let t = CharacterTheory::new(make_rg(&g)).unwrap();
        let table = character_table(&g).unwrap();
        for (p, psi) in t.irreducibles().iter().enumerate() {
            for h in 0..8 {
                assert_eq!(psi.value(0, h), *table.value(p, g.class_of(h)));
            }
        }
    }

    #[test]
    fn special_characters() {
        for name in ["RG(S3)", "DG(S3)", "Z4->Z2", "Z2/Z2-trivial"] {
            let t = theory(name);
            let (n1, n2) = (t.xmod().x1().order() as i64, t.xmod().x2().order() as i64);
            let triv = t.char_trivial();
            let reg = t.char_regular();
            let vac = t.char_vacuum();
            for c in [&triv, &reg, &vac] {
                assert!(c.class_function_violation().is_none(), "{name}");
            }
            assert!(inner_product(&triv, &triv).unwrap().is_one());
            assert_eq!(inner_product(&reg, &reg).unwrap(), Cyclotomic::from_integer(n1 * n2));
            assert_eq!(reg.dim(), n1 * n2);
            let e = t.exactness();
            assert_eq!(vac.dim(), (e.kernel.len() * e.cosets.len()) as i64);
            let mu = t.decompose(&reg).unwrap();
            assert_eq!(mu, t.dims().iter().map(|&d| d as u64).collect::<Vec<_>>());
            let mut unit = vec![0; t.len()];
            unit[t.unit_index()] = 1;
            assert_eq!(t.decompose(&triv).unwrap(), unit);
        }
        let t = theory("RG(S3)");
        assert_eq!(t.char_vacuum(), t.char_regular());
        let t = theory("DG(S3)");
        assert_eq!(t.char_vacuum(), t.char_trivial());
    }

    #[test]
    fn rejects_non_characters() {
        let t = theory("DG(Z2)");
        let half = t.char_trivial().scaled(-1);
        assert!(matches!(t.decompose(&half), Err(XcharError::NotACharacter(_))));
        let other = theory("DG(Z2)");
        assert!(matches!(inner_product(&t.char_trivial(), &other.char_trivial()), Err(XcharError::MixedCrossedModules)));
    }

    #[test]
    fn fusion_paths_agree() {
        for name in ["RG(S3)", "DG(Z2)", "DG(S3)", "Z4->Z2", "Z2/Z2-trivial"] {
            let t = theory(name);
            let f = t.fusion_tensor().unwrap();
            assert_eq!(f, t.fusion_by_decomposition().unwrap(), "{name}");
            f.check(&t.dims(), t.unit_index()).unwrap();
        }
    }

    #[test]
    fn orthogonality_relations() {
        for name in ["RG(S3)", "DG(Z2)", "DG(Z3)", "DG(S3)", "Z4->Z2", "Z2/Z2-trivial", "DG(Q8)"] {
            let t = theory(name);
            t.generalized_orthogonality().unwrap();
            let s = t.second_orthogonality();
            assert!(s.holds(), "{name}: {s:?}");
        }
    }

    #[test]
    fn tensor_unit_and_dimensions() {
        let t = theory("DG(S3)");
        let unit = t.char_trivial();
        for psi in t.irreducibles() {
            assert_eq!(&tensor_character(psi, &unit).unwrap(), psi);
            for chi in t.irreducibles() {
                assert_eq!(tensor_character(psi, chi).unwrap().dim(), psi.dim() * chi.dim());
            }
        }
    }
}
