//! Finite crossed modules `∂: X2 → X1` with a right action of X1 on X2.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{named_group, ActionTable, Group, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XmodError {
    #[error("malformed crossed module: {0}")]
    Shape(String),
    #[error("crossed module axioms fail: {0}")]
    Invalid(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One failed axiom family with its first counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "failure")]
pub enum ValidationFailure {
    /// `m^1 != m`, reported with `g` the identity and `h` absent, or
    /// `(m^g)^h != m^(gh)`.
    NotAnAction { m: usize, g: usize, h: Option<usize> },
    /// `(m n)^g != m^g n^g`.
    NotAutomorphism { m: usize, n: usize, g: usize },
    /// `∂(m n) != ∂m ∂n`.
    BoundaryNotHom { m: usize, n: usize },
    /// `∂(m^g) != g⁻¹ ∂m g`.
    XMod1Violation { m: usize, g: usize },
    /// `m^(∂n) != n⁻¹ m n`.
    XMod2Violation { m: usize, n: usize },
}

impl std::fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            ValidationFailure::NotAnAction { m, g, h: None } => write!(f, "NotAnAction: {m}^{g} != {m} for the identity {g}"),
            ValidationFailure::NotAnAction { m, g, h: Some(h) } => {
                write!(f, "NotAnAction: ({m}^{g})^{h} != {m}^({g}*{h})")
            }
            ValidationFailure::NotAutomorphism { m, n, g } => write!(f, "NotAutomorphism: ({m}*{n})^{g} != {m}^{g}*{n}^{g}"),
            ValidationFailure::BoundaryNotHom { m, n } => write!(f, "BoundaryNotHom: d({m}*{n}) != d({m})*d({n})"),
            ValidationFailure::XMod1Violation { m, g } => write!(f, "XMod1Violation(m={m}, g={g})"),
            ValidationFailure::XMod2Violation { m, n } => write!(f, "XMod2Violation(m={m}, n={n})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CrossedModule {
    x1: Group,
    x2: Group,
    /// `act[m * |X1| + g] = m^g`.
    act: Vec<u32>,
    boundary: Vec<usize>,
    name: Option<String>,
}

/// Right cosets `I y` of the image of the boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coset {
    pub representative: usize,
    pub elements: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactnessData {
    pub kernel: Vec<usize>,
    pub image: Vec<usize>,
    pub cosets: Vec<Coset>,
    /// Coset index of each X1 element.
    pub coset_of: Vec<usize>,
    pub global_order: usize,
}

impl CrossedModule {
    /// Checks shapes and index ranges only; see [`CrossedModule::validate`].
    pub fn new(x1: Group, x2: Group, action: Vec<Vec<usize>>, boundary: Vec<usize>) -> Result<Self, XmodError> {
        let (n1, n2) = (x1.order(), x2.order());
        if action.len() != n2 || action.iter().any(|row| row.len() != n1) {
            return Err(XmodError::Shape(format!("action must be a {n2}x{n1} table")));
        }
        if let Some((m, g)) =
            action.iter().enumerate().find_map(|(m, row)| row.iter().position(|&v| v >= n2).map(|g| (m, g)))
        {
            return Err(XmodError::Shape(format!("action[{m}][{g}] = {} out of range", action[m][g])));
        }
        if boundary.len() != n2 {
            return Err(XmodError::Shape(format!("boundary must have {n2} entries")));
        }
        if let Some(m) = boundary.iter().position(|&v| v >= n1) {
            return Err(XmodError::Shape(format!("boundary[{m}] = {} out of range", boundary[m])));
        }
        let act = action.into_iter().flatten().map(|v| v as u32).collect();
        Ok(CrossedModule { x1, x2, act, boundary, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn x1(&self) -> &Group {
        &self.x1
    }

    pub fn x2(&self) -> &Group {
        &self.x2
    }

    /// `m^g`.
    #[inline]
    pub fn act(&self, m: usize, g: usize) -> usize {
        self.act[m * self.x1.order() + g] as usize
    }

    /// `∂m`.
    #[inline]
    pub fn boundary(&self, m: usize) -> usize {
        self.boundary[m]
    }

    pub fn boundary_map(&self) -> &[usize] {
        &self.boundary
    }

    pub fn action_rows(&self) -> Vec<Vec<usize>> {
        self.act.chunks(self.x1.order()).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    /// The action as an [`ActionTable`]; only meaningful after validation.
    pub fn action_table(&self) -> ActionTable {
        ActionTable::from_trusted(self.x2.order(), self.x1.order(), self.act.clone())
    }

    /// Conductor of the cyclotomic field used for all character values.
    pub fn conductor(&self) -> u32 {
        self.x1.exponent().lcm(&self.x2.exponent()) as u32
    }

    pub fn validate(&self) -> ValidationReport {
        let (x1, x2) = (&self.x1, &self.x2);
        let (n1, n2) = (x1.order(), x2.order());
        let mut failures = Vec::new();

        let not_action = (0..n2)
            .find(|&m| self.act(m, x1.identity()) != m)
            .map(|m| ValidationFailure::NotAnAction { m, g: x1.identity(), h: None })
            .or_else(|| {
                (0..n2).into_par_iter().find_map_first(|m| {
                    (0..n1).find_map(|g| {
                        (0..n1)
                            .find(|&h| self.act(self.act(m, g), h) != self.act(m, x1.mul(g, h)))
                            .map(|h| ValidationFailure::NotAnAction { m, g, h: Some(h) })
                    })
                })
            });
        failures.extend(not_action);

        let not_auto = (0..n2).into_par_iter().find_map_first(|m| {
            (0..n2).find_map(|n| {
                let mn = x2.mul(m, n);
                (0..n1)
                    .find(|&g| self.act(mn, g) != x2.mul(self.act(m, g), self.act(n, g)))
                    .map(|g| ValidationFailure::NotAutomorphism { m, n, g })
            })
        });
        failures.extend(not_auto);

        let not_hom = (0..n2).find_map(|m| {
            (0..n2)
                .find(|&n| self.boundary(x2.mul(m, n)) != x1.mul(self.boundary(m), self.boundary(n)))
                .map(|n| ValidationFailure::BoundaryNotHom { m, n })
        });
        failures.extend(not_hom);

        let xmod1 = (0..n2).find_map(|m| {
            (0..n1)
                .find(|&g| self.boundary(self.act(m, g)) != x1.conjugate(self.boundary(m), g))
                .map(|g| ValidationFailure::XMod1Violation { m, g })
        });
        failures.extend(xmod1);

        let xmod2 = (0..n2).find_map(|m| {
            (0..n2)
                .find(|&n| self.act(m, self.boundary(n)) != x2.conjugate(m, n))
                .map(|n| ValidationFailure::XMod2Violation { m, n })
        });
        failures.extend(xmod2);

        ValidationReport { failures }
    }

    pub fn ensure_valid(&self) -> Result<(), XmodError> {
        let report = self.validate();
        match report.failures.first() {
            None => Ok(()),
            Some(f) => Err(XmodError::Invalid(f.to_string())),
        }
    }

    pub fn exactness(&self) -> Result<ExactnessData, XmodError> {
        let (x1, x2) = (&self.x1, &self.x2);
        let kernel: Vec<usize> = (0..x2.order()).filter(|&m| self.boundary(m) == x1.identity()).collect();
        let mut image: Vec<usize> = self.boundary.clone();
        image.sort_unstable();
        image.dedup();

        for &k in &kernel {
            if (0..x2.order()).any(|n| x2.mul(k, n) != x2.mul(n, k)) {
                return Err(XmodError::InternalInconsistency(format!("kernel element {k} is not central")));
            }
        }
        let in_image = {
            let mut v = vec![false; x1.order()];
            for &i in &image {
                v[i] = true;
            }
            v
        };
        for &i in &image {
            if (0..x1.order()).any(|g| !in_image[x1.conjugate(i, g)]) {
                return Err(XmodError::InternalInconsistency(format!("image is not normal at {i}")));
            }
        }

        let mut coset_of = vec![usize::MAX; x1.order()];
        let mut cosets = Vec::new();
        for y in 0..x1.order() {
            if coset_of[y] != usize::MAX {
                continue;
            }
            let mut elements: Vec<usize> = image.iter().map(|&i| x1.mul(i, y)).collect();
            elements.sort_unstable();
            for &e in &elements {
                coset_of[e] = cosets.len();
            }
            cosets.push(Coset { representative: y, elements });
        }

        let global_order = kernel.len() * x1.order();
        if x2.order() * cosets.len() != global_order {
            return Err(XmodError::InternalInconsistency(format!(
                "|X2||C| = {} but |K||X1| = {global_order}",
                x2.order() * cosets.len()
            )));
        }
        Ok(ExactnessData { kernel, image, cosets, coset_of, global_order })
    }
}

/// X2 trivial, X1 = G, trivial action and boundary.
pub fn make_rg(g: &Group) -> CrossedModule {
    let action = vec![vec![0; g.order()]];
    let name = g.name().map(|n| format!("RG({n})"));
    let x = CrossedModule::new(g.clone(), Group::trivial(), action, vec![g.identity()]).expect("RG shape");
    match name {
        Some(n) => x.with_name(n),
        None => x,
    }
}

/// X1 = X2 = G, conjugation action, identity boundary.
pub fn make_dg(g: &Group) -> CrossedModule {
    let n = g.order();
    let action = (0..n).map(|m| (0..n).map(|h| g.conjugate(m, h)).collect()).collect();
    let name = g.name().map(|n| format!("DG({n})"));
    let x = CrossedModule::new(g.clone(), g.clone(), action, (0..n).collect()).expect("DG shape");
    match name {
        Some(n) => x.with_name(n),
        None => x,
    }
}

/// X1 = Z2, X2 = Z4, trivial action, ∂ the reduction mod 2.
pub fn fixture_z4_to_z2() -> CrossedModule {
    let z2 = named_group("Z2").expect("Z2");
    let z4 = named_group("Z4").expect("Z4");
    let action = (0..4).map(|m| vec![m; 2]).collect();
    CrossedModule::new(z2, z4, action, vec![0, 1, 0, 1]).expect("fixture shape").with_name("Z4->Z2")
}

/// X1 = X2 = Z2, trivial action, trivial boundary.
pub fn fixture_z2_trivial() -> CrossedModule {
    let z2 = named_group("Z2").expect("Z2");
    let action = vec![vec![0, 0], vec![1, 1]];
    CrossedModule::new(z2.clone(), z2, action, vec![0, 0]).expect("fixture shape").with_name("Z2/Z2-trivial")
}

/// Names understood by [`library_xmod`].
pub const LIBRARY: &[&str] = &[
    "RG(Z1)", "RG(Z2)", "RG(Z3)", "RG(Z4)", "RG(Z6)", "RG(S3)", "RG(D4)", "RG(Q8)", "DG(Z2)", "DG(Z3)", "DG(Z4)",
    "DG(Z6)", "DG(S3)", "DG(D4)", "DG(Q8)", "Z4->Z2", "Z2/Z2-trivial",
];

/// A crossed module from the built-in library, by name. Besides the names in
/// [`LIBRARY`], `RG(G)` and `DG(G)` accept any named group.
pub fn library_xmod(name: &str) -> Option<CrossedModule> {
    match name {
        "Z4->Z2" => return Some(fixture_z4_to_z2()),
        "Z2/Z2-trivial" => return Some(fixture_z2_trivial()),
        _ => {}
    }
    let inner = name.get(3..name.len().checked_sub(1)?)?;
    if !name.ends_with(')') {
        return None;
    }
    let g = named_group(inner).ok()?;
    match &name[..3] {
        "RG(" => Some(make_rg(&g)),
        "DG(" => Some(make_dg(&g)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_validates() {
        for name in LIBRARY.iter().chain(&["DG(S4)", "RG(S4)"]) {
            let x = library_xmod(name).unwrap();
            assert!(x.validate().is_ok(), "{name}: {:?}", x.validate());
            let e = x.exactness().unwrap();
            assert_eq!(x.x2().order() * e.cosets.len(), e.kernel.len() * x.x1().order());
        }
        assert!(library_xmod("XG(S3)").is_none());
        assert!(library_xmod("DG(A5)").is_none());
    }

    #[test]
    fn rg_and_dg_exactness() {
        for name in ["Z1", "S3", "Q8", "D4"] {
            let g = named_group(name).unwrap();
            let e = make_rg(&g).exactness().unwrap();
            assert_eq!((e.kernel.len(), e.image.len(), e.cosets.len(), e.global_order), (1, 1, g.order(), g.order()));
            let e = make_dg(&g).exactness().unwrap();
            assert_eq!((e.kernel.len(), e.image.len(), e.cosets.len(), e.global_order), (1, g.order(), 1, g.order()));
        }
    }

    #[test]
    fn z4_to_z2_exactness() {
        let e = fixture_z4_to_z2().exactness().unwrap();
        assert_eq!(e.kernel, vec![0, 2]);
        assert_eq!(e.image, vec![0, 1]);
        assert_eq!(e.cosets.len(), 1);
        assert_eq!(e.global_order, 4);
        let e = fixture_z2_trivial().exactness().unwrap();
        assert_eq!((e.kernel.len(), e.cosets.len(), e.global_order), (2, 2, 4));
    }

    #[test]
    fn non_homomorphic_boundary() {
        let z2 = named_group("Z2").unwrap();
        let z4 = named_group("Z4").unwrap();
        let action = (0..4).map(|m| vec![m; 2]).collect();
        let x = CrossedModule::new(z2, z4, action, vec![0, 1, 1, 0]).unwrap();
        let r = x.validate();
        assert!(r.failures.iter().any(|f| matches!(f, ValidationFailure::BoundaryNotHom { .. })));
    }

    #[test]
    fn axiom_failures_are_detected() {
        let s3 = named_group("S3").unwrap();
        // conjugation action with trivial boundary violates XMod2
        let n = 6;
        let action: Vec<Vec<usize>> = (0..n).map(|m| (0..n).map(|h| s3.conjugate(m, h)).collect()).collect();
        let x = CrossedModule::new(s3.clone(), s3.clone(), action, vec![0; 6]).unwrap();
        let r = x.validate();
        assert_eq!(r.failures, vec![ValidationFailure::XMod2Violation { m: 1, n: 2 }]);
        // trivial action with the identity boundary violates XMod1 and XMod2
        let action: Vec<Vec<usize>> = (0..n).map(|m| vec![m; n]).collect();
        let x = CrossedModule::new(s3.clone(), s3.clone(), action, (0..6).collect()).unwrap();
        let r = x.validate();
        assert_eq!(r.failures.len(), 2, "{r:?}");
        assert!(matches!(r.failures[0], ValidationFailure::XMod1Violation { .. }));
        assert!(matches!(r.failures[1], ValidationFailure::XMod2Violation { .. }));
        // right translation is an action but not by automorphisms
        let action: Vec<Vec<usize>> = (0..n).map(|m| (0..n).map(|h| s3.mul(m, h)).collect()).collect();
        let x = CrossedModule::new(s3.clone(), s3.clone(), action, (0..6).collect()).unwrap();
        assert!(x.validate().failures.iter().any(|f| matches!(f, ValidationFailure::NotAutomorphism { .. })));
        // a constant table is not an action
        let action = vec![vec![1, 1], vec![1, 1]];
        let z2 = named_group("Z2").unwrap();
        let x = CrossedModule::new(z2.clone(), z2, action, vec![0, 0]).unwrap();
        assert!(matches!(x.validate().failures[0], ValidationFailure::NotAnAction { .. }));
    }

    #[test]
    fn shape_errors() {
        let z2 = named_group("Z2").unwrap();
        assert!(CrossedModule::new(z2.clone(), z2.clone(), vec![vec![0, 0]], vec![0, 0]).is_err());
        assert!(CrossedModule::new(z2.clone(), z2.clone(), vec![vec![0, 0], vec![1, 2]], vec![0, 0]).is_err());
        assert!(CrossedModule::new(z2.clone(), z2, vec![vec![0, 0], vec![1, 1]], vec![0, 5]).is_err());
    }
}
