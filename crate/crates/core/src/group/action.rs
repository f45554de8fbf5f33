use super::{Group, GroupError, Subgroup};

/// Right action of a group on `0..domain_size`, written `m^g` elsewhere.
///
/// Construction checks `m^1 = m` and `(m^g)^h = m^(gh)`. Whether the action is
/// by automorphisms of a domain group is a separate question, see
/// [`ActionTable::automorphism_violation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTable {
    domain_size: usize,
    group_order: usize,
    act: Vec<u32>,
}

impl ActionTable {
    pub fn new(group: &Group, domain_size: usize, act: Vec<usize>) -> Result<Self, GroupError> {
        let n = group.order();
        if act.len() != domain_size * n {
            return Err(GroupError::InvalidAction(format!(
                "expected {domain_size}x{n} entries, got {}",
                act.len()
            )));
        }
        if let Some(pos) = act.iter().position(|&v| v >= domain_size) {
            return Err(GroupError::InvalidAction(format!(
                "entry [{}][{}] = {} out of range",
                pos / n,
                pos % n,
                act[pos]
            )));
        }
        let table = ActionTable {
            domain_size,
            group_order: n,
            act: act.into_iter().map(|v| v as u32).collect(),
        };
        if let Some(m) = (0..domain_size).find(|&m| table.act(m, group.identity()) != m) {
            return Err(GroupError::InvalidAction(format!("identity moves point {m}")));
        }
        if let Some((m, g, h)) = table.composition_violation(group) {
            return Err(GroupError::InvalidAction(format!(
                "(m^g)^h != m^(gh) at m={m}, g={g}, h={h}"
            )));
        }
        Ok(table)
    }

    /// Wraps a table already known to be a valid action.
    pub(crate) fn from_trusted(domain_size: usize, group_order: usize, act: Vec<u32>) -> Self {
        debug_assert_eq!(act.len(), domain_size * group_order);
        ActionTable { domain_size, group_order, act }
    }

    pub fn trivial(group: &Group, domain_size: usize) -> Self {
        ActionTable {
            domain_size,
            group_order: group.order(),
            act: (0..domain_size).flat_map(|m| std::iter::repeat_n(m as u32, group.order())).collect(),
        }
    }

    /// Conjugation `m^g = g⁻¹ m g` of a group on itself.
    pub fn conjugation(group: &Group) -> Self {
        let n = group.order();
        let act = (0..n).flat_map(|m| (0..n).map(move |g| group.conjugate(m, g) as u32)).collect();
        ActionTable { domain_size: n, group_order: n, act }
    }

    /// Right translation `m^g = m g` of a group on itself.
    pub fn right_regular(group: &Group) -> Self {
        let n = group.order();
        let act = (0..n).flat_map(|m| (0..n).map(move |g| group.mul(m, g) as u32)).collect();
        ActionTable { domain_size: n, group_order: n, act }
    }

    #[inline]
    pub fn act(&self, m: usize, g: usize) -> usize {
        self.act[m * self.group_order + g] as usize
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    fn composition_violation(&self, group: &Group) -> Option<(usize, usize, usize)> {
        for m in 0..self.domain_size {
            for g in 0..self.group_order {
                let mg = self.act(m, g);
                for h in 0..self.group_order {
                    if self.act(mg, h) != self.act(m, group.mul(g, h)) {
                        return Some((m, g, h));
                    }
                }
            }
        }
        None
    }

    /// First `(m1, m2, g)` with `(m1 m2)^g != m1^g m2^g`, if any.
    pub fn automorphism_violation(&self, domain: &Group) -> Option<(usize, usize, usize)> {
        for m1 in 0..self.domain_size {
            for m2 in 0..self.domain_size {
                let prod = domain.mul(m1, m2);
                for g in 0..self.group_order {
                    if self.act(prod, g) != domain.mul(self.act(m1, g), self.act(m2, g)) {
                        return Some((m1, m2, g));
                    }
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone)]
pub struct OrbitStabilizer {
    /// Orbit points, ascending.
    pub orbit: Vec<usize>,
    /// `point^transversal[i] = orbit[i]`, with the smallest such group element.
    pub transversal: Vec<usize>,
    pub stabilizer: Subgroup,
}

impl OrbitStabilizer {
    pub fn position(&self, m: usize) -> Option<usize> {
        self.orbit.binary_search(&m).ok()
    }
}

pub fn orbit_stabilizer(action: &ActionTable, group: &Group, point: usize) -> Result<OrbitStabilizer, GroupError> {
    if action.group_order() != group.order() {
        return Err(GroupError::InvalidAction(format!(
            "action is for a group of order {}, not {}",
            action.group_order(),
            group.order()
        )));
    }
    if point >= action.domain_size() {
        return Err(GroupError::InvalidAction(format!("point {point} outside the domain")));
    }
    let mut first = vec![usize::MAX; action.domain_size()];
    let mut stab = Vec::new();
    for g in 0..group.order() {
        let m = action.act(point, g);
        if first[m] == usize::MAX {
            first[m] = g;
        }
        if m == point {
            stab.push(g);
        }
    }
    let (orbit, transversal): (Vec<usize>, Vec<usize>) =
        first.iter().enumerate().filter(|(_, &g)| g != usize::MAX).map(|(m, &g)| (m, g)).unzip();
    let stabilizer = group.subgroup(&stab)?;
    Ok(OrbitStabilizer { orbit, transversal, stabilizer })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;

    #[test]
    fn trivial_action_fixes_everything() {
        let g = named_group("S3").unwrap();
        let a = ActionTable::trivial(&g, 4);
        let os = orbit_stabilizer(&a, &g, 2).unwrap();
        assert_eq!(os.orbit, vec![2]);
        assert_eq!(os.stabilizer.order(), 6);
    }

    #[test]
    fn conjugation_on_transposition() {
        let g = named_group("S3").unwrap();
        let a = ActionTable::conjugation(&g);
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let os = orbit_stabilizer(&a, &g, t).unwrap();
        // brute force over all conjugators
        let mut orbit: Vec<usize> = (0..6).map(|h| g.conjugate(t, h)).collect();
        orbit.sort();
        orbit.dedup();
        assert_eq!(os.orbit, orbit);
        assert_eq!(os.orbit.len(), 3);
        assert_eq!(os.stabilizer.order(), 2);
        for (m, &tr) in os.orbit.iter().zip(&os.transversal) {
            assert_eq!(a.act(t, tr), *m);
        }
    }

    #[test]
    fn regular_action_is_transitive() {
        let g = named_group("D4").unwrap();
        let a = ActionTable::right_regular(&g);
        let os = orbit_stabilizer(&a, &g, g.identity()).unwrap();
        assert_eq!(os.orbit.len(), 8);
        assert_eq!(os.stabilizer.order(), 1);
    }

    #[test]
    fn orbit_stabilizer_theorem_exhaustive() {
        for name in ["S3", "D4", "Q8", "S4", "Z6"] {
            let g = named_group(name).unwrap();
            for a in [ActionTable::conjugation(&g), ActionTable::right_regular(&g)] {
                for p in 0..g.order() {
                    let os = orbit_stabilizer(&a, &g, p).unwrap();
                    assert_eq!(os.orbit.len() * os.stabilizer.order(), g.order());
                }
            }
        }
    }

    #[test]
    fn rejects_bad_actions() {
        let g = named_group("Z2").unwrap();
        assert!(ActionTable::new(&g, 2, vec![1, 1, 0, 0]).is_err());
        assert!(ActionTable::new(&g, 2, vec![0, 1, 1]).is_err());
        assert!(ActionTable::new(&g, 2, vec![0, 1, 1, 0]).is_ok());
        let s3 = named_group("S3").unwrap();
        let a = ActionTable::trivial(&g, 2);
        assert!(matches!(orbit_stabilizer(&a, &s3, 0), Err(GroupError::InvalidAction(_))));
    }

    #[test]
    fn conjugation_is_by_automorphisms() {
        let g = named_group("Q8").unwrap();
        assert_eq!(ActionTable::conjugation(&g).automorphism_violation(&g), None);
        assert!(ActionTable::right_regular(&g).automorphism_violation(&g).is_some());
    }
}
