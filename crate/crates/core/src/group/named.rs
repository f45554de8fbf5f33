use super::{Group, GroupError};

/// Names accepted by [`named_group`].
pub const NAMED_GROUPS: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "D4", "Q8", "S3", "S4",
];

/// Small built-in groups, generated from permutations.
pub fn named_group(name: &str) -> Result<Group, GroupError> {
    let (degree, gens): (usize, Vec<Vec<usize>>) = match name {
        "D4" => (4, vec![vec![1, 2, 3, 0], vec![0, 3, 2, 1]]),
        // right multiplication by i and j on 1, i, j, k, -1, -i, -j, -k
        "Q8" => (8, vec![vec![1, 4, 7, 2, 5, 0, 3, 6], vec![2, 3, 4, 5, 6, 7, 0, 1]]),
        "S3" => (3, vec![vec![1, 0, 2], vec![1, 2, 0]]),
        "S4" => (4, vec![vec![1, 2, 3, 0], vec![1, 0, 2, 3]]),
        _ => {
            let n: usize = name
                .strip_prefix('Z')
                .and_then(|s| s.parse().ok())
                .filter(|n| (1..=12).contains(n))
                .ok_or_else(|| GroupError::UnknownName(name.to_string()))?;
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            (n, if n == 1 { vec![] } else { vec![cycle] })
        }
    };
    Ok(Group::from_permutations(degree, &gens)?.with_name(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let expect = [("Z1", 1), ("Z12", 12), ("D4", 8), ("Q8", 8), ("S3", 6), ("S4", 24)];
        for (n, o) in expect {
            assert_eq!(named_group(n).unwrap().order(), o);
        }
        assert!(named_group("Z13").is_err());
        assert!(named_group("A5").is_err());
    }

    #[test]
    fn cyclic_generator_powers_are_indices() {
        let z4 = named_group("Z4").unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(z4.mul(a, b), (a + b) % 4);
            }
        }
    }

    #[test]
    fn q8_structure() {
        let q = named_group("Q8").unwrap();
        assert_eq!(q.class_count(), 5);
        assert_eq!((0..8).filter(|&x| q.element_order(x) == 2).count(), 1);
        assert_eq!(q.exponent(), 4);
        let d = named_group("D4").unwrap();
        assert_eq!(d.class_count(), 5);
        assert_eq!((0..8).filter(|&x| d.element_order(x) == 2).count(), 5);
        assert_eq!(named_group("S4").unwrap().class_count(), 5);
    }
}
