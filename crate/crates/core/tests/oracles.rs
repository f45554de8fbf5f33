use num_bigint::BigInt;
use num_rational::BigRational;
use xmodcat_core::cyclo::Cyclotomic;
use xmodcat_core::premodular::{vacuum_analysis, ModularData, Verdict};
use xmodcat_core::xchar::{class_pair_count, CharacterTheory};
use xmodcat_core::xmod::library_xmod;

fn theory(name: &str) -> CharacterTheory {
    CharacterTheory::new(library_xmod(name).unwrap()).unwrap()
}

fn half(sign: i64) -> Cyclotomic {
    Cyclotomic::from_rational(BigRational::new(BigInt::from(sign), BigInt::from(2)))
}

#[test]
fn dg_z2_s_and_t_match_hand_computation() {
    let t = theory("DG(Z2)");
    let d = ModularData::compute(&t).unwrap();
    let signs = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];
    for (p, row) in signs.iter().enumerate() {
        for (q, &s) in row.iter().enumerate() {
            assert_eq!(d.smatrix[p][q], half(s), "S[{p}][{q}]");
        }
    }
    let t_diag: Vec<i64> = d.tmatrix.iter().map(|w| w.as_i64().unwrap()).collect();
    assert_eq!(t_diag, vec![1, 1, 1, -1]);
}

#[test]
fn dg_z2_fusion_is_klein_four() {
    let t = theory("DG(Z2)");
    let f = t.fusion_tensor().unwrap();
    let labels = t.labels();
    for p in 0..4 {
        for q in 0..4 {
            for r in 0..4 {
                let m = labels[p].orbit_rep ^ labels[q].orbit_rep;
                let k = labels[p].stab_irr ^ labels[q].stab_irr;
                let expect = u64::from(labels[r].orbit_rep == m && labels[r].stab_irr == k);
                assert_eq!(f.get(p, q, r), expect, "N_{p}{q}^{r}");
            }
        }
    }
}

#[test]
fn rg_s3_sigma_squared() {
    let t = theory("RG(S3)");
    let dims = t.dims();
    assert_eq!(dims, vec![1, 1, 2]);
    let f = t.fusion_tensor().unwrap();
    let sigma = 2;
    for r in 0..3 {
        assert_eq!(f.get(sigma, sigma, r), 1, "sigma x sigma contains irreducible {r} once");
    }
    assert_eq!(f.get(1, 1, 0), 1);
    assert_eq!(f.get(1, sigma, sigma), 1);
}

#[test]
fn rg_q8_indicator_of_quaternion_rep() {
    let t = theory("RG(Q8)");
    let d = ModularData::compute(&t).unwrap();
    for (p, dim) in t.dims().into_iter().enumerate() {
        assert_eq!(d.fs_indicators[p], if dim == 2 { -1 } else { 1 });
    }
}

#[test]
fn dg_z3_indicators() {
    let t = theory("DG(Z3)");
    let d = ModularData::compute(&t).unwrap();
    assert_eq!(d.fs_indicators.iter().filter(|&&v| v == 1).count(), 1);
    assert_eq!(d.fs_indicators.iter().filter(|&&v| v == 0).count(), 8);
}

#[test]
fn z4_to_z2_vacuum() {
    let t = theory("Z4->Z2");
    let d = ModularData::compute(&t).unwrap();
    assert_eq!(d.global_order, 4);
    assert_eq!(t.len(), 8);
    let minus: Vec<_> = t
        .labels()
        .iter()
        .zip(&d.omega)
        .filter(|(_, w)| w.as_i64() == Some(-1))
        .map(|(l, _)| (l.orbit_rep, l.stab_irr))
        .collect();
    assert_eq!(minus, vec![(1, 1), (3, 1)]);
    let v = vacuum_analysis(&t, &d).unwrap();
    // kernel {0, 2} gives the transparent pair ψ_(0,1), ψ_(2,1)
    assert_eq!(v.vacuum_dim, 2);
    assert_eq!(v.transparent.len(), 2);
    assert_eq!(v.mu.iter().sum::<u64>(), 2);
    assert_eq!(d.rank_s, 4);
    assert_eq!(v.verdict, Verdict::ModularizablePremodular);
}

#[test]
fn drinfeld_double_s3_shape() {
    let t = theory("DG(S3)");
    let mut dims = t.dims();
    dims.sort();
    assert_eq!(dims, vec![1, 1, 2, 2, 2, 2, 3, 3]);
    let d = ModularData::compute(&t).unwrap();
    let mut twists: Vec<(u32, u32)> = d.omega.iter().map(|w| w.as_root_of_unity().unwrap()).collect();
    twists.sort();
    // 1, 1, 1, ω, ω², 1, 1, -1
    assert_eq!(twists, vec![(1, 0), (1, 0), (1, 0), (1, 0), (1, 0), (2, 1), (3, 1), (3, 2)]);
}

#[test]
fn class_pair_count_brute_force() {
    for name in ["DG(S3)", "DG(D4)", "Z4->Z2", "RG(Q8)"] {
        let x = library_xmod(name).unwrap();
        let (x1, x2) = (x.x1(), x.x2());
        // commuting pairs: orbits of {(m, g) : m^g = m} under simultaneous conjugation
        let mut seen = vec![false; x1.order() * x2.order()];
        let mut orbits = 0;
        for m in 0..x2.order() {
            for g in 0..x1.order() {
                if x.act(m, g) != m || seen[m * x1.order() + g] {
                    continue;
                }
                orbits += 1;
                for h in 0..x1.order() {
                    let (mh, gh) = (x.act(m, h), x1.conjugate(g, h));
                    seen[mh * x1.order() + gh] = true;
                }
            }
        }
        assert_eq!(class_pair_count(&x), orbits, "{name}");
        assert_eq!(theory(name).len(), orbits, "{name}");
    }
}
