use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use xmodcat_core::Cyclotomic;

fn cyc() -> impl Strategy<Value = Cyclotomic> {
    let conductors = prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 8, 12, 15, 24]);
    conductors.prop_flat_map(|n| {
        prop::collection::vec((-6i64..=6, 1i64..=4), n as usize).prop_map(move |cs| {
            let coeffs: Vec<BigRational> =
                cs.into_iter().map(|(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b))).collect();
            Cyclotomic::from_coeffs(n, &coeffs)
        })
    })
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if let Some(i) = a.inv() {
            prop_assert!((&a * &i).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(a in cyc(), b in cyc()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }

    #[test]
    fn embedding_round_trip(a in cyc(), k in 1u32..=5) {
        let m = a.conductor() * k;
        let up = a.full_coeffs();
        let mut wide = vec![BigRational::from_integer(0.into()); m as usize];
        let step = (m / a.conductor()) as usize;
        for (j, c) in up.into_iter().enumerate() {
            wide[j * step] += c;
        }
        prop_assert_eq!(Cyclotomic::from_coeffs(m, &wide), a);
    }

    #[test]
    fn approx_is_a_homomorphism(a in cyc(), b in cyc()) {
        let (x, y) = (a.approx(), b.approx());
        prop_assert!(close((&a + &b).approx(), (x.0 + y.0, x.1 + y.1)));
        prop_assert!(close((&a * &b).approx(), (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)));
    }

    #[test]
    fn json_round_trip(a in cyc()) {
        let s = serde_json::to_string(&a).unwrap();
        let b: Cyclotomic = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn json_shape() {
    let x = Cyclotomic::root_of_unity(3, 2);
    let v = serde_json::to_value(&x).unwrap();
    assert_eq!(v["conductor"], 3);
    assert_eq!(v["terms"], serde_json::json!([[0, -1, 1], [1, -1, 1]]));
    assert!((v["approx"][0].as_f64().unwrap() + 0.5).abs() < 1e-12);
}
