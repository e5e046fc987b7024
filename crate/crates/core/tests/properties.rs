mod common;

use dihedral_core::cover::{double_cover_homology, evaluate_linking, linking_form, self_linking};
use dihedral_core::linalg::{four_squares, is_primitive, rational_inverse, snf, IntMatrix};
use dihedral_core::modulus::units;
use dihedral_core::obstruction::{
    char_class_orbits, char_knot_to_character, characteristic_knot_classes, quotient_classes, seifert_criterion,
    surjective_characters, verdict, DEFAULT_ENUM_CAP,
};
use dihedral_core::parse::{parse_matrix, render};
use dihedral_core::report::{analyze, AnalyzeOptions, KnotRecord};
use dihedral_core::seifert::SeifertMatrix;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use common::{big, odd_divisors};

/// `M + T` with `M` symmetric and `T` the standard block matrix, so `V − Vᵀ` is unimodular.
fn seifert(max_genus: usize, bound: i64) -> impl Strategy<Value = SeifertMatrix> {
    (1..=max_genus).prop_flat_map(move |g| {
        let k = 2 * g;
        prop::collection::vec(-bound..=bound, k * (k + 1) / 2).prop_map(move |upper| {
            let mut rows = vec![vec![0i64; k]; k];
            let mut it = upper.into_iter();
            for i in 0..k {
                for j in i..k {
                    let x = it.next().unwrap();
                    rows[i][j] = x;
                    rows[j][i] = x;
                }
            }
            for b in 0..g {
                rows[2 * b][2 * b + 1] += 1;
            }
            SeifertMatrix::from_rows(&rows).unwrap()
        })
    })
}

fn nonsingular_seifert() -> impl Strategy<Value = SeifertMatrix> {
    seifert_with_det(3000)
}

fn seifert_with_det(max_det: u64) -> impl Strategy<Value = SeifertMatrix> {
    seifert(2, 3).prop_filter("determinant above 1", move |v| {
        let d = v.knot_determinant().abs();
        d > BigInt::from(1) && d <= BigInt::from(max_det)
    })
}

fn int_matrix(max: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |e| IntMatrix::new(r, c, big(&e)).unwrap())
    })
}

fn all_elements(d: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for di in d {
        let di: i64 = di.try_into().unwrap();
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..di).map(move |x| {
                    let mut q = p.clone();
                    q.push(BigInt::from(x));
                    q
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_certificate(m in int_matrix(4, 6)) {
        let s = snf(&m);
        let pmq = s.p().checked_mul(&m).unwrap().checked_mul(s.q()).unwrap();
        prop_assert_eq!(&pmq, s.d());
        prop_assert!(s.d().is_diagonal());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn smith_form_ignores_row_and_column_order(m in int_matrix(4, 6), rot in 0usize..4) {
        let rows = m.to_rows();
        let r = rot % rows.len();
        let permuted: Vec<BigInt> = rows[r..].iter().chain(&rows[..r]).flatten().cloned().collect();
        let pm = IntMatrix::new(m.rows(), m.cols(), permuted).unwrap();
        prop_assert_eq!(snf(&pm).diagonal(), snf(&m).diagonal());
        prop_assert_eq!(snf(&m.transpose()).diagonal(), snf(&m).diagonal());
    }

    #[test]
    fn rational_inverse_is_inverse(v in nonsingular_seifert()) {
        let a = v.symmetrize();
        let inv = rational_inverse(&a).unwrap();
        let prod = dihedral_core::linalg::RatMatrix::from_int(&a).checked_mul(&inv).unwrap();
        prop_assert!(prod.is_identity());
    }

    #[test]
    fn primitivity_is_sign_and_order_invariant(mut xs in prop::collection::vec(-30i64..=30, 1..6), flip in any::<bool>()) {
        let before = is_primitive(&big(&xs));
        xs.reverse();
        if flip {
            xs[0] = -xs[0];
        }
        prop_assert_eq!(is_primitive(&big(&xs)), before);
    }

    #[test]
    fn parse_render_round_trip(v in seifert(3, 1_000_000)) {
        prop_assert_eq!(parse_matrix(&render(&v)).unwrap(), v);
    }

    #[test]
    fn linking_is_lift_independent(
        v in nonsingular_seifert(),
        u in prop::collection::vec(-9i64..=9, 4),
        w in prop::collection::vec(-9i64..=9, 4),
        z in prop::collection::vec(-5i64..=5, 4),
    ) {
        let k = v.size();
        let a = v.symmetrize();
        let (u, w, z) = (big(&u[..k]), big(&w[..k]), big(&z[..k]));
        let shifted: Vec<BigInt> = u.iter().zip(a.mul_vec(&z).unwrap()).map(|(x, y)| x + y).collect();
        let base = evaluate_linking(&a, &u, &w).unwrap();
        prop_assert_eq!(evaluate_linking(&a, &shifted, &w).unwrap(), base.clone());
        prop_assert_eq!(evaluate_linking(&a, &w, &u).unwrap(), base.clone());
        prop_assert!(base.has_odd_denominator());
    }

    #[test]
    fn linking_pairing_is_nondegenerate(v in nonsingular_seifert()) {
        let g = double_cover_homology(&v);
        let l = linking_form(&g);
        for c in all_elements(g.invariant_factors()).iter().skip(1) {
            let e = g.element(c).unwrap();
            prop_assert!(l.character_values(&e).iter().any(|x| !x.is_zero()), "{} pairs trivially", e);
        }
    }

    #[test]
    fn surjections_match_brute_force(v in seifert_with_det(200)) {
        let g = double_cover_homology(&v);
        let l = linking_form(&g);
        let d = g.invariant_factors();
        for n in odd_divisors(&v.knot_determinant()) {
            let nb = BigInt::from(n);
            // homomorphisms ⊕ Z/dᵢ → Z/n are images aᵢ with dᵢ·aᵢ ≡ 0; onto iff gcd(aᵢ, n) = 1
            let mut onto = 0u64;
            for imgs in all_elements(&vec![nb.clone(); d.len()]) {
                let hom = imgs.iter().zip(d).all(|(x, di)| (x * di).is_multiple_of(&nb));
                let gcd = imgs.iter().fold(nb.clone(), |acc, x| acc.gcd(x));
                if hom && gcd == BigInt::from(1) {
                    onto += 1;
                }
            }
            let chars = surjective_characters(&l, n, DEFAULT_ENUM_CAP).unwrap();
            prop_assert_eq!(chars.len() as u64, onto, "n = {}", n);
        }
    }

    #[test]
    fn characteristic_classes_correspond_to_characters(v in nonsingular_seifert()) {
        let g = double_cover_homology(&v);
        let l = linking_form(&g);
        for n in odd_divisors(&v.knot_determinant()) {
            let classes = characteristic_knot_classes(&v, n, DEFAULT_ENUM_CAP).unwrap();
            let chars = surjective_characters(&l, n, DEFAULT_ENUM_CAP).unwrap();
            prop_assert_eq!(classes.len(), chars.len());
            let mut from_classes: Vec<_> = classes
                .iter()
                .map(|b| char_knot_to_character(&l, b).unwrap().element().clone())
                .collect();
            from_classes.sort();
            from_classes.dedup();
            let mut direct: Vec<_> = chars.iter().map(|c| c.element().clone()).collect();
            direct.sort();
            prop_assert_eq!(from_classes, direct);
            prop_assert_eq!(char_class_orbits(&classes).len(), quotient_classes(&l, &chars).unwrap().len());
        }
    }

    #[test]
    fn verdicts_are_unit_invariant(v in seifert_with_det(200)) {
        let g = double_cover_homology(&v);
        let l = linking_form(&g);
        for n in odd_divisors(&v.knot_determinant()) {
            for b in characteristic_knot_classes(&v, n, DEFAULT_ENUM_CAP).unwrap() {
                let crit = seifert_criterion(&v, &b);
                let ch = char_knot_to_character(&l, &b).unwrap();
                prop_assert_eq!(crit, verdict(&l, &ch).extends);
                for u in units(n) {
                    prop_assert_eq!(seifert_criterion(&v, &b.scale(u)), crit);
                    let scaled = g.scale(ch.element(), &BigInt::from(u));
                    prop_assert_eq!(self_linking(&l, &scaled).is_zero(), crit);
                }
            }
        }
    }

    #[test]
    fn reports_are_consistent(v in nonsingular_seifert()) {
        let rec = KnotRecord { name: "k".into(), seifert: v, source: "proptest".into() };
        let r = analyze(&rec, &AnalyzeOptions::default()).unwrap();
        for b in &r.blocks {
            prop_assert!(b.extendable_class_count <= b.quotient_class_count);
        }
        prop_assert_eq!(r.to_json(), analyze(&rec, &AnalyzeOptions::default()).unwrap().to_json());
    }

    #[test]
    fn four_squares_sum(k in 0u64..1_000_000) {
        let s = four_squares(&BigUint::from(k));
        let total: BigUint = s.iter().map(|x| x * x).sum();
        prop_assert_eq!(total, BigUint::from(k));
    }
}
