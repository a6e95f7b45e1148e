use jumploci_core::algebra::factor::poly_factorize;
use jumploci_core::algebra::field::{Field, FieldElement};
use jumploci_core::algebra::integer::{smith_normal_form, IntegerMatrix};
use jumploci_core::algebra::poly::UniPoly;
use jumploci_core::bruhat_tits::{apply_isometry, busemann_cocycle, lattice_distance, BorelEnd, LatticeClass, TreeIsometry};
use jumploci_core::cohomology::{h1, is_coboundary, Cocycle};
use jumploci_core::orbifold::{orbifold_euler_char, OrbifoldSignature};
use jumploci_core::presentation::{eval_word, fox_derivative, Character, GroupPresentation, Letter, Word};
use jumploci_core::valuation::DiscreteValuation;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn word(ngens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..ngens, prop::bool::ANY), 0..=max_len).prop_map(|ls| {
        Word::from_letters(ls.into_iter().map(|(gen, neg)| Letter {
            gen,
            exp: if neg { -1 } else { 1 },
        }))
    })
}

fn f7_units(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..7, n)
}

fn q_nonzero() -> impl Strategy<Value = (i64, i64)> {
    (prop_oneof![-30i64..=-1, 1i64..=30], 1i64..=30)
}

fn rational(q: &Field, (n, d): (i64, i64)) -> FieldElement {
    q.from_int(n) / q.from_int(d)
}

proptest! {
    // w − 1 = Σ_i ∂w/∂x_i · (x_i − 1) in the group ring, checked at a character
    #[test]
    fn fox_fundamental_identity(w in word(3, 12), images in f7_units(3)) {
        let f = Field::prime(7).unwrap();
        let imgs: Vec<FieldElement> = images.iter().map(|&x| f.from_int(x)).collect();
        let lhs = eval_word(&f, &imgs, &w) - f.one();
        let rhs = (0..3).fold(f.zero(), |acc, i| {
            acc + fox_derivative(&w, i).evaluate(&f, &imgs) * (&imgs[i] - &f.one())
        });
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn free_reduction_is_confluent(u in word(3, 8), v in word(3, 8), w in word(3, 8)) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        prop_assert!(u.mul(&u.inverse()).is_empty());
        // inserting a cancelling pair anywhere reduces away
        let padded = u.mul(&w).mul(&w.inverse()).mul(&v);
        prop_assert_eq!(padded, u.mul(&v));
    }

    #[test]
    fn smith_form_reconstructs(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..=3)) {
        let m = IntegerMatrix::from_rows(3, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.v.mul(&s.v_inv), IntegerMatrix::identity(3));
        let d = s.diagonal();
        for k in 1..d.len() {
            if !d[k].is_zero() {
                prop_assert!((&d[k] % &d[k - 1]).is_zero());
            }
        }
    }

    #[test]
    fn valuation_is_a_valuation(a in q_nonzero(), b in q_nonzero(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let q = Field::rationals();
        let v = DiscreteValuation::p_adic(p).unwrap();
        let (x, y) = (rational(&q, a), rational(&q, b));
        prop_assert_eq!(v.val(&(&x * &y)), v.val(&x) + v.val(&y));
        let s = &x + &y;
        if !s.is_zero() {
            prop_assert!(v.val(&s) >= v.val(&x).min(v.val(&y)));
        }
    }

    #[test]
    fn tree_metric_and_isometries(
        n1 in -3i64..=3, n2 in -3i64..=3, n3 in -3i64..=3,
        u1 in -8i64..=8, u2 in -8i64..=8, u3 in -8i64..=8,
        e in prop::array::uniform4(q_nonzero()),
    ) {
        let q = Field::rationals();
        let v = DiscreteValuation::p_adic(2).unwrap();
        let x = LatticeClass::new(&v, n1, &q.from_int(u1)).unwrap();
        let y = LatticeClass::new(&v, n2, &q.from_int(u2)).unwrap();
        let z = LatticeClass::new(&v, n3, &q.from_int(u3)).unwrap();
        let d = |a: &LatticeClass, b: &LatticeClass| lattice_distance(a, b).unwrap();
        prop_assert_eq!(d(&x, &x), 0);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        prop_assert_eq!(d(&x, &y) % 2 == 0, (d(&x, &z) + d(&z, &y)) % 2 == 0);
        if let Ok(g) = TreeIsometry::new(&v, e.map(|r| rational(&q, r))) {
            let (gx, gy) = (apply_isometry(&g, &x).unwrap(), apply_isometry(&g, &y).unwrap());
            prop_assert_eq!(d(&gx, &gy), d(&x, &y));
        }
    }

    #[test]
    fn busemann_is_a_homomorphism(a in q_nonzero(), b in q_nonzero(), c in q_nonzero(), e in q_nonzero()) {
        let q = Field::rationals();
        let v = DiscreteValuation::p_adic(3).unwrap();
        let g = TreeIsometry::new(&v, [rational(&q, a), rational(&q, b), q.zero(), q.one()]).unwrap();
        let h = TreeIsometry::new(&v, [rational(&q, c), rational(&q, e), q.zero(), q.one()]).unwrap();
        let w = |m: &TreeIsometry| busemann_cocycle(m, BorelEnd).unwrap();
        prop_assert_eq!(w(&g.mul(&h)), w(&g) + w(&h));
    }

    #[test]
    fn coboundaries_are_recognized(t in q_nonzero(), mu in q_nonzero()) {
        let q = Field::rationals();
        let p = GroupPresentation::parse("gens a t\nrel t a t^-1 a^-2").unwrap();
        let chi = Character::new(&p, &q, vec![q.one(), rational(&q, t)]).unwrap();
        let mu = rational(&q, mu);
        let c = Cocycle::coboundary(&chi, &mu);
        if chi.is_trivial() {
            prop_assert!(c.values().iter().all(|x| x.is_zero()));
        } else {
            prop_assert_eq!(is_coboundary(&c), Some(mu));
        }
        let r = h1(&chi);
        prop_assert_eq!(r.dim_h1 + r.dim_b1, r.dim_z1);
    }

    #[test]
    fn factorization_multiplies_back(coeffs in prop::collection::vec(0i64..5, 2..=7)) {
        let f5 = Field::prime(5).unwrap();
        let f = UniPoly::new(&f5, coeffs.iter().map(|&c| f5.from_int(c)).collect());
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let fac = poly_factorize(&f).unwrap();
        let back = fac.factors.iter().fold(UniPoly::constant(fac.unit.clone()), |acc, (g, e)| acc.mul(&g.pow(*e)));
        prop_assert_eq!(back, f);
    }

    #[test]
    fn euler_characteristic_decreases(g in 0u32..4, cones in prop::collection::vec(2u64..9, 0..4), i in 0usize..4) {
        let s = OrbifoldSignature::new(g, cones.clone()).unwrap();
        let more_genus = OrbifoldSignature::new(g + 1, cones.clone()).unwrap();
        prop_assert!(orbifold_euler_char(&more_genus) < orbifold_euler_char(&s));
        if !cones.is_empty() {
            let mut bigger = cones.clone();
            bigger[i % cones.len()] += 1;
            let t = OrbifoldSignature::new(g, bigger).unwrap();
            prop_assert!(orbifold_euler_char(&t) < orbifold_euler_char(&s));
        }
    }
}
