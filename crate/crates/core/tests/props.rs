use liedegen_core::deform::{build_mu_d, is_valid_deformation};
use liedegen_core::lie::families::{filiform, heisenberg};
use liedegen_core::linalg::{basis_vector, is_zero_vector};
use liedegen_core::{parse_scalar, LieAlgebra, LinearMap, Scalar, Subspace, Symbols, UniPoly};
use proptest::prelude::*;

fn symbols() -> Symbols {
    Symbols::new(&["a"]).unwrap()
}

fn poly_from(coeffs: &[i64]) -> Scalar {
    // coeffs[3*i + j] multiplies t^i a^j
    let mut acc = Scalar::zero();
    for (idx, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (i, j) = ((idx / 3) as i64, (idx % 3) as i64);
        let term = &(&Scalar::t().pow(i).unwrap() * &Scalar::var(1).pow(j).unwrap()) * &Scalar::from_int(c);
        acc = &acc + &term;
    }
    acc
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (prop::collection::vec(-3i64..=3, 9), prop::collection::vec(-3i64..=3, 9)).prop_map(|(n, d)| {
        let den = poly_from(&d);
        let den = if den.is_zero() { Scalar::one() } else { den };
        poly_from(&n).checked_div(&den).unwrap()
    })
}

fn int_matrix(n: usize) -> impl Strategy<Value = LinearMap> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
        LinearMap::from_rows(v.chunks(n).map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect()).unwrap()
    })
}

fn unitriangular(n: usize) -> impl Strategy<Value = LinearMap> {
    (prop::collection::vec(-2i64..=2, n * n), prop::collection::vec(1i64..=3, n)).prop_map(move |(v, d)| {
        let mut m = LinearMap::identity(n);
        for i in 0..n {
            m.set(i, i, Scalar::from_int(d[i]));
            for j in 0..i {
                m.set(i, j, Scalar::from_int(v[i * n + j]));
            }
        }
        m
    })
}

fn family() -> impl Strategy<Value = LieAlgebra> {
    prop_oneof![Just(heisenberg(1)), Just(heisenberg(2)), (4usize..=7).prop_map(filiform)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn scalar_canonical_form_is_unique(x in scalar(), y in scalar()) {
        let s = symbols();
        let text = x.format(&s);
        prop_assert_eq!(&parse_scalar(&text, &s).unwrap(), &x);
        if !y.is_zero() {
            let back = &(&x * &y).checked_div(&y).unwrap();
            prop_assert_eq!(back, &x);
            prop_assert_eq!(back.format(&s), text);
        }
        prop_assert_eq!(x.denom().leading_coeff(), liedegen_core::Rational::from_integer(1.into()));
    }

    #[test]
    fn scalar_field_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, Scalar::zero());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn substitution_is_a_ring_map(x in scalar(), y in scalar(), v in -4i64..=4) {
        let s = symbols();
        let val = Scalar::from_int(v);
        let sub = |q: &Scalar| q.substitute(1, &val, &s);
        if let (Ok(sx), Ok(sy)) = (sub(&x), sub(&y)) {
            prop_assert_eq!(sub(&(&x * &y)).unwrap(), &sx * &sy);
            prop_assert_eq!(sub(&(&x + &y)).unwrap(), &sx + &sy);
            prop_assert!(!sx.contains_var(1));
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(a in int_matrix(4)) {
        let ker = a.kernel();
        prop_assert_eq!(ker.len() + a.rank(), 4);
        for v in &ker {
            prop_assert!(is_zero_vector(&a.apply(v).unwrap()));
        }
    }

    #[test]
    fn inverse_and_minimal_polynomial(a in int_matrix(4)) {
        if a.determinant().unwrap().is_zero() {
            prop_assert!(a.inverse().is_err());
        } else {
            prop_assert_eq!(a.matmul(&a.inverse().unwrap()).unwrap(), LinearMap::identity(4));
        }
        let m = a.minimal_polynomial().unwrap();
        prop_assert!(m.eval_matrix(&a).unwrap().is_zero());
        prop_assert!(m.degree().unwrap() <= 4);
    }

    #[test]
    fn semisimplicity_of_conjugated_forms(p in unitriangular(4), eig in prop::collection::vec(-2i64..=2, 4), nil in any::<bool>()) {
        let mut d = LinearMap::diagonal(&eig.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>());
        if nil {
            // a Jordan block on a repeated eigenvalue
            d.set(1, 1, Scalar::from_int(eig[0]));
            d.set(0, 1, Scalar::one());
        }
        let a = p.matmul(&d).unwrap().matmul(&p.inverse().unwrap()).unwrap();
        prop_assert_eq!(a.is_semisimple().unwrap(), !nil);
        let mut roots: Vec<_> = eig.iter().map(|&x| liedegen_core::Rational::from_integer(x.into())).collect();
        if nil { roots[1] = roots[0].clone(); }
        roots.sort();
        roots.dedup();
        let m = a.minimal_polynomial().unwrap();
        let mut expected = UniPoly::from_roots(&roots);
        if nil {
            expected = expected.mul(&UniPoly::from_roots(&[liedegen_core::Rational::from_integer(eig[0].into())]));
        }
        prop_assert_eq!(m.monic(), expected.monic());
    }

    #[test]
    fn gl_action_group_law(mu in family(), seed in any::<u64>()) {
        let n = mu.dim();
        let mats: Vec<LinearMap> = (0..2).map(|k| {
            let mut m = LinearMap::identity(n);
            let mut s = seed.wrapping_add(k);
            for i in 0..n {
                for j in 0..n {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let v = ((s >> 33) % 5) as i64 - 2;
                    if j < i { m.set(i, j, Scalar::from_int(v)); }
                    if j == i { m.set(i, i, Scalar::from_int(v.abs() + 1)); }
                }
            }
            m
        }).collect();
        let (g, h) = (&mats[0], &mats[1]);
        let lhs = mu.gl_action(&g.matmul(h).unwrap()).unwrap();
        let rhs = mu.gl_action(h).unwrap().gl_action(g).unwrap();
        prop_assert!(lhs.same_brackets(&rhs));
        prop_assert!(lhs.is_lie());
        prop_assert!(mu.gl_action(&LinearMap::identity(n)).unwrap().same_brackets(&mu));
        let back = lhs.gl_action(&g.matmul(h).unwrap().inverse().unwrap()).unwrap();
        prop_assert!(back.same_brackets(&mu));
    }

    #[test]
    fn diagonal_derivations_give_valid_deformations(mu in family(), coeffs in prop::collection::vec(-3i64..=3, 8)) {
        let n = mu.dim();
        let h = Subspace::from_indices(n, 1..n);
        let restricted = mu.restrict(&h).unwrap();
        let basis = restricted.diagonal_derivations();
        prop_assert!(!basis.is_empty());
        let mut diag = vec![Scalar::zero(); n - 1];
        for (b, c) in basis.iter().zip(&coeffs) {
            for (d, x) in diag.iter_mut().zip(b) {
                *d = &*d + &(x * &Scalar::from_int(*c));
            }
        }
        let d = LinearMap::diagonal(&diag);
        prop_assert!(restricted.is_derivation(&d).unwrap());
        let phi = build_mu_d(&mu, &basis_vector(n, 0), &h, &d).unwrap();
        let report = is_valid_deformation(&mu, &phi).unwrap();
        prop_assert!(report.is_valid(), "{}", report.describe());
    }
}
