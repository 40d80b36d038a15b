use std::sync::Arc;

use jones_core::braid::{BraidWord, ClosureKind};
use jones_core::bracket::{bracket, jones_exact};
use jones_core::laurent::{d_poly, unit_a, LaurentPoly};
use jones_core::path_model::{apply_braid, phi_braid, BlockOperator, CoefficientTable, PathBasis};
use jones_core::tl::{jones_braid_trace, rho_a, ExactTl, KauffmanDiagram, TlElement};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn braid_strategy(n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    let letter = (1..n as i32, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g });
    proptest::collection::vec(letter, 0..=max_len).prop_map(move |w| BraidWord::new(n, w).unwrap())
}

fn sized_braid(max_n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_n).prop_flat_map(move |n| braid_strategy(n, max_len))
}

fn tl_element(n: usize) -> impl Strategy<Value = ExactTl> {
    let diagrams = KauffmanDiagram::enumerate(n);
    proptest::collection::vec((0..diagrams.len(), -3i64..=3, -4i64..=4), 1..4).prop_map(move |terms| {
        let mut x = ExactTl::zero(n, d_poly());
        for (i, c, e) in terms {
            let term = TlElement::from_diagram(diagrams[i].clone(), LaurentPoly::monomial(c, e), d_poly());
            x = x.try_add(&term).unwrap();
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn state_sum_matches_tl_trace(b in sized_braid(4, 8)) {
        let exact = jones_exact(&b.close(ClosureKind::Trace).unwrap()).unwrap();
        prop_assert_eq!(exact, jones_braid_trace(&b).unwrap());
    }

    #[test]
    fn jones_is_invariant_under_conjugation(b in sized_braid(4, 6), g in 1i32..4, neg in any::<bool>()) {
        let n = b.strands() as i32;
        let g = 1 + (g - 1) % (n - 1);
        let g = if neg { -g } else { g };
        let mut w = vec![g];
        w.extend_from_slice(b.word());
        w.push(-g);
        let conj = BraidWord::new(b.strands(), w).unwrap();
        prop_assert_eq!(
            jones_exact(&b.close(ClosureKind::Trace).unwrap()).unwrap(),
            jones_exact(&conj.close(ClosureKind::Trace).unwrap()).unwrap()
        );
    }

    #[test]
    fn jones_is_invariant_under_stabilization(b in sized_braid(4, 6), neg in any::<bool>()) {
        let n = b.strands();
        let mut w = b.word().to_vec();
        w.push(if neg { -(n as i32) } else { n as i32 });
        let stab = BraidWord::new(n + 1, w).unwrap();
        prop_assert_eq!(
            jones_exact(&b.close(ClosureKind::Trace).unwrap()).unwrap(),
            jones_exact(&stab.close(ClosureKind::Trace).unwrap()).unwrap()
        );
    }

    #[test]
    fn bracket_of_mirror_swaps_a_and_inverse(b in sized_braid(4, 7)) {
        let mirror = BraidWord::new(b.strands(), b.word().iter().map(|g| -g).collect()).unwrap();
        let x = bracket(&b.close(ClosureKind::Trace).unwrap()).unwrap();
        let y = bracket(&mirror.close(ClosureKind::Trace).unwrap()).unwrap();
        let flipped = LaurentPoly::from_terms(x.terms().map(|(e, c)| (-e, c.clone())));
        prop_assert_eq!(flipped, y);
    }

    #[test]
    fn writhe_of_trace_closure_is_exponent_sum(b in sized_braid(5, 10)) {
        let (_, w) = b.close(ClosureKind::Trace).unwrap().orient_and_writhe();
        prop_assert_eq!(w, b.exponent_sum());
    }

    #[test]
    fn rho_respects_braid_relations(n in 3usize..=5, i in 1usize..4) {
        let i = 1 + (i - 1) % (n - 2);
        let (i, j) = (i as i32, i as i32 + 1);
        let lhs = rho_a(&BraidWord::new(n, vec![i, j, i]).unwrap()).unwrap();
        let rhs = rho_a(&BraidWord::new(n, vec![j, i, j]).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let id = rho_a(&BraidWord::new(n, vec![i, -i]).unwrap()).unwrap();
        prop_assert_eq!(id, ExactTl::exact_identity(n));
    }

    #[test]
    fn tl_trace_is_cyclic(x in tl_element(4), y in tl_element(4)) {
        let xy = x.try_mul(&y).unwrap().scaled_trace();
        let yx = y.try_mul(&x).unwrap().scaled_trace();
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn tl_multiplication_is_associative(x in tl_element(4), y in tl_element(4), z in tl_element(4)) {
        let left = x.try_mul(&y).unwrap().try_mul(&z).unwrap();
        let right = x.try_mul(&y.try_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn markov_trace_in_scaled_form(x in tl_element(3)) {
        // d^{n-1} tr(x E_{n-1}) in TL_4 equals d^{n-2} tr(x) in TL_3
        let wide = x.extend_right();
        let e = ExactTl::exact_generator(3, 4).unwrap();
        prop_assert_eq!(wide.try_mul(&e).unwrap().scaled_trace(), x.scaled_trace());
    }

    #[test]
    fn path_model_matches_tl_trace(b in sized_braid(4, 6), k in prop::sample::select(vec![3u32, 4, 5, 7, 10])) {
        let basis = Arc::new(PathBasis::enumerate(b.strands(), k).unwrap());
        let table = CoefficientTable::new(k).unwrap();
        let tr = phi_braid(&b, &basis, &table).unwrap().weighted_trace(&table);
        let rho = rho_a(&b).unwrap().evaluate(unit_a(k).unwrap()).unwrap().markov_trace();
        prop_assert!((tr - rho).norm() < 1e-9, "{} vs {}", tr, rho);
    }

    #[test]
    fn apply_braid_is_unitary_and_matches_assembly(b in sized_braid(6, 8), k in 3u32..=8, seed in any::<u64>()) {
        let basis = Arc::new(PathBasis::enumerate(b.strands(), k).unwrap());
        let table = CoefficientTable::new(k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<Complex64> =
            (0..basis.len()).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        let w = apply_braid(&b, &basis, &table, &v).unwrap();
        let norm = |u: &[Complex64]| u.iter().map(|z| z.norm_sqr()).sum::<f64>();
        prop_assert!((norm(&v) - norm(&w)).abs() < 1e-12 * norm(&v).max(1.0));
        let dense = phi_braid(&b, &basis, &table).unwrap().to_dense();
        let direct = dense * nalgebra::DVector::from_vec(v);
        let gap = w.iter().zip(direct.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(gap < 1e-12);
    }

    #[test]
    fn inverse_braid_gives_adjoint(b in sized_braid(5, 6), k in 3u32..=7) {
        let basis = Arc::new(PathBasis::enumerate(b.strands(), k).unwrap());
        let table = CoefficientTable::new(k).unwrap();
        let x = phi_braid(&b, &basis, &table).unwrap();
        let y = phi_braid(&b.inverse(), &basis, &table).unwrap();
        prop_assert!(x.adjoint().sub(&y).unwrap().max_abs_entry() < 1e-12);
        let id = BlockOperator::identity(basis.clone());
        prop_assert!(x.mul(&y).unwrap().sub(&id).unwrap().max_abs_entry() < 1e-12);
    }
}

#[test]
fn unlink_of_n_components() {
    for n in 1..=5 {
        let b = BraidWord::new(n, vec![]).unwrap();
        let v = jones_exact(&b.close(ClosureKind::Trace).unwrap()).unwrap();
        assert_eq!(v, d_poly().pow(n as u32 - 1));
    }
}
