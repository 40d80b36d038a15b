use std::sync::Arc;

use jones_core::braid::BraidWord;
use jones_core::circuit::{
    circuit_to_matrix, counter_returns_to_one, emit_text, parse_text, synthesize_braid, synthesize_hadamard_test,
    GateKind, TestPart,
};
use jones_core::path_model::{phi_braid, CoefficientTable, PathBasis};
use proptest::prelude::*;

fn braid_strategy(max_n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_n).prop_flat_map(move |n| {
        let letter = (1..n as i32, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g });
        proptest::collection::vec(letter, 0..=max_len).prop_map(move |w| BraidWord::new(n, w).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn compiled_circuit_equals_phi(b in braid_strategy(4, 4), k in 3u32..=5) {
        let basis = Arc::new(PathBasis::enumerate(b.strands(), k).unwrap());
        let table = CoefficientTable::new(k).unwrap();
        let circuit = synthesize_braid(&b, k).unwrap();
        let got = circuit_to_matrix(&circuit, &basis).unwrap();
        let want = phi_braid(&b, &basis, &table).unwrap();
        prop_assert!(got.sub(&want).unwrap().max_abs_entry() < 1e-10);
        prop_assert!(counter_returns_to_one(&circuit, &basis).unwrap());
    }

    #[test]
    fn gate_budget(b in braid_strategy(6, 8), k in 3u32..=9) {
        let circuit = synthesize_braid(&b, k).unwrap();
        let n = b.strands();
        prop_assert!(circuit.gates.len() <= b.len() * (2 * (n - 1) + 1));
        prop_assert!(circuit.max_gate_width() <= circuit.counter_qubits + 2);
        prop_assert_eq!(circuit.local_crossing_count(), b.len());
    }

    #[test]
    fn text_round_trips(b in braid_strategy(5, 5), k in 3u32..=8, im in any::<bool>()) {
        let part = if im { TestPart::Im } else { TestPart::Re };
        for circuit in [synthesize_braid(&b, k).unwrap(), synthesize_hadamard_test(&b, k, part).unwrap()] {
            let text = emit_text(&circuit);
            let parsed = parse_text(&text).unwrap();
            prop_assert_eq!(&parsed, &circuit);
            prop_assert_eq!(emit_text(&parsed), text);
        }
    }
}

#[test]
fn counter_updates_name_their_modulus() {
    let circuit = synthesize_braid(&BraidWord::parse("4: 3 -2").unwrap(), 6).unwrap();
    let text = emit_text(&circuit);
    let updates: Vec<&str> = text.lines().filter(|l| l.starts_with("GATE counter-update")).collect();
    assert_eq!(updates.len(), 2 * 2 + 2);
    assert!(updates.iter().all(|l| l.ends_with("mod=12")));
    for g in &circuit.gates {
        if let GateKind::CounterUpdate { modulus, .. } = g.kind {
            assert_eq!(modulus, 12);
        }
    }
}
