mod common;

use ldpc_lab::code::{build_eira, builtin_table, load_alist, to_alist, BUILTIN_CODES};
use ldpc_lab::{AddressTable, CodeError, LdpcCode, SparseParityCheck};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn shipped_codes_round_trip_through_alist() {
    for id in BUILTIN_CODES {
        let code = LdpcCode::builtin(id).unwrap();
        let text = to_alist(&code.h);
        let back = load_alist(&text).unwrap();
        assert_eq!(back, code.h, "{id}");
        assert_eq!(to_alist(&back), text, "{id}");
    }
}

#[test]
fn adjacency_lists_are_dual() {
    for id in BUILTIN_CODES {
        let h = LdpcCode::builtin(id).unwrap().h;
        let mut edges = 0;
        for m in 0..h.n_checks() {
            for (e, &n) in h.check_edges(m).zip(h.check_vars(m)) {
                assert!(h.var_checks(n).contains(&m));
                assert_eq!(h.edge_var(e), n);
                assert_eq!(h.edge_index(m, n), Some(e));
                edges += 1;
            }
        }
        let col_sum: usize = h.col_degrees().iter().sum();
        assert_eq!(edges, h.n_edges());
        assert_eq!(col_sum, h.n_edges());
    }
}

#[test]
fn staircase_and_info_degrees() {
    for id in BUILTIN_CODES {
        let table = builtin_table(id).unwrap();
        let h = build_eira(&table).unwrap();
        let (k, m) = (table.k(), table.n_parity());
        for j in 0..m {
            let want: Vec<usize> = if j + 1 < m { vec![j, j + 1] } else { vec![j] };
            assert_eq!(h.var_checks(k + j), want.as_slice(), "{id} parity {j}");
        }
        for i in 0..k {
            assert_eq!(h.var_checks(i).len(), table.groups[i / table.group_size].len(), "{id} info {i}");
        }
    }
}

#[test]
fn encoder_agrees_with_syndrome() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for id in BUILTIN_CODES {
        let code = LdpcCode::builtin(id).unwrap();
        let enc = code.encoder.as_ref().unwrap();
        for _ in 0..20 {
            let info: Vec<u8> = (0..enc.k()).map(|_| rng.random::<bool>() as u8).collect();
            let cw = enc.encode(&info).unwrap();
            assert_eq!(cw.len(), code.descriptor.n);
            assert_eq!(&cw.bits()[..enc.k()], info.as_slice());
            assert!(code.h.syndrome(cw.bits()).unwrap().is_zero, "{id}");
        }
    }
}

#[test]
fn single_bit_flip_breaks_syndrome() {
    let code = common::toy_eira_code();
    let enc = code.encoder.as_ref().unwrap();
    let cw = enc.encode(&vec![1; enc.k()]).unwrap();
    for pos in [0, 17, 239, 240, 479] {
        let mut bits = cw.bits().to_vec();
        bits[pos] ^= 1;
        let s = code.h.syndrome(&bits).unwrap();
        assert!(!s.is_zero);
        let flipped: Vec<usize> = (0..s.bits.len()).filter(|&m| s.bits[m] == 1).collect();
        assert_eq!(flipped.as_slice(), code.h.var_checks(pos));
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(matches!(
        SparseParityCheck::from_checks(3, vec![vec![0, 1], vec![1, 1]]),
        Err(CodeError::DuplicateEdge { check: 1, var: 1 })
    ));
    assert!(SparseParityCheck::from_checks(3, vec![vec![0, 3]]).is_err());
    assert!(AddressTable::new(16, 8, 3, vec![vec![0]], "x").is_err());
    let h = SparseParityCheck::from_checks(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
    assert!(matches!(h.syndrome(&[0, 1]), Err(CodeError::LengthMismatch { expected: 3, got: 2 })));
    assert!(load_alist("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n1 3\n").is_err());
    assert!(load_alist("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n").is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoding_is_linear(a in prop::collection::vec(0u8..2, 240), b in prop::collection::vec(0u8..2, 240)) {
        let code = common::toy_eira_code();
        let enc = code.encoder.as_ref().unwrap();
        let ca = enc.encode(&a).unwrap();
        let cb = enc.encode(&b).unwrap();
        let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let cs = enc.encode(&sum).unwrap();
        let xor: Vec<u8> = ca.bits().iter().zip(cb.bits()).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(cs.bits(), xor.as_slice());
    }

    #[test]
    fn random_matrices_round_trip(rows in prop::collection::vec(prop::collection::btree_set(0usize..12, 1..5), 1..8)) {
        let mut checks: Vec<Vec<usize>> = rows.into_iter().map(|s| s.into_iter().collect()).collect();
        // Every column needs at least one entry.
        checks.push((0..12).collect());
        let h = SparseParityCheck::from_checks(12, checks).unwrap();
        prop_assert_eq!(load_alist(&to_alist(&h)).unwrap(), h);
    }
}
