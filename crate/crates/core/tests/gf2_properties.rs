use allcast::{DecoderState, Gf2Matrix, Gf2Vector};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Gf2Matrix> {
    prop::collection::vec(prop::collection::vec(any::<bool>(), cols), rows).prop_map(move |rs| {
        let rows = rs
            .into_iter()
            .map(|bits| Gf2Vector::from_bits(cols, bits))
            .collect();
        Gf2Matrix::from_rows(cols, rows).unwrap()
    })
}

fn sized_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Gf2Matrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| matrix(r, c))
}

/// Exhaustive search for a nonzero `x` with `M x = 0`.
fn has_nontrivial_kernel(m: &Gf2Matrix) -> bool {
    let c = m.cols();
    (1u32..(1 << c)).any(|mask| {
        let x = Gf2Vector::from_indices(c, (0..c).filter(|i| mask >> i & 1 == 1));
        m.mat_vec_mul(&x).unwrap().is_zero()
    })
}

proptest! {
    #[test]
    fn full_column_rank_iff_trivial_kernel(m in sized_matrix(8, 8)) {
        prop_assert_eq!(m.rank() == m.cols(), !has_nontrivial_kernel(&m));
    }

    #[test]
    fn rank_is_transpose_invariant(m in sized_matrix(20, 100)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn decoder_rank_matches_matrix_rank(m in sized_matrix(40, 70)) {
        let mut dec = DecoderState::new(m.cols());
        let mut grew = 0;
        for row in m.row_iter() {
            if dec.insert(row.clone()).unwrap() {
                grew += 1;
            }
        }
        prop_assert_eq!(dec.rank(), m.rank());
        prop_assert_eq!(grew, m.rank());
        for row in m.row_iter() {
            prop_assert!(dec.contains(row));
        }
    }

    #[test]
    fn encode_then_solve_recovers_payloads(
        (m, payloads) in (1usize..48).prop_flat_map(|c| (sized_matrix(64, c).prop_filter("cols", move |m| m.cols() == c), prop::collection::vec(any::<u64>(), c)))
    ) {
        let encoded = m.encode(&payloads).unwrap();
        match m.solve(&encoded) {
            Ok(x) => {
                prop_assert_eq!(m.rank(), m.cols());
                prop_assert_eq!(x, payloads);
            }
            Err(_) => prop_assert!(m.rank() < m.cols()),
        }
    }

    #[test]
    fn decoder_solve_recovers_payloads(
        rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 30), 30..90),
        payloads in prop::collection::vec(any::<u64>(), 30),
    ) {
        let mut dec = DecoderState::new(30);
        for bits in rows {
            let row = Gf2Vector::from_bits(30, bits);
            let y = row.select_xor(&payloads);
            dec.insert_with_payload(row, y).unwrap();
        }
        match dec.solve() {
            Ok(x) => prop_assert_eq!(x, payloads),
            Err(_) => prop_assert!(!dec.is_full_rank()),
        }
    }

    #[test]
    fn xor_matches_bitwise(a in prop::collection::vec(any::<bool>(), 1..200), seed in any::<u64>()) {
        let n = a.len();
        let b: Vec<bool> = (0..n).map(|i| (seed.rotate_left(i as u32) & 1) == 1).collect();
        let mut x = Gf2Vector::from_bits(n, a.iter().copied());
        x.xor_assign(&Gf2Vector::from_bits(n, b.iter().copied()));
        for i in 0..n {
            prop_assert_eq!(x.get(i), a[i] ^ b[i]);
        }
        prop_assert_eq!(x.count_ones(), (0..n).filter(|&i| a[i] ^ b[i]).count());
    }
}
