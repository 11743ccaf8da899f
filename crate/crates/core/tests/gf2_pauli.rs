use fqcodes::pauli::{read_check_matrix, write_check_matrix};
use fqcodes::{min_weight_in_coset, BinaryMatrix, Bits, Pauli, PauliOperator, RowReducer, SearchBudget};
use proptest::prelude::*;

/// Rank by plain Gaussian elimination on `Vec<Vec<bool>>`.
fn naive_rank(rows: &[Vec<bool>]) -> usize {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c]) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] {
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Commutation from the single-qubit table.
fn naive_commutes(a: &PauliOperator, b: &PauliOperator) -> bool {
    let clashes = (0..a.n_qubits())
        .filter(|&q| {
            let (p, r) = (a.get(q), b.get(q));
            p != Pauli::I && r != Pauli::I && p != r
        })
        .count();
    clashes % 2 == 0
}

fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    prop::collection::vec(0u8..4, n).prop_map(|v| {
        let mut op = PauliOperator::identity(v.len());
        for (q, k) in v.into_iter().enumerate() {
            op.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][k as usize]);
        }
        op
    })
}

fn bool_rows(r: usize, c: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
    prop::collection::vec(prop::collection::vec(any::<bool>(), c), r)
}

proptest! {
    #[test]
    fn weight_counts_nonidentity_sites(p in pauli(70)) {
        let expected = (0..70).filter(|&q| p.get(q) != Pauli::I).count();
        prop_assert_eq!(p.weight(), expected);
    }

    #[test]
    fn product_is_self_inverse(a in pauli(90), b in pauli(90)) {
        prop_assert!(a.mul(&a).is_identity());
        prop_assert_eq!(a.mul(&b).mul(&b), a);
    }

    #[test]
    fn commutation_matches_single_qubit_table(a in pauli(67), b in pauli(67)) {
        prop_assert_eq!(a.commutes_with(&b), naive_commutes(&a, &b));
        prop_assert_eq!(a.commutes_with(&b), b.commutes_with(&a));
    }

    #[test]
    fn commutation_is_bilinear(a in pauli(40), b in pauli(40), c in pauli(40)) {
        let lhs = a.mul(&b).commutes_with(&c);
        prop_assert_eq!(lhs, a.commutes_with(&c) == b.commutes_with(&c));
    }

    #[test]
    fn rank_matches_naive(rows in bool_rows(12, 75)) {
        let m = BinaryMatrix::from_rows(75, rows.iter().map(|r| Bits::from_bools(r)).collect());
        prop_assert_eq!(m.rank(), naive_rank(&rows));
    }

    #[test]
    fn solve_returns_a_valid_combination(rows in bool_rows(9, 20), pick in prop::collection::vec(any::<bool>(), 9)) {
        let bits: Vec<Bits> = rows.iter().map(|r| Bits::from_bools(r)).collect();
        let mut target = Bits::zeros(20);
        for (b, &k) in bits.iter().zip(&pick) {
            if k {
                target.xor_assign(b);
            }
        }
        let red = RowReducer::new(20, bits.clone());
        let combo = red.solve(&target).expect("target is in the span");
        let mut back = Bits::zeros(20);
        for i in combo.iter_ones() {
            back.xor_assign(&bits[i]);
        }
        prop_assert_eq!(back, target);
    }

    #[test]
    fn nullspace_is_orthogonal_and_complete(rows in bool_rows(7, 16)) {
        let m = BinaryMatrix::from_rows(16, rows.iter().map(|r| Bits::from_bools(r)).collect());
        let null = m.nullspace();
        prop_assert_eq!(null.len(), 16 - m.rank());
        for v in &null {
            for r in m.rows() {
                prop_assert!(!r.dot(v));
            }
        }
    }

    #[test]
    fn text_line_round_trips(p in pauli(33)) {
        let line = p.to_text_line();
        prop_assert_eq!(PauliOperator::parse_text_line(33, &line, 1).unwrap(), p);
    }

    #[test]
    fn check_matrix_round_trips(ops in prop::collection::vec(pauli(21), 0..6)) {
        let text = write_check_matrix(21, &ops);
        let (n, back) = read_check_matrix(&text).unwrap();
        prop_assert_eq!(n, 21);
        prop_assert_eq!(back, ops);
    }
}

#[test]
fn min_weight_in_coset_matches_brute_force() {
    let n = 8;
    let gens = vec![
        PauliOperator::from_xz(n, [0, 1, 2], []),
        PauliOperator::from_xz(n, [], [1, 2, 3, 4]),
        PauliOperator::from_xz(n, [4, 5], [5, 6]),
        PauliOperator::from_xz(n, [6, 7, 0], [7]),
        PauliOperator::from_xz(n, [2, 3], [0, 5]),
    ];
    let base = PauliOperator::from_xz(n, [0, 3, 5, 6], [2, 4, 7]);
    let brute = (0..1u32 << gens.len())
        .map(|mask| {
            let mut op = base.clone();
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    op.mul_assign(g);
                }
            }
            op
        })
        .map(|op| op.weight())
        .min()
        .unwrap();
    let found = min_weight_in_coset(&base, &gens, SearchBudget::default());
    assert_eq!(found.weight(), brute);
    let mut diff = found.mul(&base);
    let red = RowReducer::new(2 * n, gens.iter().map(|g| g.to_symplectic()));
    assert!(red.contains(&diff.to_symplectic()));
    diff.mul_assign(&diff.clone());
    assert!(diff.is_identity());
}

#[test]
fn mismatched_lengths_are_rejected() {
    let a = PauliOperator::identity(3);
    let b = PauliOperator::identity(4);
    assert!(a.multiply(&b).is_err());
    assert!(a.commutes(&b).is_err());
}

#[test]
fn identity_has_weight_zero() {
    assert_eq!(PauliOperator::identity(12).weight(), 0);
    assert_eq!(PauliOperator::single(5, 2, Pauli::Y).weight(), 1);
}
