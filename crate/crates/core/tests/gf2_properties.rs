use proptest::prelude::*;
use qmem_core::gf2::{BinaryMatrix, BitVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, rng.gen_bool(0.5));
        }
    }
    m
}

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinaryMatrix> {
    (1..=max_rows, 1..=max_cols, any::<u64>()).prop_map(|(r, c, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_matrix(&mut rng, r, c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity_up_to_64(m in matrix_strategy(64, 64)) {
        let rank = m.rank();
        prop_assert!(rank <= m.rows().min(m.cols()));
        let kernel = m.kernel_basis();
        prop_assert_eq!(rank + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn kron_rank_is_multiplicative(a in matrix_strategy(6, 6), b in matrix_strategy(6, 6)) {
        prop_assert_eq!(a.kron(&b).unwrap().rank(), a.rank() * b.rank());
    }
}

/// Every vector in the span of `basis`, by enumeration.
fn span(cols: usize, basis: &[BitVector]) -> Vec<u64> {
    let mut out: Vec<u64> = (0..1u64 << basis.len())
        .map(|sel| {
            basis
                .iter()
                .enumerate()
                .filter(|(i, _)| sel >> i & 1 == 1)
                .fold(0, |acc, (_, v)| acc ^ v.to_mask())
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    assert!(out.iter().all(|&m| m < 1 << cols));
    out
}

#[test]
fn kernel_intersection_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f2);
    for _ in 0..100 {
        let a = random_matrix(&mut rng, 4, 8);
        let b = random_matrix(&mut rng, 3, 8);
        let expected: Vec<u64> = (0..256u64)
            .filter(|&x| {
                let v = BitVector::from_mask(8, x);
                a.mul_vec(&v).unwrap().is_zero() && b.mul_vec(&v).unwrap().is_zero()
            })
            .collect();
        let basis = a.kernel_intersection(&b).unwrap();
        assert_eq!(span(8, &basis), expected);
        assert_eq!(1usize << basis.len(), expected.len(), "basis must be independent");
    }
}

#[test]
fn transpose_reverses_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let a = random_matrix(&mut rng, 9, 70);
        let b = random_matrix(&mut rng, 70, 5);
        let lhs = a.matmul(&b).unwrap().transpose();
        let rhs = b.transpose().matmul(&a.transpose()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
