use qmem_core::codes::{
    bb_code, bb_code_from_blocks, bb_generators, css_condition, hypergraph_product, Axis, BbPolynomial,
};
use qmem_core::gf2::BinaryMatrix;
use qmem_core::model::{expander_complexity, expander_storage_rate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_nonzero(rng: &mut impl Rng, rows: usize, cols: usize) -> BinaryMatrix {
    loop {
        let mut m = BinaryMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rng.gen_bool(0.4));
            }
        }
        if !m.is_zero() {
            return m;
        }
    }
}

#[test]
fn random_products_are_css() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=12);
        let h = random_nonzero(&mut rng, rows, cols);
        let code = hypergraph_product(&h).unwrap();
        let (na, nb) = (cols, rows);
        assert_eq!(code.n, na * na + nb * nb);
        assert_eq!(code.h_x.rows(), na * nb);
        assert_eq!(code.h_x.cols(), code.n);
        assert!(css_condition(&code.h_x, &code.h_z).unwrap());
        assert_eq!(code.k, code.n - code.h_x.rank() - code.h_z.rank());
        let diff = na.abs_diff(nb);
        assert!(code.k >= diff * diff);
    }
}

#[test]
fn bb_parameters_survive_x_relabeling() {
    let (l, m) = (6, 3);
    let a = BbPolynomial::new([(Axis::X, 3), (Axis::Y, 1), (Axis::Y, 2)]);
    let b = BbPolynomial::new([(Axis::Y, 0), (Axis::X, 1), (Axis::X, 2)]);
    let base = bb_code(l, m, &a, &b).unwrap();
    let (x, _) = bb_generators(l, m).unwrap();
    let mut a_shifted = a.to_matrix(l, m).unwrap();
    let b_mat = b.to_matrix(l, m).unwrap();
    for by in 1..l {
        a_shifted = x.matmul(&a_shifted).unwrap();
        let code = bb_code_from_blocks(&a_shifted, &b_mat).unwrap();
        assert_eq!((code.n, code.k), (base.n, base.k), "shift {by}");
    }
    assert_eq!(x.matmul(&a_shifted).unwrap(), a.to_matrix(l, m).unwrap());
}

#[test]
fn expander_closed_form_matches_component_sum() {
    let mut tuples = Vec::new();
    for d_a in 1..=9u64 {
        for d_b in d_a + 1..=12 {
            for scale in 1..=3u64 {
                tuples.push((d_b * scale, d_a * scale, d_a, d_b));
            }
        }
    }
    assert!(tuples.len() >= 100);
    for &(n_a, n_b, d_a, d_b) in tuples.iter().take(100) {
        let c = expander_complexity(n_a, n_b, d_a, d_b).unwrap();
        let summed = c.k as f64 / (c.n + c.n_a + c.n_h + c.n_synd + c.n_ec + c.n_m) as f64;
        let closed = expander_storage_rate(d_a, d_b).unwrap();
        assert!((summed - closed).abs() <= 1e-12 * closed, "{n_a} {n_b} {d_a} {d_b}");
    }
}
