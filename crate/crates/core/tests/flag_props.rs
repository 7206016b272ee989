use hallring::flag::{self, FlagType};
use hallring::quiver::Quiver;
use hallring::ring::Ring;
use proptest::prelude::*;

fn flag_type(vertices: usize) -> impl Strategy<Value = FlagType> {
    proptest::collection::vec((0..vertices, 1u32..=3), 1..=4).prop_map(FlagType)
}

proptest! {
    #[test]
    fn concatenation_identity(a in flag_type(3), b in flag_type(3)) {
        for i in 0..3 {
            prop_assert!(flag::check_concat_identity(&a, &b, i));
        }
    }

    #[test]
    fn degree_cancellation(a in flag_type(3), b in flag_type(3), n in 1u32..=5) {
        let q = Quiver::preset("a3").unwrap();
        prop_assert_eq!(flag::degree_defect(&a, &b, &q, n).unwrap(), 0);
    }

    #[test]
    fn jet_scaling(a in flag_type(2), n in 1u32..=6) {
        let q = Quiver::preset("a2").unwrap();
        let d = flag::flag_dims(&a, &q, n);
        prop_assert_eq!(d.flag_dim, n as i64 * flag::flag_dims(&a, &q, 1).flag_dim);
        prop_assert_eq!(d.perverse_shift, d.total_dim + d.fibre_rank);
    }
}

#[test]
fn grassmannian_counts() {
    for (q, n) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
        let r = Ring::with(q, n).unwrap();
        let expected = (q as u128).pow(n) + (q as u128).pow(n - 1);
        assert_eq!(flag::free_grassmannian_count(&r, 1, 2, 1 << 20).unwrap(), expected);
    }
    // over a field, the Gaussian binomial [4 choose 2]_2 = 35
    let r = Ring::with(2, 1).unwrap();
    assert_eq!(flag::free_grassmannian_count(&r, 2, 4, 1 << 20).unwrap(), 35);
}
