mod common;

use common::*;
use proptest::prelude::*;

#[test]
fn alt3_equals_image_of_c_minus_s() {
    let (a, b) = (alt3(), image_of_c_minus_s());
    assert_eq!(a.dim(), 4);
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn idempotent_identities(t in arb_tensor(3..=3, 2..=4)) {
        idempotents(&t)?;
    }

    #[test]
    fn alternating_tensors(t in arb_tensor(3..=3, 4..=4), a in prop::collection::vec(-5i64..=5, 4)) {
        alt3_membership(&alt3(), &t, &a)?;
    }

    #[test]
    fn symmetrize_overline_round_trips(form in arb_cubic(), t in arb_tensor(3..=3, 4..=4)) {
        round_trips(&form, &t)?;
    }

    #[test]
    fn cyclic_shift_has_order_m(t in arb_tensor(2..=4, 2..=3)) {
        cyclic_order(&t)?;
    }

    #[test]
    fn twist_of_bilinear_form(e in arb_invertible(2..=3)) {
        bilinear_twist(&e)?;
        two_traceable(&e)?;
    }

    #[test]
    fn twist_of_transformed_polynomial_ring(m in arb_invertible(3..=3)) {
        transformed_poly_twist(&m)?;
    }

    #[test]
    fn counit_is_an_algebra_map(e in arb_invertible(2..=3), m in arb_invertible(3..=3), row in 0usize..64, seed in 0u64..1000) {
        counit(&e, &m, row, seed)?;
    }
}

proptest! {
    #![proptest_config(config(3))]

    #[test]
    fn vanishing_survives_basis_change(c in arb_change()) {
        basis_change_invariance(&c)?;
    }
}
