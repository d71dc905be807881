mod common;

use common::*;

#[test]
fn graded_commutativity_holds() {
    graded_commutativity(CASES).unwrap();
}

#[test]
fn leibniz_rule_holds() {
    leibniz(CASES).unwrap();
}

#[test]
fn superderivatives_anticommute() {
    anticommuting_superderivatives(CASES).unwrap();
}

#[test]
fn superderivatives_square_to_i_partial() {
    superderivative_squares(CASES).unwrap();
}

#[test]
fn hyperbolic_identities_hold() {
    let worst = float_oracle(CASES, 7).unwrap();
    assert!(worst < 1e-9);
    hyperbolic_product_to_sum(CASES).unwrap();
}

#[test]
fn generator_refutes_plain_commutativity() {
    assert!(plain_commutativity(CASES).is_err());
}
