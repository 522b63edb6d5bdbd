#![allow(dead_code)]

use std::ops::RangeInclusive;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use qsequiv::atlas::{
    a_zero, build_family_superpotential, classify_presentation, idempotent_apply, overline, poly_superpotential,
    symmetrize, w_ijk, Catalog, ClassifyConfig, CommPoly, CubicForm, FamilyOutcome, Idempotent,
};
use qsequiv::field::{rat, Rationals};
use qsequiv::presentation::{basis_change, build_gl, build_quantum_group, counit_residual, Presentation, Variant};
use qsequiv::superpotential::{find_twist, is_l_traceable, m2_pack, TwistedSuperpotential};
use qsequiv::tensor::{unflatten_index, Matrix, Subspace, Tensor};
use qsequiv::Field;

pub const Q: Rationals = Rationals;
pub const SEED: u64 = 0x0051_5e9d;

pub type Check = Result<(), TestCaseError>;

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

pub fn tensor(arity: usize, dim: usize, coeffs: &[i64]) -> Tensor<Rationals> {
    let v: Vec<_> = coeffs.iter().map(|&c| Q.from_i64(c)).collect();
    Tensor::from_vector(&Q, arity, dim, &v).unwrap()
}

pub fn matrix(n: usize, entries: &[i64]) -> Matrix<Rationals> {
    let rows: Vec<&[i64]> = entries.chunks(n).collect();
    Matrix::from_i64(&Q, &rows)
}

/// Small integer coefficients, about 60% zero.
pub fn arb_tensor(
    arity: RangeInclusive<usize>,
    dim: RangeInclusive<usize>,
) -> impl Strategy<Value = Tensor<Rationals>> {
    (arity, dim).prop_flat_map(|(m, n)| {
        let len = n.pow(m as u32);
        prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], len).prop_map(move |c| tensor(m, n, &c))
    })
}

pub fn arb_invertible(n: RangeInclusive<usize>) -> impl Strategy<Value = Matrix<Rationals>> {
    n.prop_flat_map(|n| prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| matrix(n, &v)))
        .prop_filter("invertible", |m| m.invert().is_ok())
}

pub fn arb_cubic() -> impl Strategy<Value = CubicForm<Rationals>> {
    prop::collection::vec(-4i64..=4, 20).prop_map(|c| {
        let mut p = CommPoly::zero(&Q);
        let mut k = 0;
        for a in 0..4u8 {
            for b in 0..=(3 - a) {
                for cc in 0..=(3 - a - b) {
                    p.add_term([a, b, cc, 3 - a - b - cc], Q.from_i64(c[k]));
                    k += 1;
                }
            }
        }
        CubicForm::new(p).unwrap()
    })
}

fn apply(which: Idempotent, t: &Tensor<Rationals>) -> Tensor<Rationals> {
    idempotent_apply(which, t).unwrap()
}

const TRIPLES: [(usize, usize, usize); 4] = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];

pub fn alt3() -> Subspace<Rationals> {
    let vs = TRIPLES.iter().map(|&(i, j, k)| w_ijk(&Q, i, j, k).unwrap().to_vector()).collect();
    Subspace::span(&Q, 64, vs).unwrap()
}

pub fn image_of_c_minus_s() -> Subspace<Rationals> {
    let vs = (0..64)
        .map(|p| apply(Idempotent::CMinusS, &Tensor::basis(&Q, 4, &unflatten_index(p, 3, 4)).unwrap()).to_vector())
        .collect();
    Subspace::span(&Q, 64, vs).unwrap()
}

pub fn idempotents(t: &Tensor<Rationals>) -> Check {
    let c = apply(Idempotent::C, t);
    let s = apply(Idempotent::S, t);
    let alt = apply(Idempotent::CMinusS, t);
    let rest = apply(Idempotent::OneMinusC, t);
    prop_assert_eq!(&apply(Idempotent::C, &c), &c);
    prop_assert_eq!(&apply(Idempotent::S, &s), &s);
    prop_assert_eq!(&apply(Idempotent::S, &c), &s);
    prop_assert_eq!(&apply(Idempotent::C, &s), &s);
    prop_assert_eq!(&apply(Idempotent::CMinusS, &alt), &alt);
    prop_assert!(apply(Idempotent::S, &alt).is_zero());
    prop_assert!(apply(Idempotent::C, &rest).is_zero());
    prop_assert!(apply(Idempotent::OneMinusC, &c).is_zero());
    prop_assert_eq!(&c.add(&rest).unwrap(), t);
    Ok(())
}

pub fn alt3_membership(alt: &Subspace<Rationals>, t: &Tensor<Rationals>, a: &[i64]) -> Check {
    prop_assert!(alt.contains(&apply(Idempotent::CMinusS, t).to_vector()));
    let mut w = Tensor::zero(&Q, 3, 4);
    for (c, &(i, j, k)) in a.iter().zip(&TRIPLES) {
        w = w.add(&w_ijk(&Q, i, j, k).unwrap().scale(&Q.from_i64(*c))).unwrap();
    }
    prop_assert_eq!(apply(Idempotent::CMinusS, &w), w);
    Ok(())
}

pub fn round_trips(form: &CubicForm<Rationals>, t: &Tensor<Rationals>) -> Check {
    let hat = symmetrize(form).unwrap();
    prop_assert_eq!(&apply(Idempotent::S, &hat), &hat);
    prop_assert_eq!(&overline(&hat).unwrap(), form);
    let sym = apply(Idempotent::S, t);
    prop_assert_eq!(symmetrize(&overline(&sym).unwrap()).unwrap(), sym);
    Ok(())
}

pub fn cyclic_order(t: &Tensor<Rationals>) -> Check {
    let mut u = t.cyclic_shift();
    for _ in 1..t.arity() {
        u = u.cyclic_shift();
    }
    prop_assert_eq!(&u, t);
    Ok(())
}

pub fn bilinear_twist(e: &Matrix<Rationals>) -> Check {
    let sp = m2_pack(e).unwrap();
    let p = find_twist(sp.tensor()).unwrap();
    prop_assert_eq!(&sp.tensor().cyclic_shift().apply_on_factor(&p, 0).unwrap(), sp.tensor());
    // P Eᵀ = E
    prop_assert_eq!(&p.mul(&e.transpose()).unwrap(), e);
    Ok(())
}

pub fn transformed_poly_twist(m: &Matrix<Rationals>) -> Check {
    let t = poly_superpotential(&Q).unwrap().tensor().apply_on_all(m).unwrap();
    let p = find_twist(&t).unwrap();
    prop_assert_eq!(&t.cyclic_shift().apply_on_factor(&p, 0).unwrap(), &t);
    prop_assert!(p.is_identity());
    Ok(())
}

pub fn two_traceable(e: &Matrix<Rationals>) -> Check {
    prop_assert!(is_l_traceable(&m2_pack(e).unwrap(), 2).unwrap());
    Ok(())
}

fn counit_vanishes(pres: &Presentation<Rationals>) -> bool {
    counit_residual(pres).unwrap().iter().all(|c| Q.is_zero(c))
}

pub fn counit(e: &Matrix<Rationals>, m: &Matrix<Rationals>, row: usize, seed: u64) -> Check {
    let sp = m2_pack(e).unwrap();
    prop_assert!(counit_vanishes(&build_gl(&sp, &sp).unwrap()));
    let poly = TwistedSuperpotential::new(poly_superpotential(&Q).unwrap().tensor().apply_on_all(m).unwrap()).unwrap();
    prop_assert!(counit_vanishes(&build_gl(&poly, &poly).unwrap()));
    let cat = Catalog::builtin();
    let fam = &cat.families[row % cat.families.len()];
    let outcome = build_family_superpotential(fam, &Q, &fam.random_params(seed), &a_zero(&Q), &Q.one()).unwrap();
    if let FamilyOutcome::Nondegenerate(s) = outcome {
        prop_assert!(counit_vanishes(&build_gl(&s, &s).unwrap()));
    }
    Ok(())
}

pub fn family(name: &str) -> TwistedSuperpotential<Rationals> {
    let cat = Catalog::builtin();
    let fam = cat.family(name).unwrap();
    build_family_superpotential(fam, &Q, &cat.default_params().unwrap(), &a_zero(&Q), &Q.one())
        .unwrap()
        .superpotential()
        .unwrap()
        .clone()
}

pub fn quantum_plane(q: i64, d: i64) -> TwistedSuperpotential<Rationals> {
    let e = Matrix::from_rows(&Q, vec![vec![Q.zero(), Q.one()], vec![Q.from_rational(&rat(q, d)).unwrap(), Q.zero()]]);
    m2_pack(&e.unwrap()).unwrap()
}

/// Finiteness of a Gröbner basis is not preserved by a change of coordinates, so
/// `nonzero` and `inconclusive` are one class here.
fn vanishes(pres: &Presentation<Rationals>) -> bool {
    let cfg = ClassifyConfig { bound: 6, ..ClassifyConfig::default() };
    classify_presentation("e", "f", pres, &cfg).unwrap().is_zero()
}

pub type Change = (Matrix<Rationals>, Matrix<Rationals>, Matrix<Rationals>, Matrix<Rationals>);

pub fn arb_change() -> impl Strategy<Value = Change> {
    (arb_invertible(2..=2), arb_invertible(2..=2), arb_invertible(4..=4), arb_invertible(3..=3))
}

/// Vanishing of `SL_2` for a `q ↔ 1/q` pair and an unequal-trace pair, and of `GL_3(3A2, f_poly)`.
pub fn basis_change_invariance((phi2, psi2, phi4, psi3): &Change) -> Check {
    let id2 = m2_pack(&Matrix::identity(&Q, 2)).unwrap();
    let cases = [
        (Variant::Sl, false, quantum_plane(2, 1), quantum_plane(1, 2), phi2, psi2),
        (Variant::Sl, true, id2, quantum_plane(2, 1), phi2, psi2),
        (Variant::Gl, true, family("3A2"), poly_superpotential(&Q).unwrap(), phi4, psi3),
    ];
    for (variant, expected, e, f, phi, psi) in cases {
        prop_assert_eq!(vanishes(&build_quantum_group(&e, &f, variant).unwrap()), expected);
        let bc = basis_change(&e, &f, phi, psi).unwrap();
        prop_assert_eq!(vanishes(&build_quantum_group(&bc.e_new, &bc.f_new, variant).unwrap()), expected);
    }
    Ok(())
}

/// Runs one suite and returns `cases` or the failure message.
pub fn run_suite<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Check) -> Result<u32, String> {
    let mut runner = TestRunner::new(config(cases));
    runner.run(&strategy, check).map(|_| cases).map_err(|e| e.to_string())
}

/// Every structural suite with its name.
pub fn structural_suites(cases: u32, changes: u32) -> Vec<(&'static str, Result<u32, String>)> {
    let alt = alt3();
    vec![
        ("idempotent identities", run_suite(cases, arb_tensor(3..=3, 2..=4), |t| idempotents(&t))),
        (
            "alt3 = (c-s)V^3",
            if alt == image_of_c_minus_s() && alt.dim() == 4 {
                run_suite(cases, (arb_tensor(3..=3, 4..=4), prop::collection::vec(-5i64..=5, 4)), |(t, a)| {
                    alt3_membership(&alt, &t, &a)
                })
            } else {
                Err("span of w^(ijk) differs from (c-s)V^3".into())
            },
        ),
        (
            "symmetrize/overline round trips",
            run_suite(cases, (arb_cubic(), arb_tensor(3..=3, 4..=4)), |(f, t)| round_trips(&f, &t)),
        ),
        (
            "counit residual on GL_m(e,e)",
            run_suite(cases, (arb_invertible(2..=3), arb_invertible(3..=3), 0usize..64, 0u64..1000), |(e, m, r, s)| {
                counit(&e, &m, r, s)
            }),
        ),
        ("phi^m = id", run_suite(cases, arb_tensor(2..=4, 2..=3), |t| cyclic_order(&t))),
        (
            "find_twist verification",
            run_suite(cases, (arb_invertible(2..=3), arb_invertible(3..=3)), |(e, m)| {
                bilinear_twist(&e)?;
                transformed_poly_twist(&m)
            }),
        ),
        ("m=2 2-traceability", run_suite(cases, arb_invertible(2..=3), |e| two_traceable(&e))),
        ("basis-change invariance", run_suite(changes, arb_change(), |c| basis_change_invariance(&c))),
    ]
}
