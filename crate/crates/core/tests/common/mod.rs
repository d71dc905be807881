//! Randomized ring properties shared by the property tests and the
//! acceptance runner.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use z2sl_core::ring::{cosh_of, exp_of, mono_grade, sinh_of, Gen, HypKind, Lin, OddCoord};
use z2sl_core::{Deriv, Field, GradeVec, GradedPoly, Scalar, Q};

pub const CASES: u32 = 500;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub struct Pool {
    pub fields: Vec<Field>,
    pub phi00: Field,
    pub phi11: Field,
    pub chi11: Field,
}

impl Pool {
    pub fn new() -> Pool {
        let sf = Field::superfield;
        Pool {
            fields: vec![sf("A00", GradeVec::G00), sf("B11", GradeVec::G11), sf("C10", GradeVec::G10), sf("E01", GradeVec::G01)],
            phi00: sf("Phi00", GradeVec::G00),
            phi11: sf("Phi11", GradeVec::G11),
            chi11: sf("Chi11", GradeVec::G11),
        }
    }
}

const DERIVS: [Deriv; 4] = [Deriv::DPlus, Deriv::DMinus, Deriv::PartialPlus, Deriv::PartialMinus];

fn small_q() -> impl Strategy<Value = Q> {
    (-3i64..=3, 1i64..=2).prop_map(|(n, d)| Q::new(n, d))
}

fn atom() -> impl Strategy<Value = GradedPoly> {
    let pool = Pool::new();
    let fields = pool.fields.clone();
    let (p00, p11) = (pool.phi00.clone(), pool.phi11.clone());
    let p11b = p11.clone();
    prop_oneof![
        4 => (0..fields.len(), proptest::collection::vec(0..4usize, 0..=2)).prop_map(move |(k, word)| {
            let ds: Vec<Deriv> = word.into_iter().map(|i| DERIVS[i]).collect();
            fields[k].poly().apply_seq(&ds).expect("derivative of a superfield")
        }),
        1 => prop_oneof![Just(OddCoord::ThetaPlus.poly()), Just(OddCoord::ThetaMinus.poly())],
        1 => small_q().prop_map(move |q| exp_of(&Lin::term(&p00, q)).expect("[00] argument")),
        1 => small_q().prop_map(move |q| cosh_of(&Lin::term(&p11, q)).expect("[11] argument")),
        1 => small_q().prop_map(move |q| sinh_of(&Lin::term(&p11b, q)).expect("[11] argument")),
    ]
}

fn term() -> impl Strategy<Value = GradedPoly> {
    ((-3i64..=3, -2i64..=2), proptest::collection::vec(atom(), 1..=3)).prop_map(|((re, im), atoms)| {
        let c = Scalar::new(Q::int(re), Q::int(im));
        atoms.iter().fold(GradedPoly::constant(c), |acc, a| acc.mul(a))
    })
}

pub fn poly() -> impl Strategy<Value = GradedPoly> {
    proptest::collection::vec(term(), 1..=3).prop_map(|ts| ts.iter().fold(GradedPoly::zero(), |acc, t| acc.add(t)))
}

/// Homogeneous components of p.
pub fn components(p: &GradedPoly) -> Vec<(GradeVec, GradedPoly)> {
    GradeVec::ALL
        .iter()
        .map(|&g| {
            let part = p.terms().filter(|(m, _)| mono_grade(m) == g).fold(GradedPoly::zero(), |acc, (m, c)| acc.add(&GradedPoly::from_mono(m.clone(), c.clone())));
            (g, part)
        })
        .filter(|(_, q)| !q.is_zero())
        .collect()
}

fn sign(g: GradeVec, h: GradeVec) -> Scalar {
    Scalar::from_int(g.sign(h) as i64)
}

type Outcome = Result<(), String>;

fn run<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Outcome
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&s, f).map_err(|e| e.to_string())
}

/// p q = sum over components sign(g, h) q_h p_g.
pub fn graded_commutativity(cases: u32) -> Outcome {
    run(cases, (poly(), poly()), |(p, q)| {
        let mut swapped = GradedPoly::zero();
        for (g, pg) in components(&p) {
            for (h, qh) in components(&q) {
                swapped = swapped.add(&qh.mul(&pg).scale(&sign(g, h)));
            }
        }
        prop_assert_eq!(p.mul(&q), swapped);
        Ok(())
    })
}

/// D(p q) = D(p) q + sign(D, p) p D(q).
pub fn leibniz(cases: u32) -> Outcome {
    run(cases, (poly(), poly(), 0..4usize), |(p, q, k)| {
        let d = DERIVS[k];
        let lhs = p.mul(&q).apply(d).expect("derivative");
        let mut rhs = p.apply(d).expect("derivative").mul(&q);
        for (g, pg) in components(&p) {
            rhs = rhs.add(&pg.mul(&q.apply(d).expect("derivative")).scale(&sign(d.grade(), g)));
        }
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn anticommuting_superderivatives(cases: u32) -> Outcome {
    run(cases, poly(), |p| {
        let pm = p.apply_seq(&[Deriv::DPlus, Deriv::DMinus]).expect("derivative");
        let mp = p.apply_seq(&[Deriv::DMinus, Deriv::DPlus]).expect("derivative");
        prop_assert!(pm.add(&mp).is_zero());
        Ok(())
    })
}

pub fn superderivative_squares(cases: u32) -> Outcome {
    run(cases, poly(), |p| {
        for (d, partial) in [(Deriv::DPlus, Deriv::PartialPlus), (Deriv::DMinus, Deriv::PartialMinus)] {
            let dd = p.apply_seq(&[d, d]).expect("derivative");
            prop_assert_eq!(dd, p.apply(partial).expect("derivative").scale(&Scalar::i()));
        }
        Ok(())
    })
}

fn lin11() -> impl Strategy<Value = Lin> {
    let pool = Pool::new();
    (small_q(), small_q()).prop_map(move |(a, b)| Lin::term(&pool.phi11, a).plus(&pool.chi11, b))
}

fn sum(a: &Lin, b: &Lin, s: i64) -> Lin {
    Lin(a.0.iter().cloned().chain(b.scaled(&Q::int(s)).0).collect())
}

/// The product-to-sum identities as (lhs, rhs) pairs.
pub fn hyperbolic_identities(a: &Lin, b: &Lin) -> Vec<(&'static str, GradedPoly, GradedPoly)> {
    let (c, s) = (|x: &Lin| cosh_of(x).expect("[11]"), |x: &Lin| sinh_of(x).expect("[11]"));
    let (ap, am) = (sum(a, b, 1), sum(a, b, -1));
    let half = Scalar::rational(1, 2);
    vec![
        ("cosh cosh", c(a).mul(&c(b)), c(&ap).add(&c(&am)).scale(&half)),
        ("sinh sinh", s(a).mul(&s(b)), c(&ap).sub(&c(&am)).scale(&half)),
        ("sinh cosh", s(a).mul(&c(b)), s(&ap).add(&s(&am)).scale(&half)),
        ("cosh^2 - sinh^2", c(a).mul(&c(a)).sub(&s(a).mul(&s(a))), GradedPoly::one()),
    ]
}

pub fn hyperbolic_product_to_sum(cases: u32) -> Outcome {
    let pool = Pool::new();
    let p00 = pool.phi00.clone();
    run(cases, (lin11(), lin11(), small_q(), small_q()), move |(a, b, x, y)| {
        for (name, lhs, rhs) in hyperbolic_identities(&a, &b) {
            prop_assert_eq!(lhs, rhs, "{}", name);
        }
        let e = |q: Q| exp_of(&Lin::term(&p00, q)).expect("[00]");
        prop_assert_eq!(e(x.clone()).mul(&e(y.clone())), e(&x + &y));
        Ok(())
    })
}

/// Numeric value of a polynomial in Exp and Hyp generators.
pub fn eval(p: &GradedPoly, at: &dyn Fn(&Field) -> f64) -> (f64, f64) {
    let mut acc = (0.0, 0.0);
    for (m, c) in p.terms() {
        let mut v = 1.0;
        for (g, e) in m {
            let x = match g {
                Gen::Exp(f, q) => (q.to_f64() * at(f)).exp(),
                Gen::Hyp(f, HypKind::Cosh, q) => (q.to_f64() * at(f)).cosh(),
                Gen::Hyp(f, HypKind::Sinh, q) => (q.to_f64() * at(f)).sinh(),
                other => panic!("no numeric value for {other:?}"),
            };
            v *= x.powi(*e);
        }
        let (re, im) = c.to_c64();
        acc = (acc.0 + re * v, acc.1 + im * v);
    }
    acc
}

/// Float oracle: the ring's normal forms of hyperbolic products against
/// f64 cosh and sinh at random real points. Returns the largest relative error.
pub fn float_oracle(cases: u32, seed: u64) -> Result<f64, String> {
    let pool = Pool::new();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let q = |rng: &mut StdRng| Q::new(rng.gen_range(-3..=3), rng.gen_range(1..=2));
    for _ in 0..cases {
        let (a1, a2, b1, b2) = (q(&mut rng), q(&mut rng), q(&mut rng), q(&mut rng));
        let a = Lin::term(&pool.phi11, a1.clone()).plus(&pool.chi11, a2.clone());
        let b = Lin::term(&pool.phi11, b1.clone()).plus(&pool.chi11, b2.clone());
        let (x, y): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let at = |f: &Field| if *f == pool.phi11 { x } else { y };
        let av = a1.to_f64() * x + a2.to_f64() * y;
        let bv = b1.to_f64() * x + b2.to_f64() * y;
        let want = [av.cosh() * bv.cosh(), av.sinh() * bv.sinh(), av.sinh() * bv.cosh(), 1.0];
        for ((name, lhs, rhs), w) in hyperbolic_identities(&a, &b).into_iter().zip(want) {
            for side in [lhs, rhs] {
                let (re, im) = eval(&side, &at);
                let err = ((re - w).abs() + im.abs()) / w.abs().max(1.0);
                worst = worst.max(err);
                if err > 1e-9 {
                    return Err(format!("{name} at ({x}, {y}): ring gives {re}, f64 gives {w}"));
                }
            }
        }
    }
    Ok(worst)
}

/// Negative control: plain commutativity must be refuted by the generator.
pub fn plain_commutativity(cases: u32) -> Outcome {
    run(cases, (poly(), poly()), |(p, q)| {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        Ok(())
    })
}
