//! Graded-commutative differential polynomial ring.
//!
//! Elements are finite sums of sign-normalized monomials over field jets, odd
//! coordinates, constants and function generators (exp, cosh, sinh, inverses
//! and logarithms of registered polynomials).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::grading::GradeVec;
use crate::scalar::{Q, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("unknown derivative `{0}`")]
    UnknownDerivative(String),
    #[error("derivative {deriv} does not act on superfield `{field}`")]
    MixedSuperspace { deriv: String, field: String },
    #[error("{0}")]
    Grading(String),
    #[error("rewriting did not terminate after {0} rounds")]
    NonTerminating(usize),
    #[error("substitution of `{0}` is not supported: {1}")]
    Substitution(String, String),
}

pub type RingResult<T> = Result<T, RingError>;

/// Which odd derivatives a field's jets carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    /// Component field on (x+, x-); odd derivatives act as i theta d.
    Plain,
    /// Superfield on (x+, x-, theta+, theta-) with D+, D-.
    Standard,
    /// Superfield on (x+, x-, theta10, theta01) with D10, D01.
    Alternative,
}

impl Space {
    fn odd_grades(self) -> (GradeVec, GradeVec) {
        match self {
            Space::Alternative => (GradeVec::G10, GradeVec::G01),
            _ => (GradeVec::G10, GradeVec::G10),
        }
    }

    fn odd_derivs(self) -> Option<(Deriv, Deriv)> {
        match self {
            Space::Plain => None,
            Space::Standard => Some((Deriv::DPlus, Deriv::DMinus)),
            Space::Alternative => Some((Deriv::D10, Deriv::D01)),
        }
    }

    /// s with D2 D1 = s D1 D2.
    fn swap_sign(self) -> i8 {
        let (g1, g2) = self.odd_grades();
        g1.sign(g2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chirality {
    Both,
    /// Depends on x+ and the first odd coordinate only.
    Plus,
    /// Depends on x- and the second odd coordinate only.
    Minus,
}

#[derive(Debug)]
pub struct FieldDef {
    pub name: Arc<str>,
    pub grade: GradeVec,
    pub space: Space,
    pub chirality: Chirality,
}

/// A named field symbol. Identity is the name.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldDef>);

impl Field {
    pub fn new(name: &str, grade: GradeVec, space: Space, chirality: Chirality) -> Field {
        Field(Arc::new(FieldDef { name: name.into(), grade, space, chirality }))
    }
    pub fn superfield(name: &str, grade: GradeVec) -> Field {
        Field::new(name, grade, Space::Standard, Chirality::Both)
    }
    pub fn component(name: &str, grade: GradeVec) -> Field {
        Field::new(name, grade, Space::Plain, Chirality::Both)
    }
    pub fn name(&self) -> &str {
        &self.0.name
    }
    pub fn grade(&self) -> GradeVec {
        self.0.grade
    }
    pub fn space(&self) -> Space {
        self.0.space
    }
    pub fn chirality(&self) -> Chirality {
        self.0.chirality
    }
    /// The field itself as a ring element.
    pub fn poly(&self) -> GradedPoly {
        GradedPoly::from_gen(Gen::Jet(Jet::base(self.clone())))
    }
    /// Treat the name as a formal [00] constant with integer powers.
    pub fn param(name: &str) -> Field {
        Field::new(name, GradeVec::G00, Space::Plain, Chirality::Both)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.name == other.0.name
    }
}
impl Eq for Field {}
impl PartialOrd for Field {
    fn partial_cmp(&self, other: &Field) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Field {
    fn cmp(&self, other: &Field) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.name.cmp(&other.0.name)
        }
    }
}
impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.name.hash(state)
    }
}

/// Odd coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OddCoord {
    ThetaPlus,
    ThetaMinus,
    Theta10,
    Theta01,
}

impl OddCoord {
    pub fn grade(self) -> GradeVec {
        match self {
            OddCoord::Theta01 => GradeVec::G01,
            _ => GradeVec::G10,
        }
    }
    pub fn poly(self) -> GradedPoly {
        GradedPoly::from_gen(Gen::Theta(self))
    }
    fn label(self) -> &'static str {
        match self {
            OddCoord::ThetaPlus => "th+",
            OddCoord::ThetaMinus => "th-",
            OddCoord::Theta10 => "th10",
            OddCoord::Theta01 => "th01",
        }
    }
}

/// Derivations of the ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Deriv {
    DPlus,
    DMinus,
    PartialPlus,
    PartialMinus,
    D10,
    D01,
}

impl Deriv {
    pub fn grade(self) -> GradeVec {
        match self {
            Deriv::DPlus | Deriv::DMinus | Deriv::D10 => GradeVec::G10,
            Deriv::D01 => GradeVec::G01,
            _ => GradeVec::G00,
        }
    }

    /// Accepts the plus/minus names and the D, Dbar aliases of the (x, xbar) coordinates.
    pub fn parse(s: &str) -> RingResult<Deriv> {
        Ok(match s {
            "D+" | "D₊" | "D" => Deriv::DPlus,
            "D-" | "D₋" | "Dbar" | "D̄" => Deriv::DMinus,
            "d+" | "∂₊" | "d" | "∂" => Deriv::PartialPlus,
            "d-" | "∂₋" | "dbar" | "∂̄" => Deriv::PartialMinus,
            "D10" | "D₁₀" => Deriv::D10,
            "D01" | "D₀₁" => Deriv::D01,
            _ => return Err(RingError::UnknownDerivative(s.to_string())),
        })
    }

    fn is_plus_direction(self) -> bool {
        matches!(self, Deriv::DPlus | Deriv::PartialPlus | Deriv::D10)
    }

    fn is_odd(self) -> bool {
        !matches!(self, Deriv::PartialPlus | Deriv::PartialMinus)
    }

    fn partner_partial(self) -> Deriv {
        if self.is_plus_direction() {
            Deriv::PartialPlus
        } else {
            Deriv::PartialMinus
        }
    }

    fn theta(self) -> Option<OddCoord> {
        match self {
            Deriv::DPlus => Some(OddCoord::ThetaPlus),
            Deriv::DMinus => Some(OddCoord::ThetaMinus),
            Deriv::D10 => Some(OddCoord::Theta10),
            Deriv::D01 => Some(OddCoord::Theta01),
            _ => None,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Deriv::DPlus => "D+",
            Deriv::DMinus => "D-",
            Deriv::PartialPlus => "d+",
            Deriv::PartialMinus => "d-",
            Deriv::D10 => "D10",
            Deriv::D01 => "D01",
        }
    }
}

impl fmt::Display for Deriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Canonical jet `d+^a d-^b D1^e1 D2^e2 field` (rightmost applied first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Jet {
    pub field: Field,
    pub a: u16,
    pub b: u16,
    pub e1: bool,
    pub e2: bool,
}

impl Jet {
    pub fn base(field: Field) -> Jet {
        Jet { field, a: 0, b: 0, e1: false, e2: false }
    }
    pub fn grade(&self) -> GradeVec {
        let (g1, g2) = self.field.space().odd_grades();
        let mut g = self.field.grade();
        if self.e1 {
            g = g + g1;
        }
        if self.e2 {
            g = g + g2;
        }
        g
    }
    pub fn is_base(&self) -> bool {
        self.a == 0 && self.b == 0 && !self.e1 && !self.e2
    }
    pub fn has_plus(&self) -> bool {
        self.a > 0 || self.e1
    }
    pub fn has_minus(&self) -> bool {
        self.b > 0 || self.e2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HypKind {
    Cosh,
    Sinh,
}

#[derive(Debug)]
pub struct RegDef {
    pub name: Arc<str>,
    pub poly: GradedPoly,
}

/// A named polynomial registered for localization (inverse and logarithm).
#[derive(Clone, Debug)]
pub struct Registered(Arc<RegDef>);

impl Registered {
    /// Registers `poly` under `name`; it must be homogeneous of grade [00].
    pub fn new(name: &str, poly: GradedPoly) -> RingResult<Registered> {
        match poly.grade() {
            Some(GradeVec::G00) => Ok(Registered(Arc::new(RegDef { name: name.into(), poly }))),
            _ => Err(RingError::Grading(format!("registered polynomial `{name}` must be [00]-graded"))),
        }
    }
    pub fn name(&self) -> &str {
        &self.0.name
    }
    pub fn poly(&self) -> &GradedPoly {
        &self.0.poly
    }
    pub fn inv(&self) -> GradedPoly {
        GradedPoly::from_gen(Gen::Inv(self.clone()))
    }
    pub fn log(&self) -> GradedPoly {
        GradedPoly::from_gen(Gen::Log(self.clone()))
    }
}

impl PartialEq for Registered {
    fn eq(&self, other: &Registered) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.name == other.0.name
    }
}
impl Eq for Registered {}
impl PartialOrd for Registered {
    fn partial_cmp(&self, other: &Registered) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Registered {
    fn cmp(&self, other: &Registered) -> Ordering {
        self.0.name.cmp(&other.0.name)
    }
}
impl std::hash::Hash for Registered {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.name.hash(state)
    }
}

/// Ring generators. Variant order is the monomial order on kinds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Param(Field),
    Theta(OddCoord),
    Jet(Jet),
    /// exp(q field), q != 0, field [00].
    Exp(Field, Q),
    /// cosh/sinh(q field), q > 0, field [11].
    Hyp(Field, HypKind, Q),
    Inv(Registered),
    Log(Registered),
}

impl Gen {
    pub fn grade(&self) -> GradeVec {
        match self {
            Gen::Param(_) | Gen::Exp(..) | Gen::Inv(_) | Gen::Log(_) => GradeVec::G00,
            Gen::Theta(t) => t.grade(),
            Gen::Jet(j) => j.grade(),
            Gen::Hyp(_, HypKind::Cosh, _) => GradeVec::G00,
            Gen::Hyp(_, HypKind::Sinh, _) => GradeVec::G11,
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Gen::Param(_) => 0,
            Gen::Theta(_) => 1,
            Gen::Jet(_) => 2,
            Gen::Exp(..) => 3,
            Gen::Hyp(..) => 4,
            Gen::Inv(_) => 5,
            Gen::Log(_) => 6,
        }
    }

    /// Order of monomial slots; exp and hyperbolic generators of one field share a slot.
    fn slot_cmp(&self, other: &Gen) -> Ordering {
        match (self, other) {
            (Gen::Exp(f, _), Gen::Exp(g, _)) => f.cmp(g),
            (Gen::Hyp(f, ..), Gen::Hyp(g, ..)) => f.cmp(g),
            _ => self.kind_rank().cmp(&other.kind_rank()).then_with(|| self.cmp(other)),
        }
    }
}

pub type Factor = (Gen, i32);
pub type Mono = Vec<Factor>;

fn factor_grade(f: &Factor) -> GradeVec {
    if f.1.rem_euclid(2) == 1 {
        f.0.grade()
    } else {
        GradeVec::G00
    }
}

pub fn mono_grade(m: &[Factor]) -> GradeVec {
    m.iter().map(factor_grade).sum()
}

/// Normalizes a hyperbolic factor; `None` means the factor vanishes.
fn hyp_normal(field: &Field, kind: HypKind, q: Q) -> Option<(i8, Option<Gen>)> {
    if q.is_zero() {
        return match kind {
            HypKind::Cosh => Some((1, None)),
            HypKind::Sinh => None,
        };
    }
    if q.is_negative() {
        let q = -&q;
        return Some((if kind == HypKind::Sinh { -1 } else { 1 }, Some(Gen::Hyp(field.clone(), kind, q))));
    }
    Some((1, Some(Gen::Hyp(field.clone(), kind, q))))
}

/// Product-to-sum for two hyperbolic factors of the same field.
fn hyp_product(field: &Field, k1: HypKind, q1: &Q, k2: HypKind, q2: &Q) -> Vec<(Scalar, Option<Gen>)> {
    use HypKind::*;
    let sum = q1 + q2;
    let diff = q1 - q2;
    let half = Scalar::rational(1, 2);
    let (kind, s_sum, s_diff) = match (k1, k2) {
        (Cosh, Cosh) => (Cosh, 1, 1),
        (Cosh, Sinh) => (Sinh, 1, -1),
        (Sinh, Cosh) => (Sinh, 1, 1),
        (Sinh, Sinh) => (Cosh, 1, -1),
    };
    let mut out = Vec::with_capacity(2);
    for (q, s) in [(sum, s_sum), (diff, s_diff)] {
        if let Some((sg, g)) = hyp_normal(field, kind, q) {
            out.push((&half * &Scalar::from_int((s * sg) as i64), g));
        }
    }
    out
}

enum Slot {
    One(Factor),
    Hyp(Field, HypKind, Q, HypKind, Q),
}

/// Product of two monomials as a short list of (monomial, coefficient).
pub fn mono_mul(a: &[Factor], b: &[Factor]) -> Vec<(Mono, Scalar)> {
    let mut suffix = vec![GradeVec::G00; a.len() + 1];
    for k in (0..a.len()).rev() {
        suffix[k] = suffix[k + 1] + factor_grade(&a[k]);
    }
    let mut sign = 1i8;
    let mut slots: Vec<Slot> = Vec::with_capacity(a.len() + b.len());
    let mut has_pair = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.slot_cmp(&b[j].0) {
            Ordering::Less => {
                slots.push(Slot::One(a[i].clone()));
                i += 1;
            }
            Ordering::Greater => {
                sign *= suffix[i].sign(factor_grade(&b[j]));
                slots.push(Slot::One(b[j].clone()));
                j += 1;
            }
            Ordering::Equal => {
                sign *= suffix[i + 1].sign(factor_grade(&b[j]));
                let (ga, ea) = (&a[i].0, a[i].1);
                let eb = b[j].1;
                match (ga, &b[j].0) {
                    (Gen::Exp(f, q1), Gen::Exp(_, q2)) => {
                        let q = q1 + q2;
                        if !q.is_zero() {
                            slots.push(Slot::One((Gen::Exp(f.clone(), q), 1)));
                        }
                    }
                    (Gen::Hyp(f, k1, q1), Gen::Hyp(_, k2, q2)) => {
                        has_pair = true;
                        slots.push(Slot::Hyp(f.clone(), *k1, q1.clone(), *k2, q2.clone()));
                    }
                    _ => {
                        if ga.grade().is_odd_type() {
                            return Vec::new();
                        }
                        let e = ea + eb;
                        if e != 0 {
                            slots.push(Slot::One((ga.clone(), e)));
                        }
                    }
                }
                i += 1;
                j += 1;
            }
        }
    }
    slots.extend(a[i..].iter().cloned().map(Slot::One));
    slots.extend(b[j..].iter().cloned().map(Slot::One));
    let coef = Scalar::from_int(sign as i64);
    if !has_pair {
        let m = slots
            .into_iter()
            .map(|s| match s {
                Slot::One(f) => f,
                Slot::Hyp(..) => unreachable!(),
            })
            .collect();
        return vec![(m, coef)];
    }
    let mut terms: Vec<(Mono, Scalar)> = vec![(Vec::new(), coef)];
    for s in slots {
        match s {
            Slot::One(f) => terms.iter_mut().for_each(|(m, _)| m.push(f.clone())),
            Slot::Hyp(f, k1, q1, k2, q2) => {
                let parts = hyp_product(&f, k1, &q1, k2, &q2);
                let mut next = Vec::with_capacity(terms.len() * parts.len());
                for (m, c) in &terms {
                    for (pc, g) in &parts {
                        let mut m2 = m.clone();
                        if let Some(g) = g {
                            m2.push((g.clone(), 1));
                        }
                        next.push((m2, c * pc));
                    }
                }
                terms = next;
            }
        }
    }
    terms
}

/// Element of the graded ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradedPoly {
    terms: BTreeMap<Mono, Scalar>,
}

impl GradedPoly {
    pub fn zero() -> GradedPoly {
        GradedPoly { terms: BTreeMap::new() }
    }
    pub fn one() -> GradedPoly {
        GradedPoly::constant(Scalar::one())
    }
    pub fn constant(c: Scalar) -> GradedPoly {
        let mut p = GradedPoly::zero();
        p.add_term(Vec::new(), c);
        p
    }
    pub fn int(n: i64) -> GradedPoly {
        GradedPoly::constant(Scalar::from_int(n))
    }
    pub fn i() -> GradedPoly {
        GradedPoly::constant(Scalar::i())
    }
    pub fn from_gen(g: Gen) -> GradedPoly {
        GradedPoly::from_mono(vec![(g, 1)], Scalar::one())
    }
    pub fn from_mono(m: Mono, c: Scalar) -> GradedPoly {
        let mut p = GradedPoly::zero();
        p.add_term(m, c);
        p
    }
    /// A formal constant raised to an integer power.
    pub fn param(field: &Field, power: i32) -> GradedPoly {
        if power == 0 {
            return GradedPoly::one();
        }
        GradedPoly::from_mono(vec![(Gen::Param(field.clone()), power)], Scalar::one())
    }
    pub fn jet(j: Jet) -> GradedPoly {
        GradedPoly::from_gen(Gen::Jet(j))
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term.
    pub fn body_constant(&self) -> Scalar {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    /// Grade if nonzero and homogeneous.
    pub fn grade(&self) -> Option<GradeVec> {
        let mut it = self.terms.keys().map(|m| mono_grade(m));
        let g = it.next()?;
        it.all(|h| h == g).then_some(g)
    }

    /// Grade, treating zero as compatible with anything.
    pub fn is_homogeneous(&self) -> bool {
        self.is_empty() || self.grade().is_some()
    }

    pub fn scale(&self, c: &Scalar) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn add(&self, other: &GradedPoly) -> GradedPoly {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }
    pub fn add_assign(&mut self, other: &GradedPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
    pub fn add_scaled(&mut self, other: &GradedPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }
    pub fn sub(&self, other: &GradedPoly) -> GradedPoly {
        let mut r = self.clone();
        r.add_scaled(other, &Scalar::from_int(-1));
        r
    }
    pub fn neg(&self) -> GradedPoly {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn mul(&self, other: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 * c2;
                for (m, s) in mono_mul(m1, m2) {
                    out.add_term(m, &c * &s);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> GradedPoly {
        let mut r = GradedPoly::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Sum of a sequence of products.
    pub fn product<'a>(items: impl IntoIterator<Item = &'a GradedPoly>) -> GradedPoly {
        items.into_iter().fold(GradedPoly::one(), |acc, p| acc.mul(p))
    }

    /// Universal zero test; registered inverses are cleared first.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        if self.has_inverse() {
            return self.clear_denominators().terms.is_empty();
        }
        false
    }

    fn has_inverse(&self) -> bool {
        self.terms.keys().any(|m| m.iter().any(|(g, _)| matches!(g, Gen::Inv(_))))
    }

    /// Multiplies by the smallest power of each registered polynomial that
    /// removes its inverse, cancelling Inv(P)^k P^k to 1.
    pub fn clear_denominators(&self) -> GradedPoly {
        let mut p = self.clone();
        loop {
            let mut target: Option<(Registered, i32)> = None;
            for m in p.terms.keys() {
                for (g, e) in m {
                    if let Gen::Inv(r) = g {
                        match &mut target {
                            Some((t, k)) if t == r => *k = (*k).max(*e),
                            None => target = Some((r.clone(), *e)),
                            _ => {}
                        }
                    }
                }
            }
            let Some((reg, max)) = target else { return p };
            let mut powers = vec![GradedPoly::one()];
            for k in 1..=max as usize {
                powers.push(powers[k - 1].mul(reg.poly()));
            }
            let mut out = GradedPoly::zero();
            for (m, c) in &p.terms {
                let k = m.iter().find_map(|(g, e)| matches!(g, Gen::Inv(r) if *r == reg).then_some(*e)).unwrap_or(0);
                let rest: Mono = m.iter().filter(|(g, _)| !matches!(g, Gen::Inv(r) if *r == reg)).cloned().collect();
                let term = GradedPoly::from_mono(rest, c.clone());
                out.add_assign(&term.mul(&powers[(max - k) as usize]));
            }
            p = out;
        }
    }

    /// Applies a derivation with the graded Leibniz rule.
    pub fn apply(&self, d: Deriv) -> RingResult<GradedPoly> {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let dm = mono_deriv(d, m)?;
            out.add_scaled(&dm, c);
        }
        Ok(out)
    }

    /// Applies derivations right to left: `apply_seq([D+, D-], p) = D+(D-(p))`.
    pub fn apply_seq(&self, ds: &[Deriv]) -> RingResult<GradedPoly> {
        let mut p = self.clone();
        for d in ds.iter().rev() {
            p = p.apply(*d)?;
        }
        Ok(p)
    }

    /// Coefficient of the monomial `m` exactly (zero if absent).
    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Maps every generator through `f`; unmatched generators pass unchanged.
    pub fn map_gens<F>(&self, mut f: F) -> RingResult<GradedPoly>
    where
        F: FnMut(&Gen) -> RingResult<Option<GradedPoly>>,
    {
        let mut cache: BTreeMap<Gen, Option<GradedPoly>> = BTreeMap::new();
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = GradedPoly::constant(c.clone());
            let mut plain: Mono = Vec::new();
            for (g, e) in m {
                if !cache.contains_key(g) {
                    let r = f(g)?;
                    cache.insert(g.clone(), r);
                }
                match &cache[g] {
                    None => plain.push((g.clone(), *e)),
                    Some(r) => {
                        if !plain.is_empty() {
                            acc = acc.mul(&GradedPoly::from_mono(std::mem::take(&mut plain), Scalar::one()));
                        }
                        if *e < 0 {
                            return Err(RingError::Substitution(format!("{g:?}"), "negative power".into()));
                        }
                        for _ in 0..*e {
                            acc = acc.mul(r);
                        }
                    }
                }
            }
            if !plain.is_empty() {
                acc = acc.mul(&GradedPoly::from_mono(plain, Scalar::one()));
            }
            out.add_assign(&acc);
        }
        Ok(out)
    }

    /// Set of fields appearing anywhere (jets and function arguments).
    pub fn fields(&self) -> Vec<Field> {
        let mut v: Vec<Field> = Vec::new();
        for m in self.terms.keys() {
            for (g, _) in m {
                let f = match g {
                    Gen::Jet(j) => Some(&j.field),
                    Gen::Exp(f, _) | Gen::Hyp(f, ..) | Gen::Param(f) => Some(f),
                    _ => None,
                };
                if let Some(f) = f {
                    if !v.contains(f) {
                        v.push(f.clone());
                    }
                }
            }
        }
        v.sort();
        v
    }

    /// Splits by the exponent pattern of the given generators: key = powers of
    /// the selected generators, value = remaining polynomial.
    pub fn collect_by<F>(&self, select: F) -> BTreeMap<Mono, GradedPoly>
    where
        F: Fn(&Gen) -> bool,
    {
        let mut out: BTreeMap<Mono, GradedPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Mono = m.iter().filter(|(g, _)| select(g)).cloned().collect();
            let rest: Mono = m.iter().filter(|(g, _)| !select(g)).cloned().collect();
            // moving selected generators to the front may cost a sign
            let sign = reorder_sign(m, &select);
            out.entry(key).or_default().add_term(rest, c * &Scalar::from_int(sign as i64));
        }
        out
    }
}

/// Sign of moving the selected factors (in order) in front of the others.
fn reorder_sign<F: Fn(&Gen) -> bool>(m: &[Factor], select: &F) -> i8 {
    let mut sign = 1i8;
    let mut passed = GradeVec::G00;
    for f in m {
        if select(&f.0) {
            sign *= passed.sign(factor_grade(f));
        } else {
            passed = passed + factor_grade(f);
        }
    }
    sign
}

fn mono_deriv(d: Deriv, m: &[Factor]) -> RingResult<GradedPoly> {
    let mut out = GradedPoly::zero();
    let dg = d.grade();
    let mut prefix_grade = GradeVec::G00;
    for k in 0..m.len() {
        let (g, e) = &m[k];
        let dgen = gen_deriv(d, g)?;
        if !dgen.is_empty() && *e != 0 {
            let sign = dg.sign(prefix_grade) as i64;
            // D(g^e) = e Dg g^(e-1) for even-type generators
            let mut mid = dgen.scale(&Scalar::from_int(sign * (*e as i64)));
            if *e != 1 {
                mid = mid.mul(&GradedPoly::from_mono(vec![(g.clone(), e - 1)], Scalar::one()));
            }
            let pre = GradedPoly::from_mono(m[..k].to_vec(), Scalar::one());
            let post = GradedPoly::from_mono(m[k + 1..].to_vec(), Scalar::one());
            out.add_assign(&pre.mul(&mid).mul(&post));
        }
        prefix_grade = prefix_grade + factor_grade(&m[k]);
    }
    Ok(out)
}

fn gen_deriv(d: Deriv, g: &Gen) -> RingResult<GradedPoly> {
    Ok(match g {
        Gen::Param(_) => GradedPoly::zero(),
        Gen::Theta(t) => {
            if d.theta() == Some(*t) {
                GradedPoly::one()
            } else {
                GradedPoly::zero()
            }
        }
        Gen::Jet(j) => jet_deriv(d, j)?,
        Gen::Exp(f, q) => f.poly().apply(d)?.scale(&Scalar::from_q(q.clone())).mul(&GradedPoly::from_gen(g.clone())),
        Gen::Hyp(f, k, q) => {
            let other = match k {
                HypKind::Cosh => HypKind::Sinh,
                HypKind::Sinh => HypKind::Cosh,
            };
            f.poly()
                .apply(d)?
                .scale(&Scalar::from_q(q.clone()))
                .mul(&GradedPoly::from_gen(Gen::Hyp(f.clone(), other, q.clone())))
        }
        Gen::Inv(r) => r.poly().apply(d)?.mul(&GradedPoly::from_mono(vec![(g.clone(), 2)], Scalar::from_int(-1))),
        Gen::Log(r) => r.poly().apply(d)?.mul(&r.inv()),
    })
}

/// Derivative of a canonical jet.
pub fn jet_deriv(d: Deriv, j: &Jet) -> RingResult<GradedPoly> {
    let field = &j.field;
    let plus = d.is_plus_direction();
    match (field.chirality(), plus) {
        (Chirality::Plus, false) | (Chirality::Minus, true) => return Ok(GradedPoly::zero()),
        _ => {}
    }
    if !d.is_odd() {
        let mut k = j.clone();
        if plus {
            k.a += 1;
        } else {
            k.b += 1;
        }
        return Ok(GradedPoly::jet(k));
    }
    let space = field.space();
    let Some((d1, d2)) = space.odd_derivs() else {
        // component field: D = d_theta + i theta d
        let theta = d.theta().expect("odd derivative");
        let dj = jet_deriv(d.partner_partial(), j)?;
        return Ok(theta.poly().mul(&dj).scale(&Scalar::i()));
    };
    let mut k = j.clone();
    if d == d1 {
        if !k.e1 {
            k.e1 = true;
            Ok(GradedPoly::jet(k))
        } else {
            k.e1 = false;
            k.a += 1;
            Ok(GradedPoly::jet(k).scale(&Scalar::i()))
        }
    } else if d == d2 {
        let sign = if k.e1 { space.swap_sign() } else { 1 };
        if !k.e2 {
            k.e2 = true;
            Ok(GradedPoly::jet(k).scale(&Scalar::from_int(sign as i64)))
        } else {
            k.e2 = false;
            k.b += 1;
            Ok(GradedPoly::jet(k).scale(&(&Scalar::i() * &Scalar::from_int(sign as i64))))
        }
    } else {
        Err(RingError::MixedSuperspace { deriv: d.to_string(), field: field.name().to_string() })
    }
}

/// Applies the canonical word of `j` (without its field) to `p`.
pub fn apply_word(space: Space, a: u16, b: u16, e1: bool, e2: bool, p: &GradedPoly) -> RingResult<GradedPoly> {
    let mut r = p.clone();
    if let Some((d1, d2)) = space.odd_derivs() {
        if e2 {
            r = r.apply(d2)?;
        }
        if e1 {
            r = r.apply(d1)?;
        }
    }
    for _ in 0..b {
        r = r.apply(Deriv::PartialMinus)?;
    }
    for _ in 0..a {
        r = r.apply(Deriv::PartialPlus)?;
    }
    Ok(r)
}

/// Rational linear combination of fields, used as a function argument.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lin(pub Vec<(Field, Q)>);

impl Lin {
    pub fn of(f: &Field) -> Lin {
        Lin(vec![(f.clone(), Q::one())])
    }
    pub fn term(f: &Field, q: Q) -> Lin {
        Lin(vec![(f.clone(), q)])
    }
    pub fn plus(mut self, f: &Field, q: Q) -> Lin {
        self.0.push((f.clone(), q));
        self
    }
    pub fn scaled(&self, q: &Q) -> Lin {
        Lin(self.0.iter().map(|(f, c)| (f.clone(), c * q)).collect())
    }
    fn normalized(&self) -> Vec<(Field, Q)> {
        let mut m: BTreeMap<Field, Q> = BTreeMap::new();
        for (f, q) in &self.0 {
            let e = m.entry(f.clone()).or_insert_with(Q::zero);
            *e = &*e + q;
        }
        m.into_iter().filter(|(_, q)| !q.is_zero()).collect()
    }
    fn grade(&self) -> RingResult<Option<GradeVec>> {
        let mut g = None;
        for (f, _) in self.normalized() {
            match g {
                None => g = Some(f.grade()),
                Some(h) if h != f.grade() => {
                    return Err(RingError::Grading("function argument mixes gradings".into()));
                }
                _ => {}
            }
        }
        Ok(g)
    }
}

/// exp of a [00]-graded linear combination.
pub fn exp_of(arg: &Lin) -> RingResult<GradedPoly> {
    match arg.grade()? {
        None => return Ok(GradedPoly::one()),
        Some(GradeVec::G00) => {}
        Some(g) => return Err(RingError::Grading(format!("exp of a {g}-graded argument"))),
    }
    let m: Mono = arg.normalized().into_iter().map(|(f, q)| (Gen::Exp(f, q), 1)).collect();
    Ok(GradedPoly::from_mono(m, Scalar::one()))
}

fn hyp_single(f: &Field, kind: HypKind, q: &Q) -> GradedPoly {
    match hyp_normal(f, kind, q.clone()) {
        None => GradedPoly::zero(),
        Some((s, None)) => GradedPoly::int(s as i64),
        Some((s, Some(g))) => GradedPoly::from_gen(g).scale(&Scalar::from_int(s as i64)),
    }
}

fn hyp_of(arg: &Lin, kind: HypKind) -> RingResult<GradedPoly> {
    let terms = arg.normalized();
    match arg.grade()? {
        None => {
            return Ok(match kind {
                HypKind::Cosh => GradedPoly::one(),
                HypKind::Sinh => GradedPoly::zero(),
            })
        }
        Some(GradeVec::G00) => {
            // cosh x = (e^x + e^-x)/2, sinh x = (e^x - e^-x)/2
            let plus = exp_of(arg)?;
            let minus = exp_of(&arg.scaled(&Q::int(-1)))?;
            let half = Scalar::rational(1, 2);
            return Ok(match kind {
                HypKind::Cosh => plus.add(&minus).scale(&half),
                HypKind::Sinh => plus.sub(&minus).scale(&half),
            });
        }
        Some(GradeVec::G11) => {}
        Some(g) => return Err(RingError::Grading(format!("hyperbolic function of a {g}-graded argument"))),
    }
    // addition formulas over the fields of the argument
    let (mut c, mut s) = (GradedPoly::one(), GradedPoly::zero());
    for (f, q) in &terms {
        let cf = hyp_single(f, HypKind::Cosh, q);
        let sf = hyp_single(f, HypKind::Sinh, q);
        let nc = c.mul(&cf).add(&s.mul(&sf));
        let ns = s.mul(&cf).add(&c.mul(&sf));
        c = nc;
        s = ns;
    }
    Ok(match kind {
        HypKind::Cosh => c,
        HypKind::Sinh => s,
    })
}

pub fn cosh_of(arg: &Lin) -> RingResult<GradedPoly> {
    hyp_of(arg, HypKind::Cosh)
}

pub fn sinh_of(arg: &Lin) -> RingResult<GradedPoly> {
    hyp_of(arg, HypKind::Sinh)
}

/// Jet `word field` as a ring element, built by applying derivations.
pub fn jet_of(field: &Field, ds: &[Deriv]) -> RingResult<GradedPoly> {
    field.poly().apply_seq(ds)
}

/// Replaces `field` by `value` everywhere, including jets and function arguments.
///
/// Function arguments need `value` = rational linear combination of fields
/// plus a nilpotent remainder; the remainder is Taylor-expanded.
pub fn substitute(p: &GradedPoly, field: &Field, value: &GradedPoly) -> RingResult<GradedPoly> {
    let (lin, nil) = split_linear(value, field)?;
    let mut nil_powers: Option<Vec<GradedPoly>> = None;
    let mut powers = |q: &Q| -> RingResult<Vec<GradedPoly>> {
        if nil_powers.is_none() {
            let mut v = vec![GradedPoly::one()];
            loop {
                let next = v.last().unwrap().mul(&nil);
                if next.is_empty() {
                    break;
                }
                if v.len() > 32 {
                    return Err(RingError::Substitution(field.name().into(), "remainder is not nilpotent".into()));
                }
                v.push(next);
            }
            nil_powers = Some(v);
        }
        // (q N)^k / k!
        let mut fact = Q::one();
        let mut qk = Q::one();
        let mut out = Vec::new();
        for (k, pk) in nil_powers.as_ref().unwrap().iter().enumerate() {
            if k > 0 {
                fact = &fact * &Q::int(k as i64);
                qk = &qk * q;
            }
            out.push(pk.scale(&Scalar::from_q(&qk * &fact.recip().unwrap())));
        }
        Ok(out)
    };
    p.map_gens(|g| match g {
        Gen::Jet(j) if j.field == *field => {
            Ok(Some(apply_word(field.space(), j.a, j.b, j.e1, j.e2, value)?))
        }
        Gen::Exp(f, q) if f == field => {
            let series = powers(q)?;
            let e = exp_of(&lin.scaled(q))?;
            let s = series.iter().fold(GradedPoly::zero(), |acc, t| acc.add(t));
            Ok(Some(e.mul(&s)))
        }
        Gen::Hyp(f, kind, q) if f == field => {
            let series = powers(q)?;
            let (mut ch, mut sh) = (GradedPoly::zero(), GradedPoly::zero());
            for (k, t) in series.iter().enumerate() {
                if k % 2 == 0 {
                    ch.add_assign(t);
                } else {
                    sh.add_assign(t);
                }
            }
            let arg = lin.scaled(q);
            let (c, s) = (cosh_of(&arg)?, sinh_of(&arg)?);
            Ok(Some(match kind {
                // cosh(L+N) = cosh L cosh N + sinh L sinh N
                HypKind::Cosh => c.mul(&ch).add(&s.mul(&sh)),
                HypKind::Sinh => s.mul(&ch).add(&c.mul(&sh)),
            }))
        }
        Gen::Param(f) if f == field => Err(RingError::Substitution(f.name().into(), "constants cannot be substituted".into())),
        Gen::Inv(r) | Gen::Log(r) if r.poly().fields().contains(field) => {
            Err(RingError::Substitution(field.name().into(), "field occurs inside a registered polynomial".into()))
        }
        _ => Ok(None),
    })
}

/// Splits `value` into a linear combination of bare fields and the remainder.
fn split_linear(value: &GradedPoly, field: &Field) -> RingResult<(Lin, GradedPoly)> {
    let mut lin = Lin::default();
    let mut rest = GradedPoly::zero();
    for (m, c) in value.terms() {
        match m.as_slice() {
            [(Gen::Jet(j), 1)] if j.is_base() && c.is_real() && !j.field.grade().is_odd_type() => {
                lin.0.push((j.field.clone(), c.re.clone()));
            }
            _ => rest.add_term(m.clone(), c.clone()),
        }
    }
    let _ = field;
    Ok((lin, rest))
}

/// One on-shell rewrite rule.
#[derive(Clone, Debug)]
pub enum Rule {
    /// D1 D2 field = rhs (both odd derivatives of the field's superspace).
    Mixed { field: Field, rhs: GradedPoly },
    /// D_slot field = rhs, slot 1 or 2.
    Odd { field: Field, slot: u8, rhs: GradedPoly },
    /// d+^a0 d-^b0 field = rhs for a component field.
    Partial { field: Field, a0: u16, b0: u16, rhs: GradedPoly },
}

impl Rule {
    fn field(&self) -> &Field {
        match self {
            Rule::Mixed { field, .. } | Rule::Odd { field, .. } | Rule::Partial { field, .. } => field,
        }
    }

    fn rewrite(&self, j: &Jet) -> RingResult<Option<GradedPoly>> {
        let space = j.field.space();
        let s = Scalar::from_int(space.swap_sign() as i64);
        let i = Scalar::i();
        let derivs = space.odd_derivs();
        Ok(match self {
            Rule::Mixed { rhs, .. } => {
                let (d1, d2) = derivs.expect("mixed rule on a superfield");
                match (j.e1, j.e2) {
                    (true, true) => Some(apply_word(space, j.a, j.b, false, false, rhs)?),
                    (true, false) if j.b >= 1 => {
                        let r = rhs.apply(d2)?.scale(&(&(-&i) * &s));
                        Some(apply_word(space, j.a, j.b - 1, false, false, &r)?)
                    }
                    (false, true) if j.a >= 1 => {
                        let r = rhs.apply(d1)?.scale(&(-&i));
                        Some(apply_word(space, j.a - 1, j.b, false, false, &r)?)
                    }
                    (false, false) if j.a >= 1 && j.b >= 1 => {
                        let r = rhs.apply(d2)?.apply(d1)?.scale(&(-&s));
                        Some(apply_word(space, j.a - 1, j.b - 1, false, false, &r)?)
                    }
                    _ => None,
                }
            }
            Rule::Odd { slot: 1, rhs, .. } => {
                let (d1, d2) = derivs.expect("odd rule on a superfield");
                let inner = if j.e2 { rhs.apply(d2)?.scale(&s) } else { rhs.clone() };
                if j.e1 {
                    Some(apply_word(space, j.a, j.b, false, false, &inner)?)
                } else if j.a >= 1 {
                    let r = inner.apply(d1)?.scale(&(-&i));
                    Some(apply_word(space, j.a - 1, j.b, false, false, &r)?)
                } else {
                    None
                }
            }
            Rule::Odd { rhs, .. } => {
                let (d1, d2) = derivs.expect("odd rule on a superfield");
                if j.e2 {
                    Some(apply_word(space, j.a, j.b, j.e1, false, rhs)?)
                } else if j.b >= 1 {
                    let r = rhs.apply(d2)?.scale(&(-&i));
                    Some(apply_word(space, j.a, j.b - 1, j.e1, false, &r)?)
                } else {
                    let _ = d1;
                    None
                }
            }
            Rule::Partial { a0, b0, rhs, .. } => {
                if j.a >= *a0 && j.b >= *b0 && !j.e1 && !j.e2 {
                    Some(apply_word(space, j.a - a0, j.b - b0, false, false, rhs)?)
                } else {
                    None
                }
            }
        })
    }
}

/// Ordered set of rewrite rules; the first matching rule wins.
#[derive(Clone, Debug, Default)]
pub struct RewriteSystem {
    pub rules: Vec<Rule>,
    pub max_rounds: usize,
}

impl RewriteSystem {
    pub fn new() -> RewriteSystem {
        RewriteSystem { rules: Vec::new(), max_rounds: 64 }
    }
    pub fn with(mut self, rule: Rule) -> RewriteSystem {
        self.rules.push(rule);
        self
    }
    pub fn push(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    fn rewrite_jet(&self, j: &Jet) -> RingResult<Option<GradedPoly>> {
        for r in self.rules.iter().filter(|r| *r.field() == j.field) {
            if let Some(p) = r.rewrite(j)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    fn is_reducible(&self, p: &GradedPoly) -> RingResult<bool> {
        for (m, _) in p.terms() {
            for (g, _) in m {
                if let Gen::Jet(j) = g {
                    if self.rewrite_jet(j)?.is_some() {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    /// Rewrites to a fixed point.
    pub fn reduce(&self, p: &GradedPoly) -> RingResult<GradedPoly> {
        let mut cur = p.clone();
        let rounds = if self.max_rounds == 0 { 64 } else { self.max_rounds };
        for _ in 0..rounds {
            if !self.is_reducible(&cur)? {
                return Ok(cur);
            }
            cur = cur.map_gens(|g| match g {
                Gen::Jet(j) => self.rewrite_jet(j),
                _ => Ok(None),
            })?;
        }
        Err(RingError::NonTerminating(rounds))
    }
}

pub fn reduce_on_shell(p: &GradedPoly, eom: &RewriteSystem) -> RingResult<GradedPoly> {
    eom.reduce(p)
}

fn fmt_gen(g: &Gen, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match g {
        Gen::Param(p) => write!(f, "{}", p.name()),
        Gen::Theta(t) => write!(f, "{}", t.label()),
        Gen::Jet(j) => {
            let mut w = String::new();
            if j.a > 0 {
                w.push_str("d+");
                if j.a > 1 {
                    w.push_str(&format!("^{}", j.a));
                }
            }
            if j.b > 0 {
                w.push_str("d-");
                if j.b > 1 {
                    w.push_str(&format!("^{}", j.b));
                }
            }
            let (n1, n2) = match j.field.space() {
                Space::Alternative => ("D10", "D01"),
                _ => ("D+", "D-"),
            };
            if j.e1 {
                w.push_str(n1);
            }
            if j.e2 {
                w.push_str(n2);
            }
            if w.is_empty() {
                write!(f, "{}", j.field.name())
            } else {
                write!(f, "{}({})", w, j.field.name())
            }
        }
        Gen::Exp(fl, q) => write!(f, "exp({})", fmt_arg(fl, q)),
        Gen::Hyp(fl, HypKind::Cosh, q) => write!(f, "cosh({})", fmt_arg(fl, q)),
        Gen::Hyp(fl, HypKind::Sinh, q) => write!(f, "sinh({})", fmt_arg(fl, q)),
        Gen::Inv(r) => write!(f, "inv({})", r.name()),
        Gen::Log(r) => write!(f, "log({})", r.name()),
    }
}

fn fmt_arg(fl: &Field, q: &Q) -> String {
    if q.is_one() {
        fl.name().to_string()
    } else {
        format!("{q}*{}", fl.name())
    }
}

struct GenDisplay<'a>(&'a Gen);
impl fmt::Display for GenDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_gen(self.0, f)
    }
}

/// Canonical text form of a monomial.
pub fn mono_to_string(m: &[Factor]) -> String {
    m.iter()
        .map(|(g, e)| if *e == 1 { GenDisplay(g).to_string() } else { format!("{}^{}", GenDisplay(g), e) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if m.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                f.write_str(&mono_to_string(m))?;
            } else {
                write!(f, "({c})*{}", mono_to_string(m))?;
            }
        }
        Ok(())
    }
}

impl From<Scalar> for GradedPoly {
    fn from(c: Scalar) -> GradedPoly {
        GradedPoly::constant(c)
    }
}

impl std::ops::Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        GradedPoly::add(self, rhs)
    }
}
impl std::ops::Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        GradedPoly::sub(self, rhs)
    }
}
impl std::ops::Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        GradedPoly::mul(self, rhs)
    }
}
impl std::ops::Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly::neg(self)
    }
}
impl std::ops::Add for GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: GradedPoly) -> GradedPoly {
        GradedPoly::add(&self, &rhs)
    }
}
impl std::ops::Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: GradedPoly) -> GradedPoly {
        GradedPoly::sub(&self, &rhs)
    }
}
impl std::ops::Mul for GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: GradedPoly) -> GradedPoly {
        GradedPoly::mul(&self, &rhs)
    }
}
impl std::ops::Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> (Field, Field) {
        (Field::superfield("Phi00", GradeVec::G00), Field::superfield("Phi11", GradeVec::G11))
    }

    #[test]
    fn theta_nilpotent_and_anticommuting() {
        let tp = OddCoord::ThetaPlus.poly();
        let tm = OddCoord::ThetaMinus.poly();
        assert!(tp.mul(&tp).is_zero());
        assert!(tp.mul(&tm).add(&tm.mul(&tp)).is_zero());
    }

    #[test]
    fn commuting_odd_pair() {
        let l10 = Field::superfield("lambda10", GradeVec::G10).poly();
        let l01 = Field::superfield("lambda01", GradeVec::G01).poly();
        assert_eq!(l10.mul(&l01), l01.mul(&l10));
    }

    #[test]
    fn sinh_squared() {
        let (_, p11) = phi();
        let s = sinh_of(&Lin::of(&p11)).unwrap();
        let c2 = cosh_of(&Lin::term(&p11, Q::int(2))).unwrap();
        let expect = c2.scale(&Scalar::rational(1, 2)).sub(&GradedPoly::constant(Scalar::rational(1, 2)));
        assert_eq!(s.mul(&s), expect);
        let c = cosh_of(&Lin::of(&p11)).unwrap();
        assert!(c.mul(&c).sub(&s.mul(&s)).sub(&GradedPoly::one()).is_zero());
    }

    #[test]
    fn exp_merges() {
        let (p00, _) = phi();
        let a = exp_of(&Lin::term(&p00, Q::new(1, 2))).unwrap();
        let b = exp_of(&Lin::term(&p00, Q::new(-1, 2))).unwrap();
        assert_eq!(a.mul(&b), GradedPoly::one());
        assert!(exp_of(&Lin::of(&phi().1)).is_err());
    }

    #[test]
    fn superderivative_squares() {
        let (p00, _) = phi();
        let x = p00.poly();
        let dd = x.apply(Deriv::DPlus).unwrap().apply(Deriv::DPlus).unwrap();
        assert_eq!(dd, x.apply(Deriv::PartialPlus).unwrap().scale(&Scalar::i()));
        let pm = x.apply(Deriv::DMinus).unwrap().apply(Deriv::DPlus).unwrap();
        let mp = x.apply(Deriv::DPlus).unwrap().apply(Deriv::DMinus).unwrap();
        assert!(pm.add(&mp).is_zero());
        assert_eq!(mp.to_string(), "(-1)*D+D-(Phi00)");
    }

    #[test]
    fn theta_derivative() {
        assert_eq!(OddCoord::ThetaPlus.poly().apply(Deriv::DPlus).unwrap(), GradedPoly::one());
        assert!(OddCoord::ThetaMinus.poly().apply(Deriv::DPlus).unwrap().is_zero());
    }

    #[test]
    fn mixed_superspace_error() {
        let (p00, _) = phi();
        assert!(p00.poly().apply(Deriv::D10).is_err());
        assert!(Deriv::parse("Dx").is_err());
    }

    #[test]
    fn liouville_rewrite() {
        let (p00, p11) = phi();
        let rhs = exp_of(&Lin::of(&p00)).unwrap().mul(&cosh_of(&Lin::of(&p11)).unwrap());
        let sys = RewriteSystem::new().with(Rule::Mixed { field: p00.clone(), rhs: rhs.clone() });
        let j = jet_of(&p00, &[Deriv::DPlus, Deriv::DMinus]).unwrap();
        assert_eq!(sys.reduce(&j).unwrap(), rhs);
        let dj = j.apply(Deriv::PartialPlus).unwrap();
        assert_eq!(sys.reduce(&dj).unwrap(), rhs.apply(Deriv::PartialPlus).unwrap());
    }

    #[test]
    fn chiral_annihilation() {
        let a = Field::new("alpha+", GradeVec::G10, Space::Standard, Chirality::Plus);
        assert!(a.poly().apply(Deriv::DMinus).unwrap().is_zero());
        assert!(a.poly().apply(Deriv::PartialMinus).unwrap().is_zero());
    }

    #[test]
    fn component_field_derivative() {
        let phi = Field::component("phi", GradeVec::G00);
        let d = phi.poly().apply(Deriv::DPlus).unwrap();
        let expect = OddCoord::ThetaPlus.poly().mul(&phi.poly().apply(Deriv::PartialPlus).unwrap()).scale(&Scalar::i());
        assert_eq!(d, expect);
    }

    #[test]
    fn inverse_cancels() {
        let x = Field::superfield("X", GradeVec::G00).poly();
        let u = GradedPoly::one().add(&x.mul(&x));
        let reg = Registered::new("U", u.clone()).unwrap();
        let p = reg.inv().mul(&u).sub(&GradedPoly::one());
        assert!(!p.is_empty());
        assert!(p.is_zero());
        // D(U^-1) U^2 = -DU
        let d = reg.inv().apply(Deriv::DPlus).unwrap().mul(&u).mul(&u).add(&u.apply(Deriv::DPlus).unwrap());
        assert!(d.is_zero());
    }

    #[test]
    fn substitution_expands_exp() {
        let p00 = Field::superfield("B", GradeVec::G00);
        let phi = Field::component("phi", GradeVec::G00);
        let psi = Field::component("psi", GradeVec::G10);
        let val = phi.poly().add(&OddCoord::ThetaPlus.poly().mul(&psi.poly()));
        let e = exp_of(&Lin::of(&p00)).unwrap();
        let r = substitute(&e, &p00, &val).unwrap();
        let ephi = exp_of(&Lin::of(&phi)).unwrap();
        let expect = ephi.add(&ephi.mul(&OddCoord::ThetaPlus.poly()).mul(&psi.poly()));
        assert_eq!(r, expect);
    }

    #[test]
    fn display_is_stable() {
        let (p00, p11) = phi();
        let p = exp_of(&Lin::term(&p00, Q::new(1, 2))).unwrap().mul(&sinh_of(&Lin::of(&p11)).unwrap()).scale(&Scalar::imag(-1, 2));
        assert_eq!(p.to_string(), "(-i/2)*exp(1/2*Phi00)*sinh(Phi11)");
    }
}
