//! Backlund transformations to the free equations and back to the
//! super-Liouville equations, with the conservation laws they generate.

use crate::grading::GradeVec;
use crate::report::Check;
use crate::ring::{cosh_of, exp_of, sinh_of, substitute, Deriv, Field, GradedPoly, Lin, RewriteSystem, Rule};
use crate::scalar::{Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BacklundVariant {
    Free,
    Auto,
}

impl BacklundVariant {
    pub const ALL: [BacklundVariant; 2] = [BacklundVariant::Free, BacklundVariant::Auto];

    pub fn name(self) -> &'static str {
        match self {
            BacklundVariant::Free => "free",
            BacklundVariant::Auto => "auto",
        }
    }

    pub fn parse(s: &str) -> Option<BacklundVariant> {
        BacklundVariant::ALL.into_iter().find(|v| v.name() == s)
    }
}

const DP: Deriv = Deriv::DPlus;
const DM: Deriv = Deriv::DMinus;

fn d(p: &GradedPoly, dd: Deriv) -> GradedPoly {
    p.apply(dd).expect("derivative")
}

fn half() -> Scalar {
    Scalar::rational(1, 2)
}

/// One line of the first-order table: D_slot field = rhs.
#[derive(Clone, Debug)]
pub struct Relation {
    pub field: Field,
    pub deriv: Deriv,
    pub rhs: GradedPoly,
}

#[derive(Clone, Debug)]
pub struct BacklundSystem {
    pub variant: BacklundVariant,
    pub v: [Field; 2],
    pub w: [Field; 2],
    pub lambda: Field,
    pub gamma: Field,
    pub a: Field,
    pub table: Vec<Relation>,
}

impl BacklundSystem {
    pub fn new(variant: BacklundVariant) -> BacklundSystem {
        use GradeVec as G;
        let v = [Field::superfield("V+", G::G00), Field::superfield("V-", G::G00)];
        let w = [Field::superfield("W+", G::G11), Field::superfield("W-", G::G11)];
        let lambda = Field::superfield("Lambda", G::G10);
        let gamma = Field::superfield("Gamma", G::G01);
        let a = Field::param("a");
        let mut s = BacklundSystem { variant, v, w, lambda, gamma, a, table: Vec::new() };
        s.table = s.build_table();
        s
    }

    pub fn a_pow(&self, n: i32) -> GradedPoly {
        GradedPoly::param(&self.a, n)
    }

    fn ev(&self, k: usize) -> GradedPoly {
        exp_of(&Lin::of(&self.v[k])).expect("[00]")
    }
    fn chw(&self, k: usize) -> GradedPoly {
        cosh_of(&Lin::of(&self.w[k])).expect("[11]")
    }
    fn shw(&self, k: usize) -> GradedPoly {
        sinh_of(&Lin::of(&self.w[k])).expect("[11]")
    }
    fn chv(&self, k: usize) -> GradedPoly {
        cosh_of(&Lin::of(&self.v[k])).expect("[00]")
    }
    fn shv(&self, k: usize) -> GradedPoly {
        sinh_of(&Lin::of(&self.v[k])).expect("[00]")
    }

    /// Lambda x + Gamma y.
    fn lg(&self, x: &GradedPoly, y: &GradedPoly) -> GradedPoly {
        self.lambda.poly().mul(x).add(&self.gamma.poly().mul(y))
    }

    fn build_table(&self) -> Vec<Relation> {
        let (l, g) = (&self.lambda, &self.gamma);
        let rel = |field: &Field, deriv, rhs| Relation { field: field.clone(), deriv, rhs };
        let inv_a = self.a_pow(-1).neg();
        let (e0, e1) = (self.ev(0), self.ev(1));
        let (c0, s0, c1, s1) = (self.chw(0), self.shw(0), self.chw(1), self.shw(1));
        let lambda_minus = e0.mul(&c0).mul(&inv_a);
        let gamma_minus = e0.mul(&s0).mul(&inv_a);
        match self.variant {
            BacklundVariant::Free => {
                let ah = self.a_pow(1).scale(&half());
                vec![
                    rel(&self.v[0], DP, ah.mul(&e1).mul(&self.lg(&c1, &s1))),
                    rel(&self.v[1], DM, e0.mul(&self.lg(&c0, &s0)).scale(&half())),
                    rel(&self.w[0], DP, ah.mul(&e1).mul(&self.lg(&s1, &c1))),
                    rel(&self.w[1], DM, e0.mul(&self.lg(&s0, &c0)).scale(&half())),
                    rel(l, DP, e1.mul(&c1)),
                    rel(l, DM, lambda_minus),
                    rel(g, DP, e1.mul(&s1)),
                    rel(g, DM, gamma_minus),
                ]
            }
            BacklundVariant::Auto => {
                let a1 = self.a_pow(1);
                let (cv, sv) = (self.chv(1), self.shv(1));
                vec![
                    rel(&self.v[0], DP, a1.mul(&self.lg(&cv.mul(&c1), &sv.mul(&s1)))),
                    rel(&self.v[1], DM, e0.mul(&self.lg(&c0, &s0))),
                    rel(&self.w[0], DP, a1.mul(&self.lg(&sv.mul(&s1), &cv.mul(&c1)))),
                    rel(&self.w[1], DM, e0.mul(&self.lg(&s0, &c0))),
                    rel(l, DP, sv.mul(&c1)),
                    rel(l, DM, lambda_minus),
                    rel(g, DP, cv.mul(&s1)),
                    rel(g, DM, gamma_minus),
                ]
            }
        }
    }

    pub fn rules(&self) -> RewriteSystem {
        let mut rs = RewriteSystem::new();
        for r in &self.table {
            let slot = if r.deriv == DP { 1 } else { 2 };
            rs.push(Rule::Odd { field: r.field.clone(), slot, rhs: r.rhs.clone() });
        }
        rs
    }

    pub fn reduce(&self, p: &GradedPoly) -> GradedPoly {
        self.rules().reduce(p).expect("table rules terminate")
    }

    pub fn lookup(&self, field: &Field, deriv: Deriv) -> Option<&GradedPoly> {
        self.table.iter().find(|r| r.field == *field && r.deriv == deriv).map(|r| &r.rhs)
    }

    /// Phi00 = V+ + V-, Phi11 = W+ + W- (tilde: differences).
    fn lin(&self, fs: &[Field; 2], tilde: bool) -> Lin {
        Lin::of(&fs[0]).plus(&fs[1], Q::int(if tilde { -1 } else { 1 }))
    }

    /// e^{Phi00} cosh Phi11 and e^{Phi00} sinh Phi11, or their tilde versions.
    pub fn liouville_rhs(&self, tilde: bool) -> (GradedPoly, GradedPoly) {
        let e = exp_of(&self.lin(&self.v, tilde)).expect("[00]");
        let wl = self.lin(&self.w, tilde);
        (e.mul(&cosh_of(&wl).expect("[11]")), e.mul(&sinh_of(&wl).expect("[11]")))
    }

    /// D+ D- of a field, reduced through the table.
    pub fn dd(&self, x: &GradedPoly) -> GradedPoly {
        self.reduce(&d(&d(x, DM), DP))
    }
}

pub fn verify_backlund_implication(v: BacklundVariant) -> Vec<Check> {
    let s = BacklundSystem::new(v);
    let tag = v.name();
    let mut out = Vec::new();
    let two = Scalar::from_int(2);
    let (ch, sh) = s.liouville_rhs(false);
    let ddv: Vec<GradedPoly> = s.v.iter().map(|f| s.dd(&f.poly())).collect();
    let ddw: Vec<GradedPoly> = s.w.iter().map(|f| s.dd(&f.poly())).collect();
    let phi00 = ddv[0].add(&ddv[1]);
    let phi11 = ddw[0].add(&ddw[1]);
    let t00 = ddv[0].sub(&ddv[1]);
    let t11 = ddw[0].sub(&ddw[1]);
    match v {
        BacklundVariant::Free => {
            for k in 0..2 {
                let pm = ["plus", "minus"][k];
                out.push(Check::zero(format!("backlund.free.ddv.{pm}"), "2 D+D-V equals e^{Phi00} cosh Phi11", &ddv[k].scale(&two).sub(&ch)));
                out.push(Check::zero(format!("backlund.free.ddw.{pm}"), "2 D+D-W equals e^{Phi00} sinh Phi11", &ddw[k].scale(&two).sub(&sh)));
            }
            out.push(Check::zero("backlund.free.tilde00", "transformed [00] field is free", &t00));
            out.push(Check::zero("backlund.free.tilde11", "transformed [11] field is free", &t11));
        }
        BacklundVariant::Auto => {
            let (tch, tsh) = s.liouville_rhs(true);
            out.push(Check::zero("backlund.auto.tilde00", "transformed [00] field solves the [00] equation", &t00.sub(&tch)));
            out.push(Check::zero("backlund.auto.tilde11", "transformed [11] field solves the [11] equation", &t11.sub(&tsh)));
        }
    }
    out.push(Check::zero(format!("backlund.{tag}.phi00"), "original [00] field solves its equation", &phi00.sub(&ch)));
    out.push(Check::zero(format!("backlund.{tag}.phi11"), "original [11] field solves its equation", &phi11.sub(&sh)));
    if v == BacklundVariant::Free {
        // Lambda = Gamma = 0, W = 0 slice
        let mut p = ddw[1].clone();
        for f in [&s.gamma, &s.lambda, &s.w[0], &s.w[1]] {
            p = substitute(&p, f, &GradedPoly::zero()).expect("substitution");
        }
        out.push(Check::zero("backlund.free.slice", "D+D-W- vanishes on the bosonic slice", &p));
    }
    out
}

pub fn verify_integrability_of_system(v: BacklundVariant) -> Vec<Check> {
    let s = BacklundSystem::new(v);
    let tag = v.name();
    let rs = s.rules();
    let mut out = Vec::new();
    for f in [&s.lambda, &s.gamma] {
        let x = f.poly();
        let pm = s.reduce(&d(s.lookup(f, DM).expect("table"), DP));
        let mp = s.reduce(&d(s.lookup(f, DP).expect("table"), DM));
        out.push(Check::zero(format!("backlund.{tag}.integrability.{}", f.name()), "mixed derivatives anticommute", &pm.add(&mp)));
        let jet = s.reduce(&d(&d(&x, DM), DP));
        out.push(Check::zero(format!("backlund.{tag}.integrability.{}.jet", f.name()), "mixed jet agrees with the table", &jet.sub(&pm)));
    }
    for r in &s.table {
        let x = r.field.poly();
        let jet = rs.reduce(&d(&d(&x, r.deriv), r.deriv)).expect("terminates");
        let val = rs.reduce(&d(&r.rhs, r.deriv)).expect("terminates");
        let id = format!("backlund.{tag}.square.{}.{}", r.field.name(), r.deriv);
        out.push(Check::zero(id, "odd derivative squared through the table", &jet.sub(&val)));
    }
    let a = s.a_pow(1);
    out.push(Check::zero(format!("backlund.{tag}.constant"), "the parameter is constant", &d(&a, DP).add(&d(&a, DM))));
    out.push(Check::new(format!("backlund.{tag}.invertible"), "a times its inverse", a.mul(&s.a_pow(-1)) == GradedPoly::one()));
    // grading audit
    let ok = s.table.iter().all(|r| r.rhs.grade() == Some(r.field.grade() + r.deriv.grade()));
    out.push(Check::new(format!("backlund.{tag}.grading"), "every relation is grading homogeneous", ok));
    // D- Lambda carries exactly -1/a
    let (e0, c0) = (exp_of(&Lin::of(&s.v[0])).unwrap(), cosh_of(&Lin::of(&s.w[0])).unwrap());
    let expect = s.a_pow(-1).neg().mul(&e0).mul(&c0);
    out.push(Check::zero(format!("backlund.{tag}.inverse_coefficient"), "D- Lambda carries -1/a", &s.lookup(&s.lambda, DM).unwrap().sub(&expect)));
    // Gamma = 0, W = 0: no Gamma or W terms regenerate
    let mut ok = true;
    for r in s.table.iter().filter(|r| r.field == s.gamma || r.field == s.w[0] || r.field == s.w[1]) {
        let mut p = r.rhs.clone();
        for f in [&s.gamma, &s.w[0], &s.w[1]] {
            p = substitute(&p, f, &GradedPoly::zero()).expect("substitution");
        }
        ok &= p.is_zero();
    }
    out.push(Check::new(format!("backlund.{tag}.bosonic_reduction"), "the ungraded subsystem closes", ok));
    out
}

/// (J+, J-) for the four gradings 00, 11, 10, 01.
pub fn currents(s: &BacklundSystem) -> Vec<(&'static str, GradedPoly, GradedPoly)> {
    let (l, g) = (s.lambda.poly(), s.gamma.poly());
    let j00 = [s.lookup(&s.lambda, DM).unwrap().clone(), s.lookup(&s.lambda, DP).unwrap().clone()];
    let j11 = [s.lookup(&s.gamma, DM).unwrap().clone(), s.lookup(&s.gamma, DP).unwrap().clone()];
    let sg = [Scalar::one(), Scalar::from_int(-1)];
    let j10: Vec<GradedPoly> = (0..2).map(|k| j00[k].mul(&l).sub(&j11[k].mul(&g)).scale(&sg[k])).collect();
    let j01: Vec<GradedPoly> = (0..2).map(|k| j00[k].mul(&g).sub(&j11[k].mul(&l)).scale(&sg[k])).collect();
    vec![
        ("00", j00[0].clone(), j00[1].clone()),
        ("11", j11[0].clone(), j11[1].clone()),
        ("10", j10[0].clone(), j10[1].clone()),
        ("01", j01[0].clone(), j01[1].clone()),
    ]
}

pub fn verify_conservation(v: BacklundVariant) -> Vec<Check> {
    let s = BacklundSystem::new(v);
    let tag = v.name();
    let mut out = Vec::new();
    let (l, g) = (s.lambda.poly(), s.gamma.poly());
    let j00 = [s.lookup(&s.lambda, DM).unwrap(), s.lookup(&s.lambda, DP).unwrap()];
    let j11 = [s.lookup(&s.gamma, DM).unwrap(), s.lookup(&s.gamma, DP).unwrap()];
    for (k, dd) in [DP, DM].into_iter().enumerate() {
        let pm = ["plus", "minus"][k];
        let (a, b) = (s.reduce(&d(j00[k], dd)), s.reduce(&d(j11[k], dd)));
        out.push(Check::zero(format!("backlund.{tag}.auxiliary.first.{pm}"), "auxiliary current relation with Lambda", &a.mul(&l).sub(&b.mul(&g))));
        out.push(Check::zero(format!("backlund.{tag}.auxiliary.second.{pm}"), "auxiliary current relation with Gamma", &a.mul(&g).sub(&b.mul(&l))));
    }
    for (alpha, jp, jm) in currents(&s) {
        let r = s.reduce(&d(&jp, DP).add(&d(&jm, DM)));
        out.push(Check::zero(format!("backlund.{tag}.conservation.{alpha}"), "generalized current conservation", &r));
    }
    out
}

pub fn verify(v: BacklundVariant) -> Vec<Check> {
    let mut out = verify_backlund_implication(v);
    out.extend(verify_integrability_of_system(v));
    out.extend(verify_conservation(v));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_variants_verify() {
        for v in BacklundVariant::ALL {
            for c in verify(v) {
                assert!(c.passed(), "{} {:?}", c.id, c.residual);
            }
        }
    }

    #[test]
    fn lambda_lines_are_related_by_a_to_minus_inverse() {
        let s = BacklundSystem::new(BacklundVariant::Free);
        let m = s.lookup(&s.lambda, DM).unwrap();
        // a * (D- Lambda) * e^{-V+} = -cosh W+
        let p = s.a_pow(1).mul(m).mul(&exp_of(&Lin::term(&s.v[0], Q::int(-1))).unwrap());
        assert!(p.add(&cosh_of(&Lin::of(&s.w[0])).unwrap()).is_zero());
    }

    #[test]
    fn variant_names_round_trip() {
        for v in BacklundVariant::ALL {
            assert_eq!(BacklundVariant::parse(v.name()), Some(v));
        }
        assert_eq!(BacklundVariant::parse("other"), None);
    }
}
