//! Component fields of the super-Liouville superfields and their equations
//! of motion, with d = d+ and dbar = d-.

use crate::grading::GradeVec;
use crate::ring::{cosh_of, exp_of, sinh_of, substitute, Deriv, Field, GradedPoly, Lin, RewriteSystem, Rule};
use crate::scalar::{Q, Scalar};

#[derive(Clone, Debug)]
pub struct Components {
    pub phi00: Field,
    pub phi11: Field,
    pub psi10: Field,
    pub psi01: Field,
    pub psibar10: Field,
    pub psibar01: Field,
    pub f00: Field,
    pub f11: Field,
}

impl Default for Components {
    fn default() -> Components {
        Components::new()
    }
}

fn d(p: &GradedPoly, ds: &[Deriv]) -> GradedPoly {
    p.apply_seq(ds).expect("component derivative")
}

impl Components {
    pub fn new() -> Components {
        use GradeVec as G;
        Components {
            phi00: Field::component("phi00", G::G00),
            phi11: Field::component("phi11", G::G11),
            psi10: Field::component("psi10", G::G10),
            psi01: Field::component("psi01", G::G01),
            psibar10: Field::component("psibar10", G::G10),
            psibar01: Field::component("psibar01", G::G01),
            f00: Field::component("F00", G::G00),
            f11: Field::component("F11", G::G11),
        }
    }

    /// e^{q phi00}.
    pub fn exp(&self, q: i64) -> GradedPoly {
        exp_of(&Lin::term(&self.phi00, Q::int(q))).expect("[00] argument")
    }
    /// cosh(q phi11).
    pub fn ch(&self, q: i64) -> GradedPoly {
        cosh_of(&Lin::term(&self.phi11, Q::int(q))).expect("[11] argument")
    }
    /// sinh(q phi11).
    pub fn sh(&self, q: i64) -> GradedPoly {
        sinh_of(&Lin::term(&self.phi11, Q::int(q))).expect("[11] argument")
    }

    fn p(&self, f: &Field) -> GradedPoly {
        f.poly()
    }

    /// Fermion bilinears: (psi10 psibar10 - psi01 psibar01, psi10 psibar01 - psi01 psibar10).
    pub fn bilinears(&self) -> (GradedPoly, GradedPoly) {
        let (a, b, ab, bb) = (self.p(&self.psi10), self.p(&self.psi01), self.p(&self.psibar10), self.p(&self.psibar01));
        (a.mul(&ab).sub(&b.mul(&bb)), a.mul(&bb).sub(&b.mul(&ab)))
    }

    /// Right-hand sides of the fermion equations, as values of
    /// (d- psi10, d- psi01, d+ psibar10, d+ psibar01).
    pub fn fermion_rhs(&self) -> [GradedPoly; 4] {
        let (e, c, s) = (self.exp(1), self.ch(1), self.sh(1));
        let mi = Scalar::imag(-1, 1);
        let (a, b, ab, bb) = (self.p(&self.psi10), self.p(&self.psi01), self.p(&self.psibar10), self.p(&self.psibar01));
        let f = |x: &GradedPoly, y: &GradedPoly| e.mul(&c.mul(x).sub(&s.mul(y))).scale(&mi);
        [f(&ab.neg(), &bb.neg()), f(&bb.neg(), &ab.neg()), f(&a, &b), f(&b, &a)]
    }

    /// Right-hand sides of d+ d- phi00 and d+ d- phi11 with auxiliaries eliminated.
    pub fn boson_rhs(&self) -> [GradedPoly; 2] {
        let (e, c, s) = (self.exp(1), self.ch(1), self.sh(1));
        let (b1, b2) = self.bilinears();
        let r00 = self.exp(2).mul(&self.ch(2)).add(&e.mul(&c.mul(&b1).add(&s.mul(&b2))));
        let r11 = self.exp(2).mul(&self.sh(2)).add(&e.mul(&c.mul(&b2).add(&s.mul(&b1))));
        [r00, r11]
    }

    /// Auxiliary values (F00, F11).
    pub fn aux_values(&self) -> [GradedPoly; 2] {
        let e = self.exp(1);
        [e.mul(&self.ch(1)).neg(), e.mul(&self.sh(1)).neg()]
    }

    /// The eight component equations as residuals, auxiliaries kept.
    pub fn equations(&self) -> Vec<(&'static str, GradedPoly)> {
        use Deriv::{PartialMinus as Dm, PartialPlus as Dp};
        let (e, c, s) = (self.exp(1), self.ch(1), self.sh(1));
        let (b1, b2) = self.bilinears();
        let (f00, f11) = (self.p(&self.f00), self.p(&self.f11));
        let i = Scalar::i();
        let fr = self.fermion_rhs();
        let boson = |phi: &Field, x: &GradedPoly, y: &GradedPoly| d(&phi.poly(), &[Dp, Dm]).sub(&e.mul(&c.mul(x).add(&s.mul(y))));
        let ferm = |f: &Field, dd: Deriv, k: usize| d(&f.poly(), &[dd]).sub(&fr[k]).scale(&i);
        vec![
            ("boson phi00", boson(&self.phi00, &b1.sub(&f00), &b2.sub(&f11))),
            ("fermion psi10", ferm(&self.psi10, Dm, 0)),
            ("fermion psibar10", ferm(&self.psibar10, Dp, 2)),
            ("auxiliary F00", f00.sub(&self.aux_values()[0])),
            ("boson phi11", boson(&self.phi11, &b2.sub(&f11), &b1.sub(&f00))),
            ("fermion psi01", ferm(&self.psi01, Dm, 1)),
            ("fermion psibar01", ferm(&self.psibar01, Dp, 3)),
            ("auxiliary F11", f11.sub(&self.aux_values()[1])),
        ]
    }

    /// Replaces F00 and F11 by their on-shell values.
    pub fn eliminate_aux(&self, p: &GradedPoly) -> GradedPoly {
        let [a, b] = self.aux_values();
        let p = substitute(p, &self.f00, &a).expect("auxiliary substitution");
        substitute(&p, &self.f11, &b).expect("auxiliary substitution")
    }

    /// Rules d+d- phi -> rhs, d- psi -> rhs, d+ psibar -> rhs.
    pub fn rules(&self) -> RewriteSystem {
        let [r00, r11] = self.boson_rhs();
        let [a, b, ab, bb] = self.fermion_rhs();
        RewriteSystem::new()
            .with(Rule::Partial { field: self.phi00.clone(), a0: 1, b0: 1, rhs: r00 })
            .with(Rule::Partial { field: self.phi11.clone(), a0: 1, b0: 1, rhs: r11 })
            .with(Rule::Partial { field: self.psi10.clone(), a0: 0, b0: 1, rhs: a })
            .with(Rule::Partial { field: self.psi01.clone(), a0: 0, b0: 1, rhs: b })
            .with(Rule::Partial { field: self.psibar10.clone(), a0: 1, b0: 0, rhs: ab })
            .with(Rule::Partial { field: self.psibar01.clone(), a0: 1, b0: 0, rhs: bb })
    }

    /// Full on-shell reduction: auxiliaries eliminated, then rules applied.
    pub fn on_shell(&self, p: &GradedPoly) -> GradedPoly {
        self.rules().reduce(&self.eliminate_aux(p)).expect("component rules terminate")
    }

    /// Finds an equation E and constant c with sector = c E. Tries the
    /// equations as written, then with auxiliaries eliminated on both sides.
    pub fn match_equation(&self, sector: &GradedPoly) -> Option<(&'static str, Scalar)> {
        let eqs = self.equations();
        let elim_sector = self.eliminate_aux(sector);
        let try_match = proportional;
        for (name, e) in &eqs {
            if let Some(c) = try_match(sector, e) {
                return Some((name, c));
            }
        }
        for (name, e) in &eqs {
            let ee = self.eliminate_aux(e);
            if ee.is_zero() {
                continue;
            }
            if let Some(c) = try_match(&elim_sector, &ee) {
                return Some((name, c));
            }
        }
        None
    }
}

/// Constant c with s = c e, if one exists and is nonzero.
pub fn proportional(s: &GradedPoly, e: &GradedPoly) -> Option<Scalar> {
    let (m, a) = e.terms().next()?;
    let c = &s.coeff(m) / a;
    (!c.is_zero() && s.sub(&e.scale(&c)).is_zero()).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equations_vanish_on_shell() {
        let c = Components::new();
        for (name, e) in c.equations() {
            assert!(c.on_shell(&e).is_zero(), "{name}");
        }
    }

    #[test]
    fn elimination_gives_double_angle() {
        let c = Components::new();
        let [a, b] = c.aux_values();
        // -(cosh F00 + sinh F11) e^phi = e^{2 phi} cosh 2 phi11
        let lhs = c.exp(1).mul(&c.ch(1).mul(&a).add(&c.sh(1).mul(&b))).neg();
        assert!(lhs.sub(&c.exp(2).mul(&c.ch(2))).is_zero());
    }

    #[test]
    fn match_recovers_scaled_equation() {
        let c = Components::new();
        let e = &c.equations()[2].1;
        let (name, k) = c.match_equation(&e.scale(&Scalar::imag(3, 1))).unwrap();
        assert_eq!(name, "fermion psibar10");
        assert_eq!(k, Scalar::imag(3, 1));
    }
}
