//! Structure constants and graded brackets for the Z2xZ2-graded extension of
//! osp(1|2), for ordinary osp(1|2) and for their loop extensions.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::GradeVec;
use crate::report::Check;
use crate::ring::{Deriv, GradedPoly, RingResult};
use crate::scalar::{Q, Scalar};

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("elements belong to different bases: {0} and {1}")]
    BasisMismatch(String, String),
    #[error("unknown basis element `{0}`")]
    UnknownElement(String),
    #[error("malformed basis document: {0}")]
    Document(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub grade: GradeVec,
    /// Eigenvalue of the grading operator K0/2, when defined.
    pub dim: Q,
}

/// A finite basis with its bracket table. Loop bases reuse this table and
/// add powers of the spectral parameter.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    pub name: String,
    pub elements: Vec<BasisElement>,
    /// `table[(a, b)]` = bracket of elements a and b (only nonzero entries).
    table: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
}

fn s(re: i64) -> Scalar {
    Scalar::from_int(re)
}
fn si(im: i64) -> Scalar {
    Scalar::imag(im, 1)
}

impl AlgebraBasis {
    /// Builds a table from defining relations; reversed pairs follow from
    /// graded (anti)symmetry.
    fn from_relations(name: &str, elements: Vec<BasisElement>, rels: &[(&str, &str, Vec<(&str, Scalar)>)]) -> AlgebraBasis {
        let idx = |n: &str| elements.iter().position(|e| e.name == n).unwrap_or_else(|| panic!("unknown {n}"));
        let mut table: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        for (x, y, rhs) in rels {
            let (a, b) = (idx(x), idx(y));
            let v: Vec<(usize, Scalar)> = rhs.iter().map(|(n, c)| (idx(n), c.clone())).collect();
            let sign = -(elements[a].grade.sign(elements[b].grade) as i64);
            let rev: Vec<(usize, Scalar)> = v.iter().map(|(k, c)| (*k, c * &s(sign))).collect();
            table.insert((a, b), v);
            table.entry((b, a)).or_insert(rev);
        }
        AlgebraBasis { name: name.into(), elements, table }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.elements.iter().position(|e| e.name == name).ok_or_else(|| AlgebraError::UnknownElement(name.into()))
    }

    pub fn grade(&self, k: usize) -> GradeVec {
        self.elements[k].grade
    }

    /// Bracket of two basis elements as (index, coefficient) pairs.
    pub fn structure(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        self.table.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Bracket of basis elements as a dense scalar vector.
    pub fn bracket_vec(&self, a: usize, b: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.len()];
        for (k, c) in self.structure(a, b) {
            v[*k] = &v[*k] + c;
        }
        v
    }

    /// The Z2xZ2-graded extension of osp(1|2), ten generators.
    pub fn g() -> Arc<AlgebraBasis> {
        static CELL: OnceLock<Arc<AlgebraBasis>> = OnceLock::new();
        CELL.get_or_init(|| Arc::new(build_g())).clone()
    }

    /// Ordinary osp(1|2) with its Z2 grading embedded as [00], [10].
    pub fn osp12() -> Arc<AlgebraBasis> {
        static CELL: OnceLock<Arc<AlgebraBasis>> = OnceLock::new();
        CELL.get_or_init(|| Arc::new(build_osp())).clone()
    }

    pub fn to_document(&self) -> BasisDocument {
        BasisDocument {
            name: self.name.clone(),
            elements: self
                .elements
                .iter()
                .map(|e| ElementDoc { name: e.name.clone(), grade: e.grade.to_string(), dim: e.dim.to_string() })
                .collect(),
            brackets: self
                .table
                .iter()
                .map(|((a, b), v)| BracketDoc {
                    left: self.elements[*a].name.clone(),
                    right: self.elements[*b].name.clone(),
                    result: v.iter().map(|(k, c)| (self.elements[*k].name.clone(), c.to_string())).collect(),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &BasisDocument) -> Result<AlgebraBasis, AlgebraError> {
        let bad = |m: String| AlgebraError::Document(m);
        let elements = doc
            .elements
            .iter()
            .map(|e| {
                Ok(BasisElement {
                    name: e.name.clone(),
                    grade: GradeVec::parse(&e.grade).ok_or_else(|| bad(format!("grade `{}`", e.grade)))?,
                    dim: e.dim.parse().map_err(|_| bad(format!("dimension `{}`", e.dim)))?,
                })
            })
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        let idx = |n: &str| elements.iter().position(|e| e.name == n).ok_or_else(|| AlgebraError::UnknownElement(n.into()));
        let mut table = BTreeMap::new();
        for br in &doc.brackets {
            let v = br
                .result
                .iter()
                .map(|(n, c)| Ok((idx(n)?, c.parse::<Scalar>().map_err(|_| bad(format!("coefficient `{c}`")))?)))
                .collect::<Result<Vec<_>, AlgebraError>>()?;
            table.insert((idx(&br.left)?, idx(&br.right)?), v);
        }
        Ok(AlgebraBasis { name: doc.name.clone(), elements, table })
    }
}

/// JSON form of a basis and its structure constants.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BasisDocument {
    pub name: String,
    pub elements: Vec<ElementDoc>,
    pub brackets: Vec<BracketDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ElementDoc {
    pub name: String,
    pub grade: String,
    pub dim: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BracketDoc {
    pub left: String,
    pub right: String,
    pub result: Vec<(String, String)>,
}

fn el(name: &str, grade: GradeVec, dim: Q) -> BasisElement {
    BasisElement { name: name.into(), grade, dim }
}

fn build_g() -> AlgebraBasis {
    use GradeVec as G;
    let h = |n| Q::new(n, 2);
    let elements = vec![
        el("K0", G::G00, Q::zero()),
        el("K+", G::G00, Q::one()),
        el("K-", G::G00, Q::int(-1)),
        el("L0", G::G11, Q::zero()),
        el("L+", G::G11, Q::one()),
        el("L-", G::G11, Q::int(-1)),
        el("P+", G::G10, h(1)),
        el("P-", G::G10, h(-1)),
        el("Q+", G::G01, h(1)),
        el("Q-", G::G01, h(-1)),
    ];
    let rels = vec![
        ("K0", "K+", vec![("K+", s(2))]),
        ("K0", "K-", vec![("K-", s(-2))]),
        ("K+", "K-", vec![("K0", s(1))]),
        ("L0", "L+", vec![("K+", s(2))]),
        ("L0", "L-", vec![("K-", s(-2))]),
        ("L+", "L-", vec![("K0", s(1))]),
        ("K0", "L+", vec![("L+", s(2))]),
        ("K0", "L-", vec![("L-", s(-2))]),
        ("K+", "L-", vec![("L0", s(1))]),
        ("K-", "L+", vec![("L0", s(-1))]),
        ("L0", "K+", vec![("L+", s(2))]),
        ("L0", "K-", vec![("L-", s(-2))]),
        ("K0", "P+", vec![("P+", s(1))]),
        ("K0", "P-", vec![("P-", s(-1))]),
        ("K+", "P-", vec![("P+", s(-1))]),
        ("K-", "P+", vec![("P-", s(-1))]),
        ("K0", "Q+", vec![("Q+", s(1))]),
        ("K0", "Q-", vec![("Q-", s(-1))]),
        ("K+", "Q-", vec![("Q+", s(-1))]),
        ("K-", "Q+", vec![("Q-", s(-1))]),
        ("P+", "L0", vec![("Q+", si(1))]),
        ("P-", "L0", vec![("Q-", si(-1))]),
        ("P+", "L-", vec![("Q-", si(-1))]),
        ("P-", "L+", vec![("Q+", si(-1))]),
        ("Q+", "L0", vec![("P+", si(-1))]),
        ("Q-", "L0", vec![("P-", si(1))]),
        ("Q+", "L-", vec![("P-", si(1))]),
        ("Q-", "L+", vec![("P+", si(1))]),
        ("P+", "P+", vec![("K+", s(2))]),
        ("P-", "P-", vec![("K-", s(-2))]),
        ("P+", "P-", vec![("K0", s(1))]),
        ("P+", "Q+", vec![("L+", si(2))]),
        ("P-", "Q-", vec![("L-", si(-2))]),
        ("P+", "Q-", vec![("L0", si(1))]),
        ("P-", "Q+", vec![("L0", si(1))]),
        ("Q+", "Q+", vec![("K+", s(2))]),
        ("Q-", "Q-", vec![("K-", s(-2))]),
        ("Q+", "Q-", vec![("K0", s(1))]),
    ];
    AlgebraBasis::from_relations("g", elements, &rels)
}

fn build_osp() -> AlgebraBasis {
    use GradeVec as G;
    let elements = vec![
        el("H", G::G00, Q::zero()),
        el("E+", G::G00, Q::one()),
        el("E-", G::G00, Q::int(-1)),
        el("F+", G::G10, Q::new(1, 2)),
        el("F-", G::G10, Q::new(-1, 2)),
    ];
    let rels = vec![
        ("H", "E+", vec![("E+", s(2))]),
        ("H", "E-", vec![("E-", s(-2))]),
        ("E+", "E-", vec![("H", s(1))]),
        ("H", "F+", vec![("F+", s(1))]),
        ("H", "F-", vec![("F-", s(-1))]),
        ("F+", "F-", vec![("H", s(1))]),
        ("F+", "F+", vec![("E+", s(2))]),
        ("F-", "F-", vec![("E-", s(-2))]),
        ("E+", "F-", vec![("F+", s(-1))]),
        ("E-", "F+", vec![("F-", s(-1))]),
    ];
    AlgebraBasis::from_relations("osp(1|2)", elements, &rels)
}

/// Key of a (possibly loop) basis element: index and power of the spectral parameter.
pub type Key = (usize, i32);

/// Algebra element with ring coefficients: sum of coefficient * lambda^n * X.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    pub basis: Arc<AlgebraBasis>,
    pub terms: BTreeMap<Key, GradedPoly>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &AlgebraElement) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl AlgebraElement {
    pub fn zero(basis: &Arc<AlgebraBasis>) -> AlgebraElement {
        AlgebraElement { basis: basis.clone(), terms: BTreeMap::new() }
    }

    /// `coef * name`, spectral power 0.
    pub fn term(basis: &Arc<AlgebraBasis>, name: &str, coef: GradedPoly) -> AlgebraElement {
        AlgebraElement::loop_term(basis, name, 0, coef)
    }

    pub fn loop_term(basis: &Arc<AlgebraBasis>, name: &str, power: i32, coef: GradedPoly) -> AlgebraElement {
        let k = basis.index(name).expect("known basis element");
        let mut e = AlgebraElement::zero(basis);
        e.add_at((k, power), &coef);
        e
    }

    pub fn basis_element(basis: &Arc<AlgebraBasis>, name: &str) -> AlgebraElement {
        AlgebraElement::term(basis, name, GradedPoly::one())
    }

    fn add_at(&mut self, k: Key, p: &GradedPoly) {
        if p.is_empty() {
            return;
        }
        let e = self.terms.entry(k).or_default();
        e.add_assign(p);
        if e.is_empty() {
            self.terms.remove(&k);
        }
    }

    fn check_basis(&self, other: &AlgebraElement) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis.name == other.basis.name {
            Ok(())
        } else {
            Err(AlgebraError::BasisMismatch(self.basis.name.clone(), other.basis.name.clone()))
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_basis(other)?;
        let mut r = self.clone();
        for (k, p) in &other.terms {
            r.add_at(*k, p);
        }
        Ok(r)
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        AlgebraElement { basis: self.basis.clone(), terms: self.terms.iter().map(|(k, p)| (*k, p.scale(c))).filter(|(_, p)| !p.is_empty()).collect() }
    }

    /// Left multiplication of every coefficient by `p`.
    pub fn left_mul(&self, p: &GradedPoly) -> AlgebraElement {
        let mut r = AlgebraElement::zero(&self.basis);
        for (k, q) in &self.terms {
            r.add_at(*k, &p.mul(q));
        }
        r
    }

    pub fn coeff(&self, name: &str) -> GradedPoly {
        self.coeff_at(name, 0)
    }

    pub fn coeff_at(&self, name: &str, power: i32) -> GradedPoly {
        let k = self.basis.index(name).expect("known basis element");
        self.terms.get(&(k, power)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(GradedPoly::is_zero)
    }

    /// Maps every coefficient.
    pub fn map<F: FnMut(&GradedPoly) -> RingResult<GradedPoly>>(&self, mut f: F) -> RingResult<AlgebraElement> {
        let mut r = AlgebraElement::zero(&self.basis);
        for (k, p) in &self.terms {
            r.add_at(*k, &f(p)?);
        }
        Ok(r)
    }

    /// D(p X) = (D p) X.
    pub fn apply(&self, d: Deriv) -> RingResult<AlgebraElement> {
        self.map(|p| p.apply(d))
    }

    /// Total grading if homogeneous.
    pub fn grade(&self) -> Option<GradeVec> {
        let mut g = None;
        for ((k, _), p) in &self.terms {
            for (m, _) in p.terms() {
                let t = crate::ring::mono_grade(m) + self.basis.grade(*k);
                match g {
                    None => g = Some(t),
                    Some(h) if h != t => return None,
                    _ => {}
                }
            }
        }
        g
    }

    /// Graded bracket, bilinear over ring coefficients:
    /// [[p X, q Y]] = sign(deg X, deg q) p q [[X, Y]], spectral powers add.
    pub fn bracket(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_basis(other)?;
        let basis = &self.basis;
        let mut r = AlgebraElement::zero(basis);
        for ((a, m), p) in &self.terms {
            for ((b, n), q) in &other.terms {
                let st = basis.structure(*a, *b);
                if st.is_empty() {
                    continue;
                }
                let mut pq = GradedPoly::zero();
                for (mono, c) in q.terms() {
                    let sg = basis.grade(*a).sign(crate::ring::mono_grade(mono));
                    pq.add_assign(&GradedPoly::from_mono(mono.clone(), c * &Scalar::from_int(sg as i64)));
                }
                let pq = p.mul(&pq);
                for (k, c) in st {
                    r.add_at((*k, m + n), &pq.scale(c));
                }
            }
        }
        Ok(r)
    }

    /// Canonical text: `coef*X` or `coef*lambda^n*X` per term.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((k, n), p)| {
                let name = &self.basis.elements[*k].name;
                if *n == 0 {
                    format!("[{p}]*{name}")
                } else {
                    format!("[{p}]*lambda^{n}*{name}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Dense bracket of two basis elements of a scalar algebra, with spectral powers.
fn dense_bracket(basis: &AlgebraBasis, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let n = basis.len();
    let mut out = vec![Scalar::zero(); n];
    for a in 0..n {
        if x[a].is_zero() {
            continue;
        }
        for b in 0..n {
            if y[b].is_zero() {
                continue;
            }
            let c = &x[a] * &y[b];
            for (k, v) in basis.structure(a, b) {
                out[*k] = &out[*k] + &(&c * v);
            }
        }
    }
    out
}

fn unit(n: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[k] = Scalar::one();
    v
}

/// Graded Jacobi sum for basis elements a, b, c.
pub fn jacobi_sum(basis: &AlgebraBasis, a: usize, b: usize, c: usize) -> Vec<Scalar> {
    let n = basis.len();
    let (ga, gb, gc) = (basis.grade(a), basis.grade(b), basis.grade(c));
    let ea = unit(n, a);
    let eb = unit(n, b);
    let ec = unit(n, c);
    let t1 = dense_bracket(basis, &ea, &dense_bracket(basis, &eb, &ec));
    let t2 = dense_bracket(basis, &eb, &dense_bracket(basis, &ec, &ea));
    let t3 = dense_bracket(basis, &ec, &dense_bracket(basis, &ea, &eb));
    let (s1, s2, s3) = (s(ga.sign(gc) as i64), s(gb.sign(ga) as i64), s(gc.sign(gb) as i64));
    (0..n).map(|k| &(&(&s1 * &t1[k]) + &(&s2 * &t2[k])) + &(&s3 * &t3[k])).collect()
}

/// All ordered triples; returns the failing triples by name.
pub fn check_jacobi(basis: &AlgebraBasis) -> (usize, Vec<String>) {
    let n = basis.len();
    let mut fails = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if jacobi_sum(basis, a, b, c).iter().any(|x| !x.is_zero()) {
                    let e = &basis.elements;
                    fails.push(format!("({}, {}, {})", e[a].name, e[b].name, e[c].name));
                }
            }
        }
    }
    (n * n * n, fails)
}

/// Graded (anti)symmetry and grading closure for all ordered pairs.
pub fn check_symmetry(basis: &AlgebraBasis) -> (usize, Vec<String>) {
    let n = basis.len();
    let mut fails = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let ab = basis.bracket_vec(a, b);
            let ba = basis.bracket_vec(b, a);
            let sg = s(-(basis.grade(a).sign(basis.grade(b)) as i64));
            let sym = ab.iter().zip(&ba).all(|(x, y)| (x - &(&sg * y)).is_zero());
            let target = basis.grade(a) + basis.grade(b);
            let closed = ab.iter().enumerate().all(|(k, x)| x.is_zero() || basis.grade(k) == target);
            if !(sym && closed) {
                fails.push(format!("({}, {})", basis.elements[a].name, basis.elements[b].name));
            }
        }
    }
    (n * n, fails)
}

/// [[K0/2, X]] = dim(X) X for every basis element.
pub fn check_dimensions(basis: &AlgebraBasis, cartan: &str) -> Result<Vec<String>, AlgebraError> {
    let h = basis.index(cartan)?;
    let mut fails = Vec::new();
    for x in 0..basis.len() {
        let v = basis.bracket_vec(h, x);
        let want = Scalar::from_q(&basis.elements[x].dim * &Q::int(2));
        let ok = v.iter().enumerate().all(|(k, c)| if k == x { *c == want } else { c.is_zero() });
        if !ok {
            fails.push(basis.elements[x].name.clone());
        }
    }
    Ok(fails)
}

/// Loop extension restricted to |n| <= window: Jacobi and symmetry over all
/// triples. Powers add, so the check reduces to the finite table with
/// independent power bookkeeping; it is still run element by element.
pub fn check_loop(basis: &Arc<AlgebraBasis>, window: i32) -> (usize, Vec<String>) {
    let n = basis.len();
    let mut count = 0;
    let mut fails = Vec::new();
    let el = |k: usize, p: i32| AlgebraElement { basis: basis.clone(), terms: [((k, p), GradedPoly::one())].into_iter().collect() };
    let powers: Vec<i32> = (-window..=window).collect();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for &pa in &powers {
                    for &pb in &powers {
                        let pc = -pa - pb + (pa % 2);
                        if pc.abs() > window {
                            continue;
                        }
                        count += 1;
                        let (x, y, z) = (el(a, pa), el(b, pb), el(c, pc));
                        let (ga, gb, gc) = (basis.grade(a), basis.grade(b), basis.grade(c));
                        let br = |u: &AlgebraElement, v: &AlgebraElement| u.bracket(v).expect("same basis");
                        let t1 = br(&x, &br(&y, &z)).scale(&s(ga.sign(gc) as i64));
                        let t2 = br(&y, &br(&z, &x)).scale(&s(gb.sign(ga) as i64));
                        let t3 = br(&z, &br(&x, &y)).scale(&s(gc.sign(gb) as i64));
                        let sum = t1.add(&t2).and_then(|t| t.add(&t3)).expect("same basis");
                        let anti = br(&x, &y).add(&br(&y, &x).scale(&s(ga.sign(gb) as i64))).expect("same basis");
                        if !sum.is_zero() || !anti.is_zero() {
                            fails.push(format!("({}@{pa}, {}@{pb}, {}@{pc})", basis.elements[a].name, basis.elements[b].name, basis.elements[c].name));
                        }
                    }
                }
            }
        }
    }
    (count, fails)
}

fn summary(id: &str, anchor: &str, total: usize, fails: &[String]) -> Check {
    let c = Check::new(id, anchor, fails.is_empty()).with_note(format!("{} cases, {} failures", total, fails.len()));
    if fails.is_empty() {
        c
    } else {
        c.with_residual(fails.iter().take(10).cloned().collect::<Vec<_>>().join(", "))
    }
}

/// Full algebra suite.
pub fn verify() -> Vec<Check> {
    let g = AlgebraBasis::g();
    let osp = AlgebraBasis::osp12();
    let mut out = Vec::new();
    let (n, f) = check_jacobi(&g);
    out.push(summary("algebra.g.jacobi", "graded Jacobi identity", n, &f));
    let (n, f) = check_symmetry(&g);
    out.push(summary("algebra.g.symmetry", "graded (anti)symmetry and grading closure", n, &f));
    let f = check_dimensions(&g, "K0").expect("K0 present");
    out.push(summary("algebra.g.dimensions", "scaling dimensions from K0/2", g.len(), &f));
    let (n, f) = check_jacobi(&osp);
    out.push(summary("algebra.osp.jacobi", "graded Jacobi identity", n, &f));
    let (n, f) = check_symmetry(&osp);
    out.push(summary("algebra.osp.symmetry", "graded (anti)symmetry and grading closure", n, &f));
    let f = check_dimensions(&osp, "H").expect("H present");
    out.push(summary("algebra.osp.dimensions", "scaling dimensions from H/2", osp.len(), &f));
    let (n, f) = check_loop(&g, 3);
    out.push(summary("algebra.loop.axioms", "loop extension, powers within 3", n, &f));
    // triangular decomposition: positive and negative parts are subalgebras
    let parts: [(&str, &[&str]); 3] = [
        ("positive", &["K+", "P+", "Q+", "L+"]),
        ("cartan", &["K0", "L0"]),
        ("negative", &["K-", "P-", "Q-", "L-"]),
    ];
    for (label, names) in parts {
        let idx: Vec<usize> = names.iter().map(|n| g.index(n).expect("known")).collect();
        let closed = idx.iter().all(|&a| idx.iter().all(|&b| g.structure(a, b).iter().all(|(k, _)| idx.contains(k))));
        out.push(Check::new(format!("algebra.g.triangular.{label}"), "triangular decomposition", closed));
    }
    // even sector [00]+[11] and the K sector are closed
    let even: Vec<usize> = (0..g.len()).filter(|&k| !g.grade(k).is_odd_type()).collect();
    let ks: Vec<usize> = ["K0", "K+", "K-"].iter().map(|n| g.index(n).expect("known")).collect();
    for (label, set) in [("even", &even), ("k", &ks)] {
        let closed = set.iter().all(|&a| set.iter().all(|&b| g.structure(a, b).iter().all(|(k, _)| set.contains(k))));
        out.push(Check::new(format!("algebra.g.subalgebra.{label}"), "closed subalgebra", closed));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(a: &str, b: &str) -> Vec<(String, Scalar)> {
        let g = AlgebraBasis::g();
        let (x, y) = (g.index(a).unwrap(), g.index(b).unwrap());
        g.structure(x, y).iter().map(|(k, c)| (g.elements[*k].name.clone(), c.clone())).collect()
    }

    #[test]
    fn sample_brackets() {
        assert_eq!(br("P+", "P+"), vec![("K+".to_string(), s(2))]);
        assert_eq!(br("P+", "Q-"), vec![("L0".to_string(), si(1))]);
        assert!(br("K+", "K+").is_empty());
        // reversed pair from the symmetry rule
        assert_eq!(br("Q+", "P+"), vec![("L+".to_string(), si(-2))]);
        assert_eq!(br("L0", "P+"), vec![("Q+".to_string(), si(1))]);
    }

    #[test]
    fn axioms_hold() {
        for b in [AlgebraBasis::g(), AlgebraBasis::osp12()] {
            assert!(check_jacobi(&b).1.is_empty(), "{}", b.name);
            assert!(check_symmetry(&b).1.is_empty(), "{}", b.name);
        }
        assert!(check_dimensions(&AlgebraBasis::g(), "K0").unwrap().is_empty());
    }

    #[test]
    fn specific_jacobi_triples() {
        let g = AlgebraBasis::g();
        for (a, b, c) in [("P+", "Q+", "L0"), ("K0", "K+", "K-")] {
            let v = jacobi_sum(&g, g.index(a).unwrap(), g.index(b).unwrap(), g.index(c).unwrap());
            assert!(v.iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut doc = AlgebraBasis::g().to_document();
        let e = doc.brackets.iter_mut().find(|b| b.left == "P+" && b.right == "Q+").unwrap();
        e.result[0].1 = "i".into();
        let bad = AlgebraBasis::from_document(&doc).unwrap();
        assert!(!check_jacobi(&bad).1.is_empty() || !check_symmetry(&bad).1.is_empty());
    }

    #[test]
    fn document_round_trip() {
        let doc = AlgebraBasis::g().to_document();
        let json = serde_json::to_string(&doc).unwrap();
        let back: BasisDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
        let b = AlgebraBasis::from_document(&back).unwrap();
        assert!(check_jacobi(&b).1.is_empty());
    }

    #[test]
    fn ring_coefficient_bracket_sign() {
        use crate::ring::Field;
        let g = AlgebraBasis::g();
        let psi = Field::superfield("psi", GradeVec::G10).poly();
        let chi = Field::superfield("chi", GradeVec::G10).poly();
        let x = AlgebraElement::term(&g, "P+", psi.clone());
        let y = AlgebraElement::term(&g, "P-", chi.clone());
        // [[psi P+, chi P-]] = sign(P+, chi) psi chi K0 = -psi chi K0
        let r = x.bracket(&y).unwrap();
        assert_eq!(r.coeff("K0"), psi.mul(&chi).neg());
        assert_eq!(r.grade(), Some(GradeVec::G00));
    }

    #[test]
    fn loop_powers_add() {
        let g = AlgebraBasis::g();
        let x = AlgebraElement::loop_term(&g, "K+", 2, GradedPoly::one());
        let y = AlgebraElement::loop_term(&g, "K-", -2, GradedPoly::one());
        assert_eq!(x.bracket(&y).unwrap().coeff_at("K0", 0), GradedPoly::one());
    }
}
