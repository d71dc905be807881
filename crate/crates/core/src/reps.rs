//! Matrix realizations: the M-algebra, the fundamental of osp(1|2), the
//! 12x12 tensor realization of the graded algebra and its six-dimensional
//! lowest weight representation.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{Map, Value};

use crate::algebra::{AlgebraBasis, AlgebraElement};
use crate::grading::GradeVec;
use crate::matrix::{scalar_rank, GradedMatrix};
use crate::report::Check;
use crate::ring::{mono_grade, GradedPoly};
use crate::scalar::Scalar;

pub type MatrixSet = BTreeMap<String, GradedMatrix>;

fn c(re: i64, im: i64) -> Scalar {
    &Scalar::from_int(re) + &Scalar::imag(im, 1)
}

fn m2(a: [Scalar; 4]) -> GradedMatrix {
    GradedMatrix::from_scalars(2, 2, &a)
}

pub fn identity2() -> GradedMatrix {
    GradedMatrix::identity(2)
}
pub fn sigma1() -> GradedMatrix {
    m2([c(0, 0), c(1, 0), c(1, 0), c(0, 0)])
}
pub fn sigma2() -> GradedMatrix {
    m2([c(0, 0), c(0, -1), c(0, 1), c(0, 0)])
}
pub fn sigma3() -> GradedMatrix {
    m2([c(1, 0), c(0, 0), c(0, 0), c(-1, 0)])
}
pub fn sigma_plus() -> GradedMatrix {
    GradedMatrix::from_ints(2, 2, &[0, 1, 0, 0])
}
pub fn sigma_minus() -> GradedMatrix {
    GradedMatrix::from_ints(2, 2, &[0, 0, 1, 0])
}
pub fn sigma11() -> GradedMatrix {
    GradedMatrix::from_ints(2, 2, &[1, 0, 0, 0])
}
pub fn sigma22() -> GradedMatrix {
    GradedMatrix::from_ints(2, 2, &[0, 0, 0, 1])
}

/// The four 4x4 matrices M0..M3.
pub fn m_matrices() -> [GradedMatrix; 4] {
    [
        identity2().kron(&identity2()),
        identity2().kron(&sigma1()),
        sigma1().kron(&sigma2()),
        sigma1().kron(&sigma3()),
    ]
}

/// Grading attached to M_k.
pub const M_GRADES: [GradeVec; 4] = [GradeVec::G00, GradeVec::G10, GradeVec::G01, GradeVec::G11];

/// M_i M_j = delta_ij M0 + i eps_ijk M_k as (coefficient, index).
pub fn m_structure(i: usize, j: usize) -> (Scalar, usize) {
    match (i, j) {
        (0, k) | (k, 0) => (Scalar::one(), k),
        (a, b) if a == b => (Scalar::one(), 0),
        (a, b) => {
            let k = 6 - a - b;
            let even = matches!((a, b), (1, 2) | (2, 3) | (3, 1));
            (Scalar::imag(if even { 1 } else { -1 }, 1), k)
        }
    }
}

/// Explicit 4x4 product M_i M_j.
pub fn m_algebra_product(i: usize, j: usize) -> GradedMatrix {
    let m = m_matrices();
    m[i].mul(&m[j]).expect("4x4")
}

/// 3x3 fundamental of osp(1|2) on (v0, v1, v2), derived from the module action.
pub fn build_fundamental_osp() -> MatrixSet {
    let h = GradedMatrix::diag(&[c(-1, 0), c(0, 0), c(1, 0)]);
    let mut fp = GradedMatrix::zeros(3, 3);
    fp.set(1, 0, GradedPoly::one());
    fp.set(2, 1, GradedPoly::one());
    let mut fm = GradedMatrix::zeros(3, 3);
    fm.set(0, 1, GradedPoly::int(-1));
    fm.set(1, 2, GradedPoly::one());
    // {F+,F+} = 2E+ and {F-,F-} = -2E-
    let ep = fp.mul(&fp).expect("3x3");
    let em = fm.mul(&fm).expect("3x3").scale(&c(-1, 0));
    [("H", h), ("E+", ep), ("E-", em), ("F+", fp), ("F-", fm)].into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// K = M0 x osp, P = M1 x F, Q = M2 x F, L = M3 x osp.
pub fn build_tensor_realization() -> MatrixSet {
    let f = build_fundamental_osp();
    let m = m_matrices();
    let table = [
        ("K0", 0, "H"),
        ("K+", 0, "E+"),
        ("K-", 0, "E-"),
        ("L0", 3, "H"),
        ("L+", 3, "E+"),
        ("L-", 3, "E-"),
        ("P+", 1, "F+"),
        ("P-", 1, "F-"),
        ("Q+", 2, "F+"),
        ("Q-", 2, "F-"),
    ];
    table.iter().map(|(n, k, o)| (n.to_string(), m[*k].kron(&f[*o]))).collect()
}

/// Names, gradings and tensor content (M index, v index) of the six kets.
pub struct RepSpace {
    pub kets: Vec<(&'static str, GradeVec, usize, usize)>,
}

impl RepSpace {
    pub fn standard() -> RepSpace {
        use GradeVec as G;
        RepSpace {
            kets: vec![
                ("|1>", G::G00, 0, 2),
                ("|2>", G::G00, 0, 0),
                ("|3>", G::G11, 3, 2),
                ("|4>", G::G11, 3, 0),
                ("|5>", G::G10, 1, 1),
                ("|6>", G::G01, 2, 1),
            ],
        }
    }

    pub fn grade(&self, k: usize) -> GradeVec {
        self.kets[k].1
    }

    pub fn grades(&self) -> Vec<GradeVec> {
        self.kets.iter().map(|k| k.1).collect()
    }
}

/// Hand-entered action table: column j lists X|j>.
pub fn sixdim_action_table() -> MatrixSet {
    let z = || Vec::<(usize, Scalar)>::new();
    let e = |k: usize, s: Scalar| vec![(k - 1, s)];
    let one = || c(1, 0);
    let m1 = || c(-1, 0);
    let pi = || c(0, 1);
    let mi = || c(0, -1);
    let table: Vec<(&str, Vec<Vec<(usize, Scalar)>>)> = vec![
        ("K0", vec![e(1, one()), e(2, m1()), e(3, one()), e(4, m1()), z(), z()]),
        ("K+", vec![z(), e(1, one()), z(), e(3, one()), z(), z()]),
        ("K-", vec![e(2, one()), z(), e(4, one()), z(), z(), z()]),
        ("L0", vec![e(3, one()), e(4, m1()), e(1, one()), e(2, m1()), z(), z()]),
        ("L+", vec![z(), e(3, one()), z(), e(1, one()), z(), z()]),
        ("L-", vec![e(4, one()), z(), e(2, one()), z(), z(), z()]),
        ("P+", vec![z(), e(5, one()), z(), e(6, mi()), e(1, one()), e(3, pi())]),
        ("P-", vec![e(5, one()), z(), e(6, mi()), z(), e(2, m1()), e(4, mi())]),
        ("Q+", vec![z(), e(6, one()), z(), e(5, pi()), e(3, mi()), e(1, one())]),
        ("Q-", vec![e(6, one()), z(), e(5, pi()), z(), e(4, pi()), e(2, m1())]),
    ];
    table
        .into_iter()
        .map(|(n, cols)| {
            let mut m = GradedMatrix::zeros(6, 6);
            for (j, col) in cols.into_iter().enumerate() {
                for (i, s) in col {
                    m.set(i, j, GradedPoly::constant(s));
                }
            }
            (n.to_string(), m)
        })
        .collect()
}

/// The printed 2x2-block matrices. The bottom block row of P+ has two
/// entries; the missing block is zero, as the action table demands.
pub fn sixdim_printed() -> MatrixSet {
    let z = GradedMatrix::zeros(2, 2);
    let (sp, sm, s3, s11, s22) = (sigma_plus(), sigma_minus(), sigma3(), sigma11(), sigma22());
    let i = c(0, 1);
    let mi = c(0, -1);
    let b = |g: [[&GradedMatrix; 3]; 3]| {
        let grid: Vec<Vec<Option<&GradedMatrix>>> = g.iter().map(|r| r.iter().map(|m| Some(*m)).collect()).collect();
        GradedMatrix::blocks(&grid, &[2, 2, 2], &[2, 2, 2])
    };
    let isp = sp.scale(&i);
    let msp = sm.scale(&c(-1, 0));
    let mis22 = s22.scale(&mi);
    let mism = sm.scale(&mi);
    let mis11 = s11.scale(&mi);
    let is22m = s22.scale(&c(-1, 0));
    let ism = sm.scale(&i);
    let is11 = s11.scale(&i);
    let k0 = GradedMatrix::diag(&[c(1, 0), c(-1, 0), c(1, 0), c(-1, 0), c(0, 0), c(0, 0)]);
    [
        ("K0", k0),
        ("K+", b([[&sp, &z, &z], [&z, &sp, &z], [&z, &z, &z]])),
        ("K-", b([[&sm, &z, &z], [&z, &sm, &z], [&z, &z, &z]])),
        ("L0", b([[&z, &s3, &z], [&s3, &z, &z], [&z, &z, &z]])),
        ("L+", b([[&z, &sp, &z], [&sp, &z, &z], [&z, &z, &z]])),
        ("L-", b([[&z, &sm, &z], [&sm, &z, &z], [&z, &z, &z]])),
        ("P+", b([[&z, &z, &s11], [&z, &z, &isp], [&sp, &mis22, &z]])),
        ("P-", b([[&z, &z, &msp], [&z, &z, &mis22], [&s11, &mism, &z]])),
        ("Q+", b([[&z, &z, &sp], [&z, &z, &mis11], [&s22, &isp, &z]])),
        ("Q-", b([[&z, &z, &is22m], [&z, &z, &ism], [&sm, &is11, &z]])),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

/// Six-dimensional matrices derived from the tensor realization acting by
/// left multiplication on M_k x v_n, read off in the ket basis.
pub fn build_sixdim() -> Result<MatrixSet, String> {
    let f = build_fundamental_osp();
    let space = RepSpace::standard();
    let parts = [
        ("K0", 0, "H"),
        ("K+", 0, "E+"),
        ("K-", 0, "E-"),
        ("L0", 3, "H"),
        ("L+", 3, "E+"),
        ("L-", 3, "E-"),
        ("P+", 1, "F+"),
        ("P-", 1, "F-"),
        ("Q+", 2, "F+"),
        ("Q-", 2, "F-"),
    ];
    let mut out = MatrixSet::new();
    for (name, ma, op) in parts {
        let mut m = GradedMatrix::zeros(6, 6);
        for (j, &(_, _, mk, vn)) in space.kets.iter().enumerate() {
            let (coef, mres) = m_structure(ma, mk);
            for vr in 0..3 {
                let s = f[op].scalar_at(vr, vn).map_err(|e| e.to_string())?;
                if s.is_zero() {
                    continue;
                }
                let i = space
                    .kets
                    .iter()
                    .position(|&(_, _, a, b)| a == mres && b == vr)
                    .ok_or_else(|| format!("{name}{} leaves the six-dimensional span", space.kets[j].0))?;
                m.add_at(i, j, &GradedPoly::constant(&coef * &s));
            }
        }
        out.insert(name.to_string(), m);
    }
    Ok(out)
}

/// Image of a ring-coefficient algebra element: entry (i, j) of p X is
/// sign(deg p, deg ket_i) p X_ij. Loop powers must be absent.
pub fn embed(elem: &AlgebraElement, images: &MatrixSet, grades: &[GradeVec]) -> GradedMatrix {
    let n = grades.len();
    let mut out = GradedMatrix::zeros(n, n);
    for ((k, _), p) in &elem.terms {
        let x = &images[&elem.basis.elements[*k].name];
        for (i, j, v) in x.nonzero() {
            let mut signed = GradedPoly::zero();
            for (m, cf) in p.terms() {
                let s = mono_grade(m).sign(grades[i]);
                signed.add_assign(&GradedPoly::from_mono(m.clone(), cf * &Scalar::from_int(s as i64)));
            }
            out.add_at(i, j, &signed.mul(v));
        }
    }
    out
}

/// Homomorphism check over unordered pairs; returns (pairs, failures).
pub fn check_homomorphism(basis: &Arc<AlgebraBasis>, images: &MatrixSet) -> (usize, Vec<String>) {
    let n = basis.len();
    let mut count = 0;
    let mut fails = Vec::new();
    for a in 0..n {
        for b in a..n {
            count += 1;
            let (ea, eb) = (&basis.elements[a], &basis.elements[b]);
            let lhs = images[&ea.name].graded_bracket(ea.grade, &images[&eb.name], eb.grade).expect("square");
            let mut rhs = GradedMatrix::zeros(lhs.rows(), lhs.cols());
            for (k, s) in basis.structure(a, b) {
                rhs = rhs.add(&images[&basis.elements[*k].name].scale(s)).expect("square");
            }
            if !lhs.sub(&rhs).expect("square").is_zero() {
                fails.push(format!("({}, {})", ea.name, eb.name));
            }
        }
    }
    (count, fails)
}

/// Rank of the images as vectors; equals the dimension iff faithful.
pub fn image_rank(images: &MatrixSet) -> usize {
    let v: Vec<Vec<Scalar>> = images.values().map(|m| m.to_scalars().expect("constant matrix")).collect();
    scalar_rank(&v)
}

/// Each generator maps grade-g kets into grade g + deg X.
pub fn grading_violations(basis: &AlgebraBasis, images: &MatrixSet, space: &RepSpace) -> Vec<String> {
    let mut out = Vec::new();
    for e in &basis.elements {
        for (i, j, _) in images[&e.name].nonzero() {
            if space.grade(i) != space.grade(j) + e.grade {
                out.push(format!("{} maps {} to {}", e.name, space.kets[j].0, space.kets[i].0));
            }
        }
    }
    out
}

pub fn matrices_to_json(set: &MatrixSet) -> Value {
    Value::Object(set.iter().map(|(k, m)| (k.clone(), m.to_json())).collect::<Map<_, _>>())
}

fn col(m: &GradedMatrix, j: usize) -> Vec<Scalar> {
    (0..m.rows()).map(|i| m.scalar_at(i, j).expect("constant")).collect()
}

fn lowest_weight_checks(six: &MatrixSet) -> Vec<Check> {
    let (v00, v11) = (1, 3);
    let zero = vec![Scalar::zero(); 6];
    let basis_vec = |k: usize, s: Scalar| {
        let mut v = zero.clone();
        v[k] = s;
        v
    };
    let act = |n: &str, v: &[Scalar]| -> Vec<Scalar> {
        let m = &six[n];
        (0..6).map(|i| (0..6).fold(Scalar::zero(), |acc, j| &acc + &(&m.scalar_at(i, j).expect("constant") * &v[j]))).collect()
    };
    let mut out = Vec::new();
    let ann = ["P-", "Q-"].iter().all(|n| col(&six[*n], v00) == zero && col(&six[*n], v11) == zero);
    out.push(Check::new("rep.lowest.annihilated", "lowering generators annihilate the lowest weight vectors", ann));
    let k0 = col(&six["K0"], v00) == basis_vec(v00, c(-1, 0)) && col(&six["K0"], v11) == basis_vec(v11, c(-1, 0));
    out.push(Check::new("rep.lowest.k0", "K0 eigenvalue -1 on both lowest weight vectors", k0));
    let l0 = col(&six["L0"], v00) == basis_vec(v11, c(-1, 0)) && col(&six["L0"], v11) == basis_vec(v00, c(-1, 0));
    out.push(Check::new("rep.lowest.l0", "L0 swaps the lowest weight vectors with a sign", l0));
    let e00 = basis_vec(v00, c(1, 0));
    let e11 = basis_vec(v11, c(1, 0));
    let neg_i = |v: Vec<Scalar>| v.iter().map(|x| x * &c(0, -1)).collect::<Vec<_>>();
    let pos_i = |v: Vec<Scalar>| v.iter().map(|x| x * &c(0, 1)).collect::<Vec<_>>();
    let rel = act("P+", &e00) == neg_i(act("Q+", &e11)) && act("Q+", &e00) == pos_i(act("P+", &e11));
    out.push(Check::new("rep.lowest.raising", "raising images of the two lowest weight vectors are related", rel));
    let anti = [&e00, &e11].iter().all(|v| {
        let pq = act("P+", &act("Q+", v));
        let qp = act("Q+", &act("P+", v));
        pq.iter().zip(&qp).all(|(a, b)| (a + b).is_zero())
    });
    out.push(Check::new("rep.lowest.anticommute", "P+ and Q+ anticommute on the lowest weight vectors", anti));
    let mut words_ok = true;
    for len in 3..=4u32 {
        for mask in 0..(1u32 << len) {
            for v in [&e00, &e11] {
                let mut w = (*v).clone();
                for b in 0..len {
                    w = act(if mask >> b & 1 == 1 { "P+" } else { "Q+" }, &w);
                }
                words_ok &= w == zero;
            }
        }
    }
    out.push(Check::new("rep.lowest.truncation", "words of three or more odd raisings vanish", words_ok));
    out
}

fn summary(id: &str, anchor: &str, total: usize, fails: &[String]) -> Check {
    let c = Check::new(id, anchor, fails.is_empty()).with_note(format!("{total} cases, {} failures", fails.len()));
    if fails.is_empty() {
        c
    } else {
        c.with_residual(fails.join(", "))
    }
}

pub fn verify() -> Vec<Check> {
    let mut out = Vec::new();
    let m = m_matrices();
    let mut mfails = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let (s, k) = m_structure(i, j);
            if m_algebra_product(i, j) != m[k].scale(&s) {
                mfails.push(format!("M{i}M{j}"));
            }
        }
    }
    out.push(summary("rep.m_algebra", "quaternionic product rule", 16, &mfails));

    let osp = AlgebraBasis::osp12();
    let fund = build_fundamental_osp();
    let (n, f) = check_homomorphism(&osp, &fund);
    out.push(summary("rep.fundamental.relations", "fundamental satisfies osp(1|2)", n, &f));

    let g = AlgebraBasis::g();
    let tensor = build_tensor_realization();
    let (n, f) = check_homomorphism(&g, &tensor);
    out.push(summary("rep.tensor.homomorphism", "tensor realization is a homomorphism", n, &f));
    out.push(Check::new("rep.tensor.faithful", "tensor images are linearly independent", image_rank(&tensor) == g.len()));

    let table = sixdim_action_table();
    let derived = match build_sixdim() {
        Ok(d) => d,
        Err(e) => {
            out.push(Check::new("rep.sixdim.derived", "six-dimensional span closes", false).with_residual(e));
            return out;
        }
    };
    let diff: Vec<String> = g.elements.iter().filter(|e| derived[&e.name] != table[&e.name]).map(|e| e.name.clone()).collect();
    out.push(summary("rep.sixdim.table", "derived action matches the action table", g.len(), &diff));
    let printed = sixdim_printed();
    let diff: Vec<String> = g.elements.iter().filter(|e| printed[&e.name] != table[&e.name]).map(|e| e.name.clone()).collect();
    out.push(summary("rep.sixdim.printed", "printed block matrices match the action table", g.len(), &diff));
    let (n, f) = check_homomorphism(&g, &table);
    out.push(summary("rep.sixdim.homomorphism", "six-dimensional representation is a homomorphism", n, &f));
    out.push(Check::new("rep.sixdim.faithful", "six-dimensional images are linearly independent", image_rank(&table) == g.len()));
    let space = RepSpace::standard();
    let gv = grading_violations(&g, &table, &space);
    out.push(summary("rep.sixdim.grading", "generators respect ket gradings", g.len(), &gv));
    out.extend(lowest_weight_checks(&table));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Field;

    #[test]
    fn m_products() {
        assert_eq!(m_algebra_product(1, 2), m_matrices()[3].scale(&c(0, 1)));
        assert_eq!(m_algebra_product(2, 1), m_matrices()[3].scale(&c(0, -1)));
        assert_eq!(m_algebra_product(0, 2), m_matrices()[2]);
    }

    #[test]
    fn fundamental_entries() {
        let f = build_fundamental_osp();
        assert_eq!(f["H"], GradedMatrix::diag(&[c(-1, 0), c(0, 0), c(1, 0)]));
        assert_eq!(f["F-"].scalar_at(0, 1).unwrap(), c(-1, 0));
        let anti = f["F+"].graded_bracket(GradeVec::G10, &f["F-"], GradeVec::G10).unwrap();
        assert_eq!(anti, f["H"]);
    }

    #[test]
    fn tensor_examples() {
        let t = build_tensor_realization();
        let pq = t["P+"].graded_bracket(GradeVec::G10, &t["Q+"], GradeVec::G01).unwrap();
        assert_eq!(pq, t["L+"].scale(&c(0, 2)));
        let pp = t["P+"].graded_bracket(GradeVec::G10, &t["P-"], GradeVec::G10).unwrap();
        assert_eq!(pp, t["K0"]);
        assert!(t["K0"].graded_bracket(GradeVec::G00, &t["L0"], GradeVec::G11).unwrap().is_zero());
    }

    #[test]
    fn action_table_entries() {
        let t = sixdim_action_table();
        assert_eq!(t["P+"].scalar_at(5, 3).unwrap(), c(0, -1));
        assert_eq!(t["Q-"].scalar_at(3, 4).unwrap(), c(0, 1));
        assert_eq!(t["K0"], GradedMatrix::diag(&[c(1, 0), c(-1, 0), c(1, 0), c(-1, 0), c(0, 0), c(0, 0)]));
    }

    #[test]
    fn all_rep_checks_pass() {
        for ch in verify() {
            assert!(ch.passed(), "{} {:?}", ch.id, ch.residual);
        }
    }

    #[test]
    fn embedding_is_homomorphism_with_odd_coefficients() {
        let g = AlgebraBasis::g();
        let t = sixdim_action_table();
        let grades = RepSpace::standard().grades();
        let a = Field::superfield("a", GradeVec::G10).poly();
        let b = Field::superfield("b", GradeVec::G01).poly();
        let pairs = [("P+", a.clone(), "Q-", b.clone()), ("Q+", b.clone(), "L0", a.clone()), ("P-", a.clone(), "P+", a.mul(&b))];
        for (x, p, y, q) in pairs {
            let ex = AlgebraElement::term(&g, x, p);
            let ey = AlgebraElement::term(&g, y, q);
            let (gx, gy) = (ex.grade().unwrap(), ey.grade().unwrap());
            let lhs = embed(&ex, &t, &grades).graded_bracket(gx, &embed(&ey, &t, &grades), gy).unwrap();
            let rhs = embed(&ex.bracket(&ey).unwrap(), &t, &grades);
            assert!(lhs.sub(&rhs).unwrap().is_zero(), "{x} {y}");
        }
    }
}
