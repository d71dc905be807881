mod common;

use std::time::{Duration, Instant};

use z2sl_core::report::{Check, Status};
use z2sl_core::virasoro::Sector;
use z2sl_core::{algebra, backlund, lax, reps, soldering, solutions, virasoro};

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_checks(cs: Vec<Check>) -> Outcome {
    let fails: Vec<&str> = cs.iter().filter(|c| c.status == Status::Fail).map(|c| c.id.as_str()).collect();
    let pass = cs.iter().filter(|c| c.status == Status::Pass).count();
    let detail = if fails.is_empty() {
        format!("{pass} checks")
    } else {
        format!("{pass} pass, {} fail: {}", fails.len(), fails.join(", "))
    };
    Outcome { ok: fails.is_empty(), detail }
}

fn ring_properties() -> Outcome {
    use common::*;
    let worst = match float_oracle(CASES, 7) {
        Ok(w) if w < 1e-9 => w,
        Ok(w) => return Outcome { ok: false, detail: format!("float oracle deviation {w:e}") },
        Err(e) => return Outcome { ok: false, detail: format!("float oracle: {e}") },
    };
    let props: [(&str, fn(u32) -> Result<(), String>); 5] = [
        ("graded commutativity", graded_commutativity),
        ("Leibniz", leibniz),
        ("anticommuting D", anticommuting_superderivatives),
        ("D squares", superderivative_squares),
        ("product-to-sum", hyperbolic_product_to_sum),
    ];
    let mut errs = Vec::new();
    for (name, p) in props {
        if let Err(e) = p(CASES) {
            errs.push(format!("{name}: {e}"));
        }
    }
    if plain_commutativity(CASES).is_ok() {
        errs.push("generator failed to refute plain commutativity".into());
    }
    let detail = if errs.is_empty() {
        format!("5 x {CASES} cases, float oracle max deviation {worst:.1e}")
    } else {
        errs.join("; ")
    };
    Outcome { ok: errs.is_empty(), detail }
}

fn main() {
    let criteria: Vec<(&str, u64, Box<dyn Fn() -> Outcome>)> = vec![
        ("algebra axioms and graded Jacobi", 5, Box::new(|| from_checks(algebra::verify()))),
        ("representation faithfulness", 5, Box::new(|| from_checks(reps::verify()))),
        ("soldering currents, constraint chain, components", 60, Box::new(|| from_checks(soldering::verify()))),
        (
            "Lax zero curvature and A identities",
            120,
            Box::new(|| {
                let mut cs = Vec::new();
                for v in [lax::Variant::Superspace, lax::Variant::Alternative, lax::Variant::Spectral] {
                    cs.extend(lax::verify(v));
                }
                from_checks(cs)
            }),
        ),
        ("solution identities", 120, Box::new(|| from_checks(solutions::verify()))),
        (
            "Backlund implications and conservation laws",
            60,
            Box::new(|| {
                let mut cs = backlund::verify(backlund::BacklundVariant::Free);
                cs.extend(backlund::verify(backlund::BacklundVariant::Auto));
                from_checks(cs)
            }),
        ),
        (
            "Virasoro constants, current algebra, modes, Jacobi |n|<=5",
            120,
            Box::new(|| from_checks(virasoro::verify(&[Sector::Rrr, Sector::RNsNs, Sector::NsNsR], 5))),
        ),
        ("ring kernel properties", 30, Box::new(ring_properties)),
    ];
    let total = criteria.len();
    let mut passed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut out = run();
        let dt = t.elapsed();
        if dt > Duration::from_secs(*limit) {
            out.ok = false;
            out.detail = format!("over time limit; {}", out.detail);
        }
        passed += out.ok as usize;
        println!(
            "[{}] {} {name} ({:.2}s / {limit}s): {}",
            i + 1,
            if out.ok { "PASS" } else { "FAIL" },
            dt.as_secs_f64(),
            out.detail
        );
    }
    println!("{passed}/{total} passed");
}
