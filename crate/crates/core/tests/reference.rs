//! erfc / erfcx against a 40-digit mpmath table.

use num_complex::Complex64;
use plemelj_core::{erfc, erfcx, Tagged};

struct Row {
    w: Complex64,
    erfc: Option<Complex64>,
    erfcx: Option<Complex64>,
}

fn rows() -> Vec<Row> {
    let text = include_str!("data/erfc_reference.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            let pair = |a: f64, b: f64| (a.is_finite() && b.is_finite()).then(|| Complex64::new(a, b));
            Row { w: Complex64::new(v[0], v[1]), erfc: pair(v[2], v[3]), erfcx: pair(v[4], v[5]) }
        })
        .collect()
}

fn budget(w: Complex64) -> f64 {
    if w.norm() <= 10.0 {
        1e-12
    } else {
        1e-10
    }
}

fn check(name: &str, got: Tagged, want: Option<Complex64>, w: Complex64) -> Option<String> {
    let want = want?;
    match got {
        Tagged::Finite(v) => {
            let rel = (v - want).norm() / want.norm().max(f64::MIN_POSITIVE);
            (rel > budget(w)).then(|| format!("{name}({w}) = {v}, want {want} (rel {rel:.2e})"))
        }
        Tagged::Overflow { .. } => Some(format!("{name}({w}) overflowed, want {want}")),
    }
}

#[test]
fn matches_reference_table() {
    let rows = rows();
    assert!(rows.len() > 500);
    let failures: Vec<String> = rows
        .iter()
        .flat_map(|r| [check("erfc", erfc(r.w), r.erfc, r.w), check("erfcx", erfcx(r.w), r.erfcx, r.w)])
        .flatten()
        .collect();
    assert!(failures.is_empty(), "{} mismatches:\n{}", failures.len(), failures.join("\n"));
}

#[test]
fn unrepresentable_reference_values_are_tagged_or_tiny() {
    for r in rows() {
        if r.erfcx.is_none() {
            let a = erfcx(r.w).abs();
            assert!(erfcx(r.w).is_overflow() || !(1e-299..=1e299).contains(&a), "{}", r.w);
        }
    }
}
