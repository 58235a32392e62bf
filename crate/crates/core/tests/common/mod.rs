#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;

use subriemann::brackets::{Frame, VecField};
use subriemann::exactalg::rat::rat;
use subriemann::exactalg::{Poly, Rat};
use subriemann::interface::{parse_manifest_with, Manifest};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.toml"))
}

pub fn fixture(name: &str) -> Manifest {
    fixture_k(name, None)
}

pub fn fixture_k(name: &str, k: Option<i64>) -> Manifest {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    let params: Vec<(String, i64)> = k.map(|k| ("k".to_string(), k)).into_iter().collect();
    parse_manifest_with(&text, &params).expect("fixture parses")
}

pub fn point(m: &Manifest, name: &str) -> Vec<Rat> {
    m.point(name).expect("fixture point").coords.clone()
}

pub fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&a| rat(a, 1)).collect()
}

/// Polynomials in `n` variables of total degree at most `deg` with small coefficients.
pub fn poly(n: usize, deg: u32) -> impl Strategy<Value = Poly> {
    let mono = proptest::collection::vec(0..=deg, n).prop_filter("degree", move |e| e.iter().sum::<u32>() <= deg);
    let coeff = (-3i64..=3, 1i64..=3).prop_map(|(a, b)| rat(a, b));
    proptest::collection::vec((mono, coeff), 0..4).prop_map(move |terms| Poly::from_terms(n, 0, terms))
}

pub fn field(n: usize, deg: u32) -> impl Strategy<Value = VecField> {
    proptest::collection::vec(poly(n, deg), n).prop_map(|c| VecField::new(c).expect("components share a ring"))
}

/// Three random fields in dimension 2..=4 with coefficients of degree ≤ 2.
pub fn field_triple() -> impl Strategy<Value = (VecField, VecField, VecField)> {
    (2usize..=4).prop_flat_map(|n| (field(n, 2), field(n, 2), field(n, 2)))
}

/// Source text of a random expression over `x1..x3`.
pub fn expression() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u32..20).prop_map(|c| c.to_string()),
        (1usize..=3).prop_map(|i| format!("x{i}")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
            inner.clone().prop_map(|a| format!("-({a})")),
            (inner.clone(), 0u32..=3).prop_map(|(a, e)| format!("({a})^{e}")),
            (inner, 1u32..=5).prop_map(|(a, d)| format!("({a})/{d}")),
        ]
    })
}

/// Every component and density of every fixture, as source text.
pub fn fixture_sources() -> Vec<(Manifest, Vec<String>)> {
    let mut out = Vec::new();
    for (name, k) in [("martinet", None), ("example2", None), ("example3", Some(3)), ("example4", Some(4))] {
        let m = fixture_k(name, k);
        let mut texts: Vec<String> = m.field_sources.iter().flatten().cloned().collect();
        texts.push(m.density_source.clone());
        out.push((m, texts));
    }
    out
}

pub fn frame_of(m: &Manifest) -> Frame {
    m.frame.clone()
}
