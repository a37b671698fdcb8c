//! Plain-text strand listings of Khovanov–Lauda monomials.

use std::fmt::Write;

use klr_core::affine_algebra::{AffineElement, KLMonomial};

/// One block per monomial: residues along the top, dots, the crossing word, residues along
/// the bottom, and where each strand ends.
pub fn render_monomial(m: &KLMonomial) -> String {
    let n = m.n();
    let cell = |s: String| format!("{s:>4}");
    let row = |label: &str, cells: Vec<String>| format!("  {label:<8}{}\n", cells.into_iter().map(cell).collect::<String>());
    let mut out = String::new();
    out += &row("top", m.top().iter().map(|r| r.to_string()).collect());
    out += &row("dots", m.ys().iter().map(|&a| if a == 0 { ".".into() } else { "•".repeat(a as usize) }).collect());
    let word = m.word();
    let _ = writeln!(
        out,
        "  {:<8}{}",
        "psi",
        if word.is_empty() { "-".to_string() } else { word.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ") }
    );
    out += &row("bottom", m.bottom().iter().map(|r| r.to_string()).collect());
    let ends: Vec<String> = (1..=n).map(|k| format!("{k}→{}", m.perm().apply(k))).collect();
    let _ = writeln!(out, "  {:<8}{}", "strands", ends.join(" "));
    out
}

pub fn render_element(x: &AffineElement) -> String {
    if x.is_zero() {
        return "0\n".into();
    }
    let mut out = String::new();
    for (m, c) in x.terms() {
        let _ = writeln!(out, "{c} · {m}");
        out += &render_monomial(m);
    }
    out
}
