//! Text and LaTeX renderings of a [`TowerDocument`].

use crate::document::{StageEntry, TowerDocument};

fn coefficient_latex(name: &str) -> String {
    match name {
        "Z" => "H\\underline{\\mathbb{Z}}".into(),
        other => format!("H\\underline{{B}}{}", other.trim_start_matches('B')),
    }
}

fn slice_text(s: &StageEntry) -> String {
    format!("S^{{{}}} ∧ H{}", s.slice.display.pretty, s.slice.coefficient)
}

fn status_text(s: &StageEntry) -> &'static str {
    match &s.verification {
        None => "",
        Some(v) if v.passed => "  [verified]",
        Some(_) => "  [FAILED]",
    }
}

/// One row per stage: slice dimension, slice, and the section it is the top
/// slice of.
pub fn render_text(doc: &TowerDocument) -> String {
    let m = &doc.metadata;
    let mut out = format!("Slice tower of S^{} ∧ HZ over {}\n", m.n, m.group);
    let slices: Vec<String> = doc.stages.iter().map(slice_text).collect();
    let width = slices.iter().map(|s| s.chars().count()).max().unwrap_or(0).max(5);
    let dim_width = doc.stages.iter().map(|s| s.slice.dim.to_string().len()).max().unwrap_or(0).max(3);
    out.push_str(&format!("{:>dim_width$}  {:<width$}  section\n", "dim", "slice"));
    for (s, text) in doc.stages.iter().zip(&slices) {
        let pad = width - text.chars().count();
        out.push_str(&format!(
            "{:>dim_width$}  {}{}  S^{{{}}} ∧ HZ{}\n",
            s.slice.dim,
            text,
            " ".repeat(pad),
            s.section.pretty,
            status_text(s)
        ));
    }
    for s in &doc.stages {
        if let Some(f) = s.verification.as_ref().and_then(|v| v.failure.as_ref()) {
            out.push_str(&format!("stage {} failed: {f:?}\n", s.index));
        }
    }
    out
}

/// `(5(3)^2 - 1)` for the slice at `m_b p^a - 1`.
fn dim_label(s: &StageEntry, p: u64) -> String {
    use slicetower::tower::SliceKind;
    match s.slice.kind {
        SliceKind::B { a, .. } => {
            let m = (s.slice.dim + 1) / (p as i64).pow(a);
            if a == 1 {
                format!("({m}({p}) - 1)")
            } else {
                format!("({m}({p})^{a} - 1)")
            }
        }
        _ => format!("({})", s.slice.dim),
    }
}

/// `xymatrix` source with the slices in the left column mapping into the
/// sections on the right.
pub fn render_latex(doc: &TowerDocument) -> String {
    let p = doc.metadata.p;
    let hz = coefficient_latex("Z");
    let mut rows = Vec::new();
    let (last, upper) = doc.stages.split_last().expect("documents have at least one stage");
    for s in upper {
        rows.push(format!(
            "{} & S^{{{}}} \\wedge {} \\ar[r] & S^{{{}}} \\wedge {} \\ar[d]",
            dim_label(s, p),
            s.slice.display.latex,
            coefficient_latex(&s.slice.coefficient),
            s.section.latex,
            hz
        ));
    }
    let bottom = format!("S^{{{}}} \\wedge {}", last.section.latex, hz);
    if upper.is_empty() {
        return format!("\\[ \\xymatrix{{ {bottom} }}\\]\n");
    }
    rows.push(format!("&& {bottom}"));
    format!("\\[ \\xymatrix{{\n{} }}\\]\n", rows.join(" \\\\\n"))
}
