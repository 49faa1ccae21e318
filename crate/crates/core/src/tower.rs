//! The slice tower of `S^n ∧ HZ` and the slice verifier.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{level_homology, sphere};
use crate::mackey::{b_ij, constant_z, restrict_mackey, MackeyFunctor};
use crate::params::{connection_gap, ell, nu, slice_params, Group, SliceParams};
use crate::rep::{bottom_rep, canonical_lambda, regular_rep, restrict_rep, v_ab_with, Rep};

/// Coefficient system of a slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Coefficient {
    Z,
    B { i: u32, j: u32 },
}

impl Coefficient {
    pub fn functor(&self, group: &Group) -> Result<MackeyFunctor> {
        match *self {
            Coefficient::Z => Ok(constant_z(group)),
            Coefficient::B { i, j } => b_ij(i, j, group),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Coefficient::Z => "Z".into(),
            Coefficient::B { i, j } => format!("B({i},{j})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SliceKind {
    /// `S^V_{(a,b)} ∧ HB(ν+1, a-1)`
    B { a: u32, b: usize, nu: u32 },
    /// The bottom `n`-slice `S^W ∧ HZ` (`S^{W'}` when `p | n`).
    Hz { primed: bool },
    /// `S^n ∧ HZ` for `n = 1, 2`, which is already a slice.
    Trivial,
    /// `HZ` itself.
    ZeroHz,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceDescriptor {
    pub dim: i64,
    pub kind: SliceKind,
    pub rep: Rep,
    pub coefficient: Coefficient,
}

impl SliceDescriptor {
    /// The representation in the form a reader expects: a multiple of `ρ`
    /// minus trivial summands when possible, otherwise with the `λ_r` that
    /// act invertibly on the coefficients removed.
    pub fn display_rep(&self) -> Rep {
        match self.kind {
            SliceKind::B { a, .. } if self.rep.rho_multiple().is_none() => self.rep.drop_lambdas_through(a - 1),
            _ => self.rep.clone(),
        }
    }

    /// Representation with every `λ_r` that smashes to an equivalence on the
    /// coefficients removed; two descriptors with equal reduced reps and
    /// coefficients describe the same spectrum.
    pub fn reduced_rep(&self) -> Rep {
        match self.coefficient {
            Coefficient::B { j, .. } => self.rep.drop_lambdas_through(j),
            Coefficient::Z => self.rep.clone(),
        }
    }

    /// `S^{5ρ − 1} ∧ HB(1,1)`.
    pub fn label(&self) -> String {
        format!("S^{{{}}} ∧ H{}", self.display_rep().pretty_string(), self.coefficient.name())
    }
}

/// One floor of the tower: the slice at this stage and the section
/// `P^{dim}(S^n ∧ HZ) = S^{section} ∧ HZ` whose top slice it is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub slice: SliceDescriptor,
    pub section: Rep,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub group: Group,
    pub n: i64,
    pub stages: Vec<Stage>,
}

impl Tower {
    pub fn dims(&self) -> Vec<i64> {
        self.stages.iter().map(|s| s.slice.dim).collect()
    }

    pub fn coefficients(&self) -> Vec<Coefficient> {
        self.stages.iter().map(|s| s.slice.coefficient).collect()
    }

    pub fn sections(&self) -> Vec<&Rep> {
        self.stages.iter().map(|s| &s.section).collect()
    }

    pub fn bottom(&self) -> &Rep {
        &self.stages.last().expect("towers are never empty").section
    }
}

fn small_slice(n: i64, group: &Group) -> SliceDescriptor {
    SliceDescriptor {
        dim: n,
        kind: if n == 0 { SliceKind::ZeroHz } else { SliceKind::Trivial },
        rep: Rep::trivial(group, n),
        coefficient: Coefficient::Z,
    }
}

/// The slices of `S^n ∧ HZ`, top dimension first.
pub fn slice_list(n: i64, group: &Group) -> Result<Vec<SliceDescriptor>> {
    if n < 0 {
        return Err(Error::DegreeTooSmall { n, min: 0 });
    }
    if n <= 2 {
        return Ok(vec![small_slice(n, group)]);
    }
    let params = slice_params(n, group)?;
    let mut out = Vec::new();
    for a in (1..=group.k()).rev() {
        let first_b = if a == 1 && params.p_divides_n() { 2 } else { 1 };
        for b in (first_b..=params.d).rev() {
            out.push(b_slice(&params, a, b, group)?);
        }
    }
    out.push(SliceDescriptor {
        dim: n,
        kind: SliceKind::Hz { primed: params.p_divides_n() },
        rep: bottom_rep(n, group)?,
        coefficient: Coefficient::Z,
    });
    for w in out.windows(2) {
        if w[0].dim <= w[1].dim {
            return Err(Error::Invariant(format!("slice dimensions {} and {} are not decreasing", w[0].dim, w[1].dim)));
        }
    }
    Ok(out)
}

fn b_slice(params: &SliceParams, a: u32, b: usize, group: &Group) -> Result<SliceDescriptor> {
    let nu = nu(a, b, params, group)?;
    let rep = v_ab_with(params, a, b, group)?;
    let dim = params.m[b - 1] * group.pow(a) - 1;
    debug_assert_eq!(rep.dim(), dim);
    Ok(SliceDescriptor { dim, kind: SliceKind::B { a, b, nu }, rep, coefficient: Coefficient::B { i: nu + 1, j: a - 1 } })
}

/// `λ_j` in canonical form, two trivial summands once `j >= k`.
fn lambda_or_trivial(j: u32, group: &Group) -> Rep {
    if j >= group.k() {
        Rep::trivial(group, 2)
    } else {
        Rep::lambda_j(group, j)
    }
}

/// Walks down the tower from `S^n`: passing the slice `(a, b)` trades one
/// `λ_{ν+a}` for one `λ_{a-1}`.
pub fn section_reps(slices: &[SliceDescriptor], n: i64, group: &Group) -> Result<Tower> {
    let mut section = Rep::trivial(group, n);
    let mut stages = Vec::with_capacity(slices.len());
    for (idx, slice) in slices.iter().enumerate() {
        stages.push(Stage { slice: slice.clone(), section: section.clone() });
        if let SliceKind::B { a, nu, .. } = slice.kind {
            let next = &(&section - &lambda_or_trivial(nu + a, group)) + &Rep::lambda_j(group, a - 1);
            if !next.is_actual() || next.dim() != n {
                return Err(Error::Invariant(format!(
                    "stage {idx}: cannot exchange λ_{} for λ_{} in {section}",
                    nu + a,
                    a - 1
                )));
            }
            section = next;
        }
    }
    let last = stages.last().ok_or_else(|| Error::Invariant("empty slice list".into()))?;
    if n >= 3 && (last.section != bottom_rep(n, group)? || last.slice.rep != last.section) {
        return Err(Error::Invariant(format!("bottom section {} differs from the bottom slice {}", last.section, last.slice.rep)));
    }
    Ok(Tower { group: *group, n, stages })
}

/// The slice tower of `S^n ∧ HZ`.
pub fn tower(n: i64, group: &Group) -> Result<Tower> {
    section_reps(&slice_list(n, group)?, n, group)
}

// ---------------------------------------------------------------------------
// Verification

/// A nonzero homology group that rules out the slice condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub level: u32,
    pub t: i64,
    pub eps: i64,
    pub homology: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum VerificationFailure {
    /// No `m ρ_H − ε` contains the restricted representation with equal
    /// fixed points.
    Containment { level: u32, rep: String },
    Homology(Counterexample),
    Dimension { expected: i64, found: i64 },
}

/// What was checked on one subgroup `C_{p^level}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelVerification {
    pub level: u32,
    /// coefficients restrict to zero, nothing to check
    pub vacuous: bool,
    /// `(m, ε)` with `V ⊂ mρ_H − ε` and equal fixed points
    pub containment: Option<(i64, i64)>,
    /// number of homology groups computed
    pub groups_checked: usize,
    /// largest `t` examined; past it every cell sits in degree `<= -2`
    pub stable_t: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceVerification {
    pub dim: i64,
    pub label: String,
    pub levels: Vec<LevelVerification>,
    pub failure: Option<VerificationFailure>,
}

impl SliceVerification {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// `(m, ε)` with `V ⊂ m ρ − ε` and `V^G = (m ρ − ε)^G`, if any.
fn containment(v: &Rep) -> Option<(i64, i64)> {
    let rho = regular_rep(v.group());
    (0..=1).find_map(|eps| {
        let m = v.trivial_mult() + eps;
        let fits = m > 0 && v.lambdas().iter().zip(rho.lambdas()).all(|(x, r)| *x <= m * r);
        fits.then_some((m, eps))
    })
}

/// Top degree of the cell structure of `S^U`.
fn top_cell(u: &Rep) -> i64 {
    let s = u.split();
    s.plus.dim() - s.minus.trivial_mult()
}

fn verify_level(v: &Rep, m: &MackeyFunctor, level: u32) -> Result<std::result::Result<LevelVerification, VerificationFailure>> {
    let vh = restrict_rep(v, level)?;
    let mh = restrict_mackey(m, level)?;
    let h = *vh.group();
    let mut report = LevelVerification { level, vacuous: false, containment: None, groups_checked: 0, stable_t: 0 };
    if mh.is_zero() {
        report.vacuous = true;
        return Ok(Ok(report));
    }
    report.containment = containment(&vh);
    if report.containment.is_none() {
        return Ok(Err(VerificationFailure::Containment { level, rep: vh.pretty_string() }));
    }
    let rho = regular_rep(&h);
    let order = h.order();
    for eps in 0..=1 {
        let mut t = (vh.dim() + eps).div_euclid(order) + 1;
        let mut prev_top = i64::MAX;
        loop {
            let u = &vh - &(t * &rho);
            let top = top_cell(&u);
            if top >= prev_top {
                return Err(Error::Invariant(format!("top cell of S^{u} did not drop when adding ρ")));
            }
            prev_top = top;
            let cs = sphere(&u);
            debug_assert_eq!(cs.top(), top);
            let group = level_homology(&cs, &mh, h.k(), -eps)?;
            report.groups_checked += 1;
            if !group.is_zero() {
                return Ok(Err(VerificationFailure::Homology(Counterexample { level, t, eps, homology: group.to_string() })));
            }
            report.stable_t = report.stable_t.max(t);
            if top <= -2 {
                break;
            }
            t += 1;
        }
    }
    Ok(Ok(report))
}

/// Checks that `S^V ∧ HM` is a `dim V`-slice: on every subgroup
/// `H = C_{p^m}`, `V` sits in some `mρ_H − ε` with the same fixed points, and
/// `H_{-ε}(S^{V - tρ_H}; M)(H/H)` vanishes for `ε = 0, 1` and every
/// `t|H| − ε > dim V`.
pub fn verify_slice(desc: &SliceDescriptor, group: &Group) -> Result<SliceVerification> {
    let mut out = SliceVerification { dim: desc.dim, label: desc.label(), levels: Vec::new(), failure: None };
    if desc.rep.dim() != desc.dim {
        out.failure = Some(VerificationFailure::Dimension { expected: desc.dim, found: desc.rep.dim() });
        return Ok(out);
    }
    let m = desc.coefficient.functor(group)?;
    for level in (0..=group.k()).rev() {
        match verify_level(&desc.rep, &m, level)? {
            Ok(report) => out.levels.push(report),
            Err(failure) => {
                out.failure = Some(failure);
                break;
            }
        }
    }
    Ok(out)
}

/// Verifies every slice of a tower concurrently; results keep stage order.
pub fn verify_tower(tower: &Tower) -> Result<Vec<SliceVerification>> {
    tower.stages.par_iter().map(|s| verify_slice(&s.slice, &tower.group)).collect()
}

// ---------------------------------------------------------------------------
// Fiber sequences

/// One step `S(Ṽ + 1 + λ_{ν+a}) → S(Ṽ + 1 + λ_{a-1})` whose fiber is the
/// slice between the two sections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberStep {
    pub stage: usize,
    pub source: Rep,
    pub target: Rep,
    /// `Ṽ = V_{(a,b)} − U`
    pub tilde: Rep,
    /// sum of `λ_r`, `r <= a − 1`
    pub u: Rep,
    pub fiber: SliceDescriptor,
}

/// The passage from the last slice at level `a` to the first at `a + 1`:
/// `V_{(a+1,1)} − V_{(a,d)} = U + λ_{ν(d)+a}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Junction {
    pub a: u32,
    pub gap: i64,
    pub exchanged: Rep,
    pub u: Rep,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberData {
    pub steps: Vec<FiberStep>,
    pub junctions: Vec<Junction>,
}

fn supported_through(u: &Rep, j: u32) -> bool {
    u.is_actual() && u.trivial_mult() == 0 && u.lambdas().iter().skip(j as usize + 1).all(|&x| x == 0)
}

/// Recovers the fiber sequences connecting consecutive sections and checks
/// them against the slices and the junction bookkeeping.
pub fn fiber_sequence_data(tower: &Tower) -> Result<FiberData> {
    let g = tower.group;
    let mut steps = Vec::new();
    for (idx, pair) in tower.stages.windows(2).enumerate() {
        let (upper, lower) = (&pair[0], &pair[1]);
        let SliceKind::B { a, nu, .. } = upper.slice.kind else {
            return Err(Error::Invariant(format!("stage {idx}: only B-slices sit between sections")));
        };
        let one = Rep::trivial(&g, 1);
        let tilde = &(&upper.section - &one) - &lambda_or_trivial(nu + a, &g);
        let u = &upper.slice.rep - &tilde;
        if !supported_through(&u, a - 1) {
            return Err(Error::Invariant(format!("stage {idx}: V − Ṽ = {u} is not a sum of λ_r with r <= {}", a - 1)));
        }
        let target = &(&tilde + &one) + &Rep::lambda_j(&g, a - 1);
        if target != lower.section {
            return Err(Error::Invariant(format!("stage {idx}: fiber target {target} differs from section {}", lower.section)));
        }
        if upper.slice.coefficient != (Coefficient::B { i: nu + 1, j: a - 1 }) {
            return Err(Error::Invariant(format!("stage {idx}: coefficient {} is not B({}, {})", upper.slice.coefficient.name(), nu + 1, a - 1)));
        }
        steps.push(FiberStep { stage: idx, source: upper.section.clone(), target, tilde, u, fiber: upper.slice.clone() });
    }
    let mut junctions = Vec::new();
    if tower.n >= 3 {
        let params = slice_params(tower.n, &g)?;
        let d = params.d;
        for a in 1..g.k() {
            let gap = connection_gap(a, &params, &g)?;
            let lower = v_ab_with(&params, a, d, &g)?;
            let upper = v_ab_with(&params, a + 1, 1, &g)?;
            let exchanged = canonical_lambda(ell(a, d, &params, &g), &g);
            let expected = lambda_or_trivial(nu(a, d, &params, &g)? + a, &g);
            if exchanged != expected {
                return Err(Error::Invariant(format!("junction {a}: λ(ℓ(a,d)) = {exchanged}, expected {expected}")));
            }
            let u = &(&upper - &lower) - &exchanged;
            if !supported_through(&u, a) {
                return Err(Error::Invariant(format!("junction {a}: remainder {u} has summands beyond λ_{a}")));
            }
            if (&upper - &lower).dim() != 2 * gap {
                return Err(Error::Invariant(format!("junction {a}: dimension jump differs from 2L = {}", 2 * gap)));
            }
            junctions.push(Junction { a, gap, exchanged, u });
        }
    }
    Ok(FiberData { steps, junctions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::parse_rep;

    fn c(p: u64, k: u32) -> Group {
        Group::new(p, k).unwrap()
    }

    #[test]
    fn s7_over_c9() {
        let g = c(3, 2);
        let t = tower(7, &g).unwrap();
        assert_eq!(t.dims(), vec![44, 26, 14, 8, 7]);
        let names: Vec<String> = t.coefficients().iter().map(Coefficient::name).collect();
        assert_eq!(names, ["B(1,1)", "B(1,1)", "B(1,0)", "B(2,0)", "Z"]);
        let sections: Vec<String> = t.sections().iter().map(|r| r.pretty_string()).collect();
        assert_eq!(sections, ["7", "5 + λ_1", "3 + 2λ_1", "3 + λ_1 + λ_0", "1 + λ_1 + 2λ_0"]);
        let labels: Vec<String> = t.stages.iter().map(|s| s.slice.display_rep().pretty_string()).collect();
        assert_eq!(labels, ["5ρ − 1", "3ρ − 1", "2 + λ_1", "ρ − 1", "1 + λ_1 + 2λ_0"]);
    }

    #[test]
    fn small_towers() {
        let g = c(5, 2);
        for n in 0..=2 {
            let t = tower(n, &g).unwrap();
            assert_eq!(t.stages.len(), 1);
            assert_eq!(t.stages[0].section, Rep::trivial(&g, n));
            assert!(verify_slice(&t.stages[0].slice, &g).unwrap().passed());
        }
        assert!(tower(-1, &g).is_err());
    }

    #[test]
    fn stage_counts() {
        for (p, k) in [(3, 1), (3, 2), (5, 2), (3, 3)] {
            let g = c(p, k);
            for n in 3..=30 {
                let t = tower(n, &g).unwrap();
                let s = slice_params(n, &g).unwrap();
                let expected = k as usize * s.d - usize::from(s.p_divides_n()) + 1;
                assert_eq!(t.stages.len(), expected, "p={p} k={k} n={n} {:?}", t.dims());
                if t.stages.len() > 1 {
                    assert_eq!(t.stages[0].slice.dim, (n - 2) * g.order() - 1);
                } else {
                    // n = p = 3 over C_3: the only candidate B-slice is excluded
                    assert_eq!((p, k, n), (3, 1, 3));
                }
                for st in &t.stages {
                    assert_eq!(st.section.dim(), n);
                    assert!(st.slice.dim >= n);
                    // B-slices are invisible underlying
                    if st.slice.coefficient != Coefficient::Z {
                        assert!(st.slice.coefficient.functor(&g).unwrap().value(0).is_zero());
                    }
                }
                fiber_sequence_data(&t).unwrap();
            }
        }
    }

    #[test]
    fn verifies_examples() {
        let g = c(3, 2);
        let rho_minus_one = parse_rep("rho-1", &g).unwrap();
        let desc = SliceDescriptor {
            dim: 8,
            kind: SliceKind::B { a: 1, b: 1, nu: 1 },
            rep: rho_minus_one,
            coefficient: Coefficient::B { i: 2, j: 0 },
        };
        let r = verify_slice(&desc, &g).unwrap();
        assert!(r.passed(), "{r:?}");
        let t = tower(7, &g).unwrap();
        assert!(verify_slice(&t.stages[4].slice, &g).unwrap().passed());
    }

    #[test]
    fn rejects_non_slices() {
        let g = c(3, 1);
        // S^{2ρ} ∧ HZ is a 6-slice but S^{λ_0} ∧ HZ sits in too small a ρ-multiple check
        let bad = SliceDescriptor { dim: 4, kind: SliceKind::Hz { primed: false }, rep: parse_rep("4", &g).unwrap(), coefficient: Coefficient::Z };
        let r = verify_slice(&bad, &g).unwrap();
        assert!(matches!(r.failure, Some(VerificationFailure::Homology(_))), "{r:?}");
        let wrong_dim = SliceDescriptor { dim: 5, ..bad };
        assert!(matches!(verify_slice(&wrong_dim, &g).unwrap().failure, Some(VerificationFailure::Dimension { .. })));
    }

    #[test]
    fn junction_example() {
        let g = c(3, 2);
        let data = fiber_sequence_data(&tower(7, &g).unwrap()).unwrap();
        assert_eq!(data.steps.len(), 4);
        assert_eq!(data.junctions.len(), 1);
        assert_eq!(data.junctions[0].gap, 6);
        assert_eq!(data.junctions[0].exchanged, Rep::lambda_j(&g, 1));
    }
}
