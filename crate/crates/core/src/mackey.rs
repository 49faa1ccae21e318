//! Mackey functors for `C_{p^k}`, stored levelwise.
//!
//! Level `m` is the value at `G/C_{p^m}`. Each level is a finitely presented
//! abelian group with an explicit generator basis; `res[m]` maps level
//! `m + 1` to level `m`, `tr[m]` maps level `m` to level `m + 1`, and
//! `gamma[m]` records how the chosen generator `γ` of `G` acts on level `m`.
//! The named families (`Z`, `Z*`, `Z(i,j)`, `B(i,j)`) have trivial `γ`-action;
//! induced functors do not.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cokernel_invariants, smith, IntMatrix};
use crate::params::Group;

/// `Z^gens / im(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub gens: usize,
    /// `gens x r`, one relation per column.
    pub relations: IntMatrix,
}

impl Presentation {
    pub fn free(gens: usize) -> Self {
        Presentation { gens, relations: IntMatrix::zeros(gens, 0) }
    }

    pub fn zero() -> Self {
        Presentation::free(0)
    }

    /// `Z/q`; `q = 0` gives `Z` and `q = 1` gives the zero group.
    pub fn cyclic(q: &BigInt) -> Self {
        if q.is_one() {
            return Presentation::zero();
        }
        let relations = if q.is_zero() { IntMatrix::zeros(1, 0) } else { IntMatrix::diagonal(std::slice::from_ref(q)) };
        Presentation { gens: 1, relations }
    }

    pub fn abgroup(&self) -> AbGroup {
        let (torsion, free) = cokernel_invariants(&self.relations);
        AbGroup::new(torsion, free)
    }

    /// `n` copies.
    pub fn power(&self, n: usize) -> Presentation {
        Presentation {
            gens: self.gens * n,
            relations: IntMatrix::block_diag(&vec![self.relations.clone(); n]),
        }
    }

    /// Whether `v` lies in the relation lattice.
    pub fn is_zero_vec(&self, v: &[BigInt]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let s = smith(&self.relations);
        let pv = s.p.mul_vec(v);
        pv.iter().enumerate().all(|(i, x)| match s.diag.get(i) {
            Some(d) => x.is_multiple_of(d),
            None => x.is_zero(),
        })
    }
}

/// Finitely generated abelian group in invariant-factor normal form.
///
/// `factors` lists the torsion orders `d_1 | d_2 | ...` (all `> 1`)
/// followed by one `0` per free summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbGroup {
    pub factors: Vec<BigInt>,
}

impl AbGroup {
    pub fn new(mut torsion: Vec<BigInt>, free: usize) -> Self {
        torsion.retain(|d| !d.is_one());
        torsion.sort();
        // re-normalize: the SNF diagonal already forms a divisibility chain
        torsion.extend(std::iter::repeat_n(BigInt::zero(), free));
        AbGroup { factors: torsion }
    }

    pub fn zero() -> Self {
        AbGroup { factors: vec![] }
    }

    pub fn cyclic(q: i64) -> Self {
        AbGroup::new(vec![BigInt::from(q)], 0)
    }

    pub fn integers() -> Self {
        AbGroup::new(vec![], 1)
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    /// Number of cyclic summands.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = self.torsion().iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        f.write_str(&parts.join(" ⊕ "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyFunctor {
    group: Group,
    name: String,
    levels: Vec<Presentation>,
    res: Vec<IntMatrix>,
    tr: Vec<IntMatrix>,
    gamma: Vec<IntMatrix>,
}

fn scalar_map(target: &Presentation, source: &Presentation, s: i64) -> IntMatrix {
    // both sides have at most one generator for the named families
    let mut m = IntMatrix::zeros(target.gens, source.gens);
    if target.gens == 1 && source.gens == 1 {
        m[(0, 0)] = BigInt::from(s);
    }
    m
}

impl MackeyFunctor {
    /// Builds a functor from levelwise scalars on cyclic levels with trivial
    /// `γ`-action.
    fn from_cyclic(group: &Group, name: String, orders: &[BigInt], res: &[i64], tr: &[i64]) -> Self {
        let levels: Vec<Presentation> = orders.iter().map(Presentation::cyclic).collect();
        let k = group.k() as usize;
        let res = (0..k).map(|m| scalar_map(&levels[m], &levels[m + 1], res[m])).collect();
        let tr = (0..k).map(|m| scalar_map(&levels[m + 1], &levels[m], tr[m])).collect();
        let gamma = levels.iter().map(|l| IntMatrix::identity(l.gens)).collect();
        MackeyFunctor { group: *group, name, levels, res, tr, gamma }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Assembles a functor from explicit levels and structure maps, checking
    /// matrix shapes.
    pub fn from_parts(
        group: &Group,
        name: impl Into<String>,
        levels: Vec<Presentation>,
        res: Vec<IntMatrix>,
        tr: Vec<IntMatrix>,
        gamma: Vec<IntMatrix>,
    ) -> Result<Self> {
        let k = group.k() as usize;
        let shape_ok = levels.len() == k + 1
            && res.len() == k
            && tr.len() == k
            && gamma.len() == k + 1
            && levels.iter().all(|l| l.relations.rows() == l.gens)
            && (0..k).all(|m| {
                (res[m].rows(), res[m].cols()) == (levels[m].gens, levels[m + 1].gens)
                    && (tr[m].rows(), tr[m].cols()) == (levels[m + 1].gens, levels[m].gens)
            })
            && (0..=k).all(|m| (gamma[m].rows(), gamma[m].cols()) == (levels[m].gens, levels[m].gens));
        if !shape_ok {
            return Err(Error::Invariant("Mackey functor data has inconsistent shapes".into()));
        }
        Ok(MackeyFunctor { group: *group, name: name.into(), levels, res, tr, gamma })
    }

    /// Whether `γ` acts as the identity on every level.
    pub fn has_trivial_weyl_action(&self) -> bool {
        self.levels
            .iter()
            .zip(&self.gamma)
            .all(|(l, g)| Self::maps_agree(l, g, &IntMatrix::identity(l.gens)))
    }


    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self, m: u32) -> &Presentation {
        &self.levels[m as usize]
    }

    pub fn value(&self, m: u32) -> AbGroup {
        self.levels[m as usize].abgroup()
    }

    /// `res: level m+1 -> level m`.
    pub fn res(&self, m: u32) -> &IntMatrix {
        &self.res[m as usize]
    }

    /// `tr: level m -> level m+1`.
    pub fn tr(&self, m: u32) -> &IntMatrix {
        &self.tr[m as usize]
    }

    pub fn gamma(&self, m: u32) -> &IntMatrix {
        &self.gamma[m as usize]
    }

    /// Composite restriction from level `from` down to level `to <= from`.
    pub fn res_between(&self, from: u32, to: u32) -> IntMatrix {
        assert!(to <= from);
        let mut acc = IntMatrix::identity(self.levels[from as usize].gens);
        for m in (to..from).rev() {
            acc = self.res[m as usize].mul(&acc);
        }
        acc
    }

    /// Composite transfer from level `from` up to level `to >= from`.
    pub fn tr_between(&self, from: u32, to: u32) -> IntMatrix {
        assert!(to >= from);
        let mut acc = IntMatrix::identity(self.levels[from as usize].gens);
        for m in from..to {
            acc = self.tr[m as usize].mul(&acc);
        }
        acc
    }

    /// Whether every level is the zero group.
    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|l| l.abgroup().is_zero())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    fn map_is_zero(target: &Presentation, m: &IntMatrix) -> bool {
        (0..m.cols()).all(|j| target.is_zero_vec(&m.column(j)))
    }

    fn maps_agree(target: &Presentation, a: &IntMatrix, b: &IntMatrix) -> bool {
        let mut diff = a.clone();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                diff[(i, j)] -= &b[(i, j)];
            }
        }
        Self::map_is_zero(target, &diff)
    }

    fn well_defined(source: &Presentation, target: &Presentation, f: &IntMatrix) -> bool {
        Self::map_is_zero(target, &f.mul(&source.relations))
    }

    /// Checks that the structure maps respect the presentations and satisfy
    /// the Mackey identities for cyclic groups:
    /// `tr ∘ res = p` on level `m + 1`, `res ∘ tr = Σ_{s<p} γ^{s p^{k-m-1}}`
    /// on level `m`, and `C_{p^m}` acting trivially on level `m`.
    pub fn check_axioms(&self) -> Result<()> {
        let k = self.group.k();
        let p = BigInt::from(self.group.p());
        let fail = |what: String| Err(Error::Invariant(format!("{}: {what}", self.name)));
        for m in 0..k {
            let (lo, hi) = (&self.levels[m as usize], &self.levels[m as usize + 1]);
            if !Self::well_defined(hi, lo, self.res(m)) || !Self::well_defined(lo, hi, self.tr(m)) {
                return fail(format!("structure maps between levels {m} and {} are not well defined", m + 1));
            }
            let tr_res = self.tr(m).mul(self.res(m));
            if !Self::maps_agree(hi, &tr_res, &IntMatrix::scalar(hi.gens, &p)) {
                return fail(format!("tr∘res ≠ p on level {}", m + 1));
            }
            let res_tr = self.res(m).mul(self.tr(m));
            let step = pow_matrix(self.gamma(m), self.group.pow(k - m - 1) as u64);
            let mut orbit_sum = IntMatrix::zeros(lo.gens, lo.gens);
            let mut g = IntMatrix::identity(lo.gens);
            for _ in 0..self.group.p() {
                orbit_sum = add(&orbit_sum, &g);
                g = step.mul(&g);
            }
            if !Self::maps_agree(lo, &res_tr, &orbit_sum) {
                return fail(format!("res∘tr differs from the Weyl orbit sum on level {m}"));
            }
        }
        for m in 0..=k {
            let lvl = &self.levels[m as usize];
            let own = pow_matrix(self.gamma(m), self.group.pow(k - m) as u64);
            if !Self::maps_agree(lvl, &own, &IntMatrix::identity(lvl.gens)) {
                return fail(format!("C_(p^{m}) acts nontrivially on its own level"));
            }
        }
        Ok(())
    }

    /// Reduced presentation on every level: unit invariant factors removed,
    /// remaining relations diagonal, maps rewritten in the new generators.
    pub fn normalized(&self) -> MackeyFunctor {
        struct Change {
            to_new: IntMatrix,
            to_old: IntMatrix,
            pres: Presentation,
        }
        let changes: Vec<Change> = self
            .levels
            .iter()
            .map(|l| {
                let s = smith(&l.relations);
                let keep: Vec<usize> = (0..l.gens).filter(|&i| s.diag.get(i).is_none_or(|d| !d.is_one())).collect();
                let mut to_new = IntMatrix::zeros(keep.len(), l.gens);
                let mut to_old = IntMatrix::zeros(l.gens, keep.len());
                let mut rel = Vec::new();
                for (ni, &oi) in keep.iter().enumerate() {
                    for c in 0..l.gens {
                        to_new[(ni, c)] = s.p[(oi, c)].clone();
                        to_old[(c, ni)] = s.p_inv[(c, oi)].clone();
                    }
                    rel.push(s.diag.get(oi).cloned().unwrap_or_else(BigInt::zero));
                }
                let mut relations = IntMatrix::zeros(keep.len(), keep.len());
                for (i, d) in rel.iter().enumerate() {
                    relations[(i, i)] = d.clone();
                }
                Change { to_new, to_old, pres: Presentation { gens: keep.len(), relations } }
            })
            .collect();
        let conj = |f: &IntMatrix, src: usize, tgt: usize| {
            let mut m = changes[tgt].to_new.mul(f).mul(&changes[src].to_old);
            reduce_rows(&mut m, &changes[tgt].pres.relations);
            m
        };
        let k = self.group.k() as usize;
        MackeyFunctor {
            group: self.group,
            name: self.name.clone(),
            res: (0..k).map(|m| conj(&self.res[m], m + 1, m)).collect(),
            tr: (0..k).map(|m| conj(&self.tr[m], m, m + 1)).collect(),
            gamma: (0..=k).map(|m| conj(&self.gamma[m], m, m)).collect(),
            levels: changes.into_iter().map(|c| c.pres).collect(),
        }
    }

    /// Equality after normalization, ignoring names.
    pub fn same_as(&self, other: &MackeyFunctor) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.group == b.group && a.levels == b.levels && a.res == b.res && a.tr == b.tr && a.gamma == b.gamma
    }

    /// Lewis diagram as text, top level first.
    pub fn lewis_diagram(&self) -> String {
        let k = self.group.k();
        let mut lines = vec![format!("{} over {}", self.name, self.group)];
        let label = |m: u32| if m == 0 { "G/e".to_string() } else { format!("G/C_{}", self.group.pow(m)) };
        let width = (0..=k).map(|m| label(m).len()).max().unwrap_or(0);
        let norm = self.normalized();
        for m in (0..=k).rev() {
            lines.push(format!("{:width$}  {}", label(m), self.value(m)));
            if m > 0 {
                lines.push(format!(
                    "{:width$}    res = {}   tr = {}",
                    "",
                    describe_map(norm.res(m - 1), norm.level(m), norm.level(m - 1)),
                    describe_map(norm.tr(m - 1), norm.level(m - 1), norm.level(m)),
                ));
            }
        }
        lines.join("\n")
    }

    /// Levels and scalar structure maps, for structured output.
    pub fn summary(&self) -> MackeySummary {
        let norm = self.normalized();
        let k = self.group.k();
        MackeySummary {
            name: self.name.clone(),
            p: self.group.p(),
            k,
            levels: (0..=k).map(|m| self.value(m).to_string()).collect(),
            res: (0..k).map(|m| describe_map(norm.res(m), norm.level(m + 1), norm.level(m))).collect(),
            tr: (0..k).map(|m| describe_map(norm.tr(m), norm.level(m), norm.level(m + 1))).collect(),
        }
    }
}

/// Structured view of a functor for JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct MackeySummary {
    pub name: String,
    pub p: u64,
    pub k: u32,
    /// bottom (`G/e`) first
    pub levels: Vec<String>,
    /// `res[m]`: level `m + 1` to `m`
    pub res: Vec<String>,
    /// `tr[m]`: level `m` to `m + 1`
    pub tr: Vec<String>,
}

fn describe_map(f: &IntMatrix, source: &Presentation, target: &Presentation) -> String {
    if source.gens == 0 || target.gens == 0 {
        return "0".into();
    }
    if f.rows() == 1 && f.cols() == 1 {
        let x = &f[(0, 0)];
        let (tq, sq) = (&target.relations, &source.relations);
        let t_ord = if tq.cols() == 0 { BigInt::zero() } else { tq[(0, 0)].clone() };
        let s_ord = if sq.cols() == 0 { BigInt::zero() } else { sq[(0, 0)].clone() };
        if x.is_one() && !t_ord.is_zero() && t_ord != s_ord {
            return "q".into();
        }
        return x.to_string();
    }
    let rows: Vec<String> = (0..f.rows())
        .map(|i| (0..f.cols()).map(|j| f[(i, j)].to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn add(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(i, j)] += &b[(i, j)];
        }
    }
    out
}

fn pow_matrix(a: &IntMatrix, e: u64) -> IntMatrix {
    let mut result = IntMatrix::identity(a.rows());
    let mut base = a.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    result
}

/// Reduces row `i` modulo the diagonal relation `relations[(i, i)]`.
fn reduce_rows(m: &mut IntMatrix, relations: &IntMatrix) {
    for i in 0..m.rows() {
        let d = &relations[(i, i)];
        if d.is_zero() {
            continue;
        }
        for j in 0..m.cols() {
            let r = m[(i, j)].mod_floor(d);
            m[(i, j)] = r;
        }
    }
}

fn orders_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// The constant functor `Z`: restrictions are the identity, transfers are
/// multiplication by `p`.
pub fn constant_z(group: &Group) -> MackeyFunctor {
    let k = group.k() as usize;
    let p = group.prime();
    MackeyFunctor::from_cyclic(group, "Z".into(), &vec![BigInt::zero(); k + 1], &vec![1; k], &vec![p; k])
}

/// The dual `Z*`: restrictions are `p`, transfers the identity.
pub fn dual_z(group: &Group) -> MackeyFunctor {
    let k = group.k() as usize;
    let p = group.prime();
    MackeyFunctor::from_cyclic(group, "Z*".into(), &vec![BigInt::zero(); k + 1], &vec![p; k], &vec![1; k])
}

/// `Z(i, j)` for `0 <= j <= i <= k`: value `Z` everywhere, restriction `p`
/// and transfer `1` on the steps `j <= m < i`, the constant structure
/// elsewhere. `Z(i, i)` is the constant functor.
pub fn z_ij(i: u32, j: u32, group: &Group) -> Result<MackeyFunctor> {
    let k = group.k();
    if j > i || i > k {
        return Err(Error::InadmissibleMackey { family: "Z", i, j, k });
    }
    let p = group.prime();
    let twisted = |m: u32| j <= m && m < i;
    let res: Vec<i64> = (0..k).map(|m| if twisted(m) { p } else { 1 }).collect();
    let tr: Vec<i64> = (0..k).map(|m| if twisted(m) { 1 } else { p }).collect();
    let orders = vec![BigInt::zero(); k as usize + 1];
    Ok(MackeyFunctor::from_cyclic(group, format!("Z({i},{j})"), &orders, &res, &tr))
}

/// `B(i, j)` for `i >= 1`, `j >= 0`, `i + j <= k`: the quotient of `Z` by the
/// image of `Z(i + j, j)`. Level `m` is `Z/p^i` for `m >= i + j`,
/// `Z/p^{m-j}` for `j < m < i + j` and `0` for `m <= j`; restrictions are the
/// canonical quotients and transfers multiplication by `p`.
pub fn b_ij(i: u32, j: u32, group: &Group) -> Result<MackeyFunctor> {
    let k = group.k();
    if i < 1 || i + j > k {
        return Err(Error::InadmissibleMackey { family: "B", i, j, k });
    }
    let orders: Vec<BigInt> = (0..=k)
        .map(|m| {
            if m >= i + j {
                orders_pow(group.p(), i)
            } else if m > j {
                orders_pow(group.p(), m - j)
            } else {
                BigInt::one()
            }
        })
        .collect();
    let p = group.prime();
    Ok(MackeyFunctor::from_cyclic(group, format!("B({i},{j})"), &orders, &vec![1; k as usize], &vec![p; k as usize]))
}

/// Restriction to `C_{p^h}`: keeps levels `0..=h`.
pub fn restrict_mackey(m: &MackeyFunctor, h: u32) -> Result<MackeyFunctor> {
    let sub = m.group.subgroup(h)?;
    let step = m.group.pow(m.group.k() - h) as u64;
    let h = h as usize;
    Ok(MackeyFunctor {
        group: sub,
        name: format!("↓{}", m.name),
        levels: m.levels[..=h].to_vec(),
        res: m.res[..h].to_vec(),
        tr: m.tr[..h].to_vec(),
        gamma: m.gamma[..=h].iter().map(|g| pow_matrix(g, step)).collect(),
    })
}

/// Induction of a `C_{p^h}`-functor up to `group`.
///
/// Level `m` is `[G : C_{p^{max(m,h)}}]` copies of level `min(m, h)` of the
/// input, indexed by `u mod p^{k - max(m, h)}`; `γ` sends copy `u` to copy
/// `u + 1`, twisting the wrap-around by the input's own generator below
/// level `h`.
pub fn induce_mackey(m: &MackeyFunctor, group: &Group) -> Result<MackeyFunctor> {
    let h = m.group.k();
    if h > group.k() || m.group.p() != group.p() {
        return Err(Error::GroupMismatch);
    }
    let k = group.k();
    let count = |lvl: u32| group.pow(k - lvl.max(h)) as usize;
    let inner = |lvl: u32| lvl.min(h) as usize;
    let levels: Vec<Presentation> = (0..=k).map(|l| m.levels[inner(l)].power(count(l))).collect();

    let mut res = Vec::new();
    let mut tr = Vec::new();
    for l in 0..k {
        let (lo, hi) = (&levels[l as usize], &levels[l as usize + 1]);
        let g_lo = m.levels[inner(l)].gens;
        let g_hi = m.levels[inner(l + 1)].gens;
        let (c_lo, c_hi) = (count(l), count(l + 1));
        let mut r = IntMatrix::zeros(lo.gens, hi.gens);
        let mut t = IntMatrix::zeros(hi.gens, lo.gens);
        if l < h {
            // same copy index on both levels
            debug_assert_eq!(c_lo, c_hi);
            for u in 0..c_lo {
                place(&mut r, u * g_lo, u * g_hi, &m.res[l as usize]);
                place(&mut t, u * g_hi, u * g_lo, &m.tr[l as usize]);
            }
        } else {
            let id = IntMatrix::identity(g_lo);
            for u in 0..c_lo {
                let up = u % c_hi;
                place(&mut r, u * g_lo, up * g_hi, &id);
                place(&mut t, up * g_hi, u * g_lo, &id);
            }
        }
        res.push(r);
        tr.push(t);
    }
    let gamma = (0..=k)
        .map(|l| {
            let c = count(l);
            let g = m.levels[inner(l)].gens;
            let mut mat = IntMatrix::zeros(c * g, c * g);
            for u in 0..c {
                let block = if u + 1 == c && l < h { m.gamma[l as usize].clone() } else { IntMatrix::identity(g) };
                place(&mut mat, ((u + 1) % c) * g, u * g, &block);
            }
            mat
        })
        .collect();
    Ok(MackeyFunctor { group: *group, name: format!("↑{}", m.name), levels, res, tr, gamma })
}

fn place(target: &mut IntMatrix, row: usize, col: usize, block: &IntMatrix) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target[(row + i, col + j)] = block[(i, j)].clone();
        }
    }
}

/// `↑^G_{C_{p^h}} ↓^G_{C_{p^h}} M`.
pub fn ind_res(m: &MackeyFunctor, h: u32) -> Result<MackeyFunctor> {
    let r = restrict_mackey(m, h)?;
    let out = induce_mackey(&r, &m.group)?;
    Ok(out.with_name(format!("↑↓_{h} {}", m.name)))
}

/// A morphism of Mackey functors given levelwise on generators.
#[derive(Clone, Debug)]
pub struct MackeyMorphism {
    pub source: MackeyFunctor,
    pub target: MackeyFunctor,
    /// `maps[m]`: level `m` of source to level `m` of target.
    pub maps: Vec<IntMatrix>,
}

impl MackeyMorphism {
    /// Naturality with respect to restriction, transfer and `γ`.
    pub fn check_natural(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        let k = s.group.k();
        for m in 0..k {
            let lo = &t.levels[m as usize];
            let hi = &t.levels[m as usize + 1];
            let f_lo = &self.maps[m as usize];
            let f_hi = &self.maps[m as usize + 1];
            if !MackeyFunctor::maps_agree(lo, &f_lo.mul(s.res(m)), &t.res(m).mul(f_hi)) {
                return Err(Error::Invariant(format!("morphism does not commute with res at level {m}")));
            }
            if !MackeyFunctor::maps_agree(hi, &f_hi.mul(s.tr(m)), &t.tr(m).mul(f_lo)) {
                return Err(Error::Invariant(format!("morphism does not commute with tr at level {m}")));
            }
        }
        Ok(())
    }

    /// Levelwise cokernel with the induced structure maps.
    pub fn cokernel(&self) -> MackeyFunctor {
        let t = &self.target;
        let levels = t
            .levels
            .iter()
            .zip(&self.maps)
            .map(|(l, f)| Presentation { gens: l.gens, relations: l.relations.hcat(f) })
            .collect();
        MackeyFunctor { levels, name: format!("coker({} → {})", self.source.name, t.name), ..t.clone() }
    }
}

/// The map `Z(i + j, j) -> Z` sending `1` to `1` at the bottom level. Its
/// level-`m` component is forced by compatibility with transfers.
pub fn z_ij_to_constant(i: u32, j: u32, group: &Group) -> Result<MackeyMorphism> {
    let source = z_ij(i + j, j, group)?;
    let target = constant_z(group);
    let mut scalars = vec![BigInt::one()];
    for m in 0..group.k() {
        // f_{m+1} tr_src = tr_tgt f_m
        let tr_src = &source.tr(m)[(0, 0)];
        let tr_tgt = &target.tr(m)[(0, 0)];
        let num = tr_tgt * &scalars[m as usize];
        let (q, r) = num.div_rem(tr_src);
        if !r.is_zero() {
            return Err(Error::Invariant("no transfer-compatible map Z(i+j,j) → Z".into()));
        }
        scalars.push(q);
    }
    let maps = scalars.iter().map(|s| IntMatrix::diagonal(std::slice::from_ref(s))).collect();
    let f = MackeyMorphism { source, target, maps };
    f.check_natural()?;
    Ok(f)
}

/// Parses `Z`, `Z*`, `Z(i,j)` or `B(i,j)`.
pub fn parse_coefficients(input: &str, group: &Group) -> Result<MackeyFunctor> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    match s.as_str() {
        "Z" => return Ok(constant_z(group)),
        "Z*" => return Ok(dual_z(group)),
        _ => {}
    }
    let (family, rest) = if let Some(r) = s.strip_prefix("Z(") {
        ("Z", r)
    } else if let Some(r) = s.strip_prefix("B(") {
        ("B", r)
    } else {
        return Err(Error::Parse { pos: 0, msg: format!("unknown coefficient system '{input}'") });
    };
    let body = rest.strip_suffix(')').ok_or_else(|| Error::Parse { pos: s.len(), msg: "expected ')'".into() })?;
    let mut parts = body.split(',');
    let mut num = |offset: usize| -> Result<u32> {
        parts
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or(Error::Parse { pos: offset, msg: "expected two non-negative integers".into() })
    };
    let i = num(2)?;
    let j = num(2)?;
    if parts.next().is_some() {
        return Err(Error::Parse { pos: 2, msg: "expected two non-negative integers".into() });
    }
    match family {
        "Z" => z_ij(i, j, group),
        _ => b_ij(i, j, group),
    }
}
