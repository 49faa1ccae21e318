//! Bredon homology of virtual representation spheres.
//!
//! A sphere `S^{A - B}` is modelled by an equivariant cellular chain complex
//! of permutation modules: the standard decomposition of `S^A`, tensored with
//! the dual of the decomposition of `S^B`. Each cell is an orbit
//! `G/C_{p^s}` whose points carry labels in `Z/p^{k-s}`, with `γ` acting by
//! `+1`. Evaluating on a Mackey functor at level `m` turns each cell into
//! `p^{k - max(s, m)}` copies of `M(G/C_{p^{min(s, m)}})`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{column_lattice, kernel, smith, solve_in_lattice, IntMatrix, Smith};
use crate::mackey::{AbGroup, MackeyFunctor, Presentation};
use crate::params::Group;
use crate::rep::{Rep, RepDiff};

/// Equivariant cell structure of a virtual representation sphere.
///
/// `cells[i]` lists the isotropy exponents `s` (cell `G/C_{p^s}_+ ∧ e^d`) in
/// degree `d = bottom + i`. `boundary[i][c][c']` gives the boundary of the
/// base point of cell `c` in degree `d` as coefficients over the labels of
/// cell `c'` in degree `d - 1`; the boundary of any other point follows by
/// equivariance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellStructure {
    group: Group,
    bottom: i64,
    cells: Vec<Vec<u32>>,
    boundary: Vec<Vec<Vec<Vec<i64>>>>,
}

impl CellStructure {
    fn labels(&self, s: u32) -> usize {
        self.group.pow(self.group.k() - s) as usize
    }

    /// `S^0`: one fixed cell in degree 0.
    pub fn point(group: &Group) -> Self {
        CellStructure { group: *group, bottom: 0, cells: vec![vec![group.k()]], boundary: vec![vec![vec![]]] }
    }

    /// `S^{λ_{j_1} + ... + λ_{j_r}}`, built with the largest isotropy first:
    /// a fixed 0-cell, then cells `G/C_{p^{j_i}}` in degrees `2i - 1` and
    /// `2i`. Odd boundaries send the base point to the sum of all points of
    /// the cell below, even ones are `1 - γ`.
    pub fn positive(group: &Group, js: &[u32]) -> Self {
        let mut js = js.to_vec();
        js.sort_unstable_by(|a, b| b.cmp(a));
        let mut cs = CellStructure::point(group);
        let mut below = group.k();
        for &j in &js {
            assert!(j < group.k(), "λ_{j} does not exist over {group}");
            let below_labels = cs.labels(below);
            cs.cells.push(vec![j]);
            cs.boundary.push(vec![vec![vec![1; below_labels]]]);
            let mut twist = vec![0; cs.labels(j)];
            twist[0] = 1;
            twist[1] = -1;
            cs.cells.push(vec![j]);
            cs.boundary.push(vec![vec![twist]]);
            below = j;
        }
        cs
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Lowest degree carrying a cell.
    pub fn bottom(&self) -> i64 {
        self.bottom
    }

    /// Highest degree carrying a cell.
    pub fn top(&self) -> i64 {
        self.bottom + self.cells.len() as i64 - 1
    }

    /// Isotropy exponents of the cells in degree `d`.
    pub fn cells_in(&self, d: i64) -> &[u32] {
        match self.index(d) {
            Some(i) => &self.cells[i],
            None => &[],
        }
    }

    /// Boundary of the base point of cell `c` in degree `d`.
    pub fn boundary_of(&self, d: i64, c: usize) -> &[Vec<i64>] {
        &self.boundary[self.index(d).expect("degree out of range")][c]
    }

    fn index(&self, d: i64) -> Option<usize> {
        let i = d - self.bottom;
        (0..self.cells.len() as i64).contains(&i).then_some(i as usize)
    }

    /// Number of cells in each degree, bottom first.
    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn shifted(mut self, n: i64) -> Self {
        self.bottom += n;
        self
    }

    /// The dual complex `Hom(C, Z)`, concentrated in negated degrees.
    /// Permutation modules are self-dual, so the boundaries are transposes.
    pub fn dual(&self) -> Self {
        let len = self.cells.len();
        let cells: Vec<Vec<u32>> = (0..len).rev().map(|i| self.cells[i].clone()).collect();
        let mut boundary: Vec<Vec<Vec<Vec<i64>>>> = vec![vec![]; len];
        boundary[0] = vec![vec![]; cells[0].len()];
        // dual degree index `len-1-i` holds original degree index `i`;
        // its boundary is the transpose of the original boundary out of `i + 1`
        for i in 0..len - 1 {
            let di = len - 1 - i;
            let src = &self.cells[i];
            let tgt = &self.cells[i + 1];
            let mut out = vec![vec![Vec::new(); tgt.len()]; src.len()];
            for (cp, &sp) in src.iter().enumerate() {
                for (c, &s) in tgt.iter().enumerate() {
                    let base = &self.boundary[i + 1][c][cp];
                    let n_c = self.labels(s);
                    let n_cp = self.labels(sp);
                    // coefficient of the base point of c' in ∂(γ^x e_c)
                    let v: Vec<i64> = (0..n_c).map(|x| base[(n_cp - x % n_cp) % n_cp]).collect();
                    out[cp][c] = v;
                }
            }
            boundary[di] = out;
        }
        CellStructure { group: self.group, bottom: -self.top(), cells, boundary }
    }

    /// Tensor product with the diagonal action and Koszul signs.
    pub fn tensor(&self, other: &CellStructure) -> Self {
        assert_eq!(self.group, other.group, "{}", Error::GroupMismatch);
        let p = ProductLayout::new(self, other);
        let mut boundary = Vec::with_capacity(p.cells.len());
        for (di, deg_cells) in p.cells.iter().enumerate() {
            let d = p.bottom + di as i64;
            let below = if di == 0 { &[][..] } else { &p.cells[di - 1][..] };
            let mut out = Vec::with_capacity(deg_cells.len());
            for cell in deg_cells {
                let mut bd: Vec<Vec<i64>> = below.iter().map(|c| vec![0; self.labels(c.isotropy)]).collect();
                let (da, db) = (cell.da, d - cell.da);
                // ∂a ⊗ b_r
                if da > self.bottom {
                    for (ap, va) in self.boundary_of(da, cell.a).iter().enumerate() {
                        for (y, &coef) in va.iter().enumerate() {
                            if coef != 0 {
                                let (idx, t) = p.locate(da - 1, db, ap, cell.b, y, cell.r);
                                bd[idx][t] += coef;
                            }
                        }
                    }
                }
                // ± a_0 ⊗ ∂b_r
                if db > other.bottom {
                    let sign = if da.rem_euclid(2) == 0 { 1 } else { -1 };
                    for (bp, vb) in other.boundary_of(db, cell.b).iter().enumerate() {
                        let n = vb.len();
                        for (y, &coef) in vb.iter().enumerate() {
                            if coef != 0 {
                                let (idx, t) = p.locate(da, db - 1, cell.a, bp, 0, (y + cell.r) % n);
                                bd[idx][t] += sign * coef;
                            }
                        }
                    }
                }
                out.push(bd);
            }
            boundary.push(out);
        }
        let cells = p.cells.iter().map(|cs| cs.iter().map(|c| c.isotropy).collect()).collect();
        CellStructure { group: self.group, bottom: p.bottom, cells, boundary }
    }

    /// Checks `∂∘∂ = 0` and that each boundary is invariant under the
    /// stabilizer of its source cell.
    pub fn check(&self) -> Result<()> {
        for i in 1..self.cells.len() {
            for (c, &s) in self.cells[i].iter().enumerate() {
                let n = self.labels(s);
                for v in &self.boundary[i][c] {
                    let m = v.len();
                    if (0..m).any(|y| v[y] != v[(y + n) % m]) {
                        return Err(Error::Invariant(format!("boundary of cell {c} in degree {} is not equivariant", self.bottom + i as i64)));
                    }
                }
                if i >= 2 {
                    let mut acc: Vec<Vec<i64>> = self.cells[i - 2].iter().map(|&t| vec![0; self.labels(t)]).collect();
                    for (cp, v) in self.boundary[i][c].iter().enumerate() {
                        for (y, &a) in v.iter().enumerate() {
                            if a == 0 {
                                continue;
                            }
                            for (cpp, w) in self.boundary[i - 1][cp].iter().enumerate() {
                                let m = w.len();
                                for (z, &b) in w.iter().enumerate() {
                                    acc[cpp][(z + y) % m] += a * b;
                                }
                            }
                        }
                    }
                    if acc.iter().flatten().any(|&x| x != 0) {
                        return Err(Error::Invariant(format!("∂∂ ≠ 0 on cell {c} in degree {}", self.bottom + i as i64)));
                    }
                }
            }
        }
        Ok(())
    }
}

struct ProductCell {
    da: i64,
    a: usize,
    b: usize,
    r: usize,
    isotropy: u32,
}

/// Orbit decomposition of `(G/C_{p^s}) x (G/C_{p^t})`: orbits are indexed by
/// `r = y - x mod p^{k - max(s,t)}` and the point at position `u` of orbit
/// `r` is `(u mod N_a, r + u mod N_b)`.
struct ProductLayout {
    bottom: i64,
    cells: Vec<Vec<ProductCell>>,
    // (degree of A part, degree of B part, a, b) -> first orbit cell in the product degree
    start: std::collections::HashMap<(i64, i64, usize, usize), usize>,
    na: Vec<Vec<usize>>,
    nb: Vec<Vec<usize>>,
    a_bottom: i64,
    b_bottom: i64,
}

impl ProductLayout {
    fn new(a: &CellStructure, b: &CellStructure) -> Self {
        let bottom = a.bottom + b.bottom;
        let top = a.top() + b.top();
        let mut cells = Vec::new();
        let mut start = std::collections::HashMap::new();
        for d in bottom..=top {
            let mut here = Vec::new();
            for da in a.bottom..=a.top() {
                let db = d - da;
                if db < b.bottom || db > b.top() {
                    continue;
                }
                for (ia, &sa) in a.cells_in(da).iter().enumerate() {
                    for (ib, &sb) in b.cells_in(db).iter().enumerate() {
                        start.insert((da, db, ia, ib), here.len());
                        let count = a.labels(sa.max(sb));
                        for r in 0..count {
                            here.push(ProductCell { da, a: ia, b: ib, r, isotropy: sa.min(sb) });
                        }
                    }
                }
            }
            cells.push(here);
        }
        let na = a.cells.iter().map(|cs| cs.iter().map(|&s| a.labels(s)).collect()).collect();
        let nb = b.cells.iter().map(|cs| cs.iter().map(|&s| b.labels(s)).collect()).collect();
        ProductLayout { bottom, cells, start, na, nb, a_bottom: a.bottom, b_bottom: b.bottom }
    }

    /// Product cell index and position of the point `(x, y)` in cell
    /// `a x b`, where `a` sits in degree `da` and `b` in degree `db`.
    fn locate(&self, da: i64, db: i64, a: usize, b: usize, x: usize, y: usize) -> (usize, usize) {
        let n_a = self.na[(da - self.a_bottom) as usize][a];
        let n_b = self.nb[(db - self.b_bottom) as usize][b];
        let m = n_a.min(n_b);
        let r = (y + m - x % m) % m;
        let u = if n_a >= n_b { x } else { (y + n_b - r) % n_b };
        (self.start[&(da, db, a, b)] + r, u)
    }
}

/// Cell structure of `S^{plus} ∧ S^{-minus}`. Trivial summands on either side
/// are degree shifts.
pub fn cell_structure(v: &RepDiff) -> CellStructure {
    let g = *v.plus.group();
    let lambdas = |r: &Rep| -> Vec<u32> {
        assert!(r.is_actual(), "cell structures need actual representations on each side");
        let mut js = Vec::new();
        for (j, &mult) in r.lambdas().iter().enumerate() {
            js.extend(std::iter::repeat_n(j as u32, mult as usize));
        }
        js
    };
    let pos = CellStructure::positive(&g, &lambdas(&v.plus));
    let neg = CellStructure::positive(&g, &lambdas(&v.minus)).dual();
    let shift = v.plus.trivial_mult() - v.minus.trivial_mult();
    let cs = if neg.cells.len() == 1 {
        pos
    } else if pos.cells.len() == 1 {
        neg
    } else {
        pos.tensor(&neg)
    };
    cs.shifted(shift)
}

/// Cell structure of `S^V` with `V` split into positive and negative parts.
pub fn sphere(v: &Rep) -> CellStructure {
    cell_structure(&v.split())
}

// ---------------------------------------------------------------------------
// Level complexes

fn require_trivial_weyl(m: &MackeyFunctor) {
    assert!(m.has_trivial_weyl_action(), "coefficients {} must have trivial Weyl action", m.name());
}

/// Orbit bookkeeping of one degree at one level.
struct DegreeLayout {
    /// per cell: (orbit count, inner level, gens per copy, offset)
    cells: Vec<(usize, u32, usize, usize)>,
    gens: usize,
}

fn layout(cs: &CellStructure, m: &MackeyFunctor, level: u32, d: i64) -> DegreeLayout {
    let k = cs.group.k();
    let mut offset = 0;
    let cells = cs
        .cells_in(d)
        .iter()
        .map(|&s| {
            let count = cs.group.pow(k - s.max(level)) as usize;
            let inner = s.min(level);
            let g = m.level(inner).gens;
            let entry = (count, inner, g, offset);
            offset += count * g;
            entry
        })
        .collect();
    DegreeLayout { cells, gens: offset }
}

fn relations(m: &MackeyFunctor, lay: &DegreeLayout) -> IntMatrix {
    let blocks: Vec<IntMatrix> = lay
        .cells
        .iter()
        .flat_map(|&(count, inner, _, _)| std::iter::repeat_n(m.level(inner).relations.clone(), count))
        .collect();
    if blocks.is_empty() {
        return IntMatrix::zeros(0, 0);
    }
    IntMatrix::block_diag(&blocks)
}

fn place(target: &mut IntMatrix, row: usize, col: usize, block: &IntMatrix, scale: &BigInt) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            target[(row + i, col + j)] += &block[(i, j)] * scale;
        }
    }
}

/// Matrix of `∂_d` at `level`, from degree `d` generators to degree `d - 1`.
fn differential(cs: &CellStructure, m: &MackeyFunctor, level: u32, d: i64) -> IntMatrix {
    let src = layout(cs, m, level, d);
    let tgt = layout(cs, m, level, d - 1);
    let mut out = IntMatrix::zeros(tgt.gens, src.gens);
    if src.gens == 0 || tgt.gens == 0 {
        return out;
    }
    let p = cs.group.prime();
    for (c, &(count, t_src, g_src, off_src)) in src.cells.iter().enumerate() {
        if g_src == 0 {
            continue;
        }
        let bd = cs.boundary_of(d, c);
        for (cp, &(count_t, t_tgt, g_tgt, off_tgt)) in tgt.cells.iter().enumerate() {
            if g_tgt == 0 {
                continue;
            }
            let base = &bd[cp];
            let n = base.len();
            let structure = if t_src <= t_tgt { m.tr_between(t_src, t_tgt) } else { m.res_between(t_src, t_tgt) };
            for u in 0..count {
                let mut sums = vec![0i64; count_t];
                for (y, &coef) in base.iter().enumerate() {
                    if coef != 0 {
                        sums[((y + u) % n) % count_t] += coef;
                    }
                }
                for (v, &c_v) in sums.iter().enumerate() {
                    if c_v == 0 {
                        continue;
                    }
                    let scale = if t_src <= t_tgt {
                        c_v
                    } else {
                        let index = p.pow(t_src - t_tgt);
                        assert!(c_v % index == 0, "non-equivariant boundary coefficient {c_v}");
                        c_v / index
                    };
                    place(&mut out, off_tgt + v * g_tgt, off_src + u * g_src, &structure, &BigInt::from(scale));
                }
            }
        }
    }
    out
}

/// Chain-level restriction from `level + 1` to `level` in degree `d`.
fn chain_res(cs: &CellStructure, m: &MackeyFunctor, level: u32, d: i64) -> IntMatrix {
    let lo = layout(cs, m, level, d);
    let hi = layout(cs, m, level + 1, d);
    let mut out = IntMatrix::zeros(lo.gens, hi.gens);
    for (&(count_lo, t_lo, g_lo, off_lo), &(count_hi, t_hi, g_hi, off_hi)) in lo.cells.iter().zip(&hi.cells) {
        let block = m.res_between(t_hi, t_lo);
        for u in 0..count_lo {
            place(&mut out, off_lo + u * g_lo, off_hi + (u % count_hi) * g_hi, &block, &BigInt::one());
        }
    }
    out
}

/// Chain-level transfer from `level` to `level + 1` in degree `d`.
fn chain_tr(cs: &CellStructure, m: &MackeyFunctor, level: u32, d: i64) -> IntMatrix {
    let lo = layout(cs, m, level, d);
    let hi = layout(cs, m, level + 1, d);
    let mut out = IntMatrix::zeros(hi.gens, lo.gens);
    for (&(count_lo, t_lo, g_lo, off_lo), &(count_hi, t_hi, g_hi, off_hi)) in lo.cells.iter().zip(&hi.cells) {
        let block = m.tr_between(t_lo, t_hi);
        for u in 0..count_lo {
            place(&mut out, off_hi + (u % count_hi) * g_hi, off_lo + u * g_lo, &block, &BigInt::one());
        }
    }
    out
}

/// Action of `γ` on the level-`level` chains in degree `d`.
fn chain_gamma(cs: &CellStructure, m: &MackeyFunctor, level: u32, d: i64) -> IntMatrix {
    let lay = layout(cs, m, level, d);
    let mut out = IntMatrix::zeros(lay.gens, lay.gens);
    for &(count, _, g, off) in &lay.cells {
        let id = IntMatrix::identity(g);
        for u in 0..count {
            place(&mut out, off + ((u + 1) % count) * g, off + u * g, &id, &BigInt::one());
        }
    }
    out
}

/// The chain complex of `S^V` with coefficients in `M`, evaluated at
/// `G/C_{p^level}`.
#[derive(Clone, Debug)]
pub struct LevelComplex {
    pub level: u32,
    pub bottom: i64,
    /// chain groups, bottom degree first
    pub groups: Vec<Presentation>,
    /// `differentials[i]`: degree `bottom + i` to degree `bottom + i - 1`
    pub differentials: Vec<IntMatrix>,
}

impl LevelComplex {
    pub fn top(&self) -> i64 {
        self.bottom + self.groups.len() as i64 - 1
    }

    pub fn group_in(&self, d: i64) -> Option<&Presentation> {
        let i = d - self.bottom;
        (0..self.groups.len() as i64).contains(&i).then(|| &self.groups[i as usize])
    }

    /// `∂_d`, or `None` outside the complex.
    pub fn differential(&self, d: i64) -> Option<&IntMatrix> {
        let i = d - self.bottom;
        (1..self.groups.len() as i64).contains(&i).then(|| &self.differentials[i as usize])
    }
}

/// Builds the level complex and asserts `∂∘∂ = 0` modulo the coefficient
/// relations.
pub fn level_complex(v: &RepDiff, m: &MackeyFunctor, level: u32) -> Result<LevelComplex> {
    let cs = cell_structure(v);
    level_complex_of(&cs, m, level)
}

pub fn level_complex_of(cs: &CellStructure, m: &MackeyFunctor, level: u32) -> Result<LevelComplex> {
    check_inputs(cs, m, level)?;
    let mut groups = Vec::new();
    let mut differentials = Vec::new();
    for d in cs.bottom()..=cs.top() {
        let lay = layout(cs, m, level, d);
        groups.push(Presentation { gens: lay.gens, relations: relations(m, &lay) });
        differentials.push(differential(cs, m, level, d));
    }
    let lc = LevelComplex { level, bottom: cs.bottom(), groups, differentials };
    for i in 2..lc.groups.len() {
        let dd = lc.differentials[i - 1].mul(&lc.differentials[i]);
        let target = &lc.groups[i - 2];
        if !(0..dd.cols()).all(|j| target.is_zero_vec(&dd.column(j))) {
            return Err(Error::Invariant(format!("∂∂ ≠ 0 in degree {} at level {level}", lc.bottom + i as i64)));
        }
    }
    Ok(lc)
}

fn check_inputs(cs: &CellStructure, m: &MackeyFunctor, level: u32) -> Result<()> {
    if cs.group != *m.group() {
        return Err(Error::GroupMismatch);
    }
    if level > cs.group.k() {
        return Err(Error::LevelOutOfRange { level, k: cs.group.k() });
    }
    require_trivial_weyl(m);
    Ok(())
}

// ---------------------------------------------------------------------------
// Homology

/// Homology of a presented complex in one degree, with explicit generators.
struct LevelHomology {
    orders: Vec<BigInt>,
    reps: Vec<Vec<BigInt>>,
    cycles: Option<(Smith, usize)>,
    to_classes: IntMatrix,
}

impl LevelHomology {
    fn compute(d_in: &IntMatrix, rel_below: &IntMatrix, d_out: &IntMatrix, rel_here: &IntMatrix, gens: usize) -> Self {
        let empty = LevelHomology { orders: vec![], reps: vec![], cycles: None, to_classes: IntMatrix::zeros(0, 0) };
        if gens == 0 {
            return empty;
        }
        let ker = kernel(&d_in.hcat(rel_below));
        let cycle_gens = ker.row_slice(0, gens);
        let zc = column_lattice(&cycle_gens);
        if zc.cols() == 0 {
            return empty;
        }
        let zs = smith(&zc);
        let bounds = d_out.hcat(rel_here);
        let cols: Vec<Vec<BigInt>> = (0..bounds.cols())
            .map(|j| solve_in_lattice(&zs, zc.cols(), &bounds.column(j)).expect("boundary is not a cycle"))
            .collect();
        let y = IntMatrix::from_columns(zc.cols(), &cols);
        let s = smith(&y);
        let mut orders = Vec::new();
        let mut reps = Vec::new();
        let mut rows = Vec::new();
        for i in 0..zc.cols() {
            let order = s.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if order.is_one() {
                continue;
            }
            reps.push(zc.mul_vec(&s.p_inv.column(i)));
            rows.push(i);
            orders.push(order);
        }
        let mut to_classes = IntMatrix::zeros(rows.len(), zc.cols());
        for (r, &i) in rows.iter().enumerate() {
            for j in 0..zc.cols() {
                to_classes[(r, j)] = s.p[(i, j)].clone();
            }
        }
        LevelHomology { orders, reps, cycles: Some((zs, zc.cols())), to_classes }
    }

    fn classify(&self, x: &[BigInt]) -> Vec<BigInt> {
        let Some((zs, cols)) = &self.cycles else { return vec![] };
        let c = solve_in_lattice(zs, *cols, x).expect("chain is not a cycle");
        self.to_classes
            .mul_vec(&c)
            .into_iter()
            .zip(&self.orders)
            .map(|(v, o)| if o.is_zero() { v } else { v.mod_floor(o) })
            .collect()
    }

    fn group(&self) -> AbGroup {
        let torsion = self.orders.iter().filter(|o| !o.is_zero()).cloned().collect();
        AbGroup::new(torsion, self.orders.iter().filter(|o| o.is_zero()).count())
    }

    fn presentation(&self) -> Presentation {
        Presentation { gens: self.orders.len(), relations: IntMatrix::diagonal(&self.orders) }
    }

    /// Matrix of the map induced by the chain map `f` into `target`.
    fn induced(&self, f: &IntMatrix, target: &LevelHomology) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.reps.iter().map(|x| target.classify(&f.mul_vec(x))).collect();
        IntMatrix::from_columns(target.orders.len(), &cols)
    }
}

fn homology_at(cs: &CellStructure, m: &MackeyFunctor, level: u32, d: i64) -> LevelHomology {
    let here = layout(cs, m, level, d);
    let below = layout(cs, m, level, d - 1);
    LevelHomology::compute(
        &differential(cs, m, level, d),
        &relations(m, &below),
        &differential(cs, m, level, d + 1),
        &relations(m, &here),
        here.gens,
    )
}

/// `H_d(S^V; M)(G/C_{p^level})` as an abstract group.
pub fn level_homology(cs: &CellStructure, m: &MackeyFunctor, level: u32, d: i64) -> Result<AbGroup> {
    check_inputs(cs, m, level)?;
    if d < cs.bottom() || d > cs.top() {
        return Ok(AbGroup::zero());
    }
    Ok(homology_at(cs, m, level, d).group())
}

/// `H_d(S^V; M)` as a Mackey functor.
#[derive(Clone, Debug)]
pub struct BredonHomology {
    pub degree: i64,
    functor: MackeyFunctor,
}

impl BredonHomology {
    pub fn value(&self, level: u32) -> AbGroup {
        self.functor.value(level)
    }

    /// Values bottom level first.
    pub fn values(&self) -> Vec<AbGroup> {
        (0..=self.functor.group().k()).map(|m| self.value(m)).collect()
    }

    /// Restriction from `level + 1` to `level`, in the chosen generators.
    pub fn res(&self, level: u32) -> &IntMatrix {
        self.functor.res(level)
    }

    pub fn functor(&self) -> &MackeyFunctor {
        &self.functor
    }

    pub fn is_zero(&self) -> bool {
        self.functor.is_zero()
    }
}

/// Computes `H_d(S^V; M)` at every level together with its restrictions,
/// transfers and Weyl action.
pub fn bredon_homology(v: &RepDiff, m: &MackeyFunctor, d: i64) -> Result<BredonHomology> {
    bredon_homology_of(&cell_structure(v), m, d)
}

pub fn bredon_homology_of(cs: &CellStructure, m: &MackeyFunctor, d: i64) -> Result<BredonHomology> {
    check_inputs(cs, m, 0)?;
    let k = cs.group.k();
    let levels: Vec<LevelHomology> = (0..=k).map(|l| homology_at(cs, m, l, d)).collect();
    let mut res = Vec::new();
    let mut tr = Vec::new();
    for l in 0..k {
        res.push(levels[l as usize + 1].induced(&chain_res(cs, m, l, d), &levels[l as usize]));
        tr.push(levels[l as usize].induced(&chain_tr(cs, m, l, d), &levels[l as usize + 1]));
    }
    let gamma = (0..=k).map(|l| levels[l as usize].induced(&chain_gamma(cs, m, l, d), &levels[l as usize])).collect();
    let functor = MackeyFunctor::from_parts(
        &cs.group,
        format!("H_{d}(·; {})", m.name()),
        levels.iter().map(LevelHomology::presentation).collect(),
        res,
        tr,
        gamma,
    )?;
    Ok(BredonHomology { degree: d, functor })
}

/// Whether the restriction `H_{-ε}(S^{-W}; B(i,j))(G/G) → (G/C_{p^h})` is
/// injective for both `ε = 0, 1`.
pub fn homres_injective(w: &Rep, i: u32, j: u32, h: u32) -> Result<bool> {
    let g = *w.group();
    if !w.is_actual() {
        return Err(Error::Invariant(format!("{w} is not an actual representation")));
    }
    if i + j > h || h > g.k() {
        return Err(Error::LevelOutOfRange { level: h, k: g.k() });
    }
    let b = crate::mackey::b_ij(i, j, &g)?;
    let cs = sphere(&-w);
    for eps in 0..=1 {
        let hom = bredon_homology_of(&cs, &b, -eps)?;
        let f = hom.functor();
        let mut map = IntMatrix::identity(f.level(g.k()).gens);
        for l in (h..g.k()).rev() {
            map = f.res(l).mul(&map);
        }
        if !injective(&map, f.level(g.k()), f.level(h)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Injectivity of `f: Z^a / source -> Z^b / target` for diagonal presentations.
fn injective(f: &IntMatrix, source: &Presentation, target: &Presentation) -> bool {
    if source.gens == 0 {
        return true;
    }
    let ker = kernel(&f.hcat(&target.relations));
    (0..ker.cols()).all(|c| source.is_zero_vec(&ker.row_slice(0, source.gens).column(c)))
}

/// Absolute values of the first `count` differentials of the top-level
/// complex, read downward from the highest fixed cell. Each chain group on the
/// way must be a single `Z`; returns `None` otherwise.
pub fn top_level_pattern(v: &Rep, m: &MackeyFunctor, count: usize) -> Result<Option<(i64, Vec<BigInt>)>> {
    let cs = sphere(v);
    let lc = level_complex_of(&cs, m, cs.group.k())?;
    let start = (cs.bottom()..=cs.top()).rev().find(|&d| lc.group_in(d).is_some_and(|g| g.gens > 0));
    let Some(start) = start else { return Ok(None) };
    let mut out = Vec::new();
    for d in (start - count as i64 + 1..=start).rev() {
        let (Some(src), Some(dst), Some(f)) = (lc.group_in(d), lc.group_in(d - 1), lc.differential(d)) else {
            return Ok(None);
        };
        if src.gens != 1 || dst.gens != 1 {
            return Ok(None);
        }
        out.push(f[(0, 0)].abs());
    }
    Ok(Some((start, out)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::{b_ij, constant_z, z_ij};
    use crate::rep::{parse_rep, regular_rep};

    fn c(p: u64, k: u32) -> Group {
        Group::new(p, k).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lambda_sphere_cells() {
        let g = c(3, 1);
        let cs = sphere(&Rep::lambda_j(&g, 0));
        assert_eq!(cs.cell_counts(), vec![1, 1, 1]);
        assert_eq!(cs.cells_in(0), &[1]);
        assert_eq!(cs.cells_in(1), &[0]);
        assert_eq!(cs.boundary_of(2, 0), &[vec![1, -1, 0]]);
        cs.check().unwrap();
        let pt = sphere(&Rep::zero(&g));
        assert_eq!((pt.bottom(), pt.top()), (0, 0));
    }

    #[test]
    fn cell_structures_are_chain_complexes() {
        let g = c(3, 2);
        for s in ["2L1+L0", "-(L1+2L0)", "L1-L0", "2L0-L1", "rho-2", "L1+L0-rho", "3-L0-L0-L1"] {
            let v = parse_rep(s, &g).unwrap();
            let cs = sphere(&v);
            cs.check().unwrap();
            assert_eq!(cs.top() - cs.bottom(), v.split().plus.dim() + v.split().minus.dim() - v.split().plus.trivial_mult() - v.split().minus.trivial_mult());
        }
    }

    #[test]
    fn golden_negative_regular_sphere() {
        // S^{-ρ} over C_3 at the fixed level: Z -1-> Z -0-> Z
        let g = c(3, 1);
        let rho = regular_rep(&g);
        let (start, maps) = top_level_pattern(&-&rho, &constant_z(&g), 2).unwrap().unwrap();
        assert_eq!(start, -1);
        assert_eq!(maps, big(&[1, 0]));
        let g = c(5, 1);
        let (_, maps) = top_level_pattern(&(&Rep::trivial(&g, 1) - &(2 * &regular_rep(&g))), &constant_z(&g), 3).unwrap().unwrap();
        assert_eq!(maps, big(&[1, 0, 5]));
        let hom = bredon_homology(&(-&rho).split(), &constant_z(&c(3, 1)), -3).unwrap();
        assert_eq!(hom.value(1), AbGroup::integers());
        assert!(bredon_homology(&(-&rho).split(), &constant_z(&c(3, 1)), 0).unwrap().is_zero());
    }

    #[test]
    fn point_homology_is_coefficients() {
        for k in 1..=2 {
            let g = c(3, k);
            for m in [constant_z(&g), b_ij(1, 0, &g).unwrap(), z_ij(1, 0, &g).unwrap()] {
                let h = bredon_homology(&Rep::zero(&g).split(), &m, 0).unwrap();
                assert!(h.functor().same_as(&m), "{}", m.name());
            }
        }
    }

    #[test]
    fn lambda_difference_gives_z_ij() {
        for k in 1..=3 {
            let g = c(3, k);
            for i in 1..=k {
                for j in 0..=k - i {
                    let v = RepDiff {
                        plus: if i + j < k { Rep::lambda_j(&g, i + j) } else { Rep::trivial(&g, 2) },
                        minus: Rep::lambda_j(&g, j),
                    };
                    let cs = cell_structure(&v);
                    for d in cs.bottom()..=cs.top() {
                        let h = bredon_homology_of(&cs, &constant_z(&g), d).unwrap();
                        if d == 0 {
                            h.functor().check_axioms().unwrap();
                            assert!(h.functor().same_as(&z_ij(i + j, j, &g).unwrap()), "i={i} j={j} k={k}");
                        } else {
                            assert!(h.is_zero(), "degree {d}, i={i} j={j} k={k}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn underlying_level_is_a_sphere() {
        let g = c(3, 2);
        for s in ["2L1+L0", "rho-2", "-(L1+2L0)", "L1-L0+1", "5rho-1"] {
            let v = parse_rep(s, &g).unwrap();
            let cs = sphere(&v);
            for d in cs.bottom()..=cs.top() {
                let h = level_homology(&cs, &constant_z(&g), 0, d).unwrap();
                let expected = if d == v.dim() { AbGroup::integers() } else { AbGroup::zero() };
                assert_eq!(h, expected, "{s} degree {d}");
            }
        }
    }

    #[test]
    fn restriction_maps_on_lambda_sphere() {
        // the top class of S^{λ_0} restricts to the underlying fundamental class
        let g = c(3, 1);
        let h = bredon_homology(&Rep::lambda_j(&g, 0).split(), &constant_z(&g), 2).unwrap();
        h.functor().check_axioms().unwrap();
        assert!(h.functor().same_as(&constant_z(&g)));
        // S^{-λ_0}: the bottom class is Z* instead
        let h = bredon_homology(&(-&Rep::lambda_j(&g, 0)).split(), &constant_z(&g), -2).unwrap();
        assert!(h.functor().same_as(&crate::mackey::dual_z(&g)));
    }

    #[test]
    fn injectivity_examples() {
        let g = c(3, 2);
        assert!(homres_injective(&regular_rep(&g), 1, 0, 1).unwrap());
        assert!(homres_injective(&Rep::trivial(&g, 2), 1, 1, 2).unwrap());
        assert!(homres_injective(&parse_rep("2+L1", &g).unwrap(), 2, 0, 2).unwrap());
    }
}
