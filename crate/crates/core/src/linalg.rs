//! Exact integer linear algebra: dense matrices over arbitrary-precision
//! integers, Smith normal form with transforms, integer kernels, lattice
//! bases and exact integer solves.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix over `BigInt`.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small integer rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    /// Diagonal `n x n` matrix with the given entries.
    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn scalar(n: usize, s: &BigInt) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += &self[(i, j)] * x;
                    }
                }
                s
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hcat");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn block_diag(blocks: &[IntMatrix]) -> IntMatrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_slice(&self, start: usize, end: usize) -> IntMatrix {
        let mut out = Self::zeros(end - start, self.cols);
        for i in start..end {
            for j in 0..self.cols {
                out[(i - start, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn col_slice(&self, start: usize, end: usize) -> IntMatrix {
        let mut out = Self::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                out[(i, j - start)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            if self[(src, j)].is_zero() {
                continue;
            }
            let v = &self[(src, j)] * c;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            if self[(i, src)].is_zero() {
                continue;
            }
            let v = &self[(i, src)] * c;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }
}

/// Smith normal form `P * A * Q = D` with unimodular `P`, `Q`.
///
/// `diag` holds the nonzero diagonal entries `d_1 | d_2 | ... | d_rank`, all
/// positive. `p_inv` is the inverse of `P`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
    pub diag: Vec<BigInt>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

/// Computes the Smith normal form of `a`.
pub fn smith(a: &IntMatrix) -> Smith {
    smith_impl(a, true, true)
}

/// Invariant factors only; the transforms of the result are empty.
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    smith_impl(a, false, false).diag
}

/// Smith form tracking only the column transform `q`; `p` and `p_inv` are
/// left empty.
fn smith_right(a: &IntMatrix) -> Smith {
    smith_impl(a, false, true)
}

struct Transforms {
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
    left: bool,
    right: bool,
}

impl Transforms {
    fn swap_rows(&mut self, d: &mut IntMatrix, a: usize, b: usize) {
        d.swap_rows(a, b);
        if self.left {
            self.p.swap_rows(a, b);
            self.p_inv.swap_cols(a, b);
        }
    }

    /// row[dst] += c row[src] on `d` and `p`, with the inverse column
    /// operation on `p_inv`.
    fn add_row(&mut self, d: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
        d.add_row(dst, src, c);
        if self.left {
            self.p.add_row(dst, src, c);
            self.p_inv.add_col(src, dst, &-c);
        }
    }

    fn swap_cols(&mut self, d: &mut IntMatrix, a: usize, b: usize) {
        d.swap_cols(a, b);
        if self.right {
            self.q.swap_cols(a, b);
        }
    }

    fn add_col(&mut self, d: &mut IntMatrix, dst: usize, src: usize, c: &BigInt) {
        d.add_col(dst, src, c);
        if self.right {
            self.q.add_col(dst, src, c);
        }
    }

    fn negate_row(&mut self, d: &mut IntMatrix, r: usize) {
        d.negate_row(r);
        if self.left {
            self.p.negate_row(r);
            self.p_inv.negate_col(r);
        }
    }
}

fn smith_impl(a: &IntMatrix, left: bool, right: bool) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let eye = |k: usize, on: bool| if on { IntMatrix::identity(k) } else { IntMatrix::zeros(0, 0) };
    let mut tf = Transforms { p: eye(m, left), p_inv: eye(m, left), q: eye(n, right), left, right };
    let mut diag = Vec::new();

    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        'search: for i in t..m {
            for j in t..n {
                let v = &d[(i, j)];
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.magnitude() < d[(bi, bj)].magnitude()) {
                    best = Some((i, j));
                    if v.magnitude().is_one() {
                        break 'search;
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        tf.swap_rows(&mut d, t, pi);
        tf.swap_cols(&mut d, t, pj);

        loop {
            let mut dirty = false;
            // clear column t below the pivot
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let quot = d[(i, t)].div_floor(&d[(t, t)]);
                tf.add_row(&mut d, i, t, &-quot);
                if !d[(i, t)].is_zero() {
                    tf.swap_rows(&mut d, t, i);
                    dirty = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let quot = d[(t, j)].div_floor(&d[(t, t)]);
                tf.add_col(&mut d, j, t, &-quot);
                if !d[(t, j)].is_zero() {
                    tf.swap_cols(&mut d, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let piv = d[(t, t)].clone();
            if piv.magnitude().is_one() {
                break;
            }
            let mut offender = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !d[(i, j)].is_multiple_of(&piv) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => tf.add_row(&mut d, t, i, &BigInt::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            tf.negate_row(&mut d, t);
        }
        diag.push(d[(t, t)].clone());
        t += 1;
    }
    Smith { p: tf.p, p_inv: tf.p_inv, q: tf.q, diag }
}

/// Z-basis of the integer kernel of `a`, as the columns of the result.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith_right(a);
    s.q.col_slice(s.rank(), a.cols)
}

/// Z-basis (as columns) of the lattice spanned by the columns of `a`.
pub fn column_lattice(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    let mut cols = Vec::with_capacity(s.rank());
    for (i, di) in s.diag.iter().enumerate() {
        cols.push(s.p_inv.column(i).into_iter().map(|x| x * di).collect::<Vec<_>>());
    }
    IntMatrix::from_columns(a.rows, &cols)
}

/// Solves `basis * y = x` over the integers, where `basis` has full column
/// rank. Returns `None` when `x` is not in the lattice.
pub fn solve_in_lattice(basis_smith: &Smith, basis_cols: usize, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let px = basis_smith.p.mul_vec(x);
    let r = basis_smith.rank();
    assert_eq!(r, basis_cols, "lattice basis must have full column rank");
    if px[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut z = Vec::with_capacity(r);
    for (v, d) in px.iter().zip(&basis_smith.diag) {
        let (quot, rem) = v.div_rem(d);
        if !rem.is_zero() {
            return None;
        }
        z.push(quot);
    }
    Some(basis_smith.q.mul_vec(&z))
}

/// Invariant factors of the cokernel `Z^rows / im(a)`: torsion orders > 1
/// followed by the free rank.
pub fn cokernel_invariants(a: &IntMatrix) -> (Vec<BigInt>, usize) {
    let diag = smith_diagonal(a);
    let rank = diag.len();
    let torsion = diag.iter().filter(|d| !d.is_one()).cloned().collect();
    (torsion, a.rows - rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn check_smith(a: &IntMatrix) -> Smith {
        let s = smith(a);
        let d = s.p.mul(a).mul(&s.q);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i == j && i < s.rank() {
                    assert_eq!(d[(i, j)], s.diag[i]);
                } else {
                    assert!(d[(i, j)].is_zero(), "off-diagonal residue in {d:?}");
                }
            }
        }
        assert_eq!(s.p.mul(&s.p_inv), IntMatrix::identity(a.rows()));
        for w in s.diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn smith_of_known_matrix() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = check_smith(&a);
        assert_eq!(s.diag, vec![big(2), big(6), big(12)]);
    }

    #[test]
    fn smith_rectangular_and_empty() {
        let a = IntMatrix::from_rows(&[vec![3, 0], vec![0, 9], vec![0, 0]]);
        assert_eq!(check_smith(&a).diag, vec![big(3), big(9)]);
        let a = IntMatrix::from_rows(&[vec![2, 3]]);
        assert_eq!(check_smith(&a).diag, vec![big(1)]);
        let e = IntMatrix::zeros(0, 3);
        assert_eq!(smith(&e).rank(), 0);
        assert_eq!(kernel(&e).cols(), 3);
    }

    #[test]
    fn smith_needs_divisibility_fix() {
        // diag(2, 3) is not in normal form; result is diag(1, 6)
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(check_smith(&a).diag, vec![big(1), big(6)]);
    }

    #[test]
    fn kernel_and_lattice() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 1], vec![0, 3, 6]]);
        let k = kernel(&a);
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        let l = column_lattice(&IntMatrix::from_rows(&[vec![2, 4], vec![0, 0]]));
        assert_eq!(l.cols(), 1);
        assert_eq!(l.column(0)[0].abs(), big(2));
    }

    #[test]
    fn lattice_solve() {
        let b = IntMatrix::from_rows(&[vec![2, 0], vec![1, 3], vec![0, 0]]);
        let s = smith(&b);
        let x = b.mul_vec(&[big(5), big(-2)]);
        let y = solve_in_lattice(&s, 2, &x).unwrap();
        assert_eq!(b.mul_vec(&y), x);
        assert!(solve_in_lattice(&s, 2, &[big(1), big(0), big(0)]).is_none());
        assert!(solve_in_lattice(&s, 2, &[big(0), big(0), big(1)]).is_none());
    }

    #[test]
    fn cokernel_of_multiplication_by_p() {
        let (t, f) = cokernel_invariants(&IntMatrix::from_rows(&[vec![9], vec![0]]));
        assert_eq!(t, vec![big(9)]);
        assert_eq!(f, 1);
    }
}
