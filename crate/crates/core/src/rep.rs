//! Virtual real representations of `C_{p^k}` in p-local canonical form.
//!
//! Every 2-dimensional irreducible `λ(i)` is recorded by the p-adic order of
//! `i mod p^k`: `λ(i) ~ λ_j` with `j = ν_p(i)` when `p^k ∤ i`, and `λ(i)` is
//! two trivial summands when `p^k | i`. A [`Rep`] is then a trivial
//! multiplicity plus a multiplicity vector over `λ_0, ..., λ_{k-1}`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ell, p_adic_val, slice_params, Group, SliceParams};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rep {
    group: Group,
    trivial: i64,
    lambda: Vec<i64>,
}

/// A virtual representation written as `plus - minus` with both sides actual
/// and sharing no summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepDiff {
    pub plus: Rep,
    pub minus: Rep,
}

impl Rep {
    pub fn zero(group: &Group) -> Rep {
        Rep { group: *group, trivial: 0, lambda: vec![0; group.k() as usize] }
    }

    pub fn trivial(group: &Group, count: i64) -> Rep {
        Rep { trivial: count, ..Rep::zero(group) }
    }

    /// One copy of `λ_j`, `0 <= j < k`.
    pub fn lambda_j(group: &Group, j: u32) -> Rep {
        assert!(j < group.k(), "λ_{j} does not exist over {group}");
        let mut r = Rep::zero(group);
        r.lambda[j as usize] = 1;
        r
    }

    pub fn from_parts(group: &Group, trivial: i64, lambda: Vec<i64>) -> Result<Rep> {
        if lambda.len() != group.k() as usize {
            return Err(Error::Invariant(format!("expected {} λ multiplicities, got {}", group.k(), lambda.len())));
        }
        Ok(Rep { group: *group, trivial, lambda })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn trivial_mult(&self) -> i64 {
        self.trivial
    }

    pub fn lambda_mult(&self, j: u32) -> i64 {
        self.lambda[j as usize]
    }

    pub fn lambdas(&self) -> &[i64] {
        &self.lambda
    }

    pub fn dim(&self) -> i64 {
        self.trivial + 2 * self.lambda.iter().sum::<i64>()
    }

    /// All multiplicities non-negative.
    pub fn is_actual(&self) -> bool {
        self.trivial >= 0 && self.lambda.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.trivial == 0 && self.lambda.iter().all(|&x| x == 0)
    }

    /// Positive and negative parts.
    pub fn split(&self) -> RepDiff {
        let pos = |x: i64| x.max(0);
        let neg = |x: i64| (-x).max(0);
        RepDiff {
            plus: Rep { group: self.group, trivial: pos(self.trivial), lambda: self.lambda.iter().map(|&x| pos(x)).collect() },
            minus: Rep { group: self.group, trivial: neg(self.trivial), lambda: self.lambda.iter().map(|&x| neg(x)).collect() },
        }
    }

    /// Dimension of the subspace fixed by `C_{p^m}`.
    pub fn fixed_dim(&self, m: u32) -> i64 {
        assert!(m <= self.group.k());
        self.trivial + 2 * self.lambda[m as usize..].iter().sum::<i64>()
    }

    /// Drops every `λ_r` with `r <= j`. Smashing with `S^{λ_r}` is an
    /// equivalence on `HB(i, j)` for such `r`, so this is the form under which
    /// slices with `B(i, j)` coefficients compare.
    pub fn drop_lambdas_through(&self, j: u32) -> Rep {
        let mut r = self.clone();
        for (idx, x) in r.lambda.iter_mut().enumerate() {
            if idx as u32 <= j {
                *x = 0;
            }
        }
        r
    }

    /// `Some(c)` when `self = c ρ_G + t` for some integer `t` and `c != 0`.
    pub fn rho_multiple(&self) -> Option<(i64, i64)> {
        let rho = regular_rep(&self.group);
        let top = *rho.lambda.first()?;
        let c = self.lambda[0] / top;
        if c == 0 || self.lambda.iter().zip(&rho.lambda).any(|(x, r)| *x != c * r) {
            return None;
        }
        Some((c, self.trivial - c))
    }

    /// Renders with `ρ` when the representation is a multiple of `ρ` plus
    /// trivial summands, e.g. `5ρ − 1`; otherwise as [`Rep::lambda_string`].
    pub fn pretty_string(&self) -> String {
        match self.rho_multiple() {
            Some((c, t)) => {
                let mut s = coeff_term(c, "ρ", true);
                if t != 0 {
                    s.push_str(if t > 0 { " + " } else { " − " });
                    s.push_str(&t.abs().to_string());
                }
                s
            }
            None => self.lambda_string(),
        }
    }

    /// `3 + 2λ_1 + λ_0`, highest `λ` first.
    pub fn lambda_string(&self) -> String {
        let mut terms: Vec<(i64, String)> = Vec::new();
        if self.trivial != 0 {
            terms.push((self.trivial, String::new()));
        }
        for j in (0..self.lambda.len()).rev() {
            if self.lambda[j] != 0 {
                terms.push((self.lambda[j], format!("λ_{j}")));
            }
        }
        join_terms(&terms, " + ", " − ", "−")
    }

    /// Machine-friendly form accepted by [`parse_rep`]: `3+2L1+L0`.
    pub fn ascii_string(&self) -> String {
        let mut terms: Vec<(i64, String)> = Vec::new();
        if self.trivial != 0 {
            terms.push((self.trivial, String::new()));
        }
        for j in (0..self.lambda.len()).rev() {
            if self.lambda[j] != 0 {
                terms.push((self.lambda[j], format!("L{j}")));
            }
        }
        join_terms(&terms, "+", "-", "-")
    }

    /// LaTeX source, `\rho` and `\lambda_j`.
    pub fn latex_string(&self) -> String {
        self.pretty_string().replace('ρ', "\\rho").replace('−', "-").replace("λ_", "\\lambda_")
    }

    fn check_group(&self, other: &Rep) {
        assert_eq!(self.group, other.group, "{}", Error::GroupMismatch);
    }
}

fn coeff_term(c: i64, atom: &str, leading: bool) -> String {
    let mag = c.abs();
    let body = if atom.is_empty() {
        mag.to_string()
    } else if mag == 1 {
        atom.to_string()
    } else {
        format!("{mag}{atom}")
    };
    if leading && c < 0 {
        format!("−{body}")
    } else {
        body
    }
}

fn join_terms(terms: &[(i64, String)], plus: &str, minus: &str, lead_minus: &str) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (idx, (c, atom)) in terms.iter().enumerate() {
        let body = coeff_term(c.abs(), atom, false);
        if idx == 0 {
            if *c < 0 {
                s.push_str(lead_minus);
            }
        } else {
            s.push_str(if *c < 0 { minus } else { plus });
        }
        s.push_str(&body);
    }
    s
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty_string())
    }
}

impl Add for &Rep {
    type Output = Rep;
    fn add(self, rhs: &Rep) -> Rep {
        self.check_group(rhs);
        Rep {
            group: self.group,
            trivial: self.trivial + rhs.trivial,
            lambda: self.lambda.iter().zip(&rhs.lambda).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for Rep {
    type Output = Rep;
    fn add(self, rhs: Rep) -> Rep {
        &self + &rhs
    }
}

impl AddAssign<&Rep> for Rep {
    fn add_assign(&mut self, rhs: &Rep) {
        *self = &*self + rhs;
    }
}

impl Neg for &Rep {
    type Output = Rep;
    fn neg(self) -> Rep {
        Rep { group: self.group, trivial: -self.trivial, lambda: self.lambda.iter().map(|x| -x).collect() }
    }
}

impl Neg for Rep {
    type Output = Rep;
    fn neg(self) -> Rep {
        -&self
    }
}

impl Sub for &Rep {
    type Output = Rep;
    fn sub(self, rhs: &Rep) -> Rep {
        self + &(-rhs)
    }
}

impl Sub for Rep {
    type Output = Rep;
    fn sub(self, rhs: Rep) -> Rep {
        &self - &rhs
    }
}

impl SubAssign<&Rep> for Rep {
    fn sub_assign(&mut self, rhs: &Rep) {
        *self = &*self - rhs;
    }
}

impl Mul<&Rep> for i64 {
    type Output = Rep;
    fn mul(self, rhs: &Rep) -> Rep {
        Rep { group: rhs.group, trivial: self * rhs.trivial, lambda: rhs.lambda.iter().map(|x| self * x).collect() }
    }
}

impl RepDiff {
    /// The virtual representation `plus - minus`.
    pub fn virtual_rep(&self) -> Rep {
        &self.plus - &self.minus
    }
}

impl From<&Rep> for RepDiff {
    fn from(r: &Rep) -> RepDiff {
        r.split()
    }
}

/// `λ(i)` in canonical form.
pub fn canonical_lambda(i: i64, group: &Group) -> Rep {
    assert!(i >= 1, "λ(i) needs i >= 1");
    let r = i % group.order();
    if r == 0 {
        Rep::trivial(group, 2)
    } else {
        Rep::lambda_j(group, p_adic_val(r, group.p()))
    }
}

/// `ρ_G = 1 + Σ_j p^{k-1-j}(p-1)/2 λ_j`.
pub fn regular_rep(group: &Group) -> Rep {
    let k = group.k();
    let half = (group.prime() - 1) / 2;
    Rep { group: *group, trivial: 1, lambda: (0..k).map(|j| group.pow(k - 1 - j) * half).collect() }
}

/// `λ(1) + ... + λ(ℓ)` in canonical form.
pub fn lambda_block(ell: u64, group: &Group) -> Rep {
    let ell = ell as i64;
    let k = group.k();
    let mut lambda = vec![0; k as usize];
    for (j, slot) in lambda.iter_mut().enumerate() {
        let j = j as u32;
        *slot = ell / group.pow(j) - ell / group.pow(j + 1);
    }
    Rep { group: *group, trivial: 2 * (ell / group.order()), lambda }
}

/// `Σ_{i=1}^{ℓ} λ(i)` for any integer `ℓ`, with `Σ_{i=1}^{-e} = -Σ_{i=0}^{e-1}`.
fn lambda_sum(ell: i64, group: &Group) -> Rep {
    if ell >= 0 {
        lambda_block(ell as u64, group)
    } else {
        let e = -ell;
        let zero_term = Rep::trivial(group, 2);
        -(&zero_term + &lambda_block((e - 1) as u64, group))
    }
}

fn v_ab_raw(params: &SliceParams, a: u32, b: usize, group: &Group) -> Rep {
    let rho = regular_rep(group);
    let ell = ell(a, b, params, group);
    let v = &(&((params.n - 2) * &rho) - &Rep::trivial(group, 1)) - &lambda_sum(ell, group);
    debug_assert_eq!(v.dim(), params.m_b(b) * group.pow(a) - 1);
    v
}

/// `V_{(a,b)}(n) = (n-2)ρ_G - 1 - Σ_{i=1}^{ℓ} λ(i)`, of dimension `m_b p^a - 1`.
pub fn v_ab(n: i64, a: u32, b: usize, group: &Group) -> Result<Rep> {
    let params = slice_params(n, group)?;
    v_ab_with(&params, a, b, group)
}

pub(crate) fn v_ab_with(params: &SliceParams, a: u32, b: usize, group: &Group) -> Result<Rep> {
    if a < 1 || a > group.k() || b < 1 || b > params.d {
        return Err(Error::IndexOutOfRange { a, b, k: group.k(), d: params.d });
    }
    let v = v_ab_raw(params, a, b, group);
    let expected = params.m[b - 1] * group.pow(a) - 1;
    if v.dim() != expected {
        return Err(Error::Invariant(format!("dim V({a},{b}) = {} but m_b p^a - 1 = {expected}", v.dim())));
    }
    if !v.is_actual() {
        return Err(Error::Invariant(format!("V({a},{b})(n={}) = {} is not actual", params.n, v)));
    }
    Ok(v)
}

/// `W(n) = V_{(1,1)} + 1 - Σ_{i=1}^{(m_1 p - n)/2} λ(i)`, for `p ∤ n`.
pub fn w_rep(n: i64, group: &Group) -> Result<Rep> {
    let params = slice_params(n, group)?;
    if params.p_divides_n() {
        return Err(Error::DivisibilityMismatch { n, p: group.p() });
    }
    let v = v_ab_with(&params, 1, 1, group)?;
    let tail = (params.m[0] * group.prime() - n) / 2;
    let w = &(&v + &Rep::trivial(group, 1)) - &lambda_sum(tail, group);
    check_bottom(w, n)
}

/// `W'(n) = V_{(1,2)} + 1 - Σ_{i=1}^{p-1} λ(i) - λ(1)`, for `p | n`.
///
/// When `d = 1` (only `n = p = 3`) the index `b = 2` continues the
/// progression of the `m_b`.
pub fn wprime_rep(n: i64, group: &Group) -> Result<Rep> {
    let params = slice_params(n, group)?;
    if !params.p_divides_n() {
        return Err(Error::DivisibilityMismatch { n, p: group.p() });
    }
    let v = v_ab_raw(&params, 1, 2, group);
    let w = &(&(&v + &Rep::trivial(group, 1)) - &lambda_sum(group.prime() - 1, group)) - &canonical_lambda(1, group);
    check_bottom(w, n)
}

fn check_bottom(w: Rep, n: i64) -> Result<Rep> {
    if w.dim() != n || !w.is_actual() {
        return Err(Error::Invariant(format!("bottom representation {w} has dim {} (expected {n}) or is not actual", w.dim())));
    }
    Ok(w)
}

/// The representation at the bottom of the tower: `W(n)` or `W'(n)`.
pub fn bottom_rep(n: i64, group: &Group) -> Result<Rep> {
    if n % group.prime() == 0 {
        wprime_rep(n, group)
    } else {
        w_rep(n, group)
    }
}

/// Restriction to `C_{p^m}`: `λ_j` stays `λ_j` for `j < m` and becomes two
/// trivial summands for `j >= m`.
pub fn restrict_rep(v: &Rep, m: u32) -> Result<Rep> {
    let sub = v.group.subgroup(m)?;
    let moved: i64 = v.lambda[m as usize..].iter().sum();
    Ok(Rep { group: sub, trivial: v.trivial + 2 * moved, lambda: v.lambda[..m as usize].to_vec() })
}

/// Dimension of the `C_{p^m}`-fixed subspace.
pub fn fixed_dim(v: &Rep, m: u32) -> i64 {
    v.fixed_dim(m)
}

/// Multiplicity-wise containment of canonical forms.
pub fn is_subrep(v: &Rep, w: &Rep) -> bool {
    v.check_group(w);
    v.trivial <= w.trivial && v.lambda.iter().zip(&w.lambda).all(|(a, b)| a <= b)
}

/// The difference `v - w` as a cancelled `plus - minus` witness.
pub fn sub(v: &Rep, w: &Rep) -> RepDiff {
    (v - w).split()
}

// ---------------------------------------------------------------------------
// Parsing

/// Parses the representation grammar used on the command line:
///
/// ```text
/// expr  := ['+'|'-'] term (('+'|'-') term)*
/// term  := [int] atom | int
/// atom  := 'L' int | 'λ_' int | 'rho' | 'ρ' | '(' expr ')'
///        | 'V(' int ',' int ')@n=' int | 'W@n=' int | "W'@n=" int
/// ```
pub fn parse_rep(input: &str, group: &Group) -> Result<Rep> {
    let mut parser = Parser { chars: input.chars().collect(), pos: 0, group: *group };
    let r = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.chars.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(r)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    group: Group,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        let cs: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&cs) {
            self.pos += cs.len();
            true
        } else {
            false
        }
    }

    fn sign(&mut self) -> Option<i64> {
        self.skip_ws();
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Some(1)
            }
            Some('-') | Some('−') => {
                self.pos += 1;
                Some(-1)
            }
            _ => None,
        }
    }

    fn int(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn expect_int(&mut self) -> Result<i64> {
        self.int().ok_or_else(|| self.err("expected an integer"))
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        self.skip_ws();
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{s}'")))
        }
    }

    fn expr(&mut self) -> Result<Rep> {
        let mut acc = Rep::zero(&self.group);
        let first_sign = self.sign().unwrap_or(1);
        acc += &(first_sign * &self.term()?);
        while let Some(s) = self.sign() {
            acc += &(s * &self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Rep> {
        self.skip_ws();
        let coeff = self.int();
        self.skip_ws();
        match self.atom()? {
            Some(a) => Ok(coeff.unwrap_or(1) * &a),
            None => match coeff {
                Some(c) => Ok(Rep::trivial(&self.group, c)),
                None => Err(self.err("expected a term")),
            },
        }
    }

    fn atom(&mut self) -> Result<Option<Rep>> {
        let g = self.group;
        if self.eat("rho") || self.eat("ρ") {
            return Ok(Some(regular_rep(&g)));
        }
        if self.eat("L") || self.eat("λ_") || self.eat("λ") {
            let at = self.pos;
            let j = self.expect_int()?;
            if j < 0 || j >= g.k() as i64 {
                return Err(Error::Parse { pos: at, msg: format!("λ_{j} does not exist over {g}") });
            }
            return Ok(Some(Rep::lambda_j(&g, j as u32)));
        }
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(Some(inner));
        }
        if self.eat("V(") {
            let a = self.expect_int()?;
            self.expect(",")?;
            let b = self.expect_int()?;
            self.expect(")")?;
            let n = self.at_n()?;
            return v_ab(n, a as u32, b as usize, &g).map(Some);
        }
        if self.eat("W'") {
            let n = self.at_n()?;
            return wprime_rep(n, &g).map(Some);
        }
        if self.eat("W") {
            let n = self.at_n()?;
            return w_rep(n, &g).map(Some);
        }
        Ok(None)
    }

    fn at_n(&mut self) -> Result<i64> {
        self.expect("@")?;
        self.expect("n")?;
        self.expect("=")?;
        self.expect_int()
    }
}
