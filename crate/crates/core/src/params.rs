//! Integer bookkeeping for the tower: the group, p-adic valuations, the
//! admissible slice parameters `m_1 < ... < m_d` and the exponents that
//! govern which `λ_j` is exchanged at each stage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The cyclic group `C_{p^k}`.
///
/// Groups built with [`Group::new`] have `p` an odd prime and `k >= 1`.
/// [`Group::subgroup`] may also produce the trivial group (`k = 0`), which
/// shows up when data is restricted to the underlying level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Group {
    p: u64,
    k: u32,
}

// p^k must stay far below i64::MAX once multiplied by n.
const MAX_ORDER: i64 = 1 << 40;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

impl Group {
    pub fn new(p: u64, k: u32) -> Result<Group> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroExponent(k));
        }
        let order = (p as i64).checked_pow(k).filter(|o| *o <= MAX_ORDER);
        if order.is_none() {
            return Err(Error::Invariant(format!("group order {p}^{k} is too large")));
        }
        Ok(Group { p, k })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `p` as a signed integer, for arithmetic with degrees.
    pub fn prime(&self) -> i64 {
        self.p as i64
    }

    /// `p^e`.
    pub fn pow(&self, e: u32) -> i64 {
        self.prime().pow(e)
    }

    /// `|G| = p^k`.
    pub fn order(&self) -> i64 {
        self.pow(self.k)
    }

    /// The subgroup `C_{p^m}` as a group in its own right.
    pub fn subgroup(&self, m: u32) -> Result<Group> {
        if m > self.k {
            return Err(Error::LevelOutOfRange { level: m, k: self.k });
        }
        Ok(Group { p: self.p, k: m })
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.k {
            1 => write!(f, "C_{}", self.p),
            k => write!(f, "C_{{{}^{}}}", self.p, k),
        }
    }
}

/// Largest `e` with `p^e | i`. Requires `i >= 1`.
pub fn p_adic_val(i: i64, p: u64) -> u32 {
    assert!(i >= 1, "p-adic valuation of non-positive {i}");
    let p = p as i64;
    let mut i = i;
    let mut e = 0;
    while i % p == 0 {
        i /= p;
        e += 1;
    }
    e
}

/// Parameters of the tower for `S^n ∧ HZ` with `n >= 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceParams {
    pub n: i64,
    /// `n mod p`
    pub n0: i64,
    /// 2 if `n0` is even and nonzero, 1 if odd, 0 if `p | n`
    pub delta: i64,
    pub d: usize,
    /// `m_1 < ... < m_d`, the integers of the parity of `n` in `[n/p, n - 2]`.
    pub m: Vec<i64>,
}

impl SliceParams {
    /// `m_b` for `1 <= b`; indices past `d` continue the arithmetic
    /// progression `n - 2d + 2b - 2`.
    pub fn m_b(&self, b: usize) -> i64 {
        assert!(b >= 1);
        self.n - 2 * self.d as i64 + 2 * b as i64 - 2
    }

    pub fn p_divides_n(&self) -> bool {
        self.n0 == 0
    }
}

fn count_admissible(n: i64, p: i64) -> usize {
    // integers of the parity of n in the closed interval [n/p, n - 2]
    (1..=n - 2).filter(|m| m * p >= n && (n - m) % 2 == 0).count()
}

/// Computes `d`, `δ`, `n_0` and `m_1..m_d`. `d` is obtained from the closed
/// formula and cross-checked against a direct count.
pub fn slice_params(n: i64, group: &Group) -> Result<SliceParams> {
    if n < 3 {
        return Err(Error::DegreeTooSmall { n, min: 3 });
    }
    let p = group.prime();
    let n0 = n % p;
    let delta = match n0 {
        0 => 0,
        r if r % 2 == 0 => 2,
        _ => 1,
    };
    let twice_d = n - (n - n0) / p - delta;
    if twice_d < 0 || twice_d % 2 != 0 {
        return Err(Error::Invariant(format!("2d = {twice_d} is not a non-negative even integer")));
    }
    let d = (twice_d / 2) as usize;
    let counted = count_admissible(n, p);
    if counted != d {
        return Err(Error::Invariant(format!("closed-form d = {d} but direct count gives {counted} (n = {n}, p = {p})")));
    }
    let m = (1..=d).map(|i| n - 2 * d as i64 + 2 * i as i64 - 2).collect();
    Ok(SliceParams { n, n0, delta, d, m })
}

fn check_ab(a: u32, b: usize, params: &SliceParams, group: &Group) -> Result<()> {
    if a < 1 || a > group.k() || b < 1 || b > params.d {
        return Err(Error::IndexOutOfRange { a, b, k: group.k(), d: params.d });
    }
    Ok(())
}

/// `ν(b) = min(ν_p(m_b), k - a)`.
pub fn nu(a: u32, b: usize, params: &SliceParams, group: &Group) -> Result<u32> {
    check_ab(a, b, params, group)?;
    Ok(p_adic_val(params.m[b - 1], group.p()).min(group.k() - a))
}

/// `ℓ(a, b) = ((n - 2) p^k - m_b p^a) / 2`, with `b` allowed past `d` as in
/// [`SliceParams::m_b`]. May be negative only in that extended range.
pub fn ell(a: u32, b: usize, params: &SliceParams, group: &Group) -> i64 {
    let num = (params.n - 2) * group.order() - params.m_b(b) * group.pow(a);
    debug_assert!(num % 2 == 0);
    num / 2
}

/// The gap `L = ℓ(a, d) - ℓ(a + 1, 1) = (p^a / 2)(δp - n_0 + 2)` between the
/// last stage at level `a` and the first stage at level `a + 1`.
///
/// `L <= p^{a+1}` always, with equality exactly when `n_0 = 2`.
pub fn connection_gap(a: u32, params: &SliceParams, group: &Group) -> Result<i64> {
    if a < 1 || a >= group.k() {
        return Err(Error::IndexOutOfRange { a, b: params.d, k: group.k(), d: params.d });
    }
    let p = group.prime();
    let factor = params.delta * p - params.n0 + 2;
    debug_assert!(factor % 2 == 0);
    let gap = group.pow(a) * factor / 2;
    let direct = ell(a, params.d, params, group) - ell(a + 1, 1, params, group);
    if gap != direct {
        return Err(Error::Invariant(format!("closed-form gap {gap} differs from ℓ difference {direct}")));
    }
    if gap <= 0 || gap > group.pow(a + 1) {
        return Err(Error::Invariant(format!("gap {gap} outside (0, p^(a+1)]")));
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: u64, k: u32) -> Group {
        Group::new(p, k).unwrap()
    }

    fn brute_val(i: i64, p: i64) -> u32 {
        // factor by trial division
        let mut e = 0;
        let mut q = p;
        while i % q == 0 {
            e += 1;
            q *= p;
        }
        e
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_val(9, 3), 2);
        assert_eq!(p_adic_val(1, 5), 0);
        assert_eq!(p_adic_val(18, 3), brute_val(18, 3));
        assert_eq!(p_adic_val(18, 3), 2);
    }

    #[test]
    fn group_validation() {
        assert_eq!(Group::new(2, 1), Err(Error::EvenPrime));
        assert_eq!(Group::new(9, 1), Err(Error::NotPrime(9)));
        assert_eq!(Group::new(3, 0), Err(Error::ZeroExponent(0)));
        assert_eq!(c(3, 2).order(), 9);
        assert!(c(3, 2).subgroup(0).unwrap().is_trivial());
        assert!(c(3, 2).subgroup(3).is_err());
    }

    #[test]
    fn params_for_worked_examples() {
        let s = slice_params(7, &c(3, 2)).unwrap();
        assert_eq!((s.d, s.m.clone()), (2, vec![3, 5]));
        let s = slice_params(16, &c(3, 2)).unwrap();
        assert_eq!((s.d, s.m.clone()), (5, vec![6, 8, 10, 12, 14]));
        let s = slice_params(9, &c(3, 2)).unwrap();
        assert_eq!((s.n0, s.delta), (0, 0));
        assert_eq!(s.m, vec![3, 5, 7]);
        assert!(slice_params(2, &c(3, 2)).is_err());
    }

    #[test]
    fn nu_examples() {
        let g = c(3, 2);
        let s = slice_params(7, &g).unwrap();
        assert_eq!(nu(2, 1, &s, &g).unwrap(), 0);
        assert_eq!(nu(1, 1, &s, &g).unwrap(), 1);
        assert_eq!(nu(2, 2, &s, &g).unwrap(), 0);
        assert!(nu(3, 1, &s, &g).is_err());
        assert!(nu(1, 3, &s, &g).is_err());
    }

    #[test]
    fn gap_examples() {
        let g = c(3, 2);
        assert_eq!(connection_gap(1, &slice_params(7, &g).unwrap(), &g).unwrap(), 6);
        assert_eq!(connection_gap(1, &slice_params(16, &g).unwrap(), &g).unwrap(), 6);
        // n0 = 2 reaches the bound p^(a+1)
        assert_eq!(connection_gap(1, &slice_params(5, &g).unwrap(), &g).unwrap(), 9);
        assert!(connection_gap(2, &slice_params(7, &g).unwrap(), &g).is_err());
    }

    #[test]
    fn parameter_grid() {
        for p in [3u64, 5, 7] {
            for k in 1..=3 {
                let g = c(p, k);
                for n in 3..=50 {
                    let s = slice_params(n, &g).unwrap();
                    let pi = p as i64;
                    assert_eq!(*s.m.last().unwrap(), n - 2);
                    assert!(s.m.iter().all(|m| m * pi >= n && (n - m) % 2 == 0));
                    if s.n0 != 0 {
                        assert!(s.m[0] * pi > n);
                    } else {
                        assert_eq!(s.m[0] * pi, n);
                    }
                    for a in 1..=k {
                        for b in 1..s.d {
                            assert!(s.m[b - 1] < s.m[b]);
                            assert_eq!(ell(a, b, &s, &g) - ell(a, b + 1, &s, &g), g.pow(a));
                        }
                        for b in 1..=s.d {
                            assert!(ell(a, b, &s, &g) >= 0);
                        }
                        if a < k {
                            assert!(s.m[s.d - 1] * g.pow(a) < s.m[0] * g.pow(a + 1));
                            let gap = connection_gap(a, &s, &g).unwrap();
                            assert_eq!(gap == g.pow(a + 1), s.n0 == 2);
                        }
                    }
                }
            }
        }
    }
}
