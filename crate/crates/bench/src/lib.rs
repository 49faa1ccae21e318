//! Fixtures shared by the benchmarks.

use slicetower::mackey::MackeyFunctor;
use slicetower::tower::Coefficient;
use slicetower::{Group, Rep};

/// Groups and degrees benchmarked for tower generation.
pub const TOWER_CASES: &[(u64, u32, i64)] = &[(3, 2, 7), (3, 2, 16), (5, 2, 40), (3, 3, 60), (7, 3, 200)];

/// Smaller cases for the verifier, which computes homology.
pub const VERIFY_CASES: &[(u64, u32, i64)] = &[(3, 1, 12), (3, 2, 7), (5, 2, 12)];

pub fn group(p: u64, k: u32) -> Group {
    Group::new(p, k).expect("benchmark groups are valid")
}

/// `S^{n - tρ}` with `B(1,0)` coefficients, the shape of the verifier's inner
/// loop.
pub fn verifier_sphere(g: &Group, n: i64, t: i64) -> (Rep, MackeyFunctor) {
    let v = Rep::trivial(g, n) - t * &slicetower::rep::regular_rep(g);
    let m = Coefficient::B { i: 1, j: 0 }.functor(g).expect("B(1,0) is admissible");
    (v, m)
}
