use proptest::prelude::*;
use slicetower::homology::{bredon_homology, bredon_homology_of, cell_structure, level_homology, sphere};
use slicetower::mackey::{parse_coefficients, restrict_mackey, MackeyFunctor};
use slicetower::rep::{restrict_rep, v_ab, w_rep, wprime_rep};
use slicetower::{parse_rep, slice_params, Group, Rep};

fn groups() -> impl Strategy<Value = Group> {
    prop_oneof![Just((3, 1)), Just((5, 1)), Just((3, 2)), Just((7, 1))].prop_map(|(p, k)| Group::new(p, k).unwrap())
}

fn rep_in(g: Group, trivial: i64, lambda: i64) -> impl Strategy<Value = Rep> {
    (-trivial..=trivial, prop::collection::vec(-lambda..=lambda, g.k() as usize))
        .prop_map(move |(t, l)| Rep::from_parts(&g, t, l).unwrap())
}

/// `t ± λ_j`; products of two multi-λ spheres get expensive at level 0.
fn single_lambda(g: Group) -> impl Strategy<Value = Rep> {
    (-2i64..=2, 0..g.k(), -1i64..=1).prop_map(move |(t, j, c)| Rep::trivial(&g, t) + c * &Rep::lambda_j(&g, j))
}

fn group_and_rep() -> impl Strategy<Value = (Group, Rep)> {
    groups().prop_flat_map(|g| (Just(g), rep_in(g, 3, 2)))
}

const COEFFICIENTS: &[&str] = &["Z", "Z*", "Z(1,0)", "Z(2,0)", "Z(2,1)", "B(1,0)", "B(2,0)", "B(1,1)"];

fn coefficients(g: &Group) -> Vec<MackeyFunctor> {
    COEFFICIENTS.iter().filter_map(|c| parse_coefficients(c, g).ok()).collect()
}

fn group_rep_coeff() -> impl Strategy<Value = (Group, Rep, MackeyFunctor)> {
    group_and_rep().prop_flat_map(|(g, v)| {
        let cs = coefficients(&g);
        (Just(g), Just(v), prop::sample::select(cs))
    })
}

fn levels(v: &Rep, m: &MackeyFunctor, d: i64) -> Vec<String> {
    bredon_homology(&v.split(), m, d).unwrap().values().iter().map(|a| a.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rep_text_round_trips((g, v) in group_and_rep()) {
        prop_assert_eq!(parse_rep(&v.ascii_string(), &g).unwrap(), v.clone());
        prop_assert_eq!(parse_rep(&v.pretty_string(), &g).unwrap(), v);
    }

    #[test]
    fn rep_arithmetic((g, v, w) in groups().prop_flat_map(|g| (Just(g), rep_in(g, 3, 2), rep_in(g, 3, 2)))) {
        prop_assert_eq!(&(&v + &w) - &w, v.clone());
        prop_assert_eq!((&v + &w).dim(), v.dim() + w.dim());
        prop_assert_eq!(-(-v.clone()), v.clone());
        let s = v.split();
        prop_assert_eq!(&s.plus - &s.minus, v.clone());
        prop_assert!(s.plus.is_actual() && s.minus.is_actual());
        for m in 0..=g.k() {
            let r = restrict_rep(&v, m).unwrap();
            prop_assert_eq!(r.dim(), v.dim());
            prop_assert_eq!(r.fixed_dim(m), v.fixed_dim(m));
        }
    }

    #[test]
    fn suspension_shifts_degree((_g, v, m) in group_rep_coeff(), d in -4i64..=3) {
        let one = Rep::trivial(v.group(), 1);
        prop_assert_eq!(levels(&(&v + &one), &m, d + 1), levels(&v, &m, d));
    }

    #[test]
    fn homology_is_a_mackey_functor((_g, v, m) in group_rep_coeff(), d in -4i64..=3) {
        let h = bredon_homology(&v.split(), &m, d).unwrap();
        prop_assert!(h.functor().check_axioms().is_ok());
    }

    #[test]
    fn restriction_compatibility((g, v, m) in group_rep_coeff(), d in -4i64..=3) {
        let cs = sphere(&v);
        for sub in 0..=g.k() {
            let vh = restrict_rep(&v, sub).unwrap();
            let mh = restrict_mackey(&m, sub).unwrap();
            let csh = sphere(&vh);
            for level in 0..=sub {
                prop_assert_eq!(
                    level_homology(&cs, &m, level, d).unwrap(),
                    level_homology(&csh, &mh, level, d).unwrap(),
                    "level {} of C_(p^{})", level, sub
                );
            }
        }
    }

    #[test]
    fn underlying_level_is_a_sphere((_g, v, m) in group_rep_coeff()) {
        let cs = sphere(&v);
        for d in v.dim() - 2..=v.dim() + 2 {
            let h = level_homology(&cs, &m, 0, d).unwrap();
            if d == v.dim() {
                prop_assert_eq!(h, m.value(0));
            } else {
                prop_assert!(h.is_zero());
            }
        }
    }

    #[test]
    fn tensor_order_is_irrelevant(
        (g, a, seed) in groups().prop_flat_map(|g| (Just(g), rep_in(g, 2, 1), single_lambda(g))),
        d in -3i64..=3,
    ) {
        let m = parse_coefficients("Z", &g).unwrap();
        let (ca, cb) = (cell_structure(&a.split()), cell_structure(&seed.split()));
        let ab = ca.tensor(&cb);
        let ba = cb.tensor(&ca);
        prop_assert!(ab.check().is_ok() && ba.check().is_ok());
        let direct = sphere(&(&a + &seed));
        let x = bredon_homology_of(&ab, &m, d).unwrap().values();
        prop_assert_eq!(&x, &bredon_homology_of(&ba, &m, d).unwrap().values());
        prop_assert_eq!(&x, &bredon_homology_of(&direct, &m, d).unwrap().values());
    }

    #[test]
    fn w_and_v_dimensions(p in prop::sample::select(vec![3u64, 5, 7]), k in 1u32..=3, n in 3i64..40) {
        let g = Group::new(p, k).unwrap();
        let params = slice_params(n, &g).unwrap();
        let w = if n % p as i64 == 0 { wprime_rep(n, &g) } else { w_rep(n, &g) };
        prop_assert_eq!(w.unwrap().dim(), n);
        for a in 1..=k {
            for b in 1..=params.d {
                let v = v_ab(n, a, b, &g).unwrap();
                prop_assert_eq!(v.dim(), params.m[b - 1] * g.pow(a) - 1);
                prop_assert!(v.is_actual());
            }
        }
    }
}
