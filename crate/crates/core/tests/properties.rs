mod common;

use common::*;
use interval_pam::intervals::{normalize_config, Interval, Parity};
use interval_pam::labeled::{
    double, is_admissible, is_mirror_invariant, labeled_normalize, mirror, positive_part, LabeledConfig, Piece, Window,
};
use interval_pam::pam::{Elem, FinitePam};
use interval_pam::rational::{qf, Q};
use interval_pam::scanning::alpha_eval;
use interval_pam::tensor::{in_t, rewrite_neighbors, tensor_eq, EqVerdict, PairMultiset};
use proptest::prelude::*;

/// Pieces on the grid `1/4 ℤ ∩ [0, 4]`, labels by index into the nonzero
/// elements.
fn pieces_strategy(max: usize) -> impl Strategy<Value = Vec<(i64, i64, bool, bool, usize)>> {
    prop::collection::vec((0i64..=16, 0i64..=16, any::<bool>(), any::<bool>(), 0usize..3), 0..=max)
}

fn build(pam: &FinitePam, raw: &[(i64, i64, bool, bool, usize)]) -> LabeledConfig {
    let labels: Vec<Elem> = pam.nonzero().collect();
    let mut out = Vec::new();
    for &(a, b, p, qq, l) in raw {
        let (u, v) = (qf(a.min(b), 4), qf(a.max(b), 4));
        let p = if p { Parity::Closed } else { Parity::Open };
        let mut qq = if qq { Parity::Closed } else { Parity::Open };
        if u == v && p == qq {
            qq = p.flip();
        }
        out.push(Piece::new(Interval::new(u, v, p, qq).unwrap(), labels[l % labels.len()]));
    }
    LabeledConfig::new(out)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mirror_is_an_involution(raw in pieces_strategy(6)) {
        let m = m3();
        let xi = build(&m, &raw);
        prop_assert_eq!(mirror(&mirror(&xi)), xi.clone());
        if let Ok(b) = is_mirror_invariant(&double(&xi), &m) {
            prop_assert!(b);
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_commutes_with_mirror(raw in pieces_strategy(5)) {
        let m = m3();
        let xi = build(&m, &raw);
        if let Ok(n) = labeled_normalize(&xi, &m) {
            prop_assert_eq!(labeled_normalize(&n, &m).unwrap(), n.clone());
            prop_assert_eq!(labeled_normalize(&mirror(&xi), &m).unwrap().sorted(), mirror(&n).sorted());
        }
    }

    #[test]
    fn positive_part_inverts_double(raw in pieces_strategy(5)) {
        let m = m3();
        // shift off 0 so every piece is in the positive half
        let xi = build(&m, &raw).translate(qf(1, 4));
        if let Ok(n) = labeled_normalize(&xi, &m) {
            let back = positive_part(&double(&xi), &m).unwrap();
            prop_assert_eq!(labeled_normalize(&back, &m).unwrap(), n);
        }
    }

    #[test]
    fn reduced_form_is_a_fixpoint(raw in pieces_strategy(4)) {
        let m = m3();
        let js: Vec<Interval> = build(&m, &raw).pieces().iter().map(|x| x.j).collect();
        if let Ok(r) = normalize_config(&js) {
            prop_assert_eq!(normalize_config(r.intervals()).unwrap(), r.clone());
            prop_assert_eq!(paste_terminals(&js).into_iter().collect::<Vec<_>>(), vec![r.intervals().to_vec()]);
        }
    }

    #[test]
    fn in_t_matches_naive_oracle(idx in prop::collection::vec((0usize..4, 0usize..4), 0..=7)) {
        let m = m3();
        let els: Vec<Elem> = m.elements().collect();
        let items: Vec<(Elem, Elem)> = idx.iter().map(|&(a, b)| (els[a], els[b])).collect();
        prop_assert_eq!(in_t(&m, &m, &items).unwrap(), naive_in_t(&m, &m, &items));
    }

    #[test]
    fn rewrites_are_tensor_equal(idx in prop::collection::vec((1usize..4, 1usize..4), 1..=3)) {
        let m = m3();
        let els: Vec<Elem> = m.elements().collect();
        let pm = PairMultiset::new(idx.iter().map(|&(a, b)| (els[a], els[b])).collect());
        prop_assume!(in_t(&m, &m, pm.items()).unwrap());
        for next in rewrite_neighbors(&m, &m, &pm) {
            prop_assert_eq!(tensor_eq(&m, &m, &pm, &next, 4), EqVerdict::Equal);
        }
    }
}

#[test]
fn translation_preserves_admissibility_and_scanning() {
    let m = m3();
    let mut r = rng(11);
    for _ in 0..60 {
        let (xi, s) = random_admissible(&mut r, &m, 4, 10);
        for shift in [qf(1, 4), qf(-3, 2), Q::from_integer(5)] {
            let moved = xi.translate(shift);
            assert!(is_admissible(&moved, Q::from_integer(1), Window::new(shift, s + shift), &m));
            let u = s * qf(1, 3);
            assert_eq!(alpha_eval(&xi, u, u, &m).unwrap(), alpha_eval(&moved, u + shift, u + shift, &m).unwrap());
        }
        // an open end on the shrunken window's boundary mirrors to a closed
        // end there, which the open window cuts off
        let edge = xi.endpoints().iter().any(|&e| e == qf(1, 2) || e == s - qf(1, 2));
        let widen = if edge { qf(1, 4) } else { Q::from_integer(0) };
        let mw = Window::new(-s - widen, widen);
        assert!(is_admissible(&mirror(&xi), Q::from_integer(1), mw, &m), "{}", xi.display(&m));
    }
}

#[test]
fn z2_decompositions_are_not_unique() {
    // the uniqueness check only applies to self-insummable labels
    let z = z2();
    assert!(!z.is_self_insummable());
    let mut r = rng(3);
    let (xi, s) = random_admissible(&mut r, &z, 3, 10);
    assert!(is_admissible(&xi, Q::from_integer(1), Window::new(Q::from_integer(0), s), &z));
}
