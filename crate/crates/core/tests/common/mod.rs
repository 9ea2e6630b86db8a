#![allow(dead_code)]

use std::collections::BTreeSet;

use interval_pam::intervals::{order_intervals, Interval, Parity};
use interval_pam::labeled::{double, is_admissible, tidy, LabeledConfig, Piece, Window};
use interval_pam::pam::{FinitePam, RawPam, RawSum};
use interval_pam::rational::{q, qf, Q};
use interval_pam::tensor::{bm_canon, is_pairwise_insummable, BMElement, Carrier, CirclePoint};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn raw(name: &str, elements: &[&str], sums: &[(&str, &str, &str)]) -> RawPam {
    RawPam {
        name: name.into(),
        elements: elements.iter().map(|s| s.to_string()).collect(),
        sums: sums.iter().map(|&(a, b, c)| RawSum::new(a, b, c)).collect(),
    }
}

/// `{0, a, b, c}` with `a + b = c`.
pub fn m3() -> FinitePam {
    interval_pam::pam::validate_pam(&raw("M3", &["0", "a", "b", "c"], &[("a", "b", "c")])).unwrap()
}

/// `{0, g}` with `g + g = 0`.
pub fn z2() -> FinitePam {
    interval_pam::pam::validate_pam(&raw("Z2", &["0", "g"], &[("g", "g", "0")])).unwrap()
}

pub fn iv(u: Q, v: Q, p: i64, qq: i64) -> Interval {
    Interval::of(u, v, p, qq)
}

pub fn parity(r: &mut ChaCha8Rng) -> Parity {
    if r.gen_bool(0.5) {
        Parity::Closed
    } else {
        Parity::Open
    }
}

/// A random labeled configuration with endpoints on the grid `1/4 ℤ`
/// inside `[lo, hi]`, not checked for anything.
pub fn random_pieces(r: &mut ChaCha8Rng, pam: &FinitePam, n: usize, lo: Q, hi: Q) -> LabeledConfig {
    let labels: Vec<_> = pam.nonzero().collect();
    let steps = ((hi - lo) * q(4)).to_integer();
    let mut out = Vec::new();
    for _ in 0..n {
        let a = r.gen_range(0..=steps);
        let b = r.gen_range(0..=steps);
        let (a, b) = (a.min(b), a.max(b));
        let (u, v) = (lo + qf(a, 4), lo + qf(b, 4));
        let (p, mut qq) = (parity(r), parity(r));
        if u == v && p == qq {
            qq = p.flip();
        }
        let j = Interval::new(u, v, p, qq).unwrap();
        out.push(Piece::new(j, labels[r.gen_range(0..labels.len())]));
    }
    LabeledConfig::new(out)
}

/// Left-to-right placement of pieces with random gaps; pieces shorter
/// than 2 are half-open so they can sit inside a window.
pub fn random_chain(r: &mut ChaCha8Rng, pam: &FinitePam, n: usize, start: Q) -> LabeledConfig {
    let labels: Vec<_> = pam.nonzero().collect();
    let mut x = start;
    let mut out = Vec::new();
    for _ in 0..n {
        let prev: Option<Piece> = out.last().copied();
        // sometimes continue a cut pair: same label, complementary cut parity
        let pair = prev.filter(|_| r.gen_bool(0.4));
        x += qf(r.gen_range(if pair.is_some() { 1..=7 } else { 0..=12 }), 4);
        let len = qf(r.gen_range(1..=12), 4);
        let p = match pair {
            Some(pr) => pr.j.q.flip(),
            None => parity(r),
        };
        let qq = if len < q(2) { p.flip() } else { parity(r) };
        let m = match pair {
            Some(pr) => pr.m,
            None => labels[r.gen_range(0..labels.len())],
        };
        out.push(Piece::new(Interval::new(x, x + len, p, qq).unwrap(), m));
        x += len;
    }
    LabeledConfig::new(out)
}

/// Rejection-sampled 1-admissible configuration supported by `(0, s)`,
/// with `s <= max_s`.
pub fn random_admissible(r: &mut ChaCha8Rng, pam: &FinitePam, max_pieces: usize, max_s: i64) -> (LabeledConfig, Q) {
    loop {
        let n = r.gen_range(1..=max_pieces);
        let xi = random_chain(r, pam, n, qf(1, 2));
        let end = xi.endpoints().last().copied().unwrap_or(q(0));
        let s = (end + qf(1, 2) + qf(r.gen_range(0..=4), 4)).ceil();
        if s > q(max_s) {
            continue;
        }
        if is_admissible(&xi, q(1), Window::new(q(0), s), pam) {
            return (xi, s);
        }
    }
}

/// Every nonempty sub-multiset: if one projection is pairwise insummable
/// the other must be summable.
pub fn naive_in_t<A: Carrier, B: Carrier>(ca: &A, cb: &B, items: &[(A::Elem, B::Elem)]) -> bool
where
    A::Elem: Clone,
    B::Elem: Clone,
{
    assert!(items.len() <= 16);
    for mask in 1u32..(1 << items.len()) {
        let sub: Vec<usize> = (0..items.len()).filter(|i| mask >> i & 1 == 1).collect();
        let xs: Vec<A::Elem> = sub.iter().map(|&i| items[i].0.clone()).collect();
        let ys: Vec<B::Elem> = sub.iter().map(|&i| items[i].1.clone()).collect();
        if is_pairwise_insummable(ca, &xs) && cb.sum(&ys).is_none() {
            return false;
        }
        if is_pairwise_insummable(cb, &ys) && ca.sum(&xs).is_none() {
            return false;
        }
    }
    true
}

/// Multisets of size `k` drawn from `0..n`, as sorted index vectors.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..n {
            acc.push(i);
            go(n, k, i, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn orderable(items: &[Interval]) -> bool {
    order_intervals(items).is_ok()
}

/// Terminal states of every maximal sequence of paste / annihilate moves
/// that stays inside the configuration space.
pub fn paste_terminals(items: &[Interval]) -> BTreeSet<Vec<Interval>> {
    fn go(state: Vec<Interval>, seen: &mut BTreeSet<Vec<Interval>>, out: &mut BTreeSet<Vec<Interval>>) {
        if !seen.insert(state.clone()) {
            return;
        }
        let mut moved = false;
        for i in 0..state.len() {
            if state[i].is_degenerate() {
                let mut next = state.clone();
                next.remove(i);
                if orderable(&next) {
                    moved = true;
                    go(next, seen, out);
                }
            }
            for k in 0..state.len() {
                if i != k && state[i].touches(&state[k]) {
                    let mut next: Vec<Interval> =
                        state.iter().enumerate().filter(|(x, _)| *x != i && *x != k).map(|(_, j)| *j).collect();
                    next.push(state[i].paste(&state[k]));
                    next.sort();
                    if orderable(&next) {
                        moved = true;
                        go(next, seen, out);
                    }
                }
            }
        }
        if !moved {
            out.insert(state);
        }
    }
    let mut start = items.to_vec();
    start.sort();
    let mut out = BTreeSet::new();
    go(start, &mut BTreeSet::new(), &mut out);
    out
}

/// Every interval with endpoints in `pts` and any parities, degenerate ones
/// included.
pub fn all_intervals(pts: &[Q]) -> Vec<Interval> {
    let mut out = Vec::new();
    for (i, &u) in pts.iter().enumerate() {
        for &v in &pts[i..] {
            for p in [Parity::Open, Parity::Closed] {
                for qq in [Parity::Open, Parity::Closed] {
                    if let Ok(j) = Interval::new(u, v, p, qq) {
                        out.push(j);
                    }
                }
            }
        }
    }
    out
}

/// Random canonical `BM` element with `k` points on the grid `1/8 ℤ`.
pub fn random_bm(r: &mut ChaCha8Rng, pam: &FinitePam, max_points: usize) -> BMElement {
    let labels: Vec<_> = pam.nonzero().collect();
    loop {
        let k = r.gen_range(0..=max_points);
        let mut items = Vec::new();
        for _ in 0..k {
            let t = qf(r.gen_range(-7..=8), 8);
            items.push((CirclePoint::new(t), labels[r.gen_range(0..labels.len())]));
        }
        let ls: Vec<_> = items.iter().map(|x| x.1).collect();
        if pam.sum_tuple(&ls).is_none() {
            continue;
        }
        if let Ok(z) = bm_canon(pam, &items) {
            return z;
        }
    }
}

/// Random mirror-invariant configuration, 1-admissible on `(-s, s)`:
/// the double of a chain starting at `0`, whose first piece is closed at
/// `0` when it touches it.
pub fn random_symmetric(r: &mut ChaCha8Rng, pam: &FinitePam, max_pieces: usize, max_s: i64) -> (LabeledConfig, Q) {
    loop {
        let n = r.gen_range(1..=max_pieces);
        let chain = random_chain(r, pam, n, q(0));
        let mut pieces = chain.pieces().to_vec();
        if pieces[0].j.u == q(0) {
            pieces[0].j.p = Parity::Closed;
        }
        let half_cfg = LabeledConfig::new(pieces);
        let end = half_cfg.endpoints().last().copied().unwrap_or(q(0));
        let s = (end + qf(1, 2) + qf(r.gen_range(0..=4), 4)).ceil();
        if s > q(max_s) {
            continue;
        }
        let Ok(eta) = tidy(&double(&half_cfg), pam) else { continue };
        if is_admissible(&eta, q(1), Window::new(-s, s), pam) {
            return (eta, s);
        }
    }
}
