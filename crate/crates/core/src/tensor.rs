//! Multisets over a product of partial abelian monoids, the admissibility
//! predicate `T(M, N)`, the rewriting relations R1–R3, and canonical forms
//! for the classifying space `BM = S¹ ⊗ M`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_traits::{One, Zero};

use crate::intervals::{normalize_config, Interval, ReducedConfig};
use crate::pam::{Elem, FinitePam};
use crate::rational::{fmt_q, q, Q};

/// Summability oracle for one factor of a product.
pub trait Carrier {
    type Elem: Clone + Ord + fmt::Debug;

    fn is_zero(&self, x: &Self::Elem) -> bool;

    /// Total of a multiset, `None` when it is insummable.
    fn sum(&self, xs: &[Self::Elem]) -> Option<Self::Elem>;

    fn pair_summable(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.sum(&[a.clone(), b.clone()]).is_some()
    }
}

impl Carrier for FinitePam {
    type Elem = Elem;

    fn is_zero(&self, x: &Elem) -> bool {
        x.is_zero()
    }

    fn sum(&self, xs: &[Elem]) -> Option<Elem> {
        self.sum_tuple(xs)
    }

    fn pair_summable(&self, a: &Elem, b: &Elem) -> bool {
        self.add(*a, *b).is_some()
    }
}

/// The space of unlabeled configurations as a PAM: a sum is defined when
/// the union still normalizes.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntervalCarrier;

impl IntervalCarrier {
    pub fn embed(j: &Interval) -> ReducedConfig {
        normalize_config(std::slice::from_ref(j)).expect("a single interval always normalizes")
    }
}

impl Carrier for IntervalCarrier {
    type Elem = ReducedConfig;

    fn is_zero(&self, x: &ReducedConfig) -> bool {
        x.is_empty()
    }

    fn sum(&self, xs: &[ReducedConfig]) -> Option<ReducedConfig> {
        let union: Vec<Interval> = xs.iter().flat_map(|c| c.intervals().iter().copied()).collect();
        normalize_config(&union).ok()
    }
}

/// The circle `[-1, 1] / (-1 ~ 1)` as a based set; the identified endpoint
/// is the basepoint.
#[derive(Clone, Copy, Debug, Default)]
pub struct CircleCarrier;

impl Carrier for CircleCarrier {
    type Elem = CirclePoint;

    fn is_zero(&self, x: &CirclePoint) -> bool {
        x.is_base()
    }

    fn sum(&self, xs: &[CirclePoint]) -> Option<CirclePoint> {
        let mut live = xs.iter().filter(|x| !x.is_base());
        match (live.next(), live.next()) {
            (None, _) => Some(CirclePoint::base()),
            (Some(x), None) => Some(*x),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("multiset of size {size} exceeds the limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("not in T: entries {witness:?} violate the summability condition")]
    NotInT { witness: Vec<usize> },
}

/// Multisets of this size or smaller are checked by [`in_t`].
pub const IN_T_LIMIT: usize = 64;

pub fn is_pairwise_insummable<C: Carrier>(carrier: &C, xs: &[C::Elem]) -> bool {
    for i in 0..xs.len() {
        for k in i + 1..xs.len() {
            if carrier.pair_summable(&xs[i], &xs[k]) {
                return false;
            }
        }
    }
    true
}

/// Membership in `T(A, B)`: on every sub-multiset, if one projection is
/// pairwise insummable then the other projection is summable.
///
/// Pairwise-insummable sub-multisets are the cliques of the insummability
/// graph and summability is inherited by sub-multisets, so checking the
/// maximal cliques of each projection is equivalent to checking every
/// subset.
pub fn in_t<A: Carrier, B: Carrier>(ca: &A, cb: &B, items: &[(A::Elem, B::Elem)]) -> Result<bool, TensorError> {
    Ok(t_witness(ca, cb, items)?.is_none())
}

/// A violating sub-multiset (as indices), if any.
pub fn t_witness<A: Carrier, B: Carrier>(
    ca: &A,
    cb: &B,
    items: &[(A::Elem, B::Elem)],
) -> Result<Option<Vec<usize>>, TensorError> {
    if items.len() > IN_T_LIMIT {
        return Err(TensorError::TooLarge { size: items.len(), limit: IN_T_LIMIT });
    }
    let xs: Vec<A::Elem> = items.iter().map(|(x, _)| x.clone()).collect();
    let ys: Vec<B::Elem> = items.iter().map(|(_, y)| y.clone()).collect();
    if let Some(w) = violating_clique(ca, &xs, cb, &ys) {
        return Ok(Some(w));
    }
    Ok(violating_clique(cb, &ys, ca, &xs))
}

fn violating_clique<A: Carrier, B: Carrier>(ca: &A, xs: &[A::Elem], cb: &B, ys: &[B::Elem]) -> Option<Vec<usize>> {
    let n = xs.len();
    let adj: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&k| k != i && !ca.pair_summable(&xs[i], &xs[k])).fold(0u64, |m, k| m | (1 << k)))
        .collect();
    let mut found = None;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    bron_kerbosch(&adj, 0, all, 0, &mut |clique| {
        let sel: Vec<B::Elem> = bits(clique).map(|i| ys[i].clone()).collect();
        if cb.sum(&sel).is_none() {
            found = Some(bits(clique).collect());
            true
        } else {
            false
        }
    });
    found
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask & (1 << i) != 0)
}

/// Maximal clique enumeration with pivoting; `visit` returns `true` to stop.
fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, visit: &mut impl FnMut(u64) -> bool) -> bool {
    if p == 0 && x == 0 {
        return visit(r);
    }
    let pivot = bits(p | x).max_by_key(|&u| (adj[u] & p).count_ones()).unwrap();
    for v in bits(p & !adj[pivot]).collect::<Vec<_>>() {
        if bron_kerbosch(adj, r | (1 << v), p & adj[v], x & adj[v], visit) {
            return true;
        }
        p &= !(1 << v);
        x |= 1 << v;
    }
    false
}

/// A finite multiset of pairs, kept sorted so equal multisets compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairMultiset(Vec<(Elem, Elem)>);

impl PairMultiset {
    pub fn new(mut items: Vec<(Elem, Elem)>) -> Self {
        items.sort();
        PairMultiset(items)
    }

    pub fn items(&self) -> &[(Elem, Elem)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn without(&self, idx: &[usize]) -> Vec<(Elem, Elem)> {
        self.0.iter().enumerate().filter(|(i, _)| !idx.contains(i)).map(|(_, p)| *p).collect()
    }

    fn strip_zeros(&self) -> PairMultiset {
        PairMultiset(self.0.iter().copied().filter(|(x, y)| !x.is_zero() && !y.is_zero()).collect())
    }
}

fn in_t_pm(ca: &FinitePam, cb: &FinitePam, pm: &PairMultiset) -> bool {
    matches!(in_t(ca, cb, pm.items()), Ok(true))
}

/// One-step R1/R2/R3 rewrites in both directions, kept inside `T`.
pub fn rewrite_neighbors(ca: &FinitePam, cb: &FinitePam, pm: &PairMultiset) -> BTreeSet<PairMultiset> {
    let mut out = BTreeSet::new();
    let mut push = |v: Vec<(Elem, Elem)>| {
        out.insert(PairMultiset::new(v));
    };
    let items = pm.items();
    // R1 removal
    for (i, &(x, y)) in items.iter().enumerate() {
        if x.is_zero() || y.is_zero() {
            push(pm.without(&[i]));
        }
    }
    // R1 insertion
    for x in ca.elements() {
        let mut v = items.to_vec();
        v.push((x, Elem::ZERO));
        push(v);
    }
    for y in cb.nonzero() {
        let mut v = items.to_vec();
        v.push((Elem::ZERO, y));
        push(v);
    }
    // R2 / R3 splits
    for (i, &(x, y)) in items.iter().enumerate() {
        for (x1, x2) in ca.partitions(x) {
            let mut v = pm.without(&[i]);
            v.extend([(x1, y), (x2, y)]);
            push(v);
        }
        for (y1, y2) in cb.partitions(y) {
            let mut v = pm.without(&[i]);
            v.extend([(x, y1), (x, y2)]);
            push(v);
        }
    }
    // R2 / R3 merges
    for i in 0..items.len() {
        for k in i + 1..items.len() {
            let (a, b) = (items[i], items[k]);
            if a.1 == b.1 {
                if let Some(x) = ca.add(a.0, b.0) {
                    let mut v = pm.without(&[i, k]);
                    v.push((x, a.1));
                    push(v);
                }
            }
            if a.0 == b.0 {
                if let Some(y) = cb.add(a.1, b.1) {
                    let mut v = pm.without(&[i, k]);
                    v.push((a.0, y));
                    push(v);
                }
            }
        }
    }
    out.retain(|n| in_t_pm(ca, cb, n));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqVerdict {
    Equal,
    Distinct,
    /// The bounded search ran out before deciding.
    Unknown,
}

pub const DEFAULT_DEPTH: usize = 6;

fn is_trivial(c: &FinitePam) -> bool {
    c.entries().is_empty()
}

/// Canonical form when one factor is a based set: merge pairs sharing the
/// based-set coordinate by summing the other coordinate, drop zeros.
fn based_canon(ca: &FinitePam, cb: &FinitePam, pm: &PairMultiset) -> Option<PairMultiset> {
    let first_based = is_trivial(ca);
    type Coord = fn(&(Elem, Elem)) -> Elem;
    let (key, val): (Coord, Coord) = if first_based { (|p| p.0, |p| p.1) } else { (|p| p.1, |p| p.0) };
    let other = if first_based { cb } else { ca };
    let mut groups: std::collections::BTreeMap<Elem, Vec<Elem>> = Default::default();
    for p in pm.items() {
        if !key(p).is_zero() {
            groups.entry(key(p)).or_default().push(val(p));
        }
    }
    let mut out = Vec::new();
    for (k, vs) in groups {
        let total = other.sum_tuple(&vs)?;
        if !total.is_zero() {
            out.push(if first_based { (k, total) } else { (total, k) });
        }
    }
    Some(PairMultiset::new(out))
}

/// Equality in `A ⊗ B`.
///
/// Exact when either factor is a based set. Otherwise a bidirectional
/// breadth-first search over zero-free representatives with nontrivial
/// splits and merges (R1 is absorbed by stripping zero pairs). `Distinct`
/// is only reported when both orbits are exhausted without pruning.
pub fn tensor_eq(ca: &FinitePam, cb: &FinitePam, a: &PairMultiset, b: &PairMultiset, depth: usize) -> EqVerdict {
    if is_trivial(ca) || is_trivial(cb) {
        return match (based_canon(ca, cb, a), based_canon(ca, cb, b)) {
            (Some(x), Some(y)) if x == y => EqVerdict::Equal,
            (Some(_), Some(_)) => EqVerdict::Distinct,
            _ => EqVerdict::Unknown,
        };
    }
    let a = a.strip_zeros();
    let b = b.strip_zeros();
    if a == b {
        return EqVerdict::Equal;
    }
    let cap = 2 * a.len().max(b.len()) + 4;
    let mut side = [Orbit::new(a), Orbit::new(b)];
    for step in 0..depth {
        let (l, r) = side.split_at_mut(1);
        let (cur, other) = if step % 2 == 0 { (&mut l[0], &r[0]) } else { (&mut r[0], &l[0]) };
        if cur.expand(ca, cb, cap, other) {
            return EqVerdict::Equal;
        }
        if side.iter().all(|s| s.frontier.is_empty()) {
            return if side.iter().any(|s| s.pruned) { EqVerdict::Unknown } else { EqVerdict::Distinct };
        }
    }
    EqVerdict::Unknown
}

struct Orbit {
    seen: HashSet<PairMultiset>,
    frontier: VecDeque<PairMultiset>,
    pruned: bool,
}

impl Orbit {
    fn new(start: PairMultiset) -> Self {
        let mut seen = HashSet::new();
        seen.insert(start.clone());
        Orbit { seen, frontier: VecDeque::from([start]), pruned: false }
    }

    /// Expand one BFS layer; `true` when the other orbit is reached.
    fn expand(&mut self, ca: &FinitePam, cb: &FinitePam, cap: usize, other: &Orbit) -> bool {
        let layer: Vec<PairMultiset> = self.frontier.drain(..).collect();
        for pm in layer {
            for n in nontrivial_moves(ca, cb, &pm) {
                if n.len() > cap {
                    self.pruned = true;
                    continue;
                }
                if other.seen.contains(&n) {
                    return true;
                }
                if self.seen.insert(n.clone()) {
                    self.frontier.push_back(n);
                }
            }
        }
        false
    }
}

fn nontrivial_moves(ca: &FinitePam, cb: &FinitePam, pm: &PairMultiset) -> Vec<PairMultiset> {
    rewrite_neighbors(ca, cb, pm).into_iter().map(|n| n.strip_zeros()).filter(|n| n != pm).collect()
}

/// A point of the circle, normalized into `(-1, 1]`; `1` is the basepoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirclePoint(Q);

impl CirclePoint {
    pub fn new(t: Q) -> CirclePoint {
        let two = q(2);
        let mut t = t;
        // shift into (-1, 1]
        let k = ((t + Q::one()) / two).ceil() - Q::one();
        t -= k * two;
        if t <= -Q::one() {
            t += two;
        }
        CirclePoint(t)
    }

    pub fn base() -> CirclePoint {
        CirclePoint(Q::one())
    }

    pub fn is_base(&self) -> bool {
        self.0 == Q::one()
    }

    pub fn value(&self) -> Q {
        self.0
    }
}

/// Canonical element of `BM`: an optional label at the circle point `0`
/// and sorted nonzero points with nonzero labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BMElement {
    pub zero: Option<Elem>,
    pub points: Vec<(Q, Elem)>,
}

impl BMElement {
    pub fn empty() -> Self {
        BMElement::default()
    }

    pub fn is_empty(&self) -> bool {
        self.zero.is_none() && self.points.is_empty()
    }

    /// All `(coordinate, label)` pairs including the `0` point.
    pub fn pairs(&self) -> Vec<(Q, Elem)> {
        let mut v: Vec<(Q, Elem)> = self.zero.map(|m| (Q::zero(), m)).into_iter().collect();
        v.extend(self.points.iter().copied());
        v.sort();
        v
    }

    pub fn display(&self, pam: &FinitePam) -> String {
        if self.is_empty() {
            return "∅".into();
        }
        let parts: Vec<String> =
            self.pairs().iter().map(|(t, m)| format!("{}:{}", fmt_q(t), pam.name_of(*m))).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Canonical form of a multiset over `S¹ × M`: drop basepoint coordinates
/// and zero labels, merge coincident coordinates, sort.
pub fn bm_canon(pam: &FinitePam, items: &[(CirclePoint, Elem)]) -> Result<BMElement, TensorError> {
    let live: Vec<usize> = (0..items.len()).filter(|&i| !items[i].0.is_base() && !items[i].1.is_zero()).collect();
    let labels: Vec<Elem> = live.iter().map(|&i| items[i].1).collect();
    if pam.sum_tuple(&labels).is_none() {
        return Err(TensorError::NotInT { witness: minimal_unsummable(pam, &live, items) });
    }
    let mut by_point: std::collections::BTreeMap<Q, Vec<Elem>> = Default::default();
    for &i in &live {
        by_point.entry(items[i].0.value()).or_default().push(items[i].1);
    }
    let mut z = BMElement::empty();
    for (t, ls) in by_point {
        let m = pam.sum_tuple(&ls).expect("sub-multiset of a summable multiset");
        if m.is_zero() {
            continue;
        }
        if t.is_zero() {
            z.zero = Some(m);
        } else {
            z.points.push((t, m));
        }
    }
    Ok(z)
}

fn minimal_unsummable(pam: &FinitePam, live: &[usize], items: &[(CirclePoint, Elem)]) -> Vec<usize> {
    let n = live.len();
    if n <= 16 {
        let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
        masks.sort_by_key(|m| m.count_ones());
        for m in masks {
            let sel: Vec<usize> = (0..n).filter(|k| m & (1 << k) != 0).map(|k| live[k]).collect();
            let ls: Vec<Elem> = sel.iter().map(|&i| items[i].1).collect();
            if pam.sum_tuple(&ls).is_none() {
                return sel;
            }
        }
    }
    live.to_vec()
}

/// Number of points in the canonical representation, counting the `0` point.
pub fn bm_filtration_level(z: &BMElement) -> usize {
    z.points.len() + usize::from(z.zero.is_some())
}
