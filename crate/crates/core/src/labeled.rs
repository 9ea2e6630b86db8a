//! Labeled interval configurations: restriction to windows, elementary
//! decomposition, admissibility, normal forms, mirror and doubling.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::intervals::{Interval, Parity};
use crate::pam::{Elem, FinitePam};
use crate::rational::{fmt_q, half, Q};
use crate::tensor::{t_witness, IntervalCarrier, TensorError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Piece {
    pub j: Interval,
    pub m: Elem,
}

impl Piece {
    pub fn new(j: Interval, m: Elem) -> Piece {
        Piece { j, m }
    }

    pub fn mirror(&self) -> Piece {
        Piece { j: self.j.mirror(), m: self.m }
    }

    pub fn display(&self, pam: &FinitePam) -> String {
        format!("{}:{}", self.j, pam.name_of(self.m))
    }
}

/// A finite multiset of labeled intervals. Overlaps are allowed; whether the
/// multiset is meaningful is decided by `T(I, M)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LabeledConfig(Vec<Piece>);

impl LabeledConfig {
    pub fn new(pieces: Vec<Piece>) -> Self {
        LabeledConfig(pieces)
    }

    pub fn empty() -> Self {
        LabeledConfig(Vec::new())
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiset sum `∔`.
    pub fn plus(&self, other: &LabeledConfig) -> LabeledConfig {
        LabeledConfig(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn sorted(&self) -> LabeledConfig {
        let mut v = self.0.clone();
        v.sort();
        LabeledConfig(v)
    }

    pub fn translate(&self, by: Q) -> LabeledConfig {
        LabeledConfig(self.0.iter().map(|x| Piece::new(x.j.translate(by), x.m)).collect())
    }

    /// Multiply every endpoint by a positive factor.
    pub fn rescale(&self, factor: Q) -> LabeledConfig {
        assert!(factor > Q::zero());
        LabeledConfig(
            self.0.iter().map(|x| Piece::new(Interval { u: x.j.u * factor, v: x.j.v * factor, ..x.j }, x.m)).collect(),
        )
    }

    pub fn endpoints(&self) -> Vec<Q> {
        let mut v: Vec<Q> = self.0.iter().flat_map(|x| [x.j.u, x.j.v]).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn display(&self, pam: &FinitePam) -> String {
        if self.is_empty() {
            return "∅".into();
        }
        let parts: Vec<String> = self.0.iter().map(|x| x.display(pam)).collect();
        parts.join(" ")
    }
}

/// Open window `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub a: Q,
    pub b: Q,
}

impl Window {
    pub fn new(a: Q, b: Q) -> Window {
        assert!(a < b, "window ({}, {}) is empty", fmt_q(&a), fmt_q(&b));
        Window { a, b }
    }

    /// `(t - r, t + r)`
    pub fn around(t: Q, r: Q) -> Window {
        Window::new(t - r, t + r)
    }

    pub fn mirror(&self) -> Window {
        Window { a: -self.b, b: -self.a }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LabeledError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("configuration is not mirror-invariant")]
    NotMirrorInvariant,
    #[error("interval {0} meets 0 but is not of the symmetric shape (-u,u| with opposite parities")]
    AsymmetricCentral(Interval),
}

/// Intersect every interval with the window; clipped ends become open.
pub fn restrict(xi: &LabeledConfig, w: Window) -> LabeledConfig {
    let mut out = Vec::new();
    for x in xi.pieces() {
        let (u, p) = if x.j.u > w.a { (x.j.u, x.j.p) } else { (w.a, Parity::Open) };
        let (v, q) = if x.j.v < w.b { (x.j.v, x.j.q) } else { (w.b, Parity::Open) };
        if u < v {
            out.push(Piece::new(Interval { u, v, p, q }, x.m));
        }
    }
    LabeledConfig(out)
}

/// Index set of a sub-multiset violating `T(I, M)`, if any.
pub fn t_violation(xi: &LabeledConfig, pam: &FinitePam) -> Result<Option<Vec<usize>>, TensorError> {
    let items: Vec<_> = xi.pieces().iter().map(|x| (IntervalCarrier::embed(&x.j), x.m)).collect();
    t_witness(&IntervalCarrier, pam, &items)
}

pub fn in_t_labeled(xi: &LabeledConfig, pam: &FinitePam) -> Result<bool, TensorError> {
    Ok(t_violation(xi, pam)?.is_none())
}

fn check_t(xi: &LabeledConfig, pam: &FinitePam) -> Result<(), LabeledError> {
    match t_violation(xi, pam)? {
        None => Ok(()),
        Some(witness) => Err(TensorError::NotInT { witness }.into()),
    }
}

/// Normal form used for equality of labeled configurations.
///
/// The label at each point (sum of labels of the intervals containing it) is
/// invariant under every rewrite. When that function is realized by maximal
/// runs that meet at most in a shared closed endpoint (carrying the sum of
/// both sides) that realization is returned; otherwise the fixpoint of
/// drop / merge-identical / paste-touching moves.
pub fn labeled_normalize(xi: &LabeledConfig, pam: &FinitePam) -> Result<LabeledConfig, LabeledError> {
    check_t(xi, pam)?;
    Ok(normalize_unchecked(xi, pam))
}

/// A representative suited to window decomposition: checks `T`, then drops
/// dead pieces, merges identical intervals and pastes touching ones. Unlike
/// the normal form it never splits an interval.
pub fn tidy(xi: &LabeledConfig, pam: &FinitePam) -> Result<LabeledConfig, LabeledError> {
    check_t(xi, pam)?;
    Ok(rewrite_fixpoint(&drop_dead(xi), pam).sorted())
}

fn drop_dead(xi: &LabeledConfig) -> LabeledConfig {
    LabeledConfig(xi.0.iter().copied().filter(|x| !x.m.is_zero() && !x.j.is_degenerate()).collect())
}

fn normalize_unchecked(xi: &LabeledConfig, pam: &FinitePam) -> LabeledConfig {
    let live = drop_dead(xi);
    disjoint_realization(&live, pam).unwrap_or_else(|| rewrite_fixpoint(&live, pam))
}

fn label_at(xi: &LabeledConfig, pam: &FinitePam, x: Q) -> Option<Elem> {
    let ls: Vec<Elem> = xi.0.iter().filter(|p| p.j.contains(&x)).map(|p| p.m).collect();
    pam.sum_tuple(&ls)
}

fn disjoint_realization(xi: &LabeledConfig, pam: &FinitePam) -> Option<LabeledConfig> {
    let pts = xi.endpoints();
    let gaps: Vec<Elem> = pts.windows(2).map(|w| label_at(xi, pam, (w[0] + w[1]) * half())).collect::<Option<_>>()?;
    let mut out = Vec::new();
    let mut run: Option<(Q, Parity, Elem)> = None;
    for (i, &e) in pts.iter().enumerate() {
        let v = label_at(xi, pam, e)?;
        let l = if i == 0 { Elem::ZERO } else { gaps[i - 1] };
        let r = gaps.get(i).copied().unwrap_or(Elem::ZERO);
        if !l.is_zero() && l == r && v == l {
            continue;
        }
        // which side owns the point; both when its label is l + r
        let (cl, cr) = if v == l {
            (Parity::Closed, Parity::Open)
        } else if v == r {
            (Parity::Open, Parity::Closed)
        } else if v.is_zero() {
            (Parity::Open, Parity::Open)
        } else if pam.add(l, r) == Some(v) {
            (Parity::Closed, Parity::Closed)
        } else {
            return None;
        };
        if let Some((u, p, m)) = run.take() {
            out.push(Piece::new(Interval { u, v: e, p, q: cl }, m));
        }
        if !r.is_zero() {
            run = Some((e, cr, r));
        }
    }
    debug_assert!(run.is_none());
    Some(LabeledConfig(out))
}

/// Fixpoint of drop, merge-identical and paste-touching moves, leftmost
/// first. Keeps overlaps that the full normal form would split.
pub fn rewrite_fixpoint(xi: &LabeledConfig, pam: &FinitePam) -> LabeledConfig {
    let mut v = xi.0.clone();
    loop {
        v.retain(|x| !x.m.is_zero() && !x.j.is_degenerate());
        v.sort();
        let mut moved = false;
        'search: for i in 0..v.len() {
            for k in i + 1..v.len() {
                if v[i].j == v[k].j {
                    if let Some(m) = pam.add(v[i].m, v[k].m) {
                        v[i].m = m;
                        v.remove(k);
                        moved = true;
                        break 'search;
                    }
                }
            }
        }
        if !moved {
            'paste: for i in 0..v.len() {
                for k in 0..v.len() {
                    if i != k && v[i].m == v[k].m && v[i].j.touches(&v[k].j) {
                        v[i].j = v[i].j.paste(&v[k].j);
                        v.remove(k);
                        moved = true;
                        break 'paste;
                    }
                }
            }
        }
        if !moved {
            return LabeledConfig(v);
        }
    }
}

pub fn mirror(xi: &LabeledConfig) -> LabeledConfig {
    LabeledConfig(xi.0.iter().map(Piece::mirror).collect())
}

/// `ξ ∔ μ(ξ)`
pub fn double(xi: &LabeledConfig) -> LabeledConfig {
    xi.plus(&mirror(xi))
}

pub fn is_mirror_invariant(eta: &LabeledConfig, pam: &FinitePam) -> Result<bool, LabeledError> {
    Ok(labeled_normalize(eta, pam)? == labeled_normalize(&mirror(eta), pam)?)
}

/// Cut the intervals crossing `0` at `0` and keep the nonnegative half.
pub fn positive_part(eta: &LabeledConfig, pam: &FinitePam) -> Result<LabeledConfig, LabeledError> {
    let n = labeled_normalize(eta, pam)?;
    if n != labeled_normalize(&mirror(&n), pam)? {
        return Err(LabeledError::NotMirrorInvariant);
    }
    let zero = Q::zero();
    let mut out = Vec::new();
    for x in n.pieces() {
        if x.j.contains(&zero) {
            if x.j.u != -x.j.v || x.j.p == x.j.q {
                return Err(LabeledError::AsymmetricCentral(x.j));
            }
            out.push(Piece::new(Interval { u: zero, v: x.j.v, p: Parity::Closed, q: x.j.q }, x.m));
        } else if x.j.u >= zero {
            out.push(*x);
        }
    }
    Ok(LabeledConfig(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum E1Kind {
    Whole,
    LeftAnchored,
    RightAnchored,
    Interior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elementary {
    E1 {
        kind: E1Kind,
        piece: Piece,
    },
    /// `(a, w1|_p` and `_q|w2, b)` with `p + q = 0`, one shared label.
    E2 {
        left: Piece,
        right: Piece,
    },
}

impl Elementary {
    pub fn label(&self) -> Elem {
        match self {
            Elementary::E1 { piece, .. } => piece.m,
            Elementary::E2 { left, .. } => left.m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub parts: Vec<Elementary>,
    /// Number of distinct successful decompositions (up to order).
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("piece {} is not elementary in the window", .0.j)]
    Unclassifiable(Piece),
    #[error("no pairing of cut pieces gives summable labels")]
    NoMatching,
    #[error("labels are insummable")]
    Insummable,
}

fn classify(x: &Piece, w: Window) -> Option<E1Kind> {
    let j = &x.j;
    let left = j.u == w.a && j.p == Parity::Open;
    let right = j.v == w.b && j.q == Parity::Open;
    match (left, right) {
        (true, true) => Some(E1Kind::Whole),
        (true, false) => Some(E1Kind::LeftAnchored),
        (false, true) => Some(E1Kind::RightAnchored),
        (false, false) if j.u > w.a && j.v < w.b && j.is_half_open() => Some(E1Kind::Interior),
        _ => None,
    }
}

fn e2_compatible(l: &Piece, r: &Piece) -> bool {
    l.m == r.m && l.j.v < r.j.u && l.j.q != r.j.p
}

/// Split a restricted configuration into elementary pieces with summable
/// labels. Every pairing of left-anchored with right-anchored pieces is
/// tried; `count` is the number of distinct successes.
pub fn decompose_window(xi_t: &LabeledConfig, w: Window, pam: &FinitePam) -> Result<Decomposition, DecomposeError> {
    let mut kinds = Vec::with_capacity(xi_t.len());
    for x in xi_t.pieces() {
        if x.m.is_zero() {
            continue;
        }
        kinds.push((*x, classify(x, w).ok_or(DecomposeError::Unclassifiable(*x))?));
    }
    let lefts: Vec<Piece> = kinds.iter().filter(|k| k.1 == E1Kind::LeftAnchored).map(|k| k.0).collect();
    let rights: Vec<Piece> = kinds.iter().filter(|k| k.1 == E1Kind::RightAnchored).map(|k| k.0).collect();
    let fixed: Vec<Elementary> = kinds
        .iter()
        .filter(|k| !matches!(k.1, E1Kind::LeftAnchored | E1Kind::RightAnchored))
        .map(|&(piece, kind)| Elementary::E1 { kind, piece })
        .collect();

    let mut found: BTreeSet<Vec<Elementary>> = BTreeSet::new();
    let mut used = vec![false; rights.len()];
    let mut acc = fixed.clone();
    enumerate_matchings(&lefts, &rights, 0, &mut used, &mut acc, &mut |parts| {
        let labels: Vec<Elem> = parts.iter().map(Elementary::label).collect();
        if pam.sum_tuple(&labels).is_some() {
            let mut p = parts.to_vec();
            p.sort();
            found.insert(p);
        }
    });
    match found.iter().next() {
        Some(parts) => Ok(Decomposition { parts: parts.clone(), count: found.len() }),
        None => {
            let pairable = lefts.iter().any(|l| rights.iter().any(|r| l.m == r.m));
            let paired = lefts.iter().any(|l| rights.iter().any(|r| e2_compatible(l, r)));
            if pairable && !paired {
                Err(DecomposeError::NoMatching)
            } else {
                Err(DecomposeError::Insummable)
            }
        }
    }
}

fn enumerate_matchings(
    lefts: &[Piece],
    rights: &[Piece],
    i: usize,
    used: &mut [bool],
    acc: &mut Vec<Elementary>,
    visit: &mut impl FnMut(&[Elementary]),
) {
    if i == lefts.len() {
        let before = acc.len();
        for (k, r) in rights.iter().enumerate() {
            if !used[k] {
                acc.push(Elementary::E1 { kind: E1Kind::RightAnchored, piece: *r });
            }
        }
        visit(acc);
        acc.truncate(before);
        return;
    }
    acc.push(Elementary::E1 { kind: E1Kind::LeftAnchored, piece: lefts[i] });
    enumerate_matchings(lefts, rights, i + 1, used, acc, visit);
    acc.pop();
    for k in 0..rights.len() {
        if !used[k] && e2_compatible(&lefts[i], &rights[k]) {
            used[k] = true;
            acc.push(Elementary::E2 { left: lefts[i], right: rights[k] });
            enumerate_matchings(lefts, rights, i + 1, used, acc, visit);
            acc.pop();
            used[k] = false;
        }
    }
}

/// Decompose `ξ|_U`, trying the restriction as given, its paste fixpoint
/// and its normal form in turn.
pub fn window_decomposition(xi: &LabeledConfig, w: Window, pam: &FinitePam) -> Result<Decomposition, DecomposeError> {
    let raw = drop_dead(&restrict(xi, w));
    let fix = rewrite_fixpoint(&raw, pam);
    let nf = normalize_unchecked(&raw, pam);
    decompose_window(&raw, w, pam)
        .or_else(|_| decompose_window(&fix, w, pam))
        .or_else(|_| decompose_window(&nf, w, pam))
}

/// Why a configuration failed the admissibility check.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AdmissibilityFailure {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("window around {t} does not decompose: {reason}")]
    Window { t: String, reason: DecomposeError },
    #[error("window around {t} has {count} distinct decompositions")]
    NotUnique { t: String, count: usize },
    #[error("configuration is not supported in the shrunken window")]
    Support,
}

/// Centers at which window contents can change, with midpoints and two
/// outer points.
pub fn critical_centers(xi: &LabeledConfig, eps: Q) -> Vec<Q> {
    let mut c: Vec<Q> = xi.endpoints().iter().flat_map(|&e| [e - eps, e + eps]).collect();
    c.sort();
    c.dedup();
    let mut out = Vec::with_capacity(2 * c.len() + 2);
    if let (Some(&lo), Some(&hi)) = (c.first(), c.last()) {
        out.push(lo - Q::from_integer(1));
        for w in c.windows(2) {
            out.push(w[0]);
            out.push((w[0] + w[1]) * half());
        }
        out.push(hi);
        out.push(hi + Q::from_integer(1));
    }
    out
}

/// `ε`-admissibility supported by `V = (a, b)`.
pub fn check_admissible(xi: &LabeledConfig, eps: Q, v: Window, pam: &FinitePam) -> Result<(), AdmissibilityFailure> {
    assert!(eps > Q::zero() && v.b - v.a > eps);
    if let Some(witness) = t_violation(xi, pam)? {
        return Err(TensorError::NotInT { witness }.into());
    }
    let n = normalize_unchecked(xi, pam);
    let inner = Window::new(v.a + eps * half(), v.b - eps * half());
    if normalize_unchecked(&restrict(&n, inner), pam) != n {
        return Err(AdmissibilityFailure::Support);
    }
    let unique = pam.is_self_insummable();
    let live = drop_dead(xi);
    for t in critical_centers(&live, eps) {
        match window_decomposition(&live, Window::around(t, eps), pam) {
            Err(reason) => return Err(AdmissibilityFailure::Window { t: fmt_q(&t), reason }),
            Ok(d) if unique && d.count != 1 => {
                return Err(AdmissibilityFailure::NotUnique { t: fmt_q(&t), count: d.count })
            }
            Ok(_) => {}
        }
    }
    Ok(())
}

pub fn is_admissible(xi: &LabeledConfig, eps: Q, v: Window, pam: &FinitePam) -> bool {
    check_admissible(xi, eps, v, pam).is_ok()
}

impl fmt::Display for E1Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            E1Kind::Whole => "whole",
            E1Kind::LeftAnchored => "left-anchored",
            E1Kind::RightAnchored => "right-anchored",
            E1Kind::Interior => "interior",
        })
    }
}
