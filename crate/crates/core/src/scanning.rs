//! The scanning map from thickened configurations (window radius 1) to
//! Moore loops in `BM`.

use std::fmt;

use num_traits::{One, Zero};

use crate::intervals::{Interval, Parity};
use crate::labeled::{window_decomposition, DecomposeError, E1Kind, Elementary, LabeledConfig, Piece, Window};
use crate::pam::{Elem, FinitePam};
use crate::rational::{fmt_q, half, q, Q};
use crate::tensor::{bm_canon, BMElement, CirclePoint, TensorError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScanError {
    #[error("interval {0} is closed at both ends and not longer than 1")]
    NotInK(Interval),
    #[error("pieces do not form a cut pair")]
    NotCutPair,
    #[error("|u - t| must be less than 1/2")]
    CenterTooFar,
    #[error("window around {t} does not decompose: {reason}")]
    Decompose { t: String, reason: DecomposeError },
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("loop invariant violated: {0}")]
    Invariant(String),
}

fn par(p: Parity) -> Q {
    q(p.sign())
}

/// `ω(J)(s)` as a coordinate in `[-1, 1]` (both ends are the basepoint).
pub fn omega_raw(j: &Interval, s: Q) -> Result<Q, ScanError> {
    let (u, v) = (j.u, j.v);
    let (p, qq) = (par(j.p), par(j.q));
    let h = half();
    if v - u > Q::one() {
        Ok(if u - h < s && s <= u + h {
            p * (s - u - h)
        } else if u + h < s && s <= v - h {
            Q::zero()
        } else if v - h < s && s <= v + h {
            qq * (s - v + h)
        } else {
            Q::one()
        })
    } else {
        if j.p == j.q {
            return Err(ScanError::NotInK(*j));
        }
        Ok(if u - h < s && s <= v - h {
            p * (s - u - h)
        } else if v - h < s && s <= u + h {
            p * (v - u - Q::one())
        } else if u + h < s && s <= v + h {
            qq * (s - v + h)
        } else {
            Q::one()
        })
    }
}

pub fn omega(j: &Interval, s: Q) -> Result<CirclePoint, ScanError> {
    omega_raw(j, s).map(CirclePoint::new)
}

/// The replacement: close the outer end of an open anchored piece.
pub fn replace_elementary(e: &Elementary) -> Elementary {
    let close_left = |x: &Piece| Piece::new(Interval { p: Parity::Closed, ..x.j }, x.m);
    let close_right = |x: &Piece| Piece::new(Interval { q: Parity::Closed, ..x.j }, x.m);
    match e {
        Elementary::E1 { kind: E1Kind::LeftAnchored, piece } if piece.j.q == Parity::Open => {
            Elementary::E1 { kind: E1Kind::LeftAnchored, piece: close_left(piece) }
        }
        Elementary::E1 { kind: E1Kind::RightAnchored, piece } if piece.j.p == Parity::Open => {
            Elementary::E1 { kind: E1Kind::RightAnchored, piece: close_right(piece) }
        }
        Elementary::E1 { .. } => *e,
        Elementary::E2 { left, right } => {
            if left.j.q == Parity::Closed {
                let right = if right.j.p == Parity::Open { close_right(right) } else { *right };
                Elementary::E2 { left: *left, right }
            } else {
                let left = if left.j.q == Parity::Open { close_left(left) } else { *left };
                Elementary::E2 { left, right: *right }
            }
        }
    }
}

/// `ψ ⊕ ψ'` for a replaced cut pair `K = (., v|_q`, `K' = _q̄|u', .)`.
pub fn merged_strand_raw(k: &Interval, k2: &Interval, s: Q) -> Result<Q, ScanError> {
    if k.v >= k2.u || k.q == k2.p {
        return Err(ScanError::NotCutPair);
    }
    let (v, u2) = (k.v, k2.u);
    let h = half();
    if s <= u2 - h {
        omega_raw(k, s)
    } else if s < v + h {
        Ok(par(k.q) * (u2 - v))
    } else {
        omega_raw(k2, s)
    }
}

pub fn merged_strand(k: &Interval, k2: &Interval, s: Q) -> Result<CirclePoint, ScanError> {
    merged_strand_raw(k, k2, s).map(CirclePoint::new)
}

/// Raw strands `(coordinate, label)` of `α_t(ξ)(u)` before taking the
/// canonical form, in a deterministic order.
pub fn alpha_strands(xi: &LabeledConfig, u: Q, t: Q, pam: &FinitePam) -> Result<Vec<(Q, Elem)>, ScanError> {
    if (u - t) * (u - t) >= half() * half() {
        return Err(ScanError::CenterTooFar);
    }
    let w = Window::around(t, Q::one());
    let d = window_decomposition(xi, w, pam).map_err(|reason| ScanError::Decompose { t: fmt_q(&t), reason })?;
    let mut out = Vec::with_capacity(d.parts.len());
    for e in &d.parts {
        match replace_elementary(e) {
            Elementary::E1 { piece, .. } => out.push((omega_raw(&piece.j, u)?, piece.m)),
            Elementary::E2 { left, right } => out.push((merged_strand_raw(&left.j, &right.j, u)?, left.m)),
        }
    }
    Ok(out)
}

/// `α_t(ξ)(u)`; pass `t = u` for the default window.
pub fn alpha_eval(xi: &LabeledConfig, u: Q, t: Q, pam: &FinitePam) -> Result<BMElement, ScanError> {
    let strands = alpha_strands(xi, u, t, pam)?;
    let items: Vec<(CirclePoint, Elem)> = strands.into_iter().map(|(c, m)| (CirclePoint::new(c), m)).collect();
    Ok(bm_canon(pam, &items)?)
}

/// The projection `p`: the value at `0` of the scanned symmetric
/// configuration.
pub fn path_eval_at_zero(eta: &LabeledConfig, pam: &FinitePam) -> Result<BMElement, ScanError> {
    alpha_eval(eta, Q::zero(), Q::zero(), pam)
}

/// Affine circle coordinate `c1·u + c0` carrying a label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Track {
    pub c1: Q,
    pub c0: Q,
    pub label: Elem,
}

impl Track {
    pub fn at(&self, u: Q) -> Q {
        self.c1 * u + self.c0
    }
}

/// A piecewise-affine Moore loop of length `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreLoop {
    pub s: Q,
    /// `0 = b_0 < … < b_k = s`
    pub breakpoints: Vec<Q>,
    /// Tracks on `(b_i, b_{i+1})`.
    pub segments: Vec<Vec<Track>>,
}

impl MooreLoop {
    fn segment_of(&self, u: Q) -> Option<usize> {
        self.breakpoints.windows(2).position(|w| w[0] <= u && u <= w[1])
    }

    pub fn eval_segment(&self, i: usize, u: Q, pam: &FinitePam) -> Result<BMElement, TensorError> {
        let items: Vec<(CirclePoint, Elem)> =
            self.segments[i].iter().map(|tr| (CirclePoint::new(tr.at(u)), tr.label)).collect();
        bm_canon(pam, &items)
    }

    /// Value at `u`; outside `[0, s]` the loop is at the basepoint.
    pub fn eval(&self, u: Q, pam: &FinitePam) -> Result<BMElement, TensorError> {
        match self.segment_of(u) {
            Some(i) => self.eval_segment(i, u, pam),
            None => Ok(BMElement::empty()),
        }
    }

    /// Endpoint basepoints and one-sided agreement at interior breakpoints.
    pub fn check_invariants(&self, pam: &FinitePam) -> Result<(), ScanError> {
        let k = self.segments.len();
        if k == 0 {
            return Ok(());
        }
        if !self.eval_segment(0, self.breakpoints[0], pam)?.is_empty() {
            return Err(ScanError::Invariant("value at 0 is not the basepoint".into()));
        }
        if !self.eval_segment(k - 1, self.s, pam)?.is_empty() {
            return Err(ScanError::Invariant("value at s is not the basepoint".into()));
        }
        for i in 1..k {
            let b = self.breakpoints[i];
            if self.eval_segment(i - 1, b, pam)? != self.eval_segment(i, b, pam)? {
                return Err(ScanError::Invariant(format!("discontinuity at {}", fmt_q(&b))));
            }
        }
        Ok(())
    }

    pub fn dump(&self, pam: &FinitePam) -> String {
        let mut out = format!("moore {}\n", fmt_q(&self.s));
        for b in &self.breakpoints {
            out.push_str(&format!("break {}\n", fmt_q(b)));
        }
        for (i, seg) in self.segments.iter().enumerate() {
            out.push_str(&format!("segment {i}\n"));
            for tr in seg {
                out.push_str(&format!("track {} {} {}\n", fmt_q(&tr.c1), fmt_q(&tr.c0), pam.name_of(tr.label)));
            }
        }
        out
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·u + {}", fmt_q(&self.c1), fmt_q(&self.c0))
    }
}

/// Candidate breakpoints: endpoints shifted by `0, ±1/2, ±1`, clipped to
/// `[0, s]`, plus `0` and `s`.
pub fn breakpoint_candidates(xi: &LabeledConfig, s: Q) -> Vec<Q> {
    let offs = [q(0), half(), -half(), q(1), q(-1)];
    let mut v: Vec<Q> = xi
        .endpoints()
        .iter()
        .flat_map(|&e| offs.iter().map(move |&o| e + o))
        .filter(|&b| Q::zero() <= b && b <= s)
        .chain([Q::zero(), s])
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Trace `α` on `[0, s]` as an exact piecewise-affine loop and check the
/// loop invariants.
pub fn alpha_trace(xi: &LabeledConfig, s: Q, pam: &FinitePam) -> Result<MooreLoop, ScanError> {
    let breakpoints = breakpoint_candidates(xi, s);
    let mut segments = Vec::new();
    for w in breakpoints.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let m = (lo + hi) * half();
        let d = (hi - m) * half();
        let y1 = alpha_strands(xi, m, m, pam)?;
        let y2 = alpha_strands(xi, m + d, m + d, pam)?;
        if y1.len() != y2.len() {
            return Err(ScanError::Invariant(format!("strand count changes inside ({}, {})", fmt_q(&lo), fmt_q(&hi))));
        }
        let mut seg = Vec::new();
        for (&(a, l1), &(b, l2)) in y1.iter().zip(&y2) {
            let c1 = (b - a) / d;
            if l1 != l2 || !(c1 == Q::zero() || c1 == Q::one() || c1 == -Q::one()) {
                return Err(ScanError::Invariant(format!("non-affine strand inside ({}, {})", fmt_q(&lo), fmt_q(&hi))));
            }
            let tr = Track { c1, c0: a - c1 * m, label: l1 };
            let base = c1.is_zero() && (a == Q::one() || a == -Q::one());
            if !base {
                seg.push(tr);
            }
        }
        segments.push(seg);
    }
    let lp = MooreLoop { s, breakpoints, segments };
    lp.check_invariants(pam)?;
    Ok(lp)
}
