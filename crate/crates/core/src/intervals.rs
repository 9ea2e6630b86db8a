//! Parity-typed intervals and unlabeled configurations.
//!
//! An [`Interval`] is a quadruple `(u, v, p, q)` with `u <= v`; the parities
//! say whether each endpoint is closed (`+1`) or open (`-1`). A point
//! `u == v` is allowed only with opposite parities and represents nothing
//! (it annihilates). Unordered multisets of intervals normalize to a
//! [`ReducedConfig`] by pasting touching pieces and dropping degenerate ones.

use std::fmt;

use crate::rational::{fmt_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Open,
    Closed,
}

impl Parity {
    pub fn from_sign(s: i64) -> Parity {
        if s > 0 {
            Parity::Closed
        } else {
            Parity::Open
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Parity::Closed => 1,
            Parity::Open => -1,
        }
    }

    /// `bar(p) = -p`
    pub fn flip(self) -> Parity {
        match self {
            Parity::Closed => Parity::Open,
            Parity::Open => Parity::Closed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub u: Q,
    pub v: Q,
    pub p: Parity,
    pub q: Parity,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("left endpoint exceeds right endpoint")]
    Reversed,
    #[error("degenerate interval requires opposite parities")]
    DegenerateSameParity,
}

impl Interval {
    pub fn new(u: Q, v: Q, p: Parity, q: Parity) -> Result<Interval, IntervalError> {
        if u > v {
            return Err(IntervalError::Reversed);
        }
        if u == v && p == q {
            return Err(IntervalError::DegenerateSameParity);
        }
        Ok(Interval { u, v, p, q })
    }

    /// Construct from `±1` parities. Panics on invalid data; intended for
    /// literals in code and tests.
    pub fn of(u: Q, v: Q, p: i64, q: i64) -> Interval {
        Interval::new(u, v, Parity::from_sign(p), Parity::from_sign(q)).expect("valid interval")
    }

    pub fn is_degenerate(&self) -> bool {
        self.u == self.v
    }

    /// Opposite end parities.
    pub fn is_half_open(&self) -> bool {
        self.p != self.q
    }

    pub fn length(&self) -> Q {
        self.v - self.u
    }

    /// `(u, v, p, q) -> (-v, -u, bar q, bar p)`
    pub fn mirror(&self) -> Interval {
        Interval { u: -self.v, v: -self.u, p: self.q.flip(), q: self.p.flip() }
    }

    pub fn translate(&self, by: Q) -> Interval {
        Interval { u: self.u + by, v: self.v + by, ..*self }
    }

    /// Apply a nondecreasing map to both endpoints, keeping parities. `None`
    /// when the image collapses to a point with equal parities.
    pub fn map_endpoints(&self, f: impl Fn(Q) -> Q) -> Option<Interval> {
        Interval::new(f(self.u), f(self.v), self.p, self.q).ok()
    }

    pub fn contains(&self, x: &Q) -> bool {
        let left = match self.p {
            Parity::Closed => self.u <= *x,
            Parity::Open => self.u < *x,
        };
        let right = match self.q {
            Parity::Closed => *x <= self.v,
            Parity::Open => *x < self.v,
        };
        left && right
    }

    /// `self` is entirely to the left of `other`, allowing a touch between
    /// endpoints of opposite parity.
    pub fn leq(&self, other: &Interval) -> bool {
        self.v < other.u || (self.v <= other.u && self.q != other.p)
    }

    /// Touching pair that pastes into one interval.
    pub fn touches(&self, other: &Interval) -> bool {
        self.v == other.u && self.q != other.p
    }

    pub fn paste(&self, other: &Interval) -> Interval {
        Interval { u: self.u, v: other.v, p: self.p, q: other.q }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.p == Parity::Closed { '[' } else { '(' };
        let r = if self.q == Parity::Closed { ']' } else { ')' };
        write!(f, "{l}{},{}{r}", fmt_q(&self.u), fmt_q(&self.v))
    }
}

/// Strictly separated, nondegenerate, sorted intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedConfig(Vec<Interval>);

impl ReducedConfig {
    pub fn empty() -> Self {
        ReducedConfig(Vec::new())
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(items: &[Interval]) -> bool {
        items.iter().all(|j| !j.is_degenerate()) && items.windows(2).all(|w| w[0].v < w[1].u)
    }
}

impl fmt::Display for ReducedConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("intervals are incompatible: no linear order places every pair side by side")]
pub struct Incompatible;

/// A linear order of the multiset satisfying `leq` pairwise, if one exists.
///
/// Greedy: any element that is `leq` every remaining element can go first,
/// because sub-multisets of an orderable multiset stay orderable.
pub fn order_intervals(items: &[Interval]) -> Result<Vec<Interval>, Incompatible> {
    let mut rest: Vec<Interval> = items.to_vec();
    rest.sort();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let pos =
            (0..rest.len()).find(|&i| (0..rest.len()).all(|k| k == i || rest[i].leq(&rest[k]))).ok_or(Incompatible)?;
        out.push(rest.remove(pos));
    }
    Ok(out)
}

/// Normalize a multiset of intervals to its reduced representative.
pub fn normalize_config(items: &[Interval]) -> Result<ReducedConfig, Incompatible> {
    let mut chain = order_intervals(items)?;
    loop {
        let before = chain.len();
        chain.retain(|j| !j.is_degenerate());
        let mut pasted = Vec::with_capacity(chain.len());
        for j in chain {
            match pasted.last_mut() {
                Some(prev) if Interval::touches(prev, &j) => *prev = prev.paste(&j),
                _ => pasted.push(j),
            }
        }
        chain = pasted;
        if chain.len() == before {
            break;
        }
    }
    debug_assert!(ReducedConfig::is_reduced(&chain));
    Ok(ReducedConfig(chain))
}

/// Partial sum on the space of configurations: defined when the union is a
/// configuration.
pub fn merge_summable(a: &ReducedConfig, b: &ReducedConfig) -> Option<ReducedConfig> {
    let union: Vec<Interval> = a.0.iter().chain(b.0.iter()).copied().collect();
    normalize_config(&union).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn iv(u: Q, v: Q, p: i64, qq: i64) -> Interval {
        Interval::of(u, v, p, qq)
    }

    #[test]
    fn leq_examples() {
        assert!(iv(q(0), q(1), -1, 1).leq(&iv(q(1), q(2), -1, -1)));
        assert!(!iv(q(0), q(1), 1, 1).leq(&iv(q(1), q(2), 1, 1)));
        assert!(iv(q(0), q(1), -1, -1).leq(&iv(q(2), q(3), -1, -1)));
    }

    #[test]
    fn invariants_enforced() {
        assert_eq!(Interval::new(q(1), q(1), Parity::Open, Parity::Open), Err(IntervalError::DegenerateSameParity));
        assert_eq!(Interval::new(q(2), q(1), Parity::Open, Parity::Open), Err(IntervalError::Reversed));
        assert!(Interval::new(q(1), q(1), Parity::Closed, Parity::Open).is_ok());
    }

    #[test]
    fn normalize_examples() {
        let r = normalize_config(&[iv(q(0), q(1), -1, 1), iv(q(1), q(2), -1, -1)]).unwrap();
        assert_eq!(r.intervals(), &[iv(q(0), q(2), -1, -1)]);
        assert!(normalize_config(&[iv(q(1), q(1), 1, -1)]).unwrap().is_empty());
        assert!(normalize_config(&[]).unwrap().is_empty());
        assert_eq!(normalize_config(&[iv(q(0), q(1), 1, 1), iv(q(1), q(2), 1, 1)]), Err(Incompatible));
        assert_eq!(normalize_config(&[iv(q(0), q(2), -1, -1), iv(q(1), q(3), -1, -1)]), Err(Incompatible));
        // paste through a degenerate piece
        let r = normalize_config(&[iv(q(0), q(1), -1, 1), iv(q(1), q(1), -1, 1), iv(q(1), q(2), -1, 1)]).unwrap();
        assert_eq!(r.intervals(), &[iv(q(0), q(2), -1, 1)]);
    }

    #[test]
    fn merge_examples() {
        let a = normalize_config(&[iv(q(0), q(1), -1, 1)]).unwrap();
        let b = normalize_config(&[iv(q(1), q(2), -1, -1)]).unwrap();
        assert_eq!(merge_summable(&a, &b).unwrap().intervals(), &[iv(q(0), q(2), -1, -1)]);
        let c = normalize_config(&[iv(q(0), q(1), 1, 1)]).unwrap();
        let d = normalize_config(&[iv(q(1), q(2), 1, 1)]).unwrap();
        assert_eq!(merge_summable(&c, &d), None);
        assert_eq!(merge_summable(&a, &ReducedConfig::empty()), Some(a.clone()));
    }

    #[test]
    fn mirror_flips_parities() {
        let j = iv(q(0), q(1), -1, 1);
        assert_eq!(j.mirror(), iv(q(-1), q(0), -1, 1));
        assert_eq!(j.mirror().mirror(), j);
        let k = iv(qf(1, 2), q(2), 1, -1);
        assert_eq!(k.mirror(), iv(q(-2), qf(-1, 2), 1, -1));
    }

    #[test]
    fn display() {
        assert_eq!(iv(qf(3, 2), q(2), 1, -1).to_string(), "[3/2,2)");
    }
}
