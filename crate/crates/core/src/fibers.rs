//! Symmetric configurations over `BM`: the contraction, caps and standard
//! lifts, the homotopies used around the filtration of `BM`, and the fiber
//! pieces `F(α) ⊃ H(α)` with their retraction and gluing maps.
//!
//! Symmetric configurations are passed as a [`LabeledConfig`] together with
//! the radius `s` of their window `(-s, s)`; maps that grow the window return
//! the new radius.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::intervals::{Interval, Parity};
use crate::labeled::{
    double, labeled_normalize, mirror, positive_part, restrict, rewrite_fixpoint, tidy, LabeledConfig, LabeledError,
    Piece, Window,
};
use crate::pam::{Elem, FinitePam};
use crate::rational::{fmt_q, half, max_q, q, qf, sign, Q};
use crate::scanning::{path_eval_at_zero, ScanError};
use crate::tensor::{bm_canon, BMElement, CirclePoint, TensorError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FiberError {
    #[error(transparent)]
    Labeled(#[from] LabeledError),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("parameter t = {0} is outside [0, 1]")]
    BadParameter(String),
    #[error("base point has no coordinate with |t| > 1/2")]
    NotInO,
    #[error("configuration is not in F(alpha) over the given base point")]
    NotInF,
    #[error("configuration is not in H(alpha') over the pushed base point")]
    NotInH,
    #[error("partition choice does not match the base point")]
    BadPartition,
    #[error("map is undefined at {0}")]
    Undefined(String),
}

fn check_t(t: Q) -> Result<(), FiberError> {
    if t < Q::zero() || t > Q::one() {
        return Err(FiberError::BadParameter(fmt_q(&t)));
    }
    Ok(())
}

/// Apply a nondecreasing endpoint map; a collapse with equal parities
/// drops the piece.
fn map_piece(x: &Piece, f: impl Fn(Q) -> Q) -> Option<Piece> {
    x.j.map_endpoints(f).map(|j| Piece::new(j, x.m))
}

fn map_all(xi: &LabeledConfig, f: impl Fn(Q) -> Q) -> LabeledConfig {
    LabeledConfig::new(xi.pieces().iter().filter_map(|x| map_piece(x, &f)).collect())
}

fn odd(v: Q, f: impl Fn(Q) -> Q) -> Q {
    if v.is_negative() {
        -f(-v)
    } else {
        f(v)
    }
}

/// `h_t` of the contraction on `(-s, s)`.
pub fn h_contract(t: Q, s: Q, u: Q) -> Q {
    let ts = t * s;
    if u >= ts {
        u - ts
    } else if u <= -ts {
        u + ts
    } else {
        Q::zero()
    }
}

/// The contraction `H_t` of a symmetric configuration. Works on the
/// positive part so that pieces reaching `0` re-form with their mirror
/// images as one symmetric interval.
pub fn contract(eta: &LabeledConfig, t: Q, s: Q, pam: &FinitePam) -> Result<LabeledConfig, FiberError> {
    check_t(t)?;
    let pos = positive_part(eta, pam)?;
    let mut central = Vec::new();
    let mut side = Vec::new();
    for x in pos.pieces() {
        let (u, v) = (max_q(h_contract(t, s, x.j.u), Q::zero()), max_q(h_contract(t, s, x.j.v), Q::zero()));
        if v.is_zero() {
            continue;
        }
        if u.is_zero() {
            central.push(Piece::new(Interval { u: -v, v, p: x.j.q.flip(), q: x.j.q }, x.m));
        } else {
            side.push(Piece::new(Interval { u, v, ..x.j }, x.m));
        }
    }
    let side = LabeledConfig::new(side);
    let out = LabeledConfig::new(central).plus(&double(&side));
    Ok(tidy(&out, pam)?)
}

/// The cap construction: `z = p(η)` and `C ∔ T₂(positive part)`, supported
/// by `(0, s + 2)`.
pub fn cap_project(eta: &LabeledConfig, s: Q, pam: &FinitePam) -> Result<(BMElement, LabeledConfig, Q), FiberError> {
    let z = path_eval_at_zero(eta, pam)?;
    let pos = positive_part(eta, pam)?;
    let cap: Vec<Piece> = pos
        .pieces()
        .iter()
        .filter(|x| x.j.u <= half())
        .map(|x| Piece::new(Interval { u: q(1) - x.j.u, v: q(2) - x.j.u, p: Parity::Open, q: x.j.p.flip() }, x.m))
        .collect();
    let xi = LabeledConfig::new(cap).plus(&pos.translate(q(2)));
    Ok((z, tidy(&xi, pam)?, s + q(2)))
}

/// The standard lift `L ∔ T₂ξ ∔ μ(L ∔ T₂ξ)` on `(-(s+2), s+2)`.
///
/// A point at `0` lifts with parity `+1` (either choice gives the same
/// element after pasting with its mirror).
pub fn standard_lift(
    z: &BMElement,
    xi: &LabeledConfig,
    s: Q,
    pam: &FinitePam,
) -> Result<(LabeledConfig, Q), FiberError> {
    let lift: Vec<Piece> = z
        .pairs()
        .iter()
        .map(|&(t, m)| {
            let h = t.abs() * half();
            let p = if t.is_zero() { Parity::Closed } else { Parity::from_sign(-sign(&t)) };
            Piece::new(Interval { u: h, v: h + q(1), p, q: Parity::Closed }, m)
        })
        .collect();
    let base = LabeledConfig::new(lift).plus(&xi.translate(q(2)));
    Ok((tidy(&double(&base), pam)?, s + q(2)))
}

/// `T₂ h'_t T₋₂`: push everything toward `2`.
pub fn push_homotopy(eta: &LabeledConfig, t: Q) -> Result<LabeledConfig, FiberError> {
    check_t(t)?;
    let two = q(2);
    Ok(map_all(eta, |x| two + h_contract(t, two, x - two)))
}

/// `h'_t` on circle coordinates in `[-1, 1]`.
pub fn h_base(t: Q, u: Q) -> Q {
    let edge = q(1) - t * half();
    if u >= edge {
        q(1)
    } else if u <= -edge {
        q(-1)
    } else {
        q(2) * u / (q(2) - t)
    }
}

pub fn base_homotopy(z: &BMElement, t: Q, pam: &FinitePam) -> Result<BMElement, FiberError> {
    check_t(t)?;
    let items: Vec<(CirclePoint, Elem)> = z.pairs().iter().map(|&(c, m)| (CirclePoint::new(h_base(t, c)), m)).collect();
    Ok(bm_canon(pam, &items)?)
}

/// `λ_t` on `[0, ∞)`.
pub fn lambda(t: Q, v: Q) -> Q {
    if v <= t / q(4) {
        Q::zero()
    } else if v <= half() {
        (q(4) * v - t) / (q(4) - q(2) * t)
    } else if v <= q(1) {
        (q(3) * t + q(1)) * v - q(3) * t * half()
    } else {
        v + q(3) * t * half()
    }
}

/// `ν_t` on `[0, ∞)`: `2v/(2-t)` up to `3/4`, then linear up to
/// `(1, 1 + 3t/2)`, then `v + 3t/2`.
pub fn nu(t: Q, v: Q) -> Q {
    let three_q = qf(3, 4);
    if v <= three_q {
        q(2) * v / (q(2) - t)
    } else if v <= q(1) {
        let y0 = q(3) / (q(2) * (q(2) - t));
        let y1 = q(1) + q(3) * t * half();
        y0 + (y1 - y0) * (v - three_q) * q(4)
    } else {
        v + q(3) * t * half()
    }
}

/// Membership of a base point in the open set `O`: empty, or some
/// coordinate with `|t| > 1/2`.
pub fn in_o(z: &BMElement) -> bool {
    z.is_empty() || z.points.iter().any(|(t, _)| t.abs() > half())
}

/// The covering homotopy `H_t = λ_t(S₀) ∔ ν_t(S₊) ∔ μν_t(S₊)`; the window
/// grows by `3t/2`.
pub fn cover_homotopy(eta: &LabeledConfig, t: Q, s: Q, pam: &FinitePam) -> Result<(LabeledConfig, Q), FiberError> {
    check_t(t)?;
    if !in_o(&path_eval_at_zero(eta, pam)?) {
        return Err(FiberError::NotInO);
    }
    let n = tidy(eta, pam)?;
    let zero = Q::zero();
    let s0: Vec<Piece> = n.pieces().iter().copied().filter(|x| x.j.contains(&zero)).collect();
    let sp: Vec<Piece> = n.pieces().iter().copied().filter(|x| !x.j.contains(&zero) && x.j.u >= zero).collect();
    let s0 = map_all(&LabeledConfig::new(s0), |v| odd(v, |w| lambda(t, w)));
    let sp = map_all(&LabeledConfig::new(sp), |v| nu(t, v));
    let out = s0.plus(&sp).plus(&mirror(&sp));
    Ok((tidy(&out, pam)?, s + q(3) * t * half()))
}

/// `E(v, p, m)`: the symmetric piece `_{p̄}|-v, v|_p`.
pub fn e_symmetric(v: Q, p: Parity, m: Elem) -> Piece {
    Piece::new(Interval { u: -v, v, p: p.flip(), q: p }, m)
}

/// `e(t, m) = E((1 - |t|)/2, sgn t, m)`, which scans to the point `t`.
pub fn e_piece(t: Q, m: Elem) -> Piece {
    e_symmetric((q(1) - t.abs()) * half(), Parity::from_sign(sign(&t)), m)
}

/// The cut pair of `f(t, n)` reaching out to `±reach`: `_p||t|/2, reach)`
/// with `p = -sgn t` and its mirror image `[-reach, -|t|/2|_{p̄}`.
pub fn f_pair(t: Q, n: Elem, reach: Q) -> [Piece; 2] {
    let v = t.abs() * half();
    let k = Piece::new(Interval { u: v, v: reach, p: Parity::from_sign(-sign(&t)), q: Parity::Open }, n);
    [k.mirror(), k]
}

/// `f(t, n)` with both pieces half-open: `_p||t|/2, 1|_{p̄}` and its mirror.
pub fn f_half(t: Q, n: Elem) -> [Piece; 2] {
    let p = Parity::from_sign(-sign(&t));
    let k = Piece::new(Interval { u: t.abs() * half(), v: q(1), p, q: p.flip() }, n);
    [k.mirror(), k]
}

/// All `α ∈ P(m_1) × … × P(m_s)` for the nonzero coordinates of `z`.
pub fn partition_choices(z: &BMElement, pam: &FinitePam) -> Vec<Vec<(Elem, Elem)>> {
    let mut out = vec![Vec::new()];
    for &(_, m) in &z.points {
        let ps = pam.partitions(m);
        out = out
            .into_iter()
            .flat_map(|pre| {
                ps.iter().map(move |&ab| {
                    let mut v = pre.clone();
                    v.push(ab);
                    v
                })
            })
            .collect();
    }
    out
}

fn check_alpha(z: &BMElement, alpha: &[(Elem, Elem)], pam: &FinitePam) -> Result<(), FiberError> {
    if alpha.len() != z.points.len() || z.points.iter().zip(alpha).any(|(&(_, m), &(a, b))| pam.add(a, b) != Some(m)) {
        return Err(FiberError::BadPartition);
    }
    Ok(())
}

/// The standard lift of `z` of type `α`:
/// `([-1, 1) : m₀) ∔ Σ e(t_i, a_i) ∔ Σ f'(t_i, b_i)`.
pub fn lift_of_type(z: &BMElement, alpha: &[(Elem, Elem)], pam: &FinitePam) -> Result<LabeledConfig, FiberError> {
    check_alpha(z, alpha, pam)?;
    let mut v = Vec::new();
    if let Some(m0) = z.zero {
        v.push(Piece::new(Interval { u: q(-1), v: q(1), p: Parity::Closed, q: Parity::Open }, m0));
    }
    for (&(t, _), &(a, b)) in z.points.iter().zip(alpha) {
        if !a.is_zero() {
            v.push(e_piece(t, a));
        }
        if !b.is_zero() {
            v.extend(f_half(t, b));
        }
    }
    Ok(LabeledConfig::new(v))
}

/// Role of one piece of a representative in the fiber pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceRole {
    /// Misses the window.
    Outer,
    /// Symmetric piece contributing to the `0` coordinate.
    Z,
    /// `e(t, ·)`
    E(Q),
    /// One member of `f(t, ·)`.
    F(Q),
    /// One member of a far pair `f(u, ·)`, `1 <= |u| < 2`.
    Far(Q),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    InH,
    InF,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberClass {
    pub verdict: Verdict,
    pub alpha: Vec<(Elem, Elem)>,
    pub m0: Elem,
    /// Far pairs `(u, n)`.
    pub far: Vec<(Q, Elem)>,
    /// The representative matched on `(-1, 1)` and the role of each piece.
    pub rep: LabeledConfig,
    pub roles: Vec<PieceRole>,
}

impl FiberClass {
    fn neither() -> FiberClass {
        FiberClass {
            verdict: Verdict::Neither,
            alpha: Vec::new(),
            m0: Elem::ZERO,
            far: Vec::new(),
            rep: LabeledConfig::empty(),
            roles: Vec::new(),
        }
    }

    /// `H(α) ⊂ F(α)`, so an H verdict is also in F.
    pub fn in_f(&self) -> bool {
        self.verdict != Verdict::Neither
    }

    pub fn in_h(&self) -> bool {
        self.verdict == Verdict::InH
    }
}

struct Match {
    alpha: Vec<(Elem, Elem)>,
    m0: Elem,
    far: Vec<(Q, Elem)>,
    roles: Vec<PieceRole>,
}

/// Match a representative on `(-r, r)`: `r = 1` for the F pattern, `r = 3`
/// with the extra H conditions (whole `Z₀`, no far pairs).
fn match_pattern(rep: &LabeledConfig, z: &BMElement, r: Q, strict_h: bool, pam: &FinitePam) -> Option<Match> {
    let w = Window::new(-r, r);
    let mut roles = vec![PieceRole::Outer; rep.len()];
    let mut lefts: Vec<(usize, Piece)> = Vec::new();
    let mut rights: Vec<(usize, Piece)> = Vec::new();
    for (i, x) in rep.pieces().iter().enumerate() {
        let Some(&y) = restrict(&LabeledConfig::new(vec![*x]), w).pieces().first() else {
            continue;
        };
        let j = y.j;
        if j.u == -j.v {
            let v = j.v;
            roles[i] = if v == r || (!strict_h && v >= half() && j.is_half_open()) {
                PieceRole::Z
            } else if v < half() && j.is_half_open() {
                PieceRole::E(q(j.q.sign()) * (q(1) - q(2) * v))
            } else {
                return None;
            };
        } else if j.u == -r && j.v < Q::zero() {
            lefts.push((i, y));
        } else if j.v == r && j.u > Q::zero() {
            rights.push((i, y));
        } else {
            return None;
        }
    }
    let mut used = vec![false; rights.len()];
    for &(i, l) in &lefts {
        let k = (0..rights.len()).find(|&k| {
            let rt = rights[k].1;
            !used[k] && rt.m == l.m && rt.j.u == -l.j.v && rt.j.p != l.j.q
        })?;
        used[k] = true;
        let v = rights[k].1.j.u;
        let t = q(-rights[k].1.j.p.sign()) * q(2) * v;
        let role = if v < half() {
            PieceRole::F(t)
        } else if !strict_h && v < q(1) {
            PieceRole::Far(t)
        } else {
            return None;
        };
        roles[i] = role;
        roles[rights[k].0] = role;
    }
    if used.iter().any(|u| !u) {
        return None;
    }

    let labels = |pred: &dyn Fn(PieceRole) -> bool| -> Vec<Elem> {
        rep.pieces().iter().zip(&roles).filter(|(_, r)| pred(**r)).map(|(x, _)| x.m).collect()
    };
    let m0 = pam.sum_tuple(&labels(&|r| r == PieceRole::Z))?;
    if m0 != z.zero.unwrap_or(Elem::ZERO) {
        return None;
    }
    let mut es: BTreeMap<Q, Vec<Elem>> = BTreeMap::new();
    let mut fs: BTreeMap<Q, Vec<Elem>> = BTreeMap::new();
    let mut far = Vec::new();
    for (x, role) in rep.pieces().iter().zip(&roles) {
        match *role {
            PieceRole::E(t) => es.entry(t).or_default().push(x.m),
            // each pair contributes its label once
            PieceRole::F(t) if x.j.u > Q::zero() => fs.entry(t).or_default().push(x.m),
            PieceRole::Far(u) if x.j.u > Q::zero() => far.push((u, x.m)),
            _ => {}
        }
    }
    if es.keys().chain(fs.keys()).any(|t| !z.points.iter().any(|(c, _)| c == t)) {
        return None;
    }
    let mut alpha = Vec::with_capacity(z.points.len());
    for &(t, m) in &z.points {
        let a = pam.sum_tuple(es.get(&t).map(Vec::as_slice).unwrap_or(&[]))?;
        let b = pam.sum_tuple(fs.get(&t).map(Vec::as_slice).unwrap_or(&[]))?;
        if pam.add(a, b) != Some(m) {
            return None;
        }
        alpha.push((a, b));
    }
    far.sort();
    Some(Match { alpha, m0, far, roles })
}

/// Representatives tried by the matcher: the input with zero and degenerate
/// pieces dropped, its paste/merge fixpoint, and its normal form.
fn representatives(eta: &LabeledConfig, pam: &FinitePam) -> Vec<LabeledConfig> {
    let live =
        LabeledConfig::new(eta.pieces().iter().copied().filter(|x| !x.m.is_zero() && !x.j.is_degenerate()).collect());
    let mut reps = vec![live.clone(), rewrite_fixpoint(&live, pam)];
    if let Ok(n) = labeled_normalize(&live, pam) {
        reps.push(n);
    }
    reps.dedup();
    reps
}

/// Decide membership of `η` in `F(α)` / `H(α)` over `z`, returning the
/// matched `α`.
pub fn classify_fiber(eta: &LabeledConfig, z: &BMElement, pam: &FinitePam) -> FiberClass {
    match path_eval_at_zero(eta, pam) {
        Ok(p) if p == *z => {}
        _ => return FiberClass::neither(),
    }
    let reps = representatives(eta, pam);
    let f = reps.iter().find_map(|rep| match_pattern(rep, z, q(1), false, pam).map(|m| (rep.clone(), m)));
    let Some((rep, m)) = f else {
        return FiberClass::neither();
    };
    let h = reps.iter().find_map(|rep| match_pattern(rep, z, q(3), true, pam));
    let verdict = match &h {
        Some(hm) if hm.alpha == m.alpha => Verdict::InH,
        _ => Verdict::InF,
    };
    FiberClass { verdict, alpha: m.alpha, m0: m.m0, far: m.far, rep, roles: m.roles }
}

/// `σ`: identity on `[-1/2, 1/2]`, `3v - 1` beyond, odd.
pub fn sigma(v: Q) -> Q {
    odd(v, |w| if w <= half() { w } else { q(3) * w - q(1) })
}

/// `τ` on `|v| >= 1/2`: `v + 1/2` up to `3/4`, then `3v - 1`, odd.
pub fn tau(v: Q) -> Option<Q> {
    if v.abs() < half() {
        return None;
    }
    Some(odd(v, |w| if w <= qf(3, 4) { w + half() } else { q(3) * w - q(1) }))
}

/// The retraction `r`: `σ` on the pieces of the pattern near `0` (the `0`
/// coordinate pieces included), `τ` on far pairs and everything outside
/// `(-1, 1)`. The window becomes `(-(3s-1), 3s-1)`.
pub fn retract_r(xi: &LabeledConfig, z: &BMElement, s: Q, pam: &FinitePam) -> Result<(LabeledConfig, Q), FiberError> {
    let c = classify_fiber(xi, z, pam);
    if !c.in_f() {
        return Err(FiberError::NotInF);
    }
    let mut out = Vec::with_capacity(c.rep.len());
    for (x, role) in c.rep.pieces().iter().zip(&c.roles) {
        let mapped = match role {
            PieceRole::Z | PieceRole::E(_) | PieceRole::F(_) => map_piece(x, sigma),
            PieceRole::Far(_) | PieceRole::Outer => {
                for e in [x.j.u, x.j.v] {
                    if tau(e).is_none() {
                        return Err(FiberError::Undefined(fmt_q(&e)));
                    }
                }
                map_piece(x, |e| tau(e).expect("checked above"))
            }
        };
        out.extend(mapped);
    }
    Ok((tidy(&LabeledConfig::new(out), pam)?, sigma(s)))
}

/// The gluing map `g`: insert the standard lift of `z` of type `α` at the
/// origin and move the (re-parity'd) positive part of `η` out by `2`, on
/// both sides so the result stays mirror-invariant.
pub fn glue_g(
    eta: &LabeledConfig,
    alpha: &[(Elem, Elem)],
    z: &BMElement,
    s: Q,
    pam: &FinitePam,
) -> Result<(LabeledConfig, Q), FiberError> {
    check_alpha(z, alpha, pam)?;
    let z1 = base_homotopy(z, q(1), pam)?;
    let alpha1: Vec<(Elem, Elem)> =
        z.points.iter().zip(alpha).filter(|((t, _), _)| t.abs() < half()).map(|(_, &ab)| ab).collect();
    let c = classify_fiber(eta, &z1, pam);
    if !c.in_h() || c.alpha != alpha1 {
        return Err(FiberError::NotInH);
    }
    let zeta = lift_of_type(z, alpha, pam)?;
    let pos = positive_part(eta, pam)?;
    let altered: Vec<Piece> =
        pos.pieces()
            .iter()
            .map(|x| {
                if x.j.u.is_zero() && x.j.v < q(3) {
                    Piece::new(Interval { p: x.j.q.flip(), ..x.j }, x.m)
                } else {
                    *x
                }
            })
            .collect();
    let moved = LabeledConfig::new(altered).translate(q(2));
    let out = zeta.plus(&double(&moved));
    Ok((tidy(&out, pam)?, s + q(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeled::fixtures::cfg;
    use crate::pam::fixtures::m3;

    fn el(pam: &FinitePam, s: &str) -> Elem {
        pam.elem(s).unwrap()
    }

    fn bm(pam: &FinitePam, pts: &[(Q, &str)]) -> BMElement {
        let items: Vec<_> = pts.iter().map(|&(t, l)| (CirclePoint::new(t), el(pam, l))).collect();
        bm_canon(pam, &items).unwrap()
    }

    #[test]
    fn contract_examples() {
        let m = m3();
        let eta = cfg(&[(q(-1), q(1), -1, 1, "a")]);
        assert_eq!(contract(&eta, q(0), q(2), &m).unwrap(), eta);
        assert!(contract(&eta, qf(1, 2), q(2), &m).unwrap().is_empty());
        assert!(contract(&eta, q(1), q(2), &m).unwrap().is_empty());
        let eta = cfg(&[(q(1), q(3), -1, -1, "a"), (q(-3), q(-1), 1, 1, "a")]);
        let c = contract(&eta, qf(1, 4), q(4), &m).unwrap();
        assert_eq!(c, cfg(&[(q(-2), q(2), 1, -1, "a")]));
    }

    #[test]
    fn cap_examples() {
        let m = m3();
        let (z, xi, s) = cap_project(&cfg(&[(q(-1), q(1), -1, 1, "a")]), q(2), &m).unwrap();
        assert_eq!(xi, cfg(&[(q(1), q(3), -1, 1, "a")]));
        assert_eq!(s, q(4));
        assert_eq!(z, bm(&m, &[(q(0), "a")]));
        let (_, xi, _) = cap_project(&cfg(&[(q(1), q(2), -1, -1, "a"), (q(-2), q(-1), 1, 1, "a")]), q(3), &m).unwrap();
        assert_eq!(xi, cfg(&[(q(3), q(4), -1, -1, "a")]));
    }

    #[test]
    fn standard_lift_examples() {
        let m = m3();
        let z = bm(&m, &[(qf(1, 2), "a")]);
        let (eta, s) = standard_lift(&z, &LabeledConfig::empty(), q(1), &m).unwrap();
        assert_eq!(eta, cfg(&[(qf(-5, 4), qf(-1, 4), -1, 1, "a"), (qf(1, 4), qf(5, 4), -1, 1, "a")]));
        assert_eq!(s, q(3));
        assert_eq!(path_eval_at_zero(&eta, &m).unwrap(), z);
        let (eta, _) = standard_lift(&z, &cfg(&[(q(1), q(2), -1, -1, "b")]), q(3), &m).unwrap();
        assert_eq!(path_eval_at_zero(&eta, &m).unwrap(), z);
        let z0 = bm(&m, &[(q(0), "a"), (qf(-1, 3), "b")]);
        let (eta, _) = standard_lift(&z0, &LabeledConfig::empty(), q(1), &m).unwrap();
        assert_eq!(path_eval_at_zero(&eta, &m).unwrap(), z0);
    }

    #[test]
    fn push_examples() {
        let m = m3();
        let eta = cfg(&[(qf(1, 4), qf(5, 4), -1, 1, "a"), (q(3), q(4), -1, -1, "a")]);
        assert_eq!(push_homotopy(&eta, q(0)).unwrap(), eta);
        let e = push_homotopy(&eta, qf(1, 4)).unwrap();
        assert_eq!(e, cfg(&[(qf(3, 4), qf(7, 4), -1, 1, "a"), (qf(5, 2), qf(7, 2), -1, -1, "a")]));
        let _ = m;
    }

    #[test]
    fn base_homotopy_examples() {
        let m = m3();
        assert_eq!(base_homotopy(&bm(&m, &[(qf(1, 4), "a")]), q(1), &m).unwrap(), bm(&m, &[(qf(1, 2), "a")]));
        assert!(base_homotopy(&bm(&m, &[(qf(3, 4), "a")]), q(1), &m).unwrap().is_empty());
        assert!(base_homotopy(&BMElement::empty(), qf(1, 3), &m).unwrap().is_empty());
        let z = bm(&m, &[(q(0), "a"), (qf(-1, 3), "b")]);
        assert_eq!(base_homotopy(&z, q(0), &m).unwrap(), z);
    }

    #[test]
    fn parameter_maps() {
        assert_eq!(lambda(q(1), qf(3, 4)), qf(3, 2));
        assert_eq!(nu(q(1), qf(1, 2)), q(1));
        for k in 0..=8 {
            let t = qf(k, 8);
            for v in [q(0), qf(1, 8), qf(1, 2), qf(3, 4), q(1), q(3)] {
                if k == 0 {
                    assert_eq!((lambda(t, v), nu(t, v)), (v, v));
                }
            }
            assert_eq!(lambda(t, half()), half());
            assert_eq!(lambda(t, q(1)), q(1) + q(3) * t / q(2));
            assert_eq!(nu(t, q(1)), q(1) + q(3) * t / q(2));
            // nu is 2v/(2-t) below 3/4, so small coordinates follow h'_t
            assert_eq!(nu(t, qf(1, 8)) * q(2), h_base(t, qf(1, 4)));
        }
        assert_eq!((sigma(half()), sigma(q(1)), sigma(q(-1))), (half(), q(2), q(-2)));
        assert_eq!((tau(half()), tau(q(1)), tau(qf(1, 4))), (Some(q(1)), Some(q(2)), None));
        assert_eq!(tau(qf(3, 4)), Some(qf(5, 4)));
        assert_eq!(sigma(qf(3, 4)), qf(5, 4));
    }

    #[test]
    fn cover_homotopy_examples() {
        let m = m3();
        let z = bm(&m, &[(qf(3, 4), "a"), (qf(1, 4), "b")]);
        let (eta, s) = standard_lift(&z, &LabeledConfig::empty(), q(1), &m).unwrap();
        let (e0, _) = cover_homotopy(&eta, q(0), s, &m).unwrap();
        assert_eq!(e0, eta);
        for k in 0..=8 {
            let t = qf(k, 8);
            let (et, st) = cover_homotopy(&eta, t, s, &m).unwrap();
            assert_eq!(st, s + q(3) * t / q(2));
            assert_eq!(path_eval_at_zero(&et, &m).unwrap(), base_homotopy(&z, t, &m).unwrap(), "t = {t}");
        }
        let low = bm(&m, &[(qf(1, 4), "a")]);
        let (eta, s) = standard_lift(&low, &LabeledConfig::empty(), q(1), &m).unwrap();
        assert_eq!(cover_homotopy(&eta, half(), s, &m), Err(FiberError::NotInO));
    }

    #[test]
    fn classify_examples() {
        let m = m3();
        let c = classify_fiber(&LabeledConfig::empty(), &BMElement::empty(), &m);
        assert!(c.in_h() && c.alpha.is_empty());
        let z = bm(&m, &[(qf(1, 2), "c")]);
        let (a, b) = (el(&m, "a"), el(&m, "b"));
        let zeta = lift_of_type(&z, &[(a, b)], &m).unwrap();
        let c = classify_fiber(&zeta, &z, &m);
        assert_eq!((c.verdict, c.alpha.clone()), (Verdict::InF, vec![(a, b)]));
        // the H shape: Z_0 and f pieces reach out to ±3
        let mut h = vec![e_piece(qf(1, 2), a)];
        h.extend(f_pair(qf(1, 2), b, q(3)));
        let c = classify_fiber(&LabeledConfig::new(h), &z, &m);
        assert_eq!((c.verdict, c.alpha), (Verdict::InH, vec![(a, b)]));
        // wrong base point
        assert_eq!(classify_fiber(&zeta, &bm(&m, &[(qf(1, 2), "a")]), &m).verdict, Verdict::Neither);
    }

    #[test]
    fn classification_is_a_function_of_eta() {
        let m = m3();
        let z = bm(&m, &[(qf(1, 3), "c")]);
        for alpha in partition_choices(&z, &m) {
            let zeta = lift_of_type(&z, &alpha, &m).unwrap();
            assert_eq!(path_eval_at_zero(&zeta, &m).unwrap(), z);
            let c = classify_fiber(&zeta, &z, &m);
            assert!(c.in_f());
            assert_eq!(c.alpha, alpha);
        }
    }

    #[test]
    fn retract_and_glue_on_h_shaped_input() {
        let m = m3();
        let (a, b) = (el(&m, "a"), el(&m, "b"));
        let z = bm(&m, &[(qf(1, 4), "c")]);
        let z1 = base_homotopy(&z, q(1), &m).unwrap();
        // an element of F over h_1 z whose pieces reach past 4/3
        let mut v = vec![e_piece(qf(1, 2), a)];
        v.extend(f_pair(qf(1, 2), b, q(2)));
        let xi = LabeledConfig::new(v);
        let (r, s) = retract_r(&xi, &z1, q(3), &m).unwrap();
        assert_eq!(s, q(8));
        assert!(classify_fiber(&r, &z1, &m).in_h());
        let (g, _) = glue_g(&r, &[(a, b)], &z, s, &m).unwrap();
        let c = classify_fiber(&g, &z, &m);
        assert!(c.in_f());
        assert_eq!(c.alpha, vec![(a, b)]);
        assert_eq!(path_eval_at_zero(&g, &m).unwrap(), z);
        assert_eq!(glue_g(&r, &[(b, a)], &z, s, &m), Err(FiberError::NotInH));
    }

    #[test]
    fn glue_of_empty() {
        let m = m3();
        let (g, _) = glue_g(&LabeledConfig::empty(), &[], &BMElement::empty(), q(1), &m).unwrap();
        assert!(g.is_empty());
    }
}
