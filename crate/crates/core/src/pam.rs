//! Finite partial abelian monoids.
//!
//! A [`FinitePam`] is a finite based set with a symmetric, associative,
//! unital partial sum. Only non-unit sums are stored; a missing entry means
//! the pair is insummable.

use std::collections::HashMap;
use std::fmt;

/// An element interned against one [`FinitePam`]. Index 0 is always the unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Unvalidated table as read from a definition file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawPam {
    pub name: String,
    pub elements: Vec<String>,
    pub sums: Vec<RawSum>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSum {
    pub a: String,
    pub b: String,
    pub c: String,
    pub line: Option<usize>,
}

impl RawSum {
    pub fn new(a: &str, b: &str, c: &str) -> Self {
        RawSum { a: a.to_string(), b: b.to_string(), c: c.to_string(), line: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingUnit,
    DuplicateElement(String),
    UnknownElement {
        id: String,
        line: Option<usize>,
    },
    UnitSumListed {
        a: String,
        b: String,
        line: Option<usize>,
    },
    ConflictingSum {
        a: String,
        b: String,
        first: String,
        second: String,
    },
    /// `(a+b)+c` and `a+(b+c)` disagree in definedness or value.
    Associativity {
        a: String,
        b: String,
        c: String,
        left: Option<String>,
        right: Option<String>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: &Option<String>| x.clone().unwrap_or_else(|| "undefined".into());
        match self {
            Violation::MissingUnit => write!(f, "element list does not contain the unit `0`"),
            Violation::DuplicateElement(id) => write!(f, "duplicate element `{id}`"),
            Violation::UnknownElement { id, line } => match line {
                Some(l) => write!(f, "line {l}: unknown element `{id}`"),
                None => write!(f, "unknown element `{id}`"),
            },
            Violation::UnitSumListed { a, b, line } => match line {
                Some(l) => write!(f, "line {l}: unit sum `{a} + {b}` is implicit and may not be listed"),
                None => write!(f, "unit sum `{a} + {b}` is implicit and may not be listed"),
            },
            Violation::ConflictingSum { a, b, first, second } => {
                write!(f, "conflicting sums for {{{a}, {b}}}: `{first}` and `{second}`")
            }
            Violation::Associativity { a, b, c, left, right } => write!(
                f,
                "associativity fails at ({a}, {b}, {c}): ({a}+{b})+{c} = {}, {a}+({b}+{c}) = {}",
                show(left),
                show(right)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePam {
    name: String,
    names: Vec<String>,
    index: HashMap<String, Elem>,
    table: HashMap<(Elem, Elem), Elem>,
}

fn key(a: Elem, b: Elem) -> (Elem, Elem) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Largest tuple for which every association order is enumerated.
pub const ALL_ORDERS_LIMIT: usize = 8;

/// Validate a raw table, returning every violated axiom instance on failure.
pub fn validate_pam(raw: &RawPam) -> Result<FinitePam, Vec<Violation>> {
    let mut violations = Vec::new();
    let mut names = vec!["0".to_string()];
    let mut index = HashMap::new();
    index.insert("0".to_string(), Elem::ZERO);
    let mut seen_unit = false;
    for id in &raw.elements {
        if id == "0" {
            if seen_unit {
                violations.push(Violation::DuplicateElement(id.clone()));
            }
            seen_unit = true;
            continue;
        }
        if index.contains_key(id) {
            violations.push(Violation::DuplicateElement(id.clone()));
            continue;
        }
        if names.len() > u16::MAX as usize {
            break;
        }
        index.insert(id.clone(), Elem(names.len() as u16));
        names.push(id.clone());
    }
    if !seen_unit {
        violations.push(Violation::MissingUnit);
    }

    let mut table: HashMap<(Elem, Elem), Elem> = HashMap::new();
    for s in &raw.sums {
        let lookup = |id: &String| index.get(id).copied();
        let (a, b, c) = (lookup(&s.a), lookup(&s.b), lookup(&s.c));
        let mut unknown = false;
        for (id, e) in [(&s.a, a), (&s.b, b), (&s.c, c)] {
            if e.is_none() {
                violations.push(Violation::UnknownElement { id: id.clone(), line: s.line });
                unknown = true;
            }
        }
        if unknown {
            continue;
        }
        let (a, b, c) = (a.unwrap(), b.unwrap(), c.unwrap());
        if a.is_zero() || b.is_zero() {
            violations.push(Violation::UnitSumListed { a: s.a.clone(), b: s.b.clone(), line: s.line });
            continue;
        }
        match table.get(&key(a, b)) {
            Some(&prev) if prev != c => violations.push(Violation::ConflictingSum {
                a: s.a.clone(),
                b: s.b.clone(),
                first: names[prev.index()].clone(),
                second: s.c.clone(),
            }),
            _ => {
                table.insert(key(a, b), c);
            }
        }
    }

    let pam = FinitePam { name: raw.name.clone(), names, index, table };
    violations.extend(pam.associativity_violations());
    if violations.is_empty() {
        Ok(pam)
    } else {
        Err(violations)
    }
}

impl FinitePam {
    /// A based set viewed as a PAM: only unit sums are defined.
    pub fn trivial(name: &str, ids: &[&str]) -> FinitePam {
        let raw = RawPam {
            name: name.to_string(),
            elements: std::iter::once("0").chain(ids.iter().copied()).map(String::from).collect(),
            sums: Vec::new(),
        };
        validate_pam(&raw).expect("trivial PAM is always valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.names.len()).map(|i| Elem(i as u16))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elements().skip(1)
    }

    pub fn elem(&self, id: &str) -> Option<Elem> {
        self.index.get(id).copied()
    }

    pub fn name_of(&self, e: Elem) -> &str {
        &self.names[e.index()]
    }

    /// Partial sum; unit sums are implicit.
    pub fn add(&self, a: Elem, b: Elem) -> Option<Elem> {
        if a.is_zero() {
            return Some(b);
        }
        if b.is_zero() {
            return Some(a);
        }
        self.table.get(&key(a, b)).copied()
    }

    /// Stored (non-unit) sum entries `a + b = c` with `a <= b`, in index order.
    pub fn entries(&self) -> Vec<(Elem, Elem, Elem)> {
        let mut v: Vec<_> = self.table.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort();
        v
    }

    fn associativity_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    let left = self.add(a, b).and_then(|ab| self.add(ab, c));
                    let right = self.add(b, c).and_then(|bc| self.add(a, bc));
                    if left != right {
                        let n = |e: Option<Elem>| e.map(|e| self.name_of(e).to_string());
                        out.push(Violation::Associativity {
                            a: self.name_of(a).into(),
                            b: self.name_of(b).into(),
                            c: self.name_of(c).into(),
                            left: n(left),
                            right: n(right),
                        });
                    }
                }
            }
        }
        out
    }

    /// Total of a tuple if it is summable in every order, `None` otherwise.
    ///
    /// Zeros are dropped first (unit law). Up to [`ALL_ORDERS_LIMIT`] nonzero
    /// entries every distinct order is folded; longer tuples use one left
    /// fold, which suffices for a validated table.
    pub fn sum_tuple(&self, xs: &[Elem]) -> Option<Elem> {
        let mut nz: Vec<Elem> = xs.iter().copied().filter(|e| !e.is_zero()).collect();
        if nz.len() > ALL_ORDERS_LIMIT {
            return nz.iter().try_fold(Elem::ZERO, |acc, &x| self.add(acc, x));
        }
        nz.sort();
        let mut counts: Vec<(Elem, usize)> = Vec::new();
        for e in nz {
            match counts.last_mut() {
                Some((last, n)) if *last == e => *n += 1,
                _ => counts.push((e, 1)),
            }
        }
        self.fold_all_orders(Elem::ZERO, &mut counts)
    }

    fn fold_all_orders(&self, acc: Elem, counts: &mut [(Elem, usize)]) -> Option<Elem> {
        let mut result = None;
        let mut any = false;
        for i in 0..counts.len() {
            if counts[i].1 == 0 {
                continue;
            }
            any = true;
            let next = self.add(acc, counts[i].0)?;
            counts[i].1 -= 1;
            let r = self.fold_all_orders(next, counts);
            counts[i].1 += 1;
            let r = r?;
            match result {
                None => result = Some(r),
                Some(prev) if prev != r => return None,
                _ => {}
            }
        }
        if any {
            result
        } else {
            Some(acc)
        }
    }

    pub fn is_summable(&self, xs: &[Elem]) -> bool {
        self.sum_tuple(xs).is_some()
    }

    /// No nonzero element is summable with itself.
    pub fn is_self_insummable(&self) -> bool {
        self.nonzero().all(|a| self.add(a, a).is_none())
    }

    /// Ordered pairs `(a, b)` with `a + b = m`, sorted by element index.
    pub fn partitions(&self, m: Elem) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.add(a, b) == Some(m) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Back to the file-level representation; validating it yields `self`.
    pub fn to_raw(&self) -> RawPam {
        RawPam {
            name: self.name.clone(),
            elements: self.names.clone(),
            sums: self
                .entries()
                .into_iter()
                .map(|(a, b, c)| RawSum::new(self.name_of(a), self.name_of(b), self.name_of(c)))
                .collect(),
        }
    }
}
