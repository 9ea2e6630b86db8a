//! Text formats: the configuration DSL, PAM definition files, `BM` sums and
//! Moore loop dumps. Every printer's output parses back to the same value.

use std::fmt;

use interval_pam::intervals::{Interval, Parity};
use interval_pam::labeled::{LabeledConfig, Piece};
use interval_pam::pam::{validate_pam, Elem, FinitePam, RawPam, RawSum, Violation};
use interval_pam::rational::{fmt_q, parse_q, Q};
use interval_pam::scanning::{MooreLoop, Track};
use interval_pam::tensor::{bm_canon, BMElement, CirclePoint, PairMultiset};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("{pos}: {msg}")]
    Parse { pos: Pos, msg: String },
    /// Well-formed input rejected by the PAM validator.
    #[error("{}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Violation>),
    /// Well-formed input outside the domain (insummable labels and such).
    #[error("{0}")]
    Domain(String),
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, DslError> {
    Err(DslError::Parse { pos, msg: msg.into() })
}

/// Character cursor with line/column tracking.
struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { chars: text.chars().peekable(), pos: Pos { line: 1, col: 1 } }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self, also: &[char]) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || also.contains(&c) {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<(), DslError> {
        let pos = self.pos;
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => err(pos, format!("expected `{want}`, found `{c}`")),
            None => err(pos, format!("expected `{want}`, found end of input")),
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn rational(&mut self) -> Result<Q, DslError> {
        let pos = self.pos;
        let s = self.take_while(|c| c.is_ascii_digit() || c == '-' || c == '+' || c == '/');
        match parse_q(&s) {
            Some(x) => Ok(x),
            None if s.is_empty() => err(pos, "expected a rational"),
            None => err(pos, format!("malformed rational `{s}`")),
        }
    }

    fn ident(&mut self) -> Result<String, DslError> {
        let pos = self.pos;
        let s = self.take_while(is_ident_char);
        if s.is_empty() {
            return err(pos, "expected an identifier");
        }
        Ok(s)
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn label(pam: &FinitePam, id: &str, pos: Pos) -> Result<Elem, DslError> {
    match pam.elem(id) {
        Some(e) => Ok(e),
        None => err(pos, format!("unknown label `{id}` for pam `{}`", pam.name())),
    }
}

/// Parse `(0,1]:a [3/2,2):b`. `∅` denotes the empty configuration; items
/// without a label take `default_label` or are rejected.
pub fn parse_config(text: &str, pam: &FinitePam, default_label: Option<Elem>) -> Result<LabeledConfig, DslError> {
    let mut cur = Cursor::new(text);
    let mut pieces = Vec::new();
    loop {
        cur.skip_ws(&[]);
        let pos = cur.pos;
        let p = match cur.peek() {
            None => break,
            Some('∅') => {
                cur.bump();
                continue;
            }
            Some('[') => Parity::Closed,
            Some('(') => Parity::Open,
            Some(c) => return err(pos, format!("expected `[` or `(`, found `{c}`")),
        };
        cur.bump();
        cur.skip_ws(&[]);
        let u = cur.rational()?;
        cur.skip_ws(&[]);
        cur.expect(',')?;
        cur.skip_ws(&[]);
        let v = cur.rational()?;
        cur.skip_ws(&[]);
        let qpos = cur.pos;
        let q = match cur.bump() {
            Some(']') => Parity::Closed,
            Some(')') => Parity::Open,
            Some(c) => return err(qpos, format!("expected `]` or `)`, found `{c}`")),
            None => return err(qpos, "unterminated interval"),
        };
        let j = Interval::new(u, v, p, q).map_err(|e| DslError::Parse { pos, msg: e.to_string() })?;
        let m = if cur.peek() == Some(':') {
            cur.bump();
            let lpos = cur.pos;
            let id = cur.ident()?;
            label(pam, &id, lpos)?
        } else {
            match default_label {
                Some(m) => m,
                None => return err(cur.pos, "missing label (pass --default-label to allow unlabeled items)"),
            }
        };
        pieces.push(Piece::new(j, m));
    }
    Ok(LabeledConfig::new(pieces))
}

pub fn print_config(xi: &LabeledConfig, pam: &FinitePam) -> String {
    xi.display(pam)
}

/// Parse a PAM definition file without validating it.
pub fn parse_raw_pam(text: &str) -> Result<RawPam, DslError> {
    let mut raw = RawPam::default();
    let mut seen_name = false;
    let mut seen_elements = false;
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        last_line = n;
        let body = line.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        let Some(&head) = words.first() else { continue };
        let col = line.find(head).map_or(1, |c| c + 1);
        let at = Pos { line: n, col };
        match head {
            "pam" if !seen_name => {
                if words.len() != 2 || !words[1].chars().all(is_ident_char) {
                    return err(at, "expected `pam <name>`");
                }
                raw.name = words[1].to_string();
                seen_name = true;
            }
            _ if !seen_name => return err(at, "first line must be `pam <name>`"),
            "elements" if !seen_elements => {
                if let Some(bad) = words[1..].iter().find(|w| !w.chars().all(is_ident_char)) {
                    return err(at, format!("malformed element id `{bad}`"));
                }
                raw.elements = words[1..].iter().map(|w| w.to_string()).collect();
                seen_elements = true;
            }
            _ if !seen_elements => return err(at, "second line must be `elements <id> ...`"),
            "sum" => match words.as_slice() {
                [_, a, "+", b, "=", c] => {
                    let mut s = RawSum::new(a, b, c);
                    s.line = Some(n);
                    raw.sums.push(s);
                }
                _ => return err(at, "expected `sum <a> + <b> = <c>`"),
            },
            other => return err(at, format!("unexpected `{other}`")),
        }
    }
    if !seen_name {
        return err(Pos { line: last_line.max(1), col: 1 }, "missing `pam <name>` line");
    }
    if !seen_elements {
        return err(Pos { line: last_line.max(1), col: 1 }, "missing `elements` line");
    }
    Ok(raw)
}

pub fn parse_pam(text: &str) -> Result<FinitePam, DslError> {
    validate_pam(&parse_raw_pam(text)?).map_err(DslError::Invalid)
}

pub fn print_pam(pam: &FinitePam) -> String {
    let raw = pam.to_raw();
    let mut out = format!("pam {}\nelements {}\n", raw.name, raw.elements.join(" "));
    for s in &raw.sums {
        out.push_str(&format!("sum {} + {} = {}\n", s.a, s.b, s.c));
    }
    out
}

/// Parse a `BM` sum: tokens `t:m` separated by whitespace or commas,
/// optionally in braces; `*:m` is a point at the basepoint. The result is
/// canonical.
pub fn parse_bm(text: &str, pam: &FinitePam) -> Result<BMElement, DslError> {
    let mut cur = Cursor::new(text);
    let mut items = Vec::new();
    loop {
        cur.skip_ws(&[',', '{', '}']);
        match cur.peek() {
            None => break,
            Some('∅') => {
                cur.bump();
                continue;
            }
            Some('*') => {
                cur.bump();
                cur.expect(':')?;
                let lpos = cur.pos;
                let id = cur.ident()?;
                items.push((CirclePoint::base(), label(pam, &id, lpos)?));
            }
            Some(_) => {
                let pos = cur.pos;
                let t = cur.rational()?;
                if t <= Q::from_integer(-1) || t > Q::from_integer(1) {
                    return err(pos, format!("circle coordinate {} outside (-1, 1]", fmt_q(&t)));
                }
                cur.expect(':')?;
                let lpos = cur.pos;
                let id = cur.ident()?;
                items.push((CirclePoint::new(t), label(pam, &id, lpos)?));
            }
        }
    }
    bm_canon(pam, &items).map_err(|e| DslError::Domain(e.to_string()))
}

pub fn print_bm(z: &BMElement, pam: &FinitePam) -> String {
    z.display(pam)
}

/// Parse `x:m y:n` pairs for the tensor product of two PAMs.
pub fn parse_pairs(text: &str, a: &FinitePam, b: &FinitePam) -> Result<PairMultiset, DslError> {
    let mut cur = Cursor::new(text);
    let mut items = Vec::new();
    loop {
        cur.skip_ws(&[',']);
        if cur.peek().is_none() {
            break;
        }
        let xpos = cur.pos;
        let x = cur.ident()?;
        cur.expect(':')?;
        let ypos = cur.pos;
        let y = cur.ident()?;
        items.push((label(a, &x, xpos)?, label(b, &y, ypos)?));
    }
    Ok(PairMultiset::new(items))
}

pub fn print_pairs(pm: &PairMultiset, a: &FinitePam, b: &FinitePam) -> String {
    let parts: Vec<String> = pm.items().iter().map(|&(x, y)| format!("{}:{}", a.name_of(x), b.name_of(y))).collect();
    parts.join(" ")
}

/// Parse a partition choice `a+b, c+0, ...`.
pub fn parse_alpha(text: &str, pam: &FinitePam) -> Result<Vec<(Elem, Elem)>, DslError> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    loop {
        cur.skip_ws(&[',']);
        if cur.peek().is_none() {
            break;
        }
        let apos = cur.pos;
        let a = cur.ident()?;
        cur.skip_ws(&[]);
        cur.expect('+')?;
        cur.skip_ws(&[]);
        let bpos = cur.pos;
        let b = cur.ident()?;
        out.push((label(pam, &a, apos)?, label(pam, &b, bpos)?));
    }
    Ok(out)
}

pub fn print_alpha(alpha: &[(Elem, Elem)], pam: &FinitePam) -> String {
    let parts: Vec<String> = alpha.iter().map(|&(a, b)| format!("{}+{}", pam.name_of(a), pam.name_of(b))).collect();
    parts.join(", ")
}

/// Parse the text written by [`MooreLoop::dump`].
pub fn parse_dump(text: &str, pam: &FinitePam) -> Result<MooreLoop, DslError> {
    let mut s = None;
    let mut breakpoints = Vec::new();
    let mut segments: Vec<Vec<Track>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let at = Pos { line: i + 1, col: 1 };
        let words: Vec<&str> = line.split_whitespace().collect();
        let num =
            |w: &str| parse_q(w).ok_or_else(|| DslError::Parse { pos: at, msg: format!("malformed rational `{w}`") });
        match words.as_slice() {
            [] => {}
            ["moore", x] if s.is_none() => s = Some(num(x)?),
            _ if s.is_none() => return err(at, "dump must start with `moore <s>`"),
            ["break", x] => breakpoints.push(num(x)?),
            ["segment", k] => {
                if k.parse::<usize>().ok() != Some(segments.len()) {
                    return err(at, format!("expected `segment {}`", segments.len()));
                }
                segments.push(Vec::new());
            }
            ["track", c1, c0, l] => {
                let Some(seg) = segments.last_mut() else {
                    return err(at, "`track` before any `segment`");
                };
                seg.push(Track { c1: num(c1)?, c0: num(c0)?, label: label(pam, l, at)? });
            }
            _ => return err(at, format!("unexpected line `{}`", line.trim())),
        }
    }
    let Some(s) = s else {
        return err(Pos { line: 1, col: 1 }, "empty dump");
    };
    if breakpoints.len() != segments.len() + 1 {
        return err(Pos { line: 1, col: 1 }, "need one more breakpoint than segments");
    }
    Ok(MooreLoop { s, breakpoints, segments })
}

#[cfg(test)]
mod tests {
    use super::*;

    const M3: &str = "pam M3\nelements 0 a b c\nsum a + b = c\n";

    fn m3() -> FinitePam {
        parse_pam(M3).unwrap()
    }

    #[test]
    fn config_examples() {
        let m = m3();
        let xi = parse_config("(0,1]:a [3/2,2):b", &m, None).unwrap();
        assert_eq!(xi.len(), 2);
        assert_eq!(print_config(&xi, &m), "(0,1]:a [3/2,2):b");
        let e = parse_config("(1,1):a", &m, None).unwrap_err();
        assert_eq!(e.to_string(), "1:1: degenerate interval requires opposite parities");
        assert!(parse_config("", &m, None).unwrap().is_empty());
        assert!(parse_config("∅", &m, None).unwrap().is_empty());
    }

    #[test]
    fn config_errors_have_positions() {
        let m = m3();
        let e = parse_config("(0,1]:a\n  (0,x]:b", &m, None).unwrap_err();
        assert_eq!(e.to_string(), "2:6: expected a rational");
        assert!(matches!(parse_config("(0,1]", &m, None), Err(DslError::Parse { .. })));
        let a = m.elem("a").unwrap();
        assert_eq!(parse_config("(0,1]", &m, Some(a)).unwrap(), parse_config("(0,1]:a", &m, None).unwrap());
        assert!(parse_config("(2,1]:a", &m, None).is_err());
        assert!(parse_config("(0,1]:z", &m, None).is_err());
    }

    #[test]
    fn pam_file() {
        let m = m3();
        assert_eq!(print_pam(&m), M3);
        assert!(matches!(parse_pam("pam X\nsum a + b = c\n"), Err(DslError::Parse { .. })));
        assert!(matches!(parse_pam("pam X\n"), Err(DslError::Parse { .. })));
        let commented = "# a comment\n\npam M3  # name\nelements 0 a b c\n\nsum a + b = c # only sum\n";
        assert_eq!(parse_pam(commented).unwrap(), m);
        assert!(matches!(parse_pam("pam X\nelements 0 a\nsum a + a = b\n"), Err(DslError::Invalid(_))));
    }

    #[test]
    fn bm_and_alpha() {
        let m = m3();
        let z = parse_bm("{1/2:a, 0:b, *:c}", &m).unwrap();
        assert_eq!(print_bm(&z, &m), "{0:b, 1/2:a}");
        assert_eq!(parse_bm(&print_bm(&z, &m), &m).unwrap(), z);
        assert!(matches!(parse_bm("1/2:a 1/2:a", &m), Err(DslError::Domain(_))));
        assert!(parse_bm("3/2:a", &m).is_err());
        assert!(parse_bm("∅", &m).unwrap().is_empty());
        let al = parse_alpha("a+b, c+0", &m).unwrap();
        assert_eq!(print_alpha(&al, &m), "a+b, c+0");
    }
}
