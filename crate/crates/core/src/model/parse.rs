//! Line-oriented model format.
//!
//! ```text
//! automaton conveyor
//! role spec
//! clocks x
//! observed
//! input ship1 ship2
//! output waste past end1 end2
//! internal tau
//! restart zeta
//! location St inv x <= 2
//! location D1
//! initial St
//! accept D1
//! edge St -- x <= 2 / tau / x -> So
//! edge D1 -- true / zeta / x -> St
//! ```
//!
//! Guards are `true` or `&&`-conjunctions of comparisons between clocks,
//! clock differences and integers (`x <= 2`, `x - y > 1`, `3 <= x <= 6`).
//! Resets are a comma list, optionally braced, or `-` for none. Lines
//! starting with `#` are comments.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::clockspace::{Atom, ClockSet, Federation, Rel};

use super::{ActionKind, Automaton, ModelError, Role};

#[derive(Default)]
struct Draft {
    name: Option<String>,
    role: Option<Role>,
    proper: Vec<String>,
    observed: Vec<String>,
    actions: Vec<(String, ActionKind)>,
    locations: Vec<(String, Option<(usize, usize, String)>)>,
    initial: Option<(usize, usize, String)>,
    accept: Vec<(usize, usize, String)>,
    fail: Option<(usize, usize, String)>,
    dp_invariants: Vec<(usize, usize, String, String)>,
    edges: Vec<EdgeDraft>,
}

struct EdgeDraft {
    line: usize,
    src: (usize, String),
    guard: (usize, String),
    action: (usize, String),
    resets: (usize, String),
    dst: (usize, String),
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ModelError {
    ModelError::Parse { line, column, message: message.into() }
}

/// Splits on whitespace, keeping 1-based columns.
fn words(s: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(b) = start.take() {
                out.push((offset + b + 1, &s[b..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push((offset + b + 1, &s[b..]));
    }
    out
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

pub fn parse_automaton(text: &str) -> Result<Automaton, ModelError> {
    let mut d = Draft::default();
    for (ln0, raw) in text.lines().enumerate() {
        let line = ln0 + 1;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let ws = words(content, 0);
        let Some(&(kcol, keyword)) = ws.first() else { continue };
        let rest_start = kcol - 1 + keyword.len();
        let rest = &content[rest_start..];
        match keyword {
            "automaton" => {
                let [(_, n)] = ws[1..] else {
                    return Err(err(line, kcol, "expected `automaton NAME`"));
                };
                d.name = Some(n.to_string());
            }
            "role" => {
                let [(c, r)] = ws[1..] else {
                    return Err(err(line, kcol, "expected `role ROLE`"));
                };
                d.role = Some(Role::from_keyword(r).ok_or_else(|| err(line, c, format!("unknown role `{r}`")))?);
            }
            "clocks" | "observed" => {
                for &(c, n) in &ws[1..] {
                    if !is_ident(n) {
                        return Err(err(line, c, format!("bad clock name `{n}`")));
                    }
                    if d.proper.iter().chain(&d.observed).any(|m| m == n) {
                        return Err(err(line, c, format!("clock `{n}` declared twice")));
                    }
                    if keyword == "clocks" {
                        d.proper.push(n.to_string());
                    } else {
                        d.observed.push(n.to_string());
                    }
                }
            }
            "input" | "output" | "internal" | "restart" => {
                let kind = match keyword {
                    "input" => ActionKind::Input,
                    "output" => ActionKind::Output,
                    "internal" => ActionKind::Internal,
                    _ => ActionKind::Restart,
                };
                for &(c, n) in &ws[1..] {
                    let n = n.trim_end_matches(['?', '!']);
                    if !is_ident(n) {
                        return Err(err(line, c, format!("bad action name `{n}`")));
                    }
                    if d.actions.iter().any(|(m, _)| m == n) {
                        return Err(err(line, c, format!("action `{n}` declared twice")));
                    }
                    d.actions.push((n.to_string(), kind));
                }
            }
            "location" => {
                let Some(&(c, n)) = ws.get(1) else {
                    return Err(err(line, kcol, "expected `location NAME [inv GUARD]`"));
                };
                let inv = match ws.get(2) {
                    None => None,
                    Some(&(ic, "inv")) => {
                        let g0 = ic - 1 + 3;
                        Some((line, g0 + 1, content[g0..].to_string()))
                    }
                    Some(&(ic, other)) => return Err(err(line, ic, format!("expected `inv`, found `{other}`"))),
                };
                if d.locations.iter().any(|(m, _)| m == n) {
                    return Err(err(line, c, format!("location `{n}` declared twice")));
                }
                d.locations.push((n.to_string(), inv));
            }
            "initial" | "fail" => {
                let [(c, n)] = ws[1..] else {
                    return Err(err(line, kcol, format!("expected `{keyword} NAME`")));
                };
                if keyword == "initial" {
                    d.initial = Some((line, c, n.to_string()));
                } else {
                    d.fail = Some((line, c, n.to_string()));
                }
            }
            "accept" => {
                for &(c, n) in &ws[1..] {
                    d.accept.push((line, c, n.to_string()));
                }
            }
            "dp-invariant" => {
                let Some(&(c, n)) = ws.get(1) else {
                    return Err(err(line, kcol, "expected `dp-invariant NAME GUARD`"));
                };
                let g0 = c - 1 + n.len();
                d.dp_invariants.push((line, c, n.to_string(), content[g0..].to_string()));
            }
            "edge" => d.edges.push(split_edge(line, rest, rest_start)?),
            other => return Err(err(line, kcol, format!("unknown keyword `{other}`"))),
        }
    }
    build(d)
}

fn split_edge(line: usize, rest: &str, offset: usize) -> Result<EdgeDraft, ModelError> {
    let col = |p: usize| offset + p + 1;
    let Some(a) = rest.find(" -- ") else {
        return Err(err(line, col(0), "expected `SRC -- GUARD / ACTION / RESETS -> DST`"));
    };
    let Some(b) = rest.rfind("->") else {
        return Err(err(line, col(a), "missing `-> DST`"));
    };
    if b < a + 4 {
        return Err(err(line, col(b), "misplaced `->`"));
    }
    let mid = &rest[a + 4..b];
    let parts: Vec<&str> = mid.split('/').collect();
    if parts.len() != 3 {
        return Err(err(line, col(a + 4), "edge label needs `GUARD / ACTION / RESETS`"));
    }
    let p0 = a + 4;
    let p1 = p0 + parts[0].len() + 1;
    let p2 = p1 + parts[1].len() + 1;
    let trim = |s: &str, p: usize| -> (usize, String) {
        let lead = s.len() - s.trim_start().len();
        (col(p + lead), s.trim().to_string())
    };
    let src = trim(&rest[..a], 0);
    let dst = trim(&rest[b + 2..], b + 2);
    for (c, n) in [&src, &dst] {
        if n.is_empty() || n.contains(char::is_whitespace) {
            return Err(err(line, *c, "expected a single location name"));
        }
    }
    Ok(EdgeDraft {
        line,
        src,
        guard: trim(parts[0], p0),
        action: trim(parts[1], p1),
        resets: trim(parts[2], p2),
        dst,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Op(Rel),
    Minus,
    And,
}

fn lex_guard(line: usize, col0: usize, s: &str) -> Result<Vec<(usize, Tok)>, ModelError> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i];
        let here = col0 + i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = if i + 1 < b.len() { &s[i..i + 2] } else { "" };
        let three = if i + 2 < b.len() { &s[i..i + 3] } else { "" };
        if matches!(three, "<==" | ">==" | "===") {
            return Err(err(line, here, format!("malformed operator `{three}`")));
        }
        let (tok, len) = match two {
            "<=" => (Tok::Op(Rel::Le), 2),
            ">=" => (Tok::Op(Rel::Ge), 2),
            "==" => (Tok::Op(Rel::Eq), 2),
            "&&" => (Tok::And, 2),
            _ => match c {
                b'<' => (Tok::Op(Rel::Lt), 1),
                b'>' => (Tok::Op(Rel::Gt), 1),
                b'=' => (Tok::Op(Rel::Eq), 1),
                b'-' => (Tok::Minus, 1),
                b'0'..=b'9' => {
                    let mut j = i;
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                    let v: i64 = s[i..j].parse().map_err(|_| err(line, here, "integer out of range"))?;
                    (Tok::Int(v), j - i)
                }
                _ if c.is_ascii_alphabetic() || c == b'_' => {
                    let mut j = i;
                    while j < b.len() && (b[j].is_ascii_alphanumeric() || b[j] == b'_' || b[j] == b'\'') {
                        j += 1;
                    }
                    (Tok::Ident(s[i..j].to_string()), j - i)
                }
                _ => return Err(err(line, here, format!("unexpected character `{}`", &s[i..i + 1]))),
            },
        };
        out.push((here, tok));
        i += len;
    }
    Ok(out)
}

/// Linear term `Σ ±clock + k` with at most one clock of each sign.
#[derive(Clone, Default)]
struct Term {
    pos: Option<usize>,
    neg: Option<usize>,
    k: i64,
}

/// Parses a guard that may be a `||`-disjunction of conjunctions.
pub fn parse_federation(clocks: &Arc<ClockSet>, line: usize, col0: usize, s: &str) -> Result<Federation, ModelError> {
    let mut fed = Federation::empty(clocks);
    let mut offset = 0;
    for part in s.split("||") {
        let atoms = parse_guard(clocks, line, col0 + offset, part)?;
        fed = fed.union(&Federation::from_atoms(clocks, &atoms));
        offset += part.len() + 2;
    }
    Ok(fed)
}

/// Parses a conjunctive guard over `clocks` into atoms.
pub fn parse_guard(clocks: &ClockSet, line: usize, col0: usize, s: &str) -> Result<Vec<Atom>, ModelError> {
    let toks = lex_guard(line, col0, s)?;
    if toks.len() == 1 && toks[0].1 == Tok::Ident("true".into()) {
        return Ok(Vec::new());
    }
    if toks.len() == 1 && toks[0].1 == Tok::Ident("false".into()) {
        // An unsatisfiable conjunction.
        return Ok(vec![Atom::clock(0, Rel::Lt, 0)]);
    }
    if toks.is_empty() {
        return Err(err(line, col0, "empty guard (write `true`)"));
    }
    let mut atoms = Vec::new();
    for conj in toks.split(|(_, t)| *t == Tok::And) {
        if conj.is_empty() {
            return Err(err(line, col0, "empty conjunct"));
        }
        let mut terms: Vec<(usize, Term)> = Vec::new();
        let mut ops: Vec<(usize, Rel)> = Vec::new();
        let mut i = 0;
        loop {
            let (c, t) = parse_term(clocks, line, conj, &mut i)?;
            terms.push((c, t));
            if i == conj.len() {
                break;
            }
            match &conj[i] {
                (c, Tok::Op(r)) => {
                    ops.push((*c, *r));
                    i += 1;
                    if i == conj.len() {
                        return Err(err(line, *c, "comparison without right-hand side"));
                    }
                }
                (c, _) => return Err(err(line, *c, "expected comparison operator")),
            }
        }
        if ops.is_empty() {
            return Err(err(line, terms[0].0, "expected a comparison"));
        }
        for (k, &(c, rel)) in ops.iter().enumerate() {
            atoms.push(comparison(line, c, &terms[k].1, rel, &terms[k + 1].1)?);
        }
    }
    Ok(atoms)
}

fn parse_term(clocks: &ClockSet, line: usize, toks: &[(usize, Tok)], i: &mut usize) -> Result<(usize, Term), ModelError> {
    let start = toks[*i].0;
    let mut t = Term::default();
    let mut sign = 1;
    let mut expect_operand = true;
    while *i < toks.len() {
        let (c, tok) = &toks[*i];
        match tok {
            Tok::Minus if !expect_operand => {
                sign = -1;
                expect_operand = true;
            }
            Tok::Int(v) if expect_operand => {
                t.k += sign * v;
                expect_operand = false;
            }
            Tok::Ident(n) if expect_operand => {
                let idx = clocks.index_of(n).ok_or_else(|| err(line, *c, format!("unknown clock `{n}`")))?;
                let slot = if sign > 0 { &mut t.pos } else { &mut t.neg };
                if slot.is_some() {
                    return Err(err(line, *c, "only `x - y` differences are allowed"));
                }
                *slot = Some(idx);
                expect_operand = false;
            }
            Tok::Op(_) | Tok::And if !expect_operand => break,
            _ => return Err(err(line, *c, "unexpected token in guard")),
        }
        *i += 1;
    }
    if expect_operand {
        return Err(err(line, start, "incomplete expression"));
    }
    Ok((start, t))
}

fn flip(r: Rel) -> Rel {
    match r {
        Rel::Lt => Rel::Gt,
        Rel::Le => Rel::Ge,
        Rel::Eq => Rel::Eq,
        Rel::Ge => Rel::Le,
        Rel::Gt => Rel::Lt,
    }
}

// `a rel b` becomes `(a − b) rel 0`, then is put in `x − y rel c` form.
fn comparison(line: usize, col: usize, a: &Term, rel: Rel, b: &Term) -> Result<Atom, ModelError> {
    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    pos.extend(a.pos);
    pos.extend(b.neg);
    neg.extend(a.neg);
    neg.extend(b.pos);
    let k = a.k - b.k;
    let bad = || err(line, col, "comparison must have the form `x ~ n` or `x - y ~ n`");
    // Cancel a clock appearing on both sides.
    pos.retain(|p| {
        if let Some(q) = neg.iter().position(|n| n == p) {
            neg.remove(q);
            false
        } else {
            true
        }
    });
    match (pos.as_slice(), neg.as_slice()) {
        ([x], []) => Ok(Atom::clock(*x, rel, -k)),
        ([], [y]) => Ok(Atom::clock(*y, flip(rel), k)),
        ([x], [y]) => Ok(Atom::diff(*x, *y, rel, -k)),
        _ => Err(bad()),
    }
}

fn build(d: Draft) -> Result<Automaton, ModelError> {
    let name = d.name.ok_or_else(|| err(1, 1, "missing `automaton NAME` header"))?;
    let role = d.role.unwrap_or(Role::Otaio);
    let clocks: Arc<ClockSet> = ClockSet::new(d.proper.iter().chain(&d.observed).cloned())
        .map_err(|e| err(1, 1, e.to_string()))?;
    let mut a = Automaton::new(name, role, clocks.clone());
    a.observed = d.observed.iter().map(|n| clocks.index_of(n).expect("declared")).collect::<BTreeSet<_>>();
    for (n, k) in d.actions {
        a.add_action(n, k);
    }
    for (n, inv) in &d.locations {
        let invariant = match inv {
            None => Federation::universe(&clocks),
            Some((line, col, g)) => parse_federation(&clocks, *line, *col, g)?,
        };
        a.add_location(n.clone(), invariant);
    }
    let loc = |a: &Automaton, line: usize, col: usize, n: &str| {
        a.location_id(n).ok_or_else(|| err(line, col, format!("unknown location `{n}`")))
    };
    a.initial = match &d.initial {
        Some((line, c, n)) => loc(&a, *line, *c, n)?,
        None => 0,
    };
    for (line, c, n) in &d.accept {
        let l = loc(&a, *line, *c, n)?;
        a.accept.insert(l);
    }
    if let Some((line, c, n)) = &d.fail {
        a.fail = Some(loc(&a, *line, *c, n)?);
    }
    if !d.dp_invariants.is_empty() {
        let mut inv = vec![Federation::universe(&clocks); a.locations.len()];
        for (line, c, n, g) in &d.dp_invariants {
            let l = loc(&a, *line, *c, n)?;
            inv[l] = parse_federation(&clocks, *line, *c + n.len(), g)?;
        }
        a.dp_invariants = Some(inv);
    }
    for e in d.edges {
        let src = loc(&a, e.line, e.src.0, &e.src.1)?;
        let dst = loc(&a, e.line, e.dst.0, &e.dst.1)?;
        let guard = parse_federation(&clocks, e.line, e.guard.0, &e.guard.1)?;
        let raw = e.action.1.as_str();
        let bare = raw.trim_end_matches(['?', '!']);
        let action = a
            .action_id(bare)
            .ok_or_else(|| err(e.line, e.action.0, format!("undeclared action `{bare}`")))?;
        let kind = a.kind(action);
        if (raw.ends_with('?') && kind != ActionKind::Input) || (raw.ends_with('!') && kind != ActionKind::Output) {
            return Err(err(e.line, e.action.0, format!("`{raw}` does not match the declared kind of `{bare}`")));
        }
        let rs = e.resets.1.trim().trim_start_matches('{').trim_end_matches('}').trim();
        let mut resets = Vec::new();
        if !(rs.is_empty() || rs == "-") {
            for part in rs.split(',') {
                let n = part.trim();
                let idx = clocks
                    .index_of(n)
                    .ok_or_else(|| err(e.line, e.resets.0, format!("unknown clock `{n}` in resets")))?;
                resets.push(idx);
            }
        }
        a.add_edge(src, guard, action, resets, dst);
    }
    a.check_wellformed()?;
    Ok(a)
}
