//! LP-file text format: the escape hatch for external solvers.
//!
//! The writer emits the usual sections (Minimize, Subject To, Bounds,
//! Generals, Binaries). A `\ block: relaxable` comment line before a row
//! records the decomposition tag; the parser reads it back so the format
//! round-trips structurally.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{self, Write};

use thiserror::Error;

use super::model::{Block, LinConstraint, LinObjective, Model, Sense, VarDomain, VarId};

pub fn write_lp(model: &Model, objective: &LinObjective, w: &mut impl Write) -> io::Result<()> {
    w.write_all(to_lp_string(model, objective).as_bytes())
}

pub fn to_lp_string(model: &Model, objective: &LinObjective) -> String {
    let mut s = String::new();
    s.push_str("Minimize\n obj:");
    write_expr(&mut s, model, &objective.coeffs, objective.constant);
    s.push('\n');
    s.push_str("Subject To\n");
    for c in model.constraints() {
        if c.block == Block::Relaxable {
            s.push_str("\\ block: relaxable\n");
        }
        let _ = write!(s, " {}:", c.label);
        write_expr(&mut s, model, &c.coeffs, 0.0);
        let op = match c.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        let _ = writeln!(s, " {} {}", op, fmt_num(c.rhs));
    }
    s.push_str("Bounds\n");
    for v in model.vars() {
        let default = if v.domain == VarDomain::Binary { (0.0, 1.0) } else { (0.0, f64::INFINITY) };
        if (v.lower, v.upper) == default {
            continue;
        }
        if v.lower == v.upper {
            let _ = writeln!(s, " {} = {}", v.name, fmt_num(v.lower));
        } else if v.upper.is_infinite() {
            let _ = writeln!(s, " {} >= {}", v.name, fmt_num(v.lower));
        } else {
            let _ = writeln!(s, " {} <= {} <= {}", fmt_num(v.lower), v.name, fmt_num(v.upper));
        }
    }
    let generals: Vec<&str> = model
        .vars()
        .iter()
        .filter(|v| v.domain == VarDomain::Integer)
        .map(|v| v.name.as_str())
        .collect();
    if !generals.is_empty() {
        s.push_str("Generals\n");
        for name in generals {
            let _ = writeln!(s, " {}", name);
        }
    }
    let binaries: Vec<&str> = model
        .vars()
        .iter()
        .filter(|v| v.domain == VarDomain::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        s.push_str("Binaries\n");
        for name in binaries {
            let _ = writeln!(s, " {}", name);
        }
    }
    s.push_str("End\n");
    s
}

fn write_expr(s: &mut String, model: &Model, coeffs: &[(VarId, f64)], constant: f64) {
    let mut first = true;
    for &(v, a) in coeffs {
        push_term(s, a, Some(&model.var(v).name), first);
        first = false;
    }
    if constant != 0.0 || first {
        push_term(s, constant, None, first);
    }
}

fn push_term(s: &mut String, a: f64, name: Option<&str>, first: bool) {
    let negative = a < 0.0;
    let sign = if negative { "-" } else { "+" };
    let mag = a.abs();
    if first && !negative {
        s.push(' ');
    } else {
        let _ = write!(s, " {} ", sign);
    }
    match name {
        Some(n) => {
            if mag == 1.0 {
                let _ = write!(s, "{}", n);
            } else {
                let _ = write!(s, "{} {}", fmt_num(mag), n);
            }
        }
        None => {
            let _ = write!(s, "{}", fmt_num(mag));
        }
    }
}

fn fmt_num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{}", v)
    }
}

#[derive(Debug, Error)]
pub enum LpParseError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
    #[error("model error: {0}")]
    Model(#[from] super::model::ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Generals,
    Binaries,
    Done,
}

struct PVar {
    domain: VarDomain,
    lower: f64,
    upper: f64,
    explicit_bounds: bool,
}

impl PVar {
    fn fresh() -> Self {
        PVar { domain: VarDomain::Continuous, lower: 0.0, upper: f64::INFINITY, explicit_bounds: false }
    }
}

#[derive(Default)]
struct VarTable {
    names: Vec<String>,
    info: HashMap<String, PVar>,
}

impl VarTable {
    fn touch(&mut self, n: &str) -> &mut PVar {
        if !self.info.contains_key(n) {
            self.names.push(n.to_string());
            self.info.insert(n.to_string(), PVar::fresh());
        }
        self.info.get_mut(n).unwrap()
    }
}

struct PRow {
    label: String,
    terms: Vec<(String, f64)>,
    sense: Sense,
    rhs: f64,
    block: Block,
}

/// Parse LP text produced by [`to_lp_string`] (plus ordinary hand-written
/// files in the same dialect) back into a model and objective.
pub fn parse_lp(text: &str) -> Result<(Model, LinObjective), LpParseError> {
    let mut vars = VarTable::default();
    let mut obj_terms: Vec<(String, f64)> = Vec::new();
    let mut obj_constant = 0.0;
    let mut rows: Vec<PRow> = Vec::new();

    let mut section = Section::Preamble;
    let mut pending_block = Block::Kept;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('\\') {
            if let Some(tag) = comment.trim().strip_prefix("block:") {
                pending_block = match tag.trim() {
                    "relaxable" => Block::Relaxable,
                    _ => Block::Kept,
                };
            }
            continue;
        }
        match line.to_ascii_lowercase().as_str() {
            "minimize" | "min" | "minimise" => {
                section = Section::Objective;
                continue;
            }
            "subject to" | "st" | "s.t." | "such that" => {
                section = Section::Constraints;
                continue;
            }
            "bounds" | "bound" => {
                section = Section::Bounds;
                continue;
            }
            "generals" | "general" | "integers" | "integer" => {
                section = Section::Generals;
                continue;
            }
            "binaries" | "binary" | "bin" => {
                section = Section::Binaries;
                continue;
            }
            "end" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Preamble | Section::Done => {
                return Err(LpParseError::Syntax(lineno, format!("unexpected content `{line}`")));
            }
            Section::Objective => {
                let body = match line.split_once(':') {
                    Some((_, rest)) => rest,
                    None => line,
                };
                let (terms, constant) = parse_expr(body, lineno)?;
                for (n, a) in terms {
                    vars.touch(&n);
                    obj_terms.push((n, a));
                }
                obj_constant += constant;
            }
            Section::Constraints => {
                let (label, body) = match line.split_once(':') {
                    Some((l, rest)) => (l.trim().to_string(), rest.to_string()),
                    None => (format!("row{}", rows.len()), line.to_string()),
                };
                let (expr, op, rhs_text) = split_relation(&body, lineno)?;
                let (terms, constant) = parse_expr(&expr, lineno)?;
                let rhs: f64 = rhs_text
                    .trim()
                    .parse()
                    .map_err(|_| LpParseError::Syntax(lineno, format!("bad rhs `{rhs_text}`")))?;
                for (n, _) in &terms {
                    vars.touch(n);
                }
                rows.push(PRow { label, terms, sense: op, rhs: rhs - constant, block: pending_block });
                pending_block = Block::Kept;
            }
            Section::Bounds => parse_bound_line(line, lineno, &mut vars)?,
            Section::Generals => {
                for n in line.split_whitespace() {
                    vars.touch(n).domain = VarDomain::Integer;
                }
            }
            Section::Binaries => {
                for n in line.split_whitespace() {
                    let v = vars.touch(n);
                    v.domain = VarDomain::Binary;
                    if !v.explicit_bounds {
                        v.lower = 0.0;
                        v.upper = 1.0;
                    }
                }
            }
        }
    }

    let mut model = Model::new();
    for n in &vars.names {
        let v = &vars.info[n];
        model.add_var(n.clone(), v.domain, v.lower, v.upper)?;
    }
    fn to_ids(model: &Model, terms: &[(String, f64)]) -> Result<Vec<(VarId, f64)>, LpParseError> {
        terms
            .iter()
            .map(|(n, a)| {
                model
                    .var_by_name(n)
                    .map(|id| (id, *a))
                    .ok_or_else(|| LpParseError::UnknownVar(n.clone()))
            })
            .collect()
    }
    for r in &rows {
        let coeffs = to_ids(&model, &r.terms)?;
        model.add_constraint(LinConstraint::new(r.label.clone(), coeffs, r.sense, r.rhs, r.block))?;
    }
    let objective = LinObjective::new(to_ids(&model, &obj_terms)?, obj_constant);
    Ok((model, objective))
}

fn split_relation(body: &str, lineno: usize) -> Result<(String, Sense, String), LpParseError> {
    for (pat, sense) in [("<=", Sense::Le), (">=", Sense::Ge), ("=<", Sense::Le), ("=>", Sense::Ge)] {
        if let Some(idx) = body.find(pat) {
            return Ok((body[..idx].to_string(), sense, body[idx + pat.len()..].to_string()));
        }
    }
    if let Some(idx) = body.find('=') {
        return Ok((body[..idx].to_string(), Sense::Eq, body[idx + 1..].to_string()));
    }
    Err(LpParseError::Syntax(lineno, "no relational operator".into()))
}

/// Parse a linear expression like `3 x - 2.5 y + 4` into terms + constant.
fn parse_expr(body: &str, lineno: usize) -> Result<(Vec<(String, f64)>, f64), LpParseError> {
    let mut terms = Vec::new();
    let mut constant = 0.0;
    let mut sign = 1.0;
    let mut coeff: Option<f64> = None;
    let flush_const = |constant: &mut f64, coeff: &mut Option<f64>, sign: f64| {
        if let Some(c) = coeff.take() {
            *constant += sign * c;
        }
    };
    for tok in tokenize(body) {
        match tok.as_str() {
            "+" => {
                flush_const(&mut constant, &mut coeff, sign);
                sign = 1.0;
            }
            "-" => {
                flush_const(&mut constant, &mut coeff, sign);
                sign = -1.0;
            }
            "*" => {}
            _ => {
                if let Ok(num) = tok.parse::<f64>() {
                    coeff = Some(coeff.map_or(num, |c| c * num));
                } else if is_name(&tok) {
                    let c = sign * coeff.take().unwrap_or(1.0);
                    terms.push((tok, c));
                    sign = 1.0;
                } else {
                    return Err(LpParseError::Syntax(lineno, format!("bad token `{tok}`")));
                }
            }
        }
    }
    flush_const(&mut constant, &mut coeff, sign);
    Ok((terms, constant))
}

fn is_name(tok: &str) -> bool {
    let mut chars = tok.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '#')
}

fn tokenize(body: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in body.chars() {
        match c {
            ' ' | '\t' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            '+' | '-' => {
                // Sign inside an exponent like 1e-5 stays with the number.
                let in_exponent = (cur.ends_with('e') || cur.ends_with('E'))
                    && cur.chars().next().map(|f| f.is_ascii_digit() || f == '.').unwrap_or(false);
                if in_exponent {
                    cur.push(c);
                } else {
                    if !cur.is_empty() {
                        out.push(std::mem::take(&mut cur));
                    }
                    out.push(c.to_string());
                }
            }
            '*' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push("*".into());
            }
            _ => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_bound_line(line: &str, lineno: usize, vars: &mut VarTable) -> Result<(), LpParseError> {
    let parse_val = |s: &str| -> Result<f64, LpParseError> {
        let s = s.trim();
        match s {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
            "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
            _ => s.parse().map_err(|_| LpParseError::Syntax(lineno, format!("bad bound `{s}`"))),
        }
    };
    let members: Vec<&str> = line.split("<=").map(|s| s.trim()).collect();
    match members.len() {
        3 => {
            let lo = parse_val(members[0])?;
            let hi = parse_val(members[2])?;
            let v = vars.touch(members[1]);
            v.lower = lo;
            v.upper = hi;
            v.explicit_bounds = true;
            Ok(())
        }
        2 => {
            if members[0].parse::<f64>().is_ok() || members[0].ends_with("inf") {
                let lo = parse_val(members[0])?;
                let v = vars.touch(members[1]);
                v.lower = lo;
                v.explicit_bounds = true;
            } else {
                let hi = parse_val(members[1])?;
                let v = vars.touch(members[0]);
                v.upper = hi;
                v.explicit_bounds = true;
            }
            Ok(())
        }
        1 => {
            if let Some((name, val)) = line.split_once(">=") {
                let lo = parse_val(val)?;
                let v = vars.touch(name.trim());
                v.lower = lo;
                v.explicit_bounds = true;
                return Ok(());
            }
            if let Some((name, val)) = line.split_once('=') {
                let x = parse_val(val)?;
                let v = vars.touch(name.trim());
                v.lower = x;
                v.upper = x;
                v.explicit_bounds = true;
                return Ok(());
            }
            Err(LpParseError::Syntax(lineno, format!("bad bounds line `{line}`")))
        }
        _ => Err(LpParseError::Syntax(lineno, format!("bad bounds line `{line}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn structurally_equal(a: &Model, b: &Model, oa: &LinObjective, ob: &LinObjective) -> bool {
        if a.num_vars() != b.num_vars() || a.num_constraints() != b.num_constraints() {
            return false;
        }
        for (va, vb) in a.vars().iter().zip(b.vars()) {
            if va != vb {
                return false;
            }
        }
        for (ca, cb) in a.constraints().iter().zip(b.constraints()) {
            if ca != cb {
                return false;
            }
        }
        oa == ob
    }

    #[test]
    fn empty_model_round_trips() {
        let m = Model::new();
        let o = LinObjective::default();
        let text = to_lp_string(&m, &o);
        assert!(text.contains("Minimize"));
        assert!(text.contains("Subject To"));
        let (m2, o2) = parse_lp(&text).unwrap();
        assert!(structurally_equal(&m, &m2, &o, &o2));
    }

    #[test]
    fn single_var_bound_line_present() {
        let mut m = Model::new();
        let x = m.add_var("x", VarDomain::Continuous, 1.5, 7.25).unwrap();
        let o = LinObjective::new(vec![(x, 1.0)], 0.0);
        let text = to_lp_string(&m, &o);
        assert!(text.contains("1.5 <= x <= 7.25"), "{text}");
    }

    #[test]
    fn blocks_and_domains_round_trip() {
        let mut m = Model::new();
        let x = m.add_var("x", VarDomain::Continuous, 0.0, f64::INFINITY).unwrap();
        let q = m.add_var("q", VarDomain::Integer, 0.0, 11.0).unwrap();
        let y = m.add_var("y", VarDomain::Binary, 0.0, 1.0).unwrap();
        m.add_constraint(LinConstraint::new(
            "cap",
            vec![(x, 1.0), (y, -5.5)],
            Sense::Le,
            0.0,
            Block::Relaxable,
        ))
        .unwrap();
        m.add_constraint(LinConstraint::new(
            "load",
            vec![(x, 2.0), (q, -3.0)],
            Sense::Ge,
            -1.25,
            Block::Kept,
        ))
        .unwrap();
        let o = LinObjective::new(vec![(x, 1.0), (q, -0.5)], 3.5);
        let text = to_lp_string(&m, &o);
        let (m2, o2) = parse_lp(&text).unwrap();
        assert!(structurally_equal(&m, &m2, &o, &o2), "round trip failed:\n{text}");
    }

    #[test]
    fn scientific_notation_round_trips() {
        let mut m = Model::new();
        let x = m.add_var("x", VarDomain::Continuous, 0.0, f64::INFINITY).unwrap();
        m.add_constraint(LinConstraint::new("c", vec![(x, 1e-7)], Sense::Le, 2.5e9, Block::Kept))
            .unwrap();
        let o = LinObjective::new(vec![(x, -3.25e-4)], 0.0);
        let text = to_lp_string(&m, &o);
        let (m2, o2) = parse_lp(&text).unwrap();
        assert!(structurally_equal(&m, &m2, &o, &o2), "{text}");
    }
}
