//! Polynomial expressions and the input file format.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::dvr::{Dvr, DvrScalar};
use crate::error::{CmodError, Result};

use super::algebra::{AugmentedAlgebra, LambdaVar};
use super::lambda::{LambdaElem, LambdaModule, LambdaStructure};
use super::poly::{Poly, PolyMatrix};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let ch = cs[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[start..i].iter().collect();
            out.push(Tok::Num(txt.parse().map_err(|_| format!("bad number {txt}"))?));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return Err(format!("unexpected character '{ch}'"));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> std::result::Result<Poly, String> {
        let mut acc = if self.eat('-') { self.term()?.neg() } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Poly, String> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                if d.total_degree().unwrap_or(0) > 0 || d.is_zero() {
                    return Err("can only divide by a nonzero constant".into());
                }
                acc = acc.scale(&(BigRational::from_integer(1.into()) / d.constant_term()));
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::Op('('))) {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> std::result::Result<Poly, String> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e = n.to_u32().filter(|&e| e <= 4096).ok_or("exponent too large")?;
                    Ok(base.pow(e))
                }
                _ => Err("exponent must be a non-negative integer".into()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> std::result::Result<Poly, String> {
        let nv = self.names.len();
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(nv, BigRational::from_integer(n)))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                let i = self.names.iter().position(|n| *n == id).ok_or_else(|| format!("unknown variable {id}"))?;
                Ok(Poly::var(nv, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

/// Parses a polynomial over the named variables.
pub fn parse_poly(text: &str, names: &[String]) -> std::result::Result<Poly, String> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { toks, pos: 0, names };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input after position {}", p.pos));
    }
    Ok(e)
}

/// Splits a bracketed list at top-level commas.
fn split_list(text: &str) -> std::result::Result<Vec<String>, String> {
    let t = text.trim();
    let inner = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(|| format!("expected [..], got {t}"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    out.push(cur.trim().to_string());
    Ok(out)
}

fn split_names(text: &str) -> Vec<String> {
    text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

fn valid_name(n: &str) -> bool {
    let mut cs = n.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

/// A module block before it is attached to an algebra.
#[derive(Clone, Debug)]
pub struct ModuleBlock {
    pub name: String,
    pub module: LambdaModule,
}

/// Everything an input file declares.
#[derive(Clone, Debug)]
pub struct InputFile {
    pub algebra: AugmentedAlgebra,
    pub structure: Option<LambdaStructure>,
    pub modules: Vec<ModuleBlock>,
}

#[derive(Default)]
struct Section {
    header: String,
    line: usize,
    stmts: Vec<(usize, String)>,
}

fn statements(text: &str) -> Vec<Section> {
    let mut sections = vec![Section::default()];
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        for stmt in body.split(';') {
            let s = stmt.trim();
            if s.is_empty() {
                continue;
            }
            if s.starts_with('[') && s.ends_with(']') && !s.contains('=') {
                sections.push(Section { header: s[1..s.len() - 1].trim().to_string(), line, stmts: Vec::new() });
            } else {
                sections.last_mut().unwrap().stmts.push((line, s.to_string()));
            }
        }
    }
    sections
}

fn keyword<'a>(s: &'a str, kw: &str) -> Option<&'a str> {
    let rest = s.strip_prefix(kw)?;
    if rest.is_empty() || rest.starts_with(|c: char| c.is_whitespace() || c == '=') {
        Some(rest.trim_start().trim_start_matches('=').trim())
    } else {
        None
    }
}

/// Parses only the presentation part of an input.
pub fn parse_presentation(text: &str) -> Result<AugmentedAlgebra> {
    let sections = statements(text);
    parse_header(&sections[0].stmts)
}

fn parse_header(stmts: &[(usize, String)]) -> Result<AugmentedAlgebra> {
    let mut p: Option<u64> = None;
    let mut lambda: Vec<(usize, String, Option<String>)> = Vec::new();
    let mut fiber: Vec<String> = Vec::new();
    let mut rels: Vec<(usize, String)> = Vec::new();
    for (line, s) in stmts {
        let line = *line;
        if let Some(rest) = keyword(s, "p") {
            let v: u64 = rest.parse().map_err(|_| CmodError::parse(line, format!("bad prime '{rest}'")))?;
            p = Some(v);
        } else if let Some(rest) = keyword(s, "lambda") {
            if let Some((name, img)) = rest.split_once("->") {
                lambda.push((line, name.trim().to_string(), Some(img.trim().to_string())));
            } else {
                for n in split_names(rest) {
                    lambda.push((line, n, None));
                }
            }
        } else if let Some(rest) = keyword(s, "fiber") {
            fiber.extend(split_names(rest));
        } else if let Some(rest) = keyword(s, "rel") {
            rels.push((line, rest.to_string()));
        } else {
            return Err(CmodError::parse(line, format!("unknown statement '{s}'")));
        }
    }
    let p = p.ok_or_else(|| CmodError::parse(0, "missing p=<prime>"))?;
    let ring = Dvr::new(p).map_err(|e| CmodError::parse(0, e.to_string()))?;
    for (line, n, _) in &lambda {
        if !valid_name(n) {
            return Err(CmodError::parse(*line, format!("bad variable name '{n}'")));
        }
    }
    if let Some(n) = fiber.iter().find(|n| !valid_name(n)) {
        return Err(CmodError::parse(0, format!("bad variable name '{n}'")));
    }
    let names: Vec<String> = lambda.iter().map(|l| l.1.clone()).chain(fiber.iter().cloned()).collect();
    let mut lvars = Vec::new();
    for (line, n, img) in &lambda {
        let image = match img {
            Some(t) => Some(parse_poly(t, &names).map_err(|m| CmodError::parse(*line, m))?),
            None => None,
        };
        lvars.push(LambdaVar { name: n.clone(), image });
    }
    let mut polys = Vec::new();
    for (line, r) in &rels {
        polys.push(parse_poly(r, &names).map_err(|m| CmodError::parse(*line, m))?);
    }
    AugmentedAlgebra::new(ring, lvars, fiber, polys).map_err(|e| match e {
        CmodError::Parse { line: 0, msg } => CmodError::parse(rels.first().map_or(1, |r| r.0), msg),
        other => other,
    })
}

fn scalar(ring: &Dvr, text: &str, line: usize) -> Result<DvrScalar> {
    let p = parse_poly(text, &[]).map_err(|m| CmodError::parse(line, m))?;
    ring.from_rational(&p.constant_term()).ok_or_else(|| CmodError::parse(line, format!("{text} is not p-integral")))
}

fn lambda_vector(text: &str, names: &[String], r: usize, line: usize) -> Result<LambdaElem> {
    let items = split_list(text).map_err(|m| CmodError::parse(line, m))?;
    if items.len() != r {
        return Err(CmodError::parse(line, format!("expected a vector of length {r}, got {}", items.len())));
    }
    items.iter().map(|t| parse_poly(t, names).map_err(|m| CmodError::parse(line, m))).collect()
}

fn parse_structure(a: &AugmentedAlgebra, sec: &Section) -> Result<LambdaStructure> {
    let ring = a.ring();
    let c = a.codimension();
    let lnames: Vec<String> = a.lambda_vars().iter().map(|l| l.name.clone()).collect();
    let mut labels: Option<Vec<String>> = None;
    let mut degree = 8u32;
    let mut mults: Vec<(usize, String, String, String)> = Vec::new();
    let mut aug: Option<(usize, String)> = None;
    let mut embeds: Vec<(usize, String, String)> = Vec::new();
    for (line, s) in &sec.stmts {
        let line = *line;
        if let Some(rest) = keyword(s, "basis") {
            labels = Some(split_names(rest));
        } else if let Some(rest) = keyword(s, "truncation").or_else(|| keyword(s, "degree")) {
            degree = rest.parse().map_err(|_| CmodError::parse(line, "truncation must be an integer"))?;
        } else if let Some(rest) = keyword(s, "mult") {
            let (lhs, rhs) = rest.split_once('=').ok_or_else(|| CmodError::parse(line, "expected mult a*b = [..]"))?;
            let (x, y) = lhs.split_once('*').ok_or_else(|| CmodError::parse(line, "expected mult a*b = [..]"))?;
            mults.push((line, x.trim().to_string(), y.trim().to_string(), rhs.trim().to_string()));
        } else if let Some(rest) = keyword(s, "aug") {
            aug = Some((line, rest.to_string()));
        } else if let Some(rest) = keyword(s, "embed") {
            let (lhs, rhs) = rest.split_once('=').ok_or_else(|| CmodError::parse(line, "expected embed x = [..]"))?;
            embeds.push((line, lhs.trim().to_string(), rhs.trim().to_string()));
        } else {
            return Err(CmodError::parse(line, format!("unknown statement '{s}' in [lambda-structure]")));
        }
    }
    let labels = labels.ok_or_else(|| CmodError::parse(sec.line, "[lambda-structure] needs a basis"))?;
    let r = labels.len();
    let label_index =
        |n: &str, line: usize| labels.iter().position(|l| l == n).ok_or_else(|| CmodError::parse(line, format!("unknown basis label {n}")));
    let zero = vec![Poly::zero(c); r];
    let mut table: Vec<Vec<LambdaElem>> = vec![vec![zero.clone(); r]; r];
    let mut given: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for j in 0..r {
        let mut e = zero.clone();
        e[j] = Poly::one(c);
        table[0][j] = e.clone();
        table[j][0] = e;
    }
    for (line, x, y, rhs) in &mults {
        let (i, j) = (label_index(x, *line)?, label_index(y, *line)?);
        let v = lambda_vector(rhs, &lnames, r, *line)?;
        table[i][j] = v;
        given.insert((i, j), *line);
        if !given.contains_key(&(j, i)) {
            table[j][i] = table[i][j].clone();
        }
    }
    let aug = match aug {
        Some((line, t)) => {
            let items = split_list(&t).map_err(|m| CmodError::parse(line, m))?;
            if items.len() != r {
                return Err(CmodError::parse(line, format!("aug must have length {r}")));
            }
            items.iter().map(|x| scalar(ring, x, line)).collect::<Result<Vec<_>>>()?
        }
        None => (0..r).map(|i| if i == 0 { ring.from_int(1) } else { DvrScalar::zero() }).collect(),
    };
    let mut embed: Vec<Option<LambdaElem>> = a
        .fiber_names()
        .iter()
        .map(|n| {
            labels.iter().position(|l| l == n).map(|j| {
                let mut e = zero.clone();
                e[j] = Poly::one(c);
                e
            })
        })
        .collect();
    for (line, x, rhs) in &embeds {
        let j =
            a.fiber_names().iter().position(|n| n == x).ok_or_else(|| CmodError::parse(*line, format!("unknown fiber variable {x}")))?;
        embed[j] = Some(lambda_vector(rhs, &lnames, r, *line)?);
    }
    let embed = embed
        .into_iter()
        .enumerate()
        .map(|(j, e)| e.ok_or_else(|| CmodError::parse(sec.line, format!("no embedding for fiber variable {}", a.fiber_names()[j]))))
        .collect::<Result<Vec<_>>>()?;
    LambdaStructure::new(ring.clone(), c, labels, table, aug, embed, degree)
}

fn parse_module(a: &AugmentedAlgebra, l: Option<&LambdaStructure>, sec: &Section, earlier: &[ModuleBlock]) -> Result<LambdaModule> {
    let ring = a.ring();
    let c = a.codimension();
    let lnames: Vec<String> = a.lambda_vars().iter().map(|l| l.name.clone()).collect();
    let need_l =
        |line: usize| l.ok_or_else(|| CmodError::MissingLambdaStructure(format!("line {line}: module needs a [lambda-structure]")));
    let mut rank: Option<usize> = None;
    let mut acts: Vec<Option<PolyMatrix>> = vec![None; a.fiber_count()];
    let mut built: Option<LambdaModule> = None;
    let degree = l.map_or(8, |l| l.degree());
    for (line, s) in &sec.stmts {
        let line = *line;
        if s == "regular" {
            built = Some(LambdaModule::regular(need_l(line)?));
        } else if s == "ideal" {
            built = Some(LambdaModule::prime_ideal(need_l(line)?)?);
        } else if let Some(rest) = keyword(s, "character") {
            if c != 0 {
                return Err(CmodError::Unsupported("character modules are only Λ-free when c = 0".into()));
            }
            let items = split_list(rest).map_err(|m| CmodError::parse(line, m))?;
            if items.len() != a.fiber_count() {
                return Err(CmodError::parse(line, "character needs one value per fiber variable"));
            }
            let vals = items.iter().map(|x| scalar(ring, x, line)).collect::<Result<Vec<_>>>()?;
            built = Some(LambdaModule::character(ring, &vals));
        } else if let Some(rest) = keyword(s, "sum") {
            let mut acc: Option<LambdaModule> = None;
            for n in split_names(rest) {
                let m = earlier.iter().find(|b| b.name == n).ok_or_else(|| CmodError::parse(line, format!("unknown module {n}")))?;
                acc = Some(match acc {
                    None => m.module.clone(),
                    Some(x) => x.direct_sum(&m.module)?,
                });
            }
            built = Some(acc.ok_or_else(|| CmodError::parse(line, "empty sum"))?);
        } else if let Some(rest) = keyword(s, "rank") {
            rank = Some(rest.parse().map_err(|_| CmodError::parse(line, "rank must be an integer"))?);
        } else if let Some(rest) = keyword(s, "act") {
            let (lhs, rhs) = rest.split_once('=').ok_or_else(|| CmodError::parse(line, "expected act x = [[..]]"))?;
            let x = lhs.trim();
            let j =
                a.fiber_names().iter().position(|n| n == x).ok_or_else(|| CmodError::parse(line, format!("unknown fiber variable {x}")))?;
            let rows = split_list(rhs).map_err(|m| CmodError::parse(line, m))?;
            let n = rows.len();
            let mut parsed = Vec::new();
            for row in rows {
                parsed.push(lambda_vector(&row, &lnames, n, line)?);
            }
            acts[j] = Some(PolyMatrix::from_rows(c, n, parsed));
        } else {
            return Err(CmodError::parse(line, format!("unknown statement '{s}' in [module]")));
        }
    }
    let m = match built {
        Some(m) => m,
        None => {
            let rank = rank.ok_or_else(|| CmodError::parse(sec.line, "module block needs rank or a constructor"))?;
            let acts = acts
                .into_iter()
                .enumerate()
                .map(|(j, x)| x.ok_or_else(|| CmodError::parse(sec.line, format!("no action for {}", a.fiber_names()[j]))))
                .collect::<Result<Vec<_>>>()?;
            LambdaModule::new(c, rank, acts, degree)?
        }
    };
    m.validate_for(a)?;
    Ok(m)
}

/// Parses a complete input file: presentation, optional Λ-structure and
/// module blocks.
pub fn parse_input(text: &str) -> Result<InputFile> {
    let sections = statements(text);
    let algebra = parse_header(&sections[0].stmts)?;
    let mut structure = None;
    for sec in &sections[1..] {
        if sec.header == "lambda-structure" {
            if structure.is_some() {
                return Err(CmodError::parse(sec.line, "duplicate [lambda-structure]"));
            }
            structure = Some(parse_structure(&algebra, sec)?);
        }
    }
    let mut modules: Vec<ModuleBlock> = Vec::new();
    for sec in &sections[1..] {
        if sec.header == "lambda-structure" {
            continue;
        }
        let name = sec
            .header
            .strip_prefix("module")
            .map(str::trim)
            .filter(|n| !n.is_empty())
            .ok_or_else(|| CmodError::parse(sec.line, format!("unknown section [{}]", sec.header)))?;
        let module = parse_module(&algebra, structure.as_ref(), sec, &modules)?;
        modules.push(ModuleBlock { name: name.to_string(), module });
    }
    Ok(InputFile { algebra, structure, modules })
}
