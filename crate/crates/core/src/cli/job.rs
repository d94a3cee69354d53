//! Job files.
//!
//! ```text
//! ring{p=32003; vars=x,y; rels=x^2,y^2}
//! module{rows=[0]; cols=[1,1]; entries=[[x,y]]}
//! cmd=symgrowth steps=8
//! ```
//!
//! An optional `extend{vars=..; rels=..}` block names the second tensor
//! factor for `construct`. Without a `module` block the module is the residue
//! field.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

fn parse_err(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    }
}

/// A polynomial with coefficients already reduced mod `p`, as
/// `(exponents, coefficient)` in increasing monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RawPoly {
    pub terms: Vec<(Vec<u32>, u64)>,
}

impl RawPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.iter().map(|(e, _)| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn format(&self, vars: &[String], p: u64) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            // print residues above p/2 as negatives
            let (neg, mag) = if *c > p / 2 { (true, p - c) } else { (false, *c) };
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { vars[v].clone() } else { format!("{}^{k}", vars[v]) })
                .collect();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if mag != 1 {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Resolve,
    Complete,
    Betti,
    Poincare,
    Cx,
    Symgrowth,
    Gdim,
    Operators,
    DualityCheck,
    Reduce,
    Construct,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Resolve,
        Command::Complete,
        Command::Betti,
        Command::Poincare,
        Command::Cx,
        Command::Symgrowth,
        Command::Gdim,
        Command::Operators,
        Command::DualityCheck,
        Command::Reduce,
        Command::Construct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Resolve => "resolve",
            Command::Complete => "complete",
            Command::Betti => "betti",
            Command::Poincare => "poincare",
            Command::Cx => "cx",
            Command::Symgrowth => "symgrowth",
            Command::Gdim => "gdim",
            Command::Operators => "operators",
            Command::DualityCheck => "duality-check",
            Command::Reduce => "reduce",
            Command::Construct => "construct",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub vars: Vec<String>,
    pub rels: Vec<RawPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub rows: Vec<i32>,
    pub cols: Vec<i32>,
    pub entries: Vec<Vec<RawPoly>>,
}

impl ModuleSpec {
    /// `A / (x_1, ..., x_n)`.
    pub fn residue_field(nvars: usize) -> Self {
        let entries = vec![(0..nvars)
            .map(|i| {
                let mut e = vec![0; nvars];
                e[i] = 1;
                RawPoly { terms: vec![(e, 1)] }
            })
            .collect()];
        ModuleSpec {
            rows: vec![0],
            cols: vec![1; nvars],
            entries,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub p: u64,
    pub ring: RingSpec,
    pub module: ModuleSpec,
    pub extend: Option<RingSpec>,
    pub cmd: Command,
    pub steps: usize,
    pub tail: usize,
    pub eta: Option<Vec<i64>>,
    pub seed: u64,
}

pub const DEFAULT_STEPS: usize = 8;
pub const DEFAULT_TAIL: usize = 4;

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn ring_fields(r: &RingSpec, p: u64) -> String {
    let rels: Vec<String> = r.rels.iter().map(|f| f.format(&r.vars, p)).collect();
    format!("vars={}; rels={}", r.vars.join(","), rels.join(","))
}

impl fmt::Display for JobSpec {
    /// Canonical form; parsing it gives back the same spec.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring{{p={}; {}}}", self.p, ring_fields(&self.ring, self.p))?;
        let entries: Vec<String> = self
            .module
            .entries
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|e| e.format(&self.ring.vars, self.p)).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        writeln!(
            f,
            "module{{rows=[{}]; cols=[{}]; entries=[{}]}}",
            join(&self.module.rows),
            join(&self.module.cols),
            entries.join(",")
        )?;
        if let Some(e) = &self.extend {
            writeln!(f, "extend{{{}}}", ring_fields(e, self.p))?;
        }
        write!(f, "cmd={} steps={} tail={} seed={}", self.cmd, self.steps, self.tail, self.seed)?;
        if let Some(eta) = &self.eta {
            write!(f, " eta={}", join(eta))?;
        }
        writeln!(f)
    }
}

fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

struct Scanner {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Scanner {
    fn new(src: &str) -> Self {
        Scanner {
            chars: src.chars().collect(),
            i: 0,
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn ident(&mut self) -> Result<(String, Pos)> {
        self.skip_ws();
        let pos = self.pos();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() {
            return Err(parse_err(pos, "expected a name"));
        }
        Ok((s, pos))
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        let pos = self.pos();
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(parse_err(pos, format!("expected `{want}`, found `{c}`"))),
            None => Err(parse_err(pos, format!("expected `{want}`, found end of input"))),
        }
    }

    /// Raw text of a field value inside a block: up to `;` or `}` outside
    /// brackets.
    fn block_value(&mut self) -> Result<(String, Pos)> {
        self.skip_ws();
        let pos = self.pos();
        let mut depth = 0i32;
        let mut s = String::new();
        while let Some(c) = self.peek() {
            match c {
                '[' => depth += 1,
                ']' => depth -= 1,
                ';' | '}' if depth == 0 => break,
                _ => {}
            }
            if depth < 0 {
                return Err(parse_err(self.pos(), "unbalanced `]`"));
            }
            s.push(c);
            self.bump();
        }
        if depth != 0 {
            return Err(parse_err(pos, "unbalanced `[`"));
        }
        Ok((s, pos))
    }

    /// A top-level value: one word.
    fn word(&mut self) -> Result<(String, Pos)> {
        self.skip_ws();
        let pos = self.pos();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                break;
            }
            s.push(c);
            self.bump();
        }
        if s.is_empty() {
            return Err(parse_err(pos, "expected a value"));
        }
        Ok((s, pos))
    }
}

/// Position of the `k`-th char of a value that started at `start`.
fn advance(start: Pos, text: &str, k: usize) -> Pos {
    let mut p = start;
    for c in text.chars().take(k) {
        if c == '\n' {
            p.line += 1;
            p.col = 1;
        } else {
            p.col += 1;
        }
    }
    p
}

/// Splits on `sep` outside brackets, keeping the char offset of each piece.
fn split_top(text: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start_byte = 0;
    let mut start_char = 0;
    for (ci, (bi, c)) in text.char_indices().enumerate() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start_char, &text[start_byte..bi]));
                start_byte = bi + c.len_utf8();
                start_char = ci + 1;
            }
            _ => {}
        }
    }
    out.push((start_char, &text[start_byte..]));
    out
}

/// Parses a polynomial over the declared variables, reducing mod `p`.
pub fn parse_poly(text: &str, vars: &[String], p: u64, at: Pos) -> Result<RawPoly> {
    let chars: Vec<char> = text.chars().collect();
    let n = vars.len();
    let mut acc: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut i = 0;
    let skip = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    let number = |i: &mut usize| -> Option<u64> {
        let s = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        (s < *i).then(|| chars[s..*i].iter().collect::<String>()).and_then(|t| t.parse().ok())
    };
    skip(&mut i);
    if i == chars.len() {
        return Err(parse_err(at, "empty polynomial"));
    }
    let mut first = true;
    while {
        skip(&mut i);
        i < chars.len()
    } {
        let mut negative = false;
        match chars[i] {
            '+' => i += 1,
            '-' => {
                negative = true;
                i += 1
            }
            _ if first => {}
            c => return Err(parse_err(advance(at, text, i), format!("expected `+` or `-`, found `{c}`"))),
        }
        first = false;
        let mut coeff: u64 = 1;
        let mut exps = vec![0u32; n];
        let mut factors = 0;
        loop {
            skip(&mut i);
            let Some(&c) = chars.get(i) else { break };
            if c == '+' || c == '-' {
                break;
            }
            if c == '*' {
                if factors == 0 {
                    return Err(parse_err(advance(at, text, i), "`*` without a left factor"));
                }
                i += 1;
                continue;
            }
            let start = i;
            if c.is_ascii_digit() {
                let v = number(&mut i).ok_or_else(|| parse_err(advance(at, text, start), "integer too large"))?;
                coeff = ((coeff as u128 * (v % p) as u128) % p as u128) as u64;
            } else if c.is_alphabetic() || c == '_' {
                let s = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[s..i].iter().collect();
                // a declared name, or declared names written side by side
                let mut rest = word.as_str();
                let mut last = None;
                while !rest.is_empty() {
                    let hit = vars
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| rest.starts_with(v.as_str()))
                        .max_by_key(|(_, v)| v.len());
                    let Some((k, v)) = hit else {
                        return Err(parse_err(advance(at, text, s), format!("unknown variable in `{word}`")));
                    };
                    exps[k] += 1;
                    last = Some(k);
                    rest = &rest[v.len()..];
                }
                skip(&mut i);
                if chars.get(i) == Some(&'^') {
                    i += 1;
                    skip(&mut i);
                    let es = i;
                    let e = number(&mut i).ok_or_else(|| parse_err(advance(at, text, es), "expected an exponent"))?;
                    let k = last.expect("nonempty word");
                    exps[k] += u32::try_from(e).map_err(|_| parse_err(advance(at, text, es), "exponent too large"))? - 1;
                }
            } else {
                return Err(parse_err(advance(at, text, i), format!("unexpected `{c}`")));
            }
            factors += 1;
        }
        if factors == 0 {
            return Err(parse_err(advance(at, text, i.min(chars.len())), "missing term"));
        }
        let c = if negative { (p - coeff) % p } else { coeff };
        let slot = acc.entry(exps).or_insert(0);
        *slot = (*slot + c) % p;
    }
    // increasing monomial order: by degree, then reverse lex of exponents
    let mut terms: Vec<(Vec<u32>, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    terms.sort_by(|(a, _), (b, _)| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        da.cmp(&db).then_with(|| a.cmp(b))
    });
    Ok(RawPoly { terms })
}

fn parse_int_list(text: &str, at: Pos) -> Result<Vec<i32>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| parse_err(at, "expected a list like [0,1]"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top(inner, ',')
        .into_iter()
        .map(|(k, s)| {
            s.trim()
                .parse::<i32>()
                .map_err(|_| parse_err(advance(at, text, k + 1), format!("expected an integer, found `{}`", s.trim())))
        })
        .collect()
}

fn parse_vars(text: &str, at: Pos) -> Result<Vec<String>> {
    let mut vars: Vec<String> = Vec::new();
    for (k, s) in split_top(text, ',') {
        let v = s.trim();
        if v.contains('=') {
            return Err(parse_err(advance(at, text, k), "missing `;` before the next field"));
        }
        let ok = v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok {
            return Err(parse_err(advance(at, text, k), format!("bad variable name `{v}`")));
        }
        if vars.iter().any(|w| w == v) {
            return Err(parse_err(advance(at, text, k), format!("variable `{v}` declared twice")));
        }
        vars.push(v.to_string());
    }
    Ok(vars)
}

fn parse_rels(text: &str, vars: &[String], p: u64, at: Pos) -> Result<Vec<RawPoly>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (k, s) in split_top(text, ',') {
        let pos = advance(at, text, k);
        let f = parse_poly(s, vars, p, pos)?;
        if f.is_zero() {
            return Err(parse_err(pos, "relation is zero"));
        }
        if f.homogeneous_degree().is_none() {
            return Err(Error::NotHomogeneous(format!(
                "relation `{}` at {}:{}",
                s.trim(),
                pos.line,
                pos.col
            )));
        }
        out.push(f);
    }
    Ok(out)
}

type Fields = BTreeMap<String, (String, Pos)>;

fn block_fields(sc: &mut Scanner, name_pos: Pos) -> Result<Fields> {
    sc.expect('{')?;
    let mut fields = Fields::new();
    loop {
        sc.skip_ws();
        match sc.peek() {
            Some('}') => {
                sc.bump();
                return Ok(fields);
            }
            None => return Err(parse_err(name_pos, "unterminated block")),
            _ => {}
        }
        let (key, kp) = sc.ident()?;
        sc.expect('=')?;
        let value = sc.block_value()?;
        if fields.insert(key.clone(), value).is_some() {
            return Err(parse_err(kp, format!("duplicate field `{key}`")));
        }
        sc.skip_ws();
        if sc.peek() == Some(';') {
            sc.bump();
        }
    }
}

fn take(fields: &mut Fields, key: &str, block: Pos, block_name: &str) -> Result<(String, Pos)> {
    fields
        .remove(key)
        .ok_or_else(|| parse_err(block, format!("{block_name} block needs `{key}`")))
}

fn no_extra(fields: &Fields, block_name: &str) -> Result<()> {
    match fields.iter().next() {
        Some((k, (_, pos))) => Err(parse_err(*pos, format!("unknown field `{k}` in {block_name} block"))),
        None => Ok(()),
    }
}

/// Parses and validates a job; homogeneity, primality and degree checks are
/// done here.
pub fn parse_job(text: &str) -> Result<JobSpec> {
    let mut sc = Scanner::new(text);
    let mut ring: Option<(Fields, Pos)> = None;
    let mut module: Option<(Fields, Pos)> = None;
    let mut extend: Option<(Fields, Pos)> = None;
    let mut params: BTreeMap<String, (String, Pos)> = BTreeMap::new();
    loop {
        sc.skip_ws();
        if sc.peek().is_none() {
            break;
        }
        let (name, pos) = sc.ident()?;
        sc.skip_ws();
        match sc.peek() {
            Some('{') => {
                let slot = match name.as_str() {
                    "ring" => &mut ring,
                    "module" => &mut module,
                    "extend" => &mut extend,
                    _ => return Err(parse_err(pos, format!("unknown block `{name}`"))),
                };
                if slot.is_some() {
                    return Err(parse_err(pos, format!("duplicate `{name}` block")));
                }
                *slot = Some((block_fields(&mut sc, pos)?, pos));
            }
            Some('=') => {
                sc.bump();
                let v = sc.word()?;
                if params.insert(name.clone(), v).is_some() {
                    return Err(parse_err(pos, format!("duplicate parameter `{name}`")));
                }
            }
            _ => return Err(parse_err(sc.pos(), format!("expected `{{` or `=` after `{name}`"))),
        }
    }

    let (mut rf, rpos) = ring.ok_or_else(|| parse_err(Pos { line: 1, col: 1 }, "missing ring block"))?;
    let (ptext, ppos) = take(&mut rf, "p", rpos, "ring")?;
    let p: u64 = ptext
        .trim()
        .parse()
        .map_err(|_| parse_err(ppos, format!("modulus must be a positive integer, found `{}`", ptext.trim())))?;
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let ring_spec = |mut f: Fields, pos: Pos, name: &str| -> Result<RingSpec> {
        let (vtext, vpos) = take(&mut f, "vars", pos, name)?;
        let vars = parse_vars(&vtext, vpos)?;
        let (rtext, rp) = f.remove("rels").unwrap_or_default_at(pos);
        let rels = parse_rels(&rtext, &vars, p, rp)?;
        no_extra(&f, name)?;
        Ok(RingSpec { vars, rels })
    };
    let ring = ring_spec(rf, rpos, "ring")?;
    let extend = extend.map(|(f, pos)| ring_spec(f, pos, "extend")).transpose()?;

    let module = match module {
        None => ModuleSpec::residue_field(ring.vars.len()),
        Some((mut mf, mpos)) => {
            let (rt, rp) = take(&mut mf, "rows", mpos, "module")?;
            let rows = parse_int_list(&rt, rp)?;
            let (ct, cp) = take(&mut mf, "cols", mpos, "module")?;
            let cols = parse_int_list(&ct, cp)?;
            let entries = match mf.remove("entries") {
                None if cols.is_empty() => vec![Vec::new(); rows.len()],
                None => return Err(parse_err(mpos, "module block needs `entries` when cols is nonempty")),
                Some((et, ep)) => parse_entries(&et, ep, &ring.vars, p, &rows, &cols)?,
            };
            no_extra(&mf, "module")?;
            ModuleSpec { rows, cols, entries }
        }
    };

    let mut take_param = |k: &str| params.remove(k);
    let cmd = match take_param("cmd") {
        Some((c, pos)) => c.parse::<Command>().map_err(|e| parse_err(pos, e))?,
        None => Command::Symgrowth,
    };
    let usize_param = |v: Option<(String, Pos)>, default: usize| -> Result<usize> {
        match v {
            None => Ok(default),
            Some((s, pos)) => s.parse().map_err(|_| parse_err(pos, format!("expected a nonnegative integer, found `{s}`"))),
        }
    };
    let steps = usize_param(take_param("steps"), DEFAULT_STEPS)?;
    let tail = usize_param(take_param("tail"), DEFAULT_TAIL)?;
    let seed = usize_param(take_param("seed"), 0)? as u64;
    let eta = match take_param("eta") {
        None => None,
        Some((s, pos)) => Some(parse_eta(&s).map_err(|m| parse_err(pos, m))?),
    };
    if let Some((k, (_, pos))) = params.iter().next() {
        return Err(parse_err(*pos, format!("unknown parameter `{k}`")));
    }
    if cmd == Command::Construct && extend.is_none() {
        return Err(Error::InvalidInput("construct needs an extend block".into()));
    }
    Ok(JobSpec {
        p,
        ring,
        module,
        extend,
        cmd,
        steps,
        tail,
        eta,
        seed,
    })
}

/// `"1,-2,3"` as integers.
pub fn parse_eta(s: &str) -> std::result::Result<Vec<i64>, String> {
    s.split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|_| format!("bad η coefficient `{}`", c.trim())))
        .collect()
}

trait OrEmpty {
    fn unwrap_or_default_at(self, pos: Pos) -> (String, Pos);
}

impl OrEmpty for Option<(String, Pos)> {
    fn unwrap_or_default_at(self, pos: Pos) -> (String, Pos) {
        self.unwrap_or((String::new(), pos))
    }
}

fn parse_entries(text: &str, at: Pos, vars: &[String], p: u64, rows: &[i32], cols: &[i32]) -> Result<Vec<Vec<RawPoly>>> {
    let t = text.trim_end();
    let lead = text.len() - text.trim_start().len();
    let inner = t
        .trim_start()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| parse_err(at, "entries must look like [[..],[..]]"))?;
    let base = lead + 1;
    let mut out = Vec::new();
    if !inner.trim().is_empty() {
        for (k, row) in split_top(inner, ',') {
            let row_lead = row.len() - row.trim_start().len();
            let row_at = advance(at, text, base + k + row_lead);
            let r = row.trim();
            let cells = r
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| parse_err(row_at, "each row must be a bracketed list"))?;
            let mut parsed = Vec::new();
            if !cells.trim().is_empty() {
                for (c, cell) in split_top(cells, ',') {
                    let pos = advance(row_at, r, c + 1);
                    parsed.push(parse_poly(cell, vars, p, pos)?);
                }
            }
            out.push(parsed);
        }
    }
    if out.len() != rows.len() {
        return Err(parse_err(at, format!("entries has {} rows, rows lists {}", out.len(), rows.len())));
    }
    for (i, row) in out.iter().enumerate() {
        if row.len() != cols.len() {
            return Err(parse_err(at, format!("row {i} has {} entries, cols lists {}", row.len(), cols.len())));
        }
        for (j, e) in row.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let want = cols[j] - rows[i];
            match e.homogeneous_degree() {
                Some(d) if d as i32 == want => {}
                _ => {
                    return Err(parse_err(
                        at,
                        format!("entry ({i},{j}) = {} must be homogeneous of degree {want}", e.format(vars, p)),
                    ))
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_example() {
        let j = parse_job("ring{p=32003; vars=x,y; rels=x^2,y^2} module{cols=[]; rows=[0]} cmd=resolve steps=8").unwrap();
        assert_eq!(j.p, 32003);
        assert_eq!(j.ring.vars, vec!["x", "y"]);
        assert_eq!(j.module.rows, vec![0]);
        assert!(j.module.cols.is_empty());
        assert_eq!(j.cmd, Command::Resolve);
        assert_eq!(j.steps, 8);
        assert_eq!(parse_job(&j.to_string()).unwrap(), j);
    }

    #[test]
    fn rejects() {
        let e = parse_job("ring{p=32003; vars=x,y; rels=x^2+y}").unwrap_err();
        assert_eq!(e.kind(), "not_homogeneous");
        let e = parse_job("ring{p=32004; vars=x; rels=x^2}").unwrap_err();
        assert_eq!(e.kind(), "not_prime");
        let e = parse_job("ring{p=7; vars=x; rels=x^2}\nmodule{rows=[0]; cols=[2]; entries=[[x]]}").unwrap_err();
        assert_eq!(e.kind(), "parse");
        match parse_job("ring{p=7; vars=x;\n  rels=x^2+q}").unwrap_err() {
            Error::Parse { line, col, .. } => assert_eq!((line, col), (2, 12)),
            e => panic!("{e}"),
        }
        match parse_job("ring{p=7; vars=x; rels=x^2} cmd=bogus").unwrap_err() {
            Error::Parse { line, col, .. } => assert_eq!((line, col), (1, 33)),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn polynomials() {
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let at = Pos { line: 1, col: 1 };
        let a = parse_poly("yz - 2 x*y + 3xy^2 -3 x y y", &vars, 7, at).unwrap();
        assert_eq!(a.format(&vars, 7), "-2*x*y+y*z");
        let b = parse_poly(&a.format(&vars, 7), &vars, 7, at).unwrap();
        assert_eq!(a, b);
        assert!(parse_poly("x + ", &vars, 7, at).is_err());
        assert!(parse_poly("w", &vars, 7, at).is_err());
    }

    #[test]
    fn default_module_is_residue_field() {
        let j = parse_job("ring{p=5; vars=a,b; rels=a^2,b^3}").unwrap();
        assert_eq!(j.module.cols, vec![1, 1]);
        assert_eq!(j.cmd, Command::Symgrowth);
        assert_eq!(parse_job(&j.to_string()).unwrap(), j);
    }
}
