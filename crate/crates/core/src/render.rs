//! Text forms of automata.
//!
//! * The printed form lists one state per line with absolute targets:
//!   `2: {1} {(c_⊥,#), (a,3), (z^{+1},#)}`, followed by the token class for
//!   classifiers. `c_⊥` is the alphabet minimum and `x^{+1}` the successor of
//!   `x`. [`parse_acceptor`] and [`parse_classifier`] read it back.
//! * The file form ([`write_classifier`], [`read_classifier`]) is a versioned,
//!   line-oriented format that carries the alphabet and the error class.
//! * [`emit_scanner`] turns a deterministic classifier into standalone Rust
//!   or C source with table-driven maximal-munch scanning.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::acceptor::{Acceptor, AcceptorState};
use crate::alphabet::{Alphabet, Symbol};
use crate::border_fn::{BorderFunction, Target};
use crate::classifier::{Classifier, ClassifierState, TokenClass};
use crate::{Error, Result};

const FILE_MAGIC: &str = "flatclassifier";
const FILE_VERSION: &str = "v1";
const MIN_MARK: &str = "c_⊥";
const SUCC_MARK: &str = "^{+1}";

/// Characters printed bare in the printed form.
fn is_bare(c: char) -> bool {
    c.is_ascii_graphic() && !"{}(),'\\^#".contains(c)
}

fn quoted(c: char) -> String {
    match c {
        '\'' => "'\\''".to_string(),
        '\\' => "'\\\\'".to_string(),
        c => format!("'{c}'"),
    }
}

fn hex(s: Symbol) -> String {
    format!("U+{:04X}", s.0)
}

fn printed_symbol(s: Symbol) -> String {
    match s.as_char() {
        Some(c) if is_bare(c) => c.to_string(),
        Some(c) if c.is_ascii_graphic() => quoted(c),
        _ => hex(s),
    }
}

fn printed_border(alphabet: Alphabet, s: Symbol, stuck: bool) -> String {
    if s == alphabet.min() {
        return MIN_MARK.to_string();
    }
    let pred = Symbol(s.0 - 1);
    let pred_bare = pred.as_char().is_some_and(is_bare);
    let self_bare = s.as_char().is_some_and(is_bare);
    if pred_bare && (stuck || !self_bare) {
        format!("{}{SUCC_MARK}", printed_symbol(pred))
    } else {
        printed_symbol(s)
    }
}

fn file_symbol(s: Symbol) -> String {
    match s.as_char() {
        Some(c) if c.is_ascii_graphic() => quoted(c),
        _ => hex(s),
    }
}

fn absolute(i: usize, offset: isize) -> usize {
    i.checked_add_signed(offset).expect("validated target")
}

fn printed_target(i: usize, t: &Target) -> String {
    match t {
        Target::Stuck => "#".to_string(),
        Target::Offset(d) => absolute(i, *d).to_string(),
    }
}

fn printed_row(
    alphabet: Alphabet,
    i: usize,
    eps: &std::collections::BTreeSet<isize>,
    trans: &BorderFunction<Target>,
) -> String {
    let eps: Vec<String> = eps.iter().map(|&d| absolute(i, d).to_string()).collect();
    let trans: Vec<String> = trans
        .entries()
        .iter()
        .map(|(s, t)| format!("({},{})", printed_border(alphabet, *s, t.is_stuck()), printed_target(i, t)))
        .collect();
    format!("{i}: {{{}}} {{{}}}", eps.join(", "), trans.join(", "))
}

/// The printed form of an acceptor. The acceptor with no states prints as
/// the empty string.
pub fn print_acceptor(a: &Acceptor) -> String {
    let mut out = String::new();
    for (idx, s) in a.states().iter().enumerate() {
        out.push_str(&printed_row(a.alphabet(), idx + 1, &s.eps, &s.trans));
        out.push('\n');
    }
    out
}

/// The printed form of a classifier.
pub fn print_classifier(c: &Classifier) -> String {
    let mut out = String::new();
    for (idx, s) in c.states().iter().enumerate() {
        let _ = writeln!(out, "{} {}", printed_row(c.alphabet(), idx + 1, &s.eps, &s.trans), s.class);
    }
    out
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, line }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.pos + 1, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c == ' ' || c == '\t' || c == '\r') {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn expect_str(&mut self, s: &str) -> Result<()> {
        if self.eat_str(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| {
            self.pos = start;
            self.err("expected a number")
        })
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// `c_⊥`, `'x'`, `U+HEX` or a bare character, with an optional `^{+1}`.
    fn symbol(&mut self, alphabet: Alphabet) -> Result<Symbol> {
        self.skip_ws();
        let start = self.pos;
        let base = if self.eat_str(MIN_MARK) {
            alphabet.min()
        } else if self.peek() == Some('\'') {
            self.pos += 1;
            let c = match self.peek() {
                Some('\\') => {
                    self.pos += 1;
                    self.peek().ok_or_else(|| self.err("unterminated quoted symbol"))?
                }
                Some(c) => c,
                None => return Err(self.err("unterminated quoted symbol")),
            };
            self.pos += 1;
            if self.peek() != Some('\'') {
                return Err(self.err("expected closing `'`"));
            }
            self.pos += 1;
            Symbol::from(c)
        } else if self.peek() == Some('U')
            && self.peek_at(1) == Some('+')
            && self.peek_at(2).is_some_and(|c| c.is_ascii_hexdigit())
        {
            self.pos += 2;
            let hstart = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_hexdigit()) {
                self.pos += 1;
            }
            let digits: String = self.chars[hstart..self.pos].iter().collect();
            Symbol(u32::from_str_radix(&digits, 16).map_err(|_| self.err("symbol ordinal too large"))?)
        } else {
            match self.peek() {
                Some(c) if is_bare(c) => {
                    self.pos += 1;
                    Symbol::from(c)
                }
                _ => return Err(self.err("expected a symbol")),
            }
        };
        let s = if self.eat_str(SUCC_MARK) {
            Symbol(base.0.checked_add(1).ok_or_else(|| self.err("symbol successor overflows"))?)
        } else {
            base
        };
        if !alphabet.contains(s) {
            self.pos = start;
            return Err(self.err(format!("symbol {s} is outside the alphabet")));
        }
        Ok(s)
    }

    fn target(&mut self) -> Result<Option<u64>> {
        if self.eat('#') {
            Ok(None)
        } else {
            self.number().map(Some)
        }
    }
}

fn relative(cur: &Cursor, i: usize, target: u64) -> Result<isize> {
    let t = isize::try_from(target).map_err(|_| cur.err("target too large"))?;
    Ok(t - i as isize)
}

/// `{a, b} {(s,t), ...}` after the row number.
fn parse_printed_body(
    cur: &mut Cursor,
    alphabet: Alphabet,
    i: usize,
) -> Result<(Vec<isize>, BorderFunction<Target>)> {
    cur.expect('{')?;
    let mut eps = Vec::new();
    if !cur.eat('}') {
        loop {
            let t = cur.number()?;
            eps.push(relative(cur, i, t)?);
            if cur.eat('}') {
                break;
            }
            cur.expect(',')?;
        }
    }
    cur.expect('{')?;
    let mut entries = Vec::new();
    loop {
        cur.expect('(')?;
        let s = cur.symbol(alphabet)?;
        cur.expect(',')?;
        let t = match cur.target()? {
            None => Target::Stuck,
            Some(t) => Target::Offset(relative(cur, i, t)?),
        };
        cur.expect(')')?;
        entries.push((s, t));
        if cur.eat('}') {
            break;
        }
        cur.expect(',')?;
    }
    let trans = BorderFunction::from_entries(alphabet, entries).map_err(|e| cur.err(e.to_string()))?;
    Ok((eps, trans))
}

fn parse_row_number(cur: &mut Cursor, expected: usize) -> Result<()> {
    let i = cur.number()?;
    if i != expected as u64 {
        return Err(cur.err(format!("expected state {expected}, found {i}")));
    }
    cur.expect(':')
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
}

/// Reads the printed form of an acceptor over `alphabet`.
pub fn parse_acceptor(text: &str, alphabet: Alphabet) -> Result<Acceptor> {
    let mut states = Vec::new();
    for (line, l) in content_lines(text) {
        let mut cur = Cursor::new(l, line);
        let i = states.len() + 1;
        parse_row_number(&mut cur, i)?;
        let (eps, trans) = parse_printed_body(&mut cur, alphabet, i)?;
        if !cur.at_end() {
            return Err(cur.err("trailing input"));
        }
        states.push(AcceptorState::new(eps, trans));
    }
    Acceptor::from_states(alphabet, states)
}

/// Reads the printed form of a classifier over `alphabet`.
pub fn parse_classifier(text: &str, alphabet: Alphabet) -> Result<Classifier> {
    let mut states = Vec::new();
    for (line, l) in content_lines(text) {
        let mut cur = Cursor::new(l, line);
        let i = states.len() + 1;
        parse_row_number(&mut cur, i)?;
        let (eps, trans) = parse_printed_body(&mut cur, alphabet, i)?;
        let name = cur.word();
        let class = TokenClass::new(&name).map_err(|e| cur.err(e.to_string()))?;
        if !cur.at_end() {
            return Err(cur.err("trailing input"));
        }
        states.push(ClassifierState::new(eps, trans, class));
    }
    Classifier::from_states(alphabet, states)
}

/// Serializes a classifier in the file form.
///
/// ```text
/// flatclassifier v1 alphabet=0..127 error=E
/// 1: eps=[2] trans=[(U+0000,#)] class=E
/// ```
pub fn write_classifier(c: &Classifier) -> String {
    let a = c.alphabet();
    let mut out = format!(
        "{FILE_MAGIC} {FILE_VERSION} alphabet={}..{} error={}\n",
        a.min().0,
        a.max().0,
        c.error_class()
    );
    for (idx, s) in c.states().iter().enumerate() {
        let i = idx + 1;
        let eps: Vec<String> = s.eps.iter().map(|&d| absolute(i, d).to_string()).collect();
        let trans: Vec<String> = s
            .trans
            .entries()
            .iter()
            .map(|(sym, t)| format!("({},{})", file_symbol(*sym), printed_target(i, t)))
            .collect();
        let _ = writeln!(out, "{i}: eps=[{}] trans=[{}] class={}", eps.join(","), trans.join(","), s.class);
    }
    out
}

/// Parses the file form written by [`write_classifier`].
pub fn read_classifier(text: &str) -> Result<Classifier> {
    let mut lines = content_lines(text).filter(|(_, l)| !l.trim_start().starts_with("//"));
    let (line, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty classifier file"))?;
    let mut cur = Cursor::new(header, line);
    if cur.word() != FILE_MAGIC {
        return Err(cur.err(format!("expected `{FILE_MAGIC}` header")));
    }
    let version = cur.word();
    if version != FILE_VERSION {
        return Err(cur.err(format!("unsupported version `{version}`")));
    }
    cur.expect_str("alphabet=")?;
    let min = cur.number()?;
    cur.expect_str("..")?;
    let max = cur.number()?;
    let bounds = |v: u64| u32::try_from(v).map_err(|_| Error::parse(line, 1, "alphabet bound too large"));
    let alphabet = Alphabet::new(bounds(min)?, bounds(max)?)?;
    cur.expect_str("error=")?;
    let error = TokenClass::new(&cur.word()).map_err(|e| cur.err(e.to_string()))?;
    if !cur.at_end() {
        return Err(cur.err("trailing input"));
    }

    let mut states = Vec::new();
    let mut row_lines = Vec::new();
    for (line, l) in lines {
        let mut cur = Cursor::new(l, line);
        let i = states.len() + 1;
        row_lines.push(line);
        parse_row_number(&mut cur, i)?;
        cur.expect_str("eps=")?;
        cur.expect('[')?;
        let mut eps = Vec::new();
        if !cur.eat(']') {
            loop {
                let t = cur.number()?;
                eps.push(relative(&cur, i, t)?);
                if cur.eat(']') {
                    break;
                }
                cur.expect(',')?;
            }
        }
        cur.expect_str("trans=")?;
        cur.expect('[')?;
        let mut entries = Vec::new();
        loop {
            cur.expect('(')?;
            let s = cur.symbol(alphabet)?;
            cur.expect(',')?;
            let t = match cur.target()? {
                None => Target::Stuck,
                Some(t) => Target::Offset(relative(&cur, i, t)?),
            };
            cur.expect(')')?;
            entries.push((s, t));
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
        let trans = BorderFunction::from_entries(alphabet, entries).map_err(|e| cur.err(e.to_string()))?;
        cur.expect_str("class=")?;
        let class = TokenClass::new(&cur.word()).map_err(|e| cur.err(e.to_string()))?;
        if !cur.at_end() {
            return Err(cur.err("trailing input"));
        }
        states.push(ClassifierState::new(eps, trans, class));
    }
    let c = Classifier::from_states(alphabet, states).map_err(|e| match e {
        Error::TargetOutOfRange { state, .. } => Error::parse(row_lines[state - 1], 1, e.to_string()),
        Error::EmptyClassifier => Error::parse(line, 1, "the file lists no states"),
        e => e,
    })?;
    if c.error_class() != &error {
        return Err(Error::parse(
            line,
            1,
            format!("header names error class {error}, state 1 has class {}", c.error_class()),
        ));
    }
    Ok(c)
}

/// Target language of [`emit_scanner`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Template {
    Rust,
    C,
}

impl FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rust" => Ok(Template::Rust),
            "c" => Ok(Template::C),
            other => Err(Error::UnknownTemplate(other.to_string())),
        }
    }
}

struct Tables {
    borders: Vec<Vec<u32>>,
    targets: Vec<Vec<i32>>,
    classes: Vec<String>,
    accepting: Vec<bool>,
}

fn tables(c: &Classifier) -> Result<Tables> {
    c.check_deterministic()?;
    let mut t = Tables { borders: Vec::new(), targets: Vec::new(), classes: Vec::new(), accepting: Vec::new() };
    for (idx, s) in c.states().iter().enumerate() {
        t.borders.push(s.trans.domain().map(|b| b.0).collect());
        let targets = s
            .trans
            .values()
            .map(|v| match v {
                Target::Stuck => Ok(i32::MIN),
                Target::Offset(d) => i32::try_from(*d)
                    .ok()
                    .filter(|&d| d != i32::MIN)
                    .ok_or_else(|| Error::Internal(format!("state {}: offset {d} does not fit the table", idx + 1))),
            })
            .collect::<Result<Vec<_>>>()?;
        t.targets.push(targets);
        t.classes.push(s.class.to_string());
        t.accepting.push(!c.is_error(idx + 1));
    }
    Ok(t)
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// Emits scanner source for a deterministic classifier.
///
/// The Rust output defines `next_token(&[u32]) -> (usize, &'static str)` and
/// `tokenize`; the C output defines `flat_next_token`. Both return the length
/// and class of the maximal-munch prefix, `(0, error class)` on failure.
pub fn emit_scanner(c: &Classifier, template: Template) -> Result<String> {
    let t = tables(c)?;
    Ok(match template {
        Template::Rust => emit_rust(c, &t),
        Template::C => emit_c(c, &t),
    })
}

fn emit_rust(c: &Classifier, t: &Tables) -> String {
    let n = t.classes.len();
    let a = c.alphabet();
    let mut out = String::new();
    let _ = writeln!(out, "// Scanner tables generated by flatlex ({n} states).");
    let _ = writeln!(out, "pub const ALPHABET_MIN: u32 = {};", a.min().0);
    let _ = writeln!(out, "pub const ALPHABET_MAX: u32 = {};", a.max().0);
    let _ = writeln!(out, "pub const ERROR_CLASS: &str = {:?};", c.error_class().name());
    let _ = writeln!(out, "const STUCK: i32 = i32::MIN;");
    let _ = writeln!(out, "static BORDERS: [&[u32]; {n}] = [");
    for b in &t.borders {
        let _ = writeln!(out, "    &[{}],", join(b));
    }
    let _ = writeln!(out, "];\nstatic TARGETS: [&[i32]; {n}] = [");
    for ts in &t.targets {
        let row: Vec<String> = ts.iter().map(|&x| if x == i32::MIN { "STUCK".into() } else { x.to_string() }).collect();
        let _ = writeln!(out, "    &[{}],", row.join(", "));
    }
    let classes: Vec<String> = t.classes.iter().map(|s| format!("{s:?}")).collect();
    let _ = writeln!(out, "];\nstatic CLASSES: [&str; {n}] = [{}];", classes.join(", "));
    let _ = writeln!(out, "static ACCEPTING: [bool; {n}] = [{}];", join(&t.accepting));
    out.push_str(RUST_DRIVER);
    out
}

const RUST_DRIVER: &str = r#"
/// Length and class of the longest classified prefix of `input`.
pub fn next_token(input: &[u32]) -> (usize, &'static str) {
    let mut state = 0usize;
    let mut best = if ACCEPTING[0] { (0, CLASSES[0]) } else { (0, ERROR_CLASS) };
    for (pos, &sym) in input.iter().enumerate() {
        if sym.wrapping_sub(ALPHABET_MIN) > ALPHABET_MAX - ALPHABET_MIN {
            break;
        }
        let borders = BORDERS[state];
        let k = borders.partition_point(|&b| b <= sym) - 1;
        let target = TARGETS[state][k];
        if target == STUCK {
            break;
        }
        state = (state as i64 + target as i64) as usize;
        if ACCEPTING[state] {
            best = (pos + 1, CLASSES[state]);
        }
    }
    best
}

/// `(start, len, class)` for every token; unclassifiable symbols become
/// one-symbol error tokens.
pub fn tokenize(input: &[u32]) -> Vec<(usize, usize, &'static str)> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < input.len() {
        let (len, class) = next_token(&input[pos..]);
        let len = len.max(1);
        out.push((pos, len, class));
        pos += len;
    }
    out
}
"#;

fn emit_c(c: &Classifier, t: &Tables) -> String {
    let a = c.alphabet();
    let mut out = String::new();
    let _ = writeln!(out, "/* Scanner tables generated by flatlex ({} states). */", t.classes.len());
    out.push_str("#include <stddef.h>\n#include <stdint.h>\n\n");
    let _ = writeln!(out, "#define FLAT_MIN {}u", a.min().0);
    let _ = writeln!(out, "#define FLAT_MAX {}u", a.max().0);
    out.push_str("#define FLAT_STUCK INT32_MIN\n\n");
    let all_borders: Vec<u32> = t.borders.iter().flatten().copied().collect();
    let all_targets: Vec<String> = t
        .targets
        .iter()
        .flatten()
        .map(|&x| if x == i32::MIN { "FLAT_STUCK".into() } else { x.to_string() })
        .collect();
    let mut starts = vec![0usize];
    for b in &t.borders {
        starts.push(starts.last().unwrap() + b.len());
    }
    let _ = writeln!(out, "static const uint32_t flat_borders[] = {{{}}};", join(&all_borders));
    let _ = writeln!(out, "static const int32_t flat_targets[] = {{{}}};", all_targets.join(", "));
    let _ = writeln!(out, "static const size_t flat_starts[] = {{{}}};", join(&starts));
    let classes: Vec<String> = t.classes.iter().map(|s| format!("\"{s}\"")).collect();
    let _ = writeln!(out, "static const char *const flat_classes[] = {{{}}};", classes.join(", "));
    let accepting: Vec<u8> = t.accepting.iter().map(|&b| b as u8).collect();
    let _ = writeln!(out, "static const unsigned char flat_accepting[] = {{{}}};", join(&accepting));
    let _ = writeln!(out, "const char *const flat_error_class = \"{}\";", c.error_class());
    out.push_str(C_DRIVER);
    out
}

const C_DRIVER: &str = r#"
/* Length of the longest classified prefix of input[0..len); its class is
   stored in *cls when cls is not NULL. */
size_t flat_next_token(const uint32_t *input, size_t len, const char **cls) {
    size_t state = 0, best_len = 0, pos;
    const char *best = flat_accepting[0] ? flat_classes[0] : flat_error_class;
    for (pos = 0; pos < len; pos++) {
        uint32_t sym = input[pos];
        size_t lo, hi;
        int32_t target;
        if (sym - FLAT_MIN > FLAT_MAX - FLAT_MIN)
            break;
        lo = flat_starts[state];
        hi = flat_starts[state + 1];
        while (hi - lo > 1) {
            size_t mid = lo + (hi - lo) / 2;
            if (flat_borders[mid] <= sym)
                lo = mid;
            else
                hi = mid;
        }
        target = flat_targets[lo];
        if (target == FLAT_STUCK)
            break;
        state = (size_t)((int64_t)state + target);
        if (flat_accepting[state]) {
            best_len = pos + 1;
            best = flat_classes[state];
        }
    }
    if (cls)
        *cls = best;
    return best_len;
}
"#;
