//! Token specifications: a small text format naming an alphabet, an error
//! class and a list of token rules given as regular expressions.
//!
//! ```text
//! # comments run to the end of the line
//! alphabet ascii;            # or `unicode`, or `0..255`; default unicode
//! error ERR;
//! token IDENT  = [A-Za-z_][A-Za-z0-9_]*;
//! token WHILE  = "while";    # later rules win ties of equal length
//! token NUMBER = [0-9]+ ("." [0-9]+)?;
//! ```
//!
//! Regular expressions support `|`, juxtaposition, postfix `*`, `+` and `?`,
//! grouping, `.` (any symbol), character classes `[a-z_]` and `[^"]`, quoted
//! literals and escapes (`\n`, `\t`, `\r`, `\u00e9`, `\u{1F600}`, or a
//! backslash before any punctuation). Whitespace between regex items is
//! ignored; inside quotes and classes it is literal.

use crate::acceptor::Acceptor;
use crate::alphabet::{Alphabet, Symbol};
use crate::border_fn::BorderFunction;
use crate::classifier::{Classifier, TokenClass};
use crate::{Error, Result};

/// A parsed regular expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    /// The empty word.
    Epsilon,
    /// One symbol from a set.
    Set(BorderFunction<bool>),
    Concat(Vec<Regex>),
    Alt(Vec<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
    Optional(Box<Regex>),
}

impl Regex {
    /// Builds the acceptor with the regular operations on flat acceptors.
    pub fn to_acceptor(&self, alphabet: Alphabet) -> Result<Acceptor> {
        Ok(match self {
            Regex::Epsilon => Acceptor::epsilon(alphabet),
            Regex::Set(phi) => {
                if phi.alphabet() != alphabet {
                    return Err(Error::AlphabetMismatch);
                }
                Acceptor::from_border(phi)
            }
            Regex::Concat(parts) => {
                let mut acc = Acceptor::epsilon(alphabet);
                for p in parts {
                    acc = acc.concat(&p.to_acceptor(alphabet)?)?;
                }
                acc
            }
            Regex::Alt(parts) => {
                let mut iter = parts.iter();
                let mut acc = match iter.next() {
                    Some(p) => p.to_acceptor(alphabet)?,
                    None => Acceptor::from_border(&BorderFunction::empty(alphabet)),
                };
                for p in iter {
                    acc = acc.union(&p.to_acceptor(alphabet)?)?;
                }
                acc
            }
            Regex::Star(r) => r.to_acceptor(alphabet)?.star(),
            Regex::Plus(r) => r.to_acceptor(alphabet)?.plus(),
            Regex::Optional(r) => r.to_acceptor(alphabet)?.optional(),
        })
    }
}

/// One `token` line.
#[derive(Debug, Clone)]
pub struct Rule {
    pub class: TokenClass,
    pub pattern: String,
    pub regex: Regex,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct TokenSpec {
    alphabet: Alphabet,
    error: TokenClass,
    rules: Vec<Rule>,
    warnings: Vec<String>,
}

impl TokenSpec {
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).spec()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn error_class(&self) -> &TokenClass {
        &self.error
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Non-fatal findings, such as rules that match nothing.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// The nondeterministic classifier with one lifted acceptor per rule, in
    /// rule order.
    pub fn build_classifier(&self) -> Result<Classifier> {
        let mut c = Classifier::error_classifier(self.alphabet, self.error.clone());
        for rule in &self.rules {
            c = c.add_token(&rule.class, &rule.regex.to_acceptor(self.alphabet)?)?;
        }
        Ok(c)
    }
}

/// Parses one regular expression over `alphabet`.
pub fn parse_regex(text: &str, alphabet: Alphabet) -> Result<Regex> {
    let mut p = Parser::new(text);
    let r = p.regex(alphabet, None)?;
    p.skip_trivia();
    if !p.at_end() {
        return Err(p.err("unexpected input after regular expression"));
    }
    Ok(r)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

const RESERVED: &str = "|*+?()[]\".;\\#";

impl Parser {
    fn new(text: &str) -> Self {
        Parser { chars: text.chars().collect(), pos: 0 }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let before = &self.chars[..pos.min(self.chars.len())];
        let line = before.iter().filter(|&&c| c == '\n').count() + 1;
        let column = before.iter().rev().take_while(|&&c| c != '\n').count() + 1;
        (line, column)
    }

    fn err_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let (line, column) = self.location(pos);
        Error::parse(line, column, message)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        self.err_at(self.pos, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    /// Skips whitespace and `#` comments.
    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_trivia();
        if self.peek() == Some(c) {
            self.pos += 1;
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

    fn ident(&mut self) -> Result<String> {
        self.skip_trivia();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn class_name(&mut self) -> Result<TokenClass> {
        self.skip_trivia();
        let start = self.pos;
        let name = self.ident()?;
        TokenClass::new(&name).map_err(|e| self.err_at(start, e.to_string()))
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_trivia();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.err_at(start, "expected a number"))
    }

    fn spec(&mut self) -> Result<TokenSpec> {
        self.skip_trivia();
        let mut alphabet = Alphabet::unicode();
        let save = self.pos;
        let mut keyword = self.ident().unwrap_or_default();
        if keyword == "alphabet" {
            self.skip_trivia();
            let at = self.pos;
            alphabet = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let min = self.number()?;
                self.expect('.')?;
                if self.peek() != Some('.') {
                    return Err(self.err("expected `..`"));
                }
                self.pos += 1;
                let max = self.number()?;
                Alphabet::new(min, max).map_err(|e| self.err_at(at, e.to_string()))?
            } else {
                match self.ident()?.as_str() {
                    "ascii" => Alphabet::ascii(),
                    "unicode" => Alphabet::unicode(),
                    other => return Err(self.err_at(at, format!("unknown alphabet `{other}`"))),
                }
            };
            self.expect(';')?;
            self.skip_trivia();
            keyword = self.ident().unwrap_or_default();
        }
        if keyword != "error" {
            return Err(self.err_at(save, "expected `error CLASS;`"));
        }
        let error = self.class_name()?;
        self.expect(';')?;

        let mut rules = Vec::new();
        let mut warnings = Vec::new();
        loop {
            self.skip_trivia();
            if self.at_end() {
                break;
            }
            let start = self.pos;
            if self.ident().ok().as_deref() != Some("token") {
                return Err(self.err_at(start, "expected `token CLASS = REGEX;`"));
            }
            let line = self.location(start).0;
            let class_at = self.pos;
            let class = self.class_name()?;
            if class == error {
                return Err(self.err_at(class_at, format!("token class {class} is the error class")));
            }
            self.expect('=')?;
            self.skip_trivia();
            let pattern_start = self.pos;
            let regex = self.regex(alphabet, Some(';'))?;
            let pattern: String = self.chars[pattern_start..self.pos].iter().collect::<String>().trim().to_string();
            self.expect(';')?;
            let acc = regex.to_acceptor(alphabet)?;
            if acc.accepts_empty() {
                return Err(self.err_at(
                    pattern_start,
                    format!("token {class} matches the empty word, which would make the classifier ill-formed"),
                ));
            }
            if acc.is_empty_language() {
                warnings.push(format!("line {line}: token {class} matches nothing"));
            }
            rules.push(Rule { class, pattern, regex, line });
        }
        Ok(TokenSpec { alphabet, error, rules, warnings })
    }

    /// `alt := concat ('|' concat)*`, stopping at `terminator` or `)`.
    fn regex(&mut self, alphabet: Alphabet, terminator: Option<char>) -> Result<Regex> {
        let mut alts = vec![self.concat(alphabet, terminator)?];
        while self.eat('|') {
            alts.push(self.concat(alphabet, terminator)?);
        }
        Ok(if alts.len() == 1 { alts.pop().unwrap() } else { Regex::Alt(alts) })
    }

    fn concat(&mut self, alphabet: Alphabet, terminator: Option<char>) -> Result<Regex> {
        let mut parts = Vec::new();
        loop {
            self.skip_trivia();
            match self.peek() {
                None | Some('|') | Some(')') => break,
                Some(c) if Some(c) == terminator => break,
                _ => parts.push(self.postfix(alphabet)?),
            }
        }
        Ok(match parts.len() {
            0 => Regex::Epsilon,
            1 => parts.pop().unwrap(),
            _ => Regex::Concat(parts),
        })
    }

    fn postfix(&mut self, alphabet: Alphabet) -> Result<Regex> {
        let mut r = self.atom(alphabet)?;
        loop {
            self.skip_trivia();
            r = match self.peek() {
                Some('*') => Regex::Star(Box::new(r)),
                Some('+') => Regex::Plus(Box::new(r)),
                Some('?') => Regex::Optional(Box::new(r)),
                _ => return Ok(r),
            };
            self.pos += 1;
        }
    }

    fn atom(&mut self, alphabet: Alphabet) -> Result<Regex> {
        self.skip_trivia();
        let start = self.pos;
        match self.bump() {
            Some('(') => {
                let r = self.regex(alphabet, None)?;
                self.expect(')')?;
                Ok(r)
            }
            Some('[') => self.class(alphabet),
            Some('"') => {
                let mut parts = Vec::new();
                loop {
                    let at = self.pos;
                    match self.bump() {
                        None => return Err(self.err_at(start, "unterminated string literal")),
                        Some('"') => break,
                        Some('\\') => {
                            let s = self.escape(at)?;
                            parts.push(self.single(alphabet, s, at)?);
                        }
                        Some(c) => parts.push(self.single(alphabet, Symbol::from(c), at)?),
                    }
                }
                Ok(match parts.len() {
                    0 => Regex::Epsilon,
                    1 => parts.pop().unwrap(),
                    _ => Regex::Concat(parts),
                })
            }
            Some('.') => Ok(Regex::Set(BorderFunction::sigma(alphabet))),
            Some('\\') => {
                let s = self.escape(start)?;
                self.single(alphabet, s, start)
            }
            Some(c) if !RESERVED.contains(c) => self.single(alphabet, Symbol::from(c), start),
            Some(c) => Err(self.err_at(start, format!("unexpected `{c}`"))),
            None => Err(self.err_at(start, "unexpected end of input")),
        }
    }

    fn single(&self, alphabet: Alphabet, s: Symbol, at: usize) -> Result<Regex> {
        let phi = BorderFunction::single(alphabet, s).map_err(|e| self.err_at(at, e.to_string()))?;
        Ok(Regex::Set(phi))
    }

    /// After a backslash at `at`.
    fn escape(&mut self, at: usize) -> Result<Symbol> {
        let c = self.bump().ok_or_else(|| self.err_at(at, "dangling escape"))?;
        let code = match c {
            'n' => '\n' as u32,
            't' => '\t' as u32,
            'r' => '\r' as u32,
            '0' => 0,
            'u' => {
                let braced = self.peek() == Some('{');
                if braced {
                    self.pos += 1;
                }
                let start = self.pos;
                let limit = if braced { 6 } else { 4 };
                while self.pos - start < limit && self.peek().is_some_and(|c| c.is_ascii_hexdigit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                if digits.is_empty() || (!braced && digits.len() != 4) {
                    return Err(self.err_at(at, "expected \\uXXXX or \\u{X...}"));
                }
                if braced && self.bump() != Some('}') {
                    return Err(self.err_at(at, "expected `}` closing \\u{...}"));
                }
                let code = u32::from_str_radix(&digits, 16).expect("hex digits");
                if char::from_u32(code).is_none() {
                    return Err(self.err_at(at, format!("U+{code:04X} is not a Unicode scalar value")));
                }
                code
            }
            c if c.is_ascii_punctuation() || c == ' ' => c as u32,
            c => return Err(self.err_at(at, format!("unknown escape `\\{c}`"))),
        };
        Ok(Symbol(code))
    }

    fn class_symbol(&mut self, start: usize) -> Result<Symbol> {
        let at = self.pos;
        match self.bump() {
            None => Err(self.err_at(start, "unterminated character class")),
            Some('\\') => self.escape(at),
            Some(c) => Ok(Symbol::from(c)),
        }
    }

    /// After `[`.
    fn class(&mut self, alphabet: Alphabet) -> Result<Regex> {
        let start = self.pos - 1;
        let negated = self.peek() == Some('^');
        if negated {
            self.pos += 1;
        }
        let mut set = BorderFunction::empty(alphabet);
        let located = |p: &Self, at: usize, e: Error| p.err_at(at, e.to_string());
        loop {
            if self.peek() == Some(']') {
                self.pos += 1;
                break;
            }
            let at = self.pos;
            let low = self.class_symbol(start)?;
            let high = if self.peek() == Some('-') && self.chars.get(self.pos + 1).is_some_and(|&c| c != ']') {
                self.pos += 1;
                self.class_symbol(start)?
            } else {
                low
            };
            if low > high {
                return Err(self.err_at(at, format!("empty range {low}-{high}")));
            }
            let range = BorderFunction::range(alphabet, low, high).map_err(|e| located(self, at, e))?;
            set = set.or(&range)?;
        }
        if negated {
            set = set.not();
        }
        Ok(Regex::Set(set))
    }
}
