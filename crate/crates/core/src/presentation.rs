//! Finite group presentations and their text format.
//!
//! ```text
//! presentation := '<' gen_list '|' rel_list '>'
//! gen_list     := ε | name (',' name)*
//! rel_list     := ε | word (',' word)*
//! word         := '1' | term+
//! term         := name ('^' int)?
//! ```
//!
//! Names match `[A-Za-z][A-Za-z0-9_]*`, exponents are nonzero signed
//! decimals, `#` starts a comment that runs to the end of the line.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::{free_reduce, render_letters, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    /// The empty presentation `< | >`.
    pub fn empty() -> Self {
        Presentation {
            names: Vec::new(),
            relators: Vec::new(),
        }
    }

    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        check_names(&names)?;
        for r in &relators {
            check_range(r.letters(), names.len())?;
        }
        Ok(Presentation { names, relators })
    }

    /// Presentation with generators `prefix1 … prefixN`.
    pub fn with_numbered_generators(prefix: &str, relators: Vec<Word>, n_gens: usize) -> Result<Self> {
        Presentation::new(numbered_names(prefix, n_gens), relators)
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn relator(&self, i: usize) -> Result<&Word> {
        self.relators.get(i).ok_or(Error::RelatorOutOfRange {
            index: i + 1,
            count: self.relators.len(),
        })
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn is_balanced(&self) -> bool {
        self.names.len() == self.relators.len()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn render_word(&self, w: &Word) -> String {
        render_letters(w.letters(), &self.names)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let raw = Parser::new(text).standalone_word(&self.names)?;
        Ok(free_reduce(&raw))
    }

    pub(crate) fn relators_mut(&mut self) -> &mut Vec<Word> {
        &mut self.relators
    }

    pub(crate) fn names_mut(&mut self) -> &mut Vec<String> {
        &mut self.names
    }

    /// Permutes generators (`perm[old] = new`) and relators. Used to check
    /// that invariants do not depend on declaration order.
    pub fn reorder(&self, gen_perm: &[usize], rel_perm: &[usize]) -> Presentation {
        let mut names = vec![String::new(); self.names.len()];
        for (old, &new) in gen_perm.iter().enumerate() {
            names[new] = self.names[old].clone();
        }
        let mut relators = vec![Word::empty(); self.relators.len()];
        for (old, &new) in rel_perm.iter().enumerate() {
            relators[new] = self.relators[old].map_generators(|g| gen_perm[g]);
        }
        Presentation { names, relators }
    }
}

impl FromStr for Presentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (names, raw) = Parser::new(s).presentation()?;
        Ok(Presentation {
            names,
            relators: raw.iter().map(|r| free_reduce(r)).collect(),
        })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<&[Letter]> = self.relators.iter().map(|r| r.letters()).collect();
        write_presentation(f, &self.names, &rels)
    }
}

/// A presentation whose relators are kept exactly as written, cancelling
/// pairs included.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RawPresentation {
    names: Vec<String>,
    relators: Vec<Vec<Letter>>,
}

impl RawPresentation {
    pub fn new(names: Vec<String>, relators: Vec<Vec<Letter>>) -> Result<Self> {
        check_names(&names)?;
        for r in &relators {
            check_range(r, names.len())?;
        }
        Ok(RawPresentation { names, relators })
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[Vec<Letter>] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn is_balanced(&self) -> bool {
        self.names.len() == self.relators.len()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// Freely reduces every relator.
    pub fn reduced(&self) -> Presentation {
        Presentation {
            names: self.names.clone(),
            relators: self.relators.iter().map(|r| free_reduce(r)).collect(),
        }
    }

    pub(crate) fn relators_mut(&mut self) -> &mut Vec<Vec<Letter>> {
        &mut self.relators
    }
}

impl From<&Presentation> for RawPresentation {
    fn from(p: &Presentation) -> Self {
        RawPresentation {
            names: p.names.clone(),
            relators: p.relators.iter().map(|r| r.letters().to_vec()).collect(),
        }
    }
}

impl FromStr for RawPresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (names, relators) = Parser::new(s).presentation()?;
        Ok(RawPresentation { names, relators })
    }
}

impl fmt::Display for RawPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<&[Letter]> = self.relators.iter().map(Vec::as_slice).collect();
        write_presentation(f, &self.names, &rels)
    }
}

fn write_presentation(f: &mut fmt::Formatter<'_>, names: &[String], rels: &[&[Letter]]) -> fmt::Result {
    f.write_str("<")?;
    if !names.is_empty() {
        write!(f, " {}", names.join(", "))?;
    }
    f.write_str(" |")?;
    if !rels.is_empty() {
        let words: Vec<String> = rels.iter().map(|r| render_letters(r, names)).collect();
        write!(f, " {}", words.join(", "))?;
    }
    f.write_str(" >")
}

/// `prefix1 … prefixn`.
pub fn numbered_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_names(names: &[String]) -> Result<()> {
    let mut seen = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if !is_identifier(n) {
            return Err(Error::Syntax {
                line: 0,
                column: 0,
                message: format!("`{n}` is not a valid generator name"),
            });
        }
        if seen.insert(n.as_str(), i).is_some() {
            return Err(Error::DuplicateGenerator(n.clone()));
        }
    }
    Ok(())
}

fn check_range(letters: &[Letter], count: usize) -> Result<()> {
    match letters.iter().find(|l| l.gen() >= count) {
        Some(l) => Err(Error::GeneratorOutOfRange {
            index: l.gen() + 1,
            count,
        }),
        None => Ok(()),
    }
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_trivia();
        self.chars.peek().copied()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.error(format!("expected `{want}`, found `{c}`")),
            None => self.error(format!("expected `{want}`, found end of input")),
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => return self.error(format!("expected a generator name, found `{c}`")),
            None => return self.error("expected a generator name, found end of input"),
        }
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(s)
    }

    fn exponent(&mut self) -> Result<i64> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let mut s = String::new();
        if let Some(&c) = self.chars.peek() {
            if c == '-' || c == '+' {
                s.push(c);
                self.bump();
            }
        }
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        let at = |message: String| Error::Syntax {
            line,
            column,
            message,
        };
        let k: i64 = s
            .parse()
            .map_err(|_| at(format!("expected a nonzero integer exponent, found `{s}`")))?;
        if k == 0 {
            return Err(at("zero exponent".to_string()));
        }
        Ok(k)
    }

    fn word(&mut self, index: &HashMap<&str, usize>) -> Result<Vec<Letter>> {
        if self.peek() == Some('1') {
            self.bump();
            return Ok(Vec::new());
        }
        let mut letters = Vec::new();
        loop {
            let name = self.name()?;
            let gen = *index
                .get(name.as_str())
                .ok_or_else(|| Error::UndeclaredGenerator(name.clone()))?;
            let exp = if self.peek() == Some('^') {
                self.bump();
                self.exponent()?
            } else {
                1
            };
            let l = Letter::new(gen, exp < 0);
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() => continue,
                _ => return Ok(letters),
            }
        }
    }

    fn presentation(&mut self) -> Result<(Vec<String>, Vec<Vec<Letter>>)> {
        self.expect('<')?;
        let mut names = Vec::new();
        if self.peek() != Some('|') {
            loop {
                let n = self.name()?;
                if names.contains(&n) {
                    return Err(Error::DuplicateGenerator(n));
                }
                names.push(n);
                match self.peek() {
                    Some(',') => {
                        self.bump();
                    }
                    _ => break,
                }
            }
        }
        self.expect('|')?;
        let index: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut relators = Vec::new();
        if self.peek() != Some('>') {
            loop {
                relators.push(self.word(&index)?);
                match self.peek() {
                    Some(',') => {
                        self.bump();
                    }
                    _ => break,
                }
            }
        }
        self.expect('>')?;
        if let Some(c) = self.peek() {
            return self.error(format!("unexpected `{c}` after presentation"));
        }
        Ok((names, relators))
    }

    fn standalone_word(&mut self, names: &[String]) -> Result<Vec<Letter>> {
        let index: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let w = self.word(&index)?;
        if let Some(c) = self.peek() {
            return self.error(format!("unexpected `{c}` after word"));
        }
        Ok(w)
    }
}
