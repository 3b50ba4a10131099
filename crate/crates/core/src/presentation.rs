//! Finite homogeneous monoid presentations: parsing, serialization and the
//! built-in fixture monoids.
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment
//! name: M1
//! gens: a b
//! rels: aa=bb; ab=ba
//! ```
//!
//! Words are juxtapositions of generator symbols with optional whitespace.
//! A chain `u=v=w` is stored as the pairwise relations `u=v` and `v=w`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator symbol. Declaration order is the letter order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub symbol: String,
}

/// A word over the generators, stored as letter indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: u8) -> Self {
        Word(vec![g])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, g: u8) {
        self.0.push(g);
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n..].to_vec())
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

/// A defining relation `lhs = rhs` of equal, positive length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

/// A letter of a group word: a generator or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedLetter {
    pub generator: u8,
    pub inverse: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SignedWord(pub Vec<SignedLetter>);

impl SignedWord {
    pub fn positive(w: &Word) -> Self {
        SignedWord(
            w.letters()
                .iter()
                .map(|&g| SignedLetter {
                    generator: g,
                    inverse: false,
                })
                .collect(),
        )
    }

    /// The formal inverse: letters reversed with signs flipped.
    pub fn inverse(&self) -> Self {
        SignedWord(
            self.0
                .iter()
                .rev()
                .map(|l| SignedLetter {
                    generator: l.generator,
                    inverse: !l.inverse,
                })
                .collect(),
        )
    }

    pub fn concat(&self, other: &SignedWord) -> SignedWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SignedWord(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A finite monoid presentation `<S; R>+` with homogeneous relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<Generator>,
    relations: Vec<Relation>,
    name: Option<String>,
}

impl Presentation {
    /// Builds a presentation from symbols and relations given as symbol
    /// strings, validating everything the parser validates.
    pub fn new(
        name: Option<&str>,
        symbols: &[&str],
        relations: &[(&str, &str)],
    ) -> Result<Self> {
        let mut p = Presentation {
            generators: Vec::new(),
            relations: Vec::new(),
            name: name.map(str::to_string),
        };
        for s in symbols {
            p.declare(s, 1, 1)?;
        }
        for (l, r) in relations {
            let lhs = p.parse_word(l)?;
            let rhs = p.parse_word(r)?;
            p.add_relation(lhs, rhs, &format!("{l}={r}"))?;
        }
        Ok(p)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn max_relation_length(&self) -> usize {
        self.relations.iter().map(|r| r.lhs.len()).max().unwrap_or(0)
    }

    fn declare(&mut self, symbol: &str, line: usize, column: usize) -> Result<()> {
        if !valid_symbol(symbol) {
            return Err(Error::Syntax {
                line,
                column,
                message: format!("invalid generator symbol `{symbol}`"),
            });
        }
        if self.generators.iter().any(|g| g.symbol == symbol) {
            return Err(Error::DuplicateGenerator(symbol.to_string()));
        }
        if self.generators.len() >= u8::MAX as usize {
            return Err(Error::Syntax {
                line,
                column,
                message: "too many generators".into(),
            });
        }
        self.generators.push(Generator {
            symbol: symbol.to_string(),
        });
        Ok(())
    }

    fn add_relation(&mut self, lhs: Word, rhs: Word, text: &str) -> Result<()> {
        if lhs.len() != rhs.len() || lhs.is_empty() {
            return Err(Error::NonHomogeneous {
                relation: text.trim().to_string(),
                lhs_len: lhs.len(),
                rhs_len: rhs.len(),
            });
        }
        if lhs == rhs {
            return Err(Error::Precondition(format!(
                "trivial relation `{}`",
                text.trim()
            )));
        }
        self.relations.push(Relation { lhs, rhs });
        Ok(())
    }

    /// Tokenizes a juxtaposition of generator symbols (longest match).
    /// The token `1` alone denotes the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let t = text.trim();
        if t == "1" || t.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            match self.match_symbol(rest) {
                Some((g, len)) => {
                    letters.push(g);
                    rest = &rest[len..];
                }
                None => return Err(Error::UndeclaredGenerator(t.to_string())),
            }
        }
        Ok(Word(letters))
    }

    /// Parses a group word: generator symbols, each optionally followed by
    /// `^-1` or `⁻¹`.
    pub fn parse_signed_word(&self, text: &str) -> Result<SignedWord> {
        let t = text.trim();
        if t == "1" || t.is_empty() {
            return Ok(SignedWord::default());
        }
        let mut out = Vec::new();
        let mut rest = t;
        loop {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            let (g, len) = self
                .match_symbol(rest)
                .ok_or_else(|| Error::UndeclaredGenerator(t.to_string()))?;
            rest = &rest[len..];
            let mut inverse = false;
            if let Some(r) = rest.strip_prefix("^-1") {
                inverse = true;
                rest = r;
            } else if let Some(r) = rest.strip_prefix("⁻¹") {
                inverse = true;
                rest = r;
            }
            out.push(SignedLetter {
                generator: g,
                inverse,
            });
        }
        Ok(SignedWord(out))
    }

    fn match_symbol(&self, text: &str) -> Option<(u8, usize)> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, g)| text.starts_with(g.symbol.as_str()))
            .max_by_key(|(_, g)| g.symbol.len())
            .map(|(i, g)| (i as u8, g.symbol.len()))
    }

    fn single_char_symbols(&self) -> bool {
        self.generators.iter().all(|g| g.symbol.chars().count() == 1)
    }

    /// Renders a word; the empty word renders as `1`.
    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let syms = w
            .letters()
            .iter()
            .map(|&g| self.generators[g as usize].symbol.as_str());
        if self.single_char_symbols() {
            syms.collect()
        } else {
            syms.collect::<Vec<_>>().join(" ")
        }
    }

    pub fn render_signed(&self, w: &SignedWord) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let sep = if self.single_char_symbols() { "" } else { " " };
        w.0.iter()
            .map(|l| {
                let s = &self.generators[l.generator as usize].symbol;
                if l.inverse {
                    format!("{s}^-1")
                } else {
                    s.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Serializes to the text format accepted by [`parse_presentation`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!("name: {n}\n"));
        }
        let gens: Vec<&str> = self.generators.iter().map(|g| g.symbol.as_str()).collect();
        out.push_str(&format!("gens: {}\n", gens.join(" ")));
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| format!("{}={}", self.render(&r.lhs), self.render(&r.rhs)))
            .collect();
        out.push_str(&format!("rels: {}\n", rels.join("; ")));
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<&str> = self.generators.iter().map(|g| g.symbol.as_str()).collect();
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| format!("{}={}", self.render(&r.lhs), self.render(&r.rhs)))
            .collect();
        write!(f, "<{}; {}>+", gens.join(", "), rels.join(", "))
    }
}

fn valid_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses the presentation text format.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut p = Presentation {
        generators: Vec::new(),
        relations: Vec::new(),
        name: None,
    };
    let mut seen_gens = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let Some(colon) = line.find(':') else {
            return Err(Error::Syntax {
                line: line_no,
                column: line.len() - line.trim_start().len() + 1,
                message: "expected `gens:`, `rels:` or `name:`".into(),
            });
        };
        let key = line[..colon].trim();
        let body = &line[colon + 1..];
        let body_col = colon + 2;
        match key {
            "name" => p.name = Some(body.trim().to_string()),
            "gens" => {
                if seen_gens {
                    return Err(Error::Syntax {
                        line: line_no,
                        column: 1,
                        message: "`gens:` declared twice".into(),
                    });
                }
                seen_gens = true;
                let mut offset = 0;
                for tok in body.split_whitespace() {
                    let col = body[offset..].find(tok).map(|i| i + offset).unwrap_or(0);
                    offset = col + tok.len();
                    p.declare(tok, line_no, body_col + col)?;
                }
            }
            "rels" => {
                if !seen_gens {
                    return Err(Error::Syntax {
                        line: line_no,
                        column: 1,
                        message: "`rels:` before `gens:`".into(),
                    });
                }
                let mut offset = 0;
                for chunk in body.split(';') {
                    let col = body_col + offset;
                    offset += chunk.len() + 1;
                    if chunk.trim().is_empty() {
                        continue;
                    }
                    let sides: Vec<&str> = chunk.split('=').collect();
                    if sides.len() < 2 {
                        return Err(Error::Syntax {
                            line: line_no,
                            column: col + chunk.len() - chunk.trim_start().len(),
                            message: format!("expected `=` in relation `{}`", chunk.trim()),
                        });
                    }
                    let words = sides
                        .iter()
                        .map(|s| {
                            if s.trim().is_empty() {
                                Err(Error::Syntax {
                                    line: line_no,
                                    column: col,
                                    message: format!("empty side in relation `{}`", chunk.trim()),
                                })
                            } else {
                                p.parse_word(s)
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    for pair in words.windows(2) {
                        p.add_relation(pair[0].clone(), pair[1].clone(), chunk)?;
                    }
                }
            }
            other => {
                return Err(Error::Syntax {
                    line: line_no,
                    column: 1,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    if !seen_gens {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "missing `gens:` line".into(),
        });
    }
    Ok(p)
}

fn letter_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// The named example monoids: `M1`, `M2`, `M3`, `B3`, `free(n)`,
/// `free_comm(n)`.
pub fn fixture(name: &str) -> Result<Presentation> {
    let key = name.trim();
    let lower = key.to_ascii_lowercase();
    let arg = |prefix: &str| -> Option<usize> {
        lower
            .strip_prefix(prefix)?
            .strip_prefix('(')?
            .strip_suffix(')')?
            .trim()
            .parse()
            .ok()
    };
    match lower.as_str() {
        "m1" => Presentation::new(Some("M1"), &["a", "b"], &[("aa", "bb"), ("ab", "ba")]),
        "m2" => Presentation::new(
            Some("M2"),
            &["a", "b", "c"],
            &[
                ("aa", "bb"),
                ("bb", "cc"),
                ("ab", "bc"),
                ("bc", "ca"),
                ("ac", "ba"),
                ("ba", "cb"),
            ],
        ),
        "m3" => Presentation::new(
            Some("M3"),
            &["a", "b", "c"],
            &[("ac", "ca"), ("ca", "bb"), ("ab", "bc"), ("cb", "ba")],
        ),
        "b3" => Presentation::new(Some("B3"), &["s1", "s2"], &[("s1s2s1", "s2s1s2")]),
        _ => {
            if let Some(n) = arg("free_comm") {
                let names = letter_names(n);
                let syms: Vec<&str> = names.iter().map(String::as_str).collect();
                let mut rels = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        rels.push((
                            format!("{}{}", names[i], names[j]),
                            format!("{}{}", names[j], names[i]),
                        ));
                    }
                }
                let rels: Vec<(&str, &str)> =
                    rels.iter().map(|(l, r)| (l.as_str(), r.as_str())).collect();
                // multi-character names need a separator to stay unambiguous
                if n > 26 {
                    let spaced: Vec<(String, String)> = (0..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .map(|(i, j)| {
                            (
                                format!("{} {}", names[i], names[j]),
                                format!("{} {}", names[j], names[i]),
                            )
                        })
                        .collect();
                    let spaced: Vec<(&str, &str)> =
                        spaced.iter().map(|(l, r)| (l.as_str(), r.as_str())).collect();
                    return Presentation::new(Some(&format!("free_comm({n})")), &syms, &spaced);
                }
                Presentation::new(Some(&format!("free_comm({n})")), &syms, &rels)
            } else if let Some(n) = arg("free") {
                let names = letter_names(n);
                let syms: Vec<&str> = names.iter().map(String::as_str).collect();
                Presentation::new(Some(&format!("free({n})")), &syms, &[])
            } else {
                Err(Error::UnknownFixture(name.to_string()))
            }
        }
    }
}
