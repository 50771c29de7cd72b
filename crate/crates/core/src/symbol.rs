use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A symbol of an alphabet, stored as an index into the owning [`Alphabet`].
///
/// Alphabets of splicing witnesses can be exponentially large in the witness
/// parameter, so symbols are interned once and passed around as plain indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered set of interned symbol tokens.
///
/// Token order is significant: it fixes transition-table order in
/// serializations and the lexicographic order used by word enumeration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    tokens: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tokens<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut alphabet = Alphabet::new();
        for token in tokens {
            let token = token.into();
            if token.is_empty() {
                return Err(Error::InvalidSystem("empty alphabet token".into()));
            }
            if alphabet.index.contains_key(&token) {
                return Err(Error::InvalidSystem(format!(
                    "duplicate alphabet token `{token}`"
                )));
            }
            alphabet.intern(&token);
        }
        Ok(alphabet)
    }

    /// Interns `token`, returning the existing symbol if already present.
    pub fn intern(&mut self, token: &str) -> Symbol {
        if let Some(&sym) = self.index.get(token) {
            return sym;
        }
        let sym = Symbol(self.tokens.len() as u32);
        self.tokens.push(token.to_owned());
        self.index.insert(token.to_owned(), sym);
        sym
    }

    pub fn symbol(&self, token: &str) -> Result<Symbol> {
        self.index
            .get(token)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(token.to_owned()))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn token(&self, sym: Symbol) -> &str {
        &self.tokens[sym.index()]
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.tokens.len() as u32).map(Symbol)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Parses a whitespace-separated word, e.g. `"a b a_{2,3}"`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Symbol>> {
        text.split_whitespace().map(|t| self.symbol(t)).collect()
    }

    /// Renders a word for display; the empty word prints as `ε`.
    pub fn format_word(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            return "ε".to_owned();
        }
        let single = word.iter().all(|s| self.token(*s).chars().count() == 1);
        let sep = if single { "" } else { " " };
        word.iter()
            .map(|s| self.token(*s))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tokens.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let mut a = Alphabet::new();
        let s1 = a.intern("a");
        let s2 = a.intern("a_{2,5}");
        assert_eq!(a.intern("a"), s1);
        assert_eq!(a.token(s2), "a_{2,5}");
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn unknown_symbol_is_an_error() {
        let a = Alphabet::from_tokens(["a", "b"]).unwrap();
        assert!(a.symbol("z").is_err());
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(Alphabet::from_tokens(["a", "a"]).is_err());
        assert!(Alphabet::from_tokens([""]).is_err());
    }
}
