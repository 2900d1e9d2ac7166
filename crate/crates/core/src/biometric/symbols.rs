use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("duplicate symbol name {0:?}")]
    Duplicate(String),
    #[error("a symbol set needs at least 2 symbols")]
    TooSmall,
    #[error("unknown symbol set {0:?}")]
    UnknownPreset(String),
}

/// Public mapping from responses `0..d` to the symbols users render.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolSet {
    pub name: String,
    pub symbols: Vec<String>,
}

impl SymbolSet {
    pub fn new(name: impl Into<String>, symbols: Vec<String>) -> Result<Self, SymbolError> {
        if symbols.len() < 2 {
            return Err(SymbolError::TooSmall);
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(SymbolError::Duplicate(s.clone()));
            }
        }
        Ok(Self { name: name.into(), symbols })
    }

    fn preset(name: &str, words: [&str; 5]) -> Self {
        Self { name: name.to_owned(), symbols: words.iter().map(|w| w.to_string()).collect() }
    }

    pub fn easy_words() -> Self {
        Self::preset("easy-words", ["zero", "one", "two", "three", "four"])
    }

    /// Words mixing letters with varied strokes; the recommended set.
    pub fn complex_words() -> Self {
        Self::preset("complex-words", ["xman", "bmwz", "quak", "hurt", "fogy"])
    }

    /// `sym0, sym1, ...` for moduli without a named preset.
    pub fn numbered(d: u32) -> Self {
        Self { name: format!("numbered-{d}"), symbols: (0..d).map(|i| format!("sym{i}")).collect() }
    }

    pub fn by_name(name: &str) -> Result<Self, SymbolError> {
        match name {
            "easy-words" => Ok(Self::easy_words()),
            "complex-words" => Ok(Self::complex_words()),
            _ => Err(SymbolError::UnknownPreset(name.to_owned())),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, response: u32) -> Option<&str> {
        self.symbols.get(response as usize).map(String::as_str)
    }

    pub fn response(&self, symbol: &str) -> Option<u32> {
        self.symbols.iter().position(|s| s == symbol).map(|i| i as u32)
    }
}
