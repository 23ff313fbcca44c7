use std::collections::HashSet;

use crate::error::{Error, Result};

/// Input alphabet Σ and stack alphabet Γ of a pushdown automaton.
///
/// Symbols are referred to by their index everywhere else in the crate; the
/// names only matter for parsing and printing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabets {
    sigma: Vec<String>,
    gamma: Vec<String>,
}

impl Alphabets {
    pub fn new<S, G>(sigma: S, gamma: G) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        G: IntoIterator,
        G::Item: Into<String>,
    {
        let sigma: Vec<String> = sigma.into_iter().map(Into::into).collect();
        let gamma: Vec<String> = gamma.into_iter().map(Into::into).collect();
        if sigma.is_empty() || gamma.is_empty() {
            return Err(Error::InvalidAlphabets(
                "both alphabets must be non-empty".into(),
            ));
        }
        let mut seen = HashSet::new();
        for sym in sigma.iter().chain(gamma.iter()) {
            if sym.is_empty() {
                return Err(Error::InvalidAlphabets("empty symbol name".into()));
            }
            if !seen.insert(sym.as_str()) {
                return Err(Error::InvalidAlphabets(format!(
                    "symbol '{sym}' is duplicated or shared between the alphabets"
                )));
            }
        }
        Ok(Self { sigma, gamma })
    }

    /// Default symbol names: inputs `a, b, c, ...` and stack symbols
    /// `Z, X, Y, W, ...` (so the first stack symbol is `Z`).
    pub fn generic(alpha: usize, beta: usize) -> Result<Self> {
        if alpha == 0 || beta == 0 {
            return Err(Error::InvalidAlphabets(
                "both alphabets must be non-empty".into(),
            ));
        }
        let sigma = (0..alpha).map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("a{i}")
            }
        });
        let gamma = (0..beta).map(|i| match i {
            0 => "Z".to_string(),
            1..=23 => char::from(b'Y' - (i as u8 - 1)).to_string(),
            _ => format!("Z{i}"),
        });
        Self::new(sigma, gamma)
    }

    pub fn sigma(&self) -> &[String] {
        &self.sigma
    }

    pub fn gamma(&self) -> &[String] {
        &self.gamma
    }

    /// α, the number of input symbols.
    pub fn alpha(&self) -> usize {
        self.sigma.len()
    }

    /// β, the number of stack symbols.
    pub fn beta(&self) -> usize {
        self.gamma.len()
    }

    /// ρ = α·β, the size of the product alphabet Σ×Γ.
    pub fn rho(&self) -> usize {
        self.alpha() * self.beta()
    }

    pub fn input_index(&self, symbol: &str) -> Result<usize> {
        self.sigma
            .iter()
            .position(|s| s == symbol)
            .ok_or_else(|| Error::UnknownSymbol {
                kind: "input",
                symbol: symbol.to_string(),
            })
    }

    pub fn stack_index(&self, symbol: &str) -> Result<usize> {
        self.gamma
            .iter()
            .position(|s| s == symbol)
            .ok_or_else(|| Error::UnknownSymbol {
                kind: "stack",
                symbol: symbol.to_string(),
            })
    }

    /// Index of `(input, top)` in the product alphabet, ordered
    /// lexicographically by (input index, stack index).
    #[inline]
    pub fn product_index(&self, input: usize, top: usize) -> usize {
        input * self.beta() + top
    }

    /// Inverse of [`Alphabets::product_index`].
    #[inline]
    pub fn split_product(&self, letter: usize) -> (usize, usize) {
        (letter / self.beta(), letter % self.beta())
    }

    /// Parses a word over Σ. When every input symbol is a single character
    /// the word may be written without separators (`"aab"`), otherwise
    /// symbols are separated by whitespace.
    pub fn parse_input_word(&self, word: &str) -> Result<Vec<usize>> {
        let word = word.trim();
        if word.contains(char::is_whitespace) || !self.sigma.iter().all(|s| s.chars().count() == 1)
        {
            word.split_whitespace().map(|s| self.input_index(s)).collect()
        } else {
            word.chars()
                .map(|c| self.input_index(c.encode_utf8(&mut [0; 4])))
                .collect()
        }
    }

    /// Parses a stack word written top-at-right, using the same separator
    /// rules as [`Alphabets::parse_input_word`].
    pub fn parse_stack_word(&self, word: &str) -> Result<Vec<usize>> {
        let word = word.trim();
        if word.contains(char::is_whitespace) || !self.gamma.iter().all(|s| s.chars().count() == 1)
        {
            word.split_whitespace().map(|s| self.stack_index(s)).collect()
        } else {
            word.chars()
                .map(|c| self.stack_index(c.encode_utf8(&mut [0; 4])))
                .collect()
        }
    }

    pub fn format_stack_word(&self, word: &[usize]) -> String {
        let sep = if self.gamma.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            " "
        };
        word.iter()
            .map(|&x| self.gamma[x].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }
}
