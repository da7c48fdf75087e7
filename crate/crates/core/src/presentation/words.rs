//! Word syntax over named generators.
//!
//! ```text
//! relation := product ('=' product)?
//! product  := (factor ('*')?)*          -- juxtaposition or '*'; empty means identity
//! factor   := primary ('^' '-'? integer)?
//! primary  := name | NAME | '1' | '(' product ')' | '[' product ',' product ']'
//! ```
//!
//! A token that is not a declared name but becomes one after swapping the case of its
//! first character denotes the inverse (`A` is `a^-1`, `E1` is `e1^-1`).
//! `u = v` denotes `u v^-1`; `[u, v]` is `u v u^-1 v^-1`.

use thiserror::Error;

use crate::freegroup::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown generator '{name}' at offset {offset}")]
    UnknownGenerator { name: String, offset: usize },
    #[error("malformed word at offset {offset}: {message}")]
    Malformed { message: String, offset: usize },
}

impl WordError {
    pub fn offset(&self) -> usize {
        match self {
            WordError::UnknownGenerator { offset, .. } | WordError::Malformed { offset, .. } => *offset,
        }
    }

    fn malformed<T>(message: impl Into<String>, offset: usize) -> Result<T, WordError> {
        Err(WordError::Malformed { message: message.into(), offset })
    }
}

pub fn parse_word(text: &str, names: &[String]) -> Result<Word, WordError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, names };
    let lhs = p.product()?;
    let w = if p.peek() == Some(b'=') {
        p.pos += 1;
        let rhs = p.product()?;
        lhs.mul(&rhs.inverse())
    } else {
        lhs
    };
    match p.peek() {
        None => Ok(w),
        Some(c) => WordError::malformed(format!("unexpected '{}'", c as char), p.pos),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn product(&mut self) -> Result<Word, WordError> {
        let mut acc = Word::identity();
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    if !matches!(self.peek(), Some(c) if starts_primary(c)) {
                        return WordError::malformed("expected a factor after '*'", self.pos);
                    }
                }
                Some(c) if starts_primary(c) => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Word, WordError> {
        let base = self.primary()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let k: i64 = match digits.parse() {
            Ok(k) if k <= 10_000 => k,
            Ok(_) => return WordError::malformed("exponent too large", start),
            Err(_) => return WordError::malformed("expected an integer exponent", start),
        };
        Ok(base.pow(if negative { -k } else { k }))
    }

    fn primary(&mut self) -> Result<Word, WordError> {
        let c = self.peek().expect("caller checked");
        match c {
            b'(' => {
                self.pos += 1;
                let w = self.product()?;
                self.expect(b')')?;
                Ok(w)
            }
            b'[' => {
                self.pos += 1;
                let u = self.product()?;
                self.expect(b',')?;
                let v = self.product()?;
                self.expect(b']')?;
                Ok(Word::commutator(&u, &v))
            }
            b'1' => {
                self.pos += 1;
                Ok(Word::identity())
            }
            _ => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let token = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                self.resolve(token, start)
            }
        }
    }

    fn resolve(&self, token: &str, offset: usize) -> Result<Word, WordError> {
        if let Some(i) = self.names.iter().position(|n| n == token) {
            return Ok(Word::generator(i));
        }
        let swapped = swap_first_case(token);
        if let Some(i) = self.names.iter().position(|n| *n == swapped) {
            return Ok(Word::generator(i).inverse());
        }
        Err(WordError::UnknownGenerator { name: token.to_string(), offset })
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            WordError::malformed(format!("expected '{}'", c as char), self.pos)
        }
    }
}

fn starts_primary(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'(' || c == b'[' || c == b'1'
}

fn swap_first_case(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => c.to_ascii_lowercase().to_string() + chars.as_str(),
        Some(c) => c.to_ascii_uppercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}
