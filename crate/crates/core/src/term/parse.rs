use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Expr, Generator, Monomial, DEFAULT_MAX_DER_ORDER};
use crate::error::TermError;
use crate::Rational;

/// Byte cursor shared by the term and di-term parsers.
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn error(&self, message: impl Into<String>) -> TermError {
        TermError::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), TermError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub fn digits(&mut self) -> Result<&'a str, TermError> {
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("expected digits"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn small_number(&mut self, what: &str) -> Result<u32, TermError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse::<u32>().map_err(|_| TermError::Syntax {
            pos: start,
            message: format!("{what} out of range"),
        })
    }

    /// `'x' digits`, returning the variable index.
    pub fn variable_index(&mut self) -> Result<u32, TermError> {
        self.expect('x')?;
        let start = self.pos;
        let var = self.small_number("variable index")?;
        if var == 0 {
            return Err(TermError::Syntax {
                pos: start,
                message: "variable indices start at 1".into(),
            });
        }
        Ok(var)
    }

    /// `var := 'x' digits ( '\''* | '^(' digits ')' )`.
    pub fn generator(&mut self) -> Result<Generator, TermError> {
        let var = self.variable_index()?;
        let start = self.pos;
        let der = if self.eat('^') {
            self.expect('(')?;
            let k = self.small_number("derivation order")?;
            self.expect(')')?;
            k
        } else {
            let mut k = 0;
            while self.eat('\'') {
                k += 1;
            }
            k
        };
        if der > DEFAULT_MAX_DER_ORDER {
            return Err(TermError::Syntax {
                pos: start,
                message: format!("derivation order {der} exceeds {DEFAULT_MAX_DER_ORDER}"),
            });
        }
        Ok(Generator::new(var, der))
    }

    /// Optional `rational '*'` prefix; `None` for a bare literal `0`.
    pub fn coefficient(&mut self) -> Result<Option<Rational>, TermError> {
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Ok(Some(Rational::one()));
        }
        let num: BigInt = self.digits()?.parse().expect("ascii digits");
        let den: BigInt = if self.eat('/') {
            let start = self.pos;
            let d: BigInt = self.digits()?.parse().expect("ascii digits");
            if d.is_zero() {
                return Err(TermError::Syntax {
                    pos: start,
                    message: "zero denominator".into(),
                });
            }
            d
        } else {
            BigInt::one()
        };
        self.skip_ws();
        // A bare number is only meaningful as the literal zero.
        if !self.eat('*') {
            if num.is_zero() {
                return Ok(None);
            }
            return Err(self.error("expected '*' after coefficient"));
        }
        self.skip_ws();
        Ok(Some(Rational::new(num, den)))
    }

    /// `expr := term (('+'|'-') term)*` with a caller-provided monomial parser.
    pub fn linear<T>(
        &mut self,
        mut mono: impl FnMut(&mut Self) -> Result<T, TermError>,
        mut push: impl FnMut(T, Rational),
    ) -> Result<(), TermError> {
        self.skip_ws();
        let mut negative = false;
        if self.eat('-') {
            negative = true;
        } else {
            self.eat('+');
        }
        loop {
            self.skip_ws();
            if let Some(c) = self.coefficient()? {
                let m = mono(self)?;
                push(m, if negative { -c } else { c });
            }
            self.skip_ws();
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        self.skip_ws();
        if !self.at_end() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(())
    }
}

fn monomial(cur: &mut Cursor<'_>) -> Result<Monomial, TermError> {
    cur.skip_ws();
    match cur.peek() {
        Some('(') => {
            cur.bump();
            let left = monomial(cur)?;
            cur.skip_ws();
            let right = monomial(cur)?;
            cur.skip_ws();
            cur.expect(')')?;
            Ok(Monomial::mul(left, right))
        }
        Some('x') => Ok(Monomial::leaf(cur.generator()?)),
        Some(_) => Err(cur.error("expected '(' or a variable")),
        None => Err(cur.error("unexpected end of input")),
    }
}

/// Parse the textual form of an [`Expr`].
pub fn parse_term(s: &str) -> Result<Expr, TermError> {
    let mut cur = Cursor::new(s);
    let mut e = Expr::zero();
    cur.linear(monomial, |m, c| e.add_term(m, c))?;
    Ok(e)
}
