//! The element literal grammar used by the CLI and lattice files:
//! signed rationals, `pi`, `sqrt(d)`, `Delta`, and `+ - * / ^` with integer
//! exponents (e.g. `2+sqrt(2)`, `-1/2`, `Delta*pi^-1`). `^` binds tightest,
//! then `* /`, then `+ -`; unary minus applies to a whole power factor.

use super::elem::{Elem, FieldKind};
use super::field::Field;

#[derive(Debug, thiserror::Error)]
#[error("parse error: {0}")]
pub struct ParseError(pub String);

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Op(char),
    End,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Lexer<'a> {
        Lexer { s: s.as_bytes(), pos: 0 }
    }

    fn peek(&mut self) -> Result<Tok, ParseError> {
        let save = self.pos;
        let t = self.next()?;
        self.pos = save;
        Ok(t)
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.s.len() {
            return Ok(Tok::End);
        }
        let c = self.s[self.pos];
        match c {
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                text.parse::<i64>()
                    .map(Tok::Int)
                    .map_err(|_| ParseError(format!("integer out of range: {text}")))
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                Ok(Tok::Ident(
                    std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string(),
                ))
            }
            b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' => {
                self.pos += 1;
                Ok(Tok::Op(c as char))
            }
            _ => Err(ParseError(format!("unexpected character '{}'", c as char))),
        }
    }

    fn expect_op(&mut self, op: char) -> Result<(), ParseError> {
        match self.next()? {
            Tok::Op(c) if c == op => Ok(()),
            t => Err(ParseError(format!("expected '{op}', found {t:?}"))),
        }
    }
}

/// Parse an element literal in the given field.
pub fn parse_elem(field: &Field, input: &str) -> Result<Elem, ParseError> {
    let mut lx = Lexer::new(input);
    let v = parse_expr(field, &mut lx)?;
    match lx.next()? {
        Tok::End => Ok(v),
        t => Err(ParseError(format!("trailing input at {t:?}"))),
    }
}

fn parse_expr(field: &Field, lx: &mut Lexer) -> Result<Elem, ParseError> {
    let mut acc = parse_term(field, lx)?;
    loop {
        match lx.peek()? {
            Tok::Op('+') => {
                lx.next()?;
                acc = acc.add(&parse_term(field, lx)?);
            }
            Tok::Op('-') => {
                lx.next()?;
                acc = acc.sub(&parse_term(field, lx)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(field: &Field, lx: &mut Lexer) -> Result<Elem, ParseError> {
    let mut acc = parse_factor(field, lx)?;
    loop {
        match lx.peek()? {
            Tok::Op('*') => {
                lx.next()?;
                acc = acc.mul(&parse_factor(field, lx)?);
            }
            Tok::Op('/') => {
                lx.next()?;
                let rhs = parse_factor(field, lx)?;
                if rhs.is_zero() {
                    return Err(ParseError("division by zero".to_string()));
                }
                acc = acc.div(&rhs);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(field: &Field, lx: &mut Lexer) -> Result<Elem, ParseError> {
    match lx.peek()? {
        Tok::Op('-') => {
            lx.next()?;
            Ok(parse_factor(field, lx)?.neg())
        }
        Tok::Op('+') => {
            lx.next()?;
            parse_factor(field, lx)
        }
        _ => {
            let base = parse_primary(field, lx)?;
            if lx.peek()? == Tok::Op('^') {
                lx.next()?;
                let exp = parse_signed_int(lx)?;
                if base.is_zero() && exp < 0 {
                    return Err(ParseError("zero to a negative power".to_string()));
                }
                Ok(base.pow(exp))
            } else {
                Ok(base)
            }
        }
    }
}

fn parse_signed_int(lx: &mut Lexer) -> Result<i64, ParseError> {
    match lx.next()? {
        Tok::Int(n) => Ok(n),
        Tok::Op('-') => match lx.next()? {
            Tok::Int(n) => Ok(-n),
            t => Err(ParseError(format!("expected integer exponent, found {t:?}"))),
        },
        t => Err(ParseError(format!("expected integer exponent, found {t:?}"))),
    }
}

fn parse_primary(field: &Field, lx: &mut Lexer) -> Result<Elem, ParseError> {
    match lx.next()? {
        Tok::Int(n) => Ok(field.int(n)),
        Tok::Op('(') => {
            let v = parse_expr(field, lx)?;
            lx.expect_op(')')?;
            Ok(v)
        }
        Tok::Ident(id) => match id.as_str() {
            "pi" => Ok(field.pi),
            "Delta" | "delta" => Ok(field.delta),
            "sqrt" => {
                lx.expect_op('(')?;
                let d = parse_signed_int(lx)?;
                lx.expect_op(')')?;
                sqrt_of_int(field, d)
            }
            other => Err(ParseError(format!("unknown identifier '{other}'"))),
        },
        t => Err(ParseError(format!("unexpected token {t:?}"))),
    }
}

/// √d as an element: exact for perfect squares and for d whose squarefree
/// part matches the field's defining radicand.
fn sqrt_of_int(field: &Field, d: i64) -> Result<Elem, ParseError> {
    if d == 0 {
        return Ok(field.zero());
    }
    let mut m = d.unsigned_abs();
    let mut root: i64 = 1;
    let mut p: u64 = 2;
    let mut rest: i64 = if d < 0 { -1 } else { 1 };
    while p * p <= m {
        let mut cnt = 0u32;
        while m % p == 0 {
            m /= p;
            cnt += 1;
        }
        root *= (p as i64).pow(cnt / 2);
        if cnt % 2 == 1 {
            rest *= p as i64;
        }
        p += 1;
    }
    rest *= m as i64;
    if rest == 1 {
        return Ok(field.int(root));
    }
    let field_d = match field.core.kind {
        FieldKind::Unramified { d } | FieldKind::Ramified { d } => Some(d),
        FieldKind::Q2 => None,
    };
    if field_d == Some(rest) {
        Ok(field.int(root).mul(&Elem::sqrt_gen(field.core)))
    } else {
        Err(ParseError(format!(
            "sqrt({d}) is not representable in {}",
            field.name
        )))
    }
}

/// Resolve a field name (`q2`, `q2(sqrt(d))`, also `q2(sqrtd)`) to its
/// normalized kind.
pub(crate) fn field_kind_of_name(input: &str) -> Result<FieldKind, ParseError> {
    let s: String = input
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    if s == "q2" {
        return Ok(FieldKind::Q2);
    }
    let inner = s
        .strip_prefix("q2(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| ParseError(format!("unrecognized field '{input}'")))?;
    let dtxt = inner
        .strip_prefix("sqrt")
        .ok_or_else(|| ParseError(format!("unrecognized field '{input}'")))?;
    let dtxt = dtxt
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(dtxt);
    let d: i64 = dtxt
        .parse()
        .map_err(|_| ParseError(format!("bad radicand in field '{input}'")))?;
    let d = super::field::squarefree_part(d)
        .ok_or_else(|| ParseError(format!("sqrt({d}) is rational; not a quadratic extension")))?;
    super::field::classify_quadratic(d).map_err(|e| ParseError(e.to_string()))
}

/// Parse a field name into a freshly built [`Field`].
pub fn parse_field(input: &str) -> Result<Field, ParseError> {
    let kind = field_kind_of_name(input)?;
    Field::new(kind, None).map_err(|e| ParseError(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_grammar() {
        let f = Field::q2();
        assert_eq!(parse_elem(&f, "-1/2").unwrap(), f.int(-1).div(&f.int(2)));
        assert_eq!(parse_elem(&f, "Delta*pi^-1").unwrap(), f.delta.div(&f.pi));
        assert_eq!(parse_elem(&f, "1/2^2").unwrap(), f.int(1).div(&f.int(4)));
        assert_eq!(parse_elem(&f, "2^3-1").unwrap(), f.int(7));
        assert_eq!(parse_elem(&f, "sqrt(9)").unwrap(), f.int(3));
        assert!(parse_elem(&f, "sqrt(2)").is_err());
        assert!(parse_elem(&f, "1+").is_err());
        assert!(parse_elem(&f, "bogus").is_err());
    }

    #[test]
    fn quadratic_elements() {
        let f = Field::quadratic(2).unwrap();
        let x = parse_elem(&f, "2+sqrt(2)").unwrap();
        assert_eq!(x.ord(), Some(1));
        assert_eq!(parse_elem(&f, "sqrt(8)").unwrap(), f.int(2).mul(&f.pi));
        let y = parse_elem(&f, "(5+3*sqrt(2))/3").unwrap();
        assert_eq!(y.mul(&f.int(3)), parse_elem(&f, "5+3*sqrt(2)").unwrap());
        let f5 = Field::quadratic(5).unwrap();
        let z = parse_elem(&f5, "(5+sqrt(5))/2").unwrap();
        assert_eq!(z.ord(), Some(0));
    }

    #[test]
    fn field_names() {
        assert_eq!(parse_field("q2").unwrap().name, "q2");
        assert_eq!(parse_field("Q2(sqrt2)").unwrap().name, "q2(sqrt(2))");
        assert_eq!(parse_field("q2(sqrt(-1))").unwrap().name, "q2(sqrt(-1))");
        assert_eq!(parse_field("q2(sqrt(12))").unwrap().name, "q2(sqrt(3))");
        assert!(parse_field("q3").is_err());
        assert!(parse_field("q2(sqrt(4))").is_err());
    }

    #[test]
    fn display_reparse_roundtrip() {
        let f = Field::quadratic(2).unwrap();
        for s in ["2+sqrt(2)", "-1/2", "Delta*pi^-1", "(5+3*sqrt(2))/3", "pi^3"] {
            let x = parse_elem(&f, s).unwrap();
            let y = parse_elem(&f, &x.to_string()).unwrap();
            assert_eq!(x, y, "roundtrip failed for {s} printed as {x}");
        }
        let f5 = Field::quadratic(5).unwrap();
        for s in ["(5+sqrt(5))/2", "1+2*sqrt(5)", "7/3"] {
            let x = parse_elem(&f5, s).unwrap();
            let y = parse_elem(&f5, &x.to_string()).unwrap();
            assert_eq!(x, y, "roundtrip failed for {s} printed as {x}");
        }
    }
}
